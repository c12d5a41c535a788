use std::f64::consts::PI;

use crate::{Error, Result};

/// Semicircle density `√(4 − x²) / (2π)` on `[−2, 2]`.
pub fn semicircle_density(x: f64) -> f64 {
    if x.abs() >= 2.0 {
        0.0
    } else {
        (4.0 - x * x).sqrt() / (2.0 * PI)
    }
}

/// Semicircle CDF from the closed-form antiderivative
/// `F(x) = (x√(4 − x²)/2 + 2 asin(x/2)) / (2π)`, `F(−2) = −1/2`.
pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        return 0.0;
    }
    if x >= 2.0 {
        return 1.0;
    }
    antiderivative(x) + 0.5
}

fn antiderivative(x: f64) -> f64 {
    (x * (4.0 - x * x).sqrt() / 2.0 + 2.0 * (x / 2.0).asin()) / (2.0 * PI)
}

/// `ξ*(δ)`: the point whose upper semicircle tail has mass `δ`.
pub fn semicircle_quantile(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("tail mass δ = {delta} must lie in (0, 1)")));
    }
    let tail = |x: f64| 1.0 - semicircle_cdf(x);
    let (mut lo, mut hi) = (-2.0f64, 2.0f64);
    // tail is decreasing: tail(lo) = 1 > δ > 0 = tail(hi).
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
