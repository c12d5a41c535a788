use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::{opt_k, Negated, SolverParams, SphereFactor, SymOperator};
use crate::matrix::{dot, eigvals_sym, SymDense};
use crate::rng::{derive_seed, rng_from_seed};
use crate::{Error, Result};

/// `α_k = 2Γ((k+1)/2)² / (k Γ(k/2)²)`, increasing from `2/π` at `k = 1` to 1.
pub fn alpha_k(k: usize) -> f64 {
    assert!(k >= 1, "alpha_k needs k >= 1");
    let k = k as f64;
    (2.0 * (ln_gamma((k + 1.0) / 2.0) - ln_gamma(k / 2.0))).exp() * 2.0 / k
}

/// Extreme eigenvalues of the operator, when known.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralBounds {
    pub max: f64,
    pub min: f64,
}

/// Two-sided bracket `lower ≤ SDP(M) ≤ upper` at rank `k`.
///
/// `lower` is the value of an exactly feasible rank-`k` point. `upper` treats
/// the rank-`k` values of `M` and `-M` as `OPT_k` and is therefore as good as
/// the solver; it is exact whenever a spectral bound is tight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
    pub k: usize,
    pub alpha_k: f64,
    /// Rank-`k` value found for `-M`.
    pub lower_neg: f64,
}

impl Sandwich {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Bracket `SDP(M)` from rank-`k` solves of `M` and `-M`.
///
/// With `o⁺ = OPT_k(M)`, `o⁻ = OPT_k(-M)` and `α = α_k`, the inequality
/// `OPT_k(M) ≥ α SDP(M) − (1−α) SDP(−M)` applied to both signs gives
///
/// ```text
/// SDP(±M) ≤ (o^± + (1/α − 1) o^∓) / (2 − 1/α)
/// ```
///
/// and each side is further capped by `n ξ₁(±M)` when `spectral` is given.
/// `M` is solved with `derive_seed(seed, 0)`, `-M` with `derive_seed(seed, 1)`.
pub fn sdp_sandwich<O: SymOperator + ?Sized>(
    op: &O,
    k: usize,
    params: &SolverParams,
    seed: u64,
    spectral: Option<SpectralBounds>,
) -> Result<Sandwich> {
    if k < 2 {
        return Err(Error::invalid(format!("sandwich needs k >= 2, got {k}")));
    }
    let n = op.dim() as f64;
    let pos = opt_k(op, k, params, derive_seed(seed, 0))?.value;
    let neg = opt_k(&Negated(op), k, params, derive_seed(seed, 1))?.value;
    let alpha = alpha_k(k);
    let denom = 2.0 - 1.0 / alpha;
    let upper_pos_bis = (pos + (1.0 / alpha - 1.0) * neg) / denom;
    let mut upper_neg = (neg + (1.0 / alpha - 1.0) * pos) / denom;
    if let Some(s) = spectral {
        upper_neg = upper_neg.min(-n * s.min);
    }
    let mut upper = upper_pos_bis.min((pos + (1.0 - alpha) * upper_neg) / alpha);
    if let Some(s) = spectral {
        upper = upper.min(n * s.max);
    }
    Ok(Sandwich {
        lower: pos,
        upper: upper.max(pos),
        k,
        alpha_k: alpha,
        lower_neg: neg,
    })
}

/// [`sdp_sandwich`] with the spectral caps computed from `m`.
pub fn sdp_sandwich_dense(m: &SymDense, k: usize, params: &SolverParams, seed: u64) -> Result<Sandwich> {
    let spectral = if m.n() == 0 {
        None
    } else {
        let values = eigvals_sym(m)?;
        Some(SpectralBounds {
            max: values[0],
            min: values[values.len() - 1],
        })
    };
    sdp_sandwich(m, k, params, seed, spectral)
}

/// Project a rank-`K` factor to rank `k` through a Gaussian `k × K` matrix
/// `J` with `N(0, 1/k)` entries: `x_i = Jσ_i / ‖Jσ_i‖`.
///
/// `J` is redrawn if any projected row vanishes.
pub fn grothendieck_round(f: &SphereFactor, k: usize, seed: u64) -> Result<SphereFactor> {
    let big_k = f.k();
    if !(k >= 1 && k < big_k) {
        return Err(Error::invalid(format!("need 1 <= k < K, got k = {k}, K = {big_k}")));
    }
    let normal = Normal::new(0.0, (1.0 / k as f64).sqrt()).expect("valid normal");
    let mut rng = rng_from_seed(seed);
    loop {
        let j: Vec<f64> = (0..k * big_k).map(|_| normal.sample(&mut rng)).collect();
        match round_with_projection(f, &j, k) {
            Err(Error::DegenerateProjection { .. }) => continue,
            other => return other,
        }
    }
}

/// Apply a given row-major `k × K` projection `j` and renormalize rows.
pub fn round_with_projection(f: &SphereFactor, j: &[f64], k: usize) -> Result<SphereFactor> {
    let big_k = f.k();
    if k == 0 || j.len() != k * big_k {
        return Err(Error::DimensionMismatch {
            expected: k.max(1) * big_k,
            got: j.len(),
        });
    }
    let mut data = Vec::with_capacity(f.n() * k);
    for i in 0..f.n() {
        let row = f.row(i);
        let start = data.len();
        data.extend(j.chunks_exact(big_k).map(|jr| dot(jr, row)));
        let x = &mut data[start..];
        let norm = dot(x, x).sqrt();
        if !(norm > 0.0) {
            return Err(Error::DegenerateProjection { row: i, norm });
        }
        x.iter_mut().for_each(|v| *v /= norm);
    }
    Ok(SphereFactor::from_parts_unchecked(f.n(), k, data))
}
