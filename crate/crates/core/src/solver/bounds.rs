use crate::{Error, Result};

/// `2Lε√k + (k/β)·ln(C/ε)`: bound on the gap between the zero-temperature
/// value and the free energy at inverse temperature `β`, for a Lipschitz
/// constant `L` and an absolute constant `C`.
pub fn zero_temp_gap_bound(l: f64, k: usize, beta: f64, eps: f64, c: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0, 1], got {eps}")));
    }
    if !(beta > 0.0) {
        return Err(Error::invalid(format!("beta must be > 0, got {beta}")));
    }
    if !(c > 0.0) {
        return Err(Error::invalid(format!("C must be > 0, got {c}")));
    }
    let k = k as f64;
    Ok(2.0 * l * eps * k.sqrt() + k / beta * (c / eps).ln())
}

/// `2β²/√d + 8λ^{1/2}/d^{1/4}`: interpolation error between the graph and
/// Gaussian free energies at average degree `d`.
pub fn interpolation_gap_bound(beta: f64, d: f64, lambda: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::invalid(format!("d must be > 0, got {d}")));
    }
    if !(lambda >= 0.0) {
        return Err(Error::invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    Ok(2.0 * beta * beta / d.sqrt() + 8.0 * lambda.sqrt() / d.powf(0.25))
}
