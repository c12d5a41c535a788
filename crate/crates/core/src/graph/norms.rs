use super::SparseGraph;
use crate::matrix::SymDense;
use crate::{Error, Result};

/// Largest dimension accepted by [`inf_to_two_norm_exact`] (2ⁿ corners).
pub const INF_TO_TWO_MAX_N: usize = 22;

/// `Σ_i deg(i)²`, which upper-bounds `‖A_G‖²_{∞→2}`.
pub fn degree_second_moment(g: &SparseGraph) -> f64 {
    (0..g.n()).map(|i| (g.degree(i) as f64).powi(2)).sum()
}

/// `max_{σ ∈ {±1}ⁿ} ‖M σ‖₂`, the exact `∞→2` norm.
///
/// `x ↦ ‖Mx‖₂` is convex, so its maximum over the cube is attained at a
/// corner. Corners are visited in Gray-code order with an `O(n)` update of
/// `Mσ` per step.
pub fn inf_to_two_norm_exact(m: &SymDense) -> Result<f64> {
    let n = m.n();
    if n > INF_TO_TWO_MAX_N {
        return Err(Error::SizeLimit {
            what: "dimension for corner enumeration",
            got: n,
            limit: INF_TO_TWO_MAX_N,
        });
    }
    let mut sigma = vec![1.0f64; n];
    let mut y = vec![0.0; n];
    m.apply(&sigma, &mut y);
    let mut best = y.iter().map(|v| v * v).sum::<f64>();
    for step in 1u64..(1u64 << n) {
        let flip = step.trailing_zeros() as usize;
        let delta = -2.0 * sigma[flip];
        sigma[flip] = -sigma[flip];
        let col = m.row(flip);
        let mut norm2 = 0.0;
        for (yi, &c) in y.iter_mut().zip(col) {
            *yi += delta * c;
            norm2 += *yi * *yi;
        }
        if norm2 > best {
            best = norm2;
        }
    }
    Ok(best.sqrt())
}
