use super::SphereFactor;
use crate::graph::CenteredOperator;
use crate::matrix::{axpy, dot, SymDense};
use crate::{Error, Result};

/// Symmetric matrix as seen by the coordinate-ascent solver.
///
/// Besides a matvec, an operator exposes the local field
/// `h_i = Σ_{j≠i} M_ij σ_j` of a factor. Operators with structure (a sparse
/// graph plus a rank-one term) keep a per-solve `Cache` so that a field costs
/// `O(deg(i)·k)` instead of `O(n·k)`.
pub trait SymOperator: Sync {
    type Cache: Send;

    fn dim(&self) -> usize;

    fn diagonal(&self, i: usize) -> f64;

    /// `y = M x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);

    fn init_cache(&self, factor: &SphereFactor) -> Self::Cache;

    /// Write `Σ_{j≠i} M_ij σ_j` into `out` (length `k`).
    fn field(&self, cache: &Self::Cache, factor: &SphereFactor, i: usize, out: &mut [f64]);

    /// Row `i` changed from `old` to `new`.
    fn row_updated(&self, cache: &mut Self::Cache, i: usize, old: &[f64], new: &[f64]);
}

/// `Σ_ij M_ij <σ_i, σ_j> = Σ_c <σ_c, M σ_c>` over the `k` columns of σ.
pub fn objective<O: SymOperator + ?Sized>(op: &O, factor: &SphereFactor) -> Result<f64> {
    let n = op.dim();
    if factor.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: factor.n(),
        });
    }
    let mut y = vec![0.0; n];
    let mut total = 0.0;
    for c in 0..factor.k() {
        let col = factor.column(c);
        op.apply(&col, &mut y);
        total += dot(&col, &y);
    }
    Ok(total)
}

impl SymOperator for SymDense {
    type Cache = ();

    fn dim(&self) -> usize {
        self.n()
    }

    fn diagonal(&self, i: usize) -> f64 {
        self.get(i, i)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        SymDense::apply(self, x, y);
    }

    fn init_cache(&self, _factor: &SphereFactor) {}

    fn field(&self, _cache: &(), factor: &SphereFactor, i: usize, out: &mut [f64]) {
        out.fill(0.0);
        for (j, &mij) in self.row(i).iter().enumerate() {
            if j != i && mij != 0.0 {
                axpy(mij, factor.row(j), out);
            }
        }
    }

    fn row_updated(&self, _cache: &mut (), _i: usize, _old: &[f64], _new: &[f64]) {}
}

/// The cache is the running column sum `s = Σ_j σ_j`, so that
/// `h_i = scale · Σ_{j ∈ N(i)} σ_j − w · (s − σ_i)` with `w = scale·d/n`.
impl SymOperator for CenteredOperator<'_> {
    type Cache = Vec<f64>;

    fn dim(&self) -> usize {
        self.n()
    }

    fn diagonal(&self, _i: usize) -> f64 {
        CenteredOperator::diagonal(self)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        CenteredOperator::apply(self, x, y);
    }

    fn init_cache(&self, factor: &SphereFactor) -> Vec<f64> {
        let mut s = vec![0.0; factor.k()];
        for i in 0..factor.n() {
            axpy(1.0, factor.row(i), &mut s);
        }
        s
    }

    fn field(&self, sum: &Vec<f64>, factor: &SphereFactor, i: usize, out: &mut [f64]) {
        out.fill(0.0);
        for &j in self.graph().neighbors(i) {
            axpy(1.0, factor.row(j), out);
        }
        let w = self.rank_one_weight();
        let scale = self.scale();
        for ((o, &s), &si) in out.iter_mut().zip(sum).zip(factor.row(i)) {
            *o = scale * *o - w * (s - si);
        }
    }

    fn row_updated(&self, sum: &mut Vec<f64>, _i: usize, old: &[f64], new: &[f64]) {
        for ((s, &o), &nv) in sum.iter_mut().zip(old).zip(new) {
            *s += nv - o;
        }
    }
}

/// `−M` for any operator `M`.
#[derive(Clone, Copy, Debug)]
pub struct Negated<'a, O: ?Sized>(pub &'a O);

impl<O: SymOperator + ?Sized> SymOperator for Negated<'_, O> {
    type Cache = O::Cache;

    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn diagonal(&self, i: usize) -> f64 {
        -self.0.diagonal(i)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.0.apply(x, y);
        y.iter_mut().for_each(|v| *v = -*v);
    }

    fn init_cache(&self, factor: &SphereFactor) -> Self::Cache {
        self.0.init_cache(factor)
    }

    fn field(&self, cache: &Self::Cache, factor: &SphereFactor, i: usize, out: &mut [f64]) {
        self.0.field(cache, factor, i, out);
        out.iter_mut().for_each(|v| *v = -*v);
    }

    fn row_updated(&self, cache: &mut Self::Cache, i: usize, old: &[f64], new: &[f64]) {
        self.0.row_updated(cache, i, old, new);
    }
}
