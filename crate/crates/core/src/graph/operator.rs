use super::SparseGraph;
use crate::matrix::SymDense;
use crate::{Error, Result};

/// Implicit `M = scale · (A_G − (d/n) 11ᵀ)`.
///
/// The diagonal is `−scale·d/n` unless overridden with
/// [`CenteredOperator::with_diagonal`]; the override only changes the
/// constant `Σ_i M_ii` contribution to elliptope objectives.
#[derive(Clone, Debug)]
pub struct CenteredOperator<'g> {
    graph: &'g SparseGraph,
    d: f64,
    scale: f64,
    diagonal: Option<f64>,
}

impl<'g> CenteredOperator<'g> {
    pub fn new(graph: &'g SparseGraph, d: f64, scale: f64) -> Result<Self> {
        if !(d >= 0.0 && d.is_finite()) {
            return Err(Error::invalid(format!("centering degree d = {d} must be >= 0")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::invalid(format!("scale = {scale} must be > 0")));
        }
        Ok(CenteredOperator {
            graph,
            d,
            scale,
            diagonal: None,
        })
    }

    /// Operator normalized by `1/√d`.
    pub fn normalized(graph: &'g SparseGraph, d: f64) -> Result<Self> {
        if !(d > 0.0) {
            return Err(Error::invalid(format!("normalization needs d > 0, got {d}")));
        }
        Self::new(graph, d, 1.0 / d.sqrt())
    }

    pub fn with_diagonal(mut self, value: f64) -> Self {
        self.diagonal = Some(value);
        self
    }

    pub fn graph(&self) -> &'g SparseGraph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Weight of the rank-one term: `scale · d / n`.
    pub fn rank_one_weight(&self) -> f64 {
        self.scale * self.d / self.n() as f64
    }

    pub fn diagonal(&self) -> f64 {
        self.diagonal.unwrap_or(-self.rank_one_weight())
    }

    /// `y = M x` in `O(|E| + n)`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let w = self.rank_one_weight();
        let total: f64 = x.iter().sum();
        let diag_fix = self.diagonal() + w;
        for (i, yi) in y.iter_mut().enumerate() {
            let nb: f64 = self.graph.neighbors(i).iter().map(|&j| x[j]).sum();
            *yi = self.scale * nb - w * total + diag_fix * x[i];
        }
    }

    /// Dense copy, for spectral diagnostics and small-instance checks.
    pub fn to_dense(&self) -> Result<SymDense> {
        let n = self.n();
        let mut m = SymDense::zeros(n)?;
        let w = self.rank_one_weight();
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, -w);
            }
            m.set(i, i, self.diagonal());
        }
        for &(u, v) in self.graph.edges() {
            m.set(u, v, self.scale - w);
        }
        Ok(m)
    }
}
