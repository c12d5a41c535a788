use rand_distr::{Distribution, StandardNormal};

use crate::matrix::{dot, SymDense};
use crate::rng::rng_from_seed;
use crate::{Error, Result};

/// Tolerance on `‖σ_i‖₂ = 1` accepted when a factor is built from raw data.
pub const ROW_NORM_TOL: f64 = 1e-12;

/// `n × k` matrix with unit-norm rows; `X = σσᵀ` lies on the elliptope.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereFactor {
    n: usize,
    k: usize,
    data: Vec<f64>,
}

impl SphereFactor {
    /// Wrap row-major data, checking every row has unit norm.
    pub fn new(n: usize, k: usize, data: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("factor rank k must be >= 1"));
        }
        if data.len() != n * k {
            return Err(Error::DimensionMismatch {
                expected: n * k,
                got: data.len(),
            });
        }
        for (i, row) in data.chunks_exact(k).enumerate() {
            let norm = dot(row, row).sqrt();
            if (norm - 1.0).abs() > ROW_NORM_TOL {
                return Err(Error::invalid(format!("row {i} has norm {norm}, expected 1")));
            }
        }
        Ok(SphereFactor { n, k, data })
    }

    /// Normalize each row of `data`; a zero row is an error.
    pub fn from_rows_normalized(n: usize, k: usize, mut data: Vec<f64>) -> Result<Self> {
        if k == 0 || data.len() != n * k {
            return Err(Error::DimensionMismatch {
                expected: n * k.max(1),
                got: data.len(),
            });
        }
        for (i, row) in data.chunks_exact_mut(k).enumerate() {
            let norm = dot(row, row).sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::invalid(format!("row {i} cannot be normalized (norm {norm})")));
            }
            row.iter_mut().for_each(|v| *v /= norm);
        }
        Ok(SphereFactor { n, k, data })
    }

    pub(crate) fn from_parts_unchecked(n: usize, k: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * k);
        SphereFactor { n, k, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.k..(i + 1) * self.k]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.k..(i + 1) * self.k]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Column `c` of σ.
    pub fn column(&self, c: usize) -> Vec<f64> {
        self.data.iter().skip(c).step_by(self.k).copied().collect()
    }

    /// `max_i |‖σ_i‖₂ − 1|`.
    pub fn max_row_norm_error(&self) -> f64 {
        self.data
            .chunks_exact(self.k)
            .map(|r| (dot(r, r).sqrt() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Same points in `R^{k_new}`, padding with zero coordinates.
    pub fn embed(&self, k_new: usize) -> Result<Self> {
        if k_new < self.k {
            return Err(Error::invalid(format!("cannot embed rank {} into rank {k_new}", self.k)));
        }
        let mut data = vec![0.0; self.n * k_new];
        for i in 0..self.n {
            data[i * k_new..i * k_new + self.k].copy_from_slice(self.row(i));
        }
        Ok(SphereFactor {
            n: self.n,
            k: k_new,
            data,
        })
    }

    /// Multiply row `i` by `signs[i]` (entries ±1).
    pub fn with_row_signs(&self, signs: &[f64]) -> Self {
        let mut out = self.clone();
        for (i, &s) in signs.iter().enumerate() {
            out.row_mut(i).iter_mut().for_each(|v| *v *= s);
        }
        out
    }

    /// Row `i` of the result is row `perm⁻¹(i)` of `self`, i.e. vertex `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut data = vec![0.0; self.data.len()];
        for (i, &p) in perm.iter().enumerate() {
            data[p * self.k..(p + 1) * self.k].copy_from_slice(self.row(i));
        }
        SphereFactor {
            n: self.n,
            k: self.k,
            data,
        }
    }

    /// Dense `X = σσᵀ`.
    pub fn gram(&self) -> Result<SymDense> {
        SymDense::from_fn(self.n, |i, j| dot(self.row(i), self.row(j)))
    }
}

/// Rows i.i.d. uniform on `S^{k-1}` (normalized Gaussians).
pub fn init_factor(n: usize, k: usize, seed: u64) -> Result<SphereFactor> {
    if k == 0 {
        return Err(Error::invalid("factor rank k must be >= 1"));
    }
    let mut rng = rng_from_seed(seed);
    let mut data = vec![0.0; n * k];
    for row in data.chunks_exact_mut(k) {
        loop {
            for v in row.iter_mut() {
                *v = StandardNormal.sample(&mut rng);
            }
            let norm = dot(row, row).sqrt();
            if norm > 0.0 {
                row.iter_mut().for_each(|v| *v /= norm);
                break;
            }
        }
    }
    Ok(SphereFactor { n, k, data })
}
