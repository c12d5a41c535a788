//! Dense symmetric matrices, Gaussian ensembles and spectra.

mod eig;
mod ensembles;
mod semicircle;

pub use eig::{eig_sym, eigvals_sym, Spectrum};
pub use ensembles::{bbap_prediction, community_mean_matrix, deformed_goe, deformed_goe_r, sample_goe};
pub use semicircle::{semicircle_cdf, semicircle_density, semicircle_quantile};

use crate::{Error, Result};

/// Largest dimension handled densely.
pub const MAX_DENSE_DIM: usize = 4000;

/// Dense symmetric `n × n` matrix, stored in full row-major form.
///
/// Writes go through [`SymDense::set`], which mirrors every entry, so the
/// two triangles are always identical.
#[derive(Clone, Debug, PartialEq)]
pub struct SymDense {
    n: usize,
    data: Vec<f64>,
}

impl SymDense {
    pub fn zeros(n: usize) -> Result<Self> {
        if n > MAX_DENSE_DIM {
            return Err(Error::SizeLimit {
                what: "dense matrix dimension",
                got: n,
                limit: MAX_DENSE_DIM,
            });
        }
        Ok(SymDense {
            n,
            data: vec![0.0; n * n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        Ok(m)
    }

    /// Fill from `f(i, j)`, called once per `i <= j` in row-major order.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = dot(self.row(i), x);
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius inner product `<self, other>`.
    pub fn inner(&self, other: &SymDense) -> Result<f64> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(dot(&self.data, &other.data))
    }

    pub fn scaled(&self, factor: f64) -> SymDense {
        SymDense {
            n: self.n,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// `D M D` for a diagonal sign (or any diagonal) vector `D`.
    pub fn conjugated(&self, diag: &[f64]) -> SymDense {
        let n = self.n;
        let mut data = self.data.clone();
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] *= diag[i] * diag[j];
            }
        }
        SymDense { n, data }
    }

    /// Binary dump: `n` as little-endian `u64`, then the upper triangle
    /// (`i <= j`, row-major) as little-endian `f64`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.n;
        let mut out = Vec::with_capacity(8 + 8 * n * (n + 1) / 2);
        out.extend_from_slice(&(n as u64).to_le_bytes());
        for i in 0..n {
            for &v in &self.row(i)[i..] {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let header: [u8; 8] = bytes
            .get(..8)
            .and_then(|h| h.try_into().ok())
            .ok_or_else(|| Error::Format("matrix dump shorter than its header".into()))?;
        let n = usize::try_from(u64::from_le_bytes(header))
            .map_err(|_| Error::Format("matrix dimension overflows usize".into()))?;
        if n > MAX_DENSE_DIM {
            return Err(Error::SizeLimit {
                what: "dense matrix dimension",
                got: n,
                limit: MAX_DENSE_DIM,
            });
        }
        let body = &bytes[8..];
        if body.len() != 8 * n * (n + 1) / 2 {
            return Err(Error::Format(format!(
                "matrix dump for n = {n} needs {} payload bytes, got {}",
                8 * n * (n + 1) / 2,
                body.len()
            )));
        }
        let mut values = body
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")));
        Self::from_fn(n, |_, _| values.next().expect("length checked"))
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn symmetric_by_construction() {
        let m = SymDense::from_fn(5, |i, j| (i * 10 + j) as f64).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(m.get(i, j), m.get(j, i));
            }
        }
        assert_eq!(m.get(3, 1), 13.0);
        assert!(SymDense::zeros(MAX_DENSE_DIM + 1).is_err());
    }

    #[test]
    fn binary_layout() {
        let m = SymDense::from_fn(2, |i, j| (1 + i + 2 * j) as f64).unwrap();
        let bytes = m.to_bytes();
        assert_eq!(&bytes[..8], &2u64.to_le_bytes());
        let vals: Vec<f64> = bytes[8..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        assert_eq!(vals, vec![1.0, 3.0, 4.0]);
        assert!(SymDense::from_bytes(&bytes[..20]).is_err());
    }

    proptest! {
        #[test]
        fn binary_round_trip(n in 0usize..12, seed in any::<u64>()) {
            let mut s = seed;
            let m = SymDense::from_fn(n, |_, _| {
                s = crate::rng::splitmix64(s);
                (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            }).unwrap();
            prop_assert_eq!(SymDense::from_bytes(&m.to_bytes()).unwrap(), m);
        }
    }
}
