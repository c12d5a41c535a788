//! Dense symmetric eigensolver: Householder tridiagonalization followed by
//! implicit-shift QL, with optional eigenvector accumulation.

use serde::Serialize;

use super::{dot, SymDense};
use crate::{Error, Result};

/// QL sweeps allowed per eigenvalue before giving up.
const MAX_QL_ITERATIONS: usize = 60;

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Spectrum {
    n: usize,
    values: Vec<f64>,
    /// Row `i` holds the eigenvector of `values[i]`.
    vectors: Vec<f64>,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.n..(i + 1) * self.n]
    }

    pub fn largest(&self) -> f64 {
        self.values[0]
    }

    pub fn smallest(&self) -> f64 {
        self.values[self.n - 1]
    }

    /// JSON export `{"eigenvalues": [...]}`.
    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Export<'a> {
            eigenvalues: &'a [f64],
        }
        Ok(serde_json::to_string(&Export {
            eigenvalues: &self.values,
        })?)
    }
}

/// Full eigendecomposition of `m`.
pub fn eig_sym(m: &SymDense) -> Result<Spectrum> {
    let n = m.n();
    if n == 0 {
        return Ok(Spectrum {
            n,
            values: Vec::new(),
            vectors: Vec::new(),
        });
    }
    let mut tri = Tridiagonal::reduce(m);
    let mut zt = identity(n);
    tri.ql(Some(&mut zt))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| tri.diag[b].total_cmp(&tri.diag[a]));
    let values = order.iter().map(|&i| tri.diag[i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &i in &order {
        vectors.extend_from_slice(&zt[i * n..(i + 1) * n]);
    }
    tri.back_transform(&mut vectors);
    Ok(Spectrum { n, values, vectors })
}

/// Eigenvalues only, descending. Roughly a third of the cost of [`eig_sym`].
pub fn eigvals_sym(m: &SymDense) -> Result<Vec<f64>> {
    if m.n() == 0 {
        return Ok(Vec::new());
    }
    let mut tri = Tridiagonal::reduce(m);
    tri.ql(None)?;
    let mut values = tri.diag;
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

fn identity(n: usize) -> Vec<f64> {
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    z
}

struct Tridiagonal {
    n: usize,
    diag: Vec<f64>,
    /// `sub[i]` couples `i - 1` and `i`; `sub[0] = 0`.
    sub: Vec<f64>,
    /// Householder vectors: row `k` holds `v_k` in columns `k+1..n`.
    reflectors: Vec<f64>,
    betas: Vec<f64>,
}

impl Tridiagonal {
    /// `m = Q T Qᵀ` with `Q = H_0 H_1 ⋯ H_{n-3}` and `H_k = I − β_k v_k v_kᵀ`.
    ///
    /// Only the upper triangle of the trailing block is read and updated.
    fn reduce(m: &SymDense) -> Self {
        let n = m.n();
        let mut a = m.as_slice().to_vec();
        let mut diag = vec![0.0; n];
        let mut sub = vec![0.0; n];
        let mut betas = vec![0.0; n];
        let mut p = vec![0.0; n];

        for k in 0..n.saturating_sub(2) {
            diag[k] = a[k * n + k];
            let (head, tail) = a.split_at_mut((k + 1) * n);
            let x = &mut head[k * n + k + 1..(k + 1) * n];
            let norm = dot(x, x).sqrt();
            let tail_norm2 = dot(&x[1..], &x[1..]);
            if tail_norm2 == 0.0 {
                sub[k + 1] = x[0];
                betas[k] = 0.0;
                continue;
            }
            let alpha = if x[0] >= 0.0 { -norm } else { norm };
            x[0] -= alpha;
            let beta = 2.0 / dot(x, x);
            sub[k + 1] = alpha;
            betas[k] = beta;
            let v: &[f64] = x;

            // p = β A₂₂ v, reading the upper triangle of the trailing block.
            let m_len = n - k - 1;
            let p = &mut p[..m_len];
            p.fill(0.0);
            for i in 0..m_len {
                let row = &tail[i * n + k + 1 + i..(i + 1) * n];
                let vi = v[i];
                let mut acc = row[0] * vi;
                for (j, (&aij, &vj)) in row[1..].iter().zip(&v[i + 1..]).enumerate() {
                    acc += aij * vj;
                    p[i + 1 + j] += aij * vi;
                }
                p[i] += acc;
            }
            let mut ptv = 0.0;
            for (pi, vi) in p.iter_mut().zip(v) {
                *pi *= beta;
                ptv += *pi * vi;
            }
            let kk = 0.5 * beta * ptv;
            // w = p − K v, then A₂₂ ← A₂₂ − v wᵀ − w vᵀ on the upper triangle.
            for (pi, vi) in p.iter_mut().zip(v) {
                *pi -= kk * vi;
            }
            let w: &[f64] = p;
            for i in 0..m_len {
                let row = &mut tail[i * n + k + 1 + i..(i + 1) * n];
                let (vi, wi) = (v[i], w[i]);
                for ((aij, &vj), &wj) in row.iter_mut().zip(&v[i..]).zip(&w[i..]) {
                    *aij -= vi * wj + wi * vj;
                }
            }
        }
        if n >= 2 {
            diag[n - 2] = a[(n - 2) * n + n - 2];
            sub[n - 1] = a[(n - 2) * n + n - 1];
        }
        diag[n - 1] = a[(n - 1) * n + n - 1];

        Tridiagonal {
            n,
            diag,
            sub,
            reflectors: a,
            betas,
        }
    }

    /// Implicit QL on `(diag, sub)`. When `zt` is given, its rows (initially
    /// the identity) accumulate the rotations and end as eigenvectors of T.
    fn ql(&mut self, mut zt: Option<&mut Vec<f64>>) -> Result<()> {
        let n = self.n;
        let d = &mut self.diag;
        let mut e = vec![0.0; n];
        e[..n - 1].copy_from_slice(&self.sub[1..]);

        let eps = f64::EPSILON;
        let mut f = 0.0;
        let mut tst1: f64 = 0.0;
        for l in 0..n {
            tst1 = tst1.max(d[l].abs() + e[l].abs());
            let mut m = l;
            while m < n - 1 && e[m].abs() > eps * tst1 {
                m += 1;
            }
            if m > l {
                let mut iter = 0;
                loop {
                    iter += 1;
                    if iter > MAX_QL_ITERATIONS {
                        return Err(Error::NumericalFailure(format!(
                            "QL iteration did not converge for eigenvalue {l}"
                        )));
                    }
                    let g = d[l];
                    let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                    let mut r = p.hypot(1.0);
                    if p < 0.0 {
                        r = -r;
                    }
                    d[l] = e[l] / (p + r);
                    d[l + 1] = e[l] * (p + r);
                    let dl1 = d[l + 1];
                    let h = g - d[l];
                    for di in &mut d[l + 2..] {
                        *di -= h;
                    }
                    f += h;

                    p = d[m];
                    let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                    let el1 = e[l + 1];
                    let (mut s, mut s2) = (0.0, 0.0);
                    for i in (l..m).rev() {
                        c3 = c2;
                        c2 = c;
                        s2 = s;
                        let g = c * e[i];
                        let h = c * p;
                        r = p.hypot(e[i]);
                        e[i + 1] = s * r;
                        s = e[i] / r;
                        c = p / r;
                        p = c * d[i] - s * g;
                        d[i + 1] = h + s * (c * g + s * d[i]);
                        if let Some(z) = zt.as_deref_mut() {
                            let (lo, hi) = z.split_at_mut((i + 1) * n);
                            let zi = &mut lo[i * n..];
                            let zi1 = &mut hi[..n];
                            for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                                let hb = *b;
                                *b = s * *a + c * hb;
                                *a = c * *a - s * hb;
                            }
                        }
                    }
                    p = -s * s2 * c3 * el1 * e[l] / dl1;
                    e[l] = s * p;
                    d[l] = c * p;
                    if e[l].abs() <= eps * tst1 {
                        break;
                    }
                }
            }
            d[l] += f;
            e[l] = 0.0;
        }
        Ok(())
    }

    /// Map eigenvectors of T (rows of `rows`) to eigenvectors of the
    /// original matrix: `rowᵀ ← rowᵀ H_{n-3} ⋯ H_0`.
    fn back_transform(&self, rows: &mut [f64]) {
        let n = self.n;
        for k in (0..n.saturating_sub(2)).rev() {
            let beta = self.betas[k];
            if beta == 0.0 {
                continue;
            }
            let v = &self.reflectors[k * n + k + 1..(k + 1) * n];
            for row in rows.chunks_exact_mut(n) {
                let seg = &mut row[k + 1..];
                let s = beta * dot(seg, v);
                for (x, vi) in seg.iter_mut().zip(v) {
                    *x -= s * vi;
                }
            }
        }
    }
}
