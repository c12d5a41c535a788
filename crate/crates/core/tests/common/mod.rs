//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use elliptope::detection::threshold_family;
use elliptope::graph::SparseGraph;
use elliptope::matrix::SymDense;
use nalgebra::{DMatrix, DVector};

/// Primal and dual values bracketing `max <M, X>` over `X ⪰ 0, diag X = 1`.
#[derive(Clone, Copy, Debug)]
pub struct SdpReference {
    pub primal: f64,
    pub dual: f64,
}

impl SdpReference {
    pub fn value(&self) -> f64 {
        0.5 * (self.primal + self.dual)
    }
}

fn to_na(m: &SymDense) -> DMatrix<f64> {
    DMatrix::from_fn(m.n(), m.n(), |i, j| m.get(i, j))
}

fn is_pd(m: &DMatrix<f64>) -> bool {
    m.clone().cholesky().is_some()
}

fn max_step(base: &DMatrix<f64>, dir: &DMatrix<f64>) -> f64 {
    let mut alpha = 1.0;
    while !is_pd(&(base + dir * alpha)) {
        alpha *= 0.8;
        if alpha < 1e-14 {
            return 0.0;
        }
    }
    if alpha < 1.0 {
        alpha * 0.95
    } else {
        alpha
    }
}

/// Primal-dual interior point (HRVW direction) for the elliptope SDP.
///
/// Dual: `min Σ y_i` subject to `Z = Diag(y) − M ⪰ 0`. Iterates until the
/// duality gap `<Z, X>` drops below `1e-11 · (1 + |primal|)`.
pub fn sdp_reference(m: &SymDense) -> SdpReference {
    let n = m.n();
    let l = to_na(m);
    let mut x = DMatrix::<f64>::identity(n, n);
    let mut y = DVector::from_fn(n, |i, _| 1.1 * (0..n).map(|j| l[(i, j)].abs()).sum::<f64>() + 1.0);
    let mut z = DMatrix::from_diagonal(&y) - &l;
    let mut mu = z.dot(&x) / (2.0 * n as f64);
    for _ in 0..500 {
        let gap = z.dot(&x);
        let primal = l.dot(&x);
        if gap < 1e-11 * (1.0 + primal.abs()) {
            break;
        }
        let zi = z.clone().try_inverse().expect("Z stays positive definite");
        let lhs = zi.component_mul(&x);
        let rhs = DVector::from_fn(n, |i, _| mu * zi[(i, i)] - 1.0);
        let dy = lhs.lu().solve(&rhs).expect("Schur complement is nonsingular");
        let mut dx = -(&zi * DMatrix::from_diagonal(&dy) * &x) + &zi * mu - &x;
        dx = (&dx + dx.transpose()) * 0.5;
        let dz = DMatrix::from_diagonal(&dy);
        let ap = max_step(&x, &dx);
        let ad = max_step(&z, &dz);
        x += dx * ap;
        // Restore the unit diagonal exactly lost to rounding.
        for i in 0..n {
            x[(i, i)] = 1.0;
        }
        y += dy * ad;
        z = DMatrix::from_diagonal(&y) - &l;
        mu = z.dot(&x) / (2.0 * n as f64);
        if ap + ad > 1.9 {
            mu /= 5.0;
        } else if ap + ad > 1.6 {
            mu /= 2.0;
        }
    }
    SdpReference {
        primal: l.dot(&x),
        dual: y.sum(),
    }
}

/// `max_{x ∈ {±1}ⁿ} xᵀMx` by enumeration (`OPT_1`).
pub fn opt1_brute_force(m: &SymDense) -> f64 {
    let n = m.n();
    assert!(n <= 20);
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << n) {
        let x: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
        let mut v = 0.0;
        for i in 0..n {
            for j in 0..n {
                v += m.get(i, j) * x[i] * x[j];
            }
        }
        best = best.max(v);
    }
    best
}

/// Symmetric matrix with entries uniform in `[-1, 1]`.
pub fn random_symmetric(n: usize, seed: u64) -> SymDense {
    use rand::Rng;
    let mut rng = elliptope::rng::rng_from_seed(seed);
    SymDense::from_fn(n, |_, _| rng.random_range(-1.0..=1.0)).unwrap()
}

/// `<x, A x>` of a ±1/0 vector by direct double sum over adjacency.
pub fn quadratic_form_direct(g: &SparseGraph, x: &[i8]) -> i64 {
    let mut total = 0i64;
    for u in 0..g.n() {
        for &v in g.neighbors(u) {
            total += i64::from(x[u]) * i64::from(x[v]);
        }
    }
    total
}

/// Score every (i, j) directly; ties resolved as the estimator documents:
/// earliest vector, then larger threshold, then smallest coordinate.
pub fn select_brute_force(vectors: &[Vec<f64>], g2: &SparseGraph) -> (usize, usize, i64) {
    let mut best: Option<(usize, usize, i64, f64)> = None;
    for (i, v) in vectors.iter().enumerate() {
        for j in 0..v.len() {
            let score = quadratic_form_direct(g2, &threshold_family(v, j));
            let t = v[j].abs();
            let better = match best {
                None => true,
                Some((bi, bj, bs, bt)) => {
                    score > bs || (score == bs && bi == i && (t > bt || (t == bt && j < bj)))
                }
            };
            if better {
                best = Some((i, j, score, t));
            }
        }
    }
    let (i, j, s, _) = best.unwrap();
    (i, j, s)
}
