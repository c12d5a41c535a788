use rand_distr::{Distribution, StandardNormal};

use super::SymDense;
use crate::graph::Labels;
use crate::rng::rng_from_seed;
use crate::{Error, Result};

/// `W ~ GOE(n)`: `W_ii ~ N(0, 2/n)`, `W_ij ~ N(0, 1/n)` for `i < j`.
///
/// Entries are drawn in row-major order of the upper triangle.
///
/// # Panics
/// If `n` exceeds [`super::MAX_DENSE_DIM`].
pub fn sample_goe(n: usize, seed: u64) -> SymDense {
    let mut rng = rng_from_seed(seed);
    let off = (1.0 / n as f64).sqrt();
    let on = (2.0 / n as f64).sqrt();
    SymDense::from_fn(n, |i, j| {
        let z: f64 = StandardNormal.sample(&mut rng);
        if i == j {
            on * z
        } else {
            off * z
        }
    })
    .expect("GOE dimension within dense limit")
}

/// Deformed GOE `B(λ) = (λ/n) 11ᵀ + W`, sharing `W` with `sample_goe(n, seed)`.
pub fn deformed_goe(n: usize, lambda: f64, seed: u64) -> SymDense {
    let mut b = sample_goe(n, seed);
    let shift = lambda / n as f64;
    for i in 0..n {
        for j in i..n {
            let v = b.get(i, j) + shift;
            b.set(i, j, v);
        }
    }
    b
}

/// `B₀(r)`: `(r−1)/n` within a community, `−1/n` across.
pub fn community_mean_matrix(labels: &Labels) -> Result<SymDense> {
    if !labels.is_balanced() {
        return Err(Error::invalid(format!(
            "labels are not balanced over r = {} communities: sizes {:?}",
            labels.r,
            labels.community_sizes()
        )));
    }
    let n = labels.n() as f64;
    let within = (labels.r as f64 - 1.0) / n;
    let across = -1.0 / n;
    let a = &labels.assignment;
    SymDense::from_fn(labels.n(), |i, j| if a[i] == a[j] { within } else { across })
}

/// `B(λ, r) = λ B₀(r) + W`.
pub fn deformed_goe_r(n: usize, r: usize, lambda: f64, labels: &Labels, seed: u64) -> Result<SymDense> {
    if labels.n() != n || labels.r != r {
        return Err(Error::invalid(format!(
            "labels describe n = {}, r = {}; expected n = {n}, r = {r}",
            labels.n(),
            labels.r
        )));
    }
    let b0 = community_mean_matrix(labels)?;
    let mut b = sample_goe(n, seed);
    for i in 0..n {
        for j in i..n {
            let v = b.get(i, j) + lambda * b0.get(i, j);
            b.set(i, j, v);
        }
    }
    Ok(b)
}

/// Limit of `ξ₁(B(λ))`: `2` for `λ <= 1`, `λ + 1/λ` above.
pub fn bbap_prediction(lambda: f64) -> f64 {
    if lambda <= 1.0 {
        2.0
    } else {
        lambda + 1.0 / lambda
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{eig_sym, eigvals_sym};

    #[test]
    fn goe_variances() {
        // Pool the strictly-upper entries of many small draws.
        let n = 6;
        let (mut sum, mut sum2, mut count) = (0.0, 0.0, 0.0);
        let (mut dsum2, mut dcount) = (0.0, 0.0);
        for seed in 0..10_000 {
            let w = sample_goe(n, seed);
            for i in 0..n {
                dsum2 += w.get(i, i).powi(2);
                dcount += 1.0;
                for j in i + 1..n {
                    sum += w.get(i, j);
                    sum2 += w.get(i, j).powi(2);
                    count += 1.0;
                }
            }
        }
        let var = sum2 / count - (sum / count).powi(2);
        assert!((var * n as f64 - 1.0).abs() < 0.05, "off-diagonal variance {var}");
        assert!((dsum2 / dcount * n as f64 - 2.0).abs() < 0.1);
    }

    #[test]
    fn goe_single_entry_and_determinism() {
        let w = sample_goe(1, 5);
        assert_eq!(w.n(), 1);
        assert_eq!(sample_goe(30, 5), sample_goe(30, 5));
        assert_ne!(sample_goe(30, 5), sample_goe(30, 6));
    }

    #[test]
    fn deformation_shares_noise() {
        let n = 50;
        let w = sample_goe(n, 9);
        let b0 = deformed_goe(n, 0.0, 9);
        assert_eq!(w, b0);
        let b = deformed_goe(n, 1.7, 9);
        let shift = 1.7 / n as f64;
        for i in 0..n {
            for j in 0..n {
                // Equal up to the rounding of the single addition.
                let diff = b.get(i, j) - w.get(i, j);
                assert!((diff - shift).abs() <= 2.0 * f64::EPSILON * (w.get(i, j).abs() + shift));
            }
        }
    }

    #[test]
    fn deformed_mean_entry() {
        let n = 300;
        let lambda = 3.0;
        let b = deformed_goe(n, lambda, 4);
        let mut sum = 0.0;
        let mut count = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                sum += b.get(i, j);
                count += 1.0;
            }
        }
        let mean = sum / count;
        let sd = (1.0 / n as f64 / count).sqrt();
        assert!((mean - lambda / n as f64).abs() < 4.0 * sd);
    }

    #[test]
    fn community_matrix_spectrum() {
        for r in [2usize, 3, 4] {
            let n = 12;
            let labels = Labels::new(r, (0..n).map(|i| i % r).collect()).unwrap();
            let b0 = community_mean_matrix(&labels).unwrap();
            let vals = eigvals_sym(&b0).unwrap();
            for (i, v) in vals.iter().enumerate() {
                let want = if i < r - 1 { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-12, "r={r}: {vals:?}");
            }
        }
    }

    #[test]
    fn two_community_matrix_is_rank_one() {
        let n = 10;
        let labels = Labels::new(2, (0..n).map(|i| (i * 7 % 10) % 2).collect()).unwrap();
        let b0 = community_mean_matrix(&labels).unwrap();
        let v: Vec<f64> = labels.to_pm1().unwrap().iter().map(|x| x / (n as f64).sqrt()).collect();
        for i in 0..n {
            for j in 0..n {
                assert!((b0.get(i, j) - v[i] * v[j]).abs() < 1e-15);
            }
        }
        let w = sample_goe(n, 2);
        assert_eq!(deformed_goe_r(n, 2, 0.0, &labels, 2).unwrap(), w);
    }

    #[test]
    fn unbalanced_labels_rejected() {
        let labels = Labels::new(2, vec![0, 0, 0, 1]).unwrap();
        assert!(deformed_goe_r(4, 2, 1.0, &labels, 0).is_err());
    }

    #[test]
    fn bbap_values() {
        assert_eq!(bbap_prediction(0.5), 2.0);
        assert_eq!(bbap_prediction(1.0), 2.0);
        assert_eq!(bbap_prediction(2.0), 2.5);
        assert_eq!(bbap_prediction(0.0), 2.0);
    }

    #[test]
    fn goe_top_eigenvalue_near_edge() {
        let w = sample_goe(400, 12);
        let s = eig_sym(&w).unwrap();
        assert!(s.largest() > 1.8 && s.largest() < 2.2);
    }
}
