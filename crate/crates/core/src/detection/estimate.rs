use rand::Rng;
use serde::{Deserialize, Serialize};

use super::estimate_d;
use crate::graph::{CenteredOperator, Labels, SparseGraph};
use crate::matrix::{eig_sym, SymDense};
use crate::rng::{derive_seed, rng_from_seed};
use crate::solver::{opt_k, SolverParams, SphereFactor};
use crate::{Error, Result};

/// Probability `δ_n / (1 + δ_n)`, `δ_n = n^{-1/2}`, that an edge goes to `G₂`.
pub fn split_probability(n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let dn = 1.0 / (n as f64).sqrt();
    dn / (1.0 + dn)
}

/// Partition the edges of `g` into `(G₁, G₂)`, sending each edge to `G₂`
/// independently with probability [`split_probability`].
pub fn split_edges(g: &SparseGraph, seed: u64) -> (SparseGraph, SparseGraph) {
    let p = split_probability(g.n());
    let mut rng = rng_from_seed(seed);
    let (mut e1, mut e2) = (Vec::new(), Vec::new());
    for &e in g.edges() {
        if rng.random_bool(p) {
            e2.push(e);
        } else {
            e1.push(e);
        }
    }
    let build = |edges: Vec<(usize, usize)>| SparseGraph::from_edges(g.n(), edges).expect("subset of a valid graph");
    (build(e1), build(e2))
}

/// Nonzero eigenpairs of `X = σσᵀ`, largest first, without forming `X`.
///
/// The eigenpairs `(μ, w)` of the `k × k` Gram matrix `σᵀσ` map to
/// `(μ, σw / √μ)`. Eigenvalues below `1e-10 · n` are treated as zero.
pub fn factor_eigvectors(f: &SphereFactor) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let (n, k) = (f.n(), f.k());
    let mut gram = SymDense::zeros(k)?;
    for i in 0..n {
        let row = f.row(i);
        for a in 0..k {
            for b in a..k {
                let v = gram.get(a, b) + row[a] * row[b];
                gram.set(a, b, v);
            }
        }
    }
    let spec = eig_sym(&gram)?;
    let cutoff = 1e-10 * n.max(1) as f64;
    let mut values = Vec::new();
    let mut vectors = Vec::new();
    for (c, &mu) in spec.values().iter().enumerate() {
        if mu <= cutoff {
            break;
        }
        let w = spec.vector(c);
        let s = 1.0 / mu.sqrt();
        vectors.push((0..n).map(|i| s * crate::matrix::dot(f.row(i), w)).collect());
        values.push(mu);
    }
    Ok((values, vectors))
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// `x_ℓ = sign(v_ℓ)` where `|v_ℓ| ≥ |v_j|`, else 0.
pub fn threshold_family(v: &[f64], j: usize) -> Vec<i8> {
    let t = v[j].abs();
    v.iter().map(|&x| if x.abs() >= t { sign(x) } else { 0 }).collect()
}

/// Best thresholded sign vector over a family of eigenvectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    /// Index of the eigenvector.
    pub vector: usize,
    /// Coordinate whose magnitude sets the threshold.
    pub coordinate: usize,
    /// `<x̂, A_{G₂} x̂>`.
    pub score: i64,
    pub xhat: Vec<i8>,
}

/// Maximize `<x̂^{(i,j)}, A_{G₂} x̂^{(i,j)}>` over every eigenvector `i` and
/// threshold coordinate `j`.
///
/// Each eigenvector is swept once with coordinates sorted by decreasing
/// `|v|`, updating the quadratic form as coordinates switch on; only
/// distinct thresholds are scored. Ties keep the earliest eigenvector, then
/// the larger threshold, and the pair reports the smallest coordinate
/// attaining that threshold.
pub fn select_candidate(vectors: &[Vec<f64>], g2: &SparseGraph) -> Result<Candidate> {
    if vectors.is_empty() {
        return Err(Error::invalid("select_candidate needs at least one vector"));
    }
    let n = g2.n();
    let mut best: Option<(usize, usize, i64)> = None;
    let mut x = vec![0i8; n];
    let mut order: Vec<usize> = (0..n).collect();
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        x.fill(0);
        order.sort_by(|&a, &b| v[b].abs().total_cmp(&v[a].abs()).then(a.cmp(&b)));
        let mut score = 0i64;
        let mut pos = 0;
        while pos < n {
            let t = v[order[pos]].abs();
            let first = order[pos];
            while pos < n && v[order[pos]].abs() == t {
                let l = order[pos];
                let s = sign(v[l]);
                let field: i64 = g2.neighbors(l).iter().map(|&m| i64::from(x[m])).sum();
                score += 2 * i64::from(s) * field;
                x[l] = s;
                pos += 1;
            }
            if best.is_none_or(|(_, _, b)| score > b) {
                best = Some((i, first, score));
            }
        }
    }
    let (vector, coordinate, score) = best.expect("n >= 1 yields a candidate");
    Ok(Candidate {
        vector,
        coordinate,
        score,
        xhat: threshold_family(&vectors[vector], coordinate),
    })
}

/// `|<x̂, x₀>| / n` against two-community labels.
pub fn overlap(xhat: &[i8], labels: &Labels) -> Result<f64> {
    let x0 = labels.to_pm1()?;
    if x0.len() != xhat.len() {
        return Err(Error::DimensionMismatch {
            expected: x0.len(),
            got: xhat.len(),
        });
    }
    if xhat.is_empty() {
        return Ok(0.0);
    }
    let s: f64 = xhat.iter().zip(&x0).map(|(&a, &b)| f64::from(a) * b).sum();
    Ok(s.abs() / xhat.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateOptions {
    /// Average degree of the input graph; estimated from `G₁` when `None`.
    pub d: Option<f64>,
    pub solver: SolverParams,
    /// Diagonal of the normalized `A^cen_{G₁}` (e.g. `λ` for `λ√d` before
    /// normalization). It shifts the objective by a constant and does not
    /// change the optimizer.
    pub diagonal: f64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            d: None,
            solver: SolverParams::default(),
            diagonal: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub xhat: Vec<i8>,
    /// `(eigenvector, threshold coordinate)`.
    pub chosen_pair: (usize, usize),
    /// `<x̂, A_{G₂} x̂>`.
    pub score: i64,
    /// Filled when labels are supplied.
    pub overlap: Option<f64>,
    /// Average degree used for `G₁`.
    pub d_used: f64,
    pub k_used: usize,
}

/// Split the edges, solve the rank-`k` problem on `G₁`, and pick the
/// thresholded eigenvector of `σσᵀ` that scores best on `G₂`.
///
/// With a known `d` for `g`, `G₁` is centered at `d / (1 + δ_n)`. The split
/// uses `derive_seed(seed, 0)` and the solver `derive_seed(seed, 1)`.
pub fn estimate_partition(
    g: &SparseGraph,
    opts: &EstimateOptions,
    labels: Option<&Labels>,
    seed: u64,
) -> Result<EstimateResult> {
    let n = g.n();
    if n < 4 {
        return Err(Error::invalid(format!("estimation needs n >= 4, got {n}")));
    }
    let (g1, g2) = split_edges(g, derive_seed(seed, 0));
    let d1 = match opts.d {
        Some(d) => d * (1.0 - split_probability(n)),
        None => estimate_d(&g1),
    };
    if !(d1 > 0.0 && d1.is_finite()) {
        return Err(Error::invalid(format!("G1 has no usable average degree ({d1})")));
    }
    let k = opts.solver.resolved_rank(n);
    let op = CenteredOperator::normalized(&g1, d1)?.with_diagonal(opts.diagonal);
    let sol = opt_k(&op, k, &opts.solver, derive_seed(seed, 1))?;
    let (_, vectors) = factor_eigvectors(&sol.factor)?;
    let cand = select_candidate(&vectors, &g2)?;
    let overlap = labels.map(|l| overlap(&cand.xhat, l)).transpose()?;
    Ok(EstimateResult {
        xhat: cand.xhat,
        chosen_pair: (cand.vector, cand.coordinate),
        score: cand.score,
        overlap,
        d_used: d1,
        k_used: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_er, gen_planted_2};
    use crate::solver::init_factor;

    #[test]
    fn split_is_a_partition() {
        let g = gen_er(500, 8.0, 1).unwrap();
        for seed in 0..5 {
            let (g1, g2) = split_edges(&g, seed);
            assert_eq!(g1.num_edges() + g2.num_edges(), g.num_edges());
            for &(u, v) in g.edges() {
                assert!(g1.has_edge(u, v) != g2.has_edge(u, v));
            }
        }
        assert!((split_probability(10_000) - 0.01 / 1.01).abs() < 1e-15);
    }

    #[test]
    fn split_fraction_is_binomial() {
        let g = gen_er(4000, 20.0, 3).unwrap();
        let p = split_probability(4000);
        let m = g.num_edges() as f64;
        let (_, g2) = split_edges(&g, 9);
        let sd = (m * p * (1.0 - p)).sqrt();
        assert!((g2.num_edges() as f64 - m * p).abs() < 4.0 * sd);
    }

    #[test]
    fn eigvectors_of_rank_one_factor() {
        let n = 10;
        let mut data = vec![0.0; n * 3];
        (0..n).for_each(|i| data[i * 3] = 1.0);
        let f = SphereFactor::new(n, 3, data).unwrap();
        let (vals, vecs) = factor_eigvectors(&f).unwrap();
        assert_eq!(vals.len(), 1);
        assert!((vals[0] - n as f64).abs() < 1e-12);
        let c = 1.0 / (n as f64).sqrt();
        assert!(vecs[0].iter().all(|&v| (v.abs() - c).abs() < 1e-12));
    }

    #[test]
    fn eigvectors_reconstruct_gram() {
        let f = init_factor(40, 6, 7).unwrap();
        let (vals, vecs) = factor_eigvectors(&f).unwrap();
        assert!((vals.iter().sum::<f64>() - 40.0).abs() < 1e-9);
        let x = f.gram().unwrap();
        for i in 0..40 {
            for j in 0..40 {
                let r: f64 = vals.iter().zip(&vecs).map(|(&l, v)| l * v[i] * v[j]).sum();
                assert!((r - x.get(i, j)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(threshold_family(&[0.9, -0.5, 0.1], 1), vec![1, -1, 0]);
        assert_eq!(threshold_family(&[0.9, -0.5, 0.1], 2), vec![1, -1, 1]);
        assert_eq!(threshold_family(&[0.5, -0.9, 0.9], 1), vec![0, -1, 1]);
    }

    #[test]
    fn empty_g2_picks_first_vector_max_entry() {
        let g2 = SparseGraph::empty(4);
        let vs = vec![vec![0.1, -0.7, 0.7, 0.2], vec![1.0, 0.0, 0.0, 0.0]];
        let c = select_candidate(&vs, &g2).unwrap();
        assert_eq!((c.vector, c.coordinate, c.score), (0, 1, 0));
        assert_eq!(c.xhat, vec![0, -1, 1, 0]);
    }

    #[test]
    fn overlap_values() {
        let labels = Labels::new(2, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(overlap(&[1, 1, -1, -1], &labels).unwrap(), 1.0);
        assert_eq!(overlap(&[-1, -1, 1, 1], &labels).unwrap(), 1.0);
        assert_eq!(overlap(&[0, 0, 0, 0], &labels).unwrap(), 0.0);
        assert_eq!(overlap(&[1, 0, 0, 0], &labels).unwrap(), 0.25);
        assert!(overlap(&[1, 1, 1], &labels).is_err());
        assert!(overlap(&[1, 1, 1], &Labels::new(3, vec![0, 1, 2]).unwrap()).is_err());
    }

    #[test]
    fn score_matches_returned_xhat() {
        let (g, labels) = gen_planted_2(400, 16.0, 2.0, 4).unwrap();
        let res = estimate_partition(&g, &EstimateOptions::default(), Some(&labels), 3).unwrap();
        let (_, g2) = split_edges(&g, derive_seed(3, 0));
        assert_eq!(g2.quadratic_form_i8(&res.xhat), res.score);
        assert!(res.overlap.unwrap() > 0.5);
        assert!(estimate_partition(&SparseGraph::empty(3), &EstimateOptions::default(), None, 0).is_err());
    }
}
