use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Geometric};

use super::{Labels, SparseGraph};
use crate::rng::{rng_from_seed, Prng};
use crate::{Error, Result};

/// Maximum number of full restarts of the regular-graph pairing sampler.
pub const REGULAR_RETRY_CAP: usize = 1000;

/// Erdős–Rényi `G(n, d/n)`.
pub fn gen_er(n: usize, d: f64, seed: u64) -> Result<SparseGraph> {
    check_count(n)?;
    check_prob_param("d", d, n)?;
    let mut rng = rng_from_seed(seed);
    let edges = skip_sample(n, d / n as f64, &mut rng, |_, _| true)?;
    SparseGraph::from_edges(n, edges)
}

/// Two-community planted partition `G(n, a/n, b/n)`.
pub fn gen_planted_2(n: usize, a: f64, b: f64, seed: u64) -> Result<(SparseGraph, Labels)> {
    if !n.is_multiple_of(2) {
        return Err(Error::invalid(format!("two-community model needs even n, got {n}")));
    }
    gen_planted_r(n, 2, a, b, seed)
}

/// `r`-community planted partition: balanced random communities, within-community
/// edge probability `a/n`, across `b/n`.
pub fn gen_planted_r(n: usize, r: usize, a: f64, b: f64, seed: u64) -> Result<(SparseGraph, Labels)> {
    check_count(n)?;
    if r < 2 {
        return Err(Error::invalid(format!("need r >= 2 communities, got {r}")));
    }
    if !n.is_multiple_of(r) {
        return Err(Error::invalid(format!("r = {r} does not divide n = {n}")));
    }
    check_prob_param("a", a, n)?;
    check_prob_param("b", b, n)?;

    let mut rng = rng_from_seed(seed);
    let mut assignment: Vec<usize> = (0..n).map(|i| i % r).collect();
    assignment.shuffle(&mut rng);

    let nf = n as f64;
    let (p_in, p_out) = (a / nf, b / nf);
    let p_max = p_in.max(p_out);
    // Sample candidates at the larger rate, then thin each to its own rate.
    let edges = skip_sample(n, p_max, &mut rng, |rng, (u, v)| {
        let p = if assignment[u] == assignment[v] { p_in } else { p_out };
        p >= p_max || rng.random::<f64>() < p / p_max
    })?;
    let graph = SparseGraph::from_edges(n, edges)?;
    Ok((graph, Labels { r, assignment }))
}

/// Random `d`-regular graph on `n` vertices.
///
/// Half-edges are paired uniformly at random; pairs that would form a loop or
/// a multi-edge are returned to the pool and re-paired. When no admissible pair
/// remains the whole construction restarts, at most [`REGULAR_RETRY_CAP`] times.
pub fn gen_regular(n: usize, d: usize, seed: u64) -> Result<SparseGraph> {
    check_count(n)?;
    if d >= n && !(d == 0 && n == 1) {
        return Err(Error::invalid(format!("degree d = {d} must be < n = {n}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(Error::invalid(format!("n * d must be even, got {n} * {d}")));
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..REGULAR_RETRY_CAP {
        if let Some(mut edges) = try_pairing(n, d, &mut rng) {
            edges.sort_unstable();
            return SparseGraph::from_edges(n, edges);
        }
    }
    Err(Error::SamplingFailure(format!(
        "no simple {d}-regular graph on {n} vertices after {REGULAR_RETRY_CAP} restarts"
    )))
}

fn try_pairing(n: usize, d: usize, rng: &mut Prng) -> Option<Vec<(usize, usize)>> {
    let mut present: HashSet<(usize, usize)> = HashSet::with_capacity(n * d / 2);
    let mut edges = Vec::with_capacity(n * d / 2);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();

    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover: BTreeMap<usize, usize> = BTreeMap::new();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u != v && present.insert((u, v)) {
                edges.push((u, v));
            } else {
                *leftover.entry(u).or_default() += 1;
                *leftover.entry(v).or_default() += 1;
            }
        }
        if !leftover.is_empty() && !has_admissible_pair(&leftover, &present) {
            return None;
        }
        stubs = leftover
            .into_iter()
            .flat_map(|(v, count)| std::iter::repeat_n(v, count))
            .collect();
    }
    Some(edges)
}

fn has_admissible_pair(pool: &BTreeMap<usize, usize>, present: &HashSet<(usize, usize)>) -> bool {
    let vertices: Vec<usize> = pool.keys().copied().collect();
    vertices.iter().enumerate().any(|(idx, &u)| {
        vertices[idx + 1..]
            .iter()
            .any(|&v| !present.contains(&(u, v)))
    })
}

/// Visit every unordered pair `u < v` independently with probability `p`
/// using geometric skips, keeping those accepted by `keep`.
fn skip_sample<F>(n: usize, p: f64, rng: &mut Prng, mut keep: F) -> Result<Vec<(usize, usize)>>
where
    F: FnMut(&mut Prng, (usize, usize)) -> bool,
{
    let mut edges = Vec::new();
    if n < 2 || p <= 0.0 {
        return Ok(edges);
    }
    let geo = Geometric::new(p.min(1.0)).map_err(|e| Error::invalid(format!("edge probability {p}: {e}")))?;
    let n64 = n as u64;
    // Position (u, v) in row-major order of the strict upper triangle; start just before (0, 1).
    let (mut u, mut v) = (0u64, 0u64);
    loop {
        let skip = geo.sample(rng);
        v = v.saturating_add(1).saturating_add(skip);
        while v >= n64 && u < n64 - 1 {
            v -= n64;
            u += 1;
            v += u + 1;
        }
        if u >= n64 - 1 {
            break;
        }
        let pair = (u as usize, v as usize);
        if keep(rng, pair) {
            edges.push(pair);
        }
    }
    Ok(edges)
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("graph needs n >= 1"));
    }
    Ok(())
}

fn check_prob_param(name: &str, value: f64, n: usize) -> Result<()> {
    if !(value >= 0.0 && value <= n as f64) {
        return Err(Error::invalid(format!("{name} = {value} must lie in [0, n = {n}]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom_within(count: usize, trials: f64, p: f64, sigmas: f64) -> bool {
        let mean = trials * p;
        let sd = (trials * p * (1.0 - p)).sqrt();
        (count as f64 - mean).abs() <= sigmas * sd
    }

    #[test]
    fn er_edge_cases() {
        assert_eq!(gen_er(100, 0.0, 1).unwrap().num_edges(), 0);
        let k4 = gen_er(4, 4.0, 1).unwrap();
        assert_eq!(k4.num_edges(), 6);
        assert_eq!(gen_er(1, 1.0, 3).unwrap().num_edges(), 0);
        assert!(gen_er(4, 4.5, 1).is_err());
        assert!(gen_er(4, -1.0, 1).is_err());
    }

    #[test]
    fn er_edge_count_is_binomial() {
        let n = 2000usize;
        let g = gen_er(n, 20.0, 5).unwrap();
        let pairs = (n * (n - 1) / 2) as f64;
        assert!(binom_within(g.num_edges(), pairs, 20.0 / n as f64, 4.0));
    }

    #[test]
    fn er_is_deterministic() {
        assert_eq!(gen_er(300, 5.0, 9).unwrap(), gen_er(300, 5.0, 9).unwrap());
        assert_ne!(gen_er(300, 5.0, 9).unwrap(), gen_er(300, 5.0, 10).unwrap());
    }

    #[test]
    fn planted_two_cliques() {
        let (g, labels) = gen_planted_2(10, 10.0, 0.0, 3).unwrap();
        assert_eq!(g.num_edges(), 2 * 10);
        for &(u, v) in g.edges() {
            assert_eq!(labels.assignment[u], labels.assignment[v]);
        }
    }

    #[test]
    fn planted_edge_counts() {
        let n = 2000usize;
        let (a, b) = (20.0, 6.0);
        let (g, labels) = gen_planted_2(n, a, b, 17).unwrap();
        assert!(labels.is_balanced());
        let within = g
            .edges()
            .iter()
            .filter(|&&(u, v)| labels.assignment[u] == labels.assignment[v])
            .count();
        let across = g.num_edges() - within;
        let half = (n / 2) as f64;
        let within_pairs = 2.0 * half * (half - 1.0) / 2.0;
        assert!(binom_within(within, within_pairs, a / n as f64, 4.0));
        assert!(binom_within(across, half * half, b / n as f64, 4.0));
    }

    #[test]
    fn planted_r_mean_degree() {
        let (n, r, a, b) = (1998usize, 3usize, 26.0, 9.0);
        let (g, labels) = gen_planted_r(n, r, a, b, 4).unwrap();
        assert!(labels.is_balanced());
        let m = n / r;
        let within_pairs = (r * m * (m - 1) / 2) as f64;
        let across_pairs = (n * (n - 1) / 2) as f64 - within_pairs;
        let nf = n as f64;
        let mean = within_pairs * a / nf + across_pairs * b / nf;
        let var = within_pairs * (a / nf) * (1.0 - a / nf) + across_pairs * (b / nf) * (1.0 - b / nf);
        assert!((g.num_edges() as f64 - mean).abs() <= 4.0 * var.sqrt());
        // Mean degree target (a + (r-1) b) / r, up to the O(1/n) self-pair correction.
        let avg_deg = 2.0 * g.num_edges() as f64 / nf;
        assert!((avg_deg - (a + 2.0 * b) / 3.0).abs() < 4.0 * 2.0 * var.sqrt() / nf + 0.05);
    }

    #[test]
    fn planted_errors() {
        assert!(gen_planted_2(11, 3.0, 1.0, 0).is_err());
        assert!(gen_planted_r(10, 3, 3.0, 1.0, 0).is_err());
        assert!(gen_planted_r(9, 3, 10.0, 1.0, 0).is_err());
    }

    #[test]
    fn regular_graphs() {
        assert_eq!(gen_regular(10, 0, 1).unwrap().num_edges(), 0);
        let k4 = gen_regular(4, 3, 2).unwrap();
        assert_eq!(k4.num_edges(), 6);
        for (n, d) in [(50, 3), (2000, 10), (101, 4)] {
            let g = gen_regular(n, d, 7).unwrap();
            assert!((0..n).all(|i| g.degree(i) == d), "n={n} d={d}");
        }
        assert!(gen_regular(5, 3, 0).is_err());
        assert!(gen_regular(4, 4, 0).is_err());
        assert_eq!(gen_regular(300, 4, 8).unwrap(), gen_regular(300, 4, 8).unwrap());
    }
}
