mod common;

use common::{opt1_brute_force, random_symmetric, sdp_reference};
use elliptope::graph::{gen_er, CenteredOperator};
use elliptope::matrix::{eigvals_sym, sample_goe, SymDense};
use elliptope::solver::{
    alpha_k, init_factor, objective, opt_k, opt_k_from, sdp_sandwich_dense, AscentParams, Negated, SolverParams,
};
use proptest::prelude::*;

fn params(restarts: usize) -> SolverParams {
    SolverParams {
        restarts,
        ascent: AscentParams {
            tol: 1e-12,
            max_epochs: 20_000,
        },
        ..SolverParams::default()
    }
}

#[test]
fn oracle_is_tight_on_known_instances() {
    let ones = SymDense::from_fn(6, |_, _| 1.0).unwrap();
    let r = sdp_reference(&ones);
    assert!((r.value() - 36.0).abs() < 1e-6);
    // 5-cycle: the optimum of -A places consecutive vectors at angle 4π/5.
    let cycle = SymDense::from_fn(5, |i, j| if (i + 1) % 5 == j || (j + 1) % 5 == i { 1.0 } else { 0.0 }).unwrap();
    let r = sdp_reference(&cycle.scaled(-1.0));
    let expected = 10.0 * (std::f64::consts::PI / 5.0).cos();
    assert!((r.value() - expected).abs() < 1e-6, "{} vs {expected}", r.value());
    assert!((r.dual - r.primal).abs() < 1e-8);
}

#[test]
fn full_rank_ascent_matches_oracle() {
    for seed in 0..30 {
        let n = 3 + (seed as usize % 6);
        let m = random_symmetric(n, seed);
        let reference = sdp_reference(&m);
        let best = opt_k(&m, n, &params(20), seed).unwrap();
        let scale = 1.0 + reference.value().abs();
        assert!(
            (best.value - reference.value()).abs() < 1e-6 * scale,
            "seed {seed}: solver {} oracle {}",
            best.value,
            reference.value()
        );
    }
}

#[test]
fn rank_one_matches_enumeration() {
    for seed in 0..20 {
        let m = random_symmetric(7, 100 + seed);
        let best = opt_k(&m, 1, &params(40), seed).unwrap();
        assert!((best.value - opt1_brute_force(&m)).abs() < 1e-9, "seed {seed}");
    }
}

#[test]
fn sandwich_brackets_oracle() {
    for seed in 0..20 {
        let m = random_symmetric(8, 200 + seed);
        let reference = sdp_reference(&m).value();
        for k in 2..=4 {
            let s = sdp_sandwich_dense(&m, k, &params(20), seed).unwrap();
            assert!(s.lower <= reference + 1e-6, "seed {seed} k {k}");
            assert!(s.upper >= reference - 1e-6, "seed {seed} k {k}: upper {} < {reference}", s.upper);
        }
    }
}

#[test]
fn goe_value_is_within_known_window() {
    let n = 400;
    let w = sample_goe(n, 12);
    let res = opt_k(&w, 40, &SolverParams::default(), 1).unwrap();
    let v = res.value / n as f64;
    let xi1 = eigvals_sym(&w).unwrap()[0];
    assert!(v <= xi1 + 1e-9);
    let a = alpha_k(40);
    assert!(v > 2.0 * a - 2.0 * (1.0 - a) - 0.2, "value/n = {v}");
    assert!((1.8..=2.05).contains(&v), "value/n = {v}");
}

#[test]
fn adding_an_edge_moves_fixed_point_by_at_most_two() {
    let g = gen_er(150, 5.0, 3).unwrap();
    let op = CenteredOperator::normalized(&g, 5.0).unwrap();
    let res = opt_k(&op, 8, &SolverParams::default(), 2).unwrap();
    let (u, v) = (0..150)
        .flat_map(|u| (u + 1..150).map(move |v| (u, v)))
        .find(|&(u, v)| !g.has_edge(u, v))
        .unwrap();
    let g_plus = g.with_edge(u, v).unwrap();
    // Unnormalized A^cen with the same d; the extra edge adds 2<σ_u, σ_v>.
    let a = CenteredOperator::new(&g, 5.0, 1.0).unwrap();
    let b = CenteredOperator::new(&g_plus, 5.0, 1.0).unwrap();
    let diff = objective(&b, &res.factor).unwrap() - objective(&a, &res.factor).unwrap();
    let expected = 2.0 * res.factor.row(u).iter().zip(res.factor.row(v)).map(|(x, y)| x * y).sum::<f64>();
    assert!((diff - expected).abs() < 1e-9);
    // Entries (u, v) and (v, u) each move by |<σ_u, σ_v>| ≤ 1.
    assert!(diff.abs() <= 2.0 + 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sign_conjugation_is_exact(n in 2usize..12, k in 1usize..5, seed in any::<u64>(), mask in any::<u16>()) {
        let m = random_symmetric(n, seed);
        let f = init_factor(n, k, seed ^ 1).unwrap();
        let signs: Vec<f64> = (0..n).map(|i| if mask >> (i % 16) & 1 == 1 { -1.0 } else { 1.0 }).collect();
        let conj = m.conjugated(&signs);
        let a = objective(&m, &f).unwrap();
        let b = objective(&conj, &f.with_row_signs(&signs)).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn ascent_traces_are_monotone(n in 2usize..30, k in 1usize..6, seed in any::<u64>()) {
        let m = random_symmetric(n, seed);
        let res = opt_k(&m, k, &SolverParams::default(), seed).unwrap();
        prop_assert!(res.report.objective_trace.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(res.factor.max_row_norm_error() < 1e-12);
        let neg = opt_k(&Negated(&m), k, &SolverParams::default(), seed).unwrap();
        prop_assert!(neg.report.objective_trace.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn relabeling_preserves_objective(n in 4usize..40, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let g = gen_er(n, 3.0, seed).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut elliptope::rng::rng_from_seed(seed ^ 7));
        let gp = g.permuted(&perm).unwrap();
        let f = init_factor(n, 3, seed).unwrap();
        let a = objective(&CenteredOperator::normalized(&g, 3.0).unwrap(), &f).unwrap();
        let b = objective(&CenteredOperator::normalized(&gp, 3.0).unwrap(), &f.permuted(&perm)).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
    }

    #[test]
    fn warm_start_never_loses_value(n in 3usize..20, seed in any::<u64>()) {
        let m = random_symmetric(n, seed);
        let low = opt_k(&m, 2, &SolverParams::default(), seed).unwrap();
        let up = opt_k_from(&m, low.factor.embed(3).unwrap(), &AscentParams::default(), seed).unwrap();
        prop_assert!(up.value >= low.value - 1e-12 * (1.0 + low.value.abs()));
    }
}
