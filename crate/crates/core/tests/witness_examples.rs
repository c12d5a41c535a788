use elliptope::matrix::{deformed_goe, deformed_goe_r, eig_sym, sample_goe, semicircle_quantile};
use elliptope::graph::Labels;
use elliptope::par::Parallelism;
use elliptope::solver::{opt_k, SolverParams};
use elliptope::witness::{
    grid_search_from_spectrum, verify_feasible, witness_subcritical_from_spectrum, witness_value, WitnessGrid,
    WitnessKind,
};

#[test]
fn subcritical_goe_value_tracks_bulk_quantile() {
    let w = sample_goe(1000, 21);
    let spec = eig_sym(&w).unwrap();
    let x = witness_subcritical_from_spectrum(&spec, 0.05).unwrap();
    assert!(verify_feasible(&x, 1e-8).passed());
    let v = witness_value(&w, &x).unwrap();
    let floor = semicircle_quantile(0.05).unwrap() - 0.3;
    assert!(v >= floor, "value {v} below {floor}");
}

#[test]
fn spike_raises_the_grid_searched_witness() {
    // Same seed, so both matrices share the GOE noise.
    let grid = WitnessGrid::default();
    let best = |lambda: f64| {
        let b = deformed_goe(1000, lambda, 33);
        let spec = eig_sym(&b).unwrap();
        let res = grid_search_from_spectrum(&b, &spec, WitnessKind::Supercritical, &grid, Parallelism::Parallel)
            .unwrap();
        assert!(res.report.passed());
        res.value
    };
    let (null, spiked) = (best(0.0), best(2.0));
    assert!(null <= 2.1, "λ = 0 value {null}");
    assert!(spiked > null, "λ = 2 value {spiked} vs λ = 0 value {null}");
}

#[test]
fn r_community_witness_is_feasible_and_gains_from_spike() {
    let n = 999;
    let labels = Labels::new(3, (0..n).map(|i| i % 3).collect()).unwrap();
    let grid = WitnessGrid::default();
    let kind = WitnessKind::SupercriticalR { r: 3 };
    let best = |lambda: f64| {
        let b = deformed_goe_r(n, 3, lambda, &labels, 5).unwrap();
        let spec = eig_sym(&b).unwrap();
        let res = grid_search_from_spectrum(&b, &spec, kind, &grid, Parallelism::Parallel).unwrap();
        assert!(res.report.passed());
        assert_eq!(res.witness.p(), 2);
        res.value
    };
    assert!(best(2.0) > best(0.0));
}

#[test]
fn witness_value_is_below_solver_value() {
    let b = deformed_goe(300, 2.0, 8);
    let spec = eig_sym(&b).unwrap();
    let res = grid_search_from_spectrum(&b, &spec, WitnessKind::Supercritical, &WitnessGrid::default(), Parallelism::Sequential)
        .unwrap();
    let params = SolverParams {
        rank: Some(40),
        ..SolverParams::default()
    };
    let solved = opt_k(&b, 40, &params, 1).unwrap().value / 300.0;
    assert!(solved >= res.value - 1e-6, "solver {solved} vs witness {}", res.value);
}
