use num_complex::Complex64;
use osclab_core::search::{
    evaluate, floor_consistency_check, minimize_oscillation, reference_families, upper_witness_check, InitStrategy,
    SearchConfig,
};
use osclab_core::{ConvexDomain, Exponent, QuadratureGrid};
use proptest::prelude::*;

/// Smallest `M_2` over four-fold symmetric root sets `c + a·e^{i(φ + kπ/2)}`.
fn symmetric_grid_min(k: &ConvexDomain) -> (f64, f64, f64) {
    let g = QuadratureGrid::default_for(k);
    let c = Complex64::new(0.5, 0.5);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for phase in [0.0, std::f64::consts::FRAC_PI_4] {
        for j in 0..=400 {
            // Diagonal sets reach the corners at a = √2/2.
            let a = j as f64 / 400.0 * if phase == 0.0 { 0.5 } else { std::f64::consts::FRAC_1_SQRT_2 };
            let roots: Vec<_> = (0..4)
                .map(|i| c + Complex64::from_polar(a, phase + i as f64 * std::f64::consts::FRAC_PI_2))
                .collect();
            let m = evaluate(k, &roots, Exponent::Finite(2.0), &g);
            if m < best.0 {
                best = (m, a, phase);
            }
        }
    }
    best
}

#[test]
fn square_degree_four_beats_symmetric_grid() {
    let k = ConvexDomain::unit_square();
    let (grid_m, a, phase) = symmetric_grid_min(&k);
    let res = minimize_oscillation(&k, &SearchConfig::new(4, Exponent::Finite(2.0), 100_000, 0)).unwrap();
    // One-sided: the best symmetric set need not be optimal.
    assert!(res.best_m <= 1.02 * grid_m, "search {} vs grid {grid_m} (a = {a}, phase = {phase})", res.best_m);
    assert!(upper_witness_check(&k, 4, Exponent::Finite(2.0), &res).pass);
    assert!(floor_consistency_check(&k, 4, Exponent::Finite(2.0), &res).pass);
}

#[test]
fn disk_search_respects_the_half_n_floor() {
    // M ≥ n/2 holds on the disk for every polynomial with roots in it.
    let k = ConvexDomain::unit_disk();
    for init in [InitStrategy::BoundaryUniform, InitStrategy::CornerClustered] {
        let mut cfg = SearchConfig::new(6, Exponent::Finite(2.0), 6000, 5);
        cfg.init = init;
        let res = minimize_oscillation(&k, &cfg).unwrap();
        assert!(res.best_m >= 3.0 - 1e-9, "{}", res.best_m);
        assert!(res.best_m <= 6.0 + 1e-9);
    }
}

#[test]
fn searches_are_reproducible_across_pool_sizes() {
    let k = ConvexDomain::rectangle(3.0, 1.0);
    let cfg = SearchConfig::new(5, Exponent::Finite(2.0), 4000, 11);
    let a = minimize_oscillation(&k, &cfg).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let b = pool.install(|| minimize_oscillation(&k, &cfg).unwrap());
    assert_eq!(a, b);
}

#[test]
fn reference_families_never_beat_the_search_by_much() {
    let k = ConvexDomain::unit_square();
    let g = QuadratureGrid::default_for(&k);
    let res = minimize_oscillation(&k, &SearchConfig::new(8, Exponent::Finite(2.0), 20_000, 2)).unwrap();
    for (name, p) in reference_families(&k, 8) {
        let m = evaluate(&k, &p.roots, Exponent::Finite(2.0), &g);
        // Roots on the boundary give a finite but larger M.
        assert!(m.is_finite(), "{name}");
        assert!(res.best_m <= m * (1.0 + 1e-9), "{name}: {m} < {}", res.best_m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn search_output_is_feasible_and_consistent(seed in 0u64..1000, n in 1usize..6, sides in 3usize..8) {
        let k = ConvexDomain::regular_polygon(sides, 1.0).unwrap();
        let cfg = SearchConfig::new(n, Exponent::Finite(2.0), 50 * n.max(2), seed);
        let res = minimize_oscillation(&k, &cfg).unwrap();
        prop_assert!(res.evaluations <= cfg.budget);
        prop_assert!(res.best_p.roots.iter().all(|&z| k.contains(z)));
        let again = evaluate(&k, &res.best_p.roots, cfg.q, &QuadratureGrid::default_for(&k));
        prop_assert!((again - res.best_m).abs() <= 1e-9 * res.best_m);
        prop_assert!(res.trace.windows(2).all(|w| w[1].1 < w[0].1));
    }
}
