use osclab_core::covering::{
    arcs_intersect, build_covering, case_split, covering_theta, elementary_arcs, good_point_test,
    maximal_disjoint_family, ArcKind, BoundaryArc, CaseKind, CoveringError, ElementaryArc,
};
use osclab_core::sampling::{random_convex_polygon, random_poly_in, trial_rng};
use osclab_core::{ConvexDomain, QuadratureGrid};
use proptest::prelude::*;
use rand::Rng;

fn synthetic(start: f64, length: f64, perimeter: f64) -> ElementaryArc {
    let start_s = start.rem_euclid(perimeter);
    ElementaryArc {
        arc: BoundaryArc { start_s, end_s: start_s + length, length, kind: ArcKind::Elementary, variation: 1.0 },
        origin_s: start_s,
        chord: 0.0,
        length_ok: true,
        variation_ok: true,
    }
}

/// Largest pairwise-disjoint subset, by enumeration.
fn exhaustive_max(arcs: &[ElementaryArc], l: f64) -> usize {
    let n = arcs.len();
    (0u32..1 << n)
        .filter(|mask| {
            (0..n).all(|i| {
                (i + 1..n).all(|j| mask & (1 << i) == 0 || mask & (1 << j) == 0 || !arcs_intersect(&arcs[i].arc, &arcs[j].arc, l))
            })
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// On a circle of length 4 with an uncovered point the greedy family is
    /// a maximum independent set.
    #[test]
    fn greedy_family_is_maximum(spec in prop::collection::vec((0.0f64..4.0, 0.01f64..0.9), 1..11)) {
        let k = ConvexDomain::unit_square();
        let l = k.perimeter();
        let arcs: Vec<_> = spec.iter().map(|&(s, len)| synthetic(s, len, l)).collect();
        let covered: f64 = spec.iter().map(|x| x.1).sum();
        prop_assume!(covered < l);
        let best = exhaustive_max(&arcs, l);
        match maximal_disjoint_family(&k, &arcs) {
            Ok(fam) => {
                prop_assert_eq!(fam.len(), best);
                for (i, a) in fam.iter().enumerate() {
                    for b in &fam[i + 1..] {
                        prop_assert!(!arcs_intersect(&a.arc, &b.arc, l));
                    }
                }
                for a in &arcs {
                    prop_assert!(fam.iter().any(|f| arcs_intersect(&a.arc, &f.arc, l)));
                }
            }
            Err(CoveringError::FamilyTooLarge(m)) => {
                prop_assert!(best > 4);
                prop_assert_eq!(m, best);
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    /// Off-mesh random points that are not good must lie in the cover.
    #[test]
    fn random_polygons_keep_the_invariants(seed in 0u64..10_000, frac in 0.2f64..0.95) {
        let mut rng = trial_rng(seed, 0);
        let k = random_convex_polygon(&mut rng, 7);
        let r = frac * k.width() / 108.0;
        let theta = covering_theta(&k);
        let c = build_covering(&k, r, theta).unwrap();
        prop_assert!(c.k0() <= 4);
        prop_assert!(c.all_checks_pass(), "{:#?}", c.checks.iter().filter(|x| !x.pass).collect::<Vec<_>>());
        for _ in 0..400 {
            let s = rng.gen_range(0.0..k.perimeter());
            if !good_point_test(&k, &k.boundary_point(s), r, theta).good {
                prop_assert!(c.cover.contains(s), "bad point s = {s} outside the cover");
            }
        }
        for e in &c.family {
            prop_assert!(c.cover.contains(e.arc.start_s) && c.cover.contains(e.arc.start_s + 0.5 * e.arc.length));
        }
    }
}

#[test]
fn elementary_arcs_start_or_end_at_their_bad_point() {
    let k = ConvexDomain::unit_square();
    let r = 0.5 * k.width() / 108.0;
    let arcs = elementary_arcs(&k, r, covering_theta(&k));
    assert!(!arcs.is_empty());
    let l = k.perimeter();
    for a in &arcs {
        let at_start = (a.arc.start_s - a.origin_s).rem_euclid(l).min((a.origin_s - a.arc.start_s).rem_euclid(l)) < 1e-12;
        let at_end = ((a.arc.end_s - a.origin_s).rem_euclid(l)).min((a.origin_s - a.arc.end_s).rem_euclid(l)) < 1e-12;
        assert!(at_start || at_end, "{a:?}");
        assert!(a.chord < r && a.length_ok && a.variation_ok);
    }
}

#[test]
fn case_split_labels_are_exhaustive_and_consistent() {
    let mut rng = trial_rng(77, 0);
    let mut seen = [false; 3];
    for t in 0..24 {
        let k = if t % 2 == 0 { ConvexDomain::unit_square() } else { random_convex_polygon(&mut rng, 6) };
        let r = 0.8 * k.width() / 108.0;
        let c = build_covering(&k, r, covering_theta(&k)).unwrap();
        let n = rng.gen_range(4..60);
        let p = random_poly_in(&k, &mut rng, n);
        let s = case_split(&p, &k, 2.0, &c, &QuadratureGrid::default_for(&k));
        let in_cover_small = s.log_mass_h_cover <= s.log_mass_h - 2f64.ln();
        match s.case {
            CaseKind::I => assert!(in_cover_small),
            CaseKind::II1 => assert!(!in_cover_small && 2.0 * s.u.unwrap() < s.v.unwrap()),
            CaseKind::II2 => assert!(!in_cover_small && 2.0 * s.u.unwrap() >= s.v.unwrap()),
        }
        assert!(s.log_mass_h_cover <= s.log_mass_h + 1e-9 && s.log_mass_h <= s.log_mass_total + 1e-9);
        assert!(s.reports.iter().filter(|r| r.applicable).all(|r| r.pass), "{:#?}", s.reports);
        seen[match s.case {
            CaseKind::I => 0,
            CaseKind::II1 => 1,
            CaseKind::II2 => 2,
        }] = true;
    }
    assert!(seen[0]);
}
