//! Nikolskii-type comparison of `‖p‖_q` with `‖p‖_∞`, and the set `ℋ` where
//! `|p|` is not too small relative to its maximum.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{AuditError, AuditReport};
use crate::geometry::{ArcSet, ConvexDomain, Point};
use crate::poly::{log_integral_over, log_norms, sup_norm, Exponent, QuadratureGrid, RootPolynomial};
use crate::util::golden_max;

const H_MESH: usize = 4096;

/// `‖p‖_q ≥ (d/(2(q+1)))^{1/q} ‖p‖_∞ n^{-2/q}`, checked as a ratio to `‖p‖_∞`.
/// `n` is the declared degree bound and must be at least `deg p`.
pub fn nikolskii_audit(p: &RootPolynomial, k: &ConvexDomain, q: f64, n: usize, grid: &QuadratureGrid) -> AuditReport {
    let n = n.max(p.degree()).max(1) as f64;
    let log_sup = sup_norm(p, k).log_value;
    let (log_q, _) = log_norms(p, k, Exponent::Finite(q), grid);
    let lhs = (log_q - log_sup).exp();
    let rhs = (k.diameter() / (2.0 * (q + 1.0))).powf(1.0 / q) * n.powf(-2.0 / q);
    AuditReport::check("nikolskii", lhs, rhs)
        .with("q", q)
        .with("n", n)
        .with("log_norm_q", log_q)
        .with("log_norm_inf", log_sup)
}

/// `c = ½(8π(q+1))^{-1/q}`.
pub fn hset_constant(q: f64) -> f64 {
    0.5 * (8.0 * PI * (q + 1.0)).powf(-1.0 / q)
}

/// The set `{ζ ∈ ∂K : |p(ζ)| > m·c·n^{-2/q}‖p‖_∞}` for a threshold multiplier `m`
/// (`m = 1` is the defining threshold).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HSet {
    pub arcs: ArcSet,
    pub q: f64,
    pub n: usize,
    pub log_threshold: f64,
    pub log_sup: f64,
}

impl HSet {
    pub fn contains_value(&self, log_abs_p: f64) -> bool {
        log_abs_p > self.log_threshold
    }
}

/// Resolves `ℋ` as a union of arc-length intervals.
///
/// The mesh holds 4096 uniform points, the vertices and the boundary points
/// nearest to each root. Mesh local minima above the threshold are polished
/// so narrow dips are not missed, and every sign change is bisected.
pub fn h_set(p: &RootPolynomial, k: &ConvexDomain, q: f64, n: usize, multiplier: f64) -> HSet {
    let l = k.perimeter();
    let n_eff = n.max(1);
    let log_sup = sup_norm(p, k).log_value;
    let log_threshold = (multiplier * hset_constant(q)).ln() - 2.0 / q * (n_eff as f64).ln() + log_sup;
    let g = |s: f64| p.log_abs(k.point_at(s)) - log_threshold;

    let mut s: Vec<f64> = (0..H_MESH).map(|j| l * j as f64 / H_MESH as f64).collect();
    s.extend(k.breakpoints());
    s.extend(p.roots.iter().map(|&r| k.arclength_of(r)));
    s.sort_by(f64::total_cmp);
    s.dedup();
    let vals: Vec<f64> = s.iter().map(|&t| g(t)).collect();
    let m = s.len();
    let tol = 1e-13 * l;
    let mut extra = Vec::new();
    for i in 0..m {
        let (prev, next) = ((i + m - 1) % m, (i + 1) % m);
        if vals[i] > 0.0 && vals[i] <= vals[prev] && vals[i] <= vals[next] {
            let lo = if i == 0 { s[m - 1] - l } else { s[prev] };
            let hi = if i + 1 == m { s[0] + l } else { s[next] };
            let (t, v) = golden_max(|t| -g(t), lo, hi, tol);
            if -v <= 0.0 {
                extra.push(t.rem_euclid(l));
            }
        }
    }
    if !extra.is_empty() {
        s.extend(extra);
        s.sort_by(f64::total_cmp);
        s.dedup();
    }
    let vals: Vec<f64> = s.iter().map(|&t| g(t)).collect();
    let m = s.len();
    let arcs = match vals.iter().position(|&v| v <= 0.0) {
        None => ArcSet::full(l),
        Some(i0) => {
            let bisect = |mut a: f64, mut b: f64| {
                // g(a) and g(b) have opposite signs; returns the crossing.
                let ga = g(a) > 0.0;
                while b - a > tol {
                    let c = 0.5 * (a + b);
                    if (g(c) > 0.0) == ga {
                        a = c;
                    } else {
                        b = c;
                    }
                }
                0.5 * (a + b)
            };
            let mut arcs = Vec::new();
            let mut start = None;
            for step in 1..=m {
                let (ia, ib) = ((i0 + step - 1) % m, (i0 + step) % m);
                let a = s[ia];
                let b = if ib <= ia { s[ib] + l } else { s[ib] };
                match (vals[ia] > 0.0, vals[ib] > 0.0, start) {
                    (false, true, _) => start = Some(bisect(a, b)),
                    (true, false, Some(st)) => {
                        let end = bisect(a, b);
                        let end = if end < st { end + l } else { end };
                        arcs.push((st, end - st));
                        start = None;
                    }
                    _ => {}
                }
            }
            ArcSet::from_arcs(l, arcs)
        }
    };
    HSet { arcs, q, n: n_eff, log_threshold, log_sup }
}

/// `∫_ℋ |p|^q ≥ ½ ∫_Γ |p|^q`, checked as the ratio of the two integrals.
pub fn hset_mass_audit(p: &RootPolynomial, k: &ConvexDomain, q: f64, n: usize, grid: &QuadratureGrid) -> AuditReport {
    let h = h_set(p, k, q, n, 1.0);
    let (log_norm, _) = log_norms(p, k, Exponent::Finite(q), grid);
    let log_total = q * log_norm;
    let log_h = if h.arcs.is_empty() {
        f64::NEG_INFINITY
    } else {
        log_integral_over(p, k, q, h.arcs.pieces(), h.log_sup)
    };
    AuditReport::check("hset", (log_h - log_total).exp(), 0.5)
        .with("q", q)
        .with("n", h.n as f64)
        .with("h_measure", h.arcs.measure())
        .with("perimeter", k.perimeter())
        .with("log_threshold", h.log_threshold)
}

/// For `ζ ∈ ℋ` (given `log_sup = log ‖p‖_∞`): `log(‖p‖_∞/|p(ζ)|) ≤ log(16π) + 2 log n`, and for `n ≥ 73`
/// also `≤ (107/40) log n`. Upper bounds sit on the left of each report.
pub fn h_point_log_gap(
    p: &RootPolynomial,
    zeta: Point,
    q: f64,
    n: usize,
    log_sup: f64,
) -> Result<Vec<AuditReport>, AuditError> {
    let n_eff = n.max(1);
    let ln_n = (n_eff as f64).ln();
    let log_threshold = hset_constant(q).ln() - 2.0 / q * ln_n + log_sup;
    let log_p = p.log_abs(zeta);
    if !(log_p > log_threshold) {
        return Err(AuditError::NotInH);
    }
    let gap = log_sup - log_p;
    let implied = log_sup - log_threshold;
    let mut out = vec![AuditReport::check("hgap", (16.0 * PI).ln() + 2.0 * ln_n, gap)
        .with("n", n_eff as f64)
        .with("q", q)
        .with("threshold_gap", implied)];
    if n_eff >= 73 {
        out.push(
            AuditReport::check("hgap:sharp", 107.0 / 40.0 * ln_n, gap)
                .with("n", n_eff as f64)
                .with("q", q)
                .with("threshold_gap", implied),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn nikolskii_on_the_disk_monomial() {
        let k = ConvexDomain::unit_disk();
        let g = QuadratureGrid::default_for(&k);
        let n = 6;
        let r = nikolskii_audit(&RootPolynomial::monic(vec![c(0.0, 0.0); n]), &k, 1.0, n, &g);
        assert_relative_eq!(r.lhs, 2.0 * PI, max_relative = 1e-12);
        assert_relative_eq!(r.rhs, 0.5 / 36.0, max_relative = 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn nikolskii_constant_on_the_square() {
        let k = ConvexDomain::unit_square();
        let g = QuadratureGrid::default_for(&k);
        let r = nikolskii_audit(&RootPolynomial::new(c(1.0, 0.0), vec![]), &k, 2.0, 1, &g);
        assert_relative_eq!(r.lhs, 2.0, max_relative = 1e-12);
        assert_relative_eq!(r.rhs, (2f64.sqrt() / 6.0).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn hset_of_monomial_is_everything() {
        let k = ConvexDomain::unit_disk();
        let p = RootPolynomial::monic(vec![c(0.0, 0.0); 5]);
        let h = h_set(&p, &k, 2.0, 5, 1.0);
        assert_relative_eq!(h.arcs.measure(), k.perimeter(), max_relative = 1e-12);
    }

    #[test]
    fn hset_excludes_a_boundary_root() {
        let k = ConvexDomain::unit_square();
        let p = RootPolynomial::monic(vec![c(0.5, 0.0), c(0.5, 0.5)]);
        let h = h_set(&p, &k, 1.0, 2, 1.0);
        assert!(!h.arcs.contains(0.5));
        assert!(h.arcs.contains(2.0));
        assert!(h.arcs.measure() < k.perimeter());
        // Monotone in the threshold multiplier.
        let h2 = h_set(&p, &k, 1.0, 2, 2.0);
        assert!(h2.arcs.measure() <= h.arcs.measure());
    }

    #[test]
    fn hset_boundary_matches_threshold() {
        // |z − 1/2| on the bottom edge equals the threshold at the arc endpoints.
        let k = ConvexDomain::unit_square();
        let p = RootPolynomial::monic(vec![c(0.5, 0.0)]);
        let h = h_set(&p, &k, 1.0, 1, 1.0);
        for &(a, b) in h.arcs.pieces() {
            for s in [a, b] {
                if s > 0.0 && s < k.perimeter() {
                    assert_relative_eq!(p.log_abs(k.point_at(s)), h.log_threshold, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn mass_on_the_disk_is_total() {
        let k = ConvexDomain::unit_disk();
        let g = QuadratureGrid::default_for(&k);
        let r = hset_mass_audit(&RootPolynomial::monic(vec![c(0.0, 0.0); 3]), &k, 2.0, 3, &g);
        assert_relative_eq!(r.lhs, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn log_gap_outside_h_is_an_error() {
        let k = ConvexDomain::unit_square();
        let p = RootPolynomial::monic(vec![c(0.5, 0.0)]);
        let log_sup = sup_norm(&p, &k).log_value;
        assert_eq!(h_point_log_gap(&p, c(0.5, 0.0), 1.0, 1, log_sup), Err(AuditError::NotInH));
        let ok = h_point_log_gap(&p, c(0.5, 1.0), 1.0, 1, log_sup).unwrap();
        assert!(ok[0].pass);
    }
}
