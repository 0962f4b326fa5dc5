//! The length schedule `r(n)`, its gates, and the case split of the
//! `L^q` mass between the cover and the rest of `ℋ`.

use serde::{Deserialize, Serialize};

use super::Covering;
use crate::audits::{h_set, AuditReport};
use crate::geometry::{ArcSet, ConvexDomain};
use crate::poly::{inverse_markov_factor, log_integral_over, log_norms, Exponent, QuadratureGrid, RootPolynomial};
use crate::util::mesh_max;

/// `r(n) = 300 (d²/w) ln n / n`.
pub fn r_schedule(n: f64, k: &ConvexDomain) -> f64 {
    let (d, w) = (k.diameter(), k.width());
    300.0 * d * d / w * n.ln() / n
}

/// `r₁ = 10⁻⁴ w²/d`.
pub fn r1(k: &ConvexDomain) -> f64 {
    1e-4 * k.width().powi(2) / k.diameter()
}

/// `n₀ = max(10²⁰, (d/w)⁵)`.
pub fn n0(k: &ConvexDomain) -> f64 {
    1e20f64.max((k.diameter() / k.width()).powi(5))
}

/// `n₁ = max(73, 6 ln(d/w))`.
pub fn n1(k: &ConvexDomain) -> f64 {
    73f64.max(6.0 * (k.diameter() / k.width()).ln())
}

/// Smallest real `n ≥ 3` with `r(n) ≤ r₁`, by bisection on the decreasing
/// branch of `ln n / n`.
pub fn gate_degree(k: &ConvexDomain) -> f64 {
    let target = r1(k);
    let (mut lo, mut hi) = (3.0f64, 3.0f64);
    while r_schedule(hi, k) > target {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        if r_schedule(mid, k) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseKind {
    /// `∫_{ℋ∩ℒ} |p|^q ≤ ½ ∫_ℋ |p|^q`.
    #[serde(rename = "I")]
    I,
    /// Case II with `2u < v` on the heaviest component.
    #[serde(rename = "II.1")]
    II1,
    /// Case II with `u ≤ v ≤ 2u`.
    #[serde(rename = "II.2")]
    II2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseSplit {
    pub case: CaseKind,
    pub best_component: Option<usize>,
    /// `min |p|` and `max |p|` on the selected component (Case II only).
    pub u: Option<f64>,
    pub v: Option<f64>,
    pub log_mass_total: f64,
    pub log_mass_h: f64,
    pub log_mass_h_cover: f64,
    pub m_q: f64,
    /// The chain inequalities whose gates fired; each is a lower bound
    /// with the computed side on the left.
    pub reports: Vec<AuditReport>,
}

fn log_mass(p: &RootPolynomial, k: &ConvexDomain, q: f64, set: &ArcSet, log_scale: f64) -> f64 {
    if set.is_empty() {
        f64::NEG_INFINITY
    } else {
        log_integral_over(p, k, q, set.pieces(), log_scale)
    }
}

/// Splits the boundary mass of `|p|^q` against `covering` and checks each
/// link of the matching chain whose gate holds:
///
/// * Case I: `∫_{ℋ∖ℒ} ≥ ¼∫_Γ`, and for `n ≥ 73` the pointwise tilted bound
///   integrated over `ℋ∖ℒ`.
/// * Case II: `∫_𝒜 ≥ (1/16)∫_Γ` on the heaviest component.
/// * II.1: the variation bound `M_q ≥ (∫_𝒜/∫_Γ)^{1/q}/(2|𝒜|)`, its
///   consequence `M_q > w/(800 d r)`, and the `n/ln n` floor when `r ≤ r(n)`.
/// * II.2: `∫_{𝒜±} ≥ 2^{-q-7}∫_Γ` on both flanks, and `M_q > 0.0003 (w/d²) n`
///   when `r ≤ r₁` and `n ≥ n₁`.
pub fn case_split(p: &RootPolynomial, k: &ConvexDomain, q: f64, covering: &Covering, grid: &QuadratureGrid) -> CaseSplit {
    let n = p.degree().max(1);
    let nf = n as f64;
    let (d, w, l) = (k.diameter(), k.width(), k.perimeter());
    let h = h_set(p, k, q, n, 1.0);
    let scale = h.log_sup;
    let (log_norm, _) = log_norms(p, k, Exponent::Finite(q), grid);
    let log_total = q * log_norm;
    let log_h = log_mass(p, k, q, &h.arcs, scale);
    let h_cover = h.arcs.intersection(&covering.cover);
    let log_hl = log_mass(p, k, q, &h_cover, scale);
    let m_q = inverse_markov_factor(p, k, Exponent::Finite(q), grid).map(|r| r.m).unwrap_or(f64::NAN);
    let ln2 = 2f64.ln();
    let mut reports = Vec::new();

    if log_hl <= log_h - ln2 {
        let rest = h.arcs.intersection(&covering.cover.complement());
        reports.push(AuditReport::check("case:I:mass", log_mass(p, k, q, &rest, scale), log_total - 2.0 * ln2));
        let rate = 0.001 * w / (d * d) * nf - 0.15 * nf.ln() / covering.r;
        if n >= 73 && rate > 0.0 {
            reports.push(AuditReport::check("case:I:chain", m_q, 0.25f64.powf(1.0 / q) * rate).with("rate", rate));
        }
        return CaseSplit {
            case: CaseKind::I,
            best_component: None,
            u: None,
            v: None,
            log_mass_total: log_total,
            log_mass_h: log_h,
            log_mass_h_cover: log_hl,
            m_q,
            reports,
        };
    }

    // Case II: ℒ is nonempty here since ∫_{ℋ∩ℒ} > 0.
    let masses: Vec<f64> =
        (0..covering.k0()).map(|m| log_mass(p, k, q, &covering.component_set(m), scale)).collect();
    let best = (0..masses.len()).max_by(|&a, &b| masses[a].total_cmp(&masses[b])).expect("nonempty cover");
    let comp = &covering.components[best];
    let log_a = masses[best];
    reports.push(AuditReport::check("case:II:intA", log_a, log_total - 16f64.ln()));

    let f = |t: f64| p.log_abs(k.point_at(comp.arc.start_s + t));
    let len = comp.arc.length;
    let log_v = mesh_max(f, 0.0, len, 2048, 8).1;
    let log_u = -mesh_max(|t| -f(t), 0.0, len, 2048, 8).1;
    let case = if log_u + ln2 < log_v { CaseKind::II1 } else { CaseKind::II2 };
    let unit = covering.unit;

    match case {
        CaseKind::II1 => {
            let rhs = ((log_a - log_total) / q).exp() / (2.0 * len);
            reports.push(AuditReport::check("case:II.1:variation", m_q, rhs).with("component_length", len));
            if len <= 24.0 * unit * (1.0 + 1e-9) {
                reports.push(AuditReport::check("case:II.1:bound", m_q, w / (800.0 * d * covering.r)));
            }
            if n >= 2 && covering.r <= r_schedule(nf, k) {
                let floor = w * w / (240_000.0 * d.powi(3)) * nf / nf.ln();
                reports.push(AuditReport::check("case:II.1:floor", m_q, floor));
            }
        }
        CaseKind::II2 => {
            let floor = log_total - (q + 7.0) * ln2;
            for (id, flank) in [("case:II.2:minus_flank", &comp.minus_flank), ("case:II.2:plus_flank", &comp.plus_flank)] {
                let set = ArcSet::from_arcs(l, [(flank.start_s, flank.length)]);
                reports.push(AuditReport::check(id, log_mass(p, k, q, &set, scale), floor));
            }
            if covering.r <= r1(k) && nf >= n1(k) {
                reports.push(AuditReport::check("case:II.2:floor", m_q, 0.0003 * w / (d * d) * nf));
            }
        }
        CaseKind::I => unreachable!(),
    }

    CaseSplit {
        case,
        best_component: Some(best),
        u: Some(log_u.exp()),
        v: Some(log_v.exp()),
        log_mass_total: log_total,
        log_mass_h: log_h,
        log_mass_h_cover: log_hl,
        m_q,
        reports,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_covering, covering_theta};
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn schedule_plug_in_and_monotone() {
        let disk = ConvexDomain::unit_disk();
        let e = std::f64::consts::E;
        assert_relative_eq!(r_schedule(e, &disk), 600.0 / e, max_relative = 1e-12);
        let mut prev = f64::INFINITY;
        for j in 0..200 {
            let n = 3.0 + j as f64 * 7.5;
            let r = r_schedule(n, &disk);
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn gate_degree_brackets_r1() {
        let k = ConvexDomain::unit_square();
        let n = gate_degree(&k);
        assert!(r_schedule(n, &k) <= r1(&k) * (1.0 + 1e-9));
        assert!(r_schedule(n * (1.0 - 1e-6), &k) > r1(&k));
        assert_eq!(n0(&k), 1e20);
        assert_eq!(n1(&k), 73.0);
    }

    #[test]
    fn disk_is_always_case_one() {
        let k = ConvexDomain::unit_disk();
        let c = build_covering(&k, 0.01, covering_theta(&k)).unwrap();
        let p = RootPolynomial::monic(vec![Complex64::new(0.2, 0.1); 6]);
        let s = case_split(&p, &k, 2.0, &c, &QuadratureGrid::default_for(&k));
        assert_eq!(s.case, CaseKind::I);
        assert!(s.reports.iter().all(|r| r.pass));
    }

    #[test]
    fn corner_heavy_polynomial_selects_that_corner() {
        // Zeros far from the corner (0, 0) make |p| largest there.
        let k = ConvexDomain::unit_square();
        let r = 0.9 * k.width() / 108.0;
        let c = build_covering(&k, r, covering_theta(&k)).unwrap();
        let p = RootPolynomial::monic(vec![Complex64::new(1.0, 1.0); 60]);
        let s = case_split(&p, &k, 1.0, &c, &QuadratureGrid::default_for(&k));
        assert_ne!(s.case, CaseKind::I);
        let comp = &c.components[s.best_component.unwrap()];
        let mid = k.point_at(comp.central.start_s + 0.5 * comp.central.length);
        assert!(mid.norm() < 0.05, "{mid}");
        assert!(s.reports.iter().all(|r| r.pass), "{:#?}", s.reports);
    }
}
