//! The alternative for two close boundary points whose tangents meet at a
//! definite angle: either `p` is tiny at both, or the two logarithmic
//! derivatives together are of order `n`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{hset_constant, AuditReport};
use crate::geometry::{line_intersection, unit, BoundaryPoint, ConvexDomain};
use crate::poly::{sup_norm, RootPolynomial};

/// Two boundary points with chosen tangent angles `α` at `ζ` and `α'` at `ζ'`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TwoPointInput {
    pub zeta: BoundaryPoint,
    pub zeta_prime: BoundaryPoint,
    pub alpha: f64,
    pub alpha_prime: f64,
}

impl TwoPointInput {
    /// `β = π − (α' − α)`, with `α' − α` reduced to `[0, 2π)`.
    pub fn beta(&self) -> f64 {
        PI - (self.alpha_prime - self.alpha).rem_euclid(TAU)
    }

    /// `s₀(β) = min(1, 2 sin β)·d/384`.
    pub fn s0(&self, d: f64) -> f64 {
        (2.0 * self.beta().sin()).min(1.0) * d / 384.0
    }
}

/// Checks that alternative (i), `|p(ζ)|, |p(ζ')| ≤ 2^{-n}‖p‖_∞`, or (ii),
/// `|p'/p(ζ)| + |p'/p(ζ')| ≥ (3 sin β/(8d))·n`, holds.
///
/// The main report carries (ii) when it holds and (i) otherwise. When at
/// least `n/2` zeros lie in `B_R(T)`, `R = 3 max(|T − ζ|, |T − ζ'|)`, a
/// `twopoint:cluster` report checks (i) on its own; when (i) holds and
/// `n ≥ 15`, `twopoint:outside_h` checks that both points miss `ℋ`.
pub fn two_point_audit(p: &RootPolynomial, k: &ConvexDomain, input: &TwoPointInput, q: f64) -> Vec<AuditReport> {
    let id = "twopoint";
    let d = k.diameter();
    let n = p.degree();
    let (z, zp) = (input.zeta.z, input.zeta_prime.z);
    let turn = (input.alpha_prime - input.alpha).rem_euclid(TAU);
    if !(turn > 0.0 && turn < PI) {
        return vec![AuditReport::not_applicable(id, "tangents must satisfy α < α' < α + π")];
    }
    let beta = input.beta();
    let s = (zp - z).norm();
    let s0 = input.s0(d);
    if s > s0 {
        return vec![AuditReport::not_applicable(id, "s exceeds s0").with("s", s).with("s0", s0)];
    }
    let Some((a, b)) = line_intersection(z, unit(input.alpha), zp, unit(input.alpha_prime)) else {
        return vec![AuditReport::not_applicable(id, "tangents are parallel")];
    };
    let tol = k.tol();
    if a < -tol || b > tol {
        return vec![AuditReport::not_applicable(id, "points are not in tangent order")];
    }
    let apex = z + unit(input.alpha) * a;
    let radius = 3.0 * (apex - z).norm().max((apex - zp).norm());
    let mu = p.roots.iter().filter(|&&r| (r - apex).norm() <= radius).count();

    let (dz, dzp) = match (p.log_derivative(z, d), p.log_derivative(zp, d)) {
        (Ok(a), Ok(b)) => (a.norm(), b.norm()),
        _ => return vec![AuditReport::not_applicable(id, "root at an endpoint")],
    };
    let log_sup = sup_norm(p, k).log_value;
    let log_small = log_sup - n as f64 * 2f64.ln();
    let log_top = p.log_abs(z).max(p.log_abs(zp));
    let sum = dz + dzp;
    let floor = 3.0 * beta.sin() / (8.0 * d) * n as f64;
    let alt_ii = AuditReport::check(id, sum, floor);
    let alt_i = AuditReport::check(id, log_small, log_top);
    let tag = |r: AuditReport| {
        r.with("beta", beta)
            .with("s", s)
            .with("s0", s0)
            .with("R", radius)
            .with("mu", mu as f64)
            .with("nu", (n - mu) as f64)
            .with("alt_i_margin", log_small - log_top)
            .with("alt_ii_margin", sum - floor)
    };
    let holds_i = alt_i.pass;
    let holds_ii = alt_ii.pass;
    let mut out = vec![tag(if holds_ii { alt_ii } else { alt_i.clone() })
        .with("alternative", if holds_ii { 2.0 } else { 1.0 })];
    if 2 * mu >= n {
        let mut r = tag(alt_i.clone());
        r.audit_id = "twopoint:cluster".into();
        out.push(r);
    }
    if holds_i && n >= 15 {
        let log_threshold = hset_constant(q).ln() - 2.0 / q * (n as f64).ln() + log_sup;
        out.push(tag(AuditReport::check("twopoint:outside_h", log_threshold, log_top)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn corner_input(k: &ConvexDomain, vertex: usize, a: f64, b: f64) -> TwoPointInput {
        let s = k.vertex_arclength(vertex);
        let zeta = k.boundary_point(s - a);
        let zeta_prime = k.boundary_point(s + b);
        TwoPointInput { zeta, zeta_prime, alpha: zeta.alpha_plus, alpha_prime: zeta_prime.alpha_minus }
    }

    #[test]
    fn far_roots_give_alternative_ii() {
        let k = ConvexDomain::unit_square();
        let inp = corner_input(&k, 1, 1e-3, 1e-3);
        assert!((inp.beta() - PI / 2.0).abs() < 1e-12);
        let p = RootPolynomial::monic(vec![Complex64::new(0.3, 0.6); 10]);
        let r = two_point_audit(&p, &k, &inp, 2.0);
        assert_eq!(r[0].detail["alternative"], 2.0);
        assert!(r[0].pass);
        // Direct sum over roots: each contributes at least 3 sin β/(4d).
        assert!(r[0].lhs >= 3.0 / (4.0 * k.diameter()) * 10.0);
    }

    #[test]
    fn clustered_roots_give_alternative_i() {
        let k = ConvexDomain::unit_square();
        let inp = corner_input(&k, 1, 1e-3, 1e-3);
        let corner = Complex64::new(1.0, 0.0);
        let mut roots = vec![corner + Complex64::new(-1e-4, 1e-4); 12];
        roots.extend(vec![Complex64::new(0.5, 0.5); 8]);
        let r = two_point_audit(&RootPolynomial::monic(roots), &k, &inp, 1.0);
        let cluster = r.iter().find(|x| x.audit_id == "twopoint:cluster").unwrap();
        assert!(cluster.pass, "{cluster:#?}");
        assert!(r.iter().all(|x| x.pass));
    }

    #[test]
    fn wide_pairs_are_not_applicable() {
        let k = ConvexDomain::unit_square();
        let inp = corner_input(&k, 2, 0.1, 0.1);
        let r = two_point_audit(&RootPolynomial::monic(vec![Complex64::new(0.5, 0.5)]), &k, &inp, 2.0);
        assert!(!r[0].applicable);
    }
}
