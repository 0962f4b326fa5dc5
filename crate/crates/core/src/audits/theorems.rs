//! Whole-boundary lower bounds for `‖p'‖/‖p‖`.

use super::AuditReport;
use crate::geometry::{ConvexDomain, Point};
use crate::poly::{inverse_markov_factor, sup_norm, sup_norm_derivative, Exponent, QuadratureGrid, RootPolynomial};

fn roots_in(p: &RootPolynomial, k: &ConvexDomain) -> bool {
    p.roots.iter().all(|&r| k.contains(r))
}

/// `‖p'‖_∞ ≥ 0.001 (w/d²) n ‖p‖_∞` for `p` with all roots in `K`.
pub fn infnorm_theorem_audit(p: &RootPolynomial, k: &ConvexDomain) -> AuditReport {
    if !roots_in(p, k) {
        return AuditReport::not_applicable("infnorm", "roots outside K");
    }
    let (d, w) = (k.diameter(), k.width());
    let n = p.degree() as f64;
    let ratio = (sup_norm_derivative(p, k).log_value - sup_norm(p, k).log_value).exp();
    AuditReport::check("infnorm", ratio, 0.001 * w / (d * d) * n).with("n", n)
}

/// `‖p'‖_q ≥ (h⁴/(3000 d⁵)) n ‖p‖_q` where `h` is the depth of `K`;
/// not applicable when `h = 0`.
pub fn depth_theorem_audit(
    p: &RootPolynomial,
    k: &ConvexDomain,
    q: Exponent,
    grid: &QuadratureGrid,
    depth: f64,
) -> AuditReport {
    let d = k.diameter();
    if depth <= 1e-9 * d {
        return AuditReport::not_applicable("depth", "zero depth").with("h", depth);
    }
    if !roots_in(p, k) {
        return AuditReport::not_applicable("depth", "roots outside K");
    }
    let n = p.degree() as f64;
    let coef = depth.powi(4) / (3000.0 * d.powi(5));
    match inverse_markov_factor(p, k, q, grid) {
        Ok(rec) => AuditReport::check("depth", rec.m, coef * n)
            .with("h", depth)
            .with("n", n)
            .with("q", q.value()),
        Err(e) => AuditReport::not_applicable("depth", e.to_string()),
    }
}

/// `|p'(z)| ≥ (n/(2R))|p(z)|` at a point `z` of the circle of radius `R`
/// around `center`, for `p` with all roots in that disk. Checked as
/// `|p'/p(z)| ≥ n/(2R)`; at a root the inequality is trivial and the report
/// is not applicable.
pub fn turan_pointwise_audit(p: &RootPolynomial, center: Point, radius: f64, z: Point) -> AuditReport {
    let n = p.degree() as f64;
    match p.log_derivative(z, 2.0 * radius) {
        Ok(v) => AuditReport::check("turan", v.norm(), n / (2.0 * radius)),
        Err(_) => AuditReport::not_applicable("turan", "root at the point"),
    }
    .with("n", n)
    .with("distance_from_center", (z - center).norm())
}
