//! Boundary norms of a polynomial and its derivative.

use serde::{Deserialize, Serialize};

use super::quadrature::PairIntegrator;
use super::{Exponent, PolyError, QuadratureGrid, RootPolynomial, GL_ORDER};
use crate::geometry::{ConvexDomain, Point};
use crate::util::golden_max;

/// Relative tolerance of the adaptive refinement; the reported norms are
/// stable to well below `1e-8`.
const REL_TOL: f64 = 1e-11;
const SUP_MESH: usize = 4096;
const SUP_CANDIDATES: usize = 8;

/// A boundary maximum, kept in log form as well to survive large degrees.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SupNorm {
    pub value: f64,
    pub log_value: f64,
    /// Arc length of the maximizer.
    pub at: f64,
}

/// Output record of a norm evaluation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormRecord {
    pub q: Exponent,
    pub norm_p: f64,
    pub norm_dp: f64,
    #[serde(rename = "M")]
    pub m: f64,
}

/// Maximum over the boundary of `exp(f)`, given `f = log|g|`.
///
/// A mesh of about 4096 points plus all vertices locates candidates; the
/// best local maxima are then polished by golden-section search.
pub fn sup_on_boundary(k: &ConvexDomain, f: impl Fn(Point) -> f64) -> SupNorm {
    let l = k.perimeter();
    let mut s: Vec<f64> = (0..SUP_MESH).map(|j| l * j as f64 / SUP_MESH as f64).collect();
    s.extend(k.breakpoints());
    s.sort_by(f64::total_cmp);
    s.dedup();
    let vals: Vec<f64> = s.iter().map(|&t| f(k.point_at(t))).collect();
    let n = s.len();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| vals[i] >= vals[(i + n - 1) % n] && vals[i] >= vals[(i + 1) % n])
        .collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    peaks.truncate(SUP_CANDIDATES);
    let mut best = (vals[0], s[0]);
    for (i, v) in vals.iter().enumerate() {
        if *v > best.0 {
            best = (*v, s[i]);
        }
    }
    for i in peaks {
        let lo = if i == 0 { s[n - 1] - l } else { s[i - 1] };
        let hi = if i + 1 == n { s[0] + l } else { s[i + 1] };
        let (t, v) = golden_max(|t| f(k.point_at(t)), lo, hi, 1e-13 * l);
        if v > best.0 {
            best = (v, t.rem_euclid(l));
        }
    }
    SupNorm { value: best.0.exp(), log_value: best.0, at: best.1 }
}

/// `‖p‖_∞` on the boundary (equal to the maximum over the domain).
pub fn sup_norm(p: &RootPolynomial, k: &ConvexDomain) -> SupNorm {
    sup_on_boundary(k, |z| p.log_abs(z))
}

/// `‖p'‖_∞` on the boundary.
pub fn sup_norm_derivative(p: &RootPolynomial, k: &ConvexDomain) -> SupNorm {
    sup_on_boundary(k, |z| p.log_pair(z).log_dp)
}

/// `(log ‖p‖_q, log ‖p'‖_q)` with adaptive refinement of the grid panels.
pub fn log_norms(p: &RootPolynomial, k: &ConvexDomain, q: Exponent, grid: &QuadratureGrid) -> (f64, f64) {
    let q = match q {
        Exponent::Infinity => {
            return (sup_norm(p, k).log_value, sup_norm_derivative(p, k).log_value);
        }
        Exponent::Finite(q) => q,
    };
    let pairs: Vec<_> = grid.nodes.iter().map(|&z| p.log_pair(z)).collect();
    let top_p = pairs.iter().map(|v| v.log_p).fold(f64::NEG_INFINITY, f64::max);
    let top_dp = pairs.iter().map(|v| v.log_dp).fold(f64::NEG_INFINITY, f64::max);
    let shift = |v: f64, top: f64| if top == f64::NEG_INFINITY { 0.0 } else { (q * (v - top)).exp() };
    // Single-rule estimate per panel, reused as the first refinement level.
    let per_panel: Vec<(f64, f64)> = pairs
        .chunks(GL_ORDER)
        .zip(grid.weights.chunks(GL_ORDER))
        .map(|(vs, ws)| {
            vs.iter().zip(ws).fold((0.0, 0.0), |acc, (v, w)| {
                (acc.0 + w * shift(v.log_p, top_p), acc.1 + w * shift(v.log_dp, top_dp))
            })
        })
        .collect();
    let rough = per_panel.iter().fold((0.0, 0.0), |acc, v| (acc.0 + v.0, acc.1 + v.1));
    let integrand = |z: Point| {
        let v = p.log_pair(z);
        (shift(v.log_p, top_p), shift(v.log_dp, top_dp))
    };
    let scale = (rough.0.max(f64::MIN_POSITIVE), rough.1.max(f64::MIN_POSITIVE));
    let integ = PairIntegrator::new(k, integrand, scale, REL_TOL);
    let mut acc = (0.0, 0.0);
    for (&(a, b), &whole) in grid.panels.iter().zip(&per_panel) {
        let r = integ.refine(a, b, whole, 0);
        acc.0 += r.0;
        acc.1 += r.1;
    }
    (top_p + acc.0.ln() / q, top_dp + acc.1.ln() / q)
}

/// `‖p‖_q` on the boundary; `q = ∞` is the sup norm.
pub fn lq_norm(p: &RootPolynomial, k: &ConvexDomain, q: Exponent, grid: &QuadratureGrid) -> f64 {
    match q {
        Exponent::Infinity => sup_norm(p, k).value,
        Exponent::Finite(_) => log_norms(p, k, q, grid).0.exp(),
    }
}

/// `M_q(p) = ‖p'‖_q / ‖p‖_q`.
pub fn inverse_markov_factor(
    p: &RootPolynomial,
    k: &ConvexDomain,
    q: Exponent,
    grid: &QuadratureGrid,
) -> Result<NormRecord, PolyError> {
    let (lp, ldp) = log_norms(p, k, q, grid);
    if !(lp > 1e-300f64.ln()) {
        return Err(PolyError::ZeroNorm);
    }
    Ok(NormRecord { q, norm_p: lp.exp(), norm_dp: ldp.exp(), m: (ldp - lp).exp() })
}

/// `log ∫ |p|^q` over a union of arc-length pieces. `log_scale` should be
/// close to `log ‖p‖_∞`; it fixes the working scale of the integrand.
pub fn log_integral_over(
    p: &RootPolynomial,
    k: &ConvexDomain,
    q: f64,
    pieces: &[(f64, f64)],
    log_scale: f64,
) -> f64 {
    let integrand = |z: Point| ((q * (p.log_abs(z) - log_scale)).exp(), 0.0);
    let integ = PairIntegrator::new(k, integrand, (k.perimeter(), 1.0), REL_TOL);
    log_scale * q + integ.pieces(pieces).0.ln()
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
    fn monomial_on_the_disk_is_sharp() {
        let k = ConvexDomain::unit_disk();
        let g = QuadratureGrid::default_for(&k);
        for n in 1..=6 {
            let p = RootPolynomial::monic(vec![c(0.0, 0.0); n]);
            for q in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
                let r = inverse_markov_factor(&p, &k, q, &g).unwrap();
                assert_relative_eq!(r.m, n as f64, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn one_plus_z_on_the_disk() {
        // ‖(1+z)^n‖_2² = 2π·C(2n, n); M_2 = n²/√(2n(2n−1)).
        let k = ConvexDomain::unit_disk();
        let g = QuadratureGrid::default_for(&k);
        let n = 5.0_f64;
        let p = RootPolynomial::monic(vec![c(-1.0, 0.0); 5]);
        let r = inverse_markov_factor(&p, &k, Exponent::Finite(2.0), &g).unwrap();
        assert_relative_eq!(r.m, n * n / (2.0 * n * (2.0 * n - 1.0)).sqrt(), max_relative = 1e-9);
        let sup = sup_norm(&p, &k);
        assert_relative_eq!(sup.value, 32.0, max_relative = 1e-12);
    }

    #[test]
    fn constant_on_the_square() {
        let k = ConvexDomain::unit_square();
        let g = QuadratureGrid::default_for(&k);
        let p = RootPolynomial::new(c(3.0, 0.0), vec![]);
        assert_relative_eq!(lq_norm(&p, &k, Exponent::Finite(1.0), &g), 12.0, max_relative = 1e-13);
        assert_relative_eq!(lq_norm(&p, &k, Exponent::Finite(2.0), &g), 6.0, max_relative = 1e-13);
        let zero = RootPolynomial::new(c(0.0, 0.0), vec![c(0.5, 0.5)]);
        assert!(matches!(
            inverse_markov_factor(&zero, &k, Exponent::Finite(2.0), &g),
            Err(PolyError::ZeroNorm)
        ));
    }

    #[test]
    fn root_on_the_boundary_is_integrable() {
        // p = z − 1/2 on the square: ∫|p| over the bottom edge is 1/4.
        let k = ConvexDomain::unit_square();
        let p = RootPolynomial::monic(vec![c(0.5, 0.0)]);
        let v = log_integral_over(&p, &k, 1.0, &[(0.0, 1.0)], 0.0).exp();
        assert_relative_eq!(v, 0.25, max_relative = 1e-10);
    }
}
