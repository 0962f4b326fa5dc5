//! Lower bounds for sup norms of monic products: the Chebyshev floor on a
//! segment, the `(d/4)^n` floor on a convex domain, and the decay of a
//! polynomial on a small set holding many of its zeros.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::AuditReport;
use crate::geometry::{ConvexDomain, Point};
use crate::poly::{sup_norm, RootPolynomial};
use crate::util::mesh_max;

/// `2(|J|/4)^k`.
pub fn chebyshev_floor(len: f64, k: usize) -> f64 {
    2.0 * (len / 4.0).powi(k as i32)
}

/// `(t, max log|∏(z − w_j)|)` over `z = a + t(b − a)`, `t ∈ [0, 1]`.
pub fn segment_sup(roots: &[Complex64], a: Point, b: Point) -> (f64, f64) {
    let f = |t: f64| {
        let z = a + (b - a) * t;
        roots.iter().map(|&w| (z - w).norm().ln()).sum::<f64>()
    };
    mesh_max(f, 0.0, 1.0, 1024, roots.len() + 2)
}

/// Roots of the monic Chebyshev polynomial of degree `k` moved to `[0, len]`.
pub fn chebyshev_witness(len: f64, k: usize) -> Vec<Complex64> {
    (1..=k)
        .map(|j| {
            let x = (PI * (2 * j - 1) as f64 / (2 * k) as f64).cos();
            Complex64::new(0.5 * len * (1.0 + x), 0.0)
        })
        .collect()
}

/// Random search over monic degree-`k` polynomials for the smallest sup norm
/// on `[0, len]`. Half the candidates have roots uniform in a box around the
/// segment, half are jittered Chebyshev roots. Returns two reports: the
/// search minimum against the floor (tolerance `1e-6`) and the distance of
/// the Chebyshev witness from the floor (bound `1e-9`).
pub fn chebyshev_search<R: Rng + ?Sized>(len: f64, k: usize, candidates: usize, rng: &mut R) -> Vec<AuditReport> {
    let floor = chebyshev_floor(len, k);
    let (a, b) = (Complex64::new(0.0, 0.0), Complex64::new(len, 0.0));
    let cheb = chebyshev_witness(len, k);
    let mut best = f64::INFINITY;
    let mut roots = vec![Complex64::new(0.0, 0.0); k];
    for i in 0..candidates {
        if i % 2 == 0 {
            for r in roots.iter_mut() {
                *r = Complex64::new(rng.gen_range(-0.25..1.25) * len, rng.gen_range(-0.5..0.5) * len);
            }
        } else {
            let scale = len * 10f64.powf(-rng.gen_range(1.0..5.0));
            for (r, c) in roots.iter_mut().zip(&cheb) {
                *r = c + Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
            }
        }
        best = best.min(segment_sup(&roots, a, b).1.exp());
    }
    let witness = segment_sup(&cheb, a, b).1.exp();
    vec![
        AuditReport::check_with_tol("chebyshev", best, floor, 1e-6)
            .with("len", len)
            .with("k", k as f64)
            .with("candidates", candidates as f64),
        AuditReport::check_with_tol("chebyshev:witness", 1e-9, (witness - floor).abs(), 0.0)
            .with("len", len)
            .with("k", k as f64)
            .with("witness_sup", witness)
            .with("floor", floor),
    ]
}

fn roots_in(p: &RootPolynomial, k: &ConvexDomain) -> bool {
    p.roots.iter().all(|&r| k.contains(r))
}

/// `‖p‖_∞ ≥ (d/4)^n` for `p` with all roots in `K`, normalized to be monic
/// and compared in `n`-th root form: `‖p‖_∞^{1/n} ≥ d/4`.
pub fn transfinite_floor_audit(p: &RootPolynomial, k: &ConvexDomain) -> AuditReport {
    let n = p.degree();
    if n == 0 {
        return AuditReport::not_applicable("transfinite", "degree zero");
    }
    if !roots_in(p, k) {
        return AuditReport::not_applicable("transfinite", "roots outside K");
    }
    let log_sup = sup_norm(p, k).log_value - p.lead.norm().ln();
    AuditReport::check("transfinite", (log_sup / n as f64).exp(), k.diameter() / 4.0)
        .with("n", n as f64)
        .with("log_sup_monic", log_sup)
}

/// `‖p‖_{K'} < 2^{-n}‖p‖_K` when `K' ⊂ K`, `diam K' ≤ d/k` with `k > 10`
/// and at least `(3 log 2 / log k)·n` zeros lie in `K'`. Checked in log form:
/// `log ‖p‖_K − log ‖p‖_{K'} ≥ n log 2`. Unmet preconditions are reported
/// as not applicable.
pub fn zero_concentration_audit(
    p: &RootPolynomial,
    k: &ConvexDomain,
    k_prime: &ConvexDomain,
    k_ratio: f64,
) -> AuditReport {
    let id = "concentration";
    let n = p.degree();
    let (d, dp) = (k.diameter(), k_prime.diameter());
    if !(k_ratio > 10.0) {
        return AuditReport::not_applicable(id, "ratio must exceed 10");
    }
    if dp > d / k_ratio * (1.0 + 1e-12) {
        return AuditReport::not_applicable(id, "inner diameter too large");
    }
    let inner_ok = match k_prime.vertices() {
        Some(v) => v.iter().all(|&z| k.contains(z)),
        None => (0..256).all(|j| k.contains(k_prime.point_at(k_prime.perimeter() * j as f64 / 256.0))),
    };
    if !inner_ok {
        return AuditReport::not_applicable(id, "inner set not contained in K");
    }
    if !roots_in(p, k) {
        return AuditReport::not_applicable(id, "roots outside K");
    }
    let m = p.roots.iter().filter(|&&r| k_prime.contains(r)).count();
    let needed = 3.0 * 2f64.ln() / k_ratio.ln() * n as f64;
    if n == 0 || (m as f64) < needed {
        return AuditReport::not_applicable(id, "too few zeros in the inner set")
            .with("m", m as f64)
            .with("needed", needed);
    }
    let outer = sup_norm(p, k).log_value;
    let inner = sup_norm(p, k_prime).log_value;
    AuditReport::check(id, outer - inner, n as f64 * 2f64.ln())
        .with("m", m as f64)
        .with("needed", needed)
        .with("k_ratio", k_ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn floor_values() {
        assert_relative_eq!(chebyshev_floor(4.0, 3), 2.0);
        assert_relative_eq!(chebyshev_floor(1.0, 2), 0.125);
    }

    #[test]
    fn witness_attains_the_floor() {
        for len in [1.0, 2.0, 4.0] {
            for k in 1..=6 {
                let w = chebyshev_witness(len, k);
                let sup = segment_sup(&w, Complex64::new(0.0, 0.0), Complex64::new(len, 0.0)).1.exp();
                assert_relative_eq!(sup, chebyshev_floor(len, k), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn random_cubics_stay_above_the_floor() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = chebyshev_search(1.0, 3, 1000, &mut rng);
        assert!(r[0].pass && r[0].lhs >= 1.0 / 32.0 - 1e-12);
        assert!(r[1].pass);
    }

    #[test]
    fn square_corner_product() {
        let k = ConvexDomain::unit_square();
        let p = RootPolynomial::monic(k.vertices().unwrap().to_vec());
        let r = transfinite_floor_audit(&p, &k);
        assert!(r.pass);
        assert_relative_eq!(r.rhs, 2f64.sqrt() / 4.0, max_relative = 1e-14);
    }

    #[test]
    fn concentration_in_a_tiny_disk() {
        let k = ConvexDomain::unit_square();
        let ctr = Complex64::new(0.5, 0.5);
        let kp = ConvexDomain::disk(ctr, k.diameter() / 256.0).unwrap();
        let p = RootPolynomial::monic(vec![ctr + Complex64::new(0.001, 0.0); 20]);
        let r = zero_concentration_audit(&p, &k, &kp, 128.0);
        assert!(r.applicable && r.pass, "{r:?}");
        let few = RootPolynomial::monic(vec![ctr; 1].into_iter().chain(vec![Complex64::new(0.1, 0.1); 19]).collect());
        assert!(!zero_concentration_audit(&few, &k, &kp, 128.0).applicable);
    }
}
