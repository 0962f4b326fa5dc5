//! Random instances for audits, searches and tests. Every trial owns a
//! ChaCha stream derived from `(seed, trial index)`, so batches are
//! reproducible regardless of scheduling.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{cross, ConvexDomain, Point};
use crate::poly::RootPolynomial;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Convex hull (counterclockwise, collinear points dropped).
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 1] - hull[hull.len() - 2], p - hull[hull.len() - 2]) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Random convex polygon with between 3 and `max_vertices` vertices:
/// the hull of jittered points on a random ellipse, rotated and shifted.
pub fn random_convex_polygon<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize) -> ConvexDomain {
    loop {
        let count = rng.gen_range(3..=max_vertices.max(3));
        let aspect = rng.gen_range(0.3..=1.0);
        let rot = rng.gen_range(0.0..TAU);
        let pts: Vec<Point> = (0..count)
            .map(|_| {
                let t = rng.gen_range(0.0..TAU);
                let r = rng.gen_range(0.7..=1.0);
                Complex64::new(r * t.cos(), aspect * r * t.sin()) * Complex64::from_polar(1.0, rot)
            })
            .collect();
        let hull = convex_hull(&pts);
        if hull.len() < 3 {
            continue;
        }
        let shift = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if let Ok(k) = ConvexDomain::polygon(hull.iter().map(|&v| v + shift).collect()) {
            if k.width() > 0.05 * k.diameter() {
                return k;
            }
        }
    }
}

pub fn random_roots_in<R: Rng + ?Sized>(k: &ConvexDomain, rng: &mut R, n: usize) -> Vec<Point> {
    (0..n).map(|_| k.sample_interior(rng)).collect()
}

/// Roots anywhere in a box three diameters wide around the domain.
pub fn random_roots_unrestricted<R: Rng + ?Sized>(k: &ConvexDomain, rng: &mut R, n: usize) -> Vec<Point> {
    let c = k.center();
    let h = 1.5 * k.diameter();
    (0..n)
        .map(|_| c + Complex64::new(rng.gen_range(-h..h), rng.gen_range(-h..h)))
        .collect()
}

/// A polynomial with roots in `k` and a random unimodular leading coefficient.
pub fn random_poly_in<R: Rng + ?Sized>(k: &ConvexDomain, rng: &mut R, n: usize) -> RootPolynomial {
    let lead = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
    RootPolynomial::new(lead, random_roots_in(k, rng, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_square_with_inner_points() {
        let c = |x, y| Complex64::new(x, y);
        let h = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.5), c(1.0, 1.0), c(0.0, 1.0), c(0.5, 0.0)]);
        assert_eq!(h.len(), 4);
        assert!(ConvexDomain::polygon(h).is_ok());
    }

    #[test]
    fn streams_are_reproducible() {
        let a: f64 = trial_rng(7, 3).gen();
        let b: f64 = trial_rng(7, 3).gen();
        let c: f64 = trial_rng(7, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_polygons_are_valid() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..50 {
            let k = random_convex_polygon(&mut rng, 10);
            assert!(k.width() <= k.diameter() && k.diameter() <= k.perimeter() / 2.0);
        }
    }
}
