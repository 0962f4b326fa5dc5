//! Depth: the largest `h` such that every boundary point admits a normal
//! line meeting the domain in a segment of length at least `h`.

use std::f64::consts::FRAC_PI_2;

use super::domain::Shape;
use super::ConvexDomain;
use crate::util::golden_max;

const EDGE_MESH: usize = 64;
const FAN: usize = 33;
const ANGLE_TOL: f64 = 1e-10;

impl ConvexDomain {
    /// Depth `h_K`. Zero for domains with an acute corner.
    pub fn depth(&self) -> f64 {
        let p = match &self.shape {
            Shape::Disk { radius, .. } => return 2.0 * radius,
            Shape::Polygon(p) => p,
        };
        let mut h = f64::INFINITY;
        for i in 0..p.vertices.len() {
            // Normal chords along an edge form a parallel family, so their
            // length is concave in the position; the mesh includes both ends,
            // evaluated with the edge normal (the one-sided limits).
            let sigma = p.angles[i] + FRAC_PI_2;
            for k in 0..=EDGE_MESH {
                let z = p.vertices[i] + p.edges[i] * (k as f64 / EDGE_MESH as f64);
                h = h.min(self.chord(z, sigma).delta);
            }
            h = h.min(self.best_normal_chord(i));
        }
        h.max(0.0)
    }

    /// Longest normal chord at vertex `k`, maximized over the normal cone.
    fn best_normal_chord(&self, k: usize) -> f64 {
        let b = self.vertex_point(k);
        let (lo, hi) = b.normal_range();
        let f = |sigma: f64| self.chord(b.z, sigma).delta;
        let step = (hi - lo) / (FAN - 1) as f64;
        let (mut best_j, mut best) = (0, f64::NEG_INFINITY);
        for j in 0..FAN {
            let v = f(lo + step * j as f64);
            if v > best {
                best = v;
                best_j = j;
            }
        }
        let a = lo + step * best_j.saturating_sub(1) as f64;
        let c = (lo + step * (best_j + 1) as f64).min(hi);
        best.max(golden_max(f, a, c, ANGLE_TOL).1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn depth_of_standard_shapes() {
        assert_relative_eq!(ConvexDomain::unit_square().depth(), 1.0, epsilon = 1e-12);
        let tri = ConvexDomain::regular_polygon(3, 1.0).unwrap();
        assert!(tri.depth() < 1e-10);
        let disk = ConvexDomain::disk(Complex64::new(0.0, 0.0), 1.5).unwrap();
        assert_relative_eq!(disk.depth(), 3.0, epsilon = 1e-14);
        let hex = ConvexDomain::regular_polygon(6, 1.0).unwrap();
        assert!(hex.depth() > 1.0);
    }
}
