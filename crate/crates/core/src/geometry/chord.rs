//! Intersections of lines through boundary points with the domain.

use serde::{Deserialize, Serialize};

use super::domain::Shape;
use super::{cross, unit, ConvexDomain, Point};

/// `K ∩ (ζ + e^{iφ}ℝ)`, stored as the parameter interval `[t_min, t_max]`
/// of `ζ + t·e^{iφ}`.
///
/// `far_end` is the endpoint farther from `ζ`; when `ζ` is an endpoint of
/// the chord it is the `D` with `K ∩ ℓ = [ζ, D]`. A zero length is a valid
/// outcome and means the line only touches the domain at `ζ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chord {
    pub zeta: Point,
    pub direction: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub delta: f64,
    pub far_end: Point,
}

impl Chord {
    pub fn endpoints(&self) -> (Point, Point) {
        let u = unit(self.direction);
        (self.zeta + u * self.t_min, self.zeta + u * self.t_max)
    }
}

impl ConvexDomain {
    /// Chord cut by the full line through `zeta` with direction `phi`.
    pub fn chord(&self, zeta: Point, phi: f64) -> Chord {
        let u = unit(phi);
        let (lo, hi) = match &self.shape {
            Shape::Disk { center, radius } => {
                let w = zeta - center;
                let b = (u.conj() * w).re;
                let disc = b * b - (w.norm_sqr() - radius * radius);
                if disc <= 0.0 {
                    (0.0, 0.0)
                } else {
                    let r = disc.sqrt();
                    (-b - r, -b + r)
                }
            }
            Shape::Polygon(p) => {
                let tol = self.tol();
                let mut lo = f64::NEG_INFINITY;
                let mut hi = f64::INFINITY;
                for i in 0..p.vertices.len() {
                    let len = p.lengths[i];
                    let a = cross(p.edges[i], zeta - p.vertices[i]);
                    let b = cross(p.edges[i], u);
                    if b.abs() <= 1e-12 * len {
                        if a < -tol * len {
                            lo = 0.0;
                            hi = 0.0;
                            break;
                        }
                        continue;
                    }
                    let t = -a / b;
                    if b > 0.0 {
                        lo = lo.max(t);
                    } else {
                        hi = hi.min(t);
                    }
                }
                if hi < lo {
                    (0.0, 0.0)
                } else {
                    (lo, hi)
                }
            }
        };
        // ζ lies on the boundary, so the interval contains 0 up to rounding.
        let lo = lo.min(0.0);
        let hi = hi.max(0.0);
        let t_far = if hi >= -lo { hi } else { lo };
        Chord {
            zeta,
            direction: phi,
            t_min: lo,
            t_max: hi,
            delta: hi - lo,
            far_end: zeta + u * t_far,
        }
    }

    /// Whether the line through `zeta` with direction `phi` meets the interior.
    pub fn line_meets_interior(&self, zeta: Point, phi: f64) -> bool {
        let u = unit(phi);
        let tol = self.tol();
        match &self.shape {
            Shape::Disk { center, radius } => cross(u, center - zeta).abs() < radius - tol,
            Shape::Polygon(p) => {
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for v in &p.vertices {
                    let h = cross(u, v - zeta);
                    lo = lo.min(h);
                    hi = hi.max(h);
                }
                lo < -tol && hi > tol
            }
        }
    }
}
