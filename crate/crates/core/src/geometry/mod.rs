//! Planar convex bodies: metric functionals, chords, and the elementary
//! claims about boundary pieces cut off by short chords.

mod arcs;
mod chord;
mod claims;
mod domain;
mod functionals;
mod transfinite;

use num_complex::Complex64;

pub use arcs::ArcSet;
pub use chord::Chord;
pub use claims::{
    angle_diam_arc_bounds, in_sector, tilted_side_classification, triangle_containment_check, AngleDiamArc,
    SmallSide, TiltedSide, TriangleCheck,
};
pub use domain::{BoundaryPoint, ConvexDomain, DomainSpec};
pub use transfinite::{fekete_points, transfinite_diameter_estimate, TransfiniteEstimate};

/// Points of the plane are complex numbers.
pub type Point = Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("non-finite coordinate at vertex {index}")]
    NonFinite { index: usize },
    #[error("polygon is not strictly convex at vertex {index}")]
    NotStrictlyConvex { index: usize },
    #[error("polygon vertices are in clockwise order")]
    Clockwise,
    #[error("polygon winds more than once")]
    NotSimple,
    #[error("disk radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("cannot parse domain: {0}")]
    Parse(String),
    #[error("the two half-lines do not intersect")]
    NoIntersection,
    #[error("a tangent line coincides with the chord line")]
    DegenerateTangent,
    #[error("precondition not met: {0}")]
    Precondition(String),
}

/// `Im(conj(a)·b)`, the signed area of the parallelogram spanned by `a`, `b`.
#[inline]
pub(crate) fn cross(a: Point, b: Point) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Unit vector with direction angle `phi`.
#[inline]
pub(crate) fn unit(phi: f64) -> Point {
    Complex64::new(phi.cos(), phi.sin())
}

/// Intersection of the lines `a + t·u` and `b + s·v`, returned as `(t, s)`.
pub(crate) fn line_intersection(a: Point, u: Point, b: Point, v: Point) -> Option<(f64, f64)> {
    let den = cross(u, v);
    if den.abs() <= 1e-14 * u.norm() * v.norm() {
        return None;
    }
    let w = b - a;
    Some((cross(w, v) / den, cross(w, u) / den))
}
