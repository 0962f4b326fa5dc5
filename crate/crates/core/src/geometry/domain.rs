//! Convex domains (polygons and disks) with an arc-length boundary parametrization.
//!
//! The boundary is traversed counterclockwise starting at vertex 0 for a
//! polygon and at angle 0 for a disk. Tangent angles are lifted so that they
//! are nondecreasing on `[0, L)` and gain exactly `2π` over one period.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{cross, GeometryError, Point};

/// Serialized form of a domain, as read from and written to JSON files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainSpec {
    Polygon { vertices: Vec<[f64; 2]> },
    Disk { center: [f64; 2], radius: f64 },
}

#[derive(Clone, Debug)]
pub(crate) struct Polygon {
    pub vertices: Vec<Point>,
    pub edges: Vec<Point>,
    pub lengths: Vec<f64>,
    /// `cum[i]` is the arc length at vertex `i`; `cum[V] = L`.
    pub cum: Vec<f64>,
    /// Lifted direction angle of edge `i`.
    pub angles: Vec<f64>,
}

#[derive(Clone, Debug)]
pub(crate) enum Shape {
    Polygon(Polygon),
    Disk { center: Point, radius: f64 },
}

/// A compact convex body with nonempty interior.
#[derive(Clone, Debug)]
pub struct ConvexDomain {
    pub(crate) shape: Shape,
    diameter: f64,
    width: f64,
    perimeter: f64,
}

/// A point of the boundary together with its tangent-angle interval.
///
/// On a smooth stretch `alpha_minus == alpha_plus`. At a polygon vertex the
/// interval spans the exterior angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub s: f64,
    pub z: Point,
    pub alpha_minus: f64,
    pub alpha_plus: f64,
    pub vertex: Option<usize>,
}

impl BoundaryPoint {
    /// Supplementary angle `α₊ − α₋` (zero off the vertices).
    pub fn omega(&self) -> f64 {
        self.alpha_plus - self.alpha_minus
    }

    pub fn is_smooth(&self) -> bool {
        self.vertex.is_none()
    }

    /// Range of inner normal directions `σ = α + π/2`.
    pub fn normal_range(&self) -> (f64, f64) {
        (self.alpha_minus + FRAC_PI_2, self.alpha_plus + FRAC_PI_2)
    }

    /// Inner normal in the middle of the normal cone.
    pub fn mid_normal(&self) -> f64 {
        0.5 * (self.alpha_minus + self.alpha_plus) + FRAC_PI_2
    }

    /// `count` tangent angles evenly spread over `[α₋, α₊]`, endpoints included.
    /// A smooth point yields its single tangent.
    pub fn supporting_fan(&self, count: usize) -> Vec<f64> {
        if self.omega() <= 0.0 || count <= 1 {
            return vec![0.5 * (self.alpha_minus + self.alpha_plus)];
        }
        (0..count)
            .map(|k| self.alpha_minus + self.omega() * k as f64 / (count - 1) as f64)
            .collect()
    }
}

impl ConvexDomain {
    /// Builds a polygon from counterclockwise, strictly convex vertices.
    pub fn polygon(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if let Some(i) = vertices.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(GeometryError::NonFinite { index: i });
        }
        let edges: Vec<Point> = (0..n).map(|i| vertices[(i + 1) % n] - vertices[i]).collect();
        let lengths: Vec<f64> = edges.iter().map(|e| e.norm()).collect();
        if let Some(i) = lengths.iter().position(|&l| l == 0.0) {
            return Err(GeometryError::NotStrictlyConvex { index: (i + 1) % n });
        }
        let crosses: Vec<f64> = (0..n).map(|i| cross(edges[(i + n - 1) % n], edges[i])).collect();
        if crosses.iter().all(|&c| c < 0.0) {
            return Err(GeometryError::Clockwise);
        }
        for i in 0..n {
            let scale = lengths[(i + n - 1) % n] * lengths[i];
            if crosses[i] <= 1e-12 * scale {
                return Err(GeometryError::NotStrictlyConvex { index: i });
            }
        }
        // All left turns; the total turn must be one full revolution.
        let mut angles = Vec::with_capacity(n);
        angles.push(edges[0].arg());
        for i in 1..n {
            let turn = (edges[i] / edges[i - 1]).arg();
            angles.push(angles[i - 1] + turn);
        }
        let closing = (edges[0] / edges[n - 1]).arg();
        let total = angles[n - 1] - angles[0] + closing;
        if (total - TAU).abs() > 1e-9 {
            return Err(GeometryError::NotSimple);
        }
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        for l in &lengths {
            cum.push(cum.last().unwrap() + l);
        }
        let poly = Polygon { vertices, edges, lengths, cum, angles };
        let perimeter = poly.cum[n];
        let diameter = poly.diameter();
        let width = poly.width();
        Ok(Self { shape: Shape::Polygon(poly), diameter, width, perimeter })
    }

    pub fn disk(center: Point, radius: f64) -> Result<Self, GeometryError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeometryError::InvalidRadius(radius));
        }
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(GeometryError::NonFinite { index: 0 });
        }
        Ok(Self {
            shape: Shape::Disk { center, radius },
            diameter: 2.0 * radius,
            width: 2.0 * radius,
            perimeter: TAU * radius,
        })
    }

    pub fn unit_disk() -> Self {
        Self::disk(Complex64::new(0.0, 0.0), 1.0).unwrap()
    }

    /// The square `[0,1]²`.
    pub fn unit_square() -> Self {
        Self::rectangle(1.0, 1.0)
    }

    /// The rectangle `[0,a] × [0,b]`.
    pub fn rectangle(a: f64, b: f64) -> Self {
        Self::polygon(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(a, 0.0),
            Complex64::new(a, b),
            Complex64::new(0.0, b),
        ])
        .expect("rectangle with positive sides")
    }

    /// Regular `k`-gon centered at the origin with a vertex at `circumradius`.
    pub fn regular_polygon(k: usize, circumradius: f64) -> Result<Self, GeometryError> {
        let verts = (0..k)
            .map(|j| Complex64::from_polar(circumradius, TAU * j as f64 / k as f64))
            .collect();
        Self::polygon(verts)
    }

    pub fn from_spec(spec: &DomainSpec) -> Result<Self, GeometryError> {
        match spec {
            DomainSpec::Polygon { vertices } => {
                Self::polygon(vertices.iter().map(|v| Complex64::new(v[0], v[1])).collect())
            }
            DomainSpec::Disk { center, radius } => {
                Self::disk(Complex64::new(center[0], center[1]), *radius)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        let spec: DomainSpec =
            serde_json::from_str(text).map_err(|e| GeometryError::Parse(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> DomainSpec {
        match &self.shape {
            Shape::Polygon(p) => DomainSpec::Polygon {
                vertices: p.vertices.iter().map(|v| [v.re, v.im]).collect(),
            },
            Shape::Disk { center, radius } => {
                DomainSpec::Disk { center: [center.re, center.im], radius: *radius }
            }
        }
    }

    /// Image under `z ↦ scale·e^{i·rotation}·z + shift` with `scale > 0`.
    pub fn transformed(&self, scale: f64, rotation: f64, shift: Point) -> Result<Self, GeometryError> {
        let m = Complex64::from_polar(scale, rotation);
        match &self.shape {
            Shape::Polygon(p) => Self::polygon(p.vertices.iter().map(|&v| m * v + shift).collect()),
            Shape::Disk { center, radius } => Self::disk(m * center + shift, scale * radius),
        }
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn is_disk(&self) -> bool {
        matches!(self.shape, Shape::Disk { .. })
    }

    /// Absolute geometric tolerance, `1e-12·d`.
    pub fn tol(&self) -> f64 {
        1e-12 * self.diameter
    }

    pub fn vertices(&self) -> Option<&[Point]> {
        match &self.shape {
            Shape::Polygon(p) => Some(&p.vertices),
            Shape::Disk { .. } => None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().map_or(0, <[Point]>::len)
    }

    /// Arc length of vertex `k` (polygons only).
    pub fn vertex_arclength(&self, k: usize) -> f64 {
        match &self.shape {
            Shape::Polygon(p) => p.cum[k % p.vertices.len()],
            Shape::Disk { .. } => 0.0,
        }
    }

    /// Arc-length positions where the boundary is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Polygon(p) => p.cum[..p.vertices.len()].to_vec(),
            Shape::Disk { .. } => Vec::new(),
        }
    }

    /// A point guaranteed to be interior: the centroid.
    pub fn center(&self) -> Point {
        match &self.shape {
            Shape::Disk { center, .. } => *center,
            Shape::Polygon(p) => {
                let v0 = p.vertices[0];
                let mut acc = Complex64::new(0.0, 0.0);
                let mut area = 0.0;
                for i in 1..p.vertices.len() - 1 {
                    let a = 0.5 * cross(p.vertices[i] - v0, p.vertices[i + 1] - v0);
                    acc += (v0 + p.vertices[i] + p.vertices[i + 1]) * (a / 3.0);
                    area += a;
                }
                acc / area
            }
        }
    }

    pub fn area(&self) -> f64 {
        match &self.shape {
            Shape::Disk { radius, .. } => PI * radius * radius,
            Shape::Polygon(p) => {
                let v0 = p.vertices[0];
                (1..p.vertices.len() - 1)
                    .map(|i| 0.5 * cross(p.vertices[i] - v0, p.vertices[i + 1] - v0))
                    .sum()
            }
        }
    }

    pub(crate) fn wrap_s(&self, s: f64) -> f64 {
        let r = s.rem_euclid(self.perimeter);
        if r >= self.perimeter {
            0.0
        } else {
            r
        }
    }

    pub fn point_at(&self, s: f64) -> Point {
        let s = self.wrap_s(s);
        match &self.shape {
            Shape::Disk { center, radius } => center + Complex64::from_polar(*radius, s / radius),
            Shape::Polygon(p) => {
                let i = p.edge_index(s);
                p.vertices[i] + p.edges[i] * ((s - p.cum[i]) / p.lengths[i])
            }
        }
    }

    /// The boundary point at arc length `s` with its tangent interval.
    /// Positions within `1e-13·L` of a vertex snap onto the vertex.
    pub fn boundary_point(&self, s: f64) -> BoundaryPoint {
        let s = self.wrap_s(s);
        match &self.shape {
            Shape::Disk { center, radius } => {
                let alpha = s / radius + FRAC_PI_2;
                BoundaryPoint {
                    s,
                    z: center + Complex64::from_polar(*radius, s / radius),
                    alpha_minus: alpha,
                    alpha_plus: alpha,
                    vertex: None,
                }
            }
            Shape::Polygon(p) => {
                let n = p.vertices.len();
                let snap = 1e-13 * self.perimeter;
                let i = p.edge_index(s);
                if s - p.cum[i] <= snap {
                    return self.vertex_point(i);
                }
                if p.cum[i + 1] - s <= snap {
                    return self.vertex_point((i + 1) % n);
                }
                let alpha = p.angles[i];
                BoundaryPoint {
                    s,
                    z: p.vertices[i] + p.edges[i] * ((s - p.cum[i]) / p.lengths[i]),
                    alpha_minus: alpha,
                    alpha_plus: alpha,
                    vertex: None,
                }
            }
        }
    }

    /// Boundary point at polygon vertex `k`.
    pub fn vertex_point(&self, k: usize) -> BoundaryPoint {
        let Shape::Polygon(p) = &self.shape else {
            return self.boundary_point(0.0);
        };
        let n = p.vertices.len();
        let k = k % n;
        let alpha_minus = if k == 0 { p.angles[n - 1] - TAU } else { p.angles[k - 1] };
        BoundaryPoint {
            s: p.cum[k],
            z: p.vertices[k],
            alpha_minus,
            alpha_plus: p.angles[k],
            vertex: Some(k),
        }
    }

    /// Arc-length coordinate of the boundary point nearest to `z`.
    pub fn arclength_of(&self, z: Point) -> f64 {
        match &self.shape {
            Shape::Disk { center, radius } => ((z - center).arg()).rem_euclid(TAU) * radius,
            Shape::Polygon(p) => {
                let mut best = (f64::INFINITY, 0.0);
                for i in 0..p.vertices.len() {
                    let e = p.edges[i];
                    let t = (((z - p.vertices[i]) * e.conj()).re / e.norm_sqr()).clamp(0.0, 1.0);
                    let dist = (p.vertices[i] + e * t - z).norm();
                    if dist < best.0 {
                        best = (dist, p.cum[i] + t * p.lengths[i]);
                    }
                }
                self.wrap_s(best.1)
            }
        }
    }

    /// Membership in the closed domain, with tolerance `1e-12·d`.
    pub fn contains(&self, z: Point) -> bool {
        let tol = self.tol();
        match &self.shape {
            Shape::Disk { center, radius } => (z - center).norm() <= radius + tol,
            Shape::Polygon(p) => (0..p.vertices.len())
                .all(|i| cross(p.edges[i], z - p.vertices[i]) >= -tol * p.lengths[i]),
        }
    }

    /// Signed distance to the boundary: positive inside, negative outside.
    pub fn signed_distance(&self, z: Point) -> f64 {
        match &self.shape {
            Shape::Disk { center, radius } => radius - (z - center).norm(),
            Shape::Polygon(p) => {
                let inside = (0..p.vertices.len())
                    .map(|i| cross(p.edges[i], z - p.vertices[i]) / p.lengths[i])
                    .fold(f64::INFINITY, f64::min);
                if inside >= 0.0 {
                    inside
                } else {
                    -(z - self.project(z)).norm()
                }
            }
        }
    }

    /// Nearest point of the closed domain.
    pub fn project(&self, z: Point) -> Point {
        match &self.shape {
            Shape::Disk { center, radius } => {
                let r = (z - center).norm();
                if r <= *radius {
                    z
                } else {
                    center + (z - center) * (radius / r)
                }
            }
            Shape::Polygon(p) => {
                if (0..p.vertices.len()).all(|i| cross(p.edges[i], z - p.vertices[i]) >= 0.0) {
                    return z;
                }
                let mut best = (f64::INFINITY, z);
                for i in 0..p.vertices.len() {
                    let e = p.edges[i];
                    let t = (((z - p.vertices[i]) * e.conj()).re / e.norm_sqr()).clamp(0.0, 1.0);
                    let q = p.vertices[i] + e * t;
                    let dist = (q - z).norm();
                    if dist < best.0 {
                        best = (dist, q);
                    }
                }
                best.1
            }
        }
    }

    /// Uniform sample from the domain.
    pub fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match &self.shape {
            Shape::Disk { center, radius } => {
                let r = radius * rng.gen::<f64>().sqrt();
                center + Complex64::from_polar(r, TAU * rng.gen::<f64>())
            }
            Shape::Polygon(p) => {
                let v0 = p.vertices[0];
                let areas: Vec<f64> = (1..p.vertices.len() - 1)
                    .map(|i| cross(p.vertices[i] - v0, p.vertices[i + 1] - v0))
                    .collect();
                let total: f64 = areas.iter().sum();
                let mut pick = rng.gen::<f64>() * total;
                let mut tri = areas.len() - 1;
                for (k, a) in areas.iter().enumerate() {
                    if pick < *a {
                        tri = k;
                        break;
                    }
                    pick -= a;
                }
                sample_triangle(rng, v0, p.vertices[tri + 1], p.vertices[tri + 2])
            }
        }
    }

    /// Uniform (in arc length) sample from the boundary.
    pub fn sample_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> BoundaryPoint {
        self.boundary_point(rng.gen::<f64>() * self.perimeter)
    }

    /// Tangent-angle variation `α₊(b) − α₋(a)` over the closed arc from
    /// `a` to `b = a + len` (counterclockwise, `len < L`).
    pub fn tangent_variation(&self, a: f64, len: f64) -> f64 {
        let start = self.boundary_point(a);
        let end = self.boundary_point(a + len);
        let mut var = end.alpha_plus - start.alpha_minus;
        // Undo the lift when the arc passes through s = 0.
        while var < -1e-12 {
            var += TAU;
        }
        if len > 0.0 && var > TAU + 1e-9 {
            var -= TAU;
        }
        var
    }
}

impl Polygon {
    pub(crate) fn edge_index(&self, s: f64) -> usize {
        let n = self.vertices.len();
        let i = self.cum.partition_point(|&c| c <= s);
        i.saturating_sub(1).min(n - 1)
    }

    /// Rotating calipers over antipodal vertex pairs.
    fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let n = v.len();
        let mut j = 1;
        let mut best: f64 = 0.0;
        for i in 0..n {
            let ni = (i + 1) % n;
            while cross(v[ni] - v[i], v[(j + 1) % n] - v[i]) > cross(v[ni] - v[i], v[j] - v[i]) {
                j = (j + 1) % n;
            }
            best = best.max((v[i] - v[j]).norm()).max((v[ni] - v[j]).norm());
        }
        best
    }

    /// Minimal width: for each edge the farthest vertex is tracked with a
    /// caliper pointer, and the smallest edge-to-vertex height wins.
    fn width(&self) -> f64 {
        let v = &self.vertices;
        let n = v.len();
        let mut j = 1;
        let mut best = f64::INFINITY;
        for i in 0..n {
            let e = self.edges[i];
            while cross(e, v[(j + 1) % n] - v[i]) > cross(e, v[j] - v[i]) {
                j = (j + 1) % n;
            }
            best = best.min(cross(e, v[j] - v[i]) / self.lengths[i]);
        }
        best
    }
}

fn sample_triangle<R: Rng + ?Sized>(rng: &mut R, a: Point, b: Point, c: Point) -> Point {
    let (mut u, mut v) = (rng.gen::<f64>(), rng.gen::<f64>());
    if u + v > 1.0 {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    a + (b - a) * u + (c - a) * v
}
