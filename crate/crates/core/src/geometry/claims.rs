//! Checks for the pieces of a convex domain cut off near a boundary chord.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::domain::Shape;
use super::{cross, line_intersection, unit, BoundaryPoint, ConvexDomain, GeometryError, Point};

/// Outcome of sampling `K ∩ H` against the triangle `(ζ, T, ζ')`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangleCheck {
    pub apex: Point,
    pub samples: usize,
    pub violations: usize,
    /// Smallest distance-to-exterior of a sample, negative if outside.
    pub worst_margin: f64,
}

/// Angle, diameter and arc-length data for the piece of `K` on the side of
/// the chord `[ζ, ζ']` where the two tangents meet.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AngleDiamArc {
    pub s: f64,
    pub apex: Option<Point>,
    /// Angle at the apex; `None` for a flat piece.
    pub beta: Option<f64>,
    pub beta_floor: f64,
    pub diam_small: f64,
    pub diam_bound: f64,
    pub arc_small: f64,
    pub arc_bound: f64,
    /// Both points lie on one edge and the small side is the segment itself.
    pub flat: bool,
}

impl AngleDiamArc {
    pub fn beta_margin(&self) -> Option<f64> {
        self.beta.map(|b| b - self.beta_floor)
    }
    pub fn diam_margin(&self) -> f64 {
        self.diam_bound - self.diam_small
    }
    pub fn arc_margin(&self) -> f64 {
        self.arc_bound - self.arc_small
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmallSide {
    /// Sector `S_ζ[σ − π/2, σ − φ]`.
    Minus,
    /// Sector `S_ζ[σ + φ, σ + π/2]`.
    Plus,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TiltedSide {
    pub delta_minus: f64,
    pub delta_plus: f64,
    /// `None` when a chord vanishes or the longer one reaches the width.
    pub side: Option<SmallSide>,
}

/// Samples `K ∩ H` and counts points outside the triangle `(ζ, T, ζ')`.
///
/// `t_dir` and `t_dir_prime` are the directions of the half-lines issued
/// from `zeta` and `zeta_prime`; both must avoid the interior of `K`.
pub fn triangle_containment_check<R: Rng + ?Sized>(
    k: &ConvexDomain,
    zeta: Point,
    zeta_prime: Point,
    t_dir: f64,
    t_dir_prime: f64,
    samples: usize,
    rng: &mut R,
) -> Result<TriangleCheck, GeometryError> {
    let (a, b) = line_intersection(zeta, unit(t_dir), zeta_prime, unit(t_dir_prime))
        .ok_or(GeometryError::NoIntersection)?;
    let tol = k.tol();
    if a < -tol || b < -tol {
        return Err(GeometryError::NoIntersection);
    }
    let apex = zeta + unit(t_dir) * a;
    let chord = zeta_prime - zeta;
    let side = cross(chord, apex - zeta);
    if side.abs() <= tol * chord.norm() {
        return Err(GeometryError::Precondition("apex lies on the chord line".into()));
    }
    // Inward normal of the half-plane H.
    let nrm = Complex64::new(0.0, 1.0) * chord / chord.norm() * side.signum();
    let tri = if side > 0.0 { [zeta, zeta_prime, apex] } else { [zeta, apex, zeta_prime] };
    let inside_margin = |x: Point| {
        (0..3)
            .map(|i| {
                let e = tri[(i + 1) % 3] - tri[i];
                cross(e, x - tri[i]) / e.norm()
            })
            .fold(f64::INFINITY, f64::min)
    };
    let in_open_h = |x: Point| (nrm.conj() * (x - zeta)).re > tol;

    let mut points: Vec<Point> = Vec::with_capacity(samples + 1024);
    if let Some(v) = k.vertices() {
        points.extend(v.iter().copied());
    }
    for j in 0..1024 {
        points.push(k.point_at(k.perimeter() * j as f64 / 1024.0));
    }
    if let Some(sampler) = CutSampler::new(k, zeta, nrm) {
        points.extend((0..samples).map(|_| sampler.sample(rng)));
    }
    let mut out = TriangleCheck { apex, samples: 0, violations: 0, worst_margin: f64::INFINITY };
    let slack = 1e-10 * k.diameter();
    for x in points.into_iter().filter(|&x| in_open_h(x)) {
        let m = inside_margin(x);
        out.samples += 1;
        out.worst_margin = out.worst_margin.min(m);
        if m < -slack {
            out.violations += 1;
        }
    }
    Ok(out)
}

/// Uniform sampler for `K ∩ {x : Re(conj(nrm)·(x − origin)) ≥ 0}`.
enum CutSampler {
    Fan { apex: Point, rim: Vec<Point>, cum: Vec<f64> },
    Disk { center: Point, radius: f64, origin: Point, nrm: Point, a: (f64, f64), b: (f64, f64) },
}

impl CutSampler {
    fn new(k: &ConvexDomain, origin: Point, nrm: Point) -> Option<Self> {
        match &k.shape {
            Shape::Polygon(p) => {
                let piece = clip_polygon(&p.vertices, origin, nrm);
                if piece.len() < 3 {
                    return None;
                }
                let apex = piece[0];
                let rim = piece[1..].to_vec();
                let mut cum = vec![0.0];
                for i in 0..rim.len() - 1 {
                    let a = 0.5 * cross(rim[i] - apex, rim[i + 1] - apex);
                    cum.push(cum.last().unwrap() + a.max(0.0));
                }
                (*cum.last().unwrap() > 0.0).then_some(Self::Fan { apex, rim, cum })
            }
            Shape::Disk { center, radius } => {
                let e = (nrm.conj() * (center - origin)).re;
                if e + radius <= 0.0 {
                    return None;
                }
                let along = Complex64::new(0.0, 1.0) * nrm;
                let bc = (along.conj() * (center - origin)).re;
                let half = if e >= 0.0 { *radius } else { (radius * radius - e * e).sqrt() };
                Some(Self::Disk {
                    center: *center,
                    radius: *radius,
                    origin,
                    nrm,
                    a: ((e - radius).max(0.0), e + radius),
                    b: (bc - half, bc + half),
                })
            }
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            Self::Fan { apex, rim, cum } => {
                let total = *cum.last().unwrap();
                let pick = rng.gen::<f64>() * total;
                let i = cum.partition_point(|&c| c <= pick).clamp(1, rim.len() - 1) - 1;
                let (mut u, mut v) = (rng.gen::<f64>(), rng.gen::<f64>());
                if u + v > 1.0 {
                    u = 1.0 - u;
                    v = 1.0 - v;
                }
                apex + (rim[i] - apex) * u + (rim[i + 1] - apex) * v
            }
            Self::Disk { center, radius, origin, nrm, a, b } => {
                let along = Complex64::new(0.0, 1.0) * nrm;
                loop {
                    let x = origin
                        + nrm * rng.gen_range(a.0..=a.1)
                        + along * rng.gen_range(b.0..=b.1);
                    if (x - center).norm() <= *radius {
                        return x;
                    }
                }
            }
        }
    }
}

/// Sutherland–Hodgman clip of a convex polygon to a closed half-plane.
/// Near-duplicate output vertices are merged.
pub(crate) fn clip_polygon(verts: &[Point], origin: Point, nrm: Point) -> Vec<Point> {
    let f = |x: Point| (nrm.conj() * (x - origin)).re;
    let n = verts.len();
    let mut out: Vec<Point> = Vec::with_capacity(n + 2);
    for i in 0..n {
        let (a, b) = (verts[i], verts[(i + 1) % n]);
        let (fa, fb) = (f(a), f(b));
        if fa >= 0.0 {
            out.push(a);
        }
        if (fa >= 0.0) != (fb >= 0.0) {
            out.push(a + (b - a) * (fa / (fa - fb)));
        }
    }
    let scale = verts.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let mut merged: Vec<Point> = Vec::with_capacity(out.len());
    for x in out {
        if merged.last().map_or(true, |&y: &Point| (x - y).norm() > 1e-13 * scale) {
            merged.push(x);
        }
    }
    while merged.len() > 1 && (merged[0] - *merged.last().unwrap()).norm() <= 1e-13 * scale {
        merged.pop();
    }
    // Drop vertices that became collinear after clipping.
    let m = merged.len();
    if m < 3 {
        return merged;
    }
    (0..m)
        .filter(|&i| {
            let (p, c, nx) = (merged[(i + m - 1) % m], merged[i], merged[(i + 1) % m]);
            cross(c - p, nx - c) > 1e-12 * (c - p).norm() * (nx - c).norm()
        })
        .map(|i| merged[i])
        .collect()
}

/// Bounds on the piece of `K` beyond the chord `[ζ, ζ']` when `0 < s < w`.
///
/// `alpha` and `alpha_prime` pick the tangent directions inside the tangent
/// intervals; `None` takes the middle of each interval.
pub fn angle_diam_arc_bounds(
    k: &ConvexDomain,
    zeta: &BoundaryPoint,
    zeta_prime: &BoundaryPoint,
    alpha: Option<f64>,
    alpha_prime: Option<f64>,
) -> Result<AngleDiamArc, GeometryError> {
    let (d, w) = (k.diameter(), k.width());
    let chord = zeta_prime.z - zeta.z;
    let s = chord.norm();
    if !(s > 0.0 && s < w) {
        return Err(GeometryError::Precondition(format!("need 0 < s < w, got s = {s}")));
    }
    let a = alpha.unwrap_or(0.5 * (zeta.alpha_minus + zeta.alpha_plus));
    let ap = alpha_prime.unwrap_or(0.5 * (zeta_prime.alpha_minus + zeta_prime.alpha_plus));
    let beta_floor = ((w - s) / d).asin();
    let diam_bound = s * d / (w - s);
    let arc_bound = 2.0 * s * d / (w - s);
    let parallel = |phi: f64| cross(unit(phi), chord).abs() <= 1e-12 * s;
    if parallel(a) || parallel(ap) {
        let mid = 0.5 * (zeta.z + zeta_prime.z);
        if k.signed_distance(mid).abs() <= k.tol() && parallel(a) && parallel(ap) {
            return Ok(AngleDiamArc {
                s,
                apex: None,
                beta: None,
                beta_floor,
                diam_small: s,
                diam_bound,
                arc_small: s,
                arc_bound,
                flat: true,
            });
        }
        return Err(GeometryError::DegenerateTangent);
    }
    let (t, _) = line_intersection(zeta.z, unit(a), zeta_prime.z, unit(ap))
        .ok_or(GeometryError::DegenerateTangent)?;
    let apex = zeta.z + unit(a) * t;
    let beta = ((zeta.z - apex) / (zeta_prime.z - apex)).arg().abs();
    let side = cross(chord, apex - zeta.z).signum();
    let nrm = Complex64::new(0.0, 1.0) * chord / s * side;

    // Arc of Γ on the apex side: of the two arcs between the points, the one
    // whose midpoint lies in H.
    let l = k.perimeter();
    let fwd = (zeta_prime.s - zeta.s).rem_euclid(l);
    let mid_fwd = k.point_at(zeta.s + 0.5 * fwd);
    let arc_small = if (nrm.conj() * (mid_fwd - zeta.z)).re >= 0.0 { fwd } else { l - fwd };

    let diam_small = match &k.shape {
        Shape::Polygon(p) => {
            let piece = clip_polygon(&p.vertices, zeta.z, nrm);
            let mut best: f64 = s;
            for i in 0..piece.len() {
                for j in i + 1..piece.len() {
                    best = best.max((piece[i] - piece[j]).norm());
                }
            }
            best
        }
        Shape::Disk { radius, .. } => {
            if arc_small <= PI * radius {
                s
            } else {
                2.0 * radius
            }
        }
    };
    Ok(AngleDiamArc {
        s,
        apex: Some(apex),
        beta: Some(beta),
        beta_floor,
        diam_small,
        diam_bound,
        arc_small,
        arc_bound,
        flat: false,
    })
}

/// Chords along `σ ∓ φ` through `zeta` and, when `0 < δ_min ≤ δ_max < w`,
/// the sector that holds the small part of `K` cut by the shorter one.
pub fn tilted_side_classification(k: &ConvexDomain, zeta: Point, sigma: f64, phi: f64) -> TiltedSide {
    let delta_minus = k.chord(zeta, sigma - phi).delta;
    let delta_plus = k.chord(zeta, sigma + phi).delta;
    let tol = k.tol();
    let ok = phi > 0.0
        && phi < FRAC_PI_2
        && delta_minus.min(delta_plus) > tol
        && delta_minus.max(delta_plus) < k.width();
    let side = ok.then_some(if delta_minus <= delta_plus { SmallSide::Minus } else { SmallSide::Plus });
    TiltedSide { delta_minus, delta_plus, side }
}

/// Whether `x` lies in the closed sector `S_ζ[a, b]` (angles taken mod 2π).
pub fn in_sector(zeta: Point, x: Point, a: f64, b: f64) -> bool {
    if x == zeta {
        return true;
    }
    let ang = (x - zeta).arg();
    (ang - a).rem_euclid(TAU) <= (b - a).rem_euclid(TAU) + 1e-12
}
