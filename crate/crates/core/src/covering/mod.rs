//! Boundary points whose tilted chords are short, and the padded cover of
//! the arcs they cut off.
//!
//! A point is good when one of its two tilted lines (at `±2θ` from the
//! inner normal) misses the interior or both tilted chords have length at
//! least `r`. Every other point spans an elementary arc between itself and
//! the far end of its short chord. A maximal pairwise-disjoint family of
//! those arcs (at most four of them) padded by `4rd/w` on both sides covers
//! every bad point.

mod cases;

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{ArcSet, BoundaryPoint, ConvexDomain};

pub use cases::{case_split, gate_degree, n0, n1, r1, r_schedule, CaseKind, CaseSplit};

/// Initial uniform mesh for locating bad points.
pub const INITIAL_MESH: usize = 2048;
/// Uniform part of the mesh used to confirm `𝒢 ∪ ℒ = Γ`.
pub const VERIFY_MESH: usize = 10_000;
/// Normals tried at a polygon vertex.
const NORMAL_FAN: usize = 33;
/// Extra mesh points on each side of a vertex.
const VERTEX_MESH: usize = 96;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoveringError {
    #[error("r must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("r = {r} violates r < w/108 = {max}")]
    RadiusTooLarge { r: f64, max: f64 },
    #[error("the cover is all of the boundary; try r below {suggested_max_r}")]
    NoCutPoint { suggested_max_r: f64 },
    #[error("{0} pairwise disjoint elementary arcs; at most 4 can exist")]
    FamilyTooLarge(usize),
}

/// `θ = arcsin(w/d)/80`.
pub fn covering_theta(k: &ConvexDomain) -> f64 {
    (k.width() / k.diameter()).min(1.0).asin() / 80.0
}

/// `φ = π/2 − 2θ`, the angle between a tilted line and the tangent.
pub fn phi_of(theta: f64) -> f64 {
    FRAC_PI_2 - 2.0 * theta
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodPoint {
    pub good: bool,
    /// Inner normal that decided the verdict (the mid normal when bad).
    pub sigma: f64,
    pub delta_minus: f64,
    pub delta_plus: f64,
    pub misses_minus: bool,
    pub misses_plus: bool,
}

fn verdict_for(k: &ConvexDomain, b: &BoundaryPoint, sigma: f64, r: f64, theta: f64) -> GoodPoint {
    let (lm, lp) = (sigma - 2.0 * theta, sigma + 2.0 * theta);
    let misses_minus = !k.line_meets_interior(b.z, lm);
    let misses_plus = !k.line_meets_interior(b.z, lp);
    let delta_minus = k.chord(b.z, lm).delta;
    let delta_plus = k.chord(b.z, lp).delta;
    let good = misses_minus || misses_plus || (delta_minus >= r && delta_plus >= r);
    GoodPoint { good, sigma, delta_minus, delta_plus, misses_minus, misses_plus }
}

/// Good-point test at `b`. At a vertex every normal of a fan spanning the
/// normal cone is tried, and the point is good if one of them qualifies.
pub fn good_point_test(k: &ConvexDomain, b: &BoundaryPoint, r: f64, theta: f64) -> GoodPoint {
    if b.is_smooth() {
        return verdict_for(k, b, b.mid_normal(), r, theta);
    }
    let (lo, hi) = b.normal_range();
    for j in 0..NORMAL_FAN {
        let sigma = lo + (hi - lo) * j as f64 / (NORMAL_FAN - 1) as f64;
        let v = verdict_for(k, b, sigma, r, theta);
        if v.good {
            return v;
        }
    }
    verdict_for(k, b, b.mid_normal(), r, theta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcKind {
    Elementary,
    Component,
    Padding,
}

/// A closed boundary arc `[start_s, end_s]`; `end_s = start_s + length` may
/// exceed the perimeter when the arc passes through `s = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryArc {
    pub start_s: f64,
    pub end_s: f64,
    pub length: f64,
    pub kind: ArcKind,
    /// `α₊(end) − α₋(start)`.
    pub variation: f64,
}

impl BoundaryArc {
    fn new(k: &ConvexDomain, start: f64, length: f64, kind: ArcKind) -> Self {
        let start_s = start.rem_euclid(k.perimeter());
        Self { start_s, end_s: start_s + length, length, kind, variation: k.tangent_variation(start_s, length) }
    }

    /// Start offset measured counterclockwise from `origin`.
    pub fn offset_from(&self, origin: f64, perimeter: f64) -> f64 {
        (self.start_s - origin).rem_euclid(perimeter)
    }
}

/// An elementary arc with the point that generated it and its two checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementaryArc {
    pub arc: BoundaryArc,
    pub origin_s: f64,
    pub chord: f64,
    /// `length ≤ 4rd/w`.
    pub length_ok: bool,
    /// `Var[α] ≥ φ`.
    pub variation_ok: bool,
}

/// Arc-length positions to test: a uniform mesh plus points clustered on
/// both sides of each vertex within `reach`.
fn candidate_mesh(k: &ConvexDomain, uniform: usize, reach: f64) -> Vec<f64> {
    let l = k.perimeter();
    let mut s: Vec<f64> = (0..uniform).map(|j| l * j as f64 / uniform as f64).collect();
    for v in k.breakpoints() {
        s.push(v);
        for j in 1..=VERTEX_MESH {
            let t = reach * (j as f64 / VERTEX_MESH as f64).powi(2);
            s.push((v - t).rem_euclid(l));
            s.push((v + t).rem_euclid(l));
        }
    }
    s.sort_by(f64::total_cmp);
    s.dedup();
    s
}

/// Bad points of the boundary for `(r, θ)`: mesh points that fail the test,
/// with each good/bad transition bisected down to `min(1e-6·L, 1e-3·r)`.
pub fn bad_points(k: &ConvexDomain, r: f64, theta: f64) -> Vec<f64> {
    let l = k.perimeter();
    let reach = 4.0 * r * k.diameter() / k.width();
    let mesh = candidate_mesh(k, INITIAL_MESH, reach);
    let good: Vec<bool> = mesh.iter().map(|&s| good_point_test(k, &k.boundary_point(s), r, theta).good).collect();
    let tol = (1e-6 * l).min(1e-3 * r);
    let is_good = |s: f64| good_point_test(k, &k.boundary_point(s), r, theta).good;
    let m = mesh.len();
    let mut out: Vec<f64> = (0..m).filter(|&i| !good[i]).map(|i| mesh[i]).collect();
    for i in 0..m {
        let j = (i + 1) % m;
        if good[i] == good[j] {
            continue;
        }
        let (mut a, mut b) = (mesh[i], if j == 0 { mesh[0] + l } else { mesh[j] });
        let a_good = good[i];
        while b - a > tol {
            let c = 0.5 * (a + b);
            if is_good(c) == a_good {
                a = c;
            } else {
                b = c;
            }
        }
        out.push((if a_good { b } else { a }).rem_euclid(l));
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Elementary arcs generated by the bad points: for each short tilted chord
/// `[ζ, D]` the smaller boundary arc between `ζ` and `D`. Arcs that break
/// the length bound `4rd/w` or the variation bound `φ` are kept and flagged.
pub fn elementary_arcs(k: &ConvexDomain, r: f64, theta: f64) -> Vec<ElementaryArc> {
    let l = k.perimeter();
    let bound = 4.0 * r * k.diameter() / k.width();
    let phi = phi_of(theta);
    let vtol = 1e-9;
    let mut out = Vec::new();
    for s in bad_points(k, r, theta) {
        let b = k.boundary_point(s);
        let v = good_point_test(k, &b, r, theta);
        for (dir, delta, misses) in [
            (v.sigma - 2.0 * theta, v.delta_minus, v.misses_minus),
            (v.sigma + 2.0 * theta, v.delta_plus, v.misses_plus),
        ] {
            if misses || delta >= r {
                continue;
            }
            let far = k.arclength_of(k.chord(b.z, dir).far_end);
            let ahead = (far - b.s).rem_euclid(l);
            let (start, len) = if ahead <= l - ahead { (b.s, ahead) } else { (far, l - ahead) };
            let arc = BoundaryArc::new(k, start, len, ArcKind::Elementary);
            out.push(ElementaryArc {
                arc,
                origin_s: b.s,
                chord: delta,
                length_ok: len <= bound * (1.0 + vtol),
                variation_ok: arc.variation >= phi - vtol,
            });
        }
    }
    out.sort_by(|a, b| a.arc.start_s.total_cmp(&b.arc.start_s).then(a.arc.length.total_cmp(&b.arc.length)));
    out.dedup_by(|a, b| (a.arc.start_s - b.arc.start_s).abs() <= 1e-14 * l && (a.arc.length - b.arc.length).abs() <= 1e-14 * l);
    out
}

/// Midpoint of the longest gap of `set`, or `0` when the set is empty.
fn longest_gap_midpoint(set: &ArcSet) -> Option<f64> {
    let l = set.period();
    if set.is_empty() {
        return Some(0.0);
    }
    let gaps = set.complement().components();
    let (a, len) = gaps.into_iter().max_by(|x, y| x.1.total_cmp(&y.1))?;
    (len > 0.0).then(|| (a + 0.5 * len).rem_euclid(l))
}

/// Greedy earliest-end selection of pairwise disjoint arcs, scanning
/// counterclockwise from the midpoint of the longest gap of their union.
/// More than four members means a geometry or mesh bug.
pub fn maximal_disjoint_family(k: &ConvexDomain, arcs: &[ElementaryArc]) -> Result<Vec<ElementaryArc>, CoveringError> {
    let l = k.perimeter();
    let union = ArcSet::from_arcs(l, arcs.iter().map(|a| (a.arc.start_s, a.arc.length)));
    let origin = longest_gap_midpoint(&union).unwrap_or(0.0);
    let mut order: Vec<(f64, f64, usize)> = arcs
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let off = a.arc.offset_from(origin, l);
            (off, off + a.arc.length, i)
        })
        .collect();
    order.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.total_cmp(&y.0)));
    let mut chosen: Vec<(f64, f64, usize)> = Vec::new();
    for item in order {
        if chosen.last().map_or(true, |last| item.0 > last.1) {
            chosen.push(item);
        }
    }
    // Without a gap the last arc may wrap onto the first.
    if chosen.len() >= 2 {
        let (first, last) = (chosen[0], chosen[chosen.len() - 1]);
        if last.1 >= first.0 + l {
            chosen.pop();
        }
    }
    if chosen.len() > 4 {
        return Err(CoveringError::FamilyTooLarge(chosen.len()));
    }
    Ok(chosen.into_iter().map(|c| arcs[c.2]).collect())
}

/// Whether two closed arcs share a point.
pub fn arcs_intersect(a: &BoundaryArc, b: &BoundaryArc, perimeter: f64) -> bool {
    let off = b.offset_from(a.start_s, perimeter);
    off <= a.length || off + b.length >= perimeter
}

/// One connected component `𝒜 = [Q, Q']` of the cover with its central
/// elementary arc `[P, P']` and flanks `[Q, P]`, `[P', Q']`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringComponent {
    pub arc: BoundaryArc,
    pub central: BoundaryArc,
    pub minus_flank: BoundaryArc,
    pub plus_flank: BoundaryArc,
    /// Family arcs inside this component.
    pub members: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub name: String,
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub pass: bool,
}

impl InvariantCheck {
    /// `lower < value` (or `≤` when `closed_lower`) and `value ≤ upper`, with
    /// a relative slack of `1e-9`.
    fn new(name: impl Into<String>, value: f64, lower: Option<f64>, closed_lower: bool, upper: Option<f64>) -> Self {
        let slack = |b: f64| 1e-9 * b.abs().max(1e-300);
        let lo_ok = lower.map_or(true, |b| if closed_lower { value >= b - slack(b) } else { value > b - slack(b) });
        let hi_ok = upper.map_or(true, |b| value <= b + slack(b));
        Self { name: name.into(), value, lower, upper, pass: lo_ok && hi_ok }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Covering {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    /// `rd/w`, the unit of every length bound.
    pub unit: f64,
    pub perimeter: f64,
    /// `C`, the midpoint of the longest gap of `Γ ∖ ℒ`.
    pub cut_point: f64,
    pub cover: ArcSet,
    pub components: Vec<CoveringComponent>,
    pub family: Vec<ElementaryArc>,
    pub elementary_count: usize,
    pub flagged_length: usize,
    pub flagged_variation: usize,
    pub checks: Vec<InvariantCheck>,
}

impl Covering {
    pub fn k0(&self) -> usize {
        self.components.len()
    }

    pub fn measure(&self) -> f64 {
        self.cover.measure()
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn component_set(&self, m: usize) -> ArcSet {
        let a = &self.components[m].arc;
        ArcSet::from_arcs(self.perimeter, [(a.start_s, a.length)])
    }

    /// Plain-number view with positions measured from the cut point.
    pub fn export(&self) -> CoveringExport {
        let rel = |a: &BoundaryArc| {
            let s = a.offset_from(self.cut_point, self.perimeter);
            [s, s + a.length]
        };
        CoveringExport {
            r: self.r,
            theta: self.theta,
            cut_point: self.cut_point,
            perimeter: self.perimeter,
            k0: self.k0(),
            measure: self.measure(),
            measure_bound: 48.0 * self.unit,
            components: self
                .components
                .iter()
                .map(|c| ComponentExport {
                    span: rel(&c.arc),
                    central: rel(&c.central),
                    minus_flank: rel(&c.minus_flank),
                    plus_flank: rel(&c.plus_flank),
                    length: c.arc.length,
                    members: c.members,
                })
                .collect(),
            checks: self.checks.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentExport {
    /// `[start_s, end_s]` relative to the cut point.
    pub span: [f64; 2],
    pub central: [f64; 2],
    pub minus_flank: [f64; 2],
    pub plus_flank: [f64; 2],
    pub length: f64,
    pub members: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringExport {
    pub r: f64,
    pub theta: f64,
    pub cut_point: f64,
    pub perimeter: f64,
    pub k0: usize,
    pub measure: f64,
    pub measure_bound: f64,
    pub components: Vec<ComponentExport>,
    pub checks: Vec<InvariantCheck>,
}

/// Builds `ℒ` for `(r, θ)` and records every structural check. Only a
/// missing cut point or an oversized family is an error; broken bounds show
/// up as failing entries of `checks`.
pub fn build_covering(k: &ConvexDomain, r: f64, theta: f64) -> Result<Covering, CoveringError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(CoveringError::InvalidRadius(r));
    }
    let (d, w, l) = (k.diameter(), k.width(), k.perimeter());
    if 108.0 * r * d / w >= d {
        return Err(CoveringError::RadiusTooLarge { r, max: w / 108.0 });
    }
    let unit = r * d / w;
    let elementary = elementary_arcs(k, r, theta);
    let family = maximal_disjoint_family(k, &elementary)?;
    let pad = 4.0 * unit;
    let cover = ArcSet::from_arcs(l, family.iter().map(|a| (a.arc.start_s - pad, a.arc.length + 2.0 * pad)));
    let cut_point = longest_gap_midpoint(&cover).ok_or(CoveringError::NoCutPoint {
        suggested_max_r: max_buildable_r(k, theta, r),
    })?;

    let mut components = Vec::new();
    for (start, len) in cover.components() {
        let span = BoundaryArc::new(k, start, len, ArcKind::Component);
        let inside: Vec<&ElementaryArc> = family
            .iter()
            .filter(|a| a.arc.offset_from(span.start_s, l) + a.arc.length <= len * (1.0 + 1e-12))
            .collect();
        let central = inside
            .iter()
            .copied()
            .max_by(|a, b| {
                a.arc
                    .variation
                    .total_cmp(&b.arc.variation)
                    .then(b.arc.offset_from(cut_point, l).total_cmp(&a.arc.offset_from(cut_point, l)))
            })
            .map(|a| a.arc)
            .unwrap_or(span);
        let lead = central.offset_from(span.start_s, l);
        components.push(CoveringComponent {
            arc: span,
            central,
            minus_flank: BoundaryArc::new(k, span.start_s, lead, ArcKind::Padding),
            plus_flank: BoundaryArc::new(k, central.end_s, len - lead - central.length, ArcKind::Padding),
            members: inside.len(),
        });
    }
    components.sort_by(|a, b| a.arc.offset_from(cut_point, l).total_cmp(&b.arc.offset_from(cut_point, l)));

    let flagged_length = elementary.iter().filter(|a| !a.length_ok).count();
    let flagged_variation = elementary.iter().filter(|a| !a.variation_ok).count();
    let mut covering = Covering {
        r,
        theta,
        phi: phi_of(theta),
        unit,
        perimeter: l,
        cut_point,
        cover,
        components,
        family,
        elementary_count: elementary.len(),
        flagged_length,
        flagged_variation,
        checks: Vec::new(),
    };
    covering.checks = structural_checks(k, &covering);
    Ok(covering)
}

fn structural_checks(k: &ConvexDomain, c: &Covering) -> Vec<InvariantCheck> {
    let u = c.unit;
    let mut out = vec![
        InvariantCheck::new("component_count", c.k0() as f64, None, true, Some(4.0)),
        InvariantCheck::new("cover_measure", c.measure(), None, true, Some(48.0 * u)),
        InvariantCheck::new("elementary_length_flags", c.flagged_length as f64, None, true, Some(0.0)),
        InvariantCheck::new("elementary_variation_flags", c.flagged_variation as f64, None, true, Some(0.0)),
    ];
    for (m, comp) in c.components.iter().enumerate() {
        out.push(InvariantCheck::new(format!("component_length[{m}]"), comp.arc.length, Some(8.0 * u), false, Some(24.0 * u)));
        out.push(InvariantCheck::new(format!("central_length[{m}]"), comp.central.length, None, true, Some(4.0 * u)));
        out.push(InvariantCheck::new(format!("central_variation[{m}]"), comp.central.variation, Some(c.phi), true, None));
        out.push(InvariantCheck::new(format!("minus_flank[{m}]"), comp.minus_flank.length, Some(4.0 * u), true, Some(16.0 * u)));
        out.push(InvariantCheck::new(format!("plus_flank[{m}]"), comp.plus_flank.length, Some(4.0 * u), true, Some(16.0 * u)));
        // Three chained arcs would need a component of length above 24rd/w.
        out.push(InvariantCheck::new(format!("members[{m}]"), comp.members as f64, Some(1.0), true, Some(2.0)));
    }
    let exceptions = cover_exceptions(k, c, VERIFY_MESH);
    out.push(InvariantCheck::new("mesh_exceptions", exceptions as f64, None, true, Some(0.0)));
    out
}

/// Number of verification points that are neither good nor in `ℒ`. The mesh
/// is `uniform` equispaced points plus points clustered at the vertices.
pub fn cover_exceptions(k: &ConvexDomain, c: &Covering, uniform: usize) -> usize {
    candidate_mesh(k, uniform, 4.0 * c.unit)
        .into_iter()
        .filter(|&s| !c.cover.contains(s) && !good_point_test(k, &k.boundary_point(s), c.r, c.theta).good)
        .count()
}

/// Largest `r ≤ hint` (to relative precision `1e-6`) for which
/// [`build_covering`] succeeds, found by bisection.
pub fn max_buildable_r(k: &ConvexDomain, theta: f64, hint: f64) -> f64 {
    let ok = |r: f64| build_inner_ok(k, r, theta);
    let (mut lo, mut hi) = (0.0, hint.min(k.width() / 108.0));
    if ok(hi) {
        return hi;
    }
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn build_inner_ok(k: &ConvexDomain, r: f64, theta: f64) -> bool {
    if 108.0 * r * k.diameter() / k.width() >= k.diameter() {
        return false;
    }
    let l = k.perimeter();
    let pad = 4.0 * r * k.diameter() / k.width();
    match maximal_disjoint_family(k, &elementary_arcs(k, r, theta)) {
        Ok(f) => ArcSet::from_arcs(l, f.iter().map(|a| (a.arc.start_s - pad, a.arc.length + 2.0 * pad))).measure() < l,
        Err(_) => false,
    }
}

/// Builds coverings for independent `(K, r)` pairs in parallel, each with
/// its default `θ`.
pub fn build_coverings(inputs: &[(ConvexDomain, f64)]) -> Vec<Result<Covering, CoveringError>> {
    inputs.par_iter().map(|(k, r)| build_covering(k, *r, covering_theta(k))).collect()
}

/// Smallest tilted-chord obstruction: over boundary points, the infimum of
/// the largest `r` at which the point is still good. Elementary arcs exist
/// exactly for `r` above the true infimum. This is a minimum over a finite
/// mesh, so it can only overestimate the infimum.
pub fn bad_onset(k: &ConvexDomain, theta: f64) -> f64 {
    candidate_mesh(k, INITIAL_MESH, 0.05 * k.diameter())
        .into_iter()
        .map(|s| {
            let b = k.boundary_point(s);
            let (lo, hi) = b.normal_range();
            let fan = if b.is_smooth() { 1 } else { NORMAL_FAN };
            (0..fan)
                .map(|j| {
                    let sigma = if fan == 1 { b.mid_normal() } else { lo + (hi - lo) * j as f64 / (fan - 1) as f64 };
                    let v = verdict_for(k, &b, sigma, f64::INFINITY, theta);
                    if v.misses_minus || v.misses_plus {
                        f64::INFINITY
                    } else {
                        v.delta_minus.min(v.delta_plus)
                    }
                })
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
        .min(PI * k.diameter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn disk_points_are_all_good() {
        let k = ConvexDomain::unit_disk();
        let theta = covering_theta(&k);
        for j in 0..64 {
            let b = k.boundary_point(j as f64 * 0.1);
            let v = good_point_test(&k, &b, 0.01, theta);
            assert!(v.good);
            assert_relative_eq!(v.delta_minus, 2.0 * (2.0 * theta).cos(), max_relative = 1e-9);
        }
        assert!(elementary_arcs(&k, 0.01, theta).is_empty());
        let c = build_covering(&k, 0.01, theta).unwrap();
        assert_eq!(c.k0(), 0);
        assert!(c.all_checks_pass());
    }

    #[test]
    fn square_corner_is_good_by_a_missing_line() {
        let k = ConvexDomain::unit_square();
        let v = good_point_test(&k, &k.vertex_point(1), 1e-3, covering_theta(&k));
        assert!(v.good);
        assert!(v.misses_minus || v.misses_plus);
    }

    #[test]
    fn square_edge_point_near_corner_is_bad() {
        // On the bottom edge at distance x from (1, 0) the chord toward the
        // corner has length x / sin 2θ.
        let k = ConvexDomain::unit_square();
        let theta = covering_theta(&k);
        let r = 1e-3;
        let x = 0.5 * r * (2.0 * theta).sin();
        let b = k.boundary_point(1.0 - x);
        let v = good_point_test(&k, &b, r, theta);
        assert!(!v.good);
        assert_relative_eq!(v.delta_minus, x / (2.0 * theta).sin(), max_relative = 1e-9);
        assert!(good_point_test(&k, &k.boundary_point(1.0 - 3.0 * x), r, theta).good);
    }

    #[test]
    fn square_arcs_hug_the_corners() {
        let k = ConvexDomain::unit_square();
        let theta = covering_theta(&k);
        let r = 1e-3;
        let arcs = elementary_arcs(&k, r, theta);
        assert!(!arcs.is_empty());
        for a in &arcs {
            assert!(a.length_ok && a.variation_ok, "{a:?}");
            let corner = (a.arc.start_s + 0.5 * a.arc.length).round();
            assert!((a.arc.start_s + 0.5 * a.arc.length - corner).abs() < r);
        }
    }

    #[test]
    fn square_covering_has_four_corner_components() {
        let k = ConvexDomain::unit_square();
        let r = 1e-3;
        let c = build_covering(&k, r, covering_theta(&k)).unwrap();
        assert_eq!(c.k0(), 4);
        for ch in &c.checks {
            assert!(ch.pass, "{ch:?}");
        }
        for comp in &c.components {
            let mid = comp.central.start_s + 0.5 * comp.central.length;
            assert!((mid - mid.round()).abs() < 1e-2);
        }
        let e = c.export();
        assert!(e.components.iter().all(|x| x.span[0] >= 0.0 && x.span[1] <= c.perimeter));
    }

    #[test]
    fn radius_precondition() {
        let k = ConvexDomain::unit_square();
        assert!(matches!(build_covering(&k, 0.5, 0.01), Err(CoveringError::RadiusTooLarge { .. })));
        assert!(matches!(build_covering(&k, -1.0, 0.01), Err(CoveringError::InvalidRadius(_))));
    }

    #[test]
    fn greedy_family_is_maximal_and_disjoint() {
        let k = ConvexDomain::unit_square();
        let arcs = elementary_arcs(&k, 2e-3, covering_theta(&k));
        let fam = maximal_disjoint_family(&k, &arcs).unwrap();
        let l = k.perimeter();
        for (i, a) in fam.iter().enumerate() {
            for b in &fam[i + 1..] {
                assert!(!arcs_intersect(&a.arc, &b.arc, l));
            }
        }
        for a in &arcs {
            assert!(fam.iter().any(|f| arcs_intersect(&a.arc, &f.arc, l)));
        }
    }

    #[test]
    fn arc_intersection_wraps() {
        let k = ConvexDomain::unit_square();
        let a = BoundaryArc::new(&k, 3.9, 0.2, ArcKind::Elementary);
        let b = BoundaryArc::new(&k, 0.05, 0.1, ArcKind::Elementary);
        let c = BoundaryArc::new(&k, 0.2, 0.1, ArcKind::Elementary);
        assert!(arcs_intersect(&a, &b, 4.0) && arcs_intersect(&b, &a, 4.0));
        assert!(!arcs_intersect(&a, &c, 4.0) && !arcs_intersect(&c, &a, 4.0));
    }

    #[test]
    fn triangle_covering() {
        let k = ConvexDomain::polygon(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.2, 0.9),
        ])
        .unwrap();
        let r = 0.5 * k.width() / 108.0;
        let c = build_covering(&k, r, covering_theta(&k)).unwrap();
        assert!(c.k0() <= 4);
        assert_eq!(c.checks.iter().find(|x| x.name == "mesh_exceptions").unwrap().value, 0.0);
    }
}
