//! Derivative-free minimization of `M_q(p)` over root positions in `K`.
//!
//! Each restart runs a compass search: every root in turn is moved by the
//! current step along eight directions, the first improving move is kept,
//! and a sweep without improvement halves the step. Candidates are projected
//! onto `K` by the nearest-point map. Restarts run in parallel with seeds
//! derived from the configured one and are merged in restart order, so the
//! result does not depend on thread scheduling.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audits::AuditReport;
use crate::geometry::{ConvexDomain, Point};
use crate::poly::{inverse_markov_factor, Exponent, QuadratureGrid, RootPolynomial};
use crate::sampling::trial_rng;

/// Maximum number of trace points kept in exports.
pub const TRACE_EXPORT_LIMIT: usize = 1000;
/// Restarts stop once the step falls below this fraction of `d`.
const MIN_STEP: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitStrategy {
    BoundaryUniform,
    InteriorUniform,
    CornerClustered,
    User(Vec<Point>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub q: Exponent,
    pub budget: usize,
    pub seed: u64,
    pub restarts: usize,
    pub init: InitStrategy,
}

impl SearchConfig {
    pub fn new(n: usize, q: Exponent, budget: usize, seed: u64) -> Self {
        Self { n, q, budget, seed, restarts: 4, init: InitStrategy::InteriorUniform }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SearchError {
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("budget {budget} is below 10·n = {min}")]
    BudgetTooSmall { budget: usize, min: usize },
    #[error("need 1 ≤ restarts ≤ budget, got {0}")]
    BadRestarts(usize),
    #[error("user start has {got} roots, expected {expected}")]
    UserRoots { got: usize, expected: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_p: RootPolynomial,
    #[serde(rename = "best_M")]
    pub best_m: f64,
    /// `(evaluation index, incumbent M)` at every improvement.
    pub trace: Vec<(usize, f64)>,
    pub evaluations: usize,
    /// Margins: `upper_15_over_d = 15n/d − M`, `nlogn_floor = M − floor`,
    /// and on the disk `turan_disk = M − n/2`.
    pub bound_checks: BTreeMap<String, f64>,
}

impl SearchResult {
    /// The trace thinned to at most `limit` points, keeping both ends.
    pub fn decimated_trace(&self, limit: usize) -> Vec<(usize, f64)> {
        let m = self.trace.len();
        if m <= limit || limit < 2 {
            return self.trace.clone();
        }
        (0..limit).map(|j| self.trace[j * (m - 1) / (limit - 1)]).collect()
    }
}

/// `M_q` of the polynomial with the given roots, `+∞` when undefined.
pub fn evaluate(k: &ConvexDomain, roots: &[Point], q: Exponent, grid: &QuadratureGrid) -> f64 {
    inverse_markov_factor(&RootPolynomial::monic(roots.to_vec()), k, q, grid).map_or(f64::INFINITY, |r| r.m)
}

fn initial_roots<R: Rng>(k: &ConvexDomain, init: &InitStrategy, n: usize, rng: &mut R) -> Vec<Point> {
    match init {
        InitStrategy::BoundaryUniform => (0..n).map(|_| k.sample_boundary(rng).z).collect(),
        InitStrategy::InteriorUniform => (0..n).map(|_| k.sample_interior(rng)).collect(),
        InitStrategy::CornerClustered => {
            let corner = match k.vertex_count() {
                0 => k.sample_boundary(rng).z,
                v => k.vertex_point(rng.gen_range(0..v)).z,
            };
            let spread = 0.05 * k.diameter();
            (0..n)
                .map(|_| k.project(corner + Complex64::from_polar(spread * rng.gen::<f64>(), TAU * rng.gen::<f64>())))
                .collect()
        }
        InitStrategy::User(roots) => roots.iter().map(|&z| k.project(z)).collect(),
    }
}

struct RestartOutcome {
    roots: Vec<Point>,
    m: f64,
    trace: Vec<(usize, f64)>,
    used: usize,
}

fn compass_search(k: &ConvexDomain, start: Vec<Point>, q: Exponent, grid: &QuadratureGrid, budget: usize) -> RestartOutcome {
    let d = k.diameter();
    let dirs: [Complex64; 8] = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
        Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
        Complex64::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2),
        Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    ];
    let mut roots = start;
    let mut best = evaluate(k, &roots, q, grid);
    let mut used = 1;
    let mut trace = vec![(0, best)];
    let mut step = 0.25 * d;
    while used < budget && step > MIN_STEP * d {
        let mut improved = false;
        'sweep: for i in 0..roots.len() {
            for dir in dirs {
                if used >= budget {
                    break 'sweep;
                }
                let old = roots[i];
                let cand = k.project(old + dir * step);
                if cand == old {
                    continue;
                }
                debug_assert!(k.contains(cand));
                roots[i] = cand;
                let m = evaluate(k, &roots, q, grid);
                used += 1;
                if m < best {
                    best = m;
                    trace.push((used - 1, m));
                    improved = true;
                    break;
                }
                roots[i] = old;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    RestartOutcome { roots, m: best, trace, used }
}

/// Multi-restart compass search for the smallest `M_q` among polynomials of
/// degree `n` with all roots in `K`. The budget counts `M_q` evaluations and
/// is split evenly between the configured restarts and one more restart
/// seeded from [`reference_families`].
pub fn minimize_oscillation(k: &ConvexDomain, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    let n = cfg.n;
    if n == 0 {
        return Err(SearchError::ZeroDegree);
    }
    if cfg.budget < 10 * n {
        return Err(SearchError::BudgetTooSmall { budget: cfg.budget, min: 10 * n });
    }
    if cfg.restarts == 0 || cfg.restarts > cfg.budget {
        return Err(SearchError::BadRestarts(cfg.restarts));
    }
    if let InitStrategy::User(r) = &cfg.init {
        if r.len() != n {
            return Err(SearchError::UserRoots { got: r.len(), expected: n });
        }
    }
    let grid = QuadratureGrid::default_for(k);
    // An extra restart starts from the best reference family, when the
    // budget leaves it room to move.
    let families = reference_families(k, n);
    let seeded = cfg.budget / (cfg.restarts + 1) > 2 * families.len();
    let slots = cfg.restarts + usize::from(seeded);
    let share = cfg.budget / slots;
    let outcomes: Vec<RestartOutcome> = (0..slots)
        .into_par_iter()
        .map(|j| {
            if j == cfg.restarts {
                let start = families
                    .iter()
                    .map(|(_, p)| (evaluate(k, &p.roots, cfg.q, &grid), &p.roots))
                    .min_by(|a, b| a.0.total_cmp(&b.0))
                    .map(|(_, r)| r.clone())
                    .expect("families are nonempty");
                let used = families.len();
                let mut o = compass_search(k, start, cfg.q, &grid, share - used);
                o.trace.iter_mut().for_each(|t| t.0 += used);
                o.used += used;
                return o;
            }
            let mut rng = trial_rng(cfg.seed, j as u64);
            let start = initial_roots(k, &cfg.init, n, &mut rng);
            compass_search(k, start, cfg.q, &grid, share)
        })
        .collect();

    let mut trace = Vec::new();
    let mut offset = 0;
    let mut incumbent = f64::INFINITY;
    let mut best_idx = 0;
    for (j, o) in outcomes.iter().enumerate() {
        for &(e, m) in &o.trace {
            if m < incumbent {
                incumbent = m;
                best_idx = j;
                trace.push((offset + e, m));
            }
        }
        offset += o.used;
    }
    let best = &outcomes[best_idx];
    let mut result = SearchResult {
        best_p: RootPolynomial::monic(best.roots.clone()),
        best_m: best.m,
        trace,
        evaluations: offset,
        bound_checks: BTreeMap::new(),
    };
    result.bound_checks = bound_margins(k, n, result.best_m);
    Ok(result)
}

fn nlogn_floor(k: &ConvexDomain, n: usize) -> f64 {
    let (d, w) = (k.diameter(), k.width());
    let nf = n as f64;
    w * w / (240_000.0 * d.powi(3)) * nf / nf.ln()
}

fn bound_margins(k: &ConvexDomain, n: usize, m: f64) -> BTreeMap<String, f64> {
    let nf = n as f64;
    let mut out = BTreeMap::new();
    out.insert("upper_15_over_d".to_string(), 15.0 * nf / k.diameter() - m);
    if n >= 2 {
        out.insert("nlogn_floor".to_string(), m - nlogn_floor(k, n));
    }
    if k.is_disk() {
        out.insert("turan_disk".to_string(), m - 0.5 * nf * 2.0 / k.diameter());
    }
    out
}

/// `best_M < (15/d)·n`. A failure means the search stopped short of a
/// witness the theory guarantees, not a violated inequality.
pub fn upper_witness_check(k: &ConvexDomain, n: usize, q: Exponent, result: &SearchResult) -> AuditReport {
    let bound = 15.0 * n as f64 / k.diameter();
    let found = result.best_m < bound;
    let mut r = AuditReport::check_with_tol("upper_witness", bound, result.best_m, 0.0)
        .with("n", n as f64)
        .with("q", q.value())
        .with("evaluations", result.evaluations as f64);
    r.pass = found;
    if !found {
        r = r.with_note("SEARCH-INCOMPLETE");
    }
    r
}

/// `best_M ≥ (1/240000)(w²/d³)·n/ln n`, with the ratio in `detail`.
pub fn floor_consistency_check(k: &ConvexDomain, n: usize, q: Exponent, result: &SearchResult) -> AuditReport {
    if n < 2 {
        return AuditReport::not_applicable("nlogn_floor", "needs n ≥ 2");
    }
    let floor = nlogn_floor(k, n);
    AuditReport::check("nlogn_floor", result.best_m, floor)
        .with("ratio", result.best_m / floor)
        .with("n", n as f64)
        .with("q", q.value())
}

/// Canonical root configurations used as seeds and regression fixtures.
pub fn reference_families(k: &ConvexDomain, n: usize) -> Vec<(&'static str, RootPolynomial)> {
    let l = k.perimeter();
    let c = k.center();
    let corners: Vec<Point> = match k.vertices() {
        Some(v) => v.to_vec(),
        None => (0..4).map(|j| k.point_at(l * j as f64 / 4.0)).collect(),
    };
    vec![
        ("center_power", RootPolynomial::monic(vec![c; n])),
        ("boundary_equispaced", RootPolynomial::monic((0..n).map(|j| k.point_at(l * j as f64 / n as f64)).collect())),
        ("single_corner", RootPolynomial::monic(vec![corners[0]; n])),
        ("corner_set", RootPolynomial::monic((0..n).map(|j| corners[j % corners.len()]).collect())),
    ]
}
