//! Randomized batches: one reproducible random instance per trial, run in
//! parallel and returned in trial order.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::*;
use crate::geometry::{ConvexDomain, Point};
use crate::poly::{sup_norm, Exponent, QuadratureGrid, RootPolynomial};
use crate::sampling::{random_convex_polygon, random_poly_in, random_roots_unrestricted, trial_rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditKind {
    Nikolskii,
    Hset,
    Hgap,
    Chebyshev,
    Transfinite,
    Concentration,
    Tilted,
    Zclass,
    Twopoint,
    Infnorm,
    Depth,
}

impl AuditKind {
    pub const ALL: [AuditKind; 11] = [
        Self::Nikolskii,
        Self::Hset,
        Self::Hgap,
        Self::Chebyshev,
        Self::Transfinite,
        Self::Concentration,
        Self::Tilted,
        Self::Zclass,
        Self::Twopoint,
        Self::Infnorm,
        Self::Depth,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Self::Nikolskii => "nikolskii",
            Self::Hset => "hset",
            Self::Hgap => "hgap",
            Self::Chebyshev => "chebyshev",
            Self::Transfinite => "transfinite",
            Self::Concentration => "concentration",
            Self::Tilted => "tilted",
            Self::Zclass => "zclass",
            Self::Twopoint => "twopoint",
            Self::Infnorm => "infnorm",
            Self::Depth => "depth",
        }
    }
}

impl fmt::Display for AuditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for AuditKind {
    type Err = AuditError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.id() == s.trim())
            .ok_or_else(|| AuditError::UnknownAudit(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct BatchConfig {
    pub kind: AuditKind,
    pub trials: usize,
    pub seed: u64,
    /// Fixed domain; `None` draws a random polygon per trial (squares and
    /// regular hexagons for `depth`).
    pub domain: Option<ConvexDomain>,
    /// Fixed degree; `None` draws one per trial.
    pub n: Option<usize>,
    /// Fixed exponent; `None` alternates `q = 1, 2`.
    pub q: Option<Exponent>,
    /// Supporting directions tried at a vertex.
    pub fan: usize,
    pub max_vertices: usize,
}

impl BatchConfig {
    pub fn new(kind: AuditKind, trials: usize, seed: u64) -> Self {
        Self { kind, trials, seed, domain: None, n: None, q: None, fan: 8, max_vertices: 10 }
    }
}

/// Runs `cfg.trials` trials in parallel. Reports carry their trial index and
/// come back sorted by it, so output does not depend on scheduling.
pub fn run_batch(cfg: &BatchConfig) -> Vec<AuditReport> {
    let per_trial: Vec<Vec<AuditReport>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t).into_iter().map(|r| r.with_trial(t)).collect())
        .collect();
    per_trial.into_iter().flatten().collect()
}

fn finite_q(cfg: &BatchConfig, trial: usize) -> Option<f64> {
    match cfg.q {
        Some(Exponent::Finite(q)) => Some(q),
        Some(Exponent::Infinity) => None,
        None => Some(if trial % 2 == 0 { 1.0 } else { 2.0 }),
    }
}

fn singular(id: &str, e: AuditError) -> Vec<AuditReport> {
    vec![AuditReport::not_applicable(id, e.to_string())]
}

fn run_trial(cfg: &BatchConfig, trial: usize) -> Vec<AuditReport> {
    let mut rng = trial_rng(cfg.seed, trial as u64);
    let rng = &mut rng;
    let id = cfg.kind.id();
    let domain = |rng: &mut rand_chacha::ChaCha8Rng| match &cfg.domain {
        Some(k) => k.clone(),
        None => random_convex_polygon(rng, cfg.max_vertices),
    };
    let degree = |rng: &mut rand_chacha::ChaCha8Rng, lo: usize, hi: usize| cfg.n.unwrap_or_else(|| rng.gen_range(lo..=hi));

    match cfg.kind {
        AuditKind::Nikolskii | AuditKind::Hset => {
            let Some(q) = finite_q(cfg, trial) else {
                return vec![AuditReport::not_applicable(id, "needs a finite q")];
            };
            let k = domain(rng);
            let n = degree(rng, 1, 30);
            let p = RootPolynomial::new(
                Complex64::from_polar(rng.gen_range(0.1..10.0), rng.gen_range(0.0..6.3)),
                random_roots_unrestricted(&k, rng, n),
            );
            let grid = QuadratureGrid::default_for(&k);
            if cfg.kind == AuditKind::Nikolskii {
                vec![nikolskii_audit(&p, &k, q, n, &grid)]
            } else {
                vec![hset_mass_audit(&p, &k, q, n, &grid)]
            }
        }
        AuditKind::Hgap => {
            let Some(q) = finite_q(cfg, trial) else {
                return vec![AuditReport::not_applicable(id, "needs a finite q")];
            };
            let k = domain(rng);
            let n = degree(rng, 1, 120);
            let p = random_poly_in(&k, rng, n);
            let log_sup = sup_norm(&p, &k).log_value;
            for _ in 0..64 {
                let b = k.sample_boundary(rng);
                if let Ok(r) = h_point_log_gap(&p, b.z, q, n, log_sup) {
                    return r;
                }
            }
            vec![AuditReport::not_applicable(id, "no sampled point in H")]
        }
        AuditKind::Chebyshev => {
            let len = [1.0, 2.0, 4.0][trial % 3];
            let kdeg = 1 + (trial / 3) % 6;
            chebyshev_search(len, kdeg, 1000, rng)
        }
        AuditKind::Transfinite => {
            let k = domain(rng);
            let n = degree(rng, 1, 40);
            vec![transfinite_floor_audit(&RootPolynomial::monic(random_poly_in(&k, rng, n).roots), &k)]
        }
        AuditKind::Concentration => {
            let k = domain(rng);
            let n = degree(rng, 5, 40);
            let target = rng.gen_range(11f64.ln()..300f64.ln()).exp();
            // Thin polygons may not hold a disk of radius d/(2·target); the
            // deepest of a few samples then sets a larger effective ratio.
            let (center, depth) = (0..64)
                .map(|_| {
                    let c = k.sample_interior(rng);
                    (c, k.signed_distance(c))
                })
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty");
            let rho = (k.diameter() / (2.0 * target)).min(depth);
            let ratio = k.diameter() / (2.0 * rho);
            let Ok(inner) = ConvexDomain::disk(center, rho) else {
                return vec![AuditReport::not_applicable(id, "degenerate inner disk")];
            };
            let needed = (3.0 * 2f64.ln() / ratio.ln() * n as f64).ceil() as usize;
            let m = (needed + rng.gen_range(0..=2)).min(n);
            let mut roots: Vec<Point> = (0..m).map(|_| inner.sample_interior(rng)).collect();
            roots.extend((m..n).map(|_| k.sample_interior(rng)));
            vec![zero_concentration_audit(&RootPolynomial::monic(roots), &k, &inner, ratio)]
        }
        AuditKind::Tilted | AuditKind::Zclass => {
            let k = domain(rng);
            let n = degree(rng, 1, 50);
            let p = random_poly_in(&k, rng, n);
            let b = match k.vertex_count() {
                v if v > 0 && rng.gen_bool(0.25) => k.vertex_point(rng.gen_range(0..v)),
                _ => k.sample_boundary(rng),
            };
            let mut out = Vec::new();
            for alpha in b.supporting_fan(cfg.fan) {
                let sigma = alpha + FRAC_PI_2;
                let res = if cfg.kind == AuditKind::Tilted {
                    tilted_normal_audit(&p, &k, b.z, sigma, Branch::Auto, Some(2.0))
                } else {
                    zero_class_product_audits(&p, &k, b.z, sigma)
                };
                match res {
                    Ok(r) => out.extend(r),
                    Err(e) => out.extend(singular(id, e)),
                }
            }
            out
        }
        AuditKind::Twopoint => {
            let k = domain(rng);
            let v = k.vertex_count();
            if v == 0 {
                return vec![AuditReport::not_applicable(id, "needs a polygon")];
            }
            let q = finite_q(cfg, trial).unwrap_or(2.0);
            let n = degree(rng, 2, 40);
            let vtx = rng.gen_range(0..v);
            let corner = k.vertex_point(vtx);
            let beta = std::f64::consts::PI - corner.omega();
            let s0 = (2.0 * beta.sin()).min(1.0) * k.diameter() / 384.0;
            let a = rng.gen_range(0.05..0.5) * s0;
            let b = rng.gen_range(0.05..0.5) * s0;
            let zeta = k.boundary_point(corner.s - a);
            let zeta_prime = k.boundary_point(corner.s + b);
            let input = TwoPointInput { zeta, zeta_prime, alpha: zeta.alpha_plus, alpha_prime: zeta_prime.alpha_minus };
            let mut roots = random_poly_in(&k, rng, n).roots;
            if trial % 2 == 1 {
                // At least half the zeros within R = 3 max(a, b) of the corner.
                let radius = 3.0 * a.max(b);
                for r in roots.iter_mut().take(n.div_ceil(2)) {
                    let x = corner.z + Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..6.3));
                    *r = k.project(x);
                }
            }
            two_point_audit(&RootPolynomial::monic(roots), &k, &input, q)
        }
        AuditKind::Infnorm => {
            let k = domain(rng);
            let n = degree(rng, 1, 50);
            vec![infnorm_theorem_audit(&random_poly_in(&k, rng, n), &k)]
        }
        AuditKind::Depth => {
            let k = match &cfg.domain {
                Some(k) => k.clone(),
                None => {
                    let base = if trial % 2 == 0 {
                        ConvexDomain::unit_square()
                    } else {
                        ConvexDomain::regular_polygon(6, 1.0).expect("hexagon")
                    };
                    let shift = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    base.transformed(rng.gen_range(0.5..2.0), rng.gen_range(0.0..6.3), shift).expect("similar copy")
                }
            };
            let q = cfg.q.unwrap_or(if (trial / 2) % 2 == 0 { Exponent::Finite(1.0) } else { Exponent::Finite(2.0) });
            let n = degree(rng, 1, 30);
            let p = random_poly_in(&k, rng, n);
            vec![depth_theorem_audit(&p, &k, q, &QuadratureGrid::default_for(&k), k.depth())]
        }
    }
}
