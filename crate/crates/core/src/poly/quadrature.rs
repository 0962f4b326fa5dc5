//! Composite Gauss–Legendre quadrature along the boundary, with adaptive
//! panel bisection.

use serde::{Deserialize, Serialize};

use crate::geometry::{ConvexDomain, Point};

/// Nodes per Gauss–Legendre panel.
pub const GL_ORDER: usize = 16;
const MAX_DEPTH: usize = 30;

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let step = p1 / dp;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Base partition of the boundary into panels, each inside one smooth piece,
/// with the Gauss–Legendre nodes laid out.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub panels: Vec<(f64, f64)>,
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    /// About `panels` panels in total; every polygon edge gets at least one.
    pub fn new(k: &ConvexDomain, panels: usize) -> Self {
        let l = k.perimeter();
        let mut breaks = k.breakpoints();
        if breaks.is_empty() {
            breaks.push(0.0);
        }
        breaks.push(l);
        let mut cells = Vec::new();
        for win in breaks.windows(2) {
            let (a, b) = (win[0], win[1]);
            let m = ((panels as f64 * (b - a) / l).ceil() as usize).max(1);
            for j in 0..m {
                cells.push((a + (b - a) * j as f64 / m as f64, a + (b - a) * (j + 1) as f64 / m as f64));
            }
        }
        let (gx, gw) = gauss_legendre(GL_ORDER);
        let mut nodes = Vec::with_capacity(cells.len() * GL_ORDER);
        let mut weights = Vec::with_capacity(cells.len() * GL_ORDER);
        for &(a, b) in &cells {
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(k.point_at(mid + half * x));
                weights.push(half * w);
            }
        }
        Self { panels: cells, nodes, weights }
    }

    pub fn default_for(k: &ConvexDomain) -> Self {
        Self::new(k, 64)
    }
}

/// Adaptive integrator for a pair of boundary integrands.
pub(crate) struct PairIntegrator<'a, F> {
    k: &'a ConvexDomain,
    f: F,
    gx: Vec<f64>,
    gw: Vec<f64>,
    /// Absolute tolerance per unit arc length, for each component.
    tol: (f64, f64),
}

impl<'a, F: Fn(Point) -> (f64, f64)> PairIntegrator<'a, F> {
    /// `scale` holds rough magnitudes of the two integrals; the absolute
    /// tolerance is `rel_tol · scale / L` per unit length.
    pub fn new(k: &'a ConvexDomain, f: F, scale: (f64, f64), rel_tol: f64) -> Self {
        let (gx, gw) = gauss_legendre(GL_ORDER);
        let l = k.perimeter();
        Self { k, f, gx, gw, tol: (rel_tol * scale.0 / l, rel_tol * scale.1 / l) }
    }

    fn rule(&self, a: f64, b: f64) -> (f64, f64) {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut acc = (0.0, 0.0);
        for (x, w) in self.gx.iter().zip(&self.gw) {
            let v = (self.f)(self.k.point_at(mid + half * x));
            acc.0 += w * v.0;
            acc.1 += w * v.1;
        }
        (acc.0 * half, acc.1 * half)
    }

    /// Integral over `[a, b]`, which must not straddle a polygon vertex.
    pub fn panel(&self, a: f64, b: f64) -> (f64, f64) {
        let whole = self.rule(a, b);
        self.refine(a, b, whole, 0)
    }

    /// Refines `[a, b]` given an already computed single-panel estimate.
    pub fn refine(&self, a: f64, b: f64, whole: (f64, f64), depth: usize) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let left = self.rule(a, m);
        let right = self.rule(m, b);
        let fine = (left.0 + right.0, left.1 + right.1);
        let len = b - a;
        let ok = (fine.0 - whole.0).abs() <= self.tol.0 * len
            && (fine.1 - whole.1).abs() <= self.tol.1 * len;
        if ok || depth >= MAX_DEPTH {
            return fine;
        }
        let l = self.refine(a, m, left, depth + 1);
        let r = self.refine(m, b, right, depth + 1);
        (l.0 + r.0, l.1 + r.1)
    }

    /// Integral over arc-length pieces `[a, b] ⊂ [0, L]`, split at vertices
    /// and into panels no longer than `L/64`.
    pub fn pieces(&self, pieces: &[(f64, f64)]) -> (f64, f64) {
        let l = self.k.perimeter();
        let breaks = self.k.breakpoints();
        let mut acc = (0.0, 0.0);
        for &(a, b) in pieces {
            let mut cuts = vec![a];
            cuts.extend(breaks.iter().copied().filter(|&t| t > a && t < b));
            cuts.push(b);
            for win in cuts.windows(2) {
                let (u, v) = (win[0], win[1]);
                let m = ((64.0 * (v - u) / l).ceil() as usize).max(1);
                for j in 0..m {
                    let x0 = u + (v - u) * j as f64 / m as f64;
                    let x1 = u + (v - u) * (j + 1) as f64 / m as f64;
                    let r = self.panel(x0, x1);
                    acc.0 += r.0;
                    acc.1 += r.1;
                }
            }
        }
        acc
    }
}
