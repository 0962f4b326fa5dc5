//! Finite unions of closed arcs of a circle `ℝ / Lℤ`, in arc-length coordinates.

use serde::{Deserialize, Serialize};

/// Sorted, disjoint intervals inside `[0, period]`. An arc that crosses
/// `0` is stored as two pieces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcSet {
    period: f64,
    pieces: Vec<(f64, f64)>,
}

impl ArcSet {
    pub fn empty(period: f64) -> Self {
        Self { period, pieces: Vec::new() }
    }

    pub fn full(period: f64) -> Self {
        Self { period, pieces: vec![(0.0, period)] }
    }

    /// Union of the arcs `[start, start + len]`, each taken mod `period`.
    pub fn from_arcs(period: f64, arcs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut pieces = Vec::new();
        for (start, len) in arcs {
            if len <= 0.0 {
                continue;
            }
            if len >= period {
                return Self::full(period);
            }
            let a = start.rem_euclid(period);
            let b = a + len;
            if b <= period {
                pieces.push((a, b));
            } else {
                pieces.push((a, period));
                pieces.push((0.0, b - period));
            }
        }
        Self::normalized(period, pieces)
    }

    fn normalized(period: f64, mut pieces: Vec<(f64, f64)>) -> Self {
        pieces.retain(|p| p.1 > p.0);
        pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Self { period, pieces: out }
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn pieces(&self) -> &[(f64, f64)] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.pieces.iter().fold(0.0, |acc, (a, b)| acc + (b - a))
    }

    pub fn contains(&self, s: f64) -> bool {
        let s = s.rem_euclid(self.period);
        self.pieces.iter().any(|&(a, b)| a <= s && s <= b)
            || (s == 0.0 && self.pieces.last().is_some_and(|p| p.1 >= self.period))
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.pieces.clone();
        all.extend_from_slice(&other.pieces);
        Self::normalized(self.period, all)
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for &(a, b) in &self.pieces {
            if a > cursor {
                out.push((cursor, a));
            }
            cursor = b;
        }
        if cursor < self.period {
            out.push((cursor, self.period));
        }
        Self { period: self.period, pieces: out }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.pieces.len() && j < other.pieces.len() {
            let (a0, a1) = self.pieces[i];
            let (b0, b1) = other.pieces[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if hi > lo {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { period: self.period, pieces: out }
    }

    /// Connected components as `(start, len)`, with the piece ending at the
    /// period glued to the piece starting at 0.
    pub fn components(&self) -> Vec<(f64, f64)> {
        let mut comps: Vec<(f64, f64)> = self.pieces.iter().map(|&(a, b)| (a, b - a)).collect();
        if comps.len() >= 2 {
            let first = comps[0];
            let last = *comps.last().unwrap();
            if first.0 <= 0.0 && last.0 + last.1 >= self.period {
                comps.pop();
                comps[0] = (last.0, last.1 + first.1);
            }
        }
        comps
    }
}
