use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One checked inequality `lhs ≥ rhs`.
///
/// Upper-bound statements are recorded with the bound on the left, so the
/// margin is always `lhs − rhs` and a report passes when it is applicable
/// and `margin ≥ −tol`, with `tol = 1e-9·(|lhs| + |rhs|)` unless the check
/// pins its own tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub audit_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub applicable: bool,
    pub pass: bool,
    pub tol: f64,
    pub detail: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

fn finite_abs(x: f64) -> f64 {
    if x.is_finite() {
        x.abs()
    } else {
        0.0
    }
}

impl AuditReport {
    pub fn check(id: &str, lhs: f64, rhs: f64) -> Self {
        let tol = 1e-9 * (finite_abs(lhs) + finite_abs(rhs));
        Self::check_with_tol(id, lhs, rhs, tol)
    }

    pub fn check_with_tol(id: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = lhs - rhs;
        Self {
            audit_id: id.to_string(),
            trial: None,
            lhs,
            rhs,
            margin,
            applicable: true,
            pass: margin >= -tol,
            tol,
            detail: BTreeMap::new(),
            note: None,
        }
    }

    pub fn not_applicable(id: &str, why: impl Into<String>) -> Self {
        Self {
            audit_id: id.to_string(),
            trial: None,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            applicable: false,
            pass: false,
            tol: 0.0,
            detail: BTreeMap::new(),
            note: Some(why.into()),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.detail.insert(key.to_string(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_trial(mut self, trial: usize) -> Self {
        self.trial = Some(trial);
        self
    }

    pub fn status(&self) -> Status {
        match (self.applicable, self.pass) {
            (false, _) => Status::NotApplicable,
            (true, true) => Status::Pass,
            (true, false) => Status::Fail,
        }
    }

    /// `margin / (|lhs| + |rhs|)`, for ranking reports of different scales.
    pub fn relative_margin(&self) -> f64 {
        let scale = finite_abs(self.lhs) + finite_abs(self.rhs);
        if scale > 0.0 {
            self.margin / scale
        } else {
            self.margin
        }
    }
}

/// Counts and the worst relative margin over a batch.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct AuditSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub not_applicable: usize,
    pub worst_relative_margin: Option<f64>,
    pub worst_trial: Option<usize>,
}

pub fn summarize(reports: &[AuditReport]) -> AuditSummary {
    let mut s = AuditSummary { total: reports.len(), ..Default::default() };
    for r in reports {
        match r.status() {
            Status::Pass => s.passed += 1,
            Status::Fail => s.failed += 1,
            Status::NotApplicable => s.not_applicable += 1,
        }
        if r.applicable {
            let m = r.relative_margin();
            if s.worst_relative_margin.map_or(true, |w| m < w) {
                s.worst_relative_margin = Some(m);
                s.worst_trial = r.trial;
            }
        }
    }
    s
}
