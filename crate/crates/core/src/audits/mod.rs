//! Executable checks of the quantitative estimates: each audit evaluates
//! both sides of one inequality on concrete inputs and records the margin.

mod batch;
mod floors;
mod nikolskii;
mod report;
mod theorems;
mod tilted;
mod twopoint;

pub use batch::{run_batch, AuditKind, BatchConfig};
pub use floors::{
    chebyshev_floor, chebyshev_search, chebyshev_witness, segment_sup, transfinite_floor_audit,
    zero_concentration_audit,
};
pub use nikolskii::{h_point_log_gap, h_set, hset_constant, hset_mass_audit, nikolskii_audit, HSet};
pub use report::{summarize, AuditReport, AuditSummary, Status};
pub use theorems::{depth_theorem_audit, infnorm_theorem_audit, turan_pointwise_audit};
pub use tilted::{
    classify_zeros, tilted_normal_audit, tilted_theta, zero_class_product_audits, Branch, ZeroPartition,
};
pub use twopoint::{two_point_audit, TwoPointInput};

use crate::geometry::GeometryError;
use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AuditError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the point is not in the H-set")]
    NotInH,
    #[error("the chord through the point has zero length")]
    ZeroChord,
    #[error("unknown audit id {0:?}")]
    UnknownAudit(String),
}
