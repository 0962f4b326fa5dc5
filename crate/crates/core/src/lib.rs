//! Numerical laboratory for converse Markov inequalities on convex domains.

// Guards written as `!(x > y)` are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audits;
pub mod covering;
pub mod geometry;
pub mod poly;
pub mod sampling;
pub mod search;
pub mod util;

pub use audits::{AuditKind, AuditReport};
pub use geometry::{BoundaryPoint, ConvexDomain, Point};
pub use poly::{Exponent, QuadratureGrid, RootPolynomial};
