//! Binary quadratic forms, CM points and RM curves in the upper half-plane,
//! and exact enumeration of aggregate-Linnik sets
//! `{m/n : gcd(m,n) = 1, 0 < Am² + Bmn + Cn² ≤ Δ}` together with their
//! predicted main terms.

// `!(x >= 0.0)` is how NaN gets rejected along with the negatives
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod forms;
pub mod hyperbolic;
pub mod numtheory;
pub mod linnik;
pub mod geodesic_enum;
pub mod cycles;
pub mod extf;
pub mod quad;

pub use error::{Error, Result};
pub use forms::{CmPoint, Geodesic, IntForm, RealForm, RmCurve};
pub use hyperbolic::{BallE, PointH};
