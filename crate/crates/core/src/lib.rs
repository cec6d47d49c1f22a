//! No-disturbance-without-uncertainty (NDWU) toolkit for bipartite
//! two-setting, two-outcome behaviors.
//!
//! Probabilities `p(ab|νμ)` are stored as `[ν][μ][a][b]`. Outcome 0 maps to
//! the value +1 and outcome 1 to −1.

#![allow(clippy::needless_range_loop)]

pub mod behavior;
pub mod boxes;
pub mod campaign;
pub mod criteria;
pub mod error;
pub mod ndwu;
pub mod quantum;
pub mod reproduce;

pub use behavior::{Behavior, ConditionalState, Party, DEFAULT_TOL};
pub use boxes::{FamilyPoint, JointOrder};
pub use criteria::Criterion;
pub use error::{Error, Result};
pub use ndwu::{criterion, CInterval, CriterionReport, SideReport};
