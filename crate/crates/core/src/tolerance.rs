//! Every floating-point slack used by the crate lives here.

use serde::{Deserialize, Serialize};

/// Relative slack on the triangle inequality when validating distance matrices.
pub const METRIC_REL: f64 = 1e-9;

/// Absolute slack for scalar inequalities, scaled by the magnitude of the
/// quantities compared (`slack · max(1, |lhs|, |rhs|)`).
pub const FLOAT_SLACK: f64 = 1e-12;

/// Relative slack on the two-sided embedding bound `‖a‖ ≤ ‖T a‖ ≤ C ‖a‖`.
pub const SANDWICH_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub metric_rel: f64,
    pub float_slack: f64,
    pub sandwich_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            metric_rel: METRIC_REL,
            float_slack: FLOAT_SLACK,
            sandwich_rel: SANDWICH_REL,
        }
    }
}

impl Tolerances {
    /// `lhs ≤ rhs` up to `float_slack` scaled by the larger magnitude.
    pub fn le(&self, lhs: f64, rhs: f64) -> bool {
        lhs <= rhs + self.float_slack * 1f64.max(lhs.abs()).max(rhs.abs())
    }
}
