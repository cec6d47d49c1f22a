//! Uncertainty, disturbed uncertainty and disturbance for sequential sharp
//! measurements, the two-outcome relation between them, and the local
//! correlation criterion obtained by demanding one overlap parameter `c`
//! per party that is consistent with every conditional state.

use serde::Serialize;

use crate::behavior::{Behavior, Party};
use crate::error::{Error, Result};

/// Outcome statistics of one measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(probs: Vec<f64>, tol: f64) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidDistribution(format!(
                "need at least two outcomes, got {}",
                probs.len()
            )));
        }
        if let Some(v) = probs
            .iter()
            .find(|v| !v.is_finite() || **v < -tol || **v > 1.0 + tol)
        {
            return Err(Error::InvalidDistribution(format!("entry {v} outside [0, 1]")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(OutcomeDistribution { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// State-independent transfer probabilities between two sharp measurements.
///
/// `gamma[j][i]` is the probability that the second measurement yields `j`
/// on the state left behind by outcome `i` of the first. Each column is a
/// distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    gamma: Vec<Vec<f64>>,
}

impl TransferMatrix {
    pub fn new(gamma: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let rows = gamma.len();
        let cols = gamma.first().map_or(0, Vec::len);
        if rows < 2 || cols < 2 {
            return Err(Error::InvalidDimension { dim: rows.min(cols) });
        }
        if let Some(r) = gamma.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: r.len(),
            });
        }
        for col in 0..cols {
            let mut sum = 0.0;
            for row in &gamma {
                let v = row[col];
                if !v.is_finite() || v < -tol || v > 1.0 + tol {
                    return Err(Error::InvalidTransferMatrix { column: col, sum: v });
                }
                sum += v;
            }
            if (sum - 1.0).abs() > tol {
                return Err(Error::InvalidTransferMatrix { column: col, sum });
            }
        }
        Ok(TransferMatrix { gamma })
    }

    pub fn get(&self, second: usize, first: usize) -> f64 {
        self.gamma[second][first]
    }

    /// Number of outcomes of the second measurement.
    pub fn rows(&self) -> usize {
        self.gamma.len()
    }

    /// Number of outcomes of the first measurement.
    pub fn cols(&self) -> usize {
        self.gamma[0].len()
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.gamma
    }

    /// Swaps the roles of the two measurements without re-validating.
    pub fn transpose(&self) -> Vec<Vec<f64>> {
        (0..self.cols())
            .map(|i| (0..self.rows()).map(|j| self.gamma[j][i]).collect())
            .collect()
    }

    /// The two-outcome overlap parameter `c = 2γ[0][0] − 1`.
    pub fn overlap(&self) -> f64 {
        2.0 * self.gamma[0][0] - 1.0
    }

    /// Pushes first-measurement statistics through the matrix.
    pub fn push_forward(&self, first: &OutcomeDistribution) -> Result<Vec<f64>> {
        if first.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                found: first.len(),
            });
        }
        Ok(self
            .gamma
            .iter()
            .map(|row| row.iter().zip(first.probs()).map(|(g, p)| g * p).sum())
            .collect())
    }
}

/// `√(1 − Σ p²)`.
pub fn uncertainty(dist: &OutcomeDistribution) -> f64 {
    spread(dist.probs().iter().copied())
}

fn spread(probs: impl IntoIterator<Item = f64>) -> f64 {
    (1.0 - probs.into_iter().map(|p| p * p).sum::<f64>())
        .max(0.0)
        .sqrt()
}

/// Uncertainty of a measurement summed over the states left behind by a
/// preceding one.
///
/// `reversed` holds the transfer probabilities with the roles exchanged:
/// its columns are the post-measurement states of the measurement performed
/// first in this ordering, its rows the outcomes whose uncertainty is summed.
pub fn disturbed_uncertainty(reversed: &TransferMatrix) -> f64 {
    (0..reversed.cols())
        .map(|col| spread((0..reversed.rows()).map(|row| reversed.get(row, col))))
        .sum()
}

/// Total shift `Σ |p(a′|A₁) − p(a′|A₀→A₁)|` of the second measurement's
/// statistics caused by performing the first one.
pub fn disturbance(
    p_second_direct: &OutcomeDistribution,
    p_first: &OutcomeDistribution,
    gamma: &TransferMatrix,
) -> Result<f64> {
    if p_second_direct.len() != gamma.rows() {
        return Err(Error::DimensionMismatch {
            expected: gamma.rows(),
            found: p_second_direct.len(),
        });
    }
    let disturbed = gamma.push_forward(p_first)?;
    Ok(p_second_direct
        .probs()
        .iter()
        .zip(&disturbed)
        .map(|(p, q)| (p - q).abs())
        .sum())
}

pub fn ndwu_relation_holds(delta: f64, delta_disturbed: f64, d: f64, tol: f64) -> bool {
    delta * delta_disturbed >= d - tol
}

/// `e0² + e1² + c² − 2c·e0·e1 ≤ 1`.
pub fn two_outcome_relation(e0: f64, e1: f64, c: f64, tol: f64) -> bool {
    e0 * e0 + e1 * e1 + c * c - 2.0 * c * e0 * e1 <= 1.0 + tol
}

/// Closed interval of overlap parameters allowed in one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CInterval {
    pub lo: f64,
    pub hi: f64,
}

impl CInterval {
    pub fn contains(&self, c: f64, tol: f64) -> bool {
        c >= self.lo - tol && c <= self.hi + tol
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

pub fn c_interval(e0: f64, e1: f64) -> CInterval {
    let (e0, e1) = (e0.clamp(-1.0, 1.0), e1.clamp(-1.0, 1.0));
    let centre = e0 * e1;
    let half = (1.0 - e0 * e0).max(0.0).sqrt() * (1.0 - e1 * e1).max(0.0).sqrt();
    CInterval {
        lo: (centre - half).max(-1.0),
        hi: (centre + half).min(1.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideReport {
    pub max_lhs: f64,
    pub min_rhs: f64,
    pub satisfied: bool,
    pub skipped_states: usize,
}

impl SideReport {
    pub fn slack(&self) -> f64 {
        self.min_rhs - self.max_lhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionReport {
    /// Alice's measurements in the states prepared by Bob.
    pub side_a: SideReport,
    /// Bob's measurements in the states prepared by Alice.
    pub side_b: SideReport,
    pub overall: bool,
}

impl CriterionReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Intersects the c-intervals of all surviving conditional states of `side`.
pub fn side_report(behavior: &Behavior, side: Party) -> SideReport {
    let states = behavior.conditional_states(side);
    let skipped_states = 4 - states.len();
    let mut max_lhs = -1.0_f64;
    let mut min_rhs = 1.0_f64;
    let mut first = true;
    for state in &states {
        let Ok([e0, e1]) = behavior.local_expectations(state) else {
            continue;
        };
        let iv = c_interval(e0, e1);
        if first {
            max_lhs = iv.lo;
            min_rhs = iv.hi;
            first = false;
        } else {
            max_lhs = max_lhs.max(iv.lo);
            min_rhs = min_rhs.min(iv.hi);
        }
    }
    let satisfied = states.len() < 2 || max_lhs <= min_rhs + behavior.tol();
    SideReport {
        max_lhs,
        min_rhs,
        satisfied,
        skipped_states,
    }
}

pub fn criterion(behavior: &Behavior) -> CriterionReport {
    let side_a = side_report(behavior, Party::Alice);
    let side_b = side_report(behavior, Party::Bob);
    CriterionReport {
        side_a,
        side_b,
        overall: side_a.satisfied && side_b.satisfied,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::DEFAULT_TOL;

    fn dist(p: &[f64]) -> OutcomeDistribution {
        OutcomeDistribution::new(p.to_vec(), DEFAULT_TOL).unwrap()
    }

    fn tm(rows: &[&[f64]]) -> TransferMatrix {
        TransferMatrix::new(rows.iter().map(|r| r.to_vec()).collect(), DEFAULT_TOL).unwrap()
    }

    #[test]
    fn uncertainty_values() {
        assert_eq!(uncertainty(&dist(&[1.0, 0.0])), 0.0);
        assert!((uncertainty(&dist(&[0.5, 0.5])) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((uncertainty(&dist(&[0.75, 0.25])) - 0.6123724356957945).abs() < 1e-15);
    }

    #[test]
    fn disturbed_uncertainty_values() {
        assert_eq!(disturbed_uncertainty(&tm(&[&[1.0, 0.0], &[0.0, 1.0]])), 0.0);
        let u = disturbed_uncertainty(&tm(&[&[0.5, 0.5], &[0.5, 0.5]]));
        assert!((u - std::f64::consts::SQRT_2).abs() < 1e-15);
        let u = disturbed_uncertainty(&tm(&[&[0.9, 0.1], &[0.1, 0.9]]));
        assert!((u - 0.848528137423857).abs() < 1e-14);
    }

    #[test]
    fn disturbance_values() {
        let id = tm(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let p = dist(&[0.3, 0.7]);
        assert_eq!(disturbance(&p, &p, &id).unwrap(), 0.0);
        let uni = tm(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let d = disturbance(&dist(&[1.0, 0.0]), &dist(&[0.5, 0.5]), &uni).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        let sym = tm(&[&[0.8, 0.2], &[0.2, 0.8]]);
        let half = dist(&[0.5, 0.5]);
        assert_eq!(disturbance(&half, &half, &sym).unwrap(), 0.0);
        let three = dist(&[0.2, 0.3, 0.5]);
        assert!(matches!(
            disturbance(&half, &three, &sym),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn relation_checks() {
        assert!(ndwu_relation_holds(
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::SQRT_2,
            1.0,
            1e-12
        ));
        assert!(ndwu_relation_holds(0.0, 0.0, 0.0, 0.0));
        assert!(!ndwu_relation_holds(0.1, 0.1, 0.5, 1e-9));
        assert!(two_outcome_relation(0.0, 0.0, 0.0, 0.0));
        assert!(two_outcome_relation(1.0, 1.0, 1.0, 0.0));
        assert!(!two_outcome_relation(1.0, -1.0, 1.0, 1e-9));
    }

    #[test]
    fn c_interval_values() {
        assert_eq!(c_interval(0.0, 0.0), CInterval { lo: -1.0, hi: 1.0 });
        assert_eq!(c_interval(1.0, 0.3), CInterval { lo: 0.3, hi: 0.3 });
        let iv = c_interval(0.6, 0.8);
        assert!(iv.lo.abs() < 1e-15 && (iv.hi - 0.96).abs() < 1e-15);
        // clamped input
        assert_eq!(c_interval(1.0 + 1e-16, -1.0), CInterval { lo: -1.0, hi: -1.0 });
    }

    #[test]
    fn invalid_inputs() {
        assert!(OutcomeDistribution::new(vec![1.0], DEFAULT_TOL).is_err());
        assert!(OutcomeDistribution::new(vec![0.6, 0.6], DEFAULT_TOL).is_err());
        assert!(TransferMatrix::new(vec![vec![0.6, 0.5], vec![0.6, 0.5]], DEFAULT_TOL).is_err());
        assert!(TransferMatrix::new(vec![vec![1.0, 0.0], vec![0.0]], DEFAULT_TOL).is_err());
    }

    #[test]
    fn report_json_keys() {
        let b = Behavior::validate(&[0.25; 16], DEFAULT_TOL).unwrap();
        let r = criterion(&b);
        assert!(r.overall);
        let v: serde_json::Value = serde_json::from_str(&r.to_json_string()).unwrap();
        for side in ["side_a", "side_b"] {
            for key in ["max_lhs", "min_rhs", "satisfied", "skipped_states"] {
                assert!(v[side].get(key).is_some(), "{side}.{key}");
            }
        }
        assert_eq!(v["overall"], serde_json::Value::Bool(true));
    }
}
