//! Probability models of a knowledge base.
//!
//! A model is a probability vector over the `2^r` atoms. For fixed
//! parameters `(Ψ, δ)` the models that satisfy every premise form a convex
//! polytope; this module builds that polytope, decides whether it is empty,
//! samples it uniformly, and measures how the upper quantiles of a
//! conclusion's exception rate shrink as `δ → 0`.

mod lp;
mod polytope;
mod sampler;
mod scaling;

use thiserror::Error;

use crate::engine::{EngineError, ThresholdedGeneralization};
use crate::logic::Proposition;

pub use polytope::{build_polytope, is_feasible, Constraint, PolytopeSystem, MAX_SAMPLING_PRIMITIVES};
pub use sampler::{sample_uniform, HitAndRun, SampleSet, DEFAULT_BURN_IN};
pub use scaling::{
    conclusion_quantile, conclusion_rates, empirical_quantile, psi_sweep, scaling_verdict, ScalingPoint,
    ScalingReport, SweepReport, Verdict, DEFAULT_DELTA_GRID, DEFAULT_PSI_SWEEP,
};

/// Tolerance on normalization and on constraint violation.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SemanticsError {
    #[error("{primitives} primitives exceed the sampling cap of {MAX_SAMPLING_PRIMITIVES}")]
    DimensionCap { primitives: usize },
    #[error("expected {expected} ψ values, got {found}")]
    PsiLength { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("the model polytope is empty")]
    Infeasible,
    #[error("the model polytope is empty at δ = {delta}")]
    InfeasibleAt { delta: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invalid δ grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// A probability function on the language, as a vector indexed by atom.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    probabilities: Vec<f64>,
}

impl Model {
    pub fn new(probabilities: Vec<f64>) -> Result<Self, SemanticsError> {
        if !probabilities.len().is_power_of_two() {
            return Err(SemanticsError::InvalidModel(format!(
                "{} coordinates is not a power of two",
                probabilities.len()
            )));
        }
        if let Some(p) = probabilities.iter().find(|p| !(**p >= 0.0)) {
            return Err(SemanticsError::InvalidModel(format!(
                "negative or undefined coordinate {p}"
            )));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(SemanticsError::InvalidModel(format!(
                "coordinates sum to {total}"
            )));
        }
        Ok(Model { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `π(φ)`: total mass of the atoms of `φ`.
    pub fn probability(&self, phi: &Proposition) -> f64 {
        phi.atoms().iter().map(|i| self.probabilities[i]).sum()
    }

    /// `1 − π(β|α)`, taken as `0` when `π(α) = 0`.
    pub fn exception_rate(&self, alpha: &Proposition, beta: &Proposition) -> f64 {
        exception_rate(&self.probabilities, alpha, beta)
    }

    /// Whether `1 − π(β|α) ≤ ψ·δ^k` for `rule`.
    pub fn satisfies(&self, rule: &ThresholdedGeneralization, psi: f64, delta: f64) -> bool {
        let bound = match rule.threshold().finite_value() {
            Some(k) => psi * delta.powi(k as i32),
            None => 0.0,
        };
        let alpha = self.probability(rule.antecedent());
        let exception = self.probability(&rule.exception());
        exception <= bound * alpha + TOLERANCE
    }
}

pub(crate) fn exception_rate(x: &[f64], alpha: &Proposition, beta: &Proposition) -> f64 {
    let mut mass = 0.0;
    let mut miss = 0.0;
    for i in alpha.atoms().iter() {
        mass += x[i];
        if !beta.atoms().contains(i) {
            miss += x[i];
        }
    }
    if mass > 0.0 {
        (miss / mass).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Parameters `(Ψ, δ)` for the premises, `ψ` for the conclusion and the
/// quantile level `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterAssignment {
    psi: Vec<f64>,
    delta: f64,
    query_psi: f64,
    eta: f64,
}

impl ParameterAssignment {
    pub fn new(psi: Vec<f64>, delta: f64, query_psi: f64, eta: f64) -> Result<Self, SemanticsError> {
        if let Some(p) = psi.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
            return Err(SemanticsError::InvalidParameter(format!(
                "ψ must be positive, got {p}"
            )));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(SemanticsError::InvalidParameter(format!(
                "δ must lie in (0, 1), got {delta}"
            )));
        }
        if !(query_psi > 0.0 && query_psi.is_finite()) {
            return Err(SemanticsError::InvalidParameter(format!(
                "conclusion ψ must be positive, got {query_psi}"
            )));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(SemanticsError::InvalidParameter(format!(
                "η must lie in (0, 1), got {eta}"
            )));
        }
        Ok(ParameterAssignment {
            psi,
            delta,
            query_psi,
            eta,
        })
    }

    /// `m` copies of `psi`, conclusion ψ of 1 and `η = 0.1`.
    pub fn uniform(m: usize, psi: f64, delta: f64) -> Result<Self, SemanticsError> {
        Self::new(vec![psi; m], delta, 1.0, 0.1)
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn query_psi(&self) -> f64 {
        self.query_psi
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self, SemanticsError> {
        Self::new(self.psi.clone(), delta, self.query_psi, self.eta)
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self, SemanticsError> {
        Self::new(self.psi.clone(), self.delta, self.query_psi, eta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Signature;

    #[test]
    fn model_validation() {
        assert!(Model::new(vec![0.5, 0.5]).is_ok());
        assert!(Model::new(vec![0.5, 0.6]).is_err());
        assert!(Model::new(vec![-0.1, 1.1]).is_err());
        assert!(Model::new(vec![1.0, 0.0, 0.0]).is_err());
        assert!(Model::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn exception_rate_uses_vacuous_convention() {
        let sig = Signature::new(["a", "b"]).unwrap();
        let a = Proposition::parse("a", &sig).unwrap();
        let b = Proposition::parse("b", &sig).unwrap();
        // atoms: ~a~b, a~b, ~ab, ab
        let m = Model::new(vec![0.4, 0.1, 0.2, 0.3]).unwrap();
        assert!((m.probability(&a) - 0.4).abs() < 1e-12);
        assert!((m.exception_rate(&a, &b) - 0.25).abs() < 1e-12);
        let none = Model::new(vec![0.5, 0.0, 0.5, 0.0]).unwrap();
        assert_eq!(none.exception_rate(&a, &b), 0.0);
    }

    #[test]
    fn parameter_validation() {
        assert!(ParameterAssignment::new(vec![1.0], 0.1, 1.0, 0.1).is_ok());
        assert!(ParameterAssignment::new(vec![0.0], 0.1, 1.0, 0.1).is_err());
        assert!(ParameterAssignment::new(vec![1.0], 1.0, 1.0, 0.1).is_err());
        assert!(ParameterAssignment::new(vec![1.0], 0.1, -1.0, 0.1).is_err());
        assert!(ParameterAssignment::new(vec![1.0], 0.1, 1.0, 0.0).is_err());
    }
}
