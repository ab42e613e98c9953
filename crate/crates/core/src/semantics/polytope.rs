use super::lp::{LinearProgram, LpResult};
use super::{ParameterAssignment, SemanticsError, TOLERANCE};
use crate::engine::KnowledgeBase;

/// Largest signature the sampler accepts (256 atoms).
pub const MAX_SAMPLING_PRIMITIVES: usize = 8;

/// One linear row `coefficients · π (= or ≤) bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<f64>,
    pub bound: f64,
    /// Index of the premise the row encodes; `None` for normalization.
    pub rule: Option<usize>,
}

impl Constraint {
    fn value(&self, x: &[f64]) -> f64 {
        self.coefficients.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// The models satisfying a knowledge base under fixed parameters:
/// `π ≥ 0`, `Σπ = 1`, one `≤` row per finite premise and one zero row per
/// hard premise.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeSystem {
    dimension: usize,
    equalities: Vec<Constraint>,
    inequalities: Vec<Constraint>,
}

/// Linearizes every premise: `π(α∧¬β) − ψ·δ^k·π(α) ≤ 0`, or
/// `π(α∧¬β) = 0` when `k = ∞`.
pub fn build_polytope(
    kb: &KnowledgeBase,
    params: &ParameterAssignment,
) -> Result<PolytopeSystem, SemanticsError> {
    let r = kb.signature().len();
    if r > MAX_SAMPLING_PRIMITIVES {
        return Err(SemanticsError::DimensionCap { primitives: r });
    }
    if params.psi().len() != kb.len() {
        return Err(SemanticsError::PsiLength {
            expected: kb.len(),
            found: params.psi().len(),
        });
    }
    let n = kb.signature().atom_count();
    let mut equalities = vec![Constraint {
        coefficients: vec![1.0; n],
        bound: 1.0,
        rule: None,
    }];
    let mut inequalities = Vec::new();
    for (i, (rule, &psi)) in kb.rules().iter().zip(params.psi()).enumerate() {
        let exception = rule.exception();
        let mut coefficients = vec![0.0; n];
        for j in exception.atoms().iter() {
            coefficients[j] = 1.0;
        }
        match rule.threshold().finite_value() {
            Some(k) => {
                let rate = psi * params.delta().powi(k as i32);
                for j in rule.antecedent().atoms().iter() {
                    coefficients[j] -= rate;
                }
                inequalities.push(Constraint {
                    coefficients,
                    bound: 0.0,
                    rule: Some(i),
                });
            }
            None => equalities.push(Constraint {
                coefficients,
                bound: 0.0,
                rule: Some(i),
            }),
        }
    }
    Ok(PolytopeSystem {
        dimension: n,
        equalities,
        inequalities,
    })
}

impl PolytopeSystem {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn equalities(&self) -> &[Constraint] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Constraint] {
        &self.inequalities
    }

    /// Largest violation of any row or of non-negativity at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let eq = self.equalities.iter().map(|c| (c.value(x) - c.bound).abs());
        let le = self.inequalities.iter().map(|c| c.value(x) - c.bound);
        let nonneg = x.iter().map(|v| -v);
        eq.chain(le).chain(nonneg).fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension && self.max_violation(x) <= TOLERANCE
    }

    pub(crate) fn to_lp(&self) -> LinearProgram {
        LinearProgram {
            dim: self.dimension,
            objective: vec![0.0; self.dimension],
            equalities: self
                .equalities
                .iter()
                .map(|c| (c.coefficients.clone(), c.bound))
                .collect(),
            inequalities: self
                .inequalities
                .iter()
                .map(|c| (c.coefficients.clone(), c.bound))
                .collect(),
        }
    }

    pub(crate) fn feasible_point(&self) -> Result<Option<Vec<f64>>, SemanticsError> {
        match self.to_lp().solve()? {
            LpResult::Infeasible => Ok(None),
            LpResult::Optimal { x, .. } => {
                let violation = self.max_violation(&x);
                if violation > TOLERANCE {
                    return Err(SemanticsError::Numerical(format!(
                        "phase-one point violates a constraint by {violation:e}"
                    )));
                }
                Ok(Some(x))
            }
        }
    }
}

/// Whether the polytope has a point, to within [`TOLERANCE`].
pub fn is_feasible(system: &PolytopeSystem) -> Result<bool, SemanticsError> {
    Ok(system.feasible_point()?.is_some())
}
