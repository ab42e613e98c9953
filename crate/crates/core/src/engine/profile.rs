use std::sync::Arc;

use super::{Depth, EngineError, KnowledgeBase, Threshold, ThresholdedGeneralization};
use crate::logic::{AtomSet, Proposition, Signature};

/// Compiled form of a knowledge base: the chain of exception sets
/// `ξ(0) ⊇ ξ(1) ⊇ … ⊇ ξ(D)`, constant from the fixpoint `D` onwards.
///
/// `ξ(d)` covers everything that is exceptional at depth `d` or beyond, so
/// the minimal depth of a proposition is the largest `d` whose exception set
/// contains it.
#[derive(Debug, Clone)]
pub struct DepthProfile {
    signature: Arc<Signature>,
    chain: Vec<AtomSet>,
    fired: Vec<Vec<usize>>,
    fixpoint: usize,
    window: u32,
}

/// Verdict on one conclusion together with the depths that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryOutcome {
    pub antecedent_depth: Depth,
    pub exception_depth: Depth,
    pub threshold: Threshold,
    pub entailed: bool,
    /// The antecedent is impossible, so every conclusion from it holds.
    pub vacuous: bool,
}

/// Builds the exception chain of `kb` and stops at the first `D` with
/// `ξ(D) ⊨ ξ(D + window)`.
pub fn compile(kb: &KnowledgeBase) -> Result<DepthProfile, EngineError> {
    let atom_count = kb.signature().atom_count();
    let window = kb.window() as usize;
    let cap = (kb.len() + 1) * window + window;
    let antecedents: Vec<AtomSet> = kb
        .rules()
        .iter()
        .map(|r| r.antecedent().atoms().clone())
        .collect();
    let exceptions: Vec<AtomSet> = kb
        .rules()
        .iter()
        .map(|r| r.exception().atoms().clone())
        .collect();
    let lags: Vec<Option<usize>> = kb
        .rules()
        .iter()
        .map(|r| r.threshold().finite_value().map(|k| k as usize))
        .collect();

    let mut chain = vec![AtomSet::full(atom_count)];
    let mut fired: Vec<Vec<usize>> = vec![Vec::new()];
    let mut candidate = 0usize;
    loop {
        while chain.len() <= candidate + window {
            let d = chain.len();
            if d > cap {
                return Err(EngineError::IterationCap { cap });
            }
            let mut xi = AtomSet::empty(atom_count);
            let mut here = Vec::new();
            for (i, lag) in lags.iter().enumerate() {
                // ξ(d') = t for d' ≤ 0 and for an infinite lag.
                let fires = match lag {
                    Some(k) if *k < d => antecedents[i].is_subset(&chain[d - k]),
                    _ => true,
                };
                if fires {
                    xi = xi.union(&exceptions[i]);
                    here.push(i);
                }
            }
            chain.push(xi);
            fired.push(here);
        }
        if chain[candidate].is_subset(&chain[candidate + window]) {
            break;
        }
        candidate += 1;
    }
    chain.truncate(candidate + 1);
    fired.truncate(candidate + 1);
    Ok(DepthProfile {
        signature: Arc::clone(kb.signature()),
        chain,
        fired,
        fixpoint: candidate,
        window: window as u32,
    })
}

impl DepthProfile {
    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    /// The fixpoint index `D`.
    pub fn fixpoint(&self) -> usize {
        self.fixpoint
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    /// `ξ(d)`; for `d ≥ D` this is `ξ(∞)`.
    pub fn xi(&self, d: usize) -> Proposition {
        let set = self.chain[d.min(self.fixpoint)].clone();
        Proposition::from_atoms(set, &self.signature).expect("chain is over the signature")
    }

    pub fn xi_infinity(&self) -> Proposition {
        self.xi(self.fixpoint)
    }

    /// `ξ(0), …, ξ(D)`.
    pub fn chain(&self) -> Vec<Proposition> {
        (0..=self.fixpoint).map(|d| self.xi(d)).collect()
    }

    /// Indices of the rules whose exceptions make up `ξ(d)`, for `1 ≤ d ≤ D`.
    pub fn fired_at(&self, d: usize) -> &[usize] {
        self.fired.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    fn check(&self, p: &Proposition) -> Result<(), EngineError> {
        if **p.signature() == *self.signature {
            Ok(())
        } else {
            Err(EngineError::SignatureMismatch)
        }
    }

    fn depth_of_atoms(&self, rho: &AtomSet) -> Depth {
        if rho.is_subset(&self.chain[self.fixpoint]) {
            return Depth::Infinite;
        }
        // The satisfied depths are downward closed and ξ(0) = t.
        let d = (0..self.fixpoint)
            .rev()
            .find(|&d| rho.is_subset(&self.chain[d]))
            .unwrap_or(0);
        Depth::Finite(d as u32)
    }

    /// Minimal exception depth `d_A(ρ)`.
    pub fn depth_of(&self, rho: &Proposition) -> Result<Depth, EngineError> {
        self.check(rho)?;
        Ok(self.depth_of_atoms(rho.atoms()))
    }

    /// Degree of rarity of `ρ`. It coincides with the exception depth.
    pub fn degree_of_rarity(&self, rho: &Proposition) -> Result<Depth, EngineError> {
        self.depth_of(rho)
    }

    /// Depth of every atom, indexed like [`AtomSet`]. A proposition's depth is
    /// the minimum over its atoms.
    pub fn atom_depths(&self) -> Vec<Depth> {
        let n = self.signature.atom_count();
        (0..n)
            .map(|i| self.depth_of_atoms(&AtomSet::from_indices(n, [i])))
            .collect()
    }

    /// Consistency: `d_A(t)` is `0` for a consistent knowledge base and
    /// infinite otherwise.
    pub fn is_consistent(&self) -> bool {
        self.depth_of_atoms(&AtomSet::full(self.signature.atom_count())) == Depth::ZERO
    }

    pub fn evaluate(&self, query: &ThresholdedGeneralization) -> Result<QueryOutcome, EngineError> {
        self.check(query.antecedent())?;
        let antecedent_depth = self.depth_of_atoms(query.antecedent().atoms());
        let exception_depth = self.depth_of_atoms(query.exception().atoms());
        let threshold = query.threshold();
        Ok(QueryOutcome {
            antecedent_depth,
            exception_depth,
            threshold,
            entailed: exception_depth.at_least_sum(antecedent_depth, threshold.depth()),
            vacuous: !query.antecedent().is_satisfiable(),
        })
    }

    /// Whether the knowledge base entails `query` in probability:
    /// `d_A(γ ∧ ¬ζ) ≥ d_A(γ) + j`.
    pub fn entails_in_probability(
        &self,
        query: &ThresholdedGeneralization,
    ) -> Result<bool, EngineError> {
        Ok(self.evaluate(query)?.entailed)
    }

    /// Largest `j ≥ 1` for which `γ ⇒^j ζ` is entailed, if any.
    pub fn max_entailed_threshold(
        &self,
        gamma: &Proposition,
        zeta: &Proposition,
    ) -> Result<Option<Depth>, EngineError> {
        self.check(gamma)?;
        self.check(zeta)?;
        let exception = gamma.conjoin(&zeta.negate())?;
        let gap = self
            .depth_of_atoms(exception.atoms())
            .gap_above(self.depth_of_atoms(gamma.atoms()));
        Ok(gap.filter(|&g| g >= Depth::Finite(1)))
    }
}
