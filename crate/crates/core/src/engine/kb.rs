use std::fmt;
use std::sync::Arc;

use super::{EngineError, Threshold};
use crate::logic::{Proposition, Signature};

/// `antecedent ⇒^k consequent`: nearly every antecedent is a consequent,
/// with exception rate at most `ψ·δ^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThresholdedGeneralization {
    antecedent: Proposition,
    consequent: Proposition,
    threshold: Threshold,
}

impl ThresholdedGeneralization {
    pub fn new(
        antecedent: Proposition,
        consequent: Proposition,
        threshold: Threshold,
    ) -> Result<Self, EngineError> {
        if antecedent.signature() != consequent.signature() {
            return Err(EngineError::SignatureMismatch);
        }
        Ok(ThresholdedGeneralization {
            antecedent,
            consequent,
            threshold,
        })
    }

    /// Parses both sides against `signature`.
    pub fn parse(
        antecedent: &str,
        consequent: &str,
        threshold: Threshold,
        signature: &Arc<Signature>,
    ) -> Result<Self, EngineError> {
        Self::new(
            Proposition::parse(antecedent, signature)?,
            Proposition::parse(consequent, signature)?,
            threshold,
        )
    }

    pub fn antecedent(&self) -> &Proposition {
        &self.antecedent
    }

    pub fn consequent(&self) -> &Proposition {
        &self.consequent
    }

    pub fn threshold(&self) -> Threshold {
        self.threshold
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.antecedent.signature()
    }

    /// `antecedent ∧ ¬consequent`, the exceptions to the rule.
    pub fn exception(&self) -> Proposition {
        self.antecedent
            .conjoin(&self.consequent.negate())
            .expect("sides share a signature")
    }

    pub fn with_threshold(&self, threshold: Threshold) -> Self {
        ThresholdedGeneralization {
            threshold,
            ..self.clone()
        }
    }
}

impl fmt::Display for ThresholdedGeneralization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} => {} @ {}",
            self.antecedent, self.consequent, self.threshold
        )
    }
}

/// Ordered premises over one signature. Duplicates and the empty list are
/// both allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeBase {
    signature: Arc<Signature>,
    rules: Vec<ThresholdedGeneralization>,
}

impl KnowledgeBase {
    pub fn new(signature: Arc<Signature>) -> Self {
        KnowledgeBase {
            signature,
            rules: Vec::new(),
        }
    }

    pub fn with_rules<I>(signature: Arc<Signature>, rules: I) -> Result<Self, EngineError>
    where
        I: IntoIterator<Item = ThresholdedGeneralization>,
    {
        let mut kb = Self::new(signature);
        for rule in rules {
            kb.push(rule)?;
        }
        Ok(kb)
    }

    pub fn push(&mut self, rule: ThresholdedGeneralization) -> Result<(), EngineError> {
        if **rule.signature() != *self.signature {
            return Err(EngineError::SignatureMismatch);
        }
        self.rules.push(rule);
        Ok(())
    }

    /// Parses `antecedent => consequent @ k` pieces and appends the rule.
    pub fn add(&mut self, antecedent: &str, consequent: &str, k: u32) -> Result<(), EngineError> {
        let rule = ThresholdedGeneralization::parse(
            antecedent,
            consequent,
            Threshold::finite(k)?,
            &self.signature,
        )?;
        self.push(rule)
    }

    /// Appends a hard rule `antecedent => consequent @ inf`.
    pub fn add_hard(&mut self, antecedent: &str, consequent: &str) -> Result<(), EngineError> {
        let rule = ThresholdedGeneralization::parse(
            antecedent,
            consequent,
            Threshold::INFINITE,
            &self.signature,
        )?;
        self.push(rule)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn rules(&self) -> &[ThresholdedGeneralization] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// `max({1} ∪ {finite k_i})`, the stride of the fixpoint test.
    pub fn window(&self) -> u32 {
        self.rules
            .iter()
            .filter_map(|r| r.threshold().finite_value())
            .fold(1, u32::max)
    }
}
