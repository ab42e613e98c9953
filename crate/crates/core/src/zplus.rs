//! Translation to and from System-Z⁺ default rules.
//!
//! A Z⁺ rule `α →ᵏ β` of strength `k ≥ 0` corresponds to the thresholded
//! generalization `α ⇒^{k+1} β`. Z⁺ consequence at strength `j − 1` is
//! answered by depth entailment at threshold `j`, which is only sound when
//! every proposition involved is satisfiable and the translated knowledge
//! base gives infinite depth to `f` alone.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::engine::{compile, EngineError, KnowledgeBase, Threshold, ThresholdedGeneralization};
use crate::logic::{Proposition, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZPlusRule {
    pub antecedent: Proposition,
    pub consequent: Proposition,
    pub strength: u32,
}

impl ZPlusRule {
    pub fn new(antecedent: Proposition, consequent: Proposition, strength: u32) -> Result<Self, ZPlusError> {
        if antecedent.signature() != consequent.signature() {
            return Err(EngineError::SignatureMismatch.into());
        }
        Ok(ZPlusRule {
            antecedent,
            consequent,
            strength,
        })
    }

    pub fn parse(
        antecedent: &str,
        consequent: &str,
        strength: u32,
        signature: &Arc<Signature>,
    ) -> Result<Self, ZPlusError> {
        let a = Proposition::parse(antecedent, signature).map_err(EngineError::from)?;
        let c = Proposition::parse(consequent, signature).map_err(EngineError::from)?;
        Self::new(a, c, strength)
    }

    fn side(&self, text: &Proposition) -> String {
        text.display_expr().render(text.signature())
    }
}

impl fmt::Display for ZPlusRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} @ {}",
            self.side(&self.antecedent),
            self.side(&self.consequent),
            self.strength
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZPlusError {
    #[error("rule {index} (`{rule}`) has an infinite threshold, which has no Z+ strength")]
    InfiniteThreshold { index: usize, rule: String },
    #[error("side condition failed: {what} `{text}` is unsatisfiable")]
    UnsatisfiableSide { what: String, text: String },
    #[error("side condition failed: the knowledge base makes `{witness}` infinitely rare (Z+ inconsistent)")]
    InfiniteRarity { witness: String },
    #[error("strength {0} is too large")]
    StrengthOverflow(u32),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Maps `α ⇒ᵏ β` to `α →^{k−1} β`. Fails on the first `@ inf` rule.
pub fn to_zplus(kb: &KnowledgeBase) -> Result<Vec<ZPlusRule>, ZPlusError> {
    kb.rules()
        .iter()
        .enumerate()
        .map(|(index, rule)| match rule.threshold().finite_value() {
            Some(k) => Ok(ZPlusRule {
                antecedent: rule.antecedent().clone(),
                consequent: rule.consequent().clone(),
                strength: k - 1,
            }),
            None => Err(ZPlusError::InfiniteThreshold {
                index,
                rule: rule.to_string(),
            }),
        })
        .collect()
}

/// Maps `α →ᵏ β` to `α ⇒^{k+1} β` over `signature`.
pub fn from_zplus(rules: &[ZPlusRule], signature: &Arc<Signature>) -> Result<KnowledgeBase, ZPlusError> {
    let mut kb = KnowledgeBase::new(Arc::clone(signature));
    for rule in rules {
        kb.push(ThresholdedGeneralization::new(
            rule.antecedent.clone(),
            rule.consequent.clone(),
            threshold_for(rule.strength)?,
        )?)?;
    }
    Ok(kb)
}

fn threshold_for(strength: u32) -> Result<Threshold, ZPlusError> {
    let k = strength
        .checked_add(1)
        .ok_or(ZPlusError::StrengthOverflow(strength))?;
    Ok(Threshold::finite(k)?)
}

/// Whether `γ` Z⁺-entails `ζ` at strength `jz`, decided as depth entailment
/// of `γ ⇒^{jz+1} ζ` from the translated rules. The side conditions are
/// checked first and a failure names the condition.
pub fn zplus_consequence(
    rules: &[ZPlusRule],
    gamma: &Proposition,
    zeta: &Proposition,
    jz: u32,
) -> Result<bool, ZPlusError> {
    let signature = gamma.signature();
    for (i, rule) in rules.iter().enumerate() {
        require_satisfiable(&rule.antecedent, &format!("antecedent of rule {i}"))?;
        require_satisfiable(&rule.consequent, &format!("consequent of rule {i}"))?;
    }
    require_satisfiable(gamma, "query antecedent")?;
    require_satisfiable(zeta, "query consequent")?;
    let kb = from_zplus(rules, signature)?;
    let profile = compile(&kb)?;
    let xi = profile.xi_infinity();
    if xi.is_satisfiable() {
        return Err(ZPlusError::InfiniteRarity {
            witness: xi.display_expr().render(signature),
        });
    }
    let query = ThresholdedGeneralization::new(gamma.clone(), zeta.clone(), threshold_for(jz)?)?;
    Ok(profile.entails_in_probability(&query)?)
}

fn require_satisfiable(p: &Proposition, what: &str) -> Result<(), ZPlusError> {
    if p.is_satisfiable() {
        Ok(())
    } else {
        Err(ZPlusError::UnsatisfiableSide {
            what: what.to_string(),
            text: p.display_expr().render(p.signature()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(names: &[&str]) -> Arc<Signature> {
        Signature::new(names.iter().copied()).unwrap()
    }

    fn rules(sig: &Arc<Signature>, list: &[(&str, &str, u32)]) -> Vec<ZPlusRule> {
        list.iter()
            .map(|(a, c, k)| ZPlusRule::parse(a, c, *k, sig).unwrap())
            .collect()
    }

    fn prop(sig: &Arc<Signature>, text: &str) -> Proposition {
        Proposition::parse(text, sig).unwrap()
    }

    #[test]
    fn strength_shift() {
        let s = sig(&["a", "b"]);
        let mut kb = KnowledgeBase::new(s.clone());
        kb.add("a", "b", 1).unwrap();
        kb.add("a", "b", 3).unwrap();
        let z = to_zplus(&kb).unwrap();
        assert_eq!(z[0].strength, 0);
        assert_eq!(z[1].strength, 2);
        assert_eq!(z[1].to_string(), "a -> b @ 2");
        assert_eq!(from_zplus(&z, &s).unwrap(), kb);
    }

    #[test]
    fn infinite_rule_is_named() {
        let s = sig(&["a", "b"]);
        let mut kb = KnowledgeBase::new(s);
        kb.add("a", "b", 1).unwrap();
        kb.add_hard("b", "a").unwrap();
        match to_zplus(&kb) {
            Err(ZPlusError::InfiniteThreshold { index, rule }) => {
                assert_eq!(index, 1);
                assert_eq!(rule, "b => a @ inf");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shifted_examples() {
        let s = sig(&["a", "b"]);
        let r = rules(&s, &[("t", "a", 0), ("~a", "b", 0)]);
        assert!(zplus_consequence(&r, &prop(&s, "t"), &prop(&s, "a | b"), 1).unwrap());
        assert!(!zplus_consequence(&r, &prop(&s, "t"), &prop(&s, "a | b"), 2).unwrap());

        let s = sig(&["a", "b", "g"]);
        let strong = rules(&s, &[("a", "g", 1), ("b", "~g", 0)]);
        let even = rules(&s, &[("a", "g", 0), ("b", "~g", 0)]);
        let (ab, g) = (prop(&s, "a & b"), prop(&s, "g"));
        assert!(zplus_consequence(&strong, &ab, &g, 0).unwrap());
        assert!(!zplus_consequence(&even, &ab, &g, 0).unwrap());
    }

    #[test]
    fn side_conditions_are_reported() {
        let s = sig(&["a"]);
        let r = rules(&s, &[("t", "a", 0), ("t", "~a", 0)]);
        assert!(matches!(
            zplus_consequence(&r, &prop(&s, "t"), &prop(&s, "a"), 0),
            Err(ZPlusError::InfiniteRarity { .. })
        ));
        let r = rules(&s, &[("a & ~a", "a", 0)]);
        let err = zplus_consequence(&r, &prop(&s, "t"), &prop(&s, "a"), 0).unwrap_err();
        assert!(err.to_string().contains("antecedent of rule 0"), "{err}");
        let err = zplus_consequence(&[], &prop(&s, "t"), &prop(&s, "f"), 0).unwrap_err();
        assert!(err.to_string().contains("query consequent"), "{err}");
    }
}
