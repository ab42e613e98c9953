//! Propositional language over a fixed set of primitive propositions.
//!
//! Every [`Proposition`] is stored canonically as the set of atoms (complete
//! truth assignments) that satisfy it, encoded as a bitmask of `2^r` bits.
//! Entailment becomes a subset test and equivalence becomes mask equality.
//! The expression tree a proposition was built from is kept only for display.

mod atoms;
mod expr;
pub(crate) mod parser;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

pub use atoms::AtomSet;
pub use expr::Expr;
pub use parser::{ParseError, Position};

/// Largest number of primitive propositions a signature may hold.
pub const MAX_PRIMITIVES: usize = 24;

/// Identifiers with a fixed meaning in the rule language.
pub const RESERVED_WORDS: [&str; 5] = ["true", "false", "t", "f", "inf"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("signature needs at least one primitive proposition")]
    EmptySignature,
    #[error("signature has {0} primitives, at most {MAX_PRIMITIVES} are supported")]
    TooManyPrimitives(usize),
    #[error("duplicate primitive proposition `{0}`")]
    DuplicateName(String),
    #[error("`{0}` is not a valid primitive proposition name")]
    InvalidName(String),
    #[error("propositions are over different signatures")]
    SignatureMismatch,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Ordered list of primitive proposition names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    names: Vec<String>,
}

impl Signature {
    pub fn new<I, S>(names: I) -> Result<Arc<Self>, LogicError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(LogicError::EmptySignature);
        }
        if names.len() > MAX_PRIMITIVES {
            return Err(LogicError::TooManyPrimitives(names.len()));
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) || RESERVED_WORDS.contains(&name.as_str()) {
                return Err(LogicError::InvalidName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(LogicError::DuplicateName(name.clone()));
            }
        }
        Ok(Arc::new(Signature { names }))
    }

    /// Number of primitive propositions, `r`.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of atoms, `2^r`.
    pub fn atom_count(&self) -> usize {
        1usize << self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Renders atom `index` as a conjunction of literals, e.g. `a & ~b`.
    pub fn atom_label(&self, index: usize) -> String {
        self.names
            .iter()
            .enumerate()
            .map(|(j, n)| {
                if index >> j & 1 == 1 {
                    n.clone()
                } else {
                    format!("~{n}")
                }
            })
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A proposition of the language, identified up to logical equivalence.
///
/// `PartialEq` and `Hash` compare the atom sets, so `==` is logical
/// equivalence over the same signature.
#[derive(Clone)]
pub struct Proposition {
    signature: Arc<Signature>,
    atoms: AtomSet,
    source: Option<Expr>,
}

impl Proposition {
    /// Parses `text` against `signature`.
    pub fn parse(text: &str, signature: &Arc<Signature>) -> Result<Self, LogicError> {
        let formula = parser::parse_formula(text)?;
        Ok(formula.resolve(signature)?)
    }

    pub fn from_expr(expr: Expr, signature: &Arc<Signature>) -> Result<Self, LogicError> {
        if let Some(bad) = expr.max_var().filter(|&v| v >= signature.len()) {
            return Err(LogicError::InvalidName(format!("#{bad}")));
        }
        let atoms = expr.atom_set(signature.len());
        Ok(Proposition {
            signature: Arc::clone(signature),
            atoms,
            source: Some(expr),
        })
    }

    /// Builds a proposition straight from its atom set; it prints in
    /// disjunctive normal form.
    pub fn from_atoms(atoms: AtomSet, signature: &Arc<Signature>) -> Result<Self, LogicError> {
        if atoms.len() != signature.atom_count() {
            return Err(LogicError::SignatureMismatch);
        }
        Ok(Proposition {
            signature: Arc::clone(signature),
            atoms,
            source: None,
        })
    }

    /// The universal property `t`.
    pub fn top(signature: &Arc<Signature>) -> Self {
        Self::from_expr(Expr::True, signature).expect("constant is always valid")
    }

    /// The impossible property `f`.
    pub fn bottom(signature: &Arc<Signature>) -> Self {
        Self::from_expr(Expr::False, signature).expect("constant is always valid")
    }

    pub fn primitive(signature: &Arc<Signature>, index: usize) -> Result<Self, LogicError> {
        Self::from_expr(Expr::Var(index), signature)
    }

    /// The atom with truth assignment given by the bits of `index`.
    pub fn atom(signature: &Arc<Signature>, index: usize) -> Result<Self, LogicError> {
        if index >= signature.atom_count() {
            return Err(LogicError::SignatureMismatch);
        }
        Self::from_expr(Expr::atom(index, signature.len()), signature)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn source(&self) -> Option<&Expr> {
        self.source.as_ref()
    }

    pub fn is_satisfiable(&self) -> bool {
        !self.atoms.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.atoms.is_full()
    }

    fn check_same(&self, other: &Proposition) -> Result<(), LogicError> {
        if Arc::ptr_eq(&self.signature, &other.signature) || self.signature == other.signature {
            Ok(())
        } else {
            Err(LogicError::SignatureMismatch)
        }
    }

    /// `self ⊨ other`.
    pub fn entails(&self, other: &Proposition) -> Result<bool, LogicError> {
        self.check_same(other)?;
        Ok(self.atoms.is_subset(&other.atoms))
    }

    pub fn equivalent(&self, other: &Proposition) -> Result<bool, LogicError> {
        self.check_same(other)?;
        Ok(self.atoms == other.atoms)
    }

    pub fn negate(&self) -> Proposition {
        Proposition {
            signature: Arc::clone(&self.signature),
            atoms: self.atoms.complement(),
            source: self.source.clone().map(|e| Expr::Not(Box::new(e))),
        }
    }

    pub fn conjoin(&self, other: &Proposition) -> Result<Proposition, LogicError> {
        self.check_same(other)?;
        Ok(Proposition {
            signature: Arc::clone(&self.signature),
            atoms: self.atoms.intersection(&other.atoms),
            source: compose(&self.source, &other.source, Expr::and),
        })
    }

    pub fn disjoin(&self, other: &Proposition) -> Result<Proposition, LogicError> {
        self.check_same(other)?;
        Ok(Proposition {
            signature: Arc::clone(&self.signature),
            atoms: self.atoms.union(&other.atoms),
            source: compose(&self.source, &other.source, Expr::or),
        })
    }

    /// Expression used for printing: the source tree when one is kept,
    /// otherwise the disjunctive normal form of the atom set.
    pub fn display_expr(&self) -> Expr {
        match &self.source {
            Some(e) => e.clone(),
            None => Expr::dnf(&self.atoms, self.signature.len()),
        }
    }
}

fn compose(a: &Option<Expr>, b: &Option<Expr>, f: fn(Expr, Expr) -> Expr) -> Option<Expr> {
    match (a, b) {
        (Some(a), Some(b)) => Some(f(a.clone(), b.clone())),
        _ => None,
    }
}

impl PartialEq for Proposition {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature && self.atoms == other.atoms
    }
}

impl Eq for Proposition {}

impl Hash for Proposition {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.atoms.hash(state);
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_expr().write(f, &self.signature)
    }
}

impl fmt::Debug for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Proposition({self})")
    }
}
