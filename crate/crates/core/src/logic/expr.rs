use std::fmt;

use super::{AtomSet, Signature};

/// Expression tree over primitive indices. Derived connectives are
/// desugared by the parser, so only the base connectives appear here.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(usize),
    True,
    False,
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn not(a: Expr) -> Expr {
        Expr::Not(Box::new(a))
    }

    /// Conjunction of literals for atom `index`.
    pub fn atom(index: usize, primitives: usize) -> Expr {
        (0..primitives)
            .map(|j| {
                if index >> j & 1 == 1 {
                    Expr::Var(j)
                } else {
                    Expr::not(Expr::Var(j))
                }
            })
            .reduce(Expr::and)
            .unwrap_or(Expr::True)
    }

    /// Disjunction of the atoms in `atoms`.
    pub fn dnf(atoms: &AtomSet, primitives: usize) -> Expr {
        if atoms.is_full() {
            return Expr::True;
        }
        atoms
            .iter()
            .map(|i| Expr::atom(i, primitives))
            .reduce(Expr::or)
            .unwrap_or(Expr::False)
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(v) => Some(*v),
            Expr::True | Expr::False => None,
            Expr::Not(a) => a.max_var(),
            Expr::And(a, b) | Expr::Or(a, b) => a.max_var().max(b.max_var()),
        }
    }

    pub fn atom_set(&self, primitives: usize) -> AtomSet {
        let len = 1usize << primitives;
        match self {
            Expr::Var(v) => AtomSet::primitive(*v, primitives),
            Expr::True => AtomSet::full(len),
            Expr::False => AtomSet::empty(len),
            Expr::Not(a) => a.atom_set(primitives).complement(),
            Expr::And(a, b) => a.atom_set(primitives).intersection(&b.atom_set(primitives)),
            Expr::Or(a, b) => a.atom_set(primitives).union(&b.atom_set(primitives)),
        }
    }

    /// Truth value under the assignment encoded by the bits of `atom`.
    pub fn eval(&self, atom: usize) -> bool {
        match self {
            Expr::Var(v) => atom >> v & 1 == 1,
            Expr::True => true,
            Expr::False => false,
            Expr::Not(a) => !a.eval(atom),
            Expr::And(a, b) => a.eval(atom) && b.eval(atom),
            Expr::Or(a, b) => a.eval(atom) || b.eval(atom),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(..) => 1,
            Expr::And(..) => 2,
            Expr::Not(..) => 3,
            _ => 4,
        }
    }

    /// Writes the expression in rule-language syntax with minimal parentheses.
    pub fn write(&self, f: &mut fmt::Formatter<'_>, sig: &Signature) -> fmt::Result {
        match self {
            Expr::Var(v) => f.write_str(&sig.names()[*v]),
            Expr::True => f.write_str("true"),
            Expr::False => f.write_str("false"),
            Expr::Not(a) => {
                f.write_str("~")?;
                a.write_child(f, sig, 3)
            }
            Expr::And(a, b) => {
                a.write_child(f, sig, 2)?;
                f.write_str(" & ")?;
                b.write_child(f, sig, 3)
            }
            Expr::Or(a, b) => {
                a.write_child(f, sig, 1)?;
                f.write_str(" | ")?;
                b.write_child(f, sig, 2)
            }
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, sig: &Signature, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write(f, sig)?;
            f.write_str(")")
        } else {
            self.write(f, sig)
        }
    }

    /// Formats against `sig` as a `String`.
    pub fn render(&self, sig: &Signature) -> String {
        struct Show<'a>(&'a Expr, &'a Signature);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write(f, self.1)
            }
        }
        Show(self, sig).to_string()
    }
}
