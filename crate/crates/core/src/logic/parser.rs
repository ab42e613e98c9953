//! Lexer and recursive-descent parser for the rule language.
//!
//! ```text
//! prop  := iff
//! iff   := imp ("<->" imp)*
//! imp   := disj ("->" imp)?
//! disj  := conj ("|" conj)*
//! conj  := unary ("&" unary)*
//! unary := "~" unary | "(" prop ")" | ident | "true" | "false"
//! ```
//!
//! `t` and `f` are accepted as spellings of `true` and `false`. `#` starts a
//! comment that runs to the end of the line.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{Expr, Proposition, Signature};

/// 1-based line and column of a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{pos}: expected {expected}, found {found}")]
    Syntax {
        pos: Position,
        expected: String,
        found: String,
    },
    #[error("{pos}: unexpected character `{ch}`")]
    UnexpectedChar { pos: Position, ch: char },
    #[error("{pos}: unknown identifier `{name}`")]
    UnknownIdentifier { pos: Position, name: String },
    #[error("{pos}: {message}")]
    Invalid { pos: Position, message: String },
}

impl ParseError {
    pub fn position(&self) -> Position {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnexpectedChar { pos, .. }
            | ParseError::UnknownIdentifier { pos, .. }
            | ParseError::Invalid { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Ident(String),
    Number(u64),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    FatArrow,
    At,
    LParen,
    RParen,
    End,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Number(n) => write!(f, "number `{n}`"),
            TokenKind::True => f.write_str("`true`"),
            TokenKind::False => f.write_str("`false`"),
            TokenKind::Not => f.write_str("`~`"),
            TokenKind::And => f.write_str("`&`"),
            TokenKind::Or => f.write_str("`|`"),
            TokenKind::Implies => f.write_str("`->`"),
            TokenKind::Iff => f.write_str("`<->`"),
            TokenKind::FatArrow => f.write_str("`=>`"),
            TokenKind::At => f.write_str("`@`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::End => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub pos: Position,
}

/// Splits `text` into tokens; line numbers start at `first_line`.
pub(crate) fn tokenize(text: &str, first_line: usize) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut line = first_line;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Position { line, column: col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            let kind = match word.as_str() {
                "true" | "t" => TokenKind::True,
                "false" | "f" => TokenKind::False,
                _ => TokenKind::Ident(word),
            };
            tokens.push(Token { kind, pos });
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    digits.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            let n = digits.parse().map_err(|_| ParseError::Invalid {
                pos,
                message: format!("number `{digits}` is too large"),
            })?;
            tokens.push(Token {
                kind: TokenKind::Number(n),
                pos,
            });
            continue;
        }
        chars.next();
        col += 1;
        let kind = match c {
            '~' => TokenKind::Not,
            '&' => TokenKind::And,
            '|' => TokenKind::Or,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '@' => TokenKind::At,
            '-' if chars.peek() == Some(&'>') => {
                chars.next();
                col += 1;
                TokenKind::Implies
            }
            '=' if chars.peek() == Some(&'>') => {
                chars.next();
                col += 1;
                TokenKind::FatArrow
            }
            '<' if chars.peek() == Some(&'-') => {
                chars.next();
                col += 1;
                if chars.peek() != Some(&'>') {
                    return Err(ParseError::UnexpectedChar { pos, ch: '<' });
                }
                chars.next();
                col += 1;
                TokenKind::Iff
            }
            other => return Err(ParseError::UnexpectedChar { pos, ch: other }),
        };
        tokens.push(Token { kind, pos });
    }
    tokens.push(Token {
        kind: TokenKind::End,
        pos: Position { line, column: col },
    });
    Ok(tokens)
}

/// Parsed expression that still refers to primitives by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Formula {
    Ident(String, Position),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Identifiers in order of first appearance.
    pub fn collect_identifiers(&self, out: &mut Vec<String>) {
        match self {
            Formula::Ident(name, _) => {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
            Formula::True | Formula::False => {}
            Formula::Not(a) => a.collect_identifiers(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_identifiers(out);
                b.collect_identifiers(out);
            }
        }
    }

    fn to_expr(&self, sig: &Signature) -> Result<Expr, ParseError> {
        Ok(match self {
            Formula::Ident(name, pos) => match sig.index_of(name) {
                Some(i) => Expr::Var(i),
                None => {
                    return Err(ParseError::UnknownIdentifier {
                        pos: *pos,
                        name: name.clone(),
                    })
                }
            },
            Formula::True => Expr::True,
            Formula::False => Expr::False,
            Formula::Not(a) => Expr::not(a.to_expr(sig)?),
            Formula::And(a, b) => Expr::and(a.to_expr(sig)?, b.to_expr(sig)?),
            Formula::Or(a, b) => Expr::or(a.to_expr(sig)?, b.to_expr(sig)?),
        })
    }

    pub fn resolve(&self, sig: &Arc<Signature>) -> Result<Proposition, ParseError> {
        let expr = self.to_expr(sig)?;
        Ok(Proposition::from_expr(expr, sig).expect("indices come from the signature"))
    }

    fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
}

pub(crate) struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    paren_depth: usize,
    /// When set, a `->` outside parentheses ends the proposition instead of
    /// being read as a material conditional.
    pub arrow_is_separator: bool,
}

impl<'a> Parser<'a> {
    pub fn new(tokens: &'a [Token]) -> Self {
        Parser {
            tokens,
            pos: 0,
            paren_depth: 0,
            arrow_is_separator: false,
        }
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    pub fn advance(&mut self) -> &Token {
        let t = &self.tokens[self.pos.min(self.tokens.len() - 1)];
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError::Syntax {
            pos: t.pos,
            expected: expected.to_string(),
            found: t.kind.to_string(),
        }
    }

    pub fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<Position, ParseError> {
        if self.peek().kind == kind {
            Ok(self.advance().pos)
        } else {
            Err(self.error(expected))
        }
    }

    pub fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.peek().kind == TokenKind::End {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    pub fn prop(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while self.peek().kind == TokenKind::Iff {
            self.advance();
            let rhs = self.implication()?;
            // p <-> q  ==  (~p | q) & (~q | p)
            lhs = Formula::and(
                Formula::or(Formula::not(lhs.clone()), rhs.clone()),
                Formula::or(Formula::not(rhs), lhs),
            );
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        let stop = self.arrow_is_separator && self.paren_depth == 0;
        if self.peek().kind == TokenKind::Implies && !stop {
            self.advance();
            let rhs = self.implication()?;
            return Ok(Formula::or(Formula::not(lhs), rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek().kind == TokenKind::Or {
            self.advance();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek().kind == TokenKind::And {
            self.advance();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let token = self.peek().clone();
        match token.kind {
            TokenKind::Not => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            TokenKind::LParen => {
                self.advance();
                self.paren_depth += 1;
                let inner = self.prop()?;
                self.paren_depth -= 1;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            TokenKind::True => {
                self.advance();
                Ok(Formula::True)
            }
            TokenKind::False => {
                self.advance();
                Ok(Formula::False)
            }
            TokenKind::Ident(name) if name != "inf" => {
                self.advance();
                Ok(Formula::Ident(name, token.pos))
            }
            _ => Err(self.error("a proposition")),
        }
    }
}

/// Parses a complete proposition from `text`.
pub(crate) fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text, 1)?;
    let mut parser = Parser::new(&tokens);
    let f = parser.prop()?;
    parser.expect_end()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(names: &[&str]) -> Arc<Signature> {
        Signature::new(names.iter().copied()).unwrap()
    }

    fn parse(text: &str, names: &[&str]) -> Result<Proposition, ParseError> {
        parse_formula(text)?.resolve(&sig(names))
    }

    #[test]
    fn precedence_not_and_or() {
        let s = sig(&["a", "b", "c"]);
        let p = parse_formula("~a & b | c").unwrap().resolve(&s).unwrap();
        let q = parse_formula("((~a) & b) | c").unwrap().resolve(&s).unwrap();
        assert_eq!(p, q);
        let r = parse_formula("~(a & b) | c").unwrap().resolve(&s).unwrap();
        assert_ne!(p, r);
    }

    #[test]
    fn sugar_desugars_to_base_connectives() {
        let names = ["p", "q"];
        assert_eq!(
            parse("p -> q", &names).unwrap(),
            parse("~p | q", &names).unwrap()
        );
        assert_eq!(
            parse("p <-> q", &names).unwrap(),
            parse("(p & q) | (~p & ~q)", &names).unwrap()
        );
        // Implication is right-associative and binds looser than `|`.
        assert_eq!(
            parse("p -> q -> p", &names).unwrap(),
            parse("true", &names).unwrap()
        );
        assert_eq!(
            parse("p | q -> q", &names).unwrap(),
            parse("~(p | q) | q", &names).unwrap()
        );
    }

    #[test]
    fn constant_aliases_and_comments() {
        let names = ["a"];
        assert_eq!(parse("t", &names).unwrap(), parse("true", &names).unwrap());
        assert_eq!(
            parse("f # nothing\n", &names).unwrap(),
            parse("false", &names).unwrap()
        );
    }

    #[test]
    fn syntax_errors_carry_position_and_expectation() {
        let err = parse_formula("a & ").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                pos: Position { line: 1, column: 5 },
                expected: "a proposition".into(),
                found: "end of input".into(),
            }
        );
        let err = parse_formula("(a | b").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { ref expected, .. } if expected == "`)`"));
        let err = parse_formula("a b").unwrap_err();
        assert_eq!(err.position(), Position { line: 1, column: 3 });
        let err = parse_formula("a $ b").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnexpectedChar {
                pos: Position { line: 1, column: 3 },
                ch: '$'
            }
        );
        assert!(parse_formula("a <- b").is_err());
    }

    #[test]
    fn unknown_identifier_is_named() {
        let err = parse("a & zz", &["a"]).unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownIdentifier {
                pos: Position { line: 1, column: 5 },
                name: "zz".into()
            }
        );
    }

    #[test]
    fn arrow_separator_mode_stops_at_top_level_only() {
        let tokens = tokenize("(a -> b) -> c", 1).unwrap();
        let mut p = Parser::new(&tokens);
        p.arrow_is_separator = true;
        let lhs = p.prop().unwrap();
        assert_eq!(p.peek().kind, TokenKind::Implies);
        let mut ids = Vec::new();
        lhs.collect_identifiers(&mut ids);
        assert_eq!(ids, vec!["a", "b"]);
    }
}
