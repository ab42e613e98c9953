//! Text formats for knowledge bases, queries and Z⁺ rule files.
//!
//! A knowledge-base file holds one rule per line, `<prop> => <prop> @ <k>`
//! with `k` a positive integer or `inf`. A Z⁺ file uses `<prop> -> <prop> @
//! <k>` with `k ≥ 0`; there the first `->` outside parentheses is the rule
//! arrow, so a material conditional inside a Z⁺ rule needs parentheses.
//! `#` starts a comment and blank lines are ignored. Unless a signature is
//! supplied, it consists of the identifiers of the file in order of first
//! appearance, or [`PLACEHOLDER_PRIMITIVE`] alone if there are none.

use std::sync::Arc;

use thiserror::Error;

use crate::engine::{EngineError, KnowledgeBase, Threshold, ThresholdedGeneralization};
use crate::logic::parser::{tokenize, Formula, ParseError, Parser, Position, Token, TokenKind};
use crate::logic::{LogicError, Proposition, Signature};
use crate::zplus::ZPlusRule;

/// Sole primitive of a file that mentions no identifiers. Signatures need
/// at least one primitive, and an unused one changes no verdict.
pub const PLACEHOLDER_PRIMITIVE: &str = "p";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Arrow {
    Rule,
    ZPlus,
}

struct RawRule {
    antecedent: Formula,
    consequent: Formula,
    /// Threshold for `=>` lines, strength for `->` lines (`None` is `inf`).
    level: Option<u32>,
}

impl RawRule {
    fn identifiers(&self, out: &mut Vec<String>) {
        self.antecedent.collect_identifiers(out);
        self.consequent.collect_identifiers(out);
    }
}

fn parse_line(tokens: &[Token], arrow: Arrow) -> Result<RawRule, ParseError> {
    let mut p = Parser::new(tokens);
    p.arrow_is_separator = arrow == Arrow::ZPlus;
    let antecedent = p.prop()?;
    match arrow {
        Arrow::Rule => p.expect(TokenKind::FatArrow, "`=>`")?,
        Arrow::ZPlus => p.expect(TokenKind::Implies, "`->`")?,
    };
    let consequent = p.prop()?;
    p.expect(TokenKind::At, "`@`")?;
    let token = p.peek().clone();
    let level = match (&token.kind, arrow) {
        (TokenKind::Number(n), _) => {
            let value = u32::try_from(*n).map_err(|_| ParseError::Invalid {
                pos: token.pos,
                message: format!("`{n}` is too large"),
            })?;
            if value == 0 && arrow == Arrow::Rule {
                return Err(ParseError::Invalid {
                    pos: token.pos,
                    message: "threshold must be a positive integer or `inf`, got 0".into(),
                });
            }
            Some(value)
        }
        (TokenKind::Ident(s), Arrow::Rule) if s == "inf" => None,
        (_, Arrow::Rule) => return Err(p.error("a threshold (positive integer or `inf`)")),
        (_, Arrow::ZPlus) => return Err(p.error("a strength (non-negative integer)")),
    };
    p.advance();
    p.expect_end()?;
    Ok(RawRule {
        antecedent,
        consequent,
        level,
    })
}

fn parse_lines(text: &str, arrow: Arrow) -> Result<Vec<RawRule>, ParseError> {
    let mut rules = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let tokens = tokenize(line, i + 1)?;
        if tokens.len() == 1 {
            continue;
        }
        rules.push(parse_line(&tokens, arrow)?);
    }
    Ok(rules)
}

fn single_formula(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text, 1)?;
    let mut p = Parser::new(&tokens);
    let f = p.prop()?;
    p.expect_end()?;
    Ok(f)
}

fn signature_of<'a>(
    rules: impl IntoIterator<Item = &'a RawRule>,
    extra: impl IntoIterator<Item = &'a Formula>,
) -> Result<Arc<Signature>, LogicError> {
    let mut names = Vec::new();
    for r in rules {
        r.identifiers(&mut names);
    }
    for f in extra {
        f.collect_identifiers(&mut names);
    }
    if names.is_empty() {
        names.push(PLACEHOLDER_PRIMITIVE.to_string());
    }
    Signature::new(names)
}

fn threshold_of(level: Option<u32>) -> Result<Threshold, EngineError> {
    match level {
        Some(k) => Threshold::finite(k),
        None => Ok(Threshold::INFINITE),
    }
}

fn build_kb(rules: &[RawRule], sig: &Arc<Signature>) -> Result<KnowledgeBase, FormatError> {
    let mut kb = KnowledgeBase::new(Arc::clone(sig));
    for r in rules {
        kb.push(ThresholdedGeneralization::new(
            r.antecedent.resolve(sig)?,
            r.consequent.resolve(sig)?,
            threshold_of(r.level)?,
        )?)?;
    }
    Ok(kb)
}

fn to_generalization(rule: RawRule, sig: &Arc<Signature>) -> Result<ThresholdedGeneralization, FormatError> {
    Ok(ThresholdedGeneralization::new(
        rule.antecedent.resolve(sig)?,
        rule.consequent.resolve(sig)?,
        threshold_of(rule.level)?,
    )?)
}

/// Reads a knowledge-base file.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, FormatError> {
    let rules = parse_lines(text, Arrow::Rule)?;
    let sig = signature_of(&rules, [])?;
    build_kb(&rules, &sig)
}

/// Reads a knowledge-base file over a given signature.
pub fn parse_kb_over(text: &str, signature: &Arc<Signature>) -> Result<KnowledgeBase, FormatError> {
    build_kb(&parse_lines(text, Arrow::Rule)?, signature)
}

/// Reads a knowledge-base file and a query `γ => ζ @ j`. Identifiers that
/// occur only in the query extend the signature.
pub fn parse_kb_with_query(
    text: &str,
    query: &str,
) -> Result<(KnowledgeBase, ThresholdedGeneralization), FormatError> {
    let rules = parse_lines(text, Arrow::Rule)?;
    let q = parse_line(&tokenize(query, 1)?, Arrow::Rule)?;
    let sig = signature_of(rules.iter().chain([&q]), [])?;
    let kb = build_kb(&rules, &sig)?;
    Ok((kb, to_generalization(q, &sig)?))
}

/// Reads a knowledge-base file and one proposition, extending the
/// signature with the proposition's identifiers.
pub fn parse_kb_with_proposition(text: &str, prop: &str) -> Result<(KnowledgeBase, Proposition), FormatError> {
    let rules = parse_lines(text, Arrow::Rule)?;
    let f = single_formula(prop)?;
    let sig = signature_of(&rules, [&f])?;
    let kb = build_kb(&rules, &sig)?;
    Ok((kb, f.resolve(&sig)?))
}

/// Parses a query `γ => ζ @ j` over `signature`.
pub fn parse_query(text: &str, signature: &Arc<Signature>) -> Result<ThresholdedGeneralization, FormatError> {
    to_generalization(parse_line(&tokenize(text, 1)?, Arrow::Rule)?, signature)
}

/// Reads a Z⁺ rule file, returning its signature and rules.
pub fn parse_zplus(text: &str) -> Result<(Arc<Signature>, Vec<ZPlusRule>), FormatError> {
    let raw = parse_lines(text, Arrow::ZPlus)?;
    let sig = signature_of(&raw, [])?;
    let rules = raw
        .into_iter()
        .map(|r| {
            Ok(ZPlusRule {
                antecedent: r.antecedent.resolve(&sig)?,
                consequent: r.consequent.resolve(&sig)?,
                strength: r.level.expect("Z+ lines always carry a strength"),
            })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    Ok((sig, rules))
}

/// Prints a knowledge base in the file format, one rule per line.
pub fn write_kb(kb: &KnowledgeBase) -> String {
    kb.rules().iter().map(|r| format!("{r}\n")).collect()
}

/// Prints Z⁺ rules in the file format. Sides never contain `->`, so no
/// extra parentheses are needed.
pub fn write_zplus(rules: &[ZPlusRule]) -> String {
    rules.iter().map(|r| format!("{r}\n")).collect()
}

/// Position of the error, when it has one.
pub fn error_position(e: &FormatError) -> Option<Position> {
    match e {
        FormatError::Parse(p) | FormatError::Logic(LogicError::Parse(p)) => Some(p.position()),
        FormatError::Engine(EngineError::Logic(LogicError::Parse(p))) => Some(p.position()),
        _ => None,
    }
}
