//! Patterns.
//!
//! Function parameters are pattern atoms, so a constructor application
//! there needs parentheses: `f (Just x) = ...`. Case alternatives and other
//! full-pattern positions allow the bare application `Just x`.

use super::types::parse_type_full;
use super::{Cursor, ParseError};
use crate::ast::{FieldPattern, Lit, Pattern, PatternKind};
use crate::token::{Sym, TokenKind};

/// Full pattern: constructor applications and as-patterns allowed.
pub(crate) fn parse_pattern_full(c: &mut Cursor) -> Result<Pattern, ParseError> {
    if c.at_kind(TokenKind::CtorIdent) {
        let t = c.bump();
        let mut args = Vec::new();
        let mut span = t.span;
        while starts_pattern_atom(c) {
            let p = parse_pattern_atom(c)?;
            span = span.merge(p.span);
            args.push(p);
        }
        return Ok(Pattern::new(PatternKind::Ctor(t.text, args), span));
    }
    if c.at_kind(TokenKind::Ident)
        && matches!(c.nth(1).map(|t| t.kind), Some(TokenKind::Sym(Sym::EqColon)))
        && c.peek().map_or(false, |t| t.text != "_")
    {
        let name = c.bump();
        c.bump();
        let inner = parse_pattern_full(c)?;
        let span = name.span.merge(inner.span);
        return Ok(Pattern::new(
            PatternKind::As(name.text, Box::new(inner)),
            span,
        ));
    }
    parse_pattern_atom(c)
}

/// Atomic pattern: no bare constructor arguments.
pub(crate) fn parse_pattern_atom(c: &mut Cursor) -> Result<Pattern, ParseError> {
    match c.peek().map(|t| t.kind) {
        Some(TokenKind::Ident) => {
            if matches!(c.nth(1).map(|t| t.kind), Some(TokenKind::Sym(Sym::EqColon)))
                && c.peek().map_or(false, |t| t.text != "_")
            {
                let name = c.bump();
                c.bump();
                let inner = parse_pattern_atom(c)?;
                let span = name.span.merge(inner.span);
                return Ok(Pattern::new(
                    PatternKind::As(name.text, Box::new(inner)),
                    span,
                ));
            }
            let t = c.bump();
            if t.text == "_" {
                Ok(Pattern::new(PatternKind::Wild, t.span))
            } else {
                Ok(Pattern::new(PatternKind::Var(t.text), t.span))
            }
        }
        Some(TokenKind::CtorIdent) => {
            let t = c.bump();
            Ok(Pattern::new(PatternKind::Ctor(t.text, Vec::new()), t.span))
        }
        Some(TokenKind::IntLit) => {
            let t = c.bump();
            let n = parse_int(&t.text, c)?;
            Ok(Pattern::new(PatternKind::Lit(Lit::Int(n)), t.span))
        }
        Some(TokenKind::RealLit) => {
            let t = c.bump();
            Ok(Pattern::new(PatternKind::Lit(Lit::Real(t.text)), t.span))
        }
        Some(TokenKind::CharLit) => {
            let t = c.bump();
            let inner = t.text[1..t.text.len() - 1].to_string();
            Ok(Pattern::new(PatternKind::Lit(Lit::Char(inner)), t.span))
        }
        Some(TokenKind::CharListLit) => {
            let t = c.bump();
            let inner = t.text[2..t.text.len() - 2].to_string();
            Ok(Pattern::new(PatternKind::Lit(Lit::CharList(inner)), t.span))
        }
        Some(TokenKind::StringLit) => {
            let t = c.bump();
            let inner = t.text[1..t.text.len() - 1].to_string();
            Ok(Pattern::new(PatternKind::Lit(Lit::Str(inner)), t.span))
        }
        Some(TokenKind::Sym(Sym::Minus)) => {
            let start = c.bump().span;
            match c.peek().map(|t| t.kind) {
                Some(TokenKind::IntLit) => {
                    let t = c.bump();
                    let n = parse_int(&t.text, c)?;
                    Ok(Pattern::new(
                        PatternKind::Lit(Lit::Int(-n)),
                        start.merge(t.span),
                    ))
                }
                Some(TokenKind::RealLit) => {
                    let t = c.bump();
                    Ok(Pattern::new(
                        PatternKind::Lit(Lit::Real(format!("-{}", t.text))),
                        start.merge(t.span),
                    ))
                }
                _ => Err(c.err("expected a numeric literal after `-` in a pattern")),
            }
        }
        Some(TokenKind::Sym(Sym::LParen)) => {
            let start = c.bump().span;
            let first = parse_pattern_full(c)?;
            if c.eat_sym(Sym::DColon) {
                let ty = parse_type_full(c)?;
                let end = c.expect_sym(Sym::RParen)?;
                return Ok(Pattern::new(
                    PatternKind::Dynamic {
                        pat: Box::new(first),
                        ty,
                    },
                    start.merge(end),
                ));
            }
            if c.at_sym(Sym::Comma) {
                let mut elems = vec![first];
                while c.eat_sym(Sym::Comma) {
                    elems.push(parse_pattern_full(c)?);
                }
                let end = c.expect_sym(Sym::RParen)?;
                return Ok(Pattern::new(PatternKind::Tuple(elems), start.merge(end)));
            }
            c.expect_sym(Sym::RParen)?;
            Ok(first)
        }
        Some(TokenKind::Sym(Sym::LBracket)) => parse_list_pattern(c),
        Some(TokenKind::Sym(Sym::LBrace)) => parse_record_pattern(c),
        _ => Err(c.err(format!("expected a pattern, found {}", c.describe()))),
    }
}

fn parse_int(text: &str, c: &Cursor) -> Result<i64, ParseError> {
    text.parse()
        .map_err(|_| c.err(format!("integer literal `{text}` out of range")))
}

fn parse_list_pattern(c: &mut Cursor) -> Result<Pattern, ParseError> {
    let start = c.expect_sym(Sym::LBracket)?;
    if c.at_sym(Sym::RBracket) {
        let end = c.bump().span;
        return Ok(Pattern::new(
            PatternKind::List {
                elems: Vec::new(),
                tail: None,
            },
            start.merge(end),
        ));
    }
    let mut elems = vec![parse_pattern_full(c)?];
    while c.eat_sym(Sym::Comma) {
        elems.push(parse_pattern_full(c)?);
    }
    let tail = if c.eat_sym(Sym::Colon) {
        Some(Box::new(parse_pattern_full(c)?))
    } else {
        None
    };
    let end = c.expect_sym(Sym::RBracket)?;
    Ok(Pattern::new(
        PatternKind::List { elems, tail },
        start.merge(end),
    ))
}

fn parse_record_pattern(c: &mut Cursor) -> Result<Pattern, ParseError> {
    let start = c.expect_sym(Sym::LBrace)?;
    let ctor = if c.at_kind(TokenKind::CtorIdent)
        && matches!(c.nth(1).map(|t| t.kind), Some(TokenKind::Sym(Sym::Pipe)))
    {
        let t = c.bump();
        c.bump();
        Some(t.text)
    } else {
        None
    };
    let mut fields = Vec::new();
    loop {
        let (field, fspan) = c.expect_ident()?;
        let pat = if c.eat_sym(Sym::Eq) {
            Some(parse_pattern_full(c)?)
        } else {
            None
        };
        let span = pat.as_ref().map_or(fspan, |p| fspan.merge(p.span));
        fields.push(FieldPattern { field, pat, span });
        if !c.eat_sym(Sym::Comma) {
            break;
        }
    }
    let end = c.expect_sym(Sym::RBrace)?;
    Ok(Pattern::new(
        PatternKind::Record { ctor, fields },
        start.merge(end),
    ))
}

/// Whether the current token can begin a pattern atom.
pub(crate) fn starts_pattern_atom(c: &Cursor) -> bool {
    match c.peek().map(|t| t.kind) {
        Some(TokenKind::Ident)
        | Some(TokenKind::CtorIdent)
        | Some(TokenKind::IntLit)
        | Some(TokenKind::RealLit)
        | Some(TokenKind::CharLit)
        | Some(TokenKind::CharListLit)
        | Some(TokenKind::StringLit) => true,
        Some(TokenKind::Sym(Sym::LParen))
        | Some(TokenKind::Sym(Sym::LBracket))
        | Some(TokenKind::Sym(Sym::LBrace)) => true,
        Some(TokenKind::Sym(Sym::Minus)) => matches!(
            c.nth(1).map(|t| t.kind),
            Some(TokenKind::IntLit) | Some(TokenKind::RealLit)
        ),
        _ => false,
    }
}
