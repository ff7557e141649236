//! Type expressions, including uniqueness attributes.
//!
//! An atom may carry an attribute prefix: `*t` unique, `.t` attribute
//! polymorphic, `u:t` a named attribute variable. Type application is
//! juxtaposition with parenthesized arguments, `Tree (Tree a)`.

use super::{Cursor, ParseError};
use crate::ast::{ArrayFlavor, Attr, AttrType, Shape};
use crate::token::{Sym, TokenKind};

/// Full type: an application chain, optionally an `->` function type.
pub(crate) fn parse_type_full(c: &mut Cursor) -> Result<AttrType, ParseError> {
    let lhs = parse_btype(c)?;
    if c.eat_sym(Sym::Arrow) {
        let rhs = parse_type_full(c)?;
        let span = lhs.span.merge(rhs.span);
        return Ok(AttrType::plain(
            Shape::Fun(Box::new(lhs), Box::new(rhs)),
            span,
        ));
    }
    Ok(lhs)
}

/// An attributed application: `attr? head atoms*`.
fn parse_btype(c: &mut Cursor) -> Result<AttrType, ParseError> {
    if c.at_sym(Sym::ForallDot) {
        return parse_forall(c);
    }
    let start = c.here();
    let attr = parse_attr(c);
    let head = parse_type_core(c)?;

    let mut args = Vec::new();
    while starts_type_atom(c) {
        args.push(parse_type_atom(c)?);
    }

    let mut ty = if args.is_empty() {
        head
    } else {
        let span = head.span.merge(args.last().unwrap().span);
        match head.shape {
            Shape::Con(name, existing) if existing.is_empty() => {
                AttrType::new(head.attr, Shape::Con(name, args), span)
            }
            // Application of a type variable, `m a`; represented as an
            // application head like any constructor.
            Shape::Var(name) => AttrType::new(head.attr, Shape::Con(name, args), span),
            _ => {
                return Err(ParseError::Syntax {
                    message: "type application head must be a constructor or variable".into(),
                    span: head.span,
                })
            }
        }
    };

    if let Some(attr) = attr {
        ty.attr = attr;
        ty.span = start.merge(ty.span);
    }
    Ok(ty)
}

/// One atomic type with optional attribute prefix; no application.
pub(crate) fn parse_type_atom(c: &mut Cursor) -> Result<AttrType, ParseError> {
    let start = c.here();
    let attr = parse_attr(c);
    let mut ty = parse_type_core(c)?;
    if let Some(attr) = attr {
        ty.attr = attr;
        ty.span = start.merge(ty.span);
    }
    Ok(ty)
}

/// `A.a b: t` scoping over the rest of the type.
fn parse_forall(c: &mut Cursor) -> Result<AttrType, ParseError> {
    let start = c.expect_sym(Sym::ForallDot)?;
    let mut vars = Vec::new();
    while c.at_kind(TokenKind::Ident) {
        vars.push(c.bump().text);
    }
    if vars.is_empty() {
        return Err(c.err("expected type variables after `A.`"));
    }
    c.expect_sym(Sym::Colon)?;
    let body = parse_type_full(c)?;
    let span = start.merge(body.span);
    Ok(AttrType::plain(
        Shape::Forall {
            vars,
            body: Box::new(body),
        },
        span,
    ))
}

fn parse_attr(c: &mut Cursor) -> Option<Attr> {
    if c.eat_sym(Sym::Star) {
        return Some(Attr::Unique);
    }
    if c.at_sym(Sym::Dot) && c.next_adjacent() {
        c.bump();
        return Some(Attr::Anonymous);
    }
    // `u:t`: variable attribute, written without spaces.
    if c.at_kind(TokenKind::Ident)
        && c.next_adjacent()
        && matches!(c.nth(1).map(|t| t.kind), Some(TokenKind::Sym(Sym::Colon)))
    {
        let name = c.bump().text;
        c.bump();
        return Some(Attr::Var(name));
    }
    None
}

fn parse_type_core(c: &mut Cursor) -> Result<AttrType, ParseError> {
    match c.peek().map(|t| t.kind) {
        Some(TokenKind::Ident) => {
            let t = c.bump();
            Ok(AttrType::plain(Shape::Var(t.text), t.span))
        }
        Some(TokenKind::CtorIdent) => {
            let t = c.bump();
            if let Some(inner) = t.text.strip_prefix('?') {
                // `?Int` lexes as a single constructor token.
                let elem = AttrType::plain(Shape::Con(inner.to_string(), Vec::new()), t.span);
                Ok(AttrType::plain(Shape::Optional(Box::new(elem)), t.span))
            } else {
                Ok(AttrType::plain(Shape::Con(t.text, Vec::new()), t.span))
            }
        }
        Some(TokenKind::Sym(Sym::Question)) => {
            let start = c.bump().span;
            let inner = parse_type_atom(c)?;
            let span = start.merge(inner.span);
            Ok(AttrType::plain(Shape::Optional(Box::new(inner)), span))
        }
        Some(TokenKind::Sym(Sym::ForallDot)) => parse_forall(c),
        Some(TokenKind::Sym(Sym::LParen)) => {
            let start = c.bump().span;
            let first = parse_type_full(c)?;
            if c.at_sym(Sym::Comma) {
                let mut elems = vec![first];
                while c.eat_sym(Sym::Comma) {
                    elems.push(parse_type_full(c)?);
                }
                let end = c.expect_sym(Sym::RParen)?;
                return Ok(AttrType::plain(Shape::Tuple(elems), start.merge(end)));
            }
            c.expect_sym(Sym::RParen)?;
            Ok(first)
        }
        Some(TokenKind::Sym(Sym::LBracket)) => {
            let start = c.bump().span;
            let elem = parse_type_full(c)?;
            let end = c.expect_sym(Sym::RBracket)?;
            Ok(AttrType::plain(
                Shape::List(Box::new(elem)),
                start.merge(end),
            ))
        }
        Some(TokenKind::Sym(Sym::LBrace)) => {
            let start = c.bump().span;
            let flavor = if c.eat_sym(Sym::Hash) {
                ArrayFlavor::Unboxed
            } else if c.eat_sym(Sym::Bang) {
                ArrayFlavor::Strict
            } else {
                ArrayFlavor::Lazy
            };
            let elem = parse_type_full(c)?;
            let end = c.expect_sym(Sym::RBrace)?;
            Ok(AttrType::plain(
                Shape::Array {
                    flavor,
                    elem: Box::new(elem),
                },
                start.merge(end),
            ))
        }
        _ => Err(c.err(format!("expected a type, found {}", c.describe()))),
    }
}

/// Whether the current token can begin a type atom.
pub(crate) fn starts_type_atom(c: &Cursor) -> bool {
    match c.peek().map(|t| t.kind) {
        Some(TokenKind::Ident) | Some(TokenKind::CtorIdent) => true,
        Some(TokenKind::Sym(Sym::Question))
        | Some(TokenKind::Sym(Sym::LParen))
        | Some(TokenKind::Sym(Sym::LBracket))
        | Some(TokenKind::Sym(Sym::LBrace))
        | Some(TokenKind::Sym(Sym::Star)) => true,
        Some(TokenKind::Sym(Sym::Dot)) => c.next_adjacent(),
        _ => false,
    }
}
