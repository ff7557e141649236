//! Expression grammar.
//!
//! Operators parse by precedence climbing against the fixity table; the
//! brace forms (records, arrays, comprehensions, updates) are separated by
//! bounded lookahead before committing to a shape.

use super::patterns::{parse_pattern_atom, parse_pattern_full, starts_pattern_atom};
use super::types::parse_type_full;
use super::{operator_in_parens, parse_clause_body, parse_local_defs_until_close};
use super::{BodyIntro, Cursor, ParseError};
use crate::ast::*;
use crate::token::{Kw, Sym, TokenKind};

pub(crate) fn parse_expr_inner(c: &mut Cursor) -> Result<Expr, ParseError> {
    let e = parse_binop(c, 0)?;
    // `e =: p` tests the expression against a pattern; `e :: t` annotates.
    // Both sit below every operator.
    if c.at_sym(Sym::EqColon) {
        c.bump();
        let pat = parse_pattern_full(c)?;
        let span = e.span.merge(pat.span);
        return Ok(Expr::new(
            ExprKind::AsPredicate {
                scrutinee: Box::new(e),
                pat,
            },
            span,
        ));
    }
    if c.at_sym(Sym::DColon) {
        c.bump();
        let ty = parse_type_full(c)?;
        let span = e.span.merge(ty.span);
        return Ok(Expr::new(
            ExprKind::Annot {
                expr: Box::new(e),
                ty,
            },
            span,
        ));
    }
    Ok(e)
}

/// Binary operator tokens that can appear infix.
const OPERATORS: &[Sym] = &[
    Sym::PipePipe,
    Sym::AmpAmp,
    Sym::EqEq,
    Sym::Ne,
    Sym::Lt,
    Sym::Le,
    Sym::Gt,
    Sym::Ge,
    Sym::PlusPlus,
    Sym::PlusPlusPlus,
    Sym::Plus,
    Sym::Minus,
    Sym::Star,
    Sym::Slash,
    Sym::Caret,
];

fn peek_operator(c: &Cursor) -> Option<(Name, Fixity)> {
    match c.peek().map(|t| t.kind) {
        Some(TokenKind::Sym(s)) if OPERATORS.contains(&s) => {
            let name = s.as_str().to_string();
            let fixity = c.fixities.get(&name);
            Some((name, fixity))
        }
        Some(TokenKind::OpIdent) => {
            let name = c.peek().unwrap().text.clone();
            let fixity = c.fixities.get(&name);
            Some((name, fixity))
        }
        // Alphabetic operators like `mod` and `o` are infix only when a
        // fixity declaration (or builtin) says so.
        Some(TokenKind::Ident) => {
            let name = c.peek().unwrap().text.clone();
            let fixity = c.fixities.lookup(&name)?;
            Some((name, fixity))
        }
        _ => None,
    }
}

fn parse_binop(c: &mut Cursor, min_prec: u8) -> Result<Expr, ParseError> {
    let mut lhs = parse_unary(c)?;
    while let Some((op, fixity)) = peek_operator(c) {
        if fixity.prec < min_prec {
            break;
        }
        c.bump();
        let next_min = match fixity.assoc {
            Assoc::Right => fixity.prec,
            Assoc::Left | Assoc::None => fixity.prec + 1,
        };
        let rhs = parse_binop(c, next_min)?;
        if fixity.assoc == Assoc::None {
            if let Some((next, f2)) = peek_operator(c) {
                if f2.prec == fixity.prec {
                    return Err(c.err(format!(
                        "`{op}` is non-associative and cannot be chained with `{next}`"
                    )));
                }
            }
        }
        let span = lhs.span.merge(rhs.span);
        lhs = Expr::new(
            ExprKind::BinOp {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            },
            span,
        );
    }
    Ok(lhs)
}

fn parse_unary(c: &mut Cursor) -> Result<Expr, ParseError> {
    if c.at_sym(Sym::Minus) {
        let start = c.bump().span;
        // Negation binds like the subtraction it shares a symbol with:
        // `-x * y` negates the product, `-x + y` negates only `x`.
        let operand = parse_binop(c, 7)?;
        let span = start.merge(operand.span);
        return Ok(Expr::new(ExprKind::Neg(Box::new(operand)), span));
    }
    parse_app(c)
}

fn parse_app(c: &mut Cursor) -> Result<Expr, ParseError> {
    match c.peek().map(|t| t.kind) {
        Some(TokenKind::Keyword(Kw::If)) => {
            let start = c.bump().span;
            // `if` is an ordinary three-argument function in Clean; the
            // first three arguments form the conditional.
            let cond = parse_atom_postfix(c)?;
            let then_branch = parse_atom_postfix(c)?;
            let else_branch = parse_atom_postfix(c)?;
            let span = start.merge(else_branch.span);
            let mut e = Expr::new(
                ExprKind::If {
                    cond: Box::new(cond),
                    then_branch: Box::new(then_branch),
                    else_branch: Box::new(else_branch),
                },
                span,
            );
            let mut extra = Vec::new();
            while starts_expr_atom(c) {
                extra.push(parse_atom_postfix(c)?);
            }
            if !extra.is_empty() {
                let span = e.span.merge(extra.last().unwrap().span);
                e = Expr::new(ExprKind::App(Box::new(e), extra), span);
            }
            Ok(e)
        }
        Some(TokenKind::Keyword(Kw::Case)) => parse_case(c),
        Some(TokenKind::Keyword(Kw::Let)) => parse_let(c),
        Some(TokenKind::Keyword(Kw::Dynamic)) => {
            let start = c.bump().span;
            let inner = parse_app(c)?;
            let ty = if c.eat_sym(Sym::DColon) {
                Some(parse_type_full(c)?)
            } else {
                None
            };
            let end = ty.as_ref().map_or(inner.span, |t| t.span);
            Ok(Expr::new(
                ExprKind::Dynamic {
                    expr: Box::new(inner),
                    ty,
                },
                start.merge(end),
            ))
        }
        Some(TokenKind::Sym(Sym::Backslash)) => parse_lambda(c),
        _ => {
            let head = parse_atom_postfix(c)?;
            let mut args = Vec::new();
            while starts_expr_atom(c) {
                args.push(parse_atom_postfix(c)?);
            }
            if args.is_empty() {
                Ok(head)
            } else {
                let span = head.span.merge(args.last().unwrap().span);
                Ok(Expr::new(ExprKind::App(Box::new(head), args), span))
            }
        }
    }
}

fn parse_lambda(c: &mut Cursor) -> Result<Expr, ParseError> {
    let start = c.expect_sym(Sym::Backslash)?;
    let mut params = Vec::new();
    while starts_pattern_atom(c) {
        params.push(parse_pattern_atom(c)?);
    }
    if params.is_empty() {
        return Err(c.err("expected lambda parameters after `\\`"));
    }
    // The body marker is `->`, `.` or `=`; all mean the same thing.
    if !c.eat_sym(Sym::Arrow) && !c.eat_sym(Sym::Dot) && !c.eat_sym(Sym::Eq) {
        return Err(c.err(format!(
            "expected `->`, `.` or `=` after lambda parameters, found {}",
            c.describe()
        )));
    }
    let body = parse_expr_inner(c)?;
    let span = start.merge(body.span);
    Ok(Expr::new(
        ExprKind::Lambda {
            params,
            body: Box::new(body),
        },
        span,
    ))
}

fn parse_case(c: &mut Cursor) -> Result<Expr, ParseError> {
    let start = c.expect_kw(Kw::Case)?;
    let scrutinee = parse_expr_inner(c)?;
    c.expect_kw(Kw::Of)?;
    c.expect_kind(TokenKind::LayoutOpen)?;
    let mut alts = Vec::new();
    loop {
        if c.eat_kind(TokenKind::LayoutClose) {
            break;
        }
        if c.at_end() {
            return Err(c.err("unexpected end of input in case alternatives"));
        }
        let pat = parse_pattern_full(c)?;
        let body = parse_clause_body(c, BodyIntro::CaseAlt)?;
        let span = pat.span;
        alts.push(CaseAlt { pat, body, span });
        if !c.eat_kind(TokenKind::LayoutSep) && !c.eat_sym(Sym::Semi) {
            c.expect_kind(TokenKind::LayoutClose)?;
            break;
        }
    }
    if alts.is_empty() {
        return Err(c.err("case expression needs at least one alternative"));
    }
    let end = alts.last().unwrap().span;
    Ok(Expr::new(
        ExprKind::Case {
            scrutinee: Box::new(scrutinee),
            alts,
        },
        start.merge(end),
    ))
}

fn parse_let(c: &mut Cursor) -> Result<Expr, ParseError> {
    let start = c.expect_kw(Kw::Let)?;
    c.expect_kind(TokenKind::LayoutOpen)?;
    let defs = parse_local_defs_until_close(c)?;
    c.expect_kw(Kw::In)?;
    let body = parse_expr_inner(c)?;
    let span = start.merge(body.span);
    Ok(Expr::new(
        ExprKind::Let {
            defs,
            body: Box::new(body),
        },
        span,
    ))
}

/// An atom followed by postfix selections: `r.f`, `a.[i]`, and the
/// unique-source forms `r!f`, `a![i]`, chained. Selection binds only when
/// the marker abuts the expression, so `a ! b` is not a selection.
fn parse_atom_postfix(c: &mut Cursor) -> Result<Expr, ParseError> {
    let mut e = parse_atom(c)?;
    loop {
        let unique = if c.at_sym(Sym::Dot) && c.adjacent() {
            false
        } else if c.at_sym(Sym::Bang) && c.adjacent() {
            true
        } else {
            break;
        };
        c.bump();
        if c.eat_sym(Sym::LBracket) {
            let index = parse_expr_inner(c)?;
            let end = c.expect_sym(Sym::RBracket)?;
            let span = e.span.merge(end);
            e = Expr::new(
                ExprKind::ArraySelect {
                    arr: Box::new(e),
                    index: Box::new(index),
                    unique,
                },
                span,
            );
        } else {
            let t = c.expect_kind(TokenKind::Ident)?;
            let span = e.span.merge(t.span);
            e = Expr::new(
                ExprKind::FieldSelect {
                    base: Box::new(e),
                    field: t.text,
                    unique,
                },
                span,
            );
        }
    }
    Ok(e)
}

fn parse_atom(c: &mut Cursor) -> Result<Expr, ParseError> {
    match c.peek().map(|t| t.kind) {
        Some(TokenKind::Ident) => {
            let t = c.bump();
            Ok(Expr::new(ExprKind::Var(t.text), t.span))
        }
        Some(TokenKind::CtorIdent) => {
            let t = c.bump();
            Ok(Expr::new(ExprKind::Ctor(t.text), t.span))
        }
        Some(TokenKind::IntLit) => {
            let t = c.bump();
            let n: i64 = t
                .text
                .parse()
                .map_err(|_| c.err(format!("integer literal `{}` out of range", t.text)))?;
            Ok(Expr::new(ExprKind::Lit(Lit::Int(n)), t.span))
        }
        Some(TokenKind::RealLit) => {
            let t = c.bump();
            Ok(Expr::new(ExprKind::Lit(Lit::Real(t.text)), t.span))
        }
        Some(TokenKind::CharLit) => {
            let t = c.bump();
            let inner = t.text[1..t.text.len() - 1].to_string();
            Ok(Expr::new(ExprKind::Lit(Lit::Char(inner)), t.span))
        }
        Some(TokenKind::CharListLit) => {
            let t = c.bump();
            let inner = t.text[2..t.text.len() - 2].to_string();
            Ok(Expr::new(ExprKind::Lit(Lit::CharList(inner)), t.span))
        }
        Some(TokenKind::StringLit) => {
            let t = c.bump();
            let inner = t.text[1..t.text.len() - 1].to_string();
            Ok(Expr::new(ExprKind::Lit(Lit::Str(inner)), t.span))
        }
        Some(TokenKind::Sym(Sym::LParen)) => {
            if let Some((name, span)) = operator_in_parens(c) {
                c.pos += 3;
                return Ok(Expr::new(ExprKind::OpRef(name), span));
            }
            let start = c.bump().span;
            let first = parse_expr_inner(c)?;
            if c.at_sym(Sym::Comma) {
                let mut elems = vec![first];
                while c.eat_sym(Sym::Comma) {
                    elems.push(parse_expr_inner(c)?);
                }
                let end = c.expect_sym(Sym::RParen)?;
                return Ok(Expr::new(ExprKind::Tuple(elems), start.merge(end)));
            }
            c.expect_sym(Sym::RParen)?;
            Ok(first)
        }
        Some(TokenKind::Sym(Sym::LBracket)) => parse_list_form(c),
        Some(TokenKind::Sym(Sym::LBrace)) => parse_brace_form(c),
        _ => Err(c.err(format!("expected an expression, found {}", c.describe()))),
    }
}

fn parse_list_form(c: &mut Cursor) -> Result<Expr, ParseError> {
    let start = c.expect_sym(Sym::LBracket)?;
    if c.at_sym(Sym::RBracket) {
        let end = c.bump().span;
        return Ok(Expr::new(
            ExprKind::List {
                elems: Vec::new(),
                tail: None,
            },
            start.merge(end),
        ));
    }
    let first = parse_expr_inner(c)?;

    if c.eat_sym(Sym::DotDot) {
        let to = if c.at_sym(Sym::RBracket) {
            None
        } else {
            Some(Box::new(parse_expr_inner(c)?))
        };
        let end = c.expect_sym(Sym::RBracket)?;
        return Ok(Expr::new(
            ExprKind::Range {
                from: Box::new(first),
                then: None,
                to,
            },
            start.merge(end),
        ));
    }
    if c.eat_sym(Sym::BackslashBackslash) {
        let quals = parse_quals(c)?;
        let end = c.expect_sym(Sym::RBracket)?;
        return Ok(Expr::new(
            ExprKind::ListComp {
                head: Box::new(first),
                quals,
            },
            start.merge(end),
        ));
    }
    if c.eat_sym(Sym::Colon) {
        let tail = parse_expr_inner(c)?;
        let end = c.expect_sym(Sym::RBracket)?;
        return Ok(Expr::new(
            ExprKind::List {
                elems: vec![first],
                tail: Some(Box::new(tail)),
            },
            start.merge(end),
        ));
    }

    let mut elems = vec![first];
    while c.eat_sym(Sym::Comma) {
        let e = parse_expr_inner(c)?;
        if elems.len() == 1 && c.eat_sym(Sym::DotDot) {
            let to = if c.at_sym(Sym::RBracket) {
                None
            } else {
                Some(Box::new(parse_expr_inner(c)?))
            };
            let end = c.expect_sym(Sym::RBracket)?;
            return Ok(Expr::new(
                ExprKind::Range {
                    from: Box::new(elems.pop().unwrap()),
                    then: Some(Box::new(e)),
                    to,
                },
                start.merge(end),
            ));
        }
        elems.push(e);
    }
    let tail = if c.eat_sym(Sym::Colon) {
        Some(Box::new(parse_expr_inner(c)?))
    } else {
        None
    };
    let end = c.expect_sym(Sym::RBracket)?;
    Ok(Expr::new(
        ExprKind::List { elems, tail },
        start.merge(end),
    ))
}

/// Whether the brace group starting at the cursor contains a top-level
/// `\\`, marking an array comprehension.
fn brace_has_comprehension(c: &Cursor) -> bool {
    let mut depth = 0u32;
    let mut i = 0;
    while let Some(t) = c.nth(i) {
        match t.kind {
            TokenKind::Sym(Sym::LBrace) | TokenKind::Sym(Sym::LParen) | TokenKind::Sym(Sym::LBracket) => {
                depth += 1
            }
            TokenKind::Sym(Sym::RBrace) | TokenKind::Sym(Sym::RParen) | TokenKind::Sym(Sym::RBracket) => {
                if depth <= 1 {
                    return false;
                }
                depth -= 1;
            }
            TokenKind::Sym(Sym::BackslashBackslash) if depth == 1 => return true,
            _ => {}
        }
        i += 1;
    }
    false
}

fn parse_brace_form(c: &mut Cursor) -> Result<Expr, ParseError> {
    if brace_has_comprehension(c) {
        let start = c.expect_sym(Sym::LBrace)?;
        let head = parse_expr_inner(c)?;
        c.expect_sym(Sym::BackslashBackslash)?;
        let quals = parse_quals(c)?;
        let end = c.expect_sym(Sym::RBrace)?;
        return Ok(Expr::new(
            ExprKind::ArrayComp {
                head: Box::new(head),
                quals,
            },
            start.merge(end),
        ));
    }

    // `{Ctor | ...}` and `{field = ...}` are record literals.
    if matches!(c.nth(1).map(|t| t.kind), Some(TokenKind::CtorIdent))
        && matches!(c.nth(2).map(|t| t.kind), Some(TokenKind::Sym(Sym::Pipe)))
    {
        let start = c.bump().span;
        let ctor = c.bump().text;
        c.bump();
        let fields = parse_field_assigns(c)?;
        let end = c.expect_sym(Sym::RBrace)?;
        return Ok(Expr::new(
            ExprKind::RecordLit {
                ctor: Some(ctor),
                fields,
            },
            start.merge(end),
        ));
    }
    if matches!(c.nth(1).map(|t| t.kind), Some(TokenKind::Ident))
        && matches!(c.nth(2).map(|t| t.kind), Some(TokenKind::Sym(Sym::Eq)))
    {
        let start = c.bump().span;
        let fields = parse_field_assigns(c)?;
        let end = c.expect_sym(Sym::RBrace)?;
        return Ok(Expr::new(
            ExprKind::RecordLit { ctor: None, fields },
            start.merge(end),
        ));
    }

    let start = c.expect_sym(Sym::LBrace)?;
    let first = parse_expr_inner(c)?;
    if c.eat_sym(Sym::Amp) {
        if c.at_sym(Sym::LBracket) {
            let mut updates = Vec::new();
            loop {
                c.expect_sym(Sym::LBracket)?;
                let idx = parse_expr_inner(c)?;
                c.expect_sym(Sym::RBracket)?;
                c.expect_sym(Sym::Eq)?;
                let val = parse_expr_inner(c)?;
                updates.push((idx, val));
                if !c.eat_sym(Sym::Comma) {
                    break;
                }
            }
            let end = c.expect_sym(Sym::RBrace)?;
            return Ok(Expr::new(
                ExprKind::ArrayUpdate {
                    arr: Box::new(first),
                    updates,
                },
                start.merge(end),
            ));
        }
        let fields = parse_field_assigns(c)?;
        let end = c.expect_sym(Sym::RBrace)?;
        return Ok(Expr::new(
            ExprKind::RecordUpdate {
                base: Box::new(first),
                fields,
            },
            start.merge(end),
        ));
    }

    let mut elems = vec![first];
    while c.eat_sym(Sym::Comma) {
        elems.push(parse_expr_inner(c)?);
    }
    let end = c.expect_sym(Sym::RBrace)?;
    Ok(Expr::new(ExprKind::ArrayLit(elems), start.merge(end)))
}

fn parse_field_assigns(c: &mut Cursor) -> Result<Vec<FieldAssign>, ParseError> {
    let mut fields = Vec::new();
    loop {
        let (field, fspan) = c.expect_ident()?;
        let value = if c.eat_sym(Sym::Eq) {
            Some(parse_expr_inner(c)?)
        } else {
            None
        };
        let span = value.as_ref().map_or(fspan, |v| fspan.merge(v.span));
        fields.push(FieldAssign { field, value, span });
        if !c.eat_sym(Sym::Comma) {
            break;
        }
    }
    Ok(fields)
}

/// Comprehension qualifiers: `&`-joined generators draw in lockstep,
/// `|` introduces filters, `,` starts a nested stage.
fn parse_quals(c: &mut Cursor) -> Result<Vec<QualGroup>, ParseError> {
    let mut groups = Vec::new();
    loop {
        let mut gens = vec![parse_generator(c)?];
        while c.eat_sym(Sym::Amp) {
            gens.push(parse_generator(c)?);
        }
        let mut filters = Vec::new();
        while c.eat_sym(Sym::Pipe) {
            filters.push(parse_expr_inner(c)?);
        }
        groups.push(QualGroup { gens, filters });
        if !c.eat_sym(Sym::Comma) {
            break;
        }
    }
    Ok(groups)
}

fn parse_generator(c: &mut Cursor) -> Result<Generator, ParseError> {
    let pat = parse_pattern_full(c)?;
    let start = pat.span;
    let source = if c.eat_sym(Sym::ArrowFrom) {
        GenSource::List(parse_expr_inner(c)?)
    } else if c.eat_sym(Sym::ArrowFromArray) {
        GenSource::Array(parse_expr_inner(c)?)
    } else {
        return Err(c.err(format!(
            "expected `<-` or `<-:` in generator, found {}",
            c.describe()
        )));
    };
    let end = match &source {
        GenSource::List(e) | GenSource::Array(e) => e.span,
    };
    Ok(Generator {
        pat,
        source,
        span: start.merge(end),
    })
}

/// Whether the current token can begin an expression atom (argument
/// position, so keyword forms and lambdas are excluded).
fn starts_expr_atom(c: &Cursor) -> bool {
    match c.peek().map(|t| t.kind) {
        // A declared alphabetic operator ends an application chain rather
        // than starting a new argument: `x mod y` is one operator chain.
        Some(TokenKind::Ident) => {
            let text = &c.peek().unwrap().text;
            c.fixities.lookup(text).is_none()
        }
        Some(TokenKind::CtorIdent)
        | Some(TokenKind::IntLit)
        | Some(TokenKind::RealLit)
        | Some(TokenKind::CharLit)
        | Some(TokenKind::CharListLit)
        | Some(TokenKind::StringLit) => true,
        Some(TokenKind::Sym(Sym::LParen))
        | Some(TokenKind::Sym(Sym::LBracket))
        | Some(TokenKind::Sym(Sym::LBrace)) => true,
        _ => false,
    }
}
