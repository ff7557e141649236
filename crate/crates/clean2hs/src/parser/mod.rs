//! Recursive descent parser for the Clean subset.
//!
//! Input is the laid-out token stream, so block structure arrives as
//! explicit open/separator/close markers. Function alternatives parse as
//! individual definitions and are merged by name afterwards; operator
//! fixities are collected in a token prescan so that expression parsing
//! has the full table up front, wherever the declaration sits in the file.

mod exprs;
mod patterns;
mod types;

pub(crate) use exprs::parse_expr_inner;
pub(crate) use patterns::{parse_pattern_atom, parse_pattern_full};
pub(crate) use types::{parse_type_atom, parse_type_full};

use crate::ast::*;
use crate::lexer::{layout_insert, layout_insert_fragment, tokenize, tokenize_with_comments};
use crate::lexer::{LayoutError, LexError};
use crate::span::Span;
use crate::token::{Kw, Sym, Token, TokenKind};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error("{span}: {message}")]
    Syntax { message: String, span: Span },
    #[error("{span}: expected {expected}, found a {} header", found.describe())]
    KindMismatch {
        expected: ModuleKind,
        found: ModuleFlavor,
        span: Span,
    },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Lex(e) => Span::point(e.pos()),
            ParseError::Layout(LayoutError::InconsistentIndentation { pos, .. }) => {
                Span::point(*pos)
            }
            ParseError::Syntax { span, .. } => *span,
            ParseError::KindMismatch { span, .. } => *span,
        }
    }
}

/// Which side of the definition/implementation split a file belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleKind {
    Definition,
    Implementation,
}

impl std::fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModuleKind::Definition => write!(f, "a definition module"),
            ModuleKind::Implementation => write!(f, "an implementation module"),
        }
    }
}

impl ModuleKind {
    fn admits(self, flavor: ModuleFlavor) -> bool {
        match self {
            ModuleKind::Definition => flavor == ModuleFlavor::Definition,
            ModuleKind::Implementation => flavor != ModuleFlavor::Definition,
        }
    }
}

/// Operator fixities in scope while parsing expressions.
#[derive(Debug, Clone)]
pub struct FixityTable {
    map: HashMap<Name, Fixity>,
}

impl FixityTable {
    /// The standard-library operators and their fixities.
    pub fn with_builtins() -> Self {
        let mut map = HashMap::new();
        let mut add = |name: &str, assoc: Assoc, prec: u8| {
            map.insert(name.to_string(), Fixity { assoc, prec });
        };
        add("||", Assoc::Right, 2);
        add("&&", Assoc::Right, 3);
        for op in ["==", "<>", "<", "<=", ">", ">="] {
            add(op, Assoc::None, 4);
        }
        add("++", Assoc::Right, 5);
        add("+++", Assoc::Right, 5);
        add("+", Assoc::Left, 6);
        add("-", Assoc::Left, 6);
        add("*", Assoc::Left, 7);
        add("/", Assoc::Left, 7);
        add("mod", Assoc::None, 7);
        add("rem", Assoc::None, 7);
        add("^", Assoc::Right, 8);
        // function composition
        add("o", Assoc::Right, 9);
        FixityTable { map }
    }

    /// Builtins plus any `(op) infixl n` declarations found in the stream.
    pub fn scan(tokens: &[Token]) -> Self {
        let mut table = Self::with_builtins();
        for i in 0..tokens.len() {
            let assoc = match tokens[i].kind {
                TokenKind::Keyword(Kw::Infixl) => Assoc::Left,
                TokenKind::Keyword(Kw::Infixr) => Assoc::Right,
                TokenKind::Keyword(Kw::Infix) => Assoc::None,
                _ => continue,
            };
            if i < 3
                || !tokens[i - 1].is_sym(Sym::RParen)
                || !tokens[i - 3].is_sym(Sym::LParen)
            {
                continue;
            }
            let name = match tokens[i - 2].kind {
                TokenKind::Sym(s) if !s.is_punctuation() => s.as_str().to_string(),
                TokenKind::OpIdent | TokenKind::Ident => tokens[i - 2].text.clone(),
                _ => continue,
            };
            let prec = match tokens.get(i + 1) {
                Some(t) if t.kind == TokenKind::IntLit => t.text.parse().unwrap_or(9),
                _ => 9,
            };
            table.map.insert(name, Fixity { assoc, prec });
        }
        table
    }

    /// Fixity of an operator; unknown operators default to the weakest
    /// binding that still groups left, like an undeclared operator would.
    pub fn get(&self, name: &str) -> Fixity {
        self.map.get(name).copied().unwrap_or(Fixity {
            assoc: Assoc::Left,
            prec: 9,
        })
    }

    /// Fixity only if the operator was declared (or is a builtin). Plain
    /// identifiers are infix exactly when this returns `Some`, so `x mod y`
    /// parses as an operator chain while `f x y` stays an application.
    pub fn lookup(&self, name: &str) -> Option<Fixity> {
        self.map.get(name).copied()
    }

    /// Record a declaration after the fact, mirroring what `scan` picks up
    /// from source. The source printer uses this to stay in sync with how
    /// its output will reparse.
    pub fn declare(&mut self, name: &str, fixity: Fixity) {
        self.map.insert(name.to_string(), fixity);
    }
}

impl Default for FixityTable {
    fn default() -> Self {
        Self::with_builtins()
    }
}

/// Parse a complete module from source text.
pub fn parse_module(src: &str) -> Result<CleanModule, ParseError> {
    let (tokens, comments) = tokenize_with_comments(src)?;
    let laid = layout_insert(&tokens)?;
    let fixities = FixityTable::scan(&laid);
    let mut c = Cursor::new(&laid, fixities);
    let module = parse_module_body(&mut c, comments)?;
    c.expect_end()?;
    validate_module(&module)?;
    Ok(module)
}

/// Parse a module that must be of the given kind; a `.dcl` file must open
/// with `definition module`, and implementation files must not.
pub fn parse_module_expecting(src: &str, expected: ModuleKind) -> Result<CleanModule, ParseError> {
    let module = parse_module(src)?;
    if !expected.admits(module.flavor) {
        return Err(ParseError::KindMismatch {
            expected,
            found: module.flavor,
            span: Span::point(module.span.start),
        });
    }
    Ok(module)
}

/// Parse a standalone expression.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(src)?;
    let laid = layout_insert_fragment(&tokens)?;
    let mut c = Cursor::new(&laid, FixityTable::with_builtins());
    let e = parse_expr_inner(&mut c)?;
    c.expect_end()?;
    Ok(e)
}

/// Parse a standalone type, in signature style: juxtaposed argument types
/// before an `->` are separate arguments, and a trailing `, [l<=r]` list
/// supplies attribute constraints.
pub fn parse_type(src: &str) -> Result<(AttrType, Vec<AttrConstraint>), ParseError> {
    let tokens = tokenize(src)?;
    let laid = layout_insert_fragment(&tokens)?;
    let mut c = Cursor::new(&laid, FixityTable::with_builtins());
    let ty = parse_sig_type(&mut c)?;
    let constraints = parse_attr_constraints(&mut c)?;
    c.expect_end()?;
    Ok((ty, constraints))
}

// ---------------------------------------------------------------------
// Cursor

pub(crate) struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    pub(crate) fixities: FixityTable,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(toks: &'a [Token], fixities: FixityTable) -> Self {
        Cursor {
            toks,
            pos: 0,
            fixities,
        }
    }

    pub(crate) fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    pub(crate) fn nth(&self, n: usize) -> Option<&Token> {
        self.toks.get(self.pos + n)
    }

    pub(crate) fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        t
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    /// Column of the current token; guard groups are delimited by
    /// indentation rather than layout tokens.
    pub(crate) fn col(&self) -> u32 {
        self.peek().map_or(0, |t| t.span.start.column)
    }

    /// Span of the current token, or a point at the end of input.
    pub(crate) fn here(&self) -> Span {
        match self.peek() {
            Some(t) => t.span,
            None => self
                .toks
                .last()
                .map_or_else(Span::default, |t| Span::point(t.span.end)),
        }
    }

    pub(crate) fn at_sym(&self, s: Sym) -> bool {
        self.peek().map_or(false, |t| t.is_sym(s))
    }

    pub(crate) fn at_kw(&self, k: Kw) -> bool {
        self.peek().map_or(false, |t| t.is_kw(k))
    }

    pub(crate) fn at_kind(&self, k: TokenKind) -> bool {
        self.peek().map_or(false, |t| t.kind == k)
    }

    pub(crate) fn eat_sym(&mut self, s: Sym) -> bool {
        if self.at_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn eat_kw(&mut self, k: Kw) -> bool {
        if self.at_kw(k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn eat_kind(&mut self, k: TokenKind) -> bool {
        if self.at_kind(k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_sym(&mut self, s: Sym) -> Result<Span, ParseError> {
        if self.at_sym(s) {
            Ok(self.bump().span)
        } else {
            Err(self.err(format!("expected `{}`, found {}", s.as_str(), self.describe())))
        }
    }

    pub(crate) fn expect_kw(&mut self, k: Kw) -> Result<Span, ParseError> {
        if self.at_kw(k) {
            Ok(self.bump().span)
        } else {
            Err(self.err(format!("expected `{}`, found {}", k.as_str(), self.describe())))
        }
    }

    pub(crate) fn expect_kind(&mut self, k: TokenKind) -> Result<Token, ParseError> {
        if self.at_kind(k) {
            Ok(self.bump())
        } else {
            Err(self.err(format!("expected {}, found {}", k.describe(), self.describe())))
        }
    }

    pub(crate) fn expect_ident(&mut self) -> Result<(Name, Span), ParseError> {
        let t = self.expect_kind(TokenKind::Ident)?;
        Ok((t.text, t.span))
    }

    pub(crate) fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err(format!("unexpected trailing {}", self.describe())))
        }
    }

    /// True when the current token directly abuts the previous one, with
    /// no whitespace between. Postfix selection requires this.
    pub(crate) fn adjacent(&self) -> bool {
        if self.pos == 0 {
            return false;
        }
        match (self.toks.get(self.pos - 1), self.peek()) {
            (Some(a), Some(b)) => a.span.end.offset == b.span.start.offset,
            _ => false,
        }
    }

    /// True when the current and next tokens abut.
    pub(crate) fn next_adjacent(&self) -> bool {
        match (self.peek(), self.nth(1)) {
            (Some(a), Some(b)) => a.span.end.offset == b.span.start.offset,
            _ => false,
        }
    }

    pub(crate) fn describe(&self) -> String {
        match self.peek() {
            Some(t) => t.to_string(),
            None => "end of input".to_string(),
        }
    }

    pub(crate) fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            message: message.into(),
            span: self.here(),
        }
    }

    /// Scan forward from the current position for `target` at bracket
    /// depth zero, stopping at any of `stops` at depth zero or a layout
    /// marker. Used to pick between signature shapes before committing.
    pub(crate) fn scan_ahead(&self, target: Sym, stops: &[Sym]) -> bool {
        let mut depth = 0u32;
        for t in &self.toks[self.pos..] {
            match t.kind {
                TokenKind::Sym(s) => {
                    if depth == 0 && s == target {
                        return true;
                    }
                    if depth == 0 && stops.contains(&s) {
                        return false;
                    }
                    match s {
                        Sym::LParen | Sym::LBracket | Sym::LBrace => depth += 1,
                        Sym::RParen | Sym::RBracket | Sym::RBrace => {
                            if depth == 0 {
                                return false;
                            }
                            depth -= 1;
                        }
                        _ => {}
                    }
                }
                TokenKind::LayoutSep | TokenKind::LayoutClose | TokenKind::LayoutOpen => {
                    return false
                }
                _ => {}
            }
        }
        false
    }
}

// ---------------------------------------------------------------------
// Module structure

fn parse_module_body(
    c: &mut Cursor,
    comments: Vec<crate::token::Comment>,
) -> Result<CleanModule, ParseError> {
    let start = c.here();
    let flavor = if c.eat_kw(Kw::Implementation) {
        ModuleFlavor::Implementation
    } else if c.eat_kw(Kw::Definition) {
        ModuleFlavor::Definition
    } else if c.eat_kw(Kw::System) {
        ModuleFlavor::System
    } else {
        ModuleFlavor::Plain
    };
    c.expect_kw(Kw::Module)?;
    let name = match c.peek().map(|t| t.kind) {
        Some(TokenKind::Ident) | Some(TokenKind::CtorIdent) => c.bump().text,
        _ => return Err(c.err(format!("expected module name, found {}", c.describe()))),
    };

    c.expect_kind(TokenKind::LayoutOpen)?;
    let mut imports = Vec::new();
    let mut items: Vec<Item> = Vec::new();
    loop {
        if c.eat_kind(TokenKind::LayoutClose) {
            break;
        }
        if c.at_end() {
            return Err(c.err("unexpected end of input in module body"));
        }
        parse_top_item(c, &mut imports, &mut items)?;
        if !c.eat_kind(TokenKind::LayoutSep) && !c.eat_sym(Sym::Semi) {
            c.expect_kind(TokenKind::LayoutClose)?;
            break;
        }
    }

    let items = merge_fun_defs(items);
    let end = c
        .toks
        .last()
        .map_or(start, |t| Span::point(t.span.end));
    Ok(CleanModule {
        flavor,
        name,
        imports,
        items,
        comments,
        span: start.merge(end),
    })
}

fn parse_top_item(
    c: &mut Cursor,
    imports: &mut Vec<ImportDecl>,
    items: &mut Vec<Item>,
) -> Result<(), ParseError> {
    match c.peek().map(|t| t.kind) {
        Some(TokenKind::Keyword(Kw::Import)) => {
            imports.push(parse_import_whole(c)?);
        }
        Some(TokenKind::Keyword(Kw::From)) => {
            imports.push(parse_import_selective(c)?);
        }
        Some(TokenKind::Sym(Sym::DColon)) => {
            items.push(Item::TypeDef(parse_type_def(c)?));
        }
        Some(TokenKind::Keyword(Kw::Class)) => {
            items.push(Item::ClassDef(parse_class_def(c)?));
        }
        Some(TokenKind::Keyword(Kw::Instance)) => {
            items.push(Item::InstanceDef(parse_instance_def(c)?));
        }
        Some(TokenKind::Keyword(Kw::Generic)) => {
            items.push(Item::GenericDef(parse_generic_def(c)?));
        }
        Some(TokenKind::Keyword(Kw::Derive)) => {
            items.push(Item::DeriveDecl(parse_derive_decl(c)?));
        }
        Some(TokenKind::Keyword(Kw::Start)) => {
            let span = c.bump().span;
            items.push(parse_def_or_sig(c, "Start".to_string(), span)?);
        }
        Some(TokenKind::Ident) => {
            let t = c.bump();
            items.push(parse_def_or_sig(c, t.text, t.span)?);
        }
        Some(TokenKind::Sym(Sym::LParen)) if operator_in_parens(c).is_some() => {
            let (name, span) = operator_in_parens(c).unwrap();
            c.pos += 3;
            items.push(parse_def_or_sig(c, name, span)?);
        }
        _ => {
            return Err(c.err(format!("expected a definition, found {}", c.describe())));
        }
    }
    Ok(())
}

/// `(op)` at the cursor: the operator name and full span.
fn operator_in_parens(c: &Cursor) -> Option<(Name, Span)> {
    let t0 = c.peek()?;
    let t1 = c.nth(1)?;
    let t2 = c.nth(2)?;
    if !t0.is_sym(Sym::LParen) || !t2.is_sym(Sym::RParen) {
        return None;
    }
    match t1.kind {
        TokenKind::Sym(s) if !s.is_punctuation() => {
            Some((s.as_str().to_string(), t0.span.merge(t2.span)))
        }
        TokenKind::OpIdent => Some((t1.text.clone(), t0.span.merge(t2.span))),
        // An alphabetic name counts as an operator section only when it is
        // being given a fixity right here or already has one, so `(mod)`
        // is an operator while `(x)` stays a parenthesised variable.
        TokenKind::Ident => {
            let declares = matches!(
                c.nth(3).map(|t| t.kind),
                Some(TokenKind::Keyword(Kw::Infixl | Kw::Infixr | Kw::Infix))
            );
            if declares || c.fixities.lookup(&t1.text).is_some() {
                Some((t1.text.clone(), t0.span.merge(t2.span)))
            } else {
                None
            }
        }
        _ => None,
    }
}

fn parse_fixity(c: &mut Cursor) -> Option<Fixity> {
    let assoc = match c.peek().map(|t| t.kind) {
        Some(TokenKind::Keyword(Kw::Infixl)) => Assoc::Left,
        Some(TokenKind::Keyword(Kw::Infixr)) => Assoc::Right,
        Some(TokenKind::Keyword(Kw::Infix)) => Assoc::None,
        _ => return None,
    };
    c.bump();
    let prec = if c.at_kind(TokenKind::IntLit) {
        c.bump().text.parse().unwrap_or(9)
    } else {
        9
    };
    Some(Fixity { assoc, prec })
}

/// After a definition head name: either `:: ...` signature or clause.
fn parse_def_or_sig(c: &mut Cursor, name: Name, name_span: Span) -> Result<Item, ParseError> {
    let fixity = parse_fixity(c);
    if c.at_sym(Sym::DColon) {
        let sig = parse_sig_tail(c, name, fixity, name_span)?;
        Ok(Item::FunSig(sig))
    } else {
        let clause = parse_clause(c)?;
        let span = name_span.merge(clause.span);
        Ok(Item::FunDef(FunDef {
            name,
            fixity,
            clauses: vec![clause],
            span,
        }))
    }
}

/// `import M1, M2` whole-module imports, or the selective
/// `import M => qualified f, :: t` form.
fn parse_import_whole(c: &mut Cursor) -> Result<ImportDecl, ParseError> {
    let start = c.expect_kw(Kw::Import)?;
    let mut modules = Vec::new();
    let mut end;
    loop {
        match c.peek().map(|t| t.kind) {
            Some(TokenKind::Ident) | Some(TokenKind::CtorIdent) => {
                let t = c.bump();
                end = t.span;
                modules.push(t.text);
            }
            _ => return Err(c.err(format!("expected module name, found {}", c.describe()))),
        }
        if !c.eat_sym(Sym::Comma) {
            break;
        }
    }
    if c.at_sym(Sym::FatArrow) {
        if modules.len() != 1 {
            return Err(c.err("`=>` import takes a single module name"));
        }
        c.bump();
        let (names, end) = parse_import_entries(c)?;
        return Ok(ImportDecl::Selective {
            module: modules.pop().unwrap(),
            names,
            span: start.merge(end),
        });
    }
    Ok(ImportDecl::Whole {
        modules,
        span: start.merge(end),
    })
}

/// `from M import f, g`: the other selective spelling.
fn parse_import_selective(c: &mut Cursor) -> Result<ImportDecl, ParseError> {
    let start = c.expect_kw(Kw::From)?;
    let module = match c.peek().map(|t| t.kind) {
        Some(TokenKind::Ident) | Some(TokenKind::CtorIdent) => c.bump().text,
        _ => return Err(c.err(format!("expected module name, found {}", c.describe()))),
    };
    c.expect_kw(Kw::Import)?;
    let (names, end) = parse_import_entries(c)?;
    Ok(ImportDecl::Selective {
        module,
        names,
        span: start.merge(end),
    })
}

fn parse_import_entries(c: &mut Cursor) -> Result<(Vec<ImportEntry>, Span), ParseError> {
    let mut names = Vec::new();
    loop {
        let entry = parse_import_entry(c)?;
        names.push(entry);
        if !c.eat_sym(Sym::Comma) {
            break;
        }
    }
    let end = names.last().map_or_else(|| c.here(), |e| e.span);
    Ok((names, end))
}

fn parse_import_entry(c: &mut Cursor) -> Result<ImportEntry, ParseError> {
    // `qualified` is not reserved; it marks an entry only when another
    // entry follows it.
    let qualified = c.peek().map_or(false, |t| t.text == "qualified")
        && c.nth(1).map_or(false, |t| {
            matches!(
                t.kind,
                TokenKind::Ident
                    | TokenKind::CtorIdent
                    | TokenKind::OpIdent
                    | TokenKind::Keyword(Kw::Class)
            ) || t.is_sym(Sym::DColon)
                || t.is_sym(Sym::LParen)
        });
    let qstart = if qualified { Some(c.bump().span) } else { None };

    let (name, kind, span) = if c.at_sym(Sym::DColon) {
        let start = c.bump().span;
        let t = match c.peek().map(|t| t.kind) {
            Some(TokenKind::Ident) | Some(TokenKind::CtorIdent) => c.bump(),
            _ => return Err(c.err(format!("expected type name, found {}", c.describe()))),
        };
        (t.text, ImportEntryKind::Type, start.merge(t.span))
    } else if c.at_kw(Kw::Class) {
        let start = c.bump().span;
        let (name, nspan) = parse_class_name(c)?;
        (name, ImportEntryKind::Class, start.merge(nspan))
    } else if let Some((name, span)) = operator_in_parens(c) {
        c.pos += 3;
        (name, ImportEntryKind::Value, span)
    } else {
        match c.peek().map(|t| t.kind) {
            Some(TokenKind::Ident) | Some(TokenKind::CtorIdent) | Some(TokenKind::OpIdent) => {
                let t = c.bump();
                (t.text, ImportEntryKind::Value, t.span)
            }
            Some(TokenKind::Sym(s)) if !s.is_punctuation() => {
                let t = c.bump();
                (t.text, ImportEntryKind::Value, t.span)
            }
            _ => return Err(c.err(format!("expected import entry, found {}", c.describe()))),
        }
    };
    Ok(ImportEntry {
        name,
        kind,
        qualified,
        span: qstart.map_or(span, |s| s.merge(span)),
    })
}

// ---------------------------------------------------------------------
// Type definitions

fn parse_type_def(c: &mut Cursor) -> Result<TypeDef, ParseError> {
    let start = c.expect_sym(Sym::DColon)?;
    let name_tok = c.expect_kind(TokenKind::CtorIdent)?;
    let mut params = Vec::new();
    while c.at_kind(TokenKind::Ident) {
        params.push(c.bump().text);
    }

    let body;
    let mut end = name_tok.span;
    if c.eat_sym(Sym::Eq) {
        if c.at_sym(Sym::LBrace) {
            let (fields, span) = parse_record_fields(c)?;
            end = span;
            body = Some(TypeDefBody::Record(fields));
        } else {
            let mut ctors = Vec::new();
            loop {
                let ctor = parse_ctor_def(c)?;
                end = ctor.span;
                ctors.push(ctor);
                if !c.eat_sym(Sym::Pipe) {
                    break;
                }
            }
            body = Some(TypeDefBody::Algebraic(ctors));
        }
    } else if c.eat_sym(Sym::ColonEqEq) {
        let ty = parse_type_full(c)?;
        end = ty.span;
        body = Some(TypeDefBody::Synonym(ty));
    } else if c.eat_sym(Sym::EqColon) {
        let ctor = parse_ctor_def(c)?;
        end = ctor.span;
        body = Some(TypeDefBody::Newtype(ctor));
    } else {
        body = None;
    }

    Ok(TypeDef {
        name: name_tok.text,
        params,
        body,
        span: start.merge(end),
    })
}

fn parse_ctor_def(c: &mut Cursor) -> Result<CtorDef, ParseError> {
    let start = c.here();
    let mut exist_vars = Vec::new();
    if c.eat_sym(Sym::ExistsDot) {
        while c.at_kind(TokenKind::Ident) {
            exist_vars.push(c.bump().text);
        }
        c.expect_sym(Sym::Colon)?;
    }
    let name_tok = c.expect_kind(TokenKind::CtorIdent)?;
    let mut args = Vec::new();
    let mut end = name_tok.span;
    loop {
        let strict = c.at_sym(Sym::Bang);
        if strict {
            c.bump();
        } else if !types::starts_type_atom(c) {
            break;
        }
        let ty = parse_type_atom(c)?;
        end = ty.span;
        args.push(CtorArg { strict, ty });
    }
    let context = if c.eat_sym(Sym::Amp) {
        let ctx = parse_constraint_groups(c)?;
        end = ctx.last().map_or(end, |k| k.span);
        ctx
    } else {
        Vec::new()
    };
    Ok(CtorDef {
        name: name_tok.text,
        exist_vars,
        args,
        context,
        span: start.merge(end),
    })
}

fn parse_record_fields(c: &mut Cursor) -> Result<(Vec<FieldDef>, Span), ParseError> {
    let start = c.expect_sym(Sym::LBrace)?;
    let mut fields = Vec::new();
    loop {
        let (name, name_span) = c.expect_ident()?;
        c.expect_sym(Sym::DColon)?;
        let strict = c.eat_sym(Sym::Bang);
        let ty = parse_type_full(c)?;
        let span = name_span.merge(ty.span);
        fields.push(FieldDef {
            name,
            strict,
            ty,
            span,
        });
        if !c.eat_sym(Sym::Comma) {
            break;
        }
    }
    let end = c.expect_sym(Sym::RBrace)?;
    Ok((fields, start.merge(end)))
}

// ---------------------------------------------------------------------
// Signatures

/// Parse the `:: ...` tail of a signature whose name is already consumed.
fn parse_sig_tail(
    c: &mut Cursor,
    name: Name,
    fixity: Option<Fixity>,
    name_span: Span,
) -> Result<FunSig, ParseError> {
    c.expect_sym(Sym::DColon)?;

    let mut args = Vec::new();
    let ret;
    // Argument types are present only when an `->` sits at the top level
    // of the signature. A leading quantifier scopes over the whole type.
    if !c.at_sym(Sym::ForallDot) && c.scan_ahead(Sym::Arrow, &[Sym::Pipe, Sym::Comma]) {
        loop {
            let strict = c.eat_sym(Sym::Bang);
            if !strict && !types::starts_type_atom(c) {
                break;
            }
            let ty = parse_type_atom(c)?;
            args.push(SigArg { strict, ty });
            if c.at_sym(Sym::Arrow) {
                break;
            }
        }
        c.expect_sym(Sym::Arrow)?;
        ret = parse_type_full(c)?;
    } else {
        ret = parse_type_full(c)?;
    }

    let context = parse_class_context(c)?;
    let attr_constraints = parse_attr_constraints(c)?;
    let end = attr_constraints
        .last()
        .map(|a| a.span)
        .unwrap_or(ret.span);
    Ok(FunSig {
        name,
        fixity,
        args,
        ret,
        context,
        attr_constraints,
        span: name_span.merge(end),
    })
}

/// A signature-style type: `atom atom -> type` or a plain type.
fn parse_sig_type(c: &mut Cursor) -> Result<AttrType, ParseError> {
    if !c.at_sym(Sym::ForallDot) && c.scan_ahead(Sym::Arrow, &[Sym::Pipe, Sym::Comma]) {
        let mut atoms = Vec::new();
        while !c.at_sym(Sym::Arrow) {
            if c.eat_sym(Sym::Bang) {
                // strictness is ignored in standalone types
            }
            if !types::starts_type_atom(c) {
                break;
            }
            atoms.push(parse_type_atom(c)?);
        }
        c.expect_sym(Sym::Arrow)?;
        let mut ty = parse_type_full(c)?;
        for arg in atoms.into_iter().rev() {
            let span = arg.span.merge(ty.span);
            ty = AttrType::plain(Shape::Fun(Box::new(arg), Box::new(ty)), span);
        }
        Ok(ty)
    } else {
        parse_type_full(c)
    }
}

/// `| C a & D b` class context; absent when no `|` follows.
pub(crate) fn parse_class_context(c: &mut Cursor) -> Result<Vec<ClassConstraint>, ParseError> {
    if !c.eat_sym(Sym::Pipe) {
        return Ok(Vec::new());
    }
    parse_constraint_groups(c)
}

/// `&`-separated constraint groups; classes sharing arguments may be
/// comma-joined within a group, `Eq, Ord a`.
fn parse_constraint_groups(c: &mut Cursor) -> Result<Vec<ClassConstraint>, ParseError> {
    let mut out = Vec::new();
    loop {
        let mut classes = Vec::new();
        classes.push(parse_class_name(c)?);
        while c.at_sym(Sym::Comma)
            && matches!(c.nth(1).map(|t| t.kind), Some(TokenKind::CtorIdent))
        {
            c.bump();
            classes.push(parse_class_name(c)?);
        }
        let mut cargs = Vec::new();
        while types::starts_type_atom(c) {
            cargs.push(parse_type_atom(c)?);
        }
        if cargs.is_empty() {
            return Err(c.err("class constraint needs at least one type argument"));
        }
        for (cls, span) in classes {
            out.push(ClassConstraint {
                class: cls,
                args: cargs.clone(),
                span,
            });
        }
        if !c.eat_sym(Sym::Amp) {
            break;
        }
    }
    Ok(out)
}

fn parse_class_name(c: &mut Cursor) -> Result<(Name, Span), ParseError> {
    if let Some((name, span)) = operator_in_parens(c) {
        c.pos += 3;
        return Ok((name, span));
    }
    match c.peek().map(|t| t.kind) {
        Some(TokenKind::CtorIdent) | Some(TokenKind::Ident) | Some(TokenKind::OpIdent) => {
            let t = c.bump();
            Ok((t.text, t.span))
        }
        Some(TokenKind::Sym(s)) if !s.is_punctuation() => {
            let t = c.bump();
            Ok((t.text, t.span))
        }
        _ => Err(c.err(format!("expected class name, found {}", c.describe()))),
    }
}

/// `, [v<=u, u<=w]` uniqueness-constraint suffix.
fn parse_attr_constraints(c: &mut Cursor) -> Result<Vec<AttrConstraint>, ParseError> {
    let mut out = Vec::new();
    if !(c.at_sym(Sym::Comma) && matches!(c.nth(1).map(|t| t.kind), Some(TokenKind::Sym(Sym::LBracket))))
    {
        return Ok(out);
    }
    c.bump();
    c.expect_sym(Sym::LBracket)?;
    loop {
        let (left, lspan) = c.expect_ident()?;
        c.expect_sym(Sym::Le)?;
        let (right, rspan) = c.expect_ident()?;
        out.push(AttrConstraint {
            left,
            right,
            span: lspan.merge(rspan),
        });
        if !c.eat_sym(Sym::Comma) {
            break;
        }
    }
    c.expect_sym(Sym::RBracket)?;
    Ok(out)
}

// ---------------------------------------------------------------------
// Function clauses

///// Parse one clause: parameters, body, optional `with`/`where` blocks.
/// The defining name is already consumed.
fn parse_clause(c: &mut Cursor) -> Result<Clause, ParseError> {
    let start = c.here();
    let mut params = Vec::new();
    while patterns::starts_pattern_atom(c) {
        params.push(parse_pattern_atom(c)?);
    }
    let body = parse_clause_body(c, BodyIntro::Definition)?;

    let mut where_defs = Vec::new();
    let mut with_defs = Vec::new();
    loop {
        if c.at_kw(Kw::With) {
            with_defs.extend(parse_local_block(c, Kw::With)?);
        } else if c.at_kw(Kw::Where) {
            where_defs.extend(parse_local_block(c, Kw::Where)?);
        } else {
            break;
        }
    }

    let end = c
        .toks
        .get(c.pos.saturating_sub(1))
        .map_or(start, |t| t.span);
    Ok(Clause {
        params,
        body,
        where_defs,
        with_defs,
        span: start.merge(end),
    })
}

/// What introduces a simple body: `=` for definitions, `=` or `->` for
/// case alternatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BodyIntro {
    Definition,
    CaseAlt,
}

impl BodyIntro {
    fn matches(self, c: &Cursor) -> bool {
        match self {
            BodyIntro::Definition => c.at_sym(Sym::Eq),
            BodyIntro::CaseAlt => c.at_sym(Sym::Arrow) || c.at_sym(Sym::Eq),
        }
    }
}

pub(crate) fn parse_clause_body(c: &mut Cursor, intro: BodyIntro) -> Result<ClauseBody, ParseError> {
    if c.at_sym(Sym::Hash) || c.at_sym(Sym::HashBang) {
        let steps = parse_let_steps(c)?;
        let rest = parse_clause_body(c, intro)?;
        return Ok(ClauseBody::LetBefore {
            steps,
            rest: Box::new(rest),
        });
    }
    if c.at_sym(Sym::Pipe) {
        let col = c.col();
        return parse_guard_group(c, intro, col, true);
    }
    if intro.matches(c) {
        c.bump();
        let e = parse_expr_inner(c)?;
        return Ok(ClauseBody::Simple(e));
    }
    let what = match intro {
        BodyIntro::Definition => "`=`, `|` or `#`",
        BodyIntro::CaseAlt => "`->`, `=`, `|` or `#`",
    };
    Err(c.err(format!("expected {what}, found {}", c.describe())))
}

/// A run of `|` alternatives at one column. The top-level group of a body
/// takes every `|` it sees; a nested group (opened by a `|` indented past
/// its parent) ends at the first token left of its own column.
fn parse_guard_group(
    c: &mut Cursor,
    intro: BodyIntro,
    col: u32,
    top: bool,
) -> Result<ClauseBody, ParseError> {
    let mut alts = Vec::new();
    while c.at_sym(Sym::Pipe) && (top || c.col() == col) {
        let start = c.bump().span;
        let guard = parse_expr_inner(c)?;
        let body = parse_guard_tail(c, intro, col)?;
        alts.push(GuardedAlt {
            guard: Some(guard),
            body: Box::new(body),
            span: start,
        });
    }
    // A trailing unguarded body is the fall-through alternative.
    if intro.matches(c) && (top || c.col() == col) {
        let start = c.bump().span;
        let e = parse_expr_inner(c)?;
        alts.push(GuardedAlt {
            guard: None,
            body: Box::new(ClauseBody::Simple(e)),
            span: start,
        });
    }
    Ok(ClauseBody::Guarded(alts))
}

/// Body of one guarded alternative: `= e`, `-> e`, a deeper-indented
/// nested guard group, or let-before steps leading to one of those.
fn parse_guard_tail(
    c: &mut Cursor,
    intro: BodyIntro,
    group_col: u32,
) -> Result<ClauseBody, ParseError> {
    if c.at_sym(Sym::Hash) || c.at_sym(Sym::HashBang) {
        let steps = parse_let_steps(c)?;
        // Guards following the steps are scoped inside them, whatever
        // their indentation.
        let rest = if c.at_sym(Sym::Pipe) {
            let col = c.col();
            parse_guard_group(c, intro, col, false)?
        } else {
            parse_guard_tail(c, intro, group_col)?
        };
        return Ok(ClauseBody::LetBefore {
            steps,
            rest: Box::new(rest),
        });
    }
    if c.at_sym(Sym::Pipe) && c.col() > group_col {
        let col = c.col();
        return parse_guard_group(c, intro, col, false);
    }
    if intro.matches(c) {
        c.bump();
        let e = parse_expr_inner(c)?;
        return Ok(ClauseBody::Simple(e));
    }
    Err(c.err(format!(
        "expected guarded alternative body, found {}",
        c.describe()
    )))
}

fn parse_let_steps(c: &mut Cursor) -> Result<Vec<LetStep>, ParseError> {
    let mut steps = Vec::new();
    while c.at_sym(Sym::Hash) || c.at_sym(Sym::HashBang) {
        let tok = c.bump();
        let strict = tok.kind == TokenKind::Sym(Sym::HashBang);
        let pat = parse_pattern_full(c)?;
        c.expect_sym(Sym::Eq)?;
        let expr = parse_expr_inner(c)?;
        let span = tok.span.merge(expr.span);
        steps.push(LetStep {
            strict,
            pat,
            expr,
            span,
        });
    }
    Ok(steps)
}

// ---------------------------------------------------------------------
// Local definition blocks

/// Parse a `where` or `with` block into local definitions.
fn parse_local_block(c: &mut Cursor, kw: Kw) -> Result<Vec<LocalDef>, ParseError> {
    c.expect_kw(kw)?;
    c.expect_kind(TokenKind::LayoutOpen)?;
    parse_local_defs_until_close(c)
}

/// Parse local definitions up to and including the closing marker. Also
/// used for `let` bodies in expressions.
pub(crate) fn parse_local_defs_until_close(c: &mut Cursor) -> Result<Vec<LocalDef>, ParseError> {
    let mut defs: Vec<LocalDef> = Vec::new();
    loop {
        if c.eat_kind(TokenKind::LayoutClose) {
            break;
        }
        if c.at_end() {
            return Err(c.err("unexpected end of input in definition block"));
        }
        let def = parse_local_def(c)?;
        push_local_def(&mut defs, def);
        if !c.eat_kind(TokenKind::LayoutSep) && !c.eat_sym(Sym::Semi) {
            c.expect_kind(TokenKind::LayoutClose)?;
            break;
        }
    }
    Ok(defs)
}

fn parse_local_def(c: &mut Cursor) -> Result<LocalDef, ParseError> {
    // An operator or plain name starts a function definition or signature;
    // any other pattern shape is a pattern binding.
    if let Some((name, span)) = operator_in_parens(c) {
        c.pos += 3;
        return local_def_or_sig(c, name, span);
    }
    if c.at_kind(TokenKind::Ident) && !is_pattern_bind_head(c) {
        let t = c.bump();
        return local_def_or_sig(c, t.text, t.span);
    }
    let start = c.here();
    let pat = parse_pattern_full(c)?;
    let body = parse_clause_body(c, BodyIntro::Definition)?;
    let end = c
        .toks
        .get(c.pos.saturating_sub(1))
        .map_or(start, |t| t.span);
    Ok(LocalDef::PatBind {
        pat,
        body,
        span: start.merge(end),
    })
}

/// `xs=:rest = ...` binds a pattern even though it starts with a name.
fn is_pattern_bind_head(c: &Cursor) -> bool {
    matches!(
        c.nth(1).map(|t| t.kind),
        Some(TokenKind::Sym(Sym::EqColon))
    )
}

fn local_def_or_sig(c: &mut Cursor, name: Name, name_span: Span) -> Result<LocalDef, ParseError> {
    let fixity = parse_fixity(c);
    if c.at_sym(Sym::DColon) {
        let sig = parse_sig_tail(c, name, fixity, name_span)?;
        Ok(LocalDef::Sig(sig))
    } else {
        let clause = parse_clause(c)?;
        let span = name_span.merge(clause.span);
        Ok(LocalDef::Fun(FunDef {
            name,
            fixity,
            clauses: vec![clause],
            span,
        }))
    }
}

/// Append a local definition, merging a clause into the previous
/// definition when it continues the same function.
fn push_local_def(defs: &mut Vec<LocalDef>, def: LocalDef) {
    if let LocalDef::Fun(new) = &def {
        if let Some(LocalDef::Fun(prev)) = defs.last_mut() {
            if prev.name == new.name {
                prev.clauses.extend(new.clauses.iter().cloned());
                prev.span = prev.span.merge(new.span);
                return;
            }
        }
    }
    defs.push(def);
}

/// Merge consecutive single-clause definitions of the same name into one
/// multi-clause definition.
fn merge_fun_defs(items: Vec<Item>) -> Vec<Item> {
    let mut out: Vec<Item> = Vec::new();
    for item in items {
        if let Item::FunDef(new) = &item {
            if let Some(Item::FunDef(prev)) = out.last_mut() {
                if prev.name == new.name {
                    prev.clauses.extend(new.clauses.iter().cloned());
                    prev.span = prev.span.merge(new.span);
                    continue;
                }
            }
        }
        out.push(item);
    }
    out
}

// ---------------------------------------------------------------------
// Classes, instances, generics

fn parse_class_def(c: &mut Cursor) -> Result<ClassDef, ParseError> {
    let start = c.expect_kw(Kw::Class)?;
    let (name, _) = parse_class_name(c)?;
    let fixity = parse_fixity(c);

    let mut params = Vec::new();
    loop {
        let determines_rest = c.eat_sym(Sym::Tilde);
        if c.at_kind(TokenKind::Ident) {
            params.push(ClassParam {
                name: c.bump().text,
                determines_rest,
            });
        } else if determines_rest {
            return Err(c.err("expected type variable after `~`"));
        } else {
            break;
        }
    }
    let context = parse_class_context(c)?;

    let mut members = Vec::new();
    let mut single_member = false;
    if c.at_sym(Sym::DColon) {
        let sig = parse_sig_tail(c, name.clone(), None, start)?;
        members.push(ClassMember::Sig(sig));
        single_member = true;
    } else if c.at_kw(Kw::Where) {
        for def in parse_local_block(c, Kw::Where)? {
            members.push(match def {
                LocalDef::Fun(d) => ClassMember::Def(d),
                LocalDef::Sig(s) => ClassMember::Sig(s),
                LocalDef::PatBind { span, .. } => {
                    return Err(ParseError::Syntax {
                        message: "pattern bindings cannot be class members".into(),
                        span,
                    })
                }
            });
        }
    }

    let end = c
        .toks
        .get(c.pos.saturating_sub(1))
        .map_or(start, |t| t.span);
    Ok(ClassDef {
        name,
        fixity,
        params,
        context,
        members,
        single_member,
        span: start.merge(end),
    })
}

fn parse_instance_def(c: &mut Cursor) -> Result<InstanceDef, ParseError> {
    let start = c.expect_kw(Kw::Instance)?;
    let (class, _) = parse_class_name(c)?;
    let mut types_v = Vec::new();
    while types::starts_type_atom(c) {
        types_v.push(parse_type_atom(c)?);
    }
    if types_v.is_empty() {
        return Err(c.err("expected instance head type"));
    }
    let context = parse_class_context(c)?;
    let members = if c.at_kw(Kw::Where) {
        parse_local_block(c, Kw::Where)?
    } else {
        Vec::new()
    };
    let end = c
        .toks
        .get(c.pos.saturating_sub(1))
        .map_or(start, |t| t.span);
    Ok(InstanceDef {
        class,
        types: types_v,
        context,
        members,
        span: start.merge(end),
    })
}

fn parse_generic_def(c: &mut Cursor) -> Result<GenericDef, ParseError> {
    let start = c.expect_kw(Kw::Generic)?;
    let (name, _) = c.expect_ident()?;
    let mut vars = Vec::new();
    while c.at_kind(TokenKind::Ident) {
        vars.push(c.bump().text);
    }
    let sig = parse_sig_tail(c, name.clone(), None, start)?;
    let end = sig.span;
    Ok(GenericDef {
        name,
        vars,
        args: sig.args,
        ret: sig.ret,
        span: start.merge(end),
    })
}

fn parse_derive_decl(c: &mut Cursor) -> Result<DeriveDecl, ParseError> {
    let start = c.expect_kw(Kw::Derive)?;
    let (generic, _) = c.expect_ident()?;
    let mut types_v = Vec::new();
    let mut end;
    loop {
        let t = c.expect_kind(TokenKind::CtorIdent)?;
        end = t.span;
        types_v.push(t.text);
        if !c.eat_sym(Sym::Comma) {
            break;
        }
    }
    Ok(DeriveDecl {
        generic,
        types: types_v,
        span: start.merge(end),
    })
}

// ---------------------------------------------------------------------
// Post-parse checks

/// Enforce clause/signature arity agreement throughout the module.
fn validate_module(module: &CleanModule) -> Result<(), ParseError> {
    let mut sigs: HashMap<&str, &FunSig> = HashMap::new();
    for item in &module.items {
        if let Item::FunSig(sig) = item {
            sigs.insert(sig.name.as_str(), sig);
        }
    }
    for item in &module.items {
        match item {
            Item::FunDef(def) => check_fun_def(def, sigs.get(def.name.as_str()).copied())?,
            Item::ClassDef(class) => {
                let mut msigs: HashMap<&str, &FunSig> = HashMap::new();
                for m in &class.members {
                    if let ClassMember::Sig(sig) = m {
                        msigs.insert(sig.name.as_str(), sig);
                    }
                }
                for m in &class.members {
                    if let ClassMember::Def(def) = m {
                        check_fun_def(def, msigs.get(def.name.as_str()).copied())?;
                    }
                }
            }
            Item::InstanceDef(inst) => check_local_defs(&inst.members)?,
            _ => {}
        }
    }
    Ok(())
}

fn check_local_defs(defs: &[LocalDef]) -> Result<(), ParseError> {
    let mut sigs: HashMap<&str, &FunSig> = HashMap::new();
    for def in defs {
        if let LocalDef::Sig(sig) = def {
            sigs.insert(sig.name.as_str(), sig);
        }
    }
    for def in defs {
        if let LocalDef::Fun(f) = def {
            check_fun_def(f, sigs.get(f.name.as_str()).copied())?;
        }
    }
    Ok(())
}

fn check_fun_def(def: &FunDef, sig: Option<&FunSig>) -> Result<(), ParseError> {
    let arity = def.clauses[0].params.len();
    for clause in &def.clauses[1..] {
        if clause.params.len() != arity {
            return Err(ParseError::Syntax {
                message: format!(
                    "this clause of `{}` has {} parameters, but an earlier clause has {}",
                    def.name,
                    clause.params.len(),
                    arity
                ),
                span: clause.span,
            });
        }
    }
    if let Some(sig) = sig {
        // A signature without a top-level arrow (empty args) may still be
        // a parenthesized or quantified function type, so the arity of the
        // definition is unconstrained there.
        let fixed = if sig.args.is_empty() {
            if matches!(sig.ret.shape, Shape::Fun(..) | Shape::Forall { .. }) {
                None
            } else {
                Some(0)
            }
        } else {
            Some(sig.args.len())
        };
        if let Some(expected) = fixed {
            if arity != expected {
                return Err(ParseError::Syntax {
                    message: format!(
                        "`{}` takes {} parameters, but its signature declares {}",
                        def.name, arity, expected
                    ),
                    span: def.span,
                });
            }
        }
    }
    for clause in &def.clauses {
        check_local_defs(&clause.where_defs)?;
        check_local_defs(&clause.with_defs)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
