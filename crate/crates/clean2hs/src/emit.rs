//! Renders the target syntax tree to Haskell source text.
//!
//! Output is canonical and deterministic: pragmas first (sorted, one per
//! line by default), then the module header, imports, and declarations
//! separated by blank lines. Parentheses are the minimal set implied by
//! operator fixities. Signatures stay adjacent to the binding they
//! describe.

use crate::ast::Assoc;
use crate::hs::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PragmaStyle {
    OnePerLine,
    /// All extensions in one `{-# LANGUAGE ... #-}` header, wrapped at
    /// `max_line`.
    Combined,
}

#[derive(Debug, Clone)]
pub struct RenderStyle {
    pub indent_width: usize,
    pub max_line: usize,
    pub pragma_style: PragmaStyle,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            indent_width: 2,
            max_line: 100,
            pragma_style: PragmaStyle::OnePerLine,
        }
    }
}

/// Render a whole module, newline-terminated.
pub fn emit(m: &HsModule, style: &RenderStyle) -> String {
    let mut e = Emitter::new(style);
    e.module(m);
    let mut text = e.out;
    text.truncate(text.trim_end().len());
    text.push('\n');
    text
}

/// Render one declaration without a trailing newline.
pub fn emit_decl(d: &HsDecl, style: &RenderStyle) -> String {
    let mut e = Emitter::new(style);
    e.decl(d, 0);
    e.out
}

/// Render one expression.
pub fn emit_expr(expr: &HsExpr, style: &RenderStyle) -> String {
    let mut e = Emitter::new(style);
    e.expr(expr, 0);
    e.out
}

const PREC_OPERAND: u8 = 1;
const PREC_APP: u8 = 10;
const PREC_RECORD: u8 = 11;
const PREC_ATOM: u8 = 12;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum TyCtx {
    Top,
    BType,
    Atom,
}

struct Emitter<'a> {
    out: String,
    style: &'a RenderStyle,
}

impl<'a> Emitter<'a> {
    fn new(style: &'a RenderStyle) -> Self {
        Emitter {
            out: String::new(),
            style,
        }
    }

    fn push(&mut self, s: &str) {
        self.out.push_str(s);
    }

    fn col(&self) -> usize {
        match self.out.rfind('\n') {
            Some(i) => self.out.len() - i - 1,
            None => self.out.len(),
        }
    }

    fn nl(&mut self, indent: usize) {
        self.out.push('\n');
        for _ in 0..indent {
            self.out.push(' ');
        }
    }

    fn step(&self) -> usize {
        self.style.indent_width
    }

    // ---------------------------------------------------------------
    // Module structure

    fn module(&mut self, m: &HsModule) {
        self.pragmas(&m.pragmas);
        if !m.pragmas.is_empty() {
            self.push("\n");
        }
        self.push("module ");
        self.push(&m.name);
        if let Some(exports) = &m.exports {
            self.push(" (");
            for (i, item) in exports.iter().enumerate() {
                if i > 0 {
                    self.push(", ");
                }
                self.export(item);
            }
            self.push(")");
        }
        self.push(" where");
        for (i, import) in m.imports.iter().enumerate() {
            self.push(if i == 0 { "\n\n" } else { "\n" });
            self.import(import);
        }
        let mut prev: Option<&HsDecl> = None;
        for d in &m.decls {
            if adjacent(prev, d) {
                self.push("\n");
            } else {
                self.push("\n\n");
            }
            self.decl(d, 0);
            prev = Some(d);
        }
    }

    fn pragmas(&mut self, exts: &ExtensionSet) {
        if exts.is_empty() {
            return;
        }
        match self.style.pragma_style {
            PragmaStyle::OnePerLine => {
                for ext in exts.iter() {
                    self.push("{-# LANGUAGE ");
                    self.push(ext.name());
                    self.push(" #-}\n");
                }
            }
            PragmaStyle::Combined => {
                let names: Vec<&str> = exts.iter().map(|e| e.name()).collect();
                let mut line = String::from("{-# LANGUAGE ");
                for (i, name) in names.iter().enumerate() {
                    let tail = if i + 1 == names.len() { name.len() + 4 } else { name.len() + 2 };
                    if i > 0 && line.len() + tail > self.style.max_line {
                        line.push_str(",\n             ");
                    } else if i > 0 {
                        line.push_str(", ");
                    }
                    line.push_str(name);
                }
                line.push_str(" #-}\n");
                self.push(&line);
            }
        }
    }

    fn export(&mut self, item: &HsExport) {
        match item {
            HsExport::Value(n) => {
                if is_alpha_op(n) || !n.chars().next().map_or(false, |c| c.is_ascii_alphabetic()) {
                    // Operator exports need parentheses.
                    if n.chars().next().map_or(false, |c| c.is_ascii_lowercase() || c == '_') {
                        self.push(n);
                    } else {
                        self.push("(");
                        self.push(n);
                        self.push(")");
                    }
                } else {
                    self.push(n);
                }
            }
            HsExport::Type(n) => self.push(n),
            HsExport::TypeWithCtors(n) | HsExport::Class(n) => {
                self.push(n);
                self.push("(..)");
            }
        }
    }

    fn import(&mut self, import: &HsImport) {
        self.push("import ");
        if import.qualified {
            self.push("qualified ");
        }
        self.push(&import.module);
        if let Some(names) = &import.names {
            self.push(" (");
            self.push(&names.join(", "));
            self.push(")");
        }
    }

    // ---------------------------------------------------------------
    // Declarations

    fn decl(&mut self, d: &HsDecl, indent: usize) {
        match d {
            HsDecl::TypeSyn { name, params, ty } => {
                self.push("type ");
                self.head(name, params);
                self.push(" = ");
                self.ty(ty, TyCtx::Top);
            }
            HsDecl::Data {
                name,
                params,
                ctors,
            } => {
                self.push("data ");
                self.head(name, params);
                for (i, ctor) in ctors.iter().enumerate() {
                    self.push(if i == 0 { " = " } else { " | " });
                    self.ctor(ctor);
                }
            }
            HsDecl::Newtype { name, params, ctor } => {
                self.push("newtype ");
                self.head(name, params);
                self.push(" = ");
                self.ctor(ctor);
            }
            HsDecl::Class {
                context,
                name,
                params,
                fundeps,
                members,
            } => {
                self.push("class ");
                self.context(context);
                self.head(name, params);
                for (i, (from, to)) in fundeps.iter().enumerate() {
                    self.push(if i == 0 { " | " } else { ", " });
                    self.push(&from.join(" "));
                    self.push(" -> ");
                    self.push(&to.join(" "));
                }
                self.members(members, indent);
            }
            HsDecl::Instance {
                context,
                class,
                types,
                members,
            } => {
                self.push("instance ");
                self.context(context);
                self.push(class);
                for t in types {
                    self.push(" ");
                    self.ty(t, TyCtx::Atom);
                }
                self.members(members, indent);
            }
            HsDecl::Sig { name, context, ty } => {
                self.binder_name(name);
                self.push(" :: ");
                self.context(context);
                self.ty(ty, TyCtx::Top);
            }
            HsDecl::Fixity { assoc, prec, op } => {
                self.push(match assoc {
                    Assoc::Left => "infixl",
                    Assoc::Right => "infixr",
                    Assoc::None => "infix",
                });
                self.push(&format!(" {prec} "));
                if is_alpha_op(op) {
                    self.push(&format!("`{op}`"));
                } else {
                    self.push(op);
                }
            }
            HsDecl::Bind { name, clauses } => {
                for (i, cl) in clauses.iter().enumerate() {
                    if i > 0 {
                        self.nl(indent);
                    }
                    self.binder_name(name);
                    for p in &cl.params {
                        self.push(" ");
                        self.pattern(p, PREC_ATOM - 1);
                    }
                    self.rhs(&cl.rhs, indent, "=");
                    self.where_block(&cl.where_defs, indent);
                }
            }
            HsDecl::PatBind {
                pat,
                rhs,
                where_defs,
            } => {
                self.pattern(pat, 0);
                self.rhs(rhs, indent, "=");
                self.where_block(where_defs, indent);
            }
            HsDecl::Comment(lines) => {
                for (i, line) in lines.iter().enumerate() {
                    if i > 0 {
                        self.nl(indent);
                    }
                    if line.is_empty() {
                        self.push("--");
                    } else {
                        self.push("-- ");
                        self.push(line);
                    }
                }
            }
        }
    }

    fn head(&mut self, name: &str, params: &[String]) {
        self.push(name);
        for p in params {
            self.push(" ");
            self.push(p);
        }
    }

    /// A defined name on the left of `::` or `=`; operators get wrapped.
    fn binder_name(&mut self, name: &str) {
        let alpha = name
            .chars()
            .next()
            .map_or(false, |c| c.is_ascii_alphabetic() || c == '_');
        if alpha {
            self.push(name);
        } else {
            self.push("(");
            self.push(name);
            self.push(")");
        }
    }

    fn members(&mut self, members: &[HsDecl], indent: usize) {
        if members.is_empty() {
            return;
        }
        self.push(" where");
        let inner = indent + self.step();
        for m in members {
            self.nl(inner);
            self.decl(m, inner);
        }
    }

    fn ctor(&mut self, c: &HsCtor) {
        if !c.forall_vars.is_empty() {
            self.push("forall ");
            self.push(&c.forall_vars.join(" "));
            self.push(". ");
        }
        self.context(&c.context);
        self.push(&c.name);
        match &c.fields {
            HsFields::Positional(args) => {
                for a in args {
                    self.push(" ");
                    if a.strict {
                        self.push("!");
                        self.ty(&a.ty, TyCtx::Atom);
                    } else {
                        self.ty(&a.ty, TyCtx::Atom);
                    }
                }
            }
            HsFields::Record(fields) => {
                self.push(" { ");
                for (i, (name, a)) in fields.iter().enumerate() {
                    if i > 0 {
                        self.push(", ");
                    }
                    self.push(name);
                    self.push(" :: ");
                    if a.strict {
                        self.push("!");
                    }
                    self.ty(&a.ty, TyCtx::Top);
                }
                self.push(" }");
            }
        }
    }

    fn context(&mut self, cs: &[HsConstraint]) {
        match cs {
            [] => {}
            [only] => {
                self.constraint(only);
                self.push(" => ");
            }
            _ => {
                self.push("(");
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        self.push(", ");
                    }
                    self.constraint(c);
                }
                self.push(") => ");
            }
        }
    }

    fn constraint(&mut self, c: &HsConstraint) {
        self.push(&c.class);
        for t in &c.args {
            self.push(" ");
            self.ty(t, TyCtx::Atom);
        }
    }

    /// Right-hand side of an equation (`=`) or case alternative (`->`).
    fn rhs(&mut self, rhs: &HsRhs, indent: usize, intro: &str) {
        match rhs {
            HsRhs::Simple(e) => {
                self.push(" ");
                self.push(intro);
                self.push(" ");
                self.expr(e, 0);
            }
            HsRhs::Guarded(alts) => {
                for (guard, body) in alts {
                    self.nl(indent + self.step());
                    self.push("| ");
                    self.expr(guard, PREC_OPERAND);
                    self.push(" ");
                    self.push(intro);
                    self.push(" ");
                    self.expr(body, 0);
                }
            }
        }
    }

    fn where_block(&mut self, defs: &[HsDecl], indent: usize) {
        if defs.is_empty() {
            return;
        }
        self.nl(indent + self.step());
        self.push("where");
        let inner = indent + 2 * self.step();
        for d in defs {
            self.nl(inner);
            self.decl(d, inner);
        }
    }

    // ---------------------------------------------------------------
    // Types

    fn ty(&mut self, t: &HsType, ctx: TyCtx) {
        match t {
            HsType::Var(n) => self.push(n),
            HsType::Con(n, args) => {
                if args.is_empty() {
                    self.push(n);
                } else {
                    let parens = ctx >= TyCtx::Atom;
                    if parens {
                        self.push("(");
                    }
                    self.push(n);
                    for a in args {
                        self.push(" ");
                        self.ty(a, TyCtx::Atom);
                    }
                    if parens {
                        self.push(")");
                    }
                }
            }
            HsType::Fun(l, r) => {
                let parens = ctx >= TyCtx::BType;
                if parens {
                    self.push("(");
                }
                self.ty(l, TyCtx::BType);
                self.push(" -> ");
                self.ty(r, TyCtx::Top);
                if parens {
                    self.push(")");
                }
            }
            HsType::Tuple(elems) => {
                self.push("(");
                for (i, e) in elems.iter().enumerate() {
                    if i > 0 {
                        self.push(", ");
                    }
                    self.ty(e, TyCtx::Top);
                }
                self.push(")");
            }
            HsType::List(e) => {
                self.push("[");
                self.ty(e, TyCtx::Top);
                self.push("]");
            }
            HsType::Forall {
                vars,
                context,
                body,
            } => {
                let parens = ctx >= TyCtx::BType;
                if parens {
                    self.push("(");
                }
                self.push("forall ");
                self.push(&vars.join(" "));
                self.push(". ");
                self.context(context);
                self.ty(body, TyCtx::Top);
                if parens {
                    self.push(")");
                }
            }
        }
    }

    // ---------------------------------------------------------------
    // Patterns

    fn pat_prec(&self, p: &HsPattern) -> u8 {
        match p {
            HsPattern::Con(_, args) if !args.is_empty() => PREC_APP,
            HsPattern::Cons(..) => 5,
            HsPattern::Neg(_) => 6,
            HsPattern::Bang(_) => PREC_RECORD,
            _ => PREC_ATOM,
        }
    }

    fn pattern(&mut self, p: &HsPattern, ctx: u8) {
        if self.pat_prec(p) < ctx {
            self.push("(");
            self.pattern_inner(p);
            self.push(")");
        } else {
            self.pattern_inner(p);
        }
    }

    fn pattern_inner(&mut self, p: &HsPattern) {
        match p {
            HsPattern::Wild => self.push("_"),
            HsPattern::Var(n) => self.push(n),
            HsPattern::As(n, inner) => {
                self.push(n);
                self.push("@");
                self.pattern(inner, PREC_ATOM);
            }
            HsPattern::Con(n, args) => {
                self.push(n);
                for a in args {
                    self.push(" ");
                    self.pattern(a, PREC_APP + 1);
                }
            }
            HsPattern::Lit(l) => self.lit(l),
            HsPattern::Neg(l) => {
                self.push("-");
                self.lit(l);
            }
            HsPattern::Tuple(elems) => {
                self.push("(");
                for (i, e) in elems.iter().enumerate() {
                    if i > 0 {
                        self.push(", ");
                    }
                    self.pattern(e, 0);
                }
                self.push(")");
            }
            HsPattern::List(elems) => {
                self.push("[");
                for (i, e) in elems.iter().enumerate() {
                    if i > 0 {
                        self.push(", ");
                    }
                    self.pattern(e, 0);
                }
                self.push("]");
            }
            HsPattern::Cons(h, t) => {
                self.pattern(h, 6);
                self.push(" : ");
                self.pattern(t, 5);
            }
            HsPattern::Record { ctor, fields } => {
                self.push(ctor);
                self.push(" {");
                for (i, (name, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        self.push(",");
                    }
                    self.push(" ");
                    self.push(name);
                    if let Some(v) = value {
                        self.push(" = ");
                        self.pattern(v, 0);
                    }
                }
                self.push(" }");
            }
            HsPattern::Bang(inner) => {
                self.push("!");
                self.pattern(inner, PREC_ATOM);
            }
        }
    }

    // ---------------------------------------------------------------
    // Expressions

    fn expr_prec(&self, e: &HsExpr) -> u8 {
        match e {
            HsExpr::Case { .. }
            | HsExpr::Let { .. }
            | HsExpr::Lambda { .. }
            | HsExpr::If { .. }
            | HsExpr::Annot { .. } => 0,
            HsExpr::BinOp { op, .. } => hs_fixity(op).prec,
            HsExpr::Neg(_) => 6,
            HsExpr::App(..) => PREC_APP,
            HsExpr::RecordCon { .. } | HsExpr::RecordUpdate { .. } => PREC_RECORD,
            _ => PREC_ATOM,
        }
    }

    fn expr(&mut self, e: &HsExpr, ctx: u8) {
        if self.expr_prec(e) < ctx {
            self.push("(");
            self.expr_inner(e);
            self.push(")");
        } else {
            self.expr_inner(e);
        }
    }

    fn expr_inner(&mut self, e: &HsExpr) {
        match e {
            HsExpr::Var(n) => self.var_ref(n),
            HsExpr::Con(n) => self.push(n),
            HsExpr::Lit(l) => self.lit(l),
            HsExpr::App(head, args) => {
                self.expr(head, PREC_RECORD);
                for a in args {
                    self.push(" ");
                    self.expr(a, PREC_RECORD);
                }
            }
            HsExpr::BinOp { op, lhs, rhs } => {
                let f = hs_fixity(op);
                let lhs_ctx = match f.assoc {
                    Assoc::Left => f.prec,
                    _ => f.prec + 1,
                }
                .max(PREC_OPERAND);
                let rhs_ctx = match f.assoc {
                    Assoc::Right => f.prec,
                    _ => f.prec + 1,
                }
                .max(PREC_OPERAND);
                self.expr(lhs, lhs_ctx);
                if is_alpha_op(op) {
                    self.push(&format!(" `{op}` "));
                } else {
                    self.push(&format!(" {op} "));
                }
                self.expr(rhs, rhs_ctx);
            }
            HsExpr::Neg(x) => {
                self.push("-");
                self.expr(x, 7);
            }
            HsExpr::If {
                cond,
                then_branch,
                else_branch,
            } => {
                self.push("if ");
                self.expr(cond, PREC_OPERAND);
                self.push(" then ");
                self.expr(then_branch, PREC_OPERAND);
                self.push(" else ");
                self.expr(else_branch, 0);
            }
            HsExpr::Case { scrutinee, alts } => {
                let base = self.col();
                self.push("case ");
                self.expr(scrutinee, PREC_OPERAND);
                self.push(" of");
                for alt in alts {
                    self.nl(base + self.step());
                    self.pattern(&alt.pat, 0);
                    self.rhs(&alt.rhs, base + self.step(), "->");
                    self.where_block(&alt.where_defs, base + self.step());
                }
            }
            HsExpr::Let { defs, body } => {
                let base = self.col();
                if let [only] = defs.as_slice() {
                    if let Some(text) = self.inline_def(only) {
                        self.push("let ");
                        self.push(&text);
                        self.push(" in ");
                        self.expr(body, 0);
                        return;
                    }
                }
                self.push("let ");
                let def_col = base + 4;
                for (i, d) in defs.iter().enumerate() {
                    if i > 0 {
                        self.nl(def_col);
                    }
                    self.decl(d, def_col);
                }
                self.nl(base);
                self.push("in ");
                self.expr(body, 0);
            }
            HsExpr::Lambda { params, body } => {
                self.push("\\");
                for (i, p) in params.iter().enumerate() {
                    if i > 0 {
                        self.push(" ");
                    }
                    self.pattern(p, PREC_ATOM - 1);
                }
                self.push(" -> ");
                self.expr(body, 0);
            }
            HsExpr::Tuple(elems) => {
                self.push("(");
                self.comma_exprs(elems);
                self.push(")");
            }
            HsExpr::List(elems) => {
                self.push("[");
                self.comma_exprs(elems);
                self.push("]");
            }
            HsExpr::Range { from, then, to } => {
                self.push("[");
                self.expr(from, PREC_OPERAND);
                if let Some(t) = then {
                    self.push(", ");
                    self.expr(t, PREC_OPERAND);
                }
                self.push(" ..");
                if let Some(t) = to {
                    self.push(" ");
                    self.expr(t, PREC_OPERAND);
                }
                self.push("]");
            }
            HsExpr::ListComp { head, branches } => {
                self.push("[");
                self.expr(head, PREC_OPERAND);
                for branch in branches {
                    self.push(" | ");
                    for (i, q) in branch.iter().enumerate() {
                        if i > 0 {
                            self.push(", ");
                        }
                        match q {
                            HsQual::Gen(p, src) => {
                                self.pattern(p, 0);
                                self.push(" <- ");
                                self.expr(src, PREC_OPERAND);
                            }
                            HsQual::Guard(g) => self.expr(g, PREC_OPERAND),
                        }
                    }
                }
                self.push("]");
            }
            HsExpr::RecordCon { ctor, fields } => {
                self.push(ctor);
                self.push(" {");
                for (i, (name, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        self.push(",");
                    }
                    self.push(" ");
                    self.push(name);
                    if let Some(v) = value {
                        self.push(" = ");
                        self.expr(v, PREC_OPERAND);
                    }
                }
                self.push(" }");
            }
            HsExpr::RecordUpdate { base, fields } => {
                self.expr(base, PREC_ATOM);
                self.push(" {");
                for (i, (name, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        self.push(",");
                    }
                    self.push(" ");
                    self.push(name);
                    self.push(" = ");
                    self.expr(value, PREC_OPERAND);
                }
                self.push(" }");
            }
            HsExpr::Annot { expr, ty } => {
                self.expr(expr, PREC_OPERAND);
                self.push(" :: ");
                self.ty(ty, TyCtx::Top);
            }
        }
    }

    /// A variable reference; operator names used as atoms get sections.
    fn var_ref(&mut self, n: &str) {
        let alpha = n
            .chars()
            .next()
            .map_or(false, |c| c.is_ascii_alphabetic() || c == '_');
        if alpha {
            self.push(n);
        } else {
            self.push("(");
            self.push(n);
            self.push(")");
        }
    }

    /// A definition simple enough for an inline `let d in e`.
    fn inline_def(&mut self, d: &HsDecl) -> Option<String> {
        let simple = match d {
            HsDecl::Bind { clauses, .. } => {
                clauses.len() == 1
                    && matches!(clauses[0].rhs, HsRhs::Simple(_))
                    && clauses[0].where_defs.is_empty()
            }
            HsDecl::PatBind {
                rhs, where_defs, ..
            } => matches!(rhs, HsRhs::Simple(_)) && where_defs.is_empty(),
            _ => false,
        };
        if !simple {
            return None;
        }
        let saved = std::mem::take(&mut self.out);
        self.decl(d, 0);
        let text = std::mem::replace(&mut self.out, saved);
        (!text.contains('\n')).then_some(text)
    }

    fn comma_exprs(&mut self, elems: &[HsExpr]) {
        for (i, e) in elems.iter().enumerate() {
            if i > 0 {
                self.push(", ");
            }
            self.expr(e, PREC_OPERAND);
        }
    }

    fn lit(&mut self, l: &HsLit) {
        match l {
            HsLit::Int(n) => self.push(&n.to_string()),
            HsLit::Real(s) => self.push(s),
            HsLit::Char(s) => self.push(&format!("'{s}'")),
            HsLit::Str(s) => self.push(&format!("\"{s}\"")),
        }
    }
}

/// Whether two consecutive declarations belong together without a blank
/// line: a signature or fixity line directly above its binding.
fn adjacent(prev: Option<&HsDecl>, next: &HsDecl) -> bool {
    let Some(prev) = prev else { return false };
    match (prev, next) {
        (HsDecl::Sig { name, .. }, HsDecl::Bind { name: bind, .. }) => name == bind,
        (HsDecl::Fixity { op, .. }, HsDecl::Sig { name, .. })
        | (HsDecl::Fixity { op, .. }, HsDecl::Bind { name, .. }) => op == name,
        (HsDecl::Comment(_), _) => true,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hs::HsExpr::*;

    fn style() -> RenderStyle {
        RenderStyle::default()
    }

    fn var(n: &str) -> HsExpr {
        Var(n.to_string())
    }

    fn int(n: i64) -> HsExpr {
        Lit(HsLit::Int(n))
    }

    fn bin(op: &str, l: HsExpr, r: HsExpr) -> HsExpr {
        BinOp {
            op: op.to_string(),
            lhs: Box::new(l),
            rhs: Box::new(r),
        }
    }

    #[test]
    fn cons_chain_spaces_operators() {
        let e = bin(":", var("x"), var("xs"));
        assert_eq!(emit_expr(&e, &style()), "x : xs");
    }

    #[test]
    fn application_parenthesizes_only_arguments() {
        let e = App(
            Box::new(var("f")),
            vec![App(Box::new(var("g")), vec![var("x")])],
        );
        assert_eq!(emit_expr(&e, &style()), "f (g x)");
    }

    #[test]
    fn operator_precedence_drives_parentheses() {
        let sum = bin("+", int(1), bin("*", int(2), int(3)));
        assert_eq!(emit_expr(&sum, &style()), "1 + 2 * 3");
        let grouped = bin("*", bin("+", int(1), int(2)), int(3));
        assert_eq!(emit_expr(&grouped, &style()), "(1 + 2) * 3");
        let update_then_index = bin(
            "!",
            bin("//", var("a"), List(vec![Tuple(vec![int(0), int(9)])])),
            int(0),
        );
        assert_eq!(emit_expr(&update_then_index, &style()), "a // [(0, 9)] ! 0");
    }

    #[test]
    fn alpha_operators_render_in_backticks() {
        let e = bin("mod", var("x"), int(2));
        assert_eq!(emit_expr(&e, &style()), "x `mod` 2");
    }

    #[test]
    fn right_associative_operators_skip_redundant_parens() {
        let e = bin(":", var("x"), bin(":", var("y"), var("ys")));
        assert_eq!(emit_expr(&e, &style()), "x : y : ys");
        let left = bin(":", bin(":", var("x"), var("y")), var("ys"));
        assert_eq!(emit_expr(&left, &style()), "(x : y) : ys");
    }

    #[test]
    fn record_update_binds_tighter_than_application() {
        let e = App(
            Box::new(var("f")),
            vec![RecordUpdate {
                base: Box::new(var("r")),
                fields: vec![("x".to_string(), int(1))],
            }],
        );
        assert_eq!(emit_expr(&e, &style()), "f r { x = 1 }");
    }

    #[test]
    fn lambda_tuple_body() {
        let e = Lambda {
            params: vec![HsPattern::Var("v".to_string())],
            body: Box::new(Tuple(vec![
                App(Box::new(var("f")), vec![var("v")]),
                var("v"),
            ])),
        };
        assert_eq!(emit_expr(&e, &style()), "\\v -> (f v, v)");
    }

    #[test]
    fn comprehension_and_range_forms() {
        let comp = ListComp {
            head: Box::new(var("e")),
            branches: vec![vec![
                HsQual::Gen(HsPattern::Var("e".to_string()), var("xs")),
                HsQual::Guard(App(Box::new(var("p")), vec![var("e")])),
            ]],
        };
        assert_eq!(emit_expr(&comp, &style()), "[e | e <- xs, p e]");
        let parallel = ListComp {
            head: Box::new(var("l")),
            branches: vec![
                vec![HsQual::Gen(HsPattern::Var("l".to_string()), var("xs"))],
                vec![HsQual::Gen(HsPattern::Var("r".to_string()), var("ys"))],
            ],
        };
        assert_eq!(emit_expr(&parallel, &style()), "[l | l <- xs | r <- ys]");
        let range = Range {
            from: Box::new(int(0)),
            then: None,
            to: None,
        };
        assert_eq!(emit_expr(&range, &style()), "[0 ..]");
    }

    #[test]
    fn case_lays_out_alternatives() {
        let e = Case {
            scrutinee: Box::new(var("x")),
            alts: vec![
                HsAlt {
                    pat: HsPattern::Con("Just".to_string(), vec![HsPattern::Var("v".into())]),
                    rhs: HsRhs::Simple(var("v")),
                    where_defs: vec![],
                },
                HsAlt {
                    pat: HsPattern::Con("Nothing".to_string(), vec![]),
                    rhs: HsRhs::Simple(int(0)),
                    where_defs: vec![],
                },
            ],
        };
        assert_eq!(
            emit_expr(&e, &style()),
            "case x of\n  Just v -> v\n  Nothing -> 0"
        );
    }

    #[test]
    fn module_header_and_pragmas_are_ordered() {
        let m = HsModule {
            name: "M".to_string(),
            exports: Some(vec![
                HsExport::Value("f".to_string()),
                HsExport::TypeWithCtors("T".to_string()),
                HsExport::Type("U".to_string()),
            ]),
            pragmas: [Extension::RankNTypes, Extension::BangPatterns]
                .into_iter()
                .collect(),
            imports: vec![HsImport {
                module: "Data.Array".to_string(),
                qualified: false,
                names: None,
            }],
            decls: vec![],
        };
        let text = emit(&m, &style());
        assert_eq!(
            text,
            "{-# LANGUAGE BangPatterns #-}\n{-# LANGUAGE RankNTypes #-}\n\n\
             module M (f, T(..), U) where\n\nimport Data.Array\n"
        );
    }

    #[test]
    fn plain_module_is_one_line() {
        let m = HsModule {
            name: "M".to_string(),
            exports: None,
            pragmas: ExtensionSet::new(),
            imports: vec![],
            decls: vec![],
        };
        assert_eq!(emit(&m, &style()), "module M where\n");
    }

    #[test]
    fn signature_stays_adjacent_to_binding() {
        let m = HsModule {
            name: "M".to_string(),
            exports: None,
            pragmas: ExtensionSet::new(),
            imports: vec![],
            decls: vec![
                HsDecl::Sig {
                    name: "f".to_string(),
                    context: vec![],
                    ty: HsType::Fun(Box::new(HsType::con0("Int")), Box::new(HsType::con0("Int"))),
                },
                HsDecl::Bind {
                    name: "f".to_string(),
                    clauses: vec![HsClause {
                        params: vec![HsPattern::Var("x".to_string())],
                        rhs: HsRhs::Simple(var("x")),
                        where_defs: vec![],
                    }],
                },
            ],
        };
        assert_eq!(
            emit(&m, &style()),
            "module M where\n\nf :: Int -> Int\nf x = x\n"
        );
    }

    #[test]
    fn guards_and_where_layout() {
        let d = HsDecl::Bind {
            name: "sign".to_string(),
            clauses: vec![HsClause {
                params: vec![HsPattern::Var("x".to_string())],
                rhs: HsRhs::Guarded(vec![
                    (bin(">", var("x"), var("lo")), int(1)),
                    (var("otherwise"), int(0)),
                ]),
                where_defs: vec![HsDecl::Bind {
                    name: "lo".to_string(),
                    clauses: vec![HsClause {
                        params: vec![],
                        rhs: HsRhs::Simple(int(0)),
                        where_defs: vec![],
                    }],
                }],
            }],
        };
        assert_eq!(
            emit_decl(&d, &style()),
            "sign x\n  | x > lo = 1\n  | otherwise = 0\n  where\n    lo = 0"
        );
    }

    #[test]
    fn data_and_class_declarations() {
        let d = HsDecl::Data {
            name: "T".to_string(),
            params: vec![],
            ctors: vec![HsCtor {
                forall_vars: vec!["t".to_string()],
                context: vec![HsConstraint {
                    class: "C".to_string(),
                    args: vec![HsType::Var("t".to_string())],
                }],
                name: "Box".to_string(),
                fields: HsFields::Positional(vec![HsBangType::lazy(HsType::Var("t".to_string()))]),
            }],
        };
        assert_eq!(emit_decl(&d, &style()), "data T = forall t. C t => Box t");

        let c = HsDecl::Class {
            context: vec![],
            name: "C".to_string(),
            params: vec!["s".to_string(), "m".to_string()],
            fundeps: vec![(vec!["m".to_string()], vec!["s".to_string()])],
            members: vec![HsDecl::Sig {
                name: "get".to_string(),
                context: vec![],
                ty: HsType::Fun(
                    Box::new(HsType::Var("s".to_string())),
                    Box::new(HsType::Con("m".to_string(), vec![HsType::Var("s".to_string())])),
                ),
            }],
        };
        assert_eq!(
            emit_decl(&c, &style()),
            "class C s m | m -> s where\n  get :: s -> m s"
        );
    }

    #[test]
    fn record_declaration_matches_target_form() {
        let d = HsDecl::Data {
            name: "R".to_string(),
            params: vec![],
            ctors: vec![HsCtor {
                forall_vars: vec![],
                context: vec![],
                name: "R".to_string(),
                fields: HsFields::Record(vec![(
                    "f".to_string(),
                    HsBangType::lazy(HsType::Var("t".to_string())),
                )]),
            }],
        };
        assert_eq!(emit_decl(&d, &style()), "data R = R { f :: t }");
    }

    #[test]
    fn emits_are_deterministic() {
        let e = Case {
            scrutinee: Box::new(var("x")),
            alts: vec![HsAlt {
                pat: HsPattern::Wild,
                rhs: HsRhs::Simple(int(1)),
                where_defs: vec![],
            }],
        };
        assert_eq!(emit_expr(&e, &style()), emit_expr(&e, &style()));
    }

    #[test]
    fn combined_pragma_style_wraps_at_max_line() {
        let m = HsModule {
            name: "M".to_string(),
            exports: None,
            pragmas: Extension::ALL.into_iter().collect(),
            imports: vec![],
            decls: vec![],
        };
        let narrow = RenderStyle {
            max_line: 60,
            pragma_style: PragmaStyle::Combined,
            ..RenderStyle::default()
        };
        let text = emit(&m, &narrow);
        let header: Vec<&str> = text.lines().take_while(|l| !l.is_empty()).collect();
        assert!(header.len() > 1, "expected wrapping:\n{text}");
        assert!(header.iter().all(|l| l.len() <= 60), "{text}");
        assert!(text.contains("BangPatterns"));
        assert!(text.ends_with("module M where\n"));
    }
}
