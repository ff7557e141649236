//! Extension demands, computed from the finished target tree.
//!
//! The pragma header is whatever this walk finds and nothing else, so a
//! module that uses no extended feature gets no pragmas at all.

use crate::hs::{
    Extension, ExtensionSet, HsClause, HsConstraint, HsCtor, HsDecl, HsExpr,
    HsLit, HsModule, HsPattern, HsQual, HsRhs, HsType,
};

/// The extensions a module's declarations demand. String literals only
/// demand `OverloadedStrings` when the module imports `Data.Text`.
pub fn required_extensions(m: &HsModule) -> ExtensionSet {
    let mut walk = Walk::default();
    for d in &m.decls {
        walk.decl(d);
    }
    if walk.string_lit && m.imports.iter().any(|i| i.module == "Data.Text") {
        walk.set.insert(Extension::OverloadedStrings);
    }
    walk.set
}

/// Demands of a single declaration, without the module-level string rule.
pub(crate) fn decl_demands(d: &HsDecl) -> ExtensionSet {
    let mut walk = Walk::default();
    walk.decl(d);
    walk.set
}

/// Demands of a single expression, without the module-level string rule.
pub(crate) fn expr_demands(e: &HsExpr) -> ExtensionSet {
    let mut walk = Walk::default();
    walk.expr(e);
    walk.set
}

#[derive(Default)]
struct Walk {
    set: ExtensionSet,
    string_lit: bool,
}

impl Walk {
    fn decl(&mut self, d: &HsDecl) {
        match d {
            HsDecl::TypeSyn { ty, .. } => self.ty(ty),
            HsDecl::Data { ctors, .. } => {
                for ctor in ctors {
                    self.ctor(ctor);
                }
            }
            HsDecl::Newtype { ctor, .. } => self.ctor(ctor),
            HsDecl::Class {
                context,
                params,
                fundeps,
                members,
                ..
            } => {
                if params.len() > 1 {
                    self.set.insert(Extension::MultiParamTypeClasses);
                }
                if !fundeps.is_empty() {
                    self.set.insert(Extension::FunctionalDependencies);
                }
                for c in context {
                    self.constraint(c);
                }
                for m in members {
                    self.decl(m);
                }
            }
            HsDecl::Instance {
                context,
                types,
                members,
                ..
            } => {
                if types.len() > 1 {
                    self.set.insert(Extension::MultiParamTypeClasses);
                }
                for c in context {
                    self.constraint(c);
                }
                for t in types {
                    self.ty(t);
                }
                for m in members {
                    self.decl(m);
                }
            }
            HsDecl::Sig { context, ty, .. } => {
                for c in context {
                    self.constraint(c);
                }
                self.ty(ty);
            }
            HsDecl::Fixity { .. } | HsDecl::Comment(_) => {}
            HsDecl::Bind { clauses, .. } => {
                for cl in clauses {
                    self.clause(cl);
                }
            }
            HsDecl::PatBind {
                pat,
                rhs,
                where_defs,
            } => {
                self.pattern(pat);
                self.rhs(rhs);
                for d in where_defs {
                    self.decl(d);
                }
            }
        }
    }

    fn ctor(&mut self, ctor: &HsCtor) {
        if !ctor.forall_vars.is_empty() {
            self.set.insert(Extension::ExistentialQuantification);
        }
        for c in &ctor.context {
            self.constraint(c);
        }
        match &ctor.fields {
            crate::hs::HsFields::Positional(args) => {
                for a in args {
                    self.ty(&a.ty);
                }
            }
            crate::hs::HsFields::Record(fields) => {
                for (_, a) in fields {
                    self.ty(&a.ty);
                }
            }
        }
    }

    fn clause(&mut self, cl: &HsClause) {
        for p in &cl.params {
            self.pattern(p);
        }
        self.rhs(&cl.rhs);
        for d in &cl.where_defs {
            self.decl(d);
        }
    }

    fn rhs(&mut self, rhs: &HsRhs) {
        match rhs {
            HsRhs::Simple(e) => self.expr(e),
            HsRhs::Guarded(alts) => {
                for (g, e) in alts {
                    self.expr(g);
                    self.expr(e);
                }
            }
        }
    }

    fn pattern(&mut self, p: &HsPattern) {
        match p {
            HsPattern::Wild | HsPattern::Var(_) | HsPattern::Neg(_) => {}
            HsPattern::Lit(l) => self.lit(l),
            HsPattern::As(_, inner) => self.pattern(inner),
            HsPattern::Con(_, args) | HsPattern::Tuple(args) | HsPattern::List(args) => {
                for a in args {
                    self.pattern(a);
                }
            }
            HsPattern::Cons(head, tail) => {
                self.pattern(head);
                self.pattern(tail);
            }
            HsPattern::Record { fields, .. } => {
                for (_, value) in fields {
                    match value {
                        Some(inner) => self.pattern(inner),
                        None => {
                            self.set.insert(Extension::NamedFieldPuns);
                        }
                    }
                }
            }
            HsPattern::Bang(inner) => {
                self.set.insert(Extension::BangPatterns);
                self.pattern(inner);
            }
        }
    }

    fn expr(&mut self, e: &HsExpr) {
        match e {
            HsExpr::Var(_) | HsExpr::Con(_) => {}
            HsExpr::Lit(l) => self.lit(l),
            HsExpr::App(head, args) => {
                self.expr(head);
                for a in args {
                    self.expr(a);
                }
            }
            HsExpr::BinOp { lhs, rhs, .. } => {
                self.expr(lhs);
                self.expr(rhs);
            }
            HsExpr::Neg(x) => self.expr(x),
            HsExpr::If {
                cond,
                then_branch,
                else_branch,
            } => {
                self.expr(cond);
                self.expr(then_branch);
                self.expr(else_branch);
            }
            HsExpr::Case { scrutinee, alts } => {
                self.expr(scrutinee);
                for alt in alts {
                    self.pattern(&alt.pat);
                    self.rhs(&alt.rhs);
                    for d in &alt.where_defs {
                        self.decl(d);
                    }
                }
            }
            HsExpr::Let { defs, body } => {
                for d in defs {
                    self.decl(d);
                }
                self.expr(body);
            }
            HsExpr::Lambda { params, body } => {
                for p in params {
                    self.pattern(p);
                }
                self.expr(body);
            }
            HsExpr::Tuple(elems) | HsExpr::List(elems) => {
                for e in elems {
                    self.expr(e);
                }
            }
            HsExpr::Range { from, then, to } => {
                self.expr(from);
                if let Some(t) = then {
                    self.expr(t);
                }
                if let Some(t) = to {
                    self.expr(t);
                }
            }
            HsExpr::ListComp { head, branches } => {
                if branches.len() > 1 {
                    self.set.insert(Extension::ParallelListComp);
                }
                self.expr(head);
                for branch in branches {
                    for q in branch {
                        match q {
                            HsQual::Gen(pat, src) => {
                                self.pattern(pat);
                                self.expr(src);
                            }
                            HsQual::Guard(g) => self.expr(g),
                        }
                    }
                }
            }
            HsExpr::RecordCon { fields, .. } => {
                for (_, value) in fields {
                    match value {
                        Some(v) => self.expr(v),
                        None => {
                            self.set.insert(Extension::NamedFieldPuns);
                        }
                    }
                }
            }
            HsExpr::RecordUpdate { base, fields } => {
                self.expr(base);
                for (_, v) in fields {
                    self.expr(v);
                }
            }
            HsExpr::Annot { expr, ty } => {
                self.expr(expr);
                self.ty(ty);
            }
        }
    }

    fn ty(&mut self, t: &HsType) {
        match t {
            HsType::Var(_) => {}
            HsType::Con(_, args) | HsType::Tuple(args) => {
                for a in args {
                    self.ty(a);
                }
            }
            HsType::Fun(a, b) => {
                self.ty(a);
                self.ty(b);
            }
            HsType::List(e) => self.ty(e),
            HsType::Forall {
                context, body, ..
            } => {
                self.set.insert(Extension::RankNTypes);
                for c in context {
                    self.constraint(c);
                }
                self.ty(body);
            }
        }
    }

    fn constraint(&mut self, c: &HsConstraint) {
        for a in &c.args {
            self.ty(a);
        }
    }

    fn lit(&mut self, l: &HsLit) {
        if matches!(l, HsLit::Str(_)) {
            self.string_lit = true;
        }
    }
}
