//! Value-level translation: expressions, patterns, clauses, and the
//! rewrite of let-before chains into where-bindings with capture-avoiding
//! renames.

use std::collections::{BTreeMap, BTreeSet};

use super::{FreshNameSupply, ParallelMode, RecordMatch, StringType, Translator};
use crate::ast::*;
use crate::diag::{rules, Diagnostic};
use crate::hs::{
    HsAlt, HsClause, HsDecl, HsExpr, HsLit, HsPattern, HsQual, HsRhs,
};
use crate::span::Span;

/// Scope for translating one clause: the fresh-name supply plus the
/// renaming built up by let-before steps and pun expansion. Names bound
/// by inner patterns mask outer renames with identity entries.
pub(crate) struct ClauseCx<'s> {
    pub(crate) supply: &'s mut FreshNameSupply,
    subst: Vec<(String, String)>,
}

impl<'s> ClauseCx<'s> {
    pub(crate) fn new(supply: &'s mut FreshNameSupply) -> Self {
        ClauseCx {
            supply,
            subst: Vec::new(),
        }
    }

    fn rename_of(&self, name: &str) -> String {
        self.subst
            .iter()
            .rev()
            .find(|(from, _)| from == name)
            .map(|(_, to)| to.clone())
            .unwrap_or_else(|| name.to_string())
    }

    fn rename(&mut self, from: &str, to: &str) {
        self.subst.push((from.to_string(), to.to_string()));
    }

    fn mask(&mut self, name: &str) {
        self.subst.push((name.to_string(), name.to_string()));
    }

    fn mark(&self) -> usize {
        self.subst.len()
    }

    fn reset(&mut self, mark: usize) {
        self.subst.truncate(mark);
    }

    /// A binder for a generated lambda or index variable: the plain base
    /// name when nothing in scope uses it, a supply-generated one
    /// otherwise.
    fn binder(&mut self, base: &str) -> String {
        self.supply.preferred(base)
    }
}

impl FreshNameSupply {
    /// The base name itself when free, else a fresh `<base>'<n>`.
    pub fn preferred(&mut self, base: &str) -> String {
        if self.reserved.insert(base.to_string()) {
            base.to_string()
        } else {
            self.fresh(base)
        }
    }
}

impl Translator<'_> {
    // -----------------------------------------------------------------
    // Function definitions and clauses

    pub(crate) fn fun_def(&mut self, d: &FunDef, strict: &[bool]) -> HsDecl {
        if let Some(decl) = self.dynamic_fun(d) {
            return decl;
        }
        let name = self.map_op(&d.name);
        HsDecl::Bind {
            clauses: d.clauses.iter().map(|cl| self.clause(cl, strict)).collect(),
            name,
        }
    }

    fn clause(&mut self, cl: &Clause, strict: &[bool]) -> HsClause {
        let mut reserved = clause_names(cl);
        reserved.extend(self.top_names.iter().cloned());
        let mut supply = FreshNameSupply::with_reserved(reserved);
        self.clause_with_supply(cl, strict, &mut supply)
    }

    pub(crate) fn clause_with_supply(
        &mut self,
        cl: &Clause,
        strict: &[bool],
        supply: &mut FreshNameSupply,
    ) -> HsClause {
        let mut cx = ClauseCx::new(supply);
        let mut params: Vec<HsPattern> = cl
            .params
            .iter()
            .map(|p| self.bind_pat(p, &mut cx, &BTreeMap::new()))
            .collect();
        for (i, p) in params.iter_mut().enumerate() {
            if strict.get(i) == Some(&true) && !self.opts.no_bang {
                let inner = std::mem::replace(p, HsPattern::Wild);
                *p = HsPattern::Bang(Box::new(inner));
            }
        }

        // Names the let-before rewrite must not rebind directly.
        let mut in_use: BTreeSet<String> = cl.params.iter().flat_map(pattern_vars).collect();
        for d in cl.where_defs.iter().chain(&cl.with_defs) {
            in_use.extend(local_def_names(d));
        }

        let bound_params = cx.mark();
        let (rhs, generated) = self.clause_body(&cl.body, &mut cx, &mut in_use);

        // Source where/with definitions are scoped outside the chain, so
        // they translate without the chain's renaming.
        cx.reset(bound_params);
        let mut where_defs = generated;
        where_defs.extend(self.local_defs(&cl.with_defs, &mut cx));
        where_defs.extend(self.local_defs(&cl.where_defs, &mut cx));
        HsClause {
            params,
            rhs,
            where_defs,
        }
    }

    /// Translate a clause or alternative body. Let-before steps become
    /// where-bindings, returned separately.
    fn clause_body(
        &mut self,
        body: &ClauseBody,
        cx: &mut ClauseCx,
        in_use: &mut BTreeSet<String>,
    ) -> (HsRhs, Vec<HsDecl>) {
        match body {
            ClauseBody::Simple(e) => (HsRhs::Simple(self.expr(e, cx)), Vec::new()),
            ClauseBody::Guarded(alts) => {
                let pairs = alts
                    .iter()
                    .map(|alt| {
                        let guard = match &alt.guard {
                            Some(g) => self.expr(g, cx),
                            None => HsExpr::Var("otherwise".to_string()),
                        };
                        (guard, self.body_to_expr(&alt.body, cx))
                    })
                    .collect();
                (HsRhs::Guarded(pairs), Vec::new())
            }
            ClauseBody::LetBefore { steps, rest } => {
                let bindings = self.let_before_where(steps, cx, in_use);
                let (rhs, more) = self.clause_body(rest, cx, in_use);
                let mut all = bindings;
                all.extend(more);
                (rhs, all)
            }
        }
    }

    /// A body in expression position: nested guards become conditionals,
    /// let-before steps become sequential lets.
    fn body_to_expr(&mut self, body: &ClauseBody, cx: &mut ClauseCx) -> HsExpr {
        match body {
            ClauseBody::Simple(e) => self.expr(e, cx),
            ClauseBody::Guarded(alts) => {
                let mut result = None;
                for alt in alts.iter().rev() {
                    let branch = self.body_to_expr(&alt.body, cx);
                    result = Some(match &alt.guard {
                        None => branch,
                        Some(g) => {
                            let rest = result.unwrap_or_else(|| {
                                self.diags.push(Diagnostic::warning(
                                    rules::UNSUPPORTED_CONSTRUCT,
                                    alt.span,
                                    "nested guards without a final unguarded \
                                     alternative fail at run time when no guard \
                                     holds"
                                        .to_string(),
                                ));
                                HsExpr::App(
                                    Box::new(HsExpr::Var("error".to_string())),
                                    vec![HsExpr::Lit(HsLit::Str(
                                        "incomplete guards".to_string(),
                                    ))],
                                )
                            });
                            HsExpr::If {
                                cond: Box::new(self.expr(g, cx)),
                                then_branch: Box::new(branch),
                                else_branch: Box::new(rest),
                            }
                        }
                    });
                }
                result.unwrap_or_else(|| HsExpr::Var("undefined".to_string()))
            }
            ClauseBody::LetBefore { steps, rest } => {
                let mark = cx.mark();
                let mut in_use = BTreeSet::new();
                let bindings = self.let_before_bindings(steps, cx, &mut in_use);
                let body = self.body_to_expr(rest, cx);
                cx.reset(mark);
                bindings.into_iter().rev().fold(body, |acc, binding| {
                    HsExpr::Let {
                        defs: vec![binding],
                        body: Box::new(acc),
                    }
                })
            }
        }
    }

    // -----------------------------------------------------------------
    // Let-before chains

    fn let_before_where(
        &mut self,
        steps: &[LetStep],
        cx: &mut ClauseCx,
        in_use: &mut BTreeSet<String>,
    ) -> Vec<HsDecl> {
        self.let_before_bindings(steps, cx, in_use)
    }

    /// One where- or let-binding per step. A variable is renamed when
    /// binding it directly would collide (it is already bound in the
    /// enclosing scope) or recurse (it occurs free in its own right-hand
    /// side after the renames so far).
    fn let_before_bindings(
        &mut self,
        steps: &[LetStep],
        cx: &mut ClauseCx,
        in_use: &mut BTreeSet<String>,
    ) -> Vec<HsDecl> {
        let mut out = Vec::new();
        for step in steps {
            let rhs = self.expr(&step.expr, cx);
            let mut renames = BTreeMap::new();
            for var in pattern_vars(&step.pat) {
                if in_use.contains(&var) || expr_mentions(&rhs, &var) {
                    let fresh = cx.supply.fresh(&var);
                    cx.rename(&var, &fresh);
                    renames.insert(var, fresh);
                } else {
                    cx.mask(&var);
                }
            }
            let pat = self.bind_pat(&step.pat, cx, &renames);
            for var in pattern_vars(&step.pat) {
                in_use.insert(renames.get(&var).cloned().unwrap_or(var));
            }
            out.push(binding_decl(pat, rhs, step.strict && !self.opts.no_bang));
        }
        out
    }

    // -----------------------------------------------------------------
    // Local definitions

    /// Translate a where-block or instance body. Signatures with strict
    /// argument marks make the matching definition's parameters strict.
    pub(crate) fn local_defs(&mut self, defs: &[LocalDef], cx: &mut ClauseCx) -> Vec<HsDecl> {
        let mut strict: BTreeMap<&str, Vec<bool>> = BTreeMap::new();
        for def in defs {
            if let LocalDef::Sig(s) = def {
                if s.args.iter().any(|a| a.strict) {
                    strict.insert(&s.name, s.args.iter().map(|a| a.strict).collect());
                }
            }
        }
        let mark = cx.mark();
        for def in defs {
            for name in local_def_names(def) {
                cx.mask(&name);
            }
        }
        let out = defs
            .iter()
            .map(|def| match def {
                LocalDef::Fun(f) => {
                    let flags = strict.get(f.name.as_str()).cloned().unwrap_or_default();
                    self.local_fun(f, &flags, cx)
                }
                LocalDef::Sig(s) => self.sig_decl(s),
                LocalDef::PatBind { pat, body, .. } => {
                    let pat = self.bind_pat(pat, cx, &BTreeMap::new());
                    let mut in_use = BTreeSet::new();
                    let (rhs, extra) = self.clause_body(body, cx, &mut in_use);
                    HsDecl::PatBind {
                        pat,
                        rhs,
                        where_defs: extra,
                    }
                }
            })
            .collect();
        cx.reset(mark);
        out
    }

    pub(crate) fn local_def(&mut self, def: &LocalDef) -> HsDecl {
        let mut supply = FreshNameSupply::with_reserved(self.top_names.iter().cloned());
        let mut cx = ClauseCx::new(&mut supply);
        let defs = std::slice::from_ref(def);
        self.local_defs(defs, &mut cx).remove(0)
    }

    fn local_fun(&mut self, f: &FunDef, strict: &[bool], cx: &mut ClauseCx) -> HsDecl {
        if let Some(decl) = self.dynamic_fun(f) {
            return decl;
        }
        let clauses = f
            .clauses
            .iter()
            .map(|cl| {
                for name in clause_names(cl) {
                    cx.supply.reserve(&name);
                }
                let mark = cx.mark();
                let mut params: Vec<HsPattern> = cl
                    .params
                    .iter()
                    .map(|p| self.bind_pat(p, cx, &BTreeMap::new()))
                    .collect();
                for (i, p) in params.iter_mut().enumerate() {
                    if strict.get(i) == Some(&true) && !self.opts.no_bang {
                        let inner = std::mem::replace(p, HsPattern::Wild);
                        *p = HsPattern::Bang(Box::new(inner));
                    }
                }
                let mut in_use: BTreeSet<String> =
                    cl.params.iter().flat_map(pattern_vars).collect();
                for d in cl.where_defs.iter().chain(&cl.with_defs) {
                    in_use.extend(local_def_names(d));
                }
                let bound_params = cx.mark();
                let (rhs, generated) = self.clause_body(&cl.body, cx, &mut in_use);
                cx.reset(bound_params);
                let mut where_defs = generated;
                where_defs.extend(self.local_defs(&cl.with_defs, cx));
                where_defs.extend(self.local_defs(&cl.where_defs, cx));
                cx.reset(mark);
                HsClause {
                    params,
                    rhs,
                    where_defs,
                }
            })
            .collect();
        HsDecl::Bind {
            name: self.map_op(&f.name),
            clauses,
        }
    }

    // -----------------------------------------------------------------
    // Dynamics

    /// The two-clause dynamic-matching shape: a typed dynamic pattern
    /// plus a fallback becomes a case on `fromDynamic`.
    fn dynamic_fun(&mut self, d: &FunDef) -> Option<HsDecl> {
        if !d
            .clauses
            .iter()
            .any(|cl| cl.params.iter().any(has_dynamic_pattern))
        {
            return None;
        }
        let shape = match d.clauses.as_slice() {
            [first, second] => match (first.params.as_slice(), second.params.as_slice()) {
                ([Pattern { kind: PatternKind::Dynamic { pat, .. }, .. }], [fallback])
                    if matches!(fallback.kind, PatternKind::Var(_) | PatternKind::Wild) =>
                {
                    Some((first, pat.as_ref(), second, fallback))
                }
                _ => None,
            },
            _ => None,
        };
        // Any other use of dynamic patterns falls through to the plain
        // clause translation, which reports each one.
        let (first, dyn_pat, second, fallback) = shape?;
        self.uses_dynamic = true;

        let mut reserved = clause_names(first);
        reserved.extend(clause_names(second));
        reserved.extend(self.top_names.iter().cloned());
        let mut supply = FreshNameSupply::with_reserved(reserved);
        let mut cx = ClauseCx::new(&mut supply);

        let scrutinee = match &fallback.kind {
            PatternKind::Var(n) => n.clone(),
            _ => cx.binder("d"),
        };

        let mut alts = Vec::new();
        for (pat, clause) in [
            (
                HsPattern::Con(
                    "Just".to_string(),
                    vec![self.bind_pat(dyn_pat, &mut cx, &BTreeMap::new())],
                ),
                first,
            ),
            (HsPattern::Con("Nothing".to_string(), vec![]), second),
        ] {
            let mark = cx.mark();
            let mut in_use: BTreeSet<String> =
                clause.params.iter().flat_map(pattern_vars).collect();
            for d in clause.where_defs.iter().chain(&clause.with_defs) {
                in_use.extend(local_def_names(d));
            }
            let (rhs, generated) = self.clause_body(&clause.body, &mut cx, &mut in_use);
            cx.reset(mark);
            let mut where_defs = generated;
            where_defs.extend(self.local_defs(&clause.with_defs, &mut cx));
            where_defs.extend(self.local_defs(&clause.where_defs, &mut cx));
            alts.push(HsAlt {
                pat,
                rhs,
                where_defs,
            });
        }

        let case = HsExpr::Case {
            scrutinee: Box::new(HsExpr::App(
                Box::new(HsExpr::Var("fromDynamic".to_string())),
                vec![HsExpr::Var(scrutinee.clone())],
            )),
            alts,
        };
        Some(HsDecl::Bind {
            name: self.map_op(&d.name),
            clauses: vec![HsClause {
                params: vec![HsPattern::Var(scrutinee)],
                rhs: HsRhs::Simple(case),
                where_defs: vec![],
            }],
        })
    }

    // -----------------------------------------------------------------
    // Patterns

    /// Translate a binding pattern. Bound variables mask outer renames;
    /// `renames` carries let-before renamings of the binders themselves.
    fn bind_pat(
        &mut self,
        p: &Pattern,
        cx: &mut ClauseCx,
        renames: &BTreeMap<String, String>,
    ) -> HsPattern {
        match &p.kind {
            PatternKind::Wild => HsPattern::Wild,
            PatternKind::Var(n) => {
                let name = match renames.get(n) {
                    Some(fresh) => fresh.clone(),
                    None => {
                        cx.mask(n);
                        n.clone()
                    }
                };
                HsPattern::Var(name)
            }
            PatternKind::As(n, inner) => {
                let name = match renames.get(n) {
                    Some(fresh) => fresh.clone(),
                    None => {
                        cx.mask(n);
                        n.clone()
                    }
                };
                HsPattern::As(name, Box::new(self.bind_pat(inner, cx, renames)))
            }
            PatternKind::Ctor(name, args) => HsPattern::Con(
                ctor_name(name),
                args.iter().map(|a| self.bind_pat(a, cx, renames)).collect(),
            ),
            PatternKind::Lit(l) => lit_pattern(l),
            PatternKind::Tuple(elems) => HsPattern::Tuple(
                elems
                    .iter()
                    .map(|e| self.bind_pat(e, cx, renames))
                    .collect(),
            ),
            PatternKind::List { elems, tail } => {
                let elems: Vec<HsPattern> = elems
                    .iter()
                    .map(|e| self.bind_pat(e, cx, renames))
                    .collect();
                match tail {
                    None => HsPattern::List(elems),
                    Some(tail) => {
                        let tail = self.bind_pat(tail, cx, renames);
                        elems.into_iter().rev().fold(tail, |acc, head| {
                            HsPattern::Cons(Box::new(head), Box::new(acc))
                        })
                    }
                }
            }
            PatternKind::Record { ctor, fields } => {
                let names: Vec<&str> = fields.iter().map(|f| f.field.as_str()).collect();
                let ctor = self.resolve_record(ctor.as_deref(), &names, p.span);
                let fields = fields
                    .iter()
                    .map(|f| match &f.pat {
                        Some(inner) => (
                            f.field.clone(),
                            Some(self.bind_pat(inner, cx, renames)),
                        ),
                        None if self.opts.no_puns => {
                            let fresh = cx.supply.fresh(&f.field);
                            cx.rename(&f.field, &fresh);
                            (f.field.clone(), Some(HsPattern::Var(fresh)))
                        }
                        None => match renames.get(&f.field) {
                            Some(fresh) => {
                                (f.field.clone(), Some(HsPattern::Var(fresh.clone())))
                            }
                            None => {
                                cx.mask(&f.field);
                                (f.field.clone(), None)
                            }
                        },
                    })
                    .collect();
                HsPattern::Record { ctor, fields }
            }
            PatternKind::Dynamic { pat, .. } => {
                self.diags.push(Diagnostic::error(
                    rules::UNSUPPORTED_CONSTRUCT,
                    p.span,
                    "a dynamic pattern is only supported as the sole parameter of a \
                     two-clause function"
                        .to_string(),
                ));
                self.bind_pat(pat, cx, renames)
            }
        }
    }

    // -----------------------------------------------------------------
    // Expressions

    pub(crate) fn expr(&mut self, e: &Expr, cx: &mut ClauseCx) -> HsExpr {
        match &e.kind {
            ExprKind::Var(n) => HsExpr::Var(cx.rename_of(n)),
            ExprKind::Ctor(n) => HsExpr::Con(ctor_name(n)),
            ExprKind::OpRef(op) => HsExpr::Var(self.map_op(op)),
            ExprKind::Lit(l) => HsExpr::Lit(lit(l)),
            ExprKind::App(head, args) => {
                if let (ExprKind::Var(f), [arg]) = (&head.kind, args.as_slice()) {
                    if f == "toInteger" {
                        if let ExprKind::Lit(Lit::Int(_)) = arg.kind {
                            return self.expr(arg, cx);
                        }
                    }
                }
                HsExpr::App(
                    Box::new(self.expr(head, cx)),
                    args.iter().map(|a| self.expr(a, cx)).collect(),
                )
            }
            ExprKind::BinOp { op, lhs, rhs } => HsExpr::BinOp {
                op: self.map_op(op),
                lhs: Box::new(self.expr(lhs, cx)),
                rhs: Box::new(self.expr(rhs, cx)),
            },
            ExprKind::Neg(inner) => HsExpr::Neg(Box::new(self.expr(inner, cx))),
            ExprKind::If {
                cond,
                then_branch,
                else_branch,
            } => HsExpr::If {
                cond: Box::new(self.expr(cond, cx)),
                then_branch: Box::new(self.expr(then_branch, cx)),
                else_branch: Box::new(self.expr(else_branch, cx)),
            },
            ExprKind::Case { scrutinee, alts } => {
                let scrutinee = Box::new(self.expr(scrutinee, cx));
                let alts = alts.iter().map(|alt| self.case_alt(alt, cx)).collect();
                HsExpr::Case { scrutinee, alts }
            }
            ExprKind::Let { defs, body } => {
                let mark = cx.mark();
                for def in defs.iter() {
                    for name in local_def_names(def) {
                        cx.mask(&name);
                    }
                }
                let defs = self.local_defs(defs, cx);
                let body = Box::new(self.expr(body, cx));
                cx.reset(mark);
                HsExpr::Let { defs, body }
            }
            ExprKind::Lambda { params, body } => {
                let mark = cx.mark();
                let params = params
                    .iter()
                    .map(|p| self.bind_pat(p, cx, &BTreeMap::new()))
                    .collect();
                let body = Box::new(self.expr(body, cx));
                cx.reset(mark);
                HsExpr::Lambda { params, body }
            }
            ExprKind::Tuple(elems) => {
                HsExpr::Tuple(elems.iter().map(|e| self.expr(e, cx)).collect())
            }
            ExprKind::List { elems, tail } => {
                let elems: Vec<HsExpr> = elems.iter().map(|e| self.expr(e, cx)).collect();
                match tail {
                    None => HsExpr::List(elems),
                    Some(tail) => {
                        let tail = self.expr(tail, cx);
                        elems.into_iter().rev().fold(tail, |acc, head| HsExpr::BinOp {
                            op: ":".to_string(),
                            lhs: Box::new(head),
                            rhs: Box::new(acc),
                        })
                    }
                }
            }
            ExprKind::Range { from, then, to } => HsExpr::Range {
                from: Box::new(self.expr(from, cx)),
                then: then.as_ref().map(|t| Box::new(self.expr(t, cx))),
                to: to.as_ref().map(|t| Box::new(self.expr(t, cx))),
            },
            ExprKind::ListComp { head, quals } => self.list_comp(head, quals, cx),
            ExprKind::ArrayLit(elems) => self.array_lit(elems, cx),
            ExprKind::ArrayComp { head, quals } => self.array_comp(head, quals, e.span, cx),
            ExprKind::ArraySelect { arr, index, unique } => {
                self.uses_array = true;
                let arr = self.expr(arr, cx);
                let index = self.expr(index, cx);
                if *unique {
                    let v = cx.binder("v");
                    let pair = HsExpr::Tuple(vec![
                        HsExpr::BinOp {
                            op: "!".to_string(),
                            lhs: Box::new(HsExpr::Var(v.clone())),
                            rhs: Box::new(index),
                        },
                        HsExpr::Var(v.clone()),
                    ]);
                    HsExpr::App(
                        Box::new(HsExpr::Lambda {
                            params: vec![HsPattern::Var(v)],
                            body: Box::new(pair),
                        }),
                        vec![arr],
                    )
                } else {
                    HsExpr::BinOp {
                        op: "!".to_string(),
                        lhs: Box::new(arr),
                        rhs: Box::new(index),
                    }
                }
            }
            ExprKind::ArrayUpdate { arr, updates } => {
                self.uses_array = true;
                let arr = self.expr(arr, cx);
                let pairs = updates
                    .iter()
                    .map(|(i, v)| {
                        HsExpr::Tuple(vec![self.expr(i, cx), self.expr(v, cx)])
                    })
                    .collect();
                HsExpr::BinOp {
                    op: "//".to_string(),
                    lhs: Box::new(arr),
                    rhs: Box::new(HsExpr::List(pairs)),
                }
            }
            ExprKind::RecordLit { ctor, fields } => {
                let names: Vec<&str> = fields.iter().map(|f| f.field.as_str()).collect();
                let ctor = self.resolve_record(ctor.as_deref(), &names, e.span);
                let fields = fields
                    .iter()
                    .map(|f| match &f.value {
                        Some(v) => (f.field.clone(), Some(self.expr(v, cx))),
                        None if self.opts.no_puns => (
                            f.field.clone(),
                            Some(HsExpr::Var(cx.rename_of(&f.field))),
                        ),
                        None => (f.field.clone(), None),
                    })
                    .collect();
                HsExpr::RecordCon { ctor, fields }
            }
            ExprKind::RecordUpdate { base, fields } => {
                let base = Box::new(self.expr(base, cx));
                let fields = fields
                    .iter()
                    .map(|f| {
                        let value = match &f.value {
                            Some(v) => self.expr(v, cx),
                            None => HsExpr::Var(cx.rename_of(&f.field)),
                        };
                        (f.field.clone(), value)
                    })
                    .collect();
                HsExpr::RecordUpdate { base, fields }
            }
            ExprKind::FieldSelect { base, field, unique } => {
                let base = self.expr(base, cx);
                if *unique {
                    let v = cx.binder("v");
                    let pair = HsExpr::Tuple(vec![
                        HsExpr::App(
                            Box::new(HsExpr::Var(field.clone())),
                            vec![HsExpr::Var(v.clone())],
                        ),
                        HsExpr::Var(v.clone()),
                    ]);
                    HsExpr::App(
                        Box::new(HsExpr::Lambda {
                            params: vec![HsPattern::Var(v)],
                            body: Box::new(pair),
                        }),
                        vec![base],
                    )
                } else {
                    HsExpr::App(Box::new(HsExpr::Var(field.clone())), vec![base])
                }
            }
            ExprKind::Dynamic { expr, ty } => {
                self.uses_dynamic = true;
                let mut inner = self.expr(expr, cx);
                if let Some(ty) = ty {
                    let erased = super::erase_type(self, ty);
                    inner = HsExpr::Annot {
                        expr: Box::new(inner),
                        ty: self.ty(&erased),
                    };
                }
                HsExpr::App(Box::new(HsExpr::Var("toDyn".to_string())), vec![inner])
            }
            ExprKind::AsPredicate { scrutinee, pat } => {
                let scrutinee = Box::new(self.expr(scrutinee, cx));
                let mark = cx.mark();
                let pat = self.bind_pat(pat, cx, &BTreeMap::new());
                cx.reset(mark);
                HsExpr::Case {
                    scrutinee,
                    alts: vec![
                        HsAlt {
                            pat,
                            rhs: HsRhs::Simple(HsExpr::Con("True".to_string())),
                            where_defs: vec![],
                        },
                        HsAlt {
                            pat: HsPattern::Wild,
                            rhs: HsRhs::Simple(HsExpr::Con("False".to_string())),
                            where_defs: vec![],
                        },
                    ],
                }
            }
            ExprKind::Annot { expr, ty } => {
                let inner = self.expr(expr, cx);
                let erased = super::erase_type(self, ty);
                HsExpr::Annot {
                    expr: Box::new(inner),
                    ty: self.ty(&erased),
                }
            }
        }
    }

    fn case_alt(&mut self, alt: &CaseAlt, cx: &mut ClauseCx) -> HsAlt {
        let mark = cx.mark();
        let pat = self.bind_pat(&alt.pat, cx, &BTreeMap::new());
        let mut in_use: BTreeSet<String> = pattern_vars(&alt.pat).into_iter().collect();
        let (rhs, where_defs) = self.clause_body(&alt.body, cx, &mut in_use);
        cx.reset(mark);
        HsAlt {
            pat,
            rhs,
            where_defs,
        }
    }

    // -----------------------------------------------------------------
    // Comprehensions and arrays

    fn list_comp(&mut self, head: &Expr, quals: &[QualGroup], cx: &mut ClauseCx) -> HsExpr {
        let mark = cx.mark();
        let parallel_ok = self.opts.parallel_mode == ParallelMode::Extension
            && quals.len() == 1
            && quals[0].gens.len() >= 2
            && quals[0].filters.is_empty();
        let branches = if parallel_ok {
            quals[0]
                .gens
                .iter()
                .map(|gen| {
                    let source = self.gen_source(&gen.source, cx);
                    let pat = self.bind_pat(&gen.pat, cx, &BTreeMap::new());
                    vec![HsQual::Gen(pat, source)]
                })
                .collect()
        } else {
            let mut quals_out = Vec::new();
            for group in quals {
                self.qual_group(group, cx, &mut quals_out);
            }
            vec![quals_out]
        };
        let head = Box::new(self.expr(head, cx));
        cx.reset(mark);
        HsExpr::ListComp { head, branches }
    }

    /// One `gens then filters` stage as sequential qualifiers; lockstep
    /// generators draw from a zip of their sources.
    fn qual_group(&mut self, group: &QualGroup, cx: &mut ClauseCx, out: &mut Vec<HsQual>) {
        match group.gens.as_slice() {
            [] => {}
            [only] => {
                let source = self.gen_source(&only.source, cx);
                let pat = self.bind_pat(&only.pat, cx, &BTreeMap::new());
                out.push(HsQual::Gen(pat, source));
            }
            gens => {
                let sources: Vec<HsExpr> = gens
                    .iter()
                    .map(|g| self.gen_source(&g.source, cx))
                    .collect();
                let pats: Vec<HsPattern> = gens
                    .iter()
                    .map(|g| self.bind_pat(&g.pat, cx, &BTreeMap::new()))
                    .collect();
                let zipped = self.zip_call(sources, gens[0].span);
                out.push(HsQual::Gen(HsPattern::Tuple(pats), zipped));
            }
        }
        for filter in &group.filters {
            let guard = self.expr(filter, cx);
            out.push(HsQual::Guard(guard));
        }
    }

    fn zip_call(&mut self, sources: Vec<HsExpr>, span: Span) -> HsExpr {
        let name = match sources.len() {
            2 => "zip".to_string(),
            3 => "zip3".to_string(),
            n @ 4..=7 => {
                let name = format!("zip{n}");
                self.zip_helpers.insert(name.clone());
                name
            }
            n => {
                self.diags.push(Diagnostic::error(
                    rules::UNSUPPORTED_CONSTRUCT,
                    span,
                    format!("{n} lockstep generators exceed the widest zip (7)"),
                ));
                "zip".to_string()
            }
        };
        HsExpr::App(Box::new(HsExpr::Var(name)), sources)
    }

    fn gen_source(&mut self, source: &GenSource, cx: &mut ClauseCx) -> HsExpr {
        match source {
            GenSource::List(e) => self.expr(e, cx),
            GenSource::Array(e) => {
                self.uses_array = true;
                HsExpr::App(
                    Box::new(HsExpr::Var("elems".to_string())),
                    vec![self.expr(e, cx)],
                )
            }
        }
    }

    /// `{v0, ..., vn}` builds an array over bounds `(0, n)`.
    fn array_lit(&mut self, elems: &[Expr], cx: &mut ClauseCx) -> HsExpr {
        self.uses_array = true;
        let pairs: Vec<HsExpr> = elems
            .iter()
            .enumerate()
            .map(|(i, e)| {
                HsExpr::Tuple(vec![
                    HsExpr::Lit(HsLit::Int(i as i64)),
                    self.expr(e, cx),
                ])
            })
            .collect();
        let upper = if elems.is_empty() {
            HsExpr::Neg(Box::new(HsExpr::Lit(HsLit::Int(1))))
        } else {
            HsExpr::Lit(HsLit::Int(elems.len() as i64 - 1))
        };
        HsExpr::App(
            Box::new(HsExpr::Var("array".to_string())),
            vec![
                HsExpr::Tuple(vec![HsExpr::Lit(HsLit::Int(0)), upper]),
                HsExpr::List(pairs),
            ],
        )
    }

    /// `{e \\ p <-: a}` builds an array the size of the source, indexing
    /// the elements with a generated counter.
    fn array_comp(
        &mut self,
        head: &Expr,
        quals: &[QualGroup],
        span: Span,
        cx: &mut ClauseCx,
    ) -> HsExpr {
        self.uses_array = true;
        let supported = quals.len() == 1
            && quals[0].gens.len() == 1
            && quals[0].filters.is_empty();
        if !supported {
            self.diags.push(Diagnostic::error(
                rules::UNSUPPORTED_CONSTRUCT,
                span,
                "array comprehensions translate only with a single generator and \
                 no filters"
                    .to_string(),
            ));
            return self.list_comp(head, quals, cx);
        }
        let gen = &quals[0].gens[0];
        let source = match &gen.source {
            GenSource::List(e) | GenSource::Array(e) => self.expr(e, cx),
        };
        let index = cx.binder("i");
        let mark = cx.mark();
        let pat = self.bind_pat(&gen.pat, cx, &BTreeMap::new());
        let head = self.expr(head, cx);
        cx.reset(mark);
        let bounds = HsExpr::Tuple(vec![
            HsExpr::Lit(HsLit::Int(0)),
            HsExpr::BinOp {
                op: "-".to_string(),
                lhs: Box::new(HsExpr::App(
                    Box::new(HsExpr::Var("length".to_string())),
                    vec![source.clone()],
                )),
                rhs: Box::new(HsExpr::Lit(HsLit::Int(1))),
            },
        ]);
        let zipped = HsExpr::App(
            Box::new(HsExpr::Var("zip".to_string())),
            vec![
                HsExpr::Range {
                    from: Box::new(HsExpr::Lit(HsLit::Int(0))),
                    then: None,
                    to: None,
                },
                source,
            ],
        );
        let comp = HsExpr::ListComp {
            head: Box::new(HsExpr::Tuple(vec![HsExpr::Var(index.clone()), head])),
            branches: vec![vec![HsQual::Gen(
                HsPattern::Tuple(vec![HsPattern::Var(index), pat]),
                zipped,
            )]],
        };
        HsExpr::App(
            Box::new(HsExpr::Var("array".to_string())),
            vec![bounds, comp],
        )
    }

    // -----------------------------------------------------------------
    // Names

    fn resolve_record(
        &mut self,
        explicit: Option<&str>,
        fields: &[&str],
        span: Span,
    ) -> String {
        if let Some(name) = explicit {
            return name.to_string();
        }
        match self.records.resolve(fields) {
            RecordMatch::One(ctor) => ctor,
            RecordMatch::Ambiguous(candidates) => {
                self.diags.push(Diagnostic::error(
                    rules::RECORD_AMBIGUOUS,
                    span,
                    format!(
                        "fields {{{}}} match more than one record ({}); \
                         name the record explicitly",
                        fields.join(", "),
                        candidates.join(", ")
                    ),
                ));
                candidates.into_iter().next().unwrap()
            }
            RecordMatch::None => {
                self.diags.push(Diagnostic::error(
                    rules::RECORD_UNKNOWN,
                    span,
                    format!(
                        "fields {{{}}} match no record in this module",
                        fields.join(", ")
                    ),
                ));
                "UnknownRecord".to_string()
            }
        }
    }

    /// Map a Clean operator onto its target spelling, unless the module
    /// defines the operator itself.
    pub(crate) fn map_op(&mut self, op: &str) -> String {
        if self.top_names.contains(op) {
            return op.to_string();
        }
        match op {
            "o" => ".".to_string(),
            "<>" => "/=".to_string(),
            "+++" => match self.opts.string_type {
                StringType::CharList => "++".to_string(),
                StringType::Text => "<>".to_string(),
            },
            _ => op.to_string(),
        }
    }
}

fn binding_decl(pat: HsPattern, rhs: HsExpr, strict: bool) -> HsDecl {
    match (&pat, strict) {
        (HsPattern::Var(name), false) => HsDecl::Bind {
            name: name.clone(),
            clauses: vec![HsClause {
                params: vec![],
                rhs: HsRhs::Simple(rhs),
                where_defs: vec![],
            }],
        },
        _ => {
            let pat = if strict {
                HsPattern::Bang(Box::new(pat))
            } else {
                pat
            };
            HsDecl::PatBind {
                pat,
                rhs: HsRhs::Simple(rhs),
                where_defs: vec![],
            }
        }
    }
}

fn ctor_name(name: &str) -> String {
    match name {
        "?None" => "Nothing".to_string(),
        "?Just" => "Just".to_string(),
        _ => name.to_string(),
    }
}

fn lit(l: &Lit) -> HsLit {
    match l {
        Lit::Int(n) => HsLit::Int(*n),
        Lit::Real(s) => HsLit::Real(s.clone()),
        Lit::Char(s) => HsLit::Char(s.clone()),
        Lit::CharList(s) | Lit::Str(s) => HsLit::Str(s.clone()),
    }
}

fn lit_pattern(l: &Lit) -> HsPattern {
    match l {
        Lit::Int(n) if *n < 0 => HsPattern::Neg(HsLit::Int(n.wrapping_neg())),
        other => HsPattern::Lit(lit(other)),
    }
}

fn has_dynamic_pattern(p: &Pattern) -> bool {
    match &p.kind {
        PatternKind::Dynamic { .. } => true,
        PatternKind::Wild | PatternKind::Var(_) | PatternKind::Lit(_) => false,
        PatternKind::As(_, inner) => has_dynamic_pattern(inner),
        PatternKind::Ctor(_, args) | PatternKind::Tuple(args) => {
            args.iter().any(has_dynamic_pattern)
        }
        PatternKind::List { elems, tail } => {
            elems.iter().any(has_dynamic_pattern)
                || tail.as_deref().is_some_and(has_dynamic_pattern)
        }
        PatternKind::Record { fields, .. } => fields
            .iter()
            .any(|f| f.pat.as_ref().is_some_and(has_dynamic_pattern)),
    }
}

/// The variables a pattern binds; punned record fields bind the field
/// name itself.
pub(crate) fn pattern_vars(p: &Pattern) -> Vec<String> {
    fn walk(p: &Pattern, out: &mut Vec<String>) {
        match &p.kind {
            PatternKind::Wild | PatternKind::Lit(_) => {}
            PatternKind::Var(n) => out.push(n.clone()),
            PatternKind::As(n, inner) => {
                out.push(n.clone());
                walk(inner, out);
            }
            PatternKind::Ctor(_, args) | PatternKind::Tuple(args) => {
                for a in args {
                    walk(a, out);
                }
            }
            PatternKind::List { elems, tail } => {
                for e in elems {
                    walk(e, out);
                }
                if let Some(tail) = tail {
                    walk(tail, out);
                }
            }
            PatternKind::Record { fields, .. } => {
                for f in fields {
                    match &f.pat {
                        Some(inner) => walk(inner, out),
                        None => out.push(f.field.clone()),
                    }
                }
            }
            PatternKind::Dynamic { pat, .. } => walk(pat, out),
        }
    }
    let mut out = Vec::new();
    walk(p, &mut out);
    out
}

fn local_def_names(d: &LocalDef) -> Vec<String> {
    match d {
        LocalDef::Fun(f) => vec![f.name.clone()],
        LocalDef::Sig(s) => vec![s.name.clone()],
        LocalDef::PatBind { pat, .. } => pattern_vars(pat),
    }
}

/// Does `name` occur as a variable anywhere in the expression? Used for
/// the rebinding check; shadowing inside is ignored, which can only make
/// renaming more eager, never wrong.
fn expr_mentions(e: &HsExpr, name: &str) -> bool {
    let mut found = false;
    walk_hs_expr(e, &mut |v| {
        if v == name {
            found = true;
        }
    });
    found
}

fn walk_hs_expr(e: &HsExpr, f: &mut impl FnMut(&str)) {
    match e {
        HsExpr::Var(n) => f(n),
        HsExpr::Con(_) | HsExpr::Lit(_) => {}
        HsExpr::App(head, args) => {
            walk_hs_expr(head, f);
            for a in args {
                walk_hs_expr(a, f);
            }
        }
        HsExpr::BinOp { lhs, rhs, .. } => {
            walk_hs_expr(lhs, f);
            walk_hs_expr(rhs, f);
        }
        HsExpr::Neg(x) => walk_hs_expr(x, f),
        HsExpr::If {
            cond,
            then_branch,
            else_branch,
        } => {
            walk_hs_expr(cond, f);
            walk_hs_expr(then_branch, f);
            walk_hs_expr(else_branch, f);
        }
        HsExpr::Case { scrutinee, alts } => {
            walk_hs_expr(scrutinee, f);
            for alt in alts {
                walk_hs_rhs(&alt.rhs, f);
                for d in &alt.where_defs {
                    walk_hs_decl(d, f);
                }
            }
        }
        HsExpr::Let { defs, body } => {
            for d in defs {
                walk_hs_decl(d, f);
            }
            walk_hs_expr(body, f);
        }
        HsExpr::Lambda { body, .. } => walk_hs_expr(body, f),
        HsExpr::Tuple(elems) | HsExpr::List(elems) => {
            for e in elems {
                walk_hs_expr(e, f);
            }
        }
        HsExpr::Range { from, then, to } => {
            walk_hs_expr(from, f);
            if let Some(t) = then {
                walk_hs_expr(t, f);
            }
            if let Some(t) = to {
                walk_hs_expr(t, f);
            }
        }
        HsExpr::ListComp { head, branches } => {
            walk_hs_expr(head, f);
            for branch in branches {
                for q in branch {
                    match q {
                        HsQual::Gen(_, src) => walk_hs_expr(src, f),
                        HsQual::Guard(g) => walk_hs_expr(g, f),
                    }
                }
            }
        }
        HsExpr::RecordCon { fields, .. } => {
            for (_, v) in fields {
                if let Some(v) = v {
                    walk_hs_expr(v, f);
                }
            }
        }
        HsExpr::RecordUpdate { base, fields } => {
            walk_hs_expr(base, f);
            for (_, v) in fields {
                walk_hs_expr(v, f);
            }
        }
        HsExpr::Annot { expr, .. } => walk_hs_expr(expr, f),
    }
}

fn walk_hs_rhs(rhs: &HsRhs, f: &mut impl FnMut(&str)) {
    match rhs {
        HsRhs::Simple(e) => walk_hs_expr(e, f),
        HsRhs::Guarded(alts) => {
            for (g, e) in alts {
                walk_hs_expr(g, f);
                walk_hs_expr(e, f);
            }
        }
    }
}

fn walk_hs_decl(d: &HsDecl, f: &mut impl FnMut(&str)) {
    match d {
        HsDecl::Bind { clauses, .. } => {
            for cl in clauses {
                walk_hs_rhs(&cl.rhs, f);
                for d in &cl.where_defs {
                    walk_hs_decl(d, f);
                }
            }
        }
        HsDecl::PatBind {
            rhs, where_defs, ..
        } => {
            walk_hs_rhs(rhs, f);
            for d in where_defs {
                walk_hs_decl(d, f);
            }
        }
        _ => {}
    }
}

/// Every identifier a clause mentions, binder or use; the reserved set
/// for its fresh-name supply.
pub(crate) fn clause_names(cl: &Clause) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for p in &cl.params {
        pattern_names(p, &mut out);
    }
    body_names(&cl.body, &mut out);
    for d in cl.where_defs.iter().chain(&cl.with_defs) {
        local_names(d, &mut out);
    }
    out
}

fn pattern_names(p: &Pattern, out: &mut BTreeSet<String>) {
    match &p.kind {
        PatternKind::Wild => {}
        PatternKind::Var(n) => {
            out.insert(n.clone());
        }
        PatternKind::As(n, inner) => {
            out.insert(n.clone());
            pattern_names(inner, out);
        }
        PatternKind::Ctor(n, args) => {
            out.insert(n.clone());
            for a in args {
                pattern_names(a, out);
            }
        }
        PatternKind::Lit(_) => {}
        PatternKind::Tuple(args) => {
            for a in args {
                pattern_names(a, out);
            }
        }
        PatternKind::List { elems, tail } => {
            for e in elems {
                pattern_names(e, out);
            }
            if let Some(tail) = tail {
                pattern_names(tail, out);
            }
        }
        PatternKind::Record { ctor, fields } => {
            if let Some(c) = ctor {
                out.insert(c.clone());
            }
            for f in fields {
                out.insert(f.field.clone());
                if let Some(inner) = &f.pat {
                    pattern_names(inner, out);
                }
            }
        }
        PatternKind::Dynamic { pat, .. } => pattern_names(pat, out),
    }
}

fn body_names(body: &ClauseBody, out: &mut BTreeSet<String>) {
    match body {
        ClauseBody::Simple(e) => expr_names(e, out),
        ClauseBody::Guarded(alts) => {
            for alt in alts {
                if let Some(g) = &alt.guard {
                    expr_names(g, out);
                }
                body_names(&alt.body, out);
            }
        }
        ClauseBody::LetBefore { steps, rest } => {
            for step in steps {
                pattern_names(&step.pat, out);
                expr_names(&step.expr, out);
            }
            body_names(rest, out);
        }
    }
}

fn local_names(d: &LocalDef, out: &mut BTreeSet<String>) {
    match d {
        LocalDef::Fun(f) => {
            out.insert(f.name.clone());
            for cl in &f.clauses {
                for p in &cl.params {
                    pattern_names(p, out);
                }
                body_names(&cl.body, out);
                for d in cl.where_defs.iter().chain(&cl.with_defs) {
                    local_names(d, out);
                }
            }
        }
        LocalDef::Sig(s) => {
            out.insert(s.name.clone());
        }
        LocalDef::PatBind { pat, body, .. } => {
            pattern_names(pat, out);
            body_names(body, out);
        }
    }
}

fn expr_names(e: &Expr, out: &mut BTreeSet<String>) {
    match &e.kind {
        ExprKind::Var(n) | ExprKind::Ctor(n) | ExprKind::OpRef(n) => {
            out.insert(n.clone());
        }
        ExprKind::Lit(_) => {}
        ExprKind::App(head, args) => {
            expr_names(head, out);
            for a in args {
                expr_names(a, out);
            }
        }
        ExprKind::BinOp { lhs, rhs, .. } => {
            expr_names(lhs, out);
            expr_names(rhs, out);
        }
        ExprKind::Neg(x) => expr_names(x, out),
        ExprKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            expr_names(cond, out);
            expr_names(then_branch, out);
            expr_names(else_branch, out);
        }
        ExprKind::Case { scrutinee, alts } => {
            expr_names(scrutinee, out);
            for alt in alts {
                pattern_names(&alt.pat, out);
                body_names(&alt.body, out);
            }
        }
        ExprKind::Let { defs, body } => {
            for d in defs {
                local_names(d, out);
            }
            expr_names(body, out);
        }
        ExprKind::Lambda { params, body } => {
            for p in params {
                pattern_names(p, out);
            }
            expr_names(body, out);
        }
        ExprKind::Tuple(elems) => {
            for e in elems {
                expr_names(e, out);
            }
        }
        ExprKind::List { elems, tail } => {
            for e in elems {
                expr_names(e, out);
            }
            if let Some(t) = tail {
                expr_names(t, out);
            }
        }
        ExprKind::Range { from, then, to } => {
            expr_names(from, out);
            if let Some(t) = then {
                expr_names(t, out);
            }
            if let Some(t) = to {
                expr_names(t, out);
            }
        }
        ExprKind::ListComp { head, quals } | ExprKind::ArrayComp { head, quals } => {
            expr_names(head, out);
            for group in quals {
                for gen in &group.gens {
                    pattern_names(&gen.pat, out);
                    match &gen.source {
                        GenSource::List(e) | GenSource::Array(e) => expr_names(e, out),
                    }
                }
                for filter in &group.filters {
                    expr_names(filter, out);
                }
            }
        }
        ExprKind::ArrayLit(elems) => {
            for e in elems {
                expr_names(e, out);
            }
        }
        ExprKind::ArraySelect { arr, index, .. } => {
            expr_names(arr, out);
            expr_names(index, out);
        }
        ExprKind::ArrayUpdate { arr, updates } => {
            expr_names(arr, out);
            for (i, v) in updates {
                expr_names(i, out);
                expr_names(v, out);
            }
        }
        ExprKind::RecordLit { ctor, fields } => {
            if let Some(c) = ctor {
                out.insert(c.clone());
            }
            for f in fields {
                out.insert(f.field.clone());
                if let Some(v) = &f.value {
                    expr_names(v, out);
                }
            }
        }
        ExprKind::RecordUpdate { base, fields } => {
            expr_names(base, out);
            for f in fields {
                out.insert(f.field.clone());
                if let Some(v) = &f.value {
                    expr_names(v, out);
                }
            }
        }
        ExprKind::FieldSelect { base, field, .. } => {
            expr_names(base, out);
            out.insert(field.clone());
        }
        ExprKind::Dynamic { expr, .. } => expr_names(expr, out),
        ExprKind::AsPredicate { scrutinee, pat } => {
            expr_names(scrutinee, out);
            pattern_names(pat, out);
        }
        ExprKind::Annot { expr, .. } => expr_names(expr, out),
    }
}
