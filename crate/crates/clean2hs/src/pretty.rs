//! Renders the syntax tree back to Clean source.
//!
//! The output is canonical: one item per block, four-space indents, minimal
//! parentheses. Printing a parsed module and reparsing the result yields
//! the same tree again (up to source positions), which makes the printer a
//! useful harness for checking that the parser loses nothing. Comments are
//! kept outside the item tree and are not reproduced here.

use crate::ast::*;
use crate::parser::FixityTable;

/// Render a whole module.
pub fn module_to_source(m: &CleanModule) -> String {
    let mut p = Printer::new(collect_fixities(m));
    p.module(m);
    p.out
}

/// Render one expression. Multi-line forms (`case`, multi-definition
/// `let`) produce layout relative to column one.
pub fn expr_to_source(e: &Expr) -> String {
    let mut p = Printer::new(FixityTable::with_builtins());
    p.expr(e, 0);
    p.out
}

/// Render one type with its uniqueness attributes.
pub fn type_to_source(t: &AttrType) -> String {
    let mut p = Printer::new(FixityTable::with_builtins());
    p.ty(t, TyCtx::Top);
    p.out
}

/// Render one pattern.
pub fn pattern_to_source(pat: &Pattern) -> String {
    let mut p = Printer::new(FixityTable::with_builtins());
    p.pattern(pat, false);
    p.out
}

/// Gather every fixity declaration in the module so operator expressions
/// print with the same precedences the reparse will use.
fn collect_fixities(m: &CleanModule) -> FixityTable {
    let mut table = FixityTable::with_builtins();
    fn add(table: &mut FixityTable, name: &str, fixity: Option<Fixity>) {
        if let Some(f) = fixity {
            table.declare(name, f);
        }
    }
    fn walk_locals(table: &mut FixityTable, defs: &[LocalDef]) {
        for def in defs {
            match def {
                LocalDef::Fun(d) => {
                    add(table, &d.name, d.fixity);
                    for cl in &d.clauses {
                        walk_locals(table, &cl.where_defs);
                        walk_locals(table, &cl.with_defs);
                    }
                }
                LocalDef::Sig(s) => add(table, &s.name, s.fixity),
                LocalDef::PatBind { .. } => {}
            }
        }
    }
    for item in &m.items {
        match item {
            Item::FunSig(s) => add(&mut table, &s.name, s.fixity),
            Item::FunDef(d) => {
                add(&mut table, &d.name, d.fixity);
                for cl in &d.clauses {
                    walk_locals(&mut table, &cl.where_defs);
                    walk_locals(&mut table, &cl.with_defs);
                }
            }
            Item::ClassDef(d) => {
                add(&mut table, &d.name, d.fixity);
                for member in &d.members {
                    match member {
                        ClassMember::Sig(s) => add(&mut table, &s.name, s.fixity),
                        ClassMember::Def(f) => add(&mut table, &f.name, f.fixity),
                    }
                }
            }
            Item::InstanceDef(d) => walk_locals(&mut table, &d.members),
            _ => {}
        }
    }
    table
}

const INDENT: usize = 4;

/// Precedence levels for expression printing. Binary operators use their
/// table precedence (1 to 9); the constants bracket them.
const PREC_GREEDY: u8 = 0;
const PREC_OPERAND: u8 = 1;
const PREC_APP: u8 = 10;
const PREC_SELECT: u8 = 11;
const PREC_ATOM: u8 = 12;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum TyCtx {
    /// Arrows allowed.
    Top,
    /// Applications allowed, arrows need parentheses.
    BType,
    /// Atoms only.
    Atom,
}

struct Printer {
    out: String,
    fix: FixityTable,
}

impl Printer {
    fn new(fix: FixityTable) -> Self {
        Printer {
            out: String::new(),
            fix,
        }
    }

    fn push(&mut self, s: &str) {
        self.out.push_str(s);
    }

    /// Zero-based column the next character will land on.
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

    // ---------------------------------------------------------------
    // Modules and items

    fn module(&mut self, m: &CleanModule) {
        let header = match m.flavor {
            ModuleFlavor::Plain => "module",
            ModuleFlavor::Implementation => "implementation module",
            ModuleFlavor::Definition => "definition module",
            ModuleFlavor::System => "system module",
        };
        self.push(header);
        self.push(" ");
        self.push(&m.name);
        self.push("\n");
        for import in &m.imports {
            self.push("\n");
            self.import_decl(import);
        }
        for item in &m.items {
            self.push("\n");
            self.item(item);
        }
    }

    fn import_decl(&mut self, decl: &ImportDecl) {
        match decl {
            ImportDecl::Whole { modules, .. } => {
                self.push("import ");
                self.push(&modules.join(", "));
            }
            ImportDecl::Selective { module, names, .. } => {
                self.push("from ");
                self.push(module);
                self.push(" import ");
                for (i, entry) in names.iter().enumerate() {
                    if i > 0 {
                        self.push(", ");
                    }
                    if entry.qualified {
                        self.push("qualified ");
                    }
                    match entry.kind {
                        ImportEntryKind::Value => self.push(&entry.name),
                        ImportEntryKind::Type => {
                            self.push(":: ");
                            self.push(&entry.name);
                        }
                        ImportEntryKind::Class => {
                            self.push("class ");
                            self.push(&entry.name);
                        }
                    }
                }
            }
        }
        self.push("\n");
    }

    fn item(&mut self, item: &Item) {
        match item {
            Item::TypeDef(d) => self.type_def(d),
            Item::FunSig(s) => self.fun_sig(s),
            Item::FunDef(d) => self.fun_def(d, 0),
            Item::ClassDef(d) => self.class_def(d),
            Item::InstanceDef(d) => self.instance_def(d),
            Item::GenericDef(d) => self.generic_def(d),
            Item::DeriveDecl(d) => self.derive_decl(d),
        }
        self.push("\n");
    }

    fn type_def(&mut self, d: &TypeDef) {
        self.push(":: ");
        self.push(&d.name);
        for p in &d.params {
            self.push(" ");
            self.push(p);
        }
        match &d.body {
            None => {}
            Some(TypeDefBody::Algebraic(ctors)) => {
                self.push(" = ");
                for (i, ctor) in ctors.iter().enumerate() {
                    if i > 0 {
                        self.push(" | ");
                    }
                    self.ctor_def(ctor);
                }
            }
            Some(TypeDefBody::Record(fields)) => {
                self.push(" = { ");
                for (i, f) in fields.iter().enumerate() {
                    if i > 0 {
                        self.push(", ");
                    }
                    self.push(&f.name);
                    self.push(" :: ");
                    if f.strict {
                        self.push("!");
                    }
                    self.ty(&f.ty, TyCtx::Top);
                }
                self.push(" }");
            }
            Some(TypeDefBody::Synonym(ty)) => {
                self.push(" :== ");
                self.ty(ty, TyCtx::Top);
            }
            Some(TypeDefBody::Newtype(ctor)) => {
                self.push(" =: ");
                self.ctor_def(ctor);
            }
        }
    }

    fn ctor_def(&mut self, ctor: &CtorDef) {
        if !ctor.exist_vars.is_empty() {
            self.push("E.");
            self.push(&ctor.exist_vars.join(" "));
            self.push(": ");
        }
        self.push(&ctor.name);
        for arg in &ctor.args {
            self.push(" ");
            if arg.strict {
                self.push("!");
            }
            self.ty(&arg.ty, TyCtx::Atom);
        }
        if !ctor.context.is_empty() {
            self.push(" & ");
            self.constraints(&ctor.context);
        }
    }

    fn constraints(&mut self, context: &[ClassConstraint]) {
        for (i, con) in context.iter().enumerate() {
            if i > 0 {
                self.push(" & ");
            }
            self.push(&con.class);
            for arg in &con.args {
                self.push(" ");
                self.ty(arg, TyCtx::Atom);
            }
        }
    }

    fn def_head(&mut self, name: &str, fixity: Option<Fixity>) {
        let symbolic = !name
            .chars()
            .next()
            .map_or(false, |c| c.is_ascii_alphabetic() || c == '_');
        if symbolic || fixity.is_some() {
            self.push("(");
            self.push(name);
            self.push(")");
        } else {
            self.push(name);
        }
        if let Some(f) = fixity {
            let word = match f.assoc {
                Assoc::Left => "infixl",
                Assoc::Right => "infixr",
                Assoc::None => "infix",
            };
            self.push(&format!(" {word} {}", f.prec));
        }
    }

    fn fun_sig(&mut self, s: &FunSig) {
        self.def_head(&s.name, s.fixity);
        self.push(" :: ");
        self.sig_type(&s.args, &s.ret);
        if !s.context.is_empty() {
            self.push(" | ");
            self.constraints(&s.context);
        }
        if !s.attr_constraints.is_empty() {
            self.push(", [");
            for (i, a) in s.attr_constraints.iter().enumerate() {
                if i > 0 {
                    self.push(", ");
                }
                self.push(&format!("{}<={}", a.left, a.right));
            }
            self.push("]");
        }
    }

    fn sig_type(&mut self, args: &[SigArg], ret: &AttrType) {
        if args.is_empty() {
            // A parenthesised function result means "no declared arguments";
            // reproduce the parentheses so the shape survives a reparse.
            let ctx = if matches!(ret.shape, Shape::Fun(..)) {
                TyCtx::BType
            } else {
                TyCtx::Top
            };
            self.ty(ret, ctx);
        } else {
            for arg in args {
                if arg.strict {
                    self.push("!");
                }
                self.ty(&arg.ty, TyCtx::Atom);
                self.push(" ");
            }
            self.push("-> ");
            self.ty(ret, TyCtx::Top);
        }
    }

    fn fun_def(&mut self, d: &FunDef, indent: usize) {
        for (i, cl) in d.clauses.iter().enumerate() {
            if i > 0 {
                self.nl(indent);
            }
            self.def_head(&d.name, if i == 0 { d.fixity } else { None });
            for p in &cl.params {
                self.push(" ");
                self.pattern(p, true);
            }
            self.clause_tail(cl, indent);
        }
    }

    fn clause_tail(&mut self, cl: &Clause, indent: usize) {
        self.clause_body(&cl.body, indent, "=", true);
        if !cl.with_defs.is_empty() {
            self.nl(indent);
            self.push("with");
            self.local_defs(&cl.with_defs, indent + INDENT);
        }
        if !cl.where_defs.is_empty() {
            self.nl(indent);
            self.push("where");
            self.local_defs(&cl.where_defs, indent + INDENT);
        }
    }

    /// Print a clause or alternative body. `inline` permits `= e` on the
    /// current line; guard and step lines always start fresh ones.
    fn clause_body(&mut self, body: &ClauseBody, indent: usize, intro: &str, inline: bool) {
        match body {
            ClauseBody::Simple(e) => {
                if inline {
                    self.push(" ");
                } else {
                    self.nl(indent + INDENT);
                }
                self.push(intro);
                self.push(" ");
                self.expr(e, PREC_GREEDY);
            }
            ClauseBody::Guarded(alts) => {
                for alt in alts {
                    self.nl(indent + INDENT);
                    match &alt.guard {
                        Some(g) => {
                            self.push("| ");
                            self.expr(g, PREC_OPERAND);
                            self.clause_body(&alt.body, indent + INDENT, "=", true);
                        }
                        None => {
                            // Trailing alternative without a guard: print its
                            // body introducer directly on this line.
                            match alt.body.as_ref() {
                                ClauseBody::Simple(e) => {
                                    self.push("= ");
                                    self.expr(e, PREC_GREEDY);
                                }
                                other => self.clause_body(other, indent + INDENT, "=", false),
                            }
                        }
                    }
                }
            }
            ClauseBody::LetBefore { steps, rest } => {
                for step in steps {
                    self.nl(indent + INDENT);
                    self.push(if step.strict { "#! " } else { "# " });
                    self.pattern(&step.pat, false);
                    self.push(" = ");
                    self.expr(&step.expr, PREC_GREEDY);
                }
                self.clause_body(rest, indent, intro, false);
            }
        }
    }

    fn local_defs(&mut self, defs: &[LocalDef], indent: usize) {
        for def in defs {
            self.nl(indent);
            match def {
                LocalDef::Fun(d) => self.fun_def(d, indent),
                LocalDef::Sig(s) => self.fun_sig(s),
                LocalDef::PatBind { pat, body, .. } => {
                    self.pattern(pat, false);
                    self.clause_body(body, indent, "=", true);
                }
            }
        }
    }

    fn class_def(&mut self, d: &ClassDef) {
        self.push("class ");
        self.def_head(&d.name, d.fixity);
        for p in &d.params {
            self.push(" ");
            if p.determines_rest {
                self.push("~");
            }
            self.push(&p.name);
        }
        if !d.context.is_empty() {
            self.push(" | ");
            self.constraints(&d.context);
        }
        if d.single_member {
            if let Some(ClassMember::Sig(s)) = d.members.first() {
                self.push(" :: ");
                self.sig_type(&s.args, &s.ret);
                if !s.context.is_empty() {
                    self.push(" | ");
                    self.constraints(&s.context);
                }
            }
        } else if !d.members.is_empty() {
            self.push(" where");
            for member in &d.members {
                self.nl(INDENT);
                match member {
                    ClassMember::Sig(s) => self.fun_sig(s),
                    ClassMember::Def(f) => self.fun_def(f, INDENT),
                }
            }
        }
    }

    fn instance_def(&mut self, d: &InstanceDef) {
        self.push("instance ");
        self.push(&d.class);
        for t in &d.types {
            self.push(" ");
            self.ty(t, TyCtx::Atom);
        }
        if !d.context.is_empty() {
            self.push(" | ");
            self.constraints(&d.context);
        }
        if !d.members.is_empty() {
            self.push(" where");
            self.local_defs(&d.members, INDENT);
        }
    }

    fn generic_def(&mut self, d: &GenericDef) {
        self.push("generic ");
        self.push(&d.name);
        for v in &d.vars {
            self.push(" ");
            self.push(v);
        }
        self.push(" :: ");
        self.sig_type(&d.args, &d.ret);
    }

    fn derive_decl(&mut self, d: &DeriveDecl) {
        self.push("derive ");
        self.push(&d.generic);
        self.push(" ");
        self.push(&d.types.join(", "));
    }

    // ---------------------------------------------------------------
    // Expressions

    fn expr_prec(&self, e: &Expr) -> u8 {
        match &e.kind {
            ExprKind::Case { .. }
            | ExprKind::Let { .. }
            | ExprKind::Lambda { .. }
            | ExprKind::Dynamic { .. }
            | ExprKind::AsPredicate { .. }
            | ExprKind::Annot { .. } => PREC_GREEDY,
            ExprKind::BinOp { op, .. } => self.fix.get(op).prec,
            ExprKind::Neg(_) => 6,
            ExprKind::App(..) | ExprKind::If { .. } => PREC_APP,
            ExprKind::FieldSelect { .. } | ExprKind::ArraySelect { .. } => PREC_SELECT,
            _ => PREC_ATOM,
        }
    }

    fn expr(&mut self, e: &Expr, ctx: u8) {
        let prec = self.expr_prec(e);
        if prec < ctx {
            self.push("(");
            self.expr_inner(e);
            self.push(")");
        } else {
            self.expr_inner(e);
        }
    }

    fn expr_inner(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Var(n) | ExprKind::Ctor(n) => self.push(n),
            ExprKind::OpRef(n) => {
                self.push("(");
                self.push(n);
                self.push(")");
            }
            ExprKind::Lit(l) => self.lit(l),
            ExprKind::App(head, args) => {
                self.expr(head, PREC_SELECT);
                for arg in args {
                    self.push(" ");
                    self.expr(arg, PREC_SELECT);
                }
            }
            ExprKind::BinOp { op, lhs, rhs } => {
                let f = self.fix.get(op);
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
                self.push(&format!(" {op} "));
                self.expr(rhs, rhs_ctx);
            }
            ExprKind::Neg(x) => {
                self.push("-");
                self.expr(x, 7);
            }
            ExprKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                self.push("if ");
                self.expr(cond, PREC_SELECT);
                self.push(" ");
                self.expr(then_branch, PREC_SELECT);
                self.push(" ");
                self.expr(else_branch, PREC_SELECT);
            }
            ExprKind::Case { scrutinee, alts } => {
                let base = self.col();
                self.push("case ");
                self.expr(scrutinee, PREC_OPERAND);
                self.push(" of");
                for alt in alts {
                    self.nl(base + 2);
                    self.pattern(&alt.pat, false);
                    self.clause_body(&alt.body, base + 2, "->", true);
                }
            }
            ExprKind::Let { defs, body } => {
                let base = self.col();
                if let [only] = defs.as_slice() {
                    if let Some(text) = self.inline_local(only) {
                        self.push("let ");
                        self.push(&text);
                        self.push(" in ");
                        self.expr(body, PREC_GREEDY);
                        return;
                    }
                }
                self.push("let");
                self.local_defs(defs, base + INDENT);
                self.nl(base);
                self.push("in ");
                self.expr(body, PREC_GREEDY);
            }
            ExprKind::Lambda { params, body } => {
                self.push("\\");
                for (i, p) in params.iter().enumerate() {
                    if i > 0 {
                        self.push(" ");
                    }
                    self.pattern(p, true);
                }
                self.push(" -> ");
                self.expr(body, PREC_GREEDY);
            }
            ExprKind::Tuple(elems) => {
                self.push("(");
                self.comma_exprs(elems);
                self.push(")");
            }
            ExprKind::List { elems, tail } => {
                self.push("[");
                self.comma_exprs(elems);
                if let Some(t) = tail {
                    self.push(":");
                    self.expr(t, PREC_OPERAND);
                }
                self.push("]");
            }
            ExprKind::Range { from, then, to } => {
                self.push("[");
                self.expr(from, PREC_OPERAND);
                if let Some(t) = then {
                    self.push(", ");
                    self.expr(t, PREC_OPERAND);
                }
                self.push("..");
                if let Some(t) = to {
                    self.expr(t, PREC_OPERAND);
                }
                self.push("]");
            }
            ExprKind::ListComp { head, quals } => {
                self.push("[");
                self.expr(head, PREC_OPERAND);
                self.push(" \\\\ ");
                self.quals(quals);
                self.push("]");
            }
            ExprKind::ArrayLit(elems) => {
                self.push("{");
                self.comma_exprs(elems);
                self.push("}");
            }
            ExprKind::ArrayComp { head, quals } => {
                self.push("{");
                self.expr(head, PREC_OPERAND);
                self.push(" \\\\ ");
                self.quals(quals);
                self.push("}");
            }
            ExprKind::ArraySelect { arr, index, unique } => {
                self.expr(arr, PREC_SELECT);
                self.push(if *unique { "![" } else { ".[" });
                self.expr(index, PREC_OPERAND);
                self.push("]");
            }
            ExprKind::ArrayUpdate { arr, updates } => {
                self.push("{");
                self.expr(arr, PREC_OPERAND);
                self.push(" & ");
                for (i, (idx, val)) in updates.iter().enumerate() {
                    if i > 0 {
                        self.push(", ");
                    }
                    self.push("[");
                    self.expr(idx, PREC_OPERAND);
                    self.push("] = ");
                    self.expr(val, PREC_OPERAND);
                }
                self.push("}");
            }
            ExprKind::RecordLit { ctor, fields } => {
                self.push("{");
                if let Some(name) = ctor {
                    self.push(name);
                    self.push(" | ");
                }
                self.field_assigns(fields);
                self.push("}");
            }
            ExprKind::RecordUpdate { base, fields } => {
                self.push("{");
                self.expr(base, PREC_OPERAND);
                self.push(" & ");
                self.field_assigns(fields);
                self.push("}");
            }
            ExprKind::FieldSelect {
                base,
                field,
                unique,
            } => {
                self.expr(base, PREC_SELECT);
                self.push(if *unique { "!" } else { "." });
                self.push(field);
            }
            ExprKind::Dynamic { expr, ty } => {
                self.push("dynamic ");
                self.expr(expr, PREC_APP);
                if let Some(t) = ty {
                    self.push(" :: ");
                    self.ty(t, TyCtx::Top);
                }
            }
            ExprKind::AsPredicate { scrutinee, pat } => {
                self.expr(scrutinee, PREC_OPERAND);
                self.push(" =: ");
                self.pattern(pat, false);
            }
            ExprKind::Annot { expr, ty } => {
                self.expr(expr, PREC_OPERAND);
                self.push(" :: ");
                self.ty(ty, TyCtx::Top);
            }
        }
    }

    /// A local definition simple enough for `let d in e` on one line.
    fn inline_local(&mut self, def: &LocalDef) -> Option<String> {
        let saved = std::mem::take(&mut self.out);
        let ok = match def {
            LocalDef::Fun(d) if d.clauses.len() == 1 && d.fixity.is_none() => {
                let cl = &d.clauses[0];
                if matches!(cl.body, ClauseBody::Simple(_))
                    && cl.where_defs.is_empty()
                    && cl.with_defs.is_empty()
                {
                    self.push(&d.name);
                    for p in &cl.params {
                        self.push(" ");
                        self.pattern(p, true);
                    }
                    if let ClauseBody::Simple(e) = &cl.body {
                        self.push(" = ");
                        self.expr(e, PREC_OPERAND);
                    }
                    true
                } else {
                    false
                }
            }
            LocalDef::PatBind { pat, body, .. } => {
                if let ClauseBody::Simple(e) = body {
                    self.pattern(pat, false);
                    self.push(" = ");
                    self.expr(e, PREC_OPERAND);
                    true
                } else {
                    false
                }
            }
            _ => false,
        };
        let text = std::mem::replace(&mut self.out, saved);
        ok.then_some(text)
    }

    fn comma_exprs(&mut self, elems: &[Expr]) {
        for (i, e) in elems.iter().enumerate() {
            if i > 0 {
                self.push(", ");
            }
            self.expr(e, PREC_OPERAND);
        }
    }

    fn field_assigns(&mut self, fields: &[FieldAssign]) {
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.push(", ");
            }
            self.push(&f.field);
            if let Some(v) = &f.value {
                self.push(" = ");
                self.expr(v, PREC_OPERAND);
            }
        }
    }

    fn quals(&mut self, quals: &[QualGroup]) {
        for (i, group) in quals.iter().enumerate() {
            if i > 0 {
                self.push(", ");
            }
            for (j, gen) in group.gens.iter().enumerate() {
                if j > 0 {
                    self.push(" & ");
                }
                self.pattern(&gen.pat, false);
                match &gen.source {
                    GenSource::List(e) => {
                        self.push(" <- ");
                        self.expr(e, PREC_OPERAND);
                    }
                    GenSource::Array(e) => {
                        self.push(" <-: ");
                        self.expr(e, PREC_OPERAND);
                    }
                }
            }
            for f in &group.filters {
                self.push(" | ");
                self.expr(f, PREC_OPERAND);
            }
        }
    }

    fn lit(&mut self, l: &Lit) {
        match l {
            Lit::Int(n) => self.push(&n.to_string()),
            Lit::Real(s) => self.push(s),
            Lit::Char(s) => self.push(&format!("'{s}'")),
            Lit::CharList(s) => self.push(&format!("['{s}']")),
            Lit::Str(s) => self.push(&format!("\"{s}\"")),
        }
    }

    // ---------------------------------------------------------------
    // Patterns

    fn pattern(&mut self, p: &Pattern, atom: bool) {
        match &p.kind {
            PatternKind::Wild => self.push("_"),
            PatternKind::Var(n) => self.push(n),
            PatternKind::As(name, inner) => {
                self.push(name);
                self.push("=:");
                self.pattern(inner, true);
            }
            PatternKind::Ctor(name, args) => {
                if args.is_empty() {
                    self.push(name);
                } else {
                    if atom {
                        self.push("(");
                    }
                    self.push(name);
                    for a in args {
                        self.push(" ");
                        self.pattern(a, true);
                    }
                    if atom {
                        self.push(")");
                    }
                }
            }
            PatternKind::Lit(l) => self.lit(l),
            PatternKind::Tuple(elems) => {
                self.push("(");
                for (i, e) in elems.iter().enumerate() {
                    if i > 0 {
                        self.push(", ");
                    }
                    self.pattern(e, false);
                }
                self.push(")");
            }
            PatternKind::List { elems, tail } => {
                self.push("[");
                for (i, e) in elems.iter().enumerate() {
                    if i > 0 {
                        self.push(", ");
                    }
                    self.pattern(e, false);
                }
                if let Some(t) = tail {
                    self.push(":");
                    self.pattern(t, false);
                }
                self.push("]");
            }
            PatternKind::Record { ctor, fields } => {
                self.push("{");
                if let Some(name) = ctor {
                    self.push(name);
                    self.push(" | ");
                }
                for (i, f) in fields.iter().enumerate() {
                    if i > 0 {
                        self.push(", ");
                    }
                    self.push(&f.field);
                    if let Some(inner) = &f.pat {
                        self.push(" = ");
                        self.pattern(inner, false);
                    }
                }
                self.push("}");
            }
            PatternKind::Dynamic { pat, ty } => {
                self.push("(");
                self.pattern(pat, false);
                self.push(" :: ");
                self.ty(ty, TyCtx::Top);
                self.push(")");
            }
        }
    }

    // ---------------------------------------------------------------
    // Types

    fn ty(&mut self, t: &AttrType, ctx: TyCtx) {
        match &t.attr {
            Attr::None => {}
            Attr::Unique => self.push("*"),
            Attr::Anonymous => self.push("."),
            Attr::Var(v) => {
                self.push(v);
                self.push(":");
            }
        }
        match &t.shape {
            Shape::Var(n) => self.push(n),
            Shape::Con(n, args) => {
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
            Shape::Fun(l, r) => {
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
            Shape::Tuple(elems) => {
                self.push("(");
                for (i, e) in elems.iter().enumerate() {
                    if i > 0 {
                        self.push(", ");
                    }
                    self.ty(e, TyCtx::Top);
                }
                self.push(")");
            }
            Shape::List(elem) => {
                self.push("[");
                self.ty(elem, TyCtx::Top);
                self.push("]");
            }
            Shape::Array { flavor, elem } => {
                self.push("{");
                match flavor {
                    ArrayFlavor::Lazy => {}
                    ArrayFlavor::Strict => self.push("!"),
                    ArrayFlavor::Unboxed => self.push("#"),
                }
                self.ty(elem, TyCtx::Top);
                self.push("}");
            }
            Shape::Optional(elem) => {
                self.push("?");
                self.ty(elem, TyCtx::Atom);
            }
            Shape::Forall { vars, body } => {
                self.push("(A.");
                self.push(&vars.join(" "));
                self.push(": ");
                self.ty(body, TyCtx::Top);
                self.push(")");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_expr, parse_module, parse_type};

    fn expr_text(src: &str) -> String {
        expr_to_source(&parse_expr(src).expect("expression should parse"))
    }

    fn type_text(src: &str) -> String {
        type_to_source(&parse_type(src).expect("type should parse").0)
    }

    fn module_text(src: &str) -> String {
        module_to_source(&parse_module(src).expect("module should parse"))
    }

    #[test]
    fn necessary_parentheses_survive() {
        assert_eq!(expr_text("(1 + 2) * 3"), "(1 + 2) * 3");
        assert_eq!(expr_text("f (g x)"), "f (g x)");
        assert_eq!(expr_text("-(x * y)"), "-x * y");
        assert_eq!(expr_text("(f x).[i]"), "(f x).[i]");
        assert_eq!(expr_text("1 + (case x of\n  _ -> 2)"), "1 + (case x of\n       _ -> 2)");
    }

    #[test]
    fn redundant_parentheses_drop() {
        assert_eq!(expr_text("1 + (2 * 3)"), "1 + 2 * 3");
        assert_eq!(expr_text("((x))"), "x");
        assert_eq!(expr_text("(f x) + 1"), "f x + 1");
    }

    #[test]
    fn types_keep_their_shape() {
        assert_eq!(type_text("(Int, *World) -> *World"), "(Int, *World) -> *World");
        assert_eq!(type_text("u:a -> u:a"), "u:a -> u:a");
        assert_eq!(type_text("{#Char}"), "{#Char}");
        assert_eq!(type_text("?(Tree a)"), "?(Tree a)");
        assert_eq!(type_text("(A.a: a -> a) -> Bool"), "(A.a: a -> a) -> Bool");
    }

    #[test]
    fn module_output_is_exact() {
        let src = "module T\nimport StdEnv\nsign x\n  | x > 0 = 1\n  = 0";
        let expected = "module T\n\nimport StdEnv\n\nsign x\n    | x > 0 = 1\n    = 0\n";
        assert_eq!(module_text(src), expected);
    }

    #[test]
    fn printed_modules_reparse_to_the_same_print() {
        let sources = [
            "module A\nimport M0, M1\nfrom M2 import f, :: T, class C\nx = 1",
            "module B\nimport M => qualified f, :: t\nx = f 1",
            "module C\n:: Color = Red | Green | Blue\n:: Point = { ax :: Real, ay :: !Real }\n:: Name :== String\n:: Age =: Age Int\n:: Boxed = E.t: Box t & TC t\n:: Stack a",
            "module D\nmap :: (a -> b) [a] -> [b]\nmap f [] = []\nmap f [x:xs] = [f x:map f xs]",
            "module E\n(.+.) infixl 6 :: Int Int -> Int\n(.+.) a b = a + b\nf x y z = x .+. y .+. z",
            "module F\nsign x\n  | x > 0 = 1\n  | x < 0 = -1\n  = 0",
            "module G\nf w\n  # (x, w) = get w\n  #! y = calc x\n  | y > 0 = (y, w)\n  = (0, w)",
            "module H\narea r = pival * sq r\nwhere\n  pival = 3.14\n  sq x = x * x\ng x = h x\nwith\n  h y = y + x",
            "module I\nf n = q + r\nwhere\n  (q, r) = divMod n 10\n  q2 :: Int\n  q2 = 0",
            "module J\nclass zero a :: a\nclass Store s ~m where\n  get :: s -> m s\ninstance zero Int where\n  zero = 0\ninstance zero [a] | zero a where\n  zero = []",
            "module K\ngeneric gEq a :: a a -> Bool\nderive gEq Color, Tree",
            "module L\nf :: v:a u:b -> u:b, [v<=u]\nf x y = y",
            "module M\nf :: (Int -> Int)\nf = id",
            "module N\nStart :: *World -> *World\nStart w = w",
            "module O\npick x = case x of\n  ?None -> 0\n  ?Just n\n    | n > 9 = 9\n    = n",
            "module P\nf xs = [x + 1 \\\\ x <- xs | x > 0]\ng xs ys = [(l, r) \\\\ l <- xs & r <- ys]\nh xss = [x \\\\ xs <- xss, x <- xs]\nk a = {sq x \\\\ x <-: a}",
            "module Q\nf a i = a![i]\ng a i = {a & [i] = 0, [i + 1] = 1}\nh r = r!field\nk r = {r & ax = 1.0}\nm p = {Point | ax = 1.0, ay}",
            "module R\nf d = case d of\n  (n :: Int) -> n\n  _ -> 0\ng x = dynamic x :: Int",
            "module S\nf x = let y = x + 1 in y * 2\ng x = let\n    a = 1\n    b = 2\n  in a + b + x",
            "module U\nf = \\x y -> x + y\ng = if (1 < 2) 'a' 'b'\nh = ['Hello'] +++ \"!\"",
            "module V\nlow x = 7 mod x == 0\ncomp f g = f o g\nsums xs = foldr (+) 0 xs",
            "module W\nfirst xs=:[x:_] = (x, xs)\nsecond {w, h} = w * h\nnested m i j = m.[i].[j]",
        ];
        for src in sources {
            let p1 = module_text(src);
            let reparsed = match parse_module(&p1) {
                Ok(m) => m,
                Err(err) => panic!("printed module failed to reparse: {err}\nprinted:\n{p1}"),
            };
            let p2 = module_to_source(&reparsed);
            assert_eq!(p1, p2, "print/reparse/print drifted for:\n{src}");
        }
    }

    #[test]
    fn printed_expressions_reparse_to_the_same_print() {
        let sources = [
            "1 + 2 * 3",
            "2 ^ 3 ^ 4",
            "foldr (+) 0 xs",
            "(mod)",
            "if p (f x) (g x)",
            "\\x -> x + 1",
            "[1, 3..9]",
            "[1..]",
            "[x:xs]",
            "(1, 'a', \"s\")",
            "{ ax = 1.0 }",
            "{Point | ax = 1.0, ay}",
            "{p & ax = 3.0}",
            "{1, 2, 3}",
            "a.[i]",
            "m.[i].[j]",
            "r.f.g",
            "case xs of\n  [] = 0\n  [y:_] = y",
            "let x = 1 in x + x",
            "dynamic (f, g)",
            "42 :: Int",
            "xs =: [1:_]",
            "x mod 2",
            "f o g o h",
        ];
        for src in sources {
            let p1 = expr_text(src);
            let reparsed = match parse_expr(&p1) {
                Ok(e) => e,
                Err(err) => panic!("printed expression failed to reparse: {err}\nprinted:\n{p1}"),
            };
            let p2 = expr_to_source(&reparsed);
            assert_eq!(p1, p2, "print/reparse/print drifted for:\n{src}");
        }
    }

    #[test]
    fn signature_without_arguments_keeps_parenthesised_function_result() {
        let printed = module_text("module T\nf :: (Int -> Int)\nf = id");
        assert!(
            printed.contains("f :: (Int -> Int)"),
            "parentheses lost:\n{printed}"
        );
    }
}
