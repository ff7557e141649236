//! Maps the Clean syntax tree onto a Haskell one, rule by rule.
//!
//! Translation is a pure function of the tree and the options. Uniqueness
//! attributes are erased (and reported) on the way through, unsupported
//! constructs turn into diagnostics rather than failures, and the pragma
//! set of the result is computed from the finished tree by
//! [`required_extensions`], so it is minimal by construction.

mod expr;
mod extensions;
mod types;

pub use extensions::required_extensions;

use std::collections::{BTreeMap, BTreeSet};

use crate::ast::*;
use crate::diag::{rules, Diagnostic};
use crate::hs::*;
use crate::uniqueness::{self, UniquenessReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StringType {
    /// Clean strings become `String` (lists of `Char`).
    #[default]
    CharList,
    /// Clean strings become `Data.Text.Text` with overloaded literals.
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RealType {
    #[default]
    Double,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParallelMode {
    /// Lockstep generators draw from a `zip` of their sources.
    #[default]
    Zip,
    /// Lockstep generators become parallel comprehension branches.
    Extension,
}

#[derive(Debug, Clone, Default)]
pub struct TranslateOptions {
    pub string_type: StringType,
    pub real_type: RealType,
    pub parallel_mode: ParallelMode,
    /// Expand record puns to explicit `field = name` bindings.
    pub no_puns: bool,
    /// Translate strict arguments and `#!` steps like their lazy forms,
    /// for targets without bang patterns. Strict record and constructor
    /// fields keep their `!`, which every target supports.
    pub no_bang: bool,
}

/// Generates names guaranteed not to collide with anything in scope.
#[derive(Debug, Clone, Default)]
pub struct FreshNameSupply {
    counter: usize,
    reserved: BTreeSet<String>,
}

impl FreshNameSupply {
    pub fn new() -> Self {
        FreshNameSupply::default()
    }

    pub fn with_reserved<I: IntoIterator<Item = String>>(names: I) -> Self {
        FreshNameSupply {
            counter: 0,
            reserved: names.into_iter().collect(),
        }
    }

    pub fn reserve(&mut self, name: &str) {
        self.reserved.insert(name.to_string());
    }

    /// A new name of the shape `<base>'<n>`, absent from the reserved set.
    pub fn fresh(&mut self, base: &str) -> String {
        loop {
            self.counter += 1;
            let name = format!("{base}'{}", self.counter);
            if self.reserved.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// Everything translation produces for one module.
#[derive(Debug)]
pub struct Translation {
    pub module: HsModule,
    pub diagnostics: Vec<Diagnostic>,
    /// Attributes erased from the module's signatures and type definitions.
    pub uniqueness: UniquenessReport,
}

/// Translate one implementation module. `exports` usually comes from the
/// linker; `None` leaves the module exporting everything.
pub fn translate_module(
    m: &CleanModule,
    exports: Option<Vec<HsExport>>,
    opts: &TranslateOptions,
) -> Translation {
    let mut tr = Translator::new(opts);
    tr.scan_module(m);

    let mut imports = Vec::new();
    for import in &m.imports {
        tr.import_decl(import, &mut imports);
    }

    let mut decls = Vec::new();
    for item in &m.items {
        tr.item(item, &mut decls);
    }
    tr.rename_start(&mut decls, m);
    tr.inject_imports(&mut imports);

    let mut module = HsModule {
        name: m.name.clone(),
        exports,
        pragmas: ExtensionSet::new(),
        imports,
        decls,
    };
    module.pragmas = required_extensions(&module);
    tr.diags.sort_by_key(|d| d.sort_key());
    Translation {
        module,
        diagnostics: tr.diags,
        uniqueness: tr.uniq,
    }
}

/// Translate a lone type definition. Extensions are the demands of the
/// resulting declaration.
pub fn translate_typedef(d: &TypeDef) -> (HsDecl, ExtensionSet) {
    let mut tr = Translator::new_default();
    let decl = tr.typedef(d);
    let exts = extensions::decl_demands(&decl);
    (decl, exts)
}

/// Translate a lone function signature; the fixity declaration, when the
/// signature carries one, precedes the type signature.
pub fn translate_sig(s: &FunSig) -> (Vec<HsDecl>, ExtensionSet) {
    let mut tr = Translator::new_default();
    let decls = tr.fun_sig(s);
    let exts = decls
        .iter()
        .map(extensions::decl_demands)
        .fold(ExtensionSet::new(), |mut acc, e| {
            acc.extend(&e);
            acc
        });
    (decls, exts)
}

/// Translate a lone class definition.
pub fn translate_class(c: &ClassDef) -> (Vec<HsDecl>, ExtensionSet) {
    let mut tr = Translator::new_default();
    tr.scan_class(c);
    let decls = vec![tr.class_def(c)];
    let exts = decls
        .iter()
        .map(extensions::decl_demands)
        .fold(ExtensionSet::new(), |mut acc, e| {
            acc.extend(&e);
            acc
        });
    (decls, exts)
}

/// Translate a lone expression with the given name supply.
pub fn translate_expr(
    e: &Expr,
    supply: &mut FreshNameSupply,
) -> (HsExpr, ExtensionSet, Vec<Diagnostic>) {
    let mut tr = Translator::new_default();
    let hs = {
        let mut cx = expr::ClauseCx::new(supply);
        tr.expr(e, &mut cx)
    };
    let exts = extensions::expr_demands(&hs);
    tr.diags.sort_by_key(|d| d.sort_key());
    (hs, exts, tr.diags)
}

/// Translate a clause whose body is a let-before chain, applying the
/// capture-avoiding renaming rule.
pub fn translate_let_before(clause: &Clause, supply: &mut FreshNameSupply) -> HsClause {
    let mut tr = Translator::new_default();
    for name in expr::clause_names(clause) {
        supply.reserve(&name);
    }
    tr.clause_with_supply(clause, &[], supply)
}

/// Per-module translation state: tables built by a first scan over the
/// items, then diagnostics and erasure entries accumulated while
/// translating.
pub(crate) struct Translator<'a> {
    pub(crate) opts: &'a TranslateOptions,
    pub(crate) records: RecordTable,
    pub(crate) class_renames: BTreeMap<Name, String>,
    pub(crate) strict_args: BTreeMap<Name, Vec<bool>>,
    pub(crate) top_names: BTreeSet<String>,
    pub(crate) diags: Vec<Diagnostic>,
    pub(crate) uniq: UniquenessReport,
    emitted_fixities: BTreeSet<String>,
    pub(crate) uses_array: bool,
    pub(crate) uses_dynamic: bool,
    pub(crate) uses_text: bool,
    /// Wide zips (`zip4` and up) drawn from `Data.List`.
    pub(crate) zip_helpers: BTreeSet<String>,
}

const DEFAULT_OPTS: TranslateOptions = TranslateOptions {
    string_type: StringType::CharList,
    real_type: RealType::Double,
    parallel_mode: ParallelMode::Zip,
    no_puns: false,
    no_bang: false,
};

impl<'a> Translator<'a> {
    pub(crate) fn new(opts: &'a TranslateOptions) -> Self {
        Translator {
            opts,
            records: RecordTable::default(),
            class_renames: BTreeMap::new(),
            strict_args: BTreeMap::new(),
            top_names: BTreeSet::new(),
            diags: Vec::new(),
            uniq: UniquenessReport::default(),
            emitted_fixities: BTreeSet::new(),
            uses_array: false,
            uses_dynamic: false,
            uses_text: false,
            zip_helpers: BTreeSet::new(),
        }
    }

    fn new_default() -> Translator<'static> {
        Translator::new(&DEFAULT_OPTS)
    }

    // -----------------------------------------------------------------
    // First pass: name tables

    fn scan_module(&mut self, m: &CleanModule) {
        // Type and class names first, so single-member class renames can
        // detect collisions regardless of declaration order.
        for item in &m.items {
            match item {
                Item::TypeDef(d) => {
                    self.top_names.insert(d.name.clone());
                    if let Some(TypeDefBody::Record(fields)) = &d.body {
                        self.records.insert(&d.name, fields);
                    }
                }
                Item::ClassDef(c) => {
                    self.top_names.insert(c.name.clone());
                    for member in &c.members {
                        self.top_names.insert(member_name(member).to_string());
                    }
                }
                Item::FunSig(s) => {
                    self.top_names.insert(s.name.clone());
                    let strict: Vec<bool> = s.args.iter().map(|a| a.strict).collect();
                    if strict.iter().any(|s| *s) {
                        self.strict_args.insert(s.name.clone(), strict);
                    }
                }
                Item::FunDef(d) => {
                    self.top_names.insert(d.name.clone());
                }
                Item::InstanceDef(_) | Item::GenericDef(_) | Item::DeriveDecl(_) => {}
            }
        }
        for item in &m.items {
            if let Item::ClassDef(c) = item {
                self.scan_class(c);
            }
        }
    }

    pub(crate) fn scan_class(&mut self, c: &ClassDef) {
        let first = c.name.chars().next().unwrap_or('_');
        if first.is_uppercase() {
            return;
        }
        let mut renamed = capitalize(&c.name);
        if self.top_names.contains(&renamed) || self.class_renames.values().any(|v| *v == renamed) {
            renamed.push('C');
            self.diags.push(Diagnostic::warning(
                rules::CLASS_NAME_COLLISION,
                c.span,
                format!(
                    "class `{}` renames to `{}`, which is already taken; using `{renamed}`",
                    c.name,
                    capitalize(&c.name)
                ),
            ));
        }
        self.class_renames.insert(c.name.clone(), renamed);
    }

    pub(crate) fn class_name(&self, name: &str) -> String {
        if name == "TC" {
            return "Typeable".to_string();
        }
        match self.class_renames.get(name) {
            Some(renamed) => renamed.clone(),
            None => name.to_string(),
        }
    }

    // -----------------------------------------------------------------
    // Imports

    fn import_decl(&mut self, import: &ImportDecl, out: &mut Vec<HsImport>) {
        match import {
            ImportDecl::Whole { modules, .. } => {
                for module in modules {
                    out.push(HsImport::whole(module.clone()));
                }
            }
            ImportDecl::Selective { module, names, .. } => {
                let (qualified, plain): (Vec<_>, Vec<_>) =
                    names.iter().partition(|entry| entry.qualified);
                for (group, is_qualified) in [(plain, false), (qualified, true)] {
                    if group.is_empty() {
                        continue;
                    }
                    out.push(HsImport {
                        module: module.clone(),
                        qualified: is_qualified,
                        names: Some(group.iter().map(|e| import_name(e)).collect()),
                    });
                }
            }
        }
    }

    /// Imports the translation itself needs, appended after the source's
    /// own imports in a fixed order.
    fn inject_imports(&mut self, imports: &mut Vec<HsImport>) {
        let present: BTreeSet<String> = imports.iter().map(|i| i.module.clone()).collect();
        if self.uses_array && !present.contains("Data.Array") {
            imports.push(HsImport::whole("Data.Array"));
        }
        if self.uses_dynamic && !present.contains("Data.Dynamic") {
            imports.push(HsImport::whole("Data.Dynamic"));
        }
        if !self.zip_helpers.is_empty() && !present.contains("Data.List") {
            imports.push(HsImport {
                module: "Data.List".to_string(),
                qualified: false,
                names: Some(self.zip_helpers.iter().cloned().collect()),
            });
        }
        if self.uses_text && !present.contains("Data.Text") {
            imports.push(HsImport {
                module: "Data.Text".to_string(),
                qualified: false,
                names: Some(vec!["Text".to_string()]),
            });
        }
    }

    // -----------------------------------------------------------------
    // Items

    fn item(&mut self, item: &Item, out: &mut Vec<HsDecl>) {
        match item {
            Item::TypeDef(d) => {
                let decl = self.typedef(d);
                out.push(decl);
            }
            Item::FunSig(s) => out.extend(self.fun_sig(s)),
            Item::FunDef(d) => {
                if let Some(fixity) = &d.fixity {
                    self.fixity_decl(&d.name, fixity, out);
                }
                let strict = self.strict_args.get(&d.name).cloned();
                out.push(self.fun_def(d, strict.as_deref().unwrap_or(&[])));
            }
            Item::ClassDef(c) => out.push(self.class_def(c)),
            Item::InstanceDef(i) => out.push(self.instance_def(i)),
            Item::GenericDef(g) => {
                self.diags.push(Diagnostic::warning(
                    rules::GENERICS_UNSUPPORTED,
                    g.span,
                    format!("generic `{}` is not supported; port it by hand", g.name),
                ));
                out.push(HsDecl::Comment(generic_stub(g)));
            }
            Item::DeriveDecl(d) => {
                self.diags.push(Diagnostic::warning(
                    rules::GENERICS_UNSUPPORTED,
                    d.span,
                    format!(
                        "derive declaration for generic `{}` is not supported; port it by hand",
                        d.generic
                    ),
                ));
                out.push(HsDecl::Comment(vec![format!(
                    "derive {} {}",
                    d.generic,
                    d.types.join(", ")
                )]));
            }
        }
    }

    pub(crate) fn fun_sig(&mut self, s: &FunSig) -> Vec<HsDecl> {
        let mut out = Vec::new();
        if let Some(fixity) = &s.fixity {
            self.fixity_decl(&s.name, fixity, &mut out);
        }
        out.push(self.sig_decl(s));
        out
    }

    fn fixity_decl(&mut self, name: &str, fixity: &Fixity, out: &mut Vec<HsDecl>) {
        if !self.emitted_fixities.insert(name.to_string()) {
            return;
        }
        out.push(HsDecl::Fixity {
            assoc: fixity.assoc,
            prec: fixity.prec,
            op: name.to_string(),
        });
    }

    // -----------------------------------------------------------------
    // Start

    /// Rewires a `Start` entry point: a pure value gains a `main` that
    /// prints it, a world-transforming one is renamed to `main` with a
    /// warning that the world threading has no direct counterpart.
    fn rename_start(&mut self, decls: &mut Vec<HsDecl>, m: &CleanModule) {
        let Some(bind_at) = decls
            .iter()
            .position(|d| matches!(d, HsDecl::Bind { name, .. } if name == "Start"))
        else {
            return;
        };
        let start_sig = m.items.iter().find_map(|item| match item {
            Item::FunSig(s) if s.name == "Start" => Some(s),
            _ => None,
        });
        let span = m
            .items
            .iter()
            .find_map(|item| match item {
                Item::FunDef(d) if d.name == "Start" => Some(d.span),
                _ => None,
            })
            .unwrap_or(m.span);
        let threads_world = start_sig.is_some_and(sig_mentions_world);
        let new_name = if threads_world {
            self.diags.push(Diagnostic::warning(
                rules::START_WORLD_THREADING,
                span,
                "`Start` threads a unique world; renamed to `main`, but the world \
                 passing must be ported to the IO monad by hand"
                    .to_string(),
            ));
            "main"
        } else {
            self.diags.push(Diagnostic::info(
                rules::START_RENAMED,
                span,
                "`Start` renamed to `start`; added `main = print start`".to_string(),
            ));
            "start"
        };
        for d in decls.iter_mut() {
            match d {
                HsDecl::Bind { name, .. } | HsDecl::Sig { name, .. } if name == "Start" => {
                    *name = new_name.to_string();
                }
                _ => {}
            }
        }
        if !threads_world {
            decls.insert(
                bind_at + 1,
                HsDecl::Bind {
                    name: "main".to_string(),
                    clauses: vec![HsClause {
                        params: vec![],
                        rhs: HsRhs::Simple(HsExpr::App(
                            Box::new(HsExpr::Var("print".to_string())),
                            vec![HsExpr::Var("start".to_string())],
                        )),
                        where_defs: vec![],
                    }],
                },
            );
        }
    }
}

/// Record constructors and their field lists, for resolving which record
/// a literal or pattern mentions.
#[derive(Debug, Default)]
pub(crate) struct RecordTable {
    by_ctor: BTreeMap<String, Vec<String>>,
}

pub(crate) enum RecordMatch {
    One(String),
    Ambiguous(Vec<String>),
    None,
}

impl RecordTable {
    fn insert(&mut self, ctor: &str, fields: &[FieldDef]) {
        self.by_ctor.insert(
            ctor.to_string(),
            fields.iter().map(|f| f.name.clone()).collect(),
        );
    }

    /// The record constructors whose field set contains every given field.
    pub(crate) fn resolve(&self, fields: &[&str]) -> RecordMatch {
        let mut hits: Vec<String> = self
            .by_ctor
            .iter()
            .filter(|(_, have)| fields.iter().all(|f| have.iter().any(|h| h == f)))
            .map(|(ctor, _)| ctor.clone())
            .collect();
        match hits.len() {
            0 => RecordMatch::None,
            1 => RecordMatch::One(hits.remove(0)),
            _ => RecordMatch::Ambiguous(hits),
        }
    }
}

fn member_name(member: &ClassMember) -> &str {
    match member {
        ClassMember::Sig(s) => &s.name,
        ClassMember::Def(d) => &d.name,
    }
}

fn capitalize(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn import_name(entry: &ImportEntry) -> String {
    let alpha = entry
        .name
        .chars()
        .next()
        .map_or(false, |c| c.is_ascii_alphabetic() || c == '_');
    if alpha {
        entry.name.clone()
    } else {
        format!("({})", entry.name)
    }
}

fn sig_mentions_world(sig: &FunSig) -> bool {
    fn shape_has_world(t: &AttrType) -> bool {
        match &t.shape {
            Shape::Con(name, args) => name == "World" || args.iter().any(shape_has_world),
            Shape::Var(_) => false,
            Shape::Fun(a, b) => shape_has_world(a) || shape_has_world(b),
            Shape::Tuple(elems) => elems.iter().any(shape_has_world),
            Shape::List(e) | Shape::Optional(e) => shape_has_world(e),
            Shape::Array { elem, .. } => shape_has_world(elem),
            Shape::Forall { body, .. } => shape_has_world(body),
        }
    }
    sig.args.iter().any(|a| shape_has_world(&a.ty)) || shape_has_world(&sig.ret)
}

fn generic_stub(g: &GenericDef) -> Vec<String> {
    let sig = FunSig {
        name: g.name.clone(),
        fixity: None,
        args: g.args.clone(),
        ret: g.ret.clone(),
        context: Vec::new(),
        attr_constraints: Vec::new(),
        span: g.span,
    };
    let args = sig
        .args
        .iter()
        .map(|a| {
            let text = crate::pretty::type_to_source(&a.ty);
            if a.strict {
                format!("!{text}")
            } else {
                text
            }
        })
        .collect::<Vec<_>>()
        .join(" ");
    let ret = crate::pretty::type_to_source(&sig.ret);
    let vars = if g.vars.is_empty() {
        String::new()
    } else {
        format!(" {}", g.vars.join(" "))
    };
    vec![
        format!("generic {}{} :: {} -> {}", g.name, vars, args, ret),
        "generics are not supported; port this definition by hand".to_string(),
    ]
}

pub(crate) fn erase_type(tr: &mut Translator, t: &AttrType) -> AttrType {
    let (erased, report) = uniqueness::erase(t);
    if !report.is_empty() {
        tr.uniq.merge(report);
    }
    erased
}
