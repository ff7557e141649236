//! Joins a definition module (`.dcl`) with its implementation (`.icl`).
//!
//! The definition module is Clean's interface file: only what it declares
//! is exported. Linking turns those declarations into the export list of
//! the translated module and cross-checks the pair, reporting names that
//! lack an implementation, signatures that disagree between the two files,
//! and implementation names kept private.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ast::*;
use crate::diag::{rules, Diagnostic};
use crate::hs::{HsDecl, HsExport, HsModule};
use crate::pretty;
use crate::span::Span;
use crate::translate::{translate_module, TranslateOptions, Translation};
use crate::uniqueness::propagate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("definition module `{dcl}` does not match implementation module `{icl}`")]
    ModuleNameMismatch { dcl: Name, icl: Name },
}

/// How one exported name appears in the module header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportKind {
    Function,
    /// A bare type name: abstract types and synonyms, constructors hidden.
    Type,
    /// A type together with all of its constructors.
    TypeWithCtors,
    Class,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExportItem {
    pub kind: ExportKind,
    pub name: Name,
}

/// The names a linked module exposes, in definition-module order. Every
/// item names a declaration present in the implementation module.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExportList {
    pub items: Vec<ExportItem>,
}

/// Compute the export list for a module pair and check the two files
/// against each other. Diagnostics cover declared names with no
/// implementation (error), signatures that disagree structurally (error)
/// or only in uniqueness attributes (warning), and implementation names
/// absent from the definition module (info).
pub fn link(
    dcl: &CleanModule,
    icl: &CleanModule,
) -> Result<(ExportList, Vec<Diagnostic>), LinkError> {
    if dcl.name != icl.name {
        return Err(LinkError::ModuleNameMismatch {
            dcl: dcl.name.clone(),
            icl: icl.name.clone(),
        });
    }

    let declared = Declarations::collect(dcl);
    let implemented = Declarations::collect(icl);
    let mut diags = Vec::new();
    let mut items = Vec::new();

    for entry in &declared.order {
        if !implemented.names.contains_key(&entry.key()) {
            diags.push(
                Diagnostic::error(
                    rules::MISSING_IMPLEMENTATION,
                    entry.span,
                    format!(
                        "`{}` is declared in the definition module but has no implementation",
                        entry.name
                    ),
                )
                .with_suggestion(format!(
                    "define `{}` in {}.icl or drop it from {}.dcl",
                    entry.name, icl.name, dcl.name
                )),
            );
            continue;
        }
        items.push(ExportItem {
            kind: entry.export_kind(),
            name: entry.name.to_string(),
        });
        if let (Some(want), Some(have)) = (
            declared.sigs.get(entry.name).copied(),
            implemented.sigs.get(entry.name).copied(),
        ) {
            check_signature(want, have, &mut diags);
        }
    }

    for entry in &implemented.order {
        if !declared.names.contains_key(&entry.key()) {
            diags.push(
                Diagnostic::info(
                    rules::PRIVATE_NAME,
                    entry.span,
                    format!("`{}` is private to the implementation module", entry.name),
                )
                .with_suggestion(format!(
                    "declare `{}` in {}.dcl to export it",
                    entry.name, dcl.name
                )),
            );
        }
    }

    diags.sort_by_key(|d| d.sort_key());
    Ok((ExportList { items }, diags))
}

/// Translate an implementation module under its definition module's export
/// list. Without a definition module the translated module exports
/// everything, and an info diagnostic records the standalone mode.
pub fn translate_linked(
    dcl: Option<&CleanModule>,
    icl: &CleanModule,
    opts: &TranslateOptions,
) -> Result<Translation, LinkError> {
    let Some(dcl) = dcl else {
        let mut t = translate_module(icl, None, opts);
        t.diagnostics.push(Diagnostic::info(
            rules::STANDALONE_NO_DCL,
            Span::point(icl.span.start),
            format!("no definition module for `{}`; everything is exported", icl.name),
        ));
        t.diagnostics.sort_by_key(|d| d.sort_key());
        return Ok(t);
    };

    let (exports, link_diags) = link(dcl, icl)?;
    let mut t = translate_module(icl, None, opts);
    t.module.exports = Some(hs_exports(&exports, &t.module));
    t.diagnostics.extend(link_diags);
    t.diagnostics.sort_by_key(|d| d.sort_key());
    Ok(t)
}

/// Render export items against the translated module, following the
/// renames translation applies: lowercase classes gain a capital (and
/// sometimes a `C` suffix), and `Start` becomes `start` or `main`.
fn hs_exports(list: &ExportList, module: &HsModule) -> Vec<HsExport> {
    let mut out = Vec::new();
    for item in &list.items {
        match item.kind {
            ExportKind::Function if item.name == "Start" => {
                // `start` is the renamed pure value; the generated `main`
                // must stay visible for the module to keep working as a
                // program entry point.
                if decl_named(module, "start") {
                    out.push(HsExport::Value("start".to_string()));
                }
                if decl_named(module, "main") {
                    out.push(HsExport::Value("main".to_string()));
                }
            }
            ExportKind::Function => out.push(HsExport::Value(item.name.clone())),
            ExportKind::Type => out.push(HsExport::Type(item.name.clone())),
            ExportKind::TypeWithCtors => out.push(HsExport::TypeWithCtors(item.name.clone())),
            ExportKind::Class => out.push(HsExport::Class(class_decl_name(module, &item.name))),
        }
    }
    out
}

fn decl_named(module: &HsModule, name: &str) -> bool {
    module.decls.iter().any(|d| d.name() == Some(name))
}

/// The translated name of a source class: the class declaration whose name
/// is the source name, its capitalization, or the collision-suffixed form.
fn class_decl_name(module: &HsModule, source: &str) -> String {
    let mut cap: String = source
        .chars()
        .next()
        .map(|c| c.to_uppercase().chain(source.chars().skip(1)).collect())
        .unwrap_or_default();
    if source == "TC" {
        cap = "Typeable".to_string();
    }
    let suffixed = format!("{cap}C");
    for candidate in [source, cap.as_str(), suffixed.as_str()] {
        let found = module.decls.iter().any(|d| {
            matches!(d, HsDecl::Class { name, .. } if name == candidate)
        });
        if found {
            return candidate.to_string();
        }
    }
    cap
}

// ---------------------------------------------------------------------
// Declared names

/// Clean keeps functions, types and classes in separate namespaces, so
/// declarations are matched between the two files per namespace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Space {
    Value,
    Type,
    Class,
}

#[derive(Debug)]
struct Entry<'a> {
    space: Space,
    name: &'a str,
    span: Span,
    /// The type definition's body, for choosing the export form.
    type_body: Option<&'a Option<TypeDefBody>>,
}

impl Entry<'_> {
    fn key(&self) -> (Space, &str) {
        (self.space, self.name)
    }

    fn export_kind(&self) -> ExportKind {
        match self.space {
            Space::Value => ExportKind::Function,
            Space::Class => ExportKind::Class,
            Space::Type => match self.type_body {
                // Abstract types hide their constructors; synonyms have
                // none to show.
                Some(None) | Some(Some(TypeDefBody::Synonym(_))) => ExportKind::Type,
                _ => ExportKind::TypeWithCtors,
            },
        }
    }
}

/// Every linkable name one module declares: functions (signatures and
/// definitions), types, and classes. Instances have no name of their own
/// and generics are outside the translated subset, so neither links.
struct Declarations<'a> {
    /// Source order, first occurrence per name.
    order: Vec<Entry<'a>>,
    names: BTreeMap<(Space, &'a str), usize>,
    sigs: BTreeMap<&'a str, &'a FunSig>,
}

impl<'a> Declarations<'a> {
    fn collect(m: &'a CleanModule) -> Self {
        let mut d = Declarations {
            order: Vec::new(),
            names: BTreeMap::new(),
            sigs: BTreeMap::new(),
        };
        for item in &m.items {
            match item {
                Item::FunSig(sig) => {
                    d.insert(Space::Value, &sig.name, sig.span, None);
                    d.sigs.entry(sig.name.as_str()).or_insert(sig);
                }
                Item::FunDef(def) => d.insert(Space::Value, &def.name, def.span, None),
                Item::TypeDef(def) => {
                    d.insert(Space::Type, &def.name, def.span, Some(&def.body))
                }
                Item::ClassDef(def) => d.insert(Space::Class, &def.name, def.span, None),
                Item::InstanceDef(_) | Item::GenericDef(_) | Item::DeriveDecl(_) => {}
            }
        }
        d
    }

    fn insert(
        &mut self,
        space: Space,
        name: &'a str,
        span: Span,
        type_body: Option<&'a Option<TypeDefBody>>,
    ) {
        if self.names.contains_key(&(space, name)) {
            return;
        }
        self.names.insert((space, name), self.order.len());
        self.order.push(Entry {
            space,
            name,
            span,
            type_body,
        });
    }
}

// ---------------------------------------------------------------------
// Signature comparison

fn check_signature(want: &FunSig, have: &FunSig, diags: &mut Vec<Diagnostic>) {
    let declared = propagate(&curried(want));
    let implemented = propagate(&curried(have));
    match compare(&declared, &implemented) {
        SigMatch::Equal => {}
        SigMatch::AttrsDiffer => diags.push(
            Diagnostic::warning(
                rules::UNIQUENESS_ATTR_MISMATCH,
                have.span,
                format!(
                    "uniqueness attributes of `{}` differ between the definition and \
                     implementation modules",
                    have.name
                ),
            )
            .with_suggestion(
                "attributes are erased in translation, so the output is unaffected",
            ),
        ),
        SigMatch::ShapesDiffer => diags.push(Diagnostic::error(
            rules::SIGNATURE_MISMATCH,
            have.span,
            format!(
                "`{}` is implemented at type `{}` but declared at type `{}`",
                have.name,
                pretty::type_to_source(&curried(have)),
                pretty::type_to_source(&curried(want)),
            ),
        )),
    }
    if !contexts_equal(&want.context, &have.context) {
        diags.push(Diagnostic::error(
            rules::SIGNATURE_MISMATCH,
            have.span,
            format!(
                "`{}` has class context `{}` in the implementation but `{}` in the \
                 definition module",
                have.name,
                render_context(&have.context),
                render_context(&want.context),
            ),
        ));
    }
}

/// A signature folded into one curried arrow type, so that `a b -> c` and
/// `a -> b -> c` spellings compare equal.
fn curried(sig: &FunSig) -> AttrType {
    sig.args.iter().rev().fold(sig.ret.clone(), |ret, arg| {
        let span = arg.ty.span;
        AttrType::plain(Shape::Fun(Box::new(arg.ty.clone()), Box::new(ret)), span)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SigMatch {
    Equal,
    AttrsDiffer,
    ShapesDiffer,
}

fn compare(a: &AttrType, b: &AttrType) -> SigMatch {
    let mut vars = Bijection::default();
    let mut attr_vars = Bijection::default();
    let mut attrs_equal = true;
    if !shapes_equal(a, b, &mut vars, &mut attr_vars, &mut attrs_equal) {
        SigMatch::ShapesDiffer
    } else if !attrs_equal {
        SigMatch::AttrsDiffer
    } else {
        SigMatch::Equal
    }
}

/// Pairs variable names across the two signatures, so `a -> a` matches
/// `b -> b` but not `a -> b`.
#[derive(Default)]
struct Bijection<'a> {
    fwd: BTreeMap<&'a str, &'a str>,
    rev: BTreeMap<&'a str, &'a str>,
}

impl<'a> Bijection<'a> {
    fn pair(&mut self, a: &'a str, b: &'a str) -> bool {
        match (self.fwd.get(a), self.rev.get(b)) {
            (None, None) => {
                self.fwd.insert(a, b);
                self.rev.insert(b, a);
                true
            }
            (Some(&to), Some(&from)) => to == b && from == a,
            _ => false,
        }
    }
}

fn shapes_equal<'a>(
    a: &'a AttrType,
    b: &'a AttrType,
    vars: &mut Bijection<'a>,
    attr_vars: &mut Bijection<'a>,
    attrs_equal: &mut bool,
) -> bool {
    let attr_match = match (&a.attr, &b.attr) {
        (Attr::None, Attr::None)
        | (Attr::Unique, Attr::Unique)
        | (Attr::Anonymous, Attr::Anonymous) => true,
        (Attr::Var(x), Attr::Var(y)) => attr_vars.pair(x, y),
        _ => false,
    };
    if !attr_match {
        *attrs_equal = false;
    }
    match (&a.shape, &b.shape) {
        (Shape::Var(x), Shape::Var(y)) => vars.pair(x, y),
        (Shape::Con(n, xs), Shape::Con(m, ys)) => {
            n == m && each_equal(xs, ys, vars, attr_vars, attrs_equal)
        }
        (Shape::Tuple(xs), Shape::Tuple(ys)) => {
            each_equal(xs, ys, vars, attr_vars, attrs_equal)
        }
        (Shape::Fun(x1, r1), Shape::Fun(x2, r2)) => {
            shapes_equal(x1, x2, vars, attr_vars, attrs_equal)
                && shapes_equal(r1, r2, vars, attr_vars, attrs_equal)
        }
        (Shape::List(x), Shape::List(y)) | (Shape::Optional(x), Shape::Optional(y)) => {
            shapes_equal(x, y, vars, attr_vars, attrs_equal)
        }
        (
            Shape::Array {
                flavor: f1,
                elem: e1,
            },
            Shape::Array {
                flavor: f2,
                elem: e2,
            },
        ) => f1 == f2 && shapes_equal(e1, e2, vars, attr_vars, attrs_equal),
        (
            Shape::Forall { vars: v1, body: b1 },
            Shape::Forall { vars: v2, body: b2 },
        ) => {
            v1.len() == v2.len()
                && v1.iter().zip(v2).all(|(x, y)| vars.pair(x, y))
                && shapes_equal(b1, b2, vars, attr_vars, attrs_equal)
        }
        _ => false,
    }
}

fn each_equal<'a>(
    xs: &'a [AttrType],
    ys: &'a [AttrType],
    vars: &mut Bijection<'a>,
    attr_vars: &mut Bijection<'a>,
    attrs_equal: &mut bool,
) -> bool {
    xs.len() == ys.len()
        && xs
            .iter()
            .zip(ys)
            .all(|(x, y)| shapes_equal(x, y, vars, attr_vars, attrs_equal))
}

fn contexts_equal(a: &[ClassConstraint], b: &[ClassConstraint]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.class == y.class
                && x.args.len() == y.args.len()
                && x.args
                    .iter()
                    .zip(&y.args)
                    .all(|(s, t)| compare(s, t) != SigMatch::ShapesDiffer)
        })
}

fn render_context(context: &[ClassConstraint]) -> String {
    context
        .iter()
        .map(|c| {
            let args: Vec<String> = c.args.iter().map(pretty::type_to_source).collect();
            format!("{} {}", c.class, args.join(" "))
        })
        .collect::<Vec<_>>()
        .join(" & ")
}
