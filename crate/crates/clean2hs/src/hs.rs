//! The target-side syntax tree.
//!
//! A deliberately small slice of Haskell: just the declarations and
//! expression forms the translation rules produce. The tree stores no
//! parentheses; the emitter reinserts the minimal set from operator
//! fixities.

use crate::ast::{Assoc, Fixity};
use std::collections::BTreeSet;
use std::fmt;

/// GHC extensions the translator is allowed to demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extension {
    BangPatterns,
    ExistentialQuantification,
    FunctionalDependencies,
    GADTs,
    MultiParamTypeClasses,
    NamedFieldPuns,
    OverloadedStrings,
    ParallelListComp,
    RankNTypes,
}

impl Extension {
    pub const ALL: [Extension; 9] = [
        Extension::BangPatterns,
        Extension::ExistentialQuantification,
        Extension::FunctionalDependencies,
        Extension::GADTs,
        Extension::MultiParamTypeClasses,
        Extension::NamedFieldPuns,
        Extension::OverloadedStrings,
        Extension::ParallelListComp,
        Extension::RankNTypes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Extension::BangPatterns => "BangPatterns",
            Extension::ExistentialQuantification => "ExistentialQuantification",
            Extension::FunctionalDependencies => "FunctionalDependencies",
            Extension::GADTs => "GADTs",
            Extension::MultiParamTypeClasses => "MultiParamTypeClasses",
            Extension::NamedFieldPuns => "NamedFieldPuns",
            Extension::OverloadedStrings => "OverloadedStrings",
            Extension::ParallelListComp => "ParallelListComp",
            Extension::RankNTypes => "RankNTypes",
        }
    }

    pub fn from_name(name: &str) -> Option<Extension> {
        Extension::ALL.into_iter().find(|e| e.name() == name)
    }
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A sorted set of extensions. Iteration order is lexicographic, which
/// keeps the pragma header stable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtensionSet(BTreeSet<Extension>);

impl ExtensionSet {
    pub fn new() -> Self {
        ExtensionSet::default()
    }

    pub fn single(ext: Extension) -> Self {
        let mut s = ExtensionSet::new();
        s.insert(ext);
        s
    }

    pub fn insert(&mut self, ext: Extension) {
        self.0.insert(ext);
    }

    pub fn remove(&mut self, ext: Extension) {
        self.0.remove(&ext);
    }

    pub fn extend(&mut self, other: &ExtensionSet) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn contains(&self, ext: Extension) -> bool {
        self.0.contains(&ext)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = Extension> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<Extension> for ExtensionSet {
    fn from_iter<T: IntoIterator<Item = Extension>>(iter: T) -> Self {
        ExtensionSet(iter.into_iter().collect())
    }
}

/// A complete target module.
#[derive(Debug, Clone, PartialEq)]
pub struct HsModule {
    pub name: String,
    /// `None` renders `module M where` (everything exported).
    pub exports: Option<Vec<HsExport>>,
    pub pragmas: ExtensionSet,
    pub imports: Vec<HsImport>,
    pub decls: Vec<HsDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HsExport {
    Value(String),
    /// Abstract: the bare type name, constructors hidden.
    Type(String),
    /// `T(..)`: type with all constructors.
    TypeWithCtors(String),
    /// `C(..)`: class with its members.
    Class(String),
}

impl HsExport {
    pub fn name(&self) -> &str {
        match self {
            HsExport::Value(n)
            | HsExport::Type(n)
            | HsExport::TypeWithCtors(n)
            | HsExport::Class(n) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsImport {
    pub module: String,
    pub qualified: bool,
    /// `Some(names)` renders an import list.
    pub names: Option<Vec<String>>,
}

impl HsImport {
    pub fn whole(module: impl Into<String>) -> Self {
        HsImport {
            module: module.into(),
            qualified: false,
            names: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HsDecl {
    TypeSyn {
        name: String,
        params: Vec<String>,
        ty: HsType,
    },
    Data {
        name: String,
        params: Vec<String>,
        ctors: Vec<HsCtor>,
    },
    Newtype {
        name: String,
        params: Vec<String>,
        ctor: HsCtor,
    },
    Class {
        context: Vec<HsConstraint>,
        name: String,
        params: Vec<String>,
        /// `m -> s` style dependencies: (determiners, determined).
        fundeps: Vec<(Vec<String>, Vec<String>)>,
        members: Vec<HsDecl>,
    },
    Instance {
        context: Vec<HsConstraint>,
        class: String,
        types: Vec<HsType>,
        members: Vec<HsDecl>,
    },
    Sig {
        name: String,
        context: Vec<HsConstraint>,
        ty: HsType,
    },
    Fixity {
        assoc: Assoc,
        prec: u8,
        op: String,
    },
    Bind {
        name: String,
        clauses: Vec<HsClause>,
    },
    PatBind {
        pat: HsPattern,
        rhs: HsRhs,
        where_defs: Vec<HsDecl>,
    },
    /// Lines rendered as `--` comments, used for constructs that have no
    /// mechanical translation and ship as annotated source instead.
    Comment(Vec<String>),
}

impl HsDecl {
    /// The name this declaration introduces, when it has a single one.
    pub fn name(&self) -> Option<&str> {
        match self {
            HsDecl::TypeSyn { name, .. }
            | HsDecl::Data { name, .. }
            | HsDecl::Newtype { name, .. }
            | HsDecl::Class { name, .. }
            | HsDecl::Sig { name, .. }
            | HsDecl::Bind { name, .. } => Some(name),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HsClause {
    pub params: Vec<HsPattern>,
    pub rhs: HsRhs,
    pub where_defs: Vec<HsDecl>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HsRhs {
    Simple(HsExpr),
    /// `| g = e` alternatives; the translator supplies `otherwise` for a
    /// trailing unguarded case.
    Guarded(Vec<(HsExpr, HsExpr)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HsCtor {
    pub forall_vars: Vec<String>,
    pub context: Vec<HsConstraint>,
    pub name: String,
    pub fields: HsFields,
}

impl HsCtor {
    pub fn plain(name: impl Into<String>, args: Vec<HsBangType>) -> Self {
        HsCtor {
            forall_vars: Vec::new(),
            context: Vec::new(),
            name: name.into(),
            fields: HsFields::Positional(args),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HsFields {
    Positional(Vec<HsBangType>),
    Record(Vec<(String, HsBangType)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HsBangType {
    pub strict: bool,
    pub ty: HsType,
}

impl HsBangType {
    pub fn lazy(ty: HsType) -> Self {
        HsBangType { strict: false, ty }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsConstraint {
    pub class: String,
    pub args: Vec<HsType>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HsType {
    Var(String),
    /// Constructor application; nullary for base types.
    Con(String, Vec<HsType>),
    Fun(Box<HsType>, Box<HsType>),
    Tuple(Vec<HsType>),
    List(Box<HsType>),
    Forall {
        vars: Vec<String>,
        context: Vec<HsConstraint>,
        body: Box<HsType>,
    },
}

impl HsType {
    pub fn con0(name: impl Into<String>) -> HsType {
        HsType::Con(name.into(), Vec::new())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HsPattern {
    Wild,
    Var(String),
    As(String, Box<HsPattern>),
    Con(String, Vec<HsPattern>),
    Lit(HsLit),
    Neg(HsLit),
    Tuple(Vec<HsPattern>),
    List(Vec<HsPattern>),
    Cons(Box<HsPattern>, Box<HsPattern>),
    Record {
        ctor: String,
        /// `None` value is a pun.
        fields: Vec<(String, Option<HsPattern>)>,
    },
    Bang(Box<HsPattern>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum HsExpr {
    Var(String),
    Con(String),
    Lit(HsLit),
    App(Box<HsExpr>, Vec<HsExpr>),
    BinOp {
        op: String,
        lhs: Box<HsExpr>,
        rhs: Box<HsExpr>,
    },
    Neg(Box<HsExpr>),
    If {
        cond: Box<HsExpr>,
        then_branch: Box<HsExpr>,
        else_branch: Box<HsExpr>,
    },
    Case {
        scrutinee: Box<HsExpr>,
        alts: Vec<HsAlt>,
    },
    Let {
        defs: Vec<HsDecl>,
        body: Box<HsExpr>,
    },
    Lambda {
        params: Vec<HsPattern>,
        body: Box<HsExpr>,
    },
    Tuple(Vec<HsExpr>),
    List(Vec<HsExpr>),
    Range {
        from: Box<HsExpr>,
        then: Option<Box<HsExpr>>,
        to: Option<Box<HsExpr>>,
    },
    /// One branch is a plain comprehension; several are parallel
    /// (`[e | a <- as | b <- bs]`).
    ListComp {
        head: Box<HsExpr>,
        branches: Vec<Vec<HsQual>>,
    },
    RecordCon {
        ctor: String,
        /// `None` value is a pun.
        fields: Vec<(String, Option<HsExpr>)>,
    },
    RecordUpdate {
        base: Box<HsExpr>,
        fields: Vec<(String, HsExpr)>,
    },
    Annot {
        expr: Box<HsExpr>,
        ty: HsType,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HsAlt {
    pub pat: HsPattern,
    pub rhs: HsRhs,
    pub where_defs: Vec<HsDecl>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HsQual {
    Gen(HsPattern, HsExpr),
    Guard(HsExpr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum HsLit {
    Int(i64),
    /// Original digits preserved; reals never round-trip through floats.
    Real(String),
    Char(String),
    Str(String),
}

/// Whether an operator name is alphabetic and so renders in backticks.
pub fn is_alpha_op(op: &str) -> bool {
    op.chars()
        .next()
        .map_or(false, |c| c.is_ascii_alphabetic() || c == '_')
}

/// Standard fixities for the operators the translation emits. Unknown
/// operators get the language default.
pub fn hs_fixity(op: &str) -> Fixity {
    let (assoc, prec) = match op {
        "." | "!!" => (Assoc::Right, 9),
        "!" | "//" => (Assoc::Left, 9),
        "^" | "^^" | "**" => (Assoc::Right, 8),
        "*" | "/" => (Assoc::Left, 7),
        "div" | "mod" | "rem" | "quot" => (Assoc::Left, 7),
        "+" | "-" => (Assoc::Left, 6),
        ":" | "++" => (Assoc::Right, 5),
        "==" | "/=" | "<" | "<=" | ">" | ">=" => (Assoc::None, 4),
        "elem" | "notElem" => (Assoc::None, 4),
        "&&" => (Assoc::Right, 3),
        "||" => (Assoc::Right, 2),
        "$" | "$!" | "seq" => (Assoc::Right, 0),
        _ => (Assoc::Left, 9),
    };
    Fixity { assoc, prec }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_names_round_trip() {
        for ext in Extension::ALL {
            assert_eq!(Extension::from_name(ext.name()), Some(ext));
        }
        assert_eq!(Extension::from_name("TypeFamilies"), None);
    }

    #[test]
    fn extension_set_iterates_sorted() {
        let mut s = ExtensionSet::new();
        s.insert(Extension::RankNTypes);
        s.insert(Extension::BangPatterns);
        s.insert(Extension::NamedFieldPuns);
        let names: Vec<&str> = s.iter().map(|e| e.name()).collect();
        assert_eq!(names, ["BangPatterns", "NamedFieldPuns", "RankNTypes"]);
    }

    #[test]
    fn alphabetic_operators_are_recognized() {
        assert!(is_alpha_op("mod"));
        assert!(!is_alpha_op("++"));
        assert!(!is_alpha_op(":"));
    }

    #[test]
    fn cons_is_right_associative_at_five() {
        let f = hs_fixity(":");
        assert_eq!((f.assoc, f.prec), (Assoc::Right, 5));
    }
}
