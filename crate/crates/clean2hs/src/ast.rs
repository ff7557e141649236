//! Syntax tree for the accepted Clean subset.
//!
//! The tree keeps enough structure for faithful translation but normalizes
//! away purely lexical choices: the three lambda body markers all parse to
//! the same node, and parentheses are implicit in the nesting. Source spans
//! are kept on declarations, expressions, patterns and types so later
//! stages can report positions.

use crate::span::Span;

/// Identifiers are plain strings; operator names keep their symbol text,
/// so the function defined by `(+) x y = ...` is named `+`.
pub type Name = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleFlavor {
    /// `module M`: a standalone program module.
    Plain,
    /// `implementation module M`
    Implementation,
    /// `definition module M`
    Definition,
    /// `system module M`
    System,
}

impl ModuleFlavor {
    pub fn describe(self) -> &'static str {
        match self {
            ModuleFlavor::Plain => "module",
            ModuleFlavor::Implementation => "implementation module",
            ModuleFlavor::Definition => "definition module",
            ModuleFlavor::System => "system module",
        }
    }

    /// Whether this header belongs to a definition (`.dcl`) file.
    pub fn is_definition(self) -> bool {
        self == ModuleFlavor::Definition
    }
}

pub use crate::token::{Comment, CommentStyle};

#[derive(Debug, Clone, PartialEq)]
pub struct CleanModule {
    pub flavor: ModuleFlavor,
    pub name: Name,
    pub imports: Vec<ImportDecl>,
    pub items: Vec<Item>,
    /// Comments in source order; items reference none of these directly,
    /// placement is recovered from spans.
    pub comments: Vec<Comment>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ImportDecl {
    /// `import M1, M2`
    Whole { modules: Vec<Name>, span: Span },
    /// `from M import f, g, :: T`
    Selective {
        module: Name,
        names: Vec<ImportEntry>,
        span: Span,
    },
}

/// One name in a selective import: `f`, `qualified f`, `:: T` for a type,
/// or `class C`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportEntry {
    pub name: Name,
    pub kind: ImportEntryKind,
    pub qualified: bool,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImportEntryKind {
    Value,
    Type,
    Class,
}

impl ImportDecl {
    pub fn span(&self) -> Span {
        match self {
            ImportDecl::Whole { span, .. } | ImportDecl::Selective { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    TypeDef(TypeDef),
    FunSig(FunSig),
    FunDef(FunDef),
    ClassDef(ClassDef),
    InstanceDef(InstanceDef),
    GenericDef(GenericDef),
    DeriveDecl(DeriveDecl),
}

impl Item {
    pub fn span(&self) -> Span {
        match self {
            Item::TypeDef(d) => d.span,
            Item::FunSig(s) => s.span,
            Item::FunDef(d) => d.span,
            Item::ClassDef(d) => d.span,
            Item::InstanceDef(d) => d.span,
            Item::GenericDef(d) => d.span,
            Item::DeriveDecl(d) => d.span,
        }
    }
}

/// A `::` type declaration. `body` is `None` for the abstract form that
/// definition modules use to hide a type's representation.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeDef {
    pub name: Name,
    pub params: Vec<Name>,
    pub body: Option<TypeDefBody>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TypeDefBody {
    /// `= C1 t | C2 ...`
    Algebraic(Vec<CtorDef>),
    /// `= { f :: t, ... }`
    Record(Vec<FieldDef>),
    /// `:== t`
    Synonym(AttrType),
    /// `=: C t`
    Newtype(CtorDef),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CtorDef {
    pub name: Name,
    /// Variables bound by a leading `E.a b:`.
    pub exist_vars: Vec<Name>,
    pub args: Vec<CtorArg>,
    /// Constraints on the constructor's variables, `& C t` after the
    /// arguments.
    pub context: Vec<ClassConstraint>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CtorArg {
    pub strict: bool,
    pub ty: AttrType,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldDef {
    pub name: Name,
    pub strict: bool,
    pub ty: AttrType,
    pub span: Span,
}

/// A function type signature, `name :: args -> ret | context, [constraints]`.
/// A signature with no `->` has an empty `args` list.
#[derive(Debug, Clone, PartialEq)]
pub struct FunSig {
    pub name: Name,
    pub fixity: Option<Fixity>,
    pub args: Vec<SigArg>,
    pub ret: AttrType,
    pub context: Vec<ClassConstraint>,
    pub attr_constraints: Vec<AttrConstraint>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigArg {
    pub strict: bool,
    pub ty: AttrType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fixity {
    pub assoc: Assoc,
    pub prec: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assoc {
    Left,
    Right,
    None,
}

/// A class constraint `C t1 .. tn` from a `|` context.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassConstraint {
    pub class: Name,
    pub args: Vec<AttrType>,
    pub span: Span,
}

/// A uniqueness-attribute inequality `l <= r` from a `, [l<=u]` suffix.
#[derive(Debug, Clone, PartialEq)]
pub struct AttrConstraint {
    pub left: Name,
    pub right: Name,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunDef {
    pub name: Name,
    pub fixity: Option<Fixity>,
    pub clauses: Vec<Clause>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub params: Vec<Pattern>,
    pub body: ClauseBody,
    pub where_defs: Vec<LocalDef>,
    pub with_defs: Vec<LocalDef>,
    pub span: Span,
}

/// The right-hand side of a clause or case alternative.
#[derive(Debug, Clone, PartialEq)]
pub enum ClauseBody {
    /// `= e`
    Simple(Expr),
    /// `| g1 = e1 | g2 = e2 ...`; a `None` guard is `otherwise`.
    Guarded(Vec<GuardedAlt>),
    /// One or more `#`/`#!` steps followed by the rest of the body.
    LetBefore {
        steps: Vec<LetStep>,
        rest: Box<ClauseBody>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GuardedAlt {
    pub guard: Option<Expr>,
    pub body: Box<ClauseBody>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LetStep {
    /// `#!` instead of `#`.
    pub strict: bool,
    pub pat: Pattern,
    pub expr: Expr,
    pub span: Span,
}

/// A definition local to a `where`, `with` or `let` block.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalDef {
    Fun(FunDef),
    Sig(FunSig),
    /// A non-variable left-hand side, e.g. `(q, r) = divMod a b`.
    PatBind {
        pat: Pattern,
        body: ClauseBody,
        span: Span,
    },
}

impl LocalDef {
    pub fn span(&self) -> Span {
        match self {
            LocalDef::Fun(d) => d.span,
            LocalDef::Sig(s) => s.span,
            LocalDef::PatBind { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassDef {
    pub name: Name,
    pub fixity: Option<Fixity>,
    pub params: Vec<ClassParam>,
    pub context: Vec<ClassConstraint>,
    pub members: Vec<ClassMember>,
    /// Set for the one-liner `class c a :: t` form, where the class
    /// declares a single member that shares its name.
    pub single_member: bool,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassParam {
    pub name: Name,
    /// Marked `~` in the head: the other parameters are determined by
    /// the marked ones.
    pub determines_rest: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassMember {
    Sig(FunSig),
    Def(FunDef),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceDef {
    pub class: Name,
    pub types: Vec<AttrType>,
    pub context: Vec<ClassConstraint>,
    pub members: Vec<LocalDef>,
    pub span: Span,
}

/// `generic name vars :: type`
#[derive(Debug, Clone, PartialEq)]
pub struct GenericDef {
    pub name: Name,
    pub vars: Vec<Name>,
    pub args: Vec<SigArg>,
    pub ret: AttrType,
    pub span: Span,
}

/// `derive name T1, T2`
#[derive(Debug, Clone, PartialEq)]
pub struct DeriveDecl {
    pub generic: Name,
    pub types: Vec<Name>,
    pub span: Span,
}

// ---------------------------------------------------------------------
// Types

/// A type with its uniqueness attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct AttrType {
    pub attr: Attr,
    pub shape: Shape,
    pub span: Span,
}

impl AttrType {
    pub fn new(attr: Attr, shape: Shape, span: Span) -> Self {
        AttrType { attr, shape, span }
    }

    pub fn plain(shape: Shape, span: Span) -> Self {
        AttrType {
            attr: Attr::None,
            shape,
            span,
        }
    }
}

/// Uniqueness attribute on a type position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Attr {
    /// Unattributed.
    None,
    /// `*t`: unique.
    Unique,
    /// `.t`: uniqueness-polymorphic, all dots in one signature coupled.
    Anonymous,
    /// `u:t`: named uniqueness variable.
    Var(Name),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Var(Name),
    /// Type constructor application, `T t1 .. tn`; basic types are
    /// nullary constructors.
    Con(Name, Vec<AttrType>),
    Fun(Box<AttrType>, Box<AttrType>),
    Tuple(Vec<AttrType>),
    List(Box<AttrType>),
    Array {
        flavor: ArrayFlavor,
        elem: Box<AttrType>,
    },
    /// `?t` optional type.
    Optional(Box<AttrType>),
    /// `A.a b: t` universal quantification in argument position.
    Forall { vars: Vec<Name>, body: Box<AttrType> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayFlavor {
    /// `{t}`
    Lazy,
    /// `{!t}`
    Strict,
    /// `{#t}`
    Unboxed,
}

// ---------------------------------------------------------------------
// Patterns

#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub kind: PatternKind,
    pub span: Span,
}

impl Pattern {
    pub fn new(kind: PatternKind, span: Span) -> Self {
        Pattern { kind, span }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PatternKind {
    Wild,
    Var(Name),
    /// `name =: pat`
    As(Name, Box<Pattern>),
    Ctor(Name, Vec<Pattern>),
    Lit(Lit),
    Tuple(Vec<Pattern>),
    /// `[p1, p2 : tail]`; `tail` is `None` for a closed list.
    List {
        elems: Vec<Pattern>,
        tail: Option<Box<Pattern>>,
    },
    /// `{ f1 = p1, f2 }`; a field without `= pat` binds a variable of
    /// the field's name.
    Record {
        ctor: Option<Name>,
        fields: Vec<FieldPattern>,
    },
    /// `(p :: t)` matching a dynamic against a type.
    Dynamic { pat: Box<Pattern>, ty: AttrType },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldPattern {
    pub field: Name,
    pub pat: Option<Pattern>,
    pub span: Span,
}

// ---------------------------------------------------------------------
// Expressions

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Var(Name),
    Ctor(Name),
    /// An operator used as a value, `(+)`.
    OpRef(Name),
    Lit(Lit),
    /// Application spine, `f a b`.
    App(Box<Expr>, Vec<Expr>),
    /// Infix application, already shaped by precedence.
    BinOp {
        op: Name,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    /// Unary minus.
    Neg(Box<Expr>),
    If {
        cond: Box<Expr>,
        then_branch: Box<Expr>,
        else_branch: Box<Expr>,
    },
    Case {
        scrutinee: Box<Expr>,
        alts: Vec<CaseAlt>,
    },
    Let {
        defs: Vec<LocalDef>,
        body: Box<Expr>,
    },
    Lambda {
        params: Vec<Pattern>,
        body: Box<Expr>,
    },
    Tuple(Vec<Expr>),
    List {
        elems: Vec<Expr>,
        tail: Option<Box<Expr>>,
    },
    /// `[from, then .. to]` with optional `then` and `to`.
    Range {
        from: Box<Expr>,
        then: Option<Box<Expr>>,
        to: Option<Box<Expr>>,
    },
    ListComp {
        head: Box<Expr>,
        quals: Vec<QualGroup>,
    },
    /// `{e1, e2, ...}`
    ArrayLit(Vec<Expr>),
    /// `{e \\ quals}`
    ArrayComp {
        head: Box<Expr>,
        quals: Vec<QualGroup>,
    },
    /// `a.[i]`, or `a![i]` when `unique` is set: selection from a unique
    /// array returns the element together with the array.
    ArraySelect {
        arr: Box<Expr>,
        index: Box<Expr>,
        unique: bool,
    },
    /// `{a & [i] = v, ...}`
    ArrayUpdate {
        arr: Box<Expr>,
        updates: Vec<(Expr, Expr)>,
    },
    /// `{x = e, ...}` or `{R | x = e, ...}`
    RecordLit {
        ctor: Option<Name>,
        fields: Vec<FieldAssign>,
    },
    /// `{r & x = e, ...}`
    RecordUpdate {
        base: Box<Expr>,
        fields: Vec<FieldAssign>,
    },
    /// `r.f`, or `r!f` when `unique` is set: selection from a unique
    /// record returns the field together with the record.
    FieldSelect {
        base: Box<Expr>,
        field: Name,
        unique: bool,
    },
    /// `dynamic e` / `dynamic e :: t`
    Dynamic {
        expr: Box<Expr>,
        ty: Option<AttrType>,
    },
    /// `e =: p` used as a predicate: true when `e` matches the pattern.
    AsPredicate { scrutinee: Box<Expr>, pat: Pattern },
    /// `e :: t` type annotation.
    Annot { expr: Box<Expr>, ty: AttrType },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldAssign {
    pub field: Name,
    /// `None` is the punned form `{x}` meaning `x = x`.
    pub value: Option<Expr>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseAlt {
    pub pat: Pattern,
    pub body: ClauseBody,
    pub span: Span,
}

/// One comprehension stage: generators drawn in lockstep, then filters.
/// Stages nest left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct QualGroup {
    pub gens: Vec<Generator>,
    pub filters: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub pat: Pattern,
    pub source: GenSource,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenSource {
    /// `<- e`, drawing from a list.
    List(Expr),
    /// `<-: e`, drawing from an array.
    Array(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Lit {
    Int(i64),
    /// Source text of the literal, e.g. `38.0`; kept verbatim so emission
    /// does not reformat it.
    Real(String),
    /// Content between the quotes of `'c'`, escapes unexpanded.
    Char(String),
    /// Content between the quotes of `['chars']`, escapes unexpanded.
    CharList(String),
    /// Content between the quotes of `"text"`, escapes unexpanded.
    Str(String),
}
