//! Lexical tokens.

use crate::span::Span;
use std::fmt;

/// Reserved words of the source language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kw {
    Module,
    Implementation,
    Definition,
    System,
    Import,
    From,
    Where,
    In,
    Of,
    Case,
    If,
    Let,
    With,
    Class,
    Instance,
    Generic,
    Derive,
    Infixl,
    Infixr,
    Infix,
    Dynamic,
    Start,
}

impl Kw {
    pub fn from_str(s: &str) -> Option<Kw> {
        Some(match s {
            "module" => Kw::Module,
            "implementation" => Kw::Implementation,
            "definition" => Kw::Definition,
            "system" => Kw::System,
            "import" => Kw::Import,
            "from" => Kw::From,
            "where" => Kw::Where,
            "in" => Kw::In,
            "of" => Kw::Of,
            "case" => Kw::Case,
            "if" => Kw::If,
            "let" => Kw::Let,
            "with" => Kw::With,
            "class" => Kw::Class,
            "instance" => Kw::Instance,
            "generic" => Kw::Generic,
            "derive" => Kw::Derive,
            "infixl" => Kw::Infixl,
            "infixr" => Kw::Infixr,
            "infix" => Kw::Infix,
            "dynamic" => Kw::Dynamic,
            "Start" => Kw::Start,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kw::Module => "module",
            Kw::Implementation => "implementation",
            Kw::Definition => "definition",
            Kw::System => "system",
            Kw::Import => "import",
            Kw::From => "from",
            Kw::Where => "where",
            Kw::In => "in",
            Kw::Of => "of",
            Kw::Case => "case",
            Kw::If => "if",
            Kw::Let => "let",
            Kw::With => "with",
            Kw::Class => "class",
            Kw::Instance => "instance",
            Kw::Generic => "generic",
            Kw::Derive => "derive",
            Kw::Infixl => "infixl",
            Kw::Infixr => "infixr",
            Kw::Infix => "infix",
            Kw::Dynamic => "dynamic",
            Kw::Start => "Start",
        }
    }
}

/// Operator and punctuation symbols. Multi-character symbols are lexed
/// with maximal munch, so `:==` is one token and never `:` `==`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sym {
    /// `:==` type synonym introduction
    ColonEqEq,
    /// `=:` as-pattern / newtype introduction
    EqColon,
    /// `:=` assignment-style update (parsed but unused by the subset)
    ColonEq,
    /// `::` type annotation
    DColon,
    /// `#!` strict let-before
    HashBang,
    /// `#` let-before
    Hash,
    /// `\\` comprehension header
    BackslashBackslash,
    /// `\` lambda
    Backslash,
    /// `<-:` array generator
    ArrowFromArray,
    /// `<-` list generator
    ArrowFrom,
    /// `<=` less-or-equal / attribute constraint
    Le,
    /// `>=`
    Ge,
    /// `<>` not-equal
    Ne,
    /// `<`
    Lt,
    /// `>`
    Gt,
    /// `==`
    EqEq,
    /// `=>` selective-import arrow
    FatArrow,
    /// `=`
    Eq,
    /// `->`
    Arrow,
    /// `+++` string concatenation
    PlusPlusPlus,
    /// `++` list concatenation
    PlusPlus,
    /// `+`
    Plus,
    /// `-`
    Minus,
    /// `*`
    Star,
    /// `/`
    Slash,
    /// `^`
    Caret,
    /// `&&`
    AmpAmp,
    /// `&`
    Amp,
    /// `||`
    PipePipe,
    /// `|`
    Pipe,
    /// `A.` universal quantifier
    ForallDot,
    /// `E.` existential quantifier
    ExistsDot,
    /// `..` range
    DotDot,
    /// `.`
    Dot,
    /// `!`
    Bang,
    /// `:`
    Colon,
    /// `,`
    Comma,
    /// `;`
    Semi,
    /// `?`
    Question,
    /// `~`
    Tilde,
    /// `(`
    LParen,
    /// `)`
    RParen,
    /// `[`
    LBracket,
    /// `]`
    RBracket,
    /// `{`
    LBrace,
    /// `}`
    RBrace,
}

impl Sym {
    pub fn as_str(self) -> &'static str {
        match self {
            Sym::ColonEqEq => ":==",
            Sym::EqColon => "=:",
            Sym::ColonEq => ":=",
            Sym::DColon => "::",
            Sym::HashBang => "#!",
            Sym::Hash => "#",
            Sym::BackslashBackslash => "\\\\",
            Sym::Backslash => "\\",
            Sym::ArrowFromArray => "<-:",
            Sym::ArrowFrom => "<-",
            Sym::Le => "<=",
            Sym::Ge => ">=",
            Sym::Ne => "<>",
            Sym::Lt => "<",
            Sym::Gt => ">",
            Sym::EqEq => "==",
            Sym::FatArrow => "=>",
            Sym::Eq => "=",
            Sym::Arrow => "->",
            Sym::PlusPlusPlus => "+++",
            Sym::PlusPlus => "++",
            Sym::Plus => "+",
            Sym::Minus => "-",
            Sym::Star => "*",
            Sym::Slash => "/",
            Sym::Caret => "^",
            Sym::AmpAmp => "&&",
            Sym::Amp => "&",
            Sym::PipePipe => "||",
            Sym::Pipe => "|",
            Sym::ForallDot => "A.",
            Sym::ExistsDot => "E.",
            Sym::DotDot => "..",
            Sym::Dot => ".",
            Sym::Bang => "!",
            Sym::Colon => ":",
            Sym::Comma => ",",
            Sym::Semi => ";",
            Sym::Question => "?",
            Sym::Tilde => "~",
            Sym::LParen => "(",
            Sym::RParen => ")",
            Sym::LBracket => "[",
            Sym::RBracket => "]",
            Sym::LBrace => "{",
            Sym::RBrace => "}",
        }
    }

    /// Bracketing and separator symbols, as opposed to operators.
    pub fn is_punctuation(self) -> bool {
        matches!(
            self,
            Sym::LParen
                | Sym::RParen
                | Sym::LBracket
                | Sym::RBracket
                | Sym::LBrace
                | Sym::RBrace
                | Sym::Comma
                | Sym::Semi
        )
    }
}

/// Token classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    /// Lowercase-initial identifier (also `_`).
    Ident,
    /// Uppercase-initial identifier, including the merged `?Ctor` forms.
    CtorIdent,
    /// An operator spelled from symbol characters that is not one of the
    /// known [`Sym`] forms, e.g. a user-defined `<+>`.
    OpIdent,
    IntLit,
    RealLit,
    /// A single quoted character, e.g. `'a'`.
    CharLit,
    /// The bracket-quote list-of-characters form, e.g. `['Hello']`.
    CharListLit,
    StringLit,
    Keyword(Kw),
    Sym(Sym),
    /// Synthetic block-open marker inserted by layout.
    LayoutOpen,
    /// Synthetic block-separator marker inserted by layout.
    LayoutSep,
    /// Synthetic block-close marker inserted by layout.
    LayoutClose,
}

impl TokenKind {
    pub fn is_layout(self) -> bool {
        matches!(
            self,
            TokenKind::LayoutOpen | TokenKind::LayoutSep | TokenKind::LayoutClose
        )
    }

    pub fn describe(self) -> String {
        match self {
            TokenKind::Ident => "identifier".into(),
            TokenKind::CtorIdent => "constructor identifier".into(),
            TokenKind::OpIdent => "operator".into(),
            TokenKind::IntLit => "integer literal".into(),
            TokenKind::RealLit => "real literal".into(),
            TokenKind::CharLit => "character literal".into(),
            TokenKind::CharListLit => "character list literal".into(),
            TokenKind::StringLit => "string literal".into(),
            TokenKind::Keyword(k) => format!("`{}`", k.as_str()),
            TokenKind::Sym(s) => format!("`{}`", s.as_str()),
            TokenKind::LayoutOpen => "start of block".into(),
            TokenKind::LayoutSep => "next block entry".into(),
            TokenKind::LayoutClose => "end of block".into(),
        }
    }
}

/// A comment, kept apart from the token stream. `text` is the content
/// between the comment markers, verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comment {
    pub style: CommentStyle,
    pub text: String,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommentStyle {
    /// `// ...`
    Line,
    /// `/* ... */`, possibly spanning lines.
    Block,
}

/// A lexical token: kind, the exact source slice, and its span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn new(kind: TokenKind, text: impl Into<String>, span: Span) -> Self {
        Token {
            kind,
            text: text.into(),
            span,
        }
    }

    pub fn is_sym(&self, s: Sym) -> bool {
        self.kind == TokenKind::Sym(s)
    }

    pub fn is_kw(&self, k: Kw) -> bool {
        self.kind == TokenKind::Keyword(k)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.is_layout() {
            write!(f, "{}", self.kind.describe())
        } else {
            write!(f, "`{}`", self.text)
        }
    }
}
