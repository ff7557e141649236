//! Structured diagnostics with a fixed rule registry.

use crate::span::Span;
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        };
        write!(f, "{s}")
    }
}

/// Stable rule identifiers. Every diagnostic carries one of these so that
/// tooling can filter on them without parsing messages.
pub mod rules {
    /// A lexical error stopped processing of the file.
    pub const LEX_ERROR: &str = "lex-error";
    /// Indentation could not be resolved into blocks.
    pub const LAYOUT_ERROR: &str = "layout-error";
    /// A syntax error stopped processing of the file.
    pub const PARSE_ERROR: &str = "parse-error";
    /// Module header kind did not match the file extension.
    pub const KIND_MISMATCH: &str = "kind-mismatch";
    /// Header and implementation module names differ.
    pub const MODULE_NAME_MISMATCH: &str = "module-name-mismatch";
    /// Module name does not match the file name stem.
    pub const FILENAME_MODULE_MISMATCH: &str = "filename-module-mismatch";
    /// Generic (polytypic) declarations have no mechanical translation.
    pub const GENERICS_UNSUPPORTED: &str = "generics-unsupported";
    /// Uniqueness attributes were erased from a signature or type.
    pub const UNIQUENESS_ERASED: &str = "uniqueness-erased";
    /// An attribute constraint names a variable absent from the signature.
    pub const UNKNOWN_ATTR_VAR: &str = "unknown-attr-var";
    /// A constraint cycle forces attribute variables to be equally unique.
    pub const EQUAL_UNIQUENESS: &str = "equal-uniqueness";
    /// A `Start` function threading the world was renamed to `main`.
    pub const START_WORLD_THREADING: &str = "start-world-threading";
    /// A pure `Start` value was renamed and wrapped in a `main` binding.
    pub const START_RENAMED: &str = "start-renamed";
    /// A construct outside the translated subset.
    pub const UNSUPPORTED_CONSTRUCT: &str = "unsupported-construct";
    /// A record literal's field set matches more than one record type.
    pub const RECORD_AMBIGUOUS: &str = "record-ambiguous";
    /// A record literal's field set matches no record type in scope.
    pub const RECORD_UNKNOWN: &str = "record-unknown";
    /// Naming a single-member class collided with an existing name.
    pub const CLASS_NAME_COLLISION: &str = "class-name-collision";
    /// A name is declared in the header but missing from the implementation.
    pub const MISSING_IMPLEMENTATION: &str = "missing-implementation";
    /// Header and implementation declare structurally different types.
    pub const SIGNATURE_MISMATCH: &str = "signature-mismatch";
    /// Header and implementation differ only in uniqueness attributes.
    pub const UNIQUENESS_ATTR_MISMATCH: &str = "uniqueness-attr-mismatch";
    /// A name defined in the implementation is not exported.
    pub const PRIVATE_NAME: &str = "private-name";
    /// No definition module was found next to the implementation.
    pub const STANDALONE_NO_DCL: &str = "standalone-no-dcl";
}

/// A structured warning or error tied to a source span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub rule_id: &'static str,
    pub span: Span,
    pub message: String,
    pub suggestion: Option<String>,
}

impl Diagnostic {
    pub fn new(
        severity: Severity,
        rule_id: &'static str,
        span: Span,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            severity,
            rule_id,
            span,
            message: message.into(),
            suggestion: None,
        }
    }

    pub fn error(rule_id: &'static str, span: Span, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, rule_id, span, message)
    }

    pub fn warning(rule_id: &'static str, span: Span, message: impl Into<String>) -> Self {
        Self::new(Severity::Warning, rule_id, span, message)
    }

    pub fn info(rule_id: &'static str, span: Span, message: impl Into<String>) -> Self {
        Self::new(Severity::Info, rule_id, span, message)
    }

    pub fn with_suggestion(mut self, s: impl Into<String>) -> Self {
        self.suggestion = Some(s.into());
        self
    }

    /// Sort key used by reports: position first, then rule id.
    pub fn sort_key(&self) -> (u32, u32, &'static str) {
        (self.span.start.line, self.span.start.column, self.rule_id)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}[{}]: {}",
            self.span.start.line, self.span.start.column, self.severity, self.rule_id, self.message
        )
    }
}
