//! A source-to-source translator from a subset of Clean to Haskell.
//!
//! The pipeline runs in stages, each usable on its own:
//!
//! 1. [`lexer`] turns source text into tokens and applies the offside rule.
//! 2. [`parser`] builds a Clean syntax tree.
//! 3. [`uniqueness`] analyses and erases uniqueness attributes on types.
//! 4. [`translate`] maps the Clean tree onto a Haskell tree, tracking which
//!    GHC extensions the output needs.
//! 5. [`emit`] renders the Haskell tree as text.
//! 6. [`link`] combines definition and implementation modules into one
//!    translated module with an export list.
//! 7. [`cli`] wires the stages into a command-line tool.

pub mod ast;
pub mod cli;
pub mod diag;
pub mod emit;
pub mod hs;
pub mod lexer;
pub mod link;
pub mod parser;
pub mod pretty;
pub mod span;
pub mod token;
pub mod translate;
pub mod uniqueness;
