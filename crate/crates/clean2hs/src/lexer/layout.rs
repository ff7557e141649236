//! Offside-rule processing: turns indentation into explicit block structure.
//!
//! `where`, `with`, `of` and `let` open a block at the column of the next
//! token. Later lines are compared against the enclosing block columns: a
//! line at the block column starts a new item (`LayoutSep`), a shallower
//! line closes the block (`LayoutClose`). Lines indented deeper continue
//! the current item and produce no markers.
//!
//! Two deviations from the plain offside rule match common source style:
//! `where` and `with` may sit at the same column as the definition they
//! belong to without ending it, and `in` closes the block opened by the
//! nearest `let`. Inside parentheses, brackets and braces the rule is
//! suspended, and a closing bracket closes any block opened inside it.
//!
//! Inserted markers carry empty text and zero-width spans, so the stream
//! stays lossless with respect to the original source.

use crate::span::{SourcePos, Span};
use crate::token::{Kw, Sym, Token, TokenKind};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error(
        "{pos}: inconsistent indentation: block body at column {found} \
         must be indented past column {enclosing}"
    )]
    InconsistentIndentation {
        pos: SourcePos,
        found: u32,
        enclosing: u32,
    },
}

#[derive(Debug, Clone, Copy)]
struct Ctx {
    col: u32,
    /// Opened by `let`, so a later `in` closes it.
    from_let: bool,
    /// Bracket nesting depth at open time; closing past it closes the block.
    open_depth: u32,
}

/// Insert layout markers for a whole module. The module header (up to the
/// module name) passes through untouched; the top-level block opens at the
/// first token after it.
pub fn layout_insert(tokens: &[Token]) -> Result<Vec<Token>, LayoutError> {
    run(tokens, true)
}

/// Insert layout markers for an expression or type fragment. No top-level
/// block is opened; markers appear only for blocks inside the fragment.
pub fn layout_insert_fragment(tokens: &[Token]) -> Result<Vec<Token>, LayoutError> {
    run(tokens, false)
}

fn run(tokens: &[Token], module_mode: bool) -> Result<Vec<Token>, LayoutError> {
    let mut out: Vec<Token> = Vec::with_capacity(tokens.len() + 16);
    let mut stack: Vec<Ctx> = Vec::new();
    let mut expecting_open = false;
    let mut open_is_let = false;
    let mut depth: u32 = 0;
    let mut last_line: u32 = 0;
    let mut iter = tokens.iter().peekable();

    if module_mode {
        // Header: optional flavour keyword, `module`, module name.
        if matches!(
            iter.peek().map(|t| &t.kind),
            Some(TokenKind::Keyword(Kw::Implementation))
                | Some(TokenKind::Keyword(Kw::Definition))
                | Some(TokenKind::Keyword(Kw::System))
        ) {
            let t = iter.next().unwrap();
            last_line = t.span.start.line;
            out.push(t.clone());
        }
        if matches!(
            iter.peek().map(|t| &t.kind),
            Some(TokenKind::Keyword(Kw::Module))
        ) {
            let t = iter.next().unwrap();
            last_line = t.span.start.line;
            out.push(t.clone());
            if matches!(
                iter.peek().map(|t| &t.kind),
                Some(TokenKind::Ident) | Some(TokenKind::CtorIdent)
            ) {
                let t = iter.next().unwrap();
                last_line = t.span.start.line;
                out.push(t.clone());
            }
            expecting_open = true;
        }
    }

    for tok in iter {
        let pos = tok.span.start;

        if expecting_open {
            expecting_open = false;
            if let Some(enclosing) = stack.last() {
                if pos.column <= enclosing.col {
                    return Err(LayoutError::InconsistentIndentation {
                        pos,
                        found: pos.column,
                        enclosing: enclosing.col,
                    });
                }
            }
            out.push(marker(TokenKind::LayoutOpen, pos));
            stack.push(Ctx {
                col: pos.column,
                from_let: open_is_let,
                open_depth: depth,
            });
        } else if pos.line > last_line && depth == 0 {
            // First token of a new line outside brackets.
            while stack.last().map_or(false, |c| c.col > pos.column) {
                stack.pop();
                out.push(marker(TokenKind::LayoutClose, pos));
            }
            let continues_item = matches!(
                tok.kind,
                TokenKind::Keyword(Kw::Where)
                    | TokenKind::Keyword(Kw::With)
                    | TokenKind::Keyword(Kw::In)
            );
            if !continues_item && stack.last().map_or(false, |c| c.col == pos.column) {
                out.push(marker(TokenKind::LayoutSep, pos));
            }
        }

        match tok.kind {
            TokenKind::Keyword(Kw::Where)
            | TokenKind::Keyword(Kw::With)
            | TokenKind::Keyword(Kw::Of)
            | TokenKind::Keyword(Kw::Let) => {
                out.push(tok.clone());
                expecting_open = true;
                open_is_let = matches!(tok.kind, TokenKind::Keyword(Kw::Let));
            }
            TokenKind::Keyword(Kw::In) => {
                if stack.iter().any(|c| c.from_let) {
                    while let Some(c) = stack.pop() {
                        out.push(marker(TokenKind::LayoutClose, pos));
                        if c.from_let {
                            break;
                        }
                    }
                }
                out.push(tok.clone());
            }
            TokenKind::Sym(Sym::LParen) | TokenKind::Sym(Sym::LBracket) | TokenKind::Sym(Sym::LBrace) => {
                depth += 1;
                out.push(tok.clone());
            }
            TokenKind::Sym(Sym::RParen) | TokenKind::Sym(Sym::RBracket) | TokenKind::Sym(Sym::RBrace) => {
                while depth > 0 && stack.last().map_or(false, |c| c.open_depth >= depth) {
                    stack.pop();
                    out.push(marker(TokenKind::LayoutClose, pos));
                }
                depth = depth.saturating_sub(1);
                out.push(tok.clone());
            }
            _ => out.push(tok.clone()),
        }
        last_line = tok.span.start.line;
    }

    let end = tokens.last().map_or_else(SourcePos::start, |t| t.span.end);
    if expecting_open {
        out.push(marker(TokenKind::LayoutOpen, end));
        out.push(marker(TokenKind::LayoutClose, end));
    }
    while stack.pop().is_some() {
        out.push(marker(TokenKind::LayoutClose, end));
    }
    Ok(out)
}

fn marker(kind: TokenKind, pos: SourcePos) -> Token {
    Token::new(kind, "", Span::point(pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::tokenize;

    /// Render the laid-out stream compactly: `{` `;` `}` for markers,
    /// token text otherwise.
    fn shape(src: &str) -> String {
        let toks = tokenize(src).unwrap();
        let laid = layout_insert(&toks).unwrap();
        render(&laid)
    }

    fn shape_fragment(src: &str) -> String {
        let toks = tokenize(src).unwrap();
        let laid = layout_insert_fragment(&toks).unwrap();
        render(&laid)
    }

    fn render(toks: &[Token]) -> String {
        toks.iter()
            .map(|t| match t.kind {
                TokenKind::LayoutOpen => "{".to_string(),
                TokenKind::LayoutSep => ";".to_string(),
                TokenKind::LayoutClose => "}".to_string(),
                _ => t.text.clone(),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    #[test]
    fn top_level_definitions_are_separated() {
        let src = "module M\nf :: Int\nf = 1\ng = 2\n";
        assert_eq!(shape(src), "module M { f :: Int ; f = 1 ; g = 2 }");
    }

    #[test]
    fn continuation_lines_produce_no_markers() {
        let src = "module M\nf x\n    | x > 0 = 1\n    | otherwise = 2\n";
        assert_eq!(
            shape(src),
            "module M { f x | x > 0 = 1 | otherwise = 2 }"
        );
    }

    #[test]
    fn case_block_opens_and_separates() {
        let src = "module M\nf x = case x of\n    1 -> a\n    _ -> b\ng = 2\n";
        assert_eq!(
            shape(src),
            "module M { f x = case x of { 1 -> a ; _ -> b } ; g = 2 }"
        );
    }

    #[test]
    fn where_at_definition_column_continues_the_definition() {
        let src = "module M\nf x = g x\nwhere\n    g y = y\nh = 1\n";
        assert_eq!(
            shape(src),
            "module M { f x = g x where { g y = y } ; h = 1 }"
        );
    }

    #[test]
    fn where_closes_deeper_blocks_first() {
        let src = "module M\nf x = case x of\n    1 -> a\nwhere\n    a = 2\n";
        assert_eq!(
            shape(src),
            "module M { f x = case x of { 1 -> a } where { a = 2 } }"
        );
    }

    #[test]
    fn let_block_is_closed_by_in() {
        assert_eq!(shape_fragment("let x = 1 in x"), "let { x = 1 } in x");
        assert_eq!(
            shape_fragment("let x = 1\n    y = 2\nin x + y"),
            "let { x = 1 ; y = 2 } in x + y"
        );
    }

    #[test]
    fn single_line_definition_forms_one_item() {
        let src = "module M\nf = 1\n";
        assert_eq!(shape(src), "module M { f = 1 }");
    }

    #[test]
    fn closing_bracket_closes_inner_blocks() {
        assert_eq!(
            shape_fragment("(case x of 1 -> a)"),
            "( case x of { 1 -> a } )"
        );
    }

    #[test]
    fn brackets_suspend_the_offside_rule() {
        let src = "module M\nf = { rx = 1.0,\nry = 2.0 }\n";
        assert_eq!(shape(src), "module M { f = { rx = 1.0 , ry = 2.0 } }");
    }

    #[test]
    fn shallow_block_body_is_rejected() {
        let src = "module M\nf x = case x of\n1 -> a\n";
        let toks = tokenize(src).unwrap();
        match layout_insert(&toks) {
            Err(LayoutError::InconsistentIndentation { found, enclosing, .. }) => {
                assert_eq!(found, 1);
                assert_eq!(enclosing, 1);
            }
            other => panic!("expected layout error, got {other:?}"),
        }
    }

    #[test]
    fn empty_module_body_is_an_empty_block() {
        assert_eq!(shape("module M\n"), "module M { }");
    }

    #[test]
    fn implementation_header_passes_through() {
        let src = "implementation module M\nf = 1\n";
        assert_eq!(shape(src), "implementation module M { f = 1 }");
    }

    #[test]
    fn markers_have_zero_width() {
        let toks = tokenize("module M\nf = 1\ng = 2\n").unwrap();
        let laid = layout_insert(&toks).unwrap();
        for t in laid.iter().filter(|t| t.kind.is_layout()) {
            assert_eq!(t.span.start.offset, t.span.end.offset);
            assert!(t.text.is_empty());
        }
    }
}
