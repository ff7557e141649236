//! Lexical analysis: UTF-8 source text to a position-annotated token stream.
//!
//! Comments (`//` line, `/* */` nested block) and whitespace are consumed and
//! discarded. Operators are maximal runs of symbol characters, so `:==`,
//! `=:`, `#!`, `<-:` and friends are single tokens; a run that is not one of
//! the known forms becomes a generic operator token, which is how
//! user-defined operators like `<+>` lex. Every token records the exact
//! source slice it covers, which keeps spans lossless: re-inserting the
//! skipped gaps between spans reconstructs the input byte-for-byte.

mod layout;

pub use layout::{layout_insert, layout_insert_fragment, LayoutError};

use crate::span::{SourcePos, Span};
use crate::token::{Comment, CommentStyle, Kw, Sym, Token, TokenKind};
use thiserror::Error;

/// Errors that abort lexing. Only the first error per file is reported.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("{pos}: unterminated block comment (depth {depth} at end of input)")]
    UnterminatedComment { pos: SourcePos, depth: u32 },
    #[error("{pos}: unterminated string literal")]
    UnterminatedString { pos: SourcePos },
    #[error("{pos}: unterminated character literal")]
    UnterminatedChar { pos: SourcePos },
    #[error("{pos}: invalid character `{ch}`")]
    InvalidChar { pos: SourcePos, ch: char },
}

impl LexError {
    pub fn pos(&self) -> SourcePos {
        match self {
            LexError::UnterminatedComment { pos, .. }
            | LexError::UnterminatedString { pos }
            | LexError::UnterminatedChar { pos }
            | LexError::InvalidChar { pos, .. } => *pos,
        }
    }
}

/// Tab stops advance the column to the next multiple of this width.
const TAB_WIDTH: u32 = 4;

struct Scanner<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: SourcePos,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            src,
            bytes: src.as_bytes(),
            pos: SourcePos::start(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos.offset >= self.bytes.len()
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos.offset..].chars().next()
    }

    fn peek_at(&self, extra: usize) -> Option<char> {
        self.src[self.pos.offset..].chars().nth(extra)
    }

    /// True when the remaining input starts with `s`.
    fn starts_with(&self, s: &str) -> bool {
        self.src[self.pos.offset..].starts_with(s)
    }

    fn bump(&mut self) -> Option<char> {
        let ch = self.peek()?;
        self.pos.offset += ch.len_utf8();
        match ch {
            '\n' => {
                self.pos.line += 1;
                self.pos.column = 1;
            }
            '\t' => {
                self.pos.column = (self.pos.column - 1) / TAB_WIDTH * TAB_WIDTH + TAB_WIDTH + 1;
            }
            _ => self.pos.column += 1,
        }
        Some(ch)
    }

    fn bump_n(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn slice_from(&self, start: SourcePos) -> &'a str {
        &self.src[start.offset..self.pos.offset]
    }
}

/// Characters that form operator runs.
fn is_symbol_char(ch: char) -> bool {
    matches!(
        ch,
        '~' | '@'
            | '#'
            | '$'
            | '%'
            | '^'
            | '?'
            | '!'
            | '+'
            | '-'
            | '*'
            | '<'
            | '>'
            | '\\'
            | '/'
            | '|'
            | '&'
            | '='
            | ':'
            | '.'
    )
}

/// The known operator spellings. Anything else lexes as a generic
/// operator token.
fn sym_from_run(s: &str) -> Option<Sym> {
    Some(match s {
        ":==" => Sym::ColonEqEq,
        ":=" => Sym::ColonEq,
        "::" => Sym::DColon,
        ":" => Sym::Colon,
        "=:" => Sym::EqColon,
        "==" => Sym::EqEq,
        "=>" => Sym::FatArrow,
        "=" => Sym::Eq,
        "#!" => Sym::HashBang,
        "#" => Sym::Hash,
        "\\\\" => Sym::BackslashBackslash,
        "\\" => Sym::Backslash,
        "<-:" => Sym::ArrowFromArray,
        "<-" => Sym::ArrowFrom,
        "<=" => Sym::Le,
        "<>" => Sym::Ne,
        "<" => Sym::Lt,
        ">=" => Sym::Ge,
        ">" => Sym::Gt,
        "->" => Sym::Arrow,
        "-" => Sym::Minus,
        "+++" => Sym::PlusPlusPlus,
        "++" => Sym::PlusPlus,
        "+" => Sym::Plus,
        "*" => Sym::Star,
        "/" => Sym::Slash,
        "^" => Sym::Caret,
        "&&" => Sym::AmpAmp,
        "&" => Sym::Amp,
        "||" => Sym::PipePipe,
        "|" => Sym::Pipe,
        ".." => Sym::DotDot,
        "." => Sym::Dot,
        "!" => Sym::Bang,
        "?" => Sym::Question,
        "~" => Sym::Tilde,
        _ => return None,
    })
}

fn punct_from_char(ch: char) -> Option<Sym> {
    Some(match ch {
        '(' => Sym::LParen,
        ')' => Sym::RParen,
        '[' => Sym::LBracket,
        ']' => Sym::RBracket,
        '{' => Sym::LBrace,
        '}' => Sym::RBrace,
        ',' => Sym::Comma,
        ';' => Sym::Semi,
        _ => return None,
    })
}

fn is_ident_start(ch: char) -> bool {
    ch.is_ascii_alphabetic() || ch == '_'
}

fn is_ident_continue(ch: char) -> bool {
    ch.is_ascii_alphanumeric() || ch == '_' || ch == '`'
}

/// Tokenize source text. Comments and whitespace are skipped; everything
/// else is covered by exactly one token.
pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    Ok(tokenize_with_comments(src)?.0)
}

/// Tokenize, also returning the comments in source order so callers can
/// carry them into generated output.
pub fn tokenize_with_comments(src: &str) -> Result<(Vec<Token>, Vec<Comment>), LexError> {
    let mut sc = Scanner::new(src);
    let mut tokens = Vec::new();
    let mut comments = Vec::new();

    loop {
        skip_trivia(&mut sc, &mut comments)?;
        if sc.at_end() {
            break;
        }
        let start = sc.pos;
        let ch = sc.peek().unwrap();

        if ch.is_ascii_digit() {
            tokens.push(scan_number(&mut sc, start));
            continue;
        }
        if is_ident_start(ch) {
            tokens.push(scan_word(&mut sc, start));
            continue;
        }
        if ch == '"' {
            tokens.push(scan_string(&mut sc, start)?);
            continue;
        }
        if ch == '\'' {
            tokens.push(scan_char(&mut sc, start)?);
            continue;
        }
        // `['...']` is an atomic character-list literal.
        if ch == '[' {
            if let Some(tok) = try_scan_char_list(&mut sc, start)? {
                tokens.push(tok);
                continue;
            }
        }
        // `?Ctor` with no space is an atomic constructor token.
        if ch == '?' {
            if let Some(next) = sc.peek_at(1) {
                if next.is_ascii_uppercase() {
                    sc.bump();
                    while sc.peek().map_or(false, is_ident_continue) {
                        sc.bump();
                    }
                    tokens.push(Token::new(
                        TokenKind::CtorIdent,
                        sc.slice_from(start),
                        Span::new(start, sc.pos),
                    ));
                    continue;
                }
            }
        }

        if let Some(sym) = punct_from_char(ch) {
            sc.bump();
            tokens.push(Token::new(
                TokenKind::Sym(sym),
                sc.slice_from(start),
                Span::new(start, sc.pos),
            ));
            continue;
        }
        if is_symbol_char(ch) {
            // Maximal munch over the whole run, but a comment opener ends
            // it: `x=//note` is `x`, `=`, then a comment.
            while sc.peek().map_or(false, is_symbol_char) {
                if sc.starts_with("//") || sc.starts_with("/*") {
                    break;
                }
                sc.bump();
            }
            let text = sc.slice_from(start);
            let kind = match sym_from_run(text) {
                Some(sym) => TokenKind::Sym(sym),
                None => TokenKind::OpIdent,
            };
            tokens.push(Token::new(kind, text, Span::new(start, sc.pos)));
            continue;
        }
        return Err(LexError::InvalidChar { pos: start, ch });
    }
    Ok((tokens, comments))
}

/// Skip whitespace and comments, recording comments. Block comments nest.
fn skip_trivia(sc: &mut Scanner, comments: &mut Vec<Comment>) -> Result<(), LexError> {
    loop {
        match sc.peek() {
            Some(c) if c.is_whitespace() => {
                sc.bump();
            }
            Some('/') if sc.starts_with("//") => {
                let open = sc.pos;
                sc.bump_n(2);
                let text_start = sc.pos.offset;
                while let Some(c) = sc.peek() {
                    if c == '\n' {
                        break;
                    }
                    sc.bump();
                }
                comments.push(Comment {
                    style: CommentStyle::Line,
                    text: sc.src[text_start..sc.pos.offset].to_string(),
                    span: Span::new(open, sc.pos),
                });
            }
            Some('/') if sc.starts_with("/*") => {
                let open = sc.pos;
                sc.bump_n(2);
                let text_start = sc.pos.offset;
                let mut depth: u32 = 1;
                while depth > 0 {
                    if sc.at_end() {
                        return Err(LexError::UnterminatedComment { pos: open, depth });
                    }
                    if sc.starts_with("/*") {
                        sc.bump_n(2);
                        depth += 1;
                    } else if sc.starts_with("*/") {
                        sc.bump_n(2);
                        depth -= 1;
                    } else {
                        sc.bump();
                    }
                }
                comments.push(Comment {
                    style: CommentStyle::Block,
                    text: sc.src[text_start..sc.pos.offset - 2].to_string(),
                    span: Span::new(open, sc.pos),
                });
            }
            _ => return Ok(()),
        }
    }
}

fn scan_number(sc: &mut Scanner, start: SourcePos) -> Token {
    while sc.peek().map_or(false, |c| c.is_ascii_digit()) {
        sc.bump();
    }
    let mut real = false;
    if sc.peek() == Some('.') && sc.peek_at(1).map_or(false, |c| c.is_ascii_digit()) {
        real = true;
        sc.bump();
        while sc.peek().map_or(false, |c| c.is_ascii_digit()) {
            sc.bump();
        }
    }
    if matches!(sc.peek(), Some('e') | Some('E')) {
        let mut ahead = 1;
        if matches!(sc.peek_at(1), Some('+') | Some('-')) {
            ahead = 2;
        }
        if sc.peek_at(ahead).map_or(false, |c| c.is_ascii_digit()) {
            real = true;
            sc.bump_n(ahead);
            while sc.peek().map_or(false, |c| c.is_ascii_digit()) {
                sc.bump();
            }
        }
    }
    let kind = if real {
        TokenKind::RealLit
    } else {
        TokenKind::IntLit
    };
    Token::new(kind, sc.slice_from(start), Span::new(start, sc.pos))
}

fn scan_word(sc: &mut Scanner, start: SourcePos) -> Token {
    sc.bump();
    while sc.peek().map_or(false, is_ident_continue) {
        sc.bump();
    }
    let text = sc.slice_from(start).to_string();

    // `A.` and `E.` immediately followed by a type variable are quantifiers.
    if (text == "A" || text == "E") && sc.peek() == Some('.') {
        if sc.peek_at(1).map_or(false, |c| c.is_ascii_lowercase()) {
            sc.bump();
            let sym = if text == "A" {
                Sym::ForallDot
            } else {
                Sym::ExistsDot
            };
            return Token::new(
                TokenKind::Sym(sym),
                sc.slice_from(start),
                Span::new(start, sc.pos),
            );
        }
    }

    let kind = if let Some(kw) = Kw::from_str(&text) {
        TokenKind::Keyword(kw)
    } else if text.chars().next().unwrap().is_ascii_uppercase() {
        TokenKind::CtorIdent
    } else {
        TokenKind::Ident
    };
    Token::new(kind, text, Span::new(start, sc.pos))
}

fn scan_string(sc: &mut Scanner, start: SourcePos) -> Result<Token, LexError> {
    sc.bump(); // opening quote
    loop {
        match sc.peek() {
            None | Some('\n') => return Err(LexError::UnterminatedString { pos: start }),
            Some('\\') => {
                sc.bump();
                if sc.at_end() {
                    return Err(LexError::UnterminatedString { pos: start });
                }
                sc.bump();
            }
            Some('"') => {
                sc.bump();
                break;
            }
            _ => {
                sc.bump();
            }
        }
    }
    Ok(Token::new(
        TokenKind::StringLit,
        sc.slice_from(start),
        Span::new(start, sc.pos),
    ))
}

fn scan_char(sc: &mut Scanner, start: SourcePos) -> Result<Token, LexError> {
    sc.bump(); // opening quote
    match sc.peek() {
        None | Some('\n') => return Err(LexError::UnterminatedChar { pos: start }),
        Some('\\') => {
            sc.bump();
            sc.bump();
        }
        _ => {
            sc.bump();
        }
    }
    if sc.peek() != Some('\'') {
        return Err(LexError::UnterminatedChar { pos: start });
    }
    sc.bump();
    Ok(Token::new(
        TokenKind::CharLit,
        sc.slice_from(start),
        Span::new(start, sc.pos),
    ))
}

/// Scan `['...']` as one token. Returns `None` when the bracket does not
/// open that form (plain list syntax), leaving the scanner untouched.
fn try_scan_char_list(sc: &mut Scanner, start: SourcePos) -> Result<Option<Token>, LexError> {
    if sc.peek_at(1) != Some('\'') {
        return Ok(None);
    }
    // Walk ahead without committing: the form must close with `']` before
    // a newline, and commas fall back to ordinary list syntax.
    let rest = &sc.src[sc.pos.offset..];
    let mut chars = rest.char_indices().skip(2).peekable();
    let mut end = None;
    while let Some((_, c)) = chars.next() {
        match c {
            '\\' => {
                chars.next();
            }
            '\'' => {
                if let Some(&(j, ']')) = chars.peek() {
                    end = Some(j + 1);
                }
                break;
            }
            '\n' => break,
            _ => {}
        }
    }
    let Some(end) = end else { return Ok(None) };
    // Single-character content like `['a']` could also be read as a list
    // around a char literal; the atomic literal form wins here.
    sc.bump_n(sc.src[sc.pos.offset..sc.pos.offset + end].chars().count());
    Ok(Some(Token::new(
        TokenKind::CharListLit,
        sc.slice_from(start),
        Span::new(start, sc.pos),
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(src: &str) -> Vec<String> {
        tokenize(src).unwrap().into_iter().map(|t| t.text).collect()
    }

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn nested_comment_is_discarded() {
        let toks = tokenize("/* a /* b */ c */ x").unwrap();
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].kind, TokenKind::Ident);
        assert_eq!(toks[0].text, "x");
    }

    #[test]
    fn empty_input_yields_no_tokens() {
        assert_eq!(tokenize("").unwrap(), vec![]);
    }

    // Independent character-level reference scan for the as-pattern
    // example: segment the input by hand-written rules and compare.
    #[test]
    fn as_pattern_tokens_match_reference_scan() {
        let src = "xs=:[1:ys]";
        let expected = reference_scan(src);
        assert_eq!(texts(src), expected);
        assert_eq!(
            kinds(src),
            vec![
                TokenKind::Ident,
                TokenKind::Sym(Sym::EqColon),
                TokenKind::Sym(Sym::LBracket),
                TokenKind::IntLit,
                TokenKind::Sym(Sym::Colon),
                TokenKind::Ident,
                TokenKind::Sym(Sym::RBracket),
            ]
        );
    }

    /// Minimal independent scanner: longest match over a literal table,
    /// else greedy ident/number runs. Kept separate from the lexer on
    /// purpose; only suitable for simple inputs.
    fn reference_scan(src: &str) -> Vec<String> {
        let ops = [
            ":==", "=:", "::", ":=", "#!", "<-:", "<-", "<=", "->", "\\\\", "+++", "[", "]", ":",
            "=", ",",
        ];
        let mut out = Vec::new();
        let mut rest = src;
        'outer: while !rest.is_empty() {
            if rest.starts_with(char::is_whitespace) {
                rest = &rest[1..];
                continue;
            }
            for op in ops {
                if let Some(r) = rest.strip_prefix(op) {
                    out.push(op.to_string());
                    rest = r;
                    continue 'outer;
                }
            }
            let len = rest
                .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
                .unwrap_or(rest.len());
            assert!(len > 0, "reference scanner stuck at {rest:?}");
            out.push(rest[..len].to_string());
            rest = &rest[len..];
        }
        out
    }

    #[test]
    fn maximal_munch_on_multichar_operators() {
        assert_eq!(
            texts(":== =: := #! \\\\ <-: <= -> +++"),
            vec![":==", "=:", ":=", "#!", "\\\\", "<-:", "<=", "->", "+++"]
        );
    }

    #[test]
    fn quantifier_dots_merge_only_before_type_vars() {
        assert_eq!(texts("A.a: a -> a"), vec!["A.", "a", ":", "a", "->", "a"]);
        assert_eq!(texts("E.t: Box t"), vec!["E.", "t", ":", "Box", "t"]);
        // plain constructor application stays split
        assert_eq!(texts("A 1"), vec!["A", "1"]);
    }

    #[test]
    fn optional_constructors_are_atomic() {
        let toks = tokenize("(?None, ?Just e)").unwrap();
        let texts: Vec<_> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, vec!["(", "?None", ",", "?Just", "e", ")"]);
        assert_eq!(toks[1].kind, TokenKind::CtorIdent);
    }

    #[test]
    fn char_list_literal_is_one_token() {
        let toks = tokenize("['Hello'] :: [Char]").unwrap();
        assert_eq!(toks[0].kind, TokenKind::CharListLit);
        assert_eq!(toks[0].text, "['Hello']");
        assert_eq!(toks[1].kind, TokenKind::Sym(Sym::DColon));
    }

    #[test]
    fn bracketed_char_literals_with_commas_stay_lists() {
        let k = kinds("['a', 'b']");
        assert_eq!(
            k,
            vec![
                TokenKind::Sym(Sym::LBracket),
                TokenKind::CharLit,
                TokenKind::Sym(Sym::Comma),
                TokenKind::CharLit,
                TokenKind::Sym(Sym::RBracket),
            ]
        );
    }

    #[test]
    fn keywords_cover_exactly_the_reserved_set() {
        for kw in [
            "module",
            "implementation",
            "definition",
            "system",
            "import",
            "from",
            "where",
            "in",
            "of",
            "case",
            "if",
            "let",
            "with",
            "class",
            "instance",
            "generic",
            "derive",
            "infixl",
            "infixr",
            "infix",
            "dynamic",
            "Start",
        ] {
            let toks = tokenize(kw).unwrap();
            assert!(
                matches!(toks[0].kind, TokenKind::Keyword(_)),
                "{kw} should lex as a keyword"
            );
        }
        // near-misses stay identifiers
        assert_eq!(kinds("otherwise")[0], TokenKind::Ident);
        assert_eq!(kinds("start")[0], TokenKind::Ident);
        assert_eq!(kinds("Starts")[0], TokenKind::CtorIdent);
    }

    #[test]
    fn real_vs_field_selection() {
        assert_eq!(
            kinds("38.0"),
            vec![TokenKind::RealLit],
            "digits.digits is a real"
        );
        assert_eq!(
            kinds("a.[i]"),
            vec![
                TokenKind::Ident,
                TokenKind::Sym(Sym::Dot),
                TokenKind::Sym(Sym::LBracket),
                TokenKind::Ident,
                TokenKind::Sym(Sym::RBracket)
            ]
        );
        assert_eq!(kinds("1.5e3"), vec![TokenKind::RealLit]);
        assert_eq!(kinds("1e3"), vec![TokenKind::RealLit]);
    }

    #[test]
    fn range_dots_are_one_token() {
        assert_eq!(
            kinds("[1..10]"),
            vec![
                TokenKind::Sym(Sym::LBracket),
                TokenKind::IntLit,
                TokenKind::Sym(Sym::DotDot),
                TokenKind::IntLit,
                TokenKind::Sym(Sym::RBracket)
            ]
        );
    }

    #[test]
    fn unterminated_comment_reports_depth() {
        match tokenize("/* a /* b */") {
            Err(LexError::UnterminatedComment { depth, .. }) => assert_eq!(depth, 1),
            other => panic!("expected unterminated comment, got {other:?}"),
        }
    }

    #[test]
    fn unterminated_string_errors() {
        assert!(matches!(
            tokenize("\"abc"),
            Err(LexError::UnterminatedString { .. })
        ));
    }

    #[test]
    fn invalid_char_errors() {
        assert!(matches!(
            tokenize("f \u{a7} x"),
            Err(LexError::InvalidChar { ch: '\u{a7}', .. })
        ));
    }

    #[test]
    fn unknown_operator_runs_lex_as_operator_tokens() {
        let toks = tokenize("a <+> b").unwrap();
        assert_eq!(toks[1].kind, TokenKind::OpIdent);
        assert_eq!(toks[1].text, "<+>");
        // the run is maximal: `<+>=` is one operator, not `<+>` `=`
        assert_eq!(texts("a <+>= b"), vec!["a", "<+>=", "b"]);
    }

    #[test]
    fn comment_opener_ends_an_operator_run() {
        let toks = tokenize("x=//note\ny=/*c*/1").unwrap();
        let texts: Vec<_> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, vec!["x", "=", "y", "=", "1"]);
    }

    #[test]
    fn import_arrow_is_one_token() {
        let toks = tokenize("import Mod1 => qualified f, :: t").unwrap();
        assert_eq!(toks[2].kind, TokenKind::Sym(Sym::FatArrow));
        assert_eq!(toks[3].text, "qualified");
        assert_eq!(toks[3].kind, TokenKind::Ident);
    }

    #[test]
    fn spans_are_lossless() {
        let src = "f x = x + 1 // tail\n/* c */ g = ['ab'] \"s\"";
        let toks = tokenize(src).unwrap();
        let mut rebuilt = String::new();
        let mut cursor = 0;
        for t in &toks {
            assert_eq!(
                &src[t.span.start.offset..t.span.end.offset],
                t.text,
                "span slice must equal token text"
            );
            assert!(t.span.start.offset >= cursor, "spans must be ordered");
            rebuilt.push_str(&src[cursor..t.span.start.offset]);
            rebuilt.push_str(&t.text);
            cursor = t.span.end.offset;
        }
        rebuilt.push_str(&src[cursor..]);
        assert_eq!(rebuilt, src);
    }

    #[test]
    fn deep_nesting_up_to_depth_16() {
        for d in 1..=16 {
            let mut s = String::new();
            for _ in 0..d {
                s.push_str("/* x ");
            }
            for _ in 0..d {
                s.push_str(" y */");
            }
            s.push_str(" z");
            let toks = tokenize(&s).unwrap();
            assert_eq!(toks.len(), 1, "depth {d}");
            assert_eq!(toks[0].text, "z");
        }
    }

    #[test]
    fn comments_are_collected_with_style_and_text() {
        let (toks, comments) = tokenize_with_comments("// head\nf = 1 /* mid */\n").unwrap();
        assert_eq!(toks.len(), 3);
        assert_eq!(comments.len(), 2);
        assert_eq!(comments[0].style, CommentStyle::Line);
        assert_eq!(comments[0].text, " head");
        assert_eq!(comments[1].style, CommentStyle::Block);
        assert_eq!(comments[1].text, " mid ");
    }

    #[test]
    fn tokenize_is_deterministic() {
        let src = "f :: v:a u:b -> u:b, [v<=u]";
        assert_eq!(tokenize(src).unwrap(), tokenize(src).unwrap());
    }

    #[test]
    fn tab_advances_to_next_stop() {
        let toks = tokenize("\tx\n\t\ty").unwrap();
        assert_eq!(toks[0].span.start.column, 5);
        assert_eq!(toks[1].span.start.column, 9);
    }
}
