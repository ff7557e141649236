//! Command-line front end: read `.icl` files, link each against a sibling
//! `.dcl` when one exists, translate, write `.hs` files, and report
//! diagnostics on stderr and optionally as JSON.
//!
//! Exit codes: 0 for success, 1 when any diagnostic reaches error severity
//! (or warning severity under `--fail-on-warning`), 2 for usage and I/O
//! failures.

use std::env;
use std::fs;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::diag::{rules, Diagnostic, Severity};
use crate::emit::{emit, RenderStyle};
use crate::link::translate_linked;
use crate::parser::{parse_module_expecting, ModuleKind, ParseError};
use crate::span::Span;
use crate::translate::{ParallelMode, RealType, StringType, TranslateOptions};
use crate::uniqueness::UniquenessReport;

/// Everything one invocation needs: the input files and the knobs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Implementation modules to translate; never empty.
    pub inputs: Vec<PathBuf>,
    pub output_dir: PathBuf,
    pub options: TranslateOptions,
    pub report_path: Option<PathBuf>,
    pub fail_on_warning: bool,
}

#[derive(Parser, Debug)]
#[command(
    name = "clean2hs",
    about = "Translate Clean modules to Haskell",
    version
)]
pub struct Args {
    /// Implementation modules (.icl) to translate. A sibling .dcl with the
    /// same stem is picked up automatically.
    #[arg(required = true, value_name = "FILE")]
    pub inputs: Vec<PathBuf>,

    /// Directory for the generated .hs files.
    #[arg(long = "out", value_name = "DIR", default_value = ".")]
    pub out: PathBuf,

    /// What Clean's String should become.
    #[arg(long = "string", value_enum, default_value_t = StringArg::Charlist)]
    pub string: StringArg,

    /// What Clean's Real should become.
    #[arg(long = "real", value_enum, default_value_t = RealArg::Double)]
    pub real: RealArg,

    /// How lockstep comprehension generators are translated.
    #[arg(long = "parallel", value_enum, default_value_t = ParallelArg::Zip)]
    pub parallel: ParallelArg,

    /// Expand record puns to explicit `field = name` bindings.
    #[arg(long = "no-puns")]
    pub no_puns: bool,

    /// Translate strictness markers (! arguments, #! steps) like their
    /// lazy forms instead of emitting bang patterns.
    #[arg(long = "no-bang")]
    pub no_bang: bool,

    /// Write a JSON report of diagnostics and erased attributes here.
    #[arg(long = "report", value_name = "PATH")]
    pub report: Option<PathBuf>,

    /// Treat warnings like errors for the exit code.
    #[arg(long = "fail-on-warning")]
    pub fail_on_warning: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum StringArg {
    Charlist,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealArg {
    Double,
    Float,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParallelArg {
    Zip,
    Extension,
}

impl Args {
    pub fn into_config(self) -> RunConfig {
        RunConfig {
            inputs: self.inputs,
            output_dir: self.out,
            options: TranslateOptions {
                string_type: match self.string {
                    StringArg::Charlist => StringType::CharList,
                    StringArg::Text => StringType::Text,
                },
                real_type: match self.real {
                    RealArg::Double => RealType::Double,
                    RealArg::Float => RealType::Float,
                },
                parallel_mode: match self.parallel {
                    ParallelArg::Zip => ParallelMode::Zip,
                    ParallelArg::Extension => ParallelMode::Extension,
                },
                no_puns: self.no_puns,
                no_bang: self.no_bang,
            },
            report_path: self.report,
            fail_on_warning: self.fail_on_warning,
        }
    }
}

/// Translate every input. Returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    let color = color_choice();
    let mut reports = Vec::new();
    let mut worst = Severity::Info;

    for input in &config.inputs {
        let outcome = match process_file(input, config) {
            Ok(outcome) => outcome,
            Err(message) => {
                eprintln!("clean2hs: {message}");
                return 2;
            }
        };
        for diag in &outcome.diagnostics {
            eprintln!("{}", render_diagnostic(input, diag, color));
            worst = worst.min(diag.severity);
        }
        reports.push(file_report(input, &outcome));
    }

    if let Some(path) = &config.report_path {
        let json = match serde_json::to_string_pretty(&reports) {
            Ok(json) => json,
            Err(err) => {
                eprintln!("clean2hs: cannot serialize report: {err}");
                return 2;
            }
        };
        if let Err(err) = fs::write(path, json + "\n") {
            eprintln!("clean2hs: cannot write {}: {err}", path.display());
            return 2;
        }
    }

    let failing = match worst {
        Severity::Error => true,
        Severity::Warning => config.fail_on_warning,
        Severity::Info => false,
    };
    if failing {
        1
    } else {
        0
    }
}

/// What one input file produced.
struct Outcome {
    diagnostics: Vec<Diagnostic>,
    uniqueness: UniquenessReport,
}

/// Run the pipeline on one `.icl`. `Err` carries an I/O-level message that
/// aborts the whole run; in-language problems become diagnostics instead.
fn process_file(input: &Path, config: &RunConfig) -> Result<Outcome, String> {
    let source = fs::read_to_string(input)
        .map_err(|err| format!("cannot read {}: {err}", input.display()))?;

    let icl = match parse_module_expecting(&source, ModuleKind::Implementation) {
        Ok(module) => module,
        Err(err) => {
            return Ok(Outcome {
                diagnostics: vec![parse_diagnostic(&err)],
                uniqueness: UniquenessReport::default(),
            });
        }
    };

    let mut diagnostics = Vec::new();
    let dcl_path = input.with_extension("dcl");
    let dcl = if dcl_path.exists() {
        let dcl_source = fs::read_to_string(&dcl_path)
            .map_err(|err| format!("cannot read {}: {err}", dcl_path.display()))?;
        match parse_module_expecting(&dcl_source, ModuleKind::Definition) {
            Ok(module) => Some(module),
            Err(err) => {
                let mut diag = parse_diagnostic(&err);
                diag.message = format!("in {}: {}", dcl_path.display(), diag.message);
                diagnostics.push(diag);
                None
            }
        }
    } else {
        None
    };

    if let Some(stem) = input.file_stem().and_then(|s| s.to_str()) {
        if stem != icl.name {
            diagnostics.push(Diagnostic::warning(
                rules::FILENAME_MODULE_MISMATCH,
                Span::point(icl.span.start),
                format!("file {} declares module `{}`", input.display(), icl.name),
            ));
        }
    }

    let translation = match translate_linked(dcl.as_ref(), &icl, &config.options) {
        Ok(t) => t,
        Err(err) => {
            diagnostics.push(Diagnostic::error(
                rules::MODULE_NAME_MISMATCH,
                Span::point(icl.span.start),
                err.to_string(),
            ));
            diagnostics.sort_by_key(|d| d.sort_key());
            return Ok(Outcome {
                diagnostics,
                uniqueness: UniquenessReport::default(),
            });
        }
    };

    let stem = input.file_stem().unwrap_or_default();
    let out_path = config.output_dir.join(stem).with_extension("hs");
    if let Some(dir) = out_path.parent() {
        fs::create_dir_all(dir)
            .map_err(|err| format!("cannot create {}: {err}", dir.display()))?;
    }
    let text = emit(&translation.module, &RenderStyle::default());
    fs::write(&out_path, text)
        .map_err(|err| format!("cannot write {}: {err}", out_path.display()))?;

    diagnostics.extend(translation.diagnostics);
    diagnostics.sort_by_key(|d| d.sort_key());
    Ok(Outcome {
        diagnostics,
        uniqueness: translation.uniqueness,
    })
}

fn parse_diagnostic(err: &ParseError) -> Diagnostic {
    let rule = match err {
        ParseError::Lex(_) => rules::LEX_ERROR,
        ParseError::Layout(_) => rules::LAYOUT_ERROR,
        ParseError::Syntax { .. } => rules::PARSE_ERROR,
        ParseError::KindMismatch { .. } => rules::KIND_MISMATCH,
    };
    // Error displays lead with "line:column: "; the span carries that.
    let text = err.to_string();
    let message = match text.find(": ") {
        Some(idx) => text[idx + 2..].to_string(),
        None => text,
    };
    Diagnostic::error(rule, err.span(), message)
}

// ---------------------------------------------------------------------
// JSON report

#[derive(Serialize)]
struct FileReport {
    file: String,
    diagnostics: Vec<DiagnosticEntry>,
    uniqueness: UniquenessEntry,
}

#[derive(Serialize)]
struct DiagnosticEntry {
    severity: Severity,
    rule_id: &'static str,
    line: u32,
    column: u32,
    message: String,
}

#[derive(Serialize)]
struct UniquenessEntry {
    erased_unique: usize,
    erased_vars: usize,
    erased_dots: usize,
    constraints: usize,
}

fn file_report(input: &Path, outcome: &Outcome) -> FileReport {
    let counts = outcome.uniqueness.written_counts();
    FileReport {
        file: input.display().to_string(),
        diagnostics: outcome
            .diagnostics
            .iter()
            .map(|d| DiagnosticEntry {
                severity: d.severity,
                rule_id: d.rule_id,
                line: d.span.start.line,
                column: d.span.start.column,
                message: d.message.clone(),
            })
            .collect(),
        uniqueness: UniquenessEntry {
            erased_unique: counts.unique,
            erased_vars: counts.vars,
            erased_dots: counts.dots,
            constraints: counts.constraints,
        },
    }
}

/// One file's report as JSON text: diagnostics in (line, column, rule)
/// order and the written-attribute erasure counts.
pub fn report_json(input: &Path, diags: &[Diagnostic], uniq: &UniquenessReport) -> String {
    let mut diagnostics = diags.to_vec();
    diagnostics.sort_by_key(|d| d.sort_key());
    let outcome = Outcome {
        diagnostics,
        uniqueness: uniq.clone(),
    };
    serde_json::to_string_pretty(&file_report(input, &outcome)).expect("report serializes")
}

// ---------------------------------------------------------------------
// Terminal output

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Color {
    Never,
    Always,
}

/// Resolve CLEAN2HS_COLOR (never|auto|always); auto means "stderr is a
/// terminal", and unset or unrecognized values count as auto.
fn color_choice() -> Color {
    let auto = || {
        if std::io::stderr().is_terminal() {
            Color::Always
        } else {
            Color::Never
        }
    };
    match env::var("CLEAN2HS_COLOR").as_deref() {
        Ok("never") => Color::Never,
        Ok("always") => Color::Always,
        _ => auto(),
    }
}

fn render_diagnostic(input: &Path, diag: &Diagnostic, color: Color) -> String {
    let paint = match (color, diag.severity) {
        (Color::Never, _) => ("", ""),
        (Color::Always, Severity::Error) => ("\x1b[31m", "\x1b[0m"),
        (Color::Always, Severity::Warning) => ("\x1b[33m", "\x1b[0m"),
        (Color::Always, Severity::Info) => ("\x1b[36m", "\x1b[0m"),
    };
    let mut line = format!(
        "{}:{}:{}: {}{}[{}]{}: {}",
        input.display(),
        diag.span.start.line,
        diag.span.start.column,
        paint.0,
        diag.severity,
        diag.rule_id,
        paint.1,
        diag.message,
    );
    if let Some(suggestion) = &diag.suggestion {
        line.push_str("\n  note: ");
        line.push_str(suggestion);
    }
    line
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;
    use tempfile::TempDir;

    fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
        let path = dir.path().join(name);
        fs::write(&path, text).expect("test file writes");
        path
    }

    fn config(dir: &TempDir, inputs: Vec<PathBuf>) -> RunConfig {
        RunConfig {
            inputs,
            output_dir: dir.path().join("out"),
            options: TranslateOptions::default(),
            report_path: Some(dir.path().join("report.json")),
            fail_on_warning: false,
        }
    }

    fn report_text(dir: &TempDir) -> String {
        fs::read_to_string(dir.path().join("report.json")).expect("report exists")
    }

    #[test]
    fn well_formed_pair_translates_and_exits_zero() {
        let dir = TempDir::new().unwrap();
        write(&dir, "Calc.dcl", "definition module Calc\ndouble :: Int -> Int");
        let icl = write(
            &dir,
            "Calc.icl",
            "implementation module Calc\ndouble :: Int -> Int\ndouble x = 2 * x\nhelper x = x",
        );
        let cfg = config(&dir, vec![icl]);
        assert_eq!(run(&cfg), 0);
        let out = fs::read_to_string(dir.path().join("out/Calc.hs")).expect("output exists");
        assert!(out.starts_with("module Calc (double) where"), "{out}");
        let report = report_text(&dir);
        assert!(report.contains("\"rule_id\": \"private-name\""), "{report}");
    }

    #[test]
    fn missing_input_exits_two() {
        let dir = TempDir::new().unwrap();
        let cfg = config(&dir, vec![dir.path().join("Absent.icl")]);
        assert_eq!(run(&cfg), 2);
    }

    #[test]
    fn parse_error_exits_one_and_lands_in_the_report() {
        let dir = TempDir::new().unwrap();
        let icl = write(&dir, "Broken.icl", "module Broken\nf x = ");
        let cfg = config(&dir, vec![icl]);
        assert_eq!(run(&cfg), 1);
        let report = report_text(&dir);
        assert!(report.contains("\"rule_id\": \"parse-error\""), "{report}");
        assert!(report.contains("\"severity\": \"error\""), "{report}");
    }

    #[test]
    fn generic_stub_warns_but_exits_zero() {
        let dir = TempDir::new().unwrap();
        let icl = write(
            &dir,
            "Gen.icl",
            "module Gen\ngeneric gEq a :: a a -> Bool\nf x = x",
        );
        let cfg = config(&dir, vec![icl]);
        assert_eq!(run(&cfg), 0);
        let report = report_text(&dir);
        assert!(report.contains("\"rule_id\": \"generics-unsupported\""), "{report}");
    }

    #[test]
    fn fail_on_warning_raises_the_exit_code() {
        let dir = TempDir::new().unwrap();
        let icl = write(
            &dir,
            "Gen.icl",
            "module Gen\ngeneric gEq a :: a a -> Bool\nf x = x",
        );
        let mut cfg = config(&dir, vec![icl]);
        cfg.fail_on_warning = true;
        assert_eq!(run(&cfg), 1);
    }

    #[test]
    fn filename_module_mismatch_warns() {
        let dir = TempDir::new().unwrap();
        let icl = write(&dir, "Other.icl", "module Inner\nf x = x");
        let cfg = config(&dir, vec![icl]);
        assert_eq!(run(&cfg), 0);
        let report = report_text(&dir);
        assert!(
            report.contains("\"rule_id\": \"filename-module-mismatch\""),
            "{report}"
        );
        let out = fs::read_to_string(dir.path().join("out/Other.hs")).expect("output exists");
        assert!(out.starts_with("module Inner where"), "{out}");
    }

    #[test]
    fn dcl_icl_name_mismatch_is_an_error() {
        let dir = TempDir::new().unwrap();
        write(&dir, "Pair.dcl", "definition module Elsewhere");
        let icl = write(&dir, "Pair.icl", "module Pair\nf x = x");
        let cfg = config(&dir, vec![icl]);
        assert_eq!(run(&cfg), 1);
        let report = report_text(&dir);
        assert!(
            report.contains("\"rule_id\": \"module-name-mismatch\""),
            "{report}"
        );
    }

    #[test]
    fn report_json_orders_fields_and_diagnostics() {
        let diags = vec![
            Diagnostic::warning(
                rules::GENERICS_UNSUPPORTED,
                Span::point(crate::span::SourcePos {
                    line: 4,
                    column: 1,
                    offset: 0,
                }),
                "second",
            ),
            Diagnostic::error(
                rules::PARSE_ERROR,
                Span::point(crate::span::SourcePos {
                    line: 2,
                    column: 3,
                    offset: 0,
                }),
                "first",
            ),
        ];
        let json = report_json(Path::new("M.icl"), &diags, &UniquenessReport::default());
        let first = json.find("\"first\"").expect("entry present");
        let second = json.find("\"second\"").expect("entry present");
        assert!(first < second, "{json}");
        let file = json.find("\"file\"").unwrap();
        let diagnostics = json.find("\"diagnostics\"").unwrap();
        let uniqueness = json.find("\"uniqueness\"").unwrap();
        assert!(file < diagnostics && diagnostics < uniqueness, "{json}");
        assert!(json.contains("\"erased_unique\": 0"), "{json}");
    }

    #[test]
    fn outputs_and_report_are_deterministic() {
        let dir = TempDir::new().unwrap();
        let icl = write(
            &dir,
            "Det.icl",
            "module Det\nf :: *(Int, *World) -> Int\nf p = 0",
        );
        let cfg = config(&dir, vec![icl]);
        assert_eq!(run(&cfg), 0);
        let first_out = fs::read_to_string(dir.path().join("out/Det.hs")).unwrap();
        let first_report = report_text(&dir);
        assert_eq!(run(&cfg), 0);
        assert_eq!(fs::read_to_string(dir.path().join("out/Det.hs")).unwrap(), first_out);
        assert_eq!(report_text(&dir), first_report);
    }
}
