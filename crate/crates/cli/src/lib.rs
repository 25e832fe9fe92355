//! Command implementations for the `ncdiff` binary. Each command returns
//! its full output so that runs can be compared byte for byte.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use ncdiff_core::calculus::CalculusError;
use ncdiff_core::models::SHIPPED;
use ncdiff_core::{run_suite, DslError, Element, Form, Model, Orientation, ReportFormat};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(
    name = "ncdiff",
    version,
    about = "Exact differential calculi on noncommutative algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Latex,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    ElementFirst,
    FormFirst,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the normal form of an expression.
    Nf {
        /// Model file, or `builtin:<name>` for a shipped model.
        file: String,
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
    /// Run the model's check suite. Exits 0 iff every check passes.
    Verify {
        file: String,
        /// Seed for the randomized checks.
        #[arg(long, env = ncdiff_core::sample::SEED_VAR, default_value_t = ncdiff_core::sample::DEFAULT_SEED)]
        seed: u64,
    },
    /// Derive commutation relations between forms and elements.
    Relations {
        file: String,
        #[arg(long, value_delimiter = ',', required = true)]
        forms: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        elements: Vec<String>,
        #[arg(long, value_enum, default_value_t = Order::ElementFirst)]
        order: Order,
    },
    /// Check the presentation's rewrite rules for local confluence.
    Confluence { file: String },
    /// Print the model file in canonical layout.
    Export { file: String },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown built-in model `{0}`")]
    UnknownBuiltin(String),
    #[error("{file}: {source}")]
    Model {
        file: String,
        #[source]
        source: DslError,
    },
    #[error("in `{expr}`: {message}")]
    Expr { expr: String, message: String },
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::UnknownBuiltin(_) => "unknown-model",
            CliError::Model {
                source: DslError::Parse(_),
                ..
            } => "syntax",
            CliError::Model { .. } => "semantic",
            CliError::Expr { .. } => "expression",
            CliError::Calculus(_) => "calculus",
        }
    }
}

/// What a command prints and its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    }
}

pub fn load(file: &str) -> Result<Model, CliError> {
    let src = match file.strip_prefix("builtin:") {
        Some(name) => SHIPPED
            .iter()
            .find(|(f, _)| f.strip_suffix(".ncd") == Some(name))
            .map(|(_, s)| s.to_string())
            .ok_or_else(|| CliError::UnknownBuiltin(name.to_string()))?,
        None => std::fs::read_to_string(file).map_err(|source| CliError::Io {
            path: file.into(),
            source,
        })?,
    };
    Model::parse(&src).map_err(|source| CliError::Model {
        file: file.to_string(),
        source,
    })
}

pub fn run(cli: &Cli) -> Output {
    match execute(cli) {
        Ok(out) => out,
        Err(e) => error_output(&e, cli.format),
    }
}

fn error_output(e: &CliError, format: Format) -> Output {
    if format == Format::Json {
        #[derive(Serialize)]
        struct ErrorDoc<'a> {
            error: &'a str,
            message: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            line: Option<usize>,
            #[serde(skip_serializing_if = "Option::is_none")]
            column: Option<usize>,
        }
        let pos = match e {
            CliError::Model { source, .. } => Some(source.pos()),
            _ => None,
        };
        let doc = ErrorDoc {
            error: e.kind(),
            message: e.to_string(),
            line: pos.map(|p| p.line),
            column: pos.map(|p| p.col),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        return Output {
            stdout: s,
            stderr: String::new(),
            code: 2,
        };
    }
    Output {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        code: 2,
    }
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Nf { file, expr } => nf(&load(file)?, expr, cli.format),
        Command::Verify { file, seed } => Ok(verify(&load(file)?, *seed, cli.format)),
        Command::Relations {
            file,
            forms,
            elements,
            order,
        } => relations(&load(file)?, forms, elements, *order, cli.format),
        Command::Confluence { file } => Ok(confluence(&load(file)?, cli.format)),
        Command::Export { file } => Ok(Output::ok(load(file)?.export())),
    }
}

fn eval(model: &Model, expr: &str) -> Result<ncdiff_core::dsl::Value, CliError> {
    model.eval(expr).map_err(|e| CliError::Expr {
        expr: expr.to_string(),
        message: match e {
            DslError::Semantic { message, .. } => message,
            other => other.to_string(),
        },
    })
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn nf(model: &Model, expr: &str, format: Format) -> Result<Output, CliError> {
    let v = eval(model, expr)?;
    let text = model.render(&v);
    Ok(Output::ok(match format {
        Format::Json => json_line(&serde_json::json!({ "expr": expr, "normal_form": text })),
        Format::Latex => format!("$ {} $\n", text),
        Format::Plain => format!("{text}\n"),
    }))
}

pub fn verify(model: &Model, seed: u64, format: Format) -> Output {
    let report = run_suite(model, seed);
    let f = match format {
        Format::Plain => ReportFormat::Plain,
        Format::Latex => ReportFormat::Latex,
        Format::Json => ReportFormat::Json,
    };
    Output {
        stdout: report.render(f),
        stderr: String::new(),
        code: if report.all_passed() { 0 } else { 1 },
    }
}

pub fn relations(
    model: &Model,
    forms: &[String],
    elements: &[String],
    order: Order,
    format: Format,
) -> Result<Output, CliError> {
    let calc = model.calculus.as_ref().ok_or_else(|| CliError::Expr {
        expr: forms.join(","),
        message: "the model has no calc block".to_string(),
    })?;
    let forms: Vec<(String, Form)> = forms
        .iter()
        .map(|f| Ok((f.clone(), eval(model, f)?.into_form())))
        .collect::<Result<_, CliError>>()?;
    let elements: Vec<(String, Element)> = elements
        .iter()
        .map(|e| {
            let v = eval(model, e)?
                .into_element()
                .ok_or_else(|| CliError::Expr {
                    expr: e.clone(),
                    message: "expected an algebra element, got a form".to_string(),
                })?;
            Ok((e.clone(), v))
        })
        .collect::<Result<_, CliError>>()?;
    let orientation = match order {
        Order::ElementFirst => Orientation::ElementFirst,
        Order::FormFirst => Orientation::FormFirst,
    };
    let rels = calc.commutation_relations(&forms, &elements, orientation)?;
    let lines: Vec<String> = rels.iter().map(ToString::to_string).collect();
    Ok(Output::ok(match format {
        Format::Json => json_line(&serde_json::json!({ "model": model.name, "relations": lines })),
        Format::Latex => {
            let mut s = String::from("\\begin{align*}\n");
            for l in &lines {
                let _ = writeln!(s, "  {} \\\\", l.replacen(" = ", " &= ", 1));
            }
            s.push_str("\\end{align*}\n");
            s
        }
        Format::Plain => lines.iter().map(|l| format!("{l}\n")).collect(),
    }))
}

pub fn confluence(model: &Model, format: Format) -> Output {
    let alg = &model.algebra;
    let report = alg.check_confluence();
    let t = alg.table();
    let unresolved: Vec<(String, String, String)> = report
        .unresolved
        .iter()
        .map(|o| {
            (
                o.word.display(t).to_string(),
                o.via_left.display(t).to_string(),
                o.via_right.display(t).to_string(),
            )
        })
        .collect();
    let stdout = match format {
        Format::Json => json_line(&serde_json::json!({
            "model": model.name,
            "overlaps_checked": report.overlaps_checked,
            "unresolved": unresolved
                .iter()
                .map(|(w, l, r)| serde_json::json!({ "word": w, "via_left": l, "via_right": r }))
                .collect::<Vec<_>>(),
        })),
        Format::Plain | Format::Latex => {
            let mut s = format!(
                "model {}: {} overlaps checked, {} unresolved\n",
                model.name,
                report.overlaps_checked,
                unresolved.len()
            );
            for (w, l, r) in &unresolved {
                let _ = writeln!(s, "  {w}: {l} vs {r}");
            }
            s
        }
    };
    Output {
        stdout,
        stderr: String::new(),
        code: if report.is_confluent() { 0 } else { 1 },
    }
}
