//! The `pts` command line.
//!
//! Exit codes: 0 success, 1 a check failed (the report goes to standard
//! output), 2 bad usage or unparsable input, 3 reduction ran out of fuel.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::context::{Context, ContextError};
use crate::kernel::{json, Kernel, System, TypeError, TypeErrorKind};
use crate::reduce::{normalize, Fuel, DEFAULT_FUEL};
use crate::spec::{builtin, builtin_instances, PtsSpec, BUILTIN_NAMES};
use crate::syntax::{parse_spec, ContextSpans, ParseError, Sources, Syntax};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

/// Environment variable consulted when `--fuel` is absent.
pub const FUEL_VAR: &str = "PTS_FUEL";

#[derive(Parser)]
#[command(name = "pts", version, about = "Type checking for pure type systems with arbitrary contexts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    /// Well-formed contexts only.
    T,
    /// Arbitrary contexts.
    Tprime,
}

#[derive(Args)]
struct Common {
    /// Built-in instance name or path to a spec file.
    #[arg(long, default_value = "coc")]
    spec: String,
    /// Maximum number of β-steps per reduction.
    #[arg(long)]
    fuel: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Infer or check the type of a term.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "tprime")]
        system: SystemArg,
        /// Inline declarations or a file holding them.
        #[arg(long, default_value = "")]
        ctx: String,
        #[arg(long)]
        term: String,
        /// Expected type; inferred when absent.
        #[arg(long = "type")]
        ty: Option<String>,
        /// Write the derivation as JSON to this path.
        #[arg(long)]
        emit_derivation: Option<String>,
    },
    /// Extract a well-formed sub-context and derive the judgement in T.
    Curate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "")]
        ctx: String,
        #[arg(long)]
        term: String,
        #[arg(long)]
        emit_derivation: Option<String>,
    },
    /// Check that a context is well-formed.
    Wf {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ctx: String,
    },
    /// β-normalize a term.
    Normalize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        term: String,
    },
    /// Merge two well-formed compatible contexts.
    Merge {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ctx1: String,
        #[arg(long)]
        ctx2: String,
    },
    /// List the built-in instances.
    Instances,
}

/// Input problems that stop a command before any checking.
struct Usage(String);

impl From<ParseError> for Usage {
    fn from(e: ParseError) -> Self {
        Usage(e.to_string())
    }
}

type Outcome = Result<i32, Usage>;

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = dispatch(cli.command, out);
    match result {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Instances => {
            for name in BUILTIN_NAMES {
                let spec = &builtin_instances()[name];
                let _ = writeln!(out, "{name}: {}", summary(spec));
            }
            Ok(EXIT_OK)
        }
        Command::Check {
            common,
            system,
            ctx,
            term,
            ty,
            emit_derivation,
        } => {
            let spec = load_spec(&common.spec)?;
            let kernel = kernel(&spec, &common)?;
            let syntax = Syntax::for_spec(&spec);
            let (ctx, ctx_spans) = load_context(&syntax, &ctx, "--ctx")?;
            let (t, t_spans) = syntax.term_with_spans(&term, Some("--term"))?;
            let expected = ty.map(|src| syntax.term_with_spans(&src, Some("--type"))).transpose()?;
            let sources = Sources {
                subject: Some(&t_spans),
                expected: expected.as_ref().map(|(_, s)| s),
                ctx: Some(&ctx_spans),
            };
            let system = match system {
                SystemArg::T => System::T,
                SystemArg::Tprime => System::TPrime,
            };
            let derived = match (&expected, system) {
                (Some((a, _)), System::TPrime) => kernel.check_tprime(&ctx, &t, a),
                (Some((a, _)), System::T) => kernel.check_t(&ctx, &t, a),
                (None, System::TPrime) => kernel.infer_tprime(&ctx, &t).map(|(_, d)| d),
                (None, System::T) => kernel.infer_tprime(&ctx, &t).and_then(|(_, d)| kernel.elaborate_key_lemma(&d)),
            };
            match derived {
                Ok(d) => {
                    let _ = writeln!(out, "ok ({system}): {}", d.conclusion);
                    let _ = write!(out, "{}", d.sketch());
                    if let Some(path) = emit_derivation {
                        write_file(&path, &json::to_json(&d))?;
                    }
                    Ok(EXIT_OK)
                }
                Err(e) => Ok(type_failure(out, &e, &sources)),
            }
        }
        Command::Curate {
            common,
            ctx,
            term,
            emit_derivation,
        } => {
            let spec = load_spec(&common.spec)?;
            let kernel = kernel(&spec, &common)?;
            let syntax = Syntax::for_spec(&spec);
            let (ctx, ctx_spans) = load_context(&syntax, &ctx, "--ctx")?;
            let (t, t_spans) = syntax.term_with_spans(&term, Some("--term"))?;
            let report = kernel.theorem_report(&ctx, &t);
            match &report.outcome {
                Ok(ev) => {
                    let _ = writeln!(out, "delta: {}", ev.result.delta);
                    let _ = write!(out, "{report}");
                    if let Some(path) = emit_derivation {
                        let doc = json!({
                            "delta": ev.result.delta.iter().map(|d| [d.var.clone(), d.ty.to_string()]).collect::<Vec<_>>(),
                            "tprime": json::to_value(&ev.result.tprime_deriv),
                            "t": json::to_value(&ev.result.t_deriv),
                        });
                        write_file(&path, &serde_json::to_string_pretty(&doc).expect("valid JSON"))?;
                    }
                    Ok(if report.holds() { EXIT_OK } else { EXIT_FAILED })
                }
                Err(e) => {
                    let sources = Sources {
                        subject: Some(&t_spans),
                        expected: None,
                        ctx: Some(&ctx_spans),
                    };
                    Ok(type_failure(out, e, &sources))
                }
            }
        }
        Command::Wf { common, ctx } => {
            let spec = load_spec(&common.spec)?;
            let kernel = kernel(&spec, &common)?;
            let (ctx, ctx_spans) = load_context(&Syntax::for_spec(&spec), &ctx, "--ctx")?;
            match kernel.wf_check(&ctx).failure {
                None => {
                    let _ = writeln!(out, "well-formed: {ctx}");
                    Ok(EXIT_OK)
                }
                Some(f) => {
                    let sources = Sources {
                        ctx: Some(&ctx_spans),
                        ..Sources::default()
                    };
                    Ok(type_failure(out, &f.to_type_error(), &sources))
                }
            }
        }
        Command::Normalize { common, term } => {
            let spec = load_spec(&common.spec)?;
            let fuel = fuel(&common)?;
            let t = Syntax::for_spec(&spec).term(&term)?;
            match normalize(&t, fuel) {
                Ok(nf) => {
                    let _ = writeln!(out, "{nf}");
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    let _ = writeln!(out, "undecided: {e}");
                    Ok(EXIT_UNDECIDED)
                }
            }
        }
        Command::Merge { common, ctx1, ctx2 } => {
            let spec = load_spec(&common.spec)?;
            let kernel = kernel(&spec, &common)?;
            let syntax = Syntax::for_spec(&spec);
            let (g1, spans1) = load_context(&syntax, &ctx1, "--ctx1")?;
            let (g2, spans2) = load_context(&syntax, &ctx2, "--ctx2")?;
            match kernel.merge(&g1, &g2) {
                Ok(g) => {
                    let _ = writeln!(out, "{g}");
                    Ok(EXIT_OK)
                }
                Err(ContextError::NotWellFormed { which, failure }) => {
                    let spans = if which == "first" { &spans1 } else { &spans2 };
                    let _ = writeln!(out, "error: the {which} context is not well-formed");
                    let sources = Sources {
                        ctx: Some(spans),
                        ..Sources::default()
                    };
                    Ok(type_failure(out, &failure.to_type_error(), &sources))
                }
                Err(e) => {
                    let _ = writeln!(out, "error: {e}");
                    Ok(EXIT_FAILED)
                }
            }
        }
    }
}

fn summary(spec: &PtsSpec) -> String {
    let sorts: Vec<&str> = spec.sorts().iter().map(String::as_str).collect();
    let axioms: Vec<String> = spec.axioms().iter().map(|(a, b)| format!("{a} : {b}")).collect();
    let rules: Vec<String> = spec.rules().iter().map(|(a, b, c)| format!("({a}, {b}) : {c}")).collect();
    format!(
        "sorts {}; axioms {}; rules {}",
        sorts.join(", "),
        axioms.join(", "),
        rules.join(", ")
    )
}

fn load_spec(arg: &str) -> Result<PtsSpec, Usage> {
    if let Some(spec) = builtin(arg) {
        return Ok(spec);
    }
    let src = std::fs::read_to_string(arg)
        .map_err(|e| Usage(format!("`{arg}` is neither a built-in instance nor a readable spec file: {e}")))?;
    Ok(parse_spec(&src, Some(arg))?)
}

fn fuel(common: &Common) -> Result<Fuel, Usage> {
    if let Some(n) = common.fuel {
        return Ok(Fuel(n));
    }
    match std::env::var(FUEL_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Fuel)
            .map_err(|_| Usage(format!("{FUEL_VAR}={v} is not a step count"))),
        Err(_) => Ok(Fuel(DEFAULT_FUEL)),
    }
}

fn kernel<'s>(spec: &'s PtsSpec, common: &Common) -> Result<Kernel<'s>, Usage> {
    let kernel = Kernel::new(spec).map_err(|e| Usage(e.to_string()))?;
    Ok(kernel.with_fuel(fuel(common)?))
}

/// Inline text wins; a path is read only when the text does not parse.
fn load_context(syntax: &Syntax, arg: &str, flag: &str) -> Result<(Context, ContextSpans), Usage> {
    match syntax.context_with_spans(arg, Some(flag)) {
        Ok(parsed) => Ok(parsed),
        Err(_) if Path::new(arg).is_file() => {
            let src = std::fs::read_to_string(arg).map_err(|e| Usage(format!("reading {arg}: {e}")))?;
            Ok(syntax.context_with_spans(&src, Some(arg))?)
        }
        Err(inline) => Err(inline.into()),
    }
}

fn write_file(path: &str, contents: &str) -> Result<(), Usage> {
    std::fs::write(path, format!("{contents}\n")).map_err(|e| Usage(format!("writing {path}: {e}")))
}

fn type_failure(out: &mut dyn Write, e: &TypeError, sources: &Sources) -> i32 {
    write_error(out, e, sources, 0);
    if e.is_undecided() {
        EXIT_UNDECIDED
    } else {
        EXIT_FAILED
    }
}

fn write_error(out: &mut dyn Write, e: &TypeError, sources: &Sources, depth: usize) {
    let pad = "  ".repeat(depth);
    let lead = if depth == 0 { "error" } else { "caused by" };
    let kind = match &e.kind {
        TypeErrorKind::NotWellFormed { index, var } => format!("NotWellFormed (declaration {index}, `{var}`)"),
        k => k.name().to_string(),
    };
    let _ = writeln!(out, "{pad}{lead}: {kind}: {}", e.detail);
    let _ = match sources.locate(&e.location) {
        Some(span) => writeln!(out, "{pad}  at {} ({span})", e.location),
        None => writeln!(out, "{pad}  at {}", e.location),
    };
    if let Some(cause) = &e.cause {
        write_error(out, cause, sources, depth + 1);
    }
}
