//! Command-line interface: transform equations, verify substitutions, and
//! run fixture batches.
//!
//! Exit codes: 0 = transformed (or verification passed), 10 = proven
//! impossible, 11 = no answer, 1 = verification failed, 2 = usage error.

mod batch;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use radform_core::frontend::{parse_equation, Expr, SymbolTable};
use radform_core::transform::{
    run_pipeline, PipelineOptions, Status, SuppliedSubstitution, TransformOutcome,
};

#[derive(Parser)]
#[command(
    name = "radform",
    about = "Rewrites ODEs/PDEs with radical coefficients into rational-coefficient form by a rational change of variables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transform an equation, printing the result and an optional JSON report.
    Transform(JobArgs),
    /// Verify a supplied substitution: tower identities, rationality of the
    /// transformed coefficients, and the numeric chain check.
    Verify(JobArgs),
    /// Run every job file in a directory and print a summary table.
    Batch(BatchArgs),
}

#[derive(Args, Clone)]
struct JobArgs {
    /// Independent variables, comma separated (e.g. `x` or `x1,x2`).
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Unknown functions, comma separated.
    #[arg(long, value_delimiter = ',')]
    unknowns: Vec<String>,
    /// Transcendental constant parameters, comma separated.
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    /// Equation text; several equations separated by `;` form a system.
    #[arg(long)]
    eq: Option<String>,
    /// Job file with `#key: value` headers and equation lines.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Substitution `x=...; d1=...` in the fresh variables (z or z1..zn).
    #[arg(long)]
    subst: Option<String>,
    /// Working precision for the numeric oracle.
    #[arg(long, default_value_t = 128)]
    precision_bits: u32,
    /// Random seed for Monte Carlo pieces.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write a JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Skip the numeric oracle.
    #[arg(long)]
    no_oracle: bool,
    /// Include wall-clock timings in the report (reports are byte-identical
    /// across runs only without timings).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct BatchArgs {
    /// Directory of job files (*.eq).
    dir: PathBuf,
    /// Write a JSON summary here.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    no_oracle: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Transform(args) => run_job(args, false),
        Command::Verify(args) => run_job(args, true),
        Command::Batch(args) => batch::run_batch(&args.dir, args.json.as_deref(), args.seed, args.no_oracle),
    }
}

/// Parsed job: symbols, equations, options.
pub(crate) struct Job {
    pub symbols: SymbolTable,
    pub exprs: Vec<Expr>,
    pub options: PipelineOptions,
}

pub(crate) fn parse_subst(text: &str) -> Result<SuppliedSubstitution, String> {
    let mut subst = SuppliedSubstitution::default();
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, expr) = part
            .split_once('=')
            .ok_or_else(|| format!("substitution component `{part}` is not `name=expr`"))?;
        let name = name.trim().to_owned();
        let expr = expr.trim().to_owned();
        if name.starts_with('d') && name[1..].chars().all(|c| c.is_ascii_digit()) {
            subst.d_components.insert(name, expr);
        } else {
            subst.x_components.insert(name, expr);
        }
    }
    if subst.x_components.is_empty() {
        return Err("substitution must bind every independent variable".into());
    }
    Ok(subst)
}

fn build_job(args: &JobArgs, require_subst: bool) -> Result<Job, String> {
    let mut symbols = SymbolTable {
        vars: args.vars.clone(),
        unknowns: args.unknowns.clone(),
        params: args.params.clone(),
    };
    let mut texts: Vec<String> = Vec::new();
    let mut subst_text = args.subst.clone();
    match (&args.eq, &args.file) {
        (Some(eq), None) => {
            texts.extend(eq.split(';').map(|s| s.trim().to_owned()));
        }
        (None, Some(path)) => {
            let content = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let parsed = batch::parse_job_file(&content)?;
            if symbols.vars.is_empty() {
                symbols.vars = parsed.symbols.vars;
            }
            if symbols.unknowns.is_empty() {
                symbols.unknowns = parsed.symbols.unknowns;
            }
            if symbols.params.is_empty() {
                symbols.params = parsed.symbols.params;
            }
            if subst_text.is_none() {
                subst_text = parsed.subst;
            }
            texts.extend(parsed.equations);
        }
        (Some(_), Some(_)) => return Err("pass either --eq or --file, not both".into()),
        (None, None) => return Err("an equation is required (--eq or --file)".into()),
    }
    texts.retain(|t| !t.is_empty());
    if texts.is_empty() {
        return Err("no equations given".into());
    }
    symbols.validate()?;
    let exprs: Vec<Expr> = texts
        .iter()
        .map(|t| parse_equation(t, &symbols).map_err(|e| format!("{t}: {e}")))
        .collect::<Result<_, _>>()?;
    let substitution = match &subst_text {
        Some(t) => Some(parse_subst(t)?),
        None => None,
    };
    if require_subst && substitution.is_none() {
        return Err("verify requires --subst".into());
    }
    Ok(Job {
        symbols,
        exprs,
        options: PipelineOptions {
            seed: args.seed,
            precision: args.precision_bits,
            run_oracle: !args.no_oracle,
            oracle_samples: 20,
            substitution,
        },
    })
}

fn run_job(args: JobArgs, verify_mode: bool) -> ExitCode {
    let job = match build_job(&args, verify_mode) {
        Ok(j) => j,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let started = std::time::Instant::now();
    let out = match run_pipeline(&job.exprs, &job.symbols, &job.options) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let elapsed = started.elapsed().as_millis();
    print_summary(&out);
    if let Some(path) = &args.json {
        let doc = report::build_report(&out, args.timings.then_some(elapsed));
        if let Err(e) = report::write_report(&doc, path) {
            eprintln!("error: cannot write report: {e}");
            return ExitCode::from(2);
        }
    }
    if verify_mode {
        let ok = out.status == Status::Transformed
            && out.rationality == Some(true)
            && out.oracle.as_ref().map(|o| o.pass).unwrap_or(!job.options.run_oracle);
        return if ok {
            println!("verification: pass");
            ExitCode::SUCCESS
        } else {
            println!("verification: fail");
            ExitCode::from(1)
        };
    }
    match out.status {
        Status::Transformed => ExitCode::SUCCESS,
        Status::ProvenImpossible => ExitCode::from(10),
        Status::NoAnswer => ExitCode::from(11),
    }
}

fn print_summary(out: &TransformOutcome) {
    println!("status: {}", out.status.as_str());
    if !out.tower.is_empty() {
        println!("tower: {}", out.tower);
    }
    if let Some(q) = &out.parametrization {
        for (name, comp) in out.symbols.vars.iter().zip(&q.x_components) {
            println!("substitution: {name} = {comp}");
        }
        for (step, comp) in out.tower.steps().iter().zip(&q.d_components) {
            println!(
                "radical: {} = {comp}",
                out.tower.registry().name(step.var)
            );
        }
    }
    for text in out.transformed_texts() {
        println!("transformed: {text} = 0");
    }
    for (unit, _) in out.units.iter().zip(&out.transformed) {
        if !unit.is_one() {
            println!("unit removed: {unit}");
        }
    }
    for line in out.back_substitution_texts() {
        println!("back-substitution: {line}");
    }
    if let Some(w) = &out.witness {
        println!(
            "witness: step {} reduces to {} (degree {})",
            w.step + 1,
            w.reduced_curve,
            w.degree
        );
    }
    if let Some(t) = &out.tracing {
        println!(
            "tracing index: {} (tower degree {}, image degree {}, certified: {})",
            t.index, t.tower_degree, t.image_degree, t.certified
        );
    }
    if let Some(o) = &out.oracle {
        println!(
            "oracle: {} samples at {} bits, max residual {:.3e}, pass: {}",
            o.samples,
            o.precision,
            o.max_residual_approx(),
            o.pass
        );
    }
    for w in &out.warnings {
        println!("warning: {w}");
    }
    for n in &out.notes {
        println!("note: {n}");
    }
}
