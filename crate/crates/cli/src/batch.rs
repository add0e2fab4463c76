//! Batch runner: every `*.eq` job file in a directory, summarized in a
//! deterministic table. Mathematical outcomes are statuses, never errors;
//! the exit code is nonzero only for unreadable or malformed files.

use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;

use radform_core::frontend::SymbolTable;
use radform_core::transform::{run_pipeline, PipelineOptions, Status};

use crate::parse_subst;

/// Parsed job file: `#key: value` headers, then equation lines.
pub struct JobFile {
    pub symbols: SymbolTable,
    pub equations: Vec<String>,
    pub subst: Option<String>,
}

pub fn parse_job_file(content: &str) -> Result<JobFile, String> {
    let mut symbols = SymbolTable::default();
    let mut equations = Vec::new();
    let mut subst = None;
    for line in content.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let (key, value) = rest
                .split_once(':')
                .ok_or_else(|| format!("malformed header `{line}`"))?;
            let value = value.trim();
            match key.trim() {
                "vars" => {
                    symbols.vars = value.split(',').map(|s| s.trim().to_owned()).collect()
                }
                "unknowns" => {
                    symbols.unknowns = value.split(',').map(|s| s.trim().to_owned()).collect()
                }
                "params" => {
                    symbols.params = value
                        .split(',')
                        .map(|s| s.trim().to_owned())
                        .filter(|s| !s.is_empty())
                        .collect()
                }
                "subst" => subst = Some(value.to_owned()),
                other => return Err(format!("unknown header key `{other}`")),
            }
        } else {
            for eq in line.split(';') {
                let eq = eq.trim();
                if !eq.is_empty() {
                    equations.push(eq.to_owned());
                }
            }
        }
    }
    Ok(JobFile {
        symbols,
        equations,
        subst,
    })
}

#[derive(Debug, Serialize)]
struct BatchRow {
    file: String,
    status: String,
    detail: String,
}

#[derive(Debug, Serialize)]
struct BatchSummary {
    version: u32,
    rows: Vec<BatchRow>,
    errors: usize,
}

pub fn run_batch(
    dir: &Path,
    json: Option<&Path>,
    seed: u64,
    no_oracle: bool,
) -> ExitCode {
    let mut files: Vec<std::path::PathBuf> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().map(|x| x == "eq").unwrap_or(false))
            .collect(),
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", dir.display());
            return ExitCode::from(2);
        }
    };
    files.sort();

    let run_one = |path: &std::path::PathBuf| -> BatchRow {
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let content = match std::fs::read_to_string(path) {
            Ok(c) => c,
            Err(e) => {
                return BatchRow {
                    file: name,
                    status: "error".into(),
                    detail: format!("read failure: {e}"),
                }
            }
        };
        let job = match parse_job_file(&content) {
            Ok(j) => j,
            Err(e) => {
                return BatchRow {
                    file: name,
                    status: "error".into(),
                    detail: e,
                }
            }
        };
        if let Err(e) = job.symbols.validate() {
            return BatchRow {
                file: name,
                status: "error".into(),
                detail: e,
            };
        }
        let exprs: Result<Vec<_>, String> = job
            .equations
            .iter()
            .map(|t| {
                radform_core::frontend::parse_equation(t, &job.symbols)
                    .map_err(|e| format!("{t}: {e}"))
            })
            .collect();
        let exprs = match exprs {
            Ok(x) => x,
            Err(e) => {
                return BatchRow {
                    file: name,
                    status: "error".into(),
                    detail: e,
                }
            }
        };
        let substitution = match &job.subst {
            Some(t) => match parse_subst(t) {
                Ok(s) => Some(s),
                Err(e) => {
                    return BatchRow {
                        file: name,
                        status: "error".into(),
                        detail: e,
                    }
                }
            },
            None => None,
        };
        let options = PipelineOptions {
            seed,
            run_oracle: !no_oracle,
            substitution,
            ..PipelineOptions::default()
        };
        match run_pipeline(&exprs, &job.symbols, &options) {
            Ok(out) => {
                let detail = match out.status {
                    Status::Transformed => out
                        .transformed_texts()
                        .first()
                        .cloned()
                        .unwrap_or_default(),
                    _ => out.notes.last().cloned().unwrap_or_default(),
                };
                BatchRow {
                    file: name,
                    status: out.status.as_str().into(),
                    detail,
                }
            }
            Err(e) => BatchRow {
                file: name,
                status: "error".into(),
                detail: e.to_string(),
            },
        }
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<BatchRow> = {
        use rayon::prelude::*;
        files.par_iter().map(run_one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<BatchRow> = files.iter().map(run_one).collect();

    let width = rows.iter().map(|r| r.file.len()).max().unwrap_or(4).max(4);
    println!("{:width$}  {:18}  detail", "file", "status");
    for row in &rows {
        println!("{:width$}  {:18}  {}", row.file, row.status, row.detail);
    }
    let errors = rows.iter().filter(|r| r.status == "error").count();
    if let Some(path) = json {
        let summary = BatchSummary {
            version: crate::report::SCHEMA_VERSION,
            rows,
            errors,
        };
        let body = serde_json::to_string_pretty(&summary).expect("summary serializes");
        let tmp = path.with_extension("json.tmp");
        if std::fs::write(&tmp, body).and_then(|_| std::fs::rename(&tmp, path)).is_err() {
            eprintln!("error: cannot write summary");
            return ExitCode::from(2);
        }
    }
    if errors > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
