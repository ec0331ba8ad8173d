//! Command-line front end: JSON documents in, JSON reports out.
//!
//! Exit codes are 0 when every check passes, 1 when some check fails (a
//! mathematical finding) and 2 for usage, IO, schema or validation errors.

pub mod commands;
pub mod document;
pub mod error;

use std::ffi::OsString;
use std::fs;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use commands::{execute, Cli, Globals, Outcome};
use document::{canonical_string, Document};
use error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Caps the rayon pool used for suite samples.
pub const THREADS_VAR: &str = "FACTN_THREADS";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn sha256_hex(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

/// The report: tool version, seed, per-check input digests and a summary.
pub fn envelope(command: &str, doc: &Document, outcome: &Outcome) -> Value {
    let mut params = outcome.params.clone();
    params.insert("seed".into(), json!(outcome.seed));
    let params = Value::Object(params);
    let digest = sha256_hex(&[
        doc.to_canonical_string().as_bytes(),
        command.as_bytes(),
        canonical_string(&params).as_bytes(),
    ]);
    let checks: Vec<Value> = outcome
        .report
        .checks
        .iter()
        .map(|c| {
            let mut o = Map::new();
            o.insert("name".into(), json!(c.name));
            o.insert("pass".into(), json!(c.pass));
            if !c.detail.is_null() {
                o.insert("detail".into(), c.detail.clone());
            }
            let d = match c.seed {
                Some(s) => {
                    o.insert("seed".into(), json!(s));
                    sha256_hex(&[digest.as_bytes(), s.to_string().as_bytes()])
                }
                None => digest.clone(),
            };
            o.insert("inputs_digest".into(), json!(d));
            Value::Object(o)
        })
        .collect();
    let mut out = Map::new();
    out.insert("tool".into(), json!({ "name": "factn", "version": VERSION }));
    out.insert("command".into(), json!(command));
    out.insert("seed".into(), json!(outcome.seed));
    out.insert("params".into(), params);
    out.insert("inputs_digest".into(), json!(digest));
    out.insert("checks".into(), Value::Array(checks));
    out.insert("summary".into(), outcome.report.summary());
    if let Some(r) = &outcome.result {
        out.insert("result".into(), r.to_json());
    }
    if !outcome.values.is_empty() {
        out.insert("values".into(), Value::Object(outcome.values.clone()));
    }
    Value::Object(out)
}

fn run_cli(cli: &Cli) -> Result<(i32, String), CliError> {
    let path = cli.command.input().path()?;
    let doc = Document::load(path)?;
    let globals = Globals { seed: cli.seed.or(doc.options.seed), bound: cli.bound, samples: cli.samples };
    let outcome = execute(&cli.command, &doc, globals)?;
    let code = if outcome.report.all_pass() { 0 } else { 1 };
    let text = canonical_string(&envelope(cli.command.name(), &doc, &outcome));
    if let (Some(p), Some(r)) = (&cli.emit, &outcome.result) {
        r.save(p)?;
    }
    match &cli.out {
        Some(p) => {
            fs::write(p, &text).map_err(|e| CliError::io(p, e))?;
            Ok((code, String::new()))
        }
        None => Ok((code, text)),
    }
}

fn threads() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got `{v}`"))),
        },
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => RunOutput { code: 0, stdout: text, stderr: String::new() },
                _ => RunOutput { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let result = threads().and_then(|t| match t {
        None => run_cli(&cli),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot build a pool of {k} threads: {e}")))?
            .install(|| run_cli(&cli)),
    });
    match result {
        Ok((code, stdout)) => RunOutput { code, stdout, stderr: String::new() },
        Err(e) => RunOutput { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
