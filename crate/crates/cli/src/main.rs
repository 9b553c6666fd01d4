//! Command-line front end: volume bounds for a batch of PD codes.

mod report;
mod verify;

use std::collections::BTreeMap;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, ValueEnum};
use hypvol::bounds::EvaluationOptions;
use hypvol::diagram::parse_batch;
use rayon::prelude::*;

use report::{build_row, parse_selection, read_reference, write_csv, write_json, Row};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Computes upper bounds on the hyperbolic volume of link complements.
#[derive(Debug, Parser)]
#[command(name = "hypvol", version)]
struct Cli {
    /// File of `name: X(a,b,c,d),...` lines
    #[arg(long, required_unless_present = "verify")]
    input: Option<PathBuf>,
    /// CSV of `name,volume` reference volumes
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Comma-separated bound names, or `all`
    #[arg(long, default_value = "all")]
    bounds: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Treat every diagram as twist reduced
    #[arg(long)]
    assert_twist_reduced: bool,
    /// Run the numerical self-check and exit
    #[arg(long)]
    verify: bool,
    /// Emit unrounded values in JSON
    #[arg(long)]
    full_precision: bool,
}

const EXIT_ROW_ERRORS: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.verify {
        return match verify::run(io::stdout().lock()) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(EXIT_ROW_ERRORS),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_USAGE)
            }
        };
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_ROW_ERRORS),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

/// Processes the batch; `Ok(false)` means some lines were rejected.
fn run(cli: &Cli) -> Result<bool> {
    let selection = parse_selection(&cli.bounds)?;
    let reference = match &cli.reference {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            read_reference(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => BTreeMap::new(),
    };
    let path = cli.input.as_ref().context("--input is required")?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let options = EvaluationOptions { assert_twist_reduced: cli.assert_twist_reduced, ..Default::default() };

    let results: Vec<(usize, Result<Row>)> = parse_batch(&text)
        .into_par_iter()
        .map(|(line, parsed)| {
            let row = parsed.map_err(anyhow::Error::from).and_then(|(name, d)| {
                let r = reference.get(&name).copied();
                build_row(line, name, &d, &selection, &options, r)
            });
            (line, row)
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut clean = true;
    for (line, result) in results {
        match result {
            Ok(row) => {
                if let Some(ratio) = row.ratio().filter(|&q| q < 1.0 - 1e-9) {
                    eprintln!(
                        "{}:{line}: warning: best bound for {} is below the reference volume (ratio {ratio:.6})",
                        path.display(),
                        row.name
                    );
                }
                rows.push(row);
            }
            Err(e) => {
                eprintln!("{}:{line}: {e:#}", path.display());
                clean = false;
            }
        }
    }

    let mut out = BufWriter::new(io::stdout().lock());
    match cli.format {
        Format::Csv => write_csv(&mut out, &rows, &selection)?,
        Format::Json => write_json(&mut out, &rows, cli.full_precision)?,
    }
    out.flush()?;
    Ok(clean)
}
