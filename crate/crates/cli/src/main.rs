//! `pmxml`: validate, inspect, convert and check polymake XML data files.

mod check;
mod diag;
mod inspect;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pmxml_core::codec::{decode, encode, to_json, DecodeError, DecodeOptions};
use pmxml_core::infoset::{infoset_equal, read_document, write_document, XmlTree};
use pmxml_core::model::Document;
use pmxml_core::schema::{polymake_schema, validate_with, ValidateOptions};

use diag::Diagnostics;

const OK: u8 = 0;
const INVALID: u8 = 1;
const IO_ERROR: u8 = 2;
const DISCREPANCY: u8 = 3;

#[derive(Parser)]
#[command(name = "pmxml", version, about = "Work with polymake XML data files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Input {
    /// File to read.
    file: PathBuf,
    /// Also accept a root element without any namespace.
    #[arg(long)]
    lax: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check a file against the data-file grammar.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Summarize the properties of a file.
    Inspect {
        #[command(flatten)]
        input: Input,
    },
    /// Convert a file to JSON.
    ToJson {
        #[command(flatten)]
        input: Input,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the canonical form of a file, or with --check verify that it
    /// survives a write/read cycle unchanged.
    Roundtrip {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        check: bool,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check incidences, stored counts and triangulation indices.
    Check {
        #[command(flatten)]
        input: Input,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let diag = Diagnostics::from_env();
    let code = match run(cli.command, &diag) {
        Ok(code) => code,
        Err(code) => code,
    };
    ExitCode::from(code)
}

/// `Err` carries the exit code after the diagnostic has been printed.
type Outcome = Result<u8, u8>;

fn run(command: Command, diag: &Diagnostics) -> Outcome {
    match command {
        Command::Validate { input } => cmd_validate(&input, diag),
        Command::Inspect { input } => {
            let doc = load(&input, diag)?;
            print!("{}", inspect::summary(&doc));
            Ok(OK)
        }
        Command::ToJson { input, out } => {
            let doc = load(&input, diag)?;
            emit(out.as_deref(), format!("{}\n", to_json(&doc)).as_bytes(), diag)?;
            Ok(OK)
        }
        Command::Roundtrip { input, check, out } => {
            let doc = load(&input, diag)?;
            if check {
                roundtrip_check(&doc, &input, diag)
            } else {
                emit(out.as_deref(), &write_document(&encode(&doc)), diag)?;
                Ok(OK)
            }
        }
        Command::Check { input } => {
            let doc = load(&input, diag)?;
            let report = check::run(&doc);
            for line in &report.lines {
                println!("{line}");
            }
            Ok(if report.clean { OK } else { DISCREPANCY })
        }
    }
}

fn read_tree(input: &Input, diag: &Diagnostics) -> Result<XmlTree, u8> {
    let bytes = fs::read(&input.file).map_err(|e| {
        diag.error(&format!("cannot read {}: {e}", input.file.display()));
        IO_ERROR
    })?;
    read_document(&bytes).map_err(|e| {
        diag.error(&format!("{}:{e}", input.file.display()));
        INVALID
    })
}

fn load(input: &Input, diag: &Diagnostics) -> Result<Document, u8> {
    let tree = read_tree(input, diag)?;
    let opts = DecodeOptions {
        lax_namespace: input.lax,
        ..DecodeOptions::default()
    };
    decode(&tree, &opts).map_err(|e| {
        match e {
            DecodeError::SchemaViolation(vs) => {
                for v in vs {
                    diag.error(&format!("{}: {v}", input.file.display()));
                }
            }
            other => diag.error(&format!("{}: {other}", input.file.display())),
        }
        INVALID
    })
}

fn cmd_validate(input: &Input, diag: &Diagnostics) -> Outcome {
    let tree = read_tree(input, diag)?;
    let opts = ValidateOptions {
        lax_namespace: input.lax,
    };
    let report = validate_with(&tree, &polymake_schema(), opts).map_err(|e| {
        diag.error(&format!("internal grammar error: {e}"));
        IO_ERROR
    })?;
    if report.valid {
        println!("VALID");
        return Ok(OK);
    }
    for v in &report.violations {
        println!("{v}");
    }
    Ok(INVALID)
}

fn roundtrip_check(doc: &Document, input: &Input, diag: &Diagnostics) -> Outcome {
    let canonical = encode(doc);
    let reread = read_document(&write_document(&canonical)).map_err(|e| {
        diag.error(&format!("canonical output is not well-formed: {e}"));
        INVALID
    })?;
    let again = decode(&reread, &DecodeOptions::default()).map_err(|e| {
        diag.error(&format!("canonical output does not decode: {e}"));
        INVALID
    })?;
    if again != *doc || !infoset_equal(&encode(&again), &canonical) {
        diag.error(&format!("{}: round trip changed the document", input.file.display()));
        return Err(INVALID);
    }
    println!("round trip OK");
    Ok(OK)
}

fn emit(out: Option<&Path>, bytes: &[u8], diag: &Diagnostics) -> Result<(), u8> {
    use std::io::Write;
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| {
            diag.error(&format!("cannot write {}: {e}", path.display()));
            IO_ERROR
        }),
        None => std::io::stdout().write_all(bytes).map_err(|e| {
            diag.error(&format!("cannot write output: {e}"));
            IO_ERROR
        }),
    }
}
