//! Command-line driver: parse, encode, check, write.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::checker::check_outcome;
use crate::diagnostic::{has_errors, Diagnostic, Location, RuleId};
use crate::encoder::encode_model;
use crate::jolie::render;
use crate::lemma::parse_file;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Translate a LEMMA domain model into an annotated Jolie API.
#[derive(Debug, Parser)]
#[command(name = "lemma2jolie", version)]
struct Args {
    /// Input domain model (.data)
    #[arg(short = 's', value_name = "INPUT_MODEL")]
    source: PathBuf,

    /// Folder receiving `<model-name>.ol` (created if absent)
    #[arg(
        short = 't',
        value_name = "TARGET_FOLDER",
        required_unless_present = "check_only"
    )]
    target: Option<PathBuf>,

    /// Run the checks without writing any file
    #[arg(long, conflicts_with = "no_check")]
    check_only: bool,

    /// Skip the DDD consistency checks
    #[arg(long)]
    no_check: bool,
}

/// Runs the tool and returns the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stderr().lock())
}

/// [`run`] with an explicit diagnostics sink.
pub fn run_with<I, T>(args: I, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(args) => args,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let diagnostics = execute(&args);
    for d in &diagnostics {
        let _ = writeln!(err, "{d}");
    }
    if has_errors(&diagnostics) {
        EXIT_FAILURE
    } else {
        EXIT_OK
    }
}

fn execute(args: &Args) -> Vec<Diagnostic> {
    let (model, mut diagnostics) = parse_file(&args.source);
    let Some(model) = model else {
        return diagnostics;
    };
    let outcome = match encode_model(&model) {
        Ok(outcome) => outcome,
        Err(errors) => {
            diagnostics.extend(errors.into_iter().map(|d| d.with_path(&args.source)));
            return diagnostics;
        }
    };

    let output = args
        .target
        .as_ref()
        .map(|dir| output_path(dir, &args.source));
    if !args.no_check {
        diagnostics.extend(check_outcome(
            &outcome,
            Some(&args.source),
            output.as_deref(),
        ));
    }
    if let (Some(output), false) = (output, args.check_only) {
        if let Err(e) = write_atomically(&output, &render(&outcome.document)) {
            diagnostics.push(
                Diagnostic::error(
                    RuleId::IoError,
                    Location::START,
                    format!("cannot write output: {e}"),
                )
                .with_path(output),
            );
        }
    }
    diagnostics
}

/// `<target>/<input-stem>.ol`
pub fn output_path(target: &Path, source: &Path) -> PathBuf {
    let stem = source.file_stem().unwrap_or(source.as_os_str());
    let mut name = stem.to_os_string();
    name.push(".ol");
    target.join(name)
}

fn write_atomically(path: &Path, text: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp_name = OsString::from(".");
    tmp_name.push(path.file_name().unwrap_or_default());
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = dir.join(tmp_name);
    let result = fs::write(&tmp, text).and_then(|()| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}
