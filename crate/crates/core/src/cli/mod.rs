//! Command-line front end: configuration, sweeps and output.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 regime or
//! geometry violation, 4 numerical failure (non-convergence or an oracle
//! check outside tolerance).

pub mod config;
pub mod output;
pub mod run;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub use config::{load_config, Args, Format, Mode, RunConfig};
pub use output::{parse_csv, Cell, Table};
pub use run::{run, Report};

/// Environment variable naming the directory for output files when no
/// explicit `output` is configured.
pub const OUTPUT_DIR_VAR: &str = "ECP_OUTPUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{location}: {message}")]
    Config { location: String, message: String },
    #[error(transparent)]
    Physics(#[from] crate::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Physics(e) if e.is_numerical() => 4,
            CliError::Physics(crate::Error::InvalidParameter(_)) => 2,
            CliError::Physics(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

/// Where the table goes: explicit `output`, else `$ECP_OUTPUT_DIR/<mode>.<ext>`,
/// else stdout (`None`).
pub fn output_path(config: &RunConfig, output_dir: Option<PathBuf>) -> Option<PathBuf> {
    config.output.clone().or_else(|| {
        output_dir.map(|dir| {
            dir.join(format!(
                "{}.{}",
                config.mode.name(),
                config.format.extension()
            ))
        })
    })
}

fn execute(
    args: &Args,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Report, CliError> {
    let config = load_config(args)?;
    let report = run(&config)?;
    for w in &report.warnings {
        writeln!(stderr, "warning: {w}")?;
    }
    match output_path(&config, std::env::var_os(OUTPUT_DIR_VAR).map(PathBuf::from)) {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
            report.table.write(config.format, &mut file)?;
            file.flush()?;
        }
        None => report.table.write(config.format, stdout)?,
    }
    Ok(report)
}

/// Parses `argv`, runs, writes output and returns the process exit code.
pub fn main_with_args<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&args, stdout, stderr) {
        Ok(report) if report.failures.is_empty() => 0,
        Ok(report) => {
            for f in &report.failures {
                let _ = writeln!(stderr, "oracle check failed: {f}");
            }
            4
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(list: &[&str]) -> (i32, String, String) {
        let mut argv = vec!["ecp"];
        argv.extend_from_slice(list);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with_args(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            call(&["--J", "0.3", "--delta", "-1", "--lambda", "0.01", "--rmax", "3"]).0,
            0
        );
        assert_eq!(call(&["--J", "-0.1"]).0, 2);
        assert_eq!(call(&["--bogus"]).0, 2);
        assert_eq!(call(&["--J", "0.5"]).0, 3);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn explicit_output_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.json");
        let (code, out, _) = call(&[
            "--preset",
            "fig2",
            "--format",
            "json",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(out.is_empty());
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 20);
    }

    #[test]
    fn default_output_location() {
        let c = load_config(&Args::try_parse_from(["ecp", "--mode", "decay-profile"]).unwrap())
            .unwrap();
        assert_eq!(output_path(&c, None), None);
        assert_eq!(
            output_path(&c, Some(PathBuf::from("/data"))),
            Some(PathBuf::from("/data/decay-profile.csv"))
        );
        let c = load_config(&Args::try_parse_from(["ecp", "--output", "x.csv"]).unwrap()).unwrap();
        assert_eq!(
            output_path(&c, Some(PathBuf::from("/data"))),
            Some(PathBuf::from("x.csv"))
        );
    }
}
