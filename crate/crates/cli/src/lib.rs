//! Library side of the `rigidity` command-line tool: curvature files, report
//! rendering and the command implementations.

pub mod commands;
pub mod file;
pub mod report;
pub mod suites;

use thiserror::Error;

/// Errors that abort a command with exit status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    File { path: String, source: file::FileError },
    #[error(transparent)]
    Core(#[from] rigidity_core::Error),
}

/// Exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const INPUT_ERROR: i32 = 2;
}

/// Parses `a..b`, `a..=b` (both inclusive) or a single integer.
pub fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let bad = || CliError::Input(format!("invalid range `{text}` (expected a..b)"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(text)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(CliError::Input(format!("empty range `{text}`")));
    }
    Ok(lo..=hi)
}
