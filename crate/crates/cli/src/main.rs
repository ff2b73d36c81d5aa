use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rigidity_cli::commands::{self, Mode};
use rigidity_cli::file::CurvatureFile;
use rigidity_cli::report::{Format, Report};
use rigidity_cli::suites::{self, Suite, VerifyOptions};
use rigidity_cli::{exit, parse_range, CliError};
use rigidity_core::scalar::parse_rational;
use rigidity_core::Rational;

#[derive(Parser)]
#[command(name = "rigidity", version, about = "Curvature operator of the second kind: spectra, rigidity constants and verification suites")]
struct Cli {
    /// Output format: aligned text or one key=value record per line.
    #[arg(long, value_enum, global = true, default_value = "human")]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Kv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Identities,
    Lemmas,
    Bochner,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of the second-kind operator for a curvature file.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "float")]
        mode: ModeArg,
    },
    /// Table of exact rigidity constants theta(n, k).
    Theta {
        /// Inclusive dimension range, e.g. 4..10.
        #[arg(long, default_value = "4..10")]
        n_range: String,
    },
    /// Seeded verification suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Inclusive dimension range, e.g. 4..8.
        #[arg(long, default_value = "4..8")]
        dims: String,
    },
    /// Minimize sum l^3 - sum l^2 over {l >= 0, sum l = C}.
    Minimize {
        #[arg(long = "N")]
        count: usize,
        /// Total, as p/q, integer or decimal.
        #[arg(long = "C")]
        total: String,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the cone-condition hypotheses for a curvature file or a spectrum.
    Classify {
        #[arg(long, conflicts_with = "spectrum")]
        input: Option<PathBuf>,
        /// Comma-separated eigenvalues (p/q or decimals).
        #[arg(long, requires = "n", allow_hyphen_values = true)]
        spectrum: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
    },
}

fn read_file(path: &PathBuf) -> Result<CurvatureFile, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{shown}: {e}")))?;
    CurvatureFile::parse(&text).map_err(|source| CliError::File { path: shown, source })
}

fn rational(text: &str, what: &str) -> Result<Rational, CliError> {
    parse_rational(text.trim()).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Spectrum { input, mode } => commands::spectrum(&read_file(input)?, (*mode).into()),
        Command::Theta { n_range } => commands::theta(parse_range(n_range)?),
        Command::Verify { suite, trials, seed, dims } => {
            let suite = match suite {
                SuiteArg::Identities => Suite::Identities,
                SuiteArg::Lemmas => Suite::Lemmas,
                SuiteArg::Bochner => Suite::Bochner,
                SuiteArg::All => Suite::All,
            };
            suites::run(&VerifyOptions { suite, trials: *trials, seed: *seed, dims: parse_range(dims)? })
        }
        Command::Minimize { count, total, restarts, seed } => {
            commands::minimize(*count, &rational(total, "--C")?, *restarts, *seed)
        }
        Command::Classify { input, spectrum, n, mode } => match (input, spectrum) {
            (Some(path), None) => commands::classify_file(&read_file(path)?),
            (None, Some(values)) => {
                let values = values
                    .split(',')
                    .map(|v| rational(v, "--spectrum"))
                    .collect::<Result<Vec<_>, _>>()?;
                commands::classify_spectrum(&values, n.expect("clap enforces --n"), (*mode).into())
            }
            _ => Err(CliError::Input("classify needs --input FILE or --spectrum VALUES --n N".into())),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Human => Format::Human,
        FormatArg::Kv => Format::Kv,
    };
    match run(&cli) {
        Ok(report) => {
            let color = format == Format::Human
                && std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty())
                && std::io::stdout().is_terminal();
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.render(format, color).as_bytes());
            let _ = out.flush();
            ExitCode::from(if report.all_passed() { exit::OK } else { exit::CHECK_FAILED } as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::INPUT_ERROR as u8)
        }
    }
}
