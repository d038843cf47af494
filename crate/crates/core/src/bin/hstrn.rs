use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hstrn::cli::{self, CliError, Format, Report, RunOptions, Table};

#[derive(Parser)]
#[command(name = "hstrn", version, about = "Secrecy performance of satellite-terrestrial multicast relay networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<Format>,
    /// Monte-Carlo seed; overrides [mc] seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; overrides [mc] workers.
    #[arg(long)]
    workers: Option<usize>,
    /// Starting series truncation; overrides [series] terms.
    #[arg(long)]
    terms: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a spec file over its sweep.
    Analyze {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run every requested method on a spec and gate their agreement.
    Compare {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print the shadowing presets.
    Presets {
        #[arg(long)]
        format: Option<Format>,
    },
    /// Convert Loo parameters to Shadowed-Rician (m_s, xi_s).
    Loo {
        /// Loo mean, log domain.
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        /// Loo variance d0.
        #[arg(long, required_unless_present = "sqrt_d0", conflicts_with = "sqrt_d0")]
        d0: Option<f64>,
        /// Loo standard deviation, as tabulated.
        #[arg(long)]
        sqrt_d0: Option<f64>,
        /// Multipath half-power P_s, carried through unchanged.
        #[arg(long)]
        ps: f64,
        #[arg(long)]
        format: Option<Format>,
    },
}

fn read_spec(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn spec_format(text: &str) -> Result<Option<Format>, CliError> {
    let spec = cli::ExperimentSpec::parse(text)?;
    spec.base.output.format.as_deref().map(str::parse).transpose()
}

fn finish(report: &Report, text: &str, common: &Common) -> Result<(), CliError> {
    let spec = cli::ExperimentSpec::parse(text)?;
    let format = match common.format {
        Some(f) => f,
        None => spec_format(text)?.unwrap_or_default(),
    };
    let out = common.out.clone().or(spec.base.output.path.map(PathBuf::from));
    emit(&report.render(format)?, out.as_ref())?;
    if out.is_some() {
        print!("{}", report.table.pretty());
    }
    Ok(())
}

fn table_only(table: Table, format: Option<Format>) -> Result<(), CliError> {
    let report = Report { table, spec_sha256: String::new(), seed: 0, all_passed: true };
    match format.unwrap_or_default() {
        Format::Csv => print!("{}", report.table.pretty()),
        Format::Json => print!("{}", report.render(Format::Json)?),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { spec, common } => {
            let text = read_spec(&spec)?;
            let opts = RunOptions { seed: common.seed, workers: common.workers, terms: common.terms };
            let report = cli::analyze(&text, &opts)?;
            finish(&report, &text, &common)
        }
        Command::Compare { spec, common } => {
            let text = read_spec(&spec)?;
            let opts = RunOptions { seed: common.seed, workers: common.workers, terms: common.terms };
            let report = cli::compare(&text, &opts)?;
            finish(&report, &text, &common)?;
            if report.all_passed {
                Ok(())
            } else {
                Err(CliError::GateFailed("one or more cross-method gates failed".into()))
            }
        }
        Command::Presets { format } => table_only(cli::presets(), format),
        Command::Loo { mu, d0, sqrt_d0, ps, format } => {
            let d0 = d0.unwrap_or_else(|| sqrt_d0.expect("clap enforces one of d0/sqrt_d0").powi(2));
            table_only(cli::loo(mu, d0, ps)?, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hstrn: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
