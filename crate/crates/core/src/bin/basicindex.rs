use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use basicindex::scenario::commands::{self, ExitStatus, Format, Report};
use basicindex::scenario::resolve;
use basicindex::Tolerances;

#[derive(Parser)]
#[command(name = "basicindex", version, about = "Local index computations for perturbed basic Dirac operators")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    #[value(alias = "json-like")]
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check every closure datum and the holonomy equivariance.
    Validate { file: String },
    /// Local indices per closure and their sum.
    Index { file: String },
    /// Lowest model-operator levels at one closure.
    Spectrum {
        file: String,
        #[arg(long)]
        closure: String,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Also solve the one-dimensional oscillators by finite differences.
        #[arg(long)]
        numerical: bool,
    },
    /// Compare local indices with the invariant model kernels.
    ModelCheck { file: String },
    /// Convergence of the circle operator towards its model spectrum.
    Localize {
        file: String,
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000,10000")]
        s: Vec<f64>,
        #[arg(long, default_value_t = 256)]
        modes: usize,
        #[arg(long, default_value_t = 4)]
        jmax: usize,
    },
    /// Bundled scenarios.
    ListExamples,
    /// Run every bundled scenario against its expected index.
    RunCorpus,
}

fn run(command: Command, tols: Tolerances) -> Report {
    let load = |file: &str| resolve(file).map_err(|e| Report::from_error(&e));
    let result = match command {
        Command::Validate { file } => load(&file).map(|s| commands::validate(&s, tols)),
        Command::Index { file } => load(&file).map(|s| commands::index(&s, tols)),
        Command::Spectrum { file, closure, count, numerical } => {
            load(&file).map(|s| commands::spectrum(&s, &closure, count, numerical, tols))
        }
        Command::ModelCheck { file } => load(&file).map(|s| commands::model_check(&s, tols)),
        Command::Localize { file, s, modes, jmax } => load(&file).map(|sc| commands::localize(&sc, &s, modes, jmax)),
        Command::ListExamples => Ok(commands::list_examples()),
        Command::RunCorpus => Ok(commands::run_corpus(tols)),
    };
    result.unwrap_or_else(|r| r)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ExitStatus::InputError.code() as u8 } else { 0 });
        }
    };
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    let report = match Tolerances::from_env() {
        Ok(tols) => run(cli.command, tols),
        // a malformed BASICINDEX_TOL is bad input like any other
        Err(e) => Report { status: ExitStatus::InputError, ..Report::from_error(&e) },
    };
    let out = report.render(format);
    if report.status == ExitStatus::InputError && format == Format::Text {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    ExitCode::from(report.status.code() as u8)
}
