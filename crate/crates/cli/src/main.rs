use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use logitkit::inference::DEFAULT_GRID_POINTS;
use logitkit::FitConfig64;
use logitkit_cli::output::FittedModel;
use logitkit_cli::{
    cmd_curve, cmd_cv, cmd_fit, cmd_predict, cmd_pressq, cmd_test, CliError, CsvSpec, Format,
    Payload, RunOutput,
};

/// Binary logistic regression from CSV files.
#[derive(Parser)]
#[command(name = "logitkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit by maximum likelihood (Newton/IRLS)
    Fit {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Apply a saved fit (json from `fit`) to new rows
    Predict {
        /// Fitted model json
        model: PathBuf,
        /// CSV with the model's feature columns
        csv: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[arg(long, default_value_t = ',')]
        delimiter: char,
        #[arg(long)]
        no_header: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Likelihood-ratio test of a reduced model against the full model
    Test {
        #[command(flatten)]
        data: DataArgs,
        /// Features kept in the reduced model (intercept always kept)
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        reduced: Vec<String>,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Leave-one-out cross-validated error rate with Press's Q
    Cv {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Press's Q test of an error rate (or discriminant power)
    Pressq {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rate: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Press's Q p-value as a function of discriminant power
    Curve {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct DataArgs {
    /// Input CSV
    csv: PathBuf,
    #[arg(long, default_value = "y")]
    label_col: String,
    /// Feature columns, comma separated (default: every numeric non-label column)
    #[arg(long, value_delimiter = ',')]
    features: Option<Vec<String>>,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// Columns are then named 1, 2, ... by position
    #[arg(long)]
    no_header: bool,
}

#[derive(Args)]
struct FitArgs {
    /// Gradient-norm stopping tolerance
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e8)]
    divergence_norm: f64,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn delimiter_byte(c: char) -> Result<u8, CliError> {
    u8::try_from(c)
        .ok()
        .filter(|b| b.is_ascii())
        .ok_or_else(|| CliError::Usage(format!("--delimiter must be a single ASCII character, got {c:?}")))
}

fn csv_spec(path: PathBuf, label: String, features: Option<Vec<String>>, delimiter: char, no_header: bool) -> Result<CsvSpec, CliError> {
    Ok(CsvSpec {
        path,
        label_column: label,
        feature_columns: features,
        delimiter: delimiter_byte(delimiter)?,
        has_header: !no_header,
    })
}

impl DataArgs {
    fn spec(self) -> Result<CsvSpec, CliError> {
        csv_spec(self.csv, self.label_col, self.features, self.delimiter, self.no_header)
    }
}

impl FitArgs {
    fn config(&self) -> FitConfig64 {
        FitConfig64 {
            grad_tol: self.tol,
            max_iter: self.max_iter,
            divergence_norm: self.divergence_norm,
        }
    }
}

fn run(cli: Cli) -> Result<RunOutput, CliError> {
    match cli.command {
        Command::Fit { data, fit, out } => cmd_fit(&data.spec()?, &fit.config(), out.format),
        Command::Predict {
            model,
            csv,
            threshold,
            delimiter,
            no_header,
            out,
        } => {
            let spec = csv_spec(csv, String::new(), None, delimiter, no_header)?;
            cmd_predict(&model, &spec, threshold, out.format)
        }
        Command::Test {
            data,
            reduced,
            fit,
            out,
        } => cmd_test(&data.spec()?, &reduced, &fit.config(), out.format),
        Command::Cv {
            data,
            fit,
            threshold,
            out,
        } => cmd_cv(&data.spec()?, &fit.config(), threshold, out.format),
        Command::Pressq { n, rate, out } => cmd_pressq(n, rate, out.format),
        Command::Curve { n, grid, out } => cmd_curve(n, grid, out.format),
    }
}

fn diagnostics(output: &RunOutput) {
    match &output.payload {
        Payload::Fit(FittedModel { fit, .. }) if !fit.converged() => {
            eprintln!("warning: fit stopped with status {} after {} iterations", fit.status, fit.iterations);
        }
        Payload::Cv(cv) if cv.report.non_converged_folds > 0 => {
            eprintln!("note: {} of {} folds did not converge", cv.report.non_converged_folds, cv.report.n);
        }
        _ => {}
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(output) => {
            diagnostics(&output);
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(output.render().as_bytes()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
