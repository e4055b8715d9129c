//! The `gammaineq` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::estimators::{estimate_all, EstimateReport, Sample};
use crate::io::{read_observations, write_summaries};
use crate::model::{bias, expectation, population_values, GammaParams, IndexKind};
use crate::simulation::{run_grid, SamplingRate, SimConfig};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_CORRECTION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "gammaineq",
    version,
    about = "Theil and Atkinson inequality indices for gamma populations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Population Theil T, Theil L and Atkinson indices of Gamma(alpha, rate).
    Population {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Expectations and biases of the plug-in estimators for samples of size n.
    Expectation {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        n: usize,
    },
    /// Estimate the indices from a data file (one value per line, or CSV
    /// with an `income` column).
    Estimate {
        input: PathBuf,
        /// Also report bias-corrected estimates using the shape MLE.
        #[arg(long)]
        correct: bool,
    },
    /// Run the Monte Carlo study and write results as CSV.
    Simulate {
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.5, 1.5, 2.0])]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [10usize, 20, 50, 100, 200])]
        ns: Vec<usize>,
        /// Replications per grid cell.
        #[arg(long, default_value_t = 1000)]
        nsim: usize,
        /// Sampling rate: a positive number, or `alpha` for rate = shape.
        #[arg(long, default_value = "1.0")]
        rate: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Formats `x` with `digits` significant digits.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = digits as i32 - 1 - exp;
    if (-4..=15).contains(&exp) && decimals >= 0 {
        format!("{:.*}", decimals as usize, x)
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

fn sig(x: f64) -> String {
    fmt_sig(x, 12)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Population { alpha } => population(alpha, out),
        Command::Expectation { alpha, n } => expectations(alpha, n, out),
        Command::Estimate { input, correct } => estimate(&input, correct, out, err),
        Command::Simulate {
            alphas,
            ns,
            nsim,
            rate,
            seed,
            out: path,
        } => simulate(alphas, ns, nsim, &rate, seed, path.as_deref(), out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl ToString) -> Self {
        Self {
            code,
            message: message.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn io_failure(e: std::io::Error) -> Failure {
    Failure::new(EXIT_DATA, e)
}

fn shape_param(alpha: f64) -> Result<GammaParams<f64>, Failure> {
    GammaParams::with_shape(alpha).map_err(|e| Failure::new(EXIT_DATA, format!("invalid --alpha: {e}")))
}

fn population(alpha: f64, out: &mut dyn Write) -> CmdResult {
    let params = shape_param(alpha)?;
    let pv = population_values(&params).map_err(|e| Failure::new(EXIT_DATA, e))?;
    (|| {
        writeln!(out, "alpha = {alpha}")?;
        writeln!(out, "theil_t = {}", sig(pv.theil_t))?;
        writeln!(out, "theil_l = {}", sig(pv.theil_l))?;
        writeln!(out, "atkinson = {}", sig(pv.atkinson))
    })()
    .map_err(io_failure)
}

fn expectations(alpha: f64, n: usize, out: &mut dyn Write) -> CmdResult {
    let params = shape_param(alpha)?;
    let mut lines = vec![format!("alpha = {alpha}"), format!("n = {n}")];
    for kind in IndexKind::ALL {
        let e = expectation(&params, n, kind).map_err(|e| Failure::new(EXIT_DATA, format!("invalid --n: {e}")))?;
        let b = bias(&params, n, kind).map_err(|e| Failure::new(EXIT_DATA, e))?;
        lines.push(format!("expected_{kind} = {}", sig(e)));
        lines.push(format!("bias_{kind} = {}", sig(b)));
    }
    lines.iter().try_for_each(|l| writeln!(out, "{l}")).map_err(io_failure)
}

fn write_report(out: &mut dyn Write, report: &EstimateReport<f64>) -> std::io::Result<()> {
    writeln!(out, "n = {}", report.n)?;
    writeln!(out, "theil_t = {}", sig(report.theil_t_hat))?;
    writeln!(out, "theil_l = {}", sig(report.theil_l_hat))?;
    writeln!(out, "atkinson = {}", sig(report.atkinson_hat))?;
    if let Some(c) = &report.corrected {
        writeln!(out, "alpha_hat = {}", sig(c.fit.alpha_hat))?;
        writeln!(out, "theil_t_corr = {}", sig(c.theil_t))?;
        writeln!(out, "theil_l_corr = {}", sig(c.theil_l))?;
        writeln!(out, "atkinson_corr = {}", sig(c.atkinson))?;
        writeln!(out, "mle_iterations = {}", c.fit.iterations)?;
    }
    Ok(())
}

fn estimate(path: &Path, correct: bool, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let file = File::open(path).map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))?;
    let values = read_observations(file).map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))?;
    let sample = Sample::new(values).map_err(|e| Failure::new(EXIT_DATA, e))?;
    match estimate_all(&sample, correct) {
        Ok(report) => {
            write_report(out, &report).map_err(io_failure)?;
            if report.corrected.as_ref().is_some_and(|c| c.near_degenerate) {
                let _ = writeln!(err, "note: fitted shape is very large; corrections are negligible");
            }
            Ok(())
        }
        Err(unavailable) => {
            write_report(out, &unavailable.report).map_err(io_failure)?;
            Err(Failure::new(EXIT_NO_CORRECTION, unavailable))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    alphas: Vec<f64>,
    ns: Vec<usize>,
    n_sim: usize,
    rate: &str,
    seed: u64,
    path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let rate: SamplingRate = rate.parse().map_err(|e: Error| Failure::new(EXIT_USAGE, e))?;
    let config = SimConfig {
        alphas,
        ns,
        n_sim,
        rate,
        master_seed: seed,
    };
    let start = Instant::now();
    let rows = run_grid(&config).map_err(|e| Failure::new(EXIT_USAGE, e))?;
    let elapsed = start.elapsed();

    match path {
        Some(path) => write_atomically(path, |w| write_summaries(w, &rows))
            .map_err(|e| Failure::new(EXIT_DATA, format!("cannot write {}: {e}", path.display())))?,
        None => write_summaries(&mut *out, &rows).map_err(|e| Failure::new(EXIT_DATA, e))?,
    }

    let cells = rows.len() / 6;
    let failed: usize = rows.iter().filter(|r| r.estimator.is_corrected()).map(|r| r.n_failed).sum::<usize>() / 3;
    let _ = writeln!(
        err,
        "simulate: {cells} cells x {n_sim} replications, seed {seed}, rate {rate}, {} rows, {failed} failed corrections, {:.2} s",
        rows.len(),
        elapsed.as_secs_f64()
    );
    Ok(())
}

fn write_atomically(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<&mut tempfile::NamedTempFile>) -> csv::Result<()>,
) -> Result<(), Box<dyn std::error::Error>> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(&mut tmp);
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path)?;
    Ok(())
}
