use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lfcheck::alpha_num::{signed_pow, AlphaContext};
use lfcheck::harness::{self, Format, FunctionSpec, SweepConfig};
use lfcheck::ineq::{ostrowski_constants, Evaluator, IneqId, Params};
use lfcheck::quad::{fractal_integral_numeric, MomentFunctional};
use lfcheck::{Error, Result};

/// Checks Hermite-Hadamard and Ostrowski-type inequalities for local
/// fractional integrals. Exit status: 0 all rows hold, 1 some row is
/// violated, 2 configuration or evaluation error.
#[derive(Parser)]
#[command(name = "lfcheck", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the constants M(s, alpha) and N(s, alpha).
    Constants {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        s: f64,
    },
    /// Evaluate one inequality at one point.
    Eval {
        #[arg(long)]
        ineq: IneqId,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long = "fn")]
        function: FunctionSpec,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Run every point of a JSON sweep config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[arg(long)]
        parallel: bool,
    },
    /// Search for a violation with random coefficients, then shrink it.
    Falsify {
        #[arg(long)]
        ineq: IneqId,
        /// Template whose coefficients are randomly rescaled.
        #[arg(long)]
        family: FunctionSpec,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Alphas to sample from (default 1); ignored with --config.
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<f64>,
        /// Sweep config supplying the parameter axes.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Signed coefficient multipliers in [-2, 2].
        #[arg(long)]
        adversarial: bool,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Fit the Muntz quadrature and report its conditioning and exactness.
    QuadTest {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        max_grade: usize,
    },
}

fn write_stdout(bytes: &[u8]) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)
        .and_then(|_| out.flush())
        .map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Constants { alpha, s } => {
            let c = ostrowski_constants(s, &AlphaContext::new(alpha)?)?;
            println!("M = {}", harness::format_g17(c.m));
            println!("N = {}", harness::format_g17(c.n));
            Ok(0)
        }
        Command::Eval {
            ineq,
            alpha,
            s,
            p,
            q,
            a,
            b,
            x,
            function,
            format,
        } => {
            let ev = Evaluator::new(AlphaContext::new(alpha)?)?;
            let f = function.to_series(ev.ctx())?;
            let params = Params {
                alpha: Some(alpha),
                s: s.filter(|_| ineq.uses_s()),
                p: p.filter(|_| ineq.uses_p()),
                q: q.filter(|_| ineq.uses_q()),
                a: Some(a),
                b: Some(b),
                x: x.filter(|_| ineq.uses_x()),
            };
            let mut report = harness::evaluate(&ev, ineq, &f, &params)?;
            report.params = params;
            report.function = function.to_string();
            let rows = [report];
            write_stdout(&harness::render(&rows, format)?)?;
            Ok(harness::exit_code(&rows) as u8)
        }
        Command::Sweep {
            config,
            out,
            format,
            parallel,
        } => {
            let cfg = SweepConfig::load(&config)?;
            let rows = harness::run_sweep_with(&cfg, parallel)?;
            match out {
                Some(path) => harness::emit_report(&rows, format, &path)?,
                None => write_stdout(&harness::render(&rows, format)?)?,
            }
            Ok(harness::exit_code(&rows) as u8)
        }
        Command::Falsify {
            ineq,
            family,
            trials,
            seed,
            alpha,
            config,
            adversarial,
            format,
        } => {
            let cfg = match config {
                Some(path) => SweepConfig::load(&path)?,
                None => SweepConfig {
                    alphas: if alpha.is_empty() { vec![1.0] } else { alpha },
                    seed,
                    ..SweepConfig::default()
                },
            };
            let options = harness::FalsifyOptions {
                trials,
                seed,
                adversarial,
            };
            match harness::falsify(ineq, &family, &cfg, options)? {
                Some(ce) => {
                    eprintln!(
                        "counterexample at trial {} after {} shrink steps",
                        ce.trial, ce.shrink_steps
                    );
                    write_stdout(&harness::render(&[ce.report], format)?)?;
                    Ok(1)
                }
                None => {
                    eprintln!("no counterexample in {trials} trials");
                    Ok(0)
                }
            }
        }
        Command::QuadTest { alpha, max_grade } => {
            let ctx = AlphaContext::new(alpha)?;
            let j = MomentFunctional::with_max_grade(ctx, max_grade)?;
            println!("alpha = {alpha}, max grade = {max_grade}, nodes = {}", j.nodes().len());
            println!("condition = {:.6e}", j.condition());
            println!("grade,exact,numeric,abs_error,fit_residual");
            let mut worst: f64 = 0.0;
            for (k, &exact) in j.moments().iter().enumerate() {
                let (value, residual) = fractal_integral_numeric(|t| signed_pow(t, k as f64 * alpha), &j)?;
                let err = (value - exact).abs();
                worst = worst.max(err);
                println!(
                    "{k},{},{},{:.3e},{:.3e}",
                    harness::format_g17(exact),
                    harness::format_g17(value),
                    err,
                    residual
                );
            }
            println!("max abs error = {worst:.3e}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
