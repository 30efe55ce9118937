//! Command-line front end for the sidwave laboratory.

use clap::{Parser, Subcommand};
use sidwave::certificate;
use sidwave::exponents;
use sidwave::harness;
use sidwave::problem::ProblemSpec;
use sidwave::solver::{self, EquationForm};
use sidwave::{Error, Result};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "sidwave",
    about = "Lifespan laboratory for the scale-invariant damped semilinear wave equation",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the exponent report for (n, mu) and optionally p.
    Exponents {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        p: Option<f64>,
        /// Emit a single JSON object instead of aligned text.
        #[arg(long)]
        json: bool,
    },
    /// Compute the blow-up certificate for a problem config.
    Certificate {
        #[arg(long)]
        config: PathBuf,
        /// Output JSON path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Integrate one Cauchy problem and write the functional trace.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        eps: f64,
        /// original | liouville
        #[arg(long, default_value = "original")]
        form: String,
        /// Trace CSV path; the blow-up verdict goes to <out>.meta.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an ε-sweep with scaling fit and bound-compliance flags.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated ε values.
        #[arg(long, value_delimiter = ',', required = true)]
        eps_list: Vec<f64>,
        /// Concurrent solver jobs.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a persisted trace against a certificate; nonzero exit on a
    /// violated lower bound.
    Verify {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Emit plot data, a plot script, and a slope summary from a sweep.
    Plot {
        #[arg(long)]
        sweep: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Exponents { n, mu, p, json } => {
            let report = exponents::exponent_report(n, mu, p)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{report}");
            }
            Ok(0)
        }
        Cmd::Certificate { config, out } => {
            let spec = ProblemSpec::from_config_file(&config)?;
            let cert = certificate::compute_constants(&spec)?;
            let doc = cert.document(&spec);
            std::fs::write(&out, serde_json::to_string_pretty(&doc)?)?;
            for w in &cert.warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "certificate written to {} (t0 = {}, lifespan exponent = {:.6})",
                out.display(),
                cert.t0,
                cert.lifespan_exponent
            );
            Ok(0)
        }
        Cmd::Solve { config, eps, form, out } => {
            let spec = ProblemSpec::from_config_file(&config)?;
            let form: EquationForm = form.parse()?;
            let trace = solver::solve(&spec, eps, form)?;
            harness::write_trace_csv(&trace, &spec, &out)?;
            let meta = harness::TraceMeta::from_trace(&trace, &spec);
            let meta_path = out.with_extension("meta.json");
            std::fs::write(&meta_path, serde_json::to_string_pretty(&meta)?)?;
            match trace.blowup {
                Some(rec) => println!(
                    "blow-up at t = {} (sensitivity {}, dt delta {:?})",
                    rec.t_num, rec.threshold_sensitivity, rec.dt_refinement_delta
                ),
                None => println!("no blow-up before t_max = {}", spec.grid.t_max),
            }
            println!("trace written to {} (+ {})", out.display(), meta_path.display());
            Ok(0)
        }
        Cmd::Sweep { config, eps_list, jobs, out } => {
            let spec = ProblemSpec::from_config_file(&config)?;
            let result = harness::sweep(&spec, &eps_list, jobs)?;
            harness::write_sweep_csv(&result, &out)?;
            println!("status: {}", result.status);
            if let Some(fit) = &result.fit {
                println!(
                    "fitted slope {:.6} (r^2 {:.4}) vs predicted {:.6}",
                    fit.slope, fit.r_squared, result.predicted_slope
                );
            }
            for e in &result.entries {
                if let Some(err) = &e.error {
                    eprintln!("eps = {}: {err}", e.eps);
                }
            }
            println!("sweep written to {}", out.display());
            Ok(0)
        }
        Cmd::Verify { trace, cert } => {
            let persisted = harness::read_trace_csv(&trace)?;
            let doc: certificate::CertificateDocument =
                serde_json::from_str(&std::fs::read_to_string(&cert)?)?;
            if doc.provenance.spec != persisted.spec {
                return Err(Error::Config(
                    "certificate and trace were produced from different configs".into(),
                ));
            }
            let certificate = doc.certificate();
            let report = solver::verify_lower_bounds(
                &persisted.trace,
                &certificate,
                &persisted.spec,
                persisted.trace.eps,
                None,
            )?;
            if let Some(reason) = &report.skipped {
                println!("bound checks skipped: {reason}");
            }
            for (name, check) in [("Lp", &report.lp), ("G", &report.g), ("G1", &report.g1)] {
                match check {
                    Some(c) => println!(
                        "{name} lower bound: margin {:.6} at t = {} over {} points",
                        c.margin, c.worst_t, c.n_checked
                    ),
                    None => println!("{name} lower bound: no recorded times past T0"),
                }
            }
            // Identity defect, informational. Centered differencing of G
            // degenerates right at a blow-up tail, so the readout stops
            // at 80% of the trace span.
            let res = &persisted.trace.key_residual;
            let times = &persisted.trace.times;
            if res.len() > 2 {
                let t_cap = 0.8 * times.last().copied().unwrap_or(0.0);
                let worst = res
                    .iter()
                    .zip(times)
                    .skip(1)
                    .filter(|(_, &t)| t <= t_cap)
                    .fold(0.0f64, |m, (r, _)| m.max(r.abs()));
                println!("identity residual (max over t <= {t_cap:.3}): {worst:.3e}");
            }
            if report.violated {
                eprintln!("BOUND VIOLATED");
                return Ok(1);
            }
            println!("all bounds hold");
            Ok(0)
        }
        Cmd::Plot { sweep, out } => {
            let data = harness::read_sweep_csv(&sweep)?;
            let files = harness::emit_plots(&data, &out)?;
            for f in files {
                println!("wrote {}", f.display());
            }
            Ok(0)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}
