//! Command-line front end for the xychain library.
//!
//! Subcommands cover point evaluations (`correlators`, `rho`, `discord`),
//! grid sweeps with a work-stealing pool (`sweep`), ground-state fidelity
//! (`fidelity`), the scaling fits (`scaling fss|factorization|thermal`),
//! discord displacement (`displacement`), and canned figure recipes
//! (`reproduce`). Exit codes: 0 success, 2 validation error, 3 numerical
//! failure.

mod output;
mod run;
mod spec;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spec::{CliError, CliResult, RawOpts};

#[derive(Parser)]
#[command(name = "xychain", version, about = "Correlations and quantum discord in the XY chain")]
struct Cli {
    /// Config file with key=value lines; command-line flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Anisotropy gamma in (0, 1]
    #[arg(long, global = true)]
    gamma: Option<String>,

    /// Transverse field (single value or comma list)
    #[arg(long, global = true)]
    h: Option<String>,

    /// Field grid start:stop:count[:log]
    #[arg(long = "h-range", global = true)]
    h_range: Option<String>,

    /// Temperature (single value or comma list)
    #[arg(long, global = true)]
    temp: Option<String>,

    /// Temperature grid start:stop:count[:log]
    #[arg(long = "temp-range", global = true)]
    temp_range: Option<String>,

    /// Chain length: `bulk`, an even integer, or a comma list
    #[arg(long = "L", global = true)]
    length: Option<String>,

    /// Spin-pair distance(s), comma separated
    #[arg(long, global = true)]
    r: Option<String>,

    /// State convention: symmetric, broken, or thermal
    #[arg(long, global = true)]
    state: Option<String>,

    /// Symmetry-breaking longitudinal field: `adaptive` or a number
    #[arg(long, global = true)]
    hx: Option<String>,

    /// Force a backend by name (bulk-quadrature, finite-l, ed, ed-thermal)
    #[arg(long, global = true)]
    engine: Option<String>,

    /// Output CSV path (sidecar JSON goes next to it); stdout when absent
    #[arg(long, global = true)]
    out: Option<String>,

    /// Directory for cached results; warm reruns are byte-identical
    #[arg(long = "cache-dir", global = true)]
    cache_dir: Option<String>,

    /// Worker threads for sweeps (0 = all cores)
    #[arg(long, global = true)]
    workers: Option<String>,

    /// Tolerance recorded in the sidecar metadata
    #[arg(long, global = true)]
    tol: Option<String>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// One- and two-point spin correlators at a parameter point
    Correlators,
    /// Two-spin density matrix at a parameter point
    Rho,
    /// Mutual information, classical correlations, and discord at a point
    Discord,
    /// Evaluate the measures over the h x T x L grid
    Sweep,
    /// Ground-state fidelity F(h, h + dh) along the field axis
    Fidelity {
        /// Field offset of the second ground state
        #[arg(long, default_value_t = 1e-3)]
        dh: f64,
    },
    /// Scaling fits and collapses
    Scaling {
        #[command(subcommand)]
        which: ScalingCmd,
    },
    /// Discord displacement across distances versus temperature
    Displacement,
    /// Regenerate the data behind a reference figure
    Reproduce {
        /// fig1, fig2, fig3, fig4, fig5a, or fig5b
        figure: String,
        /// Directory for <figure>.csv and <figure>.json
        #[arg(long = "out-dir", default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum ScalingCmd {
    /// Finite-size collapse of -dQ/dh across chain-length slices
    Fss {
        /// Observable rescaling exponent
        #[arg(long, default_value_t = 0.472)]
        omega: f64,
        /// Correlation-length exponent
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
    },
    /// Exponential finite-size convergence near the factorizing field
    Factorization {
        /// Decay constant; fitted when absent
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Log-T fit of the critical-line slope plus off-critical collapse
    Thermal,
}

impl Cli {
    fn raw_opts(&self) -> RawOpts {
        RawOpts {
            gamma: self.gamma.clone(),
            h: self.h.clone(),
            h_range: self.h_range.clone(),
            temp: self.temp.clone(),
            temp_range: self.temp_range.clone(),
            length: self.length.clone(),
            r: self.r.clone(),
            state: self.state.clone(),
            hx: self.hx.clone(),
            engine: self.engine.clone(),
            out: self.out.clone(),
            cache_dir: self.cache_dir.clone(),
            workers: self.workers.clone(),
            tol: self.tol.clone(),
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    let config = match &cli.config {
        Some(path) => spec::read_config(path)?,
        None => BTreeMap::new(),
    };

    if let Cmd::Reproduce { figure, out_dir } = &cli.cmd {
        let cache_dir = cli
            .cache_dir
            .clone()
            .or_else(|| config.get("cache-dir").cloned())
            .map(PathBuf::from);
        return run::reproduce_cmd(figure, out_dir, cache_dir.as_deref());
    }

    let res = cli.raw_opts().resolve(&config)?;
    match &cli.cmd {
        Cmd::Correlators => run::correlators_cmd(&res, &res.canonical("correlators", &[])),
        Cmd::Rho => run::rho_cmd(&res, &res.canonical("rho", &[])),
        Cmd::Discord => run::discord_cmd(&res, &res.canonical("discord", &[])),
        Cmd::Sweep => run::sweep_cmd(&res, &res.canonical("sweep", &[])),
        Cmd::Fidelity { dh } => {
            let canonical = res.canonical("fidelity", &[("dh", format!("{dh:.17e}"))]);
            run::fidelity_cmd(&res, *dh, &canonical)
        }
        Cmd::Scaling { which } => match which {
            ScalingCmd::Fss { omega, nu } => {
                let canonical = res.canonical(
                    "scaling-fss",
                    &[("omega", format!("{omega:.17e}")), ("nu", format!("{nu:.17e}"))],
                );
                run::scaling_fss_cmd(&res, *omega, *nu, &canonical)
            }
            ScalingCmd::Factorization { alpha } => {
                let text = alpha.map_or("auto".to_string(), |a| format!("{a:.17e}"));
                let canonical = res.canonical("scaling-factorization", &[("alpha", text)]);
                run::scaling_factorization_cmd(&res, *alpha, &canonical)
            }
            ScalingCmd::Thermal => {
                run::scaling_thermal_cmd(&res, &res.canonical("scaling-thermal", &[]))
            }
        },
        Cmd::Displacement => run::displacement_cmd(&res, &res.canonical("displacement", &[])),
        Cmd::Reproduce { .. } => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match e {
                CliError::Validation(_) => "invalid request",
                CliError::Numerical(_) => "numerical failure",
            };
            eprintln!("xychain: {kind}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
