//! `eckart-kg`: bound states of the relativistic Eckart-type well from the
//! command line. Reads a TOML config, writes comma-separated tables with
//! `#`-prefixed metadata lines, deterministic byte-for-byte across runs.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use eckart_kg::oracle::{self, OracleReport};
use eckart_kg::spectrum::{enumerate_levels, EnergyLevel};
use eckart_kg::wavefunction::{excited_state_r, half_line_pole_at_origin, ode_residual_sup};
use eckart_kg::{DomainMode, Error, GridSettings, RunConfig};

const EXIT_CONFIG: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;
const EXIT_MISSING_LEVEL: u8 = 4;
const EXIT_VERIFY_FAILED: u8 = 5;

#[derive(Parser)]
#[command(
    name = "eckart-kg",
    about = "Relativistic bound states of the hyperbolic Eckart-type well: \
             algebraic spectrum, wavefunctions, and matrix-oracle cross-checks",
    after_help = "Exit codes:\n  \
        0  success\n  \
        2  config error (unreadable, malformed, unknown key, bad sweep range)\n  \
        3  solver failed to converge\n  \
        4  requested level is not bound\n  \
        5  verification failure (analytic vs oracle mismatch)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the TOML config (sections [potential], [solver], [grid]).
    config: PathBuf,
    /// Override the domain mode from the config.
    #[arg(long, value_parser = parse_domain)]
    domain: Option<DomainMode>,
    /// Override the grid point count from the config.
    #[arg(long, value_name = "N_POINTS")]
    grid: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve and tabulate all bound levels.
    Spectrum(CommonArgs),
    /// Sample one normalized bound-state wavefunction.
    Wavefunction {
        #[command(flatten)]
        common: CommonArgs,
        /// Level index n (0 = ground state).
        #[arg(long)]
        level: u32,
    },
    /// Cross-validate the algebraic spectrum against the matrix oracle.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Relative tolerance for the per-level comparison.
        #[arg(long, default_value_t = 1e-6)]
        rtol: f64,
    },
    /// Re-solve the spectrum over a range of one parameter.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Which parameter to sweep: v1, v2, alpha, or mass.
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        /// Number of sample points (>= 1).
        #[arg(long)]
        steps: u32,
    },
}

fn parse_domain(s: &str) -> Result<DomainMode, String> {
    match s {
        "full" => Ok(DomainMode::FullLine),
        "half" => Ok(DomainMode::HalfLine),
        other => Err(format!("expected \"full\" or \"half\", got \"{other}\"")),
    }
}

/// 17 significant digits: round-trip exact for f64.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text_and_dest) => {
            let (text, output) = text_and_dest;
            match output {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(EXIT_CONFIG);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, message: message.into() }
    }
}

fn solver_failure(err: Error) -> Failure {
    let code = match err {
        Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
        _ => EXIT_CONFIG,
    };
    Failure { code, message: err.to_string() }
}

fn load(common: &CommonArgs) -> Result<RunConfig, Failure> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", common.config.display())))?;
    let mut config = RunConfig::parse(&text).map_err(|e| Failure::config(e.to_string()))?;
    if let Some(mode) = common.domain {
        config.grid = GridSettings { domain_mode: mode, ..config.grid };
    }
    if let Some(n) = common.grid {
        config.grid = GridSettings { n_points: n, ..config.grid };
    }
    config.build_grid().map_err(|e| Failure::config(e.to_string()))?;
    Ok(config)
}

fn config_header(out: &mut String, config: &RunConfig) {
    let p = config.potential;
    let _ = writeln!(
        out,
        "# spec: v1={} v2={} alpha={} mass={}",
        fmt17(p.v1),
        fmt17(p.v2),
        fmt17(p.alpha),
        fmt17(p.mass)
    );
    let mode = match config.grid.domain_mode {
        DomainMode::FullLine => "full",
        DomainMode::HalfLine => "half",
    };
    let _ = writeln!(
        out,
        "# grid: r_max_factor={} n_points={} domain_mode={}",
        fmt17(config.grid.r_max_factor),
        config.grid.n_points,
        mode
    );
}

fn run(cli: Cli) -> Result<(String, Option<PathBuf>), Failure> {
    match cli.command {
        Command::Spectrum(common) => {
            let config = load(&common)?;
            let out = cmd_spectrum(&config)?;
            Ok((out, common.output))
        }
        Command::Wavefunction { common, level } => {
            let config = load(&common)?;
            let out = cmd_wavefunction(&config, level)?;
            Ok((out, common.output))
        }
        Command::Verify { common, rtol } => {
            let config = load(&common)?;
            let out = cmd_verify(&config, rtol)?;
            Ok((out, common.output))
        }
        Command::Sweep { common, param, from, to, steps } => {
            let config = load(&common)?;
            let out = cmd_sweep(&config, &param, from, to, steps)?;
            Ok((out, common.output))
        }
    }
}

fn level_row(level: &EnergyLevel) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        level.n,
        fmt17(level.energy),
        fmt17(level.lambda),
        fmt17(level.delta),
        fmt17(level.p_param),
        fmt17(level.w_param),
        fmt17(level.residual),
        level.iterations
    )
}

fn cmd_spectrum(config: &RunConfig) -> Result<String, Failure> {
    let found = enumerate_levels(&config.potential, &config.solver).map_err(solver_failure)?;
    let mut out = String::new();
    config_header(&mut out, config);
    out.push_str("n,E_n,lambda_n,delta_n,p,w,residual,iterations\n");
    for level in &found.levels {
        out.push_str(&level_row(level));
        out.push('\n');
    }
    for note in &found.diagnostics {
        let _ = writeln!(out, "# note: {note}");
    }
    let _ = writeln!(out, "# {} bound states", found.levels.len());
    Ok(out)
}

fn cmd_wavefunction(config: &RunConfig, level_index: u32) -> Result<String, Failure> {
    let found = enumerate_levels(&config.potential, &config.solver).map_err(solver_failure)?;
    let level = found.levels.iter().find(|l| l.n == level_index).ok_or(Failure {
        code: EXIT_MISSING_LEVEL,
        message: format!(
            "level {level_index} is not bound for this spec ({} bound states)",
            found.levels.len()
        ),
    })?;
    let grid = config.build_grid().map_err(|e| Failure::config(e.to_string()))?;
    let f = excited_state_r(&config.potential, level, &grid)
        .map_err(|e| Failure { code: EXIT_MISSING_LEVEL, message: e.to_string() })?;
    let residual = ode_residual_sup(&config.potential, level, &f);

    let mut out = String::new();
    config_header(&mut out, config);
    let _ = writeln!(out, "# E_n = {}", fmt17(level.energy));
    let _ = writeln!(out, "# node_count = {}", f.node_count());
    let _ = writeln!(out, "# ode_residual_sup = {}", fmt17(residual));
    let _ = writeln!(out, "# norm_constant = {}", fmt17(f.norm_constant()));
    if config.grid.domain_mode == DomainMode::HalfLine {
        let _ = writeln!(
            out,
            "# pole_at_origin = {}",
            half_line_pole_at_origin(&config.potential, level)
        );
    }
    out.push_str("r,amplitude\n");
    for (i, v) in f.values().iter().enumerate() {
        let _ = writeln!(out, "{},{}", fmt17(f.grid().point(i)), fmt17(*v));
    }
    Ok(out)
}

fn cmd_verify(config: &RunConfig, rtol: f64) -> Result<String, Failure> {
    let spec = config.potential;
    let analytic = enumerate_levels(&spec, &config.solver).map_err(solver_failure)?;
    let grid = config.build_grid().map_err(|e| Failure::config(e.to_string()))?;
    let reference: Vec<OracleReport> =
        oracle::oracle_levels(&spec, &grid, &config.solver).map_err(solver_failure)?;

    let mut out = String::new();
    config_header(&mut out, config);
    let _ = writeln!(out, "# rtol = {}", fmt17(rtol));
    out.push_str("n,E_analytic,E_oracle,rel_diff,status\n");
    let mut all_pass = true;
    let count = analytic.levels.len().max(reference.len());
    for i in 0..count {
        match (analytic.levels.get(i), reference.get(i)) {
            (Some(a), Some(o)) => {
                let rel = (a.energy - o.energy).abs() / o.energy.abs();
                let pass = rel < rtol;
                all_pass &= pass;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    a.n,
                    fmt17(a.energy),
                    fmt17(o.energy),
                    fmt17(rel),
                    if pass { "pass" } else { "fail" }
                );
            }
            (Some(a), None) => {
                all_pass = false;
                let _ = writeln!(out, "{},{},,,fail", a.n, fmt17(a.energy));
            }
            (None, Some(o)) => {
                all_pass = false;
                let _ = writeln!(out, "{},,{},,fail", o.level_index, fmt17(o.energy));
            }
            (None, None) => unreachable!(),
        }
    }
    if count == 0 {
        let _ = writeln!(out, "# 0 levels, vacuously pass");
    }
    let _ = writeln!(out, "# verdict: {}", if all_pass { "pass" } else { "fail" });
    if all_pass {
        Ok(out)
    } else {
        // The table itself is the report; print it before failing.
        print!("{out}");
        Err(Failure { code: EXIT_VERIFY_FAILED, message: "verification failed".into() })
    }
}

fn cmd_sweep(
    config: &RunConfig,
    param: &str,
    from: f64,
    to: f64,
    steps: u32,
) -> Result<String, Failure> {
    if steps == 0 {
        return Err(Failure::config("sweep needs --steps >= 1"));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(Failure::config("sweep range must be finite"));
    }
    if !matches!(param, "v1" | "v2" | "alpha" | "mass") {
        return Err(Failure::config(format!(
            "unknown sweep parameter \"{param}\" (expected v1, v2, alpha, or mass)"
        )));
    }

    let values: Vec<f64> = if steps == 1 {
        vec![from]
    } else {
        (0..steps)
            .map(|i| from + (to - from) * f64::from(i) / f64::from(steps - 1))
            .collect()
    };

    // Solve sweep points in parallel, emit in input order.
    let results: Vec<Result<Vec<EnergyLevel>, Error>> = values
        .par_iter()
        .map(|&value| {
            let mut spec = config.potential;
            match param {
                "v1" => spec.v1 = value,
                "v2" => spec.v2 = value,
                "alpha" => spec.alpha = value,
                _ => spec.mass = value,
            }
            let spec = eckart_kg::PotentialSpec::new(spec.v1, spec.v2, spec.alpha, spec.mass)?;
            Ok(enumerate_levels(&spec, &config.solver)?.levels)
        })
        .collect();

    let mut out = String::new();
    config_header(&mut out, config);
    let _ = writeln!(out, "# sweep: {param} from {} to {} in {steps} steps", fmt17(from), fmt17(to));
    out.push_str("param_value,n,E_n\n");
    for (value, result) in values.iter().zip(results) {
        let levels = result.map_err(solver_failure)?;
        for level in levels {
            let _ = writeln!(out, "{},{},{}", fmt17(*value), level.n, fmt17(level.energy));
        }
    }
    Ok(out)
}
