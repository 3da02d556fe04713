//! The `duopoly` command line.
//!
//! Every command reads a model config, writes its report into `--out` and
//! exits with 0 on success, 1 on a failed verification, 2 on a config error
//! and 3 on a solver failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ModelConfig;
use crate::equilibrium::{
    build_profile, check_scenario, classify_demand, compute_b_sets, find_intervals, vacuum_report, EquilibriumProfile,
    ProfileReading,
};
use crate::error::Error;
use crate::game::{
    counterexample_level, deviation_tests, simulate_subgame, symmetric_counterexample, threshold_family, Firm,
};
use crate::numerics::geomspace;
use crate::payoffs::GameValues;
use crate::verify::{deviation_starts, run_all, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "duopoly", about = "Investment timing duopoly under GBM demand")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Model config (flat key = value lines).
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Overrides the config seed.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Overrides the number of simulated paths.
    #[arg(long, value_name = "N")]
    pub paths: Option<usize>,
    /// Overrides the simulation time step.
    #[arg(long, value_name = "X")]
    pub dt: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct GridArgs {
    /// Number of grid points.
    #[arg(long, value_name = "N", default_value_t = 400)]
    pub grid: usize,
    /// Lowest demand level.
    #[arg(long, value_name = "X", default_value_t = 0.05)]
    pub zlo: f64,
    /// Highest demand level.
    #[arg(long, value_name = "X", default_value_t = 40.0)]
    pub zhi: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots, thresholds, coefficients and pasting residuals.
    Solve(Common),
    /// Payoff curves on a geometric grid, as CSV.
    Curves {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Preemption intervals.
    Intervals(Common),
    /// Investment sets and the vacuum report.
    Bsets(Common),
    /// Values of the subgame starting at `z0` under the equilibrium profile.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "X")]
        z0: f64,
    },
    /// Deviation tests and the symmetric counterexample.
    Deviate(Common),
    /// All acceptance checks.
    Verify(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Solve(c)
            | Command::Intervals(c)
            | Command::Bsets(c)
            | Command::Deviate(c)
            | Command::Verify(c) => c,
            Command::Curves { common, .. } | Command::Simulate { common, .. } => common,
        }
    }
}

/// A failure together with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::InvalidParameter { .. } => 2,
            _ => 3,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        code: 3,
        message: format!("cannot write {}: {e}", path.display()),
    }
}

fn load(common: &Common) -> Result<ModelConfig, CliError> {
    let mut cfg = ModelConfig::load(&common.config)?;
    if let Some(s) = common.seed {
        cfg.sim.seed = s;
    }
    if let Some(n) = common.paths {
        cfg.sim.n_paths = n;
    }
    if let Some(dt) = common.dt {
        cfg.sim.dt = dt;
    }
    cfg.sim.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(cfg)
}

fn write(out: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(out).map_err(|e| io_error(out, e))?;
    let path = out.join(name);
    fs::write(&path, contents).map_err(|e| io_error(&path, e))?;
    Ok(path)
}

fn write_json(out: &Path, name: &str, value: &impl Serialize) -> Result<PathBuf, CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError {
        code: 3,
        message: e.to_string(),
    })?;
    write(out, name, &(text + "\n"))
}

fn solve_values(cfg: &ModelConfig) -> Result<GameValues, CliError> {
    Ok(GameValues::solve(&cfg.market, &cfg.econ)?)
}

fn profile(values: &GameValues) -> crate::Result<EquilibriumProfile> {
    let iv = find_intervals(values, None)?;
    let b = compute_b_sets(values, &iv, None)?;
    Ok(build_profile(&iv, &b))
}

fn cmd_solve(common: &Common) -> Result<Vec<PathBuf>, CliError> {
    let cfg = load(common)?;
    let v = solve_values(&cfg)?;
    let low = &v.follower.low;
    let scenario = check_scenario(&v).ok();
    let report = json!({
        "market": cfg.market,
        "econ": cfg.econ,
        "roots": v.roots,
        "coefficients": v.coeffs,
        "follower_low": {
            "regime": low.regime,
            "z1": low.z1, "z2": low.z2, "z3": low.z3,
            "a0": low.a0, "b0": low.b0, "c0": low.c0,
            "iterations": low.iterations,
            "pasting": low.junctions(),
        },
        "follower_high": {
            "z_h": v.follower.high.z_h,
            "pasting": v.follower.high.junction(),
        },
        "scenario": scenario,
    });
    Ok(vec![write_json(&common.out, "solve.json", &report)?])
}

fn cmd_curves(common: &Common, grid: &GridArgs) -> Result<Vec<PathBuf>, CliError> {
    if !(grid.zlo > 0.0 && grid.zhi > grid.zlo && grid.grid >= 2) {
        return Err(CliError {
            code: 2,
            message: format!(
                "need 0 < zlo < zhi and grid >= 2, got {} {} {}",
                grid.zlo, grid.zhi, grid.grid
            ),
        });
    }
    let cfg = load(common)?;
    let v = solve_values(&cfg)?;
    let prof = profile(&v);
    let mut csv = String::new();
    let _ = writeln!(
        csv,
        "# duopoly curves: alpha={} sigma={} r={} xi={}",
        cfg.market.alpha, cfg.market.sigma, cfg.market.r, cfg.econ.xi
    );
    match check_scenario(&v) {
        Ok(s) if s.holds() => {}
        Ok(s) => {
            let _ = writeln!(
                csv,
                "# scenario check failed: max(L-F) below z1 = {}, on (z2,z3) = {}",
                s.max_gap_below_z1, s.max_gap_inner
            );
        }
        Err(e) => {
            let _ = writeln!(csv, "# scenario check failed: {e}");
        }
    }
    if let Err(e) = &prof {
        let _ = writeln!(csv, "# no equilibrium profile: {e}");
    }
    csv.push_str("z,C,F,L,F_L,F_H,L_L,L_H,alpha_i,alpha_j,region_label\n");
    for z in geomspace(grid.zlo, grid.zhi, grid.grid) {
        let (l, f, c) = v.triple(z);
        let (ai, aj, label) = match &prof {
            Ok(p) => (
                p.eager.alpha(z, &v)?.to_string(),
                p.patient.alpha(z, &v)?.to_string(),
                classify_demand(z, p).label(),
            ),
            Err(_) => (String::new(), String::new(), ""),
        };
        let _ = writeln!(
            csv,
            "{z},{c},{f},{l},{},{},{},{},{ai},{aj},{label}",
            v.follower.low.value.value(z),
            v.follower.high.value.value(z),
            v.leader.low_value.value(z),
            v.leader.high_value.value(z),
        );
    }
    Ok(vec![write(&common.out, "curves.csv", &csv)?])
}

fn cmd_intervals(common: &Common) -> Result<Vec<PathBuf>, CliError> {
    let cfg = load(common)?;
    let v = solve_values(&cfg)?;
    let iv = find_intervals(&v, None)?;
    let report = json!({
        "preemption": [
            { "region": "A1", "intervals": [[iv.a1_lo, iv.a1_hi]] },
            { "region": "A2", "intervals": [[iv.a2_lo, iv.a2_hi]] },
        ],
        "thresholds": { "z_h": v.follower.high.z_h, "z1": v.follower.low.z1, "z2": v.follower.low.z2, "z3": v.follower.low.z3 },
        "lead_gap_at_endpoints": iv.endpoints().map(|z| v.lead_gap(z)),
    });
    Ok(vec![write_json(&common.out, "intervals.json", &report)?])
}

fn cmd_bsets(common: &Common) -> Result<Vec<PathBuf>, CliError> {
    let cfg = load(common)?;
    let v = solve_values(&cfg)?;
    let p = profile(&v)?;
    let vr = vacuum_report(&p);
    let b = &p.bsets;
    let report = json!({
        "sets": [
            { "region": "B1", "intervals": b.b1.intervals() },
            { "region": "B2", "intervals": b.b2.intervals() },
            { "region": "B3", "intervals": b.b3_full().intervals() },
        ],
        "z_max_bound": b.z_max_bound,
        "tail_threshold": b.tail_threshold,
        "vacuum": vr.vacuum,
        "vacuum_set": vr.vacuum_set.intervals(),
        "low_no_invest": vr.low_no_invest.intervals(),
        "a1": vr.a1,
        "a2": vr.a2,
    });
    Ok(vec![write_json(&common.out, "bsets.json", &report)?])
}

fn cmd_simulate(common: &Common, z0: f64) -> Result<Vec<PathBuf>, CliError> {
    let cfg = load(common)?;
    let v = solve_values(&cfg)?;
    let p = profile(&v)?;
    let (eager, patient) = p.strategies_from(z0, ProfileReading::RunningMax);
    let est = simulate_subgame(z0, &eager, &patient, &v, &cfg.sim)?;
    let report = json!({
        "z0": z0,
        "region": classify_demand(z0, &p).label(),
        "sim": cfg.sim,
        "v_i": est.v_i,
        "v_j": est.v_j,
        "resolved": est.resolved,
        "warning": est.warning,
    });
    Ok(vec![write_json(&common.out, "simulate.json", &report)?])
}

fn cmd_deviate(common: &Common) -> Result<(Vec<PathBuf>, bool), CliError> {
    let cfg = load(common)?;
    let v = solve_values(&cfg)?;
    let p = profile(&v)?;
    let z0s = deviation_starts(&p.intervals, &v);
    let family = threshold_family(p.intervals.a1_lo / 4.0, 2.0 * v.follower.low.z3);
    let dev = deviation_tests(
        &p,
        ProfileReading::RunningMax,
        &[Firm::Eager, Firm::Patient],
        &family,
        &z0s,
        &v,
        &cfg.sim,
    )?;
    let counter = match counterexample_level(&v, p.intervals.a2_hi, 1000.0 * p.intervals.a2_hi) {
        Some((z0, _)) => serde_json::to_value(symmetric_counterexample(z0, &p, &v, &cfg.sim)?).unwrap_or(Value::Null),
        None => json!({ "error": "no level with C above sup L found" }),
    };
    let passed = dev.passes && counter.get("passes").and_then(Value::as_bool).unwrap_or(false);
    let report = json!({ "sim": cfg.sim, "family": family, "deviations": dev, "symmetric_counterexample": counter });
    Ok((vec![write_json(&common.out, "deviate.json", &report)?], passed))
}

fn cmd_verify(common: &Common) -> Result<(Vec<PathBuf>, bool), CliError> {
    let cfg = load(common)?;
    let opts = VerifyOptions::from_config(&cfg);
    let report = run_all(&cfg, &opts, |r| println!("{}", r.line()));
    let path = write_json(&common.out, "verify.json", &report)?;
    Ok((vec![path], report.passed))
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let out = cli.command.common().out.clone();
    let result = match &cli.command {
        Command::Solve(c) => cmd_solve(c).map(|p| (p, true)),
        Command::Curves { common, grid } => cmd_curves(common, grid).map(|p| (p, true)),
        Command::Intervals(c) => cmd_intervals(c).map(|p| (p, true)),
        Command::Bsets(c) => cmd_bsets(c).map(|p| (p, true)),
        Command::Simulate { common, z0 } => cmd_simulate(common, *z0).map(|p| (p, true)),
        Command::Deviate(c) => cmd_deviate(c),
        Command::Verify(c) => cmd_verify(c),
    };
    match result {
        Ok((paths, ok)) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            if ok {
                0
            } else {
                eprintln!("verification failed");
                1
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            if e.code == 3 {
                let _ = write_json(&out, "error.json", &json!({ "error": e.message, "exit_code": e.code }));
            }
            e.code
        }
    }
}
