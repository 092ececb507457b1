//! Command-line front end: mission simulation, reentry-strategy comparison,
//! steering-authority curves, and config validation.
//!
//! Exit codes: 0 success, 2 config error, 3 simulation fault, 4 partial
//! comparison (some strategies failed to complete a cycle).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use awes_core::config::StrategyKind;
use awes_core::sim::{run_scenario, MissionOutcome, SimResult};
use awes_core::steering::{radius_sweep, singular_speed, yaw_radius, SteeringParams};
use awes_core::ScenarioConfig;

const EXIT_CONFIG: u8 = 2;
const EXIT_FAULT: u8 = 3;
const EXIT_PARTIAL: u8 = 4;

#[derive(Parser)]
#[command(name = "awes", version, about = "Pumping-cycle AWES simulation suite")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one full mission and write trajectory, phase log and metrics.
    Simulate(SimulateArgs),
    /// Run all three reentry strategies on identical conditions.
    CompareReentry(CompareArgs),
    /// Export the turning-radius curves of the steering analysis.
    Steering(SteeringArgs),
    /// Check every config invariant and print a per-rule report.
    ValidateConfig(ValidateArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Scenario config (TOML); defaults to the built-in scenario.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the mean wind speed along +x, m/s.
    #[arg(long)]
    wind: Option<f64>,
    /// Override the reentry strategy.
    #[arg(long, value_parser = parse_strategy)]
    strategy: Option<StrategyKind>,
    /// Override the physics step, s.
    #[arg(long)]
    dt_physics: Option<f64>,
    /// Override the mission duration limit, s.
    #[arg(long)]
    duration: Option<f64>,
    /// Override the number of pumping cycles.
    #[arg(long)]
    cycles: Option<usize>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SteeringArgs {
    /// Drone mass, kg.
    #[arg(long)]
    mass: Option<f64>,
    /// Per-wing lateral surface, m^2.
    #[arg(long)]
    surface: Option<f64>,
    /// Lateral lift coefficient.
    #[arg(long)]
    c_l: Option<f64>,
    /// Speed sweep start/end/step, m/s.
    #[arg(long, default_value_t = 5.0)]
    v_start: f64,
    #[arg(long, default_value_t = 80.0)]
    v_end: f64,
    #[arg(long, default_value_t = 0.5)]
    v_step: f64,
    /// Output CSV path ("-" for stdout).
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct ValidateArgs {
    /// Scenario config (TOML); defaults to the built-in scenario.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_strategy(s: &str) -> Result<StrategyKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "free-flight" | "freeflight" | "ff" => Ok(StrategyKind::FreeFlight),
        "rotation" | "rotation-around-gs" => Ok(StrategyKind::RotationAroundGs),
        "climb-and-descend" | "cad" => Ok(StrategyKind::ClimbAndDescend),
        _ => Err(format!(
            "unknown strategy {s:?}; expected free-flight, rotation or climb-and-descend"
        )),
    }
}

fn load_config(args: &ConfigArgs) -> Result<ScenarioConfig, String> {
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::load(&path.display().to_string())
            .map_err(|e| format!("config error: {e}"))?,
        None => ScenarioConfig::default(),
    };
    if let Some(w) = args.wind {
        cfg.wind.mean = [w, 0.0, 0.0];
    }
    if let Some(s) = args.strategy {
        cfg.supervisor.strategy = s;
    }
    if let Some(dt) = args.dt_physics {
        cfg.sim.dt_physics = dt;
    }
    if let Some(d) = args.duration {
        cfg.sim.duration = d;
    }
    if let Some(n) = args.cycles {
        cfg.supervisor.n_cycles = n;
    }
    cfg.validate().map_err(|e| format!("config error: {e}"))?;
    Ok(cfg)
}

fn ensure_dir(dir: &Path) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))
}

fn write(path: &Path, content: &str) -> Result<(), String> {
    std::fs::write(path, content).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn outcome_line(outcome: &MissionOutcome) -> String {
    match outcome {
        MissionOutcome::Completed { landed: true } => "completed (landed)".into(),
        MissionOutcome::Completed { landed: false } => "completed (holding hover)".into(),
        MissionOutcome::Timeout { phase } => format!("timeout in phase {phase}"),
        MissionOutcome::Fault { t, message } => format!("fault at t = {t:.2} s: {message}"),
    }
}

fn metrics_text(res: &SimResult) -> String {
    let mut s = String::new();
    s.push_str(&format!("outcome = {}\n", outcome_line(&res.outcome)));
    s.push_str(&format!("cycles = {}\n", res.cycles.len()));
    for (i, c) in res.cycles.iter().enumerate() {
        s.push_str(&format!(
            "cycle[{i}].traction_mean_power_w = {:.3}\n\
             cycle[{i}].reentry_mean_power_w = {:.3}\n\
             cycle[{i}].cycle_mean_power_w = {:.3}\n\
             cycle[{i}].efficiency = {:.4}\n\
             cycle[{i}].duration_s = {:.3}\n\
             cycle[{i}].energy_j = {:.1}\n",
            c.traction_mean_power,
            c.reentry_mean_power,
            c.cycle_mean_power,
            c.efficiency,
            c.duration,
            c.energy,
        ));
    }
    s
}

fn metrics_json(res: &SimResult) -> String {
    let cycles: Vec<serde_json::Value> = res
        .cycles
        .iter()
        .map(|c| {
            serde_json::json!({
                "traction_mean_power_w": c.traction_mean_power,
                "reentry_mean_power_w": c.reentry_mean_power,
                "cycle_mean_power_w": c.cycle_mean_power,
                "efficiency": c.efficiency,
                "duration_s": c.duration,
                "energy_j": c.energy,
            })
        })
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({
        "outcome": outcome_line(&res.outcome),
        "cycles": cycles,
    }))
    .expect("metrics serialize")
}

fn simulate(args: &SimulateArgs) -> Result<u8, String> {
    let cfg = load_config(&args.cfg)?;
    ensure_dir(&args.out)?;
    write(&args.out.join("config.toml"), &cfg.to_toml_string())?;
    let res = run_scenario(&cfg).map_err(|e| format!("simulation fault: {e}"))?;
    let traj = args.out.join("trajectory.csv");
    res.log
        .write_csv(&traj.display().to_string())
        .map_err(|e| e.to_string())?;
    let phases = args.out.join("phases.csv");
    res.log
        .write_phases_csv(&phases.display().to_string())
        .map_err(|e| e.to_string())?;
    write(&args.out.join("metrics.txt"), &metrics_text(&res))?;
    write(&args.out.join("metrics.json"), &metrics_json(&res))?;
    println!("{}", metrics_text(&res));
    Ok(match res.outcome {
        MissionOutcome::Fault { .. } => EXIT_FAULT,
        _ => 0,
    })
}

fn strategy_name(s: StrategyKind) -> &'static str {
    match s {
        StrategyKind::FreeFlight => "free-flight",
        StrategyKind::RotationAroundGs => "rotation-around-gs",
        StrategyKind::ClimbAndDescend => "climb-and-descend",
    }
}

fn compare(args: &CompareArgs) -> Result<u8, String> {
    let base = load_config(&args.cfg)?;
    ensure_dir(&args.out)?;
    write(&args.out.join("config.toml"), &base.to_toml_string())?;

    let strategies = [
        StrategyKind::FreeFlight,
        StrategyKind::RotationAroundGs,
        StrategyKind::ClimbAndDescend,
    ];
    let handles: Vec<_> = strategies
        .map(|s| {
            let mut cfg = base.clone();
            cfg.supervisor.strategy = s;
            std::thread::spawn(move || run_scenario(&cfg))
        })
        .into_iter()
        .collect();
    let results: Vec<_> = handles
        .into_iter()
        .map(|h| h.join().expect("strategy thread"))
        .collect();

    let mut table = String::from(
        "strategy,completed,cycles,traction_mean_power_w,reentry_mean_power_w,cycle_mean_power_w,efficiency\n",
    );
    let mut ranking: Vec<(&'static str, f64)> = Vec::new();
    let mut partial = false;
    for (s, res) in strategies.iter().zip(&results) {
        let name = strategy_name(*s);
        match res {
            Ok(r) if !r.cycles.is_empty()
                && !matches!(r.outcome, MissionOutcome::Fault { .. }) =>
            {
                let n = r.cycles.len() as f64;
                let avg = |f: fn(&awes_core::CycleMetrics) -> f64| {
                    r.cycles.iter().map(f).sum::<f64>() / n
                };
                let eff = avg(|c| c.efficiency);
                table.push_str(&format!(
                    "{name},yes,{},{:.3},{:.3},{:.3},{:.4}\n",
                    r.cycles.len(),
                    avg(|c| c.traction_mean_power),
                    avg(|c| c.reentry_mean_power),
                    avg(|c| c.cycle_mean_power),
                    eff,
                ));
                ranking.push((name, eff));
            }
            Ok(_) => {
                table.push_str(&format!("{name},no,0,,,,\n"));
                partial = true;
            }
            Err(e) => {
                table.push_str(&format!("{name},no,0,,,,\n"));
                eprintln!("{name}: {e}");
                partial = true;
            }
        }
    }
    ranking.sort_by(|a, b| b.1.total_cmp(&a.1));
    let ranking_line = ranking
        .iter()
        .map(|(n, e)| format!("{n} ({e:.3})"))
        .collect::<Vec<_>>()
        .join(" > ");
    write(&args.out.join("comparison.csv"), &table)?;
    write(&args.out.join("ranking.txt"), &format!("{ranking_line}\n"))?;
    print!("{table}");
    println!("ranking: {ranking_line}");
    Ok(if partial { EXIT_PARTIAL } else { 0 })
}

fn steering(args: &SteeringArgs) -> Result<u8, String> {
    let mut p = SteeringParams::default();
    if let Some(m) = args.mass {
        p.mass = m;
    }
    if let Some(s) = args.surface {
        p.s_right = s;
        p.s_left = s;
    }
    if let Some(c) = args.c_l {
        p.c_l_lateral = c;
    }
    p.check().map_err(|e| format!("config error: {e}"))?;

    let rows = radius_sweep(&p, args.v_start, args.v_end, args.v_step, &[1.0, 2.0, 4.0]);
    let mut csv = String::from(
        "surface_multiplier,v_mps,r_top_m,r_bottom_m,asymptote_m,feasible,valid\n",
    );
    for r in rows {
        csv.push_str(&format!(
            "{},{:.3},{:.4},{},{:.4},{},{}\n",
            r.surface_multiplier,
            r.v,
            r.r_top,
            r.r_bottom.map_or(String::new(), |v| format!("{v:.4}")),
            r.asymptote,
            r.feasible as u8,
            r.valid as u8,
        ));
    }
    eprintln!(
        "asymptote = {:.2} m, v_lim = {:.2} m/s",
        yaw_radius(&p),
        singular_speed(&p)
    );
    if args.out == "-" {
        print!("{csv}");
    } else {
        write(Path::new(&args.out), &csv)?;
    }
    Ok(0)
}

fn validate(args: &ValidateArgs) -> Result<u8, String> {
    let cfg = match &args.config {
        Some(path) => ScenarioConfig::load(&path.display().to_string())
            .map_err(|e| format!("config error: {e}"))?,
        None => ScenarioConfig::default(),
    };
    let report = cfg.validation_report();
    let mut failed = false;
    for c in &report {
        let status = if c.passed { "pass" } else { "FAIL" };
        println!("{status}  {}  {}", c.rule, c.detail);
        failed |= !c.passed;
    }
    Ok(if failed { EXIT_CONFIG } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::CompareReentry(a) => compare(a),
        Command::Steering(a) => steering(a),
        Command::ValidateConfig(a) => validate(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("{msg}");
            let code = if msg.starts_with("config error") {
                EXIT_CONFIG
            } else {
                EXIT_FAULT
            };
            ExitCode::from(code)
        }
    }
}
