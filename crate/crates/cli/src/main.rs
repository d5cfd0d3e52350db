use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sparseloc::{baseline_localize, localize, FusionConfig, FusionError, PreimageParams};
use sparseloc_cli::config::ExperimentConfig;
use sparseloc_cli::experiment::{run_experiment, run_trial, ExperimentError, Method};
use sparseloc_cli::scene_io::{self, SceneIoError};
use sparseloc_cli::svg::render_svg;

#[derive(Parser)]
#[command(name = "sparseloc", version, about = "Pose estimation from a few range measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Localize from a measurement file.
    Localize(LocalizeArgs),
    /// Run one simulated trial and report both fusions.
    Simulate(SimulateArgs),
    /// Run a batch of trials and write CSV reports.
    Experiment(ExperimentArgs),
    /// Draw a scene as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct LocalizeArgs {
    /// Built-in scene name or scene JSON file.
    #[arg(long)]
    scene: String,
    /// Rows of `tx,ty,rot,d`.
    #[arg(long)]
    measurements: PathBuf,
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 6)]
    k_prime: usize,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta_pos: Option<f64>,
    #[arg(long)]
    delta_theta: Option<f64>,
    /// Require agreement with every measurement.
    #[arg(long)]
    baseline: bool,
    /// Seed for the `random` scene.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value = "random")]
    scene: String,
    #[arg(long, default_value_t = 10)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 6)]
    k_prime: usize,
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the trial as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the scene, obstacles included, as JSON.
    #[arg(long)]
    scene_out: Option<PathBuf>,
    /// Write the measurements as `tx,ty,rot,d` rows.
    #[arg(long)]
    measurements_out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML configuration; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scene: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k_prime: Option<usize>,
    /// Resolutions, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    record_timings: bool,
    /// Directory for `trials.csv` and `aggregate.csv`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    scene: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Validation(String),
    Runtime(String),
}

impl Failure {
    fn validation(e: impl Display) -> Self {
        Self::Validation(e.to_string())
    }

    fn runtime(e: impl Display) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<SceneIoError> for Failure {
    fn from(e: SceneIoError) -> Self {
        match e {
            SceneIoError::Io { .. } => Self::runtime(e),
            _ => Self::validation(e),
        }
    }
}

impl From<FusionError> for Failure {
    fn from(e: FusionError) -> Self {
        Self::validation(e)
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Config(_) => Self::validation(e),
            ExperimentError::Scene(s) => s.into(),
            _ => Self::runtime(e),
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))
}

fn cmd_localize(a: LocalizeArgs) -> Result<(), Failure> {
    let scene = scene_io::resolve_scene(&a.scene, a.seed)?;
    let ms = scene_io::load_measurements(&a.measurements)?;
    let prep = PreimageParams::default();
    let w = &scene.workspace;
    let result = if a.baseline {
        baseline_localize(w, &ms, a.n, &prep)?
    } else {
        let cfg = FusionConfig {
            epsilon: a.epsilon,
            delta_pos: a.delta_pos,
            delta_theta: a.delta_theta,
            ..FusionConfig::new(a.k_prime)
        };
        localize(w, &ms, a.n, &cfg, &prep)?
    };
    println!("rank,x,y,theta,agreement,component_size");
    for (i, c) in result.candidates.iter().enumerate() {
        println!(
            "{},{},{},{},{},{}",
            i + 1,
            c.pose.position.x,
            c.pose.position.y,
            c.pose.theta,
            c.agreement_count,
            c.component_size
        );
    }
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> Result<(), Failure> {
    let cfg = ExperimentConfig {
        scene: a.scene.clone(),
        m: a.m,
        k: a.k,
        k_prime: a.k_prime,
        n_values: vec![a.n],
        trials: 1,
        seed: a.seed,
        ..Default::default()
    };
    let scene_file = !sparseloc_cli::scenes::BUILTIN_NAMES.contains(&a.scene.as_str());
    let cfg = ExperimentConfig {
        scene_file: scene_file.then(|| PathBuf::from(&a.scene)),
        ..cfg
    };
    cfg.validate().map_err(Failure::validation)?;
    if let Some(p) = &cfg.scene_file {
        scene_io::load_scene(p)?;
    }
    let o = run_trial(&cfg, 0, a.n).map_err(|s| Failure::runtime(s.reason))?;
    let q = o.setup.ground_truth;
    println!(
        "truth x={} y={} theta={} sparsity={}/{}",
        q.position.x,
        q.position.y,
        q.theta,
        o.setup.sparsity,
        o.setup.measurements.len()
    );
    for method in [Method::Robust, Method::Baseline] {
        let r = o.record(method, &cfg);
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
        println!(
            "{:?}: k'={} candidates={} success={} pos_error={} theta_error={}",
            method,
            r.k_prime,
            r.candidates,
            r.success,
            fmt(r.pos_error),
            fmt(r.theta_error)
        );
    }
    if let Some(p) = &a.svg {
        write_file(p, &render_svg(&o.setup.scene, Some(&o.setup), &o.robust.candidates))?;
    }
    if let Some(p) = &a.scene_out {
        scene_io::save_scene(&o.setup.scene, p)?;
    }
    if let Some(p) = &a.measurements_out {
        let mut text = String::from("# tx,ty,rot,d\n");
        for m in &o.setup.measurements {
            text.push_str(&format!(
                "{},{},{},{}\n",
                m.g.translation.x, m.g.translation.y, m.g.rotation, m.d
            ));
        }
        write_file(p, &text)?;
    }
    Ok(())
}

fn cmd_experiment(a: ExperimentArgs) -> Result<(), Failure> {
    let mut cfg = match &a.config {
        Some(p) => ExperimentConfig::load(p).map_err(Failure::validation)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = a.scene {
        if sparseloc_cli::scenes::BUILTIN_NAMES.contains(&s.as_str()) {
            cfg.scene = s;
            cfg.scene_file = None;
        } else {
            cfg.scene_file = Some(s.into());
        }
    }
    cfg.m = a.m.unwrap_or(cfg.m);
    cfg.k_prime = a.k_prime.unwrap_or(cfg.k_prime);
    cfg.n_values = a.n.unwrap_or(cfg.n_values);
    cfg.trials = a.trials.unwrap_or(cfg.trials);
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    cfg.workers = a.workers.or(cfg.workers);
    cfg.record_timings |= a.record_timings;
    let report = run_experiment(&cfg)?;
    report.write_to_dir(&a.out)?;
    for s in &report.skipped {
        eprintln!("skipped trial {} (n={}, seed={}): {}", s.trial, s.n, s.seed, s.reason);
    }
    for r in report.aggregates() {
        println!(
            "{:?} n={} m={}: success {:.1}% over {} trials",
            r.method, r.n, r.m, r.success_rate, r.trials
        );
    }
    Ok(())
}

fn cmd_render(a: RenderArgs) -> Result<(), Failure> {
    let scene = scene_io::resolve_scene(&a.scene, a.seed)?;
    write_file(&a.out, &render_svg(&scene, None, &[]))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Localize(a) => cmd_localize(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Render(a) => cmd_render(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
