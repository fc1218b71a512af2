use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyswitch_core::export::{dense_samples, phase_portrait_svg, timeseries_svg, write_jumps_csv, write_samples_csv};
use hyswitch_core::{describe, preset, simulate, sweep, CoreError, ScenarioConfig, SweepGrid};

#[derive(Parser)]
#[command(name = "hyswitch", version, about = "Simulate the TIMP-2 / MT1-MMP / MMP-2 switching network")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario file and write its artifacts.
    Run {
        /// Scenario TOML (the `.toml` extension may be omitted).
        config: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run a bundled figure preset (s1, s3, s5, s7).
    Reproduce {
        id: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run the parameter grid described by a scenario's `[sweep]` block.
    Sweep {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Output directory (default: the config's output.dir, else out/<name>).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Worker threads; the table does not depend on this.
        #[arg(short, long)]
        workers: Option<usize>,
    },
    /// Parse and validate a scenario without simulating.
    Validate { config: PathBuf },
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<f64>,
    #[arg(long)]
    j_max: Option<usize>,
}

#[derive(Args)]
struct RunOpts {
    #[command(flatten)]
    overrides: Overrides,
    /// Output directory (default: the config's output.dir, else out/<name>).
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Grid spacing of timeseries.csv.
    #[arg(long, allow_hyphen_values = true)]
    spacing: Option<f64>,
    /// Skip the SVG plots.
    #[arg(long)]
    no_plot: bool,
}

enum Failure {
    Config(String),
    Validation(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Validation(_) => 3,
            Failure::Runtime(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Validation(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parse(_) | CoreError::UnknownPreset(_) => Failure::Config(e.to_string()),
            CoreError::InvalidState(_)
            | CoreError::InvalidParams(_)
            | CoreError::UnknownParameter(_)
            | CoreError::InvalidConfig(_) => Failure::Validation(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
    move |e| Failure::Runtime(format!("{}: {e}", path.display()))
}

fn resolve(path: &Path) -> PathBuf {
    if !path.exists() && path.extension().is_none() {
        let with_ext = path.with_extension("toml");
        if with_ext.exists() {
            return with_ext;
        }
    }
    path.to_path_buf()
}

fn load(path: &Path) -> Result<ScenarioConfig, Failure> {
    let path = resolve(path);
    let text = fs::read_to_string(&path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    ScenarioConfig::from_toml(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn apply(cfg: &mut ScenarioConfig, o: &Overrides) {
    if let Some(seed) = o.seed {
        cfg.solver.seed = seed;
    }
    if let Some(t) = o.t_max {
        cfg.solver.t_max = t;
    }
    if let Some(j) = o.j_max {
        cfg.solver.j_max = j;
    }
}

fn checked(cfg: &ScenarioConfig) -> Result<(), Failure> {
    for w in cfg.validate()? {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn out_dir(cfg: &ScenarioConfig, flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| Path::new("out").join(&cfg.name))
}

fn write(path: PathBuf, contents: impl AsRef<[u8]>) -> Result<(), Failure> {
    fs::write(&path, contents).map_err(io_err(&path))
}

fn run(mut cfg: ScenarioConfig, opts: RunOpts) -> Result<(), Failure> {
    apply(&mut cfg, &opts.overrides);
    if let Some(s) = opts.spacing {
        cfg.output.sample_spacing = s;
    }
    if opts.no_plot {
        cfg.output.plot = false;
    }
    checked(&cfg)?;
    let dir = out_dir(&cfg, opts.out);

    let sim = simulate(&cfg.initial_state()?, &cfg.params, &cfg.solver)?;
    let summary = describe(&sim.verdict, &cfg.params);

    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let rows = dense_samples(&sim.arc, cfg.output.sample_spacing);
    let csv_err = |e: csv::Error| Failure::Runtime(e.to_string());
    let path = dir.join("timeseries.csv");
    write_samples_csv(&rows, fs::File::create(&path).map_err(io_err(&path))?).map_err(csv_err)?;
    let path = dir.join("jumps.csv");
    write_jumps_csv(sim.arc.jumps(), fs::File::create(&path).map_err(io_err(&path))?).map_err(csv_err)?;

    let verdict = serde_json::json!({
        "name": cfg.name,
        "summary": summary,
        "verdict": sim.verdict,
        "end": sim.arc.end_time(),
        "termination": format!("{:?}", sim.arc.termination),
    });
    write(dir.join("verdict.json"), serde_json::to_string_pretty(&verdict).unwrap() + "\n")?;
    write(dir.join("config.toml"), cfg.to_toml())?;
    if cfg.output.plot {
        write(dir.join("phase.svg"), phase_portrait_svg(&rows, &cfg.name))?;
        write(dir.join("timeseries.svg"), timeseries_svg(&rows, &cfg.name))?;
    }

    println!("{}: {summary}", cfg.name);
    println!("{} jumps, artifacts in {}", sim.arc.jump_count(), dir.display());
    Ok(())
}

fn sweep_table(grid: &SweepGrid) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = grid.axes.iter().map(|a| a.name.clone()).collect();
    header.extend(["kind", "summary"].map(String::from));
    w.write_record(&header)?;
    for cell in &grid.cells {
        let mut row: Vec<String> = cell.values.iter().map(f64::to_string).collect();
        row.push(cell.kind.map_or("error".to_string(), |k| k.to_string()));
        row.push(cell.summary());
        w.write_record(&row)?;
    }
    Ok(w.into_inner().expect("in-memory writer"))
}

fn run_sweep(mut cfg: ScenarioConfig, overrides: Overrides, out: Option<PathBuf>, workers: Option<usize>) -> Result<(), Failure> {
    apply(&mut cfg, &overrides);
    checked(&cfg)?;
    let spec = cfg
        .sweep
        .clone()
        .ok_or_else(|| Failure::Validation("config has no [sweep] block".into()))?;
    let workers = workers.unwrap_or(spec.workers);
    let grid = sweep(&cfg.params, &spec.axes, &cfg.initial_state()?, &cfg.solver, workers)?;
    let table = sweep_table(&grid).map_err(|e| Failure::Runtime(e.to_string()))?;

    let dir = out_dir(&cfg, out);
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    write(dir.join("sweep.csv"), &table)?;
    write(dir.join("config.toml"), cfg.to_toml())?;
    print!("{}", String::from_utf8_lossy(&table));
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run { config, opts } => run(load(&config)?, opts),
        Command::Reproduce { id, opts } => run(preset(&id)?, opts),
        Command::Sweep {
            config,
            overrides,
            out,
            workers,
        } => run_sweep(load(&config)?, overrides, out, workers),
        Command::Validate { config } => {
            let cfg = load(&config)?;
            checked(&cfg)?;
            println!("{}: ok", cfg.name);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
