use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use symharm::deform::{deform, verify_certificate, GridSpec};
use symharm::invariant::{library, report as model_report, CEModel, LIBRARY_NAMES};
use symharm::pipeline::{preset, run_full, thom_checks, PipelineConfig, Subtorus, PRESET_NAMES};
use symharm::selftest::{algebra_selftest, SelfTestSpec};
use symharm::{Error, PolyChain};

#[derive(Parser)]
#[command(
    name = "symharm",
    version,
    about = "Symplectic Harmonic forms and primitive currents on tori"
)]
struct Cli {
    /// JSON configuration for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for random offsets and test-form batteries.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory (or, for `deform`, a `.json` file) to write results to.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Random checks of the sl2 relations, commutators and ⋆.
    AlgebraSelftest {
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Cohomology and Lefschetz report of an invariant model.
    Model {
        /// Built-in model; `--config` reads a model file instead.
        #[arg(long)]
        name: Option<String>,
    },
    /// Deform a polyhedral chain onto a cubical grid.
    Deform {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        eps: f64,
        /// Wrap the grid on the unit lattice.
        #[arg(long)]
        periodic: bool,
    },
    /// Construct a primitive current and its Harmonic smoothing.
    Pipeline {
        /// Built-in configuration, used when `--config` is absent.
        #[arg(long)]
        preset: Option<String>,
        /// Print the configuration instead of running it.
        #[arg(long)]
        print_config: bool,
    },
    /// Classify the Thom class of a coordinate subtorus.
    Thom {
        #[arg(long, default_value = "torus4")]
        model: String,
        /// Spanning coframe axes, 1-based, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        axes: Vec<usize>,
    },
}

/// Exit status: input problems are usage errors, everything else a failure.
enum Failure {
    Usage(String),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Io(_) | Error::Json(_) => Failure::Usage(e.to_string()),
            _ => Failure::Assertion(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Assertion(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::AlgebraSelftest { samples } => selftest(cli, *samples),
        Command::Model { name } => model(cli, name.as_deref()),
        Command::Deform {
            chain,
            eps,
            periodic,
        } => deform_cmd(cli, chain, *eps, *periodic),
        Command::Pipeline {
            preset,
            print_config,
        } => pipeline(cli, preset.as_deref(), *print_config),
        Command::Thom { model, axes } => thom(cli, model, axes),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(
    cli: &Cli,
    value: &T,
    rows: Vec<Vec<String>>,
    header: &[&str],
) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, value).map_err(Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(header)?;
            for r in rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    serde_json::to_writer_pretty(File::create(path)?, value).map_err(Error::from)?;
    Ok(())
}

fn selftest(cli: &Cli, samples: usize) -> Outcome {
    let spec = SelfTestSpec {
        samples,
        seed: cli.seed.unwrap_or(0),
        ..SelfTestSpec::default()
    };
    let r = algebra_selftest(&spec)?;
    let rows = r
        .rows
        .iter()
        .map(|x| {
            vec![
                x.identity.clone(),
                x.n.to_string(),
                x.samples.to_string(),
                format!("{:e}", x.max_residual),
                x.passed.to_string(),
                format!("{:.3}", x.seconds),
            ]
        })
        .collect();
    emit(
        cli,
        &r,
        rows,
        &[
            "identity",
            "n",
            "samples",
            "max_residual",
            "passed",
            "seconds",
        ],
    )?;
    if let Some(dir) = &cli.out {
        write_json(&dir.join("selftest.json"), &r)?;
    }
    Ok(r.passed())
}

fn model(cli: &Cli, name: Option<&str>) -> Outcome {
    let m: CEModel = match (&cli.config, name) {
        (Some(path), _) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
            CEModel::from_json(name.unwrap_or(stem), open(path)?)?
        }
        (None, Some(name)) => library(name)
            .map_err(|e| Failure::Usage(format!("{e} (built-in: {LIBRARY_NAMES:?})")))?,
        (None, None) => return Err(Failure::Usage("model needs --name or --config".into())),
    };
    let r = model_report(&m)?;
    let rows = (0..r.betti.len())
        .map(|k| {
            let hl = if k <= r.n {
                r.hl_iso.get(k).map(|b| b.to_string()).unwrap_or_default()
            } else {
                String::new()
            };
            let ph = r.ph_dims.get(k).map(|d| d.to_string()).unwrap_or_default();
            vec![k.to_string(), r.betti[k].to_string(), hl, ph]
        })
        .collect();
    emit(cli, &r, rows, &["k", "betti", "hard_lefschetz", "ph"])?;
    if let Some(dir) = &cli.out {
        write_json(&dir.join("model.json"), &r)?;
    }
    Ok(r.betti == r.betti_exact)
}

fn deform_cmd(cli: &Cli, chain: &Path, eps: f64, periodic: bool) -> Outcome {
    let t = PolyChain::read_json(open(chain)?)?;
    let mut g = GridSpec::seeded(t.ambient(), eps, cli.seed.unwrap_or(0))
        .map_err(|e| Failure::Usage(e.to_string()))?;
    if periodic {
        g = g
            .with_period(vec![1.0; t.ambient()])
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let res = deform(&t, &g)?;
    let cert = verify_certificate(&t, &g, &res)?;
    let c = &res.certificate;
    let rows = vec![vec![
        res.p.len().to_string(),
        res.r.len().to_string(),
        res.s.len().to_string(),
        format!("{:e}", c.identity_residual),
        format!("{:e}", c.skeletal_defect),
        c.p_support.max_distance.to_string(),
        c.r_support.max_distance.to_string(),
        c.s_support.max_distance.to_string(),
        c.bound.to_string(),
        res.retries.to_string(),
    ]];
    emit(
        cli,
        &res,
        rows,
        &[
            "p_pieces",
            "r_pieces",
            "s_pieces",
            "identity_residual",
            "skeletal_defect",
            "p_distance",
            "r_distance",
            "s_distance",
            "bound",
            "retries",
        ],
    )?;
    if let Some(out) = &cli.out {
        let path = if out.extension().is_some_and(|e| e == "json") {
            out.clone()
        } else {
            out.join("deform.json")
        };
        write_json(&path, &res)?;
    }
    Ok(cert.passes() && c.passes())
}

fn pipeline(cli: &Cli, name: Option<&str>, print_config: bool) -> Outcome {
    let mut cfg: PipelineConfig = match (&cli.config, name) {
        (Some(path), _) => PipelineConfig::from_json(open(path)?)?,
        (None, Some(name)) => {
            preset(name).map_err(|e| Failure::Usage(format!("{e} (presets: {PRESET_NAMES:?})")))?
        }
        (None, None) => return Err(Failure::Usage("pipeline needs --config or --preset".into())),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if print_config {
        serde_json::to_writer_pretty(io::stdout().lock(), &cfg).map_err(Error::from)?;
        println!();
        return Ok(true);
    }
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let mut out = run_full(&cfg)?;
    if let Some(dir) = &cli.out {
        out.write_artifacts(dir)?;
        write_json(&dir.join("report.json"), &out.report)?;
    }
    let r = &out.report;
    let rows = r
        .steps
        .iter()
        .map(|s| {
            vec![
                s.name.clone(),
                s.route.clone(),
                format!("{:e}", s.residual),
                format!("{:e}", s.tol * s.scale),
                s.passed.to_string(),
            ]
        })
        .collect();
    emit(
        cli,
        r,
        rows,
        &["step", "route", "residual", "limit", "passed"],
    )?;
    match r.failure() {
        None => {
            eprintln!("{}: passed", r.name);
            Ok(true)
        }
        Some(f) => {
            eprintln!("{}: {f}", r.name);
            Ok(false)
        }
    }
}

fn thom(cli: &Cli, model: &str, axes: &[usize]) -> Outcome {
    let m =
        library(model).map_err(|e| Failure::Usage(format!("{e} (built-in: {LIBRARY_NAMES:?})")))?;
    let r = thom_checks(
        &m,
        &Subtorus {
            axes: axes.to_vec(),
        },
    )?;
    let opt = |b: Option<bool>| b.map(|v| v.to_string()).unwrap_or_default();
    let rows = vec![vec![
        r.model.clone(),
        format!("{:?}", r.axes),
        r.codimension.to_string(),
        r.isotropic.to_string(),
        r.symplectic.to_string(),
        opt(r.cup_vanishes),
        r.omega_tau_vanishes.to_string(),
        serde_json::to_value(r.branch)
            .map_err(Error::from)?
            .as_str()
            .unwrap_or_default()
            .to_string(),
    ]];
    emit(
        cli,
        &r,
        rows,
        &[
            "model",
            "axes",
            "codimension",
            "isotropic",
            "symplectic",
            "cup_vanishes",
            "omega_tau_vanishes",
            "branch",
        ],
    )?;
    if let Some(dir) = &cli.out {
        write_json(&dir.join("thom.json"), &r)?;
    }
    Ok(true)
}
