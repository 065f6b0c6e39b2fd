use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use femtoconn::connectivity::{
    connectivity_probability, disconnectivity_bound, isolation_probability, ConnectivityScenario,
};
use femtoconn::geometry;
use femtoconn::simulate::{Attachment, Interferers, RngSeed};
use femtoconn::sweep::{
    emit_csv, emit_plot, load_spec, run_sweep, RunOptions, SpecError, SweepError, EXIT_FAILURE,
    EXIT_OK, EXIT_SPEC,
};
use femtoconn::tier_model::{self, OutageQuery, SirSample, TierParams};
use femtoconn::validation::{run_validation, ValidationConfig};
use femtoconn::ModelError;

/// Femtocell/macrocell connectivity model: figure sweeps, point evaluation
/// and Monte Carlo validation.
///
/// Lengths are in femtocell radii and densities are per unit area.
#[derive(Parser, Debug)]
#[command(name = "femtoconn", version, about)]
struct Cli {
    /// Seed for every random stream
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Output path prefix (extension is appended)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Which files a sweep writes
    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    format: Format,

    /// Trials per Monte Carlo estimate in `validate`
    #[arg(long, global = true, default_value_t = 1_000_000)]
    trials: u64,

    /// Parameter override, key=value, key=a,b,c or key=start:stop:step
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Worker threads (defaults to all cores); results do not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Plot,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AttachArg {
    Uniform,
    Nearest,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a figure recipe (fig5..fig10) or a sweep spec file
    Sweep {
        recipe: String,
        /// Record the wall-clock time in the CSV metadata
        #[arg(long)]
        stamp: bool,
    },
    /// Check every Monte Carlo oracle against its closed form
    Validate {
        /// Realizations for the serving-ratio oracle
        #[arg(long, default_value_t = 1_000)]
        ppp_reps: usize,
        /// Realizations for the outage oracle
        #[arg(long, default_value_t = 1_000)]
        outage_reps: usize,
        /// Side of the square torus window
        #[arg(long, default_value_t = 20.0)]
        window: f64,
        /// How users pick among in-range FAPs
        #[arg(long, value_enum, default_value_t = AttachArg::Uniform)]
        attachment: AttachArg,
        /// Count every user, not only served ones, as an interferer
        #[arg(long)]
        all_users_interfere: bool,
    },
    /// Communication range from the power budget
    Range {
        #[arg(long)]
        p_t: f64,
        #[arg(long)]
        p_min: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Evaluate one metric at parameters given with --set
    Point { metric: Metric },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    CenterDistance,
    ChordAbscissa,
    LensArea,
    Isolation,
    Disconnectivity,
    Connectivity,
    Range,
    ServingRatio,
    ActiveDensity,
    Sir,
    Outage,
    SirThreshold,
    SpectralEfficiency,
}

#[derive(Debug)]
enum CliError {
    Sweep(SweepError),
    Model(ModelError),
    Usage(String),
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        CliError::Sweep(e)
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Sweep(e.into())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Model(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Sweep(e) => e.exit_code(),
            CliError::Model(ModelError::NoSolution { .. }) => EXIT_FAILURE,
            CliError::Model(_) | CliError::Usage(_) => EXIT_SPEC,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Sweep(e) => e.to_string(),
            CliError::Model(e) => e.to_string(),
            CliError::Usage(m) => m.clone(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_SPEC as u8);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Sweep { recipe, stamp } => sweep(cli, recipe, *stamp),
        Command::Validate {
            ppp_reps,
            outage_reps,
            window,
            attachment,
            all_users_interfere,
        } => {
            let cfg = ValidationConfig {
                seed: RngSeed(cli.seed),
                trials: cli.trials,
                ppp_realizations: *ppp_reps,
                outage_realizations: *outage_reps,
                window: *window,
                attachment: match attachment {
                    AttachArg::Uniform => Attachment::UniformInRange,
                    AttachArg::Nearest => Attachment::Nearest,
                },
                interferers: if *all_users_interfere {
                    Interferers::AllUsers
                } else {
                    Interferers::ServedUsers
                },
            };
            validate(cli, &cfg)
        }
        Command::Range { p_t, p_min, alpha } => {
            let p = TierParams::new(1.0, 1.0, *p_t, *p_min, *alpha)?;
            println!("r={:?}", tier_model::communication_range(&p));
            Ok(EXIT_OK)
        }
        Command::Point { metric } => point(cli, *metric),
    }
}

fn sweep(cli: &Cli, recipe: &str, stamp: bool) -> Result<i32, CliError> {
    let mut spec = load_spec(recipe)?;
    for s in &cli.set {
        spec.apply_override(s)?;
    }
    spec.validate()?;
    let opts = RunOptions {
        seed: RngSeed(cli.seed),
        timestamp: stamp.then(unix_time),
    };
    let res = run_sweep(&spec, &opts)?;
    let prefix = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&spec.output));
    if cli.format != Format::Plot {
        let path = emit_csv(&res, &prefix)?;
        println!("wrote {}", path.display());
    }
    if cli.format != Format::Csv {
        let path = emit_plot(&res, spec.target.primary_metric(), spec.plot, &prefix)?;
        println!("wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

fn unix_time() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{secs}")
}

fn validate(cli: &Cli, cfg: &ValidationConfig) -> Result<i32, CliError> {
    let report = run_validation(cfg)?;
    let prefix = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("validation"));
    let text = report.to_text();
    let write = |ext: &str, body: &str| -> Result<(), CliError> {
        let mut p = prefix.as_os_str().to_owned();
        p.push(ext);
        let path = PathBuf::from(p);
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|source| SweepError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
        }
        std::fs::write(&path, body).map_err(|source| SweepError::Io { path, source })?;
        Ok(())
    };
    write(".report.txt", &text)?;
    write(".csv", &report.to_csv())?;
    print!("{text}");
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

struct Settings(BTreeMap<String, String>);

impl Settings {
    fn parse(raw: &[String]) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for s in raw {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got '{s}'")))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Settings(map))
    }

    fn opt(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.0
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("--set {key}: '{v}' is not a number")))
            })
            .transpose()
    }

    fn get(&self, key: &str) -> Result<f64, CliError> {
        self.opt(key)?
            .ok_or_else(|| CliError::Usage(format!("missing --set {key}=<value>")))
    }

    fn list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let raw = self
            .0
            .get(key)
            .ok_or_else(|| CliError::Usage(format!("missing --set {key}=<v1,v2,...>")))?;
        raw.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("--set {key}: '{s}' is not a number")))
            })
            .collect()
    }

    fn n_f(&self) -> Result<u32, CliError> {
        let v = self.get("n_f")?;
        if v.fract() != 0.0 || !(1.0..=u32::MAX as f64).contains(&v) {
            return Err(CliError::Usage("n_f must be a positive integer".into()));
        }
        Ok(v as u32)
    }

    fn tier(&self) -> Result<TierParams, CliError> {
        Ok(TierParams::new(
            self.get("d_f")?,
            self.get("d_u")?,
            self.get("p_t")?,
            self.get("p_min")?,
            self.get("alpha")?,
        )?)
    }

    fn range(&self, p: &TierParams) -> Result<f64, CliError> {
        Ok(self
            .opt("r")?
            .unwrap_or_else(|| tier_model::communication_range(p)))
    }
}

fn point(cli: &Cli, metric: Metric) -> Result<i32, CliError> {
    let s = Settings::parse(&cli.set)?;
    let scenario = || -> Result<ConnectivityScenario, CliError> {
        Ok(ConnectivityScenario::from_parts(
            s.get("r")?,
            s.get("beta")?,
            s.n_f()?,
        )?)
    };
    let (name, value) = match metric {
        Metric::CenterDistance => ("d", geometry::center_distance(s.get("r")?, s.get("beta")?)?),
        Metric::ChordAbscissa => ("x0", geometry::chord_abscissa(s.get("r")?, s.get("d")?)?),
        Metric::LensArea => (
            "lens_area",
            geometry::lens_area(s.get("r")?, s.get("beta")?)?,
        ),
        Metric::Isolation => ("isolation", isolation_probability(&scenario()?)),
        Metric::Disconnectivity => ("p_d_bound", disconnectivity_bound(&scenario()?)),
        Metric::Connectivity => ("p_c", connectivity_probability(&scenario()?)),
        Metric::Range => {
            let p = TierParams::new(1.0, 1.0, s.get("p_t")?, s.get("p_min")?, s.get("alpha")?)?;
            ("r", tier_model::communication_range(&p))
        }
        Metric::ServingRatio => {
            let p = s.tier()?;
            ("p_c", tier_model::connectivity_ratio(&p, s.range(&p)?)?)
        }
        Metric::ActiveDensity => {
            let p = s.tier()?;
            (
                "d_f_active",
                tier_model::active_fap_density(&p, s.range(&p)?)?,
            )
        }
        Metric::Sir => {
            let p = TierParams::new(1.0, 1.0, s.opt("p_t")?.unwrap_or(1.0), 1.0, s.get("alpha")?)?;
            let sample = SirSample {
                r0: s.get("r0")?,
                interferer_distances: if s.0.contains_key("interferers") {
                    s.list("interferers")?
                } else {
                    Vec::new()
                },
                noise_power: s.opt("noise")?.unwrap_or(0.0),
            };
            ("sir", tier_model::sir(&sample, &p)?)
        }
        Metric::Outage => {
            let p = s.tier()?;
            let r = s.range(&p)?;
            let gamma = match s.opt("gamma")? {
                Some(g) => g,
                None => tier_model::sir_threshold(s.get("eta")?)?,
            };
            let mut q = OutageQuery::with_gamma(p, gamma, r)?;
            if let Some(d) = s.opt("d_f_active")? {
                q = q.with_active_density(d)?;
            }
            ("p_outage", tier_model::outage_probability(&q))
        }
        Metric::SirThreshold => ("gamma", tier_model::sir_threshold(s.get("eta")?)?),
        Metric::SpectralEfficiency => {
            let p = s.tier()?;
            let r = s.range(&p)?;
            (
                "eta",
                tier_model::spectral_efficiency_for_outage(&p, r, s.get("target_outage")?)?,
            )
        }
    };
    println!("{name}={value:?}");
    Ok(EXIT_OK)
}
