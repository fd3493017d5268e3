use std::path::PathBuf;

use chgeom::{InvariantModel, Preset};
use clap::{Parser, ValueEnum};

use crate::error::{CliError, CliResult};

/// Environment variable overriding the default tolerance.
pub const TOL_ENV: &str = "CHGEOM_TOL";
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_ETA_GRID: &str = "-0.2,-0.1,-0.05,0,0.05,0.1,0.2";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Classify,
    Dirichlet,
    Bend,
    Orbit,
    Limitset,
    Packing,
    Profile,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Dirichlet => "dirichlet",
            Command::Bend => "bend",
            Command::Orbit => "orbit",
            Command::Limitset => "limitset",
            Command::Packing => "packing",
            Command::Profile => "profile",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Experiments in complex hyperbolic space and on the Heisenberg group.
#[derive(Debug, Clone, Parser)]
#[command(name = "chgeom", version)]
pub struct Cli {
    #[arg(long, value_enum)]
    pub command: Command,
    /// Named configuration: cyclic-vertical, cyclic-horizontal, dilation,
    /// z2-lattice, schottky, fuchsian, two-sphere, bend.
    #[arg(long, value_parser = parse_preset)]
    pub preset: Option<Preset>,
    /// Generator file (JSON array of row-major matrices of [re, im] pairs),
    /// a single matrix for classify, or a sphere list for packing.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Complex dimension; checked against the generators.
    #[arg(long)]
    pub n: Option<usize>,
    /// Enumeration radius (word length) of the Dirichlet census.
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub rays: Option<usize>,
    /// Word length: orbit ball, limit-set depth, profile length, bend samples.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Comma-separated bend angles.
    #[arg(long, allow_hyphen_values = true)]
    pub eta_grid: Option<String>,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance for identity-word probes.
    #[arg(long, env = TOL_ENV)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Invariant model for a slice census (dirichlet).
    #[arg(long, value_parser = parse_model)]
    pub model: Option<InvariantModel>,
    /// Height of the slice census.
    #[arg(long)]
    pub u0: Option<f64>,
    /// Cygan radius of the window used for box counting (limitset).
    #[arg(long)]
    pub window: Option<f64>,
    /// Boundary samples per ball for the ping-pong certificate.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Longest word in the identity probe (bend).
    #[arg(long)]
    pub probe_len: Option<usize>,
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: chgeom::GeomError| e.to_string())
}

fn parse_model(s: &str) -> Result<InvariantModel, String> {
    s.parse().map_err(|e: chgeom::GeomError| e.to_string())
}

/// Where the group comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Preset(Preset),
    File(PathBuf),
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub source: Option<Source>,
    pub n: Option<usize>,
    pub radius: usize,
    pub rays: usize,
    pub depth: Option<usize>,
    pub etas: Vec<f64>,
    pub zeta: f64,
    pub seed: u64,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub model: Option<InvariantModel>,
    pub u0: f64,
    pub window: f64,
    pub samples: usize,
    pub probe_len: usize,
}

fn spec(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}

fn positive(name: &str, x: f64) -> CliResult<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(spec(format!("--{name} must be positive, got {x}")))
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> CliResult<Self> {
        let source = match (&cli.preset, &cli.input) {
            (Some(_), Some(_)) => return Err(CliError::Input("give either --preset or --input, not both".into())),
            (Some(p), None) => Some(Source::Preset(*p)),
            (None, Some(f)) => Some(Source::File(f.clone())),
            (None, None) => None,
        };
        let command = cli.command;
        match command {
            Command::Bend => {
                if !matches!(source, None | Some(Source::Preset(Preset::Bend))) {
                    return Err(spec("bend runs on the shipped bend preset only"));
                }
            }
            _ if source.is_none() => return Err(CliError::Input(format!("{} needs --preset or --input", command.name()))),
            _ => {}
        }
        if cli.format == Format::Svg && !matches!(command, Command::Bend | Command::Limitset) {
            return Err(spec(format!("svg output is available for bend and limitset, not {}", command.name())));
        }
        if let (Some(Source::Preset(_)), Some(n)) = (&source, cli.n) {
            if n != 2 {
                return Err(spec(format!("presets live in complex dimension 2, --n {n} requested")));
            }
        }
        if cli.n == Some(0) || cli.n == Some(1) {
            return Err(spec("--n must be at least 2"));
        }

        let rays = cli.rays.unwrap_or(chgeom::dirichlet::DEFAULT_RAYS);
        if rays < 100 {
            return Err(spec(format!("--rays must be at least 100, got {rays}")));
        }
        let radius = cli.radius.unwrap_or(6);
        if radius < 1 {
            return Err(spec("--radius must be at least 1"));
        }
        if cli.depth == Some(0) {
            return Err(spec("--depth must be at least 1"));
        }
        let zeta = cli.zeta.unwrap_or(std::f64::consts::FRAC_PI_4);
        if !(zeta > 0.0 && zeta < std::f64::consts::FRAC_PI_2) {
            return Err(spec(format!("--zeta must lie in (0, pi/2), got {zeta}")));
        }
        let etas = if command == Command::Bend {
            let grid = cli.eta_grid.as_deref().unwrap_or(DEFAULT_ETA_GRID);
            let etas = parse_grid(grid)?;
            if etas.is_empty() {
                return Err(spec("empty eta grid"));
            }
            let bound = std::f64::consts::PI - 2.0 * zeta;
            if let Some(bad) = etas.iter().find(|e| e.abs() >= bound) {
                return Err(spec(format!("eta {bad} outside |eta| < pi - 2 zeta = {bound}")));
            }
            etas
        } else {
            Vec::new()
        };
        let tol = positive("tol", cli.tol.unwrap_or(DEFAULT_TOL))?;
        let u0 = positive("u0", cli.u0.unwrap_or(1.0))?;
        let window = positive("window", cli.window.unwrap_or(1.0))?;
        let samples = cli.samples.unwrap_or(1000);
        if samples == 0 {
            return Err(spec("--samples must be positive"));
        }
        Ok(RunConfig {
            command,
            source,
            n: cli.n,
            radius,
            rays,
            depth: cli.depth,
            etas,
            zeta,
            seed: cli.seed,
            tol,
            out: cli.out.clone(),
            format: cli.format,
            model: cli.model,
            u0,
            window,
            samples,
            probe_len: cli.probe_len.unwrap_or(8),
        })
    }
}

/// Comma-separated reals; an empty or blank string is an empty grid.
pub fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Input(format!("bad eta value {t:?}")))
        })
        .collect()
}
