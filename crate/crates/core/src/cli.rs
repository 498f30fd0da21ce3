//! Command-line front end.

use std::fmt::Debug;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::certify::{
    is_cat0, is_clc, is_convex_checked, is_locally_convex_oracle, is_npc, Cat0Complex, CertifyError,
};
use crate::complex::{
    AmbientPoint, ComplexDescription, ComplexError, CubicalComplex, Subcomplex, SubcomplexDescription,
};
use crate::doubling::{double, double_flag_report, DoubleError};
use crate::generators::{generate, random_subcomplex, GenError, GeneratorSpec, GrowthMode, NamedExample};
use crate::links::{link, restrict_link, LinkError};
use crate::oracle::{GridGraph, OracleError};
use crate::suite::{self, SuiteConfig};
use crate::walls::{WallError, WallSystem};

#[derive(Parser, Debug)]
#[command(name = "cubecvx", version, about = "Curvature and convexity certificates for finite cubical complexes")]
pub struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// More log output (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ComplexArg {
    /// Complex file.
    #[arg(long)]
    pub complex: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// Complex file.
    #[arg(long)]
    pub complex: PathBuf,
    /// Subcomplex file.
    #[arg(long)]
    pub sub: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a complex file.
    Validate { file: PathBuf },
    /// Link of a vertex, optionally with the link of a subcomplex.
    Link {
        #[command(flatten)]
        input: ComplexArg,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        sub: Option<PathBuf>,
    },
    /// Gromov's link condition.
    CertifyNpc(ComplexArg),
    /// CAT(0) via the link condition and the median test.
    CertifyCat0(ComplexArg),
    /// Combinatorial local convexity of a subcomplex.
    CheckClc(PairArgs),
    /// Convexity of a subcomplex of a CAT(0) complex.
    CheckConvex(PairArgs),
    /// Sampled local convexity with the geodesic oracle.
    VerifyOracle {
        #[command(flatten)]
        input: PairArgs,
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0.125)]
        h: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Wall inventory with per-wall hyperplane checks.
    Walls(ComplexArg),
    /// Hyperplane and halfspaces of one wall with their certificates.
    Halfspaces {
        #[command(flatten)]
        input: ComplexArg,
        #[arg(long)]
        wall: usize,
    },
    /// Double along a subcomplex.
    Double {
        #[command(flatten)]
        input: PairArgs,
        /// Also write the doubled complex file here.
        #[arg(long)]
        complex_out: Option<PathBuf>,
    },
    /// Oracle geodesic between two points given as `cell:c1,c2,...`.
    Geodesic {
        #[command(flatten)]
        input: ComplexArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 0.125)]
        h: f64,
    },
    /// Generate a complex file.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 8)]
        cubes: usize,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        squares: usize,
        #[arg(long, value_enum, default_value_t = NamedArg::LShape)]
        name: NamedArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write a random connected subcomplex with about this fraction of the cubes.
        #[arg(long)]
        sub_fraction: Option<f64>,
        /// Where the subcomplex goes (required with `--sub-fraction`).
        #[arg(long)]
        sub_out: Option<PathBuf>,
    },
    /// The full acceptance battery.
    Suite {
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 0.125)]
        h: f64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum GenKind {
    GridRegion,
    Prism,
    CubeTree,
    Staircase,
    Annulus,
    Named,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum NamedArg {
    Point,
    Square,
    LShape,
    Cube,
    CubeBoundary,
}

impl From<NamedArg> for NamedExample {
    fn from(n: NamedArg) -> Self {
        match n {
            NamedArg::Point => NamedExample::Point,
            NamedArg::Square => NamedExample::Square,
            NamedArg::LShape => NamedExample::LShape,
            NamedArg::Cube => NamedExample::Cube,
            NamedArg::CubeBoundary => NamedExample::CubeBoundary,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Walls(#[from] WallError),
    #[error(transparent)]
    Double(#[from] DoubleError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Gen(#[from] GenError),
}

/// Name of the outermost variant in a `Debug` rendering.
fn variant<E: Debug>(e: &E) -> String {
    format!("{e:?}").chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect()
}

impl CliError {
    /// The innermost library error variant, e.g. `MissingFace`.
    pub fn kind(&self) -> String {
        match self {
            CliError::Complex(e) => variant(e),
            CliError::Certify(CertifyError::Complex(e)) => variant(e),
            CliError::Certify(e) => variant(e),
            CliError::Link(e) => variant(e),
            CliError::Walls(WallError::Complex(e)) => variant(e),
            CliError::Walls(WallError::Certify(e)) => variant(e),
            CliError::Walls(e) => variant(e),
            CliError::Double(DoubleError::Complex(e)) => variant(e),
            CliError::Double(DoubleError::Certify(e)) => variant(e),
            CliError::Double(e) => variant(e),
            CliError::Oracle(e) => variant(e),
            CliError::Gen(e) => variant(e),
            other => variant(other),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

/// Everything that determines a run; embedded in every output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<InputFile>,
    pub parameters: serde_json::Value,
    pub output: Option<String>,
    pub verbosity: u8,
    pub version: &'static str,
}

#[derive(Serialize)]
struct Output<'a, T: Serialize> {
    config: &'a RunConfig,
    result: T,
}

/// The outcome of a command: its JSON result and whether the claim holds.
pub struct Outcome {
    pub result: serde_json::Value,
    pub holds: bool,
    /// Written as is, without the run config: generated input files.
    pub raw: bool,
}

impl Outcome {
    fn new<T: Serialize>(result: T, holds: bool) -> Self {
        Outcome { result: serde_json::to_value(result).expect("serializable"), holds, raw: false }
    }
}

struct Inputs(Vec<InputFile>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        self.0.push(InputFile { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) });
        Ok(bytes)
    }

    fn json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Result<T, CliError> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes).map_err(|e| CliError::Parse { path: path.to_path_buf(), message: e.to_string() })
    }

    fn complex(&mut self, path: &Path) -> Result<CubicalComplex, CliError> {
        let desc: ComplexDescription = self.json(path)?;
        Ok(CubicalComplex::validate(&desc)?)
    }

    /// A subcomplex file; a list that is not face-closed, such as maximal
    /// cubes only, is closed with a warning.
    fn sub(&mut self, x: &CubicalComplex, complex_path: &Path, path: &Path) -> Result<Subcomplex, CliError> {
        let desc: SubcomplexDescription = self.json(path)?;
        let named = Path::new(&desc.parent).file_name();
        if !desc.parent.is_empty() && named != complex_path.file_name() {
            log::warn!("{} names parent {:?}, using {}", path.display(), desc.parent, complex_path.display());
        }
        if let Some(&c) = desc.cubes.iter().find(|&&c| c >= x.len()) {
            return Err(ComplexError::NoSuchCell(c).into());
        }
        match Subcomplex::new(x, desc.cubes.iter().copied()) {
            Err(ComplexError::NotFaceClosed { .. }) => {
                log::warn!("{}: not face-closed, taking the closure", path.display());
                Ok(Subcomplex::closure(x, desc.cubes)?)
            }
            other => Ok(other?),
        }
    }
}

/// Parses `cell:c1,c2,...` (no coordinates after the colon for a vertex cell).
pub fn parse_point(x: &CubicalComplex, s: &str) -> Result<AmbientPoint, CliError> {
    let bad = || CliError::Usage(format!("bad point {s:?}, expected cell:c1,c2,..."));
    let (cell, coords) = s.split_once(':').ok_or_else(bad)?;
    let cell: usize = cell.trim().parse().map_err(|_| bad())?;
    let coords: Vec<f64> = if coords.trim().is_empty() {
        Vec::new()
    } else {
        coords.split(',').map(|c| c.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if cell >= x.len() {
        return Err(ComplexError::NoSuchCell(cell).into());
    }
    if coords.len() != x.dim(cell) {
        return Err(CliError::Usage(format!("cell {cell} has dimension {}, got {} coordinates", x.dim(cell), coords.len())));
    }
    Ok(x.point_in(cell, &coords)?)
}

fn subcomplex_description(parent: &str, w: &Subcomplex) -> SubcomplexDescription {
    SubcomplexDescription { parent: parent.to_string(), cubes: w.cells().collect() }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    fs::write(path, s).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn execute(cmd: &Command, out: Option<&Path>, inputs: &mut Inputs) -> Result<(serde_json::Value, Outcome), CliError> {
    use serde_json::json;
    let none = json!({});
    Ok(match cmd {
        Command::Validate { file } => {
            let x = inputs.complex(file)?;
            let r = json!({
                "valid": true,
                "vertices": x.vertex_count(),
                "cells_by_dim": x.counts_by_dim(),
                "max_dim": x.max_dim(),
                "digest": x.digest(),
            });
            (none, Outcome::new(r, true))
        }
        Command::Link { input, vertex, sub } => {
            let x = inputs.complex(&input.complex)?;
            let l = link(&x, *vertex)?;
            let mut r = json!({ "vertex": vertex, "link": l.export(), "flag": l.is_flag() });
            if let Some(s) = sub {
                let w = inputs.sub(&x, &input.complex, s)?;
                r["sub_link"] = serde_json::to_value(restrict_link(&l, &w)?.export()).expect("serializable");
            }
            (json!({ "vertex": vertex }), Outcome::new(r, true))
        }
        Command::CertifyNpc(a) => {
            let x = inputs.complex(&a.complex)?;
            let c = is_npc(&x);
            let holds = c.holds;
            (none, Outcome::new(c, holds))
        }
        Command::CertifyCat0(a) => {
            let c = is_cat0(&inputs.complex(&a.complex)?)?;
            let holds = c.holds;
            (none, Outcome::new(c, holds))
        }
        Command::CheckClc(a) => {
            let x = inputs.complex(&a.complex)?;
            let c = is_clc(&x, &inputs.sub(&x, &a.complex, &a.sub)?);
            let holds = c.holds;
            (none, Outcome::new(c, holds))
        }
        Command::CheckConvex(a) => {
            let x = inputs.complex(&a.complex)?;
            let c = is_convex_checked(&x, &inputs.sub(&x, &a.complex, &a.sub)?)?;
            let holds = c.holds;
            (none, Outcome::new(c, holds))
        }
        Command::VerifyOracle { input, radius, samples, h, seed } => {
            let x = inputs.complex(&input.complex)?;
            let w = inputs.sub(&x, &input.complex, &input.sub)?;
            let r = is_locally_convex_oracle(&x, &w, *radius, *samples, *h, *seed)?;
            let holds = r.violations == 0;
            (json!({ "radius": radius, "samples": samples, "h": h, "seed": seed }), Outcome::new(r, holds))
        }
        Command::Walls(a) => {
            let x = inputs.complex(&a.complex)?;
            let ws = WallSystem::new(&x)?;
            let reports = (0..ws.walls.len()).map(|id| ws.check_sageev(id)).collect::<Result<Vec<_>, _>>()?;
            let holds = reports.iter().all(|r| r.passed);
            let walls: Vec<_> = ws
                .walls
                .iter()
                .zip(&reports)
                .map(|(w, r)| json!({ "id": w.id, "edges": w.edges, "cubes_crossed": w.crossings.len(), "check": r }))
                .collect();
            (none, Outcome::new(json!({ "walls": walls }), holds))
        }
        Command::Halfspaces { input, wall } => {
            let x = inputs.complex(&input.complex)?;
            let (cat0, _) = Cat0Complex::certify(&x)?;
            let ws = WallSystem::new(&x)?;
            let b = ws.halfspaces(cat0, *wall)?;
            let holds = b.sigma.holds && b.side_a.holds && b.side_b.holds && b.join.failure.is_none();
            (json!({ "wall": wall }), Outcome::new(b, holds))
        }
        Command::Double { input, complex_out } => {
            let x = inputs.complex(&input.complex)?;
            let w = inputs.sub(&x, &input.complex, &input.sub)?;
            let report = double_flag_report(&x, &w)?;
            let d = double(&x, &w)?;
            let desc = d.complex.description();
            if let Some(p) = complex_out {
                write_json(p, &desc)?;
            }
            let holds = report.links.holds;
            let r = json!({
                "double": desc,
                "simple": d.simple,
                "involution": d.involution,
                "fixed_cells": d.fixed_cells(),
                "report": report,
            });
            (json!({ "complex_out": complex_out }), Outcome::new(r, holds))
        }
        Command::Geodesic { input, from, to, h } => {
            let x = inputs.complex(&input.complex)?;
            let (a, b) = (parse_point(&x, from)?, parse_point(&x, to)?);
            let g = GridGraph::build(&x, *h)?;
            let path = g.geodesic(&a, &b)?;
            let r = json!({ "length": path.length(&x, 1.0), "path": path });
            (json!({ "from": from, "to": to, "h": h }), Outcome::new(r, true))
        }
        Command::Gen { kind, dim, cubes, rows, squares, name, seed, sub_fraction, sub_out } => {
            let spec = match kind {
                GenKind::GridRegion => GeneratorSpec::GridRegion { dim: *dim, cubes: *cubes, seed: *seed },
                GenKind::Prism => GeneratorSpec::Prism { cubes: *cubes, seed: *seed },
                GenKind::CubeTree => GeneratorSpec::CubeTree { dim: *dim, cubes: *cubes, seed: *seed },
                GenKind::Staircase => GeneratorSpec::Staircase { rows: *rows, seed: *seed },
                GenKind::Annulus => GeneratorSpec::Annulus { squares: *squares },
                GenKind::Named => GeneratorSpec::Named { name: (*name).into() },
            };
            let g = generate(&spec)?;
            log::info!("{}: expected {:?}", g.label, g.expected);
            match (sub_fraction, sub_out) {
                (Some(f), Some(p)) => {
                    let w = random_subcomplex(&g.complex, *seed, *f, GrowthMode::AnyCell);
                    let parent = out.map_or(g.label.clone(), |o| o.display().to_string());
                    write_json(p, &subcomplex_description(&parent, &w))?;
                }
                (Some(_), None) => return Err(CliError::Usage("--sub-fraction needs --sub-out".into())),
                _ => {}
            }
            let mut o = Outcome::new(g.complex.description(), true);
            o.raw = true;
            (serde_json::to_value(&spec).expect("serializable"), o)
        }
        Command::Suite { instances, h, seed } => {
            let cfg = SuiteConfig { instances: *instances, h: *h, seed: *seed, ..SuiteConfig::default() };
            let report = suite::run(&cfg);
            let holds = report.passed();
            for c in &report.criteria {
                log::info!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            (serde_json::to_value(&cfg).expect("serializable"), Outcome::new(report, holds))
        }
    })
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate { .. } => "validate",
        Command::Link { .. } => "link",
        Command::CertifyNpc(_) => "certify-npc",
        Command::CertifyCat0(_) => "certify-cat0",
        Command::CheckClc(_) => "check-clc",
        Command::CheckConvex(_) => "check-convex",
        Command::VerifyOracle { .. } => "verify-oracle",
        Command::Walls(_) => "walls",
        Command::Halfspaces { .. } => "halfspaces",
        Command::Double { .. } => "double",
        Command::Geodesic { .. } => "geodesic",
        Command::Gen { .. } => "gen",
        Command::Suite { .. } => "suite",
    }
}

fn init(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
    if let Some(n) = std::env::var("CUBECVX_THREADS").ok().filter(|s| !s.is_empty()) {
        match n.parse::<usize>() {
            Ok(n) => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    log::warn!("CUBECVX_THREADS: {e}");
                }
            }
            Err(_) => log::warn!("CUBECVX_THREADS={n:?} is not a number, ignored"),
        }
    }
}

/// Runs a parsed command line: 0 when the claim holds, 1 when it is
/// refuted, 2 on input or precondition errors.
pub fn run(cli: Cli) -> ExitCode {
    init(cli.verbose);
    let mut inputs = Inputs(Vec::new());
    let (parameters, outcome) = match execute(&cli.command, cli.out.as_deref(), &mut inputs) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", e.kind());
            return ExitCode::from(2);
        }
    };
    let config = RunConfig {
        command: command_name(&cli.command).to_string(),
        inputs: inputs.0,
        parameters,
        output: cli.out.as_ref().map(|p| p.display().to_string()),
        verbosity: cli.verbose,
        version: env!("CARGO_PKG_VERSION"),
    };
    let out = if outcome.raw {
        outcome.result
    } else {
        serde_json::to_value(Output { config: &config, result: &outcome.result }).expect("serializable")
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = write_json(p, &out) {
                eprintln!("error: {}: {e}", e.kind());
                return ExitCode::from(2);
            }
        }
        None => println!("{}", serde_json::to_string_pretty(&out).expect("serializable")),
    }
    ExitCode::from(if outcome.holds { 0 } else { 1 })
}
