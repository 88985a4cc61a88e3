//! `hyperspace`: build conceptual spaces, store concepts, solve analogies.

mod bench;
mod render;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hyperspace::analogy::{self, AnalogyAnswer, AnalogyQuery, DecoderConfig, Operand};
use hyperspace::fixtures::fixture_store;
use hyperspace::resonator::{Cleanup, UpdateOrder, DEFAULT_BRUTE_FORCE_CAP};
use hyperspace::space::{hsb_to_point, DEFAULT_BETA};
use hyperspace::store::{ConceptSource, DEFAULT_STORE_PATH, STORE_PATH_ENV};
use hyperspace::{
    ColorHsb, ConceptRecord, DecodeMethod, DomainConfig, Error, ErrorCategory, GridSpec, Prototype,
    ResonatorConfig, RngSeed, Store, ValueRange,
};

use crate::bench::{BenchConfig, BenchMethod};

/// Version of the structured (JSON) output schema.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "hyperspace", version, about = "Conceptual spaces and analogies in complex-phasor hyperspace")]
struct Cli {
    /// Store file.
    #[arg(long, global = true, env = STORE_PATH_ENV, default_value = DEFAULT_STORE_PATH)]
    store: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    #[value(alias = "structured")]
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Create a new store holding one domain.
    Init {
        name: String,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<String>,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        domain: DomainArgs,
        /// Replace an existing store file.
        #[arg(long)]
        force: bool,
    },
    /// Register another domain in an existing store.
    AddDomain {
        name: String,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<String>,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Write the example store with the color and weight domains.
    Fixtures {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        force: bool,
    },
    /// Add a labeled concept.
    Add {
        label: String,
        /// Hue in degrees, saturation and brightness in percent.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "point", required_unless_present = "point")]
        hsb: Option<Vec<f64>>,
        /// Normalized coordinates, one per domain dimension.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<f64>>,
        /// Target domain; defaults to the first domain that fits the input.
        #[arg(long)]
        domain: Option<String>,
        /// Replace an existing concept with the same label in the domain.
        #[arg(long)]
        overwrite: bool,
    },
    /// Show domains and concepts.
    List,
    /// Solve `A : B :: C : ?`.
    ///
    /// Operands are concept labels or explicit points written `domain:x,y,z`.
    Analogy {
        #[arg(value_enum)]
        kind: KindArg,
        a: String,
        b: String,
        c: String,
        /// Domain for category analogies; defaults to the first shared one.
        #[arg(long)]
        domain: Option<String>,
        #[command(flatten)]
        decoder: DecoderArgs,
    },
    /// Encode a point and decode it back to the grid.
    Decode {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        point: Vec<f64>,
        #[arg(long)]
        domain: String,
        #[command(flatten)]
        decoder: DecoderArgs,
    },
    /// Compare resonator and brute-force decoding on random parallelogram trials.
    Bench {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = BenchMethodArg::Both)]
        method: BenchMethodArg,
        /// Include wall-clock timings (makes output run-dependent).
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        resonator: ResonatorArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Fail when any resonator run hits the sweep limit.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Category,
    Property,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchMethodArg {
    Both,
    Resonator,
    Bruteforce,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Resonator,
    Bruteforce,
}

#[derive(Clone, Copy, ValueEnum)]
enum UpdateOrderArg {
    Sequential,
    Synchronous,
}

#[derive(Clone, Copy, ValueEnum)]
enum CleanupArg {
    Soft,
    Hard,
}

#[derive(Args)]
struct SpaceArgs {
    /// Hypervector dimension.
    #[arg(long, default_value_t = 10_000)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DomainArgs {
    /// Spread of the basis phase distribution.
    #[arg(long, default_value_t = 2.0 * PI)]
    basis_sigma: f64,
    /// Similarity bandwidth per normalized unit.
    #[arg(long, default_value_t = PI / 7.0)]
    kernel_sigma: f64,
    /// HSB scaling constant (three-dimensional domains only).
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    /// Do not accept HSB input for this domain.
    #[arg(long)]
    no_hsb: bool,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    lo: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    hi: f64,
}

impl DomainArgs {
    fn config(&self, name: &str, dims: &[String]) -> hyperspace::Result<DomainConfig> {
        let beta = (dims.len() == 3 && !self.no_hsb).then_some(self.beta);
        let config = DomainConfig::new(name, dims.to_vec())
            .with_range(ValueRange::new(self.lo, self.hi)?)
            .with_basis_sigma(self.basis_sigma)
            .with_kernel_sigma(self.kernel_sigma)
            .with_beta(beta);
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct ResonatorArgs {
    #[arg(long, default_value_t = 100)]
    max_sweeps: usize,
    #[arg(long, value_enum, default_value_t = UpdateOrderArg::Sequential)]
    update_order: UpdateOrderArg,
    #[arg(long, value_enum, default_value_t = CleanupArg::Soft)]
    cleanup: CleanupArg,
}

impl ResonatorArgs {
    fn config(&self, seed: RngSeed) -> hyperspace::Result<ResonatorConfig> {
        let cfg = ResonatorConfig {
            max_sweeps: self.max_sweeps,
            update_order: match self.update_order {
                UpdateOrderArg::Sequential => UpdateOrder::SequentialInPlace,
                UpdateOrderArg::Synchronous => UpdateOrder::Synchronous,
            },
            cleanup: match self.cleanup {
                CleanupArg::Soft => Cleanup::Soft,
                CleanupArg::Hard => Cleanup::Hard,
            },
            seed,
            ..ResonatorConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    grid_lo: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    grid_hi: f64,
    #[arg(long, default_value_t = 0.5)]
    grid_step: f64,
    /// Largest search space brute force will enumerate.
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    cap: u64,
}

impl GridArgs {
    fn grid(&self) -> hyperspace::Result<GridSpec> {
        GridSpec::new(self.grid_lo, self.grid_hi, self.grid_step)
    }
}

#[derive(Args)]
struct DecoderArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Resonator)]
    method: MethodArg,
    #[command(flatten)]
    resonator: ResonatorArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Treat a resonator run that hits the sweep limit as an error.
    #[arg(long)]
    strict: bool,
}

impl DecoderArgs {
    fn config(&self, seed: RngSeed) -> hyperspace::Result<DecoderConfig> {
        Ok(DecoderConfig {
            grid: self.grid.grid()?,
            method: match self.method {
                MethodArg::Resonator => DecodeMethod::Resonator,
                MethodArg::Bruteforce => DecodeMethod::Bruteforce,
            },
            resonator: self.resonator.config(seed)?,
            brute_force_cap: self.grid.cap,
        })
    }
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    StoreExists(PathBuf),
    Usage(String),
    NotConverged { sweeps: usize },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn category(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.category().as_str(),
            CliError::StoreExists(_) | CliError::Usage(_) => ErrorCategory::Validation.as_str(),
            CliError::NotConverged { .. } => "not-converged",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.category() {
                ErrorCategory::Validation => 2,
                ErrorCategory::NotFound | ErrorCategory::CategoryMismatch => 3,
                ErrorCategory::Io => 4,
            },
            CliError::StoreExists(_) | CliError::Usage(_) => 2,
            CliError::NotConverged { .. } => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::StoreExists(p) => {
                format!("store {} already exists (pass --force to replace it)", p.display())
            }
            CliError::Usage(m) => m.clone(),
            CliError::NotConverged { sweeps } => {
                format!("resonator did not converge within {sweeps} sweeps")
            }
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorBody>,
}

#[derive(Serialize)]
struct ErrorBody {
    category: &'static str,
    exit_code: u8,
    message: String,
}

/// What a command produced: structured data plus its text rendering.
struct Output {
    json: serde_json::Value,
    text: String,
    /// Set when the result should become an error under `--strict`.
    not_converged: Option<usize>,
}

impl Output {
    fn new<T: Serialize>(value: &T, text: String) -> Self {
        Self {
            json: serde_json::to_value(value).expect("output serializes"),
            text,
            not_converged: None,
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Init { .. } => "init",
        Command::AddDomain { .. } => "add-domain",
        Command::Fixtures { .. } => "fixtures",
        Command::Add { .. } => "add",
        Command::List => "list",
        Command::Analogy { .. } => "analogy",
        Command::Decode { .. } => "decode",
        Command::Bench { .. } => "bench",
    }
}

fn strict_of(c: &Command) -> bool {
    match c {
        Command::Analogy { decoder, .. } | Command::Decode { decoder, .. } => decoder.strict,
        Command::Bench { strict, .. } => *strict,
        _ => false,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let (out, err) = match dispatch(&cli) {
        Ok(out) => {
            let err = match out.not_converged {
                Some(sweeps) if strict_of(&cli.command) => Some(CliError::NotConverged { sweeps }),
                _ => None,
            };
            (Some(out), err)
        }
        Err(e) => (None, Some(e)),
    };
    let body = err.as_ref().map(|e| ErrorBody {
        category: e.category(),
        exit_code: e.exit_code(),
        message: e.message(),
    });
    match cli.format {
        Format::Json => {
            let env = Envelope {
                schema_version: SCHEMA_VERSION,
                command: name,
                result: out.as_ref().map(|o| &o.json),
                error: body,
            };
            println!("{}", serde_json::to_string_pretty(&env).expect("output serializes"));
        }
        Format::Text => {
            if let Some(o) = &out {
                print!("{}", o.text);
                if o.not_converged.is_some() && err.is_none() {
                    eprintln!("warning: resonator stopped without converging");
                }
            }
            if let Some(b) = body {
                eprintln!("error [{}]: {}", b.category, b.message);
            }
        }
    }
    err.map_or(ExitCode::SUCCESS, |e| ExitCode::from(e.exit_code()))
}

fn load(path: &Path) -> CliResult<Store> {
    Ok(Store::load(path)?)
}

fn save_new(store: &Store, path: &Path, force: bool) -> CliResult<()> {
    if path.exists() && !force {
        return Err(CliError::StoreExists(path.to_path_buf()));
    }
    store.save(path)?;
    Ok(())
}

fn dispatch(cli: &Cli) -> CliResult<Output> {
    let path = cli.store.as_path();
    match &cli.command {
        Command::Init { name, dims, space, domain, force } => {
            let config = domain.config(name, dims)?;
            let store = Store::new(space.dim, RngSeed(space.seed))?.add_domain(config)?;
            save_new(&store, path, *force)?;
            Ok(render::store_summary(&store))
        }
        Command::AddDomain { name, dims, domain } => {
            let store = load(path)?.add_domain(domain.config(name, dims)?)?;
            store.save(path)?;
            Ok(render::domain(store.domain(name)?.config()))
        }
        Command::Fixtures { space, force } => {
            let store = fixture_store(space.dim, RngSeed(space.seed))?;
            save_new(&store, path, *force)?;
            Ok(render::store_summary(&store))
        }
        Command::Add { label, hsb, point, domain, overwrite } => {
            let store = load(path)?;
            let record = concept_record(&store, label, hsb.as_deref(), point.as_deref(), domain.as_deref())?;
            let store = store.put_concept(record.clone(), *overwrite)?;
            store.save(path)?;
            Ok(render::concept(&record))
        }
        Command::List => Ok(render::store_summary(&load(path)?)),
        Command::Analogy { kind, a, b, c, domain, decoder } => {
            let store = load(path)?;
            let ops = [a, b, c].map(|s| parse_operand(s));
            let [a_op, b_op, c_op] = ops;
            let (a_op, b_op, c_op) = (a_op?, b_op?, c_op?);
            let query = match kind {
                KindArg::Category => AnalogyQuery::category(a_op, b_op, c_op),
                KindArg::Property => AnalogyQuery::property(a_op, b_op, c_op),
            };
            let cfg = decoder.config(store.seed())?;
            let answer: AnalogyAnswer = analogy::solve(&query, &store, domain.as_deref(), &cfg)?;
            let mut out = render::analogy([a, b, c], &answer);
            if !answer.converged() {
                out.not_converged = Some(answer.decode_iterations());
            }
            Ok(out)
        }
        Command::Decode { point, domain, decoder } => {
            let store = load(path)?;
            let spec = store.domain(domain)?;
            let p = Prototype::new(domain.clone(), point.clone())?;
            let x = spec.encode(&p)?;
            let result = analogy::decode(&x, spec, &decoder.config(store.seed())?)?;
            let converged = result.converged;
            let sweeps = result.sweeps_run;
            let mut out = render::decode(domain, point, &result);
            if !converged {
                out.not_converged = Some(sweeps);
            }
            Ok(out)
        }
        Command::Bench { trials, method, timings, space, resonator, grid, .. } => {
            let seed = RngSeed(space.seed);
            let cfg = BenchConfig {
                trials: *trials,
                dim: space.dim,
                seed,
                grid: grid.grid()?,
                method: match method {
                    BenchMethodArg::Both => BenchMethod::Both,
                    BenchMethodArg::Resonator => BenchMethod::Resonator,
                    BenchMethodArg::Bruteforce => BenchMethod::Bruteforce,
                },
                resonator: resonator.config(seed)?,
                brute_force_cap: grid.cap,
                timings: *timings,
            };
            let report = bench::run(&cfg)?;
            let mut out = render::bench(&report);
            if let Some(r) = &report.resonator {
                if r.converged < report.trials {
                    out.not_converged = Some(r.max_sweeps);
                }
            }
            Ok(out)
        }
    }
}

/// `LABEL` or `domain:x,y,z`.
fn parse_operand(s: &str) -> CliResult<Operand> {
    if let Some((domain, rest)) = s.split_once(':') {
        let coords: std::result::Result<Vec<f64>, _> = rest.split(',').map(|v| v.trim().parse::<f64>()).collect();
        if let Ok(coords) = coords {
            return Ok(Operand::Point(Prototype::new(domain, coords)?));
        }
        return Err(CliError::Usage(format!("cannot parse point operand `{s}`")));
    }
    if s.trim().is_empty() {
        return Err(CliError::Usage("empty operand".into()));
    }
    Ok(Operand::label(s))
}

fn concept_record(
    store: &Store,
    label: &str,
    hsb: Option<&[f64]>,
    point: Option<&[f64]>,
    domain: Option<&str>,
) -> CliResult<ConceptRecord> {
    let fits = |f: &dyn Fn(&DomainConfig) -> bool| -> CliResult<String> {
        match domain {
            Some(d) => Ok(store.domain(d)?.name().to_string()),
            None => store
                .domains()
                .map(|s| s.config())
                .find(|c| f(c))
                .map(|c| c.name.clone())
                .ok_or_else(|| CliError::Usage("no registered domain fits this input; pass --domain".into())),
        }
    };
    if let Some(h) = hsb {
        let [hue, saturation, brightness] = h else {
            return Err(CliError::Usage(format!("--hsb takes 3 values, got {}", h.len())));
        };
        let color = ColorHsb::new(*hue, *saturation, *brightness)?;
        let name = fits(&|c| c.beta.is_some())?;
        let spec = store.domain(&name)?;
        let beta = spec
            .beta()
            .ok_or_else(|| CliError::Usage(format!("domain `{name}` does not take HSB input")))?;
        return Ok(ConceptRecord {
            label: label.to_string(),
            domain: name,
            coords: hsb_to_point(color, beta).to_vec(),
            source: ConceptSource::from(color),
        });
    }
    let coords = point.expect("clap requires --hsb or --point");
    let name = fits(&|c| c.k() == coords.len())?;
    Ok(ConceptRecord::explicit(label, name, coords.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn operands() {
        assert_eq!(parse_operand("RED").unwrap(), Operand::label("RED"));
        match parse_operand("color:1,-2,3.5").unwrap() {
            Operand::Point(p) => {
                assert_eq!(p.domain, "color");
                assert_eq!(p.coords, vec![1.0, -2.0, 3.5]);
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_operand("color:1,x").is_err());
        assert!(parse_operand(" ").is_err());
    }
}
