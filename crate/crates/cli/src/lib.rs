//! JSON-in, JSON-out command line over the `qentangle` library.
//!
//! Standard output carries only the JSON payload; a short human summary goes
//! to standard error. Exit codes: 0 success, 2 bad arguments, 3 input
//! validation failure, 4 I/O failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::RngCore;
use serde::de::DeserializeOwned;
use serde::Serialize;

use qentangle::bell::{self, ChshReport, ChshSetting, DeterministicStrategy, SampledCorrelation};
use qentangle::entanglement::{self, SchmidtDecomposition, SeparabilityVerdict};
use qentangle::states::{self, BlochVector, DensityOperator, MeasurementAxis, PureState, Subsystem};
use qentangle::teleport::{self, BellLabel, TeleportTranscript};
use qentangle::{sampling, QuantumError};

pub const DEFAULT_SEED: u64 = 42;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "qentangle", version, about = "Entanglement, CHSH and teleportation calculations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Numerical tolerance for positivity decisions.
    #[arg(long, global = true, default_value_t = qentangle::DEFAULT_TOL)]
    pub tol: f64,

    /// Write the JSON result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bloch vector and purity of a qubit (pure state or density operator JSON).
    Bloch { input: PathBuf },
    /// Reduced density operator of a bipartite state.
    Ptrace {
        input: PathBuf,
        #[arg(long, value_enum)]
        keep: Keep,
    },
    /// Schmidt decomposition of a bipartite pure state.
    Schmidt {
        input: PathBuf,
        /// Subsystem dimensions as `dA,dB`.
        #[arg(long, value_parser = parse_dims)]
        dims: (usize, usize),
    },
    /// Positive-partial-transpose separability verdict.
    Ppt { input: PathBuf },
    /// CHSH correlations for the singlet.
    Chsh {
        /// Axis setting JSON; defaults to the maximally violating coplanar setting.
        #[arg(long)]
        setting: Option<PathBuf>,
        /// Add Monte Carlo estimates with this many samples per axis pair.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: Option<u64>,
        /// Also write the correlation-vs-angle series as CSV.
        #[arg(long, requires = "samples")]
        series_csv: Option<PathBuf>,
    },
    /// Enumerate all deterministic local strategies.
    Lhv,
    /// Teleport `cos θ |0⟩ + e^{iφ} sin θ |1⟩`.
    Teleport {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        runs: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Keep {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<Keep> for Subsystem {
    fn from(k: Keep) -> Self {
        match k {
            Keep::A => Subsystem::A,
            Keep::B => Subsystem::B,
        }
    }
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected dA,dB, got {s:?}"))?;
    let parse = |x: &str| -> Result<usize, String> {
        match x.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("invalid dimension {x:?}")),
            Ok(n) => Ok(n),
        }
    };
    Ok((parse(a)?, parse(b)?))
}

#[derive(Debug)]
pub enum CliError {
    Io { path: PathBuf, source: std::io::Error },
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Invalid(_) => EXIT_INVALID,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Invalid(msg) => f.write_str(msg),
        }
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

/// Output of one subcommand: the JSON payload and a human summary.
struct Response {
    json: String,
    summary: String,
}

fn to_value<T: Serialize>(v: &T) -> String {
    let mut text = serde_json::to_string_pretty(v).expect("result types serialise");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct BlochOutput {
    bloch: BlochVector,
    purity: f64,
    linear_entropy: f64,
    density: DensityOperator,
}

fn cmd_bloch(input: &Path) -> Result<Response, CliError> {
    let value: serde_json::Value = read_json(input)?;
    let rho = if value.get("amplitudes").is_some() {
        let psi: PureState =
            serde_json::from_value(value).map_err(|e| CliError::Invalid(format!("{}: {e}", input.display())))?;
        states::density_from_pure(&psi)
    } else {
        serde_json::from_value(value).map_err(|e| CliError::Invalid(format!("{}: {e}", input.display())))?
    };
    let bloch = states::density_to_bloch(&rho)?;
    let purity = states::purity(&rho)?;
    let out = BlochOutput {
        bloch,
        purity,
        linear_entropy: 1.0 - purity,
        density: rho,
    };
    let [x, y, z] = bloch.components();
    Ok(Response {
        json: to_value(&out),
        summary: format!("n = ({x:.6}, {y:.6}, {z:.6}), purity {purity:.6}"),
    })
}

fn cmd_ptrace(input: &Path, keep: Keep) -> Result<Response, CliError> {
    let rho: DensityOperator = read_json(input)?;
    let reduced = states::partial_trace(&rho, keep.into())?;
    Ok(Response {
        json: to_value(&reduced),
        summary: format!("kept subsystem {keep:?}: {}x{} reduced state", reduced.dim(), reduced.dim()),
    })
}

#[derive(Serialize)]
struct SchmidtOutput {
    #[serde(flatten)]
    decomposition: SchmidtDecomposition,
    entangled: bool,
}

fn cmd_schmidt(input: &Path, (d_a, d_b): (usize, usize)) -> Result<Response, CliError> {
    let psi: PureState = read_json(input)?;
    let decomposition = entanglement::schmidt(&psi, d_a, d_b)?;
    let entangled = decomposition.schmidt_number > 1;
    let summary = format!(
        "Schmidt number {} ({}), coefficients {:?}",
        decomposition.schmidt_number,
        if entangled { "entangled" } else { "product" },
        decomposition.coefficients
    );
    Ok(Response {
        json: to_value(&SchmidtOutput {
            decomposition,
            entangled,
        }),
        summary,
    })
}

fn cmd_ppt(input: &Path, tol: f64) -> Result<Response, CliError> {
    let rho: DensityOperator = read_json(input)?;
    let verdict: SeparabilityVerdict = entanglement::separability_decision_with_tol(&rho, tol)?;
    Ok(Response {
        json: to_value(&verdict),
        summary: format!(
            "{:?} (min PT eigenvalue {:e}, dims {:?})",
            verdict.verdict, verdict.min_pt_eigenvalue, verdict.dims
        ),
    })
}

#[derive(Serialize)]
struct MonteCarlo {
    samples: u64,
    c11: SampledCorrelation,
    c12: SampledCorrelation,
    c21: SampledCorrelation,
    c22: SampledCorrelation,
    s_value: f64,
}

#[derive(Serialize)]
struct SeriesPoint {
    angle_deg: f64,
    a_dot_b: f64,
    exact: f64,
    empirical: f64,
}

#[derive(Serialize)]
struct ChshOutput {
    setting: ChshSetting,
    #[serde(flatten)]
    report: ChshReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    monte_carlo: Option<MonteCarlo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    series: Option<Vec<SeriesPoint>>,
}

/// Correlation sweep with Alice on ẑ and Bob rotated in the x–z plane.
const SERIES_STEP_DEG: usize = 5;

fn cmd_chsh(setting: Option<&Path>, samples: Option<u64>, csv: Option<&Path>, seed: u64) -> Result<Response, CliError> {
    let setting = match setting {
        Some(p) => read_json(p)?,
        None => bell::optimal_setting(),
    };
    let rho = bell::singlet_density();
    let report = bell::chsh_value(&rho, &setting)?;
    let mut summary = format!(
        "S = {:.10} ({})",
        report.s_value,
        if report.violates_classical {
            "violates |S| <= 2"
        } else {
            "within classical bound"
        }
    );

    let (monte_carlo, series) = match samples {
        None => (None, None),
        Some(n) => {
            let sample = |a: &MeasurementAxis, b: &MeasurementAxis, k: u64| {
                bell::sample_outcomes(&rho, a, b, n, seed.wrapping_add(k))
            };
            let c11 = sample(&setting.a1, &setting.b1, 0)?;
            let c12 = sample(&setting.a1, &setting.b2, 1)?;
            let c21 = sample(&setting.a2, &setting.b1, 2)?;
            let c22 = sample(&setting.a2, &setting.b2, 3)?;
            let s_value = c22.empirical_correlation
                - c11.empirical_correlation
                - c12.empirical_correlation
                - c21.empirical_correlation;
            summary.push_str(&format!("; sampled S = {s_value:.6} from {n} shots per pair"));

            let alice = MeasurementAxis::z();
            let mut points = Vec::new();
            for (i, deg) in (0..=180).step_by(SERIES_STEP_DEG).enumerate() {
                let angle = (deg as f64).to_radians();
                let bob = MeasurementAxis::in_xz_plane(angle);
                let exact = bell::correlation(&rho, &alice, &bob)?;
                let empirical = sample(&alice, &bob, 4 + i as u64)?.empirical_correlation;
                points.push(SeriesPoint {
                    angle_deg: deg as f64,
                    a_dot_b: alice.dot(&bob),
                    exact,
                    empirical,
                });
            }
            if let Some(path) = csv {
                let mut text = String::from("angle_deg,a_dot_b,exact,empirical\n");
                for p in &points {
                    text.push_str(&format!("{},{},{},{}\n", p.angle_deg, p.a_dot_b, p.exact, p.empirical));
                }
                fs::write(path, text).map_err(|source| CliError::Io {
                    path: path.to_path_buf(),
                    source,
                })?;
            }
            (
                Some(MonteCarlo {
                    samples: n,
                    c11,
                    c12,
                    c21,
                    c22,
                    s_value,
                }),
                Some(points),
            )
        }
    };

    Ok(Response {
        json: to_value(&ChshOutput {
            setting,
            report,
            monte_carlo,
            series,
        }),
        summary,
    })
}

#[derive(Serialize)]
struct StrategyRow {
    a1: i8,
    a2: i8,
    b1: i8,
    b2: i8,
    f: i32,
}

impl From<&DeterministicStrategy> for StrategyRow {
    fn from(s: &DeterministicStrategy) -> Self {
        StrategyRow {
            a1: s.a1_out,
            a2: s.a2_out,
            b1: s.b1_out,
            b2: s.b2_out,
            f: s.chsh_functional(),
        }
    }
}

#[derive(Serialize)]
struct LhvOutput {
    strategies: Vec<StrategyRow>,
    /// `F` is integer valued on deterministic strategies.
    max_s: i32,
    max_abs_s: i32,
    argmax: StrategyRow,
}

fn cmd_lhv() -> Response {
    let all = DeterministicStrategy::all();
    let (max, arg) = bell::lhv_max_chsh();
    let strategies: Vec<StrategyRow> = all.iter().map(StrategyRow::from).collect();
    let max_abs_s = strategies.iter().map(|r| r.f.abs()).max().unwrap_or(0);
    Response {
        json: to_value(&LhvOutput {
            strategies,
            max_s: max as i32,
            max_abs_s,
            argmax: StrategyRow::from(&arg),
        }),
        summary: format!("{} strategies, max F = {max}, max |F| = {max_abs_s}", all.len()),
    }
}

#[derive(Serialize)]
struct OutcomeTally {
    outcome: BellLabel,
    bits: String,
    correction: teleport::Correction,
    count: u64,
    frequency: f64,
}

#[derive(Serialize)]
struct TeleportSummary {
    runs: u64,
    outcomes: Vec<OutcomeTally>,
    min_fidelity: f64,
    max_fidelity: f64,
}

#[derive(Serialize)]
struct TeleportOutput {
    transcripts: Vec<TeleportTranscript>,
    summary: TeleportSummary,
}

fn cmd_teleport(theta: f64, phi: f64, runs: u64, seed: u64) -> Result<Response, CliError> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(CliError::Invalid("theta and phi must be finite".into()));
    }
    let input = states::qubit_from_angles(theta, phi);
    let mut seeds = sampling::rng_from_seed(seed);
    let mut transcripts = Vec::with_capacity(runs as usize);
    for _ in 0..runs {
        transcripts.push(teleport::teleport(&input, seeds.next_u64())?);
    }
    let outcomes = BellLabel::ALL
        .iter()
        .map(|&label| {
            let count = transcripts.iter().filter(|t| t.measured_bell == label).count() as u64;
            let [b0, b1] = label.bits();
            OutcomeTally {
                outcome: label,
                bits: format!("{b0}{b1}"),
                correction: teleport::correction_for(label),
                count,
                frequency: count as f64 / runs as f64,
            }
        })
        .collect();
    let min_fidelity = transcripts.iter().map(|t| t.fidelity).fold(f64::INFINITY, f64::min);
    let max_fidelity = transcripts.iter().map(|t| t.fidelity).fold(f64::NEG_INFINITY, f64::max);
    let summary = format!("{runs} run(s), fidelity in [{min_fidelity:.12}, {max_fidelity:.12}]");
    Ok(Response {
        json: to_value(&TeleportOutput {
            transcripts,
            summary: TeleportSummary {
                runs,
                outcomes,
                min_fidelity,
                max_fidelity,
            },
        }),
        summary,
    })
}

fn execute(cli: &Cli) -> Result<Response, CliError> {
    match &cli.command {
        Command::Bloch { input } => cmd_bloch(input),
        Command::Ptrace { input, keep } => cmd_ptrace(input, *keep),
        Command::Schmidt { input, dims } => cmd_schmidt(input, *dims),
        Command::Ppt { input } => cmd_ppt(input, cli.tol),
        Command::Chsh {
            setting,
            samples,
            series_csv,
        } => cmd_chsh(setting.as_deref(), *samples, series_csv.as_deref(), cli.seed),
        Command::Lhv => Ok(cmd_lhv()),
        Command::Teleport { theta, phi, runs } => cmd_teleport(*theta, *phi, *runs, cli.seed),
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        let _ = writeln!(stderr, "error: --tol must be a nonnegative finite number");
        return EXIT_USAGE;
    }

    let response = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let text = response.json;
    match &cli.output {
        Some(path) => {
            if let Err(source) = fs::write(path, &text) {
                let _ = writeln!(stderr, "error: {}", CliError::Io { path: path.clone(), source });
                return EXIT_IO;
            }
        }
        None => {
            if stdout.write_all(text.as_bytes()).is_err() {
                return EXIT_IO;
            }
        }
    }
    let _ = writeln!(stderr, "{}", response.summary);
    EXIT_OK
}

/// Convenience for tests and scripts: serialise any library value the way
/// the CLI reads it back.
pub fn encode<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("library types serialise")
}
