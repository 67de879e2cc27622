//! Command-line driver tying the library into reproducible experiments.
//!
//! Five subcommands cover the main capabilities: `evolve` (real-space
//! evolution and snapshots), `classify` (algebraic coin classification),
//! `spectrum` (dispersion surface and stationary-point report), `exponent`
//! (decay fit, Pólya estimate, and consistency verdict), and `classical`
//! (the classical 3-way walk baseline).
//!
//! Every output file embeds the artifact version and the parsed
//! configuration, so a result file is always traceable to the exact command
//! that produced it. With `--no-timestamp`, identical configuration and seed
//! produce byte-identical files.
//!
//! Exit codes: 0 on success, 2 for invalid input, 3 for an internal
//! consistency failure (an invariant of the physics violated at runtime —
//! e.g. norm drift, sublattice leakage, or an eigenvalue identity breaking).

use crate::classical::{classical_monte_carlo_p0, classical_p0_float, classical_series};
use crate::coin::{self, CoinMatrix};
use crate::engine::{self, WalkRun};
use crate::lattice::WalkState;
use crate::recurrence::{self, ReturnSeries};
use crate::spectral::{self, MomentumPoint};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Off-sublattice return probability above this is a physics violation.
const SUBLATTICE_TOL: f64 = 1e-12;
/// Total norm drift above this over a run is a physics violation.
const NORM_DRIFT_TOL: f64 = 1e-9;
/// Eigenvalue-identity residual gate for `spectrum`.
const IDENTITY_RESIDUAL_TOL: f64 = 1e-8;
/// Chirality inputs further than this from unit norm trigger a warning
/// (they are normalized either way).
const CHIRALITY_WARN_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "triwalk",
    version,
    about = "Simulate and analyze three-state quantum walks on the triangular lattice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the walk in real space; write the return series and an
    /// optional full distribution snapshot.
    Evolve(CommonArgs),
    /// Classify the coin by its zero-diagonal structure.
    Classify(CommonArgs),
    /// Build the dispersion surface, verify eigenvalue identities, and
    /// report stationary points with their decay class.
    Spectrum(CommonArgs),
    /// Fit the return-probability decay exponent, estimate the Pólya
    /// number, and cross-check against the coin classification.
    Exponent(CommonArgs),
    /// Classical 3-way walk baseline: exact, Stirling, and Monte Carlo.
    Classical(CommonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Coin: grover | crec | identity | random | perm:SIGMA (e.g.
    /// perm:231) | inline JSON 3x3 matrix | path to a JSON matrix file.
    /// JSON entries are numbers or "re+imj" strings.
    #[arg(long, default_value = "grover")]
    coin: String,

    /// Initial chirality: symmetric | fastdecay | three comma-separated
    /// complex entries ("re" or "re+imj"); normalized automatically.
    #[arg(long, default_value = "symmetric")]
    init: String,

    /// Number of time steps (the horizon T).
    #[arg(long, default_value_t = 300)]
    steps: usize,

    /// Momentum grid size N for spectral commands (N x N nodes).
    #[arg(long, default_value_t = 128)]
    grid: usize,

    /// Decay-fit window as "t_min,t_max".
    #[arg(long = "fit-window", value_parser = parse_window, default_value = "30,300")]
    fit_window: (usize, usize),

    /// Write a full distribution snapshot at this time step.
    #[arg(long)]
    snapshot: Option<usize>,

    /// Output format for tabular data.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    /// Output directory for generated files (created if missing).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed for every pseudo-random choice (random coins, Monte Carlo).
    #[arg(long, default_value_t = 7)]
    seed: u64,

    /// Suppress the timestamp header line for byte-identical reruns.
    #[arg(long = "no-timestamp", default_value_t = false)]
    no_timestamp: bool,
}

/// The fully parsed configuration, echoed into every output file.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub coin: String,
    pub init: String,
    pub steps: usize,
    pub grid: usize,
    pub fit_window: (usize, usize),
    pub snapshot: Option<usize>,
    pub format: String,
    pub out: Option<String>,
    pub seed: u64,
    pub no_timestamp: bool,
}

impl ExperimentConfig {
    fn new(command: &str, args: &CommonArgs) -> Self {
        ExperimentConfig {
            command: command.to_string(),
            coin: args.coin.clone(),
            init: args.init.clone(),
            steps: args.steps,
            grid: args.grid,
            fit_window: args.fit_window,
            snapshot: args.snapshot,
            format: match args.format {
                OutputFormat::Csv => "csv".to_string(),
                OutputFormat::Json => "json".to_string(),
            },
            out: args.out.as_ref().map(|p| p.display().to_string()),
            seed: args.seed,
            no_timestamp: args.no_timestamp,
        }
    }
}

enum CmdError {
    /// Bad input: exit code 2.
    Input(String),
    /// A physics or numerical invariant failed at runtime: exit code 3.
    Consistency(String),
}

impl From<crate::Error> for CmdError {
    fn from(e: crate::Error) -> Self {
        CmdError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Input(format!("i/o: {e}"))
    }
}

impl From<serde_json::Error> for CmdError {
    fn from(e: serde_json::Error) -> Self {
        CmdError::Input(format!("json: {e}"))
    }
}

type CmdResult = Result<(), CmdError>;

/// Parses `std::env::args` and runs one command. Returns the process exit
/// code (0 success, 2 invalid input, 3 consistency failure).
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// [`run`] over an explicit argument vector (the first element is the
/// program name), for embedding and tests.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Evolve(args) => cmd_evolve(&ExperimentConfig::new("evolve", args), args),
        Command::Classify(args) => cmd_classify(&ExperimentConfig::new("classify", args), args),
        Command::Spectrum(args) => cmd_spectrum(&ExperimentConfig::new("spectrum", args), args),
        Command::Exponent(args) => cmd_exponent(&ExperimentConfig::new("exponent", args), args),
        Command::Classical(args) => cmd_classical(&ExperimentConfig::new("classical", args), args),
    };
    match result {
        Ok(()) => 0,
        Err(CmdError::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CmdError::Consistency(msg)) => {
            eprintln!("consistency failure: {msg}");
            3
        }
    }
}

// ---------------------------------------------------------------------------
// Input parsing
// ---------------------------------------------------------------------------

fn parse_err(what: impl Into<String>, reason: impl Into<String>) -> crate::Error {
    crate::Error::Parse {
        what: what.into(),
        reason: reason.into(),
    }
}

/// Parses `re` or `re+imj` (also `imj`, `+j`, `-j`; scientific notation
/// allowed in both parts).
pub fn parse_complex(s: &str) -> crate::Result<Complex64> {
    let t = s.trim();
    if t.is_empty() {
        return Err(parse_err("complex number", "empty string"));
    }
    let Some(body) = t.strip_suffix(['j', 'J']) else {
        let re: f64 = t
            .parse()
            .map_err(|e| parse_err(format!("complex number '{t}'"), format!("{e}")))?;
        return Ok(Complex64::new(re, 0.0));
    };
    // Split the imaginary tail at the last sign that is not an exponent
    // sign and not the leading sign.
    let mut split = None;
    let mut prev = '\0';
    for (i, c) in body.char_indices() {
        if i > 0 && (c == '+' || c == '-') && prev != 'e' && prev != 'E' {
            split = Some(i);
        }
        prev = c;
    }
    let (re_str, im_str) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let re: f64 = re_str
        .parse()
        .map_err(|e| parse_err(format!("complex number '{t}'"), format!("real part: {e}")))?;
    let im: f64 = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => im_str.parse().map_err(|e| {
            parse_err(format!("complex number '{t}'"), format!("imaginary part: {e}"))
        })?,
    };
    Ok(Complex64::new(re, im))
}

fn coin_from_json_value(v: &serde_json::Value) -> crate::Result<CoinMatrix> {
    let rows = v
        .as_array()
        .filter(|r| r.len() == 3)
        .ok_or_else(|| parse_err("coin matrix", "expected a 3x3 JSON array"))?;
    let mut m = Matrix3::<Complex64>::zeros();
    for (i, row) in rows.iter().enumerate() {
        let cols = row
            .as_array()
            .filter(|c| c.len() == 3)
            .ok_or_else(|| parse_err("coin matrix", format!("row {i} is not a 3-entry array")))?;
        for (j, entry) in cols.iter().enumerate() {
            m[(i, j)] = match entry {
                serde_json::Value::Number(x) => Complex64::new(
                    x.as_f64()
                        .ok_or_else(|| parse_err("coin matrix", "non-finite entry"))?,
                    0.0,
                ),
                serde_json::Value::String(s) => parse_complex(s)?,
                other => {
                    return Err(parse_err(
                        "coin matrix",
                        format!("entry ({i},{j}) must be a number or string, got {other}"),
                    ))
                }
            };
        }
    }
    Ok(CoinMatrix::new(m)?.with_label("custom"))
}

/// Resolves a `--coin` argument: a preset name, `perm:SIGMA`, `random`
/// (seeded), inline JSON, or a path to a JSON file.
pub fn parse_coin_spec(spec: &str, seed: u64) -> crate::Result<CoinMatrix> {
    match spec {
        "grover" => return Ok(CoinMatrix::grover()),
        "crec" => return Ok(CoinMatrix::recurrent()),
        "identity" => return Ok(CoinMatrix::identity()),
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            return Ok(coin::random_unitary(&mut rng).with_label(format!("random(seed={seed})")));
        }
        _ => {}
    }
    if let Some(digits) = spec.strip_prefix("perm:") {
        let images: Vec<usize> = digits
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| parse_err("permutation", format!("non-digit '{c}'")))
            })
            .collect::<crate::Result<_>>()?;
        let images: [usize; 3] = images
            .try_into()
            .map_err(|_| parse_err("permutation", "need exactly three images, e.g. perm:231"))?;
        return CoinMatrix::permutation(images);
    }
    if spec.trim_start().starts_with('[') {
        let v: serde_json::Value = serde_json::from_str(spec)
            .map_err(|e| parse_err("inline coin JSON", e.to_string()))?;
        return coin_from_json_value(&v);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| {
        parse_err(
            format!("coin '{spec}'"),
            format!("not a preset, perm:SIGMA, inline JSON, or readable file: {e}"),
        )
    })?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| parse_err(format!("coin file '{spec}'"), e.to_string()))?;
    coin_from_json_value(&v)
}

/// Resolves an `--init` argument. Returns the unit-normalized chirality and
/// the norm deviation of the raw input (for the renormalization warning).
pub fn parse_chirality(spec: &str) -> crate::Result<(Vector3<Complex64>, f64)> {
    match spec {
        "symmetric" => return Ok((coin::symmetric_chirality(), 0.0)),
        "fastdecay" => return Ok((coin::fast_decay_chirality(), 0.0)),
        _ => {}
    }
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(parse_err(
            format!("chirality '{spec}'"),
            "expected 'symmetric', 'fastdecay', or three comma-separated entries",
        ));
    }
    let v = Vector3::new(
        parse_complex(parts[0])?,
        parse_complex(parts[1])?,
        parse_complex(parts[2])?,
    );
    let norm = v.norm();
    if norm == 0.0 {
        return Err(parse_err(format!("chirality '{spec}'"), "zero vector"));
    }
    Ok((v.unscale(norm), (norm - 1.0).abs()))
}

fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected 't_min,t_max'".to_string());
    }
    let t_min: usize = parts[0].trim().parse().map_err(|e| format!("t_min: {e}"))?;
    let t_max: usize = parts[1].trim().parse().map_err(|e| format!("t_max: {e}"))?;
    if t_min == 0 || t_min >= t_max {
        return Err("need 0 < t_min < t_max".to_string());
    }
    Ok((t_min, t_max))
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

fn artifact_version() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// 17 significant digits: round-trip exact for f64.
fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_preamble(config: &ExperimentConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# version: {}", artifact_version());
    let _ = writeln!(
        s,
        "# config: {}",
        serde_json::to_string(config).expect("config serializes")
    );
    if !config.no_timestamp {
        let _ = writeln!(s, "# generated-unix: {}", unix_now());
    }
    s
}

fn out_dir(config: &ExperimentConfig) -> Result<PathBuf, CmdError> {
    let dir = config
        .out
        .as_ref()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CmdError> {
    std::fs::write(path, contents)?;
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct JsonEnvelope<'a, T: Serialize> {
    version: String,
    config: &'a ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_unix: Option<u64>,
    #[serde(flatten)]
    body: T,
}

fn json_document<T: Serialize>(config: &ExperimentConfig, body: T) -> Result<String, CmdError> {
    let doc = JsonEnvelope {
        version: artifact_version(),
        config,
        generated_unix: (!config.no_timestamp).then(unix_now),
        body,
    };
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc)?))
}

// ---------------------------------------------------------------------------
// Shared run machinery
// ---------------------------------------------------------------------------

fn warn_renormalized(deviation: f64) {
    if deviation > CHIRALITY_WARN_TOL {
        eprintln!(
            "warning: input chirality norm deviated from 1 by {deviation:.3e}; renormalized"
        );
    }
}

/// The physics gates applied to every real-space run: returns to the origin
/// only on the `t mod 3 = 0` sublattice, and no norm drift.
fn run_gates(series: &ReturnSeries, final_state: &WalkState) -> CmdResult {
    for &(t, p0) in series.entries() {
        if t % 3 != 0 && p0 >= SUBLATTICE_TOL {
            return Err(CmdError::Consistency(format!(
                "sublattice violation: p0({t}) = {p0:.3e} at t mod 3 = {}",
                t % 3
            )));
        }
    }
    let drift = (final_state.total_norm() - 1.0).abs();
    if drift >= NORM_DRIFT_TOL {
        return Err(CmdError::Consistency(format!(
            "norm drift {drift:.3e} after {} steps",
            final_state.time()
        )));
    }
    Ok(())
}

struct EvolveOutcome {
    series: ReturnSeries,
    snapshot: Option<WalkState>,
}

fn evolve_run(config: &ExperimentConfig, args: &CommonArgs) -> Result<EvolveOutcome, CmdError> {
    let coin = parse_coin_spec(&args.coin, args.seed)?;
    let (chirality, deviation) = parse_chirality(&args.init)?;
    warn_renormalized(deviation);
    if let Some(s) = config.snapshot {
        if s > config.steps {
            return Err(CmdError::Input(format!(
                "snapshot time {s} exceeds horizon {}",
                config.steps
            )));
        }
    }
    let run = WalkRun::new(coin, chirality, config.steps)?;
    let mut snapshot = None;
    let (final_state, series) = engine::evolve_with(&run, |state| {
        if Some(state.time()) == config.snapshot {
            snapshot = Some(state.clone());
        }
    });
    run_gates(&series, &final_state)?;
    Ok(EvolveOutcome { series, snapshot })
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SeriesJson {
    entries: Vec<SeriesRow>,
}

#[derive(Serialize)]
struct SeriesRow {
    t: usize,
    p0: f64,
}

fn cmd_evolve(config: &ExperimentConfig, args: &CommonArgs) -> CmdResult {
    let outcome = evolve_run(config, args)?;
    let dir = out_dir(config)?;

    match args.format {
        OutputFormat::Csv => {
            let mut s = csv_preamble(config);
            s.push_str("t,p0\n");
            for &(t, p0) in outcome.series.entries() {
                let _ = writeln!(s, "{t},{}", fmt_f(p0));
            }
            write_file(&dir.join("series.csv"), &s)?;
        }
        OutputFormat::Json => {
            let body = SeriesJson {
                entries: outcome
                    .series
                    .entries()
                    .iter()
                    .map(|&(t, p0)| SeriesRow { t, p0 })
                    .collect(),
            };
            let doc = json_document(config, body)?;
            write_file(&dir.join("series.json"), &doc)?;
        }
    }

    if let Some(state) = &outcome.snapshot {
        let mut s = csv_preamble(config);
        let _ = writeln!(s, "# snapshot-time: {}", state.time());
        s.push_str("a,b,x,y,p\n");
        for (site, p) in state.full_distribution(0.0) {
            let (x, y) = site.physical();
            let _ = writeln!(s, "{},{},{},{},{}", site.a, site.b, fmt_f(x), fmt_f(y), fmt_f(p));
        }
        write_file(&dir.join("snapshot.csv"), &s)?;
    }

    let last = outcome
        .series
        .entries()
        .last()
        .copied()
        .unwrap_or((0, 1.0));
    println!(
        "evolved {} steps: p0({}) = {:.6e}",
        config.steps, last.0, last.1
    );
    Ok(())
}

#[derive(Serialize)]
struct ClassifyBody<'a> {
    coin_label: &'a str,
    #[serde(flatten)]
    classification: &'a coin::CoinClassification,
}

fn cmd_classify(config: &ExperimentConfig, args: &CommonArgs) -> CmdResult {
    let coin = parse_coin_spec(&args.coin, args.seed)?;
    let classification = coin.classify_default();
    let dir = out_dir(config)?;
    let doc = json_document(
        config,
        ClassifyBody {
            coin_label: coin.label(),
            classification: &classification,
        },
    )?;
    write_file(&dir.join("classify.json"), &doc)?;
    println!(
        "{}: {:?} (zero diagonals: {}, direction: {})",
        coin.label(),
        classification.verdict,
        classification.zero_diagonal_count,
        classification
            .propagation_direction
            .map(|d| format!("{d:?}"))
            .unwrap_or_else(|| "-".to_string()),
    );
    Ok(())
}

#[derive(Serialize)]
struct FlagsBody<'a> {
    flagged: &'a [spectral::FlaggedNode],
}

fn cmd_spectrum(config: &ExperimentConfig, args: &CommonArgs) -> CmdResult {
    if config.grid < 16 {
        return Err(CmdError::Input(format!(
            "grid size {} too small; need at least 16",
            config.grid
        )));
    }
    let coin = parse_coin_spec(&args.coin, args.seed)?;
    let n = config.grid;
    let surface = spectral::build_dispersion_surface(&coin, n);
    let report = spectral::find_stationary_points(&surface, spectral::default_grad_tol(n));

    // Eigenvalue identities at every node: the spectrum must reproduce the
    // trace, the pair sum (principal minors), and the determinant of the
    // propagator. A violation means the diagonalization cannot be trusted.
    let mut max_trace = 0.0f64;
    let mut max_pair = 0.0f64;
    let mut max_det = 0.0f64;
    for i1 in 0..n {
        for i2 in 0..n {
            let k = spectral::grid_momentum(n, i1, i2);
            let prop = spectral::momentum_propagator(&coin, &k);
            let lam = prop.eigenvalues();
            let sum: Complex64 = lam.iter().sum();
            let pair = lam[0] * lam[1] + lam[0] * lam[2] + lam[1] * lam[2];
            let det = lam[0] * lam[1] * lam[2];
            max_trace = max_trace.max((sum - prop.matrix.trace()).norm());
            max_pair = max_pair.max((pair - principal_minor_sum(&prop.matrix)).norm());
            max_det = max_det.max((det - prop.matrix.determinant()).norm());
        }
    }

    let dir = out_dir(config)?;
    let mut s = csv_preamble(config);
    s.push_str("k1,k2,omega1,omega2,omega3,gradnorm1,gradnorm2,gradnorm3\n");
    for i1 in 0..n {
        for i2 in 0..n {
            let MomentumPoint { k1, k2 } = surface.node_momentum(i1, i2);
            let _ = write!(s, "{},{}", fmt_f(k1), fmt_f(k2));
            for b in 0..3 {
                let _ = write!(s, ",{}", fmt_f(surface.omega(b, i1, i2)));
            }
            for b in 0..3 {
                let _ = write!(s, ",{}", fmt_f(surface.gradient_norm(b, i1, i2)));
            }
            s.push('\n');
        }
    }
    write_file(&dir.join("surface.csv"), &s)?;

    let doc = json_document(config, &report)?;
    write_file(&dir.join("stationary.json"), &doc)?;

    let flags = json_document(
        config,
        FlagsBody {
            flagged: surface.flagged_nodes(),
        },
    )?;
    write_file(&dir.join("flags.json"), &flags)?;

    println!(
        "decay class: {:?}; {} stationary component(s); {} flagged node(s)",
        report.decay_class,
        report.points.len(),
        surface.flagged_nodes().len()
    );
    println!(
        "identity residuals: trace {max_trace:.3e}, pair {max_pair:.3e}, det {max_det:.3e}"
    );

    let worst = max_trace.max(max_pair).max(max_det);
    if worst >= IDENTITY_RESIDUAL_TOL {
        return Err(CmdError::Consistency(format!(
            "eigenvalue identity residual {worst:.3e} exceeds {IDENTITY_RESIDUAL_TOL:.0e}"
        )));
    }
    Ok(())
}

fn principal_minor_sum(m: &Matrix3<Complex64>) -> Complex64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)]
        - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)]
        - m[(1, 2)] * m[(2, 1)]
}

#[derive(Serialize)]
struct ExponentBody<'a> {
    exponent: f64,
    stderr: f64,
    r2: f64,
    window: (usize, usize),
    intercept: f64,
    excluded_nonpositive: usize,
    polya_partial: f64,
    horizon: usize,
    verdict: recurrence::VerdictHint,
    classification: &'a coin::CoinClassification,
    consistent: bool,
    detail: &'a str,
}

fn cmd_exponent(config: &ExperimentConfig, args: &CommonArgs) -> CmdResult {
    let (t_min, t_max) = config.fit_window;
    if config.steps < t_max {
        return Err(CmdError::Input(format!(
            "horizon {} is shorter than the fit window end {t_max}",
            config.steps
        )));
    }
    let outcome = evolve_run(config, args)?;
    let fit = recurrence::fit_decay_exponent(&outcome.series, t_min, t_max)?;
    let polya = recurrence::polya_estimate(&outcome.series);
    let coin = parse_coin_spec(&args.coin, args.seed)?;
    let classification = coin.classify_default();
    let consistency = recurrence::verdict(&classification, &fit);

    let dir = out_dir(config)?;
    let doc = json_document(
        config,
        ExponentBody {
            exponent: fit.exponent,
            stderr: fit.stderr,
            r2: fit.r_squared,
            window: fit.window,
            intercept: fit.intercept,
            excluded_nonpositive: fit.excluded_nonpositive,
            polya_partial: polya.partial_value,
            horizon: polya.horizon,
            verdict: polya.verdict_hint,
            classification: &classification,
            consistent: consistency.consistent,
            detail: &consistency.detail,
        },
    )?;
    write_file(&dir.join("exponent.json"), &doc)?;

    println!(
        "exponent = {:.4} +/- {:.4} (R^2 = {:.5}), polya partial = {:.6} at T = {}",
        fit.exponent, fit.stderr, fit.r_squared, polya.partial_value, polya.horizon
    );
    println!("{}", consistency.detail);
    if !consistency.consistent {
        return Err(CmdError::Consistency(consistency.detail));
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassicalJson {
    entries: Vec<ClassicalRow>,
}

#[derive(Clone, Serialize)]
struct ClassicalRow {
    t: usize,
    p0_exact_float: f64,
    stirling: f64,
    relative_error: f64,
    partial_sum: f64,
    polya_partial: f64,
}

fn cmd_classical(config: &ExperimentConfig, args: &CommonArgs) -> CmdResult {
    let rows: Vec<ClassicalRow> = {
        // Partial sums include the t = 0 term (p0(0) = 1).
        let mut partial = 1.0f64;
        classical_series(config.steps)
            .iter()
            .map(|e| {
                partial += e.p0_float;
                ClassicalRow {
                    t: e.t,
                    p0_exact_float: e.p0_float,
                    stirling: e.stirling,
                    relative_error: (e.stirling - e.p0_float).abs() / e.p0_float,
                    partial_sum: partial,
                    polya_partial: 1.0 - 1.0 / partial,
                }
            })
            .collect()
    };

    let dir = out_dir(config)?;
    match args.format {
        OutputFormat::Csv => {
            let mut s = csv_preamble(config);
            let _ = writeln!(s, "# note: partial_sum includes the t=0 term (p0(0) = 1)");
            s.push_str("t,p0_exact_float,stirling,relative_error,partial_sum,polya_partial\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    r.t,
                    fmt_f(r.p0_exact_float),
                    fmt_f(r.stirling),
                    fmt_f(r.relative_error),
                    fmt_f(r.partial_sum),
                    fmt_f(r.polya_partial)
                );
            }
            write_file(&dir.join("classical.csv"), &s)?;
        }
        OutputFormat::Json => {
            let doc = json_document(config, ClassicalJson { entries: rows.clone() })?;
            write_file(&dir.join("classical.json"), &doc)?;
        }
    }

    if let Some(last) = rows.last() {
        println!(
            "S_{} = {:.6} -> classical polya partial {:.6}",
            last.t, last.partial_sum, last.polya_partial
        );
    }

    // Independent stochastic spot check of the exact arithmetic.
    let t_check = 3;
    let samples = 200_000;
    let (mc, sigma) = classical_monte_carlo_p0(t_check, samples, args.seed);
    let exact = classical_p0_float(t_check);
    println!(
        "monte carlo p0({t_check}) = {mc:.6} +/- {sigma:.6} ({samples} samples, seed {}); exact {exact:.6}",
        args.seed
    );
    Ok(())
}
