//! The `wfti` command-line tool: `stft`, `invert`, `sweep` and `audio`.
//!
//! Each verb reads an optional TOML configuration, validates it fully, then
//! writes its outputs and a `manifest.json` into the output directory.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::audio::{read_wav, roundtrip, write_wav};
use crate::config::{RunConfig, SignalSource};
use crate::error::Error;
use crate::fixtures::{linear_chirp, Fixture};
use crate::grid::{relative_l2, SampledSignal, UniformGrid};
use crate::inversion::{invert, Pathway};
use crate::io::{create, read_signal_file, write_json, write_report, write_signal, write_stft};
use crate::lab::{run_sweep_on, SweepSpec, BOUND_SLACK};
use crate::stft::forward_stft;
use crate::window::{make_window, Window, WindowSpec, ANCHOR_THRESHOLD};

pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;
pub const EXIT_MEDIA: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "wfti", version, about = "Windowed Fourier transform and filter-bank inversion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Seed for the noise fixture (overrides `signal.seed`).
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// kernel, multiplier, modulation or double.
    #[arg(long, global = true, value_name = "NAME")]
    pub pathway: Option<String>,
    /// Divide the reconstruction by 2pi conj(g(x0)).
    #[arg(long, global = true, value_name = "BOOL")]
    pub normalize: Option<bool>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the windowed Fourier transform to stft.csv.
    Stft,
    /// Reconstruct the signal to reconstruction.csv and reconstruction.json.
    Invert,
    /// Measure reconstruction errors over a list of cutoffs to sweep.csv.
    Sweep,
    /// Reconstruct a 16-bit mono WAV file and report the SNR in audio.json.
    Audio {
        /// Input file; a synthetic chirp is written and used when omitted.
        #[arg(long, value_name = "WAV")]
        input: Option<PathBuf>,
        /// Reconstructed file; `roundtrip.wav` in the output directory by default.
        #[arg(long, value_name = "WAV")]
        output: Option<PathBuf>,
        /// Cutoff in rad/s; the full band when omitted.
        #[arg(long)]
        a: Option<f64>,
    },
}

/// A failed command: exit code and a one-line message.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn setup(e: Error) -> Self {
        Self::from_error(e, EXIT_CONFIG)
    }

    fn run(e: Error) -> Self {
        Self::from_error(e, EXIT_IO)
    }

    fn from_error(e: Error, io_code: i32) -> Self {
        let code = match e {
            Error::DegenerateAnchor { .. } => EXIT_DEGENERATE,
            Error::UnsupportedMedia(_) => EXIT_MEDIA,
            Error::NonFinite(_) | Error::LengthMismatch { .. } | Error::Extrapolation { .. } => EXIT_NUMERIC,
            Error::Io(_) => io_code,
            _ => EXIT_CONFIG,
        };
        Self { code, message: e.to_string().replace(['\n', '\r'], " ") }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

#[derive(Debug, Serialize)]
struct GridSummary {
    start: f64,
    end: f64,
    points: usize,
    spacing: f64,
}

impl From<&UniformGrid> for GridSummary {
    fn from(g: &UniformGrid) -> Self {
        Self { start: g.start(), end: g.end(), points: g.len(), spacing: g.spacing() }
    }
}

#[derive(Debug, Serialize)]
struct Tolerances {
    anchor_threshold: f64,
    bound_slack: f64,
}

#[derive(Debug, Serialize)]
struct Manifest {
    command: &'static str,
    version: &'static str,
    signal: String,
    grid: GridSummary,
    window: String,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pathway: Option<String>,
    tolerances: Tolerances,
    outputs: Vec<String>,
}

#[derive(Debug, Serialize)]
struct InvertMetadata {
    pathway: String,
    a1: Option<f64>,
    a2: Option<f64>,
    x0: f64,
    window: String,
    tail_estimate: Option<f64>,
    band_edge_ratio: Option<f64>,
    normalized: bool,
    /// Relative L2 distance to `f` (normalised) or to `2pi conj(g(x0)) f`.
    relative_l2_error: f64,
    warnings: Vec<String>,
}

struct Setup {
    cfg: RunConfig,
    out: PathBuf,
}

impl Setup {
    fn new(cli: &Cli) -> Outcome<Self> {
        let mut cfg = match &cli.config {
            Some(p) => RunConfig::load(p).map_err(Failure::setup)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = cli.seed {
            cfg.signal.seed = Some(seed);
        }
        if let Some(name) = &cli.pathway {
            let p: Pathway = name.parse().map_err(Failure::setup)?;
            cfg.invert.pathway = p;
            cfg.sweep.pathway = p;
        }
        if let Some(n) = cli.normalize {
            cfg.invert.normalize = n;
        }
        let out = cli.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
        Ok(Self { cfg, out })
    }

    fn signal(&self) -> Outcome<(SampledSignal, String)> {
        match self.cfg.signal_source().map_err(Failure::setup)? {
            SignalSource::Fixture(fx) => {
                let grid = self.cfg.grid.grid().map_err(Failure::setup)?;
                Ok((fx.sample(&grid, self.cfg.seed()), fx.name().to_string()))
            }
            SignalSource::File(p) => {
                let s = read_signal_file(&p).map_err(Failure::setup)?;
                Ok((s, p.display().to_string()))
            }
        }
    }

    fn window(&self, spec: &WindowSpec) -> Outcome<Window> {
        make_window(spec).map_err(Failure::setup)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn manifest(&self, m: &Manifest) -> Outcome<()> {
        write_json(create(&self.path("manifest.json")).map_err(Failure::run)?, m).map_err(Failure::run)
    }
}

fn manifest(
    command: &'static str,
    signal: String,
    grid: &UniformGrid,
    g: &Window,
    seed: u64,
    pathway: Option<Pathway>,
    outputs: &[&str],
) -> Manifest {
    Manifest {
        command,
        version: env!("CARGO_PKG_VERSION"),
        signal,
        grid: grid.into(),
        window: g.label(),
        seed,
        pathway: pathway.map(|p| p.name().to_string()),
        tolerances: Tolerances { anchor_threshold: ANCHOR_THRESHOLD, bound_slack: BOUND_SLACK },
        outputs: outputs.iter().map(|s| s.to_string()).collect(),
    }
}

fn cmd_stft(s: &Setup) -> Outcome<String> {
    let (f, label) = s.signal()?;
    let g = s.window(&s.cfg.window)?;
    let (tg, fg) = s.cfg.stft.grids(f.grid()).map_err(Failure::setup)?;
    let m = forward_stft(&f, &g, &tg, &fg);
    write_stft(create(&s.path("stft.csv")).map_err(Failure::run)?, &m).map_err(Failure::run)?;
    s.manifest(&manifest("stft", label, f.grid(), &g, s.cfg.seed(), None, &["stft.csv"]))?;
    Ok(format!("stft: {} x {} samples written to {}", tg.len(), fg.len(), s.path("stft.csv").display()))
}

fn cmd_invert(s: &Setup) -> Outcome<String> {
    let inv = &s.cfg.invert;
    let trunc = inv.truncation().map_err(Failure::setup)?;
    let (f, label) = s.signal()?;
    let g = s.window(&s.cfg.window)?;
    g.require_invertible().map_err(Failure::setup)?;

    let mut rec = invert(&f, &g, trunc, inv.pathway).map_err(Failure::run)?;
    if inv.pathway == Pathway::DoubleIntegral && !inv.normalize {
        rec.diagnostics
            .warnings
            .push("the double-integral pathway reconstructs f itself; normalize = false has no effect".into());
    }
    if inv.normalize {
        rec = rec.normalize(&g).map_err(Failure::run)?;
    }
    let reference = if rec.normalized {
        f.clone()
    } else {
        f.scale(2.0 * PI * g.g_at_anchor().conj()).map_err(Failure::run)?
    };
    let err = relative_l2(&rec.signal, &reference).map_err(Failure::run)?;
    let d = &rec.diagnostics;
    let finite = |v: f64| v.is_finite().then_some(v);
    let meta = InvertMetadata {
        pathway: d.pathway.clone(),
        a1: finite(d.a1),
        a2: finite(d.a2),
        x0: d.x0,
        window: d.window.clone(),
        tail_estimate: d.tail_estimate,
        band_edge_ratio: d.band_edge_ratio,
        normalized: rec.normalized,
        relative_l2_error: err,
        warnings: d.warnings.clone(),
    };
    write_signal(create(&s.path("reconstruction.csv")).map_err(Failure::run)?, &rec.signal).map_err(Failure::run)?;
    write_json(create(&s.path("reconstruction.json")).map_err(Failure::run)?, &meta).map_err(Failure::run)?;
    s.manifest(&manifest(
        "invert",
        label,
        f.grid(),
        &g,
        s.cfg.seed(),
        Some(inv.pathway),
        &["reconstruction.csv", "reconstruction.json"],
    ))?;
    for w in &meta.warnings {
        eprintln!("wfti: warning: {w}");
    }
    Ok(format!("invert: {} pathway, relative L2 error {err:.3e}", meta.pathway))
}

fn cmd_sweep(s: &Setup) -> Outcome<String> {
    let sw = &s.cfg.sweep;
    let p_list = sw.exponents().map_err(Failure::setup)?;
    let (f, label) = s.signal()?;
    // Only used to label the report; the sweep runs on `f`.
    let fixture = match s.cfg.signal_source().map_err(Failure::setup)? {
        SignalSource::Fixture(fx) => fx,
        SignalSource::File(_) => Fixture::Gaussian,
    };
    let spec = SweepSpec {
        fixture,
        window: s.cfg.window,
        grid: *f.grid(),
        p_list,
        a_list: sw.a.clone(),
        pathway: sw.pathway,
        seed: s.cfg.seed(),
        timing: s.cfg.output.timing,
    };
    spec.validate().map_err(Failure::setup)?;
    let g = s.window(&spec.window)?;
    g.require_invertible().map_err(Failure::setup)?;

    let report = run_sweep_on(&f, &label, &spec).map_err(Failure::run)?;
    write_report(create(&s.path("sweep.csv")).map_err(Failure::run)?, &report).map_err(Failure::run)?;
    s.manifest(&manifest("sweep", label, f.grid(), &g, spec.seed, Some(spec.pathway), &["sweep.csv"]))?;
    for w in &report.warnings {
        eprintln!("wfti: warning: {w}");
    }
    let violations = report.bound_violations().len();
    Ok(format!("sweep: {} records, {violations} above the a-priori bound", report.records.len()))
}

/// Sample rate, duration and sweep of the synthetic input used when no WAV
/// file is given.
const DEMO_RATE: u32 = 8000;
const DEMO_CHIRP: (f64, f64, f64) = (1.0, 100.0, 1000.0);
const DEMO_AMPLITUDE: f64 = 0.5;
const DEMO_FADE: f64 = 0.01;

fn cmd_audio(s: &Setup, input: Option<&Path>, output: Option<&Path>, a: Option<f64>) -> Outcome<String> {
    let a = a.or(s.cfg.audio.a);
    if let Some(a) = a {
        if !(a.is_finite() && a > 0.0) {
            return Err(Failure::setup(Error::InvalidParameter(format!("cutoff must be positive, got {a}"))));
        }
    }
    let g = s.window(&s.cfg.audio.window)?;
    g.require_invertible().map_err(Failure::setup)?;
    let input = input.map(Path::to_path_buf).or_else(|| s.cfg.audio.input.clone());
    let output = output.map(Path::to_path_buf).or_else(|| s.cfg.audio.output.clone()).unwrap_or_else(|| s.path("roundtrip.wav"));

    let mut outputs = vec!["audio.json"];
    let (audio, label) = match &input {
        Some(p) => (read_wav(p).map_err(Failure::setup)?, p.display().to_string()),
        None => {
            let (duration, f0, f1) = DEMO_CHIRP;
            let samples = linear_chirp(DEMO_RATE, duration, f0, f1, DEMO_AMPLITUDE, DEMO_FADE);
            let path = s.path("chirp.wav");
            write_wav(&path, DEMO_RATE, &samples).map_err(Failure::run)?;
            outputs.push("chirp.wav");
            // Use the quantised samples so the input file and the report agree.
            (read_wav(&path).map_err(Failure::run)?, format!("chirp {f0}-{f1} Hz"))
        }
    };
    let (out, report) = roundtrip(&audio, &g, a).map_err(Failure::run)?;
    write_wav(&output, audio.sample_rate, &out).map_err(Failure::run)?;
    write_json(create(&s.path("audio.json")).map_err(Failure::run)?, &report).map_err(Failure::run)?;
    let grid = UniformGrid::with_origin(0.0, 1.0 / audio.sample_rate as f64, audio.samples.len()).map_err(Failure::run)?;
    s.manifest(&manifest("audio", label, &grid, &g, s.cfg.seed(), Some(Pathway::Multiplier), &outputs))?;
    for w in &report.warnings {
        eprintln!("wfti: warning: {w}");
    }
    Ok(format!("audio: SNR {} dB, {} clipped samples, written to {}", fmt_db(report.snr_db), report.clipped, output.display()))
}

fn fmt_db(v: f64) -> String {
    if v.is_infinite() {
        "+inf".into()
    } else {
        format!("{v:.2}")
    }
}

/// Runs a parsed command and returns the summary line for stdout.
pub fn run(cli: &Cli) -> Outcome<String> {
    let setup = Setup::new(cli)?;
    match &cli.command {
        Command::Stft => cmd_stft(&setup),
        Command::Invert => cmd_invert(&setup),
        Command::Sweep => cmd_sweep(&setup),
        Command::Audio { input, output, a } => cmd_audio(&setup, input.as_deref(), output.as_deref(), *a),
    }
}
