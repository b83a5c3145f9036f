//! TOML run configuration for the command-line tool.
//!
//! Every section is optional. Unknown keys are rejected. Relative paths are
//! resolved against the directory holding the configuration file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures::{Fixture, DEFAULT_SEED};
use crate::grid::{LpExponent, UniformGrid, DEFAULT_HALF_WIDTH, DEFAULT_POINTS};
use crate::inversion::{Pathway, TruncationPair};
use crate::window::{WindowKind, WindowSpec};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub window: WindowSpec,
    pub signal: SignalConfig,
    pub invert: InvertConfig,
    pub sweep: SweepConfig,
    pub stft: StftConfig,
    pub audio: AudioConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub half_width: f64,
    pub points: usize,
    pub center: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { half_width: DEFAULT_HALF_WIDTH, points: DEFAULT_POINTS, center: 0.0 }
    }
}

impl GridConfig {
    pub fn grid(&self) -> Result<UniformGrid> {
        if !(self.center.is_finite() && self.half_width.is_finite() && self.half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half_width must be positive and center finite, got {} and {}",
                self.half_width, self.center
            )));
        }
        UniformGrid::new(self.center - self.half_width, self.center + self.half_width, self.points)
    }
}

/// Either a catalogue fixture sampled on `[grid]` or a `x,re,im` CSV file.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SignalConfig {
    pub fixture: Option<String>,
    pub input: Option<PathBuf>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InvertConfig {
    pub pathway: Pathway,
    pub a: Option<f64>,
    pub a1: Option<f64>,
    pub a2: Option<f64>,
    pub normalize: bool,
}

pub const DEFAULT_CUTOFF: f64 = 8.0;

impl Default for InvertConfig {
    fn default() -> Self {
        Self { pathway: Pathway::Multiplier, a: None, a1: None, a2: None, normalize: true }
    }
}

impl InvertConfig {
    pub fn truncation(&self) -> Result<TruncationPair> {
        match (self.a, self.a1, self.a2) {
            (None, None, None) => TruncationPair::symmetric(DEFAULT_CUTOFF),
            (Some(a), None, None) => TruncationPair::symmetric(a),
            (None, Some(a1), Some(a2)) => TruncationPair::new(a1, a2),
            _ => Err(Error::InvalidParameter("give either `a` or both `a1` and `a2`".into())),
        }
    }
}

/// An exponent written as a number or as the string `"inf"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ExponentValue {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub a: Vec<f64>,
    pub p: Vec<ExponentValue>,
    /// Admit `p = 1`.
    pub extended: bool,
    pub pathway: Pathway,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            a: vec![1.0, 2.0, 4.0, 8.0, 16.0],
            p: vec![ExponentValue::Number(2.0)],
            extended: false,
            pathway: Pathway::Multiplier,
        }
    }
}

impl SweepConfig {
    pub fn exponents(&self) -> Result<Vec<LpExponent>> {
        self.p
            .iter()
            .map(|v| {
                let p = match v {
                    ExponentValue::Number(p) => *p,
                    ExponentValue::Text(t) => match t.trim().to_ascii_lowercase().as_str() {
                        "inf" | "infinity" => f64::INFINITY,
                        other => other.parse().map_err(|_| Error::Parse(format!("bad exponent `{t}`")))?,
                    },
                };
                if self.extended {
                    LpExponent::extended(p)
                } else {
                    LpExponent::new(p)
                }
            })
            .collect()
    }
}

/// STFT sampling. The time grid defaults to `time_points` points over the
/// signal domain; the frequency grid to `[-freq_half_width, freq_half_width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StftConfig {
    pub time_start: Option<f64>,
    pub time_end: Option<f64>,
    pub time_points: usize,
    pub freq_half_width: f64,
    pub freq_points: usize,
}

impl Default for StftConfig {
    fn default() -> Self {
        Self { time_start: None, time_end: None, time_points: 129, freq_half_width: 16.0, freq_points: 129 }
    }
}

impl StftConfig {
    pub fn grids(&self, signal: &UniformGrid) -> Result<(UniformGrid, UniformGrid)> {
        let time = UniformGrid::new(
            self.time_start.unwrap_or(signal.start()),
            self.time_end.unwrap_or(signal.end()),
            self.time_points,
        )?;
        let freq = UniformGrid::symmetric(self.freq_half_width, self.freq_points)?;
        Ok((time, freq))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AudioConfig {
    /// 16-bit mono WAV; a synthetic chirp is used when absent.
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    /// Cutoff in rad/s; the full band when absent.
    pub a: Option<f64>,
    pub window: WindowSpec,
}

impl Default for AudioConfig {
    fn default() -> Self {
        Self { input: None, output: None, a: None, window: WindowSpec::new(WindowKind::Hann, 0.01, 0.0) }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Record wall-clock timings in sweep reports (not byte-reproducible).
    pub timing: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), timing: false }
    }
}

/// Where the analysed signal comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalSource {
    Fixture(Fixture),
    File(PathBuf),
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))
    }

    /// Reads a configuration file and resolves its relative paths.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })?;
        cfg.resolve_paths(path.parent().unwrap_or(Path::new("")));
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        self.signal.input.as_mut().map(fix);
        self.audio.input.as_mut().map(fix);
        self.audio.output.as_mut().map(fix);
        fix(&mut self.output.dir);
    }

    pub fn seed(&self) -> u64 {
        self.signal.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn signal_source(&self) -> Result<SignalSource> {
        match (&self.signal.fixture, &self.signal.input) {
            (Some(_), Some(_)) => Err(Error::InvalidParameter("give either signal.fixture or signal.input".into())),
            (None, Some(p)) => Ok(SignalSource::File(p.clone())),
            (Some(name), None) => Ok(SignalSource::Fixture(name.parse()?)),
            (None, None) => Ok(SignalSource::Fixture(Fixture::Gaussian)),
        }
    }
}
