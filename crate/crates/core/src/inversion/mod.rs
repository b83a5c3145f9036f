//! The truncated inversion operator
//! `(T_{A1,A2} f)(x) = int_{-A1}^{A2} (F_g f)(x - x0, w) e^{ixw} dw`
//! and its equivalent realisations.
//!
//! * [`invert_kernel`]: integration against the closed-form kernel
//!   `K_{A1,A2}(x, y)`.
//! * [`invert_multiplier`]: the Fourier multiplier `h_{A1,A2}`.
//! * [`invert_modulation`]: superposition of modulated Dirichlet partial sums
//!   (symmetric truncation only).
//! * [`invert_double_integral`]: the classical double-integral inversion of
//!   an STFT matrix.
//!
//! `T_{A1,A2} f -> 2pi conj(g(x0)) f` as `A1, A2 -> inf`; the normalised
//! reconstruction divides that factor out.

mod double;
mod kernel;
mod modulation;
mod multiplier;
mod tail;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diag::{clamp_cutoff, Diagnostics};
use crate::error::{Error, Result};
use crate::grid::SampledSignal;
use crate::window::Window;

pub use double::invert_double_integral;
pub use kernel::{invert_kernel, kernel_eval};
pub use modulation::{default_omega_grid, invert_modulation, invert_modulation_on};
pub use multiplier::{invert_multiplier, multiplier_eval, MultiplierProfile};
pub use tail::{band_edge_ratio, spectral_l1, tail_bound, TailBound};

/// The frequency window `[-A1, A2]` of the truncated operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPair {
    a1: f64,
    a2: f64,
}

impl TruncationPair {
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        for (name, a) in [("A1", a1), ("A2", a2)] {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {a}")));
            }
        }
        Ok(Self { a1, a2 })
    }

    pub fn symmetric(a: f64) -> Result<Self> {
        Self::new(a, a)
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn is_symmetric(&self) -> bool {
        self.a1 == self.a2
    }

    /// Both cutoffs clamped to `band`, with a warning for each one reduced.
    pub fn clamped(&self, band: f64, warnings: &mut Vec<String>) -> Self {
        Self {
            a1: clamp_cutoff(self.a1, band, "A1", warnings),
            a2: clamp_cutoff(self.a2, band, "A2", warnings),
        }
    }
}

impl fmt::Display for TruncationPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[-{}, {}]", self.a1, self.a2)
    }
}

/// Numerical realisation of the inversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pathway {
    Kernel,
    #[default]
    Multiplier,
    Modulation,
    #[serde(rename = "double")]
    DoubleIntegral,
}

impl Pathway {
    pub const ALL: [Pathway; 4] = [Pathway::Kernel, Pathway::Multiplier, Pathway::Modulation, Pathway::DoubleIntegral];

    pub fn name(&self) -> &'static str {
        match self {
            Pathway::Kernel => "kernel",
            Pathway::Multiplier => "multiplier",
            Pathway::Modulation => "modulation",
            Pathway::DoubleIntegral => "double",
        }
    }
}

impl fmt::Display for Pathway {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Pathway {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kernel" => Ok(Pathway::Kernel),
            "multiplier" => Ok(Pathway::Multiplier),
            "modulation" => Ok(Pathway::Modulation),
            "double" | "double-integral" | "double_integral" => Ok(Pathway::DoubleIntegral),
            other => Err(Error::UnsupportedPathway(other.to_string())),
        }
    }
}

/// A reconstructed signal and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub signal: SampledSignal,
    pub diagnostics: Diagnostics,
    /// True when the `2pi conj(g(x0))` factor has been divided out, so the
    /// signal approximates `f` rather than `T f`.
    pub normalized: bool,
}

impl Reconstruction {
    /// Divides out `2pi conj(g(x0))` (and the tail estimate with it) unless
    /// already done.
    pub fn normalize(mut self, g: &Window) -> Result<Self> {
        if self.normalized {
            return Ok(self);
        }
        g.require_invertible()?;
        let factor = 2.0 * PI * g.g_at_anchor().conj();
        self.signal = self.signal.scale(factor.inv())?;
        self.diagnostics.tail_estimate = self.diagnostics.tail_estimate.map(|t| t / factor.norm());
        self.normalized = true;
        Ok(self)
    }
}

pub(crate) fn diagnostics(
    pathway: Pathway,
    trunc: Option<TruncationPair>,
    g: &Window,
    tail: Option<f64>,
    edge: Option<f64>,
    warnings: Vec<String>,
) -> Diagnostics {
    Diagnostics {
        pathway: pathway.name().to_string(),
        a1: trunc.map_or(f64::NAN, |t| t.a1()),
        a2: trunc.map_or(f64::NAN, |t| t.a2()),
        x0: g.anchor(),
        window: g.label(),
        tail_estimate: tail,
        band_edge_ratio: edge,
        warnings,
    }
}

/// `T_{A1,A2} f` through the chosen pathway.
///
/// The double-integral pathway ignores the truncation: it computes the STFT
/// on the default grids and returns the already-normalised classical
/// reconstruction.
pub fn invert(f: &SampledSignal, g: &Window, trunc: TruncationPair, pathway: Pathway) -> Result<Reconstruction> {
    match pathway {
        Pathway::Kernel => invert_kernel(f, g, trunc),
        Pathway::Multiplier => invert_multiplier(f, g, trunc),
        Pathway::Modulation => {
            if !trunc.is_symmetric() {
                return Err(Error::UnsupportedPathway(format!(
                    "modulation requires a symmetric truncation, got {trunc}"
                )));
            }
            invert_modulation(f, g, trunc.a1())
        }
        Pathway::DoubleIntegral => {
            let (tg, fg) = crate::stft::default_stft_grids(f.grid());
            let s = crate::stft::forward_stft(f, g, &tg, &fg);
            invert_double_integral(&s, g)
        }
    }
}

/// Normalised reconstruction at the largest cutoff the grid represents,
/// `A = pi/dx`, through the multiplier pathway.
pub fn filter_bank_reconstruct(f: &SampledSignal, g: &Window) -> Result<Reconstruction> {
    filter_bank_reconstruct_with(f, g, Pathway::Multiplier)
}

pub fn filter_bank_reconstruct_with(f: &SampledSignal, g: &Window, pathway: Pathway) -> Result<Reconstruction> {
    g.require_invertible()?;
    let band = f.grid().band_limit();
    invert(f, g, TruncationPair::symmetric(band)?, pathway)?.normalize(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_validation_and_clamp() {
        assert!(TruncationPair::new(0.0, 1.0).is_err());
        assert!(TruncationPair::new(1.0, f64::INFINITY).is_err());
        let mut w = Vec::new();
        let t = TruncationPair::new(3.0, 500.0).unwrap().clamped(100.0, &mut w);
        assert_eq!((t.a1(), t.a2()), (3.0, 100.0));
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn pathway_names_round_trip() {
        for p in Pathway::ALL {
            assert_eq!(p.name().parse::<Pathway>().unwrap(), p);
        }
        assert!("fast".parse::<Pathway>().is_err());
    }
}
