//! Test signals used by the sweeps, the CLI and the test suites.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::plan;
use crate::grid::{lp_norm, LpExponent, SampledSignal, UniformGrid};

/// Seed used whenever none is supplied.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Radius of the bump fixture's support.
pub const BUMP_RADIUS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fixture {
    /// `e^{-x^2/2}`.
    Gaussian,
    /// `exp(1 - 1/(1 - (x/R)^2))` on `|x| < R`, zero outside.
    Bump,
    /// `e^{-x^2/8} cos(3x + x^2/2)`: a linear chirp under a Gaussian envelope.
    Chirp,
    Zero,
    /// Seeded white noise low-passed to a quarter of the grid band and
    /// tapered to vanish at the domain ends; unit L2 norm.
    Noise,
}

impl Fixture {
    pub const ALL: [Fixture; 5] = [Fixture::Gaussian, Fixture::Bump, Fixture::Chirp, Fixture::Zero, Fixture::Noise];

    pub fn name(&self) -> &'static str {
        match self {
            Fixture::Gaussian => "gaussian",
            Fixture::Bump => "bump",
            Fixture::Chirp => "chirp",
            Fixture::Zero => "zero",
            Fixture::Noise => "noise",
        }
    }

    pub fn sample(&self, grid: &UniformGrid, seed: u64) -> SampledSignal {
        let real = |f: fn(f64) -> f64| {
            SampledSignal::from_fn(*grid, |x| Complex64::new(f(x), 0.0)).expect("fixture values are finite")
        };
        match self {
            Fixture::Gaussian => real(|x| (-0.5 * x * x).exp()),
            Fixture::Bump => real(bump),
            Fixture::Chirp => real(|x| (-x * x / 8.0).exp() * (3.0 * x + 0.5 * x * x).cos()),
            Fixture::Zero => SampledSignal::zeros(*grid),
            Fixture::Noise => band_limited_noise(grid, 0.25 * grid.band_limit(), seed),
        }
    }
}

impl std::fmt::Display for Fixture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fixture::ALL
            .into_iter()
            .find(|f| f.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownFixture(s.to_string()))
    }
}

pub fn bump(x: f64) -> f64 {
    let s = x / BUMP_RADIUS;
    if s.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

/// Real Gaussian white noise, cut off above `band` (rad per unit) with a
/// discrete Fourier mask, tapered by `exp(-((x - c)/(L/2))^8)` and scaled
/// to unit L2 norm. Identical seeds give identical samples.
pub fn band_limited_noise(grid: &UniformGrid, band: f64, seed: u64) -> SampledSignal {
    let n = grid.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(StandardNormal.sample(&mut rng), 0.0))
        .collect();
    let (fwd, inv) = plan(n);
    fwd.process(&mut buf);
    let dk = 2.0 * PI / (n as f64 * grid.spacing());
    for (k, v) in buf.iter_mut().enumerate() {
        let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
        if (kk * dk).abs() > band {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    inv.process(&mut buf);
    let half = 0.5 * grid.length();
    let c = grid.center();
    let values: Vec<Complex64> = buf
        .iter()
        .zip(grid.points())
        .map(|(v, x)| Complex64::new(v.re * (-((x - c) / (0.5 * half)).powi(8)).exp(), 0.0))
        .collect();
    let s = SampledSignal::new(*grid, values).expect("noise is finite");
    let norm = lp_norm(&s, LpExponent::Finite(2.0));
    if norm == 0.0 {
        s
    } else {
        s.scale(Complex64::new(1.0 / norm, 0.0)).expect("finite scale")
    }
}

/// Linear chirp `amplitude * sin(2pi(f0 t + (f1 - f0) t^2 / (2T)))` sampled at
/// `sample_rate` for `duration` seconds, with raised-cosine fades of `fade`
/// seconds at both ends so the zero-extended signal has no jumps.
pub fn linear_chirp(sample_rate: u32, duration: f64, f0: f64, f1: f64, amplitude: f64, fade: f64) -> Vec<f64> {
    let n = (duration * sample_rate as f64).round() as usize;
    let rate = (f1 - f0) / duration;
    let dt = 1.0 / sample_rate as f64;
    let end = (n.max(1) - 1) as f64 * dt;
    (0..n)
        .map(|k| {
            let t = k as f64 * dt;
            let edge = t.min(end - t);
            let taper = if fade > 0.0 && edge < fade { 0.5 * (1.0 - (PI * edge / fade).cos()) } else { 1.0 };
            taper * amplitude * (2.0 * PI * (f0 * t + 0.5 * rate * t * t)).sin()
        })
        .collect()
}
