//! Uniform grids on a truncated real line, sampled signals, trapezoidal
//! quadrature and discrete Lp norms.
//!
//! The real line is represented by a closed interval `[start, end]` sampled
//! at `len` equally spaced points. Integrals are trapezoidal sums with half
//! weights at both ends, and Lp norms use the same weights, so that
//! `lp_norm(s, 2)^2 == quadrature(|s|^2)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `len` equally spaced points from `start` to `end` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct UniformGrid {
    start: f64,
    end: f64,
    len: usize,
}

/// Default half-width of the truncated real line.
pub const DEFAULT_HALF_WIDTH: f64 = 16.0;
/// Default number of grid points.
pub const DEFAULT_POINTS: usize = 2048;

impl UniformGrid {
    /// The symmetric grid on `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, len: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half-width must be positive and finite, got {half_width}"
            )));
        }
        Self::new(-half_width, half_width, len)
    }

    /// Grid with explicit endpoints.
    pub fn new(start: f64, end: f64, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {len}")));
        }
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(Error::InvalidGrid(format!(
                "endpoints must be finite with start < end, got [{start}, {end}]"
            )));
        }
        Ok(Self { start, end, len })
    }

    /// Grid starting at `origin` with the given spacing, as used for audio
    /// where the first sample sits at t = 0.
    pub fn with_origin(origin: f64, spacing: f64, len: usize) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
        }
        if len < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {len}")));
        }
        Self::new(origin, origin + spacing * (len - 1) as f64, len)
    }

    /// The default `[-16, 16]` grid with 2048 points.
    pub fn default_time() -> Self {
        Self::symmetric(DEFAULT_HALF_WIDTH, DEFAULT_POINTS).expect("default grid is valid")
    }

    /// The frequency grid matched to a time grid: half-width `pi / dx`
    /// (the representable band) and `2N - 1` points, so that the frequency
    /// spacing is `pi / (end - start)` and the inverse transform's periodic
    /// images sit a full domain length away from the signal.
    pub fn spectral_for(time: &UniformGrid) -> Self {
        let band = time.band_limit();
        Self::symmetric(band, 2 * time.len - 1).expect("spectral grid is valid")
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn spacing(&self) -> f64 {
        (self.end - self.start) / (self.len - 1) as f64
    }

    /// Half the domain length.
    pub fn half_width(&self) -> f64 {
        0.5 * (self.end - self.start)
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.start + self.end)
    }

    /// `pi / dx`, the highest angular frequency the grid can represent.
    pub fn band_limit(&self) -> f64 {
        std::f64::consts::PI / self.spacing()
    }

    /// The k-th grid point. Computed as a convex combination of the
    /// endpoints so that both endpoints are hit exactly and symmetric grids
    /// are exactly symmetric.
    #[inline]
    pub fn point(&self, k: usize) -> f64 {
        let n1 = (self.len - 1) as f64;
        let k = k as f64;
        (self.start * (n1 - k) + self.end * k) / n1
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len).map(move |k| self.point(k))
    }

    /// Trapezoidal weight (without the spacing factor).
    #[inline]
    pub fn weight(&self, k: usize) -> f64 {
        if k == 0 || k + 1 == self.len {
            0.5
        } else {
            1.0
        }
    }

    /// Whether `other` lies inside this grid's domain, allowing a rounding slack.
    pub fn contains(&self, other: &UniformGrid) -> bool {
        let slack = 1e-12 * (1.0 + self.start.abs().max(self.end.abs()));
        other.start >= self.start - slack && other.end <= self.end + slack
    }

    /// Index range `[lo, hi)` of grid points inside `[a, b]`.
    pub fn index_range(&self, a: f64, b: f64) -> (usize, usize) {
        let dx = self.spacing();
        let lo = ((a - self.start) / dx).ceil().max(0.0);
        let hi = ((b - self.start) / dx).floor() + 1.0;
        let lo = (lo as usize).min(self.len);
        let hi = if hi <= 0.0 { 0 } else { (hi as usize).min(self.len) };
        (lo, hi.max(lo))
    }
}

/// Complex samples of a function on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    grid: UniformGrid,
    values: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(grid: UniformGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { values: values.len(), points: grid.len() });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.points().map(f).collect();
        Self::new(grid, values)
    }

    pub fn from_real(grid: UniformGrid, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Pointwise map, keeping the grid.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Result<Self> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| f(self.grid.point(k), v))
            .collect();
        Self::new(self.grid, values)
    }

    pub fn scale(&self, c: Complex64) -> Result<Self> {
        self.map(|_, v| v * c)
    }

    /// `a * self + b * other`; both signals must share a grid.
    pub fn combine(&self, a: Complex64, other: &SampledSignal, b: Complex64) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&u, &v)| a * u + b * v).collect();
        Self::new(self.grid, values)
    }

    pub fn sub(&self, other: &SampledSignal) -> Result<Self> {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub(crate) fn check_same_grid(&self, other: &SampledSignal) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("signals live on different grids".into()));
        }
        Ok(())
    }

    pub(crate) fn from_parts_unchecked(grid: UniformGrid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }
}

/// An Lp exponent. Finite exponents are restricted to `(1, inf)` unless
/// built with [`LpExponent::extended`], which also admits `p = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LpExponent {
    Finite(f64),
    Infinity,
}

impl LpExponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else if p.is_finite() && p > 1.0 {
            Ok(Self::Finite(p))
        } else {
            Err(Error::InvalidExponent(p))
        }
    }

    /// Admits `p = 1`, which lies outside the range where reconstruction
    /// converges in norm.
    pub fn extended(p: f64) -> Result<Self> {
        if p == 1.0 {
            Ok(Self::Finite(1.0))
        } else {
            Self::new(p)
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }

    /// The Hölder conjugate `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(&self) -> Self {
        match *self {
            Self::Infinity => Self::Finite(1.0),
            Self::Finite(1.0) => Self::Infinity,
            Self::Finite(p) => Self::Finite(p / (p - 1.0)),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }
}

impl std::fmt::Display for LpExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

impl serde::Serialize for LpExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for LpExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "Inf" => Ok(Self::Infinity),
            t => {
                let p: f64 = t.parse().map_err(|_| Error::Parse(format!("bad exponent `{t}`")))?;
                Self::new(p)
            }
        }
    }
}

/// Relative L2 distance `||a - b|| / ||b||`, or the absolute distance when
/// `b = 0`.
pub fn relative_l2(a: &SampledSignal, b: &SampledSignal) -> Result<f64> {
    let p = LpExponent::Finite(2.0);
    let d = lp_norm(&a.sub(b)?, p);
    let n = lp_norm(b, p);
    Ok(if n == 0.0 { d } else { d / n })
}

/// Trapezoidal integral of the samples over the grid domain.
pub fn quadrature(s: &SampledSignal) -> Result<Complex64> {
    if let Some(i) = s.values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::NonFinite(i));
    }
    Ok(weighted_sum(&s.grid, &s.values))
}

pub(crate) fn weighted_sum(grid: &UniformGrid, values: &[Complex64]) -> Complex64 {
    let n = values.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, v) in values.iter().enumerate() {
        if k == 0 || k + 1 == n {
            acc += v * 0.5;
        } else {
            acc += v;
        }
    }
    acc * grid.spacing()
}

/// Discrete Lp norm with trapezoidal weights; `p = inf` is the max modulus.
pub fn lp_norm(s: &SampledSignal, p: LpExponent) -> f64 {
    lp_norm_of(&s.grid, &s.values, p)
}

pub(crate) fn lp_norm_of(grid: &UniformGrid, values: &[Complex64], p: LpExponent) -> f64 {
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    match p {
        LpExponent::Infinity => peak,
        LpExponent::Finite(p) => {
            if peak == 0.0 {
                return 0.0;
            }
            let n = values.len();
            let mut acc = 0.0;
            for (k, v) in values.iter().enumerate() {
                let w = if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
                acc += w * (v.norm() / peak).powf(p);
            }
            peak * (acc * grid.spacing()).powf(1.0 / p)
        }
    }
}

/// Interpolation scheme used by [`resample_to`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// Four-point Lagrange interpolation, one-sided at the domain ends.
    #[default]
    Cubic,
    /// Whittaker-Shannon sinc interpolation over all samples.
    BandLimited,
}

/// Interpolates `s` onto `target`, which must lie within the source domain.
pub fn resample_to(s: &SampledSignal, target: &UniformGrid, method: Interpolation) -> Result<SampledSignal> {
    let src = s.grid;
    if *target == src {
        return Ok(s.clone());
    }
    if !src.contains(target) {
        return Err(Error::Extrapolation {
            target_lo: target.start(),
            target_hi: target.end(),
            source_lo: src.start(),
            source_hi: src.end(),
        });
    }
    let values = match method {
        Interpolation::Cubic => target.points().map(|x| cubic_at(s, x)).collect(),
        Interpolation::BandLimited => target.points().map(|x| sinc_at(s, x)).collect(),
    };
    SampledSignal::new(*target, values)
}

fn cubic_at(s: &SampledSignal, x: f64) -> Complex64 {
    let grid = s.grid;
    let n = grid.len();
    let t = ((x - grid.start()) / grid.spacing()).clamp(0.0, (n - 1) as f64);
    if n < 4 {
        let j = (t.floor() as usize).min(n - 2);
        let u = t - j as f64;
        return s.values[j] * (1.0 - u) + s.values[j + 1] * u;
    }
    // Stencil j0..j0+3, centred on the interval containing t when possible.
    let j = (t.floor() as usize).min(n - 2);
    let j0 = j.saturating_sub(1).min(n - 4);
    let u = t - j0 as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        let mut l = 1.0;
        for m in 0..4 {
            if m != i {
                l *= (u - m as f64) / (i as f64 - m as f64);
            }
        }
        acc += s.values[j0 + i] * l;
    }
    acc
}

fn sinc_at(s: &SampledSignal, x: f64) -> Complex64 {
    let grid = s.grid;
    let t = (x - grid.start()) / grid.spacing();
    s.values
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let z = std::f64::consts::PI * (t - k as f64);
            let w = if z.abs() < 1e-12 { 1.0 } else { z.sin() / z };
            v * w
        })
        .sum()
}
