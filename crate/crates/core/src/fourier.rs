//! Continuous Fourier transform on uniform grids.
//!
//! Convention: `f^(w) = int f(x) e^{-ixw} dx` with no normalisation, and
//! `f(x) = (1/2pi) int f^(w) e^{ixw} dw`. Grids never assume `x_0 = 0`;
//! every transform carries the phase of the grid origin explicitly.
//!
//! Two evaluation routes are provided. The direct route sums the trapezoid
//! rule for every output point and is the reference. The fast route factors
//! the same sum into a chirp-z transform (Bluestein) so that arbitrary
//! uniform output grids are supported in `O((N + M) log(N + M))`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::diag::{clamp_cutoff, Annotated};
use crate::error::{Error, Result};
use crate::grid::{SampledSignal, UniformGrid};
use crate::quad::gl16;

/// Samples of a function of frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSignal(SampledSignal);

impl SpectrumSignal {
    pub fn new(grid: UniformGrid, values: Vec<Complex64>) -> Result<Self> {
        SampledSignal::new(grid, values).map(Self)
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        SampledSignal::from_fn(grid, f).map(Self)
    }

    pub fn grid(&self) -> &UniformGrid {
        self.0.grid()
    }

    pub fn values(&self) -> &[Complex64] {
        self.0.values()
    }

    /// The spectrum viewed as a sampled function, for quadrature and norms.
    pub fn as_signal(&self) -> &SampledSignal {
        &self.0
    }
}

/// How a transform is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FtMethod {
    /// Trapezoid sum per output point.
    Direct,
    /// Chirp-z factorisation of the same sum.
    Fft,
    /// Chirp-z for large transforms, direct otherwise.
    #[default]
    Auto,
}

impl FtMethod {
    fn use_fft(self, n: usize, m: usize) -> bool {
        match self {
            FtMethod::Direct => false,
            FtMethod::Fft => true,
            FtMethod::Auto => n.saturating_mul(m) > 1 << 14,
        }
    }
}

/// `f^(w_j)` for every point of `freq_grid`.
pub fn forward_ft(f: &SampledSignal, freq_grid: &UniformGrid) -> SpectrumSignal {
    forward_ft_with(f, freq_grid, FtMethod::Auto)
}

pub fn forward_ft_with(f: &SampledSignal, freq_grid: &UniformGrid, method: FtMethod) -> SpectrumSignal {
    let grid = f.grid();
    let weighted = trapezoid_weighted(grid, f.values());
    let values = exp_sum(&weighted, grid, freq_grid, -1.0, method);
    SpectrumSignal(SampledSignal::from_parts_unchecked(*freq_grid, values))
}

/// `(1/2pi) int F(w) e^{ixw} dw` for every point of `time_grid`.
pub fn inverse_ft(spectrum: &SpectrumSignal, time_grid: &UniformGrid) -> SampledSignal {
    inverse_ft_with(spectrum, time_grid, FtMethod::Auto)
}

pub fn inverse_ft_with(spectrum: &SpectrumSignal, time_grid: &UniformGrid, method: FtMethod) -> SampledSignal {
    let grid = spectrum.grid();
    let mut weighted = trapezoid_weighted(grid, spectrum.values());
    for v in &mut weighted {
        *v /= 2.0 * PI;
    }
    let values = exp_sum(&weighted, grid, time_grid, 1.0, method);
    SampledSignal::from_parts_unchecked(*time_grid, values)
}

/// Fourier transform of the samples at arbitrary frequencies (direct sums).
pub fn forward_ft_at(f: &SampledSignal, omegas: &[f64]) -> Vec<Complex64> {
    let grid = *f.grid();
    let weighted = trapezoid_weighted(&grid, f.values());
    omegas.par_iter().map(|&w| direct_one(&weighted, &grid, w, -1.0)).collect()
}

pub(crate) fn trapezoid_weighted(grid: &UniformGrid, values: &[Complex64]) -> Vec<Complex64> {
    let dx = grid.spacing();
    values.iter().enumerate().map(|(k, v)| v * (grid.weight(k) * dx)).collect()
}

/// `out_j = sum_k c_k exp(sign * i * x_k * y_j)`.
pub(crate) fn exp_sum(
    coeffs: &[Complex64],
    src: &UniformGrid,
    dst: &UniformGrid,
    sign: f64,
    method: FtMethod,
) -> Vec<Complex64> {
    if method.use_fft(src.len(), dst.len()) {
        exp_sum_czt(coeffs, src, dst, sign)
    } else {
        dst.points().collect::<Vec<_>>().par_iter().map(|&y| direct_one(coeffs, src, y, sign)).collect()
    }
}

const RESEED: usize = 64;

fn direct_one(coeffs: &[Complex64], src: &UniformGrid, y: f64, sign: f64) -> Complex64 {
    let step = Complex64::cis(sign * src.spacing() * y);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut phase = Complex64::new(1.0, 0.0);
    for (k, c) in coeffs.iter().enumerate() {
        if k % RESEED == 0 {
            phase = Complex64::cis(sign * src.point(k) * y);
        }
        acc += c * phase;
        phase *= step;
    }
    acc
}

fn exp_sum_czt(coeffs: &[Complex64], src: &UniformGrid, dst: &UniformGrid, sign: f64) -> Vec<Complex64> {
    let (x0, dx) = (src.start(), src.spacing());
    let (y0, dy) = (dst.start(), dst.spacing());
    // x_k y_j = x0 y_j + k dx y0 + j k dx dy
    let b: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * Complex64::cis(sign * k as f64 * dx * y0))
        .collect();
    let alpha = dx * dy;
    let raw = if sign < 0.0 {
        chirp_z(&b, alpha, dst.len())
    } else {
        let conj: Vec<Complex64> = b.iter().map(|v| v.conj()).collect();
        chirp_z(&conj, alpha, dst.len()).into_iter().map(|v| v.conj()).collect()
    };
    raw.into_iter()
        .enumerate()
        .map(|(j, v)| v * Complex64::cis(sign * x0 * dst.point(j)))
        .collect()
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn plan(len: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(len), p.plan_fft_inverse(len))
    })
}

/// `X_j = sum_k a_k exp(-i alpha j k)` for `j < m` via Bluestein's identity
/// `jk = (j^2 + k^2 - (j-k)^2) / 2`.
pub(crate) fn chirp_z(a: &[Complex64], alpha: f64, m: usize) -> Vec<Complex64> {
    let n = a.len();
    if n == 0 || m == 0 {
        return vec![Complex64::new(0.0, 0.0); m];
    }
    let len = (n + m - 1).next_power_of_two();
    let chirp = |i: i64| Complex64::cis(0.5 * alpha * (i * i) as f64);
    let mut x = vec![Complex64::new(0.0, 0.0); len];
    for (k, v) in a.iter().enumerate() {
        x[k] = v * chirp(k as i64).conj();
    }
    let mut h = vec![Complex64::new(0.0, 0.0); len];
    for (i, v) in h.iter_mut().enumerate().take(m) {
        *v = chirp(i as i64);
    }
    for i in 1..n {
        h[len - i] = chirp(i as i64);
    }
    let (fwd, inv) = plan(len);
    fwd.process(&mut x);
    fwd.process(&mut h);
    for (u, v) in x.iter_mut().zip(&h) {
        *u *= v;
    }
    inv.process(&mut x);
    let scale = 1.0 / len as f64;
    (0..m).map(|j| x[j] * scale * chirp(j as i64).conj()).collect()
}

/// `(M_w f)(x) = e^{-ixw} f(x)`.
pub fn modulate(f: &SampledSignal, omega: f64) -> SampledSignal {
    let grid = *f.grid();
    let values = f
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| v * Complex64::cis(-grid.point(k) * omega))
        .collect();
    SampledSignal::from_parts_unchecked(grid, values)
}

/// Convolution with the Dirichlet kernel `sin(Au) / (pi u)` on a fixed grid,
/// evaluated as a trapezoid sum. The kernel diagonal takes its limit `A/pi`.
/// Convolutions are performed with a precomputed FFT of the kernel so the
/// operator can be applied repeatedly at `O(N log N)` cost.
#[derive(Clone)]
pub struct DirichletOperator {
    grid: UniformGrid,
    cutoff: f64,
    kernel_hat: Vec<Complex64>,
    warnings: Vec<String>,
}

impl std::fmt::Debug for DirichletOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirichletOperator")
            .field("grid", &self.grid)
            .field("cutoff", &self.cutoff)
            .finish()
    }
}

impl DirichletOperator {
    pub fn new(grid: &UniformGrid, cutoff: f64) -> Result<Self> {
        if !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(Error::InvalidParameter(format!("cutoff A must be positive, got {cutoff}")));
        }
        let mut warnings = Vec::new();
        let a = clamp_cutoff(cutoff, grid.band_limit(), "A", &mut warnings);
        let n = grid.len();
        let len = (2 * n - 1).next_power_of_two();
        let dx = grid.spacing();
        let mut kernel = vec![Complex64::new(0.0, 0.0); len];
        for m in 0..n {
            let d = dirichlet_kernel(a, m as f64 * dx);
            kernel[m] = Complex64::new(d, 0.0);
            if m > 0 {
                kernel[len - m] = Complex64::new(d, 0.0);
            }
        }
        let (fwd, _) = plan(len);
        fwd.process(&mut kernel);
        Ok(Self { grid: *grid, cutoff: a, kernel_hat: kernel, warnings })
    }

    /// Effective cutoff after clamping to the grid band.
    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    /// Applies the operator to samples on the operator's grid.
    pub fn apply(&self, values: &[Complex64]) -> Vec<Complex64> {
        let n = self.grid.len();
        assert_eq!(values.len(), n, "samples must live on the operator grid");
        let len = self.kernel_hat.len();
        let dx = self.grid.spacing();
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for (k, v) in values.iter().enumerate() {
            buf[k] = v * (self.grid.weight(k) * dx);
        }
        let (fwd, inv) = plan(len);
        fwd.process(&mut buf);
        for (u, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *u *= k;
        }
        inv.process(&mut buf);
        let scale = 1.0 / len as f64;
        buf.truncate(n);
        for v in &mut buf {
            *v *= scale;
        }
        buf
    }
}

/// `sin(Au) / (pi u)`, with the removable singularity filled in.
#[inline]
pub fn dirichlet_kernel(a: f64, u: f64) -> f64 {
    let z = a * u;
    if z.abs() < 1e-4 {
        a / PI * (1.0 - z * z / 6.0)
    } else {
        z.sin() / (PI * u)
    }
}

/// `(S_A f)(x) = int f(y) sin(A(x-y)) / (pi(x-y)) dy`.
pub fn dirichlet_partial_sum(f: &SampledSignal, cutoff: f64) -> Result<Annotated<SampledSignal>> {
    let op = DirichletOperator::new(f.grid(), cutoff)?;
    let values = op.apply(f.values());
    Ok(Annotated::with_warnings(
        SampledSignal::from_parts_unchecked(*f.grid(), values),
        op.warnings,
    ))
}

/// `S_A f` through the frequency domain: the spectrum is evaluated at
/// Gauss-Legendre nodes on `[-A, A]` and transformed back, which integrates
/// the sharp cutoff exactly.
pub fn dirichlet_partial_sum_spectral(f: &SampledSignal, cutoff: f64) -> Result<Annotated<SampledSignal>> {
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(Error::InvalidParameter(format!("cutoff A must be positive, got {cutoff}")));
    }
    let grid = *f.grid();
    let mut warnings = Vec::new();
    let a = clamp_cutoff(cutoff, grid.band_limit(), "A", &mut warnings);
    let max_panel = (4.0 / grid.length()).min(0.5);
    let panels = ((2.0 * a) / max_panel).ceil() as usize;
    let h = 2.0 * a / panels as f64;
    let mut nodes = Vec::with_capacity(panels * 16);
    let mut weights = Vec::with_capacity(panels * 16);
    for p in 0..panels {
        let mid = -a + h * (p as f64 + 0.5);
        for &(t, w) in gl16() {
            nodes.push(mid + 0.5 * h * t);
            weights.push(0.5 * h * w / (2.0 * PI));
        }
    }
    let spec = forward_ft_at(f, &nodes);
    let coeffs: Vec<Complex64> = spec.iter().zip(&weights).map(|(s, w)| s * w).collect();
    let values: Vec<Complex64> = grid
        .points()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&x| coeffs.iter().zip(&nodes).map(|(c, &w)| c * Complex64::cis(x * w)).sum())
        .collect();
    Ok(Annotated::with_warnings(SampledSignal::from_parts_unchecked(grid, values), warnings))
}
