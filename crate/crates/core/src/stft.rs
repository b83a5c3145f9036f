//! The windowed (short-time) Fourier transform
//! `(F_g f)(t, w) = int f(x) conj(g(x - t)) e^{-ixw} dx`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{exp_sum, forward_ft, FtMethod};
use crate::grid::{SampledSignal, UniformGrid};
use crate::quad::{gl16, lagrange};
use crate::window::Window;

/// Samples of `F_g f` on a time-frequency grid, stored time-major.
#[derive(Debug, Clone, PartialEq)]
pub struct StftMatrix {
    time_grid: UniformGrid,
    freq_grid: UniformGrid,
    values: Vec<Complex64>,
}

impl StftMatrix {
    pub fn new(time_grid: UniformGrid, freq_grid: UniformGrid, values: Vec<Complex64>) -> Result<Self> {
        let expected = time_grid.len() * freq_grid.len();
        if values.len() != expected {
            return Err(Error::LengthMismatch { values: values.len(), points: expected });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { time_grid, freq_grid, values })
    }

    pub fn time_grid(&self) -> &UniformGrid {
        &self.time_grid
    }

    pub fn freq_grid(&self) -> &UniformGrid {
        &self.freq_grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.freq_grid.len() + j]
    }

    /// All frequencies for the i-th time.
    pub fn row(&self, i: usize) -> &[Complex64] {
        let m = self.freq_grid.len();
        &self.values[i * m..(i + 1) * m]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }
}

/// Default grids: the signal grid in time and `N` points across the
/// representable band `[-pi/dx, pi/dx]` in frequency.
pub fn default_stft_grids(signal: &UniformGrid) -> (UniformGrid, UniformGrid) {
    let band = signal.band_limit();
    let freq = UniformGrid::symmetric(band, signal.len()).expect("band grid is valid");
    (*signal, freq)
}

pub fn forward_stft(f: &SampledSignal, g: &Window, time_grid: &UniformGrid, freq_grid: &UniformGrid) -> StftMatrix {
    forward_stft_with(f, g, time_grid, freq_grid, FtMethod::Auto)
}

pub fn forward_stft_with(
    f: &SampledSignal,
    g: &Window,
    time_grid: &UniformGrid,
    freq_grid: &UniformGrid,
    method: FtMethod,
) -> StftMatrix {
    let m = freq_grid.len();
    let rows: Vec<Vec<Complex64>> = (0..time_grid.len())
        .into_par_iter()
        .map(|i| stft_row(f, g, time_grid.point(i), freq_grid, method))
        .collect();
    let mut values = Vec::with_capacity(time_grid.len() * m);
    for r in rows {
        values.extend(r);
    }
    StftMatrix { time_grid: *time_grid, freq_grid: *freq_grid, values }
}

/// Window-weighted samples `w_k dx f(x_k) conj(g(x_k - t))` over the part of
/// the grid where the shifted window is non-zero, with the sub-grid they
/// live on.
fn windowed_coeffs(f: &SampledSignal, g: &Window, t: f64) -> Option<(UniformGrid, Vec<Complex64>)> {
    let grid = f.grid();
    let (lo, hi) = g.effective_support();
    let (k0, k1) = grid.index_range(t + lo, t + hi);
    if k1 <= k0 {
        return None;
    }
    let dx = grid.spacing();
    let coeffs: Vec<Complex64> = (k0..k1)
        .map(|k| f.values()[k] * g.g(grid.point(k) - t).conj() * (grid.weight(k) * dx))
        .collect();
    let sub = if k1 - k0 >= 2 {
        UniformGrid::new(grid.point(k0), grid.point(k1 - 1), k1 - k0).ok()?
    } else {
        // A single point: give it a nominal two-point grid and a zero partner.
        let x = grid.point(k0);
        return Some((UniformGrid::new(x, x + dx, 2).ok()?, vec![coeffs[0], Complex64::new(0.0, 0.0)]));
    };
    Some((sub, coeffs))
}

fn stft_row(f: &SampledSignal, g: &Window, t: f64, freq: &UniformGrid, method: FtMethod) -> Vec<Complex64> {
    match windowed_coeffs(f, g, t) {
        None => vec![Complex64::new(0.0, 0.0); freq.len()],
        Some((sub, coeffs)) => exp_sum(&coeffs, &sub, freq, -1.0, method),
    }
}

/// `(F_g f)(t, w)` at a single point.
///
/// For windows with kinks the trapezoid rule is only second-order
/// accurate, so `f` is replaced by its six-point Lagrange interpolant and
/// the product is integrated by Gauss-Legendre on panels split at the grid
/// nodes and the shifted breakpoints of `g`. Smooth windows use the
/// trapezoid sum, which is spectrally accurate for them.
pub fn stft_at(f: &SampledSignal, g: &Window, t: f64, omega: f64) -> Complex64 {
    let grid = f.grid();
    if g.breakpoints().is_empty() || grid.len() < 6 {
        return match windowed_coeffs(f, g, t) {
            None => Complex64::new(0.0, 0.0),
            Some((sub, coeffs)) => coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * Complex64::cis(-sub.point(k) * omega))
                .sum(),
        };
    }
    let (lo, hi) = g.effective_support();
    let (a, b) = ((t + lo).max(grid.start()), (t + hi).min(grid.end()));
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    let n = grid.len();
    let dx = grid.spacing();
    let fv = f.values();
    let kinks: Vec<f64> = g.breakpoints().iter().map(|k| k + t).filter(|&x| x > a && x < b).collect();
    let k_a = (((a - grid.start()) / dx).floor().max(0.0) as usize).min(n - 2);
    let k_b = (((b - grid.start()) / dx).ceil().max(0.0) as usize).min(n - 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in k_a..k_b {
        let (xa, xb) = (grid.point(k).max(a), grid.point(k + 1).min(b));
        if xb <= xa {
            continue;
        }
        // Centre node of the stencil, shifted inwards near the domain ends.
        let c = k.clamp(2, n - 4);
        let xc = grid.point(c);
        let mut cuts = vec![xa];
        cuts.extend(kinks.iter().copied().filter(|&x| x > xa && x < xb));
        cuts.push(xb);
        for w in cuts.windows(2) {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            for &(node, weight) in gl16() {
                let x = mid + half * node;
                let s = (x - xc) / dx;
                let fx: Complex64 = (-2..=3).map(|i| fv[(c as i64 + i as i64) as usize] * lagrange(i, s)).sum();
                acc += fx * g.g(x - t).conj() * Complex64::cis(-x * omega) * (weight * half);
            }
        }
    }
    acc
}

/// Evaluates both sides of
/// `(F_g f)(x, w) = (1/2pi) (F_{g^} f^)(w, -x) e^{-ixw}`
/// at each sample point and returns the largest discrepancy. The left side
/// is a time-domain quadrature; the right side integrates `f^` against
/// `conj(g^)` on the matched frequency grid.
pub fn check_fourier_domain_identity(f: &SampledSignal, g: &Window, points: &[(f64, f64)]) -> f64 {
    let spectral = UniformGrid::spectral_for(f.grid());
    let f_hat = forward_ft(f, &spectral);
    let dw = spectral.spacing();
    let weighted: Vec<Complex64> = f_hat
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| v * (spectral.weight(j) * dw))
        .collect();
    points
        .par_iter()
        .map(|&(x, w)| {
            let lhs = stft_at(f, g, x, w);
            let rhs: Complex64 = weighted
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let xi = spectral.point(j);
                    v * g.g_hat(xi - w).conj() * Complex64::cis(xi * x)
                })
                .sum::<Complex64>()
                * Complex64::cis(-x * w)
                / (2.0 * PI);
            (lhs - rhs).norm()
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::Window;

    fn gaussian(grid: UniformGrid) -> SampledSignal {
        SampledSignal::from_fn(grid, |x| Complex64::new((-x * x / 2.0).exp(), 0.0)).unwrap()
    }

    #[test]
    fn zero_signal_gives_zero_matrix() {
        let t = UniformGrid::symmetric(8.0, 129).unwrap();
        let g = Window::hann(1.0).unwrap();
        let (tg, fg) = default_stft_grids(&t);
        assert!(forward_stft(&SampledSignal::zeros(t), &g, &tg, &fg).is_zero());
        assert_eq!(check_fourier_domain_identity(&SampledSignal::zeros(t), &g, &[(0.0, 0.0), (1.0, 2.0)]), 0.0);
    }

    #[test]
    fn direct_and_fast_rows_agree() {
        let t = UniformGrid::symmetric(8.0, 257).unwrap();
        let f = gaussian(t);
        let g = Window::triangular(1.5).unwrap();
        let tg = UniformGrid::symmetric(3.0, 13).unwrap();
        let fg = UniformGrid::symmetric(10.0, 41).unwrap();
        let a = forward_stft_with(&f, &g, &tg, &fg, FtMethod::Direct);
        let b = forward_stft_with(&f, &g, &tg, &fg, FtMethod::Fft);
        for (u, v) in a.values().iter().zip(b.values()) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn point_evaluation_resolves_window_kinks() {
        let t = UniformGrid::symmetric(8.0, 257).unwrap();
        let f = gaussian(t);
        let g = Window::triangular(1.5).unwrap();
        for (s, w) in [(0.0, 0.0), (0.37, 1.3), (-1.1, -4.0)] {
            let re = |x: f64| (-x * x / 2.0).exp() * g.g(x - s).re * (x * w).cos();
            let im = |x: f64| -(-x * x / 2.0).exp() * g.g(x - s).re * (x * w).sin();
            let reference = Complex64::new(
                crate::quad::integrate_adaptive(&re, s - 1.5, s + 1.5, 1e-14),
                crate::quad::integrate_adaptive(&im, s - 1.5, s + 1.5, 1e-14),
            );
            assert!((stft_at(&f, &g, s, w) - reference).norm() < 1e-8, "({s}, {w})");
        }
    }

    #[test]
    fn rejects_bad_matrix_shape() {
        let t = UniformGrid::symmetric(1.0, 3).unwrap();
        assert!(StftMatrix::new(t, t, vec![Complex64::new(0.0, 0.0); 8]).is_err());
    }
}
