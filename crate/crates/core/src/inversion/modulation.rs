//! `T_A f = int conj(g^(w)) e^{-ix0 w} (M_{-w} S_A M_w f) dw`.
//!
//! `S_A` is the Dirichlet partial sum `(S_A f)^ = f^ 1_{[-A, A]}`, so
//! `M_{-w} S_A M_w f` keeps the band `[w - A, w + A]` of `f` and the outer
//! integral reproduces the multiplier `h_A`. No further `1/2pi` appears:
//! the partial sum already carries the inverse-transform factor.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{diagnostics, tail, Pathway, Reconstruction, TruncationPair};
use crate::error::{Error, Result};
use crate::fourier::{forward_ft, DirichletOperator, SpectrumSignal};
use crate::grid::{SampledSignal, UniformGrid};
use crate::window::Window;

/// Nodes per parallel work item. Partial sums are combined in a fixed
/// pairwise tree so results do not depend on the thread count.
const BLOCK: usize = 32;

/// Radius outside which `f^` carries at most `1e-13` of its L1 mass.
fn spectral_radius(f_hat: &SpectrumSignal) -> f64 {
    let grid = f_hat.grid();
    let total = tail::spectral_l1(f_hat);
    if total == 0.0 {
        return 0.0;
    }
    let dw = grid.spacing();
    let mut by_radius: Vec<(f64, f64)> = f_hat
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| (grid.point(j).abs(), grid.weight(j) * dw * v.norm()))
        .collect();
    by_radius.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut outside = 0.0;
    for (r, m) in by_radius {
        outside += m;
        if outside > 1e-13 * total {
            return r;
        }
    }
    0.0
}

/// The spectral grid of `f` restricted to the radius where the integrand
/// is non-negligible: the smaller of the `1e-12` mass radius of `g^` and
/// the band of `f` widened by `A`.
pub fn default_omega_grid(f: &SampledSignal, g: &Window, a: f64) -> UniformGrid {
    let spectral = UniformGrid::spectral_for(f.grid());
    let f_hat = forward_ft(f, &spectral);
    let r = g.g_hat_mass_radius(1e-12).min(spectral_radius(&f_hat) + a);
    let dw = spectral.spacing();
    let r = r + 2.0 * dw;
    let (lo, hi) = spectral.index_range(-r, r);
    if hi - lo < 2 {
        return UniformGrid::new(-dw, dw, 3).expect("valid grid");
    }
    UniformGrid::new(spectral.point(lo), spectral.point(hi - 1), hi - lo).expect("valid grid")
}

/// Symmetric `T_A f` on the default frequency nodes.
pub fn invert_modulation(f: &SampledSignal, g: &Window, a: f64) -> Result<Reconstruction> {
    let omega = default_omega_grid(f, g, a.min(f.grid().band_limit()));
    invert_modulation_on(f, g, a, &omega)
}

/// Symmetric `T_A f` with the outer integral sampled on `omega_grid`.
pub fn invert_modulation_on(f: &SampledSignal, g: &Window, a: f64, omega_grid: &UniformGrid) -> Result<Reconstruction> {
    let grid = *f.grid();
    let mut warnings = Vec::new();
    let trunc = TruncationPair::symmetric(a)?.clamped(grid.band_limit(), &mut warnings);
    let a = trunc.a1();
    let spectral = UniformGrid::spectral_for(&grid);
    let f_hat = forward_ft(f, &spectral);
    let bound = tail::tail_bound(&f_hat, g, trunc, grid.length());
    let edge = tail::band_edge_ratio(&f_hat);

    let needed = g.g_hat_mass_radius(1e-10).min(spectral_radius(&f_hat) + a);
    if omega_grid.start() > -needed || omega_grid.end() < needed {
        warnings.push(format!(
            "omega grid [{}, {}] does not cover the integrand radius {needed:.6}",
            omega_grid.start(),
            omega_grid.end()
        ));
    }

    if f.is_zero() {
        return Ok(Reconstruction {
            signal: SampledSignal::zeros(grid),
            diagnostics: diagnostics(Pathway::Modulation, Some(trunc), g, Some(bound.sup), Some(edge), warnings),
            normalized: false,
        });
    }

    let op = DirichletOperator::new(&grid, a)?;
    let n = grid.len();
    let m = omega_grid.len();
    let dw = omega_grid.spacing();
    let phase_x: Vec<f64> = grid.points().collect();
    let blocks: Vec<Vec<Complex64>> = (0..m.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let terms: Vec<Vec<Complex64>> = (b * BLOCK..((b + 1) * BLOCK).min(m))
                .map(|j| {
                    let w = omega_grid.point(j);
                    let c = g.anchored_g_hat_conj(w) * (omega_grid.weight(j) * dw);
                    if c == Complex64::new(0.0, 0.0) {
                        return vec![Complex64::new(0.0, 0.0); n];
                    }
                    let modulated: Vec<Complex64> = f
                        .values()
                        .iter()
                        .zip(&phase_x)
                        .map(|(v, &x)| v * Complex64::cis(-x * w))
                        .collect();
                    let mut s = op.apply(&modulated);
                    for (v, &x) in s.iter_mut().zip(&phase_x) {
                        *v *= Complex64::cis(x * w) * c;
                    }
                    s
                })
                .collect();
            pairwise_sum(terms, n)
        })
        .collect();
    let values = pairwise_sum(blocks, n);
    if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::NonFinite(i));
    }
    Ok(Reconstruction {
        signal: SampledSignal::from_parts_unchecked(grid, values),
        diagnostics: diagnostics(Pathway::Modulation, Some(trunc), g, Some(bound.sup), Some(edge), warnings),
        normalized: false,
    })
}

/// Sums equal-length vectors by recursive halving of the index range.
fn pairwise_sum(mut terms: Vec<Vec<Complex64>>, n: usize) -> Vec<Complex64> {
    if terms.is_empty() {
        return vec![Complex64::new(0.0, 0.0); n];
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                for (u, v) in a.iter_mut().zip(b) {
                    *u += v;
                }
            }
            next.push(a);
        }
        terms = next;
    }
    terms.pop().expect("one term remains")
}
