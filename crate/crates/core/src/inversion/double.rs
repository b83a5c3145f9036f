//! `f(x) = (1 / (2pi ||g||_2^2)) int int (F_g f)(t, w) g(x - t) e^{ixw} dt dw`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{diagnostics, Pathway, Reconstruction};
use crate::error::{Error, Result};
use crate::fourier::{exp_sum, FtMethod};
use crate::grid::{SampledSignal, UniformGrid};
use crate::stft::StftMatrix;
use crate::window::Window;

/// Rows per parallel work item; block sums are added in index order.
const ROWS: usize = 16;

/// Classical reconstruction from a full STFT matrix, on its time grid.
pub fn invert_double_integral(s: &StftMatrix, g: &Window) -> Result<Reconstruction> {
    let norm = g.l2_norm_sq();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::InvalidWindow(format!("||g||_2^2 = {norm} must be positive")));
    }
    let tg = *s.time_grid();
    let fg = *s.freq_grid();
    let period = 2.0 * PI / fg.spacing();
    if period < tg.length() * (1.0 - 1e-9) {
        return Err(Error::InvalidGrid(format!(
            "frequency spacing {} aliases over a period {period} shorter than the time domain {}",
            fg.spacing(),
            tg.length()
        )));
    }
    let out_grid = tg;
    let n = out_grid.len();
    let mut warnings = Vec::new();
    if fg.half_width() < 0.5 * tg.band_limit() {
        warnings.push(format!(
            "frequency grid half-width {} covers less than half of the band {}",
            fg.half_width(),
            tg.band_limit()
        ));
    }
    if s.is_zero() {
        return Ok(Reconstruction {
            signal: SampledSignal::zeros(out_grid),
            diagnostics: diagnostics(Pathway::DoubleIntegral, None, g, None, None, warnings),
            normalized: true,
        });
    }

    let (lo, hi) = g.effective_support();
    let dt = tg.spacing();
    let dw = fg.spacing();
    let scale = 1.0 / (2.0 * PI * norm);
    let rows = tg.len();
    let blocks: Vec<Vec<Complex64>> = (0..rows.div_ceil(ROWS))
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![Complex64::new(0.0, 0.0); n];
            for i in b * ROWS..((b + 1) * ROWS).min(rows) {
                let t = tg.point(i);
                let (k0, k1) = out_grid.index_range(t + lo, t + hi);
                if k1 <= k0 {
                    continue;
                }
                let row = s.row(i);
                if row.iter().all(|v| v.re == 0.0 && v.im == 0.0) {
                    continue;
                }
                let coeffs: Vec<Complex64> =
                    row.iter().enumerate().map(|(j, v)| v * (fg.weight(j) * dw)).collect();
                let sub = if k1 - k0 >= 2 {
                    UniformGrid::new(out_grid.point(k0), out_grid.point(k1 - 1), k1 - k0)
                } else {
                    UniformGrid::new(out_grid.point(k0), out_grid.point(k0) + out_grid.spacing(), 2)
                }
                .expect("sub-grid is valid");
                let synth = exp_sum(&coeffs, &fg, &sub, 1.0, FtMethod::Auto);
                let wt = tg.weight(i) * dt * scale;
                for (off, v) in synth.iter().enumerate().take(k1 - k0) {
                    let k = k0 + off;
                    acc[k] += v * g.g(out_grid.point(k) - t) * wt;
                }
            }
            acc
        })
        .collect();
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    for b in blocks {
        for (u, v) in values.iter_mut().zip(b) {
            *u += v;
        }
    }
    Ok(Reconstruction {
        signal: SampledSignal::from_parts_unchecked(out_grid, values),
        diagnostics: diagnostics(Pathway::DoubleIntegral, None, g, None, None, warnings),
        normalized: true,
    })
}
