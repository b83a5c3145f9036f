//! A-priori bounds on `T_{A1,A2} f - 2pi conj(g(x0)) f` from the spectral
//! tails of `f` and `g`.
//!
//! The error has Fourier transform `-m_A(y) f^(y)` up to a unimodular
//! factor, where `|m_A(y)| <= int_{w < y - A2 or w > y + A1} |g^(w)| dw`.
//! Hence `||e||_inf <= (1/2pi) int |f^| m_A` and, by Plancherel,
//! `||e||_2 <= (2pi)^{-1/2} (int |f^|^2 m_A^2)^{1/2}`. Other exponents follow
//! by interpolation (`p > 2`) or Hölder on the finite domain (`p < 2`).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::TruncationPair;
use crate::fourier::SpectrumSignal;
use crate::grid::LpExponent;
use crate::quad::CumulativeIntegral;
use crate::window::Window;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub sup: f64,
    pub l2: f64,
    /// Length of the domain the Lp norms are taken over.
    pub domain_length: f64,
}

impl TailBound {
    pub fn lp(&self, p: LpExponent) -> f64 {
        match p {
            LpExponent::Infinity => self.sup,
            LpExponent::Finite(p) if p >= 2.0 => self.sup.powf(1.0 - 2.0 / p) * self.l2.powf(2.0 / p),
            LpExponent::Finite(p) => self.l2 * self.domain_length.powf(1.0 / p - 0.5),
        }
    }
}

/// Mass of `|g^|` outside `[y - A2, y + A1]`.
struct OuterMass<'a> {
    g: &'a Window,
    table: CumulativeIntegral,
    half_tail: f64,
    reach: f64,
}

impl<'a> OuterMass<'a> {
    fn new(g: &'a Window, reach: f64) -> Self {
        let gg = g.clone();
        let abs: Arc<dyn Fn(f64) -> Complex64 + Send + Sync> = Arc::new(move |w| Complex64::new(gg.g_hat(w).norm(), 0.0));
        let table = CumulativeIntegral::new(abs, -reach, reach, g.frequency_panel() / 8.0);
        Self { g, table, half_tail: 0.5 * g.g_hat_tail_mass(reach), reach }
    }

    /// `int_{-inf}^s |g^|`.
    fn below(&self, s: f64) -> f64 {
        if s <= -self.reach {
            0.5 * self.g.g_hat_tail_mass(-s)
        } else if s >= self.reach {
            self.half_tail + self.table.total().re + (self.half_tail - 0.5 * self.g.g_hat_tail_mass(s))
        } else {
            self.half_tail + self.table.at(s).re
        }
    }

    /// `int_s^inf |g^|`.
    fn above(&self, s: f64) -> f64 {
        if s >= self.reach {
            0.5 * self.g.g_hat_tail_mass(s)
        } else if s <= -self.reach {
            self.half_tail + self.table.total().re + (self.half_tail - 0.5 * self.g.g_hat_tail_mass(-s))
        } else {
            self.half_tail + (self.table.total() - self.table.at(s)).re
        }
    }

    fn outside(&self, y: f64, trunc: TruncationPair) -> f64 {
        (self.below(y - trunc.a2()) + self.above(y + trunc.a1())).max(0.0)
    }
}

/// Error bounds for `T_{A1,A2} f` given the sampled spectrum of `f`.
pub fn tail_bound(f_hat: &SpectrumSignal, g: &Window, trunc: TruncationPair, domain_length: f64) -> TailBound {
    let grid = f_hat.grid();
    let reach = grid.start().abs().max(grid.end().abs()) + trunc.a1().max(trunc.a2()) + 1.0;
    let mass = OuterMass::new(g, reach);
    let dw = grid.spacing();
    let (mut sup, mut l2) = (0.0, 0.0);
    for (j, v) in f_hat.values().iter().enumerate() {
        let a = v.norm();
        if a == 0.0 {
            continue;
        }
        let m = mass.outside(grid.point(j), trunc);
        let w = grid.weight(j) * dw;
        sup += w * a * m;
        l2 += w * (a * m).powi(2);
    }
    TailBound { sup: sup / (2.0 * PI), l2: (l2 / (2.0 * PI)).sqrt(), domain_length }
}

/// `||f^||_1` by the trapezoid rule.
pub fn spectral_l1(f_hat: &SpectrumSignal) -> f64 {
    let grid = f_hat.grid();
    let dw = grid.spacing();
    f_hat.values().iter().enumerate().map(|(j, v)| grid.weight(j) * dw * v.norm()).sum()
}

/// Share of `||f^||_1` carried by the outer tenth of the frequency grid.
pub fn band_edge_ratio(f_hat: &SpectrumSignal) -> f64 {
    mass_fraction_beyond(f_hat, 0.9 * f_hat.grid().half_width())
}

/// Share of `||f^||_1` at frequencies further than `radius` from the grid centre.
pub(crate) fn mass_fraction_beyond(f_hat: &SpectrumSignal, radius: f64) -> f64 {
    let grid = f_hat.grid();
    let dw = grid.spacing();
    let (mut outer, mut total) = (0.0, 0.0);
    for (j, v) in f_hat.values().iter().enumerate() {
        let a = grid.weight(j) * dw * v.norm();
        total += a;
        if (grid.point(j) - grid.center()).abs() > radius {
            outer += a;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        outer / total
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;
    use crate::grid::UniformGrid;

    #[test]
    fn outer_mass_of_gaussian_matches_reference() {
        let g = Window::gaussian(1.0).unwrap();
        let m = OuterMass::new(&g, 40.0);
        let t = TruncationPair::new(2.0, 3.0).unwrap();
        // pi (erfc((3 - y)/sqrt2) + erfc((y + 2)/sqrt2)), 30-digit arithmetic
        let reference = [
            (-50.0, TAU),
            (-4.0, 6.140_242_012_394_431),
            (0.0, 0.151_424_954_271_725_3),
            (1.5, 0.421_223_677_037_697_2),
            (30.0, TAU),
            (60.0, TAU),
        ];
        for (y, expect) in reference {
            assert!((m.outside(y, t) - expect).abs() < 1e-13, "y = {y}: {}", m.outside(y, t));
        }
    }

    #[test]
    fn zero_spectrum_has_zero_bound() {
        let grid = UniformGrid::symmetric(10.0, 21).unwrap();
        let s = SpectrumSignal::new(grid, vec![Complex64::new(0.0, 0.0); 21]).unwrap();
        let b = tail_bound(&s, &Window::hann(1.0).unwrap(), TruncationPair::symmetric(2.0).unwrap(), 4.0);
        assert_eq!((b.sup, b.l2), (0.0, 0.0));
        assert_eq!(band_edge_ratio(&s), 0.0);
    }
}
