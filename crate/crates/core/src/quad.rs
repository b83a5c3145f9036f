//! Higher-order quadrature: Gauss-Legendre panels, adaptive Gauss-Kronrod,
//! and cumulative integral tables.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        out[i] = (-z, w);
        out[n - 1 - i] = (z, w);
    }
    if n % 2 == 1 {
        out[n / 2].0 = 0.0;
    }
    out
}

/// Lagrange basis polynomial for node `i` on the stencil `{-2, ..., 3}`.
pub(crate) fn lagrange(i: i32, s: f64) -> f64 {
    (-2..=3)
        .filter(|&m| m != i)
        .map(|m| (s - m as f64) / (i - m) as f64)
        .product()
}

pub(crate) fn gl16() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

pub(crate) fn gl32() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(32))
}

/// One Gauss-Legendre panel over `[a, b]`.
#[inline]
pub fn gl_panel<T, F>(rule: &[(f64, f64)], a: f64, b: f64, f: F) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    F: Fn(f64) -> T,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = T::default();
    for &(x, w) in rule {
        acc = acc + f(mid + half * x) * w;
    }
    acc * half
}

/// Composite 16-point Gauss-Legendre over `[a, b]` split into `panels` pieces.
pub fn gl_composite<T, F>(f: F, a: f64, b: f64, panels: usize) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    F: Fn(f64) -> T,
{
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut acc = T::default();
    for i in 0..panels {
        let lo = a + h * i as f64;
        let hi = if i + 1 == panels { b } else { lo + h };
        acc = acc + gl_panel(gl16(), lo, hi, &f);
    }
    acc
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS_K: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const GK_WEIGHTS_G: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut k = fc * GK_WEIGHTS_K[7];
    let mut g = fc * GK_WEIGHTS_G[3];
    for i in 0..7 {
        let dx = half * GK_NODES[i];
        let s = f(mid - dx) + f(mid + dx);
        k += GK_WEIGHTS_K[i] * s;
        if i % 2 == 1 {
            g += GK_WEIGHTS_G[i / 2] * s;
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Adaptive Gauss-Kronrod (7/15) integration of a real function over a
/// finite interval to absolute tolerance `tol`.
pub fn integrate_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, whole: (f64, f64), depth: u32) -> f64 {
        let (val, err) = whole;
        if err <= tol || depth == 0 || (b - a).abs() < 1e-14 * (1.0 + a.abs()) {
            return val;
        }
        let m = 0.5 * (a + b);
        let left = gk15(f, a, m);
        let right = gk15(f, m, b);
        recurse(f, a, m, 0.5 * tol, left, depth - 1) + recurse(f, m, b, 0.5 * tol, right, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let whole = gk15(f, a, b);
    recurse(f, a, b, tol.max(1e-300), whole, 48)
}

/// Neumaier-compensated running sum of complex numbers.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: Complex64) {
        self.sum.re = neumaier(self.sum.re, v.re, &mut self.comp.re);
        self.sum.im = neumaier(self.sum.im, v.im, &mut self.comp.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

#[inline]
fn neumaier(sum: f64, v: f64, comp: &mut f64) -> f64 {
    let t = sum + v;
    if sum.abs() >= v.abs() {
        *comp += (sum - t) + v;
    } else {
        *comp += (v - t) + sum;
    }
    t
}

/// Running integral `x -> int_a^x f` of a smooth function, tabulated at
/// panel boundaries and completed with one Gauss-Legendre panel on demand.
#[derive(Clone)]
pub struct CumulativeIntegral {
    f: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    start: f64,
    panel: f64,
    table: Vec<Complex64>,
}

impl std::fmt::Debug for CumulativeIntegral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CumulativeIntegral")
            .field("start", &self.start)
            .field("panel", &self.panel)
            .field("panels", &(self.table.len() - 1))
            .finish()
    }
}

impl CumulativeIntegral {
    /// Tabulates over `[start, end]` with panels no wider than `max_panel`.
    pub fn new(f: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>, start: f64, end: f64, max_panel: f64) -> Self {
        assert!(end > start && max_panel > 0.0);
        let panels = ((end - start) / max_panel).ceil().max(1.0) as usize;
        let panel = (end - start) / panels as f64;
        let mut table = Vec::with_capacity(panels + 1);
        let mut acc = CompensatedSum::default();
        table.push(Complex64::new(0.0, 0.0));
        for i in 0..panels {
            let lo = start + panel * i as f64;
            acc.add(gl_panel(gl16(), lo, lo + panel, |x| f(x)));
            table.push(acc.value());
        }
        Self { f, start, panel, table }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.start + self.panel * (self.table.len() - 1) as f64
    }

    /// `int_start^x f`, with `x` clamped to the tabulated range.
    pub fn at(&self, x: f64) -> Complex64 {
        let panels = self.table.len() - 1;
        let t = ((x - self.start) / self.panel).clamp(0.0, panels as f64);
        let i = (t.floor() as usize).min(panels - 1);
        let lo = self.start + self.panel * i as f64;
        let x = x.clamp(self.start, self.end());
        if x == lo {
            return self.table[i];
        }
        self.table[i] + gl_panel(gl16(), lo, x, |u| (self.f)(u))
    }

    /// `int_a^b f` for `a <= b` inside the tabulated range.
    pub fn between(&self, a: f64, b: f64) -> Complex64 {
        self.at(b) - self.at(a)
    }

    /// Total integral over the tabulated range.
    pub fn total(&self) -> Complex64 {
        *self.table.last().expect("table is non-empty")
    }
}
