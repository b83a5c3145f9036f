//! Window functions `g` with closed-form Fourier transforms.
//!
//! Every window carries an anchor `x0` and the value `g(x0)` that
//! normalises filter-bank reconstruction, together with `||g^||_1`, which
//! enters every error bound.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::quad::{gl32, gl_panel, integrate_adaptive};
use crate::special::sine_integral_complement;

/// Windows with `|g(x0)|` below this are not usable for reconstruction.
pub const ANCHOR_THRESHOLD: f64 = 1e-12;

/// Relative level below which a Gaussian window is treated as zero.
const GAUSSIAN_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    #[default]
    Gaussian,
    Hann,
    Triangular,
    Custom,
}

impl fmt::Display for WindowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WindowKind::Gaussian => "gaussian",
            WindowKind::Hann => "hann",
            WindowKind::Triangular => "triangular",
            WindowKind::Custom => "custom",
        })
    }
}

impl std::str::FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" => Ok(Self::Gaussian),
            "hann" => Ok(Self::Hann),
            "triangular" => Ok(Self::Triangular),
            "custom" => Ok(Self::Custom),
            other => Err(Error::Parse(format!("unknown window kind `{other}`"))),
        }
    }
}

/// Parameters of a catalogue window. `sigma` is the Gaussian standard
/// deviation, or the half-width of the support for Hann and triangular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    #[serde(default)]
    pub kind: WindowKind,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default)]
    pub x0: f64,
}

fn default_sigma() -> f64 {
    1.0
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self { kind: WindowKind::Gaussian, sigma: 1.0, x0: 0.0 }
    }
}

impl WindowSpec {
    pub fn new(kind: WindowKind, sigma: f64, x0: f64) -> Self {
        Self { kind, sigma, x0 }
    }
}

type RealToComplex = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// User-supplied window: both `g` and `g^` must be given.
#[derive(Clone)]
pub struct CustomWindow {
    pub g: RealToComplex,
    pub g_hat: RealToComplex,
    /// Interval outside which `g` vanishes, if compactly supported.
    pub support: Option<(f64, f64)>,
    /// Points where `g` or one of its low derivatives is not smooth.
    pub breakpoints: Vec<f64>,
}

#[derive(Clone)]
enum Shape {
    Gaussian { sigma: f64 },
    Hann { half_width: f64 },
    Triangular { half_width: f64 },
    Custom { window: CustomWindow, radius: f64, g_hat_radius: f64, g_hat_l1_far: f64 },
}

/// A window `g` together with `g^`, its anchor and norms.
#[derive(Clone)]
pub struct Window {
    shape: Shape,
    anchor: f64,
    g_at_anchor: Complex64,
    l1_norm_g_hat: f64,
    l2_norm_sq: f64,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Window")
            .field("kind", &self.kind())
            .field("label", &self.label())
            .field("g_at_anchor", &self.g_at_anchor)
            .field("l1_norm_g_hat", &self.l1_norm_g_hat)
            .finish()
    }
}

/// Builds a catalogue window from its spec.
pub fn make_window(spec: &WindowSpec) -> Result<Window> {
    if !spec.x0.is_finite() {
        return Err(Error::InvalidWindow(format!("anchor x0 must be finite, got {}", spec.x0)));
    }
    let w = match spec.kind {
        WindowKind::Gaussian => Window::gaussian(spec.sigma)?,
        WindowKind::Hann => Window::hann(spec.sigma)?,
        WindowKind::Triangular => Window::triangular(spec.sigma)?,
        WindowKind::Custom => {
            return Err(Error::InvalidWindow(
                "custom windows need evaluators; build them with Window::custom".into(),
            ))
        }
    };
    Ok(w.with_anchor(spec.x0))
}

fn check_width(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWindow(format!("width must be positive and finite, got {sigma}")))
    }
}

impl Window {
    /// `g(x) = exp(-x^2 / (2 sigma^2))`.
    pub fn gaussian(sigma: f64) -> Result<Self> {
        check_width(sigma)?;
        Ok(Self::finish(Shape::Gaussian { sigma }, 2.0 * PI, sigma * PI.sqrt(), vec![]))
    }

    /// `g(x) = cos^2(pi x / (2 sigma))` on `[-sigma, sigma]`.
    pub fn hann(half_width: f64) -> Result<Self> {
        check_width(half_width)?;
        let l1 = hann_l1(half_width);
        Ok(Self::finish(
            Shape::Hann { half_width },
            l1,
            0.75 * half_width,
            vec![-half_width, half_width],
        ))
    }

    /// `g(x) = (1 - |x| / sigma)^+`.
    pub fn triangular(half_width: f64) -> Result<Self> {
        check_width(half_width)?;
        Ok(Self::finish(
            Shape::Triangular { half_width },
            2.0 * PI,
            2.0 * half_width / 3.0,
            vec![-half_width, 0.0, half_width],
        ))
    }

    /// A user-supplied window. The evaluators are checked numerically for
    /// continuity of `g` and integrability of `g` and `g^`.
    pub fn custom(window: CustomWindow) -> Result<Self> {
        let radius = custom_radius(&window)?;
        check_continuity(&*window.g, -1.25 * radius, 1.25 * radius)?;
        let l1_g = |r: f64| integrate_abs(&*window.g, -r, r, 4096);
        let (a, b) = (l1_g(radius), l1_g(2.0 * radius));
        if !(a.is_finite() && b.is_finite()) || (b - a).abs() > 1e-6 * b.max(1e-300) || b == 0.0 {
            return Err(Error::InvalidWindow("g is not numerically integrable".into()));
        }
        let w0 = 50.0 * PI / radius;
        let panels = |r: f64| ((2.0 * r) / (0.25 * PI / radius)).ceil() as usize;
        let i1 = integrate_abs(&*window.g_hat, -w0, w0, panels(w0));
        let i4 = integrate_abs(&*window.g_hat, -4.0 * w0, 4.0 * w0, panels(4.0 * w0));
        if !(i1.is_finite() && i4.is_finite()) || i4 <= 0.0 || (i4 - i1) > 1e-2 * i4 {
            return Err(Error::InvalidWindow("g^ does not decay fast enough to be integrable".into()));
        }
        // Tail beyond 4 w0 extrapolated from an w^-2 decay.
        let far = (i4 - i1) / 3.0;
        let l1 = i4 + far;
        let l2 = integrate_adaptive(&|x| window.g.as_ref()(x).norm_sqr(), -radius, radius, 1e-13);
        let breakpoints = window.breakpoints.clone();
        Ok(Self::finish(
            Shape::Custom { window, radius, g_hat_radius: 4.0 * w0, g_hat_l1_far: far },
            l1,
            l2,
            breakpoints,
        ))
    }

    fn finish(shape: Shape, l1: f64, l2: f64, breakpoints: Vec<f64>) -> Self {
        let mut w = Self {
            shape,
            anchor: 0.0,
            g_at_anchor: Complex64::new(0.0, 0.0),
            l1_norm_g_hat: l1,
            l2_norm_sq: l2,
            breakpoints,
        };
        w.g_at_anchor = w.g(0.0);
        w
    }

    /// Moves the anchor `x0`.
    pub fn with_anchor(mut self, x0: f64) -> Self {
        self.anchor = x0;
        self.g_at_anchor = self.g(x0);
        self
    }

    pub fn kind(&self) -> WindowKind {
        match self.shape {
            Shape::Gaussian { .. } => WindowKind::Gaussian,
            Shape::Hann { .. } => WindowKind::Hann,
            Shape::Triangular { .. } => WindowKind::Triangular,
            Shape::Custom { .. } => WindowKind::Custom,
        }
    }

    /// The width parameter, when the window has one.
    pub fn sigma(&self) -> Option<f64> {
        match self.shape {
            Shape::Gaussian { sigma } => Some(sigma),
            Shape::Hann { half_width } | Shape::Triangular { half_width } => Some(half_width),
            Shape::Custom { .. } => None,
        }
    }

    pub fn spec(&self) -> Option<WindowSpec> {
        self.sigma().map(|sigma| WindowSpec { kind: self.kind(), sigma, x0: self.anchor })
    }

    pub fn label(&self) -> String {
        match self.sigma() {
            Some(s) => format!("{}(sigma={},x0={})", self.kind(), s, self.anchor),
            None => format!("custom(x0={})", self.anchor),
        }
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn g_at_anchor(&self) -> Complex64 {
        self.g_at_anchor
    }

    pub fn is_invertible(&self) -> bool {
        self.g_at_anchor.norm() >= ANCHOR_THRESHOLD
    }

    /// Errors with [`Error::DegenerateAnchor`] when `|g(x0)|` is too small.
    pub fn require_invertible(&self) -> Result<()> {
        if self.is_invertible() {
            Ok(())
        } else {
            Err(Error::DegenerateAnchor { value: self.g_at_anchor.norm(), threshold: ANCHOR_THRESHOLD })
        }
    }

    /// `||g^||_1`.
    pub fn l1_norm_g_hat(&self) -> f64 {
        self.l1_norm_g_hat
    }

    /// `||g||_2^2`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.l2_norm_sq
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn g(&self, x: f64) -> Complex64 {
        match &self.shape {
            Shape::Gaussian { sigma } => {
                let z = x / sigma;
                Complex64::new((-0.5 * z * z).exp(), 0.0)
            }
            Shape::Hann { half_width } => {
                if x.abs() >= *half_width {
                    Complex64::new(0.0, 0.0)
                } else {
                    let c = (0.5 * PI * x / half_width).cos();
                    Complex64::new(c * c, 0.0)
                }
            }
            Shape::Triangular { half_width } => Complex64::new((1.0 - x.abs() / half_width).max(0.0), 0.0),
            Shape::Custom { window, .. } => (window.g)(x),
        }
    }

    pub fn g_hat(&self, w: f64) -> Complex64 {
        match &self.shape {
            Shape::Gaussian { sigma } => {
                let z = sigma * w;
                Complex64::new(sigma * (2.0 * PI).sqrt() * (-0.5 * z * z).exp(), 0.0)
            }
            Shape::Hann { half_width } => Complex64::new(hann_hat(*half_width, w), 0.0),
            Shape::Triangular { half_width } => {
                let s = sinc(0.5 * half_width * w);
                Complex64::new(half_width * s * s, 0.0)
            }
            Shape::Custom { window, .. } => (window.g_hat)(w),
        }
    }

    /// `conj(g^(w)) e^{-i x0 w}`, the integrand of the reconstruction multiplier.
    #[inline]
    pub fn anchored_g_hat_conj(&self, w: f64) -> Complex64 {
        self.g_hat(w).conj() * Complex64::cis(-self.anchor * w)
    }

    /// Interval outside which `g` is zero (or below 1e-18 of its peak).
    pub fn effective_support(&self) -> (f64, f64) {
        match &self.shape {
            Shape::Gaussian { sigma } => {
                let r = sigma * (2.0 * (1.0 / GAUSSIAN_CUTOFF).ln()).sqrt();
                (-r, r)
            }
            Shape::Hann { half_width } | Shape::Triangular { half_width } => (-half_width, *half_width),
            Shape::Custom { window, radius, .. } => window.support.unwrap_or((-radius, *radius)),
        }
    }

    /// Half-length of the effective support, measured from the origin.
    pub fn time_extent(&self) -> f64 {
        let (a, b) = self.effective_support();
        a.abs().max(b.abs())
    }

    /// Characteristic time scale, used to size frequency-domain panels.
    pub fn time_scale(&self) -> f64 {
        match &self.shape {
            Shape::Gaussian { sigma } => *sigma,
            Shape::Hann { half_width } | Shape::Triangular { half_width } => *half_width,
            Shape::Custom { radius, .. } => *radius,
        }
    }

    /// Panel width for integrating `conj(g^) e^{-i x0 w}` with 16-point rules.
    pub fn frequency_panel(&self) -> f64 {
        0.5 / (self.time_scale() + self.anchor.abs())
    }

    /// `int_{|w| > r} |g^(w)| dw`.
    pub fn g_hat_tail_mass(&self, r: f64) -> f64 {
        let r = r.max(0.0);
        match &self.shape {
            Shape::Gaussian { sigma } => 2.0 * PI * erfc(sigma * r / SQRT_2),
            Shape::Triangular { half_width } => {
                let z = 0.5 * half_width * r;
                if z == 0.0 {
                    return 2.0 * PI;
                }
                let s = z.sin();
                4.0 * (s * s / z + sine_integral_complement(2.0 * z))
            }
            Shape::Hann { half_width } => {
                let a = PI / half_width;
                let far = HANN_PANELS as f64 * PI / half_width;
                if r >= far {
                    hann_far_tail(a, r)
                } else {
                    let inner = hann_abs_integral(*half_width, r);
                    (self.l1_norm_g_hat - 2.0 * inner).max(0.0)
                }
            }
            Shape::Custom { window, g_hat_radius, g_hat_l1_far, radius, .. } => {
                if r >= *g_hat_radius {
                    g_hat_l1_far * g_hat_radius / r
                } else {
                    let panels = ((2.0 * r) / (0.25 * PI / radius)).ceil().max(1.0) as usize;
                    (self.l1_norm_g_hat - integrate_abs(&*window.g_hat, -r, r, panels)).max(0.0)
                }
            }
        }
    }

    /// Smallest `R` with `int_{|w|>R} |g^| <= tol * ||g^||_1`.
    pub fn g_hat_mass_radius(&self, tol: f64) -> f64 {
        let target = tol * self.l1_norm_g_hat;
        let mut hi = 1.0 / self.time_scale();
        let mut guard = 0;
        while self.g_hat_tail_mass(hi) > target && guard < 200 {
            hi *= 2.0;
            guard += 1;
        }
        let mut lo = 0.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.g_hat_tail_mass(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

/// `sin(z)/z`.
#[inline]
pub(crate) fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

fn hann_hat(half_width: f64, w: f64) -> f64 {
    let z = half_width * w;
    if z.abs() < 10.0 {
        half_width * (sinc(z) + 0.5 * sinc(z - PI) + 0.5 * sinc(z + PI))
    } else {
        let a = PI / half_width;
        a * a * z.sin() / (w * (a * a - w * w))
    }
}

/// Number of half-periods of `g^` integrated numerically for the Hann norm.
const HANN_PANELS: usize = 4000;

/// `int_0^r |g^|` for the Hann window, with panels aligned to the zeros of
/// `g^` at `k pi / sigma`, `k >= 2`.
fn hann_abs_integral(half_width: f64, r: f64) -> f64 {
    let step = PI / half_width;
    let f = |w: f64| hann_hat(half_width, w).abs();
    let mut acc = 0.0;
    let mut lo = 0.0;
    let mut hi = 2.0 * step;
    while lo < r {
        let top = hi.min(r);
        acc += gl_panel(gl32(), lo, top, f);
        lo = hi;
        hi += step;
    }
    acc
}

/// Asymptotic mass of `|g^|` beyond `r` for the Hann window, averaging
/// `|sin|` to `2/pi`.
fn hann_far_tail(a: f64, r: f64) -> f64 {
    (2.0 / PI) * (r * r / (r * r - a * a)).ln()
}

fn hann_l1(half_width: f64) -> f64 {
    let far = HANN_PANELS as f64 * PI / half_width;
    2.0 * hann_abs_integral(half_width, far) + hann_far_tail(PI / half_width, far)
}

fn integrate_abs(f: &(dyn Fn(f64) -> Complex64 + Send + Sync), a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + h * i as f64;
            gl_panel(gl32(), lo, lo + h, |x| f(x).norm())
        })
        .sum()
}

fn custom_radius(w: &CustomWindow) -> Result<f64> {
    if let Some((a, b)) = w.support {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidWindow(format!("bad support hint [{a}, {b}]")));
        }
        return Ok(a.abs().max(b.abs()));
    }
    let peak = (-64..=64).map(|i| (w.g)(i as f64 / 8.0).norm()).fold(0.0, f64::max);
    if !(peak.is_finite() && peak > 0.0) {
        return Err(Error::InvalidWindow("g vanishes or is not finite near the origin".into()));
    }
    let mut r = 1.0;
    while r < 4096.0 {
        let edge = (0..=64)
            .map(|i| r + r * i as f64 / 64.0)
            .map(|x| (w.g)(x).norm().max((w.g)(-x).norm()))
            .fold(0.0, f64::max);
        if edge < 1e-16 * peak {
            return Ok(r);
        }
        r *= 2.0;
    }
    Err(Error::InvalidWindow("g does not decay; supply a support hint".into()))
}

fn check_continuity(g: &(dyn Fn(f64) -> Complex64 + Send + Sync), a: f64, b: f64) -> Result<()> {
    let jump = |n: usize| {
        let h = (b - a) / n as f64;
        let mut prev = g(a);
        let mut worst: f64 = 0.0;
        for k in 1..=n {
            let v = g(a + h * k as f64);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return f64::INFINITY;
            }
            worst = worst.max((v - prev).norm());
            prev = v;
        }
        worst
    };
    let coarse = jump(4096);
    let fine = jump(16384);
    if !fine.is_finite() || fine > 0.75 * coarse + 1e-12 {
        return Err(Error::InvalidWindow(format!(
            "g appears discontinuous: largest sample jump {fine:e} does not shrink under refinement"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle_l1(w: &Window, r: f64) -> f64 {
        integrate_adaptive(&|x| w.g_hat(x).norm(), -r, r, 1e-12)
    }

    #[test]
    fn gaussian_values() {
        let w = make_window(&WindowSpec::default()).unwrap();
        assert_eq!(w.g_at_anchor(), Complex64::new(1.0, 0.0));
        assert!((w.l1_norm_g_hat() - 2.0 * PI).abs() < 1e-15);
        assert!((oracle_l1(&w, 40.0) - 2.0 * PI).abs() < 1e-10);
        assert!((w.l2_norm_sq() - PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hann_values() {
        let w = Window::hann(1.0).unwrap();
        assert_eq!(w.g(0.0).re, 1.0);
        assert_eq!(w.g(1.0).re, 0.0);
        assert_eq!(w.g(-1.0).re, 0.0);
        assert!((w.g_hat(0.0).re - 1.0).abs() < 1e-15);
        // closed form and sinc form agree across the switch point
        let a = hann_hat(1.0, 10.0 - 1e-12);
        let b = hann_hat(1.0, 10.0 + 1e-12);
        assert!((a - b).abs() < 1e-12);
        // removable singularity at w = pi / sigma
        assert!((w.g_hat(PI).re - 0.5).abs() < 1e-12);
        // ||g^||_1 against an independent adaptive oracle plus the 1/w^3 tail
        let r = 400.0 * PI;
        let tail = w.g_hat_tail_mass(r);
        assert!((oracle_l1(&w, r) + tail - w.l1_norm_g_hat()).abs() < 1e-7);
        assert!(w.l1_norm_g_hat() > 2.0 * PI);
    }

    #[test]
    fn hann_transform_matches_quadrature() {
        let w = Window::hann(0.7).unwrap();
        for &om in &[0.0, 0.3, 2.0, PI / 0.7, 9.0, 40.0] {
            let re = integrate_adaptive(&|x| w.g(x).re * (x * om).cos(), -0.7, 0.7, 1e-14);
            assert!((w.g_hat(om).re - re).abs() < 1e-12, "w = {om}");
        }
    }

    #[test]
    fn triangular_values() {
        let w = Window::triangular(1.0).unwrap();
        assert!((w.g_hat(0.0).re - 1.0).abs() < 1e-15);
        for &om in &[0.1, 1.0, 2.0 * PI, 7.3, 50.0] {
            let closed = 2.0 * (1.0 - f64::cos(om)) / (om * om);
            assert!((w.g_hat(om).re - closed).abs() < 1e-12);
            assert!(w.g_hat(om).re >= 0.0);
        }
        assert!((w.g_hat_tail_mass(0.0) - 2.0 * PI).abs() < 1e-12);
        let r = 12.0;
        let inner = oracle_l1(&w, r);
        assert!((inner + w.g_hat_tail_mass(r) - 2.0 * PI).abs() < 1e-9);
        let r = 80.0;
        let inner = oracle_l1(&w, r);
        assert!((inner + w.g_hat_tail_mass(r) - 2.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn gaussian_tail_and_radius() {
        let w = Window::gaussian(1.0).unwrap();
        let r = w.g_hat_mass_radius(1e-12);
        assert!(w.g_hat_tail_mass(r) <= 1e-12 * 2.0 * PI * (1.0 + 1e-9));
        assert!(r > 6.0 && r < 8.0);
    }

    #[test]
    fn anchors() {
        let w = make_window(&WindowSpec::new(WindowKind::Hann, 1.0, 1.0)).unwrap();
        assert!(!w.is_invertible());
        assert!(matches!(w.require_invertible(), Err(Error::DegenerateAnchor { .. })));
        let w = make_window(&WindowSpec::new(WindowKind::Gaussian, 2.0, 0.5)).unwrap();
        assert!((w.g_at_anchor() - w.g(0.5)).norm() < 1e-14);
        assert!(w.is_invertible());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Window::gaussian(0.0).is_err());
        assert!(Window::hann(-1.0).is_err());
        assert!(Window::triangular(f64::NAN).is_err());
        assert!(make_window(&WindowSpec::new(WindowKind::Custom, 1.0, 0.0)).is_err());
    }

    #[test]
    fn custom_window_accepts_smooth_and_rejects_box() {
        let ok = Window::custom(CustomWindow {
            g: Arc::new(|x: f64| Complex64::new((-x * x / 2.0).exp(), 0.0)),
            g_hat: Arc::new(|w: f64| Complex64::new((2.0 * PI).sqrt() * (-w * w / 2.0).exp(), 0.0)),
            support: None,
            breakpoints: vec![],
        })
        .unwrap();
        assert!((ok.l1_norm_g_hat() - 2.0 * PI).abs() < 1e-8);
        assert!((ok.l2_norm_sq() - PI.sqrt()).abs() < 1e-10);

        let boxed = Window::custom(CustomWindow {
            g: Arc::new(|x: f64| Complex64::new(if x.abs() <= 1.0 { 1.0 } else { 0.0 }, 0.0)),
            g_hat: Arc::new(|w: f64| Complex64::new(2.0 * sinc(w), 0.0)),
            support: Some((-1.0, 1.0)),
            breakpoints: vec![-1.0, 1.0],
        });
        assert!(boxed.is_err());
    }
}
