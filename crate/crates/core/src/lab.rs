//! Convergence experiments: error sweeps over the cutoff `A`, the empirical
//! maximal function, stability under random perturbations and pointwise
//! decay.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures::{band_limited_noise, Fixture, DEFAULT_SEED};
use crate::fourier::forward_ft;
use crate::grid::{lp_norm, LpExponent, SampledSignal, UniformGrid};
use crate::inversion::{invert, spectral_l1, tail_bound, Pathway, TruncationPair};
use crate::window::{make_window, Window, WindowSpec};

/// Slack allowed between a measured error and its a-priori bound.
pub const BOUND_SLACK: f64 = 1e-7;

/// Default ratio between the largest and smallest operator ratio accepted
/// by the stability probe.
pub const DEFAULT_ENVELOPE: f64 = 10.0;

/// One experiment: a fixture, a window and the cutoffs and exponents to
/// measure.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub fixture: Fixture,
    pub window: WindowSpec,
    pub grid: UniformGrid,
    pub p_list: Vec<LpExponent>,
    pub a_list: Vec<f64>,
    pub pathway: Pathway,
    pub seed: u64,
    /// Record wall-clock time per cutoff. Off by default so that reports
    /// are byte-reproducible.
    pub timing: bool,
}

impl SweepSpec {
    pub fn new(fixture: Fixture, window: WindowSpec, p_list: Vec<LpExponent>, a_list: Vec<f64>) -> Self {
        Self {
            fixture,
            window,
            grid: UniformGrid::default_time(),
            p_list,
            a_list,
            pathway: Pathway::Multiplier,
            seed: DEFAULT_SEED,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.a_list.is_empty() {
            return Err(Error::InvalidParameter("the A list is empty".into()));
        }
        if self.p_list.is_empty() {
            return Err(Error::InvalidParameter("the p list is empty".into()));
        }
        if let Some(a) = self.a_list.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::InvalidParameter(format!("cutoffs must be positive, got {a}")));
        }
        if self.a_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("the A list must be strictly increasing".into()));
        }
        let band = self.grid.band_limit();
        if self.a_list.iter().filter(|&&a| a >= band).count() > 1 {
            return Err(Error::InvalidParameter(format!(
                "more than one cutoff reaches the grid band {band:.6}; they would coincide after clamping"
            )));
        }
        if self.pathway == Pathway::DoubleIntegral {
            return Err(Error::UnsupportedPathway("sweeps need a truncated pathway, not double".into()));
        }
        Ok(())
    }
}

/// Measurements for one `(A, p)` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub fixture: String,
    pub window: String,
    pub pathway: String,
    pub p: LpExponent,
    pub a: f64,
    /// `||T_A f - 2pi conj(g(x0)) f||_p`.
    pub lp_error: f64,
    pub sup_error: f64,
    /// `||T_A f||_p / ||f||_p`, zero when `f = 0`.
    pub operator_ratio: f64,
    pub tail_estimate: f64,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub records: Vec<ErrorRecord>,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl ErrorReport {
    /// Records for one exponent, in cutoff order.
    pub fn for_p(&self, p: LpExponent) -> Vec<&ErrorRecord> {
        self.records.iter().filter(|r| r.p == p).collect()
    }

    /// Records whose error exceeds the a-priori bound by more than
    /// [`BOUND_SLACK`].
    pub fn bound_violations(&self) -> Vec<&ErrorRecord> {
        self.records.iter().filter(|r| r.lp_error > r.tail_estimate + BOUND_SLACK).collect()
    }
}

fn target(f: &SampledSignal, g: &Window) -> SampledSignal {
    f.scale(2.0 * PI * g.g_at_anchor().conj()).expect("finite factor")
}

pub fn run_sweep(spec: &SweepSpec) -> Result<ErrorReport> {
    spec.validate()?;
    let f = spec.fixture.sample(&spec.grid, spec.seed);
    run_sweep_on(&f, spec.fixture.name(), spec)
}

/// Runs the sweep on a given signal instead of the fixture; `spec.grid` and
/// `spec.fixture` are ignored and `label` names the signal in the report.
pub fn run_sweep_on(f: &SampledSignal, label: &str, spec: &SweepSpec) -> Result<ErrorReport> {
    let spec = &SweepSpec { grid: *f.grid(), ..spec.clone() };
    spec.validate()?;
    let g = make_window(&spec.window)?;
    g.require_invertible()?;
    let f = f.clone();
    let limit = target(&f, &g);
    let spectral = UniformGrid::spectral_for(&spec.grid);
    let f_hat = forward_ft(&f, &spectral);
    let window = g.label();

    let per_a: Vec<Result<(Vec<ErrorRecord>, Vec<String>)>> = spec
        .a_list
        .par_iter()
        .map(|&a| {
            let start = Instant::now();
            let rec = invert(&f, &g, TruncationPair::symmetric(a)?, spec.pathway)?;
            let runtime_ms = if spec.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
            let trunc = TruncationPair::new(rec.diagnostics.a1, rec.diagnostics.a2)?;
            let bound = tail_bound(&f_hat, &g, trunc, spec.grid.length());
            let err = rec.signal.sub(&limit)?;
            let sup_error = err.max_abs();
            let records = spec
                .p_list
                .iter()
                .map(|&p| {
                    let norm_f = lp_norm(&f, p);
                    ErrorRecord {
                        fixture: label.to_string(),
                        window: window.clone(),
                        pathway: spec.pathway.name().to_string(),
                        p,
                        a,
                        lp_error: lp_norm(&err, p),
                        sup_error,
                        operator_ratio: if norm_f == 0.0 { 0.0 } else { lp_norm(&rec.signal, p) / norm_f },
                        tail_estimate: bound.lp(p),
                        runtime_ms,
                    }
                })
                .collect();
            Ok((records, rec.diagnostics.warnings))
        })
        .collect();

    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for r in per_a {
        let (recs, warns) = r?;
        records.extend(recs);
        for w in warns {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
    }
    Ok(ErrorReport { records, seed: spec.seed, warnings })
}

/// Empirical maximal function for one signal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximalEntry {
    pub fixture: String,
    /// `||max_A |T_A f| ||_p / ||f||_p`.
    pub ratio: f64,
    /// `(1/2pi) ||g^||_1 ||f^||_1 |D|^{1/p} / ||f||_p`, a bound on `ratio`.
    pub envelope: f64,
    pub within_envelope: bool,
}

/// `x -> max_A |(T_A f)(x)|` over the cutoff list, normalised by `||f||_p`,
/// for each named signal.
pub fn maximal_function_probe(
    signals: &[(String, SampledSignal)],
    g: &Window,
    a_list: &[f64],
    p: LpExponent,
) -> Result<Vec<MaximalEntry>> {
    if a_list.is_empty() {
        return Err(Error::InvalidParameter("the A list is empty".into()));
    }
    signals
        .iter()
        .map(|(name, f)| {
            let norm_f = lp_norm(f, p);
            let grid = *f.grid();
            let outputs: Vec<Result<Vec<f64>>> = a_list
                .par_iter()
                .map(|&a| {
                    let r = invert(f, g, TruncationPair::symmetric(a)?, Pathway::Multiplier)?;
                    Ok(r.signal.values().iter().map(|v| v.norm()).collect())
                })
                .collect();
            let mut envelope_fn = vec![0.0f64; grid.len()];
            for o in outputs {
                for (m, v) in envelope_fn.iter_mut().zip(o?) {
                    *m = m.max(v);
                }
            }
            let max_fn = SampledSignal::from_real(grid, &envelope_fn)?;
            let f_hat = forward_ft(f, &UniformGrid::spectral_for(&grid));
            let measure = match p {
                LpExponent::Infinity => 1.0,
                LpExponent::Finite(p) => grid.length().powf(1.0 / p),
            };
            let (ratio, envelope) = if norm_f == 0.0 {
                (0.0, 0.0)
            } else {
                (
                    lp_norm(&max_fn, p) / norm_f,
                    g.l1_norm_g_hat() * spectral_l1(&f_hat) * measure / (2.0 * PI * norm_f),
                )
            };
            Ok(MaximalEntry {
                fixture: name.clone(),
                ratio,
                envelope,
                within_envelope: ratio <= envelope * (1.0 + 1e-9) + BOUND_SLACK,
            })
        })
        .collect()
}

/// Settings for [`stability_probe`].
#[derive(Debug, Clone)]
pub struct StabilitySpec {
    pub eps: Vec<f64>,
    pub trials: usize,
    /// Highest angular frequency present in the perturbations.
    pub band: f64,
    pub p: LpExponent,
    pub seed: u64,
    pub envelope: f64,
}

impl Default for StabilitySpec {
    fn default() -> Self {
        Self {
            eps: vec![1e-3],
            trials: 20,
            band: 8.0,
            p: LpExponent::Finite(2.0),
            seed: DEFAULT_SEED,
            envelope: DEFAULT_ENVELOPE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub truncations: Vec<(f64, f64)>,
    /// `ratios[k][trial][e] = ||T_k delta||_p / eps_e`.
    pub ratios: Vec<Vec<Vec<f64>>>,
    /// Largest ratio for each truncation.
    pub max_ratio: Vec<f64>,
    /// `max(max_ratio) / min(max_ratio)`.
    pub spread: f64,
    pub within_envelope: bool,
    pub seed: u64,
    pub notes: Vec<String>,
}

/// Sensitivity of `T_{A1,A2}` to random perturbations `delta` of `f` with
/// `||delta||_p = eps`. By linearity the output changes by exactly
/// `T delta`, which is evaluated directly.
pub fn stability_probe(
    f: &SampledSignal,
    g: &Window,
    truncs: &[TruncationPair],
    spec: &StabilitySpec,
) -> Result<StabilityReport> {
    if truncs.is_empty() {
        return Err(Error::InvalidParameter("the truncation list is empty".into()));
    }
    let grid = *f.grid();
    let mut notes = Vec::new();
    let unit: Vec<SampledSignal> = (0..spec.trials)
        .map(|t| {
            let d = band_limited_noise(&grid, spec.band, spec.seed.wrapping_add(t as u64));
            let n = lp_norm(&d, spec.p);
            if n == 0.0 {
                d
            } else {
                d.scale(Complex64::new(1.0 / n, 0.0)).expect("finite scale")
            }
        })
        .collect();
    if spec.eps.contains(&0.0) {
        notes.push("eps = 0 gives delta = 0; its ratio is recorded as 0".into());
    }
    let ratios: Vec<Vec<Vec<f64>>> = truncs
        .par_iter()
        .map(|&t| {
            unit.iter()
                .map(|u| {
                    spec.eps
                        .iter()
                        .map(|&e| {
                            if e == 0.0 || u.is_zero() {
                                return Ok(0.0);
                            }
                            let delta = u.scale(Complex64::new(e, 0.0))?;
                            let out = invert(&delta, g, t, Pathway::Multiplier)?;
                            Ok(lp_norm(&out.signal, spec.p) / e)
                        })
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<Vec<f64>>>>()
        })
        .collect::<Result<_>>()?;
    let max_ratio: Vec<f64> = ratios
        .iter()
        .map(|per_t| per_t.iter().flatten().copied().fold(0.0, f64::max))
        .collect();
    let hi = max_ratio.iter().copied().fold(0.0, f64::max);
    let lo = max_ratio.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if lo > 0.0 { hi / lo } else if hi == 0.0 { 1.0 } else { f64::INFINITY };
    Ok(StabilityReport {
        truncations: truncs.iter().map(|t| (t.a1(), t.a2())).collect(),
        ratios,
        max_ratio,
        spread,
        within_envelope: spread <= spec.envelope,
        seed: spec.seed,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub a_list: Vec<f64>,
    /// `max_x |(T_A f)(x) - 2pi conj(g(x0)) f(x)|` per cutoff.
    pub sup_errors: Vec<f64>,
    /// Whether the errors never increase after the first cutoff.
    pub non_increasing_after_first: bool,
}

impl DecayReport {
    pub fn final_error(&self) -> f64 {
        *self.sup_errors.last().unwrap_or(&0.0)
    }
}

/// Grid-wide pointwise error per cutoff, a proxy for almost-everywhere
/// convergence on smooth signals.
pub fn pointwise_decay_probe(f: &SampledSignal, g: &Window, a_list: &[f64], pathway: Pathway) -> Result<DecayReport> {
    g.require_invertible()?;
    let limit = target(f, g);
    let sup_errors = a_list
        .par_iter()
        .map(|&a| {
            let r = invert(f, g, TruncationPair::symmetric(a)?, pathway)?;
            Ok(r.signal.sub(&limit)?.max_abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let non_increasing_after_first = sup_errors.iter().skip(1).collect::<Vec<_>>().windows(2).all(|w| w[1] <= w[0]);
    Ok(DecayReport { a_list: a_list.to_vec(), sup_errors, non_increasing_after_first })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::WindowKind;

    #[test]
    fn sweep_validation() {
        let spec = |a: Vec<f64>| SweepSpec::new(Fixture::Gaussian, WindowSpec::default(), vec![LpExponent::Finite(2.0)], a);
        assert!(spec(vec![]).validate().is_err());
        assert!(spec(vec![2.0, 1.0]).validate().is_err());
        assert!(spec(vec![1.0, 1.0]).validate().is_err());
        assert!(spec(vec![-1.0, 1.0]).validate().is_err());
        assert!(spec(vec![1.0, 1e6, 2e6]).validate().is_err());
        assert!(spec(vec![1.0, 2.0]).validate().is_ok());
    }

    #[test]
    fn zero_fixture_sweep_is_exactly_zero() {
        let mut s = SweepSpec::new(
            Fixture::Zero,
            WindowSpec::new(WindowKind::Hann, 1.0, 0.0),
            vec![LpExponent::Finite(2.0), LpExponent::Infinity],
            vec![1.0, 4.0],
        );
        s.grid = UniformGrid::symmetric(8.0, 256).unwrap();
        let r = run_sweep(&s).unwrap();
        assert_eq!(r.records.len(), 4);
        assert!(r.records.iter().all(|r| r.lp_error == 0.0 && r.sup_error == 0.0 && r.operator_ratio == 0.0));
    }

    #[test]
    fn degenerate_anchor_rejected_up_front() {
        let s = SweepSpec::new(
            Fixture::Gaussian,
            WindowSpec::new(WindowKind::Hann, 1.0, 1.0),
            vec![LpExponent::Finite(2.0)],
            vec![1.0],
        );
        assert!(matches!(run_sweep(&s), Err(Error::DegenerateAnchor { .. })));
    }
}
