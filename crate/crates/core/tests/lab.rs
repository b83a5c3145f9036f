use wfti::fixtures::Fixture;
use wfti::lab::{
    maximal_function_probe, pointwise_decay_probe, run_sweep, stability_probe, StabilitySpec, SweepSpec, BOUND_SLACK,
};
use wfti::{LpExponent, Pathway, TruncationPair, UniformGrid, Window, WindowKind, WindowSpec};

fn exponents() -> Vec<LpExponent> {
    vec![LpExponent::Finite(1.5), LpExponent::Finite(2.0), LpExponent::Finite(4.0), LpExponent::Infinity]
}

fn window_specs() -> [WindowSpec; 3] {
    [
        WindowSpec::new(WindowKind::Gaussian, 1.0, 0.0),
        WindowSpec::new(WindowKind::Hann, 2.0, 0.25),
        WindowSpec::new(WindowKind::Triangular, 1.5, 0.0),
    ]
}

#[test]
fn errors_never_exceed_the_tail_bound() {
    for fx in [Fixture::Gaussian, Fixture::Bump, Fixture::Chirp, Fixture::Noise] {
        for w in window_specs() {
            let spec = SweepSpec::new(fx, w, exponents(), vec![1.0, 2.0, 4.0, 8.0, 16.0]);
            let report = run_sweep(&spec).unwrap();
            assert_eq!(report.records.len(), 20);
            let bad = report.bound_violations();
            assert!(bad.is_empty(), "{fx} / {w:?}: {bad:?}");
            for r in &report.records {
                assert!(r.lp_error <= r.tail_estimate + BOUND_SLACK);
            }
        }
    }
}

#[test]
fn reports_are_reproducible() {
    let mut spec = SweepSpec::new(
        Fixture::Noise,
        WindowSpec::new(WindowKind::Hann, 1.0, 0.0),
        exponents(),
        vec![2.0, 8.0, 32.0],
    );
    spec.seed = 99;
    let a = run_sweep(&spec).unwrap();
    let b = run_sweep(&spec).unwrap();
    assert_eq!(a, b);
    for (x, y) in a.records.iter().zip(&b.records) {
        assert_eq!(x.lp_error.to_bits(), y.lp_error.to_bits());
    }
    spec.seed = 100;
    assert_ne!(run_sweep(&spec).unwrap().records, a.records);
}

#[test]
fn pathway_reports_agree() {
    let p2 = LpExponent::Finite(2.0);
    for (fx, w) in [
        (Fixture::Gaussian, window_specs()[0]),
        (Fixture::Chirp, window_specs()[1]),
        (Fixture::Bump, window_specs()[2]),
    ] {
        let mut spec = SweepSpec::new(fx, w, vec![p2], vec![2.0, 4.0, 8.0]);
        let multiplier = run_sweep(&spec).unwrap();
        let f_norm = wfti::lp_norm(&fx.sample(&spec.grid, spec.seed), p2);
        for (pathway, tol) in [(Pathway::Kernel, 1e-6), (Pathway::Modulation, 1e-5)] {
            spec.pathway = pathway;
            let other = run_sweep(&spec).unwrap();
            for (m, o) in multiplier.records.iter().zip(&other.records) {
                // A relative L2 disagreement `tol` between outputs moves the
                // error by at most `tol ||T f||_2`.
                let allowed = tol * m.operator_ratio * f_norm;
                assert!(
                    (m.lp_error - o.lp_error).abs() <= allowed,
                    "{fx} {pathway} A = {}: {} vs {}",
                    m.a,
                    m.lp_error,
                    o.lp_error
                );
            }
        }
    }
}

#[test]
fn sweep_rejects_bad_requests() {
    let w = WindowSpec::default();
    assert!(run_sweep(&SweepSpec::new(Fixture::Gaussian, w, exponents(), vec![])).is_err());
    let mut spec = SweepSpec::new(Fixture::Gaussian, w, exponents(), vec![1.0]);
    spec.pathway = Pathway::DoubleIntegral;
    assert!(run_sweep(&spec).is_err());
    let degenerate = WindowSpec::new(WindowKind::Hann, 1.0, 1.0);
    assert!(matches!(
        run_sweep(&SweepSpec::new(Fixture::Gaussian, degenerate, exponents(), vec![1.0])),
        Err(wfti::Error::DegenerateAnchor { .. })
    ));
}

#[test]
fn gaussian_decay_is_monotone() {
    let grid = UniformGrid::default_time();
    let f = Fixture::Gaussian.sample(&grid, 0);
    let g = Window::gaussian(1.0).unwrap();
    let d = pointwise_decay_probe(&f, &g, &[1.0, 2.0, 4.0, 8.0, 16.0], Pathway::Multiplier).unwrap();
    assert!(d.non_increasing_after_first, "{:?}", d.sup_errors);
    assert!(d.final_error() < 1e-6);
}

#[test]
fn stability_ratios_are_scale_invariant() {
    let grid = UniformGrid::default_time();
    let f = Fixture::Gaussian.sample(&grid, 0);
    let g = Window::gaussian(1.0).unwrap();
    let truncs: Vec<TruncationPair> = [2.0, 4.0, 8.0, 16.0].iter().map(|&a| TruncationPair::symmetric(a).unwrap()).collect();
    let spec = StabilitySpec { eps: vec![1e-3, 2e-3], trials: 5, ..StabilitySpec::default() };
    let r = stability_probe(&f, &g, &truncs, &spec).unwrap();
    assert!(r.within_envelope, "spread {}", r.spread);
    for per_t in &r.ratios {
        for trial in per_t {
            assert!((trial[0] - trial[1]).abs() <= 1e-10 * trial[0]);
        }
    }
    assert_eq!(stability_probe(&f, &g, &truncs, &spec).unwrap(), r);
}

#[test]
fn maximal_function_stays_within_envelope() {
    let grid = UniformGrid::default_time();
    let signals: Vec<(String, _)> =
        [Fixture::Gaussian, Fixture::Bump, Fixture::Chirp].iter().map(|fx| (fx.name().to_string(), fx.sample(&grid, 0))).collect();
    let g = Window::hann(2.0).unwrap();
    for p in exponents() {
        let entries = maximal_function_probe(&signals, &g, &[1.0, 2.0, 4.0, 8.0, 16.0], p).unwrap();
        assert_eq!(entries.len(), 3);
        for e in entries {
            assert!(e.within_envelope && e.ratio > 0.0, "{e:?}");
        }
    }
}
