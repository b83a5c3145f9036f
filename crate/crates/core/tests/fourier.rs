use std::f64::consts::PI;

use proptest::prelude::*;
use wfti::fixtures::Fixture;
use wfti::fourier::{dirichlet_kernel, dirichlet_partial_sum, dirichlet_partial_sum_spectral, forward_ft, inverse_ft, modulate, SpectrumSignal};
use wfti::{lp_norm, Complex64, LpExponent, SampledSignal, UniformGrid};

fn gaussian(grid: UniformGrid) -> SampledSignal {
    SampledSignal::from_fn(grid, |x| Complex64::new((-x * x / 2.0).exp(), 0.0)).unwrap()
}

#[test]
fn forward_transform_of_gaussian() {
    let grid = UniformGrid::default_time();
    let spectral = UniformGrid::spectral_for(&grid);
    let f_hat = forward_ft(&gaussian(grid), &spectral);
    let err = f_hat
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let w = spectral.point(j);
            (v - (2.0 * PI).sqrt() * (-w * w / 2.0).exp()).norm()
        })
        .fold(0.0, f64::max);
    assert!(err < 1e-11, "{err}");
}

#[test]
fn transform_of_shifted_grid_carries_origin_phase() {
    // e^{-(x-3)^2/2} on a grid starting at 0: f^(w) = sqrt(2pi) e^{-w^2/2} e^{-3iw}.
    let grid = UniformGrid::with_origin(-13.0, 0.01, 3201).unwrap();
    let f = SampledSignal::from_fn(grid, |x| Complex64::new((-(x - 3.0) * (x - 3.0) / 2.0).exp(), 0.0)).unwrap();
    for w in [-2.5, 0.0, 1.0, 4.0] {
        let v = forward_ft(&f, &UniformGrid::new(w, w + 1.0, 2).unwrap()).values()[0];
        let expect = (2.0 * PI).sqrt() * (-w * w / 2.0).exp() * Complex64::cis(-3.0 * w);
        assert!((v - expect).norm() < 1e-12, "w = {w}");
    }
}

#[test]
fn round_trip_on_every_fixture() {
    let grid = UniformGrid::default_time();
    let spectral = UniformGrid::spectral_for(&grid);
    for fx in Fixture::ALL {
        let f = fx.sample(&grid, 11);
        let back = inverse_ft(&forward_ft(&f, &spectral), &grid);
        let scale = lp_norm(&f, LpExponent::Infinity).max(1.0);
        let err = back.sub(&f).unwrap().max_abs() / scale;
        assert!(err < 1e-8, "{fx}: {err}");
    }
}

#[test]
fn dirichlet_is_idempotent_on_band_limited_input() {
    // Gaussians of width sigma carry e^{-sigma^2 A^2 / 2} of their spectrum
    // beyond A; below 1e-16 they are band-limited to working precision.
    let grid = UniformGrid::default_time();
    for (sigma, a) in [(1.0, 10.0), (1.0, 16.0), (2.0, 5.0), (2.0, 8.0)] {
        let f = SampledSignal::from_fn(grid, |x| Complex64::new((-x * x / (2.0 * sigma * sigma)).exp(), 0.0)).unwrap();
        let once = dirichlet_partial_sum_spectral(&f, a).unwrap().value;
        let twice = dirichlet_partial_sum_spectral(&once, a).unwrap().value;
        assert!(twice.sub(&once).unwrap().max_abs() < 1e-8, "sigma = {sigma}, A = {a}");
    }
}

#[test]
fn direct_partial_sum_matches_sine_integral() {
    // S_A of the indicator of [-1, 1] is (Si(A(x+1)) - Si(A(x-1))) / pi.
    let grid = UniformGrid::symmetric(1.0, 4001).unwrap();
    let f = SampledSignal::from_fn(grid, |_| Complex64::new(1.0, 0.0)).unwrap();
    let a = 3.0;
    let s = dirichlet_partial_sum(&f, a).unwrap().value;
    for (k, x) in [(2000, 0.0), (3000, 0.5), (4000, 1.0)] {
        let reference = wfti::quad::integrate_adaptive(&|y| dirichlet_kernel(a, x - y), -1.0, 1.0, 1e-14);
        assert!((s.values()[k].re - reference).abs() < 1e-6, "x = {x}");
    }
}

#[test]
fn dirichlet_band_capture_is_monotone() {
    let f = gaussian(UniformGrid::default_time());
    let errs: Vec<f64> = [1.0, 2.0, 4.0, 8.0, 16.0]
        .into_iter()
        .map(|a| {
            let s = dirichlet_partial_sum_spectral(&f, a).unwrap().value;
            lp_norm(&s.sub(&f).unwrap(), LpExponent::Finite(2.0))
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{errs:?}");
    assert!(errs[4] < 1e-12, "{errs:?}");
}

#[test]
fn inverse_of_zero_spectrum_is_zero() {
    let spectral = UniformGrid::symmetric(10.0, 101).unwrap();
    let z = SpectrumSignal::new(spectral, vec![Complex64::new(0.0, 0.0); 101]).unwrap();
    assert!(inverse_ft(&z, &UniformGrid::symmetric(3.0, 31).unwrap()).is_zero());
}

proptest! {
    #[test]
    fn modulation_is_an_isometry(
        values in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 2..64),
        omega in -50.0..50.0f64,
        p in prop_oneof![(1.0001..8.0f64).prop_map(LpExponent::Finite), Just(LpExponent::Infinity)],
    ) {
        let n = values.len();
        let grid = UniformGrid::new(-1.0, 2.0, n).unwrap();
        let f = SampledSignal::new(grid, values.into_iter().map(|(r, i)| Complex64::new(r, i)).collect()).unwrap();
        let m = modulate(&f, omega);
        let (a, b) = (lp_norm(&m, p), lp_norm(&f, p));
        prop_assert!((a - b).abs() <= 1e-13 * b.max(1e-300));
    }

    #[test]
    fn forward_transform_is_linear(
        alpha in (-2.0..2.0f64, -2.0..2.0f64),
        shift in -2.0..2.0f64,
    ) {
        let grid = UniformGrid::symmetric(12.0, 301).unwrap();
        let spectral = UniformGrid::symmetric(6.0, 61).unwrap();
        let f = gaussian(grid);
        let h = SampledSignal::from_fn(grid, |x| Complex64::new(0.0, (-(x - shift).powi(2)).exp())).unwrap();
        let alpha = Complex64::new(alpha.0, alpha.1);
        let lhs = forward_ft(&f.combine(alpha, &h, Complex64::new(1.0, 0.0)).unwrap(), &spectral);
        let (ff, hh) = (forward_ft(&f, &spectral), forward_ft(&h, &spectral));
        for j in 0..spectral.len() {
            let rhs = alpha * ff.values()[j] + hh.values()[j];
            prop_assert!((lhs.values()[j] - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }
    }
}
