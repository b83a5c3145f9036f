//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use statrs::distribution::{ContinuousCDF, Normal};
use wfti::audio::{roundtrip, Audio};
use wfti::fixtures::{linear_chirp, Fixture};
use wfti::fourier::forward_ft;
use wfti::inversion::spectral_l1;
use wfti::lab::{pointwise_decay_probe, run_sweep, stability_probe, StabilitySpec, SweepSpec, BOUND_SLACK};
use wfti::stft::{check_fourier_domain_identity, default_stft_grids};
use wfti::{
    forward_stft, invert_double_integral, invert_kernel, invert_modulation, invert_multiplier, lp_norm, multiplier_eval,
    relative_l2, LpExponent, Pathway, TruncationPair, UniformGrid, Window, WindowKind, WindowSpec,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn windows() -> [(&'static str, Window); 3] {
    [
        ("gaussian", Window::gaussian(1.0).unwrap()),
        ("hann", Window::hann(1.0).unwrap()),
        ("triangular", Window::triangular(1.0).unwrap()),
    ]
}

fn grid() -> UniformGrid {
    UniformGrid::default_time()
}

fn pathway_equivalence() -> Outcome {
    let start = Instant::now();
    let (mut worst_k, mut worst_m) = (0.0f64, 0.0f64);
    for fx in [Fixture::Gaussian, Fixture::Bump, Fixture::Chirp] {
        let f = fx.sample(&grid(), 0);
        for (_, g) in windows() {
            for a in [4.0, 8.0] {
                let t = TruncationPair::symmetric(a).unwrap();
                let m = invert_multiplier(&f, &g, t).unwrap().signal;
                let k = invert_kernel(&f, &g, t).unwrap().signal;
                let d = invert_modulation(&f, &g, a).unwrap().signal;
                worst_k = worst_k.max(relative_l2(&k, &m).unwrap());
                worst_m = worst_m.max(relative_l2(&d, &m).unwrap());
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    Outcome {
        pass: worst_k < 1e-6 && worst_m < 1e-5 && elapsed < 60.0,
        detail: format!(
            "18 cases: kernel vs multiplier {worst_k:.2e} (< 1e-6), modulation vs multiplier {worst_m:.2e} (< 1e-5), {elapsed:.1} s (< 60 s)"
        ),
    }
}

fn lp_convergence() -> Outcome {
    let ps = [LpExponent::Finite(1.5), LpExponent::Finite(2.0), LpExponent::Finite(4.0)];
    let spec = SweepSpec::new(Fixture::Gaussian, WindowSpec::default(), ps.to_vec(), vec![1.0, 2.0, 4.0, 8.0, 16.0]);
    let report = run_sweep(&spec).unwrap();
    let f = Fixture::Gaussian.sample(&spec.grid, spec.seed);
    let mut pass = true;
    let mut parts = Vec::new();
    for p in ps {
        let recs = report.for_p(p);
        let decreasing = recs.windows(2).all(|w| w[1].lp_error < w[0].lp_error);
        let last = recs.last().unwrap();
        let below = last.lp_error <= last.tail_estimate + BOUND_SLACK;
        let target = 1e-3 * 2.0 * PI * lp_norm(&f, p);
        let tight = last.tail_estimate < target;
        pass &= decreasing && below && tight;
        parts.push(format!(
            "p={p}: decreasing={decreasing}, err(16)={:.2e} vs bound {:.2e} (+{BOUND_SLACK:e}), bound < {target:.2e}: {tight}",
            last.lp_error, last.tail_estimate
        ));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn pointwise_decay() -> Outcome {
    let f = Fixture::Gaussian.sample(&grid(), 0);
    let g = Window::gaussian(1.0).unwrap();
    let d = pointwise_decay_probe(&f, &g, &[1.0, 2.0, 4.0, 8.0, 16.0], Pathway::Multiplier).unwrap();
    Outcome {
        pass: d.final_error() < 1e-6 && d.non_increasing_after_first,
        detail: format!(
            "sup errors {:?}, A=16: {:.2e} (< 1e-6), non-increasing after first: {}",
            d.sup_errors.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>(),
            d.final_error(),
            d.non_increasing_after_first
        ),
    }
}

fn sup_bound() -> Outcome {
    let spectral = UniformGrid::spectral_for(&grid());
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for fx in Fixture::ALL {
        let f = fx.sample(&grid(), 0);
        let f_hat_l1 = spectral_l1(&forward_ft(&f, &spectral));
        for (_, g) in windows() {
            let bound = g.l1_norm_g_hat() * f_hat_l1 / (2.0 * PI);
            for (a1, a2) in [(4.0, 4.0), (8.0, 8.0), (1.0, 7.0), (5.0, 2.0)] {
                let t = TruncationPair::new(a1, a2).unwrap();
                for out in [invert_multiplier(&f, &g, t).unwrap(), invert_kernel(&f, &g, t).unwrap()] {
                    worst = worst.max(out.signal.max_abs() - bound);
                    cases += 1;
                }
            }
        }
    }
    Outcome {
        pass: worst <= 1e-8,
        detail: format!("{cases} cases (multiplier and kernel): max(||T f||_inf - bound) = {worst:.3e} (<= 1e-8)"),
    }
}

fn multiplier_bounds() -> Outcome {
    let spectral = UniformGrid::spectral_for(&grid());
    let mut pass = true;
    let (mut worst_sup, mut worst_tv) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (_, g) in windows() {
        let l1 = g.l1_norm_g_hat();
        for (a1, a2) in [(4.0, 4.0), (8.0, 8.0), (1.0, 7.0), (5.0, 2.0), (3.0, 3.0)] {
            let h = multiplier_eval(&g, TruncationPair::new(a1, a2).unwrap(), &spectral);
            worst_sup = worst_sup.max(h.max_abs() - l1);
            worst_tv = worst_tv.max(h.total_variation_estimate - 2.0 * l1);
        }
    }
    pass &= worst_sup <= 0.0 && worst_tv <= 1e-6;
    let g = Window::gaussian(1.0).unwrap();
    let origin = UniformGrid::new(0.0, 1.0, 2).unwrap();
    let h0 = multiplier_eval(&g, TruncationPair::symmetric(3.0).unwrap(), &origin).samples[0];
    let n = Normal::standard();
    let expect = 2.0 * PI * (n.cdf(3.0) - n.cdf(-3.0));
    let err = (h0 - expect).norm();
    pass &= err < 1e-4;
    Outcome {
        pass,
        detail: format!(
            "max(|h| - ||g^||_1) = {worst_sup:.2e} (<= 0), max(TV - 2||g^||_1) = {worst_tv:.2e} (<= 1e-6), h(0) = {:.6} vs {expect:.6} (err {err:.1e} < 1e-4)",
            h0.re
        ),
    }
}

fn fourier_domain_identity() -> Outcome {
    let lattice: Vec<(f64, f64)> =
        (0..5).flat_map(|i| (0..5).map(move |j| (-2.0 + i as f64, -2.0 + j as f64))).collect();
    let gg = check_fourier_domain_identity(&Fixture::Gaussian.sample(&grid(), 0), &Window::gaussian(1.0).unwrap(), &lattice);
    let bh = check_fourier_domain_identity(&Fixture::Bump.sample(&grid(), 0), &Window::hann(1.0).unwrap(), &lattice);
    Outcome {
        pass: gg < 1e-6 && bh < 1e-5,
        detail: format!("25-point lattice: gaussian/gaussian {gg:.2e} (< 1e-6), bump/hann {bh:.2e} (< 1e-5)"),
    }
}

fn stability() -> Outcome {
    let f = Fixture::Gaussian.sample(&grid(), 0);
    let g = Window::gaussian(1.0).unwrap();
    let truncs: Vec<TruncationPair> = [2.0, 4.0, 8.0, 16.0].iter().map(|&a| TruncationPair::symmetric(a).unwrap()).collect();
    let spec = StabilitySpec { eps: vec![1e-3, 2e-3], trials: 20, ..StabilitySpec::default() };
    let r = stability_probe(&f, &g, &truncs, &spec).unwrap();
    let scale_err = r
        .ratios
        .iter()
        .flatten()
        .map(|e| (e[0] - e[1]).abs() / e[0])
        .fold(0.0, f64::max);
    Outcome {
        pass: r.spread <= 10.0 && scale_err <= 1e-10,
        detail: format!(
            "20 perturbations, A in {{2,4,8,16}}: max ratios {:?}, spread {:.3} (<= 10), delta -> 2 delta relative change {scale_err:.1e} (<= 1e-10)",
            r.max_ratio.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>(),
            r.spread
        ),
    }
}

fn median_time(mut run: impl FnMut(), reps: usize) -> Duration {
    let mut times: Vec<Duration> = (0..reps)
        .map(|_| {
            let s = Instant::now();
            run();
            s.elapsed()
        })
        .collect();
    times.sort();
    times[reps / 2]
}

fn classical_baseline() -> Outcome {
    let f = Fixture::Gaussian.sample(&grid(), 0);
    let g = Window::gaussian(1.0).unwrap();
    let (tg, fg) = default_stft_grids(f.grid());
    let mut rel = f64::NAN;
    let double = median_time(
        || {
            let s = forward_stft(&f, &g, &tg, &fg);
            rel = relative_l2(&invert_double_integral(&s, &g).unwrap().signal, &f).unwrap();
        },
        3,
    );
    let band = TruncationPair::symmetric(grid().band_limit()).unwrap();
    let multiplier = median_time(
        || {
            invert_multiplier(&f, &g, band).unwrap();
        },
        7,
    );
    let ratio = double.as_secs_f64() / multiplier.as_secs_f64();
    Outcome {
        pass: rel < 1e-3 && ratio >= 10.0,
        detail: format!(
            "N=2048: relative L2 {rel:.2e} (< 1e-3); double integral {:.1} ms vs multiplier {:.1} ms, {ratio:.0}x slower (>= 10x)",
            double.as_secs_f64() * 1e3,
            multiplier.as_secs_f64() * 1e3
        ),
    }
}

fn audio_round_trip() -> Outcome {
    let samples = linear_chirp(8000, 1.0, 100.0, 1000.0, 0.5, 0.01);
    let audio = Audio { sample_rate: 8000, samples };
    let spec = WindowSpec::new(WindowKind::Hann, 0.01, 0.0);
    let g = wfti::make_window(&spec).unwrap();
    let (_, report) = roundtrip(&audio, &g, None).unwrap();
    Outcome {
        pass: report.snr_db >= 60.0,
        detail: format!(
            "1 s chirp 100-1000 Hz at 8 kHz, hann 20 ms, A = {:.0}: SNR {:.1} dB (>= 60 dB), after requantisation {:.1} dB",
            report.a, report.snr_db, report.snr_quantized_db
        ),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("pathway equivalence", pathway_equivalence),
        ("Lp convergence and tail bound", lp_convergence),
        ("pointwise decay", pointwise_decay),
        ("uniform sup bound", sup_bound),
        ("multiplier bounds", multiplier_bounds),
        ("Fourier-domain STFT identity", fourier_domain_identity),
        ("stability under perturbation", stability),
        ("classical double-integral baseline", classical_baseline),
        ("audio round trip", audio_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!(
                "panicked: {}",
                e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
            ),
        });
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name} [{:.1} s] {}",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
