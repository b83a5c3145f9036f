use proptest::prelude::*;
use wfti::{lp_norm, quadrature, Complex64, LpExponent, SampledSignal, UniformGrid};

fn grid() -> UniformGrid {
    UniformGrid::new(-3.0, 5.0, 33).unwrap()
}

fn signal() -> impl Strategy<Value = SampledSignal> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 33)
        .prop_map(|v| SampledSignal::new(grid(), v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect()).unwrap())
}

fn exponent() -> impl Strategy<Value = LpExponent> {
    prop_oneof![
        (1.0001..12.0f64).prop_map(|p| LpExponent::new(p).unwrap()),
        Just(LpExponent::Infinity),
        Just(LpExponent::Finite(2.0)),
    ]
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(r, i)| Complex64::new(r, i))
}

proptest! {
    #[test]
    fn triangle_inequality(a in signal(), b in signal(), p in exponent()) {
        let sum = a.combine(Complex64::new(1.0, 0.0), &b, Complex64::new(1.0, 0.0)).unwrap();
        let rhs = lp_norm(&a, p) + lp_norm(&b, p);
        prop_assert!(lp_norm(&sum, p) <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn norm_scales_with_modulus(a in signal(), c in complex(), p in exponent()) {
        let lhs = lp_norm(&a.scale(c).unwrap(), p);
        let rhs = c.norm() * lp_norm(&a, p);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn quadrature_is_linear(a in signal(), b in signal(), alpha in complex(), beta in complex()) {
        let lhs = quadrature(&a.combine(alpha, &b, beta).unwrap()).unwrap();
        let rhs = alpha * quadrature(&a).unwrap() + beta * quadrature(&b).unwrap();
        let scale = alpha.norm() * quadrature_abs(&a) + beta.norm() * quadrature_abs(&b);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale.max(1.0));
    }
}

fn quadrature_abs(s: &SampledSignal) -> f64 {
    lp_norm(s, LpExponent::extended(1.0).unwrap())
}

#[test]
fn trapezoid_refinement_is_second_order() {
    // A smooth function that does not vanish at the interval ends, so the
    // trapezoid rule shows its generic dx^2 behaviour.
    let exact = 0.5 * std::f64::consts::PI.sqrt() * statrs::function::erf::erf(2.0);
    let err = |n: usize| {
        let g = UniformGrid::new(0.0, 2.0, n).unwrap();
        let s = SampledSignal::from_fn(g, |x| Complex64::new((-x * x).exp(), 0.0)).unwrap();
        (quadrature(&s).unwrap().re - exact).abs()
    };
    let errors: Vec<f64> = [17, 33, 65, 129, 257].into_iter().map(err).collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 1.9, "measured order {order} from {errors:?}");
    }
}

#[test]
fn lp_norm_of_gaussian_matches_closed_form() {
    let s = SampledSignal::from_fn(UniformGrid::default_time(), |x| Complex64::new((-x * x / 2.0).exp(), 0.0)).unwrap();
    // ||e^{-x^2/2}||_p = (2pi/p)^{1/(2p)}
    for p in [1.5, 2.0, 4.0] {
        let expect = (2.0 * std::f64::consts::PI / p).powf(0.5 / p);
        assert!((lp_norm(&s, LpExponent::new(p).unwrap()) - expect).abs() < 1e-12);
    }
    // N is even, so the peak falls between the two central samples.
    let half = UniformGrid::default_time().spacing() / 2.0;
    assert_eq!(lp_norm(&s, LpExponent::Infinity), (-half * half / 2.0).exp());
}
