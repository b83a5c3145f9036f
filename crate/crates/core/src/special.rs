//! Special functions that are not in `std`.

use std::f64::consts::FRAC_PI_2;

use crate::quad::{gl16, gl_panel};

/// `pi/2 - Si(x)` for `x >= 0`, where `Si` is the sine integral.
pub fn sine_integral_complement(x: f64) -> f64 {
    assert!(x >= 0.0);
    if x < 30.0 {
        FRAC_PI_2 - sine_integral(x)
    } else {
        // pi/2 - Si(x) = f(x) cos x + g(x) sin x with the asymptotic
        // auxiliary series truncated before their terms start growing.
        let inv2 = 1.0 / (x * x);
        let (mut f, mut g) = (0.0, 0.0);
        let (mut tf, mut tg) = (1.0, 1.0);
        for k in 0..12 {
            f += tf;
            g += tg;
            let k2 = 2.0 * k as f64;
            tf *= -(k2 + 1.0) * (k2 + 2.0) * inv2;
            tg *= -(k2 + 2.0) * (k2 + 3.0) * inv2;
        }
        f / x * x.cos() + g * inv2 * x.sin()
    }
}

/// `Si(x) = int_0^x sin(t)/t dt`.
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x >= 30.0 {
        return FRAC_PI_2 - sine_integral_complement(x);
    }
    let panels = x.ceil().max(1.0) as usize;
    let h = x / panels as f64;
    (0..panels)
        .map(|i| {
            let a = h * i as f64;
            gl_panel(gl16(), a, a + h, |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t })
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_integral_reference_values() {
        // Abramowitz & Stegun table 5.1
        assert!((sine_integral(1.0) - 0.946_083_070_367_183).abs() < 1e-14);
        assert!((sine_integral(10.0) - 1.658_347_594_218_874).abs() < 1e-13);
        assert!(sine_integral(0.0) == 0.0);
    }

    #[test]
    fn complement_is_continuous_at_switch() {
        for x in [30.0f64, 35.5, 61.0] {
            let panels = x.ceil() as usize;
            let h = x / panels as f64;
            let numeric: f64 = (0..panels)
                .map(|i| gl_panel(gl16(), h * i as f64, h * (i + 1) as f64, |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t }))
                .sum();
            assert!((FRAC_PI_2 - numeric - sine_integral_complement(x)).abs() < 1e-13, "x = {x}");
        }
    }
}
