//! The logarithmic integral with lower limit 2.

use crate::error::{domain, Result};

/// `∫_2^x dt / ln t`, by adaptive Simpson quadrature in `u = ln t`.
pub fn li(x: f64) -> f64 {
    try_li(x).expect("li requires x >= 2")
}

pub fn try_li(x: f64) -> Result<f64> {
    if !(x >= 2.0) || !x.is_finite() {
        return domain(format!("li is defined here for x >= 2, got {x}"));
    }
    if x == 2.0 {
        return Ok(0.0);
    }
    let f = |u: f64| u.exp() / u;
    let (a, b) = (2f64.ln(), x.ln());
    let whole = simpson(f, a, b);
    Ok(adaptive(&f, a, b, whole, 1e-13 * whole.abs().max(1.0), 48))
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = simpson(f, a, m);
    let right = simpson(f, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, left, tol / 2.0, depth - 1) + adaptive(f, m, b, right, tol / 2.0, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// li from 0 via the convergent series γ + ln ln x + Σ (ln x)^n / (n·n!),
    /// shifted to the lower limit 2.
    fn series_oracle(x: f64) -> f64 {
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        const LI2: f64 = 1.045_163_780_117_493;
        let l = x.ln();
        let mut term = 1.0;
        let mut sum = 0.0;
        for n in 1..400 {
            term *= l / n as f64;
            sum += term / n as f64;
        }
        EULER_GAMMA + l.ln() + sum - LI2
    }

    #[test]
    fn examples() {
        assert_eq!(li(2.0), 0.0);
        assert!((li(10.0) - 5.120_435_724_669_805).abs() < 1e-9);
        assert!((li(1e6) / 78_626.503_995_682 - 1.0).abs() < 1e-9);
        assert!(try_li(1.5).is_err());
    }

    #[test]
    fn matches_series_oracle() {
        for x in [2.5, 3.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8] {
            let rel = (li(x) - series_oracle(x)).abs() / series_oracle(x);
            assert!(rel < 1e-10, "x={x} rel={rel}");
        }
    }

    #[test]
    fn monotone() {
        let mut prev = 0.0;
        for k in 1..200 {
            let v = li(2.0 + k as f64 * 37.0);
            assert!(v > prev);
            prev = v;
        }
    }
}
