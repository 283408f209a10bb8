//! Overflow-free hyperbolic and entropy helpers shared by the closed forms.

use std::f64::consts::LN_2;

/// `ln cosh x` without overflow, keeping relative precision near zero.
pub fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    if x < 1.0 {
        let s = (0.5 * x).sinh();
        (2.0 * s * s).ln_1p()
    } else {
        x + (-2.0 * x).exp().ln_1p() - LN_2
    }
}

/// `e^x - 1 - x` with full relative precision near zero.
pub fn expm1_minus_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let mut term = 0.5 * x * x;
        let mut sum = term;
        let mut n = 2.0;
        while term.abs() > 1e-17 * sum.abs() {
            n += 1.0;
            term *= x / n;
            sum += term;
        }
        sum
    } else {
        x.exp_m1() - x
    }
}

/// `1 - tanh x` for `x >= 0`, accurate when `tanh x` rounds to one.
pub fn one_minus_tanh(x: f64) -> f64 {
    let e = (-2.0 * x).exp();
    2.0 * e / (1.0 + e)
}

/// `ln(1 + e^y)`.
pub fn softplus(y: f64) -> f64 {
    y.max(0.0) + (-y.abs()).exp().ln_1p()
}

/// `ln(1 + sinh^2(x) * s2)` for `x >= 0`, switching to the asymptotic form
/// once `x` exceeds `threshold` (sinh^2 overflows near x = 355).
pub fn ln1p_sinh2_scaled(x: f64, s2: f64, threshold: f64) -> f64 {
    if s2 == 0.0 {
        return 0.0;
    }
    if x <= threshold {
        let sh = x.sinh();
        (sh * sh * s2).ln_1p()
    } else {
        // sinh^2 x = e^{2x}/4 (1 - e^{-2x})^2; the correction is below 1e-300 here
        softplus(2.0 * x - 2.0 * LN_2 + s2.ln())
    }
}

/// `u - ln(1 + u)`, which is `>= 0` for `u > -1`.
pub fn log1p_deficit(u: f64) -> f64 {
    if u.abs() < 0.5 {
        // ln(1+u) = 2 artanh(w) with w = u/(2+u); u - 2w = u^2/(2+u)
        let w = u / (2.0 + u);
        let w2 = w * w;
        let mut pow = w * w2;
        let mut n = 3.0;
        let mut tail = 0.0;
        loop {
            let term = pow / n;
            tail += term;
            if term.abs() <= 1e-17 * tail.abs() {
                break;
            }
            pow *= w2;
            n += 2.0;
        }
        u * u / (2.0 + u) - 2.0 * tail
    } else {
        u - u.ln_1p()
    }
}

/// `r * (u - ln(1 + u))` with `u = d / r`, defined by continuity at `r = 0`.
pub fn scaled_log1p_deficit(r: f64, d: f64) -> f64 {
    if r == 0.0 {
        return d.max(0.0);
    }
    let u = d / r;
    if u.abs() < 0.5 {
        r * log1p_deficit(u)
    } else if u.is_finite() {
        d - r * u.ln_1p()
    } else {
        // u overflowed because r is subnormal
        d - r * (d.ln() - r.ln())
    }
}

/// Binary Shannon entropy `-p ln p - (1-p) ln(1-p)` in nats.
pub fn binary_entropy(p: f64) -> f64 {
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.ln();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (-p).ln_1p();
    }
    h
}

/// `x ln x` with the `0 ln 0 = 0` convention.
pub fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Fixed-order pairwise summation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// `ln sum_i exp(x_i)`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let terms: Vec<f64> = values.iter().map(|v| (v - max).exp()).collect();
    max + pairwise_sum(&terms).ln()
}
