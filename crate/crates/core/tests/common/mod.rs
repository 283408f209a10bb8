//! Seeded quench corpus shared by the integration tests.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xyquench::model::{dispersion, ModelParams, QuenchKind, QuenchSpec};

pub const CORPUS_SEED: u64 = 0x5eed_2019;

/// `g0 in [0, 3]`, `gamma in [0, 1]`, log-uniform `beta` in `[beta_lo, beta_hi]`,
/// `|delta| <= 0.1`, field or anisotropy quench.
pub fn random_quench(rng: &mut ChaCha8Rng, beta_lo: f64, beta_hi: f64) -> QuenchSpec {
    let g0 = rng.random_range(0.0..=3.0);
    let gamma0 = rng.random_range(0.0..=1.0);
    let beta = (rng.random_range(beta_lo.ln()..=beta_hi.ln())).exp();
    let mut delta = rng.random_range(-0.1..=0.1);
    let kind = if rng.random_bool(0.5) {
        QuenchKind::Field
    } else {
        QuenchKind::Anisotropy
    };
    if kind == QuenchKind::Anisotropy && !(0.0..=1.0).contains(&(gamma0 + delta)) {
        delta = -delta;
    }
    QuenchSpec::from_kind(kind, g0, gamma0, delta, beta).expect("corpus spec is valid")
}

pub fn corpus(n: usize, beta_lo: f64, beta_hi: f64) -> Vec<QuenchSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..n)
        .map(|_| random_quench(&mut rng, beta_lo, beta_hi))
        .collect()
}

/// Smallest single-particle energy over a dense momentum grid, including the zone edges.
pub fn min_gap(p: &ModelParams) -> f64 {
    (0..=4096)
        .map(|i| dispersion(p, std::f64::consts::PI * i as f64 / 4096.0))
        .fold(f64::INFINITY, f64::min)
}

pub fn non_critical(spec: &QuenchSpec, threshold: f64) -> bool {
    min_gap(&spec.pre) >= threshold && min_gap(&spec.post) >= threshold
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
