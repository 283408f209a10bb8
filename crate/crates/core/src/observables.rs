//! Per-mode closed forms and their Brillouin-zone integrals.
//!
//! Every `*_integrand` returns the contribution of one `±k` mode pair, i.e.
//! the braced integrand WITHOUT the `1/(2 pi)` measure. The integrators
//! ([`breakdown`] here and the finite-`N` sums in [`crate::lattice`]) own
//! the normalization, so per-site densities read
//! `X = int_0^pi dk/(2 pi) x(k) = lim (1/N) sum_{k in K+, k > 0} x(k)`.
//!
//! With `a = beta eps0`, `b = beta eps_tau`, `(s, c) = (sin, cos) Delta_k`:
//!
//! * lag:        `2 { ln[cosh b / cosh a] + (a - b c) tanh a }`
//! * work:       `2 tanh a (eps0 - eps_tau c)`
//! * free energy: `-(2/beta) ln[cosh b / cosh a]`
//! * coherence:  the entropy gained by dropping the `|00>/|11>` coherence of
//!   the mode pair, `S(diag rho') - S(rho')`
//! * population: `lag - coherence`.

use crate::error::{Error, Result};
use crate::model::{mode_data, ModeData, QuenchSpec};
use crate::numerics::{
    expm1_minus_x, ln1p_sinh2_scaled, ln_cosh, one_minus_tanh, scaled_log1p_deficit,
};
use crate::quadrature::{config_for, integrate_vec, QuadratureConfig};

/// How the coherence term of a mode is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoherenceForm {
    /// Binary-entropy increment of the `|00>, |11>` block; non-negative term by term.
    #[default]
    Mixing,
    /// The tanh/artanh/sinh expression term for term, with stabilized logarithms.
    Literal,
}

/// How the population term of a mode is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PopulationForm {
    /// `lag - coherence`; makes the splitting identity exact.
    #[default]
    Difference,
    /// The explicit closed form, kept as an independent cross-check.
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandOptions {
    /// Above this value of `2 beta eps0` the literal forms use the asymptotic
    /// expansion of `ln(1 + sinh^2(x) s^2)`.
    pub large_arg_threshold: f64,
    pub coherence: CoherenceForm,
    pub population: PopulationForm,
}

impl Default for IntegrandOptions {
    fn default() -> Self {
        Self {
            large_arg_threshold: 350.0,
            coherence: CoherenceForm::default(),
            population: PopulationForm::default(),
        }
    }
}

/// Per-particle entropy production and its split.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EntropyBreakdown {
    /// Relative entropy of coherence per site (nats).
    pub coherence: f64,
    /// Population contribution per site (nats).
    pub population: f64,
    /// Non-equilibrium lag per site (nats).
    pub lag: f64,
    /// Mean work per site.
    pub work: f64,
    /// Equilibrium free-energy change per site.
    pub dfree: f64,
}

impl EntropyBreakdown {
    /// Fraction of the lag carried by coherence; zero for a null quench.
    pub fn coherence_fraction(&self) -> f64 {
        if self.lag == 0.0 {
            0.0
        } else {
            self.coherence / self.lag
        }
    }

    /// Tolerance used by the identity checks: `max(1e-10 |lag|, 1e-14)`.
    pub fn identity_tolerance(&self) -> f64 {
        (1e-10 * self.lag.abs()).max(1e-14)
    }

    /// `|coherence + population - lag|`.
    pub fn splitting_residual(&self) -> f64 {
        (self.coherence + self.population - self.lag).abs()
    }

    /// `|beta (work - dfree) - lag|`.
    pub fn work_residual(&self, beta: f64) -> f64 {
        (beta * (self.work - self.dfree) - self.lag).abs()
    }

    fn from_sums(c: f64, lag: f64, work: f64, dfree: f64) -> Self {
        Self {
            coherence: c,
            population: lag - c,
            lag,
            work,
            dfree,
        }
    }
}

/// All five per-mode terms at once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTerms {
    pub coherence: f64,
    pub population: f64,
    pub lag: f64,
    pub work: f64,
    pub dfree: f64,
}

/// `ln cosh(a + d) - ln cosh(a) - d tanh(a)` for `a >= 0`, `a + d >= 0`.
///
/// With `u = (1 - tanh a)/2` this is `ln(1 + (1-u) E(2ud) + u E(-2(1-u)d))`
/// where `E(x) = e^x - 1 - x >= 0`, so no terms cancel.
fn ln_cosh_gap(a: f64, d: f64) -> f64 {
    let u = 0.5 * one_minus_tanh(a);
    let (x1, x2) = (2.0 * u * d, -2.0 * (1.0 - u) * d);
    if x1.max(x2) > 700.0 {
        return ln_cosh(a + d) - ln_cosh(a) - d * a.tanh();
    }
    ((1.0 - u) * expm1_minus_x(x1) + u * expm1_minus_x(x2)).ln_1p()
}

/// `ln cosh(a + d) - ln cosh(a)`.
fn ln_cosh_ratio(a: f64, d: f64) -> f64 {
    ln_cosh_gap(a, d) + d * a.tanh()
}

/// `ln[(1 + t c) / (1 - t c)]` with `t = tanh(2a)`.
fn log_ratio_tc(a: f64, m: &ModeData) -> f64 {
    let t = (2.0 * a).tanh();
    let c = m.cos_delta;
    let (num, den) = if c >= 0.0 {
        // 1 - t c = (1 - c) + c (1 - t)
        let den = 2.0 * m.p + c * one_minus_tanh(2.0 * a);
        (2.0 - den, den)
    } else {
        let num = 1.0 + t * c;
        let num = if num < 0.5 {
            // 1 + t c = (1 + c) - c (1 - t), with 1 + c = s^2 / (1 - c)
            m.sin_delta * m.sin_delta / (1.0 - c) - c * one_minus_tanh(2.0 * a)
        } else {
            num
        };
        (num, 2.0 - num)
    };
    (num / den).ln()
}

fn coherence_mixing(a: f64, m: &ModeData) -> f64 {
    let s = m.sin_delta;
    if s == 0.0 {
        return 0.0;
    }
    // flip probability folded into [0, 1/2]; h(x) = h(1 - x) makes this exact
    let q = s * s / (2.0 * (1.0 + m.cos_delta.abs()));
    let e = (-4.0 * a).exp();
    let rho = e / (1.0 + e);
    let t = (1.0 - e) / (1.0 + e);
    let ch = a.cosh();
    let weight = 1.0 - 0.5 / (ch * ch);
    let d = t * q;
    let x = rho + d;
    if x == 0.0 {
        return 0.0;
    }
    // h(rho + d) - h(rho) for the binary entropy h, as three non-negative pieces
    let slope = (t * (1.0 - 2.0 * q) / x).ln_1p();
    weight * (d * slope + scaled_log1p_deficit(rho, d) + scaled_log1p_deficit(1.0 - rho, -d))
}

fn coherence_literal(a: f64, m: &ModeData, threshold: f64) -> f64 {
    let s = m.sin_delta;
    if s == 0.0 {
        return 0.0;
    }
    let ch = a.cosh();
    let prefactor = 0.5 - 0.25 / (ch * ch);
    0.5 * a.tanh() * (4.0 * a - m.cos_delta * log_ratio_tc(a, m))
        - prefactor * ln1p_sinh2_scaled(2.0 * a, s * s, threshold)
}

fn population_explicit(a: f64, b: f64, d: f64, m: &ModeData, threshold: f64) -> f64 {
    let ch = a.cosh();
    let prefactor = 0.5 - 0.25 / (ch * ch);
    let coherence_log = if m.sin_delta == 0.0 {
        0.0
    } else {
        ln1p_sinh2_scaled(2.0 * a, m.sin_delta * m.sin_delta, threshold)
    };
    2.0 * ln_cosh_ratio(a, d) - 0.5 * a.tanh() * m.cos_delta * (4.0 * b - log_ratio_tc(a, m))
        + prefactor * coherence_log
}

fn lag_term(a: f64, b: f64, d: f64, m: &ModeData) -> f64 {
    2.0 * (ln_cosh_gap(a, d) + 2.0 * b * m.p * a.tanh())
}

/// Entropy `2 [ln(2 cosh a) - a tanh a]` of one thermal mode pair at `a = beta eps0`.
pub fn initial_pair_entropy(a: f64) -> f64 {
    2.0 * (std::f64::consts::LN_2 + ln_cosh(a) - a * a.tanh())
}

/// Entropy of the dephased pair state in closed form.
pub fn dephased_pair_entropy(m: &ModeData, beta: f64, threshold: f64) -> f64 {
    let a = beta * m.eps0;
    let ch = a.cosh();
    let prefactor = 0.5 - 0.25 / (ch * ch);
    let coherence_log = if m.sin_delta == 0.0 {
        0.0
    } else {
        ln1p_sinh2_scaled(2.0 * a, m.sin_delta * m.sin_delta, threshold)
    };
    2.0 * (std::f64::consts::LN_2 + ln_cosh(a))
        - 0.5 * a.tanh() * m.cos_delta * log_ratio_tc(a, m)
        - prefactor * coherence_log
}

/// Evaluates all per-mode terms for a finite `beta`.
pub fn mode_terms(m: &ModeData, beta: f64, opts: &IntegrandOptions) -> ModeTerms {
    let a = beta * m.eps0;
    let b = beta * m.eps_tau;
    let coherence = match opts.coherence {
        CoherenceForm::Mixing => coherence_mixing(a, m),
        CoherenceForm::Literal => coherence_literal(a, m, opts.large_arg_threshold),
    };
    let d = beta * m.eps_diff;
    let lag = lag_term(a, b, d, m);
    let population = match opts.population {
        PopulationForm::Difference => lag - coherence,
        PopulationForm::Explicit => population_explicit(a, b, d, m, opts.large_arg_threshold),
    };
    // eps0 - eps_tau cos D = 2 eps_tau p - (eps_tau - eps0)
    let work = 2.0 * a.tanh() * (2.0 * m.eps_tau * m.p - m.eps_diff);
    let dfree = -2.0 / beta * ln_cosh_ratio(a, d);
    ModeTerms {
        coherence,
        population,
        lag,
        work,
        dfree,
    }
}

fn terms_at(spec: &QuenchSpec, k: f64, opts: &IntegrandOptions) -> Result<ModeTerms> {
    let beta = spec.require_finite_beta()?;
    Ok(mode_terms(&mode_data(spec, k)?, beta, opts))
}

pub fn coherence_integrand(spec: &QuenchSpec, k: f64) -> Result<f64> {
    terms_at(spec, k, &IntegrandOptions::default()).map(|t| t.coherence)
}

pub fn lag_integrand(spec: &QuenchSpec, k: f64) -> Result<f64> {
    terms_at(spec, k, &IntegrandOptions::default()).map(|t| t.lag)
}

pub fn population_integrand(spec: &QuenchSpec, k: f64) -> Result<f64> {
    terms_at(spec, k, &IntegrandOptions::default()).map(|t| t.population)
}

pub fn work_integrand(spec: &QuenchSpec, k: f64) -> Result<f64> {
    terms_at(spec, k, &IntegrandOptions::default()).map(|t| t.work)
}

pub fn dfree_integrand(spec: &QuenchSpec, k: f64) -> Result<f64> {
    terms_at(spec, k, &IntegrandOptions::default()).map(|t| t.dfree)
}

/// Per-mode terms with explicit evaluation options.
pub fn integrands_with(spec: &QuenchSpec, k: f64, opts: &IntegrandOptions) -> Result<ModeTerms> {
    terms_at(spec, k, opts)
}

/// Thermodynamic-limit densities for a finite-temperature quench.
pub fn breakdown(spec: &QuenchSpec, config: &QuadratureConfig) -> Result<EntropyBreakdown> {
    breakdown_with(spec, config, &IntegrandOptions::default())
}

pub fn breakdown_with(
    spec: &QuenchSpec,
    config: &QuadratureConfig,
    opts: &IntegrandOptions,
) -> Result<EntropyBreakdown> {
    let beta = spec.require_finite_beta()?;
    let cfg = config_for(spec, config);
    let est = integrate_vec(
        |k| match mode_data(spec, k) {
            Ok(m) => {
                let t = mode_terms(&m, beta, opts);
                [t.coherence, t.lag, t.work, t.dfree]
            }
            // only reachable when a node lands on an unsplit gap zero
            Err(_) => [f64::NAN; 4],
        },
        &cfg,
    )?;
    let norm = 1.0 / (2.0 * std::f64::consts::PI);
    let [c, lag, work, dfree] = est.value.map(|v| v * norm);
    Ok(EntropyBreakdown::from_sums(c, lag, work, dfree))
}

pub(crate) fn breakdown_from_sums(c: f64, lag: f64, work: f64, dfree: f64) -> EntropyBreakdown {
    EntropyBreakdown::from_sums(c, lag, work, dfree)
}

impl From<ModeTerms> for EntropyBreakdown {
    fn from(t: ModeTerms) -> Self {
        Self {
            coherence: t.coherence,
            population: t.population,
            lag: t.lag,
            work: t.work,
            dfree: t.dfree,
        }
    }
}

/// Guards [`breakdown`] callers that might pass `beta = inf`.
pub fn require_finite(spec: &QuenchSpec) -> Result<()> {
    if spec.is_zero_temperature() {
        Err(Error::ZeroTemperature)
    } else {
        Ok(())
    }
}
