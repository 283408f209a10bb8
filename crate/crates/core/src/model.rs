//! XY chain dispersion, Bogoliubov angles and the quench-induced angle change.
//!
//! Everything here works at the level of a single momentum `k` in `(0, pi)`.
//! Angles are never materialized; they are carried as `(sin, cos)` pairs
//! built from the two components `g - cos k` and `gamma sin k`.

use crate::error::{Error, Result};

/// A point `(g, gamma)` of the XY phase diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    g: f64,
    gamma: f64,
}

impl ModelParams {
    pub fn new(g: f64, gamma: f64) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "field g must be finite, got {g}"
            )));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!(
                "anisotropy gamma must lie in [0, 1], got {gamma}"
            )));
        }
        Ok(Self { g, gamma })
    }

    pub fn ising(g: f64) -> Result<Self> {
        Self::new(g, 1.0)
    }

    pub fn xx(g: f64) -> Result<Self> {
        Self::new(g, 0.0)
    }

    #[inline]
    pub fn g(&self) -> f64 {
        self.g
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The two components `(g - cos k, gamma sin k)` whose norm is the mode energy.
    #[inline]
    pub(crate) fn components(&self, k: f64) -> (f64, f64) {
        (self.g - k.cos(), self.gamma * k.sin())
    }
}

/// Which parameter a quench changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuenchKind {
    Field,
    Anisotropy,
}

impl std::str::FromStr for QuenchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "field" | "g" => Ok(Self::Field),
            "anisotropy" | "gamma" => Ok(Self::Anisotropy),
            other => Err(Error::InvalidParameter(format!(
                "unknown quench kind '{other}' (expected 'field' or 'anisotropy')"
            ))),
        }
    }
}

/// A sudden quench `pre -> post` from a Gibbs state at inverse temperature `beta`.
///
/// `beta = f64::INFINITY` is legal and denotes the zero-temperature limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchSpec {
    pub pre: ModelParams,
    pub post: ModelParams,
    beta: f64,
}

impl QuenchSpec {
    pub fn new(pre: ModelParams, post: ModelParams, beta: f64) -> Result<Self> {
        if beta.is_nan() || beta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {beta}"
            )));
        }
        Ok(Self { pre, post, beta })
    }

    /// Quench of the given kind with signed amplitude `delta` away from `(g0, gamma0)`.
    pub fn from_kind(
        kind: QuenchKind,
        g0: f64,
        gamma0: f64,
        delta: f64,
        beta: f64,
    ) -> Result<Self> {
        let pre = ModelParams::new(g0, gamma0)?;
        let post = match kind {
            QuenchKind::Field => ModelParams::new(g0 + delta, gamma0)?,
            QuenchKind::Anisotropy => ModelParams::new(g0, gamma0 + delta)?,
        };
        Self::new(pre, post, beta)
    }

    pub fn field(g0: f64, gamma: f64, dg: f64, beta: f64) -> Result<Self> {
        Self::from_kind(QuenchKind::Field, g0, gamma, dg, beta)
    }

    pub fn anisotropy(g0: f64, gamma0: f64, dgamma: f64, beta: f64) -> Result<Self> {
        Self::from_kind(QuenchKind::Anisotropy, g0, gamma0, dgamma, beta)
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[inline]
    pub fn is_zero_temperature(&self) -> bool {
        self.beta.is_infinite()
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.pre, self.post, beta)
    }

    /// Signed field change `g_tau - g0`.
    pub fn delta_g(&self) -> f64 {
        self.post.g - self.pre.g
    }

    /// Signed anisotropy change `gamma_tau - gamma0`.
    pub fn delta_gamma(&self) -> f64 {
        self.post.gamma - self.pre.gamma
    }

    /// The same quench run backwards (`post -> pre`).
    pub fn reversed(&self) -> Self {
        Self {
            pre: self.post,
            post: self.pre,
            beta: self.beta,
        }
    }

    pub(crate) fn require_finite_beta(&self) -> Result<f64> {
        if self.is_zero_temperature() {
            Err(Error::ZeroTemperature)
        } else {
            Ok(self.beta)
        }
    }
}

/// Mode energy `sqrt((g - cos k)^2 + gamma^2 sin^2 k)`.
#[inline]
pub fn dispersion(params: &ModelParams, k: f64) -> f64 {
    let (x, y) = params.components(k);
    x.hypot(y)
}

/// `(sin theta_k, cos theta_k)` of the Bogoliubov rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovTrig {
    pub sin: f64,
    pub cos: f64,
    /// Set when the mode energy vanishes; `(sin, cos)` is then the `(0, 1)` convention.
    pub degenerate: bool,
}

pub fn bogoliubov_trig(params: &ModelParams, k: f64) -> BogoliubovTrig {
    let (x, y) = params.components(k);
    let eps = x.hypot(y);
    if eps == 0.0 {
        return BogoliubovTrig {
            sin: 0.0,
            cos: 1.0,
            degenerate: true,
        };
    }
    BogoliubovTrig {
        sin: y / eps,
        cos: x / eps,
        degenerate: false,
    }
}

/// Angle change with `1 - cos` carried separately so that small excitation
/// probabilities keep full relative precision.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DeltaParts {
    pub sin: f64,
    pub cos: f64,
    pub one_minus_cos: f64,
}

pub(crate) fn delta_parts(spec: &QuenchSpec, k: f64) -> Result<DeltaParts> {
    let (x0, y0) = spec.pre.components(k);
    let (xt, yt) = spec.post.components(k);
    // cross and dot products of the post- and pre-quench component vectors
    let ns = yt * x0 - y0 * xt;
    let nc = xt * x0 + yt * y0;
    let norm = ns.hypot(nc);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::DegenerateAngle { k });
    }
    let sin = ns / norm;
    let cos = nc / norm;
    let one_minus_cos = if nc > 0.0 {
        ns * ns / (norm * (norm + nc))
    } else {
        (norm - nc) / norm
    };
    Ok(DeltaParts {
        sin,
        cos,
        one_minus_cos,
    })
}

/// `(sin Delta_k, cos Delta_k)` with `Delta_k = theta_post - theta_pre`.
///
/// The cosine comes from the product formula, so its sign survives the
/// interior sign flip of the XX chain.
pub fn delta_trig(spec: &QuenchSpec, k: f64) -> Result<(f64, f64)> {
    delta_parts(spec, k).map(|d| (d.sin, d.cos))
}

/// Per-momentum quantities of a quench.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeData {
    pub k: f64,
    pub eps0: f64,
    pub eps_tau: f64,
    pub sin_delta: f64,
    pub cos_delta: f64,
    /// Excitation probability `sin^2(Delta_k / 2)`.
    pub p: f64,
    /// `eps_tau - eps0` without cancellation.
    pub eps_diff: f64,
}

pub fn mode_data(spec: &QuenchSpec, k: f64) -> Result<ModeData> {
    let d = delta_parts(spec, k)?;
    let (x0, y0) = spec.pre.components(k);
    let (xt, yt) = spec.post.components(k);
    let eps0 = x0.hypot(y0);
    let eps_tau = xt.hypot(yt);
    let sum = eps0 + eps_tau;
    // eps_tau^2 - eps0^2 factored per component
    let eps_diff = if sum > 0.0 {
        ((xt - x0) * (xt + x0) + (yt - y0) * (yt + y0)) / sum
    } else {
        0.0
    };
    Ok(ModeData {
        k,
        eps0,
        eps_tau,
        sin_delta: d.sin,
        cos_delta: d.cos,
        p: 0.5 * d.one_minus_cos,
        eps_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, PI, SQRT_2};

    fn p(g: f64, gamma: f64) -> ModelParams {
        ModelParams::new(g, gamma).unwrap()
    }

    #[test]
    fn dispersion_examples() {
        assert!((dispersion(&p(1.0, 1.0), FRAC_PI_2) - SQRT_2).abs() < 1e-15);
        assert_eq!(dispersion(&p(1.0, 0.3), 0.0), 0.0);
        assert!(dispersion(&p(0.5, 0.0), FRAC_PI_3).abs() < 1e-15);
    }

    #[test]
    fn gamma_range_enforced() {
        assert!(ModelParams::new(0.3, 1.2).is_err());
        assert!(ModelParams::new(0.3, -0.1).is_err());
        assert!(ModelParams::new(f64::NAN, 0.5).is_err());
        assert!(ModelParams::new(-7.0, 0.0).is_ok());
    }

    #[test]
    fn beta_must_be_positive() {
        let a = p(0.5, 1.0);
        assert!(QuenchSpec::new(a, a, 0.0).is_err());
        assert!(QuenchSpec::new(a, a, f64::NAN).is_err());
        assert!(QuenchSpec::new(a, a, f64::INFINITY)
            .unwrap()
            .is_zero_temperature());
    }

    #[test]
    fn bogoliubov_examples() {
        let t = bogoliubov_trig(&p(2.0, 0.0), FRAC_PI_2);
        assert_eq!((t.sin, t.cos, t.degenerate), (0.0, 1.0, false));

        let t = bogoliubov_trig(&p(0.0, 1.0), FRAC_PI_2);
        assert!((t.sin - 1.0).abs() < 1e-15 && t.cos.abs() < 1e-15);

        let t = bogoliubov_trig(&p(1.0, 1.0), FRAC_PI_2);
        let theta = (1.0f64).atan2(1.0 - FRAC_PI_2.cos());
        assert!((t.sin - theta.sin()).abs() < 1e-15);
        assert!((t.cos - FRAC_1_SQRT_2).abs() < 1e-15);

        // g = cos k exactly at k = 0
        let t = bogoliubov_trig(&p(1.0, 0.0), 0.0);
        assert!(t.degenerate);
        assert_eq!((t.sin, t.cos), (0.0, 1.0));
    }

    #[test]
    fn null_quench_has_no_rotation() {
        let s = QuenchSpec::field(0.7, 0.4, 0.0, 1.0).unwrap();
        let (sd, cd) = delta_trig(&s, 1.1).unwrap();
        assert_eq!(sd, 0.0);
        assert!((cd - 1.0).abs() < 1e-15);
        assert_eq!(mode_data(&s, 1.1).unwrap().p, 0.0);
    }

    #[test]
    fn xx_quench_only_flips_sign() {
        // k* = arccos(0.5) separates the two sides
        let s = QuenchSpec::field(0.5, 0.0, 0.3, 1.0).unwrap();
        for &k in &[0.3, 0.9, 1.2, 2.0, 3.0] {
            let (sd, cd) = delta_trig(&s, k).unwrap();
            assert_eq!(sd, 0.0);
            let expect = ((0.5 - k.cos()) * (0.8 - k.cos())).signum();
            assert!((cd - expect).abs() < 1e-15, "k={k}: {cd}");
        }
        // between arccos(0.8) and arccos(0.5) the occupation flips fully
        let md = mode_data(&s, 0.8).unwrap();
        assert!((md.cos_delta + 1.0).abs() < 1e-15);
        assert_eq!(md.p, 1.0);
    }

    #[test]
    fn ising_critical_field_quench_value() {
        let s = QuenchSpec::field(1.0, 1.0, 0.01, 1.0).unwrap();
        let k = FRAC_PI_2;
        // independent route: difference of atan2 angles
        let th0 = (1.0f64).atan2(1.0 - k.cos());
        let tht = (1.0f64).atan2(1.01 - k.cos());
        let delta = tht - th0;
        let (sd, cd) = delta_trig(&s, k).unwrap();
        assert!((sd - delta.sin()).abs() < 1e-15);
        assert!((sd - (-0.004_975_1)).abs() < 1e-7);
        assert!((cd - delta.cos()).abs() < 1e-15);
        let md = mode_data(&s, k).unwrap();
        assert!((md.p - (delta / 2.0).sin().powi(2)).abs() < 1e-18);
        assert!((md.p - 6.1879e-6).abs() < 1e-9);
    }

    #[test]
    fn energy_difference_is_accurate() {
        let s = QuenchSpec::anisotropy(2.0, 0.1, 1e-9, 1.0).unwrap();
        let m = mode_data(&s, 1.0).unwrap();
        // d eps / d gamma = gamma sin^2 k / eps
        let slope = 0.1 * 1f64.sin().powi(2) / m.eps0;
        assert!((m.eps_diff / 1e-9 - slope).abs() < 1e-6 * slope);
        assert!((m.eps_tau - m.eps0 - m.eps_diff).abs() < 1e-15);
    }

    #[test]
    fn degenerate_momenta_are_reported() {
        let s = QuenchSpec::field(1.0, 0.0, 0.1, 1.0).unwrap();
        assert!(matches!(
            delta_trig(&s, 0.0),
            Err(Error::DegenerateAngle { .. })
        ));
        let s = QuenchSpec::field(1.0, 1.0, 0.1, 1.0).unwrap();
        assert!(mode_data(&s, 0.0).is_err());
        assert!(mode_data(&s, PI * 0.25).is_ok());
    }

    #[test]
    fn quench_kind_parses() {
        assert_eq!("Field".parse::<QuenchKind>().unwrap(), QuenchKind::Field);
        assert_eq!(
            "gamma".parse::<QuenchKind>().unwrap(),
            QuenchKind::Anisotropy
        );
        assert!("spin".parse::<QuenchKind>().is_err());
    }
}
