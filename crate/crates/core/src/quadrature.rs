//! Adaptive Gauss-Kronrod integration over the Brillouin zone `(0, pi)`.
//!
//! Vector-valued integrands share one panel set, so linear relations between
//! components (the splitting and work identities) survive integration up to
//! rounding. Nodes are strictly interior to each panel: nothing is ever
//! evaluated at `0`, `pi` or a split point.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{dispersion, ModelParams, QuenchSpec};
use crate::numerics::pairwise_sum;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of panels.
    pub max_subdivisions: usize,
    /// Momenta forced as panel boundaries in addition to the detected ones.
    pub extra_splits: Vec<f64>,
    /// Gap below which a near-critical momentum becomes a split point.
    pub gap_threshold: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            extra_splits: Vec::new(),
            gap_threshold: 0.05,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_splits(mut self, splits: impl IntoIterator<Item = f64>) -> Self {
        self.extra_splits.extend(splits);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter(
                "subdivision budget must be at least 1".into(),
            ));
        }
        if self.gap_threshold.is_nan() || self.gap_threshold < 0.0 {
            return Err(Error::InvalidParameter(
                "gap threshold must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Integral estimate of an `M`-component integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<const M: usize> {
    pub value: [f64; M],
    pub error: [f64; M],
    pub panels: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Panel<const M: usize> {
    lo: f64,
    hi: f64,
    value: [f64; M],
    error: [f64; M],
    /// Error that rounding alone could explain; panels at this floor are not split.
    floor: [f64; M],
}

fn gauss_kronrod<const M: usize, F>(f: &F, lo: f64, hi: f64) -> Result<Panel<M>>
where
    F: Fn(f64) -> [f64; M],
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let fc = f(center);
    let mut kronrod = [0.0; M];
    let mut gauss = [0.0; M];
    let mut abs = [0.0; M];
    for c in 0..M {
        kronrod[c] = WGK[10] * fc[c];
        abs[c] = WGK[10] * fc[c].abs();
    }
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(10).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for c in 0..M {
            let sum = f1[c] + f2[c];
            kronrod[c] += wk * sum;
            abs[c] += wk * (f1[c].abs() + f2[c].abs());
            // odd Kronrod indices are the Gauss-Legendre nodes
            if j % 2 == 1 {
                gauss[c] += WG[j / 2] * sum;
            }
        }
    }

    let mut panel = Panel {
        lo,
        hi,
        value: [0.0; M],
        error: [0.0; M],
        floor: [0.0; M],
    };
    for c in 0..M {
        let value = kronrod[c] * half;
        if !value.is_finite() {
            return Err(Error::QuadratureFailure {
                value: f64::NAN,
                error: f64::INFINITY,
                subdivisions: 0,
            });
        }
        panel.value[c] = value;
        panel.error[c] = ((kronrod[c] - gauss[c]) * half).abs();
        panel.floor[c] = 50.0 * f64::EPSILON * abs[c] * half.abs();
    }
    Ok(panel)
}

fn sorted_breakpoints(lo: f64, hi: f64, splits: &[f64]) -> Vec<f64> {
    let mut points: Vec<f64> = splits
        .iter()
        .copied()
        .filter(|s| s.is_finite() && *s > lo && *s < hi)
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() <= 4.0 * f64::EPSILON * (hi - lo));
    let mut out = Vec::with_capacity(points.len() + 2);
    out.push(lo);
    out.extend(points);
    out.push(hi);
    out
}

fn totals<const M: usize>(panels: &[Panel<M>]) -> ([f64; M], [f64; M]) {
    let mut value = [0.0; M];
    let mut error = [0.0; M];
    let mut buf = Vec::with_capacity(panels.len());
    for c in 0..M {
        buf.clear();
        buf.extend(panels.iter().map(|p| p.value[c]));
        value[c] = pairwise_sum(&buf);
        buf.clear();
        buf.extend(panels.iter().map(|p| p.error[c]));
        error[c] = pairwise_sum(&buf);
    }
    (value, error)
}

/// Integrates an `M`-component function over `(lo, hi)`.
pub fn integrate_interval<const M: usize, F>(
    f: F,
    lo: f64,
    hi: f64,
    config: &QuadratureConfig,
) -> Result<Estimate<M>>
where
    F: Fn(f64) -> [f64; M],
{
    config.validate()?;
    let breaks = sorted_breakpoints(lo, hi, &config.extra_splits);
    let mut panels = Vec::with_capacity(config.max_subdivisions.max(breaks.len()));
    for w in breaks.windows(2) {
        panels.push(gauss_kronrod(&f, w[0], w[1])?);
    }

    loop {
        let (value, error) = totals(&panels);
        let tol: [f64; M] =
            std::array::from_fn(|c| config.abs_tol.max(config.rel_tol * value[c].abs()));

        if (0..M).all(|c| error[c] <= tol[c]) {
            return Ok(finish(panels));
        }

        // worst panel by tolerance-normalized error, ignoring panels already at the rounding floor
        let mut worst = None;
        let mut worst_score = 0.0;
        for (i, p) in panels.iter().enumerate() {
            let splittable = (0..M).any(|c| p.error[c] > p.floor[c]);
            let width_ok = (p.hi - p.lo) > 1e3 * f64::EPSILON * p.lo.abs().max(1.0);
            if !splittable || !width_ok {
                continue;
            }
            let score = (0..M).map(|c| p.error[c] / tol[c]).fold(0.0, f64::max);
            if score > worst_score {
                worst_score = score;
                worst = Some(i);
            }
        }

        let Some(i) = worst else {
            // only rounding-limited panels remain
            return Ok(finish(panels));
        };
        if panels.len() >= config.max_subdivisions {
            let c = (0..M)
                .max_by(|&a, &b| (error[a] / tol[a]).total_cmp(&(error[b] / tol[b])))
                .unwrap_or(0);
            return Err(Error::QuadratureFailure {
                value: value[c],
                error: error[c],
                subdivisions: panels.len(),
            });
        }

        let p = panels.swap_remove(i);
        let mid = 0.5 * (p.lo + p.hi);
        panels.push(gauss_kronrod(&f, p.lo, mid)?);
        panels.push(gauss_kronrod(&f, mid, p.hi)?);
    }
}

fn finish<const M: usize>(mut panels: Vec<Panel<M>>) -> Estimate<M> {
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let (value, error) = totals(&panels);
    Estimate {
        value,
        error,
        panels: panels.len(),
    }
}

/// Integrates a vector-valued integrand over the Brillouin zone `(0, pi)`.
pub fn integrate_vec<const M: usize, F>(f: F, config: &QuadratureConfig) -> Result<Estimate<M>>
where
    F: Fn(f64) -> [f64; M],
{
    integrate_interval(f, 0.0, PI, config)
}

/// Scalar integral over `(0, pi)`, returning `(value, error_estimate)`.
pub fn integrate<F>(f: F, config: &QuadratureConfig) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let est = integrate_vec(|k| [f(k)], config)?;
    Ok((est.value[0], est.error[0]))
}

/// Interior momentum of minimal gap, or, when the minimum sits on the zone
/// boundary, the momentum where the gap has grown to twice its minimum
/// (the edge of the boundary layer).
fn gap_split(params: &ModelParams, threshold: f64) -> Option<f64> {
    let (g, gamma) = (params.g(), params.gamma());
    if gamma == 0.0 {
        if g.abs() <= 1.0 {
            let k = g.acos();
            return (k > 0.0 && k < PI).then_some(k);
        }
    } else if gamma < 1.0 {
        // eps^2 = (1 - gamma^2) u^2 - 2 g u + g^2 + gamma^2 with u = cos k
        let u = g / (1.0 - gamma * gamma);
        if u.abs() < 1.0 {
            let k = u.acos();
            return (dispersion(params, k) < threshold).then_some(k);
        }
    }

    let (edge, inward) = if g >= 0.0 { (0.0, 1.0) } else { (PI, -1.0) };
    let min_gap = dispersion(params, edge);
    if !(min_gap > 0.0 && min_gap < threshold) {
        return None;
    }
    // dispersion grows monotonically away from the edge here; bisect for 2 * min_gap
    let target = 2.0 * min_gap;
    let (mut near, mut far) = (0.0, PI);
    if dispersion(params, edge + inward * far) < target {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (near + far);
        if dispersion(params, edge + inward * mid) < target {
            near = mid;
        } else {
            far = mid;
        }
        if far - near < 1e-15 {
            break;
        }
    }
    let k = edge + inward * 0.5 * (near + far);
    (k > 0.0 && k < PI).then_some(k)
}

/// Momenta that must be panel boundaries for `spec`: interior gap zeros of
/// XX chains and near-gap-minimum momenta of nearly critical Hamiltonians.
pub fn critical_splits(spec: &QuenchSpec, gap_threshold: f64) -> Vec<f64> {
    let mut out: Vec<f64> = [&spec.pre, &spec.post]
        .into_iter()
        .filter_map(|p| gap_split(p, gap_threshold))
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Split points of `spec` merged with the configured extra splits.
pub(crate) fn config_for(spec: &QuenchSpec, config: &QuadratureConfig) -> QuadratureConfig {
    let mut cfg = config.clone();
    cfg.extra_splits
        .extend(critical_splits(spec, config.gap_threshold));
    cfg
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn sine_and_constant() {
        let cfg = QuadratureConfig::default();
        let (v, e) = integrate(f64::sin, &cfg).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "{v}");
        assert!(e < 1e-9);
        let (v, _) = integrate(|_| 1.0, &cfg).unwrap();
        assert!((v - PI).abs() < 1e-13);
    }

    #[test]
    fn kink_resolved_with_split() {
        // |cos k - 1/2| has a kink at pi/3; the integral is sqrt(3) + pi/6
        let exact = 3f64.sqrt() + PI / 6.0;
        let cfg = QuadratureConfig::default().with_splits([FRAC_PI_3]);
        let est = integrate_vec(|k| [(k.cos() - 0.5).abs()], &cfg).unwrap();
        assert!((est.value[0] - exact).abs() < 1e-13);
        // one GK pass per side suffices for a piecewise-smooth integrand
        assert!(est.panels <= 8, "{}", est.panels);
    }

    #[test]
    fn budget_exhaustion_reports_best_value() {
        let cfg = QuadratureConfig {
            max_subdivisions: 3,
            rel_tol: 1e-15,
            ..Default::default()
        };
        match integrate(|k| (k - 1.0).abs().sqrt(), &cfg) {
            Err(Error::QuadratureFailure {
                value,
                subdivisions,
                ..
            }) => {
                assert!(value.is_finite());
                assert_eq!(subdivisions, 3);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn nonfinite_integrand_fails() {
        let cfg = QuadratureConfig::default();
        assert!(integrate(|_| f64::NAN, &cfg).is_err());
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = QuadratureConfig {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(matches!(
            integrate(f64::sin, &cfg),
            Err(Error::InvalidParameter(_))
        ));
        let cfg = QuadratureConfig {
            max_subdivisions: 0,
            ..Default::default()
        };
        assert!(integrate(f64::sin, &cfg).is_err());
    }

    #[test]
    fn splits_for_xx_chain() {
        let s = QuenchSpec::field(0.5, 0.0, 0.01, 1.0).unwrap();
        let splits = critical_splits(&s, 0.05);
        assert!(splits.iter().any(|k| (k - FRAC_PI_3).abs() < 1e-15));
        assert!(splits.iter().any(|k| (k - 0.51f64.acos()).abs() < 1e-15));
    }

    #[test]
    fn no_interior_split_for_gapped_ising() {
        let s = QuenchSpec::field(0.5, 1.0, 0.01, 1.0).unwrap();
        assert!(critical_splits(&s, 0.05).is_empty());
    }

    #[test]
    fn near_critical_small_anisotropy_gets_split() {
        let s = QuenchSpec::field(0.999, 0.2, 0.0, 1.0).unwrap();
        let splits = critical_splits(&s, 0.05);
        assert!(!splits.is_empty());
        // numeric argmin of the gap over a fine grid sits at the k = 0 edge
        let pre = s.pre;
        let (kmin, emin) = (1..100_000)
            .map(|i| {
                let k = PI * i as f64 / 100_000.0;
                (k, dispersion(&pre, k))
            })
            .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        assert!(kmin < 1e-3 && emin < 0.05);
        // the split marks the edge of the near-gap boundary layer
        let k = splits[0];
        assert!(k < 0.05);
        assert!((dispersion(&pre, k) - 2.0 * dispersion(&pre, 0.0)).abs() < 1e-10);
    }

    #[test]
    fn interior_gap_minimum_for_small_anisotropy() {
        let p = ModelParams::new(0.5, 0.01).unwrap();
        let s = QuenchSpec::new(p, p, 1.0).unwrap();
        let splits = critical_splits(&s, 0.05);
        assert_eq!(splits.len(), 1);
        let k = splits[0];
        let left = dispersion(&p, k - 1e-4);
        let right = dispersion(&p, k + 1e-4);
        assert!(dispersion(&p, k) <= left && dispersion(&p, k) <= right);
    }
}
