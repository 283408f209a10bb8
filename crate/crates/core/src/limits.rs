//! High- and zero-temperature limits, the ground-state susceptibility and
//! scans for non-analytic points of the coherence.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{dispersion, mode_data, ModelParams, QuenchKind, QuenchSpec};
use crate::numerics::binary_entropy;
use crate::observables::breakdown;
use crate::quadrature::{config_for, integrate_vec, QuadratureConfig};

const INV_2PI: f64 = 0.5 / PI;

/// Coefficients of `beta^2` in the small-`beta` expansions of `C`, `D` and the lag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighTCoefficients {
    pub c_coeff: f64,
    pub d_coeff: f64,
    pub lag_coeff: f64,
}

impl HighTCoefficients {
    /// Fraction of the lag carried by coherence.
    pub fn ratio(&self) -> f64 {
        if self.lag_coeff == 0.0 {
            0.0
        } else {
            self.c_coeff / self.lag_coeff
        }
    }
}

/// Zero-temperature densities. `C` has a finite limit while `D` and the lag grow like `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroTBreakdown {
    pub coherence: f64,
    pub lag_over_beta: f64,
    pub population_over_beta: f64,
}

fn pair(pre: &ModelParams, post: &ModelParams) -> QuenchSpec {
    QuenchSpec::new(*pre, *post, f64::INFINITY).expect("infinite beta is valid")
}

/// Exact `beta^2` coefficients for an arbitrary instantaneous quench:
/// integrals of `(eps0 sin D)^2`, `(eps_tau - eps0 cos D)^2` and `|v_tau - v_0|^2`
/// over `dk/(2 pi)`, with `v = (g - cos k, gamma sin k)`.
pub fn high_t_coefficients(
    pre: &ModelParams,
    post: &ModelParams,
    config: &QuadratureConfig,
) -> Result<HighTCoefficients> {
    let spec = pair(pre, post);
    let est = integrate_vec(
        |k| {
            let (x0, y0) = pre.components(k);
            let (xt, yt) = post.components(k);
            let (dx, dy) = (xt - x0, yt - y0);
            let eps_t = xt.hypot(yt);
            let lag = dx * dx + dy * dy;
            if eps_t == 0.0 {
                // the whole displacement is population here
                return [0.0, lag, lag];
            }
            // eps0 sin D = (v_0 x v_tau)/eps_tau ; eps_tau - eps0 cos D = v_tau . (v_tau - v_0)/eps_tau
            let cross = (yt * x0 - y0 * xt) / eps_t;
            let along = (xt * dx + yt * dy) / eps_t;
            [cross * cross, along * along, lag]
        },
        &config_for(&spec, config),
    )?;
    let [c, d, lag] = est.value.map(|v| v * INV_2PI);
    Ok(HighTCoefficients {
        c_coeff: c,
        d_coeff: d,
        lag_coeff: lag,
    })
}

/// Leading order in both `beta` and the quench amplitude `delta`, using the
/// linearized angle change. Coefficients include the factor `delta^2`.
pub fn infinitesimal_high_t(
    kind: QuenchKind,
    g0: f64,
    gamma0: f64,
    delta: f64,
    config: &QuadratureConfig,
) -> Result<HighTCoefficients> {
    let pre = ModelParams::new(g0, gamma0)?;
    let spec = pair(&pre, &pre);
    let est = integrate_vec(
        |k| {
            let (x, y) = pre.components(k);
            let eps = x.hypot(y);
            let s = k.sin();
            // (d/d delta) of v: (1, 0) for the field, (0, sin k) for the anisotropy
            let (dx, dy) = match kind {
                QuenchKind::Field => (1.0, 0.0),
                QuenchKind::Anisotropy => (0.0, s),
            };
            let lag = dx * dx + dy * dy;
            if eps == 0.0 {
                return [0.0, lag, lag];
            }
            let rot = (x * dy - y * dx) / eps;
            let stretch = (x * dx + y * dy) / eps;
            [rot * rot, stretch * stretch, lag]
        },
        &config_for(&spec, config),
    )?;
    let [c, d, lag] = est.value.map(|v| v * INV_2PI * delta * delta);
    Ok(HighTCoefficients {
        c_coeff: c,
        d_coeff: d,
        lag_coeff: lag,
    })
}

/// `C = int h(p_k)`, `lag / beta = 4 int eps_tau p_k`, both over `dk/(2 pi)`.
pub fn zero_t_breakdown(
    pre: &ModelParams,
    post: &ModelParams,
    config: &QuadratureConfig,
) -> Result<ZeroTBreakdown> {
    let spec = pair(pre, post);
    let est = integrate_vec(
        |k| match mode_data(&spec, k) {
            Ok(m) => [binary_entropy(m.p), 4.0 * m.eps_tau * m.p],
            Err(_) => [f64::NAN; 2],
        },
        &config_for(&spec, config),
    )?;
    let [c, lag] = est.value.map(|v| v * INV_2PI);
    Ok(ZeroTBreakdown {
        coherence: c,
        lag_over_beta: lag,
        population_over_beta: lag,
    })
}

/// Ground-state energy density `e0(g) = -int_0^pi dk/pi eps_k`.
pub fn ground_state_energy(params: &ModelParams, config: &QuadratureConfig) -> Result<f64> {
    let spec = pair(params, params);
    let est = integrate_vec(|k| [dispersion(params, k)], &config_for(&spec, config))?;
    Ok(-est.value[0] / PI)
}

/// `[eps(g + h) - 2 eps(g) + eps(g - h)] / h^2` rearranged so that no
/// subtraction of nearly equal energies remains.
fn second_difference(g: f64, gamma: f64, h: f64, k: f64) -> f64 {
    let x = g - k.cos();
    let y = gamma * k.sin();
    let e = x.hypot(y);
    let ep = (x + h).hypot(y);
    let em = (x - h).hypot(y);
    let a = ep + e;
    let b = em + e;
    (a + b) / (a * b) - 8.0 * x * x / (a * b * (ep + em))
}

/// `chi = -d^2 e0 / dg^2` by central differences with steps `h` and `h/2`
/// combined by Richardson extrapolation.
///
/// The differences are taken under the integral sign so that the
/// quadrature error does not get amplified by `1/h^2`.
pub fn susceptibility(g0: f64, gamma0: f64, step: f64, config: &QuadratureConfig) -> Result<f64> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "step must be positive, got {step}"
        )));
    }
    let at = |g: f64| ModelParams::new(g, gamma0);
    let (lo, mid, hi) = (at(g0 - step)?, at(g0)?, at(g0 + step)?);
    let mut cfg = config_for(&pair(&mid, &mid), config);
    cfg.extra_splits
        .extend(config_for(&pair(&lo, &hi), config).extra_splits);
    let est = integrate_vec(
        |k| {
            [
                second_difference(g0, gamma0, step, k),
                second_difference(g0, gamma0, 0.5 * step, k),
            ]
        },
        &cfg,
    )?;
    let [wide, narrow] = est.value.map(|v| v / PI);
    Ok((4.0 * narrow - wide) / 3.0)
}

/// `chi = int_0^pi dk/pi gamma^2 sin^2 k / eps^3`, the analytic second derivative.
pub fn susceptibility_exact(g0: f64, gamma0: f64, config: &QuadratureConfig) -> Result<f64> {
    let p = ModelParams::new(g0, gamma0)?;
    let est = integrate_vec(
        |k| {
            let e = dispersion(&p, k);
            let y = gamma0 * k.sin();
            [y * y / (e * e * e)]
        },
        &config_for(&pair(&p, &p), config),
    )?;
    Ok(est.value[0] / PI)
}

/// Settings for [`kink_cusp_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub gamma0: f64,
    /// Field-quench amplitude.
    pub delta: f64,
    /// Inverse temperature; `inf` scans the zero-temperature coherence.
    pub beta: f64,
    /// Centre of the scan window.
    pub center: f64,
    /// Half-width of the scan window.
    pub window: f64,
    /// Grid spacing.
    pub step: f64,
    pub quadrature: QuadratureConfig,
}

impl ScanConfig {
    pub fn new(gamma0: f64, delta: f64, beta: f64) -> Self {
        Self {
            gamma0,
            delta,
            beta,
            center: 1.0,
            window: 0.1,
            step: 1e-3,
            quadrature: QuadratureConfig::default(),
        }
    }

    pub fn with_grid(mut self, window: f64, step: f64) -> Self {
        self.window = window;
        self.step = step;
        self
    }
}

/// Output of [`kink_cusp_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub g0: Vec<f64>,
    pub coherence: Vec<f64>,
    /// The scanned quantity: `C / beta^2` at finite `beta`, `C` at `beta = inf`.
    pub value: Vec<f64>,
    /// Grid point with the largest second difference.
    pub singular_g0: f64,
    pub slope_left: f64,
    pub slope_right: f64,
    /// Largest change of a one-sided slope when the stencil spacing doubles.
    pub noise: f64,
    pub non_analytic: bool,
    pub peak_g0: f64,
    pub peak_value: f64,
    /// Peak value minus the straight line through the window endpoints.
    pub peak_excess: f64,
}

fn scan_value(cfg: &ScanConfig, g0: f64) -> Result<(f64, f64)> {
    let spec = QuenchSpec::field(g0, cfg.gamma0, cfg.delta, cfg.beta)?;
    if spec.is_zero_temperature() {
        let z = zero_t_breakdown(&spec.pre, &spec.post, &cfg.quadrature)?;
        Ok((z.coherence, z.coherence))
    } else {
        let c = breakdown(&spec, &cfg.quadrature)?.coherence;
        Ok((c, c / (cfg.beta * cfg.beta)))
    }
}

/// Scans the coherence of a field quench on a symmetric grid around
/// `center` and measures one-sided slopes at the most singular grid point.
///
/// Slopes use second-order one-sided stencils. Non-analyticity is flagged
/// when `|s+ - s-|` exceeds ten times the stencil-refinement noise.
pub fn kink_cusp_scan(cfg: &ScanConfig) -> Result<ScanReport> {
    if !(cfg.step > 0.0 && cfg.window >= 4.0 * cfg.step) {
        return Err(Error::InvalidParameter(
            "scan window must span at least four grid steps".into(),
        ));
    }
    let n = (cfg.window / cfg.step).round() as i64;
    let g0: Vec<f64> = (-n..=n).map(|j| cfg.center + j as f64 * cfg.step).collect();
    let mut coherence = Vec::with_capacity(g0.len());
    let mut value = Vec::with_capacity(g0.len());
    for &g in &g0 {
        let (c, v) = scan_value(cfg, g)?;
        coherence.push(c);
        value.push(v);
    }
    Ok(analyze(g0, coherence, value, cfg.step))
}

fn analyze(g0: Vec<f64>, coherence: Vec<f64>, value: Vec<f64>, h: f64) -> ScanReport {
    let f = &value;
    let len = f.len();
    // keep four points on either side for the doubled stencils
    let i = (4..len - 4)
        .max_by(|&a, &b| {
            let d2 = |j: usize| (f[j + 1] - 2.0 * f[j] + f[j - 1]).abs();
            d2(a).total_cmp(&d2(b))
        })
        .expect("grid has at least nine points");
    let left = |s: usize| (3.0 * f[i] - 4.0 * f[i - s] + f[i - 2 * s]) / (2.0 * s as f64 * h);
    let right = |s: usize| (-3.0 * f[i] + 4.0 * f[i + s] - f[i + 2 * s]) / (2.0 * s as f64 * h);
    let (slope_left, slope_right) = (left(1), right(1));
    let noise = (left(1) - left(2)).abs().max((right(1) - right(2)).abs());
    let (peak_idx, &peak_value) = f
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    let (x0, x1) = (g0[0], g0[len - 1]);
    let t = (g0[peak_idx] - x0) / (x1 - x0);
    let background = f[0] + t * (f[len - 1] - f[0]);
    ScanReport {
        singular_g0: g0[i],
        slope_left,
        slope_right,
        noise,
        non_analytic: (slope_right - slope_left).abs() > 10.0 * noise,
        peak_g0: g0[peak_idx],
        peak_value,
        peak_excess: peak_value - background,
        g0,
        coherence,
        value,
    }
}
