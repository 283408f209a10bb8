//! JSON records for the analytic limits.

use serde_json::{json, Value};
use xyquench::limits::{
    high_t_coefficients, infinitesimal_high_t, kink_cusp_scan, susceptibility,
    susceptibility_exact, zero_t_breakdown, ScanConfig,
};
use xyquench::model::{ModelParams, QuenchKind};
use xyquench::{QuadratureConfig, Result};

pub fn high_t(pre: &ModelParams, post: &ModelParams, cfg: &QuadratureConfig) -> Result<Value> {
    let c = high_t_coefficients(pre, post, cfg)?;
    Ok(json!({
        "limit": "high_t",
        "c_coeff": c.c_coeff,
        "d_coeff": c.d_coeff,
        "lag_coeff": c.lag_coeff,
        "ratio": c.ratio(),
    }))
}

pub fn infinitesimal(
    kind: QuenchKind,
    g0: f64,
    gamma0: f64,
    delta: f64,
    cfg: &QuadratureConfig,
) -> Result<Value> {
    let c = infinitesimal_high_t(kind, g0, gamma0, delta, cfg)?;
    Ok(json!({
        "limit": "infinitesimal_high_t",
        "c_coeff": c.c_coeff,
        "d_coeff": c.d_coeff,
        "lag_coeff": c.lag_coeff,
        "ratio": c.ratio(),
    }))
}

pub fn zero_t(pre: &ModelParams, post: &ModelParams, cfg: &QuadratureConfig) -> Result<Value> {
    let z = zero_t_breakdown(pre, post, cfg)?;
    Ok(json!({
        "limit": "zero_t",
        "coherence": z.coherence,
        "lag_over_beta": z.lag_over_beta,
        "population_over_beta": z.population_over_beta,
    }))
}

pub fn chi(g0: f64, gamma0: f64, step: f64, cfg: &QuadratureConfig) -> Result<Value> {
    Ok(json!({
        "limit": "susceptibility",
        "chi": susceptibility(g0, gamma0, step, cfg)?,
        "chi_integral": susceptibility_exact(g0, gamma0, cfg)?,
        "step": step,
    }))
}

pub fn scan(cfg: &ScanConfig) -> Result<Value> {
    let r = kink_cusp_scan(cfg)?;
    Ok(json!({
        "limit": "scan",
        "beta": if cfg.beta.is_finite() { json!(cfg.beta) } else { json!("inf") },
        "singular_g0": r.singular_g0,
        "slope_left": r.slope_left,
        "slope_right": r.slope_right,
        "noise": r.noise,
        "non_analytic": r.non_analytic,
        "peak_g0": r.peak_g0,
        "peak_value": r.peak_value,
        "peak_excess": r.peak_excess,
        "g0": r.g0,
        "value": r.value,
    }))
}
