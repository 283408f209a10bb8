//! Finite-`N` sums over the positive-parity momenta `k = (2n+1) pi / N`.

use crate::error::{Error, Result};
use crate::model::{dispersion, mode_data, QuenchSpec};
use crate::numerics::pairwise_sum;
use crate::observables::{
    breakdown_from_sums, initial_pair_entropy, mode_terms, EntropyBreakdown, IntegrandOptions,
};

/// A quench on a periodic chain of `n_sites` spins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    n_sites: usize,
    pub quench: QuenchSpec,
}

impl LatticeSpec {
    pub fn new(n_sites: usize, quench: QuenchSpec) -> Result<Self> {
        if n_sites < 2 || !n_sites.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "number of sites must be even and at least 2, got {n_sites}"
            )));
        }
        Ok(Self { n_sites, quench })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }
}

/// Positive momenta of the even-parity sector, strictly increasing in `(0, pi)`.
pub fn momenta(n_sites: usize) -> Vec<f64> {
    let n = n_sites as f64;
    (0..n_sites / 2)
        .map(|j| (2 * j + 1) as f64 * std::f64::consts::PI / n)
        .collect()
}

/// Von Neumann entropy per site of the pre-quench Gibbs state.
///
/// Each positive momentum carries `2 [ln(2 cosh a) - a tanh a]` with `a = beta eps0`.
/// `beta = inf` gives zero.
pub fn initial_entropy_per_site(spec: &LatticeSpec) -> f64 {
    let beta = spec.quench.beta();
    if beta.is_infinite() {
        return 0.0;
    }
    let terms: Vec<f64> = momenta(spec.n_sites)
        .into_iter()
        .map(|k| initial_pair_entropy(beta * dispersion(&spec.quench.pre, k)))
        .collect();
    pairwise_sum(&terms) / spec.n_sites as f64
}

/// Per-site densities as `(1/N) sum_k` of the per-mode closed forms.
pub fn breakdown_finite(spec: &LatticeSpec) -> Result<EntropyBreakdown> {
    breakdown_finite_with(spec, &IntegrandOptions::default())
}

pub fn breakdown_finite_with(
    spec: &LatticeSpec,
    opts: &IntegrandOptions,
) -> Result<EntropyBreakdown> {
    let beta = spec.quench.require_finite_beta()?;
    let ks = momenta(spec.n_sites);
    let mut cols: [Vec<f64>; 4] = std::array::from_fn(|_| Vec::with_capacity(ks.len()));
    for k in ks {
        let t = mode_terms(&mode_data(&spec.quench, k)?, beta, opts);
        for (col, v) in cols.iter_mut().zip([t.coherence, t.lag, t.work, t.dfree]) {
            col.push(v);
        }
    }
    let n = spec.n_sites as f64;
    let [c, lag, w, df] = cols.map(|col| pairwise_sum(&col) / n);
    Ok(breakdown_from_sums(c, lag, w, df))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadratureConfig;
    use std::f64::consts::PI;

    #[test]
    fn momentum_sets() {
        assert_eq!(momenta(2), vec![PI / 2.0]);
        let m4 = momenta(4);
        assert!((m4[0] - PI / 4.0).abs() < 1e-16 && (m4[1] - 3.0 * PI / 4.0).abs() < 1e-15);
        let m8 = momenta(8);
        assert_eq!(m8.len(), 4);
        for i in 0..4 {
            assert!((m8[i] + m8[3 - i] - PI).abs() < 1e-15);
        }
    }

    #[test]
    fn odd_sizes_rejected() {
        let q = QuenchSpec::field(0.5, 1.0, 0.1, 1.0).unwrap();
        assert!(LatticeSpec::new(3, q).is_err());
        assert!(LatticeSpec::new(0, q).is_err());
        assert!(LatticeSpec::new(6, q).is_ok());
    }

    #[test]
    fn initial_entropy_limits() {
        let q = QuenchSpec::field(1.0, 1.0, 0.0, 1e-9).unwrap();
        let s = LatticeSpec::new(16, q).unwrap();
        assert!((initial_entropy_per_site(&s) - std::f64::consts::LN_2).abs() < 1e-12);
        let s = LatticeSpec::new(16, q.with_beta(f64::INFINITY).unwrap()).unwrap();
        assert_eq!(initial_entropy_per_site(&s), 0.0);
    }

    #[test]
    fn null_quench_is_zero() {
        let q = QuenchSpec::field(0.4, 0.7, 0.0, 2.0).unwrap();
        let b = breakdown_finite(&LatticeSpec::new(10, q).unwrap()).unwrap();
        for v in [b.coherence, b.population, b.lag, b.work, b.dfree] {
            assert!(v.abs() < 1e-15);
        }
    }

    #[test]
    fn converges_to_thermodynamic_limit() {
        let q = QuenchSpec::field(0.5, 0.8, 0.05, 1.5).unwrap();
        let exact = crate::observables::breakdown(&q, &QuadratureConfig::default()).unwrap();
        let mut prev = f64::INFINITY;
        for j in [4, 6, 8, 10] {
            let b = breakdown_finite(&LatticeSpec::new(1 << j, q).unwrap()).unwrap();
            let err = (b.lag - exact.lag).abs();
            assert!(err < prev || err < 1e-13);
            prev = err;
        }
        assert!(prev < 1e-10);
    }

    #[test]
    fn exact_gap_zero_is_reported() {
        // N = 6 has k = pi/3 where cos k = 0.5 to rounding; pick g = cos(k) exactly
        let k = momenta(6)[0];
        let q = QuenchSpec::field(k.cos(), 0.0, 0.1, 1.0).unwrap();
        assert!(matches!(
            breakdown_finite(&LatticeSpec::new(6, q).unwrap()),
            Err(Error::DegenerateAngle { .. })
        ));
    }
}
