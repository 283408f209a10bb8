//! Parameter sweeps evaluated in parallel with deterministic row order.

use rayon::prelude::*;
use xyquench::{QuadratureConfig, QuenchKind};

use crate::axis::Axis;
use crate::record::Row;
use crate::CliError;

#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub g0: Axis,
    pub gamma0: Axis,
    pub beta: Axis,
    pub kind: QuenchKind,
    /// Signed quench amplitude added to `g0` or `gamma0`.
    pub delta: f64,
    pub quadrature: QuadratureConfig,
}

impl SweepGrid {
    /// Rows in `g0`-major order, then `gamma0`, then `beta`, not yet evaluated.
    pub fn rows(&self) -> Vec<Row> {
        let mut out = Vec::with_capacity(
            self.g0.values().len() * self.gamma0.values().len() * self.beta.values().len(),
        );
        for &g0 in self.g0.values() {
            for &gamma0 in self.gamma0.values() {
                let (g_tau, gamma_tau) = match self.kind {
                    QuenchKind::Field => (g0 + self.delta, gamma0),
                    QuenchKind::Anisotropy => (g0, gamma0 + self.delta),
                };
                for &beta in self.beta.values() {
                    out.push(Row::new(g0, gamma0, g_tau, gamma_tau, beta));
                }
            }
        }
        out
    }

    /// Evaluates every row on at most `threads` workers (0 picks the core count).
    pub fn run(&self, threads: usize) -> Result<Vec<Row>, CliError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()?;
        let rows = self.rows();
        Ok(pool.install(|| {
            rows.into_par_iter()
                .map(|r| r.compute(&self.quadrature))
                .collect()
        }))
    }
}

pub fn failed_rows(rows: &[Row]) -> usize {
    rows.iter().filter(|r| r.outcome.is_err()).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_order() {
        let grid = SweepGrid {
            g0: "0:1:2".parse().unwrap(),
            gamma0: "0.5,1".parse().unwrap(),
            beta: "1,inf".parse().unwrap(),
            kind: QuenchKind::Anisotropy,
            delta: -0.1,
            quadrature: QuadratureConfig::default(),
        };
        let keys: Vec<(f64, f64, f64, f64)> = grid
            .rows()
            .iter()
            .map(|r| (r.g0, r.gamma0, r.gamma_tau, r.beta))
            .collect();
        assert_eq!(keys.len(), 8);
        assert_eq!(keys[0], (0.0, 0.5, 0.4, 1.0));
        assert_eq!(keys[1], (0.0, 0.5, 0.4, f64::INFINITY));
        assert_eq!(keys[2], (0.0, 1.0, 0.9, 1.0));
        assert_eq!(keys[4].0, 1.0);
    }
}
