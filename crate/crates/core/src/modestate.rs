//! Explicit 4x4 density matrix of a `±k` mode pair after the quench.
//!
//! Basis order is `|00>, |01>, |10>, |11>` in post-quench occupations.
//! All entropies here come from dense eigendecompositions and serve as an
//! oracle for the closed forms in [`crate::observables`].

use nalgebra::{Matrix4, SymmetricEigen};

use crate::error::Result;
use crate::model::{mode_data, QuenchSpec};
use crate::numerics::{one_minus_tanh, xlogx};

const CLIP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePairState {
    pub matrix: Matrix4<f64>,
}

impl ModePairState {
    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let e = SymmetricEigen::new(self.matrix).eigenvalues;
        [e[0], e[1], e[2], e[3]]
    }

    pub fn is_diagonal(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || self.matrix[(i, j)] == 0.0))
    }
}

/// Post-quench state of the pair for finite `beta`.
pub fn build_mode_state(spec: &QuenchSpec, k: f64) -> Result<ModePairState> {
    let beta = spec.require_finite_beta()?;
    let m = mode_data(spec, k)?;
    let a = beta * m.eps0;
    // entries over 4 cosh^2 a, in terms of t = tanh a and u = 1 - t:
    // (cosh 2a +- sinh 2a cos D) -> (1 + t^2 +- 2 t cos D)/4, sinh 2a -> t/2, 1 -> (1 - t^2)/4
    let t = a.tanh();
    let u = one_minus_tanh(a);
    let mut rho = Matrix4::zeros();
    rho[(0, 0)] = ((1.0 + t) * (1.0 + t) - 4.0 * t * m.p) / 4.0;
    rho[(3, 3)] = (u * u + 4.0 * t * m.p) / 4.0;
    rho[(1, 1)] = u * (1.0 + t) / 4.0;
    rho[(2, 2)] = rho[(1, 1)];
    rho[(0, 3)] = -0.5 * t * m.sin_delta;
    rho[(3, 0)] = rho[(0, 3)];
    Ok(ModePairState { matrix: rho })
}

/// Gibbs state of the pair for single-mode energy `eps`, diagonal in its own basis.
pub fn thermal_pair(beta: f64, eps: f64) -> ModePairState {
    let b = beta * eps;
    let t = b.tanh();
    let u = one_minus_tanh(b);
    let mut rho = Matrix4::zeros();
    rho[(0, 0)] = (1.0 + t) * (1.0 + t) / 4.0;
    rho[(1, 1)] = u * (1.0 + t) / 4.0;
    rho[(2, 2)] = rho[(1, 1)];
    rho[(3, 3)] = u * u / 4.0;
    ModePairState { matrix: rho }
}

/// `-tr rho ln rho`, clipping eigenvalues in `[-1e-14, 0)`.
pub fn vn_entropy(state: &ModePairState) -> f64 {
    -state
        .eigenvalues()
        .iter()
        .map(|&l| xlogx(if (-CLIP..0.0).contains(&l) { 0.0 } else { l }))
        .sum::<f64>()
}

/// Drops every entry off the diagonal.
pub fn dephase(state: &ModePairState) -> ModePairState {
    ModePairState {
        matrix: Matrix4::from_diagonal(&state.matrix.diagonal()),
    }
}

/// `tr rho (ln rho - ln sigma)`. Infinite when `rho` leaves the support of `sigma`.
pub fn relative_entropy(rho: &ModePairState, sigma: &ModePairState) -> f64 {
    let eig = SymmetricEigen::new(sigma.matrix);
    let rotated = eig.eigenvectors.transpose() * rho.matrix * eig.eigenvectors;
    let mut cross = 0.0;
    for j in 0..4 {
        let w = rotated[(j, j)];
        let mu = eig.eigenvalues[j];
        if w.abs() <= CLIP {
            continue;
        }
        if mu <= 0.0 {
            return f64::INFINITY;
        }
        cross += w * mu.ln();
    }
    -vn_entropy(rho) - cross
}

/// Pair-level `C`, `D` and lag computed from the dense state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEntropies {
    pub initial: f64,
    pub dephased: f64,
    pub coherence: f64,
    pub population: f64,
    pub lag: f64,
}

pub fn pair_entropies(spec: &QuenchSpec, k: f64) -> Result<PairEntropies> {
    let beta = spec.require_finite_beta()?;
    let rho = build_mode_state(spec, k)?;
    let diag = dephase(&rho);
    let m = mode_data(spec, k)?;
    let target = thermal_pair(beta, m.eps_tau);
    let initial = vn_entropy(&rho);
    let dephased = vn_entropy(&diag);
    Ok(PairEntropies {
        initial,
        dephased,
        coherence: relative_entropy(&rho, &diag),
        population: relative_entropy(&diag, &target),
        lag: relative_entropy(&rho, &target),
    })
}
