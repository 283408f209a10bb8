//! Dense exact diagonalization of the periodic XY chain.
//!
//! The Hamiltonian is assembled from Kronecker products of Pauli matrices and
//! every entropy comes from eigendecompositions. Nothing here touches the
//! free-fermion code, so it can serve as an independent check on it.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::{ModelParams, QuenchSpec};
use crate::numerics::{log_sum_exp, pairwise_sum, xlogx};
use crate::observables::EntropyBreakdown;

/// Largest supported chain.
pub const MAX_SITES: usize = 12;

/// Relative degeneracy tolerance used by [`dense_breakdown`].
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct DenseSystem {
    pub n_sites: usize,
    pub hamiltonian: DMatrix<f64>,
    /// Ascending eigenvalues.
    pub energies: DVector<f64>,
    /// Eigenvectors as columns, matching `energies`.
    pub eigenvectors: DMatrix<f64>,
}

fn pauli_x() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, 1.0, 0.0)
}

/// `i sigma_y`, which is real; `sigma_y (x) sigma_y = -(i sigma_y) (x) (i sigma_y)`.
fn pauli_iy() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

fn pauli_z() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

/// `op_0 (x) op_1 (x) ... (x) op_{N-1}` with identities where `ops` has `None`.
/// Site 0 is the most significant bit of the basis index.
fn kron_chain(ops: &[Option<Matrix2<f64>>]) -> DMatrix<f64> {
    let mut out = DMatrix::from_element(1, 1, 1.0);
    for op in ops {
        let site = match op {
            Some(m) => DMatrix::from_column_slice(2, 2, m.as_slice()),
            None => DMatrix::identity(2, 2),
        };
        out = out.kronecker(&site);
    }
    out
}

fn two_site(n: usize, i: usize, j: usize, op: Matrix2<f64>) -> DMatrix<f64> {
    let mut ops = vec![None; n];
    ops[i] = Some(op);
    ops[j] = Some(op);
    kron_chain(&ops)
}

fn check_size(n_sites: usize) -> Result<()> {
    if n_sites > MAX_SITES {
        return Err(Error::SizeExceeded {
            n: n_sites,
            max: MAX_SITES,
        });
    }
    if n_sites < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 sites, got {n_sites}"
        )));
    }
    Ok(())
}

/// `H = -sum_j [(1+gamma)/2 X_j X_{j+1} + (1-gamma)/2 Y_j Y_{j+1} + g Z_j]`, periodic.
pub fn hamiltonian_matrix(n_sites: usize, params: &ModelParams) -> Result<DMatrix<f64>> {
    check_size(n_sites)?;
    let dim = 1usize << n_sites;
    let (g, gamma) = (params.g(), params.gamma());
    let jx = 0.5 * (1.0 + gamma);
    let jy = 0.5 * (1.0 - gamma);
    let mut h = DMatrix::zeros(dim, dim);
    for j in 0..n_sites {
        let next = (j + 1) % n_sites;
        h -= two_site(n_sites, j, next, pauli_x()) * jx;
        if jy != 0.0 {
            h += two_site(n_sites, j, next, pauli_iy()) * jy;
        }
        if g != 0.0 {
            let mut ops = vec![None; n_sites];
            ops[j] = Some(pauli_z());
            h -= kron_chain(&ops) * g;
        }
    }
    Ok(h)
}

/// Builds and diagonalizes the Hamiltonian of an `n_sites` ring.
pub fn build_hamiltonian(n_sites: usize, params: &ModelParams) -> Result<DenseSystem> {
    let hamiltonian = hamiltonian_matrix(n_sites, params)?;
    let eig = SymmetricEigen::new(hamiltonian.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let eigenvectors = eig.eigenvectors.select_columns(&order);
    Ok(DenseSystem {
        n_sites,
        hamiltonian,
        energies,
        eigenvectors,
    })
}

impl DenseSystem {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// `max |H - H^T|`.
    pub fn hermiticity_residual(&self) -> f64 {
        (&self.hamiltonian - self.hamiltonian.transpose()).amax()
    }

    /// `max |T H T^-1 - H|` for the one-site cyclic shift `T`.
    pub fn translation_residual(&self) -> f64 {
        let n = self.n_sites;
        let mask = (1usize << n) - 1;
        let shift = |s: usize| ((s << 1) | (s >> (n - 1))) & mask;
        let mut worst: f64 = 0.0;
        for col in 0..self.dim() {
            for row in 0..self.dim() {
                let d = self.hamiltonian[(shift(row), shift(col))] - self.hamiltonian[(row, col)];
                worst = worst.max(d.abs());
            }
        }
        worst
    }

    pub fn spectral_range(&self) -> f64 {
        self.energies[self.dim() - 1] - self.energies[0]
    }
}

/// Contiguous runs of eigenvalues whose neighbours lie within `tol`.
fn degenerate_groups(energies: &DVector<f64>, tol: f64) -> Result<Vec<std::ops::Range<usize>>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=energies.len() {
        if i < energies.len() {
            let gap = energies[i] - energies[i - 1];
            if gap <= tol {
                continue;
            }
            if gap <= 10.0 * tol {
                return Err(Error::DegeneracyAmbiguity {
                    gap,
                    tolerance: tol,
                });
            }
        }
        groups.push(start..i);
        start = i;
    }
    Ok(groups)
}

fn entropy_of(values: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = values.into_iter().map(|l| -xlogx(l.max(0.0))).collect();
    pairwise_sum(&terms)
}

/// Dense per-site breakdown with the default degeneracy tolerance.
pub fn dense_breakdown(n_sites: usize, spec: &QuenchSpec) -> Result<EntropyBreakdown> {
    dense_breakdown_with_tol(n_sites, spec, DEFAULT_DEGENERACY_TOL)
}

/// Dense per-site breakdown. Dephasing projects onto eigenspaces of the
/// post-quench Hamiltonian, grouping levels closer than
/// `rel_tol * spectral_range`.
pub fn dense_breakdown_with_tol(
    n_sites: usize,
    spec: &QuenchSpec,
    rel_tol: f64,
) -> Result<EntropyBreakdown> {
    let beta = spec.require_finite_beta()?;
    let pre = build_hamiltonian(n_sites, &spec.pre)?;
    let post = build_hamiltonian(n_sites, &spec.post)?;
    dense_from_systems(&pre, &post, beta, rel_tol)
}

/// Same as [`dense_breakdown_with_tol`] for already diagonalized systems.
pub fn dense_from_systems(
    pre: &DenseSystem,
    post: &DenseSystem,
    beta: f64,
    rel_tol: f64,
) -> Result<EntropyBreakdown> {
    let n = pre.n_sites as f64;
    let log_w: Vec<f64> = pre.energies.iter().map(|e| -beta * e).collect();
    let ln_z0 = log_sum_exp(&log_w);
    let w: Vec<f64> = log_w.iter().map(|l| (l - ln_z0).exp()).collect();
    let log_sigma: Vec<f64> = post.energies.iter().map(|e| -beta * e).collect();
    let ln_zt = log_sum_exp(&log_sigma);

    // initial state in the post-quench eigenbasis
    let overlap = post.eigenvectors.transpose() * &pre.eigenvectors;
    let weighted = DMatrix::from_fn(overlap.nrows(), overlap.ncols(), |i, j| {
        overlap[(i, j)] * w[j]
    });
    let rho = &weighted * overlap.transpose();
    let populations: Vec<f64> = (0..post.dim()).map(|j| rho[(j, j)]).collect();

    let s_initial = entropy_of(w.iter().copied());
    let tol = rel_tol * post.spectral_range().max(f64::MIN_POSITIVE);
    let mut s_dephased_terms = Vec::new();
    for group in degenerate_groups(&post.energies, tol)? {
        if group.len() == 1 {
            s_dephased_terms.push(-xlogx(populations[group.start].max(0.0)));
        } else {
            let len = group.len();
            let block = rho
                .view((group.start, group.start), (len, len))
                .into_owned();
            let ev = SymmetricEigen::new(block).eigenvalues;
            s_dephased_terms.push(entropy_of(ev.iter().copied()));
        }
    }
    let s_dephased = pairwise_sum(&s_dephased_terms);

    // -tr rho' ln sigma_tau
    let cross_terms: Vec<f64> = populations
        .iter()
        .zip(&log_sigma)
        .map(|(p, l)| p * (ln_zt - l))
        .collect();
    let cross = pairwise_sum(&cross_terms);
    let mean_post: Vec<f64> = populations
        .iter()
        .zip(post.energies.iter())
        .map(|(p, e)| p * e)
        .collect();
    let mean_pre: Vec<f64> = w
        .iter()
        .zip(pre.energies.iter())
        .map(|(p, e)| p * e)
        .collect();

    let coherence = s_dephased - s_initial;
    let population = cross - s_dephased;
    Ok(EntropyBreakdown {
        coherence: coherence / n,
        population: population / n,
        lag: (coherence + population) / n,
        work: (pairwise_sum(&mean_post) - pairwise_sum(&mean_pre)) / n,
        dfree: -(ln_zt - ln_z0) / beta / n,
    })
}
