//! Seeded random instances: Gaussian-unitary-ensemble Hermitian matrices,
//! Haar unitaries, Hilbert-Schmidt density matrices and random ensembles.
//!
//! Everything is deterministic given the caller's RNG; sweeps and oracles
//! derive their generators from a single `u64` seed so runs are reproducible
//! byte for byte.

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, HermitianOperator, C64};
use crate::states::{DensityMatrix, Ensemble};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_c64(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Square matrix of iid standard complex Gaussians.
pub fn random_ginibre(dim: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| gaussian_c64(rng))
}

/// GUE-style random Hermitian matrix, `(G + G^dag)/2`.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> HermitianOperator {
    HermitianOperator::symmetrized(random_ginibre(dim, rng))
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phase fix
/// that makes the factorization unique.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = random_ginibre(dim, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Hilbert-Schmidt random density matrix, `G G^dag / tr(G G^dag)`.
pub fn random_density_matrix(dim: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = random_ginibre(dim, rng);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::from_matrix(w.scale(1.0 / tr)).expect("normalized Wishart is a state")
}

/// Haar-random pure state projector.
pub fn random_pure_state(dim: usize, rng: &mut impl Rng) -> DensityMatrix {
    let v = DVector::from_fn(dim, |_, _| gaussian_c64(rng));
    let n = v.norm();
    let v = v.scale(1.0 / n);
    DensityMatrix::from_matrix(&v * v.adjoint()).expect("unit vector projector is a state")
}

/// Flat Dirichlet probability vector (normalized exponentials), with the last
/// entry fixed so the sum is exactly 1.
pub fn random_probabilities(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut p: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = p.iter().sum();
    for v in p.iter_mut() {
        *v /= total;
    }
    let head: f64 = p[..n - 1].iter().sum();
    p[n - 1] = 1.0 - head;
    p
}

/// Random ensemble of `n` mixed states on dimension `dim` with Dirichlet
/// priors.
pub fn random_ensemble(dim: usize, n: usize, rng: &mut impl Rng) -> Ensemble {
    let probs = random_probabilities(n, rng);
    let items = probs
        .into_iter()
        .map(|p| (p, random_density_matrix(dim, rng)))
        .collect();
    Ensemble::new(items).expect("sampled ensemble is valid")
}

/// Random PSD Hamiltonian with ground energy exactly 0 and `||H||_inf = e_max`.
pub fn random_psd_hamiltonian(dim: usize, e_max: f64, rng: &mut impl Rng) -> HermitianOperator {
    let g = random_hermitian(dim, rng);
    let lo = g.min_eigenvalue();
    let hi = g.max_eigenvalue();
    let span = hi - lo;
    if span <= 0.0 {
        return HermitianOperator::zeros(dim);
    }
    g.map_eigenvalues(|l| (l - lo) / span * e_max)
}

/// Random two-outcome POVM `{M, I - M}` with `0 <= M <= I`.
pub fn random_two_outcome_povm(
    dim: usize,
    rng: &mut impl Rng,
) -> (HermitianOperator, HermitianOperator) {
    let g = random_hermitian(dim, rng);
    let lo = g.min_eigenvalue();
    let hi = g.max_eigenvalue();
    let m = if hi - lo <= 0.0 {
        HermitianOperator::zeros(dim)
    } else {
        g.map_eigenvalues(|l| (l - lo) / (hi - lo))
    };
    let complement = HermitianOperator::symmetrized(CMatrix::identity(dim, dim) - m.matrix());
    (m, complement)
}
