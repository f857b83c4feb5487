//! Exact simulation of the ancilla-readout discrimination protocol.
//!
//! A [`Protocol`] couples an encoding register holding one of `N` states
//! `rho_x` to an `N`-dimensional classical ancilla prepared in the most
//! likely symbol, evolves the pair under `U = exp(-iHt/hbar)`, and reads the
//! ancilla in the computational basis. The index convention is
//! `encoding (x) ancilla` with the encoding on the slow (row-major) index.
//!
//! The module also provides the `W_x` decomposition of the evolved
//! measurement operators `M_x = U^dag (I (x) P_x) U = I (x) P_x + W_x` that
//! the analytic bounds are organized around, and two numerical oracles: a
//! seeded random search for good Hamiltonians under a spectral-norm budget,
//! and a fixed-point iteration for the optimal time-unlimited measurement.

use crate::error::{Error, Result};
use crate::linalg::{kron, trace_product, CMatrix, HermitianOperator, C64};
use crate::states::{embed_with_ancilla, EmbeddedState, Ensemble};

/// Subtract the ground energy so the lowest level is exactly 0.
///
/// A term proportional to the identity contributes only a global phase to
/// the evolution, so success probabilities are unchanged.
pub fn shift_to_zero_ground(h: &HermitianOperator) -> HermitianOperator {
    let e0 = h.min_eigenvalue();
    h.map_eigenvalues(|l| l - e0)
}

/// The full discrimination setup: ensemble, interaction Hamiltonian, time,
/// `hbar` and the ancilla preparation index.
#[derive(Debug, Clone)]
pub struct Protocol {
    ensemble: Ensemble,
    hamiltonian: HermitianOperator,
    input_hamiltonian: HermitianOperator,
    ground_shift: f64,
    time: f64,
    hbar: f64,
    ancilla_index: usize,
}

impl Protocol {
    /// Build a protocol with the ancilla prepared in `x_max`. The Hamiltonian
    /// must act on `encoding_dim * N`; it is shifted to ground energy 0 on
    /// construction (the input is retained for reporting).
    pub fn new(
        ensemble: Ensemble,
        hamiltonian: HermitianOperator,
        time: f64,
        hbar: f64,
    ) -> Result<Self> {
        let ancilla_index = ensemble.x_max_index();
        Self::with_ancilla_index(ensemble, hamiltonian, time, hbar, ancilla_index)
    }

    /// Same as [`Protocol::new`] but with an explicit ancilla preparation.
    pub fn with_ancilla_index(
        ensemble: Ensemble,
        hamiltonian: HermitianOperator,
        time: f64,
        hbar: f64,
        ancilla_index: usize,
    ) -> Result<Self> {
        let n = ensemble.len();
        let expected = ensemble.dim() * n;
        if hamiltonian.dim() != expected {
            return Err(Error::DimensionMismatch(hamiltonian.dim(), expected));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        if !(time >= 0.0 && time.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "time must be nonnegative, got {time}"
            )));
        }
        if ancilla_index >= n {
            return Err(Error::IndexOutOfRange {
                index: ancilla_index,
                dim: n,
            });
        }
        let ground_shift = hamiltonian.min_eigenvalue();
        let shifted = shift_to_zero_ground(&hamiltonian);
        Ok(Self {
            ensemble,
            hamiltonian: shifted,
            input_hamiltonian: hamiltonian,
            ground_shift,
            time,
            hbar,
            ancilla_index,
        })
    }

    pub fn ensemble(&self) -> &Ensemble {
        &self.ensemble
    }

    /// The shifted Hamiltonian actually driving the evolution (`E_0 = 0`).
    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.hamiltonian
    }

    /// The Hamiltonian as supplied by the caller.
    pub fn input_hamiltonian(&self) -> &HermitianOperator {
        &self.input_hamiltonian
    }

    /// Ground energy subtracted at construction.
    pub fn ground_shift(&self) -> f64 {
        self.ground_shift
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn ancilla_index(&self) -> usize {
        self.ancilla_index
    }

    pub fn encoding_dim(&self) -> usize {
        self.ensemble.dim()
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ensemble.len()
    }

    pub fn total_dim(&self) -> usize {
        self.encoding_dim() * self.ancilla_dim()
    }

    /// A copy of this protocol at a different readout time.
    pub fn at_time(&self, time: f64) -> Result<Self> {
        Self::with_ancilla_index(
            self.ensemble.clone(),
            self.input_hamiltonian.clone(),
            time,
            self.hbar,
            self.ancilla_index,
        )
    }

    /// `rho_x (x) |anc><anc|`.
    pub fn embedded_state(&self, x: usize) -> Result<EmbeddedState> {
        if x >= self.ensemble.len() {
            return Err(Error::IndexOutOfRange {
                index: x,
                dim: self.ensemble.len(),
            });
        }
        embed_with_ancilla(
            self.ensemble.state(x),
            self.ancilla_dim(),
            self.ancilla_index,
        )
    }

    /// `I (x) |x><x|` on the full space.
    pub fn ancilla_projector(&self, x: usize) -> Result<CMatrix> {
        let n = self.ancilla_dim();
        if x >= n {
            return Err(Error::IndexOutOfRange { index: x, dim: n });
        }
        let d = self.encoding_dim();
        let mut proj = CMatrix::zeros(n, n);
        proj[(x, x)] = C64::new(1.0, 0.0);
        Ok(kron(&CMatrix::identity(d, d), &proj))
    }

    /// `U = exp(-iHt/hbar)`.
    pub fn evolution_unitary(&self) -> CMatrix {
        self.hamiltonian.expm_antihermitian(-self.time / self.hbar)
    }

    /// `R = U - I`.
    pub fn residual(&self) -> CMatrix {
        let dim = self.total_dim();
        self.evolution_unitary() - CMatrix::identity(dim, dim)
    }

    /// The evolved measurement operators `M_x = U^dag (I (x) P_x) U`.
    /// They are PSD and sum to the identity.
    pub fn measurement_operators(&self) -> Result<Vec<HermitianOperator>> {
        let u = self.evolution_unitary();
        let udag = u.adjoint();
        (0..self.ancilla_dim())
            .map(|x| {
                let p = self.ancilla_projector(x)?;
                Ok(HermitianOperator::symmetrized(&udag * p * &u))
            })
            .collect()
    }

    /// Split `M_x - I (x) P_x` into the cross term `W1 = (I (x) P_x) R +
    /// R^dag (I (x) P_x)` and the quadratic term `W2 = R^dag (I (x) P_x) R`.
    pub fn w_decomposition(&self, x: usize) -> Result<WDecomposition> {
        let p = self.ancilla_projector(x)?;
        let r = self.residual();
        let rdag = r.adjoint();
        let w1 = HermitianOperator::symmetrized(&p * &r + &rdag * &p);
        let w2 = HermitianOperator::symmetrized(&rdag * &p * &r);
        Ok(WDecomposition { w1, w2, symbol: x })
    }

    /// Average success probability
    /// `sum_x p_x tr((I (x) P_x) U rho~_x U^dag)`.
    pub fn success_probability(&self) -> Result<f64> {
        let u = self.evolution_unitary();
        let udag = u.adjoint();
        let n = self.ancilla_dim();
        let d = self.encoding_dim();
        let mut total = 0.0;
        for x in 0..n {
            let p_x = self.ensemble.probability(x);
            if p_x == 0.0 {
                continue;
            }
            let embedded = self.embedded_state(x)?;
            let evolved = &u * embedded.matrix() * &udag;
            let mut diag = 0.0;
            for i in 0..d {
                diag += evolved[(i * n + x, i * n + x)].re;
            }
            total += p_x * diag;
        }
        Ok(total)
    }
}

/// The correction `W_x = W1 + W2` to the static measurement `I (x) P_x`.
#[derive(Debug, Clone)]
pub struct WDecomposition {
    pub w1: HermitianOperator,
    pub w2: HermitianOperator,
    pub symbol: usize,
}

impl WDecomposition {
    pub fn total(&self) -> HermitianOperator {
        HermitianOperator::symmetrized(self.w1.matrix() + self.w2.matrix())
    }
}

/// Randomized search for a good interaction Hamiltonian with `H >= 0` and
/// `||H||_inf <= e_max`, deterministic per seed.
///
/// This is a lower-bound witness, not a certified optimum: it seeds the
/// search with the zero Hamiltonian and (for two symbols) the controlled-flip
/// construction, then hill-climbs with spectral reprojection. `budget` counts
/// search evaluations; 0 returns the zero-Hamiltonian baseline.
pub fn optimize_hamiltonian(
    ensemble: &Ensemble,
    time: f64,
    e_max: f64,
    hbar: f64,
    budget: usize,
    seed: u64,
) -> Result<(HermitianOperator, f64)> {
    if !(e_max > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "e_max must be positive, got {e_max}"
        )));
    }
    let dim = ensemble.dim() * ensemble.len();
    let evaluate = |h: &HermitianOperator| -> Result<f64> {
        Protocol::new(ensemble.clone(), h.clone(), time, hbar)?.success_probability()
    };

    let mut best_h = HermitianOperator::zeros(dim);
    let mut best_p = evaluate(&best_h)?;
    if budget == 0 {
        return Ok((best_h, best_p));
    }

    // The analytic controlled-flip candidates are in the search space for
    // two-symbol ensembles; seed with them.
    let mut seeds: Vec<HermitianOperator> = Vec::new();
    if ensemble.len() == 2 {
        let (r0, r1) = (ensemble.state(0), ensemble.state(1));
        if let Ok(built) = crate::attainment::build_attaining(r0, r1, e_max) {
            seeds.push(built.hamiltonian().clone());
        }
        let weighted_diff = HermitianOperator::symmetrized(
            r1.matrix().scale(ensemble.probability(1)) - r0.matrix().scale(ensemble.probability(0)),
        );
        if let Ok(built) = crate::attainment::build_attaining_from_difference(&weighted_diff, e_max)
        {
            seeds.push(built.hamiltonian().clone());
        }
    }

    let mut spent = 0usize;
    for cand in seeds {
        if spent >= budget {
            break;
        }
        spent += 1;
        let p = evaluate(&cand)?;
        if p > best_p {
            best_p = p;
            best_h = cand;
        }
    }

    let mut rng = crate::sampling::rng_from_seed(seed);
    while spent < budget {
        let mut current = crate::sampling::random_psd_hamiltonian(dim, e_max, &mut rng);
        spent += 1;
        let mut current_p = evaluate(&current)?;
        if current_p > best_p {
            best_p = current_p;
            best_h = current.clone();
        }
        let mut step = 0.5;
        let mut local = 0;
        while spent < budget && local < 24 && step > 1e-4 {
            local += 1;
            spent += 1;
            let noise = crate::sampling::random_hermitian(dim, &mut rng);
            let trial = clamp_spectrum(
                &HermitianOperator::symmetrized(
                    current.matrix() + noise.matrix().scale(step * e_max),
                ),
                e_max,
            );
            let p = evaluate(&trial)?;
            if p > current_p {
                current_p = p;
                current = trial.clone();
            } else {
                step *= 0.8;
            }
            if p > best_p {
                best_p = p;
                best_h = trial;
            }
        }
    }
    Ok((best_h, best_p))
}

/// Shift to ground energy 0, then rescale if the top of the spectrum exceeds
/// `e_max`.
fn clamp_spectrum(h: &HermitianOperator, e_max: f64) -> HermitianOperator {
    let lo = h.min_eigenvalue();
    let hi = h.max_eigenvalue() - lo;
    if hi <= e_max {
        h.map_eigenvalues(|l| l - lo)
    } else {
        h.map_eigenvalues(|l| (l - lo) / hi * e_max)
    }
}

/// Fixed-point iteration for the optimal time-unlimited measurement
/// (steepest-ascent POVM update). Returns the best POVM seen and its
/// guessing probability; the POVM is complete to within rounding.
///
/// Stops early once the relative change in the guessing probability drops
/// below `1e-10`.
pub fn optimal_measurement_iterate(
    ensemble: &Ensemble,
    iterations: usize,
) -> Result<(Vec<HermitianOperator>, f64)> {
    let n = ensemble.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "measurement iteration needs at least two symbols".into(),
        ));
    }
    let dim = ensemble.dim();
    let x_max = ensemble.x_max_index();
    let weighted: Vec<CMatrix> = ensemble
        .items()
        .iter()
        .map(|(p, rho)| rho.matrix().scale(*p))
        .collect();

    let guess_probability = |povm: &[HermitianOperator]| -> f64 {
        povm.iter()
            .zip(&weighted)
            .map(|(m, w)| trace_product(m.matrix(), w).re)
            .sum()
    };

    let mut povm: Vec<HermitianOperator> = (0..n)
        .map(|_| HermitianOperator::symmetrized(CMatrix::identity(dim, dim).scale(1.0 / n as f64)))
        .collect();
    let mut best = (povm.clone(), guess_probability(&povm));
    let mut previous = best.1;

    for _ in 0..iterations {
        let mut lambda = CMatrix::zeros(dim, dim);
        let updates: Vec<CMatrix> = povm
            .iter()
            .zip(&weighted)
            .map(|(m, w)| {
                let t = w * m.matrix() * w;
                lambda += &t;
                t
            })
            .collect();
        let lambda = HermitianOperator::symmetrized(lambda);
        let cutoff = lambda.max_eigenvalue().max(0.0) * 1e-13 + 1e-300;
        let inv_sqrt = lambda.map_eigenvalues(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 });
        let support = lambda.map_eigenvalues(|l| if l > cutoff { 1.0 } else { 0.0 });
        let complement =
            HermitianOperator::symmetrized(CMatrix::identity(dim, dim) - support.matrix());

        povm = updates
            .iter()
            .enumerate()
            .map(|(x, t)| {
                let mut m = inv_sqrt.matrix() * t * inv_sqrt.matrix();
                if x == x_max {
                    // Park the unsupported sector on the a-priori winner so
                    // the POVM stays complete.
                    m += complement.matrix();
                }
                HermitianOperator::symmetrized(m)
            })
            .collect();

        let p = guess_probability(&povm);
        if p > best.1 {
            best = (povm.clone(), p);
        }
        if (p - previous).abs() < 1e-10 * p.abs().max(1.0) {
            break;
        }
        previous = p;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_entry, unitarity_residual};
    use crate::sampling;
    use crate::states::{helstrom_guess, DensityMatrix};
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn random_protocol(dim: usize, n: usize, time: f64, rng: &mut impl Rng) -> Protocol {
        let ensemble = sampling::random_ensemble(dim, n, rng);
        let h = sampling::random_psd_hamiltonian(dim * n, 1.0, rng);
        Protocol::new(ensemble, h, time, 1.0).unwrap()
    }

    #[test]
    fn shift_examples() {
        let h = HermitianOperator::from_real_diagonal(&[3.0, 5.0]);
        let shifted = shift_to_zero_ground(&h);
        assert_abs_diff_eq!(shifted.eigenvalues()[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(shifted.eigenvalues()[1], 2.0, epsilon = 1e-12);
        let already = HermitianOperator::from_real_diagonal(&[0.0, 2.0]);
        assert!(
            max_abs_entry(&(shift_to_zero_ground(&already).matrix() - already.matrix())) <= 1e-12
        );
    }

    #[test]
    fn success_invariant_under_identity_shift() {
        let mut rng = sampling::rng_from_seed(31);
        for _ in 0..8 {
            let ensemble = sampling::random_ensemble(2, 2, &mut rng);
            let g = sampling::random_hermitian(4, &mut rng);
            let c = -5.0 + 10.0 * rng.random::<f64>();
            let shifted_in =
                HermitianOperator::symmetrized(g.matrix() + CMatrix::identity(4, 4).scale(c));
            let p1 = Protocol::new(ensemble.clone(), g.clone(), 0.7, 1.0)
                .unwrap()
                .success_probability()
                .unwrap();
            let p2 = Protocol::new(ensemble, shifted_in, 0.7, 1.0)
                .unwrap()
                .success_probability()
                .unwrap();
            assert_abs_diff_eq!(p1, p2, epsilon = 1e-9);
        }
    }

    #[test]
    fn evolution_trivial_cases() {
        let mut rng = sampling::rng_from_seed(32);
        let p0 = random_protocol(2, 2, 0.0, &mut rng);
        assert!(max_abs_entry(&(p0.evolution_unitary() - CMatrix::identity(4, 4))) == 0.0);
        let ensemble = sampling::random_ensemble(2, 2, &mut rng);
        let pz = Protocol::new(ensemble, HermitianOperator::zeros(4), 1.3, 1.0).unwrap();
        assert!(max_abs_entry(&(pz.evolution_unitary() - CMatrix::identity(4, 4))) <= 1e-12);
        let p = random_protocol(3, 2, 1.1, &mut rng);
        assert!(unitarity_residual(&p.evolution_unitary()) <= 1e-9);
    }

    #[test]
    fn residual_identity_from_spectrum() {
        let mut rng = sampling::rng_from_seed(33);
        let p = random_protocol(2, 3, 0.9, &mut rng);
        let r = p.residual();
        let rrdag = &r * r.adjoint();
        // RR^dag = 2 sum_n (1 - cos(t E_n / hbar)) |E_n><E_n|.
        let expected = p
            .hamiltonian()
            .map_eigenvalues(|e| 2.0 * (1.0 - (p.time() * e / p.hbar()).cos()));
        assert!(max_abs_entry(&(rrdag - expected.matrix())) <= 1e-9);

        let e = 2.0;
        let two = Ensemble::uniform(vec![
            DensityMatrix::basis_state(1, 0).unwrap(),
            DensityMatrix::basis_state(1, 0).unwrap(),
        ])
        .unwrap();
        let h = HermitianOperator::from_real_diagonal(&[0.0, e]);
        let proto = Protocol::new(two, h, std::f64::consts::PI / e, 1.0).unwrap();
        let eigs = HermitianOperator::symmetrized(proto.residual())
            .eigenvalues()
            .to_vec();
        assert_abs_diff_eq!(eigs[0], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn measurement_operators_complete_and_psd() {
        let mut rng = sampling::rng_from_seed(34);
        for (dim, n) in [(2, 2), (3, 2), (2, 4), (4, 3)] {
            let p = random_protocol(dim, n, 0.4 + rng.random::<f64>(), &mut rng);
            let ms = p.measurement_operators().unwrap();
            let mut sum = CMatrix::zeros(p.total_dim(), p.total_dim());
            for m in &ms {
                assert!(m.is_psd(1e-9));
                sum += m.matrix();
            }
            assert!(
                max_abs_entry(&(sum - CMatrix::identity(p.total_dim(), p.total_dim()))) <= 1e-9
            );
        }
    }

    #[test]
    fn measurement_operators_trivial_cases() {
        let mut rng = sampling::rng_from_seed(35);
        let p = random_protocol(2, 3, 0.0, &mut rng);
        for (x, m) in p.measurement_operators().unwrap().iter().enumerate() {
            assert!(max_abs_entry(&(m.matrix() - p.ancilla_projector(x).unwrap())) <= 1e-12);
        }
        let single = Ensemble::new(vec![(1.0, DensityMatrix::maximally_mixed(2))]).unwrap();
        let h = sampling::random_psd_hamiltonian(2, 1.0, &mut rng);
        let p1 = Protocol::new(single, h, 0.8, 1.0).unwrap();
        let ms = p1.measurement_operators().unwrap();
        assert_eq!(ms.len(), 1);
        assert!(max_abs_entry(&(ms[0].matrix() - CMatrix::identity(2, 2))) <= 1e-9);
    }

    #[test]
    fn w_decomposition_identities() {
        let mut rng = sampling::rng_from_seed(36);
        let p = random_protocol(2, 3, 0.8, &mut rng);
        let ms = p.measurement_operators().unwrap();
        for x in 0..3 {
            let w = p.w_decomposition(x).unwrap();
            assert!(w.w2.is_psd(1e-10));
            let rebuilt = w.total();
            let expected = ms[x].matrix() - p.ancilla_projector(x).unwrap();
            assert!(max_abs_entry(&(rebuilt.matrix() - expected)) <= 1e-9);
        }
        let p0 = p.at_time(0.0).unwrap();
        for x in 0..3 {
            let w = p0.w_decomposition(x).unwrap();
            assert!(w.w1.trace_norm() <= 1e-12 && w.w2.trace_norm() <= 1e-12);
        }
    }

    #[test]
    fn w1_expectation_vanishes_off_ancilla_symbol() {
        // P_x |anc><anc| = 0 for x != anc kills the cross term.
        let mut rng = sampling::rng_from_seed(37);
        let p = random_protocol(2, 3, 1.2, &mut rng);
        let anc = p.ancilla_index();
        for x in 0..3 {
            if x == anc {
                continue;
            }
            let w = p.w_decomposition(x).unwrap();
            let rho = p.embedded_state(x).unwrap();
            let overlap = trace_product(w.w1.matrix(), rho.matrix()).re;
            assert!(overlap.abs() <= 1e-10);
        }
    }

    #[test]
    fn success_at_time_zero_is_prior_of_xmax() {
        let basis = [
            DensityMatrix::basis_state(2, 0).unwrap(),
            DensityMatrix::basis_state(2, 1).unwrap(),
        ];
        let e = Ensemble::new(vec![(0.3, basis[0].clone()), (0.7, basis[1].clone())]).unwrap();
        let h = HermitianOperator::zeros(4);
        let p = Protocol::new(e, h, 0.0, 1.0).unwrap();
        assert_eq!(p.success_probability().unwrap(), 0.7);

        let mut rng = sampling::rng_from_seed(38);
        for _ in 0..10 {
            let proto = random_protocol(3, 3, 0.0, &mut rng);
            let expected = proto.ensemble().probability(proto.ensemble().x_max_index());
            assert_abs_diff_eq!(
                proto.success_probability().unwrap(),
                expected,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn success_two_route_agreement() {
        // Direct evolution vs the measurement-operator route.
        let mut rng = sampling::rng_from_seed(39);
        for _ in 0..10 {
            let p = random_protocol(2, 3, 1.5 * rng.random::<f64>(), &mut rng);
            let direct = p.success_probability().unwrap();
            let ms = p.measurement_operators().unwrap();
            let via_ops: f64 = (0..3)
                .map(|x| {
                    p.ensemble().probability(x)
                        * trace_product(ms[x].matrix(), p.embedded_state(x).unwrap().matrix()).re
                })
                .sum();
            assert_abs_diff_eq!(direct, via_ops, epsilon = 1e-10);
        }
    }

    #[test]
    fn static_plus_correction_identity() {
        // tr(M_x rho~_x) = tr((I (x) P_x) rho~_x) + tr(W_x rho~_x).
        let mut rng = sampling::rng_from_seed(40);
        let p = random_protocol(3, 2, 0.6, &mut rng);
        let ms = p.measurement_operators().unwrap();
        for x in 0..2 {
            let rho = p.embedded_state(x).unwrap();
            let lhs = trace_product(ms[x].matrix(), rho.matrix()).re;
            let static_part = trace_product(&p.ancilla_projector(x).unwrap(), rho.matrix()).re;
            let w = p.w_decomposition(x).unwrap();
            let rhs = static_part + trace_product(w.total().matrix(), rho.matrix()).re;
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
        }
    }

    #[test]
    fn w_expectation_bounded_by_spectral_overlap() {
        // For Hermitian A: tr(W_x (A (x) |anc><anc|)) <=
        // 2 sum_n (1 - cos(t E_n / hbar)) <E_n| A~_x |E_n>, where A~_x uses
        // |A| at the ancilla symbol and A^+ elsewhere.
        let mut rng = sampling::rng_from_seed(41);
        for trial in 0..20 {
            let p = random_protocol(2, 2 + trial % 2, 0.3 + 1.4 * rng.random::<f64>(), &mut rng);
            let n = p.ancilla_dim();
            let a = sampling::random_hermitian(p.encoding_dim(), &mut rng);
            let anc_proj = DensityMatrix::basis_state(n, p.ancilla_index()).unwrap();
            let spec = p.hamiltonian().spectrum();
            for x in 0..n {
                let w = p.w_decomposition(x).unwrap();
                let a_embedded = kron(a.matrix(), anc_proj.matrix());
                let lhs = trace_product(w.total().matrix(), &a_embedded).re;
                let a_x = if x == p.ancilla_index() {
                    a.absolute()
                } else {
                    a.positive_negative_split().0
                };
                let a_x_embedded = kron(a_x.matrix(), anc_proj.matrix());
                let mut rhs = 0.0;
                for (k, &e) in spec.eigenvalues.iter().enumerate() {
                    let v = spec.eigenvectors.column(k);
                    let overlap = (v.adjoint() * &a_x_embedded * v)[(0, 0)].re;
                    rhs += 2.0 * (1.0 - (p.time() * e / p.hbar()).cos()) * overlap;
                }
                assert!(lhs <= rhs + 1e-9, "x={x} lhs={lhs} rhs={rhs}");
            }
        }
    }

    #[test]
    fn optimize_budget_zero_returns_baseline() {
        let mut rng = sampling::rng_from_seed(42);
        let e = sampling::random_ensemble(2, 2, &mut rng);
        let x_max_p = e.probability(e.x_max_index());
        let (h, p) = optimize_hamiltonian(&e, 1.0, 1.0, 1.0, 0, 7).unwrap();
        assert!(h.trace_norm() == 0.0);
        assert_abs_diff_eq!(p, x_max_p, epsilon = 1e-12);
    }

    #[test]
    fn optimize_finds_perfect_discrimination_for_orthogonal_qubits() {
        let e = Ensemble::uniform(vec![
            DensityMatrix::basis_state(2, 0).unwrap(),
            DensityMatrix::basis_state(2, 1).unwrap(),
        ])
        .unwrap();
        let (h, p) = optimize_hamiltonian(&e, std::f64::consts::PI, 1.0, 1.0, 60, 3).unwrap();
        assert!(p >= 0.99, "found {p}");
        assert!(h.max_eigenvalue() <= 1.0 + 1e-9);
        assert!(h.is_psd(1e-10));
    }

    #[test]
    fn optimize_is_deterministic_per_seed() {
        let mut rng = sampling::rng_from_seed(43);
        let e = sampling::random_ensemble(2, 2, &mut rng);
        let (h1, p1) = optimize_hamiltonian(&e, 0.8, 1.0, 1.0, 40, 11).unwrap();
        let (h2, p2) = optimize_hamiltonian(&e, 0.8, 1.0, 1.0, 40, 11).unwrap();
        assert_eq!(p1, p2);
        assert_eq!(h1.matrix(), h2.matrix());
    }

    #[test]
    fn measurement_iteration_matches_helstrom_for_two_states() {
        let mut rng = sampling::rng_from_seed(44);
        for _ in 0..20 {
            let r0 = sampling::random_density_matrix(3, &mut rng);
            let r1 = sampling::random_density_matrix(3, &mut rng);
            let p0 = 0.2 + 0.6 * rng.random::<f64>();
            let e = Ensemble::new(vec![(p0, r0.clone()), (1.0 - p0, r1.clone())]).unwrap();
            let (povm, p) = optimal_measurement_iterate(&e, 500).unwrap();
            let exact = helstrom_guess(p0, &r0, 1.0 - p0, &r1).unwrap();
            assert!((p - exact).abs() <= 1e-6, "iterate {p} vs helstrom {exact}");
            let sum = povm
                .iter()
                .fold(CMatrix::zeros(3, 3), |acc, m| acc + m.matrix());
            assert!(max_abs_entry(&(sum - CMatrix::identity(3, 3))) <= 1e-8);
        }
    }

    #[test]
    fn measurement_iteration_trivial_cases() {
        // Identical states: guessing the most likely symbol is optimal.
        let rho = DensityMatrix::maximally_mixed(2);
        let e = Ensemble::new(vec![(0.6, rho.clone()), (0.4, rho.clone())]).unwrap();
        let (_, p) = optimal_measurement_iterate(&e, 2000).unwrap();
        assert!((p - 0.6).abs() <= 1e-6, "got {p}");

        // Orthogonal pure states: perfectly distinguishable.
        let e = Ensemble::uniform(vec![
            DensityMatrix::basis_state(3, 0).unwrap(),
            DensityMatrix::basis_state(3, 1).unwrap(),
            DensityMatrix::basis_state(3, 2).unwrap(),
        ])
        .unwrap();
        let (_, p) = optimal_measurement_iterate(&e, 200).unwrap();
        assert!((p - 1.0).abs() <= 1e-6, "got {p}");
    }

    #[test]
    fn measurement_iteration_nondecreasing_returned_value() {
        let mut rng = sampling::rng_from_seed(45);
        let e = sampling::random_ensemble(2, 3, &mut rng);
        let mut last = 0.0;
        for iters in [1, 3, 10, 50, 200] {
            let (_, p) = optimal_measurement_iterate(&e, iters).unwrap();
            assert!(p >= last - 1e-12);
            last = p;
        }
    }
}
