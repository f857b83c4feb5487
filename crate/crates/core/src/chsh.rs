//! The CHSH game as a state-discrimination problem for Bob.
//!
//! Alice measures her half of the shared state instantly; conditioned on the
//! referee's question `z`, Bob must decide which of two mixtures
//! `sigma_0^z, sigma_1^z` he holds and return the answer through the ancilla
//! protocol. Tsirelson's bound on the time-unlimited game then turns the
//! max-energy discrimination bound into a time-dependent ceiling
//! `p_win <= 3/4 + gamma t ||H||_inf / (sqrt(2) hbar)`, invertible into a
//! minimum game time and an energy witness.

use crate::bounds::{gamma_for_spectrum, GAMMA_HIGH};
use crate::error::{Error, Result};
use crate::linalg::{kron, CMatrix, HermitianOperator, C64};
use crate::protocol::Protocol;
use crate::states::{helstrom_guess, partial_trace_encoding, DensityMatrix, Ensemble};

/// Marginal probabilities below this threshold count as degenerate.
const DEGENERATE_TOL: f64 = 1e-12;

/// Quantum optimum of the CHSH game, `1/2 + 1/(2 sqrt(2))`.
pub const CHSH_QUANTUM_OPTIMUM: f64 = 0.5 + 0.5 * std::f64::consts::FRAC_1_SQRT_2;
/// Classical optimum of the CHSH game.
pub const CHSH_CLASSICAL_OPTIMUM: f64 = 0.75;

/// A full strategy: shared bipartite state, Alice's two-outcome POVM per
/// question, and Bob's interaction Hamiltonian with his readout deadline.
///
/// Alice is unconstrained and measures before Bob's clock starts; Bob's
/// Hamiltonian acts on his system tensored with a two-dimensional answer
/// ancilla and must be positive semidefinite.
#[derive(Debug, Clone)]
pub struct ChshStrategy {
    shared_state: DensityMatrix,
    dim_a: usize,
    dim_b: usize,
    alice_povms: [[HermitianOperator; 2]; 2],
    bob_hamiltonian: HermitianOperator,
    time: f64,
    hbar: f64,
}

impl ChshStrategy {
    pub fn new(
        shared_state: DensityMatrix,
        dim_a: usize,
        dim_b: usize,
        alice_povms: [[HermitianOperator; 2]; 2],
        bob_hamiltonian: HermitianOperator,
        time: f64,
        hbar: f64,
    ) -> Result<Self> {
        if shared_state.dim() != dim_a * dim_b {
            return Err(Error::DimensionMismatch(shared_state.dim(), dim_a * dim_b));
        }
        for povm in &alice_povms {
            let mut sum = CMatrix::zeros(dim_a, dim_a);
            for element in povm {
                if element.dim() != dim_a {
                    return Err(Error::DimensionMismatch(element.dim(), dim_a));
                }
                if !element.is_psd(1e-9) {
                    return Err(Error::NotPositiveSemidefinite(element.min_eigenvalue()));
                }
                sum += element.matrix();
            }
            let residual = crate::linalg::max_abs_entry(&(sum - CMatrix::identity(dim_a, dim_a)));
            if residual > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "Alice POVM incomplete (residual {residual:.3e})"
                )));
            }
        }
        if bob_hamiltonian.dim() != 2 * dim_b {
            return Err(Error::DimensionMismatch(bob_hamiltonian.dim(), 2 * dim_b));
        }
        if !bob_hamiltonian.is_psd(1e-9) {
            return Err(Error::NotPositiveSemidefinite(
                bob_hamiltonian.min_eigenvalue(),
            ));
        }
        if !(time >= 0.0 && time.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "time must be nonnegative, got {time}"
            )));
        }
        if !(hbar > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        Ok(Self {
            shared_state,
            dim_a,
            dim_b,
            alice_povms,
            bob_hamiltonian,
            time,
            hbar,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn shared_state(&self) -> &DensityMatrix {
        &self.shared_state
    }

    pub fn bob_hamiltonian(&self) -> &HermitianOperator {
        &self.bob_hamiltonian
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Same strategy with Bob's dynamics replaced.
    pub fn with_dynamics(
        &self,
        bob_hamiltonian: HermitianOperator,
        time: f64,
        hbar: f64,
    ) -> Result<Self> {
        Self::new(
            self.shared_state.clone(),
            self.dim_a,
            self.dim_b,
            self.alice_povms.clone(),
            bob_hamiltonian,
            time,
            hbar,
        )
    }
}

/// Bob's conditional states: for each question `y` and Alice outcome `a`,
/// the outcome probability `p(a|y)` and the normalized state of Bob's
/// system (absent when the outcome never occurs).
pub type ConditionalStates = [[(f64, Option<DensityMatrix>); 2]; 2];

/// `rho_{y,a} = tr_A[(A_{a|y} (x) I) rho] / p(a|y)`.
pub fn conditional_states(s: &ChshStrategy) -> Result<ConditionalStates> {
    let mut out: ConditionalStates = Default::default();
    for y in 0..2 {
        for a in 0..2 {
            let lifted = kron(
                s.alice_povms[y][a].matrix(),
                &CMatrix::identity(s.dim_b, s.dim_b),
            );
            let weighted = &lifted * s.shared_state.matrix();
            let p = weighted.trace().re;
            if p > DEGENERATE_TOL {
                let reduced = partial_trace_encoding(&weighted, s.dim_a, s.dim_b);
                let state = DensityMatrix::from_matrix(reduced.scale(1.0 / p))?;
                out[y][a] = (p, Some(state));
            } else {
                out[y][a] = (p.max(0.0), None);
            }
        }
    }
    Ok(out)
}

/// The `(y, a)` pairs contributing to Bob's correct answer `x` given `z`:
/// for `z = 0` Bob must repeat Alice's outcome, for `z = 1` he must repeat
/// it on `y = 0` and flip it on `y = 1`.
const CONTRIBUTORS: [[[(usize, usize); 2]; 2]; 2] = [
    [[(0, 0), (1, 0)], [(0, 1), (1, 1)]],
    [[(0, 0), (1, 1)], [(0, 1), (1, 0)]],
];

/// One discrimination problem Bob faces for a fixed `z`.
#[derive(Debug, Clone)]
pub struct DiscriminationEnsemble {
    /// `p_x^z`, the prior of each correct answer.
    pub priors: [f64; 2],
    /// `sigma_x^z`; a maximally mixed placeholder when the prior is 0.
    pub states: [DensityMatrix; 2],
    /// Mixing weights `q` over the contributing `(y, a)` pairs, in
    /// [`CONTRIBUTORS`] order.
    pub weights: [[f64; 2]; 2],
    /// True when the prior vanished and the state is a placeholder.
    pub degenerate: [bool; 2],
}

impl DiscriminationEnsemble {
    pub fn x_max(&self) -> usize {
        if self.priors[1] > self.priors[0] {
            1
        } else {
            0
        }
    }

    pub fn to_ensemble(&self) -> Result<Ensemble> {
        Ensemble::new(vec![
            (self.priors[0], self.states[0].clone()),
            (self.priors[1], self.states[1].clone()),
        ])
    }
}

/// Both of Bob's conditional discrimination problems.
#[derive(Debug, Clone)]
pub struct ConditionalEnsembles {
    pub by_z: [DiscriminationEnsemble; 2],
}

/// Assemble `sigma_x^z` with their priors and mixing weights from the
/// conditional states.
pub fn discrimination_ensembles(conds: &ConditionalStates) -> Result<ConditionalEnsembles> {
    let dim_b = conds
        .iter()
        .flatten()
        .find_map(|(_, s)| s.as_ref().map(|s| s.dim()))
        .ok_or_else(|| Error::InvalidArgument("all conditional states vanish".into()))?;
    let build_z = |z: usize| -> Result<DiscriminationEnsemble> {
        let mut priors = [0.0; 2];
        let mut states: Vec<DensityMatrix> = Vec::with_capacity(2);
        let mut weights = [[0.0; 2]; 2];
        let mut degenerate = [false; 2];
        for x in 0..2 {
            let pairs = CONTRIBUTORS[z][x];
            let marginals: Vec<f64> = pairs.iter().map(|&(y, a)| conds[y][a].0).collect();
            let denom: f64 = marginals.iter().sum();
            priors[x] = 0.5 * denom;
            if denom <= DEGENERATE_TOL {
                // Zero-denominator weight: reduced single-state problem.
                degenerate[x] = true;
                priors[x] = 0.0;
                states.push(DensityMatrix::maximally_mixed(dim_b));
                continue;
            }
            let mut mix = CMatrix::zeros(dim_b, dim_b);
            for (slot, &(y, a)) in pairs.iter().enumerate() {
                let q = marginals[slot] / denom;
                weights[x][slot] = q;
                if let (p, Some(state)) = &conds[y][a] {
                    debug_assert!(*p > 0.0);
                    mix += state.matrix().scale(q);
                }
            }
            states.push(DensityMatrix::from_matrix(mix)?);
        }
        // Renormalize the prior pair so rounding in the marginals cannot
        // break the ensemble invariant.
        let total = priors[0] + priors[1];
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "conditional priors for z={z} sum to {total}"
            )));
        }
        priors[1] = 1.0 - priors[0];
        let states: [DensityMatrix; 2] = states.try_into().expect("two states per z");
        Ok(DiscriminationEnsemble {
            priors,
            states,
            weights,
            degenerate,
        })
    };
    Ok(ConditionalEnsembles {
        by_z: [build_z(0)?, build_z(1)?],
    })
}

/// Time-unlimited winning probability,
/// `p_win = (1/2) sum_z P_guess(X^z | E^z)` with each term via Helstrom.
pub fn p_win_unlimited(s: &ChshStrategy) -> Result<f64> {
    let ens = discrimination_ensembles(&conditional_states(s)?)?;
    let mut total = 0.0;
    for z in 0..2 {
        let e = &ens.by_z[z];
        total += helstrom_guess(e.priors[0], &e.states[0], e.priors[1], &e.states[1])?;
    }
    Ok(0.5 * total)
}

/// Time-limited winning probability: Bob runs the ancilla protocol for each
/// `z` with his Hamiltonian and deadline, the ancilla prepared in `x_max^z`.
pub fn p_win_time_limited(s: &ChshStrategy) -> Result<f64> {
    let ens = discrimination_ensembles(&conditional_states(s)?)?;
    let mut total = 0.0;
    for z in 0..2 {
        let e = &ens.by_z[z];
        let protocol = Protocol::new(e.to_ensemble()?, s.bob_hamiltonian.clone(), s.time, s.hbar)?;
        total += protocol.success_probability()?;
    }
    Ok(0.5 * total)
}

/// General time-dependent game bound for known conditional priors:
/// `p_win^t <= (1/2)(p_xmax^0 + p_xmax^1) + gamma t ||H||_inf / (sqrt(2) hbar)`.
pub fn tsirelson_time_bound_general(
    p_xmax_by_z: (f64, f64),
    h: &HermitianOperator,
    time: f64,
    hbar: f64,
) -> Result<f64> {
    for p in [p_xmax_by_z.0, p_xmax_by_z.1] {
        if !(0.5 - 1e-12..=1.0 + 1e-12).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "p_xmax per z must lie in [1/2, 1], got {p}"
            )));
        }
    }
    let gamma = gamma_for_spectrum(h.eigenvalues(), time, hbar);
    Ok(0.5 * (p_xmax_by_z.0 + p_xmax_by_z.1)
        + gamma * time * h.spectral_norm() / (std::f64::consts::SQRT_2 * hbar))
}

/// Time-dependent Tsirelson bound,
/// `p_win^t <= 3/4 + gamma t ||H||_inf / (sqrt(2) hbar)`.
pub fn tsirelson_time_bound(h: &HermitianOperator, time: f64, hbar: f64) -> Result<f64> {
    if !h.is_psd(1e-9) {
        return Err(Error::NotPositiveSemidefinite(h.min_eigenvalue()));
    }
    let gamma = gamma_for_spectrum(h.eigenvalues(), time, hbar);
    Ok(CHSH_CLASSICAL_OPTIMUM
        + gamma * time * h.spectral_norm() / (std::f64::consts::SQRT_2 * hbar))
}

/// Minimum time to reach the optimum quantum violation with energy budget
/// `||H||_inf = e_max`: `t >= hbar / (gamma e_max)`.
pub fn min_time_for_tsirelson(e_max: f64, hbar: f64, gamma: f64) -> Result<f64> {
    if !(e_max > 0.0 && gamma > 0.0 && hbar > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "e_max, hbar and gamma must be positive (got {e_max}, {hbar}, {gamma})"
        )));
    }
    Ok(hbar / (gamma * e_max))
}

/// Energy witness: a winning probability `q` observed at time `t` implies
/// `||H||_inf >= sqrt(2) hbar (q - 3/4) / (gamma t)`, with the conservative
/// `gamma = 5/pi` so the inference needs no spectral knowledge.
pub fn energy_witness(q_observed: f64, time: f64, hbar: f64) -> Result<f64> {
    if !(time > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "witness needs positive time, got {time}"
        )));
    }
    if q_observed <= CHSH_CLASSICAL_OPTIMUM {
        return Ok(0.0);
    }
    Ok(
        std::f64::consts::SQRT_2 * hbar * (q_observed - CHSH_CLASSICAL_OPTIMUM)
            / (GAMMA_HIGH * time),
    )
}

/// The standard optimal strategy: maximally entangled pair, Alice measuring
/// Z or X. Bob's Hamiltonian is zero (the time-unlimited part of the
/// strategy); swap dynamics in with [`ChshStrategy::with_dynamics`].
pub fn canonical_optimal_strategy() -> ChshStrategy {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let phi_plus = DensityMatrix::pure(&[
        C64::new(inv_sqrt2, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(inv_sqrt2, 0.0),
    ])
    .expect("Bell state");
    let z0 = HermitianOperator::from_real_diagonal(&[1.0, 0.0]);
    let z1 = HermitianOperator::from_real_diagonal(&[0.0, 1.0]);
    let plus = HermitianOperator::new(CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.5, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.5, 0.0),
        ],
    ))
    .expect("|+><+|");
    let minus = HermitianOperator::new(CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.5, 0.0),
            C64::new(-0.5, 0.0),
            C64::new(-0.5, 0.0),
            C64::new(0.5, 0.0),
        ],
    ))
    .expect("|-><-|");
    ChshStrategy::new(
        phi_plus,
        2,
        2,
        [[z0, z1], [plus, minus]],
        HermitianOperator::zeros(4),
        0.0,
        1.0,
    )
    .expect("canonical strategy is valid")
}

/// Winning probability of the deterministic classical strategy where Alice
/// answers `a[y]` and Bob answers `b[z]`.
pub fn deterministic_classical_pwin(a: [u8; 2], b: [u8; 2]) -> f64 {
    let mut wins = 0u32;
    for y in 0..2usize {
        for z in 0..2usize {
            if (a[y] + b[z]) % 2 == ((y * z) % 2) as u8 {
                wins += 1;
            }
        }
    }
    f64::from(wins) / 4.0
}

/// All 16 deterministic classical strategies.
pub fn all_deterministic_classical_pwins() -> Vec<f64> {
    let mut out = Vec::with_capacity(16);
    for bits in 0..16u8 {
        let a = [bits & 1, (bits >> 1) & 1];
        let b = [(bits >> 2) & 1, (bits >> 3) & 1];
        out.push(deterministic_classical_pwin(a, b));
    }
    out
}

/// Embed a deterministic Alice assignment `a(y)` as a quantum strategy on a
/// product state, with Bob's dynamics supplied by the caller.
pub fn deterministic_alice_strategy(
    a_of_y: [u8; 2],
    bob_hamiltonian: HermitianOperator,
    time: f64,
    hbar: f64,
) -> Result<ChshStrategy> {
    let shared = DensityMatrix::basis_state(4, 0)?;
    let povm_for = |answer: u8| {
        let one = HermitianOperator::identity(2);
        let zero = HermitianOperator::zeros(2);
        if answer == 0 {
            [one, zero]
        } else {
            [zero, one]
        }
    };
    ChshStrategy::new(
        shared,
        2,
        2,
        [povm_for(a_of_y[0]), povm_for(a_of_y[1])],
        bob_hamiltonian,
        time,
        hbar,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace_product;
    use crate::sampling;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn random_strategy(seed: u64, time: f64) -> ChshStrategy {
        let mut rng = sampling::rng_from_seed(seed);
        let shared = sampling::random_density_matrix(4, &mut rng);
        let povm_y0 = sampling::random_two_outcome_povm(2, &mut rng);
        let povm_y1 = sampling::random_two_outcome_povm(2, &mut rng);
        let bob_h = sampling::random_psd_hamiltonian(4, 1.0, &mut rng);
        ChshStrategy::new(
            shared,
            2,
            2,
            [[povm_y0.0, povm_y0.1], [povm_y1.0, povm_y1.1]],
            bob_h,
            time,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn conditional_states_of_canonical_strategy() {
        let s = canonical_optimal_strategy();
        let conds = conditional_states(&s).unwrap();
        for y in 0..2 {
            for a in 0..2 {
                assert_abs_diff_eq!(conds[y][a].0, 0.5, epsilon = 1e-12);
            }
        }
        // Alice Z outcome a leaves Bob in |a>.
        for a in 0..2 {
            let rho = conds[0][a].1.as_ref().unwrap();
            let expected = DensityMatrix::basis_state(2, a).unwrap();
            assert!(crate::linalg::max_abs_entry(&(rho.matrix() - expected.matrix())) <= 1e-12);
        }
    }

    #[test]
    fn conditional_states_product_state_carry_no_information() {
        let mut rng = sampling::rng_from_seed(70);
        let rho_a = sampling::random_density_matrix(2, &mut rng);
        let rho_b = sampling::random_density_matrix(2, &mut rng);
        let shared = DensityMatrix::from_matrix(kron(rho_a.matrix(), rho_b.matrix())).unwrap();
        let povm_y0 = sampling::random_two_outcome_povm(2, &mut rng);
        let povm_y1 = sampling::random_two_outcome_povm(2, &mut rng);
        let s = ChshStrategy::new(
            shared,
            2,
            2,
            [[povm_y0.0, povm_y0.1], [povm_y1.0, povm_y1.1]],
            HermitianOperator::zeros(4),
            0.0,
            1.0,
        )
        .unwrap();
        let conds = conditional_states(&s).unwrap();
        for row in &conds {
            for (p, state) in row {
                if *p > 1e-9 {
                    let rho = state.as_ref().unwrap();
                    assert!(crate::linalg::max_abs_entry(&(rho.matrix() - rho_b.matrix())) <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn no_signaling_marginal() {
        let s = random_strategy(71, 0.5);
        let conds = conditional_states(&s).unwrap();
        let bob_marginal = partial_trace_encoding(s.shared_state().matrix(), s.dim_a(), s.dim_b());
        for y in 0..2 {
            let mut mix = CMatrix::zeros(2, 2);
            let mut total_p = 0.0;
            for a in 0..2 {
                let (p, state) = &conds[y][a];
                total_p += p;
                if let Some(state) = state {
                    mix += state.matrix().scale(*p);
                }
            }
            assert_abs_diff_eq!(total_p, 1.0, epsilon = 1e-10);
            assert!(crate::linalg::max_abs_entry(&(mix - &bob_marginal)) <= 1e-9);
        }
    }

    #[test]
    fn uniform_marginals_give_half_weights() {
        let s = canonical_optimal_strategy();
        let ens = discrimination_ensembles(&conditional_states(&s).unwrap()).unwrap();
        for z in 0..2 {
            let e = &ens.by_z[z];
            assert_abs_diff_eq!(e.priors[0], 0.5, epsilon = 1e-12);
            for x in 0..2 {
                assert!(!e.degenerate[x]);
                for slot in 0..2 {
                    assert_abs_diff_eq!(e.weights[x][slot], 0.5, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn deterministic_alice_collapses_ensembles() {
        let s =
            deterministic_alice_strategy([0, 0], HermitianOperator::zeros(4), 0.0, 1.0).unwrap();
        let ens = discrimination_ensembles(&conditional_states(&s).unwrap()).unwrap();
        // z = 0: Bob's correct answer is always 0.
        assert_abs_diff_eq!(ens.by_z[0].priors[0], 1.0, epsilon = 1e-12);
        assert!(ens.by_z[0].degenerate[1]);
        // z = 1: both answers equally likely.
        assert_abs_diff_eq!(ens.by_z[1].priors[0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn canonical_strategy_reaches_quantum_optimum() {
        let s = canonical_optimal_strategy();
        let p = p_win_unlimited(&s).unwrap();
        assert_abs_diff_eq!(p, CHSH_QUANTUM_OPTIMUM, epsilon = 1e-9);
        // Each conditional pair sits at trace distance 1/sqrt(2).
        let ens = discrimination_ensembles(&conditional_states(&s).unwrap()).unwrap();
        for z in 0..2 {
            let e = &ens.by_z[z];
            let d = crate::states::trace_distance(&e.states[0], &e.states[1]).unwrap();
            assert_abs_diff_eq!(d, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-9);
        }
    }

    #[test]
    fn two_route_pwin_agreement() {
        // Helstrom on the sigma ensembles vs direct enumeration of
        // Pr[a, b | y, z] with Bob's optimal per-z measurement.
        for seed in 0..20 {
            let s = random_strategy(80 + seed, 0.0);
            let route1 = p_win_unlimited(&s).unwrap();
            let ens = discrimination_ensembles(&conditional_states(&s).unwrap()).unwrap();
            let mut route2 = 0.0;
            for z in 0..2 {
                let e = &ens.by_z[z];
                let diff = HermitianOperator::symmetrized(
                    e.states[1].matrix().scale(e.priors[1])
                        - e.states[0].matrix().scale(e.priors[0]),
                );
                let guess_one = diff.positive_negative_projectors().0;
                let bob = [
                    HermitianOperator::symmetrized(CMatrix::identity(2, 2) - guess_one.matrix()),
                    guess_one,
                ];
                for y in 0..2 {
                    for a in 0..2 {
                        for b in 0..2 {
                            if (a + b) % 2 != (y * z) % 2 {
                                continue;
                            }
                            let joint = kron(s.alice_povms[y][a].matrix(), bob[b].matrix());
                            route2 += 0.25 * trace_product(&joint, s.shared_state().matrix()).re;
                        }
                    }
                }
            }
            assert_abs_diff_eq!(route1, route2, epsilon = 1e-9);
        }
    }

    #[test]
    fn random_strategies_respect_tsirelson() {
        for seed in 0..40 {
            let s = random_strategy(200 + seed, 0.0);
            let p = p_win_unlimited(&s).unwrap();
            assert!(p <= CHSH_QUANTUM_OPTIMUM + 1e-9, "p_win {p}");
        }
    }

    #[test]
    fn classical_enumeration() {
        let values = all_deterministic_classical_pwins();
        assert_eq!(values.len(), 16);
        let max = values.iter().copied().fold(0.0f64, f64::max);
        assert_eq!(max, 0.75);
        for v in values {
            assert!([0.25, 0.5, 0.75].contains(&v), "unexpected value {v}");
        }
    }

    #[test]
    fn time_limited_at_zero() {
        // Uniform-marginal strategy: p_xmax^z = 1/2 for both z.
        let s = canonical_optimal_strategy();
        assert_abs_diff_eq!(p_win_time_limited(&s).unwrap(), 0.5, epsilon = 1e-12);
        // Deterministic Alice with Bob answering optimally from the prior
        // reaches the classical optimum with no evolution at all.
        for bits in 0..4u8 {
            let s = deterministic_alice_strategy(
                [bits & 1, (bits >> 1) & 1],
                HermitianOperator::zeros(4),
                0.0,
                1.0,
            )
            .unwrap();
            assert_abs_diff_eq!(p_win_time_limited(&s).unwrap(), 0.75, epsilon = 1e-12);
        }
    }

    #[test]
    fn time_limited_below_unlimited_and_general_bound() {
        let mut rng = sampling::rng_from_seed(90);
        for seed in 0..25 {
            let t = 2.0 * rng.random::<f64>();
            let s = random_strategy(300 + seed, t);
            let limited = p_win_time_limited(&s).unwrap();
            let unlimited = p_win_unlimited(&s).unwrap();
            assert!(
                limited <= unlimited + 1e-9,
                "limited {limited} > unlimited {unlimited}"
            );
            let ens = discrimination_ensembles(&conditional_states(&s).unwrap()).unwrap();
            let p_pair = (
                ens.by_z[0].priors[ens.by_z[0].x_max()],
                ens.by_z[1].priors[ens.by_z[1].x_max()],
            );
            let general =
                tsirelson_time_bound_general(p_pair, s.bob_hamiltonian(), t, 1.0).unwrap();
            assert!(
                limited <= general + 1e-9,
                "limited {limited} > general {general}"
            );
        }
    }

    #[test]
    fn general_bound_reduces_to_corollary_at_classical_priors() {
        let mut rng = sampling::rng_from_seed(91);
        let h = sampling::random_psd_hamiltonian(4, 1.3, &mut rng);
        for t in [0.0, 0.4, 2.0] {
            let general = tsirelson_time_bound_general((0.75, 0.75), &h, t, 1.0).unwrap();
            let corollary = tsirelson_time_bound(&h, t, 1.0).unwrap();
            assert_abs_diff_eq!(general, corollary, epsilon = 1e-12);
        }
        assert!(tsirelson_time_bound_general((0.4, 0.9), &h, 1.0, 1.0).is_err());
    }

    #[test]
    fn tsirelson_bound_values() {
        let h = HermitianOperator::from_real_diagonal(&[0.0, 0.3, 0.7, 1.0]);
        assert_eq!(tsirelson_time_bound(&h, 0.0, 1.0).unwrap(), 0.75);
        // Inversion: the bound reaches q at t = hbar (q - 3/4) sqrt(2) / (gamma |H|).
        let q = 0.8536;
        let gamma = 3.0 / std::f64::consts::PI;
        let t_star = (q - 0.75) * std::f64::consts::SQRT_2 / (gamma * 1.0);
        // All phases stay below the 5/pi window at this small t.
        assert!(t_star * 1.0 < 1.0);
        assert_abs_diff_eq!(
            tsirelson_time_bound(&h, t_star, 1.0).unwrap(),
            q,
            epsilon = 1e-12
        );
    }

    #[test]
    fn min_time_value_and_consistency() {
        let gamma = 3.0 / std::f64::consts::PI;
        let t = min_time_for_tsirelson(1.0, 1.0, gamma).unwrap();
        assert_abs_diff_eq!(t, std::f64::consts::PI / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            min_time_for_tsirelson(2.0, 1.0, gamma).unwrap(),
            t / 2.0,
            epsilon = 1e-12
        );
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0, 1.0, 1.0]);
        assert!(tsirelson_time_bound(&h, t, 1.0).unwrap() >= CHSH_QUANTUM_OPTIMUM);
    }

    #[test]
    fn energy_witness_inversion() {
        assert_eq!(energy_witness(0.75, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(energy_witness(0.3, 1.0, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            energy_witness(0.80, 1.0, 1.0).unwrap(),
            std::f64::consts::SQRT_2 * 0.05 / GAMMA_HIGH,
            epsilon = 1e-15
        );
        // Round trip with a matched-gamma Hamiltonian: pick t w / hbar inside
        // the (1, 4) window so the spectral gamma is 5/pi too.
        let w = 1.3;
        let t = 2.0 / w;
        let h = HermitianOperator::from_real_diagonal(&[0.0, w]);
        let q = tsirelson_time_bound(&h, t, 1.0).unwrap();
        let witnessed = energy_witness(q, t, 1.0).unwrap();
        assert_abs_diff_eq!(witnessed, w, epsilon = 1e-12);
        let h2 = HermitianOperator::from_real_diagonal(&[0.0, witnessed]);
        assert_abs_diff_eq!(
            tsirelson_time_bound(&h2, t, 1.0).unwrap(),
            q,
            epsilon = 1e-12
        );
    }
}
