//! Sweep driver and input-file handling behind the command-line tool.
//!
//! Instances come either from a JSON document (schema below) or from the
//! seeded generator; every experiment walks the time grid and emits one CSV
//! row per `(instance, time, bound)` with the simulated success probability
//! alongside. Output is deterministic byte for byte in `(spec, seed)`.
//!
//! Input schema (version 1): complex entries are `[re, im]` pairs, matrices
//! are row-major with explicit dimensions.
//!
//! ```json
//! {
//!   "version": 1,
//!   "ensembles": [{
//!     "id": "pair", "dim": 2,
//!     "items": [{"probability": 0.5, "state": [[[1,0],[0,0]],[[0,0],[0,0]]]}, ...],
//!     "hamiltonian": [[...]],
//!     "e_max": 1.0
//!   }],
//!   "strategies": [{
//!     "id": "chsh", "dim_a": 2, "dim_b": 2,
//!     "shared_state": [[...]],
//!     "alice_povms": [[[[...]]], ...],
//!     "bob_hamiltonian": [[...]]
//!   }]
//! }
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::attainment;
use crate::bounds::{self, BoundReport};
use crate::chsh::{self, ChshStrategy};
use crate::error::{Error, Result};
use crate::linalg::{max_abs_entry, CMatrix, HermitianOperator, C64, HERMITICITY_TOL, PSD_TOL};
use crate::protocol::{shift_to_zero_ground, Protocol};
use crate::sampling;
use crate::states::{embed_with_ancilla, DensityMatrix, Ensemble, TRACE_TOL};
use crate::truncation;

pub const SCHEMA_VERSION: u32 = 1;
const DOMINANCE_SLACK: f64 = 1e-9;

/// Which comparison the sweep reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    TwoStateBounds,
    NStateBounds,
    AttainmentCurve,
    ChshBounds,
    MlTime,
    Truncation,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::TwoStateBounds => "two-state-bounds",
            Experiment::NStateBounds => "n-state-bounds",
            Experiment::AttainmentCurve => "attainment-curve",
            Experiment::ChshBounds => "chsh-bounds",
            Experiment::MlTime => "ml-time",
            Experiment::Truncation => "truncation",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "two-state-bounds" => Ok(Experiment::TwoStateBounds),
            "n-state-bounds" => Ok(Experiment::NStateBounds),
            "attainment-curve" => Ok(Experiment::AttainmentCurve),
            "chsh-bounds" => Ok(Experiment::ChshBounds),
            "ml-time" => Ok(Experiment::MlTime),
            "truncation" => Ok(Experiment::Truncation),
            other => Err(Error::InvalidArgument(format!(
                "unknown experiment '{other}'"
            ))),
        }
    }
}

/// Where sweep instances come from.
#[derive(Debug, Clone)]
pub enum InstanceSource {
    File(PathBuf),
    Generated {
        count: usize,
        dim: usize,
        symbols: usize,
    },
}

/// A fully specified sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub experiment: Experiment,
    pub time_grid: Vec<f64>,
    pub hbar: f64,
    pub seed: u64,
    pub source: InstanceSource,
    /// Clip bound values to 1 in the output (raw by default).
    pub capped: bool,
    /// Error parameters for the truncation experiment.
    pub epsilons: Vec<f64>,
    /// Spectral-norm budget for generated Hamiltonians.
    pub e_max: f64,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if self.time_grid.is_empty() {
            return Err(Error::InvalidArgument("time grid is empty".into()));
        }
        let mut last = -1.0;
        for &t in &self.time_grid {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "time grid entries must be nonnegative, got {t}"
                )));
            }
            if t <= last {
                return Err(Error::InvalidArgument(
                    "time grid must be strictly increasing".into(),
                ));
            }
            last = t;
        }
        if !(self.hbar > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "hbar must be positive, got {}",
                self.hbar
            )));
        }
        if !(self.e_max > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "e_max must be positive, got {}",
                self.e_max
            )));
        }
        if self.experiment == Experiment::Truncation {
            if self.epsilons.is_empty() {
                return Err(Error::InvalidArgument(
                    "truncation sweep needs at least one epsilon".into(),
                ));
            }
            for &eps in &self.epsilons {
                if !(eps >= 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "epsilon must be nonnegative, got {eps}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Evenly spaced time grid, linear or logarithmic.
pub fn build_time_grid(min: f64, max: f64, count: usize, log_scale: bool) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidArgument("time grid count is 0".into()));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    if !(max > min) {
        return Err(Error::InvalidArgument(format!(
            "time grid needs max > min, got [{min}, {max}]"
        )));
    }
    if log_scale && !(min > 0.0) {
        return Err(Error::InvalidArgument(
            "log-scale time grid needs min > 0".into(),
        ));
    }
    let steps = (count - 1) as f64;
    Ok((0..count)
        .map(|k| {
            let f = k as f64 / steps;
            if log_scale {
                (min.ln() + f * (max.ln() - min.ln())).exp()
            } else {
                min + f * (max - min)
            }
        })
        .collect())
}

/// One output row.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub experiment: &'static str,
    pub instance_id: String,
    pub t: f64,
    pub p_succ_sim: f64,
    pub bound_name: String,
    pub bound_value: f64,
    pub gamma_used: Option<f64>,
}

pub const CSV_HEADER: &str =
    "experiment,instance_id,t,p_succ_sim,bound_name,bound_value,gamma_used";

/// 12 significant digits, locale-independent.
fn fmt_real(x: f64) -> String {
    format!("{x:.11e}")
}

/// Render rows as CSV with the fixed header and column order.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let gamma = row.gamma_used.map(fmt_real).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.experiment,
            row.instance_id,
            fmt_real(row.t),
            fmt_real(row.p_succ_sim),
            row.bound_name,
            fmt_real(row.bound_value),
            gamma
        );
    }
    out
}

/// Rows whose bound value upper-bounds the simulation column. Time-valued
/// rows are exempt.
fn is_probability_bound(name: &str) -> bool {
    !matches!(
        name,
        "margolus_levitin_time" | "perfect_discrimination_time"
    )
}

/// Run the sweep and return the table, re-asserting bound dominance on every
/// probability row before it is emitted.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut rows = match spec.experiment {
        Experiment::TwoStateBounds => sweep_two_state(spec)?,
        Experiment::NStateBounds => sweep_n_state(spec)?,
        Experiment::AttainmentCurve => sweep_attainment(spec)?,
        Experiment::ChshBounds => sweep_chsh(spec)?,
        Experiment::MlTime => sweep_ml_time(spec)?,
        Experiment::Truncation => sweep_truncation(spec)?,
    };
    for row in &rows {
        if is_probability_bound(&row.bound_name)
            && row.p_succ_sim > row.bound_value + DOMINANCE_SLACK
        {
            return Err(Error::Numerical(format!(
                "bound {} = {} fell below the simulated value {} (instance {}, t = {})",
                row.bound_name, row.bound_value, row.p_succ_sim, row.instance_id, row.t
            )));
        }
    }
    if spec.capped {
        for row in &mut rows {
            if is_probability_bound(&row.bound_name) {
                row.bound_value = row.bound_value.min(1.0);
            }
        }
    }
    Ok(rows)
}

struct EnsembleInstance {
    id: String,
    ensemble: Ensemble,
    hamiltonian: HermitianOperator,
}

/// Ensembles with Hamiltonians, either loaded or generated. Loaded
/// Hamiltonians are shifted to ground energy 0 (the simulator would do the
/// same; shifting here keeps the bound columns on the same convention).
/// Ensembles without a Hamiltonian get a seeded random PSD one.
fn ensemble_instances(
    spec: &SweepSpec,
    symbols_override: Option<usize>,
    equiprobable_half: bool,
) -> Result<Vec<EnsembleInstance>> {
    match &spec.source {
        InstanceSource::File(path) => {
            let input = read_input(path)?;
            let mut out = Vec::new();
            for (k, espec) in input.ensembles.iter().enumerate() {
                let (ensemble, hamiltonian, e_max) = build_ensemble(espec)
                    .map_err(|e| prefix_error(&format!("ensembles[{k}]"), e))?;
                if let Some(n) = symbols_override {
                    if ensemble.len() != n {
                        continue;
                    }
                }
                let e_max = e_max.unwrap_or(spec.e_max);
                let hamiltonian = match hamiltonian {
                    Some(h) => shift_to_zero_ground(&h),
                    None => {
                        let mut rng = sampling::rng_from_seed(spec.seed ^ (k as u64));
                        sampling::random_psd_hamiltonian(
                            ensemble.dim() * ensemble.len(),
                            e_max,
                            &mut rng,
                        )
                    }
                };
                out.push(EnsembleInstance {
                    id: espec.id.clone(),
                    ensemble,
                    hamiltonian,
                });
            }
            if out.is_empty() {
                return Err(Error::InputFormat(
                    "input file holds no usable ensembles for this experiment".into(),
                ));
            }
            Ok(out)
        }
        InstanceSource::Generated {
            count,
            dim,
            symbols,
        } => {
            let n = symbols_override.unwrap_or(*symbols);
            let mut rng = sampling::rng_from_seed(spec.seed);
            let mut out = Vec::new();
            for k in 0..*count {
                let ensemble = if equiprobable_half && k % 2 == 0 {
                    let states = (0..n)
                        .map(|_| sampling::random_density_matrix(*dim, &mut rng))
                        .collect();
                    Ensemble::uniform(states)?
                } else {
                    sampling::random_ensemble(*dim, n, &mut rng)
                };
                let hamiltonian = sampling::random_psd_hamiltonian(dim * n, spec.e_max, &mut rng);
                out.push(EnsembleInstance {
                    id: format!("gen-{k:03}"),
                    ensemble,
                    hamiltonian,
                });
            }
            Ok(out)
        }
    }
}

fn sweep_two_state(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let instances = ensemble_instances(spec, Some(2), true)?;
    let mut rows = Vec::new();
    for inst in &instances {
        let (p0, p1) = (inst.ensemble.probability(0), inst.ensemble.probability(1));
        let (r0, r1) = (inst.ensemble.state(0), inst.ensemble.state(1));
        for &t in &spec.time_grid {
            let sim = Protocol::new(
                inst.ensemble.clone(),
                inst.hamiltonian.clone(),
                t,
                spec.hbar,
            )?
            .success_probability()?;
            for report in
                bounds::two_state_reports(p0, p1, r0, r1, &inst.hamiltonian, t, spec.hbar)?
            {
                rows.push(report_row(spec, &inst.id, t, sim, &report));
            }
        }
    }
    Ok(rows)
}

fn sweep_n_state(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let instances = ensemble_instances(spec, None, false)?;
    let mut rows = Vec::new();
    for inst in &instances {
        for &t in &spec.time_grid {
            let sim = Protocol::new(
                inst.ensemble.clone(),
                inst.hamiltonian.clone(),
                t,
                spec.hbar,
            )?
            .success_probability()?;
            let value = bounds::many_states_bound(&inst.ensemble, &inst.hamiltonian, t, spec.hbar)?;
            let gamma = bounds::gamma_for_spectrum(inst.hamiltonian.eigenvalues(), t, spec.hbar);
            rows.push(SweepRow {
                experiment: spec.experiment.name(),
                instance_id: inst.id.clone(),
                t,
                p_succ_sim: sim,
                bound_name: "many_states".into(),
                bound_value: value,
                gamma_used: Some(gamma),
            });
        }
    }
    Ok(rows)
}

/// Equiprobable pairs for the attainment and Margolus-Levitin experiments.
/// Instance 0 of the generated set is the orthogonal-qubit pair.
fn pair_instances(spec: &SweepSpec) -> Result<Vec<(String, DensityMatrix, DensityMatrix, f64)>> {
    match &spec.source {
        InstanceSource::File(path) => {
            let input = read_input(path)?;
            let mut out = Vec::new();
            for (k, espec) in input.ensembles.iter().enumerate() {
                let (ensemble, _, e_max) = build_ensemble(espec)
                    .map_err(|e| prefix_error(&format!("ensembles[{k}]"), e))?;
                if ensemble.len() != 2 {
                    continue;
                }
                out.push((
                    espec.id.clone(),
                    ensemble.state(0).clone(),
                    ensemble.state(1).clone(),
                    e_max.unwrap_or(spec.e_max),
                ));
            }
            if out.is_empty() {
                return Err(Error::InputFormat(
                    "input file holds no two-state ensembles".into(),
                ));
            }
            Ok(out)
        }
        InstanceSource::Generated { count, dim, .. } => {
            let mut rng = sampling::rng_from_seed(spec.seed);
            let mut out = Vec::new();
            for k in 0..*count {
                if k == 0 {
                    out.push((
                        "orthogonal-qubits".to_string(),
                        DensityMatrix::basis_state(2, 0)?,
                        DensityMatrix::basis_state(2, 1)?,
                        spec.e_max,
                    ));
                } else {
                    out.push((
                        format!("gen-{k:03}"),
                        sampling::random_density_matrix(*dim, &mut rng),
                        sampling::random_density_matrix(*dim, &mut rng),
                        spec.e_max,
                    ));
                }
            }
            Ok(out)
        }
    }
}

fn sweep_attainment(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for (id, r0, r1, e_max) in pair_instances(spec)? {
        let built = attainment::build_attaining(&r0, &r1, e_max)?;
        let ensemble = Ensemble::uniform(vec![r0.clone(), r1.clone()])?;
        for &t in &spec.time_grid {
            let sim = Protocol::new(ensemble.clone(), built.hamiltonian().clone(), t, spec.hbar)?
                .success_probability()?;
            let closed = attainment::attaining_success_closed_form(&r0, &r1, e_max, t, spec.hbar)?;
            rows.push(SweepRow {
                experiment: spec.experiment.name(),
                instance_id: id.clone(),
                t,
                p_succ_sim: sim,
                bound_name: "closed_form".into(),
                bound_value: closed,
                gamma_used: None,
            });
            for report in
                bounds::two_state_reports(0.5, 0.5, &r0, &r1, built.hamiltonian(), t, spec.hbar)?
            {
                rows.push(report_row(spec, &id, t, sim, &report));
            }
        }
    }
    Ok(rows)
}

fn sweep_chsh(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let strategies: Vec<(String, ChshStrategy)> = match &spec.source {
        InstanceSource::File(path) => {
            let input = read_input(path)?;
            let mut out = Vec::new();
            for (k, sspec) in input.strategies.iter().enumerate() {
                let strategy = build_strategy(sspec)
                    .map_err(|e| prefix_error(&format!("strategies[{k}]"), e))?;
                out.push((sspec.id.clone(), strategy));
            }
            if out.is_empty() {
                return Err(Error::InputFormat("input file holds no strategies".into()));
            }
            out
        }
        InstanceSource::Generated { count, .. } => {
            let mut rng = sampling::rng_from_seed(spec.seed);
            let mut out = Vec::new();
            for k in 0..*count {
                let (id, strategy) = if k == 0 {
                    // Canonical optimal strategy driven by a seeded Bob
                    // Hamiltonian.
                    let h = sampling::random_psd_hamiltonian(4, spec.e_max, &mut rng);
                    (
                        "canonical".to_string(),
                        chsh::canonical_optimal_strategy().with_dynamics(h, 0.0, spec.hbar)?,
                    )
                } else {
                    let shared = sampling::random_density_matrix(4, &mut rng);
                    let povm_y0 = sampling::random_two_outcome_povm(2, &mut rng);
                    let povm_y1 = sampling::random_two_outcome_povm(2, &mut rng);
                    let h = sampling::random_psd_hamiltonian(4, spec.e_max, &mut rng);
                    (
                        format!("gen-{k:03}"),
                        ChshStrategy::new(
                            shared,
                            2,
                            2,
                            [[povm_y0.0, povm_y0.1], [povm_y1.0, povm_y1.1]],
                            h,
                            0.0,
                            spec.hbar,
                        )?,
                    )
                };
                out.push((id, strategy));
            }
            out
        }
    };
    let mut rows = Vec::new();
    for (id, strategy) in &strategies {
        for &t in &spec.time_grid {
            let timed = strategy.with_dynamics(strategy.bob_hamiltonian().clone(), t, spec.hbar)?;
            let sim = chsh::p_win_time_limited(&timed)?;
            let value = chsh::tsirelson_time_bound(strategy.bob_hamiltonian(), t, spec.hbar)?;
            let gamma =
                bounds::gamma_for_spectrum(strategy.bob_hamiltonian().eigenvalues(), t, spec.hbar);
            rows.push(SweepRow {
                experiment: spec.experiment.name(),
                instance_id: id.clone(),
                t,
                p_succ_sim: sim,
                bound_name: "tsirelson".into(),
                bound_value: value,
                gamma_used: Some(gamma),
            });
        }
    }
    Ok(rows)
}

fn sweep_ml_time(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for (id, r0, r1, e_max) in pair_instances(spec)? {
        let built = attainment::build_attaining(&r0, &r1, e_max)?;
        let ensemble = Ensemble::uniform(vec![r0.clone(), r1.clone()])?;
        let embedded = embed_with_ancilla(&r1, 2, 0)?;
        let t_ml = bounds::margolus_levitin_time(built.hamiltonian(), &embedded, spec.hbar)?;
        let t_perfect = attainment::perfect_discrimination_time(e_max, spec.hbar)?;
        for &t in &spec.time_grid {
            let sim = Protocol::new(ensemble.clone(), built.hamiltonian().clone(), t, spec.hbar)?
                .success_probability()?;
            for (name, value) in [
                ("margolus_levitin_time", t_ml),
                ("perfect_discrimination_time", t_perfect),
            ] {
                rows.push(SweepRow {
                    experiment: spec.experiment.name(),
                    instance_id: id.clone(),
                    t,
                    p_succ_sim: sim,
                    bound_name: name.into(),
                    bound_value: value,
                    gamma_used: None,
                });
            }
        }
    }
    Ok(rows)
}

fn sweep_truncation(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let instances = ensemble_instances(spec, None, false)?;
    let mut rows = Vec::new();
    for inst in &instances {
        let probe = Protocol::new(
            inst.ensemble.clone(),
            inst.hamiltonian.clone(),
            0.0,
            spec.hbar,
        )?;
        let states: Vec<_> = (0..inst.ensemble.len())
            .map(|x| probe.embedded_state(x))
            .collect::<Result<_>>()?;
        for &eps in &spec.epsilons {
            let tr = truncation::truncation_projector(probe.hamiltonian(), &states, eps)?;
            for &t in &spec.time_grid {
                let proto = probe.at_time(t)?;
                let gap = truncation::truncation_success_gap(&proto, &tr)?;
                rows.push(SweepRow {
                    experiment: spec.experiment.name(),
                    instance_id: inst.id.clone(),
                    t,
                    // The sim column carries the measured success gap; the
                    // bound column its guarantee.
                    p_succ_sim: gap,
                    bound_name: format!("gap_le_2eps_{eps:.3}"),
                    bound_value: 2.0 * eps,
                    gamma_used: None,
                });
            }
        }
    }
    Ok(rows)
}

fn report_row(spec: &SweepSpec, id: &str, t: f64, sim: f64, report: &BoundReport) -> SweepRow {
    SweepRow {
        experiment: spec.experiment.name(),
        instance_id: id.to_string(),
        t,
        p_succ_sim: sim,
        bound_name: report.bound_name.to_string(),
        bound_value: report.value,
        gamma_used: report.gamma_used,
    }
}

fn prefix_error(prefix: &str, e: Error) -> Error {
    Error::InputFormat(format!("{prefix}: {e}"))
}

// ---------------------------------------------------------------------------
// Input documents
// ---------------------------------------------------------------------------

pub type MatrixData = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub version: u32,
    #[serde(default)]
    pub ensembles: Vec<EnsembleSpec>,
    #[serde(default)]
    pub strategies: Vec<StrategySpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub id: String,
    pub dim: usize,
    pub items: Vec<ItemSpec>,
    #[serde(default)]
    pub hamiltonian: Option<MatrixData>,
    #[serde(default)]
    pub e_max: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItemSpec {
    pub probability: f64,
    pub state: MatrixData,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategySpec {
    pub id: String,
    pub dim_a: usize,
    pub dim_b: usize,
    pub shared_state: MatrixData,
    /// `[y][a]`, two POVMs of two elements each.
    pub alice_povms: Vec<Vec<MatrixData>>,
    pub bob_hamiltonian: MatrixData,
}

/// Parse and version-check an input document.
pub fn parse_input(text: &str) -> Result<InputFile> {
    let input: InputFile = serde_json::from_str(text)
        .map_err(|e| Error::InputFormat(format!("parse failure: {e}")))?;
    if input.version != SCHEMA_VERSION {
        return Err(Error::InputFormat(format!(
            "unknown schema version {} (expected {SCHEMA_VERSION})",
            input.version
        )));
    }
    Ok(input)
}

pub fn read_input(path: &Path) -> Result<InputFile> {
    let text = std::fs::read_to_string(path)?;
    parse_input(&text)
}

fn matrix_from_data(data: &MatrixData, dim: usize) -> Result<CMatrix> {
    if data.len() != dim {
        return Err(Error::InputFormat(format!(
            "matrix has {} rows, expected {dim}",
            data.len()
        )));
    }
    for (i, row) in data.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::InputFormat(format!(
                "matrix row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
    }
    let m = CMatrix::from_fn(dim, dim, |i, j| C64::new(data[i][j][0], data[i][j][1]));
    crate::linalg::validate_complex_matrix(&m)?;
    Ok(m)
}

/// Build the domain objects from one ensemble spec.
pub fn build_ensemble(
    spec: &EnsembleSpec,
) -> Result<(Ensemble, Option<HermitianOperator>, Option<f64>)> {
    let mut items = Vec::with_capacity(spec.items.len());
    for (k, item) in spec.items.iter().enumerate() {
        let m = matrix_from_data(&item.state, spec.dim)
            .map_err(|e| prefix_error(&format!("items[{k}].state"), e))?;
        let state = DensityMatrix::from_matrix(m)
            .map_err(|e| prefix_error(&format!("items[{k}].state"), e))?;
        items.push((item.probability, state));
    }
    let ensemble = Ensemble::new(items)?;
    let hamiltonian = match &spec.hamiltonian {
        Some(data) => {
            let dim = spec.dim * spec.items.len();
            let m = matrix_from_data(data, dim).map_err(|e| prefix_error("hamiltonian", e))?;
            Some(HermitianOperator::new(m).map_err(|e| prefix_error("hamiltonian", e))?)
        }
        None => None,
    };
    Ok((ensemble, hamiltonian, spec.e_max))
}

/// Build a CHSH strategy (time and hbar come from the sweep spec later).
pub fn build_strategy(spec: &StrategySpec) -> Result<ChshStrategy> {
    let shared = DensityMatrix::from_matrix(
        matrix_from_data(&spec.shared_state, spec.dim_a * spec.dim_b)
            .map_err(|e| prefix_error("shared_state", e))?,
    )
    .map_err(|e| prefix_error("shared_state", e))?;
    if spec.alice_povms.len() != 2 || spec.alice_povms.iter().any(|p| p.len() != 2) {
        return Err(Error::InputFormat(
            "alice_povms must be 2 questions x 2 outcomes".into(),
        ));
    }
    let mut povms: Vec<[HermitianOperator; 2]> = Vec::with_capacity(2);
    for (y, povm) in spec.alice_povms.iter().enumerate() {
        let mut elements = Vec::with_capacity(2);
        for (a, data) in povm.iter().enumerate() {
            let m = matrix_from_data(data, spec.dim_a)
                .map_err(|e| prefix_error(&format!("alice_povms[{y}][{a}]"), e))?;
            elements.push(
                HermitianOperator::new(m)
                    .map_err(|e| prefix_error(&format!("alice_povms[{y}][{a}]"), e))?,
            );
        }
        povms.push(elements.try_into().expect("two elements"));
    }
    let bob_h = HermitianOperator::new(
        matrix_from_data(&spec.bob_hamiltonian, 2 * spec.dim_b)
            .map_err(|e| prefix_error("bob_hamiltonian", e))?,
    )
    .map_err(|e| prefix_error("bob_hamiltonian", e))?;
    let povms: [[HermitianOperator; 2]; 2] = povms.try_into().expect("two questions");
    ChshStrategy::new(shared, spec.dim_a, spec.dim_b, povms, bob_h, 0.0, 1.0)
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Human-readable list of every violated invariant in an input document.
#[derive(Debug, Default)]
pub struct ValidationReport {
    pub issues: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Validate a document from disk. Parse failures surface as errors;
/// semantic problems land in the report, one entry per violated invariant,
/// with enough indices to find the offender.
pub fn validate_input(path: &Path) -> Result<ValidationReport> {
    let text = std::fs::read_to_string(path)?;
    validate_input_str(&text)
}

pub fn validate_input_str(text: &str) -> Result<ValidationReport> {
    let input = parse_input(text)?;
    let mut report = ValidationReport::default();
    for (e_idx, espec) in input.ensembles.iter().enumerate() {
        let prefix = format!("ensembles[{e_idx}] ({})", espec.id);
        if espec.items.is_empty() {
            report.issues.push(format!("{prefix}: no states"));
            continue;
        }
        let mut prob_sum = 0.0;
        for (s_idx, item) in espec.items.iter().enumerate() {
            prob_sum += item.probability;
            if !(0.0..=1.0 + TRACE_TOL).contains(&item.probability) {
                report.issues.push(format!(
                    "{prefix}.items[{s_idx}]: probability {} outside [0, 1]",
                    item.probability
                ));
            }
            check_state_matrix(
                &format!("{prefix}.items[{s_idx}].state"),
                &item.state,
                espec.dim,
                &mut report,
            );
        }
        if (prob_sum - 1.0).abs() > TRACE_TOL {
            report.issues.push(format!(
                "{prefix}: probabilities sum to {prob_sum}, expected 1"
            ));
        }
        if let Some(data) = &espec.hamiltonian {
            let dim = espec.dim * espec.items.len();
            match matrix_from_data(data, dim) {
                Ok(m) => {
                    let asym = max_abs_entry(&(&m - m.adjoint()));
                    if asym > HERMITICITY_TOL {
                        report.issues.push(format!(
                            "{prefix}.hamiltonian: not Hermitian (max asymmetry {asym:.3e} at {})",
                            worst_asymmetry_position(&m)
                        ));
                    }
                }
                Err(e) => report.issues.push(format!("{prefix}.hamiltonian: {e}")),
            }
        }
        if let Some(e_max) = espec.e_max {
            if !(e_max > 0.0) {
                report
                    .issues
                    .push(format!("{prefix}: e_max {e_max} must be positive"));
            }
        }
    }
    for (s_idx, sspec) in input.strategies.iter().enumerate() {
        let prefix = format!("strategies[{s_idx}] ({})", sspec.id);
        check_state_matrix(
            &format!("{prefix}.shared_state"),
            &sspec.shared_state,
            sspec.dim_a * sspec.dim_b,
            &mut report,
        );
        if sspec.alice_povms.len() != 2 || sspec.alice_povms.iter().any(|p| p.len() != 2) {
            report.issues.push(format!(
                "{prefix}.alice_povms: must be 2 questions x 2 outcomes"
            ));
        } else {
            for (y, povm) in sspec.alice_povms.iter().enumerate() {
                let mut sum = CMatrix::zeros(sspec.dim_a, sspec.dim_a);
                let mut shapes_ok = true;
                for (a, data) in povm.iter().enumerate() {
                    match matrix_from_data(data, sspec.dim_a) {
                        Ok(m) => {
                            let asym = max_abs_entry(&(&m - m.adjoint()));
                            if asym > HERMITICITY_TOL {
                                report.issues.push(format!(
                                    "{prefix}.alice_povms[{y}][{a}]: not Hermitian (max asymmetry {asym:.3e})"
                                ));
                            } else if let Ok(h) = HermitianOperator::new(m.clone()) {
                                if !h.is_psd(PSD_TOL) {
                                    report.issues.push(format!(
                                        "{prefix}.alice_povms[{y}][{a}]: not PSD (min eigenvalue {:.3e})",
                                        h.min_eigenvalue()
                                    ));
                                }
                            }
                            sum += &m;
                        }
                        Err(e) => {
                            shapes_ok = false;
                            report
                                .issues
                                .push(format!("{prefix}.alice_povms[{y}][{a}]: {e}"));
                        }
                    }
                }
                if shapes_ok {
                    let residual =
                        max_abs_entry(&(sum - CMatrix::identity(sspec.dim_a, sspec.dim_a)));
                    if residual > 1e-9 {
                        report.issues.push(format!(
                            "{prefix}.alice_povms[{y}]: incomplete (sum residual {residual:.3e})"
                        ));
                    }
                }
            }
        }
        match matrix_from_data(&sspec.bob_hamiltonian, 2 * sspec.dim_b) {
            Ok(m) => {
                let asym = max_abs_entry(&(&m - m.adjoint()));
                if asym > HERMITICITY_TOL {
                    report.issues.push(format!(
                        "{prefix}.bob_hamiltonian: not Hermitian (max asymmetry {asym:.3e})"
                    ));
                } else if let Ok(h) = HermitianOperator::new(m) {
                    if !h.is_psd(1e-9) {
                        report.issues.push(format!(
                            "{prefix}.bob_hamiltonian: not PSD (min eigenvalue {:.3e}); scale it so H >= 0",
                            h.min_eigenvalue()
                        ));
                    }
                }
            }
            Err(e) => report.issues.push(format!("{prefix}.bob_hamiltonian: {e}")),
        }
    }
    Ok(report)
}

fn check_state_matrix(context: &str, data: &MatrixData, dim: usize, report: &mut ValidationReport) {
    let m = match matrix_from_data(data, dim) {
        Ok(m) => m,
        Err(e) => {
            report.issues.push(format!("{context}: {e}"));
            return;
        }
    };
    let asym = max_abs_entry(&(&m - m.adjoint()));
    if asym > HERMITICITY_TOL {
        report.issues.push(format!(
            "{context}: not Hermitian (max asymmetry {asym:.3e} at {})",
            worst_asymmetry_position(&m)
        ));
        return;
    }
    let h = HermitianOperator::new(m).expect("hermiticity just checked");
    let tr = h.trace();
    if (tr - 1.0).abs() > TRACE_TOL {
        report
            .issues
            .push(format!("{context}: trace is {tr}, expected 1"));
    }
    if !h.is_psd(PSD_TOL) {
        report.issues.push(format!(
            "{context}: not PSD (min eigenvalue {:.3e})",
            h.min_eigenvalue()
        ));
    }
}

fn worst_asymmetry_position(m: &CMatrix) -> String {
    let mut worst = (0, 0);
    let mut val = -1.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let a = (m[(i, j)] - m[(j, i)].conj()).norm();
            if a > val {
                val = a;
                worst = (i, j);
            }
        }
    }
    format!("({}, {})", worst.0, worst.1)
}
