//! Discrete-time linear population dynamics under a resource constraint.
//!
//! Populations evolve as `φ(t+1) = M·φ(t)` where every column of `M` sums to
//! one, so the total population (the resource budget) is conserved exactly by
//! the algebra and within rounding by the floating-point product. Two matrix
//! families are supported: classically stochastic (all entries in `[0, 1]`)
//! and signed (entries of either sign, columns still summing to one). Signed
//! couplings can push a component negative; two explicit policies resolve
//! that tension — `Strict` aborts the step, `Projected` clamps to zero,
//! rescales back to the budget and counts the event.
//!
//! Convergence is measured two ways: the first step where one species holds
//! at least a threshold share of the budget (a "winner"), and the first step
//! where the ℓ₁ change over one step drops below a stationarity tolerance.
//! [`estimate_geometric_rate`] measures the asymptotic per-step contraction
//! factor of the transient, which for a primitive stochastic matrix equals
//! the second-largest eigenvalue modulus.

// Validation deliberately writes `!(x >= 0.0)` instead of `x < 0.0`: the
// negated form also rejects NaN, which must never pass as a population,
// matrix entry, or tolerance.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use thiserror::Error;

/// Absolute tolerance on column sums (1 for matrices, 0 for perturbations).
pub const COLUMN_SUM_TOLERANCE: f64 = 1e-12;
/// Components more negative than this abort or clamp; noise above it is
/// zeroed silently.
pub const NEGATIVITY_TOLERANCE: f64 = 1e-12;

/// Errors raised by construction, stepping, and experiment plumbing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolutionError {
    /// A population must contain at least one species.
    #[error("population must contain at least one species")]
    EmptyPopulation,
    /// Populations are non-negative by definition.
    #[error("population component {index} is negative ({value})")]
    NegativePopulation { index: usize, value: f64 },
    /// The resource budget must be positive.
    #[error("total population must be positive, got {total}")]
    NonPositiveTotal { total: f64 },
    /// The matrix must be non-empty.
    #[error("matrix must contain at least one row")]
    EmptyMatrix,
    /// Every row must match the matrix dimension.
    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },
    /// Resource conservation requires unit column sums.
    #[error("column {column} sums to {sum}, expected 1 within 1e-12")]
    ColumnSumViolation { column: usize, sum: f64 },
    /// Stochastic mode also bounds every entry.
    #[error("stochastic mode requires entries in [0, 1]: entry ({row}, {column}) is {value}")]
    EntryOutOfRange {
        row: usize,
        column: usize,
        value: f64,
    },
    /// Matrix and population dimensions must agree.
    #[error(
        "dimension mismatch: matrix is {matrix}x{matrix}, population has {population} species"
    )]
    DimensionMismatch { matrix: usize, population: usize },
    /// Strict policy refuses steps that would drive a species negative.
    #[error("strict policy: species {species} would drop to {value} at the next step")]
    Infeasible { species: usize, value: f64 },
    /// [`Infeasible`](Self::Infeasible) with the trajectory step attached,
    /// raised by the multi-step drivers.
    #[error("strict policy: step {step} would drop species {species} to {value}")]
    InfeasibleAtStep {
        step: u64,
        species: usize,
        value: f64,
    },
    /// Projection clamped every component to zero; nothing left to rescale.
    #[error("projection clamped the whole population to zero")]
    DegenerateProjection,
    /// Speed-up perturbations must not alter column sums.
    #[error("perturbation column {column} sums to {sum}, expected 0 within 1e-12")]
    PerturbationColumnSum { column: usize, sum: f64 },
    /// The speed-up experiment perturbs a stochastic baseline.
    #[error("speed-up baseline must be a stochastic-mode matrix")]
    BaseNotStochastic,
    /// Winner thresholds below one half are ambiguous (two species could
    /// qualify at once).
    #[error("winner threshold {value} must lie in (0.5, 1]")]
    InvalidWinnerThreshold { value: f64 },
    /// Stationarity tolerances must be positive.
    #[error("stationarity tolerance {value} must be positive")]
    InvalidStationarityTolerance { value: f64 },
    /// At least one step must be allowed.
    #[error("max_steps must be at least 1")]
    InvalidMaxSteps,
}

impl EvolutionError {
    /// Attaches the trajectory step index to a step-local infeasibility.
    fn at_step(self, step: u64) -> Self {
        match self {
            EvolutionError::Infeasible { species, value } => EvolutionError::InfeasibleAtStep {
                step,
                species,
                value,
            },
            other => other,
        }
    }
}

/// Non-negative species populations with their conserved total.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationVector {
    phi: Vec<f64>,
    total: f64,
}

impl PopulationVector {
    /// Builds a population, rejecting negative components and a zero budget.
    /// The total is the sum of the components.
    pub fn new(phi: Vec<f64>) -> Result<Self, EvolutionError> {
        if phi.is_empty() {
            return Err(EvolutionError::EmptyPopulation);
        }
        for (index, &value) in phi.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(EvolutionError::NegativePopulation { index, value });
            }
        }
        let total: f64 = phi.iter().sum();
        if !(total > 0.0) {
            return Err(EvolutionError::NonPositiveTotal { total });
        }
        Ok(Self { phi, total })
    }

    /// Internal constructor for stepped vectors: keeps the original budget so
    /// totals stay comparable along a trajectory.
    fn from_parts(phi: Vec<f64>, total: f64) -> Self {
        Self { phi, total }
    }

    /// Species populations.
    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Conserved resource budget.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Number of species.
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    /// True when the vector has no species (never holds for validated input).
    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// Index and budget share of the largest component (first index on ties).
    pub fn winner(&self) -> (usize, f64) {
        let mut index = 0;
        let mut best = self.phi[0];
        for (i, &value) in self.phi.iter().enumerate().skip(1) {
            if value > best {
                best = value;
                index = i;
            }
        }
        (index, best / self.total)
    }
}

/// Whether a matrix is restricted to classical stochastic entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixMode {
    /// Entries in `[0, 1]`, columns summing to one.
    Stochastic,
    /// Entries of either sign, columns still summing to one.
    Signed,
}

/// Square evolution matrix with unit column sums, stored as rows.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionMatrix {
    entries: Vec<Vec<f64>>,
    mode: MatrixMode,
}

impl EvolutionMatrix {
    /// Validates shape, column sums, and (in stochastic mode) entry bounds.
    pub fn new(entries: Vec<Vec<f64>>, mode: MatrixMode) -> Result<Self, EvolutionError> {
        Self::check_shape(&entries)?;
        let n = entries.len();
        if mode == MatrixMode::Stochastic {
            for (row, r) in entries.iter().enumerate() {
                for (column, &value) in r.iter().enumerate() {
                    if !(0.0..=1.0).contains(&value) {
                        return Err(EvolutionError::EntryOutOfRange { row, column, value });
                    }
                }
            }
        }
        for column in 0..n {
            let sum: f64 = entries.iter().map(|row| row[column]).sum();
            if !((sum - 1.0).abs() <= COLUMN_SUM_TOLERANCE) {
                return Err(EvolutionError::ColumnSumViolation { column, sum });
            }
        }
        Ok(Self { entries, mode })
    }

    /// Shorthand for [`MatrixMode::Stochastic`] construction.
    pub fn stochastic(entries: Vec<Vec<f64>>) -> Result<Self, EvolutionError> {
        Self::new(entries, MatrixMode::Stochastic)
    }

    /// Shorthand for [`MatrixMode::Signed`] construction.
    pub fn signed(entries: Vec<Vec<f64>>) -> Result<Self, EvolutionError> {
        Self::new(entries, MatrixMode::Signed)
    }

    fn check_shape(entries: &[Vec<f64>]) -> Result<(), EvolutionError> {
        if entries.is_empty() {
            return Err(EvolutionError::EmptyMatrix);
        }
        let expected = entries.len();
        for (row, r) in entries.iter().enumerate() {
            if r.len() != expected {
                return Err(EvolutionError::NotSquare {
                    row,
                    found: r.len(),
                    expected,
                });
            }
        }
        Ok(())
    }

    /// Matrix dimension.
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Construction mode.
    pub fn mode(&self) -> MatrixMode {
        self.mode
    }

    /// Rows of the matrix (`entries()[i][j]` multiplies species `j` into
    /// species `i`).
    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    /// Raw matrix-vector product, no policy applied.
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(x).map(|(m, v)| m * v).sum())
            .collect()
    }
}

/// How to resolve a signed step that drives a component negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegativityPolicy {
    /// Abort the step with [`EvolutionError::Infeasible`].
    Strict,
    /// Clamp negatives to zero, rescale to the budget, count the event.
    Projected,
}

/// One evolution step plus whether the projection policy had to intervene.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    /// Population after the step.
    pub population: PopulationVector,
    /// True when a genuinely negative component (below `−1e-12`) was clamped.
    pub clamped: bool,
}

/// Applies one step `φ ← M·φ` under the given negativity policy.
pub fn step(
    pop: &PopulationVector,
    m: &EvolutionMatrix,
    policy: NegativityPolicy,
) -> Result<StepOutcome, EvolutionError> {
    if m.size() != pop.len() {
        return Err(EvolutionError::DimensionMismatch {
            matrix: m.size(),
            population: pop.len(),
        });
    }
    let mut next = m.apply(pop.phi());
    let mut clamped = false;
    let worst = next
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty population");
    if *worst.1 < -NEGATIVITY_TOLERANCE {
        match policy {
            NegativityPolicy::Strict => {
                return Err(EvolutionError::Infeasible {
                    species: worst.0,
                    value: *worst.1,
                });
            }
            NegativityPolicy::Projected => {
                for value in &mut next {
                    if *value < 0.0 {
                        *value = 0.0;
                    }
                }
                let remaining: f64 = next.iter().sum();
                if remaining <= 0.0 {
                    return Err(EvolutionError::DegenerateProjection);
                }
                let scale = pop.total() / remaining;
                for value in &mut next {
                    *value *= scale;
                }
                clamped = true;
            }
        }
    } else if *worst.1 < 0.0 {
        // Rounding noise in an otherwise feasible step: zero it silently.
        for value in &mut next {
            if *value < 0.0 {
                *value = 0.0;
            }
        }
    }
    Ok(StepOutcome {
        population: PopulationVector::from_parts(next, pop.total()),
        clamped,
    })
}

/// Iterates [`step`] and returns the trajectory `φ(0), …, φ(steps)`.
pub fn evolve(
    pop: &PopulationVector,
    m: &EvolutionMatrix,
    steps: u64,
    policy: NegativityPolicy,
) -> Result<Vec<PopulationVector>, EvolutionError> {
    let mut trajectory = Vec::with_capacity(steps as usize + 1);
    trajectory.push(pop.clone());
    for t in 1..=steps {
        let outcome =
            step(trajectory.last().expect("non-empty"), m, policy).map_err(|e| e.at_step(t))?;
        trajectory.push(outcome.population);
    }
    Ok(trajectory)
}

/// Stopping rules for [`convergence_time`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceParams {
    /// Budget share one species must reach to be declared the winner.
    pub winner_threshold: f64,
    /// ℓ₁ change per step (relative to the budget) below which the
    /// trajectory counts as stationary.
    pub stationarity_tol: f64,
    /// Upper bound on simulated steps; unreached rules stay unreached.
    pub max_steps: u64,
}

impl Default for ConvergenceParams {
    fn default() -> Self {
        Self {
            winner_threshold: 0.99,
            stationarity_tol: 1e-8,
            max_steps: 1_000_000,
        }
    }
}

impl ConvergenceParams {
    fn validate(&self) -> Result<(), EvolutionError> {
        if !(self.winner_threshold > 0.5 && self.winner_threshold <= 1.0) {
            return Err(EvolutionError::InvalidWinnerThreshold {
                value: self.winner_threshold,
            });
        }
        if !(self.stationarity_tol > 0.0) {
            return Err(EvolutionError::InvalidStationarityTolerance {
                value: self.stationarity_tol,
            });
        }
        if self.max_steps == 0 {
            return Err(EvolutionError::InvalidMaxSteps);
        }
        Ok(())
    }
}

/// When each stopping rule first fired, if it did within `max_steps`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    /// First step at which some species held the threshold share.
    pub steps_to_winner: Option<u64>,
    /// That species; present exactly when `steps_to_winner` is.
    pub winner: Option<usize>,
    /// First step with ℓ₁ change below the stationarity tolerance.
    pub stationarity_steps: Option<u64>,
    /// Steps on which the projection policy clamped a negative component.
    pub negativity_events: u64,
}

/// Runs the dynamics until both stopping rules fire or `max_steps` elapses.
pub fn convergence_time(
    pop: &PopulationVector,
    m: &EvolutionMatrix,
    policy: NegativityPolicy,
    params: ConvergenceParams,
) -> Result<ConvergenceReport, EvolutionError> {
    params.validate()?;
    let mut report = ConvergenceReport {
        steps_to_winner: None,
        winner: None,
        stationarity_steps: None,
        negativity_events: 0,
    };
    let (index, share) = pop.winner();
    if share >= params.winner_threshold {
        report.steps_to_winner = Some(0);
        report.winner = Some(index);
    }
    let mut current = pop.clone();
    for t in 1..=params.max_steps {
        let outcome = step(&current, m, policy).map_err(|e| e.at_step(t))?;
        if outcome.clamped {
            report.negativity_events += 1;
        }
        if report.stationarity_steps.is_none() {
            let delta: f64 = outcome
                .population
                .phi()
                .iter()
                .zip(current.phi())
                .map(|(a, b)| (a - b).abs())
                .sum();
            if delta / pop.total() <= params.stationarity_tol {
                report.stationarity_steps = Some(t);
            }
        }
        current = outcome.population;
        if report.steps_to_winner.is_none() {
            let (index, share) = current.winner();
            if share >= params.winner_threshold {
                report.steps_to_winner = Some(t);
                report.winner = Some(index);
            }
        }
        if report.steps_to_winner.is_some() && report.stationarity_steps.is_some() {
            break;
        }
    }
    Ok(report)
}

/// Steps of transient power iteration discarded before sampling.
const RATE_BURN_STEPS: u32 = 500;
/// Steps over which log contraction ratios are averaged.
const RATE_SAMPLE_STEPS: u32 = 1500;

/// Measures the asymptotic per-step contraction factor of the transient —
/// the modulus of the subdominant eigenvalue for a primitive matrix.
///
/// The step difference `δ(t) = φ(t+1) − φ(t)` evolves as `δ ← M·δ` entirely
/// inside the zero-sum hyperplane, where the unit-eigenvalue mode is absent.
/// Power iteration on that difference therefore converges on the subdominant
/// mode; re-projecting onto the hyperplane each step stops rounding noise
/// from re-seeding the dominant mode, and ℓ₁ renormalization avoids the
/// underflow floor a raw trajectory fit would hit. The returned rate is the
/// geometric mean of the contraction ratios over 1500 steps after a 500-step
/// burn-in, which averages out the oscillation of complex eigenvalue pairs.
///
/// Returns `None` for a single species (no subdominant mode exists) and
/// `Some(0.0)` when the difference vanishes identically in finitely many
/// steps.
pub fn estimate_geometric_rate(
    pop: &PopulationVector,
    m: &EvolutionMatrix,
) -> Result<Option<f64>, EvolutionError> {
    if m.size() != pop.len() {
        return Err(EvolutionError::DimensionMismatch {
            matrix: m.size(),
            population: pop.len(),
        });
    }
    let n = pop.len();
    if n == 1 {
        return Ok(None);
    }
    let project = |v: &mut [f64]| {
        let mean: f64 = v.iter().sum::<f64>() / v.len() as f64;
        for value in v.iter_mut() {
            *value -= mean;
        }
    };
    let l1 = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();

    // Seed from the first step difference of the actual trajectory.
    let mut v: Vec<f64> = m
        .apply(pop.phi())
        .iter()
        .zip(pop.phi())
        .map(|(a, b)| a - b)
        .collect();
    project(&mut v);
    if l1(&v) == 0.0 {
        // Already stationary: probe with a deterministic hyperplane vector.
        v = vec![0.0; n];
        v[0] = 1.0;
        project(&mut v);
    }
    let norm = l1(&v);
    for value in &mut v {
        *value /= norm;
    }

    let mut log_sum = 0.0;
    for t in 0..(RATE_BURN_STEPS + RATE_SAMPLE_STEPS) {
        let mut w = m.apply(&v);
        project(&mut w);
        let norm = l1(&w);
        if norm == 0.0 {
            return Ok(Some(0.0));
        }
        if t >= RATE_BURN_STEPS {
            log_sum += norm.ln();
        }
        for value in &mut w {
            *value /= norm;
        }
        v = w;
    }
    Ok(Some((log_sum / f64::from(RATE_SAMPLE_STEPS)).exp()))
}

/// One row of the coupling-sweep experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupRow {
    /// Perturbation strength.
    pub lambda: f64,
    /// Convergence report, or `None` when the strict policy aborted (the
    /// perturbed matrix drove a species negative).
    pub report: Option<ConvergenceReport>,
}

impl SpeedupRow {
    /// True when the dynamics was infeasible under the chosen policy.
    pub fn infeasible(&self) -> bool {
        self.report.is_none()
    }
}

/// Sweeps `M(λ) = base + λ·A` over the given strengths and measures
/// convergence for each, in ascending λ order.
///
/// `A` must have exactly-zero column sums so every `M(λ)` conserves the
/// budget; the base must be stochastic so λ = 0 is the classical baseline.
/// The λ = 0 row is bit-identical to [`convergence_time`] on the base.
pub fn speedup_experiment(
    base: &EvolutionMatrix,
    perturbation: &[Vec<f64>],
    lambdas: &[f64],
    pop: &PopulationVector,
    policy: NegativityPolicy,
    params: ConvergenceParams,
) -> Result<Vec<SpeedupRow>, EvolutionError> {
    if base.mode() != MatrixMode::Stochastic {
        return Err(EvolutionError::BaseNotStochastic);
    }
    EvolutionMatrix::check_shape(perturbation)?;
    let n = base.size();
    if perturbation.len() != n {
        return Err(EvolutionError::NotSquare {
            row: 0,
            found: perturbation.len(),
            expected: n,
        });
    }
    for column in 0..n {
        let sum: f64 = perturbation.iter().map(|row| row[column]).sum();
        if !(sum.abs() <= COLUMN_SUM_TOLERANCE) {
            return Err(EvolutionError::PerturbationColumnSum { column, sum });
        }
    }

    let mut sorted = lambdas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut rows = Vec::with_capacity(sorted.len());
    for lambda in sorted {
        let matrix = if lambda == 0.0 {
            base.clone()
        } else {
            let entries = base
                .entries()
                .iter()
                .zip(perturbation)
                .map(|(b, a)| b.iter().zip(a).map(|(x, y)| x + lambda * y).collect())
                .collect();
            // Column sums are 1 + λ·0 by construction; re-validating against
            // the 1e-12 budget would spuriously reject large λ, so build the
            // signed matrix directly.
            EvolutionMatrix {
                entries,
                mode: MatrixMode::Signed,
            }
        };
        let report = match convergence_time(pop, &matrix, policy, params) {
            Ok(report) => Some(report),
            Err(
                EvolutionError::Infeasible { .. }
                | EvolutionError::InfeasibleAtStep { .. }
                | EvolutionError::DegenerateProjection,
            ) => None,
            Err(other) => return Err(other),
        };
        rows.push(SpeedupRow { lambda, report });
    }
    Ok(rows)
}
