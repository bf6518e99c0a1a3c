//! Real-amplitude simulation of database search by paired reflections.
//!
//! The search alternates two reflections on a state vector over `N` items:
//! an oracle that negates the amplitude of the marked item and a diffusion
//! step that reflects every amplitude about the mean. Both operators have
//! real matrix elements, so a search started in the uniform superposition
//! never leaves the real section of the Hilbert space; amplitudes are
//! therefore stored as signed `f64` values.
//!
//! Alongside the simulator the module solves the analytic query-count
//! relation `(2Q + 1)·asin(1/√N) = π/2` in both directions and provides the
//! classical lookup baselines (`log₂N` sorted, `N/2` unsorted expected).

use thiserror::Error;

/// Absolute tolerance on the squared norm of a [`SearchState`].
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Errors raised by state construction and search operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    /// A database must contain at least one item.
    #[error("database size must be at least 1")]
    EmptyDatabase,
    /// An index does not address any database item.
    #[error("target index {target} is out of range for database size {size}")]
    TargetOutOfRange { target: usize, size: usize },
    /// The amplitudes do not form a unit vector.
    #[error("squared amplitude norm is {norm_sq:.17e}, expected 1 within 1e-12")]
    NotNormalized { norm_sq: f64 },
}

/// Unit vector of signed real amplitudes over the items of a database.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchState {
    amplitudes: Vec<f64>,
}

impl SearchState {
    /// Builds a state from raw amplitudes, enforcing the unit-norm invariant.
    pub fn new(amplitudes: Vec<f64>) -> Result<Self, SearchError> {
        if amplitudes.is_empty() {
            return Err(SearchError::EmptyDatabase);
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a * a).sum();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(SearchError::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    /// Number of database items.
    pub fn size(&self) -> usize {
        self.amplitudes.len()
    }

    /// Read-only view of the amplitudes.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// Probability of observing `index` when the state is measured.
    pub fn probability(&self, index: usize) -> Result<f64, SearchError> {
        let a = self
            .amplitudes
            .get(index)
            .ok_or(SearchError::TargetOutOfRange {
                target: index,
                size: self.amplitudes.len(),
            })?;
        Ok(a * a)
    }
}

/// A database of `size` items with one marked target index (zero-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchProblem {
    size: usize,
    target: usize,
}

impl SearchProblem {
    /// Validates that the database is non-empty and the target addresses it.
    pub fn new(size: usize, target: usize) -> Result<Self, SearchError> {
        if size == 0 {
            return Err(SearchError::EmptyDatabase);
        }
        if target >= size {
            return Err(SearchError::TargetOutOfRange { target, size });
        }
        Ok(Self { size, target })
    }

    /// Database size `N`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Zero-based marked item index.
    pub fn target(&self) -> usize {
        self.target
    }
}

/// Real and integer query counts for a database size, with the
/// success-probability shortfall at the integer count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuerySolution {
    /// Exact real solution of `(2q + 1)·asin(1/√N) = π/2`.
    pub q_real: f64,
    /// Integer query count: floor or ceiling of `q_real`, whichever yields
    /// the higher success probability; ties resolve to the smaller count.
    pub q_int: u32,
    /// `1 − success_probability` at `q_int`, clamped into `[0, 1]`.
    pub residual_error: f64,
}

/// Classical baselines for finding one item among `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalQueryCounts {
    /// Binary-question count for a sorted database: `log₂ n`.
    pub sorted: f64,
    /// Expected probe count for an unsorted database: `n / 2`.
    pub unsorted_expected: f64,
}

/// Returns the uniform superposition over `n` items (every amplitude `1/√n`).
pub fn uniform_state(n: usize) -> Result<SearchState, SearchError> {
    if n == 0 {
        return Err(SearchError::EmptyDatabase);
    }
    let amp = 1.0 / (n as f64).sqrt();
    Ok(SearchState {
        amplitudes: vec![amp; n],
    })
}

/// Oracle reflection: negates the target amplitude, leaves the rest unchanged.
///
/// Applying the oracle twice returns the input state exactly.
pub fn apply_oracle(state: &SearchState, target: usize) -> Result<SearchState, SearchError> {
    if target >= state.size() {
        return Err(SearchError::TargetOutOfRange {
            target,
            size: state.size(),
        });
    }
    let mut amplitudes = state.amplitudes.clone();
    amplitudes[target] = -amplitudes[target];
    Ok(SearchState { amplitudes })
}

/// Diffusion reflection about the uniform state: every amplitude `a` becomes
/// `2·ā − a` where `ā` is the mean amplitude ("reflection about average").
pub fn apply_diffusion(state: &SearchState) -> SearchState {
    let n = state.size() as f64;
    let mean = state.amplitudes.iter().sum::<f64>() / n;
    let amplitudes = state.amplitudes.iter().map(|a| 2.0 * mean - a).collect();
    SearchState { amplitudes }
}

/// Runs `q` full search iterations (oracle then diffusion) on the uniform
/// state; `q = 0` returns the uniform state itself.
pub fn grover_iterate(problem: SearchProblem, q: u32) -> SearchState {
    let mut state = uniform_state(problem.size).expect("validated size");
    for _ in 0..q {
        state = apply_oracle(&state, problem.target).expect("validated target");
        state = apply_diffusion(&state);
    }
    state
}

/// Analytic success probability after `q` iterations:
/// `sin²((2q + 1)·asin(1/√N))`.
///
/// Agrees with the squared target amplitude of [`grover_iterate`] within
/// `1e-10` for all desk-scale sizes.
pub fn success_probability(problem: SearchProblem, q: u32) -> f64 {
    let theta = (1.0 / (problem.size as f64).sqrt()).asin();
    let s = ((2.0 * f64::from(q) + 1.0) * theta).sin();
    s * s
}

/// Solves the query-count relation for a database of `n` items.
///
/// `q_real = (π / (2·asin(1/√n)) − 1) / 2` is the exact real solution; the
/// integer count evaluates floor and ceiling and keeps the one with higher
/// success probability, breaking ties toward fewer queries.
pub fn optimal_queries(n: usize) -> Result<QuerySolution, SearchError> {
    if n == 0 {
        return Err(SearchError::EmptyDatabase);
    }
    let theta = (1.0 / (n as f64).sqrt()).asin();
    let q_real = (std::f64::consts::PI / (2.0 * theta) - 1.0) / 2.0;
    let problem = SearchProblem::new(n, 0)?;
    let floor = q_real.floor().max(0.0) as u32;
    let ceil = q_real.ceil().max(0.0) as u32;
    let p_floor = success_probability(problem, floor);
    let p_ceil = success_probability(problem, ceil);
    // Near-ties resolve to the cheaper (smaller) count.
    let (q_int, p) = if p_ceil > p_floor + NORM_TOLERANCE {
        (ceil, p_ceil)
    } else {
        (floor, p_floor)
    };
    Ok(QuerySolution {
        q_real,
        q_int,
        residual_error: (1.0 - p).clamp(0.0, 1.0),
    })
}

/// Database size exactly solved by `q` queries: `N = 1/sin²(π/(2(2q+1)))`.
///
/// `q = 0` returns the degenerate single-item database.
pub fn database_size_for_queries(q: u32) -> f64 {
    if q == 0 {
        return 1.0;
    }
    let s = (std::f64::consts::PI / (2.0 * (2.0 * f64::from(q) + 1.0))).sin();
    1.0 / (s * s)
}

/// Classical binary-question baselines: `log₂ n` when the database is sorted
/// and `n/2` expected probes when it is not.
pub fn classical_query_counts(n: usize) -> Result<ClassicalQueryCounts, SearchError> {
    if n == 0 {
        return Err(SearchError::EmptyDatabase);
    }
    Ok(ClassicalQueryCounts {
        sorted: (n as f64).log2(),
        unsorted_expected: n as f64 / 2.0,
    })
}
