//! Deterministic simulators and enumerators behind the `qbio` toolkit.
//!
//! Every routine in this crate is a pure function of its inputs: no global
//! state, no hidden randomness, no platform-dependent ordering. That makes
//! outputs reproducible to the bit across runs, which the command-line
//! frontend and the golden-file tests rely on.
//!
//! * [`search`] — real-amplitude database search by paired reflections,
//!   analytic query-count solvers, and classical lookup baselines.
//! * [`replication`] — a damped-oscillation measurement model for a single
//!   search step driven by a kick/oscillation/relaxation timescale hierarchy.
//! * [`evolution`] — discrete-time linear population dynamics under a
//!   column-sum-one resource constraint, with signed-matrix extensions and
//!   convergence-time measurement.
//! * [`lattice`] — self-avoiding polypeptide backbones on the diamond
//!   lattice and discretization of torsion angles onto a 120°-spaced grid.
//! * [`aminoacids`] — the canonical 20-row amino-acid table with its
//!   synthetase-class partition validators and alphabet-size arithmetic.

pub mod aminoacids;
pub mod evolution;
pub mod lattice;
pub mod replication;
pub mod search;

pub use aminoacids::{
    AminoAcidRecord, CodeSignalCount, PartitionReport, RGroupProperty, SynthetaseClass,
};
pub use evolution::{
    ConvergenceParams, ConvergenceReport, EvolutionMatrix, MatrixMode, NegativityPolicy,
    PopulationVector, SpeedupRow,
};
pub use lattice::{
    ChainConformation, DiamondSite, Omega, RamachandranPoint, StarAssignment, Sublattice,
    TorsionChoice,
};
pub use replication::{ReplicationOutcome, ReplicationParams};
pub use search::{ClassicalQueryCounts, QuerySolution, SearchProblem, SearchState};
