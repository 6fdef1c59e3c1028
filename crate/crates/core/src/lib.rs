//! Tile-grid level repair via mixed-integer linear programming.
//!
//! A level is a rectangular grid that assigns exactly one object type to each
//! cell. Playability (object counts, border fill, enemy density, reachability
//! of target objects) is compiled into a MIP whose objective is the minimum
//! edit cost — moves at `move_cost` per tile, deletions at `delete_cost` —
//! needed to turn the input into a playable level. The crate also ships an
//! independent flow-based edit-distance oracle, graph-search validators,
//! corpus metrics, and deterministic level generators, so every repair can be
//! cross-checked without trusting the solver.
//!
//! The numeric core (`mip`, `solver`) is generic over the scalar type via
//! [`mip::Scalar`]; the concrete `f64` aliases below are what the rest of the
//! crate uses. Exact quantities (edit distances, Hamming distances, cell
//! counts) are kept in integers throughout.

pub mod assets;
pub mod flows;
pub mod generators;
pub mod level;
pub mod metrics;
pub mod mip;
pub mod repair;
pub mod solver;

/// MIP problem over `f64`, the scalar used by the repair pipeline.
pub type Problem = mip::MipProblem<f64>;
/// Solution of a [`Problem`].
pub type Solution = mip::MipSolution<f64>;
/// Solver options for [`Problem`].
pub type Options = solver::SolverOptions;

pub use level::{GameConfig, Level, ObjectType, SpaceGraph};
pub use repair::EditReport;
