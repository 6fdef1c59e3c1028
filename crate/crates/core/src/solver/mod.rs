//! Exact MIP solving: branch and bound over a bounded-variable primal
//! simplex, plus a bridge to external LP-file solvers.

mod branch_and_bound;
mod external;
mod simplex;

use std::time::{Duration, Instant};

use thiserror::Error;

pub use external::{parse_solution_file, solve_external, ExternalError};

use crate::mip::{MipProblem, MipSolution, Scalar, SolveStatus};
use simplex::{LpOutcome, Tableau};

#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Constraint/bound feasibility tolerance.
    pub feas_tol: f64,
    /// Integrality tolerance.
    pub int_tol: f64,
    /// Maximum branch-and-bound nodes.
    pub node_limit: u64,
    /// Wall-clock budget for one solve.
    pub time_limit_seconds: f64,
    /// With an all-integer objective, prune nodes whose LP bound exceeds
    /// `incumbent - 1 + int_tol`.
    pub use_integral_objective_pruning: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            feas_tol: 1e-7,
            int_tol: 1e-6,
            node_limit: 10_000_000,
            time_limit_seconds: 300.0,
            use_integral_objective_pruning: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("integer variable `{0}` must have finite bounds")]
    UnboundedInteger(String),
    #[error("seed solution rejected: {0}")]
    BadSeed(String),
}

/// Solve the LP relaxation (integrality dropped).
pub fn solve_lp<S: Scalar>(
    problem: &MipProblem<S>,
    options: &SolverOptions,
) -> Result<MipSolution<S>, SolveError> {
    let deadline = Instant::now() + Duration::from_secs_f64(options.time_limit_seconds);
    let mut tableau = Tableau::from_problem(problem, options.feas_tol, None);
    let outcome = tableau
        .solve(Some(deadline))
        .map_err(|e| SolveError::NumericalFailure(e.0))?;
    let values = tableau.structural_values();
    Ok(match outcome {
        LpOutcome::Optimal => {
            let obj = problem.objective_value(&values);
            MipSolution {
                values,
                objective_value: obj,
                status: SolveStatus::Optimal,
                best_bound: obj,
            }
        }
        LpOutcome::Infeasible => MipSolution {
            values,
            objective_value: S::infinity(),
            status: SolveStatus::Infeasible,
            best_bound: S::infinity(),
        },
        LpOutcome::Unbounded => MipSolution {
            values,
            objective_value: S::neg_infinity(),
            status: SolveStatus::Unbounded,
            best_bound: S::neg_infinity(),
        },
        LpOutcome::TimeLimit => MipSolution {
            values,
            objective_value: S::infinity(),
            status: SolveStatus::LimitReached,
            best_bound: S::neg_infinity(),
        },
    })
}

/// Solve a MIP to proven optimality (within tolerances).
pub fn solve_mip<S: Scalar>(
    problem: &MipProblem<S>,
    options: &SolverOptions,
) -> Result<MipSolution<S>, SolveError> {
    Solver::new(problem, options.clone()).solve()
}

/// Configurable solve: optional starting point for the simplex crash basis
/// and an optional feasible incumbent that seeds the branch-and-bound cutoff.
pub struct Solver<'p, S> {
    problem: &'p MipProblem<S>,
    options: SolverOptions,
    start: Option<Vec<S>>,
    incumbent: Option<Vec<S>>,
}

impl<'p, S: Scalar> Solver<'p, S> {
    pub fn new(problem: &'p MipProblem<S>, options: SolverOptions) -> Self {
        Solver {
            problem,
            options,
            start: None,
            incumbent: None,
        }
    }

    /// Nonbasic variables start at the bound nearest to this point.
    pub fn with_start_point(mut self, values: Vec<S>) -> Self {
        self.start = Some(values);
        self
    }

    /// Seed the search with a known feasible integer assignment. The solve
    /// fails with [`SolveError::BadSeed`] if it does not check out.
    pub fn with_incumbent(mut self, values: Vec<S>) -> Self {
        self.incumbent = Some(values);
        self
    }

    pub fn solve(self) -> Result<MipSolution<S>, SolveError> {
        branch_and_bound::run(
            self.problem,
            &self.options,
            self.start.as_deref(),
            self.incumbent.as_deref(),
        )
    }
}
