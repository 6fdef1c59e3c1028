//! Branch and bound over the LP relaxation.
//!
//! One tableau is shared by the whole search: entering a node swaps in that
//! node's bounds and re-optimizes from the previous basis (phase 1 removes
//! whatever infeasibility the bound changes introduced, phase 2 re-optimizes).
//! Nodes carry only their chain of branching decisions. Search is depth-first
//! until the first incumbent, then best-bound. Branching picks the most
//! fractional binary variable (ties: lowest id), falling back to the most
//! fractional general integer.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::rc::Rc;
use std::time::{Duration, Instant};

use crate::mip::{MipProblem, MipSolution, Scalar, SolveStatus, VarKind};

use super::simplex::{LpOutcome, Tableau};
use super::{SolveError, SolverOptions};

struct Decision<S> {
    parent: Option<Rc<Decision<S>>>,
    var: usize,
    lower: S,
    upper: S,
}

struct OpenNode<S> {
    chain: Option<Rc<Decision<S>>>,
    /// LP bound of the parent node (lower bound for the subtree).
    bound: S,
    seq: u64,
}

impl<S: Scalar> PartialEq for OpenNode<S> {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.seq == other.seq
    }
}
impl<S: Scalar> Eq for OpenNode<S> {}

impl<S: Scalar> Ord for OpenNode<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; reverse so the smallest bound pops first,
        // with insertion order as the deterministic tie-break.
        other
            .bound
            .partial_cmp(&self.bound)
            .unwrap_or(Ordering::Equal)
            .then(other.seq.cmp(&self.seq))
    }
}
impl<S: Scalar> PartialOrd for OpenNode<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Round integer variables to the nearest integer and clamp into bounds.
fn snap<S: Scalar>(problem: &MipProblem<S>, values: &[S]) -> Vec<S> {
    problem
        .variables()
        .iter()
        .map(|v| {
            let x = values[v.id.0];
            match v.kind {
                VarKind::Continuous => x,
                _ => x.round().max(v.lower).min(v.upper),
            }
        })
        .collect()
}

/// Most fractional binary, ties by lowest id; then most fractional integer.
fn pick_branch_var<S: Scalar>(
    problem: &MipProblem<S>,
    values: &[S],
    int_tol: S,
) -> Option<(usize, S)> {
    let mut best_binary: Option<(usize, S, S)> = None;
    let mut best_integer: Option<(usize, S, S)> = None;
    for v in problem.variables() {
        if v.kind == VarKind::Continuous {
            continue;
        }
        let x = values[v.id.0];
        let frac = x - x.floor();
        let dist = frac.min(S::one() - frac);
        if dist <= int_tol {
            continue;
        }
        let slot = if v.kind == VarKind::Binary {
            &mut best_binary
        } else {
            &mut best_integer
        };
        if slot.as_ref().map_or(true, |&(_, _, d)| dist > d) {
            *slot = Some((v.id.0, x, dist));
        }
    }
    best_binary.or(best_integer).map(|(var, x, _)| (var, x))
}

pub(super) fn run<S: Scalar>(
    problem: &MipProblem<S>,
    options: &SolverOptions,
    start: Option<&[S]>,
    seed_incumbent: Option<&[S]>,
) -> Result<MipSolution<S>, SolveError> {
    for v in problem.variables() {
        if v.kind != VarKind::Continuous && !(v.lower.is_finite() && v.upper.is_finite()) {
            return Err(SolveError::UnboundedInteger(v.name.clone()));
        }
    }
    let feas_tol = S::from_f64(options.feas_tol);
    let int_tol = S::from_f64(options.int_tol);
    let deadline = Instant::now() + Duration::from_secs_f64(options.time_limit_seconds);

    let mut incumbent: Option<(Vec<S>, S)> = None;
    if let Some(seed) = seed_incumbent {
        let snapped = snap(problem, seed);
        let violations = problem
            .check_solution(&snapped, feas_tol, int_tol)
            .map_err(|e| SolveError::BadSeed(e.to_string()))?;
        if let Some(v) = violations.first() {
            return Err(SolveError::BadSeed(v.to_string()));
        }
        let obj = problem.objective_value(&snapped);
        incumbent = Some((snapped, obj));
    }
    let cutoff = |inc: S| -> S {
        if options.use_integral_objective_pruning && problem.objective_is_integral() {
            inc - S::one() + int_tol
        } else {
            inc - S::from_f64(1e-9) * (S::one() + inc.abs())
        }
    };

    let mut tableau = Tableau::from_problem(problem, options.feas_tol, start);
    let root_lower = tableau.lower.clone();
    let root_upper = tableau.upper.clone();

    let mut dfs: Vec<OpenNode<S>> = vec![OpenNode {
        chain: None,
        bound: S::neg_infinity(),
        seq: 0,
    }];
    let mut heap: BinaryHeap<OpenNode<S>> = BinaryHeap::new();
    let mut seq: u64 = 1;
    let mut nodes: u64 = 0;
    let mut limit_hit = false;
    let mut root_unbounded = false;
    let debug = std::env::var_os("LEVELREPAIR_SOLVER_DEBUG").is_some();
    let t_start = Instant::now();

    loop {
        if incumbent.is_some() && !dfs.is_empty() {
            heap.extend(dfs.drain(..));
        }
        let node = if incumbent.is_none() {
            match dfs.pop().or_else(|| heap.pop()) {
                Some(n) => n,
                None => break,
            }
        } else {
            match heap.pop() {
                Some(n) => n,
                None => break,
            }
        };
        if let Some((_, inc)) = &incumbent {
            if node.bound > cutoff(*inc) {
                continue;
            }
        }
        if nodes >= options.node_limit || Instant::now() >= deadline {
            // put the node back so its bound counts as open
            heap.push(node);
            limit_hit = true;
            break;
        }
        nodes += 1;
        if debug {
            eprintln!(
                "[bb] t={:.1}s nodes={} open={} pivots={} bound={:?} incumbent={:?}",
                t_start.elapsed().as_secs_f64(),
                nodes,
                heap.len() + dfs.len(),
                tableau.pivots,
                node.bound,
                incumbent.as_ref().map(|(_, o)| *o),
            );
        }

        let mut lo = root_lower.clone();
        let mut up = root_upper.clone();
        let mut link = node.chain.clone();
        while let Some(d) = link {
            lo[d.var] = lo[d.var].max(d.lower);
            up[d.var] = up[d.var].min(d.upper);
            link = d.parent.clone();
        }
        tableau.sync_bounds(&lo, &up);

        match tableau
            .solve(Some(deadline))
            .map_err(|e| SolveError::NumericalFailure(e.0))?
        {
            LpOutcome::Infeasible => continue,
            LpOutcome::TimeLimit => {
                heap.push(node);
                limit_hit = true;
                break;
            }
            LpOutcome::Unbounded => {
                if node.chain.is_none() {
                    root_unbounded = true;
                    break;
                }
                // a restriction of a bounded parent cannot be unbounded
                return Err(SolveError::NumericalFailure(
                    "unbounded node below bounded root".to_string(),
                ));
            }
            LpOutcome::Optimal => {}
        }

        let lp_obj = tableau.objective_value();
        if let Some((_, inc)) = &incumbent {
            if lp_obj > cutoff(*inc) {
                continue;
            }
        }
        let values = tableau.structural_values();
        match pick_branch_var(problem, &values, int_tol) {
            None => {
                let snapped = snap(problem, &values);
                let ok = problem
                    .check_solution(&snapped, feas_tol, int_tol)
                    .map(|v| v.is_empty())
                    .unwrap_or(false);
                if ok {
                    let obj = problem.objective_value(&snapped);
                    if incumbent.as_ref().map_or(true, |(_, inc)| obj < *inc) {
                        incumbent = Some((snapped, obj));
                    }
                }
            }
            Some((var, x)) => {
                let floor = x.floor();
                let down = OpenNode {
                    chain: Some(Rc::new(Decision {
                        parent: node.chain.clone(),
                        var,
                        lower: lo[var],
                        upper: floor,
                    })),
                    bound: lp_obj,
                    seq: seq_next(&mut seq),
                };
                let up_node = OpenNode {
                    chain: Some(Rc::new(Decision {
                        parent: node.chain.clone(),
                        var,
                        lower: floor + S::one(),
                        upper: up[var],
                    })),
                    bound: lp_obj,
                    seq: seq_next(&mut seq),
                };
                if incumbent.is_none() {
                    // stack: push the far side first so the rounded side pops first
                    if x - floor >= S::from_f64(0.5) {
                        dfs.push(down);
                        dfs.push(up_node);
                    } else {
                        dfs.push(up_node);
                        dfs.push(down);
                    }
                } else {
                    heap.push(down);
                    heap.push(up_node);
                }
            }
        }
    }

    if root_unbounded {
        return Ok(MipSolution {
            values: Vec::new(),
            objective_value: S::neg_infinity(),
            status: SolveStatus::Unbounded,
            best_bound: S::neg_infinity(),
        });
    }

    let open_bound = heap
        .iter()
        .map(|n| n.bound)
        .chain(dfs.iter().map(|n| n.bound))
        .fold(S::infinity(), |a, b| a.min(b));

    Ok(match (incumbent, limit_hit) {
        (Some((values, obj)), false) => MipSolution {
            values,
            objective_value: obj,
            status: SolveStatus::Optimal,
            best_bound: obj,
        },
        (Some((values, obj)), true) => MipSolution {
            best_bound: open_bound.min(obj),
            values,
            objective_value: obj,
            status: SolveStatus::LimitReached,
        },
        (None, true) => MipSolution {
            values: Vec::new(),
            objective_value: S::infinity(),
            status: SolveStatus::LimitReached,
            best_bound: open_bound,
        },
        (None, false) => MipSolution {
            values: Vec::new(),
            objective_value: S::infinity(),
            status: SolveStatus::Infeasible,
            best_bound: S::infinity(),
        },
    })
}

fn seq_next(seq: &mut u64) -> u64 {
    let v = *seq;
    *seq += 1;
    v
}
