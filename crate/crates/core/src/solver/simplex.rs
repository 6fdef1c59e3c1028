//! Bounded-variable primal simplex on a dense tableau.
//!
//! One slack column is appended per row, so the initial slack basis needs no
//! elimination. Primal infeasibility (from the cold start or from bound
//! changes applied between branch-and-bound nodes) is removed by a composite
//! phase 1 that minimizes the total bound violation of the basic variables;
//! phase 2 then minimizes the true objective, whose reduced-cost row is
//! maintained incrementally across both phases. Entering variables are picked
//! by the largest reduced cost, falling back to Bland's rule while a
//! degenerate-pivot streak persists.

use std::time::Instant;

use crate::mip::{CmpOp, MipProblem, Scalar};

/// Entries smaller than this are treated as structural zeros in pivot columns.
const DROP_TOL: f64 = 1e-9;
/// Row-update results below this snap to exact zero, so cancellation noise
/// never survives to masquerade as a pivot candidate.
const SNAP_TOL: f64 = 1e-9;
/// Reduced-cost tolerance for optimality.
const COST_TOL: f64 = 1e-9;
/// Steps at most this long count as degenerate.
const DEGEN_TOL: f64 = 1e-9;
/// Smallest acceptable pivot element. The repair models carry only small
/// integer data, where genuine tableau entries stay well above this.
const PIVOT_TOL: f64 = 1e-6;
/// Degenerate pivots in a row before switching to Bland's rule.
const DEGEN_STREAK_LIMIT: u32 = 40;
/// Hard per-solve pivot cap; hitting it signals a numerical failure.
const MAX_PIVOTS: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal,
    Infeasible,
    Unbounded,
    TimeLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
    /// Nonbasic free variable, sitting at value 0.
    Free,
}

#[derive(Debug)]
pub struct NumericalFailure(pub String);

enum Step {
    Done(LpOutcome),
    Progress,
}

enum Block {
    /// Entering variable reaches its opposite bound; no basis change.
    Flip,
    /// Basic variable in this row blocks; it leaves at the given bound.
    Row { row: usize, to_upper: bool, pivot: f64 },
}

pub struct Tableau<S> {
    m: usize,
    n: usize,
    n_structural: usize,
    /// m x n row-major coefficient tableau (B^-1 A for the current basis).
    t: Vec<S>,
    /// Reduced costs of the true objective, maintained across pivots.
    obj_row: Vec<S>,
    obj_val: S,
    pub lower: Vec<S>,
    pub upper: Vec<S>,
    basis: Vec<usize>,
    state: Vec<VarState>,
    basic_vals: Vec<S>,
    col_cache: Vec<(usize, S)>,
    degen_streak: u32,
    pub pivots: u64,
    feas_tol: S,
}

impl<S: Scalar> Tableau<S> {
    /// Build the LP relaxation tableau with the all-slack basis. Nonbasic
    /// structural variables start at the bound nearest to `hint` (their lower
    /// bound without one).
    pub fn from_problem(problem: &MipProblem<S>, feas_tol: f64, hint: Option<&[S]>) -> Self {
        let m = problem.num_constraints();
        let n_structural = problem.num_variables();
        let n = n_structural + m;
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        for v in problem.variables() {
            lower.push(v.lower);
            upper.push(v.upper);
        }
        for c in problem.constraints() {
            let (lo, up) = match c.op {
                CmpOp::Le => (S::zero(), S::infinity()),
                CmpOp::Ge => (S::neg_infinity(), S::zero()),
                CmpOp::Eq => (S::zero(), S::zero()),
            };
            lower.push(lo);
            upper.push(up);
        }

        let mut state = Vec::with_capacity(n);
        for j in 0..n_structural {
            let s = match hint.and_then(|h| h.get(j)) {
                Some(&v) => nearest_bound_state(lower[j], upper[j], v),
                None => default_state(lower[j], upper[j]),
            };
            state.push(s);
        }
        for i in 0..m {
            state.push(VarState::Basic(i));
        }

        let mut t = vec![S::zero(); m * n];
        for (i, c) in problem.constraints().iter().enumerate() {
            let row = &mut t[i * n..(i + 1) * n];
            for &(coeff, var) in &c.terms {
                row[var.0] = coeff;
            }
            row[n_structural + i] = S::one();
        }

        let nb_value = |j: usize| -> S {
            match state[j] {
                VarState::AtLower => lower[j],
                VarState::AtUpper => upper[j],
                _ => S::zero(),
            }
        };
        let mut obj_row = vec![S::zero(); n];
        let mut obj_val = S::zero();
        for &(coeff, var) in problem.objective() {
            obj_row[var.0] = coeff;
            obj_val += coeff * nb_value(var.0);
        }
        let mut basic_vals = Vec::with_capacity(m);
        for c in problem.constraints() {
            let mut act = S::zero();
            for &(coeff, var) in &c.terms {
                act += coeff * nb_value(var.0);
            }
            basic_vals.push(c.rhs - act);
        }

        Tableau {
            m,
            n,
            n_structural,
            t,
            obj_row,
            obj_val,
            lower,
            upper,
            basis: (n_structural..n).collect(),
            state,
            basic_vals,
            col_cache: Vec::new(),
            degen_streak: 0,
            pivots: 0,
            feas_tol: S::from_f64(feas_tol),
        }
    }

    fn value(&self, j: usize) -> S {
        match self.state[j] {
            VarState::Basic(r) => self.basic_vals[r],
            VarState::AtLower => self.lower[j],
            VarState::AtUpper => self.upper[j],
            VarState::Free => S::zero(),
        }
    }

    pub fn objective_value(&self) -> S {
        self.obj_val
    }

    /// Current values of the structural variables.
    pub fn structural_values(&self) -> Vec<S> {
        (0..self.n_structural).map(|j| self.value(j)).collect()
    }

    /// Update variable bounds in place (used between branch-and-bound
    /// nodes). Nonbasic variables glued to a moved bound are shifted and the
    /// basic values updated accordingly; newly violated basic variables are
    /// left for phase 1.
    pub fn sync_bounds(&mut self, new_lower: &[S], new_upper: &[S]) {
        for j in 0..self.n_structural {
            if self.lower[j] == new_lower[j] && self.upper[j] == new_upper[j] {
                continue;
            }
            let old_val = self.value(j);
            self.lower[j] = new_lower[j];
            self.upper[j] = new_upper[j];
            if let VarState::Basic(_) = self.state[j] {
                continue;
            }
            // keep nonbasic vars on a bound
            let new_val = match self.state[j] {
                VarState::AtLower if self.lower[j].is_finite() => self.lower[j],
                VarState::AtUpper if self.upper[j].is_finite() => self.upper[j],
                VarState::Free => S::zero(),
                _ => {
                    self.state[j] = default_state(self.lower[j], self.upper[j]);
                    match self.state[j] {
                        VarState::AtLower => self.lower[j],
                        VarState::AtUpper => self.upper[j],
                        _ => S::zero(),
                    }
                }
            };
            let delta = new_val - old_val;
            if delta != S::zero() {
                self.fill_col_cache(j);
                let cache = std::mem::take(&mut self.col_cache);
                for &(i, a) in &cache {
                    self.basic_vals[i] -= delta * a;
                }
                self.col_cache = cache;
                self.obj_val += delta * self.obj_row[j];
            }
        }
    }

    fn fill_col_cache(&mut self, q: usize) {
        self.col_cache.clear();
        let drop = S::from_f64(DROP_TOL);
        for i in 0..self.m {
            let a = self.t[i * self.n + q];
            if a.abs() > drop {
                self.col_cache.push((i, a));
            }
        }
    }

    fn violated_rows(&self) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for i in 0..self.m {
            let j = self.basis[i];
            let x = self.basic_vals[i];
            if x < self.lower[j] - self.feas_tol {
                out.push((i, false)); // below
            } else if x > self.upper[j] + self.feas_tol {
                out.push((i, true)); // above
            }
        }
        out
    }

    fn movable(&self, j: usize) -> bool {
        match self.state[j] {
            VarState::Basic(_) => false,
            VarState::Free => true,
            _ => self.lower[j] < self.upper[j],
        }
    }

    /// Pick an entering column and direction from a cost row: negative cost
    /// favors increasing, positive favors decreasing.
    fn choose_entering(&self, costs: &[S], bland: bool) -> Option<(usize, S)> {
        let tol = S::from_f64(COST_TOL);
        let mut best: Option<(usize, S, S)> = None;
        for j in 0..self.n {
            if !self.movable(j) {
                continue;
            }
            let c = costs[j];
            let dir = match self.state[j] {
                VarState::AtLower => {
                    if c < -tol {
                        S::one()
                    } else {
                        continue;
                    }
                }
                VarState::AtUpper => {
                    if c > tol {
                        -S::one()
                    } else {
                        continue;
                    }
                }
                VarState::Free => {
                    if c < -tol {
                        S::one()
                    } else if c > tol {
                        -S::one()
                    } else {
                        continue;
                    }
                }
                VarState::Basic(_) => continue,
            };
            if bland {
                return Some((j, dir));
            }
            let score = c.abs();
            if best.map_or(true, |(_, _, s)| score > s) {
                best = Some((j, dir, score));
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    /// Two-pass Harris ratio test over the cached entering column. Pass 1
    /// finds the largest step that keeps every basic variable within its
    /// bounds relaxed by `feas_tol`; pass 2 picks, among rows whose strict
    /// step fits under that, the one with the largest pivot element. This
    /// keeps degenerate rows with negligible coefficients from ever being
    /// chosen as pivots. In phase 1, violated basic variables block when
    /// they reach the bound they currently violate (turning feasible).
    fn ratio_test(&self, q: usize, dir: S, phase1: bool) -> Option<(S, Block)> {
        let own_gap = match self.state[q] {
            VarState::AtLower | VarState::AtUpper => self.upper[q] - self.lower[q],
            VarState::Free => {
                if dir > S::zero() {
                    self.upper[q]
                } else {
                    -self.lower[q]
                }
            }
            VarState::Basic(_) => unreachable!("entering variable must be nonbasic"),
        };

        // distance from the basic value to the bound that blocks in this
        // direction, or None if nothing blocks
        let gap_for = |i: usize, a: S| -> Option<(S, S, bool)> {
            let bj = self.basis[i];
            let x = self.basic_vals[i];
            let (lo, up) = (self.lower[bj], self.upper[bj]);
            let rate = -(dir * a); // dx_basic/dstep
            let ztol = S::from_f64(DROP_TOL);
            if phase1 && x < lo - self.feas_tol {
                if rate > ztol {
                    return Some((lo - x, rate, false));
                }
                return None;
            }
            if phase1 && x > up + self.feas_tol {
                if rate < -ztol {
                    return Some((x - up, -rate, true));
                }
                return None;
            }
            if rate < -ztol && lo.is_finite() {
                return Some(((x - lo).max(S::zero()), -rate, false));
            }
            if rate > ztol && up.is_finite() {
                return Some(((up - x).max(S::zero()), rate, true));
            }
            None
        };

        // pass 1: max step under relaxed bounds
        let mut t_relaxed = own_gap;
        for &(i, a) in &self.col_cache {
            if let Some((gap, rate, _)) = gap_for(i, a) {
                let t = (gap + self.feas_tol) / rate;
                if t < t_relaxed {
                    t_relaxed = t;
                }
            }
        }
        if !t_relaxed.is_finite() {
            return None; // unbounded direction
        }

        // pass 2: best pivot among rows blocking within the relaxed step
        let mut best: Option<(S, Block)> = None;
        let mut best_pivot = S::zero();
        for &(i, a) in &self.col_cache {
            if let Some((gap, rate, to_upper)) = gap_for(i, a) {
                let t = gap / rate;
                if t <= t_relaxed && a.abs() > best_pivot {
                    best_pivot = a.abs();
                    best = Some((
                        t,
                        Block::Row {
                            row: i,
                            to_upper,
                            pivot: a.to_f64(),
                        },
                    ));
                }
            }
        }
        match best {
            Some((t, block)) if t <= own_gap => Some((t, block)),
            _ => {
                if own_gap.is_finite() {
                    Some((own_gap, Block::Flip))
                } else {
                    None
                }
            }
        }
    }

    fn apply_flip(&mut self, q: usize, dir: S, step: S) {
        let delta = dir * step;
        let cache = std::mem::take(&mut self.col_cache);
        for &(i, a) in &cache {
            self.basic_vals[i] -= delta * a;
        }
        self.col_cache = cache;
        self.obj_val += delta * self.obj_row[q];
        self.state[q] = match self.state[q] {
            VarState::AtLower => VarState::AtUpper,
            VarState::AtUpper => VarState::AtLower,
            other => other,
        };
    }

    fn apply_pivot(&mut self, q: usize, dir: S, step: S, row: usize, to_upper: bool) {
        let delta = dir * step;
        let entering_new = self.value(q) + delta;
        let cache = std::mem::take(&mut self.col_cache);
        for &(i, a) in &cache {
            self.basic_vals[i] -= delta * a;
        }
        self.obj_val += delta * self.obj_row[q];

        let leaving = self.basis[row];
        self.state[leaving] = if to_upper {
            VarState::AtUpper
        } else {
            VarState::AtLower
        };

        // eliminate the entering column from all other rows
        let n = self.n;
        let pivot = self.t[row * n + q];
        let inv = S::one() / pivot;
        {
            let prow = &mut self.t[row * n..(row + 1) * n];
            for v in prow.iter_mut() {
                *v *= inv;
            }
            prow[q] = S::one();
        }
        // split_at_mut dance is avoided by copying the pivot row once
        let prow: Vec<S> = self.t[row * n..(row + 1) * n].to_vec();
        let snap = S::from_f64(SNAP_TOL);
        for &(i, a) in &cache {
            if i == row {
                continue;
            }
            let r = &mut self.t[i * n..(i + 1) * n];
            for (v, &p) in r.iter_mut().zip(prow.iter()) {
                let x = *v - a * p;
                *v = if x.abs() < snap { S::zero() } else { x };
            }
            r[q] = S::zero();
        }
        let oc = self.obj_row[q];
        if oc != S::zero() {
            for (v, &p) in self.obj_row.iter_mut().zip(prow.iter()) {
                let x = *v - oc * p;
                *v = if x.abs() < snap { S::zero() } else { x };
            }
        }
        self.obj_row[q] = S::zero();

        self.basis[row] = q;
        self.state[q] = VarState::Basic(row);
        self.basic_vals[row] = entering_new;
        self.col_cache = cache;
        self.pivots += 1;
        if step.abs() <= S::from_f64(DEGEN_TOL) {
            self.degen_streak += 1;
        } else {
            self.degen_streak = 0;
        }
    }

    fn phase1_costs(&self, violated: &[(usize, bool)]) -> Vec<S> {
        let mut d = vec![S::zero(); self.n];
        for &(i, above) in violated {
            let row = &self.t[i * self.n..(i + 1) * self.n];
            if above {
                for (dj, &a) in d.iter_mut().zip(row.iter()) {
                    *dj -= a;
                }
            } else {
                for (dj, &a) in d.iter_mut().zip(row.iter()) {
                    *dj += a;
                }
            }
        }
        d
    }

    /// One pivot (or bound flip). `p1_costs` selects phase 1 with the given
    /// violation-gradient costs; `None` runs phase 2 on the objective row.
    fn step(&mut self, p1_costs: Option<&[S]>) -> Result<Step, NumericalFailure> {
        let phase1 = p1_costs.is_some();
        let bland = self.degen_streak >= DEGEN_STREAK_LIMIT;
        let mut banned: Vec<usize> = Vec::new();
        loop {
            let candidate = {
                let base = p1_costs.unwrap_or(&self.obj_row);
                if banned.is_empty() {
                    self.choose_entering(base, bland)
                } else {
                    let mut masked = base.to_vec();
                    for &b in &banned {
                        masked[b] = S::zero();
                    }
                    self.choose_entering(&masked, bland)
                }
            };
            let (q, dir) = match candidate {
                Some(c) => c,
                None => {
                    return Ok(Step::Done(if phase1 {
                        LpOutcome::Infeasible
                    } else {
                        LpOutcome::Optimal
                    }))
                }
            };
            self.fill_col_cache(q);
            match self.ratio_test(q, dir, phase1) {
                None => {
                    if phase1 {
                        // every improving phase-1 direction is blocked by the
                        // violated row it repairs, so a ray here means the
                        // costs and the column disagree numerically
                        return Err(NumericalFailure(
                            "unbounded phase-1 direction".to_string(),
                        ));
                    }
                    return Ok(Step::Done(LpOutcome::Unbounded));
                }
                Some((step, Block::Flip)) => {
                    self.apply_flip(q, dir, step);
                    if step.abs() <= S::from_f64(DEGEN_TOL) {
                        self.degen_streak += 1;
                    } else {
                        self.degen_streak = 0;
                    }
                    return Ok(Step::Progress);
                }
                Some((step, Block::Row { row, to_upper, pivot })) => {
                    if pivot.abs() < PIVOT_TOL {
                        if banned.len() < 64 {
                            banned.push(q);
                            continue;
                        }
                        return Err(NumericalFailure(format!(
                            "no usable pivot (best {pivot:e})"
                        )));
                    }
                    self.apply_pivot(q, dir, step, row, to_upper);
                    return Ok(Step::Progress);
                }
            }
        }
    }

    /// Run phase 1 (restore feasibility) then phase 2 (optimize) from the
    /// current basis and bounds.
    pub fn solve(&mut self, deadline: Option<Instant>) -> Result<LpOutcome, NumericalFailure> {
        let mut iters: u64 = 0;
        loop {
            iters += 1;
            if iters > MAX_PIVOTS {
                return Err(NumericalFailure("pivot limit exceeded".to_string()));
            }
            if iters % 256 == 0 {
                if let Some(d) = deadline {
                    if Instant::now() >= d {
                        return Ok(LpOutcome::TimeLimit);
                    }
                }
            }
            let violated = self.violated_rows();
            let outcome = if violated.is_empty() {
                self.step(None)?
            } else {
                let costs = self.phase1_costs(&violated);
                self.step(Some(&costs))?
            };
            match outcome {
                Step::Progress => continue,
                Step::Done(o) => return Ok(o),
            }
        }
    }
}

fn default_state<S: Scalar>(lo: S, up: S) -> VarState {
    if lo.is_finite() {
        VarState::AtLower
    } else if up.is_finite() {
        VarState::AtUpper
    } else {
        VarState::Free
    }
}

fn nearest_bound_state<S: Scalar>(lo: S, up: S, v: S) -> VarState {
    match (lo.is_finite(), up.is_finite()) {
        (true, true) => {
            if (v - lo).abs() <= (up - v).abs() {
                VarState::AtLower
            } else {
                VarState::AtUpper
            }
        }
        (true, false) => VarState::AtLower,
        (false, true) => VarState::AtUpper,
        (false, false) => VarState::Free,
    }
}
