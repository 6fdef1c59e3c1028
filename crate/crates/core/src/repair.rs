//! Compile a level and its game config into the repair MIP, solve it, and
//! decode the solution into a repaired level plus an edit report.
//!
//! The MIP has one binary per (object type, cell) under a per-cell uniqueness
//! constraint, one reachability flow network whose capacities are switched by
//! the source/blocking binaries (big-M = cell count), and one edit-distance
//! flow network per object type: cells holding the type in the input supply
//! one unit each, cells holding it in the output demand at most one, and a
//! waste variable absorbs deletions. The objective charges `delete_cost` per
//! wasted unit and `move_cost` per edge of edit flow; additions are free
//! because an addition is always paired with a deletion or a count change.
//! Blocking stops flow *leaving* a blocked cell, so a blocked target (the
//! Zelda door) can still absorb its demand.

use std::collections::VecDeque;

use thiserror::Error;

use crate::flows::{self, PlayabilityViolation, TransportInstance};
use crate::level::{GameConfig, Level, ObjectId, SpaceGraph};
use crate::mip::{CmpOp, MipError, MipProblem, MipSolution, SolveStatus, VarId, VarKind};
use crate::solver::{SolveError, Solver, SolverOptions};

/// One object relocation in an edit script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveEdit {
    pub object: ObjectId,
    pub from: usize,
    pub to: usize,
    /// Path length in tiles; the move costs `move_cost * path_cost`.
    pub path_cost: i64,
}

/// Decoded per-type edit script between an input and a repaired level.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditReport {
    pub moves: Vec<MoveEdit>,
    pub deletions: Vec<(ObjectId, usize)>,
    pub additions: Vec<(ObjectId, usize)>,
    pub total_cost: i64,
}

impl EditReport {
    pub fn is_empty(&self) -> bool {
        self.moves.is_empty() && self.deletions.is_empty() && self.additions.is_empty()
    }

    /// Line-oriented text form.
    pub fn render(&self, config: &GameConfig, cols: usize) -> String {
        let cell = |v: usize| format!("({},{})", v / cols, v % cols);
        let mut out = format!("total_cost {}\n", self.total_cost);
        for m in &self.moves {
            out.push_str(&format!(
                "move {} {} -> {} cost {}\n",
                config.object(m.object).name,
                cell(m.from),
                cell(m.to),
                m.path_cost
            ));
        }
        for &(t, v) in &self.deletions {
            out.push_str(&format!("delete {} {}\n", config.object(t).name, cell(v)));
        }
        for &(t, v) in &self.additions {
            out.push_str(&format!("add {} {}\n", config.object(t).name, cell(v)));
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum RepairError {
    #[error("level does not fit config: {0}")]
    ConfigMismatch(String),
    #[error("grid too small: {needed} counted objects but {interior} interior cells")]
    GridTooSmall { needed: usize, interior: usize },
    #[error("cell {node} has no unique object assignment (solver bug)")]
    NonUniqueAssignment { node: usize },
    #[error("repair MIP is infeasible for this config")]
    Infeasible,
    #[error("solver hit its node/time limit before proving optimality")]
    LimitReached,
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("repaired level fails validation: {0:?}")]
    UnplayableResult(Vec<PlayabilityViolation>),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<MipError> for RepairError {
    fn from(e: MipError) -> Self {
        RepairError::Internal(e.to_string())
    }
}

/// Variable indexing for one compiled problem: object binaries first, then
/// the reachability network, then one edit network per type.
#[derive(Debug, Clone, Copy)]
struct Layout {
    n_types: usize,
    n_nodes: usize,
    n_edges: usize,
}

impl Layout {
    fn o_var(&self, t: usize, v: usize) -> VarId {
        VarId(t * self.n_nodes + v)
    }
    fn reach_fs(&self, v: usize) -> VarId {
        VarId(self.n_types * self.n_nodes + v)
    }
    fn reach_ft(&self, v: usize) -> VarId {
        VarId(self.n_types * self.n_nodes + self.n_nodes + v)
    }
    fn reach_edge(&self, e: usize) -> VarId {
        VarId(self.n_types * self.n_nodes + 2 * self.n_nodes + e)
    }
    fn edit_base(&self) -> usize {
        self.n_types * self.n_nodes + 2 * self.n_nodes + self.n_edges
    }
    fn edit_stride(&self) -> usize {
        2 * self.n_nodes + self.n_edges
    }
    fn edit_ft(&self, t: usize, v: usize) -> VarId {
        VarId(self.edit_base() + t * self.edit_stride() + v)
    }
    fn edit_waste(&self, t: usize, v: usize) -> VarId {
        VarId(self.edit_base() + t * self.edit_stride() + self.n_nodes + v)
    }
    fn edit_edge(&self, t: usize, e: usize) -> VarId {
        VarId(self.edit_base() + t * self.edit_stride() + 2 * self.n_nodes + e)
    }
}

/// The compiled repair problem plus the variable layout needed to decode.
pub struct RepairMip {
    pub problem: MipProblem<f64>,
    pub graph: SpaceGraph,
    pub input: Level,
    layout: Layout,
}

fn indicator(input: &Level, t: usize, v: usize) -> f64 {
    if input.at(v) as usize == t {
        1.0
    } else {
        0.0
    }
}

impl RepairMip {
    fn o_var(&self, t: usize, v: usize) -> VarId {
        self.layout.o_var(t, v)
    }
    fn edit_ft(&self, t: usize, v: usize) -> VarId {
        self.layout.edit_ft(t, v)
    }
    fn edit_waste(&self, t: usize, v: usize) -> VarId {
        self.layout.edit_waste(t, v)
    }
    fn edit_edge(&self, t: usize, e: usize) -> VarId {
        self.layout.edit_edge(t, e)
    }
    fn reach_fs(&self, v: usize) -> VarId {
        self.layout.reach_fs(v)
    }
    fn reach_ft(&self, v: usize) -> VarId {
        self.layout.reach_ft(v)
    }
    fn reach_edge(&self, e: usize) -> VarId {
        self.layout.reach_edge(e)
    }

    /// 1 if the input level holds object `t` at node `v`.
    fn input_indicator(&self, t: usize, v: usize) -> f64 {
        indicator(&self.input, t, v)
    }

    /// (variables, constraints).
    pub fn counts(&self) -> (usize, usize) {
        (self.problem.num_variables(), self.problem.num_constraints())
    }

    /// Replace the edit-distance objective with plain Hamming distance
    /// (comparison variant: minimize the number of changed cells). The
    /// constraint set is untouched.
    pub fn set_hamming_objective(&mut self) -> Result<(), MipError> {
        let mut terms = Vec::new();
        for t in 0..self.layout.n_types {
            for v in 0..self.layout.n_nodes {
                if self.input_indicator(t, v) == 1.0 {
                    terms.push((-1.0, self.o_var(t, v)));
                }
            }
        }
        self.problem.set_objective(terms)
    }

    /// Hamming distance implied by a solution of the Hamming variant.
    pub fn hamming_of_objective(&self, objective_value: f64) -> i64 {
        self.layout.n_nodes as i64 + objective_value.round() as i64
    }
}

/// Build the full repair MIP for `input` under `config`.
pub fn compile_repair_mip(input: &Level, config: &GameConfig) -> Result<RepairMip, RepairError> {
    input
        .check_alphabet(config)
        .map_err(|e| RepairError::ConfigMismatch(e.to_string()))?;
    let graph = SpaceGraph::build(input.rows(), input.cols(), config.wraparound);
    let layout = Layout {
        n_types: config.alphabet.len(),
        n_nodes: graph.node_count(),
        n_edges: graph.edge_count(),
    };
    let (n_nodes, n_edges, n_types) = (layout.n_nodes, layout.n_edges, layout.n_types);
    let big_m = n_nodes as f64;

    let mut problem = MipProblem::new(format!(
        "repair_{}_{}x{}",
        config.name,
        input.rows(),
        input.cols()
    ));

    for t in &config.alphabet {
        for v in 0..n_nodes {
            problem.add_variable(format!("o_{}_v{v}", t.name), VarKind::Binary, 0.0, 1.0);
        }
    }
    for v in 0..n_nodes {
        problem.add_variable(format!("fs_v{v}"), VarKind::Integer, 0.0, big_m);
    }
    for v in 0..n_nodes {
        problem.add_variable(format!("ft_v{v}"), VarKind::Binary, 0.0, 1.0);
    }
    for &(u, v) in &graph.directed_edges {
        problem.add_variable(format!("f_v{u}_v{v}"), VarKind::Integer, 0.0, big_m);
    }
    for t in &config.alphabet {
        for v in 0..n_nodes {
            problem.add_variable(format!("eft_{}_v{v}", t.name), VarKind::Binary, 0.0, 1.0);
        }
        for v in 0..n_nodes {
            problem.add_variable(format!("er_{}_v{v}", t.name), VarKind::Integer, 0.0, big_m);
        }
        for &(u, v) in &graph.directed_edges {
            problem.add_variable(
                format!("ef_{}_v{u}_v{v}", t.name),
                VarKind::Integer,
                0.0,
                big_m,
            );
        }
    }

    // node uniqueness: every cell holds exactly one object
    for v in 0..n_nodes {
        problem.add_constraint(
            (0..n_types).map(|t| (1.0, layout.o_var(t, v))),
            CmpOp::Eq,
            1.0,
            format!("eq1_uniqueness_v{v}"),
        )?;
    }
    // supply capacity: only source cells may emit reachability flow
    for v in 0..n_nodes {
        let mut terms = vec![(1.0, layout.reach_fs(v))];
        for &s in &config.source_set {
            terms.push((-big_m, layout.o_var(s as usize, v)));
        }
        problem.add_constraint(terms, CmpOp::Le, 0.0, format!("eq2_source_cap_v{v}"))?;
    }
    // every target cell generates one unit of demand
    for v in 0..n_nodes {
        let mut terms: Vec<(f64, VarId)> = config
            .target_set
            .iter()
            .map(|&t| (1.0, layout.o_var(t as usize, v)))
            .collect();
        terms.push((-1.0, layout.reach_ft(v)));
        problem.add_constraint(terms, CmpOp::Eq, 0.0, format!("eq3_target_demand_v{v}"))?;
    }
    // flow conservation: supply + inflow = demand + outflow
    for v in 0..n_nodes {
        let mut terms = vec![(1.0, layout.reach_fs(v)), (-1.0, layout.reach_ft(v))];
        for &e in graph.in_edges(v) {
            terms.push((1.0, layout.reach_edge(e)));
        }
        for &e in graph.out_edges(v) {
            terms.push((-1.0, layout.reach_edge(e)));
        }
        problem.add_constraint(terms, CmpOp::Eq, 0.0, format!("eq4_flow_conservation_v{v}"))?;
    }
    // blocking: flow may not leave a cell holding a blocking object
    for (e, &(v, u)) in graph.directed_edges.iter().enumerate() {
        let mut terms = vec![(1.0, layout.reach_edge(e))];
        for &b in &config.blocking_set {
            terms.push((big_m, layout.o_var(b as usize, v)));
        }
        problem.add_constraint(terms, CmpOp::Le, big_m, format!("eq5_blocking_v{v}_v{u}"))?;
    }
    // one edit network per object type
    for (t, obj) in config.alphabet.iter().enumerate() {
        for v in 0..n_nodes {
            let mut terms = vec![
                (-1.0, layout.edit_waste(t, v)),
                (-1.0, layout.edit_ft(t, v)),
            ];
            for &e in graph.in_edges(v) {
                terms.push((1.0, layout.edit_edge(t, e)));
            }
            for &e in graph.out_edges(v) {
                terms.push((-1.0, layout.edit_edge(t, e)));
            }
            problem.add_constraint(
                terms,
                CmpOp::Eq,
                -indicator(input, t, v),
                format!("eq8_edit_conservation_{}_v{v}", obj.name),
            )?;
        }
        for v in 0..n_nodes {
            problem.add_constraint(
                [(1.0, layout.edit_ft(t, v)), (-1.0, layout.o_var(t, v))],
                CmpOp::Le,
                0.0,
                format!("eq9_edit_demand_{}_v{v}", obj.name),
            )?;
        }
        let supply: f64 = (0..n_nodes).map(|v| indicator(input, t, v)).sum();
        let mut terms = Vec::with_capacity(2 * n_nodes);
        for v in 0..n_nodes {
            terms.push((1.0, layout.edit_ft(t, v)));
            terms.push((1.0, layout.edit_waste(t, v)));
        }
        problem.add_constraint(
            terms,
            CmpOp::Eq,
            supply,
            format!("eq10_edit_balance_{}", obj.name),
        )?;
    }
    // domain constraints
    for &(t, count) in &config.count_constraints {
        problem.add_constraint(
            (0..n_nodes).map(|v| (1.0, layout.o_var(t as usize, v))),
            CmpOp::Eq,
            count as f64,
            format!("count_{}", config.object(t).name),
        )?;
    }
    for (i, dc) in config.density_constraints.iter().enumerate() {
        // count <= (num/den) * available, scaled to integer coefficients;
        // available space is the non-border-object cells
        let mut terms = Vec::new();
        for &t in &dc.types {
            for v in 0..n_nodes {
                terms.push((dc.den as f64, layout.o_var(t as usize, v)));
            }
        }
        if let Some(b) = config.border_object {
            for v in 0..n_nodes {
                terms.push((dc.num as f64, layout.o_var(b as usize, v)));
            }
        }
        let rhs = dc.num as f64 * n_nodes as f64;
        problem.add_constraint(terms, CmpOp::Le, rhs, format!("density_{i}"))?;
    }
    if let Some(b) = config.border_object {
        let perimeter: Vec<usize> = (0..n_nodes).filter(|&v| input.is_perimeter(v)).collect();
        problem.add_constraint(
            perimeter.iter().map(|&v| (1.0, layout.o_var(b as usize, v))),
            CmpOp::Eq,
            perimeter.len() as f64,
            format!("border_{}", config.object(b).name),
        )?;
    }

    // edit-distance objective: deletions plus per-tile moves
    let mut objective = Vec::new();
    for t in 0..n_types {
        for v in 0..n_nodes {
            objective.push((config.delete_cost as f64, layout.edit_waste(t, v)));
        }
        for e in 0..n_edges {
            objective.push((config.move_cost as f64, layout.edit_edge(t, e)));
        }
    }
    problem.set_objective(objective)?;

    let mut mip = RepairMip {
        problem,
        graph,
        input: input.clone(),
        layout,
    };
    if config.no_dead_ends {
        add_no_dead_end_constraints(&mut mip, config)?;
    }
    Ok(mip)
}

/// Require every empty-space cell to have at least two passable neighbors:
/// `sum_u passable(u) >= 2 * empty_v`, linearized over the blocking binaries.
pub fn add_no_dead_end_constraints(
    mip: &mut RepairMip,
    config: &GameConfig,
) -> Result<(), RepairError> {
    let empty = config.empty_object as usize;
    for v in 0..mip.layout.n_nodes {
        let neighbors: Vec<usize> = mip.graph.neighbors(v).collect();
        let degree = neighbors.len() as f64;
        let mut terms = vec![(2.0, mip.o_var(empty, v))];
        for u in neighbors {
            for &b in &config.blocking_set {
                terms.push((1.0, mip.o_var(b as usize, u)));
            }
        }
        mip.problem
            .add_constraint(terms, CmpOp::Le, degree, format!("nodeadend_v{v}"))?;
    }
    Ok(())
}

/// Decode a solved repair MIP: the output level from the uniqueness binaries
/// and the edit script from a path decomposition of the edit flows.
pub fn decode(
    mip: &RepairMip,
    solution: &MipSolution<f64>,
    config: &GameConfig,
) -> Result<(Level, EditReport), RepairError> {
    let vals = &solution.values;
    let at = |id: VarId| vals[id.0];

    let mut cells = Vec::with_capacity(mip.layout.n_nodes);
    for v in 0..mip.layout.n_nodes {
        let mut chosen = None;
        for t in 0..mip.layout.n_types {
            if at(mip.o_var(t, v)) > 0.5 {
                if chosen.is_some() {
                    return Err(RepairError::NonUniqueAssignment { node: v });
                }
                chosen = Some(t as ObjectId);
            }
        }
        match chosen {
            Some(t) => cells.push(t),
            None => return Err(RepairError::NonUniqueAssignment { node: v }),
        }
    }
    let output = Level::from_cells(mip.input.rows(), mip.input.cols(), cells);

    let mut report = EditReport::default();
    let mut edge_cost_units = 0i64;
    let mut waste_units = 0i64;
    for t in 0..mip.layout.n_types {
        let mut flow: Vec<i64> = (0..mip.layout.n_edges)
            .map(|e| at(mip.edit_edge(t, e)).round() as i64)
            .collect();
        let mut ft: Vec<i64> = (0..mip.layout.n_nodes)
            .map(|v| at(mip.edit_ft(t, v)).round() as i64)
            .collect();
        let mut waste: Vec<i64> = (0..mip.layout.n_nodes)
            .map(|v| at(mip.edit_waste(t, v)).round() as i64)
            .collect();
        edge_cost_units += flow.iter().sum::<i64>();
        waste_units += waste.iter().sum::<i64>();

        let step_budget: i64 = flow.iter().sum::<i64>() + mip.layout.n_nodes as i64;
        for s in 0..mip.layout.n_nodes {
            if mip.input_indicator(t, s) != 1.0 {
                continue;
            }
            // walk this unit of supply along positive flow until absorbed
            let mut cur = s;
            let mut steps = 0i64;
            loop {
                if ft[cur] > 0 {
                    ft[cur] -= 1;
                    if cur != s {
                        report.moves.push(MoveEdit {
                            object: t as ObjectId,
                            from: s,
                            to: cur,
                            path_cost: steps,
                        });
                    }
                    break;
                }
                if waste[cur] > 0 {
                    waste[cur] -= 1;
                    report.deletions.push((t as ObjectId, s));
                    break;
                }
                let next = mip
                    .graph
                    .out_edges(cur)
                    .iter()
                    .find(|&&e| flow[e] > 0)
                    .copied();
                match next {
                    Some(e) => {
                        flow[e] -= 1;
                        cur = mip.graph.directed_edges[e].1;
                        steps += 1;
                    }
                    None => {
                        return Err(RepairError::Internal(format!(
                            "edit flow for type {t} strands a unit at node {cur}"
                        )))
                    }
                }
                if steps > step_budget {
                    return Err(RepairError::Internal(
                        "cyclic edit flow in solution".to_string(),
                    ));
                }
            }
        }
        for v in 0..mip.layout.n_nodes {
            if output.at(v) as usize == t
                && mip.input_indicator(t, v) == 0.0
                && at(mip.edit_ft(t, v)).round() as i64 == 0
            {
                report.additions.push((t as ObjectId, v));
            }
        }
    }
    report.total_cost =
        config.move_cost as i64 * edge_cost_units + config.delete_cost as i64 * waste_units;
    if (report.total_cost as f64 - solution.objective_value).abs() > 0.5 {
        return Err(RepairError::Internal(format!(
            "decoded cost {} disagrees with objective {}",
            report.total_cost, solution.objective_value
        )));
    }
    Ok((output, report))
}

/// Deterministic playable level for the config's grid size: border fill (if
/// configured), the counted objects in the first interior cells, empty space
/// elsewhere. Serves as the feasibility witness seeding the solver.
pub fn canonical_playable(config: &GameConfig) -> Result<Level, RepairError> {
    canonical_playable_sized(config, config.rows, config.cols)
}

pub fn canonical_playable_sized(
    config: &GameConfig,
    rows: usize,
    cols: usize,
) -> Result<Level, RepairError> {
    let mut level = Level::from_cells(rows, cols, vec![config.empty_object; rows * cols]);
    let mut interior: Vec<usize> = Vec::new();
    for v in 0..rows * cols {
        if let Some(b) = config.border_object {
            if level.is_perimeter(v) {
                level.set(v / cols, v % cols, b);
                continue;
            }
        }
        interior.push(v);
    }
    let needed: usize = config
        .count_constraints
        .iter()
        .map(|&(_, n)| n as usize)
        .sum();
    if interior.len() < needed {
        return Err(RepairError::GridTooSmall {
            needed,
            interior: interior.len(),
        });
    }
    let mut slots = interior.into_iter();
    for &(t, count) in &config.count_constraints {
        for _ in 0..count {
            let v = slots.next().expect("checked above");
            level.set(v / cols, v % cols, t);
        }
    }
    let violations = flows::validate_playable(&level, config);
    if !violations.is_empty() {
        return Err(RepairError::Internal(format!(
            "canonical level fails validation: {violations:?}"
        )));
    }
    Ok(level)
}

/// Reachability witness flows for a playable level: for every target cell,
/// route one unit from the nearest source along its BFS tree path.
fn reach_witness(
    level: &Level,
    config: &GameConfig,
    graph: &SpaceGraph,
) -> Option<(Vec<i64>, Vec<i64>)> {
    let blocking = config.mask(&config.blocking_set);
    let source = config.mask(&config.source_set);
    let target = config.mask(&config.target_set);
    let n = level.node_count();
    let mut parent_edge: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if source[level.at(v) as usize] {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        if blocking[level.at(v) as usize] {
            continue;
        }
        for &e in graph.out_edges(v) {
            let u = graph.directed_edges[e].1;
            if !seen[u] {
                seen[u] = true;
                parent_edge[u] = Some(e);
                queue.push_back(u);
            }
        }
    }
    let mut fs = vec![0i64; n];
    let mut flow = vec![0i64; graph.edge_count()];
    for v in 0..n {
        if !target[level.at(v) as usize] {
            continue;
        }
        if !seen[v] {
            return None;
        }
        let mut cur = v;
        while let Some(e) = parent_edge[cur] {
            flow[e] += 1;
            cur = graph.directed_edges[e].0;
        }
        fs[cur] += 1;
    }
    Some((fs, flow))
}

/// Walk a shortest path from `from` to `to`, yielding edge ids. The walk
/// greedily takes the first neighbor that reduces the wrap-aware distance.
fn shortest_path_edges(graph: &SpaceGraph, from: usize, to: usize) -> Vec<usize> {
    let mut edges = Vec::new();
    let mut cur = from;
    while cur != to {
        let d = graph.distance(cur, to);
        let step = graph
            .out_edges(cur)
            .iter()
            .copied()
            .find(|&e| graph.distance(graph.directed_edges[e].1, to) + 1 == d)
            .expect("grid distance always decreases toward the goal");
        edges.push(step);
        cur = graph.directed_edges[step].1;
    }
    edges
}

/// Full assignment (every MIP variable) representing `output` with its
/// witness flows and the cheapest per-type transport from `input`.
fn witness_assignment(
    mip: &RepairMip,
    config: &GameConfig,
    output: &Level,
) -> Option<Vec<f64>> {
    let n = mip.layout.n_nodes;
    let mut vals = vec![0.0; mip.problem.num_variables()];
    for v in 0..n {
        vals[mip.o_var(output.at(v) as usize, v).0] = 1.0;
    }
    let target = config.mask(&config.target_set);
    for v in 0..n {
        if target[output.at(v) as usize] {
            vals[mip.reach_ft(v).0] = 1.0;
        }
    }
    let (fs, flow) = reach_witness(output, config, &mip.graph)?;
    for v in 0..n {
        vals[mip.reach_fs(v).0] = fs[v] as f64;
    }
    for (e, &f) in flow.iter().enumerate() {
        vals[mip.reach_edge(e).0] = f as f64;
    }
    for (t, _) in config.alphabet.iter().enumerate() {
        let supplies = mip.input.positions_of(t as ObjectId);
        let demands = output.positions_of(t as ObjectId);
        let instance = TransportInstance {
            object: t as ObjectId,
            supplies,
            demands,
            move_cost: config.move_cost as i64,
            delete_cost: config.delete_cost as i64,
        };
        let (_, moves, deletions, _) = instance.solve(&mip.graph);
        for (from, to) in moves {
            vals[mip.edit_ft(t, to).0] = 1.0;
            for e in shortest_path_edges(&mip.graph, from, to) {
                vals[mip.edit_edge(t, e).0] += 1.0;
            }
        }
        for cell in deletions {
            vals[mip.edit_waste(t, cell).0] += 1.0;
        }
    }
    Some(vals)
}

/// Crash-start point: the input level itself, with every edit network
/// matching its supply in place and reachability demands switched on.
fn start_point(mip: &RepairMip, config: &GameConfig) -> Vec<f64> {
    let n = mip.layout.n_nodes;
    let mut vals = vec![0.0; mip.problem.num_variables()];
    let target = config.mask(&config.target_set);
    for v in 0..n {
        let t = mip.input.at(v) as usize;
        vals[mip.o_var(t, v).0] = 1.0;
        vals[mip.edit_ft(t, v).0] = 1.0;
        if target[t] {
            vals[mip.reach_ft(v).0] = 1.0;
        }
    }
    vals
}

/// Repair `input` to the nearest playable level under `config`.
pub fn repair(
    input: &Level,
    config: &GameConfig,
    options: &SolverOptions,
) -> Result<(Level, EditReport), RepairError> {
    let mip = compile_repair_mip(input, config)?;

    let witness_level = if flows::validate_playable(input, config).is_empty() {
        Some(input.clone())
    } else {
        canonical_playable_sized(config, input.rows(), input.cols()).ok()
    };
    let incumbent = witness_level.and_then(|w| witness_assignment(&mip, config, &w));

    let mut solver =
        Solver::new(&mip.problem, options.clone()).with_start_point(start_point(&mip, config));
    if let Some(seed) = incumbent {
        solver = solver.with_incumbent(seed);
    }
    let solution = solver.solve()?;
    match solution.status {
        SolveStatus::Optimal => {}
        SolveStatus::Infeasible => return Err(RepairError::Infeasible),
        SolveStatus::LimitReached => return Err(RepairError::LimitReached),
        SolveStatus::Unbounded => {
            return Err(RepairError::Internal(
                "repair objective cannot be unbounded".to_string(),
            ))
        }
    }
    let (output, report) = decode(&mip, &solution, config)?;
    let violations = flows::validate_playable(&output, config);
    if !violations.is_empty() {
        return Err(RepairError::UnplayableResult(violations));
    }
    Ok((output, report))
}

/// Repair many levels in parallel; results come back in input order.
pub fn repair_batch(
    inputs: &[Level],
    config: &GameConfig,
    options: &SolverOptions,
    jobs: usize,
) -> Vec<Result<(Level, EditReport), RepairError>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build();
    match pool {
        Ok(pool) => pool.install(|| {
            inputs
                .par_iter()
                .map(|l| repair(l, config, options))
                .collect()
        }),
        Err(_) => inputs.iter().map(|l| repair(l, config, options)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;
    use crate::flows::edit_distance;

    fn zelda() -> GameConfig {
        GameConfig::parse(assets::ZELDA_CONFIG).unwrap()
    }

    fn human(i: usize) -> Level {
        Level::parse(assets::zelda_corpus()[i].1, &zelda()).unwrap()
    }

    #[test]
    fn zelda_counts_match_reference_model() {
        let cfg = zelda();
        let mip = compile_repair_mip(&human(0), &cfg).unwrap();
        assert_eq!(mip.counts(), (6858, 2777));
    }

    #[test]
    fn degenerate_single_cell_model() {
        let text = "name = unit\nrows = 1\ncols = 1\nobject = only x\nempty = only\n";
        let cfg = GameConfig::parse(text).unwrap();
        let level = Level::parse("x", &cfg).unwrap();
        let mip = compile_repair_mip(&level, &cfg).unwrap();
        // 1 object var + fs + ft + 1 edit net (ft, waste), no edges anywhere
        assert_eq!(mip.problem.num_variables(), 5);
        let uniqueness = mip
            .problem
            .constraints()
            .iter()
            .filter(|c| c.label.starts_with("eq1_"))
            .count();
        assert_eq!(uniqueness, 1);
        assert_eq!(mip.layout.n_edges, 0);
    }

    #[test]
    fn canonical_zelda_is_playable() {
        let cfg = zelda();
        let level = canonical_playable(&cfg).unwrap();
        assert!(flows::validate_playable(&level, &cfg).is_empty());
    }

    #[test]
    fn canonical_rejects_tiny_grid() {
        let mut cfg = zelda();
        cfg.rows = 3;
        cfg.cols = 3;
        assert!(matches!(
            canonical_playable(&cfg),
            Err(RepairError::GridTooSmall { .. })
        ));
    }

    #[test]
    fn canonical_pacman_is_playable() {
        let cfg = GameConfig::parse(assets::PACMAN_CONFIG).unwrap();
        let level = canonical_playable(&cfg).unwrap();
        assert!(flows::validate_playable(&level, &cfg).is_empty());
    }

    #[test]
    fn playable_input_is_a_fixpoint() {
        let cfg = zelda();
        let input = human(0);
        let (output, report) = repair(&input, &cfg, &SolverOptions::default()).unwrap();
        assert_eq!(output, input);
        assert!(report.is_empty());
        assert_eq!(report.total_cost, 0);
    }

    #[test]
    fn missing_key_costs_a_deletion() {
        let cfg = zelda();
        let mut input = human(0);
        let key = cfg.object_by_name("key").unwrap().id;
        let empty = cfg.object_by_name("empty").unwrap().id;
        let pos = input.positions_of(key)[0];
        input.set(pos / 13, pos % 13, empty);
        let (output, report) = repair(&input, &cfg, &SolverOptions::default()).unwrap();
        // a key must be added somewhere (free) and the surplus empty wasted
        assert_eq!(report.total_cost, 10);
        let (oracle, _) = edit_distance(&input, &output, &cfg).unwrap();
        assert_eq!(oracle, report.total_cost);
        assert!(flows::validate_playable(&output, &cfg).is_empty());
    }

    #[test]
    fn no_dead_end_corner_is_forced_shut() {
        let text = "name = mini\nrows = 3\ncols = 3\n\
                    object = wall w\nobject = empty .\n\
                    empty = empty\nblocking = wall\n\
                    delete_cost = 10\nmove_cost = 1\n\
                    no_dead_ends = true\n";
        let cfg = GameConfig::parse(text).unwrap();
        let input = Level::parse(".ww\nwww\nwww", &cfg).unwrap();
        let (output, report) = repair(&input, &cfg, &SolverOptions::default()).unwrap();
        let wall = cfg.object_by_name("wall").unwrap().id;
        assert_eq!(output.get(0, 0), wall, "{}", output.render(&cfg));
        assert_eq!(report.total_cost, 10); // the empty is deleted
        // and a rejected solution is caught by the independent checker
        let mip = compile_repair_mip(&input, &cfg).unwrap();
        let mut bad = vec![0.0; mip.problem.num_variables()];
        for v in 0..9 {
            bad[mip.o_var(input.at(v) as usize, v).0] = 1.0;
        }
        let violations = mip.problem.check_solution(&bad, 1e-7, 1e-6).unwrap();
        assert!(violations
            .iter()
            .any(|v| format!("{v}").contains("nodeadend_v0")));
    }

    #[test]
    fn decode_rejects_fractional_assignment() {
        let cfg = zelda();
        let mip = compile_repair_mip(&human(0), &cfg).unwrap();
        let solution = MipSolution {
            values: vec![0.5; mip.problem.num_variables()],
            objective_value: 0.0,
            status: SolveStatus::Optimal,
            best_bound: 0.0,
        };
        assert!(matches!(
            decode(&mip, &solution, &cfg),
            Err(RepairError::NonUniqueAssignment { .. })
        ));
    }

    #[test]
    fn witness_assignment_is_feasible() {
        let cfg = zelda();
        let mut input = human(1);
        // corrupt a few cells so input != witness
        let wall = cfg.object_by_name("wall").unwrap().id;
        input.set(4, 6, wall);
        input.set(0, 3, cfg.object_by_name("empty").unwrap().id);
        let mip = compile_repair_mip(&input, &cfg).unwrap();
        let canonical = canonical_playable(&cfg).unwrap();
        let vals = witness_assignment(&mip, &cfg, &canonical).unwrap();
        let violations = mip.problem.check_solution(&vals, 1e-7, 1e-6).unwrap();
        assert!(violations.is_empty(), "{violations:?}");
        // and its objective equals the oracle distance to the witness
        let (oracle, _) = edit_distance(&input, &canonical, &cfg).unwrap();
        let obj = mip.problem.objective_value(&vals);
        assert_eq!(obj.round() as i64, oracle);
    }
}
