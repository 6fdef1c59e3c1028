//! Language-neutral MIP representation: variables, linear constraints, a
//! minimization objective, LP-format export, and independent solution
//! checking.
//!
//! The representation is generic over the scalar type ([`Scalar`]); the crate
//! root exports `f64` aliases. All problems built by the repair pipeline have
//! integer coefficients, but the types store scalars so the solver stays
//! general.

use std::fmt;
use std::fmt::Write as _;

use num_traits::Float;
use thiserror::Error;

/// Scalar type the MIP machinery is generic over (`f32`, `f64`).
pub trait Scalar:
    Float
    + num_traits::NumAssign
    + std::iter::Sum
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn from_f64(v: f64) -> Self {
        v as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

/// Dense variable index within one [`MipProblem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Integer,
    Binary,
}

#[derive(Debug, Clone)]
pub struct Variable<S> {
    pub id: VarId,
    pub name: String,
    pub kind: VarKind,
    pub lower: S,
    pub upper: S,
}

/// Constraint sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmpOp::Le => write!(f, "<="),
            CmpOp::Eq => write!(f, "="),
            CmpOp::Ge => write!(f, ">="),
        }
    }
}

/// `terms . x  op  rhs`, with coefficients pre-merged per variable.
#[derive(Debug, Clone)]
pub struct LinearConstraint<S> {
    pub terms: Vec<(S, VarId)>,
    pub op: CmpOp,
    pub rhs: S,
    pub label: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MipError {
    #[error("unknown variable id x{0}")]
    UnknownVarId(usize),
    #[error("solution has {got} values, problem has {expected} variables")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("variable `{0}` has lower bound above upper bound")]
    EmptyBounds(String),
}

/// Minimization MIP.
#[derive(Debug, Clone)]
pub struct MipProblem<S> {
    pub name: String,
    variables: Vec<Variable<S>>,
    constraints: Vec<LinearConstraint<S>>,
    objective: Vec<(S, VarId)>,
}

impl<S: Scalar> MipProblem<S> {
    pub fn new(name: impl Into<String>) -> Self {
        MipProblem {
            name: name.into(),
            variables: Vec::new(),
            constraints: Vec::new(),
            objective: Vec::new(),
        }
    }

    /// Add a variable; binary kind forces bounds [0, 1].
    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lower: S,
        upper: S,
    ) -> VarId {
        let id = VarId(self.variables.len());
        let (lower, upper) = match kind {
            VarKind::Binary => (S::zero(), S::one()),
            _ => (lower, upper),
        };
        self.variables.push(Variable {
            id,
            name: name.into(),
            kind,
            lower,
            upper,
        });
        id
    }

    /// Add a constraint. Duplicate variable ids are merged by summing their
    /// coefficients; exact-zero merged coefficients are dropped.
    pub fn add_constraint(
        &mut self,
        terms: impl IntoIterator<Item = (S, VarId)>,
        op: CmpOp,
        rhs: S,
        label: impl Into<String>,
    ) -> Result<usize, MipError> {
        let mut merged: Vec<(S, VarId)> = Vec::new();
        for (coeff, var) in terms {
            if var.0 >= self.variables.len() {
                return Err(MipError::UnknownVarId(var.0));
            }
            match merged.iter_mut().find(|(_, v)| *v == var) {
                Some((c, _)) => *c += coeff,
                None => merged.push((coeff, var)),
            }
        }
        merged.retain(|(c, _)| *c != S::zero());
        self.constraints.push(LinearConstraint {
            terms: merged,
            op,
            rhs,
            label: label.into(),
        });
        Ok(self.constraints.len() - 1)
    }

    /// Replace the (minimization) objective.
    pub fn set_objective(
        &mut self,
        terms: impl IntoIterator<Item = (S, VarId)>,
    ) -> Result<(), MipError> {
        let mut merged: Vec<(S, VarId)> = Vec::new();
        for (coeff, var) in terms {
            if var.0 >= self.variables.len() {
                return Err(MipError::UnknownVarId(var.0));
            }
            match merged.iter_mut().find(|(_, v)| *v == var) {
                Some((c, _)) => *c += coeff,
                None => merged.push((coeff, var)),
            }
        }
        merged.retain(|(c, _)| *c != S::zero());
        self.objective = merged;
        Ok(())
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn variables(&self) -> &[Variable<S>] {
        &self.variables
    }

    pub fn variable(&self, id: VarId) -> &Variable<S> {
        &self.variables[id.0]
    }

    pub fn constraints(&self) -> &[LinearConstraint<S>] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(S, VarId)] {
        &self.objective
    }

    pub fn objective_value(&self, values: &[S]) -> S {
        self.objective
            .iter()
            .map(|&(c, v)| c * values[v.0])
            .sum()
    }

    /// Look up a variable id by name (linear scan; intended for tests and
    /// the external-solver bridge).
    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.variables.iter().find(|v| v.name == name).map(|v| v.id)
    }

    /// True when every objective coefficient is an integer on an
    /// integer-kind variable, so the optimum is an integer.
    pub fn objective_is_integral(&self) -> bool {
        self.objective.iter().all(|&(c, v)| {
            c.fract() == S::zero() && self.variables[v.0].kind != VarKind::Continuous
        })
    }

    /// Export in CPLEX-style LP format. Output is deterministic: variables
    /// and constraints appear in id order.
    pub fn export_lp(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "\\ Problem: {}", self.name);
        out.push_str("Minimize\n");
        out.push_str(" obj:");
        write_terms(&mut out, &self.objective, &self.variables);
        out.push('\n');
        out.push_str("Subject To\n");
        for c in &self.constraints {
            let _ = write!(out, " {}:", c.label);
            write_terms(&mut out, &c.terms, &self.variables);
            let _ = writeln!(out, " {} {}", c.op, fmt_num(c.rhs));
        }
        out.push_str("Bounds\n");
        for v in &self.variables {
            if v.kind == VarKind::Binary && v.lower == S::zero() && v.upper == S::one() {
                continue; // declared in the Binaries section
            }
            match (v.lower > S::neg_infinity(), v.upper < S::infinity()) {
                (true, true) if v.lower == v.upper => {
                    let _ = writeln!(out, " {} = {}", v.name, fmt_num(v.lower));
                }
                (true, true) => {
                    let _ = writeln!(
                        out,
                        " {} <= {} <= {}",
                        fmt_num(v.lower),
                        v.name,
                        fmt_num(v.upper)
                    );
                }
                (true, false) => {
                    let _ = writeln!(out, " {} >= {}", v.name, fmt_num(v.lower));
                }
                (false, true) => {
                    let _ = writeln!(out, " {} <= {}", v.name, fmt_num(v.upper));
                }
                (false, false) => {
                    let _ = writeln!(out, " {} free", v.name);
                }
            }
        }
        let generals: Vec<&str> = self
            .variables
            .iter()
            .filter(|v| v.kind == VarKind::Integer)
            .map(|v| v.name.as_str())
            .collect();
        if !generals.is_empty() {
            out.push_str("Generals\n");
            write_name_list(&mut out, &generals);
        }
        let binaries: Vec<&str> = self
            .variables
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .map(|v| v.name.as_str())
            .collect();
        if !binaries.is_empty() {
            out.push_str("Binaries\n");
            write_name_list(&mut out, &binaries);
        }
        out.push_str("End\n");
        out
    }

    /// Check a full assignment against constraints, bounds, and integrality.
    /// Returns the (possibly empty) violation list.
    pub fn check_solution(
        &self,
        values: &[S],
        feas_tol: S,
        int_tol: S,
    ) -> Result<Vec<Violation<S>>, MipError> {
        if values.len() != self.variables.len() {
            return Err(MipError::DimensionMismatch {
                got: values.len(),
                expected: self.variables.len(),
            });
        }
        let mut violations = Vec::new();
        for v in &self.variables {
            let x = values[v.id.0];
            if x < v.lower - feas_tol || x > v.upper + feas_tol {
                violations.push(Violation::Bound {
                    var: v.name.clone(),
                    value: x,
                    lower: v.lower,
                    upper: v.upper,
                });
            }
            if v.kind != VarKind::Continuous {
                let nearest = x.round();
                if (x - nearest).abs() > int_tol {
                    violations.push(Violation::Integrality {
                        var: v.name.clone(),
                        value: x,
                    });
                }
            }
        }
        for c in &self.constraints {
            let activity: S = c.terms.iter().map(|&(coeff, v)| coeff * values[v.0]).sum();
            let ok = match c.op {
                CmpOp::Le => activity <= c.rhs + feas_tol,
                CmpOp::Ge => activity >= c.rhs - feas_tol,
                CmpOp::Eq => (activity - c.rhs).abs() <= feas_tol,
            };
            if !ok {
                violations.push(Violation::Constraint {
                    label: c.label.clone(),
                    activity,
                    op: c.op,
                    rhs: c.rhs,
                });
            }
        }
        Ok(violations)
    }
}

fn write_terms<S: Scalar>(out: &mut String, terms: &[(S, VarId)], vars: &[Variable<S>]) {
    if terms.is_empty() {
        out.push_str(" 0");
        return;
    }
    let mut line_len = 0usize;
    for (i, &(coeff, var)) in terms.iter().enumerate() {
        let name = &vars[var.0].name;
        let piece = if i == 0 {
            if coeff == S::one() {
                format!(" {name}")
            } else if coeff == -S::one() {
                format!(" - {name}")
            } else if coeff < S::zero() {
                format!(" - {} {name}", fmt_num(-coeff))
            } else {
                format!(" {} {name}", fmt_num(coeff))
            }
        } else {
            let sign = if coeff < S::zero() { '-' } else { '+' };
            let mag = coeff.abs();
            if mag == S::one() {
                format!(" {sign} {name}")
            } else {
                format!(" {sign} {} {name}", fmt_num(mag))
            }
        };
        // keep lines comfortably below the 255-character LP-reader limit
        if line_len + piece.len() > 200 {
            out.push_str("\n   ");
            line_len = 3;
        }
        line_len += piece.len();
        out.push_str(&piece);
    }
}

fn write_name_list(out: &mut String, names: &[&str]) {
    let mut line_len = 0usize;
    for name in names {
        if line_len + name.len() + 1 > 200 {
            out.push('\n');
            line_len = 0;
        }
        out.push(' ');
        out.push_str(name);
        line_len += name.len() + 1;
    }
    out.push('\n');
}

/// Integral values print without a fractional part.
fn fmt_num<S: Scalar>(v: S) -> String {
    if v.fract() == S::zero() && v.abs() < S::from_f64(1e15) {
        format!("{}", v.to_f64() as i64)
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation<S> {
    Constraint {
        label: String,
        activity: S,
        op: CmpOp,
        rhs: S,
    },
    Bound {
        var: String,
        value: S,
        lower: S,
        upper: S,
    },
    Integrality {
        var: String,
        value: S,
    },
}

impl<S: Scalar> fmt::Display for Violation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Constraint {
                label,
                activity,
                op,
                rhs,
            } => write!(f, "constraint {label}: activity {activity} !{op} {rhs}"),
            Violation::Bound {
                var,
                value,
                lower,
                upper,
            } => write!(f, "bound {var}: {value} outside [{lower}, {upper}]"),
            Violation::Integrality { var, value } => {
                write!(f, "integrality {var}: {value} is not integral")
            }
        }
    }
}

/// Solve outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    LimitReached,
}

/// A solved assignment.
#[derive(Debug, Clone)]
pub struct MipSolution<S> {
    pub values: Vec<S>,
    pub objective_value: S,
    pub status: SolveStatus,
    /// Proven lower bound on the optimum (equals `objective_value` when
    /// status is `Optimal`).
    pub best_bound: S,
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = MipProblem<f64>;

    #[test]
    fn empty_problem_counts() {
        let p = P::new("empty");
        assert_eq!((p.num_variables(), p.num_constraints()), (0, 0));
    }

    #[test]
    fn builder_counts() {
        let mut p = P::new("t");
        let a = p.add_variable("a", VarKind::Binary, 0.0, 1.0);
        let b = p.add_variable("b", VarKind::Binary, 0.0, 1.0);
        let c = p.add_variable("c", VarKind::Binary, 0.0, 1.0);
        p.add_constraint(
            [(1.0, a), (1.0, b), (1.0, c)],
            CmpOp::Ge,
            1.0,
            "cover",
        )
        .unwrap();
        assert_eq!((p.num_variables(), p.num_constraints()), (3, 1));
    }

    #[test]
    fn constraint_rejects_unknown_var() {
        let mut p = P::new("t");
        let a = p.add_variable("a", VarKind::Binary, 0.0, 1.0);
        let err = p
            .add_constraint([(1.0, a), (1.0, VarId(7))], CmpOp::Le, 1.0, "bad")
            .unwrap_err();
        assert_eq!(err, MipError::UnknownVarId(7));
    }

    #[test]
    fn duplicate_terms_are_merged() {
        let mut p = P::new("t");
        let a = p.add_variable("a", VarKind::Continuous, 0.0, 10.0);
        p.add_constraint([(1.0, a), (2.0, a)], CmpOp::Le, 5.0, "m")
            .unwrap();
        assert_eq!(p.constraints()[0].terms, vec![(3.0, a)]);
    }

    #[test]
    fn export_single_variable_problem() {
        let mut p = P::new("one");
        let x = p.add_variable("x", VarKind::Continuous, 0.0, f64::INFINITY);
        p.add_constraint([(1.0, x)], CmpOp::Ge, 3.0, "lb").unwrap();
        p.set_objective([(1.0, x)]).unwrap();
        let lp = p.export_lp();
        assert!(lp.contains("Minimize"));
        assert!(lp.contains(" obj: x"));
        assert!(lp.contains(" lb: x >= 3"));
        assert!(lp.contains(" x >= 0"));
        assert!(lp.ends_with("End\n"));
    }

    #[test]
    fn export_is_deterministic() {
        let mut p = P::new("det");
        let x = p.add_variable("x", VarKind::Integer, 0.0, 9.0);
        let y = p.add_variable("y", VarKind::Binary, 0.0, 1.0);
        p.add_constraint([(2.0, x), (-1.0, y)], CmpOp::Eq, 4.0, "c0")
            .unwrap();
        p.set_objective([(1.0, x), (10.0, y)]).unwrap();
        assert_eq!(p.export_lp(), p.export_lp());
    }

    #[test]
    fn check_solution_feasible_and_violations() {
        let mut p = P::new("t");
        let x = p.add_variable("x", VarKind::Continuous, 0.0, 10.0);
        p.add_constraint([(1.0, x)], CmpOp::Ge, 3.0, "xmin").unwrap();
        assert!(p.check_solution(&[5.0], 1e-7, 1e-6).unwrap().is_empty());
        let v = p.check_solution(&[2.0], 1e-7, 1e-6).unwrap();
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], Violation::Constraint { label, .. } if label == "xmin"));
    }

    #[test]
    fn check_solution_integrality() {
        let mut p = P::new("t");
        p.add_variable("b", VarKind::Binary, 0.0, 1.0);
        let v = p.check_solution(&[0.5], 1e-7, 1e-6).unwrap();
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], Violation::Integrality { .. }));
    }

    #[test]
    fn check_solution_dimension_mismatch() {
        let p = P::new("t");
        assert_eq!(
            p.check_solution(&[1.0], 1e-7, 1e-6).unwrap_err(),
            MipError::DimensionMismatch {
                got: 1,
                expected: 0
            }
        );
    }

    #[test]
    fn integral_objective_detection() {
        let mut p = P::new("t");
        let x = p.add_variable("x", VarKind::Integer, 0.0, 5.0);
        let y = p.add_variable("y", VarKind::Continuous, 0.0, 5.0);
        p.set_objective([(2.0, x)]).unwrap();
        assert!(p.objective_is_integral());
        p.set_objective([(2.0, x), (1.0, y)]).unwrap();
        assert!(!p.objective_is_integral());
        p.set_objective([(0.5, x)]).unwrap();
        assert!(!p.objective_is_integral());
    }
}
