//! Bridge to external MIP solvers: export the LP file, run a user-supplied
//! command, read back a `name value` solution file, and verify it against
//! the problem before trusting it.

use std::collections::HashMap;
use std::process::Command;

use thiserror::Error;

use crate::mip::{MipProblem, MipSolution, Scalar, SolveStatus};

use super::SolverOptions;

#[derive(Debug, Error)]
pub enum ExternalError {
    #[error("command template must contain {{lp}} and {{sol}} placeholders: `{0}`")]
    BadTemplate(String),
    #[error("external solver unavailable: {0}")]
    ExternalSolverUnavailable(String),
    #[error("solution parse error: {0}")]
    SolutionParseError(String),
    #[error("external solver reported infeasible")]
    InfeasibleReported,
}

/// Parse `name value` lines. Blank lines and `#` comments are skipped; a
/// line consisting of the word `infeasible` reports infeasibility.
pub fn parse_solution_file<S: Scalar>(
    problem: &MipProblem<S>,
    text: &str,
) -> Result<Vec<S>, ExternalError> {
    let index: HashMap<&str, usize> = problem
        .variables()
        .iter()
        .map(|v| (v.name.as_str(), v.id.0))
        .collect();
    let mut values = vec![S::zero(); problem.num_variables()];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.eq_ignore_ascii_case("infeasible") {
            return Err(ExternalError::InfeasibleReported);
        }
        let mut parts = line.split_whitespace();
        let (name, value) = match (parts.next(), parts.next(), parts.next()) {
            (Some(n), Some(v), None) => (n, v),
            _ => {
                return Err(ExternalError::SolutionParseError(format!(
                    "line {}: expected `name value`, got `{line}`",
                    lineno + 1
                )))
            }
        };
        let id = index.get(name).copied().ok_or_else(|| {
            ExternalError::SolutionParseError(format!(
                "line {}: unknown variable `{name}`",
                lineno + 1
            ))
        })?;
        let v: f64 = value.parse().map_err(|_| {
            ExternalError::SolutionParseError(format!(
                "line {}: `{value}` is not a number",
                lineno + 1
            ))
        })?;
        values[id] = S::from_f64(v);
    }
    Ok(values)
}

/// Export the problem, run `command_template` (with `{lp}` and `{sol}`
/// replaced by temp-file paths) through `sh -c`, parse the solution file,
/// and verify it with the independent solution checker.
pub fn solve_external<S: Scalar>(
    problem: &MipProblem<S>,
    command_template: &str,
    options: &SolverOptions,
) -> Result<MipSolution<S>, ExternalError> {
    if !command_template.contains("{lp}") || !command_template.contains("{sol}") {
        return Err(ExternalError::BadTemplate(command_template.to_string()));
    }
    let dir = tempfile::tempdir()
        .map_err(|e| ExternalError::ExternalSolverUnavailable(e.to_string()))?;
    let lp_path = dir.path().join("problem.lp");
    let sol_path = dir.path().join("solution.sol");
    std::fs::write(&lp_path, problem.export_lp())
        .map_err(|e| ExternalError::ExternalSolverUnavailable(e.to_string()))?;
    let cmd = command_template
        .replace("{lp}", &lp_path.display().to_string())
        .replace("{sol}", &sol_path.display().to_string());
    let output = Command::new("sh")
        .arg("-c")
        .arg(&cmd)
        .output()
        .map_err(|e| ExternalError::ExternalSolverUnavailable(e.to_string()))?;
    if !output.status.success() {
        return Err(ExternalError::ExternalSolverUnavailable(format!(
            "`{cmd}` exited with {}: {}",
            output.status,
            String::from_utf8_lossy(&output.stderr).trim()
        )));
    }
    let text = std::fs::read_to_string(&sol_path).map_err(|e| {
        ExternalError::SolutionParseError(format!("no solution file written: {e}"))
    })?;
    let values = parse_solution_file(problem, &text)?;
    let violations = problem
        .check_solution(
            &values,
            S::from_f64(options.feas_tol),
            S::from_f64(options.int_tol),
        )
        .map_err(|e| ExternalError::SolutionParseError(e.to_string()))?;
    if !violations.is_empty() {
        let summary: Vec<String> = violations.iter().take(5).map(|v| v.to_string()).collect();
        return Err(ExternalError::SolutionParseError(format!(
            "solution violates the problem ({} violations): {}",
            violations.len(),
            summary.join("; ")
        )));
    }
    let objective_value = problem.objective_value(&values);
    Ok(MipSolution {
        values,
        objective_value,
        status: SolveStatus::Optimal,
        best_bound: objective_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mip::{CmpOp, VarKind};
    use std::io::Write;
    use std::os::unix::fs::PermissionsExt;

    fn one_var_problem() -> MipProblem<f64> {
        let mut p = MipProblem::new("ext");
        let x = p.add_variable("x", VarKind::Integer, 0.0, 10.0);
        p.add_constraint([(1.0, x)], CmpOp::Ge, 3.0, "xmin").unwrap();
        p.set_objective([(1.0, x)]).unwrap();
        p
    }

    fn stub_script(body: &str) -> (tempfile::TempDir, String) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stub.sh");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "#!/bin/sh\n{body}").unwrap();
        f.flush().unwrap();
        std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
        (dir, path.display().to_string())
    }

    #[test]
    fn stub_solver_round_trip() {
        let p = one_var_problem();
        let (_dir, script) = stub_script("echo 'x 3' > \"$2\"");
        let template = format!("{script} {{lp}} {{sol}}");
        let s = solve_external(&p, &template, &SolverOptions::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.objective_value - 3.0).abs() < 1e-9);
        assert!((s.values[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn stub_infeasible_assignment_is_rejected() {
        let p = one_var_problem();
        let (_dir, script) = stub_script("echo 'x 2' > \"$2\"");
        let template = format!("{script} {{lp}} {{sol}}");
        match solve_external(&p, &template, &SolverOptions::default()) {
            Err(ExternalError::SolutionParseError(msg)) => assert!(msg.contains("xmin")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_binary_is_unavailable() {
        let p = one_var_problem();
        let err = solve_external(
            &p,
            "/no/such/solver-binary {lp} {sol}",
            &SolverOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, ExternalError::ExternalSolverUnavailable(_)));
    }

    #[test]
    fn reported_infeasible_propagates() {
        let p = one_var_problem();
        let (_dir, script) = stub_script("echo 'infeasible' > \"$2\"");
        let template = format!("{script} {{lp}} {{sol}}");
        assert!(matches!(
            solve_external(&p, &template, &SolverOptions::default()),
            Err(ExternalError::InfeasibleReported)
        ));
    }

    #[test]
    fn template_requires_placeholders() {
        let p = one_var_problem();
        assert!(matches!(
            solve_external(&p, "solver", &SolverOptions::default()),
            Err(ExternalError::BadTemplate(_))
        ));
    }
}
