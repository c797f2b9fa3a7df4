//! LP solving and interchange. The simplex itself is delegated to the
//! `microlp` crate; everything around it (feasibility audit, LP text
//! export and a small parser for re-importing) is independent so solver
//! results can be cross-checked.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cep::{LpProblem, Relation, INF};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("solver failure: {0}")]
    Backend(String),
    #[error("lp parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Infeasible, unbounded and interrupted solves carry no primal point:
/// `values` is empty and the objective is NaN.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub values: Vec<f64>,
    pub iterations: u64,
    pub wall_time: std::time::Duration,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOpts {
    pub time_limit: Option<std::time::Duration>,
}

impl Default for SolveOpts {
    fn default() -> Self {
        SolveOpts { time_limit: None }
    }
}

/// Minimizes the problem with the simplex backend.
pub fn solve_lp(problem: &LpProblem, opts: &SolveOpts) -> Result<LpSolution, SolveError> {
    let mut mp = microlp::Problem::new(microlp::OptimizationDirection::Minimize);
    let vars: Vec<microlp::Variable> = (0..problem.n_vars())
        .map(|i| mp.add_var(problem.objective[i], (problem.lower[i], problem.upper[i])))
        .collect();
    for c in &problem.constraints {
        let expr: Vec<(microlp::Variable, f64)> =
            c.coeffs.iter().map(|&(col, w)| (vars[col], w)).collect();
        let op = match c.relation {
            Relation::Le => microlp::ComparisonOp::Le,
            Relation::Ge => microlp::ComparisonOp::Ge,
            Relation::Eq => microlp::ComparisonOp::Eq,
        };
        mp.add_constraint(expr, op, c.rhs);
    }
    if let Some(limit) = opts.time_limit {
        mp.set_time_limit(limit);
    }
    let started = std::time::Instant::now();
    let outcome = mp.solve();
    let wall_time = started.elapsed();
    let no_point = |status: LpStatus, iterations: u64| LpSolution {
        status,
        objective: f64::NAN,
        values: Vec::new(),
        iterations,
        wall_time,
    };
    match outcome {
        Ok(microlp::SolveOutcome::Solution(sol)) => {
            let values = vars.iter().map(|&v| sol.var_value(v)).collect();
            Ok(LpSolution {
                status: LpStatus::Optimal,
                objective: sol.objective(),
                values,
                iterations: sol.stats().lp_iterations,
                wall_time,
            })
        }
        Ok(microlp::SolveOutcome::Interrupted(sol)) => Ok(no_point(
            LpStatus::IterationLimit,
            sol.stats().lp_iterations,
        )),
        Err(microlp::Error::Infeasible) => Ok(no_point(LpStatus::Infeasible, 0)),
        Err(microlp::Error::Unbounded) => Ok(no_point(LpStatus::Unbounded, 0)),
        Err(e) => Err(SolveError::Backend(e.to_string())),
    }
}

/// Independent audit of a candidate point: bounds and every constraint
/// within `tol`, plus the recomputed objective. Does not use the solver.
pub fn check_feasibility(problem: &LpProblem, values: &[f64], tol: f64) -> Result<f64, String> {
    if values.len() != problem.n_vars() {
        return Err(format!(
            "expected {} values, got {}",
            problem.n_vars(),
            values.len()
        ));
    }
    for (i, &v) in values.iter().enumerate() {
        if v < problem.lower[i] - tol || v > problem.upper[i] + tol {
            return Err(format!(
                "variable {} = {v} outside [{}, {}]",
                problem.var_names[i], problem.lower[i], problem.upper[i]
            ));
        }
    }
    for (row, c) in problem.constraints.iter().enumerate() {
        let lhs: f64 = c.coeffs.iter().map(|&(col, w)| w * values[col]).sum();
        let ok = match c.relation {
            Relation::Le => lhs <= c.rhs + tol,
            Relation::Ge => lhs >= c.rhs - tol,
            Relation::Eq => (lhs - c.rhs).abs() <= tol,
        };
        if !ok {
            return Err(format!(
                "constraint {row} violated: lhs {lhs} vs rhs {} ({:?})",
                c.rhs, c.relation
            ));
        }
    }
    Ok(values
        .iter()
        .zip(&problem.objective)
        .map(|(v, c)| v * c)
        .sum())
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|ch| {
            if ch.is_ascii_alphanumeric() || ch == '_' {
                ch
            } else {
                '_'
            }
        })
        .collect()
}

fn fmt_coeff(out: &mut String, first: bool, w: f64, name: &str) {
    if first {
        if w < 0.0 {
            let _ = write!(out, "- ");
        }
    } else if w < 0.0 {
        let _ = write!(out, " - ");
    } else {
        let _ = write!(out, " + ");
    }
    let a = w.abs();
    if a == 1.0 {
        let _ = write!(out, "{name}");
    } else {
        let _ = write!(out, "{a} {name}");
    }
}

/// Renders the problem in CPLEX LP text format. Variable names are
/// sanitized to `[A-Za-z0-9_]` with a numeric suffix on collisions, so the
/// output is deterministic for a given problem.
pub fn export_lp(problem: &LpProblem) -> String {
    let mut names = Vec::with_capacity(problem.n_vars());
    let mut used: HashMap<String, usize> = HashMap::new();
    for raw in &problem.var_names {
        let base = sanitize(raw);
        let n = used.entry(base.clone()).or_insert(0);
        let name = if *n == 0 { base.clone() } else { format!("{base}__{n}") };
        *n += 1;
        names.push(name);
    }

    let mut out = String::new();
    out.push_str("Minimize\n obj:");
    let mut first = true;
    for (col, w) in problem.objective_terms() {
        out.push(' ');
        let mut term = String::new();
        fmt_coeff(&mut term, first, w, &names[col]);
        out.push_str(term.trim_start());
        first = false;
    }
    if first {
        out.push_str(" 0 ");
        out.push_str(&names[0]);
    }
    out.push_str("\nSubject To\n");
    for (row, c) in problem.constraints.iter().enumerate() {
        let _ = write!(out, " c{row}:");
        let mut first = true;
        for &(col, w) in &c.coeffs {
            out.push(' ');
            let mut term = String::new();
            fmt_coeff(&mut term, first, w, &names[col]);
            out.push_str(term.trim_start());
            first = false;
        }
        if first {
            out.push_str(" 0 ");
            out.push_str(&names[0]);
        }
        let op = match c.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        };
        let _ = writeln!(out, " {op} {}", c.rhs);
    }
    out.push_str("Bounds\n");
    for i in 0..problem.n_vars() {
        let (lb, ub) = (problem.lower[i], problem.upper[i]);
        if lb == 0.0 && ub == INF {
            continue; // LP format default
        }
        if ub == INF {
            let _ = writeln!(out, " {} >= {lb}", names[i]);
        } else if lb == ub {
            let _ = writeln!(out, " {} = {lb}", names[i]);
        } else {
            let _ = writeln!(out, " {lb} <= {} <= {ub}", names[i]);
        }
    }
    out.push_str("End\n");
    out
}

#[derive(Debug, PartialEq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Done,
}

/// Parses the subset of the CPLEX LP format that `export_lp` emits
/// (linear minimization, named constraints, a Bounds section). Enough to
/// round-trip exported files and read hand-written ones.
pub fn parse_lp(text: &str) -> Result<LpProblem, SolveError> {
    let mut p = LpProblem::new();
    let mut cols: HashMap<String, usize> = HashMap::new();
    let mut section = Section::Preamble;

    let mut ensure_var = |p: &mut LpProblem, name: &str| -> usize {
        if let Some(&c) = cols.get(name) {
            return c;
        }
        let c = p
            .add_var(name.to_string(), 0.0, INF, 0.0)
            .expect("fresh name");
        cols.insert(name.to_string(), c);
        c
    };

    let err = |line: usize, message: &str| SolveError::Parse {
        line: line + 1,
        message: message.to_string(),
    };

    // expression parser shared by the objective and constraint rows
    fn parse_expr(
        tokens: &[&str],
        lineno: usize,
        p: &mut LpProblem,
        ensure: &mut dyn FnMut(&mut LpProblem, &str) -> usize,
    ) -> Result<Vec<(usize, f64)>, SolveError> {
        let mut terms: Vec<(usize, f64)> = Vec::new();
        let mut sign = 1.0;
        let mut pending: Option<f64> = None;
        for tok in tokens {
            match *tok {
                "+" => sign = 1.0,
                "-" => sign = -1.0,
                _ => {
                    if let Ok(v) = tok.parse::<f64>() {
                        pending = Some(pending.unwrap_or(1.0) * v);
                    } else {
                        let col = ensure(p, tok);
                        let w = sign * pending.take().unwrap_or(1.0);
                        terms.push((col, w));
                        sign = 1.0;
                    }
                }
            }
        }
        if pending.is_some() && terms.is_empty() {
            // a bare constant like "0" stands for an empty expression
            return Ok(terms);
        }
        if pending.is_some() {
            return Err(SolveError::Parse {
                line: lineno + 1,
                message: "dangling coefficient".to_string(),
            });
        }
        Ok(terms)
    }

    let mut objective_terms: Vec<(usize, f64)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('\\').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        match lower.as_str() {
            "minimize" | "min" | "minimise" => {
                section = Section::Objective;
                continue;
            }
            "maximize" | "max" | "maximise" => {
                return Err(err(lineno, "only minimization is supported"));
            }
            "subject to" | "st" | "s.t." | "such that" => {
                section = Section::Constraints;
                continue;
            }
            "bounds" => {
                section = Section::Bounds;
                continue;
            }
            "end" => {
                section = Section::Done;
                continue;
            }
            "general" | "binary" | "integer" => {
                return Err(err(lineno, "integer sections are not supported"));
            }
            _ => {}
        }
        match section {
            Section::Preamble | Section::Done => {
                return Err(err(lineno, "unexpected content outside sections"));
            }
            Section::Objective => {
                let body = match line.split_once(':') {
                    Some((_, rest)) => rest,
                    None => line,
                };
                let tokens: Vec<&str> = body.split_whitespace().collect();
                let terms = parse_expr(&tokens, lineno, &mut p, &mut ensure_var)?;
                objective_terms.extend(terms);
            }
            Section::Constraints => {
                let body = match line.split_once(':') {
                    Some((_, rest)) => rest,
                    None => line,
                };
                let (op_pos, relation, op_len) = ["<=", ">=", "=", "<", ">"]
                    .iter()
                    .find_map(|op| {
                        body.find(op).map(|i| {
                            let rel = match *op {
                                "<=" | "<" => Relation::Le,
                                ">=" | ">" => Relation::Ge,
                                _ => Relation::Eq,
                            };
                            (i, rel, op.len())
                        })
                    })
                    .ok_or_else(|| err(lineno, "constraint without relation"))?;
                let lhs: Vec<&str> = body[..op_pos].split_whitespace().collect();
                let rhs: f64 = body[op_pos + op_len..]
                    .trim()
                    .parse()
                    .map_err(|_| err(lineno, "bad rhs"))?;
                let terms = parse_expr(&lhs, lineno, &mut p, &mut ensure_var)?;
                p.add_constraint(terms, relation, rhs);
            }
            Section::Bounds => {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                let parse_bound = |tok: &str| -> Option<f64> {
                    match tok.to_ascii_lowercase().as_str() {
                        "inf" | "+inf" | "infinity" | "+infinity" => Some(INF),
                        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
                        _ => tok.parse().ok(),
                    }
                };
                match tokens.as_slice() {
                    // lb <= x <= ub
                    [lb, "<=", name, "<=", ub] => {
                        let col = ensure_var(&mut p, name);
                        p.lower[col] = parse_bound(lb)
                            .ok_or_else(|| err(lineno, "bad lower bound"))?;
                        p.upper[col] = parse_bound(ub)
                            .ok_or_else(|| err(lineno, "bad upper bound"))?;
                    }
                    [name, ">=", lb] => {
                        let col = ensure_var(&mut p, name);
                        p.lower[col] =
                            parse_bound(lb).ok_or_else(|| err(lineno, "bad bound"))?;
                    }
                    [name, "<=", ub] => {
                        let col = ensure_var(&mut p, name);
                        p.upper[col] =
                            parse_bound(ub).ok_or_else(|| err(lineno, "bad bound"))?;
                    }
                    [name, "=", v] => {
                        let col = ensure_var(&mut p, name);
                        let v = parse_bound(v).ok_or_else(|| err(lineno, "bad bound"))?;
                        p.lower[col] = v;
                        p.upper[col] = v;
                    }
                    [name, "free"] | [name, "Free"] | [name, "FREE"] => {
                        let col = ensure_var(&mut p, name);
                        p.lower[col] = f64::NEG_INFINITY;
                        p.upper[col] = INF;
                    }
                    _ => return Err(err(lineno, "unrecognized bound line")),
                }
            }
        }
    }

    for (col, w) in objective_terms {
        p.objective[col] += w;
    }
    Ok(p)
}

pub fn write_lp_file(problem: &LpProblem, path: &std::path::Path) -> Result<(), SolveError> {
    std::fs::write(path, export_lp(problem))?;
    Ok(())
}

pub fn read_lp_file(path: &std::path::Path) -> Result<LpProblem, SolveError> {
    let text = std::fs::read_to_string(path)?;
    parse_lp(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toy() -> LpProblem {
        // min 2x + 3y  s.t. x + y >= 4, x <= 3, y <= 5
        let mut p = LpProblem::new();
        let x = p.add_var("x".into(), 0.0, 3.0, 2.0).unwrap();
        let y = p.add_var("y".into(), 0.0, 5.0, 3.0).unwrap();
        p.add_constraint(vec![(x, 1.0), (y, 1.0)], Relation::Ge, 4.0);
        p
    }

    #[test]
    fn toy_optimum() {
        let p = toy();
        let sol = solve_lp(&p, &SolveOpts::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 9.0).abs() < 1e-9); // x=3, y=1
        assert!((sol.values[0] - 3.0).abs() < 1e-9);
        assert!((sol.values[1] - 1.0).abs() < 1e-9);
        let audited = check_feasibility(&p, &sol.values, 1e-7).unwrap();
        assert!((audited - sol.objective).abs() < 1e-7);
    }

    #[test]
    fn single_variable_lower_bound() {
        // min x s.t. x >= 3
        let mut p = LpProblem::new();
        let x = p.add_var("x".into(), 0.0, INF, 1.0).unwrap();
        p.add_constraint(vec![(x, 1.0)], Relation::Ge, 3.0);
        let sol = solve_lp(&p, &SolveOpts::default()).unwrap();
        assert!((sol.objective - 3.0).abs() < 1e-9);
    }

    #[test]
    fn box_vertex_optimum() {
        // min -x-y s.t. x+y <= 4, x <= 3, y <= 3
        let mut p = LpProblem::new();
        let x = p.add_var("x".into(), 0.0, 3.0, -1.0).unwrap();
        let y = p.add_var("y".into(), 0.0, 3.0, -1.0).unwrap();
        p.add_constraint(vec![(x, 1.0), (y, 1.0)], Relation::Le, 4.0);
        let sol = solve_lp(&p, &SolveOpts::default()).unwrap();
        assert!((sol.objective + 4.0).abs() < 1e-9);
        assert!((sol.values[0] + sol.values[1] - 4.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        let mut p = LpProblem::new();
        let x = p.add_var("x".into(), 0.0, 1.0, 1.0).unwrap();
        p.add_constraint(vec![(x, 1.0)], Relation::Ge, 2.0);
        let sol = solve_lp(&p, &SolveOpts::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        assert!(sol.values.is_empty());
    }

    #[test]
    fn unbounded_detected() {
        let mut p = LpProblem::new();
        let x = p.add_var("x".into(), 0.0, INF, -1.0).unwrap();
        p.add_constraint(vec![(x, 1.0)], Relation::Ge, 0.0);
        let sol = solve_lp(&p, &SolveOpts::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn feasibility_check_catches_violations() {
        let p = toy();
        assert!(check_feasibility(&p, &[3.0, 1.0], 1e-9).is_ok());
        let e = check_feasibility(&p, &[1.0, 1.0], 1e-9).unwrap_err();
        assert!(e.contains("constraint 0"));
        let e = check_feasibility(&p, &[4.0, 1.0], 1e-9).unwrap_err();
        assert!(e.contains("outside"));
        assert!(check_feasibility(&p, &[1.0], 1e-9).is_err());
    }

    #[test]
    fn export_golden() {
        let p = toy();
        let text = export_lp(&p);
        let expected = "Minimize\n obj: 2 x + 3 y\nSubject To\n c0: x + y >= 4\nBounds\n 0 <= x <= 3\n 0 <= y <= 5\nEnd\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn export_sanitizes_and_disambiguates() {
        let mut p = LpProblem::new();
        p.add_var("p:u1:0".into(), 0.0, 1.0, 1.0).unwrap();
        p.add_var("p-u1-0".into(), 0.0, 2.0, 1.0).unwrap();
        let text = export_lp(&p);
        assert!(text.contains("p_u1_0"));
        assert!(text.contains("p_u1_0__1"));
    }

    #[test]
    fn parse_round_trip_matches_solution() {
        let p = toy();
        let parsed = parse_lp(&export_lp(&p)).unwrap();
        let a = solve_lp(&p, &SolveOpts::default()).unwrap();
        let b = solve_lp(&parsed, &SolveOpts::default()).unwrap();
        assert!((a.objective - b.objective).abs() < 1e-9);
    }

    #[test]
    fn parse_handles_implicit_coefficients_and_signs() {
        let text = "Minimize\n obj: x - 2 y\nSubject To\n c0: - x + 3 y <= 6\n c1: x >= 1\nBounds\n y <= 4\nEnd\n";
        let p = parse_lp(text).unwrap();
        assert_eq!(p.n_vars(), 2);
        assert_eq!(p.objective, vec![1.0, -2.0]);
        assert_eq!(p.constraints[0].coeffs, vec![(0, -1.0), (1, 3.0)]);
        assert_eq!(p.upper[1], 4.0);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_lp("hello world").is_err());
        assert!(parse_lp("Maximize\n obj: x\nEnd\n").is_err());
        assert!(parse_lp("Minimize\n obj: x\nSubject To\n c0: x 4\nEnd\n").is_err());
    }

    #[test]
    fn solve_is_deterministic() {
        let p = toy();
        let a = solve_lp(&p, &SolveOpts::default()).unwrap();
        let b = solve_lp(&p, &SolveOpts::default()).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.iterations, b.iterations);
    }

    // brute-force oracle: enumerate basic points (active bound / constraint
    // subsets), keep feasible ones, take the best objective
    fn vertex_oracle(p: &LpProblem) -> Option<f64> {
        let n = p.n_vars();
        assert!(n <= 6, "oracle limited to small problems");
        // candidate equalities: each constraint as equality, each bound
        let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
        for c in &p.constraints {
            let mut dense = vec![0.0; n];
            for &(col, w) in &c.coeffs {
                dense[col] += w;
            }
            rows.push((dense, c.rhs));
        }
        for i in 0..n {
            let mut lo = vec![0.0; n];
            lo[i] = 1.0;
            if p.lower[i].is_finite() {
                rows.push((lo.clone(), p.lower[i]));
            }
            if p.upper[i].is_finite() {
                rows.push((lo, p.upper[i]));
            }
        }
        let m = rows.len();
        let mut best: Option<f64> = None;
        let mut combo: Vec<usize> = (0..n).collect();
        if m < n {
            return None;
        }
        loop {
            if let Some(x) = solve_square(&rows, &combo, n) {
                if check_feasibility(p, &x, 1e-7).is_ok() {
                    let obj: f64 = x.iter().zip(&p.objective).map(|(v, c)| v * c).sum();
                    best = Some(best.map_or(obj, |b: f64| b.min(obj)));
                }
            }
            // next combination of n rows out of m
            let mut i = n;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                if combo[i] + (n - i) <= m {
                    combo[i] += 1;
                    for j in i + 1..n {
                        combo[j] = combo[j - 1] + 1;
                    }
                    if combo[n - 1] < m {
                        break;
                    }
                }
            }
        }
    }

    fn solve_square(rows: &[(Vec<f64>, f64)], combo: &[usize], n: usize) -> Option<Vec<f64>> {
        let mut a: Vec<Vec<f64>> = combo.iter().map(|&r| rows[r].0.clone()).collect();
        let mut b: Vec<f64> = combo.iter().map(|&r| rows[r].1).collect();
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| {
                a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
            })?;
            if a[piv][col].abs() < 1e-10 {
                return None;
            }
            a.swap(col, piv);
            b.swap(col, piv);
            let d = a[col][col];
            for j in 0..n {
                a[col][j] /= d;
            }
            b[col] /= d;
            for i in 0..n {
                if i != col && a[i][col].abs() > 0.0 {
                    let f = a[i][col];
                    for j in 0..n {
                        a[i][j] -= f * a[col][j];
                    }
                    b[i] -= f * b[col];
                }
            }
        }
        Some(b)
    }

    #[test]
    fn oracle_agrees_on_toy() {
        let p = toy();
        let oracle = vertex_oracle(&p).unwrap();
        let sol = solve_lp(&p, &SolveOpts::default()).unwrap();
        assert!((oracle - sol.objective).abs() < 1e-7);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn solver_matches_vertex_oracle(
            objs in proptest::collection::vec(-5.0f64..5.0, 3),
            rows in proptest::collection::vec(
                (proptest::collection::vec(-3.0f64..3.0, 3), 1.0f64..10.0), 2..5),
        ) {
            let mut p = LpProblem::new();
            for (i, &o) in objs.iter().enumerate() {
                p.add_var(format!("v{i}"), 0.0, 10.0, o).unwrap();
            }
            for (coeffs, rhs) in &rows {
                let terms: Vec<(usize, f64)> =
                    coeffs.iter().enumerate().map(|(i, &w)| (i, w)).collect();
                p.add_constraint(terms, Relation::Le, *rhs);
            }
            let oracle = vertex_oracle(&p);
            let sol = solve_lp(&p, &SolveOpts::default()).unwrap();
            match sol.status {
                LpStatus::Optimal => {
                    prop_assert!(check_feasibility(&p, &sol.values, 1e-6).is_ok());
                    let oracle = oracle.expect("oracle found no vertex");
                    prop_assert!((sol.objective - oracle).abs() < 1e-5,
                        "solver {} vs oracle {}", sol.objective, oracle);
                }
                LpStatus::Infeasible => prop_assert!(oracle.is_none()),
                other => prop_assert!(false, "unexpected status {other:?}"),
            }
        }

        #[test]
        fn objective_scales_linearly(scale in 0.5f64..4.0) {
            let mut p = toy();
            let base = solve_lp(&p, &SolveOpts::default()).unwrap().objective;
            for c in p.objective.iter_mut() {
                *c *= scale;
            }
            let scaled = solve_lp(&p, &SolveOpts::default()).unwrap().objective;
            prop_assert!((scaled - scale * base).abs() < 1e-7);
        }
    }
}
