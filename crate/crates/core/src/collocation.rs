//! Collocation solvers for the Bagley-Torvik equation
//! `ρ y″ + λ D^α y + σ y = h` on `(0, T)`.
//!
//! Replacing `y` by `ỹ = Σ_i g_i y_i` and collocating at the nodes gives
//! `Σ_i A_i(x_j) y_i = h(x_j)` with
//!
//! ```text
//! A_i(x) = ρ(x) g_i″(x) + λ(x) (D^α g_i)(x) + σ(x) g_i(x).
//! ```
//!
//! Boundary problems eliminate `y_1` and `y_n` and collocate at the interior
//! nodes, which gives a square system. Initial value problems eliminate `y_1`,
//! collocate at `x_2..x_n` and append the slope condition `ỹ′(0) = γ₂`, which
//! gives an overdetermined `n × (n-1)` system solved in the least-squares sense.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::caputo::{integer_order, CaputoOperator};
use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::shepard::{dot, ShepardEvaluator};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A coefficient of the equation, constant or a function of `x`.
#[derive(Clone)]
pub enum Coefficient {
    Constant(f64),
    Function(ScalarFn),
}

impl Coefficient {
    pub fn function(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Coefficient::Function(Arc::new(f))
    }

    pub fn at(&self, x: f64) -> f64 {
        match self {
            Coefficient::Constant(c) => *c,
            Coefficient::Function(f) => f(x),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Coefficient::Constant(c) if *c == 0.0)
    }
}

impl From<f64> for Coefficient {
    fn from(c: f64) -> Self {
        Coefficient::Constant(c)
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Constant(c) => write!(f, "Constant({c})"),
            Coefficient::Function(_) => f.write_str("Function(..)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Boundary,
    Initial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conditions {
    /// `y(0) = left`, `y(T) = right`.
    Boundary { left: f64, right: f64 },
    /// `y(0) = value`, `y′(0) = slope`.
    Initial { value: f64, slope: f64 },
}

impl Conditions {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Conditions::Boundary { .. } => ProblemKind::Boundary,
            Conditions::Initial { .. } => ProblemKind::Initial,
        }
    }
}

#[derive(Clone)]
pub struct FdeProblem {
    pub rho: Coefficient,
    pub lambda: Coefficient,
    pub sigma: Coefficient,
    pub h: ScalarFn,
    pub alpha: f64,
    pub t_end: f64,
    pub conditions: Conditions,
    pub exact: Option<ScalarFn>,
}

impl fmt::Debug for FdeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FdeProblem")
            .field("rho", &self.rho)
            .field("lambda", &self.lambda)
            .field("sigma", &self.sigma)
            .field("alpha", &self.alpha)
            .field("t_end", &self.t_end)
            .field("conditions", &self.conditions)
            .field("exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

impl FdeProblem {
    pub fn new(
        rho: impl Into<Coefficient>,
        lambda: impl Into<Coefficient>,
        sigma: impl Into<Coefficient>,
        alpha: f64,
        h: impl Fn(f64) -> f64 + Send + Sync + 'static,
        conditions: Conditions,
    ) -> Result<Self> {
        integer_order(alpha)?;
        Ok(Self {
            rho: rho.into(),
            lambda: lambda.into(),
            sigma: sigma.into(),
            h: Arc::new(h),
            alpha,
            t_end: 1.0,
            conditions,
            exact: None,
        })
    }

    pub fn with_t_end(mut self, t_end: f64) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(invalid(format!("right endpoint must be positive, got {t_end}")));
        }
        self.t_end = t_end;
        Ok(self)
    }

    pub fn with_exact(mut self, exact: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(exact));
        self
    }

    pub fn kind(&self) -> ProblemKind {
        self.conditions.kind()
    }
}

/// `A_i(x)` for every node `i`.
pub fn row_coefficients(problem: &FdeProblem, op: &CaputoOperator, x: f64) -> Result<Vec<f64>> {
    if x <= 0.0 {
        return Err(invalid(format!("collocation abscissa must be positive, got {x}")));
    }
    let ev = op.evaluator();
    let rows = ev.cardinal_rows(x, 2)?;
    let (rho, lambda, sigma) = (problem.rho.at(x), problem.lambda.at(x), problem.sigma.at(x));
    let mut out: Vec<f64> = rows[2].iter().zip(&rows[0]).map(|(g2, g0)| rho * g2 + sigma * g0).collect();
    if !problem.lambda.is_zero() {
        for (a, c) in out.iter_mut().zip(op.row(x)?) {
            *a += lambda * c;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct CollocationSystem {
    kind: ProblemKind,
    matrix: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    cond: f64,
    known: (f64, f64),
}

impl CollocationSystem {
    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    /// Row-major collocation matrix.
    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// 2-norm condition number `σ_max / σ_min`.
    pub fn cond(&self) -> f64 {
        self.cond
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.matrix.len(), self.matrix.first().map_or(0, Vec::len))
    }
}

fn check_operator(problem: &FdeProblem, op: &CaputoOperator) -> Result<()> {
    if op.alpha() != problem.alpha {
        return Err(invalid(format!(
            "operator order {} differs from the problem order {}",
            op.alpha(),
            problem.alpha
        )));
    }
    let t = op.evaluator().nodes().t_end();
    if t != problem.t_end {
        return Err(invalid(format!("node set ends at {t}, problem at {}", problem.t_end)));
    }
    Ok(())
}

fn collocation_rows(problem: &FdeProblem, op: &CaputoOperator, xs: &[f64]) -> Result<Vec<Vec<f64>>> {
    xs.par_iter().map(|&x| row_coefficients(problem, op, x)).collect()
}

/// Square system over the interior unknowns `y_2..y_{n-1}`:
/// `A[j][i] = A_{i+1}(x_{j+1})` and `b_j = h(x_{j+1}) - A_1 γ₁ - A_n γ₂`
/// (indices 1-based over the nodes, 0-based over the system).
pub fn assemble_bvp(problem: &FdeProblem, op: &CaputoOperator) -> Result<CollocationSystem> {
    let Conditions::Boundary { left, right } = problem.conditions else {
        return Err(invalid("assemble_bvp needs boundary conditions"));
    };
    check_operator(problem, op)?;
    let x = op.evaluator().nodes().as_slice();
    let n = x.len();
    if n < 3 {
        return Err(invalid(format!("a boundary problem needs at least 3 nodes, got {n}")));
    }
    let full = collocation_rows(problem, op, &x[1..n - 1])?;
    let mut matrix = Vec::with_capacity(n - 2);
    let mut rhs = Vec::with_capacity(n - 2);
    for (row, &xj) in full.into_iter().zip(&x[1..n - 1]) {
        rhs.push((problem.h)(xj) - row[0] * left - row[n - 1] * right);
        matrix.push(row[1..n - 1].to_vec());
    }
    let cond = linalg::condition_number(&matrix);
    Ok(CollocationSystem { kind: ProblemKind::Boundary, matrix, rhs, cond, known: (left, right) })
}

/// Overdetermined system over `y_2..y_n`: collocation rows at `x_2..x_n`
/// followed by `Σ_i g_i′(0) y_i = γ₂ - g_1′(0) γ₁`.
pub fn assemble_ivp(problem: &FdeProblem, op: &CaputoOperator) -> Result<CollocationSystem> {
    let Conditions::Initial { value, slope } = problem.conditions else {
        return Err(invalid("assemble_ivp needs initial conditions"));
    };
    check_operator(problem, op)?;
    let ev = op.evaluator();
    let x = ev.nodes().as_slice();
    let n = x.len();
    if n < 2 {
        return Err(invalid(format!("an initial value problem needs at least 2 nodes, got {n}")));
    }
    let full = collocation_rows(problem, op, &x[1..])?;
    let mut matrix = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for (row, &xj) in full.into_iter().zip(&x[1..]) {
        rhs.push((problem.h)(xj) - row[0] * value);
        matrix.push(row[1..].to_vec());
    }
    let slope_row = ev.cardinal_row(0.0, 1)?;
    rhs.push(slope - slope_row[0] * value);
    matrix.push(slope_row[1..].to_vec());
    let cond = linalg::condition_number(&matrix);
    Ok(CollocationSystem { kind: ProblemKind::Initial, matrix, rhs, cond, known: (value, slope) })
}

pub fn assemble(problem: &FdeProblem, op: &CaputoOperator) -> Result<CollocationSystem> {
    match problem.kind() {
        ProblemKind::Boundary => assemble_bvp(problem, op),
        ProblemKind::Initial => assemble_ivp(problem, op),
    }
}

/// Nodal values of the collocation solution, evaluable through the Shepard
/// cardinal functions.
#[derive(Debug, Clone)]
pub struct CollocationSolution {
    y: Vec<f64>,
    residual: Option<f64>,
    cond: f64,
    ev: Arc<ShepardEvaluator>,
}

impl CollocationSolution {
    /// `y_1..y_n`, with the prescribed values filled in.
    pub fn values(&self) -> &[f64] {
        &self.y
    }

    /// Least-squares residual norm `‖Ay - b‖₂` (initial value problems only).
    pub fn residual(&self) -> Option<f64> {
        self.residual
    }

    pub fn cond(&self) -> f64 {
        self.cond
    }

    pub fn evaluator(&self) -> &Arc<ShepardEvaluator> {
        &self.ev
    }

    /// `ỹ(x) = Σ_i g_i(x) y_i`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.ev.eval(&self.y, x, 0)
    }

    pub fn derivative(&self, x: f64, order: usize) -> Result<f64> {
        self.ev.eval(&self.y, x, order)
    }
}

/// LU for boundary systems, Householder least squares for initial value
/// systems.
pub fn solve(system: &CollocationSystem, ev: Arc<ShepardEvaluator>) -> Result<CollocationSolution> {
    let n = ev.len();
    let (rows, cols) = system.shape();
    let (y, residual) = match system.kind {
        ProblemKind::Boundary => {
            if rows != n - 2 || cols != n - 2 {
                return Err(invalid(format!("system shape {rows}x{cols} does not match {n} nodes")));
            }
            let inner = linalg::lu_solve(&system.matrix, &system.rhs)
                .map_err(|_| Error::Singular { cond: system.cond })?;
            let mut y = Vec::with_capacity(n);
            y.push(system.known.0);
            y.extend(inner);
            y.push(system.known.1);
            (y, None)
        }
        ProblemKind::Initial => {
            if rows != n || cols != n - 1 {
                return Err(invalid(format!("system shape {rows}x{cols} does not match {n} nodes")));
            }
            let (inner, res) = linalg::least_squares(&system.matrix, &system.rhs)
                .map_err(|_| Error::RankDeficient { cond: system.cond })?;
            let mut y = Vec::with_capacity(n);
            y.push(system.known.0);
            y.extend(inner);
            (y, Some(res))
        }
    };
    Ok(CollocationSolution { y, residual, cond: system.cond, ev })
}

/// Builds the Caputo operator, assembles and solves in one step.
pub fn solve_problem(problem: &FdeProblem, ev: Arc<ShepardEvaluator>) -> Result<(CollocationSystem, CollocationSolution)> {
    let op = CaputoOperator::new(problem.alpha, ev.clone())?;
    let system = assemble(problem, &op)?;
    let solution = solve(&system, ev)?;
    Ok((system, solution))
}

/// `‖v‖₂`, used to scale least-squares residuals.
pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::MultinodeBasis;
    use crate::caputo::exact_monomial;
    use crate::nodes::{equispaced_covering, equispaced_nodes, mixed_ec, mixed_emc};

    fn ev_mixed(n_e: usize, d: usize) -> Arc<ShepardEvaluator> {
        let (x, c) = mixed_ec(n_e, d, 1.0).unwrap();
        Arc::new(ShepardEvaluator::new(MultinodeBasis::new(4, x, c).unwrap()))
    }

    fn ev_equi(n: usize, d: usize, q: usize) -> Arc<ShepardEvaluator> {
        let x = equispaced_nodes(n, 1.0).unwrap();
        let c = equispaced_covering(n, d, q).unwrap();
        Arc::new(ShepardEvaluator::new(MultinodeBasis::new(4, x, c).unwrap()))
    }

    fn example4() -> FdeProblem {
        FdeProblem::new(1.0, 1.0, 1.0, 1.5, |x| 1.0 + x, Conditions::Boundary { left: 1.0, right: 2.0 })
            .unwrap()
            .with_exact(|x| 1.0 + x)
    }

    #[test]
    fn row_reductions() {
        let ev = ev_mixed(3, 3);
        let op = CaputoOperator::new(1.5, ev.clone()).unwrap();
        let bc = Conditions::Boundary { left: 0.0, right: 0.0 };
        let second = FdeProblem::new(1.0, 0.0, 0.0, 1.5, |_| 0.0, bc).unwrap();
        let x = 0.4321;
        assert_eq!(row_coefficients(&second, &op, x).unwrap(), ev.cardinal_row(x, 2).unwrap());

        let identity = FdeProblem::new(0.0, 0.0, 1.0, 1.5, |_| 0.0, bc).unwrap();
        for (j, &xj) in ev.nodes().as_slice().iter().enumerate().skip(1) {
            let row = row_coefficients(&identity, &op, xj).unwrap();
            for (i, a) in row.iter().enumerate() {
                let delta = if i == j { 1.0 } else { 0.0 };
                assert!((a - delta).abs() < 1e-13);
            }
        }
        assert!(row_coefficients(&identity, &op, 0.0).is_err());
    }

    #[test]
    fn example4_operator_identity() {
        let p = example4();
        let ev = ev_mixed(3, 3);
        let op = CaputoOperator::new(1.5, ev.clone()).unwrap();
        let y: Vec<f64> = ev.nodes().as_slice().iter().map(|x| 1.0 + x).collect();
        for &xj in &ev.nodes().as_slice()[1..] {
            let got = dot(&row_coefficients(&p, &op, xj).unwrap(), &y);
            assert!((got - (1.0 + xj)).abs() < 1e-10);
        }
    }

    #[test]
    fn bvp_dimensions_and_homogeneous_rhs() {
        let ev = ev_mixed(3, 3);
        assert_eq!(ev.len(), 7);
        let op = CaputoOperator::new(1.5, ev.clone()).unwrap();
        assert_eq!(assemble_bvp(&example4(), &op).unwrap().shape(), (5, 5));

        let h = |x: f64| x.sin() + 2.0;
        let p = FdeProblem::new(1.0, 1.0, 1.0, 1.5, h, Conditions::Boundary { left: 0.0, right: 0.0 }).unwrap();
        let sys = assemble_bvp(&p, &op).unwrap();
        for (b, &x) in sys.rhs().iter().zip(&ev.nodes().as_slice()[1..6]) {
            assert_eq!(*b, h(x));
        }
        assert!(sys.cond() >= 1.0);
        assert!(assemble_ivp(&p, &op).is_err());
    }

    #[test]
    fn example4_is_reproduced() {
        for ev in [ev_equi(8, 3, 2), ev_mixed(3, 3)] {
            let p = example4();
            let (sys, sol) = solve_problem(&p, ev.clone()).unwrap();
            assert_eq!(sol.values()[0], 1.0);
            assert_eq!(*sol.values().last().unwrap(), 2.0);
            assert!(sol.residual().is_none());
            for i in 0..=50 {
                let x = i as f64 / 50.0;
                assert!((sol.eval(x).unwrap() - (1.0 + x)).abs() < 1e-12);
            }
            // the collocation equations hold for the computed samples
            let op = CaputoOperator::new(1.5, ev.clone()).unwrap();
            for &xj in &ev.nodes().as_slice()[1..ev.len() - 1] {
                let lhs = dot(&row_coefficients(&p, &op, xj).unwrap(), sol.values());
                assert!((lhs - (1.0 + xj)).abs() <= 1e-10 * (1.0 + xj));
            }
            assert!(sys.cond() > 1.0);
        }
    }

    #[test]
    fn manufactured_quadratic_ivp() {
        // y = x², ρ = λ = 1, σ = 0, α = 3/2
        let h = |x: f64| 2.0 + exact_monomial(2.0, 1.5, x);
        let p = FdeProblem::new(1.0, 1.0, 0.0, 1.5, h, Conditions::Initial { value: 0.0, slope: 0.0 }).unwrap();
        for ev in [ev_mixed(4, 4), ev_equi(13, 4, 1)] {
            let (sys, sol) = solve_problem(&p, ev.clone()).unwrap();
            let n = ev.len();
            assert_eq!(sys.shape(), (n, n - 1));
            assert_eq!(*sys.rhs().last().unwrap(), 0.0);
            assert!(sol.residual().unwrap() <= 1e-10 * norm2(sys.rhs()));
            for i in 0..=40 {
                let x = i as f64 / 40.0;
                assert!((sol.eval(x).unwrap() - x * x).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn ivp_with_nonzero_initial_data() {
        // y = 1 + 2x + x³, α = 1/2
        let y = |x: f64| 1.0 + 2.0 * x + x.powi(3);
        let h = move |x: f64| 6.0 * x + 2.0 * exact_monomial(1.0, 0.5, x) + exact_monomial(3.0, 0.5, x) + 0.5 * y(x);
        let p = FdeProblem::new(1.0, 1.0, 0.5, 0.5, h, Conditions::Initial { value: 1.0, slope: 2.0 }).unwrap();
        let (x, c) = mixed_emc(4, 4, 15, 1.0).unwrap();
        let ev = Arc::new(ShepardEvaluator::new(MultinodeBasis::new(4, x, c).unwrap()));
        let (_, sol) = solve_problem(&p, ev).unwrap();
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            assert!((sol.eval(x).unwrap() - y(x)).abs() < 1e-11);
        }
        assert!((sol.derivative(0.0, 1).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn variable_coefficient_reduces_to_constant() {
        let ev = ev_mixed(3, 4);
        let op = CaputoOperator::new(1.5, ev.clone()).unwrap();
        let bc = Conditions::Boundary { left: 0.0, right: 0.0 };
        let a = FdeProblem::new(1.0, 0.3, 2.0, 1.5, |_| 0.0, bc).unwrap();
        let b = FdeProblem::new(1.0, 0.3, Coefficient::function(|_| 2.0), 1.5, |_| 0.0, bc).unwrap();
        assert_eq!(row_coefficients(&a, &op, 0.6).unwrap(), row_coefficients(&b, &op, 0.6).unwrap());
    }

    #[test]
    fn failures() {
        let ev = ev_mixed(3, 3);
        let bc = Conditions::Boundary { left: 0.0, right: 1.0 };
        let degenerate = FdeProblem::new(0.0, 0.0, 0.0, 1.5, |_| 1.0, bc).unwrap();
        let err = solve_problem(&degenerate, ev.clone()).unwrap_err();
        assert!(err.is_solver_failure(), "{err}");
        assert!(FdeProblem::new(1.0, 1.0, 1.0, 1.0, |_| 0.0, bc).is_err());
        assert!(example4().with_t_end(-1.0).is_err());
        let op = CaputoOperator::new(0.5, ev).unwrap();
        assert!(assemble_bvp(&example4(), &op).is_err());
    }
}
