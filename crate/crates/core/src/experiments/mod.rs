//! Reference experiments: configuration, execution, error reports and sweeps.
//!
//! A run discretizes one registry example on one node family, evaluates the
//! error `|y(ξ_k) - ỹ(ξ_k)|` (or the Caputo-derivative error for the
//! derivative examples) on `N` equispaced points of `[0, 1]` including both
//! ends, and records the mean error together with the condition number and
//! least-squares residual of the collocation system when there is one.

pub mod io;
pub mod registry;

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::basis::MultinodeBasis;
use crate::caputo::CaputoOperator;
use crate::collocation::{norm2, solve_problem};
use crate::error::{invalid, Error, Result};
use crate::nodes::{equispaced_covering, equispaced_nodes, mixed_ec, mixed_emc, NodeFamily};
use crate::shepard::ShepardEvaluator;

pub use registry::{lookup, registry, Example, ExampleId, ExampleKind, Instance};

pub const DEFAULT_GRID: usize = 100;
pub const DEFAULT_MU: u32 = 4;

/// One experiment. Unset size parameters fall back to the published
/// configuration of the example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub example_id: ExampleId,
    pub node_family: NodeFamily,
    pub d: usize,
    /// Equispaced node count.
    pub n: Option<usize>,
    /// Mixed-family break count; for equispaced sets, `n = (n_e - 1) d + 1`.
    pub n_e: Option<usize>,
    /// Equispaced overlap index.
    pub q: Option<usize>,
    pub mu: u32,
    #[serde(with = "io::sig17")]
    pub alpha: f64,
    #[serde(with = "io::sig17::option")]
    pub omega: Option<f64>,
    /// Mock-Chebyshev candidate count.
    pub n_s: Option<usize>,
    pub grid: usize,
    pub record_runtime: bool,
}

impl ExperimentConfig {
    /// The published configuration of `example` on `family`, at its first
    /// listed order.
    pub fn new(example_id: ExampleId, node_family: NodeFamily) -> Self {
        let ex = example_id.example();
        Self {
            example_id,
            node_family,
            d: ex.d,
            n: None,
            n_e: None,
            q: None,
            mu: DEFAULT_MU,
            alpha: ex.alphas[0],
            omega: (example_id == ExampleId::Ivp3).then_some(1.0),
            n_s: None,
            grid: DEFAULT_GRID,
            record_runtime: false,
        }
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }
}

/// Discretization parameters after defaults are applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub n: usize,
    pub n_e: Option<usize>,
    pub q: Option<usize>,
    pub n_s: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointError {
    #[serde(with = "io::sig17")]
    pub xi: f64,
    #[serde(with = "io::sig17")]
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub config: ExperimentConfig,
    pub resolved: Resolved,
    pub pointwise: Vec<PointError>,
    #[serde(with = "io::sig17")]
    pub mean_error: f64,
    /// 2-norm condition number of the collocation matrix.
    #[serde(with = "io::sig17::option")]
    pub cond: Option<f64>,
    /// Least-squares residual `‖A ỹ - b‖` (initial value problems).
    #[serde(with = "io::sig17::option")]
    pub residual: Option<f64>,
    /// `‖b‖` of the collocation system.
    #[serde(with = "io::sig17::option")]
    pub rhs_norm: Option<f64>,
    #[serde(with = "io::sig17::option")]
    pub runtime_ms: Option<f64>,
    pub notes: Vec<String>,
}

/// Builds the node set, covering and evaluator for `cfg`.
pub fn build_evaluator(cfg: &ExperimentConfig) -> Result<(Arc<ShepardEvaluator>, Resolved, Vec<String>)> {
    let ex = cfg.example_id.example();
    let d = cfg.d;
    if d < 1 {
        return Err(invalid("degree d must be at least 1"));
    }
    let mut notes = Vec::new();
    let (nodes, covering, resolved) = match cfg.node_family {
        NodeFamily::Equispaced => {
            let n = match (cfg.n, cfg.n_e) {
                (Some(n), _) => n,
                (None, Some(n_e)) if n_e >= 2 => (n_e - 1) * d + 1,
                (None, Some(n_e)) => return Err(invalid(format!("n_e must be at least 2, got {n_e}"))),
                (None, None) if ex.id == ExampleId::Ivp3 => (ex.n_e_for(cfg.omega) - 1) * d + 1,
                (None, None) => ex.sizes.n(d),
            };
            let q = match cfg.q {
                Some(q) => q,
                None => {
                    let (q, replaced) = ex.equispaced_q(d);
                    if replaced {
                        notes.push(format!(
                            "published q={} violates q < d for d={d}; ran the nearest feasible q={q}",
                            ex.q.unwrap_or_default()
                        ));
                    }
                    q
                }
            };
            let x = equispaced_nodes(n, 1.0)?;
            let c = equispaced_covering(n, d, q)?;
            (x, c, Resolved { n, n_e: None, q: Some(q), n_s: None })
        }
        NodeFamily::MixedEc | NodeFamily::MixedEmc => {
            if cfg.q.is_some() {
                return Err(invalid("q applies to equispaced nodes only"));
            }
            let n_e = cfg.n_e.unwrap_or_else(|| ex.n_e_for(cfg.omega));
            if cfg.node_family == NodeFamily::MixedEc {
                if cfg.n_s.is_some() {
                    return Err(invalid("n_s applies to mixed-emc nodes only"));
                }
                let (x, c) = mixed_ec(n_e, d, 1.0)?;
                let n = x.len();
                (x, c, Resolved { n, n_e: Some(n_e), q: None, n_s: None })
            } else {
                let n_s = cfg.n_s.unwrap_or_else(|| ex.n_s(d));
                let (x, c) = mixed_emc(n_e, d, n_s, 1.0)?;
                let n = x.len();
                (x, c, Resolved { n, n_e: Some(n_e), q: None, n_s: Some(n_s) })
            }
        }
    };
    if let Some(n) = cfg.n {
        if cfg.node_family != NodeFamily::Equispaced && n != resolved.n {
            return Err(invalid(format!("n={n} does not match the {} node count {}", cfg.node_family, resolved.n)));
        }
    }
    let basis = MultinodeBasis::new(cfg.mu, nodes, covering)?;
    Ok((Arc::new(ShepardEvaluator::new(basis)), resolved, notes))
}

/// `N` equispaced points of `[0, T]` including both ends.
pub fn evaluation_grid(count: usize, t_end: f64) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(invalid(format!("evaluation grid needs at least 2 points, got {count}")));
    }
    let last = (count - 1) as f64;
    Ok((0..count).map(|k| if k == count - 1 { t_end } else { k as f64 / last * t_end }).collect())
}

fn describe(cfg: &ExperimentConfig) -> String {
    format!("{} on {} nodes (d={}, alpha={})", cfg.example_id, cfg.node_family, cfg.d, cfg.alpha)
}

/// Runs one experiment.
pub fn run(cfg: &ExperimentConfig) -> Result<ErrorReport> {
    run_inner(cfg).map_err(|e| e.context(describe(cfg)))
}

fn run_inner(cfg: &ExperimentConfig) -> Result<ErrorReport> {
    let start = Instant::now();
    let ex = cfg.example_id.example();
    let instance = ex.instance(cfg.alpha, cfg.omega)?;
    let grid = evaluation_grid(cfg.grid, 1.0)?;
    let (ev, resolved, notes) = build_evaluator(cfg)?;
    let exact = instance.exact().ok_or_else(|| invalid("example has no exact solution"))?;

    let (approx, cond, residual, rhs_norm) = match &instance {
        Instance::Derivative { f, .. } => {
            let samples: Vec<f64> = ev.nodes().as_slice().iter().map(|&x| f(x)).collect();
            let op = CaputoOperator::new(cfg.alpha, ev.clone())?;
            let approx = grid.iter().map(|&x| op.apply(&samples, x)).collect::<Result<Vec<_>>>()?;
            (approx, None, None, None)
        }
        Instance::Fde(problem) => {
            let (system, solution) = solve_problem(problem, ev.clone())?;
            let approx = grid.iter().map(|&x| solution.eval(x)).collect::<Result<Vec<_>>>()?;
            (approx, Some(system.cond()), solution.residual(), Some(norm2(system.rhs())))
        }
    };

    let pointwise: Vec<PointError> =
        grid.iter().zip(&approx).map(|(&xi, &a)| PointError { xi, error: (exact(xi) - a).abs() }).collect();
    let mean_error = pointwise.iter().map(|p| p.error).sum::<f64>() / pointwise.len() as f64;
    let runtime_ms = cfg.record_runtime.then(|| start.elapsed().as_secs_f64() * 1e3);
    Ok(ErrorReport { config: cfg.clone(), resolved, pointwise, mean_error, cond, residual, rhs_norm, runtime_ms, notes })
}

/// The parameter varied by a sweep, with its values.
#[derive(Debug, Clone, PartialEq)]
pub enum Vary {
    D(Vec<usize>),
    Alpha(Vec<f64>),
    NodeFamily(Vec<NodeFamily>),
    N(Vec<usize>),
    Ne(Vec<usize>),
    Q(Vec<usize>),
    Omega(Vec<f64>),
}

impl Vary {
    /// Parses `name` (`d`, `alpha`, `nodes`, `n`, `ne`, `q`, `omega`) with a
    /// comma-separated value list.
    pub fn parse(name: &str, values: &str) -> Result<Self> {
        fn list<T: std::str::FromStr>(values: &str) -> Result<Vec<T>> {
            values
                .split(',')
                .map(|v| v.trim().parse::<T>().map_err(|_| invalid(format!("cannot parse sweep value `{v}`"))))
                .collect()
        }
        let vary = match name {
            "d" => Vary::D(list(values)?),
            "alpha" => Vary::Alpha(list(values)?),
            "nodes" | "node-family" | "node_family" => Vary::NodeFamily(list(values)?),
            "n" => Vary::N(list(values)?),
            "ne" | "n_e" | "n-e" => Vary::Ne(list(values)?),
            "q" => Vary::Q(list(values)?),
            "omega" => Vary::Omega(list(values)?),
            other => return Err(invalid(format!("unknown sweep parameter `{other}`"))),
        };
        if vary.is_empty() {
            return Err(invalid("sweep needs at least one value"));
        }
        Ok(vary)
    }

    pub fn len(&self) -> usize {
        match self {
            Vary::D(v) | Vary::N(v) | Vary::Ne(v) | Vary::Q(v) => v.len(),
            Vary::Alpha(v) | Vary::Omega(v) => v.len(),
            Vary::NodeFamily(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The configurations of the sweep, in order.
    pub fn configs(&self, base: &ExperimentConfig) -> Vec<ExperimentConfig> {
        (0..self.len())
            .map(|k| {
                let mut c = base.clone();
                match self {
                    Vary::D(v) => c.d = v[k],
                    Vary::Alpha(v) => c.alpha = v[k],
                    Vary::NodeFamily(v) => {
                        c.node_family = v[k];
                        if c.node_family != NodeFamily::Equispaced {
                            c.n = None;
                            c.q = None;
                        }
                        if c.node_family != NodeFamily::MixedEmc {
                            c.n_s = None;
                        }
                    }
                    Vary::N(v) => c.n = Some(v[k]),
                    Vary::Ne(v) => c.n_e = Some(v[k]),
                    Vary::Q(v) => c.q = Some(v[k]),
                    Vary::Omega(v) => c.omega = Some(v[k]),
                }
                c
            })
            .collect()
    }
}

/// Reports of a sweep. When a run fails, the sweep stops there and `failure`
/// carries the error; `reports` holds the runs completed before it.
#[derive(Debug)]
pub struct SweepResult {
    pub reports: Vec<ErrorReport>,
    pub failure: Option<Error>,
}

impl SweepResult {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn sweep(base: &ExperimentConfig, vary: &Vary) -> SweepResult {
    let mut reports = Vec::with_capacity(vary.len());
    for cfg in vary.configs(base) {
        match run(&cfg) {
            Ok(r) => reports.push(r),
            Err(e) => return SweepResult { reports, failure: Some(e) },
        }
    }
    SweepResult { reports, failure: None }
}
