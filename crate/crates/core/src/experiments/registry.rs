//! The twelve reference problems: three Caputo derivatives of known functions,
//! six boundary value problems and three initial value problems.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::caputo::{exact_monomial, integer_order};
use crate::collocation::{Coefficient, Conditions, FdeProblem, ScalarFn};
use crate::error::{invalid, Error, Result};
use crate::specfun::{erf, fresnel, gamma_fn, mittag_leffler, mittag_leffler_real, SeriesControl};

/// The fractional orders used by the derivative examples.
pub const DERIVATIVE_ALPHAS: [f64; 6] = [0.2, 0.5, 0.8, 1.2, 1.5, 1.8];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExampleId {
    #[serde(rename = "deriv-sin")]
    DerivSin,
    #[serde(rename = "deriv-x92")]
    DerivX92,
    #[serde(rename = "deriv-exp2x")]
    DerivExp2x,
    #[serde(rename = "bvp-1")]
    Bvp1,
    #[serde(rename = "bvp-2")]
    Bvp2,
    #[serde(rename = "bvp-3")]
    Bvp3,
    #[serde(rename = "bvp-4")]
    Bvp4,
    #[serde(rename = "bvp-5")]
    Bvp5,
    #[serde(rename = "bvp-6")]
    Bvp6,
    #[serde(rename = "ivp-1")]
    Ivp1,
    #[serde(rename = "ivp-2")]
    Ivp2,
    #[serde(rename = "ivp-3")]
    Ivp3,
}

impl ExampleId {
    pub const ALL: [ExampleId; 12] = [
        ExampleId::DerivSin,
        ExampleId::DerivX92,
        ExampleId::DerivExp2x,
        ExampleId::Bvp1,
        ExampleId::Bvp2,
        ExampleId::Bvp3,
        ExampleId::Bvp4,
        ExampleId::Bvp5,
        ExampleId::Bvp6,
        ExampleId::Ivp1,
        ExampleId::Ivp2,
        ExampleId::Ivp3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::DerivSin => "deriv-sin",
            ExampleId::DerivX92 => "deriv-x92",
            ExampleId::DerivExp2x => "deriv-exp2x",
            ExampleId::Bvp1 => "bvp-1",
            ExampleId::Bvp2 => "bvp-2",
            ExampleId::Bvp3 => "bvp-3",
            ExampleId::Bvp4 => "bvp-4",
            ExampleId::Bvp5 => "bvp-5",
            ExampleId::Bvp6 => "bvp-6",
            ExampleId::Ivp1 => "ivp-1",
            ExampleId::Ivp2 => "ivp-2",
            ExampleId::Ivp3 => "ivp-3",
        }
    }

    pub fn kind(self) -> ExampleKind {
        match self {
            ExampleId::DerivSin | ExampleId::DerivX92 | ExampleId::DerivExp2x => ExampleKind::Derivative,
            ExampleId::Ivp1 | ExampleId::Ivp2 | ExampleId::Ivp3 => ExampleKind::Initial,
            _ => ExampleKind::Boundary,
        }
    }

    pub fn example(self) -> Example {
        example(self)
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExampleKind {
    Derivative,
    Boundary,
    Initial,
}

impl ExampleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExampleKind::Derivative => "derivative",
            ExampleKind::Boundary => "bvp",
            ExampleKind::Initial => "ivp",
        }
    }
}

/// Node-set sizes in the published configuration of an example.
#[derive(Debug, Clone, PartialEq)]
pub enum SizeRule {
    /// Mixed sets use these `n_e`; equispaced sets use `n = (n_e - 1) d + 1`.
    Matched(Vec<usize>),
    /// Mixed sets use `n_e[k]`, equispaced sets use `n[k]`.
    Separate { n_e: Vec<usize>, n: Vec<usize> },
}

impl SizeRule {
    /// First (smallest) mixed break count.
    pub fn n_e(&self) -> usize {
        match self {
            SizeRule::Matched(v) => v[0],
            SizeRule::Separate { n_e, .. } => n_e[0],
        }
    }

    /// First equispaced node count for degree `d`.
    pub fn n(&self, d: usize) -> usize {
        match self {
            SizeRule::Matched(v) => (v[0] - 1) * d + 1,
            SizeRule::Separate { n, .. } => n[0],
        }
    }
}

/// Static description of a reference problem and its published configuration.
#[derive(Debug, Clone)]
pub struct Example {
    pub id: ExampleId,
    pub description: &'static str,
    /// Fractional orders studied; a single entry means α is fixed.
    pub alphas: Vec<f64>,
    /// Degree used for single runs.
    pub d: usize,
    /// Degrees swept in the published error curves.
    pub d_range: (usize, usize),
    pub sizes: SizeRule,
    /// Equispaced overlap index as published, before any feasibility fix.
    pub q: Option<usize>,
    /// Values of ω studied (ivp-3 only).
    pub omegas: Vec<f64>,
}

impl Example {
    pub fn kind(&self) -> ExampleKind {
        self.id.kind()
    }

    /// The fixed order, if the example has one.
    pub fn fixed_alpha(&self) -> Option<f64> {
        (self.alphas.len() == 1).then(|| self.alphas[0])
    }

    /// The published `q`, or a default of `d - 1` when the example gives none.
    /// Returns the `q` to run and whether the published value had to be
    /// replaced because it violates `q < d`.
    pub fn equispaced_q(&self, d: usize) -> (usize, bool) {
        match self.q {
            Some(q) if q < d => (q, false),
            Some(_) => (d - 1, true),
            None if self.kind() == ExampleKind::Derivative => (0, false),
            None => (d - 1, false),
        }
    }

    /// Mock-Chebyshev candidate count for degree `d`.
    pub fn n_s(&self, d: usize) -> usize {
        match self.id {
            ExampleId::Ivp1 => 3 * (d + 1) + 5,
            _ => crate::nodes::default_candidates(d),
        }
    }

    /// Mixed break count paired with ω in ivp-3, and the first break count otherwise.
    pub fn n_e_for(&self, omega: Option<f64>) -> usize {
        if let (ExampleId::Ivp3, Some(w)) = (self.id, omega) {
            if let Some(k) = self.omegas.iter().position(|&o| (o - w).abs() < 1e-12) {
                return [3, 5, 9][k];
            }
        }
        self.sizes.n_e()
    }

    /// The problem data for one order α (and ω for ivp-3).
    pub fn instance(&self, alpha: f64, omega: Option<f64>) -> Result<Instance> {
        integer_order(alpha)?;
        if let Some(fixed) = self.fixed_alpha() {
            if alpha != fixed {
                return Err(invalid(format!("{} is defined for alpha = {fixed} only, got {alpha}", self.id)));
            }
        }
        if omega.is_some() && self.id != ExampleId::Ivp3 {
            return Err(invalid(format!("omega applies to ivp-3 only, not {}", self.id)));
        }
        instance(self.id, alpha, omega.unwrap_or(1.0))
    }
}

/// Problem data ready to be discretized.
#[derive(Clone)]
pub enum Instance {
    /// Sample `f` and compare `D^α` of the approximant with `exact`.
    Derivative { f: ScalarFn, exact: ScalarFn },
    Fde(FdeProblem),
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Derivative { .. } => f.write_str("Derivative { .. }"),
            Instance::Fde(p) => f.debug_tuple("Fde").field(p).finish(),
        }
    }
}

impl Instance {
    /// The function whose error is measured on the evaluation grid.
    pub fn exact(&self) -> Option<ScalarFn> {
        match self {
            Instance::Derivative { exact, .. } => Some(exact.clone()),
            Instance::Fde(p) => p.exact.clone(),
        }
    }
}

/// All twelve examples in order.
pub fn registry() -> Vec<Example> {
    ExampleId::ALL.into_iter().map(example).collect()
}

pub fn lookup(id: &str) -> Result<Example> {
    Ok(example(id.parse()?))
}

fn example(id: ExampleId) -> Example {
    let derivative = |description, n_e, d_hi| Example {
        id,
        description,
        alphas: DERIVATIVE_ALPHAS.to_vec(),
        d: 8,
        d_range: (2, d_hi),
        sizes: SizeRule::Matched(vec![n_e]),
        q: None,
        omegas: vec![],
    };
    let polynomial_bvp = |description, d, n, q| Example {
        id,
        description,
        alphas: vec![1.5],
        d,
        d_range: (d, d),
        sizes: SizeRule::Separate { n_e: vec![3], n: vec![n] },
        q: Some(q),
        omegas: vec![],
    };
    let sweep = |description, alphas: Vec<f64>, d_range: (usize, usize), n_e: Vec<usize>, n: Vec<usize>| Example {
        id,
        description,
        alphas,
        d: d_range.0,
        d_range,
        sizes: SizeRule::Separate { n_e, n },
        q: None,
        omegas: vec![],
    };
    match id {
        ExampleId::DerivSin => derivative("D^a sin(x)", 9, 10),
        ExampleId::DerivX92 => derivative("D^a x^(9/2)", 20, 11),
        ExampleId::DerivExp2x => derivative("D^a exp(2x)", 10, 10),
        ExampleId::Bvp1 => polynomial_bvp("y'' + D^(3/2) y + y = 1 + x, y = 1 + x", 3, 8, 2),
        ExampleId::Bvp2 => polynomial_bvp("y'' + 8/17 D^(3/2) y + 13/51 y = h, quintic y", 6, 13, 7),
        ExampleId::Bvp3 => polynomial_bvp("D^(3/2) y + y = h, y = x^2 - x", 3, 7, 2),
        ExampleId::Bvp4 => polynomial_bvp("D^(3/2) y + e^(-3pi)/sqrt(pi) y = h, quintic y", 6, 8, 2),
        ExampleId::Bvp5 => sweep(
            "D^a y + 3/57 y = h, y = x^(a+1)/Gamma(a+1)",
            vec![1.2, 1.4, 1.6, 1.8],
            (3, 12),
            vec![3],
            vec![100],
        ),
        ExampleId::Bvp6 => sweep(
            "D^(3/2) y + sigma(x) y = h, y = 1/(1+x)^2",
            vec![1.5],
            (3, 11),
            vec![6, 12, 18],
            vec![40, 80, 120],
        ),
        ExampleId::Ivp1 => sweep(
            "y'' + 1/100 D^(3/2) y + 1/200 y = h, y = x^(5/2)",
            vec![1.5],
            (3, 20),
            vec![14, 21, 28],
            vec![40, 80, 160],
        ),
        ExampleId::Ivp2 => sweep(
            "y'' + 1/2 D^(3/2) y + 1/2 y = h, y = e^x",
            vec![1.5],
            (3, 20),
            vec![3, 13, 23],
            vec![20, 40, 80],
        ),
        ExampleId::Ivp3 => Example {
            omegas: vec![1.0, 2.0 * PI, 4.0 * PI],
            ..sweep(
                "y'' + D^(3/2) y + y = h, y = sin(omega x)",
                vec![1.5],
                (3, 11),
                vec![3, 5, 9],
                vec![20, 40, 80, 160],
            )
        },
    }
}

fn scalar(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> ScalarFn {
    Arc::new(f)
}

/// `D^α sin x = i^m x^{m-α} / (2i) · [E_{1,m-α+1}(ix) - (-1)^m E_{1,m-α+1}(-ix)]`.
pub fn caputo_sin(alpha: f64, x: f64) -> Result<f64> {
    let m = integer_order(alpha)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let delta = m as f64 - alpha + 1.0;
    let ctl = SeriesControl::default();
    let i = Complex64::new(0.0, 1.0);
    let plus = mittag_leffler(1.0, delta, i * x, &ctl)?;
    let minus = mittag_leffler(1.0, delta, -i * x, &ctl)?;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let v = i.powu(m as u32) * x.powf(m as f64 - alpha) / (2.0 * i) * (plus - sign * minus);
    Ok(v.re)
}

/// `D^α e^{2x} = 2^m x^{m-α} E_{1,m-α+1}(2x)`.
pub fn caputo_exp2x(alpha: f64, x: f64) -> Result<f64> {
    let m = integer_order(alpha)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let e = mittag_leffler_real(1.0, m as f64 - alpha + 1.0, 2.0 * x)?;
    Ok(2f64.powi(m as i32) * x.powf(m as f64 - alpha) * e)
}

fn instance(id: ExampleId, alpha: f64, omega: f64) -> Result<Instance> {
    let sqrt_pi = PI.sqrt();
    let bvp = |left, right| Conditions::Boundary { left, right };
    let ivp = |value, slope| Conditions::Initial { value, slope };
    let problem = match id {
        ExampleId::DerivSin => {
            return Ok(Instance::Derivative {
                f: scalar(f64::sin),
                exact: scalar(move |x| caputo_sin(alpha, x).unwrap_or(f64::NAN)),
            })
        }
        ExampleId::DerivX92 => {
            return Ok(Instance::Derivative {
                f: scalar(|x: f64| x.powf(4.5)),
                exact: scalar(move |x| exact_monomial(4.5, alpha, x)),
            })
        }
        ExampleId::DerivExp2x => {
            return Ok(Instance::Derivative {
                f: scalar(|x: f64| (2.0 * x).exp()),
                exact: scalar(move |x| caputo_exp2x(alpha, x).unwrap_or(f64::NAN)),
            })
        }
        ExampleId::Bvp1 => FdeProblem::new(1.0, 1.0, 1.0, alpha, |x| 1.0 + x, bvp(1.0, 2.0))?.with_exact(|x| 1.0 + x),
        ExampleId::Bvp2 => {
            let h = move |x: f64| {
                let p = -2373.0 + x * (10640.0 + x * (-16240.0 + x * 8000.0));
                let q = -34578.0 + x * (233262.0 + x * (-448107.0 + x * (264880.0 + x * (-9425.0 + x * 3250.0))));
                (96.0 * x.sqrt() * p + 7.0 * sqrt_pi * q) / (89250.0 * sqrt_pi)
            };
            let exact =
                |x: f64| x * (27.0 / 125.0 + x * (-339.0 / 250.0 + x * (76.0 / 25.0 + x * (-29.0 / 10.0 + x))));
            FdeProblem::new(1.0, 8.0 / 17.0, 13.0 / 51.0, alpha, h, bvp(0.0, 0.0))?.with_exact(exact)
        }
        ExampleId::Bvp3 => {
            let g = gamma_fn(1.5)?;
            let h = move |x: f64| 2.0 * x.sqrt() / g + x * x - x;
            FdeProblem::new(0.0, 1.0, 1.0, alpha, h, bvp(0.0, 0.0))?.with_exact(|x| x * x - x)
        }
        ExampleId::Bvp4 => {
            let s = (-3.0 * PI).exp() / sqrt_pi;
            let h = move |x: f64| {
                s / 40.0 * x * x * (40.0 * x.powi(3) - 74.0 * x + 33.0)
                    + x.sqrt() / (70.0 * sqrt_pi) * (1280.0 * x.powi(3) - 1036.0 * x + 231.0)
            };
            let exact = |x: f64| (x.powi(3) - 37.0 / 20.0 * x + 33.0 / 40.0) * x * x;
            FdeProblem::new(0.0, 1.0, s, alpha, h, bvp(0.0, -1.0 / 40.0))?.with_exact(exact)
        }
        ExampleId::Bvp5 => {
            let g = gamma_fn(alpha + 1.0)?;
            let h = move |x: f64| (alpha + 1.0) * x + 3.0 / 57.0 * x.powf(alpha + 1.0) / g;
            FdeProblem::new(0.0, 1.0, 3.0 / 57.0, alpha, h, bvp(0.0, 1.0 / g))?
                .with_exact(move |x| x.powf(alpha + 1.0) / g)
        }
        ExampleId::Bvp6 => {
            let sigma = Coefficient::function(|x| -(1.0 - x) / (1.0 + x).powi(2));
            let h = move |x: f64| {
                let s = x.sqrt();
                let t = (1.0 + x).sqrt();
                (x - 1.0) / (1.0 + x).powi(4)
                    + (s * t * (33.0 + 26.0 * x + 8.0 * x * x) + 15.0 * (s + t).ln())
                        / (4.0 * sqrt_pi * (1.0 + x).powf(3.5))
            };
            // y(0) = 1 is the value of the exact solution at the left end
            FdeProblem::new(0.0, 1.0, sigma, alpha, h, bvp(1.0, 0.25))?.with_exact(|x| 1.0 / (1.0 + x).powi(2))
        }
        ExampleId::Ivp1 => {
            let h = move |x: f64| x.powf(2.5) / 200.0 + 3.0 * sqrt_pi / 160.0 * x + 3.75 * x.sqrt();
            FdeProblem::new(1.0, 0.01, 0.005, alpha, h, ivp(0.0, 0.0))?.with_exact(|x| x.powf(2.5))
        }
        ExampleId::Ivp2 => {
            let h = |x: f64| 1.5 * x.exp() + 0.5 * x.exp() * erf(x.sqrt());
            FdeProblem::new(1.0, 0.5, 0.5, alpha, h, ivp(1.0, 1.0))?.with_exact(f64::exp)
        }
        ExampleId::Ivp3 => {
            if !(omega.is_finite() && omega > 0.0) {
                return Err(invalid(format!("omega must be positive, got {omega}")));
            }
            let h = move |x: f64| ivp3_rhs(omega, x);
            FdeProblem::new(1.0, 1.0, 1.0, alpha, h, ivp(0.0, omega))?.with_exact(move |x| (omega * x).sin())
        }
    };
    Ok(Instance::Fde(problem))
}

/// Right-hand side of ivp-3 with the unnormalized Fresnel integrals:
/// `(1 - ω²) sin ωx + 2 ω^{3/2}/√π [cos ωx S(√(ωx)) - sin ωx C(√(ωx))]`.
pub fn ivp3_rhs(omega: f64, x: f64) -> f64 {
    let (s, c) = fresnel((omega * x).sqrt());
    let (sin, cos) = (omega * x).sin_cos();
    (1.0 - omega * omega) * sin + 2.0 * omega.powf(1.5) / PI.sqrt() * (cos * s - sin * c)
}
