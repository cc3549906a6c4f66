//! Caputo derivative of the Shepard approximant.
//!
//! With `m = ⌈α⌉` and `β = m - α`,
//!
//! ```text
//! (D^α M_μ[f])(x) = (x/2)^β / Γ(β) · Σ_k w_k Σ_i g_i^{(m)}(x/2 · t_k + x/2) f_i,
//! ```
//!
//! where `(t_k, w_k)` is the Gauss-Jacobi rule for the weight `(1-t)^{β-1}`
//! with `N = ⌈(n - m)/2⌉` points. The kernel singularity at `t = x` is carried
//! entirely by the weight.

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::quadrature::GaussJacobiRule;
use crate::shepard::{dot, ShepardEvaluator};
use crate::specfun::gamma_fn;

#[derive(Debug, Clone)]
pub struct CaputoOperator {
    alpha: f64,
    m: usize,
    gamma_beta: f64,
    rule: GaussJacobiRule,
    ev: Arc<ShepardEvaluator>,
}

/// Integer order `m = ⌈α⌉` for `α ∈ (0, 2)` non-integer.
pub fn integer_order(alpha: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha < 2.0) || alpha == 1.0 {
        return Err(invalid(format!("fractional order must lie in (0,1) or (1,2), got {alpha}")));
    }
    Ok(alpha.ceil() as usize)
}

impl CaputoOperator {
    pub fn new(alpha: f64, ev: Arc<ShepardEvaluator>) -> Result<Self> {
        let m = integer_order(alpha)?;
        let n = ev.len();
        let points = n.saturating_sub(m).div_ceil(2).max(1);
        let beta = m as f64 - alpha;
        let rule = GaussJacobiRule::new(points, beta - 1.0, 0.0)?;
        Ok(Self { alpha, m, gamma_beta: gamma_fn(beta)?, rule, ev })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rule(&self) -> &GaussJacobiRule {
        &self.rule
    }

    pub fn evaluator(&self) -> &Arc<ShepardEvaluator> {
        &self.ev
    }

    /// Weights `c_i(x)` with `(D^α M_μ[f])(x) = Σ_i c_i(x) f_i`.
    pub fn row(&self, x: f64) -> Result<Vec<f64>> {
        if x < 0.0 {
            return Err(Error::Domain { x, lo: 0.0, hi: self.ev.nodes().t_end() });
        }
        let mut row = vec![0.0; self.ev.len()];
        if x == 0.0 {
            return Ok(row);
        }
        let half = 0.5 * x;
        for (&t, &w) in self.rule.nodes().iter().zip(self.rule.weights()) {
            let g = self.ev.cardinal_row(half * t + half, self.m)?;
            for (acc, gi) in row.iter_mut().zip(&g) {
                *acc += w * gi;
            }
        }
        let scale = half.powf(self.m as f64 - self.alpha) / self.gamma_beta;
        row.iter_mut().for_each(|c| *c *= scale);
        Ok(row)
    }

    pub fn apply(&self, samples: &[f64], x: f64) -> Result<f64> {
        if samples.len() != self.ev.len() {
            return Err(invalid(format!("expected {} samples, got {}", self.ev.len(), samples.len())));
        }
        Ok(dot(&self.row(x)?, samples))
    }
}

fn recip_gamma(x: f64) -> f64 {
    gamma_fn(x).map_or(0.0, |g| 1.0 / g)
}

/// `D^α x^p = Γ(p+1)/Γ(p+1-α) x^{p-α}`, and 0 for integer `p < ⌈α⌉`.
pub fn exact_monomial(p: f64, alpha: f64, x: f64) -> f64 {
    let m = alpha.ceil();
    if p >= 0.0 && p == p.floor() && p <= m - 1.0 {
        return 0.0;
    }
    let g = gamma_fn(p + 1.0).unwrap_or(f64::INFINITY);
    g * recip_gamma(p + 1.0 - alpha) * x.powf(p - alpha)
}
