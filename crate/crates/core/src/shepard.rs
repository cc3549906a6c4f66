//! The multinode Shepard operator `M_μ[f] = Σ_k B_{μ,k} P_k[f]`, written in
//! cardinal form `M_μ[f](x) = Σ_i g_i(x) f_i` with
//! `g_i = Σ_{k ∈ K_i} B_{μ,k} l_{k,i}`.
//!
//! Reproduction degree is `min_k (|F_k| - 1)`; all built-in coverings use
//! subsets of equal size.

use crate::basis::{binomial, MultinodeBasis, MAX_ORDER};
use crate::error::{invalid, Result};
use crate::nodes::NodeSet;

/// Lagrange basis of one subset, in the local variable
/// `u = (x - center) / half_width ∈ [-1, 1]`.
#[derive(Debug, Clone)]
pub struct LocalPolynomial {
    subset: Vec<usize>,
    center: f64,
    half_width: f64,
    local_nodes: Vec<f64>,
    /// `1 / Π_{m≠i} (u_i - u_m)`
    weights: Vec<f64>,
}

impl LocalPolynomial {
    pub fn new(nodes: &NodeSet, subset: &[usize]) -> Self {
        let x = nodes.as_slice();
        let lo = x[subset[0]];
        let hi = x[subset[subset.len() - 1]];
        let center = 0.5 * (lo + hi);
        let half_width = if hi > lo { 0.5 * (hi - lo) } else { 1.0 };
        let local_nodes: Vec<f64> = subset.iter().map(|&i| (x[i] - center) / half_width).collect();
        let weights = (0..local_nodes.len())
            .map(|i| {
                let prod: f64 = (0..local_nodes.len())
                    .filter(|&m| m != i)
                    .map(|m| local_nodes[i] - local_nodes[m])
                    .product();
                1.0 / prod
            })
            .collect();
        Self { subset: subset.to_vec(), center, half_width, local_nodes, weights }
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// `out[i][r] = l_i^{(r)}(x)` for each member `i`, `r = 0..=max_order`.
    ///
    /// Each `Π_{m≠i}(u - u_m)` is expanded as a truncated Taylor polynomial at
    /// `u`, one linear factor at a time.
    pub fn derivatives(&self, x: f64, max_order: usize, out: &mut Vec<[f64; MAX_ORDER + 1]>) {
        let u = (x - self.center) / self.half_width;
        let p = self.local_nodes.len();
        out.clear();
        out.resize(p, [0.0; MAX_ORDER + 1]);
        let inv_h = 1.0 / self.half_width;
        for (i, slot) in out.iter_mut().enumerate() {
            let mut taylor = [0.0; MAX_ORDER + 1];
            taylor[0] = 1.0;
            for (m, &um) in self.local_nodes.iter().enumerate() {
                if m == i {
                    continue;
                }
                let shift = u - um;
                for k in (1..=max_order).rev() {
                    taylor[k] = shift * taylor[k] + taylor[k - 1];
                }
                taylor[0] *= shift;
            }
            let mut fact = 1.0;
            let mut scale = 1.0;
            for r in 0..=max_order {
                if r > 0 {
                    fact *= r as f64;
                    scale *= inv_h;
                }
                slot[r] = self.weights[i] * fact * taylor[r] * scale;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ShepardEvaluator {
    basis: MultinodeBasis,
    locals: Vec<LocalPolynomial>,
}

impl ShepardEvaluator {
    pub fn new(basis: MultinodeBasis) -> Self {
        let locals = basis
            .covering()
            .subsets()
            .iter()
            .map(|s| LocalPolynomial::new(basis.nodes(), s))
            .collect();
        Self { basis, locals }
    }

    pub fn basis(&self) -> &MultinodeBasis {
        &self.basis
    }

    pub fn nodes(&self) -> &NodeSet {
        self.basis.nodes()
    }

    pub fn locals(&self) -> &[LocalPolynomial] {
        &self.locals
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.basis.nodes().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cardinal rows `g^{(r)}(x)` for every `r = 0..=max_order`.
    pub fn cardinal_rows(&self, x: f64, max_order: usize) -> Result<Vec<Vec<f64>>> {
        if max_order > MAX_ORDER {
            return Err(invalid(format!("derivative order {max_order} exceeds the supported {MAX_ORDER}")));
        }
        let b = self.basis.eval(x, max_order)?;
        let n = self.len();
        let mut rows = vec![vec![0.0; n]; max_order + 1];
        let mut lagrange = Vec::new();
        for (k, local) in self.locals.iter().enumerate() {
            local.derivatives(x, max_order, &mut lagrange);
            for (&node, l) in local.subset().iter().zip(&lagrange) {
                for (r, row) in rows.iter_mut().enumerate() {
                    row[node] += (0..=r)
                        .map(|a| binomial(r, a) * b.derivative(a)[k] * l[r - a])
                        .sum::<f64>();
                }
            }
        }
        Ok(rows)
    }

    /// `g^{(order)}(x)`.
    pub fn cardinal_row(&self, x: f64, order: usize) -> Result<Vec<f64>> {
        let mut rows = self.cardinal_rows(x, order)?;
        Ok(rows.swap_remove(order))
    }

    /// `M_μ^{(order)}[f](x)` from the samples `f_i`.
    pub fn eval(&self, samples: &[f64], x: f64, order: usize) -> Result<f64> {
        if samples.len() != self.len() {
            return Err(invalid(format!("expected {} samples, got {}", self.len(), samples.len())));
        }
        let row = self.cardinal_row(x, order)?;
        Ok(dot(&row, samples))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
