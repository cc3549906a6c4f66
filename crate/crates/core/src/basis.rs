//! Multinode functions `B_{μ,k}` for a covering of the nodes.
//!
//! Evaluation never touches the raw inverse-distance quotient. Both numerator
//! and denominator are multiplied by `(x - x_j)^μ`, where `x_j` is the node
//! closest to `x`, giving
//!
//! ```text
//! B_{μ,k}(x) = C_k(x) / Σ_ℓ C_ℓ(x),   C_ℓ(x) = (x - x_j)^μ Π_{i ∈ F_ℓ} (x - x_i)^{-μ}.
//! ```
//!
//! For subsets containing `x_j` the factor cancels and `C_ℓ` is a smooth
//! product over the remaining nodes; for the others `C_ℓ = (x - x_j)^μ D_ℓ` with
//! `D_ℓ` smooth near `x_j`. Derivatives of each factor follow from its
//! logarithmic derivative, and derivatives of `B` from the Leibniz recursion
//!
//! ```text
//! B_k^{(r)} = C_k^{(r)}/S - Σ_{i<r} C(r,i) (S^{(r-i)}/S) B_k^{(i)},   S = Σ_ℓ C_ℓ.
//! ```
//!
//! The products are accumulated as log-magnitudes and every `C_ℓ` is divided
//! by the largest containing-subset term, so neither overflow near a node nor
//! underflow for wide subsets can occur. With `μ` even all signs are positive.

use crate::error::{invalid, Error, Result};
use crate::nodes::{index_sets, Covering, IndexSets, NodeSet};

/// Highest derivative order [`MultinodeBasis::eval`] supports.
pub const MAX_ORDER: usize = 4;

pub const DEFAULT_MU: u32 = 4;

#[derive(Debug, Clone)]
pub struct MultinodeBasis {
    mu: u32,
    nodes: NodeSet,
    covering: Covering,
    index_sets: IndexSets,
}

/// `B_{μ,k}(x)` and its derivatives for all `k`, orders `0..=max_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEval {
    orders: Vec<Vec<f64>>,
}

impl BasisEval {
    pub fn values(&self) -> &[f64] {
        &self.orders[0]
    }

    pub fn derivative(&self, order: usize) -> &[f64] {
        &self.orders[order]
    }

    pub fn max_order(&self) -> usize {
        self.orders.len() - 1
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Derivatives `0..=order` of `F = exp(φ)` given `F` and `φ', φ'', …`.
fn exp_derivatives(value: f64, log_derivs: &[f64], order: usize, out: &mut [f64]) {
    out[0] = value;
    for r in 0..order {
        out[r + 1] = (0..=r)
            .map(|i| binomial(r, i) * log_derivs[i] * out[r - i])
            .sum();
    }
}

impl MultinodeBasis {
    pub fn new(mu: u32, nodes: NodeSet, covering: Covering) -> Result<Self> {
        if mu < 2 || !mu.is_multiple_of(2) {
            return Err(Error::Configuration(format!("multinode exponent must be even and >= 2, got {mu}")));
        }
        let index_sets = index_sets(&covering, nodes.len())?;
        Ok(Self { mu, nodes, covering, index_sets })
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn covering(&self) -> &Covering {
        &self.covering
    }

    pub fn index_sets(&self) -> &IndexSets {
        &self.index_sets
    }

    pub fn len(&self) -> usize {
        self.covering.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covering.is_empty()
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let hi = self.nodes.t_end();
        if !(0.0..=hi).contains(&x) {
            return Err(Error::Domain { x, lo: 0.0, hi });
        }
        Ok(())
    }

    /// Values and derivatives up to `max_order` at `x ∈ [0, T]`.
    pub fn eval(&self, x: f64, max_order: usize) -> Result<BasisEval> {
        self.check_domain(x)?;
        self.eval_with_anchor(x, self.nodes.nearest(x), max_order)
    }

    /// Same as [`eval`](Self::eval) with an explicit anchor node `x_j`.
    ///
    /// `x` must not coincide with a node other than `x_j`; any anchor is
    /// mathematically valid elsewhere, and the nearest one is numerically best.
    pub fn eval_with_anchor(&self, x: f64, anchor: usize, max_order: usize) -> Result<BasisEval> {
        if max_order > MAX_ORDER {
            return Err(invalid(format!("derivative order {max_order} exceeds the supported {MAX_ORDER}")));
        }
        if anchor >= self.nodes.len() {
            return Err(invalid(format!("anchor node {anchor} out of range")));
        }
        let nodes = self.nodes.as_slice();
        let mu = self.mu as f64;
        let dx = x - nodes[anchor];
        let s = self.covering.len();
        let width = max_order + 1;

        // ln of the leading factor and φ^{(k)}, k = 1..=max_order, per subset
        let mut log_mag = vec![0.0; s];
        let mut log_derivs = vec![0.0; s * MAX_ORDER];
        let mut contains = vec![false; s];
        for (l, subset) in self.covering.subsets().iter().enumerate() {
            contains[l] = subset.first().is_some_and(|&f| f <= anchor) && subset.last().is_some_and(|&t| anchor <= t);
            let derivs = &mut log_derivs[l * MAX_ORDER..(l + 1) * MAX_ORDER];
            for &i in subset {
                if contains[l] && i == anchor {
                    continue;
                }
                let diff = x - nodes[i];
                log_mag[l] -= mu * diff.abs().ln();
                let inv = 1.0 / diff;
                let mut power = inv;
                let mut fact = 1.0;
                // φ^{(k)} = -μ (-1)^{k-1} (k-1)! Σ (x - x_i)^{-k}
                for (k, slot) in derivs.iter_mut().enumerate().take(max_order) {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    *slot -= mu * sign * fact * power;
                    power *= inv;
                    fact *= (k + 1) as f64;
                }
            }
        }
        let reference = (0..s)
            .filter(|&l| contains[l])
            .max_by(|&a, &b| log_mag[a].total_cmp(&log_mag[b]))
            .ok_or_else(|| invalid(format!("anchor node {anchor} belongs to no subset")))?;
        let scale = log_mag[reference];
        // Dividing every C_ℓ by the dominant term leaves B unchanged and keeps
        // the log-derivatives small where one subset dominates.
        let shift: Vec<f64> = log_derivs[reference * MAX_ORDER..(reference + 1) * MAX_ORDER].to_vec();
        for l in 0..s {
            for (v, r) in log_derivs[l * MAX_ORDER..(l + 1) * MAX_ORDER].iter_mut().zip(&shift) {
                *v -= r;
            }
        }

        // anchor factor P(x) = (x - x_j)^μ and its derivatives
        let mut anchor_factor = [0.0; MAX_ORDER + 1];
        for (k, slot) in anchor_factor.iter_mut().enumerate().take(width) {
            if k as u32 <= self.mu {
                let falling: f64 = (0..k).map(|i| mu - i as f64).product();
                *slot = falling * dx.powi(self.mu as i32 - k as i32);
            }
        }

        let mut c = vec![0.0; s * width];
        let mut buf = [0.0; MAX_ORDER + 1];
        for l in 0..s {
            let value = (log_mag[l] - scale).exp();
            let derivs = &log_derivs[l * MAX_ORDER..(l + 1) * MAX_ORDER];
            exp_derivatives(value, derivs, max_order, &mut buf);
            let row = &mut c[l * width..(l + 1) * width];
            if contains[l] {
                row.copy_from_slice(&buf[..width]);
            } else {
                for r in 0..width {
                    row[r] = (0..=r)
                        .map(|k| binomial(r, k) * anchor_factor[k] * buf[r - k])
                        .sum();
                }
            }
        }

        let mut total = [0.0; MAX_ORDER + 1];
        for l in 0..s {
            for r in 0..width {
                total[r] += c[l * width + r];
            }
        }
        let inv_total = 1.0 / total[0];
        let mut orders = vec![vec![0.0; s]; width];
        for k in 0..s {
            for r in 0..width {
                let mut v = c[k * width + r];
                for i in 0..r {
                    v -= binomial(r, i) * total[r - i] * orders[i][k];
                }
                orders[r][k] = v * inv_total;
            }
        }
        Ok(BasisEval { orders })
    }

    fn check_off_node(&self, x: f64) -> Result<()> {
        self.check_domain(x)?;
        if self.nodes.as_slice().contains(&x) {
            return Err(invalid("closed-form multinode expressions are undefined at nodes"));
        }
        Ok(())
    }

    /// `Σ_{i ∈ F_ℓ \ F_k} (x - x_i)^{-p} - Σ_{i ∈ F_k \ F_ℓ} (x - x_i)^{-p}`. Shared
    /// nodes cancel exactly instead of in floating point.
    fn pair_difference(&self, x: f64, l: usize, k: usize, p: i32) -> f64 {
        let nodes = self.nodes.as_slice();
        let subsets = self.covering.subsets();
        let (fl, fk) = (&subsets[l], &subsets[k]);
        let inside = |i: usize, f: &[usize]| f[0] <= i && i <= f[f.len() - 1];
        let term = |i: usize| (x - nodes[i]).powi(-p);
        let plus: f64 = fl.iter().filter(|&&i| !inside(i, fk)).map(|&i| term(i)).sum();
        let minus: f64 = fk.iter().filter(|&&i| !inside(i, fl)).map(|&i| term(i)).sum();
        plus - minus
    }

    /// The inverse-distance quotient itself, for `x` off the nodes.
    pub fn eval_direct(&self, x: f64) -> Result<Vec<f64>> {
        self.check_off_node(x)?;
        let nodes = self.nodes.as_slice();
        let mu = self.mu as f64;
        let log_mag: Vec<f64> = self
            .covering
            .subsets()
            .iter()
            .map(|subset| -mu * subset.iter().map(|&i| (x - nodes[i]).abs().ln()).sum::<f64>())
            .collect();
        let top = log_mag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = log_mag.iter().map(|v| (v - top).exp()).collect();
        let total: f64 = weights.iter().sum();
        Ok(weights.iter().map(|w| w / total).collect())
    }

    /// First derivatives from the explicit formula
    /// `B'_k = μ B_k (Σ_ℓ B_ℓ a_ℓ - a_k)`, `a_ℓ = Σ_{i ∈ F_ℓ} 1/(x - x_i)`, off the nodes.
    /// Since `Σ_ℓ B_ℓ = 1` the bracket is evaluated as `Σ_ℓ B_ℓ (a_ℓ - a_k)`.
    pub fn first_derivative_closed(&self, x: f64) -> Result<Vec<f64>> {
        let b = self.eval_direct(x)?;
        let mu = self.mu as f64;
        Ok((0..b.len())
            .map(|k| mu * b[k] * (0..b.len()).map(|l| b[l] * self.pair_difference(x, l, k, 1)).sum::<f64>())
            .collect())
    }

    /// Second derivatives from the explicit formula
    /// `B''_k = -μ B_k (Σ_ℓ B_ℓ q_ℓ - q_k) + μ B_k Σ_ℓ B'_ℓ a_ℓ + μ B'_k (Σ_ℓ B_ℓ a_ℓ - a_k)`
    /// with `q_ℓ = Σ_{i ∈ F_ℓ} 1/(x - x_i)²`, off the nodes. The sums are
    /// differenced pairwise as in [`first_derivative_closed`](Self::first_derivative_closed).
    pub fn second_derivative_closed(&self, x: f64) -> Result<Vec<f64>> {
        let b = self.eval_direct(x)?;
        let d1 = self.first_derivative_closed(x)?;
        let mu = self.mu as f64;
        let s = b.len();
        Ok((0..s)
            .map(|k| {
                let (mut bq, mut ba, mut da) = (0.0, 0.0, 0.0);
                for l in 0..s {
                    let a = self.pair_difference(x, l, k, 1);
                    bq += b[l] * self.pair_difference(x, l, k, 2);
                    ba += b[l] * a;
                    da += d1[l] * a;
                }
                -mu * b[k] * bq + mu * b[k] * da + mu * d1[k] * ba
            })
            .collect())
    }
}
