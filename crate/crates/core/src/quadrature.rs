//! Gauss-Jacobi quadrature for the weight `(1-t)^a (1+t)^b` on `[-1, 1]`.
//!
//! Nodes and weights come from the Golub-Welsch construction: the nodes are
//! the eigenvalues of the symmetric tridiagonal Jacobi matrix of the monic
//! three-term recurrence, and each weight is the total mass `μ₀` times the
//! squared first component of the matching normalized eigenvector. The
//! eigenproblem is solved by implicit-shift QL, tracking only the first row of
//! the eigenvector matrix.

use crate::error::{invalid, Result};
use crate::specfun::ln_gamma;

const MAX_SWEEPS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussJacobiRule {
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// `∫_{-1}^{1} (1-t)^a (1+t)^b dt = 2^{a+b+1} Γ(a+1) Γ(b+1) / Γ(a+b+2)`.
pub fn jacobi_mass(a: f64, b: f64) -> Result<f64> {
    let ln = (a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0)? + ln_gamma(b + 1.0)?
        - ln_gamma(a + b + 2.0)?;
    Ok(ln.exp())
}

/// Diagonal and off-diagonal of the `n × n` Jacobi matrix.
fn jacobi_matrix(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = a + b;
    let diag = (0..n)
        .map(|k| {
            if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                let s = 2.0 * k as f64 + ab;
                (b * b - a * a) / (s * (s + 2.0))
            }
        })
        .collect();
    let off = (1..n)
        .map(|k| {
            let kf = k as f64;
            let s = 2.0 * kf + ab;
            let beta = if k == 1 {
                // (k + a + b)/(2k + a + b - 1) cancels at k = 1
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
            } else {
                4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            beta.sqrt()
        })
        .collect();
    (diag, off)
}

/// Implicit QL on a symmetric tridiagonal matrix. On return `d` holds the
/// eigenvalues and `z` the first row of the orthogonal eigenvector matrix.
fn tridiagonal_ql(d: &mut [f64], off: &[f64], z: &mut [f64]) {
    let n = d.len();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l || sweeps == MAX_SWEEPS {
                break;
            }
            sweeps += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

impl GaussJacobiRule {
    /// The `n`-point rule, exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("a Gauss-Jacobi rule needs at least one node"));
        }
        if !(a > -1.0 && b > -1.0 && a.is_finite() && b.is_finite()) {
            return Err(invalid(format!("Jacobi exponents must exceed -1, got a={a}, b={b}")));
        }
        let mass = jacobi_mass(a, b)?;
        let (mut d, off) = jacobi_matrix(n, a, b);
        let mut z = vec![0.0; n];
        z[0] = 1.0;
        tridiagonal_ql(&mut d, &off, &mut z);
        let mut pairs: Vec<(f64, f64)> = d.into_iter().zip(z.into_iter().map(|v| mass * v * v)).collect();
        pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self { a, b, nodes, weights })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ w_k f(t_k)`, approximating `∫ (1-t)^a (1+t)^b f(t) dt`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }
}
