//! Oracles shared by the integration tests. Nothing here calls into the
//! quadrature or Caputo code under test.
#![allow(dead_code)]

use std::sync::Arc;

use multinode_fde::basis::MultinodeBasis;
use multinode_fde::nodes::{equispaced_covering, equispaced_nodes, mixed_ec, mixed_emc, NodeFamily};
use multinode_fde::shepard::ShepardEvaluator;
use rand::rngs::StdRng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// `∫_{-1}^{1} (1-t)^a t^j dt` for `j < count`, from the integration-by-parts
/// recurrence `(a+1+j) M_j = j M_{j-1} + (-1)^j 2^{a+1}`.
pub fn jacobi_monomial_moments(a: f64, count: usize) -> Vec<f64> {
    let scale = 2f64.powf(a + 1.0);
    let mut m = vec![scale / (a + 1.0)];
    for j in 1..count {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        m.push((j as f64 * m[j - 1] + sign * scale) / (a + 1.0 + j as f64));
    }
    m
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GAUSS_WEIGHTS: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = 0.0;
    let mut g = 0.0;
    for (i, (&x, &w)) in GK_NODES.iter().zip(&KRONROD_WEIGHTS).enumerate() {
        let v = if x == 0.0 { f(c) } else { f(c - h * x) + f(c + h * x) };
        k += w * v;
        if i % 2 == 1 {
            g += GAUSS_WEIGHTS[i / 2] * v;
        }
    }
    (h * k, (h * (k - g)).abs())
}

/// Globally adaptive Gauss-Kronrod (7/15) quadrature with an absolute
/// tolerance and a cap of 4000 panels.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (v, e) = kronrod15(&f, a, b);
    let mut panels = vec![(a, b, v, e)];
    while panels.len() < 4000 && panels.iter().map(|p| p.3).sum::<f64>() > tol {
        let worst = (0..panels.len()).max_by(|&i, &j| panels[i].3.total_cmp(&panels[j].3)).unwrap();
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        for (l, h) in [(lo, mid), (mid, hi)] {
            let (v, e) = kronrod15(&f, l, h);
            panels.push((l, h, v, e));
        }
    }
    panels.iter().map(|p| p.2).sum()
}

/// `Γ(β)` for `β ∈ (0, 1)` by quadrature, kept separate from the library's
/// Lanczos gamma.
fn gamma_unit_interval(beta: f64) -> f64 {
    // Γ(β) = Γ(β+1)/β with Γ(β+1) = ∫_0^∞ t^β e^{-t} dt; substitute t = s^{1/(β+1)}
    let p = 1.0 / (beta + 1.0);
    let integrand = |s: f64| if s == 0.0 { 0.0 } else { p * (-(s.powf(p))).exp() };
    gauss_kronrod(integrand, 0.0, 60f64.powf(beta + 1.0), 1e-15) / beta
}

/// Caputo derivative at `x` of a function with `m`-th derivative `dm`, by
/// adaptive quadrature of the defining integral after `t = x - u^{1/β}`.
pub fn caputo_by_quadrature<F: Fn(f64) -> f64>(dm: F, alpha: f64, x: f64, tol: f64) -> f64 {
    let beta = alpha.ceil() - alpha;
    let integral = gauss_kronrod(|u: f64| dm((x - u.powf(1.0 / beta)).max(0.0)), 0.0, x.powf(beta), tol);
    integral / (beta * gamma_unit_interval(beta))
}

/// [`caputo_by_quadrature`] to a relative tolerance, scaled by a coarse first pass.
pub fn caputo_by_quadrature_relative<F: Fn(f64) -> f64>(dm: F, alpha: f64, x: f64, rel: f64) -> f64 {
    let rough = caputo_by_quadrature(&dm, alpha, x, 1e-6);
    caputo_by_quadrature(&dm, alpha, x, rel * rough.abs().max(f64::MIN_POSITIVE))
}

/// Evaluator for the published node configuration of a family.
pub fn evaluator(family: NodeFamily, n_e: usize, d: usize) -> Arc<ShepardEvaluator> {
    let (x, c) = match family {
        NodeFamily::Equispaced => {
            let n = (n_e - 1) * d + 1;
            (equispaced_nodes(n, 1.0).unwrap(), equispaced_covering(n, d, 0).unwrap())
        }
        NodeFamily::MixedEc => mixed_ec(n_e, d, 1.0).unwrap(),
        NodeFamily::MixedEmc => mixed_emc(n_e, d, 3 * (d + 1), 1.0).unwrap(),
    };
    Arc::new(ShepardEvaluator::new(MultinodeBasis::new(4, x, c).unwrap()))
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
