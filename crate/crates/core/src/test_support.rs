//! Oracles shared by the unit tests. Nothing here is used by the library.

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(&f, a, b, fa, fm, fb, whole, tol, 48)
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
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate, error estimate and `∫|f|` estimate on one panel.
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let (mut k, mut g, mut abs) = (0.0, 0.0, 0.0);
    for (i, (&t, &w)) in GK_NODES.iter().zip(&KRONROD_WEIGHTS).enumerate() {
        let (v, va) = if t == 0.0 {
            let v = f(c);
            (v, v.abs())
        } else {
            let (l, r) = (f(c - h * t), f(c + h * t));
            (l + r, l.abs() + r.abs())
        };
        k += w * v;
        abs += w * va;
        if i % 2 == 1 {
            g += GAUSS_WEIGHTS[i / 2] * v;
        }
    }
    (h * k, (h * (k - g)).abs(), h.abs() * abs)
}

/// Globally adaptive Gauss-Kronrod (7/15) quadrature: the panel with the
/// largest error estimate is bisected until the summed estimate drops below
/// `tol` or 4000 panels are in use.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (v, e, _) = kronrod15(&f, a, b);
    let mut panels = vec![(a, b, v, e)];
    while panels.len() < 4000 {
        let total: f64 = panels.iter().map(|p| p.3).sum();
        if total <= tol {
            break;
        }
        let worst = (0..panels.len()).max_by(|&i, &j| panels[i].3.total_cmp(&panels[j].3)).unwrap();
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        for (l, h) in [(lo, mid), (mid, hi)] {
            let (v, e, _) = kronrod15(&f, l, h);
            panels.push((l, h, v, e));
        }
    }
    panels.iter().map(|p| p.2).sum()
}

/// Caputo derivative of order `alpha` at `x` by adaptive quadrature, given the
/// `m`-th derivative of the function. The substitution `t = x - u^{1/β}`,
/// `β = m - α`, turns the weakly singular kernel into a constant.
pub fn caputo_by_quadrature<F: Fn(f64) -> f64>(dm: F, alpha: f64, x: f64, tol: f64) -> f64 {
    let m = alpha.ceil();
    let beta = m - alpha;
    let upper = x.powf(beta);
    let integral = gauss_kronrod(|u: f64| dm((x - u.powf(1.0 / beta)).max(0.0)), 0.0, upper, tol);
    integral / (beta * crate::specfun::gamma_fn(beta).unwrap())
}

#[test]
fn oracles_integrate_smooth_functions() {
    let v = simpson(f64::sin, 0.0, std::f64::consts::PI, 1e-13);
    assert!((v - 2.0).abs() < 1e-12);
    let v = gauss_kronrod(|t: f64| (3.0 * t).exp(), 0.0, 2.0, 1e-12);
    assert!((v - ((6f64).exp() - 1.0) / 3.0).abs() < 1e-11);
    let v = gauss_kronrod(|t: f64| 1.0 / (1e-4 + t * t), -1.0, 1.0, 1e-11);
    assert!((v - 2.0 * (1e2f64).atan() / 1e-2).abs() < 1e-9);
}
