//! Special functions used by the exact solutions and right-hand sides:
//! Gamma, the two-parameter Mittag-Leffler function, Dawson's integral,
//! the error function and the (unnormalized) Fresnel integrals.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, c)| acc + c / (z + (i + 1) as f64))
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Γ(x) for real x, via the Lanczos approximation and reflection.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        return Ok(PI / ((PI * x).sin() * gamma_fn(1.0 - x)?));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power so large arguments overflow only when Γ itself does
    let half = t.powf(0.5 * (z + 0.5));
    Ok((2.0 * PI).sqrt() * half * (-t).exp() * half * lanczos_sum(z))
}

/// ln|Γ(x)|.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        return Ok((PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// Truncation control for series evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { tol: 1e-16, max_terms: 500 }
    }
}

impl SeriesControl {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_terms == 0 {
            return Err(invalid("series control needs tol > 0 and max_terms >= 1"));
        }
        Ok(())
    }
}

/// E_{γ,δ}(z) = Σ z^k / Γ(γk + δ) for real γ, δ > 0.
///
/// For γ = 1 and Re z < 0 the series is evaluated through Kummer's
/// transformation `E_{1,δ}(z) = e^z/Γ(δ) · ₁F₁(δ-1; δ; -z)`, whose terms do
/// not alternate on the negative real axis.
pub fn mittag_leffler(gamma: f64, delta: f64, z: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    ctl.validate()?;
    if !(gamma > 0.0 && delta > 0.0) {
        return Err(invalid(format!("Mittag-Leffler parameters must be positive, got ({gamma}, {delta})")));
    }
    if gamma == 1.0 && z.re < 0.0 {
        return kummer_ml(delta, z, ctl);
    }
    let mut sum = Complex64::new(1.0 / gamma_fn(delta)?, 0.0);
    if z == Complex64::new(0.0, 0.0) {
        return Ok(sum);
    }
    let mut power = Complex64::new(1.0, 0.0);
    let mut quiet = 0;
    for k in 1..ctl.max_terms {
        let arg = gamma * k as f64 + delta;
        let term = if arg < 170.0 {
            power *= z;
            power / gamma_fn(arg)?
        } else {
            power *= z;
            (k as f64 * z.ln() - ln_gamma(arg)?).exp()
        };
        sum += term;
        if term.norm() <= ctl.tol * sum.norm().max(f64::MIN_POSITIVE) {
            quiet += 1;
            if quiet == 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Accuracy { terms: ctl.max_terms })
}

fn kummer_ml(delta: f64, z: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    let prefactor = z.exp() / gamma_fn(delta)?;
    if delta == 1.0 {
        return Ok(prefactor);
    }
    let w = -z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..ctl.max_terms {
        let kf = k as f64;
        term *= w * ((delta - 1.0 + kf) / ((delta + kf) * (kf + 1.0)));
        sum += term;
        if term.norm() <= ctl.tol * sum.norm() {
            return Ok(prefactor * sum);
        }
    }
    Err(Error::Accuracy { terms: ctl.max_terms })
}

/// Real-argument convenience wrapper around [`mittag_leffler`].
pub fn mittag_leffler_real(gamma: f64, delta: f64, x: f64) -> Result<f64> {
    mittag_leffler(gamma, delta, Complex64::new(x, 0.0), &SeriesControl::default()).map(|v| v.re)
}

/// Dawson's integral D(x) = e^{-x²} ∫₀ˣ e^{t²} dt.
pub fn dawson(x: f64) -> f64 {
    let ax = x.abs();
    let value = if ax < 7.0 {
        // ∫₀ˣ e^{t²} dt = Σ x^{2n+1} / (n! (2n+1)), all terms positive
        let x2 = ax * ax;
        let mut power = ax;
        let mut sum = ax;
        let mut n = 0.0;
        loop {
            n += 1.0;
            power *= x2 / n;
            let term = power / (2.0 * n + 1.0);
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
        }
        (-x2).exp() * sum
    } else {
        // D(x) ~ 1/(2x) Σ (2k-1)!! / (2x²)^k, truncated at its smallest term
        let inv = 1.0 / (2.0 * ax * ax);
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            let next = term * (2.0 * k - 1.0) * inv;
            if next >= term || next <= 1e-17 * sum {
                break;
            }
            term = next;
            sum += term;
            k += 1.0;
        }
        sum / (2.0 * ax)
    };
    value.copysign(x)
}

/// The error function.
pub fn erf(x: f64) -> f64 {
    let ax = x.abs();
    let value = if ax < 3.0 {
        // erf(x) = 2/√π e^{-x²} Σ 2ⁿ x^{2n+1} / (2n+1)!!
        let x2 = ax * ax;
        let mut term = ax;
        let mut sum = ax;
        let mut n = 0.0;
        loop {
            n += 1.0;
            term *= 2.0 * x2 / (2.0 * n + 1.0);
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
        }
        FRAC_2_SQRT_PI * (-x2).exp() * sum
    } else {
        1.0 - erfc_continued_fraction(ax)
    };
    value.copysign(x)
}

/// erfc(x) for x ≥ 3 by the modified Lentz evaluation of
/// `e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …))))`.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = 0.5 * k as f64;
        d = x + a * d;
        d = if d.abs() < TINY { TINY } else { d };
        c = x + a / c;
        c = if c.abs() < TINY { TINY } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// Fresnel integrals `(S(x), C(x)) = (∫₀ˣ sin t² dt, ∫₀ˣ cos t² dt)`.
///
/// These carry no π/2 normalization inside the sine and cosine.
pub fn fresnel(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let (s, c) = if ax < 1.88 {
        fresnel_series(ax)
    } else {
        let scale = (0.5 * PI).sqrt();
        let (sn, cn) = fresnel_normalized_cf(ax / scale);
        (scale * sn, scale * cn)
    };
    (s.copysign(x), c.copysign(x))
}

pub fn fresnel_s(x: f64) -> f64 {
    fresnel(x).0
}

pub fn fresnel_c(x: f64) -> f64 {
    fresnel(x).1
}

fn fresnel_series(x: f64) -> (f64, f64) {
    // C = Σ (-1)^k x^{4k+1} / ((2k)! (4k+1)),  S = Σ (-1)^k x^{4k+3} / ((2k+1)! (4k+3))
    let x2 = x * x;
    let mut power = x; // x^{2j+1} / j!
    let mut s = 0.0;
    let mut c = x;
    let mut j = 0.0;
    loop {
        j += 1.0;
        power *= x2 / j;
        let term = power / (2.0 * j + 1.0);
        let sign = if (j as u64 / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        if (j as u64) % 2 == 1 {
            s += sign * term;
        } else {
            c += sign * term;
        }
        if term <= 1e-17 * (s.abs() + c.abs()) {
            break;
        }
    }
    (s, c)
}

/// Normalized Fresnel pair `(∫₀ᶻ sin(πt²/2), ∫₀ᶻ cos(πt²/2))` for z ≥ 1.5,
/// through the continued fraction of the complementary error function.
fn fresnel_normalized_cf(z: f64) -> (f64, f64) {
    const TINY: f64 = 1e-300;
    let one = Complex64::new(1.0, 0.0);
    let pix2 = PI * z * z;
    let mut b = Complex64::new(1.0, -pix2);
    let mut cc = Complex64::new(1.0 / TINY, 0.0);
    let mut d = one / b;
    let mut h = d;
    let mut n = -1.0;
    for _ in 2..1000 {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += Complex64::new(4.0, 0.0);
        d = one / (d * a + b);
        cc = b + Complex64::new(a, 0.0) / cc;
        let del = cc * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    h *= Complex64::new(z, -z);
    // cos(πz²/2) and sin(πz²/2), evaluated through the unscaled argument
    let x_plain = z * (0.5 * PI).sqrt();
    let phase = x_plain * x_plain;
    let cs = Complex64::new(0.5, 0.5) * (one - Complex64::new(phase.cos(), phase.sin()) * h);
    (cs.im, cs.re)
}
