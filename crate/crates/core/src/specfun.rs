//! Special-function kernel: log-gamma, gamma ratios, the hypergeometric
//! series ₁F₁ and ₀F₂, and the Fox-Wright function ₁Ψ₀.
//!
//! Every series goes through [`sum_series`], which accumulates terms with
//! Neumaier compensation and stops once three consecutive terms fall below
//! `rel_tol` relative to the running sum.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Stirling shift threshold for [`ln_gamma`] and [`ln_gamma_ratio`].
const STIRLING_MIN: f64 = 12.0;

/// Bernoulli coefficients B_{2k} / (2k (2k-1)) for k = 1..=7.
const STIRLING_COEFFS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

/// Truncation control shared by every series in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_terms: 10_000,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        let ctl = Self { rel_tol, max_terms };
        ctl.validate()?;
        Ok(ctl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return domain(format!("rel_tol must be positive, got {}", self.rel_tol));
        }
        if self.max_terms == 0 {
            return domain("max_terms must be at least 1");
        }
        Ok(())
    }
}

/// Result of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: Complex64,
    pub terms_used: usize,
    /// Magnitude of the last accepted term.
    pub tail_estimate: f64,
    pub converged: bool,
}

/// Neumaier-compensated accumulator for complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, &mut self.re_c, z.re);
        neumaier(&mut self.im, &mut self.im_c, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

/// Sums `term(0) + term(1) + ...` until three consecutive terms satisfy
/// `|term| <= rel_tol * |sum|`. Exhausting `max_terms` is a truncation error
/// carrying the partial value.
pub fn sum_series<F>(mut term: F, ctl: &SeriesControl) -> Result<SeriesValue>
where
    F: FnMut(usize) -> Complex64,
{
    ctl.validate()?;
    let mut acc = CompensatedSum::new();
    let mut small_run = 0;
    for n in 0..ctl.max_terms {
        let t = term(n);
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(Error::Numerical(format!("non-finite series term at n = {n}")));
        }
        acc.add(t);
        let last = t.norm();
        if last <= ctl.rel_tol * acc.value().norm() {
            small_run += 1;
            if small_run == 3 {
                return Ok(SeriesValue {
                    value: acc.value(),
                    terms_used: n + 1,
                    tail_estimate: last,
                    converged: true,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Truncation {
        partial: acc.value(),
        terms: ctl.max_terms,
    })
}

/// Compensated sum of exactly `n_terms` terms; used to probe tails.
pub fn partial_sum<F>(mut term: F, n_terms: usize) -> Complex64
where
    F: FnMut(usize) -> Complex64,
{
    let mut acc = CompensatedSum::new();
    for n in 0..n_terms {
        acc.add(term(n));
    }
    acc.value()
}

fn stirling_correction(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut p = inv;
    let mut s = 0.0;
    for c in STIRLING_COEFFS {
        s += c * p;
        p *= inv2;
    }
    s
}

/// Natural log of Γ(x) for x > 0.
///
/// Stirling series with Bernoulli corrections for x ≥ 12, upward recurrence
/// below that. Small positive integers are returned from exact factorials.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return domain(format!("ln_gamma needs finite x > 0, got {x}"));
    }
    if x == x.floor() && x <= 23.0 {
        let mut f = 1.0;
        let mut i = 2.0;
        while i < x {
            f *= i;
            i += 1.0;
        }
        return Ok(f.ln());
    }
    if x >= STIRLING_MIN {
        return Ok((x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_correction(x));
    }
    let shift = (STIRLING_MIN - x).ceil();
    let mut prod = 1.0;
    let mut y = x;
    for _ in 0..shift as usize {
        prod *= y;
        y += 1.0;
    }
    Ok(ln_gamma(y)? - prod.ln())
}

/// Γ(x) for x > 0 via [`ln_gamma`].
pub fn gamma(x: f64) -> Result<f64> {
    Ok(ln_gamma(x)?.exp())
}

/// ln Γ(x + a) − ln Γ(x) without forming either log-gamma at large x.
pub fn ln_gamma_ratio(x: f64, a: f64) -> Result<f64> {
    if !(x > 0.0 && x + a > 0.0 && x.is_finite() && a.is_finite()) {
        return domain(format!("ln_gamma_ratio needs x > 0 and x + a > 0, got x={x}, a={a}"));
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    let lo = x.min(x + a);
    if lo >= STIRLING_MIN {
        let main = (x - 0.5) * (a / x).ln_1p() + a * (x + a).ln() - a;
        return Ok(main + stirling_correction(x + a) - stirling_correction(x));
    }
    let shift = (STIRLING_MIN - lo).ceil() as usize;
    let mut s = 0.0;
    for i in 0..shift {
        s += (a / (x + i as f64)).ln_1p();
    }
    Ok(ln_gamma_ratio(x + shift as f64, a)? - s)
}

/// Γ(x + a) / Γ(x).
///
/// Small non-negative integer shifts use the rising factorial directly;
/// everything else goes through [`ln_gamma_ratio`] so large `x` cannot
/// overflow.
pub fn gamma_ratio(x: f64, a: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return domain(format!("gamma_ratio needs finite x > 0, got {x}"));
    }
    if a >= 0.0 && a == a.floor() && a <= 64.0 {
        let mut p = 1.0;
        for i in 0..a as usize {
            p *= x + i as f64;
        }
        if p.is_finite() {
            return Ok(p);
        }
    }
    Ok(ln_gamma_ratio(x, a)?.exp())
}

/// Γ(n + 1/2) = (2n)! √π / (n! 4ⁿ), evaluated as √π Π_{i=1}^{n} (2i − 1)/2.
pub fn gamma_half_integer(n: i64) -> Result<f64> {
    if n < 0 {
        return domain(format!("gamma_half_integer needs n >= 0, got {n}"));
    }
    let mut p = SQRT_PI;
    for i in 1..=n {
        p *= (2 * i - 1) as f64 / 2.0;
    }
    Ok(p)
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z).
///
/// Negative arguments are mapped through Kummer's transformation
/// ₁F₁(a; b; z) = eᶻ ₁F₁(b − a; b; −z) so the summed series has no
/// alternating cancellation.
pub fn hyp1f1(a: f64, b: f64, z: f64, ctl: &SeriesControl) -> Result<SeriesValue> {
    if is_nonpositive_integer(b) {
        return domain(format!("hyp1f1: b = {b} is a non-positive integer"));
    }
    if !(a.is_finite() && z.is_finite()) {
        return domain("hyp1f1: non-finite argument");
    }
    if z < 0.0 {
        let mut sv = hyp1f1_direct(b - a, b, -z, ctl)?;
        let scale = z.exp();
        sv.value *= scale;
        sv.tail_estimate *= scale;
        return Ok(sv);
    }
    hyp1f1_direct(a, b, z, ctl)
}

fn hyp1f1_direct(a: f64, b: f64, z: f64, ctl: &SeriesControl) -> Result<SeriesValue> {
    let mut t = 1.0;
    sum_series(
        |n| {
            if n > 0 {
                let k = (n - 1) as f64;
                t *= (a + k) * z / ((b + k) * (k + 1.0));
            }
            Complex64::new(t, 0.0)
        },
        ctl,
    )
}

/// ₀F₂(; b1, b2; z) by its defining series.
pub fn hyp0f2(b1: f64, b2: f64, z: f64, ctl: &SeriesControl) -> Result<SeriesValue> {
    if is_nonpositive_integer(b1) || is_nonpositive_integer(b2) {
        return domain(format!("hyp0f2: b1 = {b1}, b2 = {b2} must not be non-positive integers"));
    }
    if !z.is_finite() {
        return domain("hyp0f2: non-finite argument");
    }
    let mut t = 1.0;
    sum_series(
        |n| {
            if n > 0 {
                let k = (n - 1) as f64;
                t *= z / ((b1 + k) * (b2 + k) * (k + 1.0));
            }
            Complex64::new(t, 0.0)
        },
        ctl,
    )
}

/// Fox-Wright function ₁Ψ₀[(ρ, σ); z] = Σₙ Γ(ρ + nσ) zⁿ / n!.
///
/// Converges for every z when σ < 1 and inside |z| < 1 when σ = 1. Anything
/// else is rejected up front by the ratio test.
pub fn fox_wright_1psi0(
    rho: f64,
    sigma: f64,
    z: Complex64,
    ctl: &SeriesControl,
) -> Result<SeriesValue> {
    if !(rho > 0.0 && rho.is_finite()) {
        return domain(format!("fox_wright_1psi0 needs rho > 0, got {rho}"));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return domain(format!("fox_wright_1psi0 needs sigma > 0, got {sigma}"));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return domain("fox_wright_1psi0: non-finite argument");
    }
    let zabs = z.norm();
    let unit_sigma = (sigma - 1.0).abs() <= 4.0 * f64::EPSILON;
    if zabs > 0.0 {
        if unit_sigma && zabs >= 1.0 {
            return Err(Error::Divergence(format!(
                "1Psi0 with sigma = 1 needs |z| < 1, got |z| = {zabs}"
            )));
        }
        if sigma > 1.0 && !unit_sigma {
            return Err(Error::Divergence(format!(
                "1Psi0 with sigma = {sigma} > 1 diverges for z != 0"
            )));
        }
    }
    let ln_first = ln_gamma(rho)?;
    if zabs == 0.0 {
        return Ok(SeriesValue {
            value: Complex64::new(ln_first.exp(), 0.0),
            terms_used: 1,
            tail_estimate: 0.0,
            converged: true,
        });
    }
    let ln_z = zabs.ln();
    let arg = z.arg();
    let mut ln_mag = ln_first;
    let mut failure = None;
    let sv = sum_series(
        |n| {
            if n > 0 {
                let k = (n - 1) as f64;
                let step = if unit_sigma {
                    Ok(((rho + k) / (k + 1.0)).ln())
                } else {
                    ln_gamma_ratio(rho + k * sigma, sigma).map(|r| r - (k + 1.0).ln())
                };
                match step {
                    Ok(s) => ln_mag += s + ln_z,
                    Err(e) => {
                        failure.get_or_insert(e);
                        return Complex64::new(f64::NAN, 0.0);
                    }
                }
            }
            Complex64::from_polar(ln_mag.exp(), n as f64 * arg)
        },
        ctl,
    );
    match failure {
        Some(e) => Err(e),
        None => sv,
    }
}
