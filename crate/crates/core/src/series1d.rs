//! One-dimensional expansion engine.
//!
//! Near the critical point (shifted to the origin) the phase is expanded as
//!
//! ```text
//! f(x) ~ f_crit + Σ_j a_j x^(j + α),      g(x) = x^(β-1) e^(ikx)
//! ```
//!
//! and the Laplace series is resummed over all Fourier powers at fixed
//! derivative order `m`, giving the symbols `I_m(λ, k)`. The integral itself
//! behaves like `e^(-λ f_crit) / α · Σ_m I_m(λ, k)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{domain, Error, Result};
use crate::specfun::{
    fox_wright_1psi0, gamma, hyp0f2, hyp1f1, ln_gamma, sum_series, SeriesControl,
    SeriesValue,
};

/// Integration domain of a 1D problem, critical point at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain1D {
    OneSided { b: f64 },
    TwoSided { b1: f64, b2: f64 },
    RealLine,
}

impl Domain1D {
    pub fn is_two_sided(&self) -> bool {
        !matches!(self, Domain1D::OneSided { .. })
    }
}

/// Problem data for the 1D expansion: leading exponent `alpha`, amplitude
/// exponent `beta`, the coefficients `a = [a₀, a₁, …]` and `f` at the
/// critical point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionSpec1D {
    pub alpha: f64,
    pub beta: f64,
    pub a: Vec<f64>,
    pub f_crit: f64,
    pub domain: Domain1D,
}

fn is_even_integer(x: f64) -> bool {
    x == x.floor() && (x / 2.0) == (x / 2.0).floor()
}

fn is_positive_integer(x: f64) -> bool {
    x >= 1.0 && x == x.floor()
}

impl ExpansionSpec1D {
    pub fn new(alpha: f64, beta: f64, a: Vec<f64>, f_crit: f64, domain: Domain1D) -> Result<Self> {
        let spec = Self {
            alpha,
            beta,
            a,
            f_crit,
            domain,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 1.0 && self.alpha.is_finite()) {
            return domain(format!("alpha must be >= 1, got {}", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return domain(format!("beta must be > 0, got {}", self.beta));
        }
        match self.a.first() {
            Some(&a0) if a0 > 0.0 && a0.is_finite() => {}
            _ => return domain("a[0] must be present and positive"),
        }
        if self.a.iter().any(|x| !x.is_finite()) || !self.f_crit.is_finite() {
            return domain("coefficients must be finite");
        }
        match self.domain {
            Domain1D::OneSided { b } => {
                if !(b > 0.0) {
                    return domain(format!("one-sided domain needs b > 0, got {b}"));
                }
            }
            Domain1D::TwoSided { b1, b2 } => {
                if !(b1 > 0.0 && b2 > 0.0) {
                    return domain(format!("two-sided domain needs b1, b2 > 0, got {b1}, {b2}"));
                }
            }
            Domain1D::RealLine => {
                if !(self.f_crit < 0.0) {
                    return domain(format!(
                        "real-line domain needs f_crit < 0, got {}",
                        self.f_crit
                    ));
                }
            }
        }
        if self.domain.is_two_sided() && !is_even_integer(self.alpha) {
            return domain(format!(
                "two-sided domains need an even integer alpha, got {}",
                self.alpha
            ));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("ExpansionSpec1D: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn a0(&self) -> f64 {
        self.a[0]
    }

    /// `a_j`, zero beyond the stored coefficients.
    pub fn coeff(&self, j: usize) -> f64 {
        self.a.get(j).copied().unwrap_or(0.0)
    }

    /// ν = (n + β)/α.
    pub fn nu(&self, n: usize) -> f64 {
        (n as f64 + self.beta) / self.alpha
    }

    /// Bell-polynomial arguments `i!·a_i/a₀`, i = 1..=len.
    fn derivative_args_dd(&self, len: usize) -> Vec<Dd> {
        let a0 = Dd::from_f64(self.a0());
        let mut fact = Dd::ONE;
        (1..=len)
            .map(|i| {
                fact = fact * Dd::from_f64(i as f64);
                fact * Dd::from_f64(self.coeff(i)) / a0
            })
            .collect()
    }

    fn derivative_args(&self, len: usize) -> Vec<f64> {
        let a0 = self.a0();
        let mut fact = 1.0;
        (1..=len)
            .map(|i| {
                fact *= i as f64;
                fact * self.coeff(i) / a0
            })
            .collect()
    }

    /// The truncated phase `f_crit + Σ a_j x^(α+j)`; negative `x` needs an
    /// integer `alpha`.
    pub fn eval_phase(&self, x: f64) -> f64 {
        let lead = if self.alpha == self.alpha.floor() {
            x.powi(self.alpha as i32)
        } else {
            x.powf(self.alpha)
        };
        let mut poly = 0.0;
        for &c in self.a.iter().rev() {
            poly = poly * x + c;
        }
        self.f_crit + lead * poly
    }
}

/// One symbol `I_m(λ, k)` with the metadata of the series behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolValue {
    pub m: usize,
    pub lambda: f64,
    pub k: f64,
    pub value: Complex64,
    pub series: SeriesValue,
}

/// First- and second-order relative corrections of the Gaussian case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correction12 {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub x2: f64,
}

fn check_lambda_k(lambda: f64, k: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return domain(format!("lambda must be > 0, got {lambda}"));
    }
    if !(k >= 0.0 && k.is_finite()) {
        return domain(format!("k must be >= 0, got {k}"));
    }
    Ok(())
}

/// x_α = 4/(a₀λ)·(k/4)^α.
pub fn x_alpha(spec: &ExpansionSpec1D, lambda: f64, k: f64) -> Result<f64> {
    check_lambda_k(lambda, k)?;
    Ok(4.0 / (spec.a0() * lambda) * (k / 4.0).powf(spec.alpha))
}

/// Partial exponential Bell polynomial B_{m,j}(x₁, …, x_{m−j+1}), summed
/// over every tuple (j₁, j₂, …) with Σ jᵢ = j and Σ i·jᵢ = m.
pub fn bell_polynomial(m: usize, j: usize, x: &[f64]) -> Result<f64> {
    if m == 0 || j == 0 || j > m {
        return domain(format!("bell_polynomial needs 1 <= j <= m, got m={m}, j={j}"));
    }
    let width = m - j + 1;
    if x.len() < width {
        return domain(format!(
            "bell_polynomial B_{{{m},{j}}} needs {width} arguments, got {}",
            x.len()
        ));
    }
    let x: Vec<Dd> = x.iter().map(|&v| Dd::from_f64(v)).collect();
    Ok(bell_dd(m, j, &x).to_f64())
}

/// B_{m,j} accumulated in double-double; the terms of the d_{m,n} sums
/// cancel by up to four orders of magnitude.
fn bell_dd(m: usize, j: usize, x: &[Dd]) -> Dd {
    let width = m - j + 1;
    let mut fact = vec![Dd::ONE; m + 1];
    for i in 1..=m {
        fact[i] = fact[i - 1] * Dd::from_f64(i as f64);
    }
    let mut total = Dd::ZERO;
    let mut counts = vec![0usize; width];
    enumerate_partitions(1, j, m, &mut counts, &mut |counts| {
        let mut num = fact[m];
        let mut den = Dd::ONE;
        for (idx, &c) in counts.iter().enumerate() {
            if c > 0 {
                let i = idx + 1;
                num = num * x[idx].powi(c as u32);
                den = den * fact[c] * fact[i].powi(c as u32);
            }
        }
        total = total + num / den;
    });
    total
}

/// Visits every `counts` with `Σ counts[i-1] = parts` and
/// `Σ i·counts[i-1] = weight`, choosing multiplicities from part size `i` up.
fn enumerate_partitions<F: FnMut(&[usize])>(
    i: usize,
    parts: usize,
    weight: usize,
    counts: &mut Vec<usize>,
    visit: &mut F,
) {
    if parts == 0 {
        if weight == 0 {
            visit(counts);
        }
        return;
    }
    if i > counts.len() || weight < parts * i {
        return;
    }
    let max_c = (weight / i).min(parts);
    for c in (0..=max_c).rev() {
        counts[i - 1] = c;
        enumerate_partitions(i + 1, parts - c, weight - c * i, counts, visit);
    }
    counts[i - 1] = 0;
}

/// d_{m,n}: the m-th derivative at 0 of (1 + Σ_{j≥1} (a_j/a₀) x^j)^(−ν),
/// via Faà di Bruno with gamma ratios and Bell polynomials.
pub fn d_coeff(spec: &ExpansionSpec1D, m: usize, n_index: usize, nu: f64) -> Result<f64> {
    if m > n_index {
        return domain(format!("d_coeff needs m <= n, got m={m}, n={n_index}"));
    }
    if !(nu > 0.0 && nu.is_finite()) {
        return domain(format!("d_coeff needs nu > 0, got {nu}"));
    }
    if m == 0 {
        return Ok(1.0);
    }
    let args = spec.derivative_args_dd(m);
    let nu_dd = Dd::from_f64(nu);
    let mut total = Dd::ZERO;
    // (ν)_j built up exactly as ν(ν+1)…(ν+j−1)
    let mut rising = Dd::ONE;
    for j in 1..=m {
        rising = rising * (nu_dd + Dd::from_f64((j - 1) as f64));
        let term = rising * bell_dd(m, j, &args);
        total = if j % 2 == 0 { total + term } else { total - term };
    }
    Ok(total.to_f64())
}

/// Independent evaluation of d_{m,n} by truncated power-series arithmetic:
/// (1 + u)^(−ν) = exp(−ν log(1 + u)) to order m, then m! times the x^m
/// coefficient.
pub fn d_coeff_oracle(spec: &ExpansionSpec1D, m: usize, n_index: usize, nu: f64) -> Result<f64> {
    if m > n_index {
        return domain(format!("d_coeff_oracle needs m <= n, got m={m}, n={n_index}"));
    }
    if !(nu > 0.0 && nu.is_finite()) {
        return domain(format!("d_coeff_oracle needs nu > 0, got {nu}"));
    }
    let order = m + 1;
    let a0 = Dd::from_f64(spec.a0());
    let u: Vec<Dd> = (0..order)
        .map(|i| if i == 0 { Dd::ZERO } else { Dd::from_f64(spec.coeff(i)) / a0 })
        .collect();
    // log(1 + u) = Σ_{p≥1} (−1)^{p+1} u^p / p
    let mut log = vec![Dd::ZERO; order];
    let mut power = u.clone();
    for p in 1..order {
        let c = Dd::from_f64(if p % 2 == 1 { 1.0 } else { -1.0 }) / Dd::from_f64(p as f64);
        for (l, &q) in log.iter_mut().zip(&power) {
            *l = *l + c * q;
        }
        power = series_mul(&power, &u);
    }
    let g: Vec<Dd> = log.iter().map(|&l| -(Dd::from_f64(nu) * l)).collect();
    // E = exp(G): n e_n = Σ_{k=1}^{n} k g_k e_{n−k}
    let mut e = vec![Dd::ZERO; order];
    e[0] = Dd::ONE;
    for n in 1..order {
        let mut s = Dd::ZERO;
        for k in 1..=n {
            s = s + Dd::from_f64(k as f64) * g[k] * e[n - k];
        }
        e[n] = s / Dd::from_f64(n as f64);
    }
    let mut m_fact = Dd::ONE;
    for i in 1..=m {
        m_fact = m_fact * Dd::from_f64(i as f64);
    }
    Ok((m_fact * e[m]).to_f64())
}

fn series_mul(x: &[Dd], y: &[Dd]) -> Vec<Dd> {
    let n = x.len();
    let mut out = vec![Dd::ZERO; n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] = out[i + j] + x[i] * y[j];
        }
    }
    out
}

fn combine(parts: &[(Complex64, SeriesValue)]) -> (Complex64, SeriesValue) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut meta = SeriesValue {
        value,
        terms_used: 0,
        tail_estimate: 0.0,
        converged: true,
    };
    for (w, sv) in parts {
        value += w * sv.value;
        meta.terms_used = meta.terms_used.max(sv.terms_used);
        meta.tail_estimate += w.norm() * sv.tail_estimate;
        meta.converged &= sv.converged;
    }
    meta.value = value;
    (value, meta)
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// One-sided symbol I_m(λ, k) as a Bell-weighted combination of Fox-Wright
/// functions ₁Ψ₀[((m+β)/α + j, 1/α); ik/(a₀λ)^(1/α)].
pub fn symbol_im(
    spec: &ExpansionSpec1D,
    m: usize,
    lambda: f64,
    k: f64,
    ctl: &SeriesControl,
) -> Result<SymbolValue> {
    check_lambda_k(lambda, k)?;
    let (alpha, beta) = (spec.alpha, spec.beta);
    let l = spec.a0() * lambda;
    if alpha == 1.0 && k / l >= 1.0 {
        return Err(Error::Divergence(format!(
            "alpha = 1 symbols need k/(a0 lambda) < 1, got {}",
            k / l
        )));
    }
    let z = Complex64::new(0.0, k / l.powf(1.0 / alpha));
    let sigma = 1.0 / alpha;
    let rho0 = (m as f64 + beta) / alpha;
    let prefactor = 1.0 / (factorial(m) * l.powf(rho0));
    let mut parts = Vec::new();
    if m == 0 {
        parts.push((Complex64::new(prefactor, 0.0), fox_wright_1psi0(rho0, sigma, z, ctl)?));
    } else {
        // B_{m,j}(1!a₁, 2!a₂, …) (−1/a₀)^j equals (−1)^j B_{m,j}(i!·a_i/a₀)
        let args = spec.derivative_args(m);
        for j in 1..=m {
            let bell = bell_polynomial(m, j, &args)?;
            if bell == 0.0 {
                continue;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let psi = fox_wright_1psi0(rho0 + j as f64, sigma, z, ctl)?;
            parts.push((Complex64::new(prefactor * sign * bell, 0.0), psi));
        }
    }
    let (value, series) = combine(&parts);
    Ok(SymbolValue {
        m,
        lambda,
        k,
        value,
        series,
    })
}

/// Two-sided symbol: only Erdélyi indices `n` with `n + β − 1` even survive
/// the sum of the two half-lines, and the survivors are doubled.
pub fn symbol_im_two_sided(
    spec: &ExpansionSpec1D,
    m: usize,
    lambda: f64,
    k: f64,
    ctl: &SeriesControl,
) -> Result<SymbolValue> {
    check_lambda_k(lambda, k)?;
    if !spec.domain.is_two_sided() {
        return domain("symbol_im_two_sided needs a two-sided or real-line spec");
    }
    if !is_positive_integer(spec.beta) {
        return domain(format!("two-sided symbols need integer beta, got {}", spec.beta));
    }
    if !is_even_integer(spec.alpha) {
        return domain(format!("two-sided symbols need even alpha, got {}", spec.alpha));
    }
    let beta_parity = (spec.beta as usize + 1) % 2;
    let first = if m % 2 == beta_parity { m } else { m + 1 };
    let l = spec.a0() * lambda;
    let ln_l = l.ln();
    let ln_k = if k > 0.0 { k.ln() } else { f64::NEG_INFINITY };
    let scale = 2.0 / factorial(m);
    let mut failure = None;
    let sv = sum_series(
        |t| {
            let n = first + 2 * t;
            let p = n - m;
            if k == 0.0 && p > 0 {
                return Complex64::new(0.0, 0.0);
            }
            let nu = spec.nu(n);
            let step = (|| -> Result<f64> {
                let fourier = if p == 0 {
                    0.0
                } else {
                    p as f64 * ln_k - ln_gamma(p as f64 + 1.0)?
                };
                let ln_mag = ln_gamma(nu)? - nu * ln_l + fourier;
                Ok(ln_mag.exp() * d_coeff(spec, m, n, nu)?)
            })();
            match step {
                Ok(mag) => i_pow(p) * (scale * mag),
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(f64::NAN, 0.0)
                }
            }
        },
        ctl,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let sv = sv?;
    Ok(SymbolValue {
        m,
        lambda,
        k,
        value: sv.value,
        series: sv,
    })
}

fn i_pow(p: usize) -> Complex64 {
    match p % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// e^(−λ f_crit)/α · Σ_{m ≤ m_max} I_m(λ, k), using the two-sided symbols
/// for two-sided domains and the one-sided ones otherwise.
pub fn assemble_symbols(
    spec: &ExpansionSpec1D,
    m_max: usize,
    lambda: f64,
    k: f64,
    ctl: &SeriesControl,
) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for m in 0..=m_max {
        let sym = if spec.domain.is_two_sided() {
            symbol_im_two_sided(spec, m, lambda, k, ctl)?
        } else {
            symbol_im(spec, m, lambda, k, ctl)?
        };
        total += sym.value;
    }
    Ok(total * (-lambda * spec.f_crit).exp() / spec.alpha)
}

/// I₀ for α = 1 and any β > 0: Γ(β)·(x₁/(k(1 − i x₁)))^β.
pub fn i0_closed_alpha1(spec: &ExpansionSpec1D, lambda: f64, k: f64) -> Result<Complex64> {
    if spec.alpha != 1.0 {
        return domain("i0_closed_alpha1 needs alpha = 1");
    }
    if !(k > 0.0) {
        return domain("i0_closed_alpha1 needs k > 0");
    }
    let x1 = x_alpha(spec, lambda, k)?;
    if x1 >= 1.0 {
        return Err(Error::Divergence(format!("x1 = {x1} outside the unit disk")));
    }
    let base = Complex64::new(x1, 0.0) / (k * Complex64::new(1.0, -x1));
    Ok(gamma(spec.beta)? * base.powf(spec.beta))
}

/// Two-sided I₀ for α = 2 and integer β, in ₁F₁ form.
pub fn i0_closed_alpha2(
    spec: &ExpansionSpec1D,
    lambda: f64,
    k: f64,
    ctl: &SeriesControl,
) -> Result<Complex64> {
    if spec.alpha != 2.0 || !is_positive_integer(spec.beta) {
        return domain("i0_closed_alpha2 needs alpha = 2 and integer beta");
    }
    let x2 = x_alpha(spec, lambda, k)?;
    // 4 x₂ / k² = 1/(a₀λ), kept k-free so k = 0 works
    let inv_l = 1.0 / (spec.a0() * lambda);
    let beta = spec.beta as usize;
    if beta % 2 == 1 {
        let lh = (beta - 1) as f64 / 2.0 + 0.5;
        let f = hyp1f1(lh, 0.5, -x2, ctl)?.value.re;
        Ok(Complex64::new(2.0 * inv_l.powf(lh) * gamma(lh)? * f, 0.0))
    } else {
        let lh = (beta / 2) as f64 + 0.5;
        let f = hyp1f1(lh, 1.5, -x2, ctl)?.value.re;
        Ok(Complex64::new(0.0, 2.0 * k * inv_l.powf(lh) * gamma(lh)? * f))
    }
}

/// Two-sided I₀ for α = 4, β = 1 as a combination of two ₀F₂.
pub fn i0_closed_quartic(
    spec: &ExpansionSpec1D,
    lambda: f64,
    k: f64,
    ctl: &SeriesControl,
) -> Result<Complex64> {
    if spec.alpha != 4.0 || spec.beta != 1.0 {
        return domain("i0_closed_quartic needs alpha = 4 and beta = 1");
    }
    if !(k > 0.0) {
        return domain("i0_closed_quartic needs k > 0");
    }
    let x4 = x_alpha(spec, lambda, k)?;
    let f1 = hyp0f2(0.5, 0.75, x4 / 4.0, ctl)?.value.re;
    let f2 = hyp0f2(1.25, 1.5, x4 / 4.0, ctl)?.value.re;
    let pre = 2.0 * 2f64.sqrt() * x4.powf(0.25) / k;
    let bracket = 2.0 * gamma(0.25)? * f1 - 8.0 * x4.sqrt() * gamma(0.75)? * f2;
    Ok(Complex64::new(pre * bracket, 0.0))
}

/// Two-sided I₀ for α = 2, β = 1: 2√(π/(a₀λ))·e^(−x₂).
pub fn i0_gaussian(spec: &ExpansionSpec1D, lambda: f64, k: f64) -> Result<Complex64> {
    if spec.alpha != 2.0 || spec.beta != 1.0 {
        return domain("i0_gaussian needs alpha = 2 and beta = 1");
    }
    let x2 = x_alpha(spec, lambda, k)?;
    Ok(Complex64::new(
        2.0 * (PI / (spec.a0() * lambda)).sqrt() * (-x2).exp(),
        0.0,
    ))
}

fn require_gaussian_two_sided(spec: &ExpansionSpec1D) -> Result<()> {
    if spec.alpha != 2.0 || spec.beta != 1.0 {
        return domain(format!(
            "needs alpha = 2 and beta = 1, got alpha = {}, beta = {}",
            spec.alpha, spec.beta
        ));
    }
    if !spec.domain.is_two_sided() {
        return domain("needs a two-sided or real-line domain");
    }
    Ok(())
}

/// Relative corrections A and B with I₁/I₀ = iA/k and I₂/I₀ = B/k².
pub fn corrections_ab(spec: &ExpansionSpec1D, lambda: f64, k: f64) -> Result<Correction12> {
    require_gaussian_two_sided(spec)?;
    let x2 = x_alpha(spec, lambda, k)?;
    let r1 = spec.coeff(1) / spec.a0();
    let r2 = spec.coeff(2) / spec.a0();
    let a = r1 * x2 * (2.0 * x2 - 3.0);
    let b = -r2 * x2 * (4.0 * x2 * x2 - 12.0 * x2 + 3.0)
        - r1 * r1 / 4.0 * x2 * (8.0 * x2.powi(3) - 60.0 * x2 * x2 + 90.0 * x2 - 15.0);
    Ok(Correction12 { a, b, x2 })
}

/// Asymptotic P(k) in one dimension with λ = k^s:
///
/// ```text
/// e^(−k^s f_crit) k^(−s/2) √(π/a₀) e^(−x₂) [1 + iA/k + B/k²]
/// ```
///
/// truncated after `order` correction terms.
pub fn asym_p_1d(spec: &ExpansionSpec1D, s: f64, k: f64, order: usize) -> Result<Complex64> {
    require_gaussian_two_sided(spec)?;
    if !(s >= 2.0 && s.is_finite()) {
        return domain(format!("asym_p_1d needs s >= 2, got {s}"));
    }
    if !(k > 0.0 && k.is_finite()) {
        return domain(format!("asym_p_1d needs k > 0, got {k}"));
    }
    if order > 2 {
        return domain(format!("asym_p_1d order must be 0, 1 or 2, got {order}"));
    }
    let lambda = k.powf(s);
    let c = corrections_ab(spec, lambda, k)?;
    let mut bracket = Complex64::new(1.0, 0.0);
    if order >= 1 {
        bracket += Complex64::new(0.0, c.a / k);
    }
    if order >= 2 {
        bracket += Complex64::new(c.b / (k * k), 0.0);
    }
    let lead = (-lambda * spec.f_crit).exp() * (PI / spec.a0()).sqrt() / k.powf(s / 2.0)
        * (-c.x2).exp();
    Ok(bracket * lead)
}

/// Predicted decay exponent of I_m(k^s, k): −(s·m + s·β)/α.
pub fn decay_order_im(spec: &ExpansionSpec1D, m: usize, s: f64) -> Result<f64> {
    if !(s >= spec.alpha) {
        return domain(format!("decay orders need s >= alpha, got s = {s}"));
    }
    Ok(-(s * m as f64 + s * spec.beta) / spec.alpha)
}

/// Decay exponent of the n-th unresummed Laplace term at λ = k^s:
/// −(s·n + s·β)/α + n.
pub fn decay_order_erdelyi(spec: &ExpansionSpec1D, n: usize, s: f64) -> Result<f64> {
    Ok(decay_order_im(spec, n, s)? + n as f64)
}
