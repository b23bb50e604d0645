//! Presets, asymptotic-vs-oracle sweeps, slope fits and reports.
//!
//! The binary is a thin layer over this module so everything it prints can
//! also be reached from tests.

use std::f64::consts::PI;
use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::multidim::{asym_p_nd, HessianModel};
use crate::oracle::{
    default_grid, inf_rho, inf_sigma, integrate_1d, integrate_nd, integrate_pbar,
    tail_bound_exterior, DomainBox, InfimumReport, QuadOptions, DEFAULT_BUDGET,
};
use crate::series1d::{
    asym_p_1d, assemble_symbols, symbol_im, symbol_im_two_sided, Domain1D, ExpansionSpec1D,
};
use crate::specfun::SeriesControl;

pub type ScalarField = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type FourierField = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// Exponent of e^(−λ(f − f_min)) beyond which the oracle box is cut.
const BOX_SUPPRESSION: f64 = 60.0;
const SELF_CHECK_EPS: f64 = 0.1;

#[derive(Clone)]
pub struct Preset {
    pub name: String,
    pub d: usize,
    pub evaluator: ScalarField,
    pub spec1d: Option<ExpansionSpec1D>,
    pub hessian: Option<HessianModel>,
    /// f̃(k) = ∫ f(x) e^(ik·x) dx, present for the whole-space presets.
    pub fourier_transform: Option<FourierField>,
    /// C = ∫ f², the constant of the exterior tail bound.
    pub l2_norm_sq: Option<f64>,
}

impl fmt::Debug for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Preset")
            .field("name", &self.name)
            .field("d", &self.d)
            .field("spec1d", &self.spec1d)
            .field("hessian", &self.hessian)
            .field("fourier_transform", &self.fourier_transform.is_some())
            .field("l2_norm_sq", &self.l2_norm_sq)
            .finish()
    }
}

impl Preset {
    /// A 1D preset whose phase is the polynomial of `spec` itself.
    pub fn from_spec1d(name: &str, spec: ExpansionSpec1D) -> Result<Self> {
        spec.validate()?;
        let s = spec.clone();
        Ok(Self {
            name: name.to_string(),
            d: 1,
            evaluator: Arc::new(move |x: &[f64]| s.eval_phase(x[0])),
            spec1d: Some(spec),
            hessian: None,
            fourier_transform: None,
            l2_norm_sq: None,
        })
    }

    /// A d-dimensional preset with the exact quadratic f0 + ½xᵀAx.
    pub fn from_hessian(name: &str, model: HessianModel) -> Result<Self> {
        model.decompose()?;
        let m = model.clone();
        Ok(Self {
            name: name.to_string(),
            d: model.d,
            evaluator: Arc::new(move |x: &[f64]| {
                let d = m.d;
                let mut q = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        q += x[i] * m.a[i * d + j] * x[j];
                    }
                }
                m.f0 + 0.5 * q
            }),
            spec1d: None,
            hessian: Some(model),
            fourier_transform: None,
            l2_norm_sq: None,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.spec1d.is_none() && self.hessian.is_none() {
            return Err(Error::Config(format!("preset {} has neither 1D spec nor Hessian", self.name)));
        }
        if self.fourier_transform.is_some() && self.hessian.is_none() {
            return Err(Error::Config(format!("preset {} has a transform but no Hessian", self.name)));
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.evaluator)(x)
    }

    pub fn is_domain_extension(&self) -> bool {
        self.fourier_transform.is_some()
    }

    /// Box used by the startup self-check.
    pub fn check_box(&self) -> Result<DomainBox> {
        if let Some(spec) = &self.spec1d {
            return match spec.domain {
                Domain1D::OneSided { b } => DomainBox::new(vec![0.0], vec![b]),
                Domain1D::TwoSided { b1, b2 } => DomainBox::new(vec![-b1], vec![b2]),
                Domain1D::RealLine => DomainBox::cube(1, 3.0),
            };
        }
        DomainBox::cube(self.d, if self.is_domain_extension() { 6.0 } else { 3.0 })
    }
}

/// Finite two-sided domains wide enough that the endpoints are invisible;
/// the real-line kind is reserved for phases with f_crit < 0.
const WIDE: Domain1D = Domain1D::TwoSided { b1: 10.0, b2: 10.0 };

fn gauss_spec(beta: f64) -> ExpansionSpec1D {
    ExpansionSpec1D::new(2.0, beta, vec![1.0], 0.0, WIDE).expect("valid preset")
}

fn negative_gaussian(d: usize) -> Preset {
    let mut a = vec![0.0; d * d];
    for i in 0..d {
        a[i * d + i] = 2.0;
    }
    let dd = d as f64;
    Preset {
        name: if d == 1 { "negative-gaussian".into() } else { format!("negative-gaussian-{d}d") },
        d,
        evaluator: Arc::new(|x: &[f64]| -(-x.iter().map(|v| v * v).sum::<f64>()).exp()),
        spec1d: None,
        hessian: Some(HessianModel::new(d, -1.0, a).expect("valid preset")),
        fourier_transform: Some(Arc::new(move |k: &[f64]| {
            let k2: f64 = k.iter().map(|v| v * v).sum();
            Complex64::new(-PI.powf(dd / 2.0) * (-k2 / 4.0).exp(), 0.0)
        })),
        l2_norm_sq: Some((PI / 2.0).powf(dd / 2.0)),
    }
}

pub fn preset_catalog() -> Vec<Preset> {
    let one_d = |name: &str, spec: ExpansionSpec1D, f: fn(f64) -> f64| Preset {
        name: name.to_string(),
        d: 1,
        evaluator: Arc::new(move |x: &[f64]| f(x[0])),
        spec1d: Some(spec),
        hessian: None,
        fourier_transform: None,
        l2_norm_sq: None,
    };
    vec![
        one_d("gauss1d", gauss_spec(1.0), |x| x * x),
        one_d(
            "quartic1d",
            ExpansionSpec1D::new(4.0, 1.0, vec![1.0], 0.0, Domain1D::TwoSided { b1: 1.0, b2: 1.0 })
                .expect("valid preset"),
            |x| x.powi(4),
        ),
        one_d(
            "cubic-perturbed",
            ExpansionSpec1D::new(2.0, 1.0, vec![1.0, 0.3, 0.2], 0.0, WIDE)
                .expect("valid preset"),
            |x| x * x + 0.3 * x.powi(3) + 0.2 * x.powi(4),
        ),
        one_d("gauss1d-beta2", gauss_spec(2.0), |x| x * x),
        one_d("gauss1d-beta3", gauss_spec(3.0), |x| x * x),
        negative_gaussian(1),
        negative_gaussian(2),
        Preset {
            name: "spd2d".into(),
            d: 2,
            evaluator: Arc::new(|x: &[f64]| {
                0.5 * (2.0 * x[0] * x[0] + 2.0 * x[0] * x[1] + 3.0 * x[1] * x[1])
            }),
            spec1d: None,
            hessian: Some(HessianModel::new(2, 0.0, vec![2.0, 1.0, 1.0, 3.0]).expect("valid preset")),
            fourier_transform: None,
            l2_norm_sq: None,
        },
    ]
}

pub fn preset_names() -> Vec<String> {
    preset_catalog().into_iter().map(|p| p.name).collect()
}

pub fn preset_by_name(name: &str) -> Result<Preset> {
    preset_catalog()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

/// Outcome of the startup checks of the isolated-minimum conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfCheck {
    pub rho: InfimumReport,
    pub sigma: Option<InfimumReport>,
}

/// inf ρ > 0 at ε = 0.1 for every preset, and inf σ > 0 for the
/// whole-space presets.
pub fn self_check(preset: &Preset) -> Result<SelfCheck> {
    preset.validate()?;
    let bx = preset.check_box()?;
    let n = default_grid(preset.d);
    let f = |x: &[f64]| preset.eval(x);
    let rho = inf_rho(f, SELF_CHECK_EPS, &bx, n)?;
    if !rho.satisfied {
        return Err(Error::Precondition(format!(
            "preset {}: inf rho = {} <= 0 at eps = {SELF_CHECK_EPS}",
            preset.name, rho.value
        )));
    }
    let sigma = if preset.is_domain_extension() {
        let r = bx.hi[0];
        let outside = preset.eval(&vec_with_first(preset.d, r)).abs();
        let rep = inf_sigma(f, SELF_CHECK_EPS, &bx, n, Some(outside))?;
        if !rep.satisfied {
            return Err(Error::Precondition(format!(
                "preset {}: inf sigma = {} <= 0 at eps = {SELF_CHECK_EPS}",
                preset.name, rep.value
            )));
        }
        Some(rep)
    } else {
        None
    };
    Ok(SelfCheck { rho, sigma })
}

fn vec_with_first(d: usize, v: f64) -> Vec<f64> {
    let mut x = vec![0.0; d];
    x[0] = v;
    x
}

/// One asymptotic-vs-oracle comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// |k|; the direction is fixed per sweep.
    pub k: f64,
    pub s: f64,
    pub p_asym: Complex64,
    pub p_oracle: Complex64,
    pub abs_err: f64,
    /// abs_err/|p_oracle|, or abs_err when the oracle value is zero.
    pub rel_err: f64,
    pub oracle_converged: bool,
}

impl SweepRow {
    fn new(k: f64, s: f64, p_asym: Complex64, p_oracle: Complex64, converged: bool) -> Self {
        let abs_err = (p_asym - p_oracle).norm();
        let scale = p_oracle.norm();
        Self {
            k,
            s,
            p_asym,
            p_oracle,
            abs_err,
            rel_err: if scale > 0.0 { abs_err / scale } else { abs_err },
            oracle_converged: converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub s: f64,
    pub k_grid: Vec<f64>,
    /// Direction of k for d > 1; normalized internally. Defaults to (1,…,1).
    pub k_dir: Option<Vec<f64>>,
    pub order: usize,
    pub tol: f64,
    pub budget: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            s: 2.0,
            k_grid: geometric_grid(4.0, 16.0, 3).expect("valid grid"),
            k_dir: None,
            order: 2,
            tol: 1e-10,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl SweepConfig {
    fn quad(&self) -> QuadOptions {
        QuadOptions {
            budget: self.budget,
            ..QuadOptions::with_tol(self.tol)
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(Error::Config(format!("s must be > 0, got {}", self.s)));
        }
        if self.order > 2 {
            return Err(Error::Config(format!("order must be 0, 1 or 2, got {}", self.order)));
        }
        if self.k_grid.iter().any(|k| !(*k > 0.0 && k.is_finite())) {
            return Err(Error::Config("k grid values must be finite and > 0".into()));
        }
        Ok(())
    }
}

/// `count` points from `k_min` to `k_max`, equally spaced in log k.
pub fn geometric_grid(k_min: f64, k_max: f64, count: usize) -> Result<Vec<f64>> {
    if !(k_min > 0.0 && k_max >= k_min && k_max.is_finite()) {
        return Err(Error::Config(format!("need 0 < k_min <= k_max, got {k_min}, {k_max}")));
    }
    Ok(match count {
        0 => Vec::new(),
        1 => vec![k_min],
        _ => {
            let r = (k_max / k_min).ln() / (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { k_max } else { k_min * (r * i as f64).exp() })
                .collect()
        }
    })
}

/// Unit direction for the vector k.
pub fn unit_direction(d: usize, dir: Option<&[f64]>) -> Result<Vec<f64>> {
    let v = match dir {
        Some(v) => v.to_vec(),
        None => vec![1.0; d],
    };
    if v.len() != d {
        return Err(Error::Config(format!("k direction has length {}, preset has d = {d}", v.len())));
    }
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Config("k direction must be a finite non-zero vector".into()));
    }
    Ok(v.iter().map(|x| x / n).collect())
}

/// The spec's domain cut down to where e^(−λ(f − f_crit)) ≥ e^(−60).
fn oracle_interval(preset: &Preset, spec: &ExpansionSpec1D, lambda: f64) -> (f64, f64) {
    let f = |x: f64| lambda * (preset.eval(&[x]) - spec.f_crit);
    let mut r = (BOX_SUPPRESSION / (spec.a0() * lambda)).powf(1.0 / spec.alpha);
    while f(r).min(f(-r)) < BOX_SUPPRESSION && r < 1e6 {
        r *= 1.2;
    }
    match spec.domain {
        Domain1D::OneSided { b } => (0.0, b.min(r)),
        Domain1D::TwoSided { b1, b2 } => (-b1.min(r), b2.min(r)),
        Domain1D::RealLine => (-r, r),
    }
}

/// Box for the whole-space presets: e^(−λμ_min|x|²/2) and the P̄ integrand
/// both fall below e^(−60) outside it.
fn oracle_box_nd(preset: &Preset, model: &HessianModel, lambda: f64) -> Result<DomainBox> {
    if preset.is_domain_extension() {
        // |e^(−λf) − 1 + λf| ≤ (λf)²/2 ≈ λ² e^(−2|x|²)/2
        let r = ((2.0 * (lambda + 1.0).ln() + 2.0 * BOX_SUPPRESSION) / 2.0).sqrt();
        return DomainBox::cube(preset.d, r);
    }
    let dec = model.decompose()?;
    let r = (2.0 * BOX_SUPPRESSION / (lambda * dec.mu[0])).sqrt();
    DomainBox::cube(preset.d, r)
}

/// Asymptotic value at |k| = `k` along `dir`.
pub fn asymptotic_value(preset: &Preset, s: f64, k: f64, dir: &[f64], order: usize) -> Result<Complex64> {
    if let Some(model) = &preset.hessian {
        if preset.spec1d.is_none() || preset.is_domain_extension() {
            let kv: Vec<f64> = dir.iter().map(|u| u * k).collect();
            return asym_p_nd(model, s, &kv);
        }
    }
    let spec = preset
        .spec1d
        .as_ref()
        .ok_or_else(|| Error::Config(format!("preset {} has no 1D spec", preset.name)))?;
    let k1 = k * dir[0];
    if spec.alpha == 2.0 && spec.beta == 1.0 && spec.domain.is_two_sided() && s >= 2.0 && k1 > 0.0 {
        return asym_p_1d(spec, s, k1, order);
    }
    assemble_symbols(spec, order, k.powf(s), k1, &SeriesControl::default())
}

/// Oracle value at |k| = `k` along `dir`.
pub fn oracle_value(
    preset: &Preset,
    s: f64,
    k: f64,
    dir: &[f64],
    opts: &QuadOptions,
) -> Result<(Complex64, bool)> {
    let lambda = k.powf(s);
    let kv: Vec<f64> = dir.iter().map(|u| u * k).collect();
    if preset.is_domain_extension() {
        let model = preset.hessian.as_ref().expect("validated");
        let bx = oracle_box_nd(preset, model, lambda)?;
        let ft = preset.fourier_transform.as_ref().map(|t| move |k: &[f64]| t(k));
        let r = integrate_pbar(|x| preset.eval(x), ft, &kv, s, &bx, opts)?;
        return Ok((r.p, r.pbar.converged));
    }
    if let Some(spec) = &preset.spec1d {
        let (lo, hi) = oracle_interval(preset, spec, lambda);
        let q = integrate_1d(|x| preset.eval(&[x]), spec.beta, kv[0], lambda, lo, hi, opts)?;
        return Ok((q.value, q.converged));
    }
    let model = preset.hessian.as_ref().expect("validated");
    let bx = oracle_box_nd(preset, model, lambda)?;
    let q = integrate_nd(|x| preset.eval(x), &kv, lambda, &bx, opts)?;
    Ok((q.value, q.converged))
}

/// Asymptotic formula vs oracle at every k of the grid, rows in ascending
/// k. Oracle non-convergence is flagged per row; other failures abort.
pub fn run_sweep(preset: &Preset, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    self_check(preset)?;
    let dir = unit_direction(preset.d, cfg.k_dir.as_deref())?;
    let mut ks = cfg.k_grid.clone();
    ks.sort_by(f64::total_cmp);
    let opts = cfg.quad();
    ks.par_iter()
        .map(|&k| {
            let p_asym = asymptotic_value(preset, cfg.s, k, &dir, cfg.order)?;
            let (p_oracle, converged) = oracle_value(preset, cfg.s, k, &dir, &opts)?;
            Ok(SweepRow::new(k, cfg.s, p_asym, p_oracle, converged))
        })
        .collect()
}

/// Least-squares slope of ys against xs.
pub fn fit_linear_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Numerical("slope fit needs matching xs and ys".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 1e-300 * n) || !sxx.is_finite() {
        return Err(Error::Numerical("degenerate abscissae in slope fit".into()));
    }
    Ok(sxy / sxx)
}

/// Slope of log ys against log xs.
pub fn fit_decay_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() < 4 || xs.len() != ys.len() {
        return domain(format!("decay fit needs >= 4 matching points, got {}", xs.len()));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) {
        return domain("decay fit needs positive finite data");
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    fit_linear_slope(&lx, &ly)
}

/// I_m(λ, k), one-sided (half-line) or two-sided according to `one_sided`.
pub fn symbol_value(
    spec: &ExpansionSpec1D,
    m: usize,
    lambda: f64,
    k: f64,
    one_sided: bool,
    ctl: &SeriesControl,
) -> Result<Complex64> {
    let v = if one_sided || !spec.domain.is_two_sided() {
        symbol_im(spec, m, lambda, k, ctl)?
    } else {
        symbol_im_two_sided(spec, m, lambda, k, ctl)?
    };
    Ok(v.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolRow {
    pub m: usize,
    pub lambda: f64,
    pub k: f64,
    pub value: Complex64,
    /// |I_m/I_{m−1}|, absent for m = 0.
    pub ratio_to_previous: Option<f64>,
}

pub fn symbol_table(
    spec: &ExpansionSpec1D,
    m_max: usize,
    lambda: f64,
    k: f64,
    one_sided: bool,
) -> Result<Vec<SymbolRow>> {
    let ctl = SeriesControl::default();
    let mut rows: Vec<SymbolRow> = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let value = symbol_value(spec, m, lambda, k, one_sided, &ctl)?;
        let ratio_to_previous = rows.last().map(|p| value.norm() / p.value.norm());
        rows.push(SymbolRow {
            m,
            lambda,
            k,
            value,
            ratio_to_previous,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub m: usize,
    /// None when I_m vanishes identically on the grid.
    pub slope: Option<f64>,
    /// −s(m + β)/α.
    pub expected: f64,
}

/// Fitted log-log slope of |I_m(k^s, k)| over `ks` for every m ≤ m_max.
pub fn decay_fit(
    spec: &ExpansionSpec1D,
    s: f64,
    ks: &[f64],
    m_max: usize,
    one_sided: bool,
) -> Result<Vec<DecayFit>> {
    let ctl = SeriesControl::default();
    (0..=m_max)
        .map(|m| {
            let ys = ks
                .iter()
                .map(|&k| Ok(symbol_value(spec, m, k.powf(s), k, one_sided, &ctl)?.norm()))
                .collect::<Result<Vec<f64>>>()?;
            let slope = if ys.iter().all(|y| *y == 0.0) {
                None
            } else {
                Some(fit_decay_slope(ks, &ys)?)
            };
            Ok(DecayFit {
                m,
                slope,
                expected: -s * (m as f64 + spec.beta) / spec.alpha,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainExtConfig {
    pub s: f64,
    pub k_grid: Vec<f64>,
    pub k_dir: Option<Vec<f64>>,
    pub eps: f64,
    /// σ used in the tail bound; the grid infimum when absent.
    pub sigma: Option<f64>,
    pub tol: f64,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainExtRow {
    pub row: SweepRow,
    pub pbar: Complex64,
    pub tail_bound: f64,
    /// ln(tail_bound/|p_asym|).
    pub log_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainExtReport {
    pub rows: Vec<DomainExtRow>,
    pub sigma_check: InfimumReport,
    pub sigma_used: f64,
    /// Slope of log_ratio against |k|^s.
    pub log_ratio_slope: Option<f64>,
    pub rel_err_decreasing: bool,
}

/// The whole-space experiment: P from the subtracted integral against the
/// Gaussian formula, plus the exterior tail bound at each k.
pub fn domain_extension(preset: &Preset, cfg: &DomainExtConfig) -> Result<DomainExtReport> {
    if !preset.is_domain_extension() {
        return Err(Error::Config(format!("preset {} has no Fourier transform", preset.name)));
    }
    let checks = self_check(preset)?;
    let model = preset.hessian.as_ref().expect("validated");
    let c = preset
        .l2_norm_sq
        .ok_or_else(|| Error::Config(format!("preset {} has no L2 norm", preset.name)))?;
    let bx = preset.check_box()?;
    let outside = preset.eval(&vec_with_first(preset.d, bx.hi[0])).abs();
    let sigma_check = inf_sigma(|x| preset.eval(x), cfg.eps, &bx, default_grid(preset.d), Some(outside))?;
    let sigma_used = cfg.sigma.unwrap_or(sigma_check.value);
    let sweep = SweepConfig {
        s: cfg.s,
        k_grid: cfg.k_grid.clone(),
        k_dir: cfg.k_dir.clone(),
        order: 0,
        tol: cfg.tol,
        budget: cfg.budget,
    };
    let rows = run_sweep(preset, &sweep)?;
    let dir = unit_direction(preset.d, cfg.k_dir.as_deref())?;
    let transform = preset.fourier_transform.as_ref().expect("checked");
    let rows = rows
        .into_iter()
        .map(|row| {
            let kv: Vec<f64> = dir.iter().map(|u| u * row.k).collect();
            let lambda = row.k.powf(cfg.s);
            let tail_bound = tail_bound_exterior(c, model.f0, sigma_used, row.k, cfg.s)?.bound;
            Ok(DomainExtRow {
                pbar: row.p_oracle + lambda * transform(&kv),
                tail_bound,
                log_ratio: (tail_bound / row.p_asym.norm()).ln(),
                row,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.row.k.powf(cfg.s)).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.log_ratio).collect();
    let log_ratio_slope = if rows.len() >= 2 { fit_linear_slope(&xs, &ys).ok() } else { None };
    let rel_err_decreasing = rows.windows(2).all(|w| w[1].row.rel_err < w[0].row.rel_err);
    debug_assert!(checks.sigma.is_some());
    Ok(DomainExtReport {
        rows,
        sigma_check,
        sigma_used,
        log_ratio_slope,
        rel_err_decreasing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

pub const CSV_HEADER: &str = "k,s,re_asym,im_asym,re_oracle,im_oracle,abs_err,rel_err";

/// 17 significant digits; non-finite values become JSON null.
fn num17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

fn csv17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn render_report(rows: &[SweepRow], format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in rows {
                let cols = [
                    r.k,
                    r.s,
                    r.p_asym.re,
                    r.p_asym.im,
                    r.p_oracle.re,
                    r.p_oracle.im,
                    r.abs_err,
                    r.rel_err,
                ];
                let line: Vec<String> = cols.iter().map(|&v| csv17(v)).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
        ReportFormat::Json => {
            out.push('[');
            for (i, r) in rows.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(
                    out,
                    "\n  {{\"k\":{},\"s\":{},\"p_asym\":[{},{}],\"p_oracle\":[{},{}],\"abs_err\":{},\"rel_err\":{},\"oracle_converged\":{}}}",
                    num17(r.k),
                    num17(r.s),
                    num17(r.p_asym.re),
                    num17(r.p_asym.im),
                    num17(r.p_oracle.re),
                    num17(r.p_oracle.im),
                    num17(r.abs_err),
                    num17(r.rel_err),
                    r.oracle_converged
                );
            }
            out.push_str(if rows.is_empty() { "]\n" } else { "\n]\n" });
        }
    }
    out
}

/// Writes the report to `path`, or to stdout when `path` is None.
pub fn emit_report(rows: &[SweepRow], format: ReportFormat, path: Option<&std::path::Path>) -> Result<()> {
    let text = render_report(rows, format);
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
