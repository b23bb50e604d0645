//! Brute-force quadrature of the integrals the asymptotic formulas describe.
//!
//! Nothing here touches the series machinery: the integrands are evaluated
//! directly and integrated by adaptive Gauss-Kronrod 7/15 panels. Initial
//! panels are at most π/|k| wide so each one sees at most half an
//! oscillation, then the panel with the largest |K − G| is bisected until
//! the summed estimate meets the tolerance.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::CompensatedSum;

pub const DEFAULT_BUDGET: u64 = 20_000_000;
pub const MAX_QUAD_DIM: usize = 3;
const ROUNDOFF_FLOOR: f64 = 4.0 * f64::EPSILON;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub evaluations: u64,
    pub converged: bool,
}

/// What the summed error estimate is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorReference {
    /// `tol·|value|`.
    Value,
    /// `tol·∫|integrand|`, used for inner integrals of nested quadrature
    /// whose value may cancel to nearly zero.
    L1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub tol: f64,
    pub budget: u64,
    /// Multiplies the number of initial panels.
    pub panel_density: f64,
    pub reference: ErrorReference,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            budget: DEFAULT_BUDGET,
            panel_density: 1.0,
            reference: ErrorReference::Value,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return domain(format!("quadrature tolerance must be > 0, got {}", self.tol));
        }
        if !(self.panel_density >= 1.0) {
            return domain("panel_density must be >= 1");
        }
        Ok(())
    }
}

/// Axis-aligned integration box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl DomainBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return domain("box bounds must be non-empty and of equal length");
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l < h) || !l.is_finite() || !h.is_finite()) {
            return domain(format!("box needs finite lo < hi componentwise, got {lo:?} {hi:?}"));
        }
        Ok(Self { lo, hi })
    }

    /// The cube [−r, r]^d.
    pub fn cube(d: usize, r: f64) -> Result<Self> {
        Self::new(vec![-r; d], vec![r; d])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// The same box with every side scaled by `factor` about its centre.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let (lo, hi) = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| {
                let c = 0.5 * (l + h);
                let r = 0.5 * (h - l) * factor;
                (c - r, c + r)
            })
            .unzip();
        Self::new(lo, hi)
    }
}

struct Panel {
    a: f64,
    b: f64,
    piece: usize,
    value: Complex64,
    abs: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.piece.cmp(&self.piece))
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<G: Fn(usize, f64) -> Complex64>(g: &G, piece: usize, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = g(piece, c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for i in 0..7 {
        let dx = h * XGK[i];
        let f1 = g(piece, c - dx);
        let f2 = g(piece, c + dx);
        kron += (f1 + f2) * WGK[i];
        abs += (f1.norm() + f2.norm()) * WGK[i];
        if i % 2 == 1 {
            gauss += (f1 + f2) * WG[i / 2];
        }
    }
    Panel {
        a,
        b,
        piece,
        value: kron * h,
        abs: abs * h.abs(),
        err: ((kron - gauss) * h).norm(),
    }
}

/// Adaptive integration of a complex integrand over one or more pieces.
/// `pieces` holds `(a, b, max_panel_width)`; `g(piece, t)` evaluates the
/// integrand of that piece.
fn adaptive<G>(pieces: &[(f64, f64, f64)], g: G, opts: &QuadOptions, evals: &Cell<u64>) -> QuadratureResult
where
    G: Fn(usize, f64) -> Complex64,
{
    let charge = |n: u64| evals.set(evals.get() + n);
    let start = evals.get();
    let mut heap = BinaryHeap::new();
    for (idx, &(a, b, width)) in pieces.iter().enumerate() {
        let count = (((b - a) / width) * opts.panel_density).ceil().max(1.0) as usize;
        let step = (b - a) / count as f64;
        for i in 0..count {
            let lo = a + step * i as f64;
            let hi = if i + 1 == count { b } else { a + step * (i + 1) as f64 };
            heap.push(gk15(&g, idx, lo, hi));
            charge(15);
        }
    }
    let totals = |heap: &BinaryHeap<Panel>| {
        let mut panels: Vec<&Panel> = heap.iter().collect();
        panels.sort_by(|p, q| p.piece.cmp(&q.piece).then(p.a.total_cmp(&q.a)));
        let mut acc = CompensatedSum::new();
        let (mut err, mut abs) = (0.0, 0.0);
        for p in panels {
            acc.add(p.value);
            err += p.err;
            abs += p.abs;
        }
        (acc.value(), err, abs)
    };
    let (mut value, mut err, mut abs) = totals(&heap);
    let mut iterations = 0usize;
    let converged = loop {
        let reference = match opts.reference {
            ErrorReference::Value => value.norm(),
            ErrorReference::L1 => abs,
        };
        if err <= opts.tol * reference {
            break true;
        }
        // even the worst panel is at round-off of its own ∫|integrand|:
        // bisecting further cannot help, the relative target is out of reach
        if let Some(worst) = heap.peek() {
            if worst.err <= ROUNDOFF_FLOOR * worst.abs {
                break false;
            }
        }
        if evals.get() - start + 30 > opts.budget {
            break false;
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            heap.push(worst);
            break false;
        }
        let left = gk15(&g, worst.piece, worst.a, mid);
        let right = gk15(&g, worst.piece, mid, worst.b);
        charge(30);
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        abs += left.abs + right.abs - worst.abs;
        heap.push(left);
        heap.push(right);
        iterations += 1;
        if iterations.is_multiple_of(256) {
            (value, err, abs) = totals(&heap);
        }
    };
    let (value, err, _) = totals(&heap);
    QuadratureResult {
        value,
        abs_error_estimate: err,
        evaluations: evals.get() - start,
        converged,
    }
}

fn panel_width(k: f64) -> f64 {
    PI / k.abs().max(1.0)
}

/// ∫_lo^hi e^(−λ f(x)) x^(β−1) e^(ikx) dx.
///
/// For β < 1 the box must start at 0 and the first panel is integrated in
/// t = x^β, which turns the endpoint singularity into a smooth integrand.
pub fn integrate_1d<F>(
    f: F,
    beta: f64,
    k: f64,
    lambda: f64,
    lo: f64,
    hi: f64,
    opts: &QuadOptions,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    opts.validate()?;
    if !(beta > 0.0 && beta.is_finite()) {
        return domain(format!("beta must be > 0, got {beta}"));
    }
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return domain(format!("interval needs finite lo < hi, got ({lo}, {hi})"));
    }
    if !(k.is_finite() && lambda.is_finite()) {
        return domain("k and lambda must be finite");
    }
    let integer_beta = beta == beta.floor();
    if !integer_beta && lo < 0.0 {
        return domain("non-integer beta needs a box within x >= 0");
    }
    if beta < 1.0 && lo > 0.0 {
        // no singular endpoint in the box
    } else if beta < 1.0 && lo != 0.0 {
        return domain("beta < 1 needs the box to start at 0");
    }
    let width = panel_width(k);
    let amplitude = move |x: f64| {
        if beta == 1.0 {
            1.0
        } else if integer_beta {
            x.powi(beta as i32 - 1)
        } else {
            x.powf(beta - 1.0)
        }
    };
    let direct = |x: f64| Complex64::from_polar((-lambda * f(x)).exp() * amplitude(x), k * x);
    let evals = Cell::new(0);
    let result = if beta < 1.0 && lo == 0.0 {
        let cut = width.min(hi);
        let t_hi = cut.powf(beta);
        let mut pieces = vec![(0.0, t_hi, t_hi)];
        if cut < hi {
            pieces.push((cut, hi, width));
        }
        adaptive(
            &pieces,
            |piece, t| {
                if piece == 0 {
                    let x = t.powf(1.0 / beta);
                    Complex64::from_polar((-lambda * f(x)).exp() / beta, k * x)
                } else {
                    direct(t)
                }
            },
            opts,
            &evals,
        )
    } else {
        adaptive(&[(lo, hi, width)], |_, x| direct(x), opts, &evals)
    };
    Ok(result)
}

/// ∫_box w(x) e^(ik·x) dx by iterated 1D quadrature; the innermost axis is
/// the last coordinate.
pub fn integrate_weight_box<W>(
    w: W,
    k: &[f64],
    bx: &DomainBox,
    opts: &QuadOptions,
) -> Result<QuadratureResult>
where
    W: Fn(&[f64]) -> f64,
{
    opts.validate()?;
    let d = bx.dim();
    if d > MAX_QUAD_DIM {
        return Err(Error::UnsupportedDimension(d, MAX_QUAD_DIM));
    }
    if k.len() != d || k.iter().any(|x| !x.is_finite()) {
        return domain(format!("k must be a finite {d}-vector"));
    }
    let evals = Cell::new(0u64);
    let all_converged = Cell::new(true);
    let mut x = vec![0.0; d];
    let result = nested(&w, k, bx, opts, 0, &mut x, &evals, &all_converged);
    Ok(QuadratureResult {
        converged: result.converged && all_converged.get(),
        evaluations: evals.get(),
        ..result
    })
}

#[allow(clippy::too_many_arguments)]
fn nested<W>(
    w: &W,
    k: &[f64],
    bx: &DomainBox,
    opts: &QuadOptions,
    axis: usize,
    x: &mut Vec<f64>,
    evals: &Cell<u64>,
    all_converged: &Cell<bool>,
) -> QuadratureResult
where
    W: Fn(&[f64]) -> f64,
{
    let d = bx.dim();
    let piece = [(bx.lo[axis], bx.hi[axis], panel_width(k[axis]))];
    if axis + 1 == d {
        let cell = std::cell::RefCell::new(std::mem::take(x));
        let r = adaptive(
            &piece,
            |_, t| {
                let mut xs = cell.borrow_mut();
                xs[axis] = t;
                Complex64::from_polar(w(&xs), k[axis] * t)
            },
            opts,
            evals,
        );
        *x = cell.into_inner();
        return r;
    }
    let inner_opts = QuadOptions {
        tol: opts.tol * 0.1,
        reference: ErrorReference::L1,
        budget: opts.budget,
        ..*opts
    };
    let cell = std::cell::RefCell::new(std::mem::take(x));
    let r = adaptive(
        &piece,
        |_, t| {
            let mut xs = cell.borrow_mut();
            xs[axis] = t;
            let remaining = opts.budget.saturating_sub(evals.get());
            let inner_budget = QuadOptions {
                budget: remaining.max(30),
                ..inner_opts
            };
            let inner = nested(w, k, bx, &inner_budget, axis + 1, &mut xs, evals, all_converged);
            if !inner.converged {
                all_converged.set(false);
            }
            inner.value * Complex64::from_polar(1.0, k[axis] * t)
        },
        opts,
        evals,
    );
    *x = cell.into_inner();
    if evals.get() > opts.budget {
        all_converged.set(false);
    }
    r
}

/// ∫_box e^(−λ f(x)) e^(ik·x) dx for d ≤ 3.
pub fn integrate_nd<F>(
    f: F,
    k: &[f64],
    lambda: f64,
    bx: &DomainBox,
    opts: &QuadOptions,
) -> Result<QuadratureResult>
where
    F: Fn(&[f64]) -> f64,
{
    if !lambda.is_finite() {
        return domain("lambda must be finite");
    }
    integrate_weight_box(|x| (-lambda * f(x)).exp(), k, bx, opts)
}

/// e^u − 1 − u without cancellation at small |u|.
pub fn exp_m1_m_id(u: f64) -> f64 {
    if u.abs() < 1e-2 {
        let mut term = u * u / 2.0;
        let mut s = term;
        for n in 3..12 {
            term *= u / n as f64;
            s += term;
        }
        s
    } else {
        u.exp_m1() - u
    }
}

/// The subtracted integral and the reconstructed P(k).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PbarResult {
    pub pbar: QuadratureResult,
    /// P(k) = P̄(k) − |k|^s f̃(k).
    pub p: Complex64,
}

/// P̄(k) = ∫_box [e^(−|k|^s f) − 1 + |k|^s f] e^(ik·x) dx, and P(k)
/// reconstructed with the closed-form transform `f_fourier`. The k = 0
/// point is rejected (the delta term is not modelled).
pub fn integrate_pbar<F, T>(
    f: F,
    f_fourier: Option<T>,
    k: &[f64],
    s: f64,
    bx: &DomainBox,
    opts: &QuadOptions,
) -> Result<PbarResult>
where
    F: Fn(&[f64]) -> f64,
    T: Fn(&[f64]) -> Complex64,
{
    let transform =
        f_fourier.ok_or_else(|| Error::Config("integrate_pbar needs the Fourier transform of f".into()))?;
    let kmag = k.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(kmag > 0.0) {
        return domain("integrate_pbar needs |k| > 0");
    }
    if !(s > 0.0 && s.is_finite()) {
        return domain(format!("s must be > 0, got {s}"));
    }
    let lambda = kmag.powf(s);
    let pbar = integrate_weight_box(|x| exp_m1_m_id(-lambda * f(x)), k, bx, opts)?;
    let p = pbar.value - lambda * transform(k);
    Ok(PbarResult { pbar, p })
}

/// Outcome of a grid infimum search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfimumReport {
    pub value: f64,
    pub argmin: Vec<f64>,
    /// Whether the infimum is strictly positive.
    pub satisfied: bool,
}

pub fn default_grid(d: usize) -> usize {
    match d {
        1 => 2001,
        2 => 301,
        _ => 61,
    }
}

fn grid_infimum<G>(g: G, eps: f64, bx: &DomainBox, grid_n: usize) -> Result<(f64, Vec<f64>)>
where
    G: Fn(&[f64]) -> f64,
{
    if !(eps > 0.0) {
        return domain(format!("eps must be > 0, got {eps}"));
    }
    if grid_n < 2 {
        return domain("grid needs at least 2 points per axis");
    }
    let d = bx.dim();
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0; d];
    let mut best = (f64::INFINITY, Vec::new());
    loop {
        for j in 0..d {
            x[j] = bx.lo[j] + (bx.hi[j] - bx.lo[j]) * idx[j] as f64 / (grid_n - 1) as f64;
        }
        if x.iter().map(|v| v * v).sum::<f64>().sqrt() >= eps {
            let v = g(&x);
            if v < best.0 {
                best = (v, x.clone());
            }
        }
        let mut j = 0;
        loop {
            if j == d {
                return Ok(best);
            }
            idx[j] += 1;
            if idx[j] < grid_n {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// inf over box ∖ B_ε(0) of f(x) − f(0) on a `grid_n`-per-axis grid.
pub fn inf_rho<F>(f: F, eps: f64, bx: &DomainBox, grid_n: usize) -> Result<InfimumReport>
where
    F: Fn(&[f64]) -> f64,
{
    let f0 = f(&vec![0.0; bx.dim()]);
    let (value, argmin) = grid_infimum(|x| f(x) - f0, eps, bx, grid_n)?;
    Ok(InfimumReport {
        value,
        argmin,
        satisfied: value > 0.0,
    })
}

/// inf over box ∖ B_ε(0) of |f(0)| − |f(x)|. `exterior_sup_abs` bounds |f|
/// outside the box; when given, |f(0)| minus it caps the result.
pub fn inf_sigma<F>(
    f: F,
    eps: f64,
    bx: &DomainBox,
    grid_n: usize,
    exterior_sup_abs: Option<f64>,
) -> Result<InfimumReport>
where
    F: Fn(&[f64]) -> f64,
{
    let f0 = f(&vec![0.0; bx.dim()]);
    if !(f0 < 0.0) {
        return Err(Error::Precondition(format!("inf_sigma needs f(0) < 0, got {f0}")));
    }
    let (mut value, mut argmin) = grid_infimum(|x| f0.abs() - f(x).abs(), eps, bx, grid_n)?;
    if let Some(sup) = exterior_sup_abs {
        let outside = f0.abs() - sup;
        if outside < value {
            value = outside;
            argmin = Vec::new();
        }
    }
    Ok(InfimumReport {
        value,
        argmin,
        satisfied: value > 0.0,
    })
}

/// Exterior bound C/(|f0| − σ)²·{e^(−|k|^s(f0+σ)) − 1 + |k|^s(f0+σ)} and its
/// large-|k| form C/(|f0| − σ)²·e^(−|k|^s(f0+σ)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub bound: f64,
    pub large_k: f64,
}

pub fn tail_bound_exterior(c: f64, f0: f64, sigma: f64, k_mag: f64, s: f64) -> Result<TailBound> {
    if !(c >= 0.0) {
        return domain(format!("C must be >= 0, got {c}"));
    }
    if !(f0.abs() > sigma) {
        return domain(format!("needs |f0| > sigma, got f0 = {f0}, sigma = {sigma}"));
    }
    if !(k_mag >= 0.0) {
        return domain("|k| must be >= 0");
    }
    let lambda = k_mag.powf(s);
    let pre = c / (f0.abs() - sigma).powi(2);
    let v = -lambda * (f0 + sigma);
    Ok(TailBound {
        bound: pre * exp_m1_m_id(v),
        large_k: pre * v.exp(),
    })
}
