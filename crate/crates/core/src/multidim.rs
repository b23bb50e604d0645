//! d-dimensional engine: symmetric eigen-decomposition of the Hessian at the
//! critical point, the large-|k| coefficients `c_n(k)` and the leading-order
//! asymptotic formula
//!
//! ```text
//! P(k) ~ e^(−|k|^s f0) √((2π)^d / (|k|^(sd) det A)) exp(−kᵀA⁻¹k / (2|k|^s))
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::gamma_half_integer;

pub const MAX_DIM: usize = 16;
const MAX_SWEEPS: usize = 100;
const PD_THRESHOLD: f64 = 1e-12;

/// Hessian data at the critical point (fixed at the origin).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HessianModel {
    pub d: usize,
    pub f0: f64,
    /// Row-major d×d.
    #[serde(rename = "A")]
    pub a: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixJson {
    Flat(Vec<f64>),
    Nested(Vec<Vec<f64>>),
}

#[derive(Deserialize)]
struct HessianJson {
    d: usize,
    f0: f64,
    #[serde(rename = "A")]
    a: MatrixJson,
}

impl<'de> Deserialize<'de> for HessianModel {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = HessianJson::deserialize(de)?;
        let a = match raw.a {
            MatrixJson::Flat(v) => v,
            MatrixJson::Nested(rows) => rows.into_iter().flatten().collect(),
        };
        HessianModel::new(raw.d, raw.f0, a).map_err(serde::de::Error::custom)
    }
}

fn frobenius(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl HessianModel {
    /// Validates shape, symmetry (within 1e-12‖A‖) and positive definiteness.
    pub fn new(d: usize, f0: f64, a: Vec<f64>) -> Result<Self> {
        if d == 0 || d > MAX_DIM {
            return Err(Error::UnsupportedDimension(d, MAX_DIM));
        }
        if a.len() != d * d {
            return domain(format!("Hessian needs {} entries, got {}", d * d, a.len()));
        }
        if !f0.is_finite() || a.iter().any(|x| !x.is_finite()) {
            return domain("Hessian entries must be finite");
        }
        check_symmetric(d, &a)?;
        let model = Self { d, f0, a };
        let dec = model.decompose()?;
        if !check_positive_definite(&dec) {
            return domain(format!(
                "Hessian is not positive definite (eigenvalues {:?})",
                dec.mu
            ));
        }
        Ok(model)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("HessianModel: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn decompose(&self) -> Result<EigenDecomp> {
        jacobi_eigen(self.d, &self.a)
    }
}

fn check_symmetric(d: usize, a: &[f64]) -> Result<()> {
    let norm = frobenius(a);
    for i in 0..d {
        for j in i + 1..d {
            if (a[i * d + j] - a[j * d + i]).abs() > 1e-12 * norm {
                return domain(format!("matrix is not symmetric at ({i}, {j})"));
            }
        }
    }
    Ok(())
}

/// Eigenvalues `mu` (ascending) and the orthogonal `h0` (row-major,
/// eigenvectors in columns, det = +1) with h0ᵀ·A·h0 = diag(mu).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenDecomp {
    pub mu: Vec<f64>,
    pub h0: Vec<f64>,
}

impl EigenDecomp {
    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn det(&self) -> f64 {
        self.mu.iter().product()
    }

    /// H₀ᵀk.
    pub fn rotate(&self, k: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|j| (0..d).map(|i| self.h0[i * d + j] * k[i]).sum())
            .collect()
    }
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops to
/// 1e-13‖A‖.
pub fn jacobi_eigen(d: usize, a: &[f64]) -> Result<EigenDecomp> {
    if d == 0 || a.len() != d * d {
        return domain(format!("jacobi_eigen needs a {d}x{d} matrix"));
    }
    check_symmetric(d, a)?;
    let mut m = a.to_vec();
    let mut v = vec![0.0; d * d];
    for i in 0..d {
        v[i * d + i] = 1.0;
    }
    let norm = frobenius(a);
    let target = 1e-13 * norm;
    let off = |m: &[f64]| {
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    s += m[i * d + j] * m[i * d + j];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&m) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numerical(format!(
                "Jacobi did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        for p in 0..d {
            for q in p + 1..d {
                let apq = m[p * d + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * d + q] - m[p * d + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..d {
                    let mrp = m[r * d + p];
                    let mrq = m[r * d + q];
                    m[r * d + p] = c * mrp - s * mrq;
                    m[r * d + q] = s * mrp + c * mrq;
                }
                for r in 0..d {
                    let mpr = m[p * d + r];
                    let mqr = m[q * d + r];
                    m[p * d + r] = c * mpr - s * mqr;
                    m[q * d + r] = s * mpr + c * mqr;
                }
                for r in 0..d {
                    let vrp = v[r * d + p];
                    let vrq = v[r * d + q];
                    v[r * d + p] = c * vrp - s * vrq;
                    v[r * d + q] = s * vrp + c * vrq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| m[i * d + i].total_cmp(&m[j * d + j]));
    let mu: Vec<f64> = order.iter().map(|&i| m[i * d + i]).collect();
    let mut h0 = vec![0.0; d * d];
    for (new, &old) in order.iter().enumerate() {
        for r in 0..d {
            h0[r * d + new] = v[r * d + old];
        }
    }
    if determinant(d, &h0) < 0.0 {
        for r in 0..d {
            h0[r * d] = -h0[r * d];
        }
    }
    Ok(EigenDecomp { mu, h0 })
}

/// Determinant by partial-pivot elimination.
pub fn determinant(d: usize, a: &[f64]) -> f64 {
    let mut m = a.to_vec();
    let mut det = 1.0;
    for col in 0..d {
        let piv = (col..d)
            .max_by(|&i, &j| m[i * d + col].abs().total_cmp(&m[j * d + col].abs()))
            .unwrap();
        if m[piv * d + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..d {
                m.swap(piv * d + c, col * d + c);
            }
            det = -det;
        }
        let p = m[col * d + col];
        det *= p;
        for r in col + 1..d {
            let f = m[r * d + col] / p;
            for c in col..d {
                m[r * d + c] -= f * m[col * d + c];
            }
        }
    }
    det
}

/// True iff min μ > 1e-12·max μ.
pub fn check_positive_definite(dec: &EigenDecomp) -> bool {
    let max = dec.mu.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = dec.mu.iter().cloned().fold(f64::INFINITY, f64::min);
    max > 0.0 && min > PD_THRESHOLD * max
}

fn require_pd(dec: &EigenDecomp, k: &[f64]) -> Result<()> {
    if k.len() != dec.dim() {
        return domain(format!("k has {} components, expected {}", k.len(), dec.dim()));
    }
    if !check_positive_definite(dec) {
        return Err(Error::Numerical(format!(
            "degenerate or indefinite Hessian (eigenvalues {:?})",
            dec.mu
        )));
    }
    Ok(())
}

/// kᵀA⁻¹k = Σ_j (H₀ᵀk)_j² / μ_j.
pub fn quad_form_inv(dec: &EigenDecomp, k: &[f64]) -> Result<f64> {
    require_pd(dec, k)?;
    Ok(dec
        .rotate(k)
        .iter()
        .zip(&dec.mu)
        .map(|(y, mu)| y * y / mu)
        .sum())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// c_n(k) ~ √((2π)^d/det A)·(−1/2)ⁿ·(kᵀA⁻¹k)ⁿ/n! for large |k|.
pub fn cn_large_k(dec: &EigenDecomp, k: &[f64], n: usize) -> Result<f64> {
    let q = quad_form_inv(dec, k)?;
    let d = dec.dim() as f64;
    let pre = ((2.0 * PI).powf(d) / dec.det()).sqrt();
    Ok(pre * (-0.5f64).powi(n as i32) * q.powi(n as i32) / factorial(n))
}

/// One multi-index `n_vec` of order `|n_vec|` with its weight
/// Π_j (H₀ᵀk)_j^(2n_j) / (n_j! μ_j^(n_j)).
#[derive(Debug, Clone, PartialEq)]
pub struct MultiIndexTerm {
    pub n_vec: Vec<usize>,
    pub order: usize,
    pub weight: f64,
}

/// Every multi-index of order `n` in `d` dimensions with its weight.
pub fn multi_index_terms(dec: &EigenDecomp, k: &[f64], n: usize) -> Result<Vec<MultiIndexTerm>> {
    require_pd(dec, k)?;
    let y = dec.rotate(k);
    let mut out = Vec::new();
    let mut current = vec![0usize; dec.dim()];
    compositions(0, n, &mut current, &mut |n_vec| {
        let weight = n_vec
            .iter()
            .zip(y.iter().zip(&dec.mu))
            .map(|(&nj, (yj, mu))| (yj * yj / mu).powi(nj as i32) / factorial(nj))
            .product();
        out.push(MultiIndexTerm {
            n_vec: n_vec.to_vec(),
            order: n,
            weight,
        });
    });
    Ok(out)
}

fn compositions<F: FnMut(&[usize])>(pos: usize, left: usize, cur: &mut Vec<usize>, visit: &mut F) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        visit(cur);
        return;
    }
    for v in 0..=left {
        cur[pos] = v;
        compositions(pos + 1, left - v, cur, visit);
    }
}

/// c_n(k) summed term by term over even multi-indices α = 2·n_vec:
///
/// ```text
/// Σ_{|α|=2n} (−1)ⁿ Π_j (2/μ_j)^((α_j+1)/2) Γ((α_j+1)/2) (H₀ᵀk)_j^(α_j) / α_j!
/// ```
///
/// with no use of det A or kᵀA⁻¹k.
pub fn cn_large_k_enumerated(dec: &EigenDecomp, k: &[f64], n: usize) -> Result<f64> {
    require_pd(dec, k)?;
    let y = dec.rotate(k);
    let mut total = 0.0;
    let mut current = vec![0usize; dec.dim()];
    let mut err = None;
    compositions(0, n, &mut current, &mut |n_vec| {
        let mut prod = 1.0;
        for (j, &nj) in n_vec.iter().enumerate() {
            let aj = 2 * nj;
            let g = match gamma_half_integer(nj as i64) {
                Ok(g) => g,
                Err(e) => {
                    err.get_or_insert(e);
                    return;
                }
            };
            prod *= (2.0 / dec.mu[j]).powf(nj as f64 + 0.5) * g * y[j].powi(aj as i32)
                / factorial(aj);
        }
        total += prod;
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok((-1.0f64).powi(n as i32) * total)
}

fn check_vector(model: &HessianModel, k: &[f64]) -> Result<()> {
    if k.len() != model.d || k.iter().any(|x| !x.is_finite()) {
        return domain(format!("k must be a finite {}-vector", model.d));
    }
    Ok(())
}

/// e^(−λ f0) √((2π)^d / (λ^d det A)) exp(−kᵀA⁻¹k / (2λ)).
pub fn asym_j_nd(model: &HessianModel, lambda: f64, k: &[f64]) -> Result<Complex64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return domain(format!("lambda must be > 0, got {lambda}"));
    }
    check_vector(model, k)?;
    let dec = model.decompose()?;
    let q = quad_form_inv(&dec, k)?;
    let d = model.d as f64;
    let mag = ((2.0 * PI / lambda).powf(d) / dec.det()).sqrt();
    Ok(Complex64::new(
        (-lambda * model.f0).exp() * mag * (-q / (2.0 * lambda)).exp(),
        0.0,
    ))
}

/// [`asym_j_nd`] at λ = |k|^s.
pub fn asym_p_nd(model: &HessianModel, s: f64, k: &[f64]) -> Result<Complex64> {
    if !(s >= 2.0 && s.is_finite()) {
        return domain(format!("asym_p_nd needs s >= 2, got {s}"));
    }
    check_vector(model, k)?;
    let kmag = k.iter().map(|x| x * x).sum::<f64>().sqrt();
    if kmag == 0.0 {
        return domain("asym_p_nd needs |k| > 0");
    }
    asym_j_nd(model, kmag.powf(s), k)
}

/// Central-difference Hessian with the gradient at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct FdHessian {
    pub model: HessianModel,
    pub gradient: Vec<f64>,
}

pub const DEFAULT_FD_STEP: f64 = 5e-4;

/// Builds a [`HessianModel`] from `f` by central differences with step `h`,
/// symmetrized. The origin must be critical: ‖∇f‖ ≤ 1e-6·‖A‖·h.
pub fn hessian_fd<F>(f: F, d: usize, h: f64) -> Result<FdHessian>
where
    F: Fn(&[f64]) -> f64,
{
    if d == 0 || d > MAX_DIM {
        return Err(Error::UnsupportedDimension(d, MAX_DIM));
    }
    if !(h > 0.0 && h.is_finite()) {
        return domain(format!("finite-difference step must be > 0, got {h}"));
    }
    let origin = vec![0.0; d];
    let f0 = f(&origin);
    let eval = |pairs: &[(usize, f64)]| {
        let mut x = origin.clone();
        for &(i, v) in pairs {
            x[i] += v;
        }
        f(&x)
    };
    let mut gradient = vec![0.0; d];
    let mut a = vec![0.0; d * d];
    for i in 0..d {
        let fp = eval(&[(i, h)]);
        let fm = eval(&[(i, -h)]);
        gradient[i] = (fp - fm) / (2.0 * h);
        a[i * d + i] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in 0..i {
            let v = (eval(&[(i, h), (j, h)]) - eval(&[(i, h), (j, -h)])
                - eval(&[(i, -h), (j, h)])
                + eval(&[(i, -h), (j, -h)]))
                / (4.0 * h * h);
            a[i * d + j] = v;
            a[j * d + i] = v;
        }
    }
    let grad_norm = frobenius(&gradient);
    if grad_norm > 1e-6 * frobenius(&a) * h {
        return Err(Error::Precondition(format!(
            "origin is not a critical point: |grad f| = {grad_norm:e}"
        )));
    }
    Ok(FdHessian {
        model: HessianModel::new(d, f0, a)?,
        gradient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(d: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = (0..d).map(|k| a[i * d + k] * b[k * d + j]).sum();
            }
        }
        out
    }

    fn transpose(d: usize, a: &[f64]) -> Vec<f64> {
        let mut t = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                t[j * d + i] = a[i * d + j];
            }
        }
        t
    }

    #[test]
    fn identity_and_diagonal() {
        let dec = jacobi_eigen(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(dec.mu, vec![1.0; 3]);
        assert_eq!(dec.h0, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let dec = jacobi_eigen(2, &[3.0, 0.0, 0.0, 2.0]).unwrap();
        assert_eq!(dec.mu, vec![2.0, 3.0]);
        assert!((determinant(2, &dec.h0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_by_two_eigenvalues() {
        let a = [2.0, 1.0, 1.0, 2.0];
        let dec = jacobi_eigen(2, &a).unwrap();
        assert!((dec.mu[0] - 1.0).abs() < 1e-14 && (dec.mu[1] - 3.0).abs() < 1e-14);
        let q = matmul(2, &transpose(2, &dec.h0), &matmul(2, &a, &dec.h0));
        assert!(q[1].abs() < 1e-13 && q[2].abs() < 1e-13);
        assert!((determinant(2, &dec.h0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(jacobi_eigen(2, &[1.0, 2.0, 0.0, 1.0]).is_err());
        assert!(jacobi_eigen(2, &[1.0, 2.0, 0.0]).is_err());
        assert!(HessianModel::new(2, 0.0, vec![1.0, 0.0, 0.0, -1.0]).is_err());
        assert!(HessianModel::new(17, 0.0, vec![0.0; 289]).is_err());
    }

    #[test]
    fn positive_definite_threshold() {
        let pd = |mu: Vec<f64>| {
            check_positive_definite(&EigenDecomp {
                h0: vec![0.0; mu.len() * mu.len()],
                mu,
            })
        };
        assert!(pd(vec![1.0, 1.0]));
        assert!(!pd(vec![-1.0, 1.0]));
        assert!(!pd(vec![1e-15, 1.0]));
        assert!(pd(vec![1e-11, 1.0]));
    }

    #[test]
    fn quad_form_examples() {
        let id = jacobi_eigen(2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((quad_form_inv(&id, &[3.0, 4.0]).unwrap() - 25.0).abs() < 1e-13);
        let dg = jacobi_eigen(2, &[2.0, 0.0, 0.0, 8.0]).unwrap();
        assert!((quad_form_inv(&dg, &[2.0, 4.0]).unwrap() - 4.0).abs() < 1e-13);
        assert!(quad_form_inv(&dg, &[2.0]).is_err());
    }

    #[test]
    fn cn_examples() {
        let dec = jacobi_eigen(1, &[1.0]).unwrap();
        let k = 1.7;
        for n in 0..6 {
            let expect = (2.0 * PI).sqrt() * (-k * k / 2.0f64).powi(n as i32) / factorial(n);
            let c = cn_large_k(&dec, &[k], n).unwrap();
            assert!((c - expect).abs() < 1e-13 * expect.abs());
        }
        let dec = jacobi_eigen(2, &[2.0, 1.0, 1.0, 3.0]).unwrap();
        let c0 = cn_large_k(&dec, &[0.3, -0.2], 0).unwrap();
        assert!((c0 - (4.0 * PI * PI / 5.0).sqrt()).abs() < 1e-13);
        // partial sums of c_n / λⁿ approach the exponential
        let (lambda, k) = (3.0, [1.2, -0.7]);
        let q = quad_form_inv(&dec, &k).unwrap();
        let target = c0 * (-q / (2.0 * lambda)).exp();
        let sum: f64 = (0..25)
            .map(|n| cn_large_k(&dec, &k, n).unwrap() / lambda.powi(n as i32))
            .sum();
        assert!((sum - target).abs() < 1e-14 * target);
    }

    #[test]
    fn enumerated_cn_matches_closed_form() {
        let a = [2.0, 0.5, -0.3, 0.5, 1.5, 0.2, -0.3, 0.2, 1.0];
        let dec = jacobi_eigen(3, &a).unwrap();
        let k = [0.9, -1.4, 0.6];
        let q = quad_form_inv(&dec, &k).unwrap();
        for n in 0..=6 {
            let sum: f64 = multi_index_terms(&dec, &k, n)
                .unwrap()
                .iter()
                .map(|t| t.weight)
                .sum();
            let closed = q.powi(n as i32) / factorial(n);
            assert!((sum - closed).abs() < 1e-12 * closed);
            let e = cn_large_k_enumerated(&dec, &k, n).unwrap();
            let c = cn_large_k(&dec, &k, n).unwrap();
            assert!((e - c).abs() < 1e-12 * c.abs(), "n={n}: {e} vs {c}");
        }
        let count = multi_index_terms(&dec, &k, 4).unwrap().len();
        assert_eq!(count, 15);
    }

    #[test]
    fn gaussian_asymptotics() {
        let model = HessianModel::new(1, -0.3, vec![2.0 * 1.3]).unwrap();
        // d = 1 with A = 2a₀ equals the two-sided Gaussian leading symbol / α
        let (lambda, k) = (7.0f64, 2.5f64);
        let expect = (0.3 * lambda).exp() * (PI / (1.3 * lambda)).sqrt()
            * (-k * k / (4.0 * 1.3 * lambda)).exp();
        let v = asym_j_nd(&model, lambda, &[k]).unwrap();
        assert!((v.re - expect).abs() < 1e-13 * expect && v.im == 0.0);

        let unit = HessianModel::new(3, 0.0, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0])
            .unwrap();
        let k = [1.0, 2.0, 2.0];
        let p = asym_p_nd(&unit, 2.0, &k).unwrap();
        let expect = (2.0 * PI).powf(1.5) / 27.0 * (-0.5f64).exp();
        assert!((p.re - expect).abs() < 1e-13 * expect);
        assert!(asym_p_nd(&unit, 2.0, &[0.0; 3]).is_err());
        assert!(asym_p_nd(&unit, 1.0, &k).is_err());
        // λ → ∞ at fixed k
        let big = asym_j_nd(&unit, 1e12, &k).unwrap().re;
        let flat = (2.0 * PI / 1e12f64).powf(1.5);
        assert!((big - flat).abs() < 1e-10 * flat);
    }

    #[test]
    fn finite_difference_hessians() {
        let fd = hessian_fd(|x| 0.5 * (x[0] * x[0] + x[1] * x[1]), 2, DEFAULT_FD_STEP).unwrap();
        for (v, e) in fd.model.a.iter().zip([1.0, 0.0, 0.0, 1.0]) {
            assert!((v - e).abs() < 1e-7);
        }
        let fd = hessian_fd(
            |x| -(-(x[0] * x[0] + x[1] * x[1])).exp(),
            2,
            DEFAULT_FD_STEP,
        )
        .unwrap();
        assert!((fd.model.f0 + 1.0).abs() < 1e-15);
        for (v, e) in fd.model.a.iter().zip([2.0, 0.0, 0.0, 2.0]) {
            assert!((v - e).abs() < 1e-6);
        }
        let fd = hessian_fd(|x| x[0] * x[0] + x[0] * x[1] + x[1] * x[1], 2, DEFAULT_FD_STEP)
            .unwrap();
        for (v, e) in fd.model.a.iter().zip([2.0, 1.0, 1.0, 2.0]) {
            assert!((v - e).abs() < 1e-7);
        }
        let shifted = hessian_fd(|x| (x[0] - 0.1).powi(2), 1, DEFAULT_FD_STEP);
        assert!(matches!(shifted, Err(Error::Precondition(_))));
    }

    #[test]
    fn json_round_trip() {
        let m = HessianModel::new(2, -1.0, vec![2.0, 1.0, 1.0, 3.0]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(v["A"].as_array().unwrap().len(), 4);
        assert_eq!(HessianModel::from_json(&m.to_json()).unwrap(), m);
        let nested = r#"{"d":2,"f0":-1,"A":[[2,1],[1,3]]}"#;
        assert_eq!(HessianModel::from_json(nested).unwrap(), m);
        assert!(HessianModel::from_json(r#"{"d":2,"f0":0,"A":[2,1,0,3]}"#).is_err());
    }
}
