//! Correlation kernels and point correlation functions.
//!
//! Complex ensembles are determinantal with respect to the weight
//! w(z) = pi^{n-1} G^{n,0}_{0,n}(|z|^2 | m) and kernel
//! K_N(z, zeta) = sum_{k<N} (z conj(zeta))^k / h_k, h_k = pi^n prod_a Gamma(k+1+m_a).
//! Quaternion ensembles are Pfaffian with the antisymmetric kernel S_N.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{ln_gamma, ln_meijer_g0n};
use crate::types::{Beta, EnsembleSpec, MatrixSize};

/// Largest number of points accepted by [`correlation_rho_ell`].
pub const MAX_CORRELATION_POINTS: usize = 6;

/// Kernel evaluation settings.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelSpec {
    pub spec: EnsembleSpec,
    /// Largest number of series terms for the infinite kernel.
    pub truncation: usize,
    pub rel_tol: f64,
}

impl KernelSpec {
    pub fn new(spec: EnsembleSpec) -> Self {
        Self { spec, truncation: 100_000, rel_tol: 1e-15 }
    }

    pub fn with_truncation(mut self, truncation: usize) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.truncation == 0 {
            return Err(Error::InvalidParameter("truncation must be >= 1".into()));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        Ok(())
    }
}

/// ln w(z) = (n-1) ln pi + ln G^{n,0}_{0,n}(|z|^2 | m).
pub fn ln_weight(m: &[f64], z: Complex64) -> Result<f64> {
    let n = m.len() as f64;
    Ok((n - 1.0) * PI.ln() + ln_meijer_g0n(m, z.norm_sqr())?)
}

pub fn weight(m: &[f64], z: Complex64) -> Result<f64> {
    ln_weight(m, z).map(f64::exp)
}

/// ln h_k = n ln pi + sum_a ln Gamma(k + 1 + m_a): squared norm of z^k.
pub fn ln_norm(m: &[f64], k: usize) -> f64 {
    m.len() as f64 * PI.ln() + m.iter().map(|&a| ln_gamma(k as f64 + 1.0 + a)).sum::<f64>()
}

fn require_beta(ks: &KernelSpec, beta: Beta) -> Result<()> {
    ks.validate()?;
    if ks.spec.beta != beta {
        return Err(Error::InvalidParameter(format!("kernel needs beta = {}", beta.value())));
    }
    Ok(())
}

/// Finite-N kernel K_N(z, zeta).
pub fn kernel_kn(ks: &KernelSpec, z: Complex64, zeta: Complex64) -> Result<Complex64> {
    require_beta(ks, Beta::Complex)?;
    let dim = ks.spec.finite_dim()?;
    let w = z * zeta.conj();
    let mut pow = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..dim {
        sum += pow * (-ln_norm(&ks.spec.m, k)).exp();
        pow *= w;
    }
    Ok(sum)
}

/// Limiting kernel sum_{k>=0} (z conj(zeta))^k / h_k, summed until the
/// geometric bound on the remaining terms falls below rel_tol |sum|.
pub fn kernel_k_infinity(ks: &KernelSpec, z: Complex64, zeta: Complex64) -> Result<Complex64> {
    require_beta(ks, Beta::Complex)?;
    let w = z * zeta.conj();
    let abs_w = w.norm();
    let phase = if abs_w > 0.0 { w / abs_w } else { Complex64::new(0.0, 0.0) };
    let ln_abs_w = abs_w.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut phase_pow = Complex64::new(1.0, 0.0);
    for k in 0..ks.truncation {
        let ln_term = if k == 0 { 0.0 } else { k as f64 * ln_abs_w } - ln_norm(&ks.spec.m, k);
        let term = phase_pow * ln_term.exp();
        sum += term;
        if k == 0 && abs_w == 0.0 {
            return Ok(sum);
        }
        phase_pow *= phase;
        // Ratio of consecutive term moduli after index k.
        let ratio = abs_w / ks.spec.m.iter().map(|a| k as f64 + 2.0 + a).product::<f64>();
        if ratio < 0.5 {
            let tail = ln_term.exp() * ratio / (1.0 - ratio);
            if tail <= ks.rel_tol * sum.norm() {
                return Ok(sum);
            }
        }
    }
    Err(Error::Convergence(format!(
        "kernel series not converged within {} terms at |z conj(zeta)| = {abs_w}",
        ks.truncation
    )))
}

/// K_N or K_infinity according to the matrix size.
pub fn kernel_complex(ks: &KernelSpec, z: Complex64, zeta: Complex64) -> Result<Complex64> {
    match ks.spec.size {
        MatrixSize::Finite(_) => kernel_kn(ks, z, zeta),
        MatrixSize::Infinite => kernel_k_infinity(ks, z, zeta),
    }
}

/// ln of the quaternion kernel coefficient for (i, j), i <= j:
/// sum_a [(j-i) ln 2 + ln G((m_a+2j+2)/2) - ln G((m_a+2i+2)/2) - ln G(m_a+2j+2)].
pub fn ln_sn_coefficient(m: &[f64], i: usize, j: usize) -> f64 {
    let (i, j) = (i as f64, j as f64);
    m.iter()
        .map(|&a| {
            (j - i) * std::f64::consts::LN_2 + ln_gamma((a + 2.0 * j + 2.0) / 2.0)
                - ln_gamma((a + 2.0 * i + 2.0) / 2.0)
                - ln_gamma(a + 2.0 * j + 2.0)
        })
        .sum()
}

/// Antisymmetric kernel
/// S_N(z, zeta) = (1/(2 pi^n)) sum_{i<=j<N} c_ij (z^{2i} zeta^{2j+1} - z^{2j+1} zeta^{2i}).
pub fn kernel_sn_quaternion(ks: &KernelSpec, z: Complex64, zeta: Complex64) -> Result<Complex64> {
    require_beta(ks, Beta::Quaternion)?;
    let dim = ks.spec.finite_dim()?;
    let m = &ks.spec.m;
    let z_pows = powers(z, 2 * dim);
    let zeta_pows = powers(zeta, 2 * dim);
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..dim {
        for j in i..dim {
            let c = ln_sn_coefficient(m, i, j).exp();
            sum += (z_pows[2 * i] * zeta_pows[2 * j + 1] - z_pows[2 * j + 1] * zeta_pows[2 * i]) * c;
        }
    }
    Ok(sum / (2.0 * PI.powi(m.len() as i32)))
}

fn powers(z: Complex64, count: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..count {
        out.push(p);
        p *= z;
    }
    out
}

/// The 2x2 matrix kernel
/// (zeta - conj zeta) w(zeta) [[S(conj z, zeta), -S(conj z, conj zeta)], [S(z, zeta), -S(z, conj zeta)]].
///
/// With this sign convention the one-point density is the negative of the
/// diagonal entries at z = zeta; see [`correlation_rho_ell`].
pub fn kernel_matrix_2x2(ks: &KernelSpec, z: Complex64, zeta: Complex64) -> Result<Matrix2<Complex64>> {
    require_beta(ks, Beta::Quaternion)?;
    let pre = (zeta - zeta.conj()) * weight(&ks.spec.m, zeta)?;
    let s = |a: Complex64, b: Complex64| kernel_sn_quaternion(ks, a, b);
    Ok(Matrix2::new(
        pre * s(z.conj(), zeta)?,
        -pre * s(z.conj(), zeta.conj())?,
        pre * s(z, zeta)?,
        -pre * s(z, zeta.conj())?,
    ))
}

/// Pfaffian of an even-dimensional antisymmetric matrix by skew
/// Gaussian elimination with partial pivoting.
pub fn pfaffian(a: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = a.nrows();
    if n != a.ncols() || n % 2 != 0 {
        return Err(Error::Size(format!("Pfaffian needs an even square matrix, got {}x{}", n, a.ncols())));
    }
    let mut a = a.clone();
    let mut pf = Complex64::new(1.0, 0.0);
    for k in (0..n.saturating_sub(1)).step_by(2) {
        let kp = (k + 1..n)
            .max_by(|&x, &y| a[(x, k)].norm().total_cmp(&a[(y, k)].norm()))
            .expect("nonempty pivot range");
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)];
        if pivot.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<Complex64> = (k + 2..n).map(|c| a[(k, c)] / pivot).collect();
            let col: Vec<Complex64> = (k + 2..n).map(|r| a[(r, k + 1)]).collect();
            for (ri, r) in (k + 2..n).enumerate() {
                for (ci, c) in (k + 2..n).enumerate() {
                    a[(r, c)] += tau[ri] * col[ci] - col[ri] * tau[ci];
                }
            }
        }
    }
    Ok(pf)
}

/// l-point correlation function.
///
/// Complex: prod_i w(z_i) det[K(z_i, z_j)]. Quaternion:
/// prod_i (z_i - conj z_i) w(z_i) Pf[S(x_a, x_b)] over x = (z_1, conj z_1, ..., z_l, conj z_l),
/// which for l = 1 is (z - conj z) w(z) S_N(z, conj z) >= 0.
pub fn correlation_rho_ell(ks: &KernelSpec, points: &[Complex64]) -> Result<f64> {
    ks.validate()?;
    let l = points.len();
    if l == 0 || l > MAX_CORRELATION_POINTS {
        return Err(Error::InvalidParameter(format!(
            "need 1..={MAX_CORRELATION_POINTS} points, got {l}"
        )));
    }
    if let Some(dim) = ks.spec.dim() {
        if l > dim {
            return Err(Error::InvalidParameter(format!("{l} points exceed N = {dim}")));
        }
    }
    let m = &ks.spec.m;
    match ks.spec.beta {
        Beta::Complex => {
            let mut k = DMatrix::<Complex64>::zeros(l, l);
            for i in 0..l {
                for j in 0..l {
                    k[(i, j)] = kernel_complex(ks, points[i], points[j])?;
                }
            }
            let ln_w: f64 = points.iter().map(|&z| ln_weight(m, z)).sum::<Result<f64>>()?;
            Ok(k.determinant().re * ln_w.exp())
        }
        Beta::Quaternion => {
            let xs: Vec<Complex64> = points.iter().flat_map(|&z| [z, z.conj()]).collect();
            let mut a = DMatrix::<Complex64>::zeros(2 * l, 2 * l);
            for r in 0..2 * l {
                for c in r + 1..2 * l {
                    let v = kernel_sn_quaternion(ks, xs[r], xs[c])?;
                    a[(r, c)] = v;
                    a[(c, r)] = -v;
                }
            }
            let mut prefactor = Complex64::new(1.0, 0.0);
            for &z in points {
                prefactor *= (z - z.conj()) * weight(m, z)?;
            }
            Ok((prefactor * pfaffian(&a)?).re)
        }
    }
}

/// The 2N x 2N moment matrix
/// Q_jk = int (z^j conj(z)^k - z^k conj(z)^j)(z - conj z) w(z) d^2z
///      = 2 h_k [k = j+1] - 2 h_j [j = k+1].
pub fn q_matrix(m: &[f64], dim: usize) -> DMatrix<f64> {
    let size = 2 * dim;
    let mut q = DMatrix::zeros(size, size);
    for j in 0..size.saturating_sub(1) {
        let h = 2.0 * ln_norm(m, j + 1).exp();
        q[(j, j + 1)] = h;
        q[(j + 1, j)] = -h;
    }
    q
}

/// The antisymmetric matrix P with P_{2i,2j+1} = c_ij / (2 pi^n) for
/// i <= j and P_{2j+1,2i} = -P_{2i,2j+1}, zero elsewhere. It satisfies
/// Q P = -I, so Q^{-1} = -P.
pub fn q_inverse_pattern(m: &[f64], dim: usize) -> DMatrix<f64> {
    let size = 2 * dim;
    let scale = 1.0 / (2.0 * PI.powi(m.len() as i32));
    let mut p = DMatrix::zeros(size, size);
    for i in 0..dim {
        for j in i..dim {
            let v = scale * ln_sn_coefficient(m, i, j).exp();
            p[(2 * i, 2 * j + 1)] = v;
            p[(2 * j + 1, 2 * i)] = -v;
        }
    }
    p
}
