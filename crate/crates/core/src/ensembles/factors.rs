use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::Result;
use crate::quatlin::{quat_qr, QuaternionMatrix};
use crate::rng::replica_rng;
use crate::types::Beta;

use super::haar::{haar_symplectic, haar_unitary};
use super::metropolis::{metropolis_chain, MetropolisSettings};
use super::SamplerMethod;

/// rows x cols matrix of standard complex Gaussians, E|g|^2 = 1.
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * s, im * s)
    })
}

fn gamma_draw<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    Gamma::new(shape, 1.0).expect("positive shape").sample(rng)
}

/// Eigenvalues of M^H M for an induced factor (the squared singular values),
/// from the bidiagonal Laguerre model: diagonal entries squared are
/// Gamma(N + m - i + 1) (beta = 2) or Gamma(2N + m - 2i + 2) (beta = 4),
/// subdiagonal entries squared Gamma(N - i) or Gamma(2(N - i)).
pub fn laguerre_eigenvalues<R: Rng + ?Sized>(beta: Beta, dim: usize, m: f64, rng: &mut R) -> Vec<f64> {
    let nf = dim as f64;
    let mut b = DMatrix::<f64>::zeros(dim, dim);
    for i in 1..=dim {
        let fi = i as f64;
        let (diag, sub) = match beta {
            Beta::Complex => (nf + m - fi + 1.0, nf - fi),
            Beta::Quaternion => (2.0 * nf + m - 2.0 * fi + 2.0, 2.0 * (nf - fi)),
        };
        b[(i - 1, i - 1)] = gamma_draw(diag, rng).sqrt();
        if i < dim {
            b[(i, i - 1)] = gamma_draw(sub, rng).sqrt();
        }
    }
    b.svd(false, false).singular_values.iter().map(|s| s * s).collect()
}

/// One complex induced factor with parameter m.
pub fn sample_complex_factor<R: Rng + ?Sized>(
    dim: usize,
    m: f64,
    method: SamplerMethod,
    rng: &mut R,
) -> Result<DMatrix<Complex64>> {
    method.check(Beta::Complex, m)?;
    Ok(match method {
        SamplerMethod::DirectGaussian => complex_gaussian(dim, dim, rng),
        SamplerMethod::SvdComposition => {
            let lambda = laguerre_eigenvalues(Beta::Complex, dim, m, rng);
            let u = haar_unitary(dim, rng);
            let v = haar_unitary(dim, rng);
            let mut us = u;
            for (k, l) in lambda.iter().enumerate() {
                let s = Complex64::new(l.sqrt(), 0.0);
                for i in 0..dim {
                    us[(i, k)] *= s;
                }
            }
            us * v.adjoint()
        }
        SamplerMethod::RectangularChain => {
            let g = complex_gaussian(dim + m as usize, dim, rng);
            let r = g.qr().r();
            haar_unitary(dim, rng) * r
        }
        SamplerMethod::MetropolisOracle => {
            let run = metropolis_chain(Beta::Complex, dim, m, &MetropolisSettings::default(), 1, rng);
            run.draws.into_iter().next().expect("one draw requested")
        }
    })
}

/// One quaternion induced factor with parameter m.
pub fn sample_quaternion_factor<R: Rng + ?Sized>(
    dim: usize,
    m: f64,
    method: SamplerMethod,
    rng: &mut R,
) -> Result<QuaternionMatrix> {
    method.check(Beta::Quaternion, m)?;
    Ok(match method {
        SamplerMethod::DirectGaussian => QuaternionMatrix::gaussian(dim, dim, rng),
        SamplerMethod::SvdComposition => {
            let lambda = laguerre_eigenvalues(Beta::Quaternion, dim, m, rng);
            let u = haar_symplectic(dim, rng)?;
            let v = haar_symplectic(dim, rng)?;
            let mut us = u.into_rep();
            for (k, l) in lambda.iter().enumerate() {
                let s = Complex64::new(l.sqrt(), 0.0);
                for i in 0..2 * dim {
                    us[(i, 2 * k)] *= s;
                    us[(i, 2 * k + 1)] *= s;
                }
            }
            QuaternionMatrix::from_rep_unchecked(us * v.rep().adjoint())
        }
        SamplerMethod::RectangularChain => {
            let extra = (m / 2.0) as usize;
            let g = QuaternionMatrix::gaussian(dim + extra, dim, rng);
            let (_, r) = quat_qr(&g)?;
            &haar_symplectic(dim, rng)? * &r
        }
        SamplerMethod::MetropolisOracle => {
            let run = metropolis_chain(Beta::Quaternion, dim, m, &MetropolisSettings::default(), 1, rng);
            QuaternionMatrix::from_rep(run.draws.into_iter().next().expect("one draw requested"))?
        }
    })
}

/// One complex factor drawn from replica stream 0 of `seed`.
pub fn sample_induced_complex(dim: usize, m: f64, method: SamplerMethod, seed: u64) -> Result<DMatrix<Complex64>> {
    sample_complex_factor(dim, m, method, &mut replica_rng(seed, 0))
}

/// One quaternion factor drawn from replica stream 0 of `seed`.
pub fn sample_induced_quaternion(dim: usize, m: f64, method: SamplerMethod, seed: u64) -> Result<QuaternionMatrix> {
    sample_quaternion_factor(dim, m, method, &mut replica_rng(seed, 0))
}
