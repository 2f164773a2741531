use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::quatlin::{quat_qr, QuaternionMatrix};

use super::factors::complex_gaussian;

/// Haar-distributed unitary: QR of a complex Gaussian with the phases of
/// diag(R) moved into Q.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = complex_gaussian(dim, dim, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Haar-distributed unitary symplectic matrix: quaternion QR of a
/// quaternion Gaussian, whose R has a real positive diagonal already.
pub fn haar_symplectic<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<QuaternionMatrix> {
    let g = QuaternionMatrix::gaussian(dim, dim, rng);
    Ok(quat_qr(&g)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_and_uniform_first_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let dim = 3;
        let mut mean = DMatrix::<Complex64>::zeros(dim, dim);
        let mut second = 0.0;
        let trials = 4000;
        for _ in 0..trials {
            let u = haar_unitary(dim, &mut rng);
            let defect = (u.adjoint() * &u - DMatrix::<Complex64>::identity(dim, dim)).camax();
            assert!(defect < 1e-13);
            mean += &u;
            second += u[(0, 0)].norm_sqr();
        }
        // E U = 0 and E |U_11|^2 = 1/N for Haar measure.
        assert!((mean / Complex64::new(trials as f64, 0.0)).camax() < 0.05);
        assert!((second / trials as f64 - 1.0 / 3.0).abs() < 0.02);
    }

    #[test]
    fn symplectic_is_unitary_with_quaternion_pattern() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let u = haar_symplectic(4, &mut rng).unwrap();
        assert!(u.unitarity_defect() < 1e-12);
        assert!(u.structure_defect() < 1e-14);
    }
}
