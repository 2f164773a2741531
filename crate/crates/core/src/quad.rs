//! Gauss–Legendre quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            x[0] = 0.0;
            w[0] = 2.0;
            break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Integrate f over [a, b] with an n-point rule.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter().zip(&w).map(|(&t, &wt)| wt * f(mid + half * t)).sum::<f64>() * half
}

/// Composite rule: [a, b] split into `panels` equal pieces.
pub fn integrate_composite<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let step = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * step;
        let mid = lo + 0.5 * step;
        for (&t, &wt) in x.iter().zip(&w) {
            acc += wt * f(mid + 0.5 * step * t);
        }
    }
    acc * 0.5 * step
}

/// Integral of f(z) d^2z over the disk |z| <= r_max: composite
/// Gauss–Legendre in the radius and the trapezoid rule in the angle, which
/// is exact for trigonometric polynomials of degree below `n_angle`. The
/// innermost panel is refined geometrically toward the origin so that
/// logarithmic weights at z = 0 are integrated accurately.
pub fn integrate_disk<F: FnMut(Complex64) -> Complex64>(
    mut f: F,
    r_max: f64,
    panels: usize,
    n_radial: usize,
    n_angle: usize,
) -> Complex64 {
    const GRADING_LEVELS: i32 = 30;
    let (x, w) = gauss_legendre(n_radial);
    let step = r_max / panels as f64;
    let dtheta = 2.0 * PI / n_angle as f64;
    let mut intervals: Vec<(f64, f64)> = (1..panels).map(|p| (p as f64 * step, (p + 1) as f64 * step)).collect();
    let mut hi = step;
    for _ in 0..GRADING_LEVELS {
        intervals.push((0.5 * hi, hi));
        hi *= 0.5;
    }
    intervals.push((0.0, hi));
    let mut acc = Complex64::new(0.0, 0.0);
    for (lo, hi) in intervals {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (&t, &wt) in x.iter().zip(&w) {
            let r = mid + half * t;
            let mut ring = Complex64::new(0.0, 0.0);
            for k in 0..n_angle {
                ring += f(Complex64::from_polar(r, k as f64 * dtheta));
            }
            acc += ring * (half * wt * r * dtheta);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(&t, &wt)| wt * t.powi(deg as i32)).sum();
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn smooth_integrals() {
        let v = integrate(f64::exp, 0.0, 1.0, 20);
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-14);
        let v = integrate_composite(|t| (-t).exp(), 0.0, 40.0, 40, 16);
        assert!((v - (1.0 - (-40.0f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn disk_integral_of_gaussian() {
        let v = integrate_disk(|z| Complex64::new((-z.norm_sqr()).exp(), 0.0), 12.0, 24, 16, 8);
        assert!((v.re - PI).abs() < 1e-12);
        let m = integrate_disk(|z| z * z.conj() * z, 1.0, 2, 10, 8);
        assert!(m.norm() < 1e-14);
    }
}
