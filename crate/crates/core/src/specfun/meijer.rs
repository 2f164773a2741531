//! Meijer G-functions G^{n,0}_{0,n}(x | b) and G^{n+1,0}_{1,n+1}(x | 1; 0, b).
//!
//! Both are evaluated from their Mellin–Barnes integrals along a vertical
//! line Re s = c. By default c is the real saddle point of the log-integrand.
//! On that line |Gamma(x + iy)| <= Gamma(x) makes the modulus of the
//! integrand peak at t = 0, so the integral is computed without cancellation
//! and its logarithm is available far below the double-precision range.
//!
//! The line integral is approximated with the trapezoid rule after the
//! substitution t = w sinh(u). The step is halved until two successive
//! estimates agree to `rel_tol`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::{digamma, ln_gamma, log_gamma_right, trigamma};
use crate::error::{Error, Result};

/// Which of the two supported G-function families is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum MeijerKind {
    /// G^{n,0}_{0,n}(x | b_1..b_n)
    G0n,
    /// G^{n+1,0}_{1,n+1}(x | 1; 0, b_1..b_n)
    G1n1,
}

/// Parameters and precision controls of one G-function instance.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MeijerParams {
    pub kind: MeijerKind,
    pub b: Vec<f64>,
    /// Abscissa c of the integration line. `None` uses the real saddle.
    pub contour_abscissa: Option<f64>,
    pub max_nodes: usize,
    pub rel_tol: f64,
    /// When set, x^{1/n} at or above this value returns the Luke leading term.
    pub asymptotic_switch: Option<f64>,
}

pub const DEFAULT_REL_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_NODES: usize = 1 << 16;

impl MeijerParams {
    pub fn new(kind: MeijerKind, b: Vec<f64>) -> Self {
        Self {
            kind,
            b,
            contour_abscissa: None,
            max_nodes: DEFAULT_MAX_NODES,
            rel_tol: DEFAULT_REL_TOL,
            asymptotic_switch: None,
        }
    }

    pub fn g0n(b: Vec<f64>) -> Self {
        Self::new(MeijerKind::G0n, b)
    }

    pub fn g1n1(b: Vec<f64>) -> Self {
        Self::new(MeijerKind::G1n1, b)
    }

    pub fn with_abscissa(mut self, c: f64) -> Self {
        self.contour_abscissa = Some(c);
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_asymptotic_switch(mut self, threshold: f64) -> Self {
        self.asymptotic_switch = Some(threshold);
        self
    }

    fn b_min(&self) -> f64 {
        self.b.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b.is_empty() {
            return Err(Error::InvalidParameter("empty parameter vector b".into()));
        }
        if self.b.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(Error::InvalidParameter(format!("b must be finite and >= 0: {:?}", self.b)));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidParameter(format!("rel_tol {} not in (0, 1)", self.rel_tol)));
        }
        if self.max_nodes < 64 {
            return Err(Error::InvalidParameter(format!("max_nodes {} < 64", self.max_nodes)));
        }
        if let Some(c) = self.contour_abscissa {
            let limit = match self.kind {
                MeijerKind::G0n => self.b_min(),
                MeijerKind::G1n1 => 0.0,
            };
            if !(c < limit) || !c.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "contour abscissa {c} must lie left of every pole (< {limit})"
                )));
            }
        }
        Ok(())
    }
}

/// Extra factor multiplying prod Gamma(b_j - s) x^s in the integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Form {
    /// none: the G^{n,0}_{0,n} density
    Density,
    /// 1/(-s) with Re s < 0: the upper tail
    Upper,
    /// 1/s with 0 < Re s < min b: the lower tail
    Lower,
}

/// One Mellin–Barnes integral (1/2 pi i) int exp(phi(s)) ds.
///
/// Points on the real axis are parameterised by their distance y = anchor - s
/// to the nearest pole on the right, which keeps b_j - s accurate when the
/// line hugs a pole.
struct MellinBarnes<'a> {
    b: &'a [f64],
    ln_x: f64,
    form: Form,
    anchor: f64,
    y_max: f64,
}

impl<'a> MellinBarnes<'a> {
    fn new(b: &'a [f64], ln_x: f64, form: Form) -> Self {
        let b_min = b.iter().copied().fold(f64::INFINITY, f64::min);
        let (anchor, y_max) = match form {
            Form::Density => (b_min, f64::INFINITY),
            Form::Upper => (0.0, f64::INFINITY),
            Form::Lower => (b_min, b_min),
        };
        Self { b, ln_x, form, anchor, y_max }
    }

    /// d phi / dy and d^2 phi / dy^2 on the real axis.
    fn slope(&self, y: f64) -> (f64, f64) {
        let mut g = -self.ln_x;
        let mut g2 = 0.0;
        for &bj in self.b {
            let arg = bj - self.anchor + y;
            g += digamma(arg);
            g2 += trigamma(arg);
        }
        match self.form {
            Form::Density => {}
            Form::Upper => {
                g -= 1.0 / y;
                g2 += 1.0 / (y * y);
            }
            Form::Lower => {
                let s = self.anchor - y;
                g += 1.0 / s;
                g2 += 1.0 / (s * s);
            }
        }
        (g, g2)
    }

    fn phi(&self, y: f64, t: f64) -> Complex64 {
        let s = Complex64::new(self.anchor - y, t);
        let mut acc = s * self.ln_x;
        for &bj in self.b {
            acc += log_gamma_right(Complex64::new(bj - self.anchor + y, -t));
        }
        match self.form {
            Form::Density => acc,
            Form::Upper => acc - Complex64::new(y, -t).ln(),
            Form::Lower => acc - s.ln(),
        }
    }

    /// Root of d phi / dy, i.e. the saddle of the integrand on the real axis.
    fn saddle(&self) -> Result<f64> {
        let mut lo;
        let mut hi;
        if self.y_max.is_finite() {
            lo = 0.0;
            hi = self.y_max;
        } else {
            lo = 1.0;
            hi = 1.0;
            let mut guard = 0;
            while self.slope(hi).0 <= 0.0 {
                lo = hi;
                hi *= 2.0;
                guard += 1;
                if guard > 2000 {
                    return Err(Error::Convergence("saddle bracket (upper) not found".into()));
                }
            }
            if lo == hi {
                lo = hi / 2.0;
                while self.slope(lo).0 >= 0.0 {
                    hi = lo;
                    lo /= 2.0;
                    guard += 1;
                    if guard > 2000 || lo < 1e-300 {
                        return Err(Error::Convergence("saddle bracket (lower) not found".into()));
                    }
                }
            }
        }
        let mut y = 0.5 * (lo + hi);
        for _ in 0..300 {
            let (g, g2) = self.slope(y);
            if g > 0.0 {
                hi = y;
            } else {
                lo = y;
            }
            let newton = y - g / g2;
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - y).abs() <= 1e-13 * y.abs() || hi - lo <= 1e-15 * hi {
                return Ok(next);
            }
            y = next;
        }
        Ok(y)
    }

    /// Natural log of the integral taken along Re s = anchor - y.
    fn ln_integral(&self, y: f64, rel_tol: f64, max_nodes: usize) -> Result<f64> {
        let phi0 = self.phi(y, 0.0).re;
        let (_, g2) = self.slope(y);
        let w = 1.0 / g2.sqrt();
        if !w.is_finite() || !phi0.is_finite() {
            return Err(Error::Convergence(format!("degenerate integrand at y = {y}")));
        }
        let mut nodes = 0usize;
        // Sum of F(u) over u = start + k step, F(u) = Re e^{dphi} dt/du.
        // `reference` estimates int_0^inf F du and sets the truncation level.
        let mut sweep = |start: f64, step: f64, reference: f64| -> Result<f64> {
            let mut acc = 0.0;
            let mut prev_mod = f64::INFINITY;
            let mut k = 0usize;
            loop {
                let u = start + k as f64 * step;
                let t = w * u.sinh();
                let jac = w * u.cosh();
                let dphi = self.phi(y, t) - phi0;
                let modulus = dphi.re.exp() * jac;
                let val = dphi.exp().re * jac;
                nodes += 1;
                if nodes > max_nodes {
                    return Err(Error::Convergence(format!(
                        "more than {max_nodes} quadrature nodes needed"
                    )));
                }
                acc += val;
                let scale = reference.abs().max(step * acc.abs());
                if modulus < prev_mod && step * modulus < 1e-2 * rel_tol * scale {
                    break;
                }
                if !modulus.is_finite() || u > 60.0 {
                    return Err(Error::Convergence("integrand tail did not decay".into()));
                }
                prev_mod = modulus;
                k += 1;
            }
            Ok(acc)
        };

        let mut h = 0.5;
        let f0 = w;
        let rest = sweep(h, h, 0.5 * h * f0)?;
        let mut total = h * (0.5 * f0 + rest) / PI;
        let mut level = 0;
        loop {
            let half = 0.5 * h;
            let odd = sweep(half, h, total * PI)?;
            let refined = 0.5 * total + half * odd / PI;
            level += 1;
            let converged = (refined - total).abs() <= rel_tol * refined.abs();
            total = refined;
            h = half;
            if converged && level >= 2 {
                break;
            }
        }
        if !(total > 0.0) {
            return Err(Error::Convergence(format!(
                "quadrature produced a non-positive value {total}"
            )));
        }
        Ok(phi0 + total.ln())
    }

    fn ln_value(&self, c: Option<f64>, rel_tol: f64, max_nodes: usize) -> Result<f64> {
        let y = match c {
            Some(c) => self.anchor - c,
            None => self.saddle()?,
        };
        self.ln_integral(y, rel_tol, max_nodes)
    }
}

/// Product of the b_j with the convention that it is the mean of a gamma
/// product with these shapes.
fn ln_mean(b: &[f64]) -> f64 {
    b.iter().map(|v| v.ln()).sum()
}

fn ln_prod_gamma(b: &[f64]) -> f64 {
    b.iter().map(|&v| ln_gamma(v)).sum()
}

/// ln G for either kind; honours the Luke switch when configured.
pub fn ln_meijer_g(params: &MeijerParams, x: f64) -> Result<f64> {
    params.validate()?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Meijer G needs finite x >= 0, got {x}")));
    }
    let n = params.b.len() as f64;
    if x == 0.0 {
        return Ok(value_at_zero(params));
    }
    if let Some(threshold) = params.asymptotic_switch {
        if x.powf(1.0 / n) >= threshold {
            return Ok(ln_luke_asymptotic_g(params, x));
        }
    }
    let ln_x = x.ln();
    match params.kind {
        MeijerKind::G0n => MellinBarnes::new(&params.b, ln_x, Form::Density).ln_value(
            params.contour_abscissa,
            params.rel_tol,
            params.max_nodes,
        ),
        MeijerKind::G1n1 => {
            let b_min = params.b_min();
            if params.contour_abscissa.is_some() || b_min == 0.0 || ln_x >= ln_mean(&params.b) {
                MellinBarnes::new(&params.b, ln_x, Form::Upper).ln_value(
                    params.contour_abscissa,
                    params.rel_tol,
                    params.max_nodes,
                )
            } else {
                let norm = ln_prod_gamma(&params.b);
                let lower = MellinBarnes::new(&params.b, ln_x, Form::Lower).ln_value(
                    None,
                    params.rel_tol,
                    params.max_nodes,
                )?;
                Ok(norm + (-(lower - norm).exp()).ln_1p())
            }
        }
    }
}

fn value_at_zero(params: &MeijerParams) -> f64 {
    let zeros = params.b.iter().filter(|&&v| v == 0.0).count();
    match params.kind {
        MeijerKind::G0n => match zeros {
            0 => f64::NEG_INFINITY,
            1 => params.b.iter().filter(|&&v| v != 0.0).map(|&v| ln_gamma(v)).sum(),
            _ => f64::INFINITY,
        },
        MeijerKind::G1n1 => {
            if zeros == 0 {
                ln_prod_gamma(&params.b)
            } else {
                f64::INFINITY
            }
        }
    }
}

/// G-function value; see [`ln_meijer_g`].
pub fn meijer_g(params: &MeijerParams, x: f64) -> Result<f64> {
    ln_meijer_g(params, x).map(f64::exp)
}

/// ln G^{n,0}_{0,n}(x | b) at default precision.
pub fn ln_meijer_g0n(b: &[f64], x: f64) -> Result<f64> {
    ln_meijer_g(&MeijerParams::g0n(b.to_vec()), x)
}

fn check_shapes(shapes: &[f64]) -> Result<()> {
    if shapes.is_empty() || shapes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::InvalidParameter(format!("gamma shapes must be > 0: {shapes:?}")));
    }
    Ok(())
}

/// ln P{X_1 ... X_n > x} for independent X_j ~ Gamma(shapes_j, 1).
///
/// Above the mean the upper-tail integral is used directly; below it the
/// lower tail is computed and complemented with `ln_1p`.
pub fn ln_gamma_product_survival(shapes: &[f64], x: f64, rel_tol: f64) -> Result<f64> {
    check_shapes(shapes)?;
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("threshold must be >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    if let [a] = shapes {
        return super::ln_regularized_upper_gamma(*a, x);
    }
    let ln_x = x.ln();
    let norm = ln_prod_gamma(shapes);
    if ln_x >= ln_mean(shapes) {
        let upper = MellinBarnes::new(shapes, ln_x, Form::Upper).ln_value(None, rel_tol, DEFAULT_MAX_NODES)?;
        Ok((upper - norm).min(0.0))
    } else {
        let lower = MellinBarnes::new(shapes, ln_x, Form::Lower).ln_value(None, rel_tol, DEFAULT_MAX_NODES)?;
        Ok((-(lower - norm).exp().min(1.0)).ln_1p())
    }
}

/// ln P{X_1 ... X_n <= x}, the complement of [`ln_gamma_product_survival`].
pub fn ln_gamma_product_cdf(shapes: &[f64], x: f64, rel_tol: f64) -> Result<f64> {
    check_shapes(shapes)?;
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("threshold must be >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if let [a] = shapes {
        return super::ln_regularized_lower_gamma(*a, x);
    }
    let ln_x = x.ln();
    let norm = ln_prod_gamma(shapes);
    if ln_x <= ln_mean(shapes) {
        let lower = MellinBarnes::new(shapes, ln_x, Form::Lower).ln_value(None, rel_tol, DEFAULT_MAX_NODES)?;
        Ok((lower - norm).min(0.0))
    } else {
        let upper = MellinBarnes::new(shapes, ln_x, Form::Upper).ln_value(None, rel_tol, DEFAULT_MAX_NODES)?;
        Ok((-(upper - norm).exp().min(1.0)).ln_1p())
    }
}

/// (ln P{prod X_j <= x}, ln P{prod X_j > x}) from a single quadrature: the
/// smaller tail is integrated and the other is its complement.
pub fn ln_gamma_product_tails(shapes: &[f64], x: f64, rel_tol: f64) -> Result<(f64, f64)> {
    check_shapes(shapes)?;
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("threshold must be >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    if x.is_infinite() {
        return Ok((0.0, f64::NEG_INFINITY));
    }
    if let [a] = shapes {
        return Ok((super::ln_regularized_lower_gamma(*a, x)?, super::ln_regularized_upper_gamma(*a, x)?));
    }
    let ln_x = x.ln();
    let norm = ln_prod_gamma(shapes);
    if ln_x >= ln_mean(shapes) {
        let upper = MellinBarnes::new(shapes, ln_x, Form::Upper).ln_value(None, rel_tol, DEFAULT_MAX_NODES)?;
        let ln_s = (upper - norm).min(0.0);
        Ok(((-ln_s.exp()).ln_1p(), ln_s))
    } else {
        let lower = MellinBarnes::new(shapes, ln_x, Form::Lower).ln_value(None, rel_tol, DEFAULT_MAX_NODES)?;
        let ln_c = (lower - norm).min(0.0);
        Ok((ln_c, (-ln_c.exp()).ln_1p()))
    }
}

/// P{prod X_j > r2} with X_j ~ Gamma(b_j + 1, 1), i.e.
/// G^{n+1,0}_{1,n+1}(r2 | 1; 0, b + 1) / prod Gamma(b_j + 1).
pub fn meijer_g_survival(b: &[f64], r2: f64) -> Result<f64> {
    let shapes: Vec<f64> = b.iter().map(|v| v + 1.0).collect();
    ln_gamma_product_survival(&shapes, r2, DEFAULT_REL_TOL).map(f64::exp)
}

/// sigma and theta of the Luke expansion for this instance.
pub fn luke_exponents(params: &MeijerParams) -> (f64, f64) {
    let sigma = params.b.len() as f64;
    let sum_b: f64 = params.b.iter().sum();
    let sum_a = match params.kind {
        MeijerKind::G0n => 0.0,
        MeijerKind::G1n1 => 1.0,
    };
    let theta = ((1.0 - sigma) / 2.0 + sum_b - sum_a) / sigma;
    (sigma, theta)
}

/// ln of (2 pi)^{(sigma-1)/2} sigma^{-1/2} exp(-sigma x^{1/sigma}) x^theta.
pub fn ln_luke_asymptotic_g(params: &MeijerParams, x: f64) -> f64 {
    let (sigma, theta) = luke_exponents(params);
    0.5 * (sigma - 1.0) * (2.0 * PI).ln() - 0.5 * sigma.ln() - sigma * x.powf(1.0 / sigma)
        + theta * x.ln()
}

/// Leading term of the large-x expansion.
pub fn luke_asymptotic_g(params: &MeijerParams, x: f64) -> f64 {
    ln_luke_asymptotic_g(params, x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_factor_is_power_times_exponential() {
        for &b in &[0.0, 0.5, 1.0, 3.0, 12.5] {
            for &x in &[1e-3, 0.1, 1.0, 5.0, 80.0, 900.0] {
                let got = ln_meijer_g0n(&[b], x).unwrap();
                let want = b * f64::ln(x) - x;
                assert!((got - want).abs() < 1e-11 * want.abs().max(1.0), "b={b} x={x}");
            }
        }
        assert!((meijer_g(&MeijerParams::g0n(vec![0.0]), 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn values_at_the_origin() {
        assert_eq!(meijer_g(&MeijerParams::g0n(vec![1.0]), 0.0).unwrap(), 0.0);
        assert!(meijer_g(&MeijerParams::g0n(vec![1.0]), 1e-12).unwrap() < 1e-11);
        assert_eq!(meijer_g_survival(&[0.3, 1.0], 0.0).unwrap(), 1.0);
    }

    #[test]
    fn survival_single_factor_matches_incomplete_gamma() {
        use crate::specfun::incgamma::ln_regularized_upper_gamma;
        for &a in &[1.0, 2.0, 3.5, 30.0] {
            for &x in &[1e-4, 0.3, 1.0, 4.0, 40.0, 400.0] {
                let got = ln_gamma_product_survival(&[a], x, 1e-13).unwrap();
                let want = ln_regularized_upper_gamma(a, x).unwrap();
                assert!((got - want).abs() < 1e-11 * want.abs().max(1e-3), "a={a} x={x}: {got} vs {want}");
            }
        }
        assert!((meijer_g_survival(&[0.0], 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn survival_and_cdf_are_complements() {
        for shapes in [vec![1.0, 1.0], vec![2.0, 0.5, 3.0], vec![4.0, 7.0]] {
            for &x in &[0.05, 0.9, 3.0, 20.0, 100.0] {
                let s = ln_gamma_product_survival(&shapes, x, 1e-13).unwrap().exp();
                let c = ln_gamma_product_cdf(&shapes, x, 1e-13).unwrap().exp();
                assert!((s + c - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fixed_abscissa_agrees_with_saddle() {
        let b = vec![0.0, 0.5, 2.0];
        for &x in &[0.2, 2.0, 10.0] {
            let saddle = ln_meijer_g0n(&b, x).unwrap();
            let fixed = ln_meijer_g(&MeijerParams::g0n(b.clone()).with_abscissa(-0.25), x).unwrap();
            assert!((saddle - fixed).abs() < 1e-10);
        }
    }

    #[test]
    fn luke_exponents_follow_the_definition() {
        let p = MeijerParams::g1n1(vec![1.0]);
        assert_eq!(luke_exponents(&p), (1.0, 0.0));
        let m = 0.7;
        let q = MeijerParams::g1n1(vec![0.0 + 1.0, 1.0 + m]);
        let (sigma, theta) = luke_exponents(&q);
        assert_eq!(sigma, 2.0);
        assert!((theta - (m + 1.0 - 0.5) / 2.0).abs() < 1e-15);
        // n = 1 density: the leading term is exact.
        let g = MeijerParams::g0n(vec![2.0]);
        assert!((ln_luke_asymptotic_g(&g, 7.0) - ln_meijer_g0n(&[2.0], 7.0).unwrap()).abs() < 1e-11);
    }

    #[test]
    fn switch_selects_asymptotics() {
        let p = MeijerParams::g0n(vec![0.0, 0.0]).with_asymptotic_switch(30.0);
        let x = 1e4;
        assert_eq!(ln_meijer_g(&p, x).unwrap(), ln_luke_asymptotic_g(&p, x));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(ln_meijer_g(&MeijerParams::g0n(vec![]), 1.0).is_err());
        assert!(ln_meijer_g(&MeijerParams::g0n(vec![-0.5]), 1.0).is_err());
        assert!(ln_meijer_g(&MeijerParams::g0n(vec![1.0]).with_abscissa(1.5), 1.0).is_err());
        assert!(ln_meijer_g(&MeijerParams::g0n(vec![1.0]).with_rel_tol(0.0), 1.0).is_err());
        assert!(ln_meijer_g(&MeijerParams::g0n(vec![1.0]), -1.0).is_err());
    }
}
