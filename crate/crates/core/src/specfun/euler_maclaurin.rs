//! Bernoulli periodic functions, the constant C(m) and the two
//! Euler–Maclaurin sum asymptotics used by the hole-probability bounds.

use crate::error::{Error, Result};

/// Periodic extension P_k(x) = B_k(x - floor x) of a Bernoulli polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BernoulliPeriodic {
    pub order: u32,
}

impl BernoulliPeriodic {
    pub fn new(order: u32) -> Result<Self> {
        if !(1..=3).contains(&order) {
            return Err(Error::InvalidParameter(format!("Bernoulli order {order} not in 1..=3")));
        }
        Ok(Self { order })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = x - x.floor();
        match self.order {
            1 => u - 0.5,
            2 => u * u - u + 1.0 / 6.0,
            _ => u * u * u - 1.5 * u * u + 0.5 * u,
        }
    }
}

/// int_0^1 P_2(u) / (a + u)^2 du for a >= 1.
fn p2_cell(a: f64) -> f64 {
    if a < 50.0 {
        2.0 + 1.0 / (6.0 * a * (a + 1.0)) - (2.0 * a + 1.0) * (1.0 / a).ln_1p()
    } else {
        // The closed form cancels to O(a^-4); expand in eps = 1/a instead.
        // Coefficient of eps^j is (-1)^j (1/6 - (j-1)/(j(j+1))), zero for j < 4.
        let eps = 1.0 / a;
        let mut pow = eps.powi(4);
        let mut acc = 0.0;
        for j in 4..16 {
            let jf = j as f64;
            let c = 1.0 / 6.0 - (jf - 1.0) / (jf * (jf + 1.0));
            acc += if j % 2 == 0 { c * pow } else { -c * pow };
            pow *= eps;
        }
        acc
    }
}

/// C(m) together with the envelope bound on the discarded tail integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantC {
    pub value: f64,
    pub tail_bound: f64,
}

/// C(m) = m + 1 - 1/(12(m+1)) - (m + 1/2) ln(1+m) + (1/2) int_1^inf P_2(x)/(m+x)^2 dx.
///
/// Accepts m > -1, where every term is finite; the quaternion lower bound
/// needs C((m-1)/2) at m = 0.
pub fn constant_c_with_bound(m: f64) -> Result<ConstantC> {
    if !(m > -1.0) || !m.is_finite() {
        return Err(Error::Domain(format!("C(m) needs m > -1, got {m}")));
    }
    let x_max = (1e6 / (1.0 + m)).floor().max(2.0) as u64;
    let mut integral = 0.0;
    // Sum small terms first.
    for j in (1..x_max).rev() {
        integral += p2_cell(m + j as f64);
    }
    let value = m + 1.0 - 1.0 / (12.0 * (m + 1.0)) - (0.5 + m) * m.ln_1p() + 0.5 * integral;
    let tail_bound = 1.0 / (12.0 * (m + x_max as f64));
    Ok(ConstantC { value, tail_bound })
}

pub fn constant_c(m: f64) -> Result<f64> {
    constant_c_with_bound(m).map(|c| c.value)
}

/// A direct sum next to its asymptotic approximation.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SumAsymptotics {
    pub direct: f64,
    pub asymptotic: f64,
}

impl SumAsymptotics {
    pub fn error(&self) -> f64 {
        self.direct - self.asymptotic
    }
}

/// sum_{k=1}^n ln(m+k) against n ln n - n + (m + 1/2) ln n + C(m).
pub fn euler_maclaurin_log_sum(m: f64, n_terms: u64) -> Result<SumAsymptotics> {
    if n_terms == 0 {
        return Err(Error::InvalidParameter("n_terms must be >= 1".into()));
    }
    let direct: f64 = (1..=n_terms).map(|k| (m + k as f64).ln()).sum();
    let n = n_terms as f64;
    let asymptotic = n * n.ln() - n + (m + 0.5) * n.ln() + constant_c(m)?;
    Ok(SumAsymptotics { direct, asymptotic })
}

/// sum_{k=1}^n (k+m) ln(k+m) against
/// n^2 ln n / 2 - n^2/4 + n (m + 1/2) ln n + m(m+1)/2 ln n.
///
/// The displayed expansion omits a (1/12) ln n term, so the error drifts
/// slowly rather than settling.
pub fn euler_maclaurin_klogk_sum(m: f64, n_terms: u64) -> Result<SumAsymptotics> {
    if n_terms == 0 {
        return Err(Error::InvalidParameter("n_terms must be >= 1".into()));
    }
    let direct: f64 = (1..=n_terms)
        .map(|k| {
            let v = k as f64 + m;
            v * v.ln()
        })
        .sum();
    let n = n_terms as f64;
    let ln_n = n.ln();
    let asymptotic =
        0.5 * n * n * ln_n - 0.25 * n * n + n * (m + 0.5) * ln_n + 0.5 * m * (m + 1.0) * ln_n;
    Ok(SumAsymptotics { direct, asymptotic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::ln_gamma;

    #[test]
    fn bernoulli_periodic_values() {
        let p2 = BernoulliPeriodic::new(2).unwrap();
        assert_eq!(p2.eval(0.0), 1.0 / 6.0);
        assert!((p2.eval(3.25) - p2.eval(0.25)).abs() < 1e-15);
        assert!((p2.eval(0.5) + 1.0 / 12.0).abs() < 1e-15);
        let p3 = BernoulliPeriodic::new(3).unwrap();
        assert_eq!(p3.eval(0.0), 0.0);
        assert!(p3.eval(0.5).abs() < 1e-15);
        assert!(BernoulliPeriodic::new(4).is_err());
    }

    #[test]
    fn cell_integral_branches_agree() {
        // Compare both branches against Gauss–Legendre near the switch.
        let (x, w) = crate::quad::gauss_legendre(40);
        for &a in &[3.0, 49.9, 50.0, 200.0] {
            let quad: f64 = x
                .iter()
                .zip(&w)
                .map(|(&t, &wt)| {
                    let u = 0.5 * (t + 1.0);
                    0.5 * wt * (u * u - u + 1.0 / 6.0) / ((a + u) * (a + u))
                })
                .sum();
            assert!((p2_cell(a) - quad).abs() < 1e-15, "a = {a}");
        }
    }

    #[test]
    fn constant_matches_stirling_identity() {
        for &m in &[0.0, 0.5, 1.0, 2.0, 5.0, -0.5] {
            let c = constant_c(m).unwrap();
            let want = 0.5 * (2.0 * std::f64::consts::PI).ln() - ln_gamma(m + 1.0);
            assert!((c - want).abs() < 1e-10, "m = {m}: {c} vs {want}");
        }
        assert!((constant_c(2.0).unwrap() - 0.225_791_352_644_727_4).abs() < 1e-10);
        assert!(constant_c(-1.0).is_err());
    }

    #[test]
    fn sum_examples() {
        let s = euler_maclaurin_log_sum(0.0, 10).unwrap();
        assert!((s.direct - 15.104_412_573_075_516).abs() < 1e-12);
        assert!((euler_maclaurin_log_sum(2.0, 1).unwrap().direct - 3f64.ln()).abs() < 1e-15);
        assert_eq!(euler_maclaurin_klogk_sum(0.0, 1).unwrap().direct, 0.0);
        let t = euler_maclaurin_klogk_sum(1.0, 2).unwrap().direct;
        assert!((t - (2.0 * 2f64.ln() + 3.0 * 3f64.ln())).abs() < 1e-14);
        let big = euler_maclaurin_klogk_sum(0.0, 1000).unwrap();
        assert!(big.error().abs() < 2.0);
    }
}
