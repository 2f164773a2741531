//! Special functions: log-gamma, incomplete gamma, Meijer G and the
//! Euler–Maclaurin constants.

pub mod euler_maclaurin;
pub mod gamma;
pub mod incgamma;
pub mod meijer;

pub use euler_maclaurin::{
    constant_c, constant_c_with_bound, euler_maclaurin_klogk_sum, euler_maclaurin_log_sum,
    BernoulliPeriodic, ConstantC, SumAsymptotics,
};
pub use gamma::{digamma, gamma, ln_gamma, log_gamma_complex, trigamma};
pub use incgamma::{
    ln_regularized_lower_gamma, ln_regularized_upper_gamma, regularized_lower_gamma,
    regularized_upper_gamma,
};
pub use meijer::{
    ln_gamma_product_cdf, ln_gamma_product_survival, ln_gamma_product_tails, ln_luke_asymptotic_g, ln_meijer_g,
    ln_meijer_g0n, luke_asymptotic_g, luke_exponents, meijer_g, meijer_g_survival, MeijerKind,
    MeijerParams,
};
