//! Exact factorial identities, Wallis partial products, and the accuracy
//! of two closed approximations of (2n)!.
//!
//! The even and odd double factorials interlock with the plain factorial
//! through two exact identities,
//!
//! ```text
//! (2n−1)!! · (2n)!! = (2n)!        (2n)!! = 2^n · n!
//! ```
//!
//! verified here in exact integer arithmetic. Squaring their ratio gives
//! the Wallis partial product
//!
//! ```text
//! W_n = [ (2n)!! / (2n−1)!! ]² ,    W_n/(2n+1) → π/2,
//! ```
//!
//! and rearranging the same double-factorial algebra around the asymptotic
//! form of (2n)! produces two closed approximations that differ only in
//! their prefactor — 2n·√(2π) against √(2n)·√(2π) — so their quality gap
//! is exactly a factor √(2n). The report quantifies both against the exact
//! ln (2n)!.

use crate::error::Error;
use num::{BigUint, One, ToPrimitive};

/// m! as an exact big integer.
pub fn factorial(m: u32) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=m {
        acc *= k;
    }
    acc
}

/// m!! as an exact big integer (m, m−2, m−4, … down to 2 or 1; 0!! = 1).
pub fn double_factorial(m: u32) -> BigUint {
    let mut acc = BigUint::one();
    let mut k = m;
    while k >= 2 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// ln m! — through the exact integer when m! still fits in a double
/// (m ≤ 170), by direct summation of logarithms beyond that.
fn ln_factorial(m: u64) -> f64 {
    if m <= 170 {
        factorial(m as u32).to_f64().unwrap_or(f64::INFINITY).ln()
    } else {
        (2..=m).map(|k| (k as f64).ln()).sum()
    }
}

/// One Wallis partial product and its corrected form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallisPartial {
    pub n: u32,
    /// [ (2n)!! / (2n−1)!! ]², assembled in log space.
    pub raw: f64,
    /// raw/(2n+1), the form that converges to π/2.
    pub corrected: f64,
}

impl WallisPartial {
    /// raw/corrected, which is 2n+1 by construction.
    pub fn ratio(&self) -> f64 {
        self.raw / self.corrected
    }
}

/// The n-th Wallis partial product.
pub fn wallis(n: u32) -> Result<WallisPartial, Error> {
    if n == 0 {
        return Err(Error::Domain("Wallis partial products start at n = 1".into()));
    }
    let nf = u64::from(n);
    // ln W = 2·ln (2n)!! − 2·ln (2n−1)!!; with (2n)!! = 2^n·n! and
    // (2n−1)!! = (2n)!/(2^n·n!) that is 4n·ln2 + 4·ln n! − 2·ln (2n)!.
    let ln_w = 4.0 * (n as f64) * std::f64::consts::LN_2 + 4.0 * ln_factorial(nf)
        - 2.0 * ln_factorial(2 * nf);
    let raw = ln_w.exp();
    Ok(WallisPartial { n, raw, corrected: raw / (2.0 * n as f64 + 1.0) })
}

/// Accuracy report for two closed approximations of (2n)!.
///
/// Both share the factor √(2π)·(2n/e)^(2n) and differ only in the leading
/// prefactor; the linear-prefactor form overshoots by ~√(2n) while the
/// square-root form is the classical asymptotic with relative error
/// ≈ −1/(24n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorialReport {
    /// The report describes (2n)!.
    pub n: u32,
    /// ln (2n)!, exact to rounding.
    pub log_exact: f64,
    /// ln [ 2n·√(2π)·(2n/e)^(2n) ].
    pub log_linear_prefactor: f64,
    /// ln [ √(2n)·√(2π)·(2n/e)^(2n) ].
    pub log_sqrt_prefactor: f64,
    /// exp(log_linear_prefactor − log_exact) − 1.
    pub rel_err_linear: f64,
    /// exp(log_sqrt_prefactor − log_exact) − 1.
    pub rel_err_sqrt: f64,
    /// exp(log_linear_prefactor − log_sqrt_prefactor), measured — equals
    /// √(2n) up to rounding.
    pub prefactor_ratio: f64,
}

/// Compare both prefactor variants against the exact ln (2n)!.
pub fn stirling_report(n: u32) -> Result<FactorialReport, Error> {
    if n == 0 {
        return Err(Error::Domain("the factorial report needs n ≥ 1".into()));
    }
    let two_n = 2.0 * f64::from(n);
    let log_exact = ln_factorial(2 * u64::from(n));
    let ln_sqrt_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    let core = two_n * (two_n.ln() - 1.0) + ln_sqrt_2pi;
    let log_linear_prefactor = two_n.ln() + core;
    let log_sqrt_prefactor = 0.5 * two_n.ln() + core;
    Ok(FactorialReport {
        n,
        log_exact,
        log_linear_prefactor,
        log_sqrt_prefactor,
        rel_err_linear: (log_linear_prefactor - log_exact).exp_m1(),
        rel_err_sqrt: (log_sqrt_prefactor - log_exact).exp_m1(),
        prefactor_ratio: (log_linear_prefactor - log_sqrt_prefactor).exp(),
    })
}
