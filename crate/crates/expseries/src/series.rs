//! Series evaluation of the antiderivatives of e^(±x^n).
//!
//! For integer n ≥ 1 the antiderivative of e^(x^n) that vanishes at the
//! origin has the closed series form
//!
//! ```text
//! F₊(x) = e^(x^n) · B₊(x),   B₊(x) = Σ_{r≥0} (−1)^r n^r x^(1+nr) / Π_{p=0}^{r} (1+pn)
//! ```
//!
//! and the antiderivative of e^(−x^n) is F₋(x) = e^(−x^n)·B₋(x) with the
//! same bracket series without the alternating sign. Both brackets converge
//! for every finite x. The same functions also have the direct Maclaurin
//! expansion
//!
//! ```text
//! F±(x) = Σ_{m≥0} (±1)^m x^(nm+1) / (m! (nm+1)),
//! ```
//!
//! and the equality of the two coefficient systems is an exact rational
//! identity checked by [`coefficient_identity`].
//!
//! Splitting the (unsigned) bracket series into its even-r and odd-r halves
//! gives a pair g, f with g − f = B₊ and g + f = B₋; the pair satisfies a
//! coupled first-order system and two second-order equations handled in the
//! `ode` module.
//!
//! Everything here reports its own numerical health: each evaluation carries
//! the number of terms consumed, whether the truncation rule was satisfied,
//! and a cancellation index Σ|t_r| / |Σ t_r| measuring how many digits were
//! lost to alternating-sign cancellation.

use crate::error::Error;
use crate::kahan::Kahan;
use crate::quad;
use num::{BigInt, BigRational, One, Zero};
use std::fmt;

/// Sign of the exponent in e^(±x^n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    /// The growing family e^(+x^n).
    Pos,
    /// The decaying family e^(−x^n).
    Neg,
}

impl Sign {
    /// +1.0 for `Pos`, −1.0 for `Neg`.
    pub fn factor(self) -> f64 {
        match self {
            Sign::Pos => 1.0,
            Sign::Neg => -1.0,
        }
    }

    /// The opposite sign.
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Pos => write!(out, "pos"),
            Sign::Neg => write!(out, "neg"),
        }
    }
}

/// Truncation rule for all series evaluations.
///
/// Summation stops at the first index r ≥ 1 whose term satisfies both
/// `|t_r| < max(abs_tol, rel_tol·|partial sum|)` and `|t_r| < |t_{r−1}|`
/// (the second clause keeps the rule from firing while terms are still
/// growing toward their peak). If no term satisfies the rule within
/// `max_terms`, the evaluation returns with `converged == false` rather
/// than erroring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { max_terms: 200, rel_tol: 1e-12, abs_tol: 1e-15 }
    }
}

impl TruncationPolicy {
    /// Policy with the default term budget and a caller-chosen relative
    /// tolerance (the absolute floor scales down by 10⁻³ with it).
    pub fn with_tolerance(rel_tol: f64) -> Self {
        TruncationPolicy { max_terms: 200, rel_tol, abs_tol: rel_tol * 1e-3 }
    }

    fn validate(&self) -> Result<(), Error> {
        if self.max_terms == 0 {
            return Err(Error::Domain("max_terms must be at least 1".into()));
        }
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Domain(format!(
                "tolerances must be positive, got rel_tol = {}, abs_tol = {}",
                self.rel_tol, self.abs_tol
            )));
        }
        Ok(())
    }
}

/// Outcome of one truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    /// The compensated partial sum.
    pub value: f64,
    /// Number of terms actually accumulated.
    pub terms_used: usize,
    /// Whether the truncation rule was satisfied within the term budget.
    pub converged: bool,
    /// Σ|t_r| / |Σ t_r| — a value near 1 means no cancellation; a value of
    /// 10^k means roughly k decimal digits were lost to alternating signs.
    pub cancellation_index: f64,
}

/// The even-r and odd-r halves of the unsigned bracket series.
///
/// `even` (traditionally written g) collects r = 0, 2, 4, …, so its leading
/// term is x; `odd` (written f) collects r = 1, 3, 5, …. They recombine as
/// g − f = B₊ and g + f = B₋. At n = 1 they reduce to sinh x and cosh x − 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitEval {
    pub even: SeriesEval,
    pub odd: SeriesEval,
}

/// Result of checking the odd-n reflection law F_s(−x) = −F_{−s}(x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionCheck {
    /// F_s evaluated at −x.
    pub value_at_minus_x: f64,
    /// −F_{−s}(x), the value the reflection law predicts.
    pub reflected_value: f64,
    /// |value_at_minus_x − reflected_value|.
    pub defect: f64,
    /// Combined truncation tolerance of the two evaluations; the law holds
    /// numerically when `defect ≤ tolerance`.
    pub tolerance: f64,
    pub within_tolerance: bool,
}

/// Whether an endpoint at infinity belongs to the set where the
/// antiderivative has a finite limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainEdge {
    /// Only finite arguments are admissible on this side.
    FiniteOnly,
    /// The infinite endpoint itself carries a finite limit (±Γ(1+1/n)).
    Closed,
}

/// Largest-argument classification for each sign/parity combination.
///
/// The bracket and Maclaurin series converge for every finite x, so the
/// only question is whether x → ±∞ has a finite limit: e^(−x^n) decays in
/// a direction exactly when x^n → +∞ there, and in that direction the
/// antiderivative tends to ±Γ(1+1/n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvergenceDomain {
    pub lower: DomainEdge,
    pub upper: DomainEdge,
}

impl fmt::Display for ConvergenceDomain {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = match self.lower {
            DomainEdge::Closed => "[",
            DomainEdge::FiniteOnly => "(",
        };
        let close = match self.upper {
            DomainEdge::Closed => "]",
            DomainEdge::FiniteOnly => ")",
        };
        write!(out, "{open}-inf, inf{close}")
    }
}

/// Exact rational forms of both coefficient systems at one index pair.
///
/// `direct` is the Maclaurin coefficient 1/(m!(nm+1)); `bracket` is the
/// coefficient of x^(nm+1) produced by multiplying e^(±x^n) against the
/// bracket series and collecting terms:
///
/// ```text
/// (−1)^m Σ_{r=0}^{m} (−1)^r n^(m−r) / ( r! · Π_{p=0}^{m−r} (1+pn) )
/// ```
///
/// The two are equal for every m ≥ 0, n ≥ 1, which is what makes the
/// product form and the Maclaurin form the same function.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientIdentity {
    pub direct: BigRational,
    pub bracket: BigRational,
}

impl CoefficientIdentity {
    pub fn holds(&self) -> bool {
        self.direct == self.bracket
    }
}

/// Exponent bound for the product form: when |±x^n| exceeds this, the
/// prefactor e^(±x^n) either overflows the useful range (growing side,
/// reported as [`Error::Overflow`]) or the evaluation switches to a
/// log-space branch (decaying side).
pub const WORKING_EXPONENT_MAX: f64 = 45.0;

fn pow_n(x: f64, n: u32) -> f64 {
    x.powi(n as i32)
}

fn validate_args(x: f64, n: u32, policy: &TruncationPolicy) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::Domain("power index n must be at least 1".into()));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("argument must be finite, got {x}")));
    }
    policy.validate()
}

fn zero_eval() -> SeriesEval {
    SeriesEval { value: 0.0, terms_used: 1, converged: true, cancellation_index: 1.0 }
}

fn cancellation(abs_sum: f64, value: f64) -> f64 {
    if abs_sum == 0.0 {
        1.0
    } else if value == 0.0 {
        f64::INFINITY
    } else {
        (abs_sum / value.abs()).max(1.0)
    }
}

/// The bracket series B₊ (alternating, for `Sign::Pos`) or B₋ (positive
/// terms, for `Sign::Neg`):
///
/// ```text
/// B±(x) = Σ_{r≥0} (∓1)^r n^r x^(1+nr) / Π_{p=0}^{r} (1+pn)
/// ```
///
/// evaluated by the term recurrence t_0 = x,
/// t_r = t_{r−1} · (∓1) · n·x^n / (1+rn).
pub fn bracket_series(
    x: f64,
    n: u32,
    sign: Sign,
    policy: &TruncationPolicy,
) -> Result<SeriesEval, Error> {
    validate_args(x, n, policy)?;
    if x == 0.0 {
        return Ok(zero_eval());
    }
    let nf = f64::from(n);
    // B₊ alternates, B₋ does not, so the ratio carries −sign.factor().
    let ratio_num = -sign.factor() * nf * pow_n(x, n);
    let mut term = x;
    let mut sum = Kahan::new();
    sum.add(term);
    let mut abs_sum = term.abs();
    let mut prev_abs = term.abs();
    let mut terms_used = 1;
    let mut converged = false;
    for r in 1..policy.max_terms {
        term *= ratio_num / (1.0 + nf * r as f64);
        sum.add(term);
        abs_sum += term.abs();
        terms_used += 1;
        let threshold = policy.abs_tol.max(policy.rel_tol * sum.value().abs());
        if term.abs() < threshold && term.abs() < prev_abs {
            converged = true;
            break;
        }
        prev_abs = term.abs();
    }
    let value = sum.value();
    Ok(SeriesEval { value, terms_used, converged, cancellation_index: cancellation(abs_sum, value) })
}

/// The antiderivative F±(x) of e^(±x^n) with F±(0) = 0, in the product
/// form e^(±x^n)·B±(x).
///
/// Outside the working range |±x^n| ≤ [`WORKING_EXPONENT_MAX`] the growing
/// side returns [`Error::Overflow`]; the decaying side (where the plain
/// product would multiply a huge bracket by a tiny exponential) switches to
/// a log-space per-term branch in which every term is positive, so no
/// cancellation occurs.
pub fn antiderivative(
    x: f64,
    n: u32,
    sign: Sign,
    policy: &TruncationPolicy,
) -> Result<SeriesEval, Error> {
    validate_args(x, n, policy)?;
    if x == 0.0 {
        return Ok(zero_eval());
    }
    let exponent = sign.factor() * pow_n(x, n);
    if exponent > WORKING_EXPONENT_MAX {
        return Err(Error::Overflow { exponent });
    }
    if exponent < -WORKING_EXPONENT_MAX {
        // Deep-decay side. For x > 0 this is the e^(−x^n) family directly;
        // for x < 0 it is reached through the reflection F_s(x) = −F₋(|x|)
        // (odd n flips the family sign, even n uses oddness of F₋), and in
        // both cases the result is sign(x) times the positive-argument
        // evaluation of the decaying family.
        let eval = log_space_decay(x.abs(), n, policy);
        return Ok(SeriesEval { value: eval.value.copysign(x), ..eval });
    }
    let bracket = bracket_series(x, n, sign, policy)?;
    Ok(SeriesEval { value: exponent.exp() * bracket.value, ..bracket })
}

/// F₋(y) for y > 0 with y^n beyond the working exponent: each term
/// e^(−y^n)·t_r is formed as exp(−y^n + ln t_r) so the huge bracket terms
/// and the tiny prefactor never meet in linear space.
fn log_space_decay(y: f64, n: u32, policy: &TruncationPolicy) -> SeriesEval {
    let nf = f64::from(n);
    let yn = pow_n(y, n);
    let ln_ratio_base = nf.ln() + nf * y.ln();
    let mut ln_t = y.ln();
    let mut term = (ln_t - yn).exp();
    let mut sum = Kahan::new();
    sum.add(term);
    let mut prev = term;
    let mut terms_used = 1;
    let mut converged = false;
    for r in 1..policy.max_terms {
        ln_t += ln_ratio_base - (1.0 + nf * r as f64).ln();
        term = (ln_t - yn).exp();
        sum.add(term);
        terms_used += 1;
        let threshold = policy.abs_tol.max(policy.rel_tol * sum.value());
        if term < threshold && term < prev {
            converged = true;
            break;
        }
        prev = term;
    }
    // All terms share one sign, so the cancellation index is exactly 1.
    SeriesEval { value: sum.value(), terms_used, converged, cancellation_index: 1.0 }
}

/// The antiderivative F±(x) summed directly from its Maclaurin series
/// Σ (±1)^m x^(nm+1)/(m!(nm+1)), via u_0 = x, u_m = u_{m−1}·(±1)·x^n/m,
/// t_m = u_m/(nm+1).
///
/// Unlike the product form this version alternates for `Sign::Neg`, so its
/// cancellation index grows like e^(2x^n) there; the index field makes that
/// loss visible to the caller.
pub fn maclaurin_antiderivative(
    x: f64,
    n: u32,
    sign: Sign,
    policy: &TruncationPolicy,
) -> Result<SeriesEval, Error> {
    validate_args(x, n, policy)?;
    if x == 0.0 {
        return Ok(zero_eval());
    }
    let xn = pow_n(x, n);
    // Terms peak near m ≈ |x|^n at height ~e^|x|^n; past ~700 the peak
    // itself leaves f64 range and no summation order can recover.
    if xn.abs() > 700.0 {
        return Err(Error::Overflow { exponent: sign.factor() * xn });
    }
    let nf = f64::from(n);
    let ratio_num = sign.factor() * xn;
    let mut u = x;
    let mut term = u;
    let mut sum = Kahan::new();
    sum.add(term);
    let mut abs_sum = term.abs();
    let mut prev_abs = term.abs();
    let mut terms_used = 1;
    let mut converged = false;
    for m in 1..policy.max_terms {
        u *= ratio_num / m as f64;
        term = u / (nf * m as f64 + 1.0);
        sum.add(term);
        abs_sum += term.abs();
        terms_used += 1;
        let threshold = policy.abs_tol.max(policy.rel_tol * sum.value().abs());
        if term.abs() < threshold && term.abs() < prev_abs {
            converged = true;
            break;
        }
        prev_abs = term.abs();
    }
    let value = sum.value();
    Ok(SeriesEval { value, terms_used, converged, cancellation_index: cancellation(abs_sum, value) })
}

/// The even-r half g and odd-r half f of the unsigned bracket series,
/// accumulated in one pass over the shared terms a_r = n^r x^(1+nr) /
/// Π_{p=0}^r (1+pn).
///
/// Within each half all terms share one sign for every real x, so the two
/// halves are cancellation-free even where B₊ = g − f cancels badly.
pub fn even_odd_split(x: f64, n: u32, policy: &TruncationPolicy) -> Result<SplitEval, Error> {
    validate_args(x, n, policy)?;
    if x == 0.0 {
        return Ok(SplitEval {
            even: zero_eval(),
            odd: SeriesEval { terms_used: 0, ..zero_eval() },
        });
    }
    let nf = f64::from(n);
    let ratio_num = nf * pow_n(x, n);
    let mut term = x;
    let mut even_sum = Kahan::new();
    let mut odd_sum = Kahan::new();
    even_sum.add(term);
    let mut even_abs = term.abs();
    let mut odd_abs = 0.0;
    let mut even_terms = 1;
    let mut odd_terms = 0;
    let mut prev_abs = term.abs();
    let mut converged = false;
    for r in 1..policy.max_terms {
        term *= ratio_num / (1.0 + nf * r as f64);
        if r % 2 == 0 {
            even_sum.add(term);
            even_abs += term.abs();
            even_terms += 1;
        } else {
            odd_sum.add(term);
            odd_abs += term.abs();
            odd_terms += 1;
        }
        let scale = even_sum.value().abs() + odd_sum.value().abs();
        let threshold = policy.abs_tol.max(policy.rel_tol * scale);
        if term.abs() < threshold && term.abs() < prev_abs {
            converged = true;
            break;
        }
        prev_abs = term.abs();
    }
    let g = even_sum.value();
    let f = odd_sum.value();
    Ok(SplitEval {
        even: SeriesEval {
            value: g,
            terms_used: even_terms,
            converged,
            cancellation_index: cancellation(even_abs, g),
        },
        odd: SeriesEval {
            value: f,
            terms_used: odd_terms,
            converged,
            cancellation_index: cancellation(odd_abs, f),
        },
    })
}

/// Check the odd-n reflection law F_s(−x) = −F_{−s}(x).
///
/// For odd n the substitution t → −t maps e^(st^n) to e^(−st^n), so the
/// antiderivative of one family at −x equals minus the antiderivative of
/// the other family at x. Even n has no such law (each family is already
/// odd in x), so even n is rejected as a domain error.
pub fn odd_reflection(
    x: f64,
    n: u32,
    sign: Sign,
    policy: &TruncationPolicy,
) -> Result<ReflectionCheck, Error> {
    if n % 2 == 0 {
        return Err(Error::Domain(format!(
            "reflection law relates the two families only for odd n, got n = {n}"
        )));
    }
    let at_minus = antiderivative(-x, n, sign, policy)?;
    let other = antiderivative(x, n, sign.flip(), policy)?;
    let reflected = -other.value;
    let defect = (at_minus.value - reflected).abs();
    // Each evaluation is only promised to its own truncation threshold, and
    // cancellation inflates that by the digits already lost; the law can
    // only be verified to the combined width.
    let per_eval = |e: &SeriesEval| {
        policy
            .abs_tol
            .max(policy.rel_tol * e.value.abs())
            .max(f64::EPSILON * e.value.abs() * e.cancellation_index)
    };
    let tolerance = 10.0 * (per_eval(&at_minus) + per_eval(&other));
    Ok(ReflectionCheck {
        value_at_minus_x: at_minus.value,
        reflected_value: reflected,
        defect,
        tolerance,
        within_tolerance: defect <= tolerance,
    })
}

/// Which infinite endpoints carry finite limits for the antiderivative of
/// e^(sign·x^n).
pub fn convergence_domain(n: u32, sign: Sign) -> Result<ConvergenceDomain, Error> {
    if n == 0 {
        return Err(Error::Domain("power index n must be at least 1".into()));
    }
    let even = n % 2 == 0;
    let domain = match (sign, even) {
        // e^(x^n), even n: grows at both infinities.
        (Sign::Pos, true) => ConvergenceDomain {
            lower: DomainEdge::FiniteOnly,
            upper: DomainEdge::FiniteOnly,
        },
        // e^(x^n), odd n: decays toward −∞, grows toward +∞.
        (Sign::Pos, false) => ConvergenceDomain {
            lower: DomainEdge::Closed,
            upper: DomainEdge::FiniteOnly,
        },
        // e^(−x^n), even n: decays at both infinities.
        (Sign::Neg, true) => ConvergenceDomain { lower: DomainEdge::Closed, upper: DomainEdge::Closed },
        // e^(−x^n), odd n: grows toward −∞, decays toward +∞.
        (Sign::Neg, false) => ConvergenceDomain {
            lower: DomainEdge::FiniteOnly,
            upper: DomainEdge::Closed,
        },
    };
    Ok(domain)
}

/// The finite limit of the antiderivative at an infinite endpoint, when the
/// convergence domain includes it: ±Γ(1+1/n), from ∫₀^∞ e^(−t^n) dt =
/// Γ(1+1/n).
fn tail_value(endpoint: f64, n: u32, sign: Sign) -> Result<f64, Error> {
    let domain = convergence_domain(n, sign)?;
    let edge = if endpoint > 0.0 { domain.upper } else { domain.lower };
    if edge != DomainEdge::Closed {
        return Err(Error::DivergentIntegral(format!(
            "the integral of e^({}x^{n}) diverges at {}: improper endpoints converge only on {domain}",
            match sign {
                Sign::Pos => "+",
                Sign::Neg => "-",
            },
            if endpoint > 0.0 { "+inf" } else { "-inf" }
        )));
    }
    let gamma_tail = quad::gamma(1.0 + 1.0 / f64::from(n))?;
    Ok(gamma_tail.copysign(endpoint))
}

/// ∫_a^b e^(sign·x^n) dx = F(b) − F(a), where either endpoint may be ±∞.
///
/// Infinite endpoints never touch the series: they use the exact limit
/// ±Γ(1+1/n) when the convergence domain closes that side, and report
/// [`Error::DivergentIntegral`] when it does not. Finite endpoints go
/// through [`antiderivative`]; the returned metadata aggregates both sides
/// (total terms, joint convergence, worst cancellation).
pub fn definite_integral(
    a: f64,
    b: f64,
    n: u32,
    sign: Sign,
    policy: &TruncationPolicy,
) -> Result<SeriesEval, Error> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::Domain("integration bounds must not be NaN".into()));
    }
    if a > b {
        return Err(Error::Domain(format!("integration bounds out of order: a = {a} > b = {b}")));
    }
    let endpoint = |e: f64| -> Result<SeriesEval, Error> {
        if e.is_finite() {
            antiderivative(e, n, sign, policy)
        } else {
            Ok(SeriesEval {
                value: tail_value(e, n, sign)?,
                terms_used: 0,
                converged: true,
                cancellation_index: 1.0,
            })
        }
    };
    let upper = endpoint(b)?;
    let lower = endpoint(a)?;
    Ok(SeriesEval {
        value: upper.value - lower.value,
        terms_used: upper.terms_used + lower.terms_used,
        converged: upper.converged && lower.converged,
        cancellation_index: upper.cancellation_index.max(lower.cancellation_index),
    })
}

fn big_factorial(m: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=m {
        acc *= k;
    }
    acc
}

/// Rising denominator product Π_{p=0}^{j} (1+pn) as an exact integer.
fn bracket_denominator(j: u32, n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for p in 0..=j {
        acc *= 1 + i64::from(p) * i64::from(n);
    }
    acc
}

/// Exact rational comparison of the Maclaurin coefficient of x^(nm+1) with
/// the coefficient the product form assembles for the same power.
pub fn coefficient_identity(m: u32, n: u32) -> Result<CoefficientIdentity, Error> {
    if n == 0 {
        return Err(Error::Domain("power index n must be at least 1".into()));
    }
    let direct = BigRational::new(
        BigInt::one(),
        big_factorial(m) * (BigInt::from(n) * m + 1),
    );

    let mut accum = BigRational::zero();
    for r in 0..=m {
        let j = m - r;
        let num = BigInt::from(n).pow(j);
        let den = big_factorial(r) * bracket_denominator(j, n);
        let term = BigRational::new(num, den);
        if r % 2 == 0 {
            accum += term;
        } else {
            accum -= term;
        }
    }
    let bracket = if m % 2 == 0 { accum } else { -accum };
    Ok(CoefficientIdentity { direct, bracket })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    /// Truncation pushed to the rounding floor, for tests that pin values
    /// to close to machine precision.
    fn tight() -> TruncationPolicy {
        TruncationPolicy { max_terms: 200, rel_tol: 1e-15, abs_tol: 1e-18 }
    }

    // Reference values computed independently at 20 significant digits.
    const BRACKET_NEG_1_2: f64 = 2.030_078_469_278_705; // B₋(1; n=2)
    const BRACKET_POS_1_2: f64 = 0.538_079_506_912_768_4; // B₊(1; n=2)
    const ERF_LIKE_1: f64 = 0.746_824_132_812_427; // ∫₀¹ e^(−t²) dt
    const GROWING_1: f64 = 1.462_651_745_907_181_6; // ∫₀¹ e^(t²) dt
    const QUARTIC_HALF: f64 = 0.506_360_090_838_836_9; // ∫₀^½ e^(t⁴) dt

    #[test]
    fn bracket_reference_values() {
        let neg = bracket_series(1.0, 2, Sign::Neg, &tight()).unwrap();
        assert!(neg.converged);
        assert!((neg.value - BRACKET_NEG_1_2).abs() <= 1e-14);
        assert!((neg.cancellation_index - 1.0).abs() <= 1e-12);

        let pos = bracket_series(1.0, 2, Sign::Pos, &tight()).unwrap();
        assert!(pos.converged);
        assert!((pos.value - BRACKET_POS_1_2).abs() <= 1e-14);
        assert!(pos.cancellation_index > 1.0);
    }

    #[test]
    fn default_policy_meets_its_own_tolerance() {
        let neg = bracket_series(1.0, 2, Sign::Neg, &policy()).unwrap();
        assert!(neg.converged);
        assert!((neg.value - BRACKET_NEG_1_2).abs() <= 1e-11);
    }

    #[test]
    fn product_form_reference_values() {
        let neg = antiderivative(1.0, 2, Sign::Neg, &tight()).unwrap();
        assert!((neg.value - ERF_LIKE_1).abs() <= 1e-14);

        let pos = antiderivative(1.0, 2, Sign::Pos, &tight()).unwrap();
        assert!((pos.value - GROWING_1).abs() <= 1e-14);

        let quartic = antiderivative(0.5, 4, Sign::Pos, &tight()).unwrap();
        assert!((quartic.value - QUARTIC_HALF).abs() <= 1e-14);
    }

    #[test]
    fn maclaurin_matches_reference_values() {
        let neg = maclaurin_antiderivative(1.0, 2, Sign::Neg, &tight()).unwrap();
        assert!((neg.value - ERF_LIKE_1).abs() <= 1e-13);

        let pos = maclaurin_antiderivative(1.0, 2, Sign::Pos, &tight()).unwrap();
        assert!((pos.value - GROWING_1).abs() <= 1e-13);
    }

    #[test]
    fn zero_argument_short_circuits() {
        for sign in [Sign::Pos, Sign::Neg] {
            for eval in [
                bracket_series(0.0, 3, sign, &policy()).unwrap(),
                antiderivative(0.0, 3, sign, &policy()).unwrap(),
                maclaurin_antiderivative(0.0, 3, sign, &policy()).unwrap(),
            ] {
                assert_eq!(eval.value, 0.0);
                assert_eq!(eval.terms_used, 1);
                assert!(eval.converged);
                assert_eq!(eval.cancellation_index, 1.0);
            }
        }
    }

    #[test]
    fn n_equals_one_is_the_exponential() {
        let x = 0.85_f64;
        let pos = antiderivative(x, 1, Sign::Pos, &tight()).unwrap();
        assert!((pos.value - (x.exp() - 1.0)).abs() <= 1e-14);
        let neg = antiderivative(x, 1, Sign::Neg, &tight()).unwrap();
        assert!((neg.value - (1.0 - (-x).exp())).abs() <= 1e-14);
    }

    #[test]
    fn odd_functions_for_even_n() {
        let plus = antiderivative(1.2, 4, Sign::Neg, &policy()).unwrap();
        let minus = antiderivative(-1.2, 4, Sign::Neg, &policy()).unwrap();
        assert!((plus.value + minus.value).abs() <= 1e-15);
    }

    #[test]
    fn growing_side_overflows_beyond_working_range() {
        match antiderivative(2.0, 6, Sign::Pos, &policy()) {
            Err(Error::Overflow { exponent }) => assert_eq!(exponent, 64.0),
            other => panic!("expected overflow, got {other:?}"),
        }
        // e^(−x^n) grows toward −∞ for odd n.
        match antiderivative(-2.0, 7, Sign::Neg, &policy()) {
            Err(Error::Overflow { exponent }) => assert_eq!(exponent, 128.0),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn deep_decay_uses_log_space_branch() {
        // x^6 = 64 > 45 forces the log-space branch; the result should be
        // within one part in 10^12 of Γ(7/6) because the remaining tail
        // beyond x = 2 is ~e^(−64).
        let eval = antiderivative(2.0, 6, Sign::Neg, &policy()).unwrap();
        let expect = quad::gamma(1.0 + 1.0 / 6.0).unwrap();
        assert!(eval.converged);
        assert_eq!(eval.cancellation_index, 1.0);
        assert!((eval.value - expect).abs() / expect <= 1e-12);

        // Oddness must survive the branch switch.
        let mirrored = antiderivative(-2.0, 6, Sign::Neg, &policy()).unwrap();
        assert_eq!(mirrored.value, -eval.value);

        // Odd n, growing family, far negative argument: same branch through
        // the reflection law, limit −Γ(1+1/3) + e^(−64)-sized tail.
        let odd = antiderivative(-4.0, 3, Sign::Pos, &policy()).unwrap();
        let limit = -quad::gamma(1.0 + 1.0 / 3.0).unwrap();
        assert!((odd.value - limit).abs() <= 1e-12);
    }

    #[test]
    fn split_recombines_into_both_brackets() {
        let x = 1.1;
        let n = 3;
        let split = even_odd_split(x, n, &tight()).unwrap();
        let bp = bracket_series(x, n, Sign::Pos, &tight()).unwrap();
        let bn = bracket_series(x, n, Sign::Neg, &tight()).unwrap();
        assert!((split.even.value - split.odd.value - bp.value).abs() <= 1e-13);
        assert!((split.even.value + split.odd.value - bn.value).abs() <= 1e-13);
    }

    #[test]
    fn split_at_n_one_gives_hyperbolic_pair() {
        let x = 0.7_f64;
        let split = even_odd_split(x, 1, &tight()).unwrap();
        assert!((split.even.value - x.sinh()).abs() <= 4e-15);
        assert!((split.odd.value - (x.cosh() - 1.0)).abs() <= 4e-15);
    }

    #[test]
    fn reflection_law_holds_for_odd_n() {
        for n in [1, 3, 5] {
            for sign in [Sign::Pos, Sign::Neg] {
                let check = odd_reflection(0.9, n, sign, &policy()).unwrap();
                assert!(
                    check.within_tolerance,
                    "reflection defect {} over tolerance {} at n={n} {sign}",
                    check.defect, check.tolerance
                );
                assert!(check.defect <= 1e-9);
            }
        }
    }

    #[test]
    fn reflection_rejects_even_n() {
        assert!(matches!(odd_reflection(0.5, 2, Sign::Neg, &policy()), Err(Error::Domain(_))));
    }

    #[test]
    fn convergence_domain_table() {
        use DomainEdge::*;
        let d = |n, s| convergence_domain(n, s).unwrap();
        assert_eq!(d(2, Sign::Pos), ConvergenceDomain { lower: FiniteOnly, upper: FiniteOnly });
        assert_eq!(d(3, Sign::Pos), ConvergenceDomain { lower: Closed, upper: FiniteOnly });
        assert_eq!(d(2, Sign::Neg), ConvergenceDomain { lower: Closed, upper: Closed });
        assert_eq!(d(3, Sign::Neg), ConvergenceDomain { lower: FiniteOnly, upper: Closed });

        assert_eq!(d(4, Sign::Pos).to_string(), "(-inf, inf)");
        assert_eq!(d(5, Sign::Pos).to_string(), "[-inf, inf)");
        assert_eq!(d(4, Sign::Neg).to_string(), "[-inf, inf]");
        assert_eq!(d(5, Sign::Neg).to_string(), "(-inf, inf]");
    }

    #[test]
    fn definite_integral_gaussian_tail() {
        const SQRT_PI: f64 = 1.772_453_850_905_516;
        let q = definite_integral(0.0, f64::INFINITY, 2, Sign::Neg, &policy()).unwrap();
        assert!((q.value - 0.5 * SQRT_PI).abs() <= 1e-14);
        assert!(q.converged);

        let whole = definite_integral(f64::NEG_INFINITY, f64::INFINITY, 4, Sign::Neg, &policy())
            .unwrap();
        // 2Γ(5/4), independently computed.
        assert!((whole.value - 1.812_804_954_110_954_2).abs() <= 1e-14);

        let upper_only = definite_integral(0.0, f64::INFINITY, 4, Sign::Neg, &policy()).unwrap();
        assert!((upper_only.value - 0.906_402_477_055_477_1).abs() <= 1e-14);
    }

    #[test]
    fn definite_integral_rejects_divergent_tails() {
        assert!(matches!(
            definite_integral(0.0, f64::INFINITY, 2, Sign::Pos, &policy()),
            Err(Error::DivergentIntegral(_))
        ));
        assert!(matches!(
            definite_integral(f64::NEG_INFINITY, 0.0, 3, Sign::Neg, &policy()),
            Err(Error::DivergentIntegral(_))
        ));
    }

    #[test]
    fn definite_integral_odd_n_closed_lower_tail() {
        let q = definite_integral(f64::NEG_INFINITY, 0.0, 3, Sign::Pos, &policy()).unwrap();
        let expect = quad::gamma(1.0 + 1.0 / 3.0).unwrap();
        assert!((q.value - expect).abs() <= 1e-14);
    }

    #[test]
    fn definite_integral_rejects_reversed_bounds() {
        assert!(matches!(
            definite_integral(1.0, 0.0, 2, Sign::Neg, &policy()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn invalid_arguments_are_domain_errors() {
        assert!(matches!(bracket_series(1.0, 0, Sign::Pos, &policy()), Err(Error::Domain(_))));
        assert!(matches!(
            antiderivative(f64::NAN, 2, Sign::Pos, &policy()),
            Err(Error::Domain(_))
        ));
        let bad = TruncationPolicy { max_terms: 0, ..TruncationPolicy::default() };
        assert!(matches!(antiderivative(1.0, 2, Sign::Pos, &bad), Err(Error::Domain(_))));
    }

    #[test]
    fn nonconvergence_is_reported_not_errored() {
        let tight = TruncationPolicy { max_terms: 4, rel_tol: 1e-14, abs_tol: 1e-18 };
        let eval = antiderivative(1.4, 2, Sign::Neg, &tight).unwrap();
        assert!(!eval.converged);
        assert_eq!(eval.terms_used, 4);
    }

    #[test]
    fn coefficient_identity_small_cases() {
        for n in 1..=4 {
            for m in 0..=6 {
                let id = coefficient_identity(m, n).unwrap();
                assert!(id.holds(), "coefficient identity failed at m={m}, n={n}");
            }
        }
    }

    #[test]
    fn coefficient_identity_rejects_n_zero() {
        assert!(matches!(coefficient_identity(3, 0), Err(Error::Domain(_))));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    proptest! {
        // g − f and g + f must recombine into the two signed brackets to
        // within the cancellation-aware width of the evaluations.
        #[test]
        fn split_recombination(x in -1.6f64..1.6, n in 1u32..6) {
            let split = even_odd_split(x, n, &policy()).unwrap();
            let bp = bracket_series(x, n, Sign::Pos, &policy()).unwrap();
            let bn = bracket_series(x, n, Sign::Neg, &policy()).unwrap();
            let scale = split.even.value.abs() + split.odd.value.abs() + 1.0;
            prop_assert!(((split.even.value - split.odd.value) - bp.value).abs() <= 1e-12 * scale);
            prop_assert!(((split.even.value + split.odd.value) - bn.value).abs() <= 1e-12 * scale);
        }

        // The antiderivative must be odd for even n and the brackets odd in
        // the joint flip (x, sign) → (−x, −sign) for odd n.
        #[test]
        fn parity_structure(x in 0.01f64..1.5, n in 1u32..7, neg in any::<bool>()) {
            let sign = if neg { Sign::Neg } else { Sign::Pos };
            if n % 2 == 0 {
                let a = antiderivative(x, n, sign, &policy()).unwrap();
                let b = antiderivative(-x, n, sign, &policy()).unwrap();
                prop_assert!((a.value + b.value).abs() <= 1e-13 * (a.value.abs() + 1.0));
            } else {
                let a = antiderivative(x, n, sign, &policy()).unwrap();
                let b = antiderivative(-x, n, sign.flip(), &policy()).unwrap();
                prop_assert!((a.value + b.value).abs() <= 1e-11 * (a.value.abs() + 1.0));
            }
        }

        // Cancellation index is always ≥ 1 and exactly 1 for the
        // positive-term bracket at positive arguments.
        #[test]
        fn cancellation_index_floor(x in 0.01f64..2.0, n in 1u32..6) {
            let neg = bracket_series(x, n, Sign::Neg, &policy()).unwrap();
            prop_assert!(neg.cancellation_index >= 1.0);
            prop_assert!((neg.cancellation_index - 1.0).abs() <= 1e-12);
            let pos = bracket_series(x, n, Sign::Pos, &policy()).unwrap();
            prop_assert!(pos.cancellation_index >= 1.0);
        }

        // Exact rational identity between the two coefficient systems on a
        // sampled window beyond the exhaustive unit-test range.
        #[test]
        fn coefficient_identity_sampled(m in 0u32..16, n in 1u32..12) {
            prop_assert!(coefficient_identity(m, n).unwrap().holds());
        }
    }
}
