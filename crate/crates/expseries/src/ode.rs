//! The two halves of the bracket series as solutions of forced
//! second-order equations.
//!
//! Splitting the unsigned bracket series into even-r and odd-r halves gives
//! the pair
//!
//! ```text
//! g(x) = Σ_{r even} n^r x^(1+nr) / Π_{p=0}^r (1+pn)     (leading term x)
//! f(x) = Σ_{r odd}  n^r x^(1+nr) / Π_{p=0}^r (1+pn)
//! ```
//!
//! which is closed under differentiation:
//!
//! ```text
//! g'(x) = n·x^(n−1)·f(x) + 1,      f'(x) = n·x^(n−1)·g(x).
//! ```
//!
//! Eliminating one of the pair shows each half solves the linear operator
//! L[y] = y'' − ((n−1)/x)·y' − n²x^(2n−2)·y with its own forcing:
//!
//! ```text
//! L[f] = n·x^(n−1)          (the power-forced equation,      selector 13)
//! L[g] = −(n−1)/x           (the reciprocal-forced equation, selector 14)
//! ```
//!
//! and the homogeneous solutions of L are exactly e^(x^n) and e^(−x^n), so
//! y = k₁·e^(x^n) + k₂·e^(−x^n) + (matched half) solves the same forced
//! equation for every (k₁, k₂). [`pairing_audit`] verifies numerically that
//! the halves belong to the forcings exactly this way around and not the
//! other.
//!
//! At n = 1 the pair degenerates to g = sinh x, f = cosh x − 1 and the
//! operator to y'' − y.

use crate::error::Error;
use crate::series::{Sign, TruncationPolicy};

/// Which half of the bracket series: `Even` is g (leading term x), `Odd`
/// is f (leading term n·x^(1+n)/(1+n)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesHalf {
    Even,
    Odd,
}

impl SeriesHalf {
    /// Conventional single-letter name: g for the even half, f for the odd.
    pub fn letter(self) -> char {
        match self {
            SeriesHalf::Even => 'g',
            SeriesHalf::Odd => 'f',
        }
    }
}

/// The two forced equations sharing the operator
/// L[y] = y'' − ((n−1)/x)·y' − n²·x^(2n−2)·y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OdeEquation {
    /// L[y] = n·x^(n−1); numeric selector 13.
    PowerForcing,
    /// L[y] = −(n−1)/x; numeric selector 14.
    ReciprocalForcing,
}

impl OdeEquation {
    /// The numeric selector used on the command line (`--eq 13|14`).
    pub fn selector(self) -> u32 {
        match self {
            OdeEquation::PowerForcing => 13,
            OdeEquation::ReciprocalForcing => 14,
        }
    }

    /// Parse the numeric selector.
    pub fn from_selector(token: u32) -> Result<Self, Error> {
        match token {
            13 => Ok(OdeEquation::PowerForcing),
            14 => Ok(OdeEquation::ReciprocalForcing),
            other => Err(Error::Domain(format!(
                "equation selector must be 13 or 14, got {other}"
            ))),
        }
    }

    /// The right-hand side at x.
    pub fn forcing(self, x: f64, n: u32) -> f64 {
        let nf = f64::from(n);
        match self {
            OdeEquation::PowerForcing => nf * x.powi(n as i32 - 1),
            OdeEquation::ReciprocalForcing => -(nf - 1.0) / x,
        }
    }

    /// The half that actually solves this equation (f for the power
    /// forcing, g for the reciprocal forcing).
    pub fn matched_half(self) -> SeriesHalf {
        match self {
            OdeEquation::PowerForcing => SeriesHalf::Odd,
            OdeEquation::ReciprocalForcing => SeriesHalf::Even,
        }
    }
}

/// One half of the series with its first two derivatives, all summed
/// term-wise from the same coefficient stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfEval {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    /// Terms accumulated into this half (the other parity is skipped).
    pub terms_used: usize,
    pub converged: bool,
}

/// A candidate solution y = k1·e^(x^n) + k2·e^(−x^n) + particular half.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionSpec {
    pub k1: f64,
    pub k2: f64,
    pub particular: Option<SeriesHalf>,
}

impl SolutionSpec {
    /// Just the matched particular solution, no homogeneous admixture.
    pub fn particular_only(half: SeriesHalf) -> Self {
        SolutionSpec { k1: 0.0, k2: 0.0, particular: Some(half) }
    }
}

/// Defect of a candidate solution at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// L[y] − forcing, signed.
    pub residual: f64,
    /// The assembled y(x).
    pub value: f64,
    /// Terms consumed by the particular half (0 if none).
    pub terms_used: usize,
    pub converged: bool,
}

/// Defects of the two first-order coupling relations at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledDefects {
    /// |g'(x) − n·x^(n−1)·f(x) − 1|.
    pub defect_a: f64,
    /// |f'(x) − n·x^(n−1)·g(x)|.
    pub defect_b: f64,
}

/// Cross-check that each half belongs to its own forcing: maxima of
/// |L[half] − forcing| over an interior grid for all four combinations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingAudit {
    pub n: u32,
    /// f against the power forcing — matched, should be ≈ 0.
    pub odd_with_power: f64,
    /// g against the reciprocal forcing — matched, should be ≈ 0.
    pub even_with_reciprocal: f64,
    /// f against the reciprocal forcing — mismatched, stays O(1).
    pub odd_with_reciprocal: f64,
    /// g against the power forcing — mismatched, stays O(1).
    pub even_with_power: f64,
    /// True when the matched residuals vanish and the mismatched ones
    /// clearly do not.
    pub consistent: bool,
}

/// Evaluate one half of the series together with its first two
/// derivatives.
///
/// Terms are differentiated exactly: a term c·x^(1+nr) contributes
/// c·(1+nr)·x^(nr) and c·(1+nr)·nr·x^(nr−1) to the derivative sums. The
/// truncation rule watches the largest of the three scaled term sizes so
/// all three sums are converged together.
pub fn particular_eval(
    half: SeriesHalf,
    x: f64,
    n: u32,
    policy: &TruncationPolicy,
) -> Result<HalfEval, Error> {
    if n == 0 {
        return Err(Error::Domain("power index n must be at least 1".into()));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("argument must be finite, got {x}")));
    }
    if x == 0.0 {
        // Exact limits of the truncated sums: g = x + O(x^(1+2n)) and
        // f = n·x^(1+n)/(1+n) + … give
        //   g(0) = 0, g'(0) = 1, g''(0) = 0
        //   f(0) = 0, f'(0) = 0, f''(0) = 1 at n = 1, else 0.
        let eval = match half {
            SeriesHalf::Even => HalfEval { value: 0.0, d1: 1.0, d2: 0.0, terms_used: 1, converged: true },
            SeriesHalf::Odd => HalfEval {
                value: 0.0,
                d1: 0.0,
                d2: if n == 1 { 1.0 } else { 0.0 },
                terms_used: 1,
                converged: true,
            },
        };
        return Ok(eval);
    }
    let nf = f64::from(n);
    let ratio_num = nf * x.powi(n as i32);
    let mut term = x; // r = 0 term of the full series
    let mut value = 0.0;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    let mut terms_used = 0usize;
    let own_parity = match half {
        SeriesHalf::Even => 0,
        SeriesHalf::Odd => 1,
    };
    let mut prev_size = f64::INFINITY;
    let mut converged = false;
    for r in 0..policy.max_terms {
        if r > 0 {
            term *= ratio_num / (1.0 + nf * r as f64);
        }
        let power = 1.0 + nf * r as f64;
        let t1 = term * power / x;
        let t2 = t1 * (power - 1.0) / x;
        if r % 2 == own_parity {
            value += term;
            d1 += t1;
            d2 += t2;
            terms_used += 1;
        }
        let size = term.abs().max(t1.abs()).max(t2.abs());
        let scale = value.abs().max(d1.abs()).max(d2.abs());
        let threshold = policy.abs_tol.max(policy.rel_tol * scale);
        if r >= 1 && size < threshold && size < prev_size {
            converged = true;
            break;
        }
        prev_size = size;
    }
    Ok(HalfEval { value, d1, d2, terms_used, converged })
}

fn validate_point(x: f64) -> Result<(), Error> {
    if !x.is_finite() || x == 0.0 {
        return Err(Error::Domain(format!(
            "the operator has a 1/x coefficient; x must be finite and nonzero, got {x}"
        )));
    }
    Ok(())
}

/// L[y] − forcing at x for the assembled candidate
/// y = k1·e^(x^n) + k2·e^(−x^n) + particular.
///
/// The homogeneous parts are annihilated analytically by L, so their
/// contribution to the residual is pure rounding; the particular half is
/// summed term-wise to the policy's truncation.
pub fn residual(
    eq: OdeEquation,
    spec: &SolutionSpec,
    x: f64,
    n: u32,
    policy: &TruncationPolicy,
) -> Result<ResidualReport, Error> {
    validate_point(x)?;
    if n == 0 {
        return Err(Error::Domain("power index n must be at least 1".into()));
    }
    let nf = f64::from(n);
    let ni = n as i32;
    let xn = x.powi(ni);
    let dxn = nf * x.powi(ni - 1); // (x^n)'
    let d2xn = nf * (nf - 1.0) * x.powi(ni - 2); // (x^n)''

    let (mut y, mut y1, mut y2) = (0.0, 0.0, 0.0);
    if spec.k1 != 0.0 {
        let h = spec.k1 * xn.exp();
        y += h;
        y1 += dxn * h;
        y2 += (d2xn + dxn * dxn) * h;
    }
    if spec.k2 != 0.0 {
        let h = spec.k2 * (-xn).exp();
        y += h;
        y1 += -dxn * h;
        y2 += (-d2xn + dxn * dxn) * h;
    }
    let (terms_used, converged) = match spec.particular {
        Some(half) => {
            let p = particular_eval(half, x, n, policy)?;
            y += p.value;
            y1 += p.d1;
            y2 += p.d2;
            (p.terms_used, p.converged)
        }
        None => (0, true),
    };
    let lhs = y2 - (nf - 1.0) / x * y1 - nf * nf * x.powi(2 * ni - 2) * y;
    Ok(ResidualReport { residual: lhs - eq.forcing(x, n), value: y, terms_used, converged })
}

/// Largest |residual| over an inclusive linear grid on [from, to].
///
/// The grid must avoid x = 0, where the 1/x coefficient of the operator is
/// singular; a grid that contains or straddles zero is rejected with
/// [`Error::GridContainsZero`].
pub fn residual_max_on_grid(
    eq: OdeEquation,
    spec: &SolutionSpec,
    from: f64,
    to: f64,
    points: usize,
    n: u32,
    policy: &TruncationPolicy,
) -> Result<f64, Error> {
    if points < 2 {
        return Err(Error::Domain(format!("grid needs at least 2 points, got {points}")));
    }
    if !from.is_finite() || !to.is_finite() || from >= to {
        return Err(Error::Domain(format!(
            "grid bounds must be finite with from < to, got [{from}, {to}]"
        )));
    }
    if from <= 0.0 && to >= 0.0 {
        return Err(Error::GridContainsZero);
    }
    let mut worst = 0.0f64;
    for i in 0..points {
        let x = from + (to - from) * (i as f64) / ((points - 1) as f64);
        let r = residual(eq, spec, x, n, policy)?;
        worst = worst.max(r.residual.abs());
    }
    Ok(worst)
}

/// Defects of g' = n·x^(n−1)·f + 1 and f' = n·x^(n−1)·g at x.
pub fn coupled_relations(x: f64, n: u32, policy: &TruncationPolicy) -> Result<CoupledDefects, Error> {
    validate_point(x)?;
    let g = particular_eval(SeriesHalf::Even, x, n, policy)?;
    let f = particular_eval(SeriesHalf::Odd, x, n, policy)?;
    let drive = f64::from(n) * x.powi(n as i32 - 1);
    Ok(CoupledDefects {
        defect_a: (g.d1 - drive * f.value - 1.0).abs(),
        defect_b: (f.d1 - drive * g.value).abs(),
    })
}

/// Defect of the product-form derivative identity, written in the halves.
///
/// Differentiating F± = e^(±x^n)·B± against F±' = e^(±x^n) reduces to
///
/// ```text
/// Pos:  (g' − f') + n·x^(n−1)·(g − f) = 1
/// Neg:  (f' + g') − n·x^(n−1)·(f + g) = 1
/// ```
///
/// and the returned value is the absolute deviation from 1.
pub fn decomposition_defect(
    x: f64,
    n: u32,
    sign: Sign,
    policy: &TruncationPolicy,
) -> Result<f64, Error> {
    validate_point(x)?;
    let g = particular_eval(SeriesHalf::Even, x, n, policy)?;
    let f = particular_eval(SeriesHalf::Odd, x, n, policy)?;
    let drive = f64::from(n) * x.powi(n as i32 - 1);
    let combined = match sign {
        Sign::Pos => (g.d1 - f.d1) + drive * (g.value - f.value),
        Sign::Neg => (f.d1 + g.d1) - drive * (f.value + g.value),
    };
    Ok((combined - 1.0).abs())
}

/// Evaluate all four half/forcing combinations over an interior grid and
/// report whether the residuals identify the expected pairing (f with the
/// power forcing, g with the reciprocal forcing).
pub fn pairing_audit(n: u32, policy: &TruncationPolicy) -> Result<PairingAudit, Error> {
    let max_over = |eq: OdeEquation, half: SeriesHalf| -> Result<f64, Error> {
        residual_max_on_grid(eq, &SolutionSpec::particular_only(half), 0.3, 1.0, 8, n, policy)
    };
    let odd_with_power = max_over(OdeEquation::PowerForcing, SeriesHalf::Odd)?;
    let even_with_reciprocal = max_over(OdeEquation::ReciprocalForcing, SeriesHalf::Even)?;
    let odd_with_reciprocal = max_over(OdeEquation::ReciprocalForcing, SeriesHalf::Odd)?;
    let even_with_power = max_over(OdeEquation::PowerForcing, SeriesHalf::Even)?;
    // The mismatched residual is |power forcing − reciprocal forcing|,
    // which on [0.3, 1] is bounded below by n·0.3^(n−1) ≥ 0.3^5·6 ≈ 0.015
    // for the orders in range; 1e−2 … 1e−8 leaves six orders of separation.
    let consistent = odd_with_power <= 1e-8
        && even_with_reciprocal <= 1e-8
        && odd_with_reciprocal >= 1e-2
        && even_with_power >= 1e-2;
    Ok(PairingAudit {
        n,
        odd_with_power,
        even_with_reciprocal,
        odd_with_reciprocal,
        even_with_power,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    /// Exactly `terms` full-series terms: tolerances too small to trigger.
    fn fixed_terms(terms: usize) -> TruncationPolicy {
        TruncationPolicy { max_terms: terms, rel_tol: 1e-300, abs_tol: 1e-300 }
    }

    // g(1; n=2) and f(1; n=2), independently computed to 20 digits.
    const G_1_2: f64 = 1.284_078_988_095_736_7;
    const F_1_2: f64 = 0.745_999_481_182_968_3;

    #[test]
    fn closed_forms_at_the_origin() {
        let g = particular_eval(SeriesHalf::Even, 0.0, 2, &policy()).unwrap();
        assert_eq!((g.value, g.d1, g.d2), (0.0, 1.0, 0.0));

        let f = particular_eval(SeriesHalf::Odd, 0.0, 2, &policy()).unwrap();
        assert_eq!((f.value, f.d1, f.d2), (0.0, 0.0, 0.0));

        // n = 1 is the only order whose odd half curves at the origin.
        let f1 = particular_eval(SeriesHalf::Odd, 0.0, 1, &policy()).unwrap();
        assert_eq!((f1.value, f1.d1, f1.d2), (0.0, 0.0, 1.0));
    }

    #[test]
    fn reference_values_at_one() {
        let g = particular_eval(SeriesHalf::Even, 1.0, 2, &policy()).unwrap();
        assert!(g.converged);
        assert!((g.value - G_1_2).abs() <= 1e-12);

        let f = particular_eval(SeriesHalf::Odd, 1.0, 2, &policy()).unwrap();
        assert!(f.converged);
        assert!((f.value - F_1_2).abs() <= 1e-12);
    }

    #[test]
    fn n_one_is_the_hyperbolic_pair() {
        let x = 0.9_f64;
        let g = particular_eval(SeriesHalf::Even, x, 1, &policy()).unwrap();
        assert!((g.value - x.sinh()).abs() <= 1e-13);
        assert!((g.d1 - x.cosh()).abs() <= 1e-13);
        assert!((g.d2 - x.sinh()).abs() <= 1e-13);

        let f = particular_eval(SeriesHalf::Odd, x, 1, &policy()).unwrap();
        assert!((f.value - (x.cosh() - 1.0)).abs() <= 1e-13);
        assert!((f.d1 - x.sinh()).abs() <= 1e-13);
        assert!((f.d2 - x.cosh()).abs() <= 1e-13);
    }

    #[test]
    fn matched_residuals_vanish() {
        for &n in &[1u32, 2, 3, 4, 6] {
            for &x in &[0.1, 0.55, 1.2] {
                let f_spec = SolutionSpec::particular_only(SeriesHalf::Odd);
                let r = residual(OdeEquation::PowerForcing, &f_spec, x, n, &fixed_terms(40))
                    .unwrap();
                assert!(
                    r.residual.abs() <= 1e-10,
                    "power-forced residual {} at x={x}, n={n}",
                    r.residual
                );

                let g_spec = SolutionSpec::particular_only(SeriesHalf::Even);
                let r = residual(OdeEquation::ReciprocalForcing, &g_spec, x, n, &fixed_terms(40))
                    .unwrap();
                assert!(
                    r.residual.abs() <= 1e-10,
                    "reciprocal-forced residual {} at x={x}, n={n}",
                    r.residual
                );
            }
        }
    }

    #[test]
    fn homogeneous_admixture_keeps_residual_small() {
        for &(k1, k2) in &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (2.0, -3.0)] {
            let spec = SolutionSpec { k1, k2, particular: Some(SeriesHalf::Odd) };
            let worst = residual_max_on_grid(
                OdeEquation::PowerForcing,
                &spec,
                0.1,
                1.2,
                12,
                3,
                &fixed_terms(40),
            )
            .unwrap();
            assert!(worst <= 1e-8, "residual {worst} with (k1, k2) = ({k1}, {k2})");
        }
    }

    #[test]
    fn superposition_changes_residual_only_at_rounding_level() {
        let x = 0.8;
        let n = 2;
        let bare = residual(
            OdeEquation::ReciprocalForcing,
            &SolutionSpec::particular_only(SeriesHalf::Even),
            x,
            n,
            &fixed_terms(40),
        )
        .unwrap();
        let mixed = residual(
            OdeEquation::ReciprocalForcing,
            &SolutionSpec { k1: 2.0, k2: -3.0, particular: Some(SeriesHalf::Even) },
            x,
            n,
            &fixed_terms(40),
        )
        .unwrap();
        assert!((bare.residual - mixed.residual).abs() <= 1e-12);
    }

    #[test]
    fn unmatched_pairings_leave_large_residuals() {
        let r = residual(
            OdeEquation::PowerForcing,
            &SolutionSpec::particular_only(SeriesHalf::Even),
            0.7,
            2,
            &policy(),
        )
        .unwrap();
        // L[g] − n·x^(n−1) = −(n−1)/x − n·x^(n−1): at n=2, x=0.7 that is
        // −1/0.7 − 1.4 ≈ −2.83.
        assert!((r.residual - (-1.0 / 0.7 - 1.4)).abs() <= 1e-10);
    }

    #[test]
    fn residual_truncation_error_is_monotone_in_terms() {
        let spec = SolutionSpec::particular_only(SeriesHalf::Odd);
        let mut prev = f64::INFINITY;
        for terms in [5, 10, 20, 40] {
            let worst = residual_max_on_grid(
                OdeEquation::PowerForcing,
                &spec,
                0.1,
                1.2,
                12,
                4,
                &fixed_terms(terms),
            )
            .unwrap();
            assert!(
                worst <= prev || worst <= 1e-12,
                "residual grew from {prev} to {worst} at {terms} terms"
            );
            prev = worst;
        }
    }

    #[test]
    fn coupled_relations_hold() {
        for &n in &[1u32, 2, 3, 5] {
            for &x in &[0.2, 0.9, 1.3] {
                let d = coupled_relations(x, n, &policy()).unwrap();
                assert!(d.defect_a <= 1e-11, "defect_a {} at x={x}, n={n}", d.defect_a);
                assert!(d.defect_b <= 1e-11, "defect_b {} at x={x}, n={n}", d.defect_b);
            }
        }
    }

    #[test]
    fn decomposition_defects_hold_for_both_signs() {
        for &sign in &[Sign::Pos, Sign::Neg] {
            for &x in &[0.4, 0.8, 1.1] {
                let d = decomposition_defect(x, 3, sign, &policy()).unwrap();
                assert!(d <= 1e-12, "decomposition defect {d} at x={x}, {sign}");
            }
        }
    }

    #[test]
    fn audit_identifies_the_pairing() {
        for n in [1, 2, 3, 4, 6] {
            let audit = pairing_audit(n, &fixed_terms(40)).unwrap();
            assert!(audit.consistent, "audit failed at n={n}: {audit:?}");
            assert!(audit.odd_with_power < audit.odd_with_reciprocal);
            assert!(audit.even_with_reciprocal < audit.even_with_power);
        }
    }

    #[test]
    fn selector_mapping() {
        assert_eq!(OdeEquation::PowerForcing.selector(), 13);
        assert_eq!(OdeEquation::ReciprocalForcing.selector(), 14);
        assert_eq!(OdeEquation::from_selector(13).unwrap(), OdeEquation::PowerForcing);
        assert_eq!(OdeEquation::from_selector(14).unwrap(), OdeEquation::ReciprocalForcing);
        assert!(matches!(OdeEquation::from_selector(12), Err(Error::Domain(_))));
        assert_eq!(OdeEquation::PowerForcing.matched_half(), SeriesHalf::Odd);
        assert_eq!(OdeEquation::ReciprocalForcing.matched_half(), SeriesHalf::Even);
        assert_eq!(SeriesHalf::Odd.letter(), 'f');
        assert_eq!(SeriesHalf::Even.letter(), 'g');
    }

    #[test]
    fn rejects_singular_point_and_bad_grids() {
        let spec = SolutionSpec::particular_only(SeriesHalf::Odd);
        assert!(matches!(
            residual(OdeEquation::PowerForcing, &spec, 0.0, 2, &policy()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            residual_max_on_grid(OdeEquation::PowerForcing, &spec, -0.5, 0.5, 5, 2, &policy()),
            Err(Error::GridContainsZero)
        ));
        assert!(matches!(
            residual_max_on_grid(OdeEquation::PowerForcing, &spec, 0.1, 1.0, 1, 2, &policy()),
            Err(Error::Domain(_))
        ));
    }
}
