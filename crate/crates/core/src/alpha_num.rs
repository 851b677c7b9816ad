//! Scalar substrate: the fractal number set `R^alpha`, the Gamma function and
//! the Mittag-Leffler function `E_alpha(x^alpha)`.
//!
//! An element `a^alpha` of `R^alpha` is stored by its base `a`. Addition and
//! multiplication act on bases, `a^alpha + b^alpha = (a+b)^alpha` and
//! `a^alpha b^alpha = (ab)^alpha`, so field arithmetic is ordinary real
//! arithmetic on the bases. The numeric value `a^alpha` only appears through
//! [`alpha_pow_signed`].

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg};

use crate::error::{Error, Result};

pub const DEFAULT_SLACK_TOL: f64 = 1e-9;
pub const DEFAULT_FP_TOL: f64 = 1e-12;

/// Hard cap on the number of Mittag-Leffler series terms.
pub const MITTAG_LEFFLER_TERM_CAP: usize = 10_000;

/// The fractal order `alpha` in `(0, 1]` together with the global tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaContext {
    alpha: f64,
    slack_tol: f64,
    fp_tol: f64,
}

impl AlphaContext {
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_tolerances(alpha, DEFAULT_SLACK_TOL, DEFAULT_FP_TOL)
    }

    pub fn with_tolerances(alpha: f64, slack_tol: f64, fp_tol: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::domain("AlphaContext", format!("alpha = {alpha} not in (0, 1]")));
        }
        if !(slack_tol > 0.0 && slack_tol.is_finite()) {
            return Err(Error::domain("AlphaContext", format!("slack_tol = {slack_tol} must be positive")));
        }
        if !(fp_tol > 0.0 && fp_tol.is_finite()) {
            return Err(Error::domain("AlphaContext", format!("fp_tol = {fp_tol} must be positive")));
        }
        Ok(AlphaContext {
            alpha,
            slack_tol,
            fp_tol,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn slack_tol(&self) -> f64 {
        self.slack_tol
    }

    pub fn fp_tol(&self) -> f64 {
        self.fp_tol
    }

    /// `sgn(u)|u|^alpha`.
    pub fn pow(&self, u: f64) -> f64 {
        alpha_pow_signed(u, self)
    }

    /// `sgn(u)|u|^(k*alpha)` for a real grade `k`.
    pub fn pow_grade(&self, u: f64, grade: f64) -> f64 {
        signed_pow(u, grade * self.alpha)
    }
}

/// An element `a^alpha` of `R^alpha`, represented by its (finite) base `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaReal {
    base: f64,
}

impl AlphaReal {
    pub fn new(base: f64) -> Result<Self> {
        if !base.is_finite() {
            return Err(Error::domain("AlphaReal", format!("base {base} is not finite")));
        }
        Ok(AlphaReal { base })
    }

    pub const ZERO: AlphaReal = AlphaReal { base: 0.0 };
    pub const ONE: AlphaReal = AlphaReal { base: 1.0 };

    pub fn base(&self) -> f64 {
        self.base
    }

    /// Numeric embedding `sgn(a)|a|^alpha`.
    pub fn value(&self, ctx: &AlphaContext) -> f64 {
        alpha_pow_signed(self.base, ctx)
    }

    /// Multiplicative inverse `(1/a)^alpha`; `None` for `0^alpha`.
    pub fn recip(&self) -> Option<AlphaReal> {
        if self.base == 0.0 {
            None
        } else {
            Some(AlphaReal {
                base: 1.0 / self.base,
            })
        }
    }
}

/// `a^alpha + b^alpha := (a+b)^alpha`.
pub fn alpha_add(x: AlphaReal, y: AlphaReal) -> Result<AlphaReal> {
    AlphaReal::new(x.base + y.base)
        .map_err(|_| Error::domain("alpha_add", format!("overflow adding {} and {}", x.base, y.base)))
}

/// `a^alpha b^alpha := (ab)^alpha`.
pub fn alpha_mul(x: AlphaReal, y: AlphaReal) -> Result<AlphaReal> {
    AlphaReal::new(x.base * y.base)
        .map_err(|_| Error::domain("alpha_mul", format!("overflow multiplying {} and {}", x.base, y.base)))
}

impl Add for AlphaReal {
    type Output = AlphaReal;
    fn add(self, rhs: AlphaReal) -> AlphaReal {
        AlphaReal {
            base: self.base + rhs.base,
        }
    }
}

impl Mul for AlphaReal {
    type Output = AlphaReal;
    fn mul(self, rhs: AlphaReal) -> AlphaReal {
        AlphaReal {
            base: self.base * rhs.base,
        }
    }
}

impl Neg for AlphaReal {
    type Output = AlphaReal;
    fn neg(self) -> AlphaReal {
        AlphaReal { base: -self.base }
    }
}

impl PartialOrd for AlphaReal {
    /// `a^alpha < b^alpha` iff `a < b`.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.base.partial_cmp(&other.base)
    }
}

/// Odd extension of the power map: `sgn(u)|u|^alpha`.
pub fn alpha_pow_signed(u: f64, ctx: &AlphaContext) -> f64 {
    signed_pow(u, ctx.alpha)
}

/// `sgn(u)|u|^exponent` with `0^0 = 1`.
pub fn signed_pow(u: f64, exponent: f64) -> f64 {
    if u == 0.0 {
        if exponent == 0.0 {
            1.0
        } else {
            0.0
        }
    } else if u > 0.0 {
        u.powf(exponent)
    } else {
        -(-u).powf(exponent)
    }
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    // z = x - 1
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    sum
}

/// Gamma function for positive arguments.
///
/// Lanczos approximation (g = 7, nine coefficients). Arguments below 1/2 are
/// shifted up with `Gamma(x) = Gamma(x+1)/x`; the reflection formula is not
/// needed because the domain is `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("gamma", format!("argument {x} is not a positive finite number")));
    }
    if x < 0.5 {
        return gamma(x + 1.0).map(|g| g / x);
    }
    if x == x.floor() && x <= 25.0 {
        // exact factorials for small integers
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // t^(z+0.5) e^-t split in two to delay overflow
    let half = t.powf(0.5 * (z + 0.5));
    let value = (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(z);
    if !value.is_finite() {
        return Err(Error::domain("gamma", format!("Gamma({x}) overflows f64")));
    }
    Ok(value)
}

/// Natural logarithm of `Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("argument {x} is not a positive finite number")));
    }
    if x < 0.5 {
        return ln_gamma(x + 1.0).map(|g| g - x.ln());
    }
    if x < 20.0 {
        return gamma(x).map(f64::ln);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// `Gamma(1 + k*alpha) / Gamma(1 + (k+1)*alpha)`, the normalized fractal
/// integral of `t^(k alpha)` over `[0, 1]`.
pub fn moment_ratio(grade: f64, alpha: f64) -> Result<f64> {
    gamma_ratio(1.0 + grade * alpha, 1.0 + (grade + 1.0) * alpha)
}

/// `Gamma(num) / Gamma(den)`, switching to log space for large arguments.
pub fn gamma_ratio(num: f64, den: f64) -> Result<f64> {
    if num.max(den) < 150.0 {
        Ok(gamma(num)? / gamma(den)?)
    } else {
        Ok((ln_gamma(num)? - ln_gamma(den)?).exp())
    }
}

/// `E_alpha(x^alpha) = sum_k x^(alpha k) / Gamma(1 + k alpha)` for `x >= 0`.
///
/// Summation stops at the first term that is below `tol` once the terms have
/// started to decrease; terms are positive and decay super-geometrically
/// past their peak.
pub fn mittag_leffler(x: f64, ctx: &AlphaContext, tol: f64) -> Result<f64> {
    mittag_leffler_capped(x, ctx, tol, MITTAG_LEFFLER_TERM_CAP)
}

pub fn mittag_leffler_capped(x: f64, ctx: &AlphaContext, tol: f64, cap: usize) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("mittag_leffler", format!("argument {x} must be finite and >= 0")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("mittag_leffler", format!("tolerance {tol} must be positive")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let alpha = ctx.alpha();
    let log_x = x.ln();
    let mut sum = 0.0;
    let mut previous = f64::INFINITY;
    for k in 0..cap {
        let grade = k as f64 * alpha;
        let term = (grade * log_x - ln_gamma(1.0 + grade)?).exp();
        if term < tol && term <= previous {
            return Ok(sum);
        }
        sum += term;
        previous = term;
    }
    Err(Error::NonConvergent { terms: cap })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(alpha: f64) -> AlphaContext {
        AlphaContext::new(alpha).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn context_rejects_bad_alpha() {
        assert!(AlphaContext::new(0.0).is_err());
        assert!(AlphaContext::new(1.5).is_err());
        assert!(AlphaContext::new(f64::NAN).is_err());
        assert!(AlphaContext::with_tolerances(0.5, 0.0, 1e-12).is_err());
        assert!(AlphaContext::new(1.0).is_ok());
    }

    #[test]
    fn add_and_mul_act_on_bases() {
        let two = AlphaReal::new(2.0).unwrap();
        let three = AlphaReal::new(3.0).unwrap();
        assert_eq!(alpha_add(two, three).unwrap().base(), 5.0);
        assert_eq!(alpha_mul(two, three).unwrap().base(), 6.0);
        let a = AlphaReal::new(-7.25).unwrap();
        assert_eq!((a + AlphaReal::ZERO).base(), a.base());
        assert_eq!((a + (-a)).base(), 0.0);
        assert_eq!((a * AlphaReal::ONE).base(), a.base());
        assert_eq!((a * a.recip().unwrap()).base(), 1.0);
        assert!(AlphaReal::ZERO.recip().is_none());
    }

    #[test]
    fn overflow_surfaces_as_error() {
        let big = AlphaReal::new(f64::MAX).unwrap();
        assert!(alpha_add(big, big).is_err());
        assert!(alpha_mul(big, big).is_err());
        assert!(AlphaReal::new(f64::INFINITY).is_err());
    }

    #[test]
    fn signed_power() {
        assert_eq!(alpha_pow_signed(1.0, &ctx(0.3)), 1.0);
        assert_eq!(alpha_pow_signed(-4.0, &ctx(0.5)), -2.0);
        assert_eq!(alpha_pow_signed(0.0, &ctx(0.5)), 0.0);
        assert_eq!(AlphaReal::new(-4.0).unwrap().value(&ctx(0.5)), -2.0);
    }

    #[test]
    fn gamma_known_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(4.0).unwrap(), 6.0);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-13);
        assert!(rel(gamma(4.5).unwrap(), 11.631_728_396_567_448) < 1e-13);
        assert!(rel(gamma(0.1).unwrap(), 9.513_507_698_668_732) < 1e-12);
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
    }

    #[test]
    fn gamma_recurrence_grid() {
        for i in 1..=100 {
            let x = i as f64 * 0.1;
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(rel(rhs, lhs) <= 1e-10, "x = {x}");
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.2, 1.7, 19.5, 20.5, 33.3, 49.0] {
            assert!((ln_gamma(x).unwrap() - gamma(x).unwrap().ln()).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn mittag_leffler_values() {
        assert_eq!(mittag_leffler(0.0, &ctx(0.4), 1e-16).unwrap(), 1.0);
        let e1 = mittag_leffler(1.0, &ctx(1.0), 1e-17).unwrap();
        assert!((e1 - std::f64::consts::E).abs() < 1e-10);
        for i in 0..=50 {
            let x = i as f64 * 0.1;
            let v = mittag_leffler(x, &ctx(1.0), 1e-17).unwrap();
            assert!(rel(v, x.exp()) <= 1e-10, "x = {x}");
        }
    }

    #[test]
    fn mittag_leffler_term_cap() {
        let err = mittag_leffler_capped(3.0, &ctx(0.5), 1e-16, 5).unwrap_err();
        assert!(matches!(err, Error::NonConvergent { terms: 5 }));
    }
}
