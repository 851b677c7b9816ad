//! The alpha-power-series algebra `sum c_k x^(k alpha)` and the term-wise local
//! fractional derivative and integral.
//!
//! The monomial rules are the definitions here:
//!
//! * derivative: `x^(k alpha) -> Gamma(1+k alpha)/Gamma(1+(k-1) alpha) x^((k-1) alpha)`,
//!   with constants mapped to zero;
//! * integral: `aI_b x^(k alpha) = Gamma(1+k alpha)/Gamma(1+(k+1) alpha) (b^((k+1) alpha) - a^((k+1) alpha))`.
//!
//! The limit definitions do not converge in floating point arithmetic for
//! `alpha < 1`, so nothing here takes limits.

use std::fmt;

use crate::alpha_num::{gamma_ratio, signed_pow, AlphaContext};
use crate::error::{Error, Result};

/// Grades closer than this (relative) are merged into one term.
const GRADE_MERGE_TOL: f64 = 1e-12;

/// A finite sum `sum_k c_k x^(k alpha)` with real grades.
///
/// Grades are strictly increasing and every stored coefficient is nonzero.
/// Parsed series have grades `>= 0`; differentiation may produce grades in
/// `(-1/alpha, 0)` (for example the derivative of `x^(alpha/2)`), which
/// integrate fine but cannot be evaluated at `x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSeries {
    terms: Vec<(f64, f64)>,
    ctx: AlphaContext,
}

impl AlphaSeries {
    pub fn zero(ctx: AlphaContext) -> Self {
        AlphaSeries {
            terms: Vec::new(),
            ctx,
        }
    }

    pub fn constant(c: f64, ctx: AlphaContext) -> Self {
        Self::from_terms(vec![(0.0, c)], ctx).expect("grade 0 is valid")
    }

    /// `c x^(k alpha)`.
    pub fn monomial(grade: f64, coeff: f64, ctx: AlphaContext) -> Result<Self> {
        Self::from_terms(vec![(grade, coeff)], ctx)
    }

    /// Builds a series from arbitrary `(grade, coefficient)` pairs: sorts,
    /// merges equal grades and drops zero coefficients.
    pub fn from_terms(terms: Vec<(f64, f64)>, ctx: AlphaContext) -> Result<Self> {
        for &(grade, coeff) in &terms {
            if !grade.is_finite() || 1.0 + grade * ctx.alpha() <= 0.0 {
                return Err(Error::domain("AlphaSeries", format!("invalid grade {grade}")));
            }
            if !coeff.is_finite() {
                return Err(Error::domain("AlphaSeries", format!("non-finite coefficient {coeff}")));
            }
        }
        Ok(Self::normalized(terms, ctx))
    }

    fn normalized(mut terms: Vec<(f64, f64)>, ctx: AlphaContext) -> Self {
        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(terms.len());
        for (grade, coeff) in terms {
            match merged.last_mut() {
                Some(last) if (grade - last.0).abs() <= GRADE_MERGE_TOL * grade.abs().max(1.0) => {
                    last.1 += coeff;
                }
                _ => merged.push((grade, coeff)),
            }
        }
        merged.retain(|&(_, c)| c != 0.0);
        AlphaSeries { terms: merged, ctx }
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn ctx(&self) -> &AlphaContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_grade(&self) -> Option<f64> {
        self.terms.last().map(|t| t.0)
    }

    fn check_ctx(&self, other: &AlphaSeries) -> Result<()> {
        if self.ctx.alpha() != other.ctx.alpha() {
            return Err(Error::ContextMismatch {
                left: self.ctx.alpha(),
                right: other.ctx.alpha(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &AlphaSeries) -> Result<AlphaSeries> {
        series_add(self, other)
    }

    pub fn mul(&self, other: &AlphaSeries) -> Result<AlphaSeries> {
        series_mul(self, other)
    }

    pub fn scale(&self, c: f64) -> AlphaSeries {
        series_scale(self, c)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        series_eval(self, x)
    }

    pub fn derivative(&self) -> Result<AlphaSeries> {
        lf_derivative(self)
    }

    pub fn derivative_n(&self, n: usize) -> Result<AlphaSeries> {
        lf_derivative_n(self, n)
    }

    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        lf_integral(self, a, b)
    }
}

impl fmt::Display for AlphaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (grade, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *grade == 0.0 {
                write!(f, "{coeff}")?;
            } else {
                write!(f, "{coeff}*x^({grade}a)")?;
            }
        }
        Ok(())
    }
}

pub fn series_add(f: &AlphaSeries, g: &AlphaSeries) -> Result<AlphaSeries> {
    f.check_ctx(g)?;
    let mut terms = f.terms.clone();
    terms.extend_from_slice(&g.terms);
    Ok(AlphaSeries::normalized(terms, f.ctx))
}

pub fn series_scale(f: &AlphaSeries, c: f64) -> AlphaSeries {
    AlphaSeries::normalized(f.terms.iter().map(|&(k, v)| (k, v * c)).collect(), f.ctx)
}

/// Product of two series; grades add.
pub fn series_mul(f: &AlphaSeries, g: &AlphaSeries) -> Result<AlphaSeries> {
    f.check_ctx(g)?;
    let mut terms = Vec::with_capacity(f.terms.len() * g.terms.len());
    for &(k1, c1) in &f.terms {
        for &(k2, c2) in &g.terms {
            terms.push((k1 + k2, c1 * c2));
        }
    }
    Ok(AlphaSeries::normalized(terms, f.ctx))
}

/// `sum c x^(k alpha)` with ordinary real powers, for `x >= 0`.
pub fn series_eval(f: &AlphaSeries, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("series_eval", format!("x = {x} must be finite and >= 0")));
    }
    let alpha = f.ctx.alpha();
    let mut sum = 0.0;
    for &(grade, coeff) in &f.terms {
        if grade < 0.0 && x == 0.0 {
            return Err(Error::domain(
                "series_eval",
                format!("grade {grade} is singular at x = 0"),
            ));
        }
        sum += coeff * signed_pow(x, grade * alpha);
    }
    Ok(sum)
}

/// Term-wise local fractional derivative of order `alpha`.
pub fn lf_derivative(f: &AlphaSeries) -> Result<AlphaSeries> {
    let alpha = f.ctx.alpha();
    let mut terms = Vec::with_capacity(f.terms.len());
    for &(grade, coeff) in &f.terms {
        if grade == 0.0 {
            continue;
        }
        let lowered = 1.0 + (grade - 1.0) * alpha;
        if lowered <= 0.0 {
            return Err(Error::GammaPole {
                grade,
                argument: lowered,
            });
        }
        let factor = gamma_ratio(1.0 + grade * alpha, lowered)?;
        terms.push((grade - 1.0, coeff * factor));
    }
    Ok(AlphaSeries::normalized(terms, f.ctx))
}

/// `n`-fold derivative `f^(n alpha)`.
pub fn lf_derivative_n(f: &AlphaSeries, n: usize) -> Result<AlphaSeries> {
    let mut current = f.clone();
    for _ in 0..n {
        current = lf_derivative(&current)?;
    }
    Ok(current)
}

/// The normalized local fractional integral `aI_b^(alpha) f` of a series.
///
/// Antisymmetric in `(a, b)` and zero for `a == b`.
pub fn lf_integral(f: &AlphaSeries, a: f64, b: f64) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("lf_integral", format!("endpoints ({a}, {b}) must be finite and >= 0")));
    }
    if a == b {
        return Ok(0.0);
    }
    // Integrate over the ordered interval so that the result is exactly antisymmetric.
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let alpha = f.ctx.alpha();
    let mut sum = 0.0;
    for &(grade, coeff) in &f.terms {
        let ratio = gamma_ratio(1.0 + grade * alpha, 1.0 + (grade + 1.0) * alpha)?;
        let exponent = (grade + 1.0) * alpha;
        sum += coeff * ratio * (signed_pow(hi, exponent) - signed_pow(lo, exponent));
    }
    Ok(sign * sum)
}

/// Absolute residual of local fractional integration by parts,
/// `|aI_b(f g') - [f g]_a^b + aI_b(f' g)|`, under term-wise semantics.
pub fn byparts_residual(f: &AlphaSeries, g: &AlphaSeries, a: f64, b: f64) -> Result<f64> {
    let df = lf_derivative(f)?;
    let dg = lf_derivative(g)?;
    let left = lf_integral(&series_mul(f, &dg)?, a, b)?;
    let boundary = series_eval(f, b)? * series_eval(g, b)? - series_eval(f, a)? * series_eval(g, a)?;
    let right = lf_integral(&series_mul(&df, g)?, a, b)?;
    Ok((left - boundary + right).abs())
}
