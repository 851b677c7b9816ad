//! Numeric extension of the normalized fractal integral
//! `J[g] = (1/Gamma(1+alpha)) int_0^1 g(t) (dt)^alpha` to integrands outside the
//! series algebra.
//!
//! `g` is projected onto the Muntz span `{t^(k alpha) : k = 0..n}` by least
//! squares on Chebyshev points of `[0, 1]`; the projection is then integrated
//! with the exact moments `J[t^(k alpha)] = Gamma(1+k alpha)/Gamma(1+(k+1) alpha)`.
//! The raw Muntz basis is badly conditioned, so the fit goes through an SVD of
//! the column-scaled design matrix with a ridge of `(1e-12 * sigma_max)^2`.
//! Because `J` is a bounded functional, the integrated value stays accurate
//! even when individual coefficients do not.

use nalgebra::{DMatrix, DVector};

use crate::alpha_num::{moment_ratio, signed_pow, AlphaContext};
use crate::error::{Error, Result};
use crate::fracpoly::{series_eval, AlphaSeries};

pub const DEFAULT_MAX_GRADE: usize = 10;
pub const MAX_GRADE_CAP: usize = 24;
/// Max grade used by the inequality evaluators (stepped down automatically
/// when the fit would be rank deficient).
pub const EVALUATION_MAX_GRADE: usize = 20;
const RIDGE_RELATIVE: f64 = 1e-12;
const CONDITION_LIMIT: f64 = 1e17;

/// Precomputed Muntz least-squares quadrature for one `alpha`.
#[derive(Debug, Clone)]
pub struct MomentFunctional {
    ctx: AlphaContext,
    max_grade: usize,
    nodes: Vec<f64>,
    moments: Vec<f64>,
    /// `value = weights . samples`
    weights: DVector<f64>,
    /// Maps samples to fitted values at the nodes.
    projection: DMatrix<f64>,
    condition: f64,
}

impl MomentFunctional {
    pub fn new(ctx: AlphaContext) -> Result<Self> {
        Self::with_max_grade(ctx, DEFAULT_MAX_GRADE)
    }

    pub fn with_max_grade(ctx: AlphaContext, max_grade: usize) -> Result<Self> {
        Self::with_nodes(ctx, max_grade, 4 * max_grade)
    }

    pub fn with_nodes(ctx: AlphaContext, max_grade: usize, node_count: usize) -> Result<Self> {
        if !(1..=MAX_GRADE_CAP).contains(&max_grade) {
            return Err(Error::domain(
                "MomentFunctional",
                format!("max grade {max_grade} outside 1..={MAX_GRADE_CAP}"),
            ));
        }
        if node_count < 2 * max_grade {
            return Err(Error::domain(
                "MomentFunctional",
                format!("node count {node_count} below 2 * max grade"),
            ));
        }
        let alpha = ctx.alpha();
        let nodes = chebyshev_nodes(node_count);
        let cols = max_grade + 1;
        let moments = (0..cols)
            .map(|k| moment_ratio(k as f64, alpha))
            .collect::<Result<Vec<_>>>()?;

        let mut design = DMatrix::<f64>::zeros(node_count, cols);
        for (i, &t) in nodes.iter().enumerate() {
            for k in 0..cols {
                design[(i, k)] = signed_pow(t, k as f64 * alpha);
            }
        }
        let scales: Vec<f64> = (0..cols).map(|k| design.column(k).norm()).collect();
        for (k, s) in scales.iter().enumerate() {
            design.column_mut(k).scale_mut(1.0 / s);
        }

        let svd = design.svd(true, true);
        let u = svd.u.expect("u requested");
        let v_t = svd.v_t.expect("v_t requested");
        let sigma = svd.singular_values;
        let s_max = sigma.max();
        let s_min = sigma.min();
        let condition = if s_min > 0.0 { s_max / s_min } else { f64::INFINITY };
        if condition > CONDITION_LIMIT {
            return Err(Error::IllConditioned {
                max_grade,
                condition,
            });
        }
        let ridge = (RIDGE_RELATIVE * s_max).powi(2);
        let filter_inv = sigma.map(|s| s / (s * s + ridge));
        let filter_proj = sigma.map(|s| s * s / (s * s + ridge));

        // coefficients c = D^-1 V diag(filter_inv) U^T y, value = mu . c
        let scaled_moments = DVector::from_iterator(cols, moments.iter().zip(&scales).map(|(m, s)| m / s));
        let vm = v_t * scaled_moments;
        let weights = &u * vm.component_mul(&filter_inv);
        let projection = &u * DMatrix::from_diagonal(&filter_proj) * u.transpose();

        Ok(MomentFunctional {
            ctx,
            max_grade,
            nodes,
            moments,
            weights,
            projection,
            condition,
        })
    }

    /// The evaluators' functional: the largest max grade up to
    /// [`EVALUATION_MAX_GRADE`] that is not rank deficient for this `alpha`.
    pub fn for_evaluation(ctx: AlphaContext) -> Result<Self> {
        let mut grade = EVALUATION_MAX_GRADE;
        loop {
            match Self::with_max_grade(ctx, grade) {
                Err(Error::IllConditioned { .. }) if grade > DEFAULT_MAX_GRADE => grade -= 2,
                other => return other,
            }
        }
    }

    pub fn ctx(&self) -> &AlphaContext {
        &self.ctx
    }

    pub fn max_grade(&self) -> usize {
        self.max_grade
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `J[t^(k alpha)]` for `k = 0..=max_grade`.
    pub fn moments(&self) -> &[f64] {
        &self.moments
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Value and max-norm fit residual from samples of `g` at [`Self::nodes`].
    pub fn integrate_samples(&self, samples: &[f64]) -> Result<(f64, f64)> {
        if samples.len() != self.nodes.len() {
            return Err(Error::domain(
                "fractal_integral_numeric",
                format!("expected {} samples, got {}", self.nodes.len(), samples.len()),
            ));
        }
        if let Some(bad) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(
                "fractal_integral_numeric",
                format!("integrand is not finite at t = {}", self.nodes[bad]),
            ));
        }
        let y = DVector::from_column_slice(samples);
        let value = self.weights.dot(&y);
        let fitted = &self.projection * &y;
        let residual = fitted
            .iter()
            .zip(samples)
            .map(|(f, s)| (f - s).abs())
            .fold(0.0, f64::max);
        Ok((value, residual))
    }
}

/// Chebyshev points of the first kind mapped to `[0, 1]`, increasing.
pub fn chebyshev_nodes(count: usize) -> Vec<f64> {
    (0..count)
        .map(|j| {
            let theta = (2 * j + 1) as f64 * std::f64::consts::PI / (2 * count) as f64;
            0.5 * (1.0 - theta.cos())
        })
        .collect()
}

/// `J[g]` by Muntz projection; returns `(value, max-norm fit residual)`.
pub fn fractal_integral_numeric<G>(g: G, functional: &MomentFunctional) -> Result<(f64, f64)>
where
    G: Fn(f64) -> f64,
{
    let samples: Vec<f64> = functional.nodes().iter().map(|&t| g(t)).collect();
    functional.integrate_samples(&samples)
}

/// Fallible-integrand variant of [`fractal_integral_numeric`].
pub fn fractal_integral_numeric_try<G>(g: G, functional: &MomentFunctional) -> Result<(f64, f64)>
where
    G: Fn(f64) -> Result<f64>,
{
    let samples = functional
        .nodes()
        .iter()
        .map(|&t| g(t))
        .collect::<Result<Vec<f64>>>()?;
    functional.integrate_samples(&samples)
}

/// How the composed second-derivative values enter a [`composed_moment`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Modulus {
    /// `phi(v) = v`
    Signed,
    /// `phi(v) = |v|^q` with `q >= 1`
    Power(f64),
}

impl Modulus {
    pub const ABS: Modulus = Modulus::Power(1.0);

    fn apply(self, v: f64) -> f64 {
        match self {
            Modulus::Signed => v,
            Modulus::Power(q) => v.abs().powf(q),
        }
    }
}

/// `J[t -> t^(w alpha) phi(f2(t x + (1-t) e))]`, with the affine argument
/// computed in ordinary arithmetic.
pub fn composed_moment(
    f2: &AlphaSeries,
    weight_grade: f64,
    x: f64,
    e: f64,
    functional: &MomentFunctional,
    modulus: Modulus,
) -> Result<f64> {
    composed_moment_with_residual(f2, weight_grade, x, e, functional, modulus).map(|(v, _)| v)
}

pub fn composed_moment_with_residual(
    f2: &AlphaSeries,
    weight_grade: f64,
    x: f64,
    e: f64,
    functional: &MomentFunctional,
    modulus: Modulus,
) -> Result<(f64, f64)> {
    if !(x >= 0.0 && e >= 0.0) {
        return Err(Error::domain("composed_moment", format!("x = {x}, e = {e} must be >= 0")));
    }
    if let Modulus::Power(q) = modulus {
        if !(q >= 1.0) {
            return Err(Error::domain("composed_moment", format!("power {q} must be >= 1")));
        }
    }
    if f2.is_zero() {
        return Ok((0.0, 0.0));
    }
    let alpha = functional.ctx().alpha();
    fractal_integral_numeric_try(
        |t| {
            let u = t * x + (1.0 - t) * e;
            let v = series_eval(f2, u)?;
            Ok(signed_pow(t, weight_grade * alpha) * modulus.apply(v))
        },
        functional,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha_num::gamma;

    fn ctx(alpha: f64) -> AlphaContext {
        AlphaContext::new(alpha).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(MomentFunctional::with_max_grade(ctx(0.5), 0).is_err());
        assert!(MomentFunctional::with_max_grade(ctx(0.5), MAX_GRADE_CAP + 1).is_err());
        assert!(MomentFunctional::with_nodes(ctx(0.5), 10, 19).is_err());
        let j = MomentFunctional::new(ctx(0.5)).unwrap();
        assert_eq!(j.max_grade(), 10);
        assert_eq!(j.nodes().len(), 40);
    }

    #[test]
    fn rank_deficient_fit_is_an_error() {
        let err = MomentFunctional::with_max_grade(ctx(0.05), 24).unwrap_err();
        assert!(matches!(err, Error::IllConditioned { .. }), "{err:?}");
    }

    #[test]
    fn evaluation_functional_steps_down() {
        for &alpha in &[0.05, 0.3, 1.0] {
            let j = MomentFunctional::for_evaluation(ctx(alpha)).unwrap();
            assert!(j.max_grade() >= DEFAULT_MAX_GRADE);
        }
    }

    #[test]
    fn exact_basis_member() {
        for &alpha in &[0.3, 0.5, 1.0] {
            let j = MomentFunctional::new(ctx(alpha)).unwrap();
            let (v, r) = fractal_integral_numeric(|t| t.powf(2.0 * alpha), &j).unwrap();
            let exact = gamma(1.0 + 2.0 * alpha).unwrap() / gamma(1.0 + 3.0 * alpha).unwrap();
            assert!((v - exact).abs() / exact < 1e-10);
            assert!(r <= 1e-10);
        }
        let j = MomentFunctional::new(ctx(1.0)).unwrap();
        let (v, _) = fractal_integral_numeric(|_| 1.0, &j).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_finite_integrand_is_rejected() {
        let j = MomentFunctional::new(ctx(0.5)).unwrap();
        assert!(fractal_integral_numeric(|t| 1.0 / (t - t), &j).is_err());
    }

    #[test]
    fn composed_moment_examples() {
        let alpha = 0.6;
        let j = MomentFunctional::new(ctx(alpha)).unwrap();
        let c = AlphaSeries::constant(2.5, ctx(alpha));
        let v = composed_moment(&c, 2.0, 0.7, 0.1, &j, Modulus::ABS).unwrap();
        let exact = 2.5 * gamma(1.0 + 2.0 * alpha).unwrap() / gamma(1.0 + 3.0 * alpha).unwrap();
        assert!((v - exact).abs() < 1e-10);

        let zero = AlphaSeries::zero(ctx(alpha));
        assert_eq!(composed_moment(&zero, 2.0, 0.7, 0.1, &j, Modulus::Signed).unwrap(), 0.0);

        // f = x^3 at alpha = 1: f'' = 6u, int_0^1 t^2 * 6 * (t/2) dt = 3/4
        let j1 = MomentFunctional::new(ctx(1.0)).unwrap();
        let f2 = AlphaSeries::monomial(1.0, 6.0, ctx(1.0)).unwrap();
        let v = composed_moment(&f2, 2.0, 0.5, 0.0, &j1, Modulus::ABS).unwrap();
        assert!((v - 0.75).abs() < 1e-12);
    }

    #[test]
    fn modulus_power_is_applied() {
        let j = MomentFunctional::new(ctx(1.0)).unwrap();
        let f2 = AlphaSeries::constant(-3.0, ctx(1.0));
        let signed = composed_moment(&f2, 0.0, 1.0, 0.0, &j, Modulus::Signed).unwrap();
        let squared = composed_moment(&f2, 0.0, 1.0, 0.0, &j, Modulus::Power(2.0)).unwrap();
        assert!((signed + 3.0).abs() < 1e-12);
        assert!((squared - 9.0).abs() < 1e-12);
        assert!(composed_moment(&f2, 0.0, 1.0, 0.0, &j, Modulus::Power(0.5)).is_err());
    }
}
