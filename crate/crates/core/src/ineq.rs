//! Left side, right side and slack for each inequality and identity checked by
//! the engine.
//!
//! All evaluators are pure. For `alpha = 1` the bounds reduce to classical
//! results and are expected to hold; for `alpha < 1` they are computed and
//! reported without any expectation attached.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::alpha_num::{gamma, gamma_ratio, signed_pow, AlphaContext};
use crate::convexity::{check_s_convex_second, ConvexityVerdict};
use crate::error::{Error, Result};
use crate::fracpoly::{byparts_residual as series_byparts_residual, lf_derivative_n, lf_integral, AlphaSeries};
use crate::quad::{composed_moment, fractal_integral_numeric_try, Modulus, MomentFunctional};

pub const DEFAULT_THETA_GRID: usize = 1025;
pub const DEFAULT_HYPOTHESIS_GRID: usize = 11;

/// `M(s, alpha)` and `N(s, alpha)`: the fractal moments `J[t^((s+2) alpha)]` and
/// `J[t^(2 alpha) (1-t)^(s alpha)]` as closed-form Gamma ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OstrowskiConstants {
    pub m: f64,
    pub n: f64,
    pub s: f64,
    pub ctx: AlphaContext,
}

pub fn ostrowski_constants(s: f64, ctx: &AlphaContext) -> Result<OstrowskiConstants> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain("ostrowski_constants", format!("s = {s} not in (0, 1]")));
    }
    let alpha = ctx.alpha();
    let g = |k: f64| gamma(1.0 + k * alpha);
    let m = g(s + 2.0)? / g(s + 3.0)?;
    let n = g(s)? / g(s + 1.0)? - 2f64.powf(alpha) * g(s + 1.0)? / g(s + 2.0)? + m;
    Ok(OstrowskiConstants { m, n, s, ctx: *ctx })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CorollaryForm {
    /// `x = (a+b)/2`, then s-convexity at `t = 1/2` and subadditivity.
    Midpoint,
    /// every `|f^(2 alpha)|` value replaced by its sup `Theta` over `[a, b]`
    Theta,
    MidpointTheta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    One,
    Two,
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CorollaryVariant {
    pub form: CorollaryForm,
    pub theorem: Theorem,
}

impl CorollaryVariant {
    pub const ALL: [CorollaryVariant; 9] = {
        use CorollaryForm::*;
        use Theorem::*;
        [
            CorollaryVariant { form: Midpoint, theorem: One },
            CorollaryVariant { form: Theta, theorem: One },
            CorollaryVariant { form: MidpointTheta, theorem: One },
            CorollaryVariant { form: Midpoint, theorem: Two },
            CorollaryVariant { form: Theta, theorem: Two },
            CorollaryVariant { form: MidpointTheta, theorem: Two },
            CorollaryVariant { form: Midpoint, theorem: Three },
            CorollaryVariant { form: Theta, theorem: Three },
            CorollaryVariant { form: MidpointTheta, theorem: Three },
        ]
    };
}

/// Identifier of an inequality or identity; the string form is used in the
/// CLI, configs and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IneqId {
    Ghh,
    Shh,
    Holder,
    Ostrowski,
    Identity,
    Byparts,
    Thm1,
    Thm2,
    Thm3,
    Corollary(CorollaryVariant),
}

impl IneqId {
    pub fn all() -> Vec<IneqId> {
        let mut ids = vec![
            IneqId::Ghh,
            IneqId::Shh,
            IneqId::Holder,
            IneqId::Ostrowski,
            IneqId::Identity,
            IneqId::Byparts,
            IneqId::Thm1,
            IneqId::Thm2,
            IneqId::Thm3,
        ];
        ids.extend(CorollaryVariant::ALL.iter().map(|&v| IneqId::Corollary(v)));
        ids
    }

    pub fn uses_s(&self) -> bool {
        matches!(self, IneqId::Shh | IneqId::Thm1 | IneqId::Thm2 | IneqId::Thm3 | IneqId::Corollary(_))
    }

    pub fn uses_p(&self) -> bool {
        matches!(self.theorem(), Some(Theorem::Two)) || matches!(self, IneqId::Holder)
    }

    pub fn uses_q(&self) -> bool {
        matches!(self.theorem(), Some(Theorem::Two | Theorem::Three)) || matches!(self, IneqId::Holder)
    }

    pub fn uses_x(&self) -> bool {
        match self {
            IneqId::Ostrowski | IneqId::Identity | IneqId::Thm1 | IneqId::Thm2 | IneqId::Thm3 => true,
            IneqId::Corollary(v) => v.form == CorollaryForm::Theta,
            _ => false,
        }
    }

    fn theorem(&self) -> Option<Theorem> {
        match self {
            IneqId::Thm1 => Some(Theorem::One),
            IneqId::Thm2 => Some(Theorem::Two),
            IneqId::Thm3 => Some(Theorem::Three),
            IneqId::Corollary(v) => Some(v.theorem),
            _ => None,
        }
    }
}

impl fmt::Display for IneqId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            IneqId::Ghh => "ghh",
            IneqId::Shh => "shh",
            IneqId::Holder => "holder",
            IneqId::Ostrowski => "ostrowski",
            IneqId::Identity => "identity",
            IneqId::Byparts => "byparts",
            IneqId::Thm1 => "thm1",
            IneqId::Thm2 => "thm2",
            IneqId::Thm3 => "thm3",
            IneqId::Corollary(v) => {
                let form = match v.form {
                    CorollaryForm::Midpoint => "midpoint",
                    CorollaryForm::Theta => "theta",
                    CorollaryForm::MidpointTheta => "midpoint-theta",
                };
                let thm = match v.theorem {
                    Theorem::One => "thm1",
                    Theorem::Two => "thm2",
                    Theorem::Three => "thm3",
                };
                return write!(f, "cor-{form}-{thm}");
            }
        };
        f.write_str(name)
    }
}

impl FromStr for IneqId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let alias = match key.as_str() {
            "identity-residual-zero" | "identity-residual" => "identity",
            "byparts-residual-zero" | "byparts-residual" => "byparts",
            "ostrowski-classic" => "ostrowski",
            other => other,
        };
        IneqId::all()
            .into_iter()
            .find(|id| id.to_string() == alias)
            .ok_or_else(|| Error::Config(format!("unknown inequality id {s:?}")))
    }
}

impl Serialize for IneqId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IneqId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parameters of one evaluation; `None` where the inequality does not use it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub alpha: Option<f64>,
    pub s: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub x: Option<f64>,
}

impl Params {
    /// Total order used to sort sweep output.
    pub fn sort_key_cmp(&self, other: &Params) -> Ordering {
        let keys = |p: &Params| [p.alpha, p.s, p.a, p.b, p.x, p.p, p.q];
        for (l, r) in keys(self).iter().zip(keys(other).iter()) {
            let ord = match (l, r) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(a), Some(b)) => a.total_cmp(b),
            };
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }
}

/// One verification record. `slack = rhs - lhs`, `holds <=> slack >= -slack_tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IneqReport {
    pub ineq: IneqId,
    pub params: Params,
    pub function: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub notes: String,
}

impl IneqReport {
    pub fn new(ineq: IneqId, params: Params, function: String, lhs: f64, rhs: f64, slack_tol: f64) -> Self {
        let slack = rhs - lhs;
        IneqReport {
            ineq,
            params,
            function,
            lhs,
            rhs,
            slack,
            holds: slack >= -slack_tol,
            notes: String::new(),
        }
    }

    /// A row for a point whose evaluation failed.
    pub fn failed(ineq: IneqId, params: Params, function: String, error: &Error) -> Self {
        IneqReport {
            ineq,
            params,
            function,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            holds: false,
            notes: format!("error: {error}"),
        }
    }

    pub fn is_error(&self) -> bool {
        self.notes.starts_with("error:")
    }

    pub fn is_violation(&self) -> bool {
        !self.is_error() && !self.holds
    }

    fn note(mut self, text: impl AsRef<str>) -> Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
        self
    }
}

/// Double-sided `left <= mid <= right`: the report carries the pair with the
/// smaller slack.
fn double_sided(
    ineq: IneqId,
    params: Params,
    function: String,
    (left, mid, right): (f64, f64, f64),
    slack_tol: f64,
) -> IneqReport {
    let (lhs, rhs) = if mid - left <= right - mid { (left, mid) } else { (mid, right) };
    IneqReport::new(ineq, params, function, lhs, rhs, slack_tol)
        .note(format!("left={left:e} mid={mid:e} right={right:e}"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// Points of the sup-norm grid for `Theta`.
    pub theta_grid: usize,
    /// Lattice size for checking the s-convexity hypotheses (0 disables).
    pub hypothesis_grid: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            theta_grid: DEFAULT_THETA_GRID,
            hypothesis_grid: DEFAULT_HYPOTHESIS_GRID,
        }
    }
}

/// Evaluators bound to one `alpha`, sharing a Muntz quadrature.
#[derive(Debug, Clone)]
pub struct Evaluator {
    ctx: AlphaContext,
    functional: MomentFunctional,
    options: EvalOptions,
    gamma_1a: f64,
    gamma_12a: f64,
}

fn check_interval(op: &'static str, a: f64, b: f64) -> Result<()> {
    if !(a >= 0.0 && a < b && b.is_finite()) {
        return Err(Error::domain(op, format!("need 0 <= a < b, got [{a}, {b}]")));
    }
    Ok(())
}

fn check_point(op: &'static str, x: f64, a: f64, b: f64) -> Result<()> {
    check_interval(op, a, b)?;
    if !(x >= a && x <= b) {
        return Err(Error::domain(op, format!("x = {x} outside [{a}, {b}]")));
    }
    Ok(())
}

fn check_s(op: &'static str, s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain(op, format!("s = {s} not in (0, 1]")));
    }
    Ok(())
}

fn check_conjugate(op: &'static str, p: f64, q: f64) -> Result<()> {
    if !(p > 1.0 && q > 1.0) || (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
        return Err(Error::domain(op, format!("p = {p}, q = {q} are not Holder conjugates")));
    }
    Ok(())
}

fn check_q(op: &'static str, q: f64) -> Result<()> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::domain(op, format!("q = {q} must be >= 1")));
    }
    Ok(())
}

/// Per-theorem data at one point: `D(u) = |f^(2 alpha)(u)|` at `x`, `a`, `b`.
struct SecondDerivative {
    series: AlphaSeries,
}

impl SecondDerivative {
    fn at(&self, u: f64) -> Result<f64> {
        Ok(self.series.eval(u)?.abs())
    }
}

impl Evaluator {
    pub fn new(ctx: AlphaContext) -> Result<Self> {
        Self::with_options(ctx, EvalOptions::default())
    }

    pub fn with_options(ctx: AlphaContext, options: EvalOptions) -> Result<Self> {
        let functional = MomentFunctional::for_evaluation(ctx)?;
        Self::with_functional(functional, options)
    }

    pub fn with_functional(functional: MomentFunctional, options: EvalOptions) -> Result<Self> {
        let ctx = *functional.ctx();
        let alpha = ctx.alpha();
        Ok(Evaluator {
            ctx,
            functional,
            options,
            gamma_1a: gamma(1.0 + alpha)?,
            gamma_12a: gamma(1.0 + 2.0 * alpha)?,
        })
    }

    pub fn ctx(&self) -> &AlphaContext {
        &self.ctx
    }

    pub fn functional(&self) -> &MomentFunctional {
        &self.functional
    }

    fn alpha(&self) -> f64 {
        self.ctx.alpha()
    }

    fn pow(&self, u: f64) -> f64 {
        signed_pow(u, self.alpha())
    }

    fn tol(&self) -> f64 {
        self.ctx.slack_tol()
    }

    fn check_series(&self, f: &AlphaSeries) -> Result<()> {
        if f.ctx().alpha() != self.alpha() {
            return Err(Error::ContextMismatch {
                left: f.ctx().alpha(),
                right: self.alpha(),
            });
        }
        Ok(())
    }

    fn base_params(&self, a: f64, b: f64) -> Params {
        Params {
            alpha: Some(self.alpha()),
            a: Some(a),
            b: Some(b),
            ..Params::default()
        }
    }

    /// `aI_b f / (b-a)^alpha`
    fn normalized_integral(&self, f: &AlphaSeries, a: f64, b: f64) -> Result<f64> {
        Ok(lf_integral(f, a, b)? / self.pow(b - a))
    }

    /// Left side of the mean-value identity, before taking the modulus:
    /// `aI_b f/(b-a)^alpha - f(x)/Gamma(1+alpha) + (2x-a-b)^alpha f^(alpha)(x)/Gamma(1+2 alpha)`.
    pub fn identity_lhs(&self, f: &AlphaSeries, x: f64, a: f64, b: f64) -> Result<f64> {
        self.check_series(f)?;
        check_point("identity_lhs", x, a, b)?;
        let df = f.derivative()?;
        let correction = if df.is_zero() {
            0.0
        } else {
            self.pow(2.0 * x - a - b) * df.eval(x)? / self.gamma_12a
        };
        Ok(self.normalized_integral(f, a, b)? - f.eval(x)? / self.gamma_1a + correction)
    }

    /// `sup |g|` on `[a, b]`: dense grid, then golden-section refinement
    /// around the best grid point.
    pub fn sup_abs(&self, g: &AlphaSeries, a: f64, b: f64) -> Result<f64> {
        if g.is_zero() {
            return Ok(0.0);
        }
        let n = self.options.theta_grid.max(2);
        let h = (b - a) / (n - 1) as f64;
        let mut best = (a, g.eval(a)?.abs());
        for i in 1..n {
            let u = if i + 1 == n { b } else { a + h * i as f64 };
            let v = g.eval(u)?.abs();
            if v > best.1 {
                best = (u, v);
            }
        }
        let mut lo = (best.0 - h).max(a);
        let mut hi = (best.0 + h).min(b);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = hi - phi * (hi - lo);
        let mut d = lo + phi * (hi - lo);
        let mut fc = g.eval(c)?.abs();
        let mut fd = g.eval(d)?.abs();
        for _ in 0..60 {
            if fc > fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - phi * (hi - lo);
                fc = g.eval(c)?.abs();
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + phi * (hi - lo);
                fd = g.eval(d)?.abs();
            }
        }
        Ok(best.1.max(fc).max(fd))
    }

    /// Checks whether `|f^(2 alpha)|^q` passes the s-convexity lattice test on `[a, b]`.
    pub fn s_convexity_hypothesis(&self, f2: &AlphaSeries, s: f64, q: f64, a: f64, b: f64) -> Result<ConvexityVerdict> {
        check_s_convex_second(
            |u| Ok(f2.eval(u)?.abs().powf(q)),
            s,
            a,
            b,
            self.options.hypothesis_grid.max(3),
            &self.ctx,
        )
    }

    fn hypothesis_note(&self, report: IneqReport, f2: &AlphaSeries, s: f64, q: f64, a: f64, b: f64) -> Result<IneqReport> {
        if self.options.hypothesis_grid == 0 {
            return Ok(report);
        }
        let verdict = self.s_convexity_hypothesis(f2, s, q, a, b)?;
        Ok(match verdict.witness {
            Some(w) => report.note(format!(
                "hypothesis: |f^(2a)|^{q} not s-convex on grid (gap {:e} at x1={}, x2={}, t={})",
                w.gap, w.x1, w.x2, w.lam
            )),
            None => report,
        })
    }

    pub fn eval_ghh(&self, f: &AlphaSeries, a: f64, b: f64) -> Result<IneqReport> {
        self.check_series(f)?;
        check_interval("eval_ghh", a, b)?;
        let left = f.eval(0.5 * (a + b))?;
        let mid = self.gamma_1a * self.normalized_integral(f, a, b)?;
        let right = (f.eval(a)? + f.eval(b)?) / 2f64.powf(self.alpha());
        Ok(double_sided(IneqId::Ghh, self.base_params(a, b), f.to_string(), (left, mid, right), self.tol()))
    }

    pub fn eval_shh(&self, f: &AlphaSeries, s: f64, a: f64, b: f64) -> Result<IneqReport> {
        self.check_series(f)?;
        check_interval("eval_shh", a, b)?;
        check_s("eval_shh", s)?;
        let alpha = self.alpha();
        let left = 2f64.powf((s - 1.0) * alpha) / self.gamma_1a * f.eval(0.5 * (a + b))?;
        let mid = self.normalized_integral(f, a, b)?;
        let right = gamma_ratio(1.0 + s * alpha, 1.0 + (s + 1.0) * alpha)? * (f.eval(a)? + f.eval(b)?);
        let params = Params {
            s: Some(s),
            ..self.base_params(a, b)
        };
        Ok(double_sided(IneqId::Shh, params, f.to_string(), (left, mid, right), self.tol()))
    }

    /// Generalized Holder inequality on `[a, b]`, each integral pulled back
    /// to `[0, 1]` with the factor `(b-a)^alpha`.
    #[allow(clippy::too_many_arguments)]
    pub fn eval_holder<F, G>(&self, f: F, g: G, p: f64, q: f64, a: f64, b: f64) -> Result<IneqReport>
    where
        F: Fn(f64) -> Result<f64>,
        G: Fn(f64) -> Result<f64>,
    {
        check_interval("eval_holder", a, b)?;
        check_conjugate("eval_holder", p, q)?;
        let scale = self.pow(b - a);
        let at = |t: f64| a + t * (b - a);
        let j = &self.functional;
        let (fg, _) = fractal_integral_numeric_try(|t| Ok((f(at(t))? * g(at(t))?).abs()), j)?;
        let (fp, _) = fractal_integral_numeric_try(|t| Ok(f(at(t))?.abs().powf(p)), j)?;
        let (gq, _) = fractal_integral_numeric_try(|t| Ok(g(at(t))?.abs().powf(q)), j)?;
        let lhs = scale * fg;
        // the projections of nonnegative integrands may dip below zero by rounding
        let rhs = (scale * fp).max(0.0).powf(1.0 / p) * (scale * gq).max(0.0).powf(1.0 / q);
        let params = Params {
            p: Some(p),
            q: Some(q),
            ..self.base_params(a, b)
        };
        Ok(IneqReport::new(IneqId::Holder, params, String::new(), lhs, rhs, self.tol()))
    }

    pub fn eval_holder_series(&self, f: &AlphaSeries, g: &AlphaSeries, p: f64, q: f64, a: f64, b: f64) -> Result<IneqReport> {
        self.check_series(f)?;
        self.check_series(g)?;
        let mut report = self.eval_holder(|u| f.eval(u), |u| g.eval(u), p, q, a, b)?;
        report.function = f.to_string();
        Ok(report)
    }

    /// Generalized Ostrowski inequality with `Theta_1 = sup |f^(alpha)|` on a grid.
    pub fn eval_ostrowski_classic(&self, f: &AlphaSeries, x: f64, a: f64, b: f64) -> Result<IneqReport> {
        self.check_series(f)?;
        check_point("eval_ostrowski_classic", x, a, b)?;
        let alpha = self.alpha();
        let mean = self.gamma_1a * self.normalized_integral(f, a, b)?;
        let lhs = (f.eval(x)? - mean).abs();
        let theta = self.sup_abs(&f.derivative()?, a, b)?;
        let offset = self.pow((x - 0.5 * (a + b)) / (b - a));
        let bracket = 1.0 / 4f64.powf(alpha) + offset * offset;
        let rhs = 2f64.powf(alpha) * self.gamma_1a / self.gamma_12a * bracket * self.pow(b - a) * theta;
        let params = Params {
            x: Some(x),
            ..self.base_params(a, b)
        };
        Ok(IneqReport::new(IneqId::Ostrowski, params, f.to_string(), lhs, rhs, self.tol())
            .note(format!("theta1={theta:e}")))
    }

    /// `|LHS - RHS|` of the mean-value identity, the right side computed with
    /// signed composed moments of `f^(2 alpha)`.
    pub fn identity_residual(&self, f: &AlphaSeries, x: f64, a: f64, b: f64) -> Result<f64> {
        let lhs = self.identity_lhs(f, x, a, b)?;
        let f2 = lf_derivative_n(f, 2)?;
        let j = &self.functional;
        let left = if x > a {
            signed_pow(x - a, 3.0 * self.alpha()) * composed_moment(&f2, 2.0, x, a, j, Modulus::Signed)?
        } else {
            0.0
        };
        let right = if x < b {
            signed_pow(b - x, 3.0 * self.alpha()) * composed_moment(&f2, 2.0, x, b, j, Modulus::Signed)?
        } else {
            0.0
        };
        let rhs = (left + right) / (self.gamma_12a * self.pow(b - a));
        Ok((lhs - rhs).abs())
    }

    /// The identity residual as a report: `lhs = residual`, `rhs = 0`.
    pub fn eval_identity(&self, f: &AlphaSeries, x: f64, a: f64, b: f64) -> Result<IneqReport> {
        let residual = self.identity_residual(f, x, a, b)?;
        let params = Params {
            x: Some(x),
            ..self.base_params(a, b)
        };
        Ok(IneqReport::new(IneqId::Identity, params, f.to_string(), residual, 0.0, self.tol()))
    }

    /// Integration-by-parts residual as a report: `lhs = residual`, `rhs = 0`.
    pub fn eval_byparts(&self, f: &AlphaSeries, g: &AlphaSeries, a: f64, b: f64) -> Result<IneqReport> {
        self.check_series(f)?;
        self.check_series(g)?;
        check_interval("eval_byparts", a, b)?;
        let residual = series_byparts_residual(f, g, a, b)?;
        Ok(IneqReport::new(IneqId::Byparts, self.base_params(a, b), f.to_string(), residual, 0.0, self.tol()))
    }

    fn second_derivative(&self, f: &AlphaSeries) -> Result<SecondDerivative> {
        Ok(SecondDerivative {
            series: lf_derivative_n(f, 2)?,
        })
    }

    /// `(x-a)^(3 alpha)`, `(b-x)^(3 alpha)` and the common denominator
    /// `Gamma(1+2 alpha) (b-a)^alpha`.
    fn weights(&self, x: f64, a: f64, b: f64) -> (f64, f64, f64) {
        let e = 3.0 * self.alpha();
        (signed_pow(x - a, e), signed_pow(b - x, e), self.gamma_12a * self.pow(b - a))
    }

    pub fn thm1_rhs(&self, f: &AlphaSeries, s: f64, x: f64, a: f64, b: f64) -> Result<f64> {
        let c = ostrowski_constants(s, &self.ctx)?;
        let d = self.second_derivative(f)?;
        let (dx, da, db) = (d.at(x)?, d.at(a)?, d.at(b)?);
        let (wl, wr, den) = self.weights(x, a, b);
        Ok((wl * (c.m * dx + c.n * da) + wr * (c.m * dx + c.n * db)) / den)
    }

    fn thm2_factor(&self, s: f64, p: f64, q: f64) -> Result<f64> {
        let alpha = self.alpha();
        let kp = gamma_ratio(1.0 + 2.0 * p * alpha, 1.0 + (2.0 * p + 1.0) * alpha)?;
        let ks = gamma_ratio(1.0 + s * alpha, 1.0 + (s + 1.0) * alpha)?;
        Ok(kp.powf(1.0 / p) * ks.powf(1.0 / q))
    }

    #[allow(clippy::too_many_arguments)]
    pub fn thm2_rhs(&self, f: &AlphaSeries, s: f64, p: f64, q: f64, x: f64, a: f64, b: f64) -> Result<f64> {
        let d = self.second_derivative(f)?;
        let (dx, da, db) = (d.at(x)?.powf(q), d.at(a)?.powf(q), d.at(b)?.powf(q));
        let (wl, wr, den) = self.weights(x, a, b);
        let bracket = wl * (dx + da).powf(1.0 / q) + wr * (dx + db).powf(1.0 / q);
        Ok(self.thm2_factor(s, p, q)? * bracket / den)
    }

    fn thm3_factor(&self, q: f64) -> Result<f64> {
        let alpha = self.alpha();
        Ok(gamma_ratio(1.0 + 2.0 * alpha, 1.0 + 3.0 * alpha)?.powf(1.0 - 1.0 / q))
    }

    pub fn thm3_rhs(&self, f: &AlphaSeries, s: f64, q: f64, x: f64, a: f64, b: f64) -> Result<f64> {
        let c = ostrowski_constants(s, &self.ctx)?;
        let d = self.second_derivative(f)?;
        let (dx, da, db) = (d.at(x)?.powf(q), d.at(a)?.powf(q), d.at(b)?.powf(q));
        let (wl, wr, den) = self.weights(x, a, b);
        let bracket = wl * (c.m * dx + c.n * da).powf(1.0 / q) + wr * (c.m * dx + c.n * db).powf(1.0 / q);
        Ok(self.thm3_factor(q)? * bracket / den)
    }

    pub fn eval_thm1(&self, f: &AlphaSeries, s: f64, x: f64, a: f64, b: f64) -> Result<IneqReport> {
        self.check_series(f)?;
        check_point("eval_thm1", x, a, b)?;
        check_s("eval_thm1", s)?;
        let lhs = self.identity_lhs(f, x, a, b)?.abs();
        let rhs = self.thm1_rhs(f, s, x, a, b)?;
        let params = Params {
            s: Some(s),
            x: Some(x),
            ..self.base_params(a, b)
        };
        let report = IneqReport::new(IneqId::Thm1, params, f.to_string(), lhs, rhs, self.tol());
        self.hypothesis_note(report, &lf_derivative_n(f, 2)?, s, 1.0, a, b)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn eval_thm2(&self, f: &AlphaSeries, s: f64, p: f64, q: f64, x: f64, a: f64, b: f64) -> Result<IneqReport> {
        self.check_series(f)?;
        check_point("eval_thm2", x, a, b)?;
        check_s("eval_thm2", s)?;
        check_conjugate("eval_thm2", p, q)?;
        let lhs = self.identity_lhs(f, x, a, b)?.abs();
        let rhs = self.thm2_rhs(f, s, p, q, x, a, b)?;
        let params = Params {
            s: Some(s),
            p: Some(p),
            q: Some(q),
            x: Some(x),
            ..self.base_params(a, b)
        };
        let report = IneqReport::new(IneqId::Thm2, params, f.to_string(), lhs, rhs, self.tol());
        self.hypothesis_note(report, &lf_derivative_n(f, 2)?, s, q, a, b)
    }

    pub fn eval_thm3(&self, f: &AlphaSeries, s: f64, q: f64, x: f64, a: f64, b: f64) -> Result<IneqReport> {
        self.check_series(f)?;
        check_point("eval_thm3", x, a, b)?;
        check_s("eval_thm3", s)?;
        check_q("eval_thm3", q)?;
        let lhs = self.identity_lhs(f, x, a, b)?.abs();
        let rhs = self.thm3_rhs(f, s, q, x, a, b)?;
        let params = Params {
            s: Some(s),
            q: Some(q),
            x: Some(x),
            ..self.base_params(a, b)
        };
        let report = IneqReport::new(IneqId::Thm3, params, f.to_string(), lhs, rhs, self.tol());
        self.hypothesis_note(report, &lf_derivative_n(f, 2)?, s, q, a, b)
    }

    /// Corollary bounds. `x` is ignored by the midpoint forms, `p` is only
    /// used with Theorem 2 and `q` with Theorems 2 and 3.
    #[allow(clippy::too_many_arguments)]
    pub fn eval_corollary(
        &self,
        variant: CorollaryVariant,
        f: &AlphaSeries,
        s: f64,
        p: Option<f64>,
        q: Option<f64>,
        x: Option<f64>,
        a: f64,
        b: f64,
    ) -> Result<IneqReport> {
        self.check_series(f)?;
        check_interval("eval_corollary", a, b)?;
        check_s("eval_corollary", s)?;
        let alpha = self.alpha();
        let mid = 0.5 * (a + b);
        let point = match variant.form {
            CorollaryForm::Theta => {
                let x = x.ok_or_else(|| Error::domain("eval_corollary", "theta form needs x"))?;
                check_point("eval_corollary", x, a, b)?;
                x
            }
            _ => mid,
        };
        let (p, q) = match variant.theorem {
            Theorem::One => (None, 1.0),
            Theorem::Two => {
                let (p, q) = match (p, q) {
                    (Some(p), Some(q)) => (p, q),
                    _ => return Err(Error::domain("eval_corollary", "Theorem 2 forms need p and q")),
                };
                check_conjugate("eval_corollary", p, q)?;
                (Some(p), q)
            }
            Theorem::Three => {
                let q = q.ok_or_else(|| Error::domain("eval_corollary", "Theorem 3 forms need q"))?;
                check_q("eval_corollary", q)?;
                (None, q)
            }
        };

        let lhs = self.identity_lhs(f, point, a, b)?.abs();
        let c = ostrowski_constants(s, &self.ctx)?;
        let d = self.second_derivative(f)?;
        let span_2a = signed_pow(b - a, 2.0 * alpha);
        let two_sa = 2f64.powf(s * alpha);

        let rhs = match variant.form {
            CorollaryForm::Midpoint => {
                let ends = d.at(a)? + d.at(b)?;
                match variant.theorem {
                    Theorem::One => {
                        // 2 M D(mid) <= 2 M (D(a) + D(b)) / 2^(s alpha)
                        span_2a / (8f64.powf(alpha) * self.gamma_12a) * (2.0 * c.m / two_sa + c.n) * ends
                    }
                    Theorem::Two => {
                        let p = p.expect("checked");
                        self.thm2_factor(s, p, q)? * (1.0 + (1.0 + two_sa).powf(1.0 / q)) * span_2a
                            / (2f64.powf((3.0 + s / q) * alpha) * self.gamma_12a)
                            * ends
                    }
                    Theorem::Three => {
                        self.thm3_factor(q)? * span_2a / (2f64.powf((3.0 + s / q) * alpha) * self.gamma_12a)
                            * ((c.m + two_sa * c.n).powf(1.0 / q) + c.m.powf(1.0 / q))
                            * ends
                    }
                }
            }
            CorollaryForm::Theta | CorollaryForm::MidpointTheta => {
                let theta = self.sup_abs(&d.series, a, b)?;
                let offset = self.pow(point - mid);
                let bracket = span_2a / 12f64.powf(alpha) + offset * offset;
                let shape = 3f64.powf(alpha) * theta / self.gamma_12a * bracket;
                match variant.theorem {
                    Theorem::One => (c.m + c.n) * shape,
                    // (D(x)^q + D(.)^q)^(1/q) <= 2^(1/q) Theta
                    Theorem::Two => self.thm2_factor(s, p.expect("checked"), q)? * 2f64.powf(1.0 / q) * shape,
                    Theorem::Three => self.thm3_factor(q)? * (c.m + c.n).powf(1.0 / q) * shape,
                }
            }
        };

        let params = Params {
            s: Some(s),
            p,
            q: if variant.theorem == Theorem::One { None } else { Some(q) },
            x: if variant.form == CorollaryForm::Theta { Some(point) } else { None },
            ..self.base_params(a, b)
        };
        let report = IneqReport::new(IneqId::Corollary(variant), params, f.to_string(), lhs, rhs, self.tol());
        if variant.form == CorollaryForm::Midpoint {
            self.hypothesis_note(report, &d.series, s, q, a, b)
        } else {
            Ok(report)
        }
    }
}
