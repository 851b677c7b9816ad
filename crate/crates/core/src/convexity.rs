//! Grid falsification of generalized convexity
//! `f(l x1 + (1-l) x2) <= l^alpha f(x1) + (1-l)^alpha f(x2)` and of generalized
//! s-convexity in the second sense
//! `f(t x1 + (1-t) x2) <= t^(s alpha) f(x1) + (1-t)^(s alpha) f(x2)`.
//!
//! The s-convex form is the inequality the Ostrowski-type bounds actually use
//! for `|f^(2 alpha)|^q`; no separate published definition is assumed.
//! "Holds" only ever means that no violation was found on the lattice.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::alpha_num::{signed_pow, AlphaContext};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub x1: f64,
    pub x2: f64,
    pub lam: f64,
    /// `lhs - rhs` of the defining inequality; positive means violated.
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityVerdict {
    pub holds_on_grid: bool,
    /// Present exactly when `holds_on_grid` is false.
    pub witness: Option<Witness>,
    /// The lattice point with the largest gap, violated or not.
    pub worst: Witness,
    /// `f` took a negative value on the grid (s-convexity is normally stated
    /// for nonnegative functions; reported, not rejected).
    pub negative_values: bool,
}

/// Lattice resolution and optional seeded local refinement around the worst
/// lattice point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeOptions {
    pub grid: usize,
    pub refine_samples: usize,
    pub seed: u64,
}

impl LatticeOptions {
    pub fn grid(grid: usize) -> Self {
        LatticeOptions {
            grid,
            refine_samples: 0,
            seed: 0,
        }
    }
}

pub fn check_generalized_convex<F>(f: F, lo: f64, hi: f64, grid: usize, ctx: &AlphaContext) -> Result<ConvexityVerdict>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    check_weighted(&f, 1.0, lo, hi, LatticeOptions::grid(grid), ctx)
}

pub fn check_s_convex_second<F>(
    f: F,
    s: f64,
    lo: f64,
    hi: f64,
    grid: usize,
    ctx: &AlphaContext,
) -> Result<ConvexityVerdict>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    check_s_convex_with(f, s, lo, hi, LatticeOptions::grid(grid), ctx)
}

pub fn check_s_convex_with<F>(
    f: F,
    s: f64,
    lo: f64,
    hi: f64,
    options: LatticeOptions,
    ctx: &AlphaContext,
) -> Result<ConvexityVerdict>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain("check_s_convex_second", format!("s = {s} not in (0, 1]")));
    }
    check_weighted(&f, s, lo, hi, options, ctx)
}

/// Gap of the defining inequality at one point, with weight exponent `s*alpha`.
pub fn convexity_gap<F>(f: &F, s: f64, x1: f64, x2: f64, lam: f64, ctx: &AlphaContext) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let e = s * ctx.alpha();
    let lhs = f(lam * x1 + (1.0 - lam) * x2)?;
    let rhs = signed_pow(lam, e) * f(x1)? + signed_pow(1.0 - lam, e) * f(x2)?;
    Ok(lhs - rhs)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn check_weighted<F>(
    f: &F,
    s: f64,
    lo: f64,
    hi: f64,
    options: LatticeOptions,
    ctx: &AlphaContext,
) -> Result<ConvexityVerdict>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::domain("convexity", format!("need 0 <= lo < hi, got [{lo}, {hi}]")));
    }
    if options.grid < 3 {
        return Err(Error::domain("convexity", format!("grid {} must be >= 3", options.grid)));
    }
    let xs = linspace(lo, hi, options.grid);
    let lams = linspace(0.0, 1.0, options.grid);
    let e = s * ctx.alpha();
    let fx = xs.iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
    let negative_values = fx.iter().any(|&v| v < 0.0);
    let weights: Vec<(f64, f64)> = lams
        .iter()
        .map(|&l| (signed_pow(l, e), signed_pow(1.0 - l, e)))
        .collect();

    // Each row reduces to its first maximal gap; rows are combined in order,
    // so the result does not depend on scheduling.
    let rows = (0..xs.len())
        .into_par_iter()
        .map(|i| {
            let mut best: Option<Witness> = None;
            for (j, &x2) in xs.iter().enumerate() {
                for (l, &lam) in lams.iter().enumerate() {
                    let lhs = f(lam * xs[i] + (1.0 - lam) * x2)?;
                    let gap = lhs - (weights[l].0 * fx[i] + weights[l].1 * fx[j]);
                    if best.is_none_or(|b| gap > b.gap) {
                        best = Some(Witness {
                            x1: xs[i],
                            x2,
                            lam,
                            gap,
                        });
                    }
                }
            }
            Ok(best.expect("grid is nonempty"))
        })
        .collect::<Result<Vec<Witness>>>()?;
    let mut worst = rows[0];
    for w in &rows[1..] {
        if w.gap > worst.gap {
            worst = *w;
        }
    }

    if options.refine_samples > 0 {
        worst = refine(f, s, lo, hi, worst, options, ctx)?;
    }

    let holds = !(worst.gap > ctx.slack_tol());
    Ok(ConvexityVerdict {
        holds_on_grid: holds,
        witness: if holds { None } else { Some(worst) },
        worst,
        negative_values,
    })
}

/// Seeded random search in a shrinking box around the worst lattice point.
fn refine<F>(
    f: &F,
    s: f64,
    lo: f64,
    hi: f64,
    start: Witness,
    options: LatticeOptions,
    ctx: &AlphaContext,
) -> Result<Witness>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut best = start;
    let mut step_x = (hi - lo) / (options.grid - 1) as f64;
    let mut step_l = 1.0 / (options.grid - 1) as f64;
    for i in 0..options.refine_samples {
        let x1 = (best.x1 + rng.gen_range(-1.0..=1.0) * step_x).clamp(lo, hi);
        let x2 = (best.x2 + rng.gen_range(-1.0..=1.0) * step_x).clamp(lo, hi);
        let lam = (best.lam + rng.gen_range(-1.0..=1.0) * step_l).clamp(0.0, 1.0);
        let gap = convexity_gap(f, s, x1, x2, lam, ctx)?;
        if gap > best.gap {
            best = Witness { x1, x2, lam, gap };
        }
        if (i + 1) % 64 == 0 {
            step_x *= 0.5;
            step_l *= 0.5;
        }
    }
    Ok(best)
}
