//! Seeded random search for violations, followed by shrinking.
//!
//! A trial scales every coefficient of the template by an independent
//! `U(0, 2]` factor (`U[-2, 2]` in adversarial mode) and draws the remaining
//! parameters from the config axes. Shrinking applies simplifications one at a
//! time and keeps a step only if the point still violates:
//! coefficients go to zero, to the nearest integer, or are halved while their
//! magnitude exceeds one; `x` moves toward the midpoint; `[a, b]` moves toward
//! `[0, 1]` and then toward unit length. Every checked inequality is
//! homogeneous in `f`, so halving below magnitude one cannot simplify a witness
//! further and is not attempted.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::harness::config::SweepConfig;
use crate::harness::spec::{FunctionSpec, SpecForm};
use crate::harness::sweep::{evaluate, points};
use crate::fracpoly::AlphaSeries;
use crate::ineq::{Evaluator, IneqId, IneqReport, Params};

const SHRINK_STEP_LIMIT: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FalsifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub adversarial: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    /// Re-evaluation of the shrunk point; violates by construction.
    pub report: IneqReport,
    pub function: FunctionSpec,
    /// 1-based index of the trial that first violated.
    pub trial: usize,
    pub shrink_steps: usize,
}

#[derive(Debug, Clone)]
struct Candidate {
    terms: Vec<(f64, f64)>,
    params: Params,
}

impl Candidate {
    fn function(&self) -> FunctionSpec {
        match self.terms.as_slice() {
            [(k, c)] if *c == 1.0 => FunctionSpec::from_form(SpecForm::Mono(*k)),
            _ => FunctionSpec::from_form(SpecForm::Series(self.terms.clone())),
        }
    }
}

struct Search<'a> {
    id: IneqId,
    cfg: &'a SweepConfig,
    evaluators: BTreeMap<u64, Evaluator>,
}

impl Search<'_> {
    fn evaluator(&mut self, alpha: f64) -> Result<&Evaluator> {
        if !self.evaluators.contains_key(&alpha.to_bits()) {
            let ev = Evaluator::new(self.cfg.context(alpha)?)?;
            self.evaluators.insert(alpha.to_bits(), ev);
        }
        Ok(&self.evaluators[&alpha.to_bits()])
    }

    /// The report if the candidate violates, `None` if it holds or fails to evaluate.
    fn violation(&mut self, c: &Candidate) -> Result<Option<IneqReport>> {
        let alpha = c.params.alpha.expect("candidates carry alpha");
        let id = self.id;
        let ev = self.evaluator(alpha)?;
        let f = match AlphaSeries::from_terms(c.terms.clone(), *ev.ctx()) {
            Ok(f) => f,
            Err(_) => return Ok(None),
        };
        Ok(match evaluate(ev, id, &f, &c.params) {
            Ok(mut r) if r.is_violation() => {
                r.params = c.params;
                r.function = c.function().to_string();
                Some(r)
            }
            _ => None,
        })
    }
}

pub fn falsify(id: IneqId, family: &FunctionSpec, cfg: &SweepConfig, options: FalsifyOptions) -> Result<Option<Counterexample>> {
    if options.trials == 0 {
        return Err(Error::Config("falsify needs at least one trial".into()));
    }
    cfg.validate()?;
    if cfg.alphas.is_empty() || cfg.intervals.is_empty() {
        return Err(Error::Config("falsify needs at least one alpha and one interval".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut search = Search {
        id,
        cfg,
        evaluators: BTreeMap::new(),
    };

    for trial in 1..=options.trials {
        let alpha = cfg.alphas[rng.gen_range(0..cfg.alphas.len())];
        let interval = cfg.intervals[rng.gen_range(0..cfg.intervals.len())];
        let choices = points(cfg, id, alpha, interval);
        if choices.is_empty() {
            return Err(Error::Config(format!("config has an empty axis used by {id}")));
        }
        let params = choices[rng.gen_range(0..choices.len())];
        let ctx = cfg.context(alpha)?;
        let terms = family
            .terms(&ctx)?
            .into_iter()
            .map(|(k, c)| {
                let u = if options.adversarial {
                    rng.gen_range(-2.0..=2.0)
                } else {
                    2.0 - rng.gen_range(0.0..2.0)
                };
                (k, c * u)
            })
            .collect();
        let candidate = Candidate { terms, params };
        if let Some(report) = search.violation(&candidate)? {
            let (report, candidate, steps) = shrink(&mut search, candidate, report)?;
            return Ok(Some(Counterexample {
                report,
                function: candidate.function(),
                trial,
                shrink_steps: steps,
            }));
        }
    }
    Ok(None)
}

fn simpler_coefficients(c: f64) -> Vec<f64> {
    let mut out = vec![0.0, c.round()];
    if c.abs() > 1.0 {
        out.push(c / 2.0);
    }
    out.retain(|&v| v != c);
    out
}

fn with_interval(params: &Params, a: f64, b: f64) -> Params {
    let (a0, b0) = (params.a.expect("a"), params.b.expect("b"));
    let x = params.x.map(|x| {
        let t = (x - a0) / (b0 - a0);
        if t >= 1.0 {
            b
        } else {
            a + t * (b - a)
        }
    });
    Params {
        a: Some(a),
        b: Some(b),
        x,
        ..*params
    }
}

fn neighbours(c: &Candidate) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (i, &(_, coeff)) in c.terms.iter().enumerate() {
        for v in simpler_coefficients(coeff) {
            let mut terms = c.terms.clone();
            if v == 0.0 {
                terms.remove(i);
            } else {
                terms[i].1 = v;
            }
            if !terms.is_empty() {
                out.push(Candidate { terms, params: c.params });
            }
        }
    }
    let (a, b) = (c.params.a.expect("a"), c.params.b.expect("b"));
    if let Some(x) = c.params.x {
        let mid = 0.5 * (a + b);
        for target in [mid, 0.5 * (x + mid)] {
            if target != x {
                out.push(Candidate {
                    terms: c.terms.clone(),
                    params: Params { x: Some(target), ..c.params },
                });
            }
        }
    }
    let length = b - a;
    let targets = [(0.0, 1.0), (a, a + 1.0), (a, a + 0.5 * (length + 1.0))];
    for (na, nb) in targets {
        if (na, nb) != (a, b) {
            out.push(Candidate {
                terms: c.terms.clone(),
                params: with_interval(&c.params, na, nb),
            });
        }
    }
    out
}

fn shrink(search: &mut Search, mut current: Candidate, mut report: IneqReport) -> Result<(IneqReport, Candidate, usize)> {
    let mut steps = 0;
    'outer: while steps < SHRINK_STEP_LIMIT {
        for next in neighbours(&current) {
            if let Some(r) = search.violation(&next)? {
                current = next;
                report = r;
                steps += 1;
                continue 'outer;
            }
        }
        break;
    }
    Ok((report, current, steps))
}
