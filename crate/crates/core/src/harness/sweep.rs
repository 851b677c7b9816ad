//! Cartesian sweeps over a [`SweepConfig`].
//!
//! Axis rule: an inequality only ranges over the axes it uses. `s` for
//! everything but ghh, holder, ostrowski, identity and byparts; `(p, q)`
//! pairs for holder and the Theorem 2 forms; the distinct `q` values of
//! `pq_pairs` for the Theorem 3 forms; `x` for ostrowski, identity,
//! thm1-3 and the theta corollaries. The row count for one inequality is the
//! product of `alphas x functions x intervals` with its used axes.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fracpoly::AlphaSeries;
use crate::harness::config::SweepConfig;
use crate::harness::spec::FunctionSpec;
use crate::ineq::{Evaluator, IneqId, IneqReport, Params};

/// Suffix appended to rows with `alpha < 1`, where the bounds are computed
/// but not expected to hold.
pub const CONSISTENCY_NOTE: &str = "alpha<1: consistency study";

/// Evaluates one inequality at one parameter point. Holder rows use
/// `g = f^(alpha)`; byparts rows use `g = f`.
pub fn evaluate(ev: &Evaluator, id: IneqId, f: &AlphaSeries, params: &Params) -> Result<IneqReport> {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::Config(format!("{id} needs parameter {name}")));
    let a = need(params.a, "a")?;
    let b = need(params.b, "b")?;
    let mut report = match id {
        IneqId::Ghh => ev.eval_ghh(f, a, b)?,
        IneqId::Shh => ev.eval_shh(f, need(params.s, "s")?, a, b)?,
        IneqId::Holder => {
            let g = f.derivative()?;
            ev.eval_holder_series(f, &g, need(params.p, "p")?, need(params.q, "q")?, a, b)?
        }
        IneqId::Ostrowski => ev.eval_ostrowski_classic(f, need(params.x, "x")?, a, b)?,
        IneqId::Identity => ev.eval_identity(f, need(params.x, "x")?, a, b)?,
        IneqId::Byparts => ev.eval_byparts(f, f, a, b)?,
        IneqId::Thm1 => ev.eval_thm1(f, need(params.s, "s")?, need(params.x, "x")?, a, b)?,
        IneqId::Thm2 => ev.eval_thm2(
            f,
            need(params.s, "s")?,
            need(params.p, "p")?,
            need(params.q, "q")?,
            need(params.x, "x")?,
            a,
            b,
        )?,
        IneqId::Thm3 => ev.eval_thm3(f, need(params.s, "s")?, need(params.q, "q")?, need(params.x, "x")?, a, b)?,
        IneqId::Corollary(v) => ev.eval_corollary(v, f, need(params.s, "s")?, params.p, params.q, params.x, a, b)?,
    };
    if ev.ctx().alpha() < 1.0 {
        if !report.notes.is_empty() {
            report.notes.push_str("; ");
        }
        report.notes.push_str(CONSISTENCY_NOTE);
    }
    Ok(report)
}

/// Like [`evaluate`], but failures become error rows.
pub fn evaluate_row(ev: &Result<Evaluator>, id: IneqId, spec: &FunctionSpec, params: Params) -> IneqReport {
    let name = spec.to_string();
    let result = ev.as_ref().map_err(clone_error).and_then(|ev| {
        let f = spec.to_series(ev.ctx())?;
        evaluate(ev, id, &f, &params)
    });
    match result {
        Ok(mut report) => {
            report.params = params;
            report.function = name;
            report
        }
        Err(e) => IneqReport::failed(id, params, name, &e),
    }
}

fn clone_error(e: &Error) -> Error {
    Error::Config(e.to_string())
}

/// All parameter points of one inequality at one `alpha` and interval.
pub fn points(cfg: &SweepConfig, id: IneqId, alpha: f64, (a, b): (f64, f64)) -> Vec<Params> {
    let base = Params {
        alpha: Some(alpha),
        a: Some(a),
        b: Some(b),
        ..Params::default()
    };
    let opt = |used: bool, values: &[f64]| -> Vec<Option<f64>> {
        if used {
            values.iter().map(|&v| Some(v)).collect()
        } else {
            vec![None]
        }
    };
    let s_axis = opt(id.uses_s(), &cfg.s_values);
    let xs: Vec<f64> = cfg.x_fractions.iter().map(|&t| a + t * (b - a)).collect();
    let x_axis = opt(id.uses_x(), &xs);
    let pq_axis: Vec<(Option<f64>, Option<f64>)> = match (id.uses_p(), id.uses_q()) {
        (true, _) => cfg.pq_pairs.iter().map(|&(p, q)| (Some(p), Some(q))).collect(),
        (false, true) => cfg.q_values().into_iter().map(|q| (None, Some(q))).collect(),
        (false, false) => vec![(None, None)],
    };

    let mut out = Vec::new();
    for &s in &s_axis {
        for &x in &x_axis {
            for &(p, q) in &pq_axis {
                out.push(Params { s, x, p, q, ..base });
            }
        }
    }
    out
}

pub fn compare_reports(l: &IneqReport, r: &IneqReport) -> Ordering {
    l.ineq
        .cmp(&r.ineq)
        .then_with(|| l.params.sort_key_cmp(&r.params))
        .then_with(|| l.function.cmp(&r.function))
}

struct Job<'a> {
    id: IneqId,
    spec: &'a FunctionSpec,
    params: Params,
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<IneqReport>> {
    run_sweep_with(cfg, false)
}

/// Runs every point; `parallel` changes scheduling only, never the output.
pub fn run_sweep_with(cfg: &SweepConfig, parallel: bool) -> Result<Vec<IneqReport>> {
    cfg.validate()?;
    let mut evaluators: BTreeMap<u64, Result<Evaluator>> = BTreeMap::new();
    if !cfg.functions.is_empty() && !cfg.inequalities.is_empty() {
        for &alpha in &cfg.alphas {
            evaluators
                .entry(alpha.to_bits())
                .or_insert_with(|| cfg.context(alpha).and_then(Evaluator::new));
        }
    }

    let mut jobs = Vec::new();
    for &id in &cfg.inequalities {
        for &alpha in &cfg.alphas {
            for spec in &cfg.functions {
                for &interval in &cfg.intervals {
                    for params in points(cfg, id, alpha, interval) {
                        jobs.push(Job { id, spec, params });
                    }
                }
            }
        }
    }

    let run = |job: &Job| {
        let ev = &evaluators[&job.params.alpha.expect("set by points").to_bits()];
        evaluate_row(ev, job.id, job.spec, job.params)
    };
    let mut rows: Vec<IneqReport> = if parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };
    rows.sort_by(compare_reports);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::spec::parse_function_spec;

    fn cfg(ineqs: &[&str], fns: &[&str]) -> SweepConfig {
        SweepConfig {
            alphas: vec![1.0],
            s_values: vec![1.0],
            intervals: vec![(0.0, 1.0)],
            x_fractions: vec![0.5],
            pq_pairs: vec![(2.0, 2.0)],
            functions: fns.iter().map(|t| parse_function_spec(t).unwrap()).collect(),
            inequalities: ineqs.iter().map(|t| t.parse().unwrap()).collect(),
            ..SweepConfig::default()
        }
    }

    #[test]
    fn single_thm1_row() {
        let rows = run_sweep(&cfg(&["thm1"], &["poly:0,0,0,1"])).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert!((r.lhs - 0.125).abs() < 1e-12 && (r.rhs - 0.125).abs() < 1e-12 && r.holds);
        assert_eq!(r.function, "poly:0,0,0,1");
        assert_eq!(r.params.x, Some(0.5));
        assert_eq!(r.params.p, None);
    }

    #[test]
    fn cardinalities() {
        assert!(run_sweep(&cfg(&["thm1"], &[])).unwrap().is_empty());
        let mut c = cfg(&["ghh"], &["mono:2", "mono:3"]);
        c.alphas = vec![1.0, 0.5];
        assert_eq!(run_sweep(&c).unwrap().len(), 4);

        let mut c = cfg(&[], &["mono:2"]);
        c.s_values = vec![0.5, 1.0];
        c.x_fractions = vec![0.0, 0.5, 1.0];
        c.pq_pairs = vec![(2.0, 2.0), (3.0, 1.5), (4.0, 4.0 / 3.0), (1.5, 3.0)];
        c.intervals = vec![(0.0, 1.0), (1.0, 2.0)];
        let expect = |id: IneqId| -> usize {
            let s = if id.uses_s() { 2 } else { 1 };
            let x = if id.uses_x() { 3 } else { 1 };
            // four pairs with four distinct q values
            let pq = if id.uses_p() || id.uses_q() { 4 } else { 1 };
            2 * s * x * pq
        };
        for id in IneqId::all() {
            c.inequalities = vec![id];
            assert_eq!(run_sweep(&c).unwrap().len(), expect(id), "{id}");
        }
        assert_eq!(points(&c, IneqId::Thm1, 1.0, (0.0, 1.0)).len(), 6);
        assert_eq!(points(&c, IneqId::Byparts, 1.0, (0.0, 1.0)).len(), 1);
    }

    #[test]
    fn parallel_matches_serial() {
        let mut c = cfg(&["thm2", "ghh", "identity"], &["mono:3", "ml:6"]);
        c.alphas = vec![0.5, 1.0];
        c.x_fractions = vec![0.0, 0.25, 1.0];
        let serial = run_sweep_with(&c, false).unwrap();
        let parallel = run_sweep_with(&c, true).unwrap();
        assert_eq!(serial, parallel);
        assert_eq!(serial[0].ineq, IneqId::Ghh);
        assert!(serial.windows(2).all(|w| compare_reports(&w[0], &w[1]) != Ordering::Greater));
    }

    #[test]
    fn errors_become_rows() {
        // the second derivative of x^(0.5 alpha) leaves the series class
        let mut c = cfg(&["thm1"], &["mono:0.5"]);
        c.x_fractions = vec![0.0];
        let rows = run_sweep(&c).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].is_error() && rows[0].lhs.is_nan() && !rows[0].holds);
    }

    #[test]
    fn consistency_rows_are_flagged() {
        let mut c = cfg(&["identity", "byparts"], &["mono:1"]);
        c.alphas = vec![0.5];
        c.x_fractions = vec![1.0];
        let rows = run_sweep(&c).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.notes.contains(CONSISTENCY_NOTE) && r.is_violation()));
        assert!((rows[0].lhs - 0.644_07).abs() < 1e-5);
        assert!((rows[1].lhs - (std::f64::consts::FRAC_PI_2 - 1.0)).abs() < 1e-9);
    }
}
