use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alpha_num::{AlphaContext, DEFAULT_FP_TOL, DEFAULT_SLACK_TOL};
use crate::error::{Error, Result};
use crate::harness::spec::{parse_function_spec, FunctionSpec};
use crate::ineq::IneqId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_slack")]
    pub slack: f64,
    #[serde(default = "default_fp")]
    pub fp: f64,
}

fn default_slack() -> f64 {
    DEFAULT_SLACK_TOL
}

fn default_fp() -> f64 {
    DEFAULT_FP_TOL
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            slack: DEFAULT_SLACK_TOL,
            fp: DEFAULT_FP_TOL,
        }
    }
}

/// Axes of a sweep. On disk this is JSON with the same field names;
/// function specs and inequality ids are strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub alphas: Vec<f64>,
    #[serde(default)]
    pub s_values: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    #[serde(default)]
    pub x_fractions: Vec<f64>,
    #[serde(default)]
    pub pq_pairs: Vec<(f64, f64)>,
    #[serde(with = "spec_strings")]
    pub functions: Vec<FunctionSpec>,
    pub inequalities: Vec<IneqId>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
}

mod spec_strings {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{parse_function_spec, FunctionSpec};

    pub fn serialize<S: Serializer>(specs: &[FunctionSpec], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(specs.iter().map(|f| f.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<FunctionSpec>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_function_spec(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        for &alpha in &self.alphas {
            AlphaContext::with_tolerances(alpha, self.tolerances.slack, self.tolerances.fp)
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        for &s in &self.s_values {
            if !(s > 0.0 && s <= 1.0) {
                return bad(format!("s = {s} not in (0, 1]"));
            }
        }
        for &(a, b) in &self.intervals {
            if !(a >= 0.0 && a < b && b.is_finite()) {
                return bad(format!("interval ({a}, {b}) does not satisfy 0 <= a < b"));
            }
        }
        for &t in &self.x_fractions {
            if !(0.0..=1.0).contains(&t) {
                return bad(format!("x fraction {t} not in [0, 1]"));
            }
        }
        for &(p, q) in &self.pq_pairs {
            if !(p > 1.0 && q > 1.0) || (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
                return bad(format!("(p, q) = ({p}, {q}) are not Holder conjugates"));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn context(&self, alpha: f64) -> Result<AlphaContext> {
        AlphaContext::with_tolerances(alpha, self.tolerances.slack, self.tolerances.fp)
    }

    /// Distinct `q` values of `pq_pairs`, in first-seen order.
    pub fn q_values(&self) -> Vec<f64> {
        let mut qs: Vec<f64> = Vec::new();
        for &(_, q) in &self.pq_pairs {
            if !qs.contains(&q) {
                qs.push(q);
            }
        }
        qs
    }
}

impl Default for SweepConfig {
    /// Axes used by `falsify` when no config file is given.
    fn default() -> Self {
        SweepConfig {
            alphas: vec![1.0],
            s_values: vec![0.25, 0.5, 0.75, 1.0],
            intervals: vec![(0.0, 1.0), (0.5, 2.0), (1.0, 3.0)],
            x_fractions: (0..9).map(|i| i as f64 / 8.0).collect(),
            pq_pairs: vec![(2.0, 2.0), (3.0, 1.5), (4.0, 4.0 / 3.0)],
            functions: Vec::new(),
            inequalities: Vec::new(),
            tolerances: Tolerances::default(),
            seed: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{
            "alphas": [1.0, 0.5],
            "s_values": [1.0],
            "intervals": [[0.0, 1.0]],
            "x_fractions": [0.5],
            "pq_pairs": [[2.0, 2.0]],
            "functions": ["poly:0,0,0,1", "ml:10"],
            "inequalities": ["thm1", "identity-residual-zero"],
            "seed": 3
        }"#;
        let cfg = SweepConfig::from_json(text).unwrap();
        assert_eq!(cfg.inequalities, vec![IneqId::Thm1, IneqId::Identity]);
        assert_eq!(cfg.tolerances, Tolerances::default());
        let again = SweepConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn rejects_invalid_axes() {
        let base = SweepConfig {
            functions: vec![parse_function_spec("mono:2").unwrap()],
            inequalities: vec![IneqId::Ghh],
            ..SweepConfig::default()
        };
        assert!(base.validate().is_ok());
        let mut c = base.clone();
        c.intervals = vec![(1.0, 1.0)];
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.pq_pairs = vec![(2.0, 3.0)];
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.alphas = vec![1.5];
        assert!(c.validate().is_err());
        let mut c = base;
        c.x_fractions = vec![1.1];
        assert!(c.validate().is_err());
        assert!(SweepConfig::from_json(r#"{"alphas":[1],"intervals":[],"functions":["mono:"],"inequalities":[]}"#).is_err());
        assert!(SweepConfig::from_json(r#"{"alphas":[1],"intervals":[],"functions":[],"inequalities":["nope"]}"#).is_err());
    }

    #[test]
    fn q_values_dedup() {
        let c = SweepConfig {
            pq_pairs: vec![(2.0, 2.0), (3.0, 1.5), (2.0, 2.0)],
            ..SweepConfig::default()
        };
        assert_eq!(c.q_values(), vec![2.0, 1.5]);
    }
}
