//! Deterministic verification suites and their reports.

mod arith;
mod clifford;
mod etale;
mod quadform;
mod ramify;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::galois::Corpus;

pub use clifford::{delta2_instances, twist_request_json, Delta2Instance};
pub use etale::{metabolic_twist_instances, prop27_instances, thm03_instances, TwistCase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Arith,
    Quadform,
    Clifford,
    Etale,
    Ramify,
    All,
}

impl Suite {
    pub const PARTS: [Suite; 5] = [Suite::Arith, Suite::Quadform, Suite::Clifford, Suite::Etale, Suite::Ramify];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Arith => "arith",
            Suite::Quadform => "quadform",
            Suite::Clifford => "clifford",
            Suite::Etale => "etale",
            Suite::Ramify => "ramify",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::PARTS
            .iter()
            .chain(&[Suite::All])
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_rank: usize,
    pub max_group_order: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_rank: 6, max_group_order: 24 }
    }
}

/// Instance counts per randomized family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Samples {
    pub hilbert_pairs: usize,
    pub forms: usize,
    pub form_pairs: usize,
    pub metabolic_per_rank: usize,
    pub clifford_per_algebra: usize,
    pub orthogonal: usize,
}

impl Default for Samples {
    fn default() -> Self {
        Samples {
            hilbert_pairs: 500,
            forms: 200,
            form_pairs: 200,
            metabolic_per_rank: 10,
            clifford_per_algebra: 25,
            orthogonal: 100,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub bounds: Bounds,
    pub samples: Samples,
    pub corpus: Corpus,
}

impl VerifyConfig {
    pub fn new(seed: u64, bounds: Bounds) -> Self {
        VerifyConfig { seed, bounds, samples: Samples::default(), corpus: Corpus::bundled().with_derived() }
    }

    /// Independent stream per suite, so a suite's instances do not depend
    /// on which other suites run.
    pub(crate) fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// Result of one check on one instance.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub check: String,
    pub label: String,
    pub status: Status,
    pub detail: String,
    pub input: Value,
}

impl Outcome {
    pub fn new(check: &str, label: &str, res: Result<bool>, input: impl FnOnce() -> Value) -> Self {
        let (status, detail) = match res {
            Ok(true) => (Status::Pass, String::new()),
            Ok(false) => (Status::Fail, "check returned false".to_string()),
            Err(e) => (Status::Fail, e.to_string()),
        };
        let input = if status == Status::Fail { input() } else { Value::Null };
        Outcome { check: check.into(), label: label.into(), status, detail, input }
    }

    pub fn skip(check: &str, label: &str, why: impl Into<String>) -> Self {
        Outcome { check: check.into(), label: label.into(), status: Status::Skip, detail: why.into(), input: Value::Null }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub label: String,
    pub detail: String,
    pub input: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub instances: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<Failure>,
}

impl CheckSummary {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// One run: deterministic given suite, seed and bounds. Wall time is not
/// part of the record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub suite: Suite,
    pub seed: u64,
    pub bounds: Bounds,
    pub instances: usize,
    pub passed: bool,
    pub checks: Vec<CheckSummary>,
}

impl RunReport {
    pub fn from_outcomes(suite: Suite, cfg: &VerifyConfig, outcomes: Vec<Outcome>) -> Self {
        let mut by_check: BTreeMap<String, CheckSummary> = BTreeMap::new();
        let mut labels = std::collections::BTreeSet::new();
        for o in outcomes {
            let suite = o.check.split('.').next().unwrap_or_default();
            labels.insert(format!("{suite}:{}", o.label));
            let s = by_check.entry(o.check.clone()).or_insert_with(|| CheckSummary {
                name: o.check.clone(),
                instances: 0,
                passed: 0,
                skipped: 0,
                failures: Vec::new(),
            });
            s.instances += 1;
            match o.status {
                Status::Pass => s.passed += 1,
                Status::Skip => s.skipped += 1,
                Status::Fail => s.failures.push(Failure { label: o.label, detail: o.detail, input: o.input }),
            }
        }
        let mut checks: Vec<CheckSummary> = by_check.into_values().collect();
        for c in &mut checks {
            c.failures.sort_by(|a, b| a.label.cmp(&b.label));
        }
        RunReport {
            suite,
            seed: cfg.seed,
            bounds: cfg.bounds,
            instances: labels.len(),
            passed: checks.iter().all(CheckSummary::ok),
            checks,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let mut out = format!(
            "suite {} seed {} max-rank {} max-group-order {}\n",
            self.suite, self.seed, self.bounds.max_rank, self.bounds.max_group_order
        );
        out += &format!("{:<width$}  {:>9}  {:>6}  {:>6}  {:>6}  status\n", "check", "instances", "pass", "skip", "fail");
        for c in &self.checks {
            out += &format!(
                "{:<width$}  {:>9}  {:>6}  {:>6}  {:>6}  {}\n",
                c.name,
                c.instances,
                c.passed,
                c.skipped,
                c.failures.len(),
                if c.ok() { "ok" } else { "FAIL" }
            );
            for f in &c.failures {
                out += &format!("    {}: {}\n", f.label, f.detail);
            }
        }
        out += &format!("{} instances, {}\n", self.instances, if self.passed { "all checks passed" } else { "FAILED" });
        out
    }
}

fn outcomes_for(suite: Suite, cfg: &VerifyConfig) -> Vec<Outcome> {
    match suite {
        Suite::Arith => arith::run(cfg),
        Suite::Quadform => quadform::run(cfg),
        Suite::Clifford => clifford::run(cfg),
        Suite::Etale => etale::run(cfg),
        Suite::Ramify => ramify::run(cfg),
        Suite::All => Suite::PARTS.iter().flat_map(|&s| outcomes_for(s, cfg)).collect(),
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> RunReport {
    RunReport::from_outcomes(suite, cfg, outcomes_for(suite, cfg))
}

pub use arith::hilbert_pair_checks;
pub use quadform::{congruence_checks, metabolic_checks, whitney_checks};
pub use clifford::{clifford_algebra_checks, delta2_checks};
pub use etale::{etale_checks, metabolic_twist_checks, prop27_checks, thm03_checks};
pub use ramify::{ramify_sweep_checks, woods_hole_checks};

/// Group outcomes (in any order) into a report-style summary.
pub fn summarize(cfg: &VerifyConfig, outcomes: Vec<Outcome>) -> RunReport {
    RunReport::from_outcomes(Suite::All, cfg, outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> VerifyConfig {
        let mut cfg = VerifyConfig::new(seed, Bounds { max_rank: 3, max_group_order: 9 });
        cfg.samples = Samples { hilbert_pairs: 20, forms: 10, form_pairs: 10, metabolic_per_rank: 2, clifford_per_algebra: 3, orthogonal: 5 };
        cfg
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::PARTS.iter().chain(&[Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(Suite::Quadform, &small(7)).to_json();
        let b = run_suite(Suite::Quadform, &small(7)).to_json();
        assert_eq!(a, b);
        assert_ne!(a, run_suite(Suite::Quadform, &small(8)).to_json());
    }

    #[test]
    fn failures_carry_inputs() {
        let cfg = small(1);
        let outcomes = vec![
            Outcome::new("x.check", "b", Ok(false), || serde_json::json!({"n": 2})),
            Outcome::new("x.check", "a", Err(Error::Degenerate), || serde_json::json!({"n": 1})),
            Outcome::new("x.check", "c", Ok(true), || unreachable!()),
            Outcome::skip("x.check", "d", "out of regime"),
        ];
        let r = summarize(&cfg, outcomes);
        assert!(!r.passed);
        let c = r.check("x.check").unwrap();
        assert_eq!((c.instances, c.passed, c.skipped), (4, 1, 1));
        assert_eq!(c.failures[0].label, "a");
        assert_eq!(c.failures[1].input, serde_json::json!({"n": 2}));
        assert!(r.to_table().contains("FAIL"));
    }
}
