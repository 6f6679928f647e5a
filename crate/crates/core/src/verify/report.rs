use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One check of one trial. `margin = bound − observed`; `ratio` is the observed
/// value over the right-hand side without its constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub check: String,
    pub inputs_digest: String,
    pub bound: Option<f64>,
    pub observed: f64,
    pub margin: Option<f64>,
    pub ratio: Option<f64>,
    pub pass: bool,
    pub self_test: bool,
}

impl TrialRecord {
    /// `observed ≤ bound` up to `slack · bound`.
    pub fn bounded(trial: usize, check: &str, digest: &str, bound: f64, observed: f64, rhs: Option<f64>, slack: f64) -> Self {
        let margin = bound - observed;
        Self {
            trial,
            check: check.into(),
            inputs_digest: digest.into(),
            bound: Some(bound),
            observed,
            margin: Some(margin),
            ratio: rhs.map(|r| observed / r),
            pass: margin >= -slack * bound.abs(),
            self_test: false,
        }
    }

    /// An empirical ratio with no known constant; passes when finite.
    pub fn estimate(trial: usize, check: &str, digest: &str, observed: f64, rhs: f64) -> Self {
        let ratio = observed / rhs;
        Self {
            trial,
            check: check.into(),
            inputs_digest: digest.into(),
            bound: None,
            observed,
            margin: None,
            ratio: Some(ratio),
            pass: ratio.is_finite(),
            self_test: false,
        }
    }

    /// Passes when `lo ≤ observed ≤ hi`; the margin is the distance to the nearer end.
    pub fn window(trial: usize, check: &str, digest: &str, observed: f64, lo: f64, hi: f64) -> Self {
        let margin = (hi - observed).min(observed - lo);
        Self {
            trial,
            check: check.into(),
            inputs_digest: digest.into(),
            bound: Some(hi),
            observed,
            margin: Some(margin),
            ratio: None,
            pass: margin >= 0.0,
            self_test: false,
        }
    }

    /// Copy with the bound multiplied by `scale`, marked as a self-test.
    fn forced(&self, scale: f64, slack: f64) -> Self {
        let bound = self.bound.expect("forced failures need a bound") * scale;
        let margin = bound - self.observed;
        Self {
            check: format!("self_test:{}", self.check),
            bound: Some(bound),
            margin: Some(margin),
            pass: margin >= -slack * bound.abs(),
            self_test: true,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass_count: usize,
    pub total: usize,
    /// Smallest `bound − observed` over the inequality checks.
    pub worst_margin: Option<f64>,
    /// Largest ratio over all non-self-test records.
    pub empirical_constant: Option<f64>,
    /// Largest ratio per check name.
    pub constants: BTreeMap<String, f64>,
    pub self_test_failed: bool,
    /// All gating checks pass and the self-test failed.
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub parameters: serde_json::Value,
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    /// Adds a self-test (the trial-0 record closest to its bound, with the bound
    /// scaled by `self_test_scale`) unless one is present, then summarises.
    pub(crate) fn assemble(
        suite: &str,
        seed: u64,
        trials: usize,
        parameters: serde_json::Value,
        mut records: Vec<TrialRecord>,
        self_test_scale: f64,
        slack: f64,
    ) -> Self {
        if !records.iter().any(|r| r.self_test) {
            let pick = records
                .iter()
                .filter(|r| r.trial == 0 && r.ratio.is_some() && r.bound.is_some_and(|b| b > 0.0))
                .max_by(|a, b| (a.observed / a.bound.unwrap()).total_cmp(&(b.observed / b.bound.unwrap())));
            if let Some(rec) = pick {
                records.push(rec.forced(self_test_scale, slack));
            }
        }
        let gating: Vec<&TrialRecord> = records.iter().filter(|r| !r.self_test).collect();
        let pass_count = gating.iter().filter(|r| r.pass).count();
        let worst_margin = gating.iter().filter(|r| r.ratio.is_some()).filter_map(|r| r.margin).reduce(f64::min);
        let mut constants = BTreeMap::new();
        for r in &gating {
            if let Some(x) = r.ratio {
                let slot = constants.entry(r.check.clone()).or_insert(x);
                *slot = slot.max(x);
            }
        }
        let empirical_constant = constants.values().copied().reduce(f64::max);
        let self_tests: Vec<&TrialRecord> = records.iter().filter(|r| r.self_test).collect();
        let self_test_failed = !self_tests.is_empty() && self_tests.iter().all(|r| !r.pass);
        let summary = Summary {
            pass_count,
            total: gating.len(),
            worst_margin,
            empirical_constant,
            constants,
            self_test_failed,
            passed: pass_count == gating.len() && self_test_failed,
        };
        Self { suite: suite.into(), seed, trials, parameters, records, summary }
    }

    pub fn passed(&self) -> bool {
        self.summary.passed
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("report: {e}")))
    }

    /// One row per record.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let err = |e: csv::Error| Error::InvalidInput(e.to_string());
        for r in &self.records {
            wr.serialize(r).map_err(err)?;
        }
        wr.flush().map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn records_for<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a TrialRecord> + 'a {
        self.records.iter().filter(move |r| r.check == check)
    }
}
