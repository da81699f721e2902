use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::report::fmt_f64;

fn fmt_bound(v: f64) -> String {
    if v != 0.0 && v.is_finite() && !(1e-3..1e6).contains(&v.abs()) {
        format!("{v:e}")
    } else {
        fmt_f64(v)
    }
}

/// One pass/fail criterion of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Human-readable acceptance rule, e.g. `"in [1.9, 2.1]"`.
    pub rule: String,
    pub passed: bool,
}

impl Check {
    pub fn new(name: &str, value: f64, rule: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), value, rule: rule.into(), passed }
    }

    pub fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Self::new(name, value, format!("<= {}", fmt_bound(bound)), value <= bound)
    }

    pub fn at_least(name: &str, value: f64, bound: f64) -> Self {
        Self::new(name, value, format!(">= {}", fmt_bound(bound)), value >= bound)
    }

    pub fn within(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        Self::new(name, value, format!("in [{}, {}]", fmt_bound(lo), fmt_bound(hi)), value >= lo && value <= hi)
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {} ({})", self.name, fmt_bound(self.value), self.rule)
    }
}

/// Measurements of one experiment: a CSV table plus named constants and
/// checks.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub experiment: String,
    pub columns: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Vec<f64>>,
    pub constants: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub seed: Option<u64>,
}

/// The JSON written next to the CSV.
#[derive(Clone, Debug, Serialize)]
pub struct Summary<'a> {
    pub experiment: &'a str,
    pub passed: bool,
    pub constants: &'a BTreeMap<String, f64>,
    pub checks: &'a [Check],
    pub notes: &'a [String],
    pub seed: Option<u64>,
    pub config_hash: &'a str,
}

impl Report {
    pub fn new(experiment: &str, columns: &[&str]) -> Self {
        Report {
            experiment: experiment.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: vec![],
            constants: BTreeMap::new(),
            checks: vec![],
            notes: vec![],
            seed: None,
        }
    }

    pub fn row(&mut self, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn constant(&mut self, name: &str, value: f64) {
        self.constants.insert(name.into(), value);
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.constants.get(name).copied()
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| fmt_f64(*v)).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn summary<'a>(&'a self, config_hash: &'a str) -> Summary<'a> {
        Summary {
            experiment: &self.experiment,
            passed: self.passed(),
            constants: &self.constants,
            checks: &self.checks,
            notes: &self.notes,
            seed: self.seed,
            config_hash,
        }
    }
}
