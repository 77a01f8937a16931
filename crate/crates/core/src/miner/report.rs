use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use crate::mapcalc::{CheckOutcome, FiniteMap};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub holds: u64,
    pub violated: u64,
    pub not_applicable: u64,
    pub hypothesis_not_met: u64,
}

impl Tally {
    pub fn add(&mut self, outcome: CheckOutcome) {
        match outcome {
            CheckOutcome::Holds => self.holds += 1,
            CheckOutcome::Violated => self.violated += 1,
            CheckOutcome::NotApplicable => self.not_applicable += 1,
            CheckOutcome::HypothesisNotMet => self.hypothesis_not_met += 1,
        }
    }

    pub fn merge(&mut self, other: &Tally) {
        self.holds += other.holds;
        self.violated += other.violated;
        self.not_applicable += other.not_applicable;
        self.hypothesis_not_met += other.hypothesis_not_met;
    }

    pub fn total(&self) -> u64 {
        self.holds + self.violated + self.not_applicable + self.hypothesis_not_met
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FindingKind {
    Violation,
    Counterexample,
    /// Breaks a statement only where its hypothesis fails.
    HypothesisGated,
    Extremal,
}

impl FindingKind {
    pub fn name(self) -> &'static str {
        match self {
            FindingKind::Violation => "violation",
            FindingKind::Counterexample => "counterexample",
            FindingKind::HypothesisGated => "hypothesis-gated",
            FindingKind::Extremal => "extremal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Map(FiniteMap),
    /// `f: X → Y` and `g: Y → Z`.
    Composable(FiniteMap, FiniteMap),
}

/// `X=..;Y=..;f=..` for a map, with `;Z=..;g=..` appended for a pair.
impl fmt::Display for Instance {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Map(f) => write!(out, "{f}"),
            Instance::Composable(f, g) => {
                write!(out, "{f};Z={};g=", g.cod())?;
                crate::mapcalc::write_table(out, g.table())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub kind: FindingKind,
    pub check: String,
    pub instance: Instance,
    /// Space-free `key=value` fragments separated by `,`.
    pub certificate: String,
}

impl Finding {
    pub(crate) fn sort_key(&self) -> (FindingKind, String, String) {
        (self.kind, self.check.clone(), self.instance.to_string())
    }
}

#[derive(Clone, Debug, Default)]
pub struct MinerReport {
    /// `verify` or the mined pattern.
    pub campaign: String,
    pub bounds: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub prng: Option<&'static str>,
    /// Instances visited, per kind of instance.
    pub counts: BTreeMap<String, u64>,
    pub tallies: BTreeMap<String, Tally>,
    /// Sorted by kind, check and instance.
    pub findings: Vec<Finding>,
    /// Extra results, such as per-size maxima or "none within bounds".
    pub notes: BTreeMap<String, String>,
    pub elapsed: Duration,
}

impl MinerReport {
    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.kind == FindingKind::Violation)
    }

    pub fn has_violations(&self) -> bool {
        self.violations().next().is_some()
    }

    pub(crate) fn sort_findings(&mut self) {
        self.findings.sort_by_cached_key(Finding::sort_key);
    }
}
