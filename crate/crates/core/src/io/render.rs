use std::fmt;
use std::str::FromStr;

use crate::miner::MinerReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    /// One `tag key=value ...` line per record, lines sorted.
    #[default]
    Records,
    /// Aligned tables, one per record tag.
    Human,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "records" => Ok(Format::Records),
            "human" => Ok(Format::Human),
            other => Err(format!("unknown format `{other}` (expected records or human)")),
        }
    }
}

/// A tagged line of `key=value` fields. Values never contain whitespace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub tag: String,
    pub fields: Vec<(String, String)>,
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag)?;
        for (k, v) in &self.fields {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecordSet {
    pub records: Vec<Record>,
}

fn squash(v: &str) -> String {
    if v.is_empty() {
        return "-".to_string();
    }
    v.split_whitespace().collect::<Vec<_>>().join("_")
}

impl RecordSet {
    pub fn push<K: fmt::Display, V: fmt::Display>(&mut self, tag: &str, fields: impl IntoIterator<Item = (K, V)>) {
        self.records.push(Record {
            tag: tag.to_string(),
            fields: fields.into_iter().map(|(k, v)| (k.to_string(), squash(&v.to_string()))).collect(),
        });
    }

    pub fn extend(&mut self, other: RecordSet) {
        self.records.extend(other.records);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Records => self.lines(),
            Format::Human => self.tables(),
        }
    }

    /// Sorted record lines.
    pub fn lines(&self) -> String {
        let mut lines: Vec<String> = self.records.iter().map(Record::to_string).collect();
        lines.sort();
        lines.iter().map(|l| format!("{l}\n")).collect()
    }

    /// One table per tag, in order of first appearance; columns are the
    /// field keys in order of first appearance.
    pub fn tables(&self) -> String {
        let mut tags: Vec<&str> = Vec::new();
        for r in &self.records {
            if !tags.contains(&r.tag.as_str()) {
                tags.push(&r.tag);
            }
        }
        let mut out = String::new();
        for tag in tags {
            let rows: Vec<&Record> = self.records.iter().filter(|r| r.tag == tag).collect();
            let mut cols: Vec<&str> = Vec::new();
            for r in &rows {
                for (k, _) in &r.fields {
                    if !cols.contains(&k.as_str()) {
                        cols.push(k);
                    }
                }
            }
            let cell = |r: &Record, c: &str| {
                r.fields.iter().find(|(k, _)| k == c).map_or("", |(_, v)| v.as_str()).to_string()
            };
            let widths: Vec<usize> = cols
                .iter()
                .map(|c| rows.iter().map(|r| cell(r, c).len()).max().unwrap_or(0).max(c.len()))
                .collect();
            out.push_str(&format!("[{tag}]\n"));
            let line = |cells: Vec<String>| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                format!("  {}\n", padded.join("  ").trim_end())
            };
            out.push_str(&line(cols.iter().map(|c| c.to_string()).collect()));
            for r in rows {
                out.push_str(&line(cols.iter().map(|c| cell(r, c)).collect()));
            }
            out.push('\n');
        }
        out
    }
}

/// Records of a miner run. Wall time is left out so that runs with the same
/// bounds and seed give the same bytes.
pub fn report_records(report: &MinerReport) -> RecordSet {
    let mut rs = RecordSet::default();
    rs.push("campaign", [("name", report.campaign.as_str())]);
    for (k, v) in &report.bounds {
        rs.push("bound", [("name", k.as_str()), ("value", v.as_str())]);
    }
    if let Some(seed) = report.seed {
        rs.push("seed", [("value", seed.to_string()), ("prng", report.prng.unwrap_or("-").to_string())]);
    }
    for (k, v) in &report.counts {
        rs.push("count", [("name", k.clone()), ("value", v.to_string())]);
    }
    for (id, t) in &report.tallies {
        rs.push(
            "tally",
            [
                ("check", id.clone()),
                ("holds", t.holds.to_string()),
                ("violated", t.violated.to_string()),
                ("not-applicable", t.not_applicable.to_string()),
                ("hypothesis-not-met", t.hypothesis_not_met.to_string()),
            ],
        );
    }
    for f in &report.findings {
        rs.push(
            "finding",
            [
                ("kind", f.kind.name().to_string()),
                ("check", f.check.clone()),
                ("instance", f.instance.to_string()),
                ("certificate", f.certificate.clone()),
            ],
        );
    }
    for (k, v) in &report.notes {
        rs.push("note", [("name", k.as_str()), ("value", v.as_str())]);
    }
    rs.push(
        "summary",
        [
            ("findings", report.findings.len().to_string()),
            ("violations", report.violations().count().to_string()),
        ],
    );
    rs
}

pub fn report_human(report: &MinerReport) -> String {
    let mut out = report_records(report).tables();
    out.push_str(&format!("elapsed {:.3}s\n", report.elapsed.as_secs_f64()));
    out
}
