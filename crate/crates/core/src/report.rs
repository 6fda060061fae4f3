//! JSON analysis reports and batch classification of monoid files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::act::Act;
use crate::enumerate::{acts_up_to, acts_up_to_iso};
use crate::error::{Error, Result};
use crate::injectivity::InjectivityTester;
use crate::io::parse_monoid;
use crate::limits::coproduct;
use crate::monoid::Monoid;
use crate::par;
use crate::saturation::{saturate_with, CellCatalog, SaturateOptions, SaturationStatus};

pub const TOOL_VERSION: &str = concat!("actkit ", env!("CARGO_PKG_VERSION"));

/// The JSON Schema every report validates against.
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subject {
    /// `monoid`, `act`, `acts` or `selftest`.
    pub kind: String,
    pub id: String,
    pub sha256: String,
}

impl Subject {
    pub fn new(kind: &str, id: impl Into<String>, content: &[u8]) -> Self {
        Subject {
            kind: kind.into(),
            id: id.into(),
            sha256: content_hash(content),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub subject: Subject,
    pub results: BTreeMap<String, Value>,
    pub tool_version: String,
    pub seed: u64,
}

impl AnalysisReport {
    pub fn new(subject: Subject, seed: u64) -> Self {
        AnalysisReport {
            subject,
            results: BTreeMap::new(),
            tool_version: TOOL_VERSION.into(),
            seed,
        }
    }

    pub fn insert(&mut self, check: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report values serialize");
        self.results.insert(check.into(), value);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Ideal inventory, generation degree and reversibility of a monoid.
pub fn monoid_results(report: &mut AnalysisReport, monoid: &Monoid) {
    let ideals = monoid.all_left_ideals();
    report.insert("size", monoid.size());
    report.insert("commutative", monoid.is_commutative());
    report.insert("group", monoid.is_group());
    report.insert("left_ideals", &ideals);
    report.insert(
        "min_generator_counts",
        ideals
            .iter()
            .map(|i| i.min_generators.len())
            .collect::<Vec<_>>(),
    );
    report.insert("generation_degree", monoid.generation_degree());
    report.insert("right_reversible", monoid.right_reversible());
    // The empty set counts as an ideal and the empty act as an act.
    report.insert("empty_act_admitted", true);
}

pub fn analyze_monoid(id: &str, text: &str, seed: u64) -> Result<AnalysisReport> {
    let monoid = parse_monoid(text)?;
    let mut report = AnalysisReport::new(Subject::new("monoid", id, text.as_bytes()), seed);
    monoid_results(&mut report, &monoid);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZooCheck {
    /// Ideal inventory, `g(S)`, reversibility.
    Ideals,
    /// Injectivity of coproducts of injective acts.
    Coproducts,
    /// Termination of weak saturation on small acts.
    Saturation,
}

impl std::str::FromStr for ZooCheck {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ideals" => Ok(ZooCheck::Ideals),
            "coproducts" => Ok(ZooCheck::Coproducts),
            "saturation" => Ok(ZooCheck::Saturation),
            _ => Err(format!(
                "unknown check `{s}` (expected ideals, coproducts or saturation)"
            )),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ZooOptions {
    pub checks: Vec<ZooCheck>,
    /// Acts up to this size feed the coproduct check.
    pub max_act_size: usize,
    /// Acts up to this size are saturated.
    pub saturation_size: usize,
    pub seed: u64,
}

impl Default for ZooOptions {
    fn default() -> Self {
        ZooOptions {
            checks: vec![ZooCheck::Ideals, ZooCheck::Coproducts],
            max_act_size: 4,
            saturation_size: 2,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FileError {
    pub file: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummaryRow {
    pub monoid: String,
    pub right_reversible: bool,
    pub injective_acts: usize,
    pub coproduct_pairs: usize,
    pub non_injective_coproducts: usize,
    /// A right-reversible monoid with a non-injective coproduct of injectives.
    pub violation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZooOutput {
    pub reports: Vec<AnalysisReport>,
    pub errors: Vec<FileError>,
    /// One row per monoid when the coproduct check ran.
    pub summary: Vec<SummaryRow>,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
struct CoproductStats {
    injective_acts: usize,
    coproduct_pairs: usize,
    non_injective_coproducts: usize,
    /// Indices into the injective acts, in enumeration order.
    first_failure: Option<(usize, usize)>,
}

fn coproduct_stats(monoid: &Arc<Monoid>, max_size: usize) -> CoproductStats {
    let tester = InjectivityTester::new(monoid.clone());
    let injective: Vec<Act> = acts_up_to(monoid, max_size)
        .into_iter()
        .filter(|q| tester.injective(q).verdict)
        .collect();
    let mut stats = CoproductStats {
        injective_acts: injective.len(),
        coproduct_pairs: 0,
        non_injective_coproducts: 0,
        first_failure: None,
    };
    for i in 0..injective.len() {
        for j in i..injective.len() {
            let sum = coproduct(&injective[i], &injective[j])
                .expect("same monoid")
                .apex;
            stats.coproduct_pairs += 1;
            if !tester.injective(&sum).verdict {
                stats.non_injective_coproducts += 1;
                stats.first_failure.get_or_insert((i, j));
            }
        }
    }
    stats
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
struct SaturationStats {
    acts: usize,
    reached: usize,
    cap_exceeded: usize,
    max_steps_used: usize,
    largest_result: usize,
    /// Cells whose attaching hom already extends are not glued.
    skips_extendable_cells: bool,
}

fn saturation_stats(monoid: &Arc<Monoid>, max_size: usize) -> SaturationStats {
    let cells = CellCatalog::new(monoid);
    let tester = InjectivityTester::new(monoid.clone());
    let mut stats = SaturationStats {
        acts: 0,
        reached: 0,
        cap_exceeded: 0,
        max_steps_used: 0,
        largest_result: 0,
        skips_extendable_cells: true,
    };
    for size in 0..=max_size {
        for k in acts_up_to_iso(monoid, size) {
            let sat = saturate_with(&k, SaturateOptions::default(), &cells, &tester);
            stats.acts += 1;
            match sat.status {
                SaturationStatus::Reached { steps } => {
                    stats.reached += 1;
                    stats.max_steps_used = stats.max_steps_used.max(steps);
                    stats.largest_result = stats.largest_result.max(sat.result.size());
                }
                SaturationStatus::CapExceeded { .. } => stats.cap_exceeded += 1,
            }
        }
    }
    stats
}

fn zoo_report(
    id: &str,
    text: &str,
    options: &ZooOptions,
) -> Result<(AnalysisReport, Option<SummaryRow>)> {
    let monoid = Arc::new(parse_monoid(text)?);
    let mut report = AnalysisReport::new(Subject::new("monoid", id, text.as_bytes()), options.seed);
    let mut row = None;
    for check in &options.checks {
        match check {
            ZooCheck::Ideals => monoid_results(&mut report, &monoid),
            ZooCheck::Coproducts => {
                let stats = coproduct_stats(&monoid, options.max_act_size);
                let rr = monoid.right_reversible();
                row = Some(SummaryRow {
                    monoid: id.into(),
                    right_reversible: rr,
                    injective_acts: stats.injective_acts,
                    coproduct_pairs: stats.coproduct_pairs,
                    non_injective_coproducts: stats.non_injective_coproducts,
                    violation: rr && stats.non_injective_coproducts > 0,
                });
                report.insert("right_reversible", rr);
                report.insert(
                    "coproducts_of_injectives",
                    json!({"max_act_size": options.max_act_size, "stats": stats}),
                );
            }
            ZooCheck::Saturation => {
                let stats = saturation_stats(&monoid, options.saturation_size);
                report.insert(
                    "saturation",
                    json!({"max_act_size": options.saturation_size, "target": "weak", "stats": stats}),
                );
            }
        }
    }
    Ok((report, row))
}

/// Analyzes every `*.monoid` file in `dir`. Reports are sorted by file stem;
/// files that fail to parse become error records.
pub fn zoo(dir: &Path, options: &ZooOptions) -> Result<ZooOutput> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "monoid"))
        .collect();
    files.sort();
    let outcomes = par::map(&files, |path| {
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let result = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(e.to_string()))
            .and_then(|text| zoo_report(&id, &text, options));
        (path.clone(), result)
    });
    let mut out = ZooOutput {
        reports: Vec::new(),
        errors: Vec::new(),
        summary: Vec::new(),
        violations: 0,
    };
    for (path, result) in outcomes {
        match result {
            Ok((report, row)) => {
                out.reports.push(report);
                if let Some(row) = row {
                    out.violations += usize::from(row.violation);
                    out.summary.push(row);
                }
            }
            Err(e) => out.errors.push(FileError {
                file: path
                    .file_name()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                error: e.to_string(),
            }),
        }
    }
    out.reports.sort_by(|a, b| a.subject.id.cmp(&b.subject.id));
    out.summary.sort_by(|a, b| a.monoid.cmp(&b.monoid));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn rz3_analysis() {
        let text = catalog::FILES.iter().find(|(n, _)| *n == "rz3").unwrap().1;
        let report = analyze_monoid("rz3", text, 7).unwrap();
        assert_eq!(
            report.results["min_generator_counts"],
            json!([0, 1, 1, 2, 1])
        );
        assert_eq!(report.results["generation_degree"], json!(2));
        assert_eq!(report.results["right_reversible"], json!(false));
        assert_eq!(report.subject.sha256.len(), 64);
        assert_eq!(
            report.to_json(),
            analyze_monoid("rz3", text, 7).unwrap().to_json()
        );
    }

    #[test]
    fn small_monoids() {
        let triv = analyze_monoid("trivial", "monoid 1\n0\n", 0).unwrap();
        assert_eq!(triv.results["generation_degree"], json!(1));
        assert_eq!(triv.results["right_reversible"], json!(true));
        let z2 = analyze_monoid("z2", "monoid 2\n0 1\n1 0\n", 0).unwrap();
        assert_eq!(z2.results["commutative"], json!(true));
        assert_eq!(z2.results["right_reversible"], json!(true));
    }

    #[test]
    fn parse_errors_surface() {
        assert!(analyze_monoid("bad", "monoid 2\n0 1\n", 0).is_err());
    }
}
