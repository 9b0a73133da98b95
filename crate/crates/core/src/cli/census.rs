use serde::Serialize;

use super::RunConfig;
use crate::enumeration::{
    count_statements, dedup_heads, enumerate_heads_general, DEFAULT_HEAD_COLUMNS,
};
use crate::equivalence::{classify, equivalent_up_to};
use crate::error::{Error, Result};
use crate::greedy::greedy_extend;
use crate::io::Format;
use crate::partition::{standard_partition, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupEntry {
    pub representative: usize,
    pub duplicates: Vec<usize>,
}

/// Heads whose greedy extension stops before the horizon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailedHead {
    pub heads: Vec<usize>,
    pub rank: usize,
    pub reason: String,
}

/// Counts and groupings for every head of one modulus.
///
/// Partitions are numbered from 1 in head order over the non-standard dedup
/// groups whose extension succeeded; `partitions[i]` is the representative
/// head id of partition `i + 1` and `classes` lists partition numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub m: i64,
    pub horizon: usize,
    pub head_columns: usize,
    pub heads: usize,
    pub statements: u128,
    pub dedup_groups: usize,
    /// Non-standard dedup groups.
    pub dedup: usize,
    pub standard_group: Vec<usize>,
    pub groups: Vec<GroupEntry>,
    pub greedy_failures: Vec<FailedHead>,
    pub partitions: Vec<usize>,
    /// Classes among the numbered partitions (standard group left out).
    pub class_count: usize,
    pub classes: Vec<Vec<usize>>,
    /// Classes among the numbered partitions plus the standard partition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes_with_standard: Option<usize>,
    pub standard_equivalent: Vec<usize>,
}

impl CensusReport {
    /// Class counts under both protocols.
    pub fn class_counts(&self) -> (usize, Option<usize>) {
        (self.class_count, self.classes_with_standard)
    }
}

/// Enumerates, deduplicates, extends and classifies every head.
pub fn census(run: &RunConfig, both_protocols: bool) -> Result<CensusReport> {
    let config = run.config;
    let horizon = run.horizon;
    let heads = enumerate_heads_general(config, DEFAULT_HEAD_COLUMNS, run.node_budget)?;
    let groups = dedup_heads(&heads);
    let standard = standard_partition(config, horizon);

    let mut extended: Vec<Option<Partition>> = Vec::with_capacity(groups.len());
    let mut greedy_failures = Vec::new();
    for g in &groups {
        match greedy_extend(&g.representative.to_partition(), horizon) {
            Ok(p) => extended.push(Some(p)),
            Err(e @ (Error::Collision { .. } | Error::Negative { .. })) => {
                let rank = match e {
                    Error::Collision { rank, .. } | Error::Negative { rank, .. } => rank,
                    _ => unreachable!(),
                };
                greedy_failures.push(FailedHead {
                    heads: g.ids(),
                    rank,
                    reason: e.to_string(),
                });
                extended.push(None);
            }
            Err(e) => return Err(e),
        }
    }

    // All heads of a group share their tail from rank C+1 on, so
    // equivalence with the standard partition is decided per group.
    let mut standard_equivalent = Vec::new();
    for (g, p) in groups.iter().zip(&extended) {
        if let Some(p) = p {
            if equivalent_up_to(p, &standard, horizon)?.is_some() {
                standard_equivalent.extend(g.ids());
            }
        }
    }
    standard_equivalent.sort_unstable();

    let numbered: Vec<(usize, &Partition)> = groups
        .iter()
        .zip(&extended)
        .filter(|(g, _)| !g.standard)
        .filter_map(|(g, p)| p.as_ref().map(|p| (g.representative.id.unwrap_or(0), p)))
        .collect();
    let mut parts: Vec<Partition> = numbered.iter().map(|(_, p)| (*p).clone()).collect();
    let classes: Vec<Vec<usize>> = classify(&parts, horizon)?
        .into_iter()
        .map(|c| c.into_iter().map(|i| i + 1).collect())
        .collect();
    let classes_with_standard = if both_protocols {
        parts.push(standard);
        Some(classify(&parts, horizon)?.len())
    } else {
        None
    };

    Ok(CensusReport {
        m: config.m(),
        horizon,
        head_columns: DEFAULT_HEAD_COLUMNS,
        heads: heads.len(),
        statements: count_statements(&heads),
        dedup_groups: groups.len(),
        dedup: groups.iter().filter(|g| !g.standard).count(),
        standard_group: groups
            .iter()
            .find(|g| g.standard)
            .map(|g| g.ids())
            .unwrap_or_default(),
        groups: groups
            .iter()
            .map(|g| GroupEntry {
                representative: g.representative.id.unwrap_or(0),
                duplicates: g.duplicates.clone(),
            })
            .collect(),
        greedy_failures,
        partitions: numbered.iter().map(|(id, _)| *id).collect(),
        class_count: classes.len(),
        classes,
        classes_with_standard,
        standard_equivalent,
    })
}

fn ids(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn render_census(report: &CensusReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report).expect("census serializes") + "\n"),
        Format::Csv | Format::Text => {
            let mut rows: Vec<(String, String)> = vec![
                ("m".into(), report.m.to_string()),
                ("horizon".into(), report.horizon.to_string()),
                ("heads".into(), report.heads.to_string()),
                ("statements".into(), report.statements.to_string()),
                ("dedup_groups".into(), report.dedup_groups.to_string()),
                ("dedup".into(), report.dedup.to_string()),
                ("standard_group".into(), ids(&report.standard_group)),
                (
                    "greedy_failures".into(),
                    report.greedy_failures.len().to_string(),
                ),
                ("partitions".into(), ids(&report.partitions)),
                ("classes".into(), report.class_count.to_string()),
            ];
            if let Some(n) = report.classes_with_standard {
                rows.push(("classes_with_standard".into(), n.to_string()));
            }
            for (i, c) in report.classes.iter().enumerate() {
                rows.push((format!("class_{}", i + 1), ids(c)));
            }
            rows.push((
                "standard_equivalent".into(),
                ids(&report.standard_equivalent),
            ));
            if format == Format::Csv {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::Io(e.to_string());
                w.write_record(["field", "value"]).map_err(io)?;
                for (k, v) in &rows {
                    w.write_record([k, v]).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
                Ok(String::from_utf8(bytes).expect("csv output is ascii"))
            } else {
                Ok(rows.iter().map(|(k, v)| format!("{k}: {v}\n")).collect())
            }
        }
    }
}
