//! Command implementations behind the `rankpart` binary. Each returns the
//! rendered output so it can be tested without spawning a process.

mod census;
mod verify;

use std::path::PathBuf;

pub use census::{census, render_census, CensusReport, FailedHead, GroupEntry};
pub use verify::{cmd_verify, render_verify, CheckResult, Fault, VerifyReport};

use crate::enumeration::{enumerate_heads_general, DEFAULT_HEAD_COLUMNS, DEFAULT_NODE_BUDGET};
use crate::equivalence::{diff_vs_standard, equivalent_up_to};
use crate::error::{Error, Result};
use crate::greedy::greedy_extend;
use crate::io::{parse_head_file, render, Format};
use crate::partition::{standard_partition, Partition};
use crate::reshuffle::{reshuffle_family_i, reshuffle_family_ii, verify_sum_pattern};
use crate::schedule::ModulusConfig;

pub const DEFAULT_HORIZON: usize = 4096;
pub const DEFAULT_SHOWN: usize = 46;
pub const NODE_BUDGET_ENV: &str = "RANKPART_NODE_BUDGET";

/// Enumeration cap from `RANKPART_NODE_BUDGET`, or the default.
pub fn node_budget_from_env() -> Result<u64> {
    match std::env::var(NODE_BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::Invariant(format!(
                "{NODE_BUDGET_ENV} must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub config: ModulusConfig,
    pub horizon: usize,
    pub columns_shown: usize,
    pub format: Format,
    pub node_budget: u64,
}

impl RunConfig {
    pub fn new(m: i64) -> Result<Self> {
        let config = ModulusConfig::new(m)?;
        if m < 5 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(Self {
            config,
            horizon: DEFAULT_HORIZON,
            columns_shown: DEFAULT_SHOWN,
            format: Format::Text,
            node_budget: DEFAULT_NODE_BUDGET,
        })
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_shown(mut self, shown: usize) -> Self {
        self.columns_shown = shown;
        self
    }

    pub fn with_format(mut self, format: Format) -> Self {
        self.format = format;
        self
    }

    pub fn with_node_budget(mut self, budget: u64) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.columns_shown == 0 || self.columns_shown > self.horizon {
            return Err(Error::Invariant(format!(
                "need 1 <= shown ({}) <= horizon ({})",
                self.columns_shown, self.horizon
            )));
        }
        Ok(())
    }
}

/// Which partition `generate` and `diff` operate on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeadSelector {
    Standard,
    /// 1-based id in enumeration order.
    Id(usize),
    File(PathBuf),
}

impl std::str::FromStr for HeadSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "standard" {
            Ok(HeadSelector::Standard)
        } else if let Ok(id) = s.parse::<usize>() {
            Ok(HeadSelector::Id(id))
        } else {
            Ok(HeadSelector::File(PathBuf::from(s)))
        }
    }
}

/// The selected partition, greedily extended to `run.horizon`.
pub fn resolve_partition(run: &RunConfig, selector: &HeadSelector) -> Result<Partition> {
    match selector {
        HeadSelector::Standard => Ok(standard_partition(run.config, run.horizon)),
        HeadSelector::Id(id) => {
            let heads = enumerate_heads_general(run.config, DEFAULT_HEAD_COLUMNS, run.node_budget)?;
            let head = id
                .checked_sub(1)
                .and_then(|i| heads.get(i))
                .ok_or_else(|| {
                    Error::Invariant(format!("head id {id} outside 1..={}", heads.len()))
                })?;
            greedy_extend(&head.to_partition(), run.horizon)
        }
        HeadSelector::File(path) => {
            let head = parse_head_file(path, Some(run.config))?;
            greedy_extend(&head.to_partition(), run.horizon)
        }
    }
}

pub fn cmd_generate(run: &RunConfig, selector: &HeadSelector) -> Result<String> {
    run.validate()?;
    let p = resolve_partition(run, selector)?;
    render(&p, run.columns_shown, run.format)
}

/// Ranks where the selected partition departs from the m-standard
/// partition, plus the equivalence witness if there is one.
pub fn cmd_diff(run: &RunConfig, selector: &HeadSelector) -> Result<String> {
    let p = resolve_partition(run, selector)?;
    let std = standard_partition(run.config, run.horizon);
    let diffs = diff_vs_standard(&p, run.horizon)?;
    let witness = equivalent_up_to(&p, &std, run.horizon)?;
    match run.format {
        Format::Json => {
            let doc = serde_json::json!({
                "m": run.config.m(),
                "horizon": run.horizon,
                "equivalent_after": witness.map(|w| w.n),
                "differences": diffs,
            });
            Ok(serde_json::to_string_pretty(&doc).expect("diff serializes") + "\n")
        }
        Format::Csv => {
            let mut out = String::from("rank,standard,actual\n");
            for d in &diffs {
                out.push_str(&format!(
                    "{},{},{}\n",
                    d.rank,
                    join(&d.standard),
                    join(&d.actual)
                ));
            }
            Ok(out)
        }
        Format::Text => {
            let mut out = String::new();
            for d in &diffs {
                out.push_str(&format!(
                    "rank {:>5}: standard {:?} actual {:?}\n",
                    d.rank, d.standard, d.actual
                ));
            }
            out.push_str(&match witness {
                Some(w) => format!(
                    "equivalent to the standard partition with N = {} (checked to rank {})\n",
                    w.n, w.verified_to
                ),
                None => format!(
                    "not equivalent to the standard partition at horizon {}\n",
                    run.horizon
                ),
            });
            Ok(out)
        }
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    I,
    II,
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "i" | "1" => Ok(Family::I),
            "ii" | "2" => Ok(Family::II),
            other => Err(format!("unknown family {other:?} (i, ii)")),
        }
    }
}

/// The m = 5 standard partition with one reshuffle family applied `k_max`
/// times, followed by a one-line sum and equivalence summary (text only).
pub fn cmd_reshuffle(run: &RunConfig, family: Family, k_max: usize) -> Result<String> {
    run.validate()?;
    let std = standard_partition(run.config, run.horizon);
    let p = match family {
        Family::I => reshuffle_family_i(&std, k_max)?,
        Family::II => reshuffle_family_ii(&std, k_max)?,
    };
    let mut out = render(&p, run.columns_shown, run.format)?;
    if run.format == Format::Text {
        let sums = verify_sum_pattern(&p, run.horizon)?;
        let witness = equivalent_up_to(&p, &std, run.horizon)?;
        out.push_str(&format!(
            "# sums {} through rank {}; {}\n",
            if sums {
                "follow the schedule"
            } else {
                "BROKEN"
            },
            run.horizon,
            match witness {
                Some(w) => format!("equivalent to standard with N = {}", w.n),
                None => "no equivalence witness at this horizon".to_string(),
            }
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_config_checks() {
        assert!(RunConfig::new(3).is_err());
        assert!(RunConfig::new(6).is_err());
        let run = RunConfig::new(5).unwrap();
        assert_eq!((run.horizon, run.columns_shown), (4096, 46));
        assert!(run.with_shown(5000).validate().is_err());
        assert!(run.with_shown(0).validate().is_err());
    }

    #[test]
    fn selectors_parse() {
        assert_eq!(
            "standard".parse::<HeadSelector>(),
            Ok(HeadSelector::Standard)
        );
        assert_eq!("8".parse::<HeadSelector>(), Ok(HeadSelector::Id(8)));
        assert_eq!(
            "heads/fig1.txt".parse::<HeadSelector>(),
            Ok(HeadSelector::File("heads/fig1.txt".into()))
        );
        assert!("iii".parse::<Family>().is_err());
    }

    #[test]
    fn generate_standard_text() {
        let run = RunConfig::new(5).unwrap().with_horizon(100);
        let out = cmd_generate(&run, &HeadSelector::Standard).unwrap();
        let second: Vec<&str> = out.lines().nth(1).unwrap().split_whitespace().collect();
        assert_eq!(second, ["1", "2", "0"]);
        assert_eq!(out.lines().count(), 47);
    }

    #[test]
    fn generate_head_eight_csv() {
        let run = RunConfig::new(5)
            .unwrap()
            .with_horizon(100)
            .with_format(Format::Csv);
        let out = cmd_generate(&run, &HeadSelector::Id(8)).unwrap();
        let rank7: Vec<&str> = out
            .lines()
            .filter(|l| l.split(',').nth(1) == Some("7"))
            .collect();
        assert_eq!(rank7, ["1,7,16", "2,7,17", "3,7,30"]);
        assert!(cmd_generate(&run, &HeadSelector::Id(37)).is_err());
        assert!(cmd_generate(&run, &HeadSelector::Id(0)).is_err());
    }

    #[test]
    fn diff_for_head_eight() {
        let run = RunConfig::new(5).unwrap().with_horizon(200);
        let out = cmd_diff(&run, &HeadSelector::Id(8)).unwrap();
        assert!(
            out.ends_with(
                "equivalent to the standard partition with N = 6 (checked to rank 200)\n"
            ),
            "{out}"
        );
    }

    #[test]
    fn reshuffle_output_reports_sums() {
        let run = RunConfig::new(5).unwrap().with_horizon(120).with_shown(12);
        let out = cmd_reshuffle(&run, Family::I, 2).unwrap();
        assert!(
            out.contains(
                "# sums follow the schedule through rank 120; equivalent to standard with N = 11"
            ),
            "{out}"
        );
    }
}
