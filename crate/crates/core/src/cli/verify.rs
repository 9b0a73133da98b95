use serde::Serialize;

use super::{census, RunConfig};
use crate::enumeration::{enumerate_heads, enumerate_heads_general, DEFAULT_HEAD_COLUMNS};
use crate::equivalence::{
    equivalent_up_to, m5_signatures, signature_mismatch, standard_equivalent_heads,
};
use crate::error::Result;
use crate::greedy::greedy_extend;
use crate::io::Format;
use crate::partition::{standard_partition, Partition, Slot};
use crate::reshuffle::{
    family_i_slots, family_ii_slots, reshuffle_family_i, reshuffle_family_ii, swap_pair,
    verify_sum_pattern, SwapSpec,
};
use crate::schedule::{residue_set_index, sum_schedule, ModulusConfig};

/// Class counts reported for the generalized problem.
pub const KNOWN_CLASS_COUNTS: [(i64, usize); 4] = [(5, 8), (7, 13), (9, 19), (11, 26)];

/// Deliberate corruption used to check that the suite notices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// The schedule under test returns `S(n) + 1` at this rank.
    ScheduleOffByOne(usize),
    /// The standard partition under test has these two slots exchanged.
    SwappedElement(Slot, Slot),
}

impl std::str::FromStr for Fault {
    type Err = String;

    /// `schedule[:RANK]` or `swap[:SET,RANK,SET,RANK]`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<usize> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| {
                    a.trim()
                        .parse()
                        .map_err(|_| format!("bad fault argument {a:?}"))
                })
                .collect::<std::result::Result<_, _>>()?
        };
        match (kind, nums.as_slice()) {
            ("schedule", []) => Ok(Fault::ScheduleOffByOne(3)),
            ("schedule", [n]) if *n >= 1 => Ok(Fault::ScheduleOffByOne(*n)),
            ("swap", []) => Ok(Fault::SwappedElement(Slot::new(1, 2), Slot::new(2, 3))),
            ("swap", [a, b, c, d]) if *a >= 1 && *b >= 1 && *c >= 1 && *d >= 1 => {
                Ok(Fault::SwappedElement(Slot::new(*a, *b), Slot::new(*c, *d)))
            }
            _ => Err(format!(
                "unknown fault {s:?} (schedule[:RANK], swap[:SET,RANK,SET,RANK])"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub m: i64,
    pub horizon: usize,
    pub passed: bool,
    pub classes: Option<usize>,
    pub checks: Vec<CheckResult>,
    pub failures: Vec<String>,
}

struct Suite {
    checks: Vec<CheckResult>,
}

impl Suite {
    fn record(&mut self, name: &str, outcome: std::result::Result<String, String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

fn check_schedule(
    config: ModulusConfig,
    horizon: usize,
    schedule: &dyn Fn(usize) -> i64,
) -> std::result::Result<String, String> {
    let t = config.t();
    if schedule(1) != t * (t + 1) / 2 {
        return Err(format!(
            "S(1) = {}, expected {}",
            schedule(1),
            t * (t + 1) / 2
        ));
    }
    let std = standard_partition(config, horizon);
    for n in 1..=horizon {
        let s = schedule(n);
        if std.column_sum(n) != s {
            return Err(format!(
                "rank {n}: standard column sums to {}, schedule says {s}",
                std.column_sum(n)
            ));
        }
        if config.m() == 5 {
            let ni = n as i64;
            let three_set_form = 11 * ni - 2 * (ni / 2) - 8;
            if s != three_set_form {
                return Err(format!(
                    "rank {n}: schedule {s} but 11n - 2 floor(n/2) - 8 = {three_set_form}"
                ));
            }
        }
        if n > 1 {
            let diff = s - schedule(n - 1);
            let want = config.schedule().difference(n - 1);
            if diff != want {
                return Err(format!("S({n}) - S({}) = {diff}, expected {want}", n - 1));
            }
        }
    }
    Ok(format!("{horizon} ranks"))
}

fn check_residues(p: &Partition) -> std::result::Result<String, String> {
    for (idx, col) in p.columns().enumerate() {
        for (s, &v) in col.iter().enumerate() {
            let want = residue_set_index(p.config(), v);
            if want != s + 1 {
                return Err(format!(
                    "{v} sits in set {} at rank {} but its residue puts it in set {want}",
                    s + 1,
                    idx + 1
                ));
            }
        }
    }
    if !p.is_prefix_complete() {
        return Err(format!(
            "integers below {} are missing or repeated",
            p.prefix_bound()
        ));
    }
    Ok(format!(
        "all integers below {} placed by residue",
        p.prefix_bound()
    ))
}

fn check_partition(
    p: &Partition,
    horizon: usize,
    schedule: &dyn Fn(usize) -> i64,
) -> std::result::Result<String, String> {
    let v = p.violations();
    let structural: Vec<&String> = v.iter().filter(|s| !s.starts_with("column sums")).collect();
    if !structural.is_empty() {
        return Err(structural
            .iter()
            .map(|s| s.as_str())
            .collect::<Vec<_>>()
            .join("; "));
    }
    for n in 1..=horizon {
        if p.column_sum(n) != schedule(n) {
            return Err(format!(
                "rank {n} sums to {}, expected {}",
                p.column_sum(n),
                schedule(n)
            ));
        }
    }
    Ok("distinct, prefix-complete, on schedule".into())
}

/// Runs every invariant suite for `run.config` and reports each check.
pub fn cmd_verify(run: &RunConfig, fault: Option<Fault>) -> Result<VerifyReport> {
    let config = run.config;
    let horizon = run.horizon;
    let mut suite = Suite { checks: Vec::new() };

    let schedule = move |n: usize| {
        let s = sum_schedule(config, n);
        if fault == Some(Fault::ScheduleOffByOne(n)) {
            s + 1
        } else {
            s
        }
    };

    let mut standard = standard_partition(config, horizon);
    if let Some(Fault::ScheduleOffByOne(n)) = fault {
        standard.require(n)?;
    }
    if let Some(Fault::SwappedElement(a, b)) = fault {
        let spec = SwapSpec::new(a, b)?;
        standard = swap_pair(&standard, spec)?.partition;
    }

    suite.record("sum-schedule", check_schedule(config, horizon, &schedule));
    suite.record("residue", check_residues(&standard));
    suite.record(
        "standard-partition",
        check_partition(&standard, horizon, &schedule),
    );

    let greedy = greedy_extend(
        &standard.truncated(DEFAULT_HEAD_COLUMNS.min(horizon))?,
        horizon,
    );
    suite.record(
        "greedy-standard",
        match greedy {
            Ok(p) if p == standard => {
                Ok("greedy extension of the standard head is standard".into())
            }
            Ok(p) => Err(
                match (1..=horizon).find(|&r| p.column(r) != standard.column(r)) {
                    Some(r) => format!("greedy and standard differ at rank {r}"),
                    None => "greedy and standard differ".into(),
                },
            ),
            Err(e) => Err(e.to_string()),
        },
    );

    let report = census(run, true)?;
    let mut greedy_ok = Ok(format!(
        "{} dedup groups extended",
        report.dedup_groups - report.greedy_failures.len()
    ));
    let heads = enumerate_heads_general(config, DEFAULT_HEAD_COLUMNS, run.node_budget)?;
    for id in &report.partitions {
        let p = greedy_extend(&heads[id - 1].to_partition(), horizon)?;
        if let Err(e) = check_partition(&p, horizon, &schedule) {
            greedy_ok = Err(format!("head {id}: {e}"));
            break;
        }
        if config.m() != 5 {
            // one representative is enough outside m = 5
            break;
        }
    }
    suite.record("greedy-invariants", greedy_ok);

    let counts = report.class_counts();
    if let Some(&(_, want)) = KNOWN_CLASS_COUNTS.iter().find(|(m, _)| *m == config.m()) {
        let found = [Some(counts.0), counts.1];
        suite.record(
            "class-count",
            if found.contains(&Some(want)) {
                Ok(format!("{want} classes"))
            } else {
                Err(format!(
                    "expected {want} classes, found {} (with standard: {:?})",
                    counts.0, counts.1
                ))
            },
        );
    }

    if config.m() == 5 {
        suite.record("signatures", check_m5_signatures(&report, horizon)?);
        suite.record("standard-equivalent", {
            let got: Vec<usize> = standard_equivalent_heads(&enumerate_heads(config)?, horizon)?
                .into_iter()
                .collect();
            if got == [1, 8, 15, 19, 26] {
                Ok("heads 1 8 15 19 26".into())
            } else {
                Err(format!("heads {got:?}"))
            }
        });
        suite.record("reshuffle", check_reshuffles(&standard, horizon));
    }

    let failures: Vec<String> = suite
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.clone())
        .collect();
    Ok(VerifyReport {
        m: config.m(),
        horizon,
        passed: failures.is_empty(),
        classes: Some(counts.0),
        checks: suite.checks,
        failures,
    })
}

/// Each numbered partition matches exactly one signature, members of a
/// class share it, and distinct classes use distinct signatures.
fn check_m5_signatures(
    report: &crate::cli::CensusReport,
    horizon: usize,
) -> Result<std::result::Result<String, String>> {
    let config = ModulusConfig::new(5)?;
    let heads = enumerate_heads(config)?;
    let sigs = m5_signatures();
    let mut used = Vec::new();
    for class in &report.classes {
        let mut class_sig = None;
        for &pn in class {
            let id = report.partitions[pn - 1];
            let p = greedy_extend(&heads[id - 1].to_partition(), horizon)?;
            let mut passing = Vec::new();
            for sig in &sigs {
                if signature_mismatch(&p, sig, horizon)?.is_none() {
                    passing.push(sig.class_id);
                }
            }
            if passing.len() != 1 {
                return Ok(Err(format!(
                    "partition {pn} matches signatures {passing:?}"
                )));
            }
            if *class_sig.get_or_insert(passing[0]) != passing[0] {
                return Ok(Err(format!(
                    "class containing partition {pn} mixes signatures"
                )));
            }
        }
        if let Some(s) = class_sig {
            if used.contains(&s) {
                return Ok(Err(format!("signature {s} matches two classes")));
            }
            used.push(s);
        }
    }
    Ok(Ok(format!(
        "{} classes matched to signatures {used:?}",
        used.len()
    )))
}

fn check_reshuffles(standard: &Partition, horizon: usize) -> std::result::Result<String, String> {
    let get = |s: Slot| standard.get(s).map_err(|e| e.to_string());
    let mut k = 1;
    while 6 * k - 1 <= horizon {
        let [x, y] = family_i_slots(k);
        let want = 30 * k as i64 - 7;
        if get(x.first)? + get(y.first)? != want || get(x.second)? + get(y.second)? != want {
            return Err(format!(
                "first family pair sums differ from {want} at k = {k}"
            ));
        }
        k += 1;
    }
    let k_i = k - 1;
    let mut k = 0;
    while 6 * k + 4 <= horizon {
        let [x, y] = family_ii_slots(k);
        let want = 30 * k as i64 + 17;
        if get(x.first)? + get(y.first)? != want || get(x.second)? + get(y.second)? != want {
            return Err(format!(
                "second family pair sums differ from {want} at k = {k}"
            ));
        }
        k += 1;
    }
    let k_ii = k;
    let std_ok = standard.violations().is_empty();
    for p in [
        reshuffle_family_i(standard, k_i).map_err(|e| e.to_string())?,
        reshuffle_family_ii(standard, k_ii).map_err(|e| e.to_string())?,
    ] {
        if !verify_sum_pattern(&p, horizon).map_err(|e| e.to_string())? {
            return Err("reshuffled partition leaves the sum schedule".into());
        }
        if std_ok && !p.violations().is_empty() {
            return Err(p.violations().join("; "));
        }
    }
    let small = reshuffle_family_i(standard, 1).map_err(|e| e.to_string())?;
    if equivalent_up_to(&small, standard, horizon)
        .map_err(|e| e.to_string())?
        .is_none()
    {
        return Err("a single first-family exchange is not equivalent to standard".into());
    }
    Ok(format!("pair sums hold for k <= {k_i} and k < {k_ii}"))
}

pub fn render_verify(report: &VerifyReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Csv => {
            let mut out = String::from("check,passed,detail\n");
            for c in &report.checks {
                out.push_str(&format!(
                    "{},{},\"{}\"\n",
                    c.name,
                    c.passed,
                    c.detail.replace('"', "\"\"")
                ));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for c in &report.checks {
                out.push_str(&format!(
                    "{} {:<20} {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
            if let Some(n) = report.classes {
                out.push_str(&format!("classes: {n}\n"));
            }
            out.push_str(if report.passed {
                "verify: pass\n"
            } else {
                "verify: FAIL\n"
            });
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fault_specs_parse() {
        assert_eq!("schedule".parse(), Ok(Fault::ScheduleOffByOne(3)));
        assert_eq!("schedule:40".parse(), Ok(Fault::ScheduleOffByOne(40)));
        assert_eq!(
            "swap:3,9,1,4".parse(),
            Ok(Fault::SwappedElement(Slot::new(3, 9), Slot::new(1, 4)))
        );
        assert!("schedule:0".parse::<Fault>().is_err());
        assert!("swap:1,2".parse::<Fault>().is_err());
        assert!("flip".parse::<Fault>().is_err());
    }

    #[test]
    fn faults_are_reported_by_name() {
        let run = RunConfig::new(5).unwrap().with_horizon(128);
        assert!(cmd_verify(&run, None).unwrap().passed);
        let r = cmd_verify(&run, Some(Fault::ScheduleOffByOne(77))).unwrap();
        assert!(
            r.failures.contains(&"sum-schedule".to_string()),
            "{:?}",
            r.failures
        );
        let r = cmd_verify(
            &run,
            Some(Fault::SwappedElement(Slot::new(2, 10), Slot::new(2, 11))),
        )
        .unwrap();
        assert!(!r.passed);
        assert!(
            r.failures.contains(&"standard-partition".to_string()),
            "{:?}",
            r.failures
        );
        assert!(matches!(
            cmd_verify(&run, Some(Fault::ScheduleOffByOne(129))),
            Err(crate::Error::Horizon { .. })
        ));
    }

    #[test]
    fn seven_passes_with_thirteen_classes() {
        let run = RunConfig::new(7).unwrap().with_horizon(1024);
        let r = cmd_verify(&run, None).unwrap();
        assert!(r.passed, "{:?}", r.checks);
        assert_eq!(r.classes, Some(13));
    }
}
