//! Head files and partition tables.
//!
//! A text head file has one column per line: `t + 1` whitespace-separated
//! integers, entry `i` going to set `i`. A `_` or `?` marks an unknown slot.
//! Blank lines and `#` comments are ignored. The JSON form is
//! `{"m": 5, "columns": [[0, 1, 2], ..., [9, 14, null]]}` with `m` optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::complete_head;
use crate::head::{Head, PartialHead};
use crate::partition::Partition;
use crate::schedule::ModulusConfig;

#[derive(Debug, Serialize, Deserialize)]
struct HeadJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<i64>,
    columns: Vec<Vec<Option<i64>>>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses head text (either form) without filling unknown slots. When
/// `config` is given the column width must match it; otherwise `m` is taken
/// from the JSON `m` field or inferred as `2 * width - 1`.
pub fn parse_partial_head(text: &str, config: Option<ModulusConfig>) -> Result<PartialHead> {
    let (columns, declared_m) = if text.trim_start().starts_with('{') {
        let parsed: HeadJson = serde_json::from_str(text)
            .map_err(|e| parse_err(e.line(), e.column(), e.to_string()))?;
        (parsed.columns, parsed.m)
    } else {
        (parse_text_columns(text)?, None)
    };
    let width = match columns.first() {
        Some(c) => c.len(),
        None => return Err(parse_err(1, 1, "head has no columns")),
    };
    for (idx, col) in columns.iter().enumerate() {
        if col.len() != width {
            return Err(parse_err(
                idx + 1,
                1,
                format!("expected {width} entries, found {}", col.len()),
            ));
        }
    }
    let inferred = ModulusConfig::new(2 * width as i64 - 1).map_err(|_| {
        parse_err(
            1,
            1,
            format!("a column needs at least 2 entries, found {width}"),
        )
    })?;
    for m in [declared_m, config.map(|c| c.m())].into_iter().flatten() {
        if m != inferred.m() {
            return Err(Error::ConfigMismatch {
                expected: m,
                found: inferred.m(),
            });
        }
    }
    Ok(PartialHead {
        config: inferred,
        columns,
    })
}

fn parse_text_columns(text: &str) -> Result<Vec<Vec<Option<i64>>>> {
    let mut columns = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let mut col = Vec::new();
        let mut rest = line;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let tail = &rest[start..];
            let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
            let token = &tail[..len];
            let position = offset + start + 1;
            col.push(match token {
                "_" | "?" => None,
                _ => Some(token.parse::<i64>().map_err(|_| {
                    parse_err(
                        lineno + 1,
                        position,
                        format!("expected an integer, found {token:?}"),
                    )
                })?),
            });
            offset += start + len;
            rest = &tail[len..];
        }
        columns.push(col);
    }
    Ok(columns)
}

/// Parses and validates a head, filling a single unknown slot from the sum
/// schedule.
pub fn parse_head(text: &str, config: Option<ModulusConfig>) -> Result<Head> {
    let partial = parse_partial_head(text, config)?;
    match partial.missing().len() {
        0 => {
            let columns = partial
                .columns
                .into_iter()
                .map(|c| c.into_iter().flatten().collect())
                .collect();
            Head::new(partial.config, columns, None)
        }
        _ => complete_head(&partial).map(|(head, _)| head),
    }
}

pub fn parse_head_file(path: &Path, config: Option<ModulusConfig>) -> Result<Head> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_head(&text, config)
}

pub fn head_to_text(head: &Head) -> String {
    let mut out = String::new();
    for col in &head.columns {
        let line: Vec<String> = col.iter().map(i64::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn head_to_json(head: &Head) -> String {
    let doc = HeadJson {
        m: Some(head.config.m()),
        columns: head
            .columns
            .iter()
            .map(|c| c.iter().copied().map(Some).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("head serializes")
}

/// Output format for tables and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (text, csv, json)")),
        }
    }
}

pub fn set_name(set: usize, width: usize) -> String {
    if width <= 26 {
        char::from(b'A' + (set - 1) as u8).to_string()
    } else {
        format!("S{set}")
    }
}

/// Sets as columns, ranks as rows.
pub fn render_text(p: &Partition, shown: usize) -> Result<String> {
    p.require(shown)?;
    let w = p.width();
    let cell = (1..=shown)
        .flat_map(|r| p.column(r).iter())
        .map(|v| v.to_string().len())
        .chain((1..=w).map(|s| set_name(s, w).len()))
        .max()
        .unwrap_or(1);
    let row = |items: Vec<String>| -> String {
        let cells: Vec<String> = items.iter().map(|s| format!("{s:>cell$}")).collect();
        cells.join(" ")
    };
    let mut out = row((1..=w).map(|s| set_name(s, w)).collect());
    out.push('\n');
    for r in 1..=shown {
        out.push_str(&row(p.column(r).iter().map(i64::to_string).collect()));
        out.push('\n');
    }
    Ok(out)
}

/// `set,rank,value` records, set-major.
pub fn render_csv(p: &Partition, shown: usize) -> Result<String> {
    p.require(shown)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    writer.write_record(["set", "rank", "value"]).map_err(io)?;
    for set in 1..=p.width() {
        for rank in 1..=shown {
            let v = p.column(rank)[set - 1];
            writer
                .write_record([set.to_string(), rank.to_string(), v.to_string()])
                .map_err(io)?;
        }
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

#[derive(Debug, Serialize)]
struct PartitionJson {
    m: i64,
    ranks: usize,
    sets: Vec<Vec<i64>>,
}

pub fn render_json(p: &Partition, shown: usize) -> Result<String> {
    let truncated = p.truncated(shown)?;
    let doc = PartitionJson {
        m: p.config().m(),
        ranks: shown,
        sets: (1..=p.width()).map(|s| truncated.set_elements(s)).collect(),
    };
    Ok(serde_json::to_string_pretty(&doc).expect("partition serializes") + "\n")
}

pub fn render(p: &Partition, shown: usize, format: Format) -> Result<String> {
    match format {
        Format::Text => render_text(p, shown),
        Format::Csv => render_csv(p, shown),
        Format::Json => render_json(p, shown),
    }
}
