//! Emission and ingestion of experiment statistics. CSV is the primary
//! format (diffable golden outputs, byte-stable under a fixed seed), with
//! a JSON mirror for anything that prefers structure.

use crate::error::{Error, Result};
use crate::sim::StatsRecord;

pub const CSV_HEADER: &str = "n,measure,mean,sem,trials,seed";

/// Renders records as CSV. Floats use the shortest representation that
/// parses back to the same value, so emit-parse round-trips are exact.
pub fn to_csv(records: &[StatsRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n, r.measure, r.mean, r.sem, r.trials, r.seed
        ));
    }
    out
}

fn field<'a>(parts: &mut std::str::Split<'a, char>, line: usize, column: &str) -> Result<&'a str> {
    parts.next().ok_or_else(|| Error::parse(line, format!("missing column `{column}`")))
}

fn parsed<T: std::str::FromStr>(raw: &str, line: usize, column: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("column `{column}`: cannot parse `{raw}`")))
}

pub fn from_csv(text: &str) -> Result<Vec<StatsRecord>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, format!("empty input, expected header `{CSV_HEADER}`")))?;
    if header.trim() != CSV_HEADER {
        return Err(Error::parse(1, format!("expected header `{CSV_HEADER}`, got `{header}`")));
    }
    let mut records = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut parts = raw.split(',');
        let record = StatsRecord {
            n: parsed(field(&mut parts, line, "n")?, line, "n")?,
            measure: parsed(field(&mut parts, line, "measure")?, line, "measure")?,
            mean: parsed(field(&mut parts, line, "mean")?, line, "mean")?,
            sem: parsed(field(&mut parts, line, "sem")?, line, "sem")?,
            trials: parsed(field(&mut parts, line, "trials")?, line, "trials")?,
            seed: parsed(field(&mut parts, line, "seed")?, line, "seed")?,
        };
        if let Some(extra) = parts.next() {
            return Err(Error::parse(line, format!("unexpected trailing field `{extra}`")));
        }
        records.push(record);
    }
    Ok(records)
}

pub fn to_json(records: &[StatsRecord]) -> Result<String> {
    serde_json::to_string_pretty(records)
        .map_err(|e| Error::parse(0, format!("cannot serialize records: {e}")))
}

pub fn from_json(text: &str) -> Result<Vec<StatsRecord>> {
    serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
}
