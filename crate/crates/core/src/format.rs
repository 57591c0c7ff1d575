//! JSON exports of rows and tables.
//!
//! Big integers travel as decimal strings so no consumer ever truncates them
//! to 64 bits.

use std::io::{BufRead, Write};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::engine::{Provenance, Row, RowTable};
use crate::error::{Error, Result};
use crate::plrs::Plrs;
use crate::table::{CoefficientTable, RecurrenceTerm, TableKind};
use crate::zeckendorf::Statistic;

/// Largest row index a [`RowRecord`] may carry.
pub const MAX_ROW_INDEX: usize = u32::MAX as usize;

/// `{"plrs": [..], "g": int | "sigma", "n": int, "row": ["<decimal>", ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowRecord {
    pub plrs: Plrs,
    pub g: Statistic,
    pub n: usize,
    pub row: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl RowRecord {
    pub fn new(plrs: &Plrs, stat: Statistic, n: usize, row: &Row) -> Self {
        Self {
            plrs: plrs.clone(),
            g: stat,
            n,
            row: row.dense().iter().map(BigUint::to_string).collect(),
            provenance: Some(row.provenance()),
        }
    }

    /// Parses one record, rejecting non-decimal entries and `n` above
    /// [`MAX_ROW_INDEX`].
    pub fn from_json(text: &str) -> Result<Self> {
        let record: Self = serde_json::from_str(text)?;
        if record.n > MAX_ROW_INDEX {
            return Err(Error::Format(format!("row index {} exceeds {MAX_ROW_INDEX}", record.n)));
        }
        record.values()?;
        Ok(record)
    }

    /// The row entries as integers.
    pub fn values(&self) -> Result<Vec<BigUint>> {
        self.row.iter().map(|s| parse_decimal(s)).collect()
    }

    pub fn to_row(&self) -> Result<Row> {
        Ok(Row::new(self.values()?, self.provenance.unwrap_or(Provenance::Oracle)))
    }
}

/// A non-negative integer written in plain decimal digits.
pub fn parse_decimal(s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Format(format!("{s:?} is not a non-negative decimal integer")));
    }
    BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| Error::Format(format!("{s:?} is not a decimal integer")))
}

/// Rows read back from a JSON-lines stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowFile {
    pub plrs: Plrs,
    pub statistic: Statistic,
    pub rows: RowTable,
}

/// Writes one [`RowRecord`] per line.
pub fn write_jsonl<W: Write>(mut out: W, plrs: &Plrs, stat: Statistic, rows: &RowTable) -> Result<()> {
    for (n, row) in rows.iter() {
        serde_json::to_writer(&mut out, &RowRecord::new(plrs, stat, n, row))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Streams rows back in. All lines must share one recurrence and statistic
/// and have consecutive `n`; blank lines are skipped.
pub fn read_jsonl<R: BufRead>(input: R) -> Result<RowFile> {
    let mut header: Option<(Plrs, Statistic)> = None;
    let mut rows: Option<RowTable> = None;
    for (number, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = RowRecord::from_json(&line).map_err(|e| Error::Format(format!("line {}: {e}", number + 1)))?;
        match &header {
            None => header = Some((record.plrs.clone(), record.g)),
            Some((p, g)) if *p != record.plrs || *g != record.g => {
                return Err(Error::Format(format!("line {}: recurrence or statistic changes mid-stream", number + 1)));
            }
            Some(_) => {}
        }
        let table = rows.get_or_insert_with(|| RowTable::new(record.n));
        if record.n != table.next_n() {
            return Err(Error::Format(format!(
                "line {}: expected row n = {}, found n = {}",
                number + 1,
                table.next_n(),
                record.n
            )));
        }
        table.push(record.to_row()?);
    }
    let (plrs, statistic) = header.ok_or_else(|| Error::Format("no rows in input".into()))?;
    Ok(RowFile { plrs, statistic, rows: rows.expect("set with header") })
}

/// `{"kind": "gap", "g": 2, "i0": 4, "j0": 2, "t": [[i, j, coef], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
    pub i0: usize,
    pub j0: usize,
    pub t: Vec<(usize, usize, i64)>,
}

impl From<&CoefficientTable> for TableRecord {
    fn from(table: &CoefficientTable) -> Self {
        let (kind, g) = match table.kind() {
            TableKind::Gap(g) => ("gap", Some(g)),
            TableKind::Summands => ("summands", None),
            TableKind::Custom => ("custom", None),
        };
        Self {
            kind: kind.to_owned(),
            g,
            i0: table.i0(),
            j0: table.j0(),
            t: table.entries().iter().map(|(&(i, j), &t)| (i, j, t)).collect(),
        }
    }
}

impl TableRecord {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuilds a table, checking the declared shape against the entries.
    /// Metadata tied to a recurrence (`n₀`, `d`, `c*`) is not carried.
    pub fn to_table(&self) -> Result<CoefficientTable> {
        let kind = match (self.kind.as_str(), self.g) {
            ("gap", Some(g)) => TableKind::Gap(g),
            ("summands", None) => TableKind::Summands,
            ("custom", None) => TableKind::Custom,
            (kind, g) => return Err(Error::Format(format!("unknown table kind {kind:?} with g = {g:?}"))),
        };
        let terms = self.t.iter().map(|&(lag, shift, coefficient)| RecurrenceTerm { coefficient, lag, shift }).collect();
        CoefficientTable::from_terms(kind, self.i0, self.j0, terms)
    }
}
