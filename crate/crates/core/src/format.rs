//! Text formats: domain literals, tabulated objectives and knapsack instances.
//!
//! Domain literal grammar (whitespace is allowed between tokens):
//!
//! ```text
//! domain   := interval | box | set
//! interval := "interval" "(" int "," int ")"
//! box      := "box" "(" range { "," range } ")"
//! range    := "[" int "," int "]"
//! set      := "set" "{" elem { "," elem } "}"
//! elem     := int | "(" int { "," int } ")"
//! int      := ["-" | "+"] digit { digit }
//! ```
//!
//! Intervals and box ranges need `lo < hi`. Bare integers in a set are
//! one-dimensional points. [`Domain`]'s `Display` output parses back to an
//! equal value.
//!
//! A table file is either JSON `{"domain": "<literal>", "values": [...], "C": c}`
//! with `"C"` optional and values in enumeration order, or CSV with rows
//! `x1,...,xn,value` and an optional header row.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BoxDomain, Domain, ExplicitSet, IntPoint, IntervalDomain};
use crate::models::{KnapsackInstance, TabulatedObjective};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, at: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: at,
            message: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        match self.peek() {
            Some(c) if c == b => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.err(
                self.pos,
                format!("expected '{}', found '{}'", b as char, c as char),
            ),
            None => self.err(self.pos, format!("expected '{}', found end of input", b as char)),
        }
    }

    fn keyword(&mut self) -> Result<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_alphabetic) {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok((start, word))
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == digits {
            return self.err(start, "expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match text.parse() {
            Ok(v) => Ok(v),
            Err(_) => self.err(start, format!("integer {text} does not fit in 64 bits")),
        }
    }

    fn pair(&mut self, open: u8, close: u8) -> Result<(usize, i64, i64)> {
        let at = self.peek().map(|_| self.pos).unwrap_or(self.pos);
        self.expect(open)?;
        let lo = self.int()?;
        self.expect(b',')?;
        let hi = self.int()?;
        self.expect(close)?;
        Ok((at, lo, hi))
    }

    fn point(&mut self) -> Result<(usize, IntPoint)> {
        let at = self.peek().map(|_| self.pos).unwrap_or(self.pos);
        if self.peek() != Some(b'(') {
            return Ok((at, IntPoint::scalar(self.int()?)));
        }
        self.pos += 1;
        let mut coords = vec![self.int()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            coords.push(self.int()?);
        }
        self.expect(b')')?;
        Ok((at, IntPoint::new(coords)?))
    }

    fn domain(&mut self) -> Result<Domain> {
        let (at, word) = self.keyword()?;
        match word {
            "interval" => {
                let (at, lo, hi) = self.pair(b'(', b')')?;
                interval(at, lo, hi).map(Domain::Interval)
            }
            "box" => {
                self.expect(b'(')?;
                let mut axes = Vec::new();
                loop {
                    let (at, lo, hi) = self.pair(b'[', b']')?;
                    axes.push(interval(at, lo, hi)?);
                    if self.peek() != Some(b',') {
                        break;
                    }
                    self.pos += 1;
                }
                self.expect(b')')?;
                Ok(Domain::Box(BoxDomain::new(axes)?))
            }
            "set" => {
                self.expect(b'{')?;
                let mut points = Vec::new();
                let mut dim = None;
                loop {
                    let (at, p) = self.point()?;
                    if *dim.get_or_insert(p.dim()) != p.dim() {
                        return self.err(at, format!("point {p} has a different dimension"));
                    }
                    points.push((at, p));
                    if self.peek() != Some(b',') {
                        break;
                    }
                    self.pos += 1;
                }
                self.expect(b'}')?;
                let mut seen = std::collections::BTreeSet::new();
                for (at, p) in &points {
                    if !seen.insert(p) {
                        return self.err(*at, format!("duplicate point {p}"));
                    }
                }
                Ok(Domain::Set(ExplicitSet::new(points.into_iter().map(|(_, p)| p))?))
            }
            "" => self.err(at, "expected 'interval', 'box' or 'set'"),
            w => self.err(at, format!("unknown domain kind '{w}'")),
        }
    }
}

fn interval(at: usize, lo: i64, hi: i64) -> Result<IntervalDomain> {
    IntervalDomain::new(lo, hi).map_err(|e| Error::Parse {
        offset: at,
        message: e.to_string(),
    })
}

/// Parses a domain literal; see the module docs for the grammar.
pub fn parse_domain(s: &str) -> Result<Domain> {
    let mut cur = Cursor::new(s);
    let d = cur.domain()?;
    if cur.peek().is_some() {
        return cur.err(cur.pos, "trailing input after domain literal");
    }
    Ok(d)
}

/// A tabulated objective with an optional declared constant.
#[derive(Debug, Clone, PartialEq)]
pub struct TableFile {
    pub table: TabulatedObjective,
    pub c: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    domain: String,
    values: Vec<f64>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
}

fn json_error(src: &str, e: serde_json::Error) -> Error {
    let offset = src
        .split_inclusive('\n')
        .take(e.line().saturating_sub(1))
        .map(str::len)
        .sum::<usize>()
        + e.column().saturating_sub(1);
    Error::Parse {
        offset,
        message: e.to_string(),
    }
}

pub fn parse_table_json(s: &str) -> Result<TableFile> {
    let raw: RawTable = serde_json::from_str(s).map_err(|e| json_error(s, e))?;
    let domain = parse_domain(&raw.domain)?;
    if let Some(c) = raw.c {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::arg(format!("C must be finite and non-negative, got {c}")));
        }
    }
    Ok(TableFile {
        table: TabulatedObjective::new(domain, raw.values)?,
        c: raw.c,
    })
}

pub fn write_table_json(t: &TableFile) -> String {
    let raw = RawTable {
        domain: t.table.domain().to_string(),
        values: t.table.values().to_vec(),
        c: t.c,
    };
    serde_json::to_string_pretty(&raw).expect("finite values serialize")
}

fn csv_offset(e: &csv::Error) -> usize {
    e.position().map_or(0, |p| p.byte() as usize)
}

/// Reads `x1,...,xn,value` rows. A first row whose fields are not all
/// numbers is taken as a header.
pub fn parse_table_csv(s: &str) -> Result<TabulatedObjective> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(s.as_bytes());
    let mut entries = Vec::new();
    let mut width = None;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            offset: csv_offset(&e),
            message: e.to_string(),
        })?;
        let offset = rec.position().map_or(0, |p| p.byte() as usize);
        if i == 0 && rec.iter().any(|f| f.parse::<f64>().is_err()) {
            width = Some(rec.len());
            continue;
        }
        if rec.len() < 2 {
            return Err(Error::Parse {
                offset,
                message: "a row needs at least one coordinate and a value".into(),
            });
        }
        if *width.get_or_insert(rec.len()) != rec.len() {
            return Err(Error::Parse {
                offset,
                message: format!("expected {} fields, found {}", width.unwrap(), rec.len()),
            });
        }
        let n = rec.len() - 1;
        let coords = rec
            .iter()
            .take(n)
            .map(|f| f.parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                offset,
                message: format!("bad coordinate: {e}"),
            })?;
        let value: f64 = rec[n].parse().map_err(|e| Error::Parse {
            offset,
            message: format!("bad value: {e}"),
        })?;
        entries.push((IntPoint::new(coords)?, value));
    }
    if entries.is_empty() {
        return Err(Error::EmptySet);
    }
    TabulatedObjective::from_entries(entries)
}

/// Writes the table as CSV with a `x1,...,xn,value` header, in enumeration order.
pub fn write_table_csv(t: &TabulatedObjective) -> Result<String> {
    let io = |e: csv::Error| Error::Format(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    let n = t.domain().dim();
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.push("value".into());
    w.write_record(&header).map_err(io)?;
    for (p, v) in t.entries() {
        let mut row: Vec<String> = p.coords().iter().map(i64::to_string).collect();
        row.push(v.to_string());
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Reads `{"W": .., "w": [..], "c": [..]}`.
pub fn parse_knapsack_json(s: &str) -> Result<KnapsackInstance> {
    serde_json::from_str(s).map_err(|e| json_error(s, e))
}

pub fn write_knapsack_json(k: &KnapsackInstance) -> String {
    serde_json::to_string(k).expect("instances serialize")
}
