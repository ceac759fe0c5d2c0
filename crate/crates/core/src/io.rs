//! Plain-text CSV artifacts.
//!
//! Every table is comma-separated ASCII with a header row and LF line
//! endings. Numbers are printed like C's `%.17g`, which reads back to the same
//! `f64`, so parsing a file and writing it again reproduces it byte for byte.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::rgg::Graph;

/// `%.17g`: 17 significant digits, trailing zeros removed, exponent form
/// outside `1e-4 <= |x| < 1e17`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if !(-4..17).contains(&exp) {
        let frac = digits[1..].trim_end_matches('0');
        out.push_str(&digits[..1]);
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
        let _ = write!(out, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
        return out;
    }
    if exp >= 0 {
        let split = exp as usize + 1;
        out.push_str(&digits[..split]);
        let frac = digits[split..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    } else {
        out.push_str("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(digits.trim_end_matches('0'));
    }
    out
}

/// A parsed CSV table; every cell kept as text.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&x| fmt_f64(x)).collect());
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::InvalidParameter("empty CSV".into()))?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (k, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let row: Vec<String> = line.split(',').map(str::to_string).collect();
            if row.len() != header.len() {
                return Err(Error::InvalidParameter(format!(
                    "CSV row {} has {} fields, header has {}",
                    k + 2,
                    row.len(),
                    header.len()
                )));
            }
            rows.push(row);
        }
        Ok(Table { header, rows })
    }

    /// Checks the header and returns each column parsed as `f64`.
    pub fn numeric(&self, expected_header: &[&str]) -> Result<Vec<Vec<f64>>> {
        if self.header != expected_header {
            return Err(Error::InvalidParameter(format!(
                "expected CSV header {:?}, found {:?}",
                expected_header.join(","),
                self.header.join(",")
            )));
        }
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        cell.parse::<f64>()
                            .map_err(|_| Error::InvalidParameter(format!("not a number: {cell:?}")))
                    })
                    .collect()
            })
            .collect()
    }

    /// Re-prints every cell through [`fmt_f64`].
    pub fn canonicalized(&self) -> Result<Table> {
        let header: Vec<&str> = self.header.iter().map(String::as_str).collect();
        let mut out = Table::new(&header);
        for row in self.numeric(&header)? {
            out.push_numbers(&row);
        }
        Ok(out)
    }
}

impl std::fmt::Display for Table {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(f, "{}", row.join(","))?;
        }
        Ok(())
    }
}

pub const POINTS_HEADER: [&str; 3] = ["id", "x", "y"];
pub const EDGES_HEADER: [&str; 2] = ["i", "j"];

pub fn points_table(points: &[Point]) -> Table {
    let mut t = Table::new(&POINTS_HEADER);
    for (i, p) in points.iter().enumerate() {
        t.push_numbers(&[i as f64, p.x, p.y]);
    }
    t
}

pub fn edges_table(g: &Graph) -> Table {
    let mut t = Table::new(&EDGES_HEADER);
    for (i, j) in g.edges() {
        t.push_row(vec![i.to_string(), j.to_string()]);
    }
    t
}

fn as_index(x: f64) -> Result<usize> {
    if x >= 0.0 && x.fract() == 0.0 && x < u32::MAX as f64 {
        Ok(x as usize)
    } else {
        Err(Error::InvalidParameter(format!("not a node index: {x}")))
    }
}

/// Reads `points.csv`; ids must be `0..N` in order.
pub fn read_points(text: &str) -> Result<Vec<Point>> {
    let rows = Table::parse(text)?.numeric(&POINTS_HEADER)?;
    rows.iter()
        .enumerate()
        .map(|(k, r)| {
            if as_index(r[0])? != k {
                return Err(Error::InvalidParameter(format!("point ids must be 0..N in order; row {k} has id {}", r[0])));
            }
            Point::try_new(r[1], r[2])
        })
        .collect()
}

/// Reads `edges.csv` into a graph over `points`.
pub fn read_graph(points: Vec<Point>, edges_text: &str) -> Result<Graph> {
    let rows = Table::parse(edges_text)?.numeric(&EDGES_HEADER)?;
    let edges = rows
        .iter()
        .map(|r| Ok((as_index(r[0])?, as_index(r[1])?)))
        .collect::<Result<Vec<_>>>()?;
    Graph::new(points, &edges)
}
