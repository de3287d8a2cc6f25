//! Rendered command output. A report is kept as structured blocks so that
//! `ssopt report` can re-render a saved run in either output format.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use ssopt_core::procurement::Money;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Cell {
    Text(String),
    Int(i64),
    /// Shown with `digits` decimals in tables, shortest round-trip in CSV.
    Num { value: f64, digits: usize },
    Money { paise: i64 },
    Missing,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn num(value: f64, digits: usize) -> Self {
        Cell::Num { value, digits }
    }

    pub fn money(m: Money) -> Self {
        Cell::Money { paise: m.paise() }
    }

    pub fn opt(value: Option<f64>, digits: usize) -> Self {
        value.map_or(Cell::Missing, |v| Cell::num(v, digits))
    }

    fn plain(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num { value, digits } => format!("{value:.digits$}"),
            Cell::Money { paise } => Money::from_paise(*paise).grouped(),
            Cell::Missing => "NA".into(),
        }
    }

    fn exact(&self) -> String {
        match self {
            Cell::Num { value, .. } => value.to_string(),
            Cell::Money { paise } => Money::from_paise(*paise).to_string(),
            other => other.plain(),
        }
    }

    fn right_aligned(&self) -> bool {
        !matches!(self, Cell::Text(_))
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::text(s)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<Money> for Cell {
    fn from(m: Money) -> Self {
        Cell::money(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(title: &str, headers: &[&str]) -> Self {
        Self { title: title.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Lossless CSV: header row, then shortest round-trip numbers.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::exact)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    fn to_plain(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::plain).collect()).collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|c| cells.iter().map(|r| r[c].chars().count()).chain([self.headers[c].len()]).max().unwrap_or(0))
            .collect();
        let pad = |s: &str, w: usize, right: bool| {
            if right {
                format!("{s:>w$}")
            } else {
                format!("{s:<w$}")
            }
        };
        let mut out = String::new();
        let line = |parts: Vec<String>| parts.join("  ").trim_end().to_string();
        let right_col = |c: usize| self.rows.first().is_some_and(|r| r[c].right_aligned());
        let _ = writeln!(
            out,
            "{}",
            line(self.headers.iter().enumerate().map(|(c, h)| pad(h, widths[c], right_col(c))).collect())
        );
        let _ = writeln!(out, "{}", line(widths.iter().map(|&w| "-".repeat(w)).collect()));
        for (row, text) in self.rows.iter().zip(&cells) {
            let parts = row.iter().zip(text).enumerate().map(|(c, (cell, s))| pad(s, widths[c], cell.right_aligned()));
            let _ = writeln!(out, "{}", line(parts.collect()));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Block {
    Line { text: String },
    Table { table: Table },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Report {
    pub header: String,
    pub blocks: Vec<Block>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(header: String) -> Self {
        Self { header, ..Self::default() }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.blocks.push(Block::Line { text: text.into() });
    }

    pub fn table(&mut self, table: Table) {
        self.blocks.push(Block::Table { table });
    }

    pub fn warn(&mut self, text: impl Into<String>) {
        self.warnings.push(text.into());
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = format!("{}\n", self.header);
        let mut after_table = false;
        for block in &self.blocks {
            match (block, format) {
                (Block::Line { text }, Format::Table) => {
                    let gap = if after_table { "\n" } else { "" };
                    let _ = writeln!(out, "{gap}{text}");
                }
                (Block::Line { text }, Format::Csv) => {
                    let _ = writeln!(out, "# {text}");
                }
                (Block::Table { table }, Format::Table) => {
                    let _ = write!(out, "\n{}\n{}", table.title, table.to_plain());
                }
                (Block::Table { table }, Format::Csv) => {
                    let _ = write!(out, "\n# {}\n{}", table.title, table.to_csv());
                }
            }
            after_table = matches!(block, Block::Table { .. });
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}
