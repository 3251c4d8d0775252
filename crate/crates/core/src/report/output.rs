use std::io::{self, Write};
use std::path::Path;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

use super::config::{command_name, OutputFormat, ResolvedConfig};
use super::ReportError;

/// 17 significant digits, which round-trips every double.
pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Num(v) => format_f64(*v),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Num(v) => s.serialize_f64(*v),
            Cell::Int(i) => s.serialize_i64(*i),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Bool(b) => s.serialize_bool(*b),
        }
    }
}

/// One table of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Section {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Value in column `col` of row `row`.
    pub fn get(&self, row: usize, col: &str) -> Option<&Cell> {
        let c = self.columns.iter().position(|n| n == col)?;
        self.rows.get(row)?.get(c)
    }
}

struct Rows<'a>(&'a Section);

struct Row<'a>(&'a [String], &'a [Cell]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for r in &self.0.rows {
            seq.serialize_element(&Row(&self.0.columns, r))?;
        }
        seq.end()
    }
}

struct Results<'a>(&'a [Section]);

impl Serialize for Results<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for sec in self.0 {
            m.serialize_entry(&sec.name, &Rows(sec))?;
        }
        m.end()
    }
}

struct Residuals<'a>(&'a [(String, f64)]);

impl Serialize for Residuals<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub config: ResolvedConfig,
    pub sections: Vec<Section>,
    pub residuals: Vec<(String, f64)>,
    pub warnings: Vec<String>,
    pub version: &'static str,
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(5))?;
        m.serialize_entry("config", &self.config)?;
        m.serialize_entry("results", &Results(&self.sections))?;
        m.serialize_entry("residuals", &Residuals(&self.residuals))?;
        m.serialize_entry("warnings", &self.warnings)?;
        m.serialize_entry("version", self.version)?;
        m.end()
    }
}

/// Wraps a formatter so that floats use [`format_f64`].
struct Digits17<F>(F);

impl<F: Formatter> Formatter for Digits17<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

fn to_json_with<F: Formatter, T: Serialize + ?Sized>(value: &T, f: F) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(f));
    value.serialize(&mut ser).expect("report values serialize");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = to_json_with(self, PrettyFormatter::new());
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# nhqm {}\n", self.version));
        out.push_str(&format!("# command: {}\n", command_name(self.config.command)));
        out.push_str(&format!("# config: {}\n", to_json_with(&self.config, CompactFormatter)));
        for w in &self.warnings {
            out.push_str(&format!("# warning: {}\n", w.replace('\n', " ")));
        }
        let mut residuals = Section::new("residuals", &["name", "value"]);
        for (k, v) in &self.residuals {
            residuals.push(vec![Cell::Text(k.clone()), Cell::Num(*v)]);
        }
        let tail = (!self.residuals.is_empty()).then_some(&residuals);
        for sec in self.sections.iter().chain(tail) {
            out.push_str(&format!("# section: {}\n", sec.name));
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            w.write_record(&sec.columns).expect("in-memory write");
            for r in &sec.rows {
                w.write_record(r.iter().map(Cell::csv_field)).expect("in-memory write");
            }
            let bytes = w.into_inner().expect("in-memory flush");
            out.push_str(&String::from_utf8(bytes).expect("fields are UTF-8"));
        }
        out
    }

    pub fn render(&self) -> String {
        match self.config.format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }

    /// Write to the configured path, or stdout without one.
    pub fn emit(&self) -> Result<(), ReportError> {
        let text = self.render();
        match &self.config.out {
            Some(p) => write_file(p, &text),
            None => {
                let mut stdout = io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|source| ReportError::Io {
                        path: "stdout".into(),
                        source,
                    })
            }
        }
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), ReportError> {
    std::fs::write(path, text).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })
}
