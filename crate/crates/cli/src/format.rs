//! System files: a versioned JSON document or a flat CSV table.
//!
//! Every float is written with 17 significant digits, so a file read back
//! reproduces the in-memory vectors bit for bit.

use std::io;

use cp2mub::{Basis, CVec3, GaugeConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;
pub const CSV_HEADER: [&str; 8] = ["label", "index", "re0", "im0", "re1", "im1", "re2", "im2"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub format_version: u32,
    pub tool_version: String,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeConfig>,
}

impl Metadata {
    pub fn current(tolerance: f64, gauge: Option<GaugeConfig>) -> Self {
        Metadata {
            format_version: FORMAT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            tolerance,
            gauge,
        }
    }
}

/// One basis as stored: three vectors of three `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub label: String,
    pub vectors: Vec<[[f64; 2]; 3]>,
}

impl From<&Basis> for BasisRecord {
    fn from(b: &Basis) -> Self {
        BasisRecord {
            label: b.label.clone(),
            vectors: b.vectors.iter().map(|v| v.0.map(|z| [z.re, z.im])).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub metadata: Metadata,
    pub bases: Vec<BasisRecord>,
}

impl SystemFile {
    pub fn new(metadata: Metadata, bases: &[Basis]) -> Self {
        SystemFile { metadata, bases: bases.iter().map(BasisRecord::from).collect() }
    }
}

/// A parsed input; CSV files carry no metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub metadata: Option<Metadata>,
    pub bases: Vec<Basis>,
}

impl Loaded {
    pub fn basis(&self, label: &str) -> Option<&Basis> {
        self.bases.iter().find(|b| b.label == label)
    }
}

fn field(path: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Field { field: path.into(), message: message.into() }
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty JSON whose floats carry 17 significant digits.
struct Digits17<'a>(PrettyFormatter<'a>);

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(fmt_f64(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

pub fn to_csv(bases: &[Basis]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for b in bases {
        for (k, v) in b.vectors.iter().enumerate() {
            let mut row = vec![b.label.clone(), k.to_string()];
            for z in v.0 {
                row.push(fmt_f64(z.re));
                row.push(fmt_f64(z.im));
            }
            w.write_record(&row).expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv writes UTF-8")
}

/// Parses JSON or CSV, decided by the first non-blank character.
pub fn parse(text: &str) -> Result<Loaded, CliError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_csv(text)
    }
}

pub fn parse_json(text: &str) -> Result<Loaded, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| field("<document>", e.to_string()))?;
    let version = value
        .get("metadata")
        .ok_or_else(|| field("metadata", "missing"))?
        .get("format_version")
        .ok_or_else(|| field("metadata.format_version", "missing"))?;
    if version.as_u64() != Some(FORMAT_VERSION as u64) {
        return Err(field(
            "metadata.format_version",
            format!("unsupported version {version} (expected {FORMAT_VERSION})"),
        ));
    }
    let file: SystemFile = serde_path_to_error::deserialize(value)
        .map_err(|e| field(e.path().to_string(), e.inner().to_string()))?;
    let t = file.metadata.tolerance;
    if !(t.is_finite() && t > 0.0) {
        return Err(field("metadata.tolerance", format!("must be positive, got {t}")));
    }
    let mut bases = Vec::with_capacity(file.bases.len());
    for (i, rec) in file.bases.iter().enumerate() {
        if rec.vectors.len() != 3 {
            return Err(field(
                format!("bases[{i}].vectors"),
                format!("expected 3 vectors, found {}", rec.vectors.len()),
            ));
        }
        let v = [0, 1, 2].map(|k| CVec3(rec.vectors[k].map(|[re, im]| Complex64::new(re, im))));
        bases.push(Basis::new(rec.label.clone(), v));
    }
    check_shape(&bases)?;
    Ok(Loaded { metadata: Some(file.metadata), bases })
}

pub fn parse_csv(text: &str) -> Result<Loaded, CliError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| field("header", e.to_string()))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(field("header", format!("expected `{}`", CSV_HEADER.join(","))));
    }
    let mut rows: Vec<(String, [Option<CVec3>; 3])> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| field("row", e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let at = |col: &str| format!("line {line}, column {col}");
        if rec.len() != 8 {
            return Err(field(at("*"), format!("expected 8 columns, found {}", rec.len())));
        }
        let label = rec[0].to_string();
        let index: usize = rec[1].parse().map_err(|_| field(at("index"), format!("not an index: `{}`", &rec[1])))?;
        if index > 2 {
            return Err(field(at("index"), format!("index {index} out of range 0..=2")));
        }
        let mut num = [0.0; 6];
        for (k, x) in num.iter_mut().enumerate() {
            let s = &rec[k + 2];
            *x = s.parse().map_err(|_| field(at(CSV_HEADER[k + 2]), format!("not a number: `{s}`")))?;
        }
        let v = CVec3([0, 1, 2].map(|n| Complex64::new(num[2 * n], num[2 * n + 1])));
        let slot = match rows.iter_mut().find(|(l, _)| *l == label) {
            Some((_, slot)) => slot,
            None => {
                rows.push((label.clone(), [None; 3]));
                &mut rows.last_mut().expect("just pushed").1
            }
        };
        if slot[index].replace(v).is_some() {
            return Err(field(at("index"), format!("duplicate row {label}/{index}")));
        }
    }
    let mut bases = Vec::with_capacity(rows.len());
    for (label, slot) in rows {
        let [Some(a), Some(b), Some(c)] = slot else {
            return Err(field(format!("basis {label}"), "needs rows with index 0, 1 and 2"));
        };
        bases.push(Basis::new(label, [a, b, c]));
    }
    check_shape(&bases)?;
    Ok(Loaded { metadata: None, bases })
}

fn check_shape(bases: &[Basis]) -> Result<(), CliError> {
    if bases.len() != 4 {
        return Err(field("bases", format!("expected 4 bases, found {}", bases.len())));
    }
    for (i, b) in bases.iter().enumerate() {
        if b.label.is_empty() {
            return Err(field(format!("bases[{i}].label"), "empty label"));
        }
        if bases[..i].iter().any(|o| o.label == b.label) {
            return Err(field(format!("bases[{i}].label"), format!("duplicate label `{}`", b.label)));
        }
        for (k, v) in b.vectors.iter().enumerate() {
            if v.0.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(field(format!("bases[{i}].vectors[{k}]"), "non-finite component"));
            }
        }
    }
    Ok(())
}
