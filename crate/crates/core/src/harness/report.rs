//! CSV and JSON report emission. Both formats are byte-deterministic for a
//! given row list.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ineq::{IneqId, IneqReport, Params};

pub const CSV_COLUMNS: [&str; 14] = [
    "ineq", "alpha", "s", "p", "q", "a", "b", "x", "fn", "lhs", "rhs", "slack", "holds", "notes",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown report format {other:?} (csv or json)"))),
        }
    }
}

/// `printf("%.17g")`: 17 significant digits, trailing zeros removed,
/// exponent form outside `[1e-4, 1e17)`.
pub fn format_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if negative { "-" } else { "" };
    if (-4..17).contains(&exp) {
        let body = if exp >= 0 {
            let split = exp as usize + 1;
            format!("{}.{}", &digits[..split], &digits[split..])
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        };
        let body = body.trim_end_matches('0').trim_end_matches('.');
        format!("{sign}{body}")
    } else {
        let frac = digits[1..].trim_end_matches('0');
        let mant = if frac.is_empty() {
            digits[..1].to_string()
        } else {
            format!("{}.{}", &digits[..1], frac)
        };
        let esign = if exp < 0 { '-' } else { '+' };
        format!("{sign}{mant}e{esign}{:02}", exp.abs())
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(format_g17).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[IneqReport], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let ser = |e: csv::Error| Error::Serialize(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(ser)?;
    for r in rows {
        let p = &r.params;
        w.write_record([
            r.ineq.to_string(),
            cell(p.alpha),
            cell(p.s),
            cell(p.p),
            cell(p.q),
            cell(p.a),
            cell(p.b),
            cell(p.x),
            r.function.clone(),
            format_g17(r.lhs),
            format_g17(r.rhs),
            format_g17(r.slack),
            r.holds.to_string(),
            r.notes.clone(),
        ])
        .map_err(ser)?;
    }
    w.flush().map_err(|e| Error::Serialize(e.to_string()))
}

/// Flat JSON row; non-finite reals are written as `null` and read back as NaN.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRow {
    ineq: IneqId,
    alpha: Option<f64>,
    s: Option<f64>,
    p: Option<f64>,
    q: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    x: Option<f64>,
    #[serde(rename = "fn")]
    function: String,
    lhs: Option<f64>,
    rhs: Option<f64>,
    slack: Option<f64>,
    holds: bool,
    notes: String,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl From<&IneqReport> for JsonRow {
    fn from(r: &IneqReport) -> Self {
        let p = r.params;
        JsonRow {
            ineq: r.ineq,
            alpha: p.alpha,
            s: p.s,
            p: p.p,
            q: p.q,
            a: p.a,
            b: p.b,
            x: p.x,
            function: r.function.clone(),
            lhs: finite(r.lhs),
            rhs: finite(r.rhs),
            slack: finite(r.slack),
            holds: r.holds,
            notes: r.notes.clone(),
        }
    }
}

impl From<JsonRow> for IneqReport {
    fn from(j: JsonRow) -> Self {
        IneqReport {
            ineq: j.ineq,
            params: Params {
                alpha: j.alpha,
                s: j.s,
                p: j.p,
                q: j.q,
                a: j.a,
                b: j.b,
                x: j.x,
            },
            function: j.function,
            lhs: j.lhs.unwrap_or(f64::NAN),
            rhs: j.rhs.unwrap_or(f64::NAN),
            slack: j.slack.unwrap_or(f64::NAN),
            holds: j.holds,
            notes: j.notes,
        }
    }
}

pub fn write_json<W: Write>(rows: &[IneqReport], mut out: W) -> Result<()> {
    let rows: Vec<JsonRow> = rows.iter().map(JsonRow::from).collect();
    serde_json::to_writer_pretty(&mut out, &rows).map_err(|e| Error::Serialize(e.to_string()))?;
    out.write_all(b"\n").map_err(|e| Error::Serialize(e.to_string()))
}

pub fn parse_json(text: &str) -> Result<Vec<IneqReport>> {
    let rows: Vec<JsonRow> = serde_json::from_str(text).map_err(|e| Error::Serialize(e.to_string()))?;
    Ok(rows.into_iter().map(IneqReport::from).collect())
}

pub fn render(rows: &[IneqReport], format: Format) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(rows, &mut buf)?,
        Format::Json => write_json(rows, &mut buf)?,
    }
    Ok(buf)
}

pub fn emit_report(rows: &[IneqReport], format: Format, path: &Path) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let bytes = render(rows, format)?;
    let mut file = BufWriter::new(File::create(path).map_err(io)?);
    file.write_all(&bytes).map_err(io)?;
    file.flush().map_err(io)
}
