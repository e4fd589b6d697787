//! Matrix files and plot data.
//!
//! A matrix file is JSON `{"rows": r, "cols": c, "data": [[re, im], ...]}`
//! in row-major order. Numbers are written with 17 significant digits, or
//! as hex-float strings (`"0x1.8p+1"`) for bit-exact round trips. Readers
//! accept both forms, mixed freely.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};
use crate::numrange::{BoundaryTrace, SectorInfo};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum FloatFormat {
    /// Decimal with 17 significant digits.
    #[default]
    Decimal,
    /// Hex-float strings.
    Hex,
}

/// `x` as a hex-float literal, e.g. `0x1.8p+1` for 3.
pub fn format_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    if exp == 0 && mant == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, e) = if exp == 0 { (0, -1022) } else { (1, exp - 1023) };
    let mut frac = format!("{mant:013x}");
    while frac.ends_with('0') {
        frac.pop();
    }
    let dot = if frac.is_empty() { String::new() } else { format!(".{frac}") };
    format!("{sign}0x{lead}{dot}p{e:+}")
}

/// Parses the output of [`format_hex`] (and any `[-]0xH[.HHH]p[+-]D`).
pub fn parse_hex(s: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("invalid hex float '{s}'"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let body = body
        .strip_prefix("0x")
        .or_else(|| body.strip_prefix("0X"))
        .ok_or_else(bad)?;
    let (mantissa, exp) = body.split_once(['p', 'P']).ok_or_else(bad)?;
    let exp: i32 = exp.parse().map_err(|_| bad())?;
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits: String = format!("{int}{frac}");
    if digits.len() > 15 || !digits.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(bad());
    }
    let m = if digits.is_empty() { 0 } else { u64::from_str_radix(&digits, 16).map_err(|_| bad())? };
    // exact: m < 2^60, and scaling by a power of two is exact unless the
    // result is subnormal, where powi rounds the same way as the literal
    let shift = exp - 4 * frac.len() as i32;
    let v = if shift < -1000 {
        (m as f64) * 2f64.powi(shift + 1000) * 2f64.powi(-1000)
    } else {
        (m as f64) * 2f64.powi(shift)
    };
    Ok(if neg { -v } else { v })
}

fn format_number(x: f64, fmt: FloatFormat) -> String {
    match fmt {
        FloatFormat::Decimal => format!("{x:.16e}"),
        FloatFormat::Hex => format!("\"{}\"", format_hex(x)),
    }
}

/// Matrix-file JSON text.
pub fn matrix_to_string(m: &ComplexMatrix, fmt: FloatFormat) -> String {
    let mut s = format!("{{\"rows\": {}, \"cols\": {}, \"data\": [", m.rows(), m.cols());
    for (idx, z) in m.as_slice().iter().enumerate() {
        if idx > 0 {
            s.push_str(", ");
        }
        s.push('[');
        s.push_str(&format_number(z.re, fmt));
        s.push_str(", ");
        s.push_str(&format_number(z.im, fmt));
        s.push(']');
    }
    s.push_str("]}\n");
    s
}

fn number(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
        Value::String(s) => parse_hex(s),
        other => Err(Error::Parse(format!("expected a number, found {other}"))),
    }
}

fn count(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("missing or invalid '{key}'")))
}

/// Matrix from an already-parsed matrix-file value.
pub fn matrix_from_value(v: &Value) -> Result<ComplexMatrix> {
    let rows = count(v, "rows")?;
    let cols = count(v, "cols")?;
    let data = v
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing or invalid 'data'".into()))?;
    if data.len() != rows * cols {
        return Err(Error::Parse(format!(
            "data has {} entries, expected {rows} x {cols}",
            data.len()
        )));
    }
    let mut out = Vec::with_capacity(data.len());
    for (i, e) in data.iter().enumerate() {
        let pair = e
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::Parse(format!("entry {i} is not an [re, im] pair")))?;
        let z = c64::new(number(&pair[0])?, number(&pair[1])?);
        if !z.is_finite() {
            return Err(Error::Parse(format!("entry {i} is not finite")));
        }
        out.push(z);
    }
    ComplexMatrix::new(rows, cols, out)
}

pub fn matrix_from_str(s: &str) -> Result<ComplexMatrix> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    matrix_from_value(&v)
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let s = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    matrix_from_str(&s)
}

pub fn write_matrix(path: &Path, m: &ComplexMatrix, fmt: FloatFormat) -> std::io::Result<()> {
    fs::write(path, matrix_to_string(m, fmt))
}

#[derive(Debug, Clone, Serialize)]
pub struct SupportingRay {
    /// Argument of the ray from the origin.
    pub angle: f64,
    pub direction: [f64; 2],
}

/// Plot data for the numerical range: boundary points and, for sectorial
/// matrices, the two supporting rays through the origin.
#[derive(Debug, Clone, Serialize)]
pub struct PlotData {
    pub points: Vec<[f64; 2]>,
    pub phi_max: Option<f64>,
    pub phi_min: Option<f64>,
    pub supporting_rays: Vec<SupportingRay>,
}

impl PlotData {
    pub fn new(trace: &BoundaryTrace, info: &SectorInfo) -> Self {
        let finite = |x: f64| x.is_finite().then_some(x);
        let supporting_rays = if info.sectorial {
            [info.phi_max, info.phi_min]
                .iter()
                .map(|&a| SupportingRay {
                    angle: a,
                    direction: [a.cos(), a.sin()],
                })
                .collect()
        } else {
            Vec::new()
        };
        PlotData {
            points: trace.points.iter().map(|z| [z.re, z.im]).collect(),
            phi_max: finite(info.phi_max),
            phi_min: finite(info.phi_min),
            supporting_rays,
        }
    }
}
