//! CSV and JSON emission.

use crate::error::{Error, Result};
use serde::Serialize;

/// `%.12g`-style formatting: 12 significant digits, trailing zeros dropped.
pub fn fmt_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    let s = if !(-5..12).contains(&e) {
        let m = format!("{:.11e}", x);
        let (mant, exp) = m.split_once('e').unwrap();
        let mant = trim_zeros(mant);
        let exp: i32 = exp.parse().unwrap();
        format!("{mant}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (11 - e).max(0) as usize, x))
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// One CSV field.
pub enum Field {
    Int(i64),
    Float(f64),
    Opt(Option<f64>),
    Text(String),
    Bool(bool),
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Float(v) => fmt_g12(*v),
            Field::Opt(Some(v)) => fmt_g12(*v),
            Field::Opt(None) => String::new(),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
        }
    }
}

/// Rows that can be written as CSV with a fixed column order.
pub trait CsvRow {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<Field>;
}

pub fn to_csv<R: CsvRow>(rows: &[R], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&R::HEADER.join(","));
    out.push('\n');
    for r in rows {
        let line: Vec<String> = r.fields().iter().map(Field::render).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Usage(format!("JSON encoding failed: {e}")))?;
    s.push('\n');
    Ok(s)
}
