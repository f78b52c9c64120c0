//! JSON and CSV rendering. JSON floats use the shortest round-trip form,
//! CSV floats use 17 significant digits.

use halfline_core::linalg::CMat;
use num_complex::Complex64;
use serde_json::{json, Value};

/// Row-major `[[[re, im], ...], ...]`.
pub fn matrix(m: &CMat) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect())).collect())
}

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_header(n: usize) -> String {
    let mut cols = vec!["k".to_string()];
    for i in 1..=n {
        for j in 1..=n {
            cols.push(format!("S{i}{j}_re"));
            cols.push(format!("S{i}{j}_im"));
        }
    }
    cols.extend(["unitarity_residual", "det_J_abs", "error"].map(String::from));
    cols.join(",")
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

/// CSV-safe single-line message.
pub fn csv_text(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "'").replace('\n', " "))
}
