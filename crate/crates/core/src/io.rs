//! Artifact serialization: CSV with shortest round-trip floats and JSON.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::walk::SampleSet;

/// Shortest representation that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        ryu::Buffer::new().format_finite(x).to_string()
    }
}

/// Columns: `trial, n, log_norm, log_specrad, delta_n, cartan_1..d,
/// jordan_1..d, degenerate`.
pub fn samples_csv<T: Real>(set: &SampleSet<T>) -> String {
    let d = set.samples.iter().flatten().next().map_or(0, |s| s.cartan.values().len());
    let mut out = String::from("trial,n,log_norm,log_specrad,delta_n");
    for prefix in ["cartan", "jordan"] {
        for i in 1..=d {
            let _ = write!(out, ",{prefix}_{i}");
        }
    }
    out.push_str(",degenerate\n");
    for (t, trial) in set.samples.iter().enumerate() {
        for s in trial {
            let _ = write!(
                out,
                "{t},{},{},{},{}",
                s.n,
                format_float(s.log_norm.as_f64()),
                format_float(s.log_specrad.as_f64()),
                format_float(s.delta_n.as_f64())
            );
            for v in s.cartan.values().iter().chain(s.jordan.values()) {
                out.push(',');
                out.push_str(&format_float(v.as_f64()));
            }
            let _ = writeln!(out, ",{}", s.degenerate);
        }
    }
    out
}

/// Column-oriented CSV; all columns must have the same length.
pub fn columns_csv(columns: &[(&str, Vec<f64>)]) -> Result<String> {
    let rows = columns.first().map_or(0, |c| c.1.len());
    if columns.iter().any(|c| c.1.len() != rows) {
        return Err(Error::Domain("CSV columns differ in length".into()));
    }
    let mut out = columns.iter().map(|c| c.0).collect::<Vec<_>>().join(",");
    out.push('\n');
    for r in 0..rows {
        let line: Vec<String> = columns.iter().map(|c| format_float(c.1[r])).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<S: Serialize + ?Sized>(value: &S) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Domain(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}
