//! Trace CSV: `k,kind,j,l,theta,theta_max,obj,support_size[,y_1..y_m]`.
//!
//! Column indices are written 1-based; absent indices are empty fields.

use std::io::Write;

use super::Trace;
use crate::Real;

pub fn trace_csv_header(m: usize, with_y: bool) -> String {
    let mut h = String::from("k,kind,j,l,theta,theta_max,obj,support_size");
    if with_y {
        for i in 1..=m {
            h.push_str(&format!(",y_{i}"));
        }
    }
    h
}

fn index(i: Option<usize>) -> String {
    i.map(|v| (v + 1).to_string()).unwrap_or_default()
}

/// Writes the trace; `y` columns are included when every step carries a
/// snapshot.
pub fn write_trace_csv<T: Real, W: Write>(trace: &Trace<T>, mut out: W) -> std::io::Result<()> {
    let m = trace.initial_y.len();
    let with_y = !trace.steps.is_empty() && trace.steps.iter().all(|s| s.y_snapshot.is_some());
    writeln!(out, "{}", trace_csv_header(m, with_y))?;
    for s in &trace.steps {
        write!(
            out,
            "{},{},{},{},{},{},{},{}",
            s.k,
            s.kind.as_str(),
            index(s.j),
            index(s.l),
            s.theta.as_f64(),
            s.theta_max.as_f64(),
            s.obj.as_f64(),
            s.support_size
        )?;
        if with_y {
            for v in s.y_snapshot.as_deref().unwrap_or_default() {
                write!(out, ",{}", v.as_f64())?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}
