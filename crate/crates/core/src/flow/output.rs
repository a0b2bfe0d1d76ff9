use std::io::Write;

use serde_json::{json, Value};

use super::FlowTrace;
use crate::scalar::Real;

pub const TRACE_SCHEMA_VERSION: u32 = 1;

/// CSV with columns `t, x0, .., x{d-1}, f, gradnorm, event`; floats in
/// 17-significant-digit scientific notation.
pub fn write_trace_csv<T: Real, W: Write>(trace: &FlowTrace<T>, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend((0..trace.dim()).map(|i| format!("x{i}")));
    header.extend(["f", "gradnorm", "event"].map(String::from));
    w.write_record(&header)?;
    let fmt = |v: T| format!("{:.16e}", v.as_f64());
    for s in &trace.samples {
        let mut row = vec![fmt(s.t)];
        row.extend(s.x.iter().map(|&v| fmt(v)));
        row.push(fmt(s.f));
        row.push(fmt(s.grad_norm));
        row.push(s.event.as_str().to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn trace_json<T: Real>(trace: &FlowTrace<T>) -> Value {
    json!({
        "schema_version": TRACE_SCHEMA_VERSION,
        "trace": trace,
    })
}
