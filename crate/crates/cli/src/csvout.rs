//! Minimal CSV assembly: header always present, floats rendered with six
//! significant digits, durations in milliseconds.

use std::time::Duration;

pub struct CsvWriter {
    buf: String,
    columns: usize,
}

impl CsvWriter {
    pub fn new(header: &[&str]) -> Self {
        let mut w = CsvWriter {
            buf: String::new(),
            columns: header.len(),
        };
        w.buf.push_str(&header.join(","));
        w.buf.push('\n');
        w
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "row width != header width");
        for f in fields {
            debug_assert!(
                !f.contains(',') && !f.contains('\n'),
                "field needs quoting: {f:?}"
            );
        }
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Render with six significant digits, plain notation.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(magnitude - 5);
    let x = (x / scale).round() * scale;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // trim trailing zeros but keep at least one digit after the point
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        t.to_string()
    } else {
        s
    }
}

pub fn fmt_ms(d: Duration) -> String {
    fmt_sig(d.as_secs_f64() * 1e3)
}
