use std::io::Write;

use spd_geom::experiments::GridCell;
use spd_geom::kernel::{ScanReport, ScanStatus};

use crate::error::CliError;

/// Round-trip representation with 17 significant digits.
pub fn exact(x: f64) -> String {
    format!("{x:.16e}")
}

/// `%.15g`-style rendering: 15 significant digits, fixed notation for
/// moderate exponents, trailing zeros removed.
pub fn significant(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub fn write_grid<W: Write>(w: W, cells: &[GridCell]) -> Result<(), CliError> {
    let mut out = writer(w);
    out.write_record(["alpha", "beta", "kappa_min", "kappa_max", "n_skipped"])?;
    for c in cells {
        out.write_record([
            exact(c.alpha),
            exact(c.beta),
            exact(c.kappa_min),
            exact(c.kappa_max),
            c.n_skipped.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn bracket_line(report: &ScanReport) -> Option<String> {
    report
        .boundary
        .map(|(lo, hi)| format!("p0 in [{}, {}]", exact(lo), exact(hi)))
}

/// Scan rows, then the boundary bracket as a `#` comment when one was found.
pub fn write_scan<W: Write>(w: W, report: &ScanReport) -> Result<(), CliError> {
    let mut out = writer(w);
    out.write_record(["p", "is_mean", "worst_axiom", "worst_violation"])?;
    for row in &report.rows {
        let record = match &row.status {
            ScanStatus::Undefined => [exact(row.p), "undefined".into(), String::new(), String::new()],
            ScanStatus::Classified(r) => match r.worst() {
                Some(v) => [
                    exact(row.p),
                    r.is_mean.to_string(),
                    v.axiom.to_string(),
                    exact(v.magnitude),
                ],
                None => [exact(row.p), r.is_mean.to_string(), "none".into(), exact(0.0)],
            },
        };
        out.write_record(&record)?;
    }
    out.flush()?;
    let mut inner = out.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(line) = bracket_line(report) {
        writeln!(inner, "# {line}")?;
    }
    inner.flush()?;
    Ok(())
}
