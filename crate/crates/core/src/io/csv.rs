use std::io::Write;

use crate::energy::EnergyReport;
use crate::error::{Error, Result};

/// Frozen column order of every time-series file.
pub const CSV_HEADER: &str = "t,E,grad_part,density_part,E_GL,E_mGL,H,M,Z,status";

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub report: EnergyReport,
    pub status: String,
}

/// One row without a trailing newline. Reals use the shortest
/// representation that parses back to the same bits.
pub fn format_row(row: &SeriesRow) -> String {
    let r = &row.report;
    format!(
        "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{}",
        row.t, r.e, r.grad_part, r.density_part, r.e_gl, r.e_mgl, r.h, r.m, r.z, row.status
    )
}

pub fn parse_row(line: &str) -> Result<SeriesRow> {
    let cols: Vec<&str> = line.trim_end().split(',').collect();
    if cols.len() != 10 {
        return Err(Error::Csv(format!("expected 10 columns, found {}", cols.len())));
    }
    let mut x = [0.0; 9];
    for (i, c) in cols[..9].iter().enumerate() {
        x[i] = c.parse().map_err(|_| Error::Csv(format!("column {}: '{c}' is not a number", i + 1)))?;
    }
    Ok(SeriesRow {
        t: x[0],
        report: EnergyReport {
            e: x[1],
            grad_part: x[2],
            density_part: x[3],
            e_gl: x[4],
            e_mgl: x[5],
            h: x[6],
            m: x[7],
            z: x[8],
        },
        status: cols[9].to_string(),
    })
}

/// Header followed by one line per row.
pub fn write_series<W: Write>(out: &mut W, rows: &[SeriesRow]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", format_row(row))?;
    }
    Ok(())
}
