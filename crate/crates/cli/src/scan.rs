use std::f64::consts::FRAC_PI_2;

use anyhow::{bail, Result};
use rayon::prelude::*;

use critmetro_core::fisher_closed::{cfi_quadrature, optimize_quadrature_angle, qfi_total_closed};
use critmetro_core::fisher_dd::{cfi_dd_quadrature, optimize_dd_angle, qfi_dd};
use critmetro_core::model::accumulated_phase;

use crate::config::{Mode, ScanConfig};

pub const CLOSED_COLUMNS: [&str; 11] = [
    "g_over_gc",
    "xi",
    "phi",
    "qfi_phase",
    "qfi_critical",
    "qfi_interference",
    "qfi_total",
    "cfi_X",
    "cfi_P",
    "cfi_opt",
    "theta_opt",
];

pub const DD_COLUMNS: [&str; 9] = [
    "t",
    "qfi_phase",
    "qfi_critical",
    "qfi_interference",
    "qfi_total",
    "cfi_X",
    "cfi_P",
    "cfi_opt",
    "theta_opt",
];

/// A scan result: column names and one row of numbers per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn scan_closed(config: &ScanConfig) -> Result<Table> {
    if config.mode != Mode::Closed {
        bail!("scan_closed needs mode = closed");
    }
    let grid = config.grid()?;
    let rows = grid
        .par_iter()
        .map(|&r| -> Result<Vec<f64>> {
            let p = config.closed_params(r)?;
            let phi = accumulated_phase(p.g, &p)?;
            let q = qfi_total_closed(&p)?;
            let x = cfi_quadrature(&p, phi, 0.0)?;
            let pq = cfi_quadrature(&p, phi, FRAC_PI_2)?;
            let (th, opt) = optimize_quadrature_angle(&p, phi)?;
            Ok(vec![
                r,
                p.xi(),
                phi,
                q.phase_term(),
                q.critical_term(),
                q.interference_term(),
                q.total(),
                x.total,
                pq.total,
                opt.total,
                th,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        columns: CLOSED_COLUMNS.to_vec(),
        rows,
    })
}

pub fn scan_dd(config: &ScanConfig) -> Result<Table> {
    if config.mode != Mode::DrivenDissipative {
        bail!("scan_dd needs mode = driven_dissipative");
    }
    let grid = config.grid()?;
    let rows = grid
        .par_iter()
        .map(|&t| -> Result<Vec<f64>> {
            let p = config.dd_params(t)?;
            let q = qfi_dd(&p)?;
            let x = cfi_dd_quadrature(&p, 0.0)?;
            let pq = cfi_dd_quadrature(&p, FRAC_PI_2)?;
            let (th, opt) = optimize_dd_angle(&p)?;
            Ok(vec![
                t,
                q.phase_term(),
                q.critical_term(),
                q.interference_term(),
                q.total(),
                x.total,
                pq.total,
                opt.total,
                th,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        columns: DD_COLUMNS.to_vec(),
        rows,
    })
}

pub fn run_scan(config: &ScanConfig) -> Result<Table> {
    match config.mode {
        Mode::Closed => scan_closed(config),
        Mode::DrivenDissipative => scan_dd(config),
    }
}

/// CSV text with `#` comment lines carrying the command and the config.
/// Numbers use the shortest representation that round-trips.
pub fn to_csv(command: &str, config: &ScanConfig, table: &Table) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    buf.extend_from_slice(format!("# critmetro {command}\n").as_bytes());
    buf.extend_from_slice(format!("# config: {}\n", config.to_json_line()).as_bytes());
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(&table.columns)?;
        for row in &table.rows {
            w.write_record(row.iter().map(|v| format!("{v:e}")))?;
        }
        w.flush()?;
    }
    Ok(buf)
}

/// Parse a CSV produced by [`to_csv`].
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let cols = r.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push(
            rec.iter()
                .map(|s| s.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok((cols, rows))
}
