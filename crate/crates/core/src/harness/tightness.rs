//! Pivoted view of a sweep: per (α, m, q) cell, how often each bound was
//! the smallest across functions and intervals.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::bounds::BoundLabel;
use crate::harness::{fmt_float, sweep, HarnessError};

pub const TIGHTNESS_COLUMNS: [&str; 11] = [
    "alpha",
    "m",
    "q",
    "thm21",
    "thm22_tight",
    "thm22",
    "thm23_tight",
    "thm23",
    "thm24",
    "evaluated",
    "skipped",
];

#[derive(Debug, Clone, Serialize)]
pub struct TightnessRow {
    pub alpha: f64,
    pub m: f64,
    pub q: f64,
    pub thm21: u64,
    pub thm22_tight: u64,
    pub thm22: u64,
    pub thm23_tight: u64,
    pub thm23: u64,
    pub thm24: u64,
    pub evaluated: u64,
    pub skipped: u64,
}

impl TightnessRow {
    fn win_slot(&mut self, label: &str) -> &mut u64 {
        match label {
            "thm21" => &mut self.thm21,
            "thm22_tight" => &mut self.thm22_tight,
            "thm22" => &mut self.thm22,
            "thm23_tight" => &mut self.thm23_tight,
            "thm23" => &mut self.thm23,
            "thm24" => &mut self.thm24,
            other => unreachable!("unknown bound label {other}"),
        }
    }

    fn csv_record(&self) -> Vec<String> {
        vec![
            fmt_float(self.alpha),
            fmt_float(self.m),
            fmt_float(self.q),
            self.thm21.to_string(),
            self.thm22_tight.to_string(),
            self.thm22.to_string(),
            self.thm23_tight.to_string(),
            self.thm23.to_string(),
            self.thm24.to_string(),
            self.evaluated.to_string(),
            self.skipped.to_string(),
        ]
    }
}

/// Aggregate sweep rows into win counts, cells ordered as configured
/// (alphas outermost, qs innermost).
pub fn tightness_table(config: &sweep::SweepConfig) -> Result<Vec<TightnessRow>, HarnessError> {
    let summary = sweep::compute_rows(config)?;
    let mut cells: Vec<TightnessRow> = Vec::new();
    for &alpha in &config.alphas {
        for &m in &config.ms {
            for &q in &config.qs {
                cells.push(TightnessRow {
                    alpha,
                    m,
                    q,
                    thm21: 0,
                    thm22_tight: 0,
                    thm22: 0,
                    thm23_tight: 0,
                    thm23: 0,
                    thm24: 0,
                    evaluated: 0,
                    skipped: 0,
                });
            }
        }
    }
    let pos = |list: &[f64], v: f64| {
        list.iter()
            .position(|x| x.to_bits() == v.to_bits())
            .expect("row parameters come from the config lists")
    };
    for row in &summary.rows {
        let i = (pos(&config.alphas, row.alpha) * config.ms.len() + pos(&config.ms, row.m))
            * config.qs.len()
            + pos(&config.qs, row.q);
        if let Some(label) = &row.min_rhs_label {
            *cells[i].win_slot(label) += 1;
            cells[i].evaluated += 1;
        } else {
            cells[i].skipped += 1;
        }
    }
    Ok(cells)
}

pub fn write_table_csv<W: Write>(rows: &[TightnessRow], out: W) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(TIGHTNESS_COLUMNS)?;
    for row in rows {
        writer.write_record(row.csv_record())?;
    }
    writer.flush().map_err(|source| HarnessError::OutputIo {
        path: "<writer>".to_string(),
        source,
    })?;
    Ok(())
}

pub fn write_table_json<W: Write>(rows: &[TightnessRow], mut out: W) -> Result<(), HarnessError> {
    let emit = |source: std::io::Error| HarnessError::OutputIo {
        path: "<writer>".to_string(),
        source,
    };
    serde_json::to_writer_pretty(&mut out, rows).map_err(|e| emit(e.into()))?;
    out.write_all(b"\n").map_err(emit)?;
    out.flush().map_err(emit)
}

/// Build the table and write it to `config.output_path`.
pub fn run_tightness(config: &sweep::SweepConfig) -> Result<Vec<TightnessRow>, HarnessError> {
    let rows = tightness_table(config)?;
    let file = std::fs::File::create(Path::new(&config.output_path)).map_err(|source| {
        HarnessError::OutputIo {
            path: config.output_path.clone(),
            source,
        }
    })?;
    match config.format {
        sweep::OutputFormat::Csv => write_table_csv(&rows, file)?,
        sweep::OutputFormat::Json => write_table_json(&rows, file)?,
    }
    Ok(rows)
}

/// Win counts must cover the labels applicable at the cell's q.
pub fn applicable_labels(q: f64) -> &'static [BoundLabel] {
    if q > 1.0 {
        &BoundLabel::ALL
    } else {
        &[BoundLabel::Thm21, BoundLabel::Thm24]
    }
}
