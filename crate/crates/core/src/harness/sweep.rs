//! Config-driven parameter sweeps over (function, interval, α, m, q).
//!
//! Each admissible combination becomes one [`ReportRow`] holding the
//! trapezoid gap, every applicable bound, the minimal bound, and the
//! convexity-gate verdict for |f''|^q. Inadmissible combinations are kept
//! as skipped rows so row counts reconcile against the configuration.

use std::collections::HashMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundLabel};
use crate::convexity::{self, AMParams, ConvexityVerdict};
use crate::harness::{corpus, fmt_float, HarnessError, DOMINANCE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub function_ids: Vec<String>,
    pub intervals: Vec<(f64, f64)>,
    pub alphas: Vec<f64>,
    pub ms: Vec<f64>,
    pub qs: Vec<f64>,
    pub quad_tol: f64,
    pub grid_n: usize,
    pub convexity_tol: f64,
    pub output_path: String,
    pub format: OutputFormat,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            function_ids: corpus::FUNCTION_IDS.iter().map(|s| s.to_string()).collect(),
            intervals: vec![(0.0, 1.0), (0.5, 1.5)],
            alphas: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            ms: vec![0.5, 1.0],
            qs: vec![1.0, 1.5, 2.0, 3.0],
            quad_tol: 1e-10,
            grid_n: convexity::DEFAULT_GRID_N,
            convexity_tol: convexity::DEFAULT_TOL,
            output_path: "sweep.csv".to_string(),
            format: OutputFormat::Csv,
        }
    }
}

impl SweepConfig {
    pub fn from_json_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::ConfigIo {
            path: path.display().to_string(),
            source,
        })?;
        let config: SweepConfig =
            serde_json::from_str(&text).map_err(|source| HarnessError::ConfigParse {
                path: path.display().to_string(),
                source,
            })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let mut bad = Vec::new();
        if self.function_ids.is_empty() {
            bad.push("function_ids (empty)");
        }
        if self.intervals.is_empty() {
            bad.push("intervals (empty)");
        }
        if self
            .intervals
            .iter()
            .any(|(a, b)| !(a.is_finite() && b.is_finite()))
        {
            bad.push("intervals (non-finite endpoint)");
        }
        if self.alphas.is_empty() || self.alphas.iter().any(|a| !(0.0..=1.0).contains(a)) {
            bad.push("alphas (need non-empty, each in [0, 1])");
        }
        if self.ms.is_empty() || self.ms.iter().any(|m| !(*m > 0.0 && *m <= 1.0)) {
            bad.push("ms (need non-empty, each in (0, 1])");
        }
        if self.qs.is_empty() || self.qs.iter().any(|q| !(q.is_finite() && *q >= 1.0)) {
            bad.push("qs (need non-empty, each >= 1)");
        }
        if !(self.quad_tol.is_finite() && self.quad_tol > 0.0) {
            bad.push("quad_tol (need > 0)");
        }
        if self.grid_n < 2 {
            bad.push("grid_n (need >= 2)");
        }
        if !(self.convexity_tol.is_finite() && self.convexity_tol >= 0.0) {
            bad.push("convexity_tol (need >= 0)");
        }
        if self.output_path.is_empty() {
            bad.push("output_path (empty)");
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(HarnessError::InvalidConfig {
                fields: bad.join(", "),
            })
        }
    }
}

pub const REPORT_COLUMNS: [&str; 18] = [
    "function_id",
    "a",
    "b",
    "alpha",
    "m",
    "q",
    "lhs",
    "rhs_thm21",
    "rhs_thm22_tight",
    "rhs_thm22",
    "rhs_thm23_tight",
    "rhs_thm23",
    "rhs_thm24",
    "min_rhs",
    "min_rhs_label",
    "slack_min",
    "convexity_holds",
    "skipped_reason",
];

/// One sweep cell. Bound columns are absent for skipped rows and for the
/// q = 1 rows where thm22/thm23 do not apply.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub function_id: String,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub m: f64,
    pub q: f64,
    pub lhs: Option<f64>,
    pub rhs_thm21: Option<f64>,
    pub rhs_thm22_tight: Option<f64>,
    pub rhs_thm22: Option<f64>,
    pub rhs_thm23_tight: Option<f64>,
    pub rhs_thm23: Option<f64>,
    pub rhs_thm24: Option<f64>,
    pub min_rhs: Option<f64>,
    pub min_rhs_label: Option<String>,
    pub slack_min: Option<f64>,
    pub convexity_holds: Option<bool>,
    pub skipped_reason: Option<String>,
}

impl ReportRow {
    fn csv_record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(fmt_float).unwrap_or_default();
        vec![
            self.function_id.clone(),
            fmt_float(self.a),
            fmt_float(self.b),
            fmt_float(self.alpha),
            fmt_float(self.m),
            fmt_float(self.q),
            opt(self.lhs),
            opt(self.rhs_thm21),
            opt(self.rhs_thm22_tight),
            opt(self.rhs_thm22),
            opt(self.rhs_thm23_tight),
            opt(self.rhs_thm23),
            opt(self.rhs_thm24),
            opt(self.min_rhs),
            self.min_rhs_label.clone().unwrap_or_default(),
            opt(self.slack_min),
            self.convexity_holds
                .map(|h| h.to_string())
                .unwrap_or_default(),
            self.skipped_reason.clone().unwrap_or_default(),
        ]
    }
}

#[derive(Debug)]
pub struct SweepSummary {
    pub rows: Vec<ReportRow>,
    pub evaluated: usize,
    pub skipped: usize,
    pub dominance_violations: usize,
}

fn skip_reason(a: f64, b: f64, m: f64, b_star: f64) -> Option<&'static str> {
    if a < 0.0 {
        Some("a < 0")
    } else if a >= m * b {
        Some("a >= m*b")
    } else if b > b_star {
        // bounds sample |f''(b)|, so b itself must stay in-domain
        Some("b > b_star")
    } else {
        None
    }
}

/// Evaluate every configured combination in configuration order. The
/// convexity gate depends only on (function, α, m, q), so verdicts are
/// cached across intervals.
pub fn compute_rows(config: &SweepConfig) -> Result<SweepSummary, HarnessError> {
    config.validate()?;
    let corpus = corpus::builtin_corpus();
    let mut chosen = Vec::with_capacity(config.function_ids.len());
    for id in &config.function_ids {
        let idx = corpus
            .iter()
            .position(|f| f.id() == id)
            .ok_or_else(|| HarnessError::UnknownFunction { id: id.clone() })?;
        chosen.push(idx);
    }

    let mut gate_cache: HashMap<(usize, u64, u64, u64), ConvexityVerdict> = HashMap::new();
    let mut rows = Vec::new();
    let mut evaluated = 0usize;
    let mut skipped = 0usize;
    let mut dominance_violations = 0usize;

    for &fn_idx in &chosen {
        let fspec = &corpus[fn_idx];
        for &(a, b) in &config.intervals {
            for &alpha in &config.alphas {
                for &m in &config.ms {
                    for &q in &config.qs {
                        let mut row = ReportRow {
                            function_id: fspec.id().to_string(),
                            a,
                            b,
                            alpha,
                            m,
                            q,
                            lhs: None,
                            rhs_thm21: None,
                            rhs_thm22_tight: None,
                            rhs_thm22: None,
                            rhs_thm23_tight: None,
                            rhs_thm23: None,
                            rhs_thm24: None,
                            min_rhs: None,
                            min_rhs_label: None,
                            slack_min: None,
                            convexity_holds: None,
                            skipped_reason: None,
                        };
                        if let Some(reason) = skip_reason(a, b, m, fspec.b_star()) {
                            row.skipped_reason = Some(reason.to_string());
                            skipped += 1;
                            rows.push(row);
                            continue;
                        }

                        let params =
                            AMParams::new(alpha, m, q).map_err(bounds::BoundError::from)?;
                        let key = (fn_idx, alpha.to_bits(), m.to_bits(), q.to_bits());
                        let gate = match gate_cache.get(&key) {
                            Some(v) => *v,
                            None => {
                                let v = convexity::check_abs_f2_q(
                                    fspec,
                                    &params,
                                    config.grid_n,
                                    config.convexity_tol,
                                )
                                .map_err(bounds::BoundError::from)?;
                                gate_cache.insert(key, v);
                                v
                            }
                        };

                        let report = bounds::evaluate_all_with_gate(
                            fspec,
                            a,
                            b,
                            params,
                            config.quad_tol,
                            gate,
                        )?;
                        let get = |l: BoundLabel| report.rhs_by_theorem.get(&l).copied();
                        row.lhs = Some(report.lhs);
                        row.rhs_thm21 = get(BoundLabel::Thm21);
                        row.rhs_thm22_tight = get(BoundLabel::Thm22Tight);
                        row.rhs_thm22 = get(BoundLabel::Thm22);
                        row.rhs_thm23_tight = get(BoundLabel::Thm23Tight);
                        row.rhs_thm23 = get(BoundLabel::Thm23);
                        row.rhs_thm24 = get(BoundLabel::Thm24);
                        let min_rhs = report.rhs_by_theorem[&report.tightest];
                        row.min_rhs = Some(min_rhs);
                        row.min_rhs_label = Some(report.tightest.as_str().to_string());
                        row.slack_min = Some(min_rhs - report.lhs);
                        row.convexity_holds = Some(gate.holds);
                        if gate.holds && min_rhs - report.lhs < -DOMINANCE_TOL {
                            dominance_violations += 1;
                        }
                        evaluated += 1;
                        rows.push(row);
                    }
                }
            }
        }
    }

    Ok(SweepSummary {
        rows,
        evaluated,
        skipped,
        dominance_violations,
    })
}

pub fn write_rows_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(REPORT_COLUMNS)?;
    for row in rows {
        writer.write_record(row.csv_record())?;
    }
    writer.flush().map_err(|source| HarnessError::OutputIo {
        path: "<writer>".to_string(),
        source,
    })?;
    Ok(())
}

pub fn write_rows_json<W: Write>(rows: &[ReportRow], mut out: W) -> Result<(), HarnessError> {
    let emit = |source: std::io::Error| HarnessError::OutputIo {
        path: "<writer>".to_string(),
        source,
    };
    serde_json::to_writer_pretty(&mut out, rows).map_err(|e| emit(e.into()))?;
    out.write_all(b"\n").map_err(emit)?;
    out.flush().map_err(emit)
}

/// Run the sweep and write its report to `config.output_path`.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepSummary, HarnessError> {
    let summary = compute_rows(config)?;
    let path = Path::new(&config.output_path);
    let file = File::create(path).map_err(|source| HarnessError::OutputIo {
        path: config.output_path.clone(),
        source,
    })?;
    match config.format {
        OutputFormat::Csv => write_rows_csv(&summary.rows, file)?,
        OutputFormat::Json => write_rows_json(&summary.rows, file)?,
    }
    Ok(summary)
}
