//! Report rows, their CSV/JSON renderings, and the worker pool that fills them.

use std::io::Write;

use qmoments_core::{format_rational, to_decimal, ApproxValue, QError, Rational};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const DECIMAL_DIGITS: usize = 30;

/// One line of output. Every field is a string so that CSV and JSON carry
/// byte-identical values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub family: String,
    pub method: String,
    pub k: String,
    /// N, or the randomisation parameter written as `z=…`, `lambda=…`, `K=…`
    pub n: String,
    pub alpha: String,
    pub q: String,
    pub value_exact: String,
    pub value_decimal: String,
    /// certified error bound; empty for exact rows
    pub bound: String,
    /// `exact`, `certified`, `mismatch: …` or `error: …`
    pub status: String,
}

impl ReportRow {
    pub fn passed(&self) -> bool {
        self.status == "exact" || self.status == "certified"
    }
}

/// Identifies a grid point; turned into a row once a value is known.
#[derive(Debug, Clone, Default)]
pub struct Point {
    pub family: String,
    pub method: String,
    pub k: String,
    pub n: String,
    pub alpha: String,
    pub q: String,
}

impl Point {
    pub fn new(family: &str, method: &str) -> Self {
        Point { family: family.into(), method: method.into(), ..Default::default() }
    }

    pub fn k(mut self, k: u64) -> Self {
        self.k = k.to_string();
        self
    }

    pub fn n(mut self, n: impl ToString) -> Self {
        self.n = n.to_string();
        self
    }

    pub fn alpha(mut self, a: u64) -> Self {
        self.alpha = a.to_string();
        self
    }

    pub fn q(mut self, q: &Rational) -> Self {
        self.q = format_rational(q);
        self
    }

    fn row(self, value: Option<&Rational>, bound: Option<&Rational>, status: String) -> ReportRow {
        ReportRow {
            family: self.family,
            method: self.method,
            k: self.k,
            n: self.n,
            alpha: self.alpha,
            q: self.q,
            value_exact: value.map(format_rational).unwrap_or_default(),
            value_decimal: value.map(|v| to_decimal(v, DECIMAL_DIGITS)).unwrap_or_default(),
            bound: bound.map(format_rational).unwrap_or_default(),
            status,
        }
    }

    pub fn exact(self, value: &Rational) -> ReportRow {
        self.row(Some(value), None, "exact".into())
    }

    pub fn certified(self, value: &ApproxValue) -> ReportRow {
        self.row(Some(&value.value), Some(&value.bound), "certified".into())
    }

    /// A residual that must vanish exactly.
    pub fn residual(self, value: &Rational) -> ReportRow {
        if value == &Rational::from_integer(0.into()) {
            self.exact(value)
        } else {
            self.row(Some(value), None, "mismatch: residual is not zero".into())
        }
    }

    /// A residual that must lie inside its certified bound.
    pub fn certified_residual(self, value: &ApproxValue) -> ReportRow {
        if value.bound == Rational::from_integer(0.into()) {
            self.residual(&value.value)
        } else if value.contains(&Rational::from_integer(0.into())) {
            self.certified(value)
        } else {
            let status = format!("mismatch: |residual| exceeds bound {}", format_rational(&value.bound));
            self.row(Some(&value.value), Some(&value.bound), status)
        }
    }

    pub fn mismatch(self, value: &Rational, bound: Option<&Rational>, details: String) -> ReportRow {
        self.row(Some(value), bound, format!("mismatch: {details}"))
    }

    pub fn error(self, err: &QError) -> ReportRow {
        self.row(None, None, format!("error: {err}"))
    }

    /// A failure that has no single value attached (e.g. a factor fit).
    pub fn failure(self, details: String) -> ReportRow {
        self.row(None, None, format!("mismatch: {details}"))
    }
}

/// `row` or an error row for the same point.
pub fn row_or_error<T>(point: Point, r: Result<T, QError>, f: impl FnOnce(Point, T) -> ReportRow) -> ReportRow {
    match r {
        Ok(v) => f(point, v),
        Err(e) => point.error(&e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub factor_reports: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Report<'a> {
    pub config: &'a RunConfig,
    pub rows: &'a [ReportRow],
    pub summary: Summary,
}

pub fn summarize(rows: &[ReportRow], factor_reports: Vec<String>) -> Summary {
    let passed = rows.iter().filter(|r| r.passed()).count();
    Summary { passed, failed: rows.len() - passed, factor_reports }
}

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(["family", "method", "k", "n", "alpha", "q", "value_exact", "value_decimal", "bound", "status"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(report: &Report<'_>, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)
}

/// Runs `f` on every task, on a pool of `config.parallel` threads when
/// requested, and returns the results in task order regardless of
/// scheduling.
pub fn gather<T, U, F>(config: &RunConfig, tasks: Vec<T>, f: F) -> Vec<U>
where
    T: Send + Sync,
    U: Send,
    F: Fn(&T) -> U + Send + Sync,
{
    let mut indexed: Vec<(usize, U)> = match config.parallel {
        Some(threads) if threads > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool");
            pool.install(|| tasks.par_iter().enumerate().map(|(i, t)| (i, f(t))).collect())
        }
        _ => tasks.iter().enumerate().map(|(i, t)| (i, f(t))).collect(),
    };
    indexed.sort_by_key(|(i, _)| *i);
    indexed.into_iter().map(|(_, u)| u).collect()
}

/// [`gather`] for tasks that each produce several rows.
pub fn gather_rows<T, F>(config: &RunConfig, tasks: Vec<T>, f: F) -> Vec<ReportRow>
where
    T: Send + Sync,
    F: Fn(&T) -> Vec<ReportRow> + Send + Sync,
{
    gather(config, tasks, f).into_iter().flatten().collect()
}
