//! CSV layout for verification reports.
//!
//! ```text
//! q,a,x,f,lower,upper,lower_margin,upper_margin
//! <one row per grid point>
//! # pass=<bool> min_lower_margin=<v> min_upper_margin=<v> seed=<s>
//! ```
//!
//! A run that stopped early ends with `# incomplete` instead of the summary
//! footer. Reals are written with 17 significant digits so that parsing a
//! report reproduces the exact binary64 values.

use std::io::{self, Write};

use crate::inequality::InequalityReport;

pub const REPORT_HEADER: &str = "q,a,x,f,lower,upper,lower_margin,upper_margin";

/// Formats a real with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_report<W: Write + ?Sized>(report: &InequalityReport, out: &mut W) -> io::Result<()> {
    writeln!(out, "{REPORT_HEADER}")?;
    for p in &report.points {
        let row = [
            p.q,
            p.a,
            p.x,
            p.f_value,
            p.lower_bound,
            p.upper_bound,
            p.lower_margin,
            p.upper_margin,
        ]
        .map(fmt_real);
        writeln!(out, "{}", row.join(","))?;
    }
    if let Some(err) = &report.aborted {
        writeln!(out, "# incomplete: {err}")?;
    } else {
        writeln!(
            out,
            "# pass={} min_lower_margin={} min_upper_margin={} seed={}",
            report.pass(),
            fmt_real(report.min_lower_margin()),
            fmt_real(report.min_upper_margin()),
            report.seed
        )?;
    }
    Ok(())
}

/// A report read back from CSV text.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedReport {
    pub rows: Vec<[f64; 8]>,
    pub footer: Option<Footer>,
    pub incomplete: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Footer {
    pub pass: bool,
    pub min_lower_margin: f64,
    pub min_upper_margin: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ParsedReport {
    /// Recomputes (min lower margin, min upper margin) from the rows.
    pub fn recomputed_minima(&self) -> (f64, f64) {
        self.rows.iter().fold((f64::INFINITY, f64::INFINITY), |(lo, up), r| {
            (lo.min(r[6]), up.min(r[7]))
        })
    }
}

fn parse_footer(body: &str, line: usize) -> Result<Footer, ParseError> {
    let err = |msg: String| ParseError { line, msg };
    let mut pass = None;
    let mut lower = None;
    let mut upper = None;
    let mut seed = None;
    for field in body.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| err(format!("malformed footer field {field:?}")))?;
        let bad = |_| err(format!("bad value for {key}: {value:?}"));
        match key {
            "pass" => pass = Some(value.parse::<bool>().map_err(|_| err(format!("bad pass {value:?}")))?),
            "min_lower_margin" => lower = Some(value.parse::<f64>().map_err(bad)?),
            "min_upper_margin" => upper = Some(value.parse::<f64>().map_err(bad)?),
            "seed" => seed = Some(value.parse::<u64>().map_err(|_| err(format!("bad seed {value:?}")))?),
            _ => return Err(err(format!("unknown footer key {key:?}"))),
        }
    }
    match (pass, lower, upper, seed) {
        (Some(pass), Some(min_lower_margin), Some(min_upper_margin), Some(seed)) => Ok(Footer {
            pass,
            min_lower_margin,
            min_upper_margin,
            seed,
        }),
        _ => Err(err("footer is missing a field".into())),
    }
}

pub fn parse_report(text: &str) -> Result<ParsedReport, ParseError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == REPORT_HEADER => {}
        _ => {
            return Err(ParseError {
                line: 1,
                msg: "missing header".into(),
            })
        }
    }
    let mut rows = Vec::new();
    let mut footer = None;
    let mut incomplete = false;
    for (i, raw) in lines {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        if let Some(comment) = raw.strip_prefix('#') {
            let comment = comment.trim();
            if comment.starts_with("incomplete") {
                incomplete = true;
            } else {
                footer = Some(parse_footer(comment, line)?);
            }
            continue;
        }
        let mut row = [0.0; 8];
        let mut n = 0;
        for (slot, cell) in row.iter_mut().zip(raw.split(',')) {
            *slot = cell.parse().map_err(|_| ParseError {
                line,
                msg: format!("bad number {cell:?}"),
            })?;
            n += 1;
        }
        if n != 8 || raw.split(',').count() != 8 {
            return Err(ParseError {
                line,
                msg: "expected 8 columns".into(),
            });
        }
        rows.push(row);
    }
    Ok(ParsedReport {
        rows,
        footer,
        incomplete,
    })
}
