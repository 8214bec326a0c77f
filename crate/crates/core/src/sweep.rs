//! Parameter sweeps over `(2j, F)` grids and the figure presets.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{correlation_report, CorrelationReport};
use crate::oracle::{check_dimension, run_oracle, OracleConfig};
use crate::spin::SpinLabel;
use crate::state::build_state;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    DeficitPaper,
    DeficitExact,
    DiscordPaper,
    DiscordExact,
    Eof,
    SminPaper,
    SminExact,
    Entropy,
}

impl Measure {
    pub const ALL: [Measure; 8] = [
        Measure::DeficitPaper,
        Measure::DeficitExact,
        Measure::DiscordPaper,
        Measure::DiscordExact,
        Measure::Eof,
        Measure::SminPaper,
        Measure::SminExact,
        Measure::Entropy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::DeficitPaper => "deficit_paper",
            Measure::DeficitExact => "deficit_exact",
            Measure::DiscordPaper => "discord_paper",
            Measure::DiscordExact => "discord_exact",
            Measure::Eof => "eof",
            Measure::SminPaper => "smin_paper",
            Measure::SminExact => "smin_exact",
            Measure::Entropy => "entropy",
        }
    }

    pub fn value(self, r: &CorrelationReport) -> f64 {
        match self {
            Measure::DeficitPaper => r.deficit_paper,
            Measure::DeficitExact => r.deficit_exact,
            Measure::DiscordPaper => r.discord_paper,
            Measure::DiscordExact => r.discord_exact,
            Measure::Eof => r.eof,
            Measure::SminPaper => r.smin_paper,
            Measure::SminExact => r.smin_exact,
            Measure::Entropy => r.entropy_state,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown measure '{s}'")))
    }
}

/// Column names appended when a sweep runs the oracle.
pub const ORACLE_COLUMNS: [&str; 3] = ["deficit_numeric", "discord_numeric", "entropy_spread"];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub two_j_list: Vec<u32>,
    pub f_start: f64,
    pub f_end: f64,
    /// Number of grid points, endpoints included.
    pub f_steps: usize,
    pub measures: Vec<Measure>,
    /// Run the brute-force oracle at every grid point.
    pub oracle: Option<OracleConfig>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.two_j_list.is_empty() {
            return bad("no spins given".into());
        }
        if let Some(&0) = self.two_j_list.iter().find(|&&t| t == 0) {
            return bad("2j must be at least 1".into());
        }
        let unit = 0.0..=1.0;
        if !unit.contains(&self.f_start) || !unit.contains(&self.f_end) {
            return bad(format!(
                "F range [{}, {}] outside [0, 1]",
                self.f_start, self.f_end
            ));
        }
        if self.f_start > self.f_end {
            return bad("f_start exceeds f_end".into());
        }
        if self.f_steps == 0 {
            return bad("f_steps must be at least 1".into());
        }
        if self.measures.is_empty() {
            return bad("no measures selected".into());
        }
        if let Some(cfg) = &self.oracle {
            cfg.validate()?;
            let max = *self.two_j_list.iter().max().expect("non-empty");
            check_dimension(2 * (max as usize + 1))?;
        }
        Ok(())
    }

    /// Evenly spaced weights from `f_start` to `f_end` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        if self.f_steps == 1 {
            return vec![self.f_start];
        }
        let last = (self.f_steps - 1) as f64;
        (0..self.f_steps)
            .map(|i| {
                if i + 1 == self.f_steps {
                    self.f_end
                } else {
                    self.f_start + (self.f_end - self.f_start) * i as f64 / last
                }
            })
            .collect()
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec!["two_j".to_string(), "F".to_string()];
        cols.extend(self.measures.iter().map(|m| m.name().to_string()));
        if self.oracle.is_some() {
            cols.extend(ORACLE_COLUMNS.iter().map(|c| c.to_string()));
        }
        cols
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub two_j: u32,
    pub f: f64,
    /// One value per non-key column, in column order.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

/// Evaluates the grid; rows are ordered by `2j` ascending, then by `F`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let mut spins = spec.two_j_list.clone();
    spins.sort_unstable();
    let grid = spec.grid();
    let points: Vec<(u32, f64)> = spins
        .iter()
        .flat_map(|&t| grid.iter().map(move |&f| (t, f)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(two_j, f)| {
            let s = SpinLabel::coupled(two_j)?;
            let report = correlation_report(s, f)?;
            let mut values: Vec<f64> = spec.measures.iter().map(|m| m.value(&report)).collect();
            if let Some(cfg) = &spec.oracle {
                let r = run_oracle(&build_state(s, f)?, cfg)?;
                values.extend([r.deficit_numeric, r.discord_numeric, r.entropy_spread]);
            }
            Ok(SweepRow { two_j, f, values })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        columns: spec.columns(),
        rows,
    })
}

impl SweepTable {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// CSV with a header row, LF line endings and `%.12g`-style numbers.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            let mut record = vec![row.two_j.to_string(), format_sig12(row.f)];
            record.extend(row.values.iter().map(|&v| format_sig12(v)));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is ASCII"))
    }
}

/// Formats like C's `%.12g`: twelve significant digits, trailing zeros
/// dropped, exponent form outside `[1e-4, 1e12)`.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    trim_fraction(&format!("{:.*}", (11 - exp) as usize, x)).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Figure panels with fixed sweep presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
    Fig2a,
    Fig2b,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Fig1a,
        Figure::Fig1b,
        Figure::Fig1c,
        Figure::Fig1d,
        Figure::Fig2a,
        Figure::Fig2b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1a => "fig1a",
            Figure::Fig1b => "fig1b",
            Figure::Fig1c => "fig1c",
            Figure::Fig1d => "fig1d",
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
        }
    }

    pub fn preset(self) -> SweepSpec {
        use Measure::*;
        let deficits = vec![DeficitExact, DeficitPaper];
        let comparison = vec![DeficitExact, DeficitPaper, DiscordExact, DiscordPaper];
        let (two_j_list, measures) = match self {
            Figure::Fig1a => (vec![2, 4, 6, 1, 3, 5], deficits),
            Figure::Fig1b => (vec![600, 599], deficits),
            Figure::Fig1c => (vec![2, 4, 1, 3], comparison),
            Figure::Fig1d => (vec![100], comparison),
            Figure::Fig2a => (vec![2], vec![DeficitExact, Eof]),
            Figure::Fig2b => (vec![10], vec![DeficitExact, Eof]),
        };
        SweepSpec {
            two_j_list,
            f_start: 0.0,
            f_end: 1.0,
            f_steps: 201,
            measures,
            oracle: None,
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|fig| fig.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown figure '{s}'")))
    }
}
