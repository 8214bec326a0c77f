//! Closed-form correlation measures.
//!
//! Every function here is scalar arithmetic in `(2j, F)`; nothing builds a
//! matrix, so spins in the hundreds are as cheap as spin 1/2.
//!
//! Conditional spectra come in two countings. [`Convention::Exact`] indexes
//! the eigenvalues of the `(2j+1)`-dimensional conditional spin state by
//! `m = -j, …, j`. [`Convention::Paper`] lists `1/(2j+1) ± (j-n)κ` for
//! `n = 0, …, ⌊j⌋` with both signs always present; for half-integer `j` the
//! two lists coincide, for integer `j` the paper list carries the `n = j`
//! level `1/(2j+1)` twice.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numeric::{binary_entropy, entropy_term};
use crate::spin::SpinLabel;
use crate::state::{check_weight, closed_state_entropy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Paper,
    Exact,
}

/// Eigenvalues of the conditional spin-factor state after a qubit
/// measurement. They do not depend on the measurement direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalSpectrum {
    pub spin: SpinLabel,
    pub weight: f64,
    /// `|F(2j+1) - j| / (j(j+1)(2j+1))`.
    pub kappa: f64,
    pub convention: Convention,
    /// Descending; repeated levels are listed repeatedly.
    pub entries: Vec<f64>,
}

impl ConditionalSpectrum {
    pub fn sum(&self) -> f64 {
        self.entries.iter().sum()
    }

    /// `-Σ λ log2 λ` over the entries.
    pub fn shannon_sum(&self) -> f64 {
        self.entries.iter().map(|&p| entropy_term(p)).sum()
    }
}

/// `1/(2j+1) + k·κ`, evaluated as `(j(j+1) + k|F(2j+1) - j|) / (j(j+1)(2j+1))`
/// so that levels that vanish analytically come out as exact zeros.
fn level(s: SpinLabel, f: f64, k: f64) -> f64 {
    let j = s.j();
    let jj = j * (j + 1.0);
    let d = s.dim() as f64;
    (jj + k * (f * d - j).abs()) / (jj * d)
}

pub fn conditional_spectrum(
    s: SpinLabel,
    f: f64,
    convention: Convention,
) -> Result<ConditionalSpectrum> {
    check_weight(f)?;
    let j = s.j();
    let d = s.dim() as f64;
    let kappa = (f * d - j).abs() / (j * (j + 1.0) * d);
    let entries = match convention {
        Convention::Exact => s
            .two_ms()
            .map(|two_m| level(s, f, two_m as f64 / 2.0))
            .collect(),
        Convention::Paper => {
            let mut e: Vec<f64> = (0..=s.floor_j())
                .flat_map(|n| {
                    let k = j - n as f64;
                    [level(s, f, k), level(s, f, -k)]
                })
                .collect();
            e.sort_by(|a, b| b.total_cmp(a));
            e
        }
    };
    Ok(ConditionalSpectrum {
        spin: s,
        weight: f,
        kappa,
        convention,
        entries,
    })
}

/// `D = F log(F/2j) + (1-F) log((1-F)/(2j+2)) + 1 - Σ λ log λ`.
pub fn quantum_discord(s: SpinLabel, f: f64, convention: Convention) -> Result<f64> {
    let spec = conditional_spectrum(s, f, convention)?;
    Ok(1.0 - closed_state_entropy(s, f) + spec.shannon_sum())
}

/// Entropy of the dephased state, `-Σ λ log(λ/2)`: every conditional level
/// `λ` appears as `λ/2` twice.
pub fn min_dephased_entropy(s: SpinLabel, f: f64, convention: Convention) -> Result<f64> {
    let spec = conditional_spectrum(s, f, convention)?;
    Ok(spec
        .entries
        .iter()
        .map(|&p| 2.0 * entropy_term(p / 2.0))
        .sum())
}

/// One-way deficit `min S(dephased) - S(ρ)`.
pub fn one_way_deficit(s: SpinLabel, f: f64, convention: Convention) -> Result<f64> {
    Ok(min_dephased_entropy(s, f, convention)? - closed_state_entropy(s, f))
}

/// Zero up to `F = 2j/(2j+1)`, then `H((√F - √(2j(1-F)))² / (2j+1))`.
pub fn entanglement_of_formation(s: SpinLabel, f: f64) -> Result<f64> {
    check_weight(f)?;
    let two_j = s.two_j() as f64;
    let d = s.dim() as f64;
    if f <= two_j / d {
        return Ok(0.0);
    }
    let root = f.sqrt() - (two_j * (1.0 - f)).sqrt();
    binary_entropy(root * root / d)
}

/// Every closed-form measure at one `(2j, F)` point, in bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub two_j: u32,
    pub f: f64,
    pub entropy_state: f64,
    pub discord_paper: f64,
    pub discord_exact: f64,
    pub smin_paper: f64,
    pub smin_exact: f64,
    pub deficit_paper: f64,
    pub deficit_exact: f64,
    pub eof: f64,
    /// `deficit_paper - discord_paper`.
    pub gap_paper: f64,
    /// `deficit_exact - discord_exact`.
    pub gap_exact: f64,
}

pub fn correlation_report(s: SpinLabel, f: f64) -> Result<CorrelationReport> {
    check_weight(f)?;
    let discord_paper = quantum_discord(s, f, Convention::Paper)?;
    let discord_exact = quantum_discord(s, f, Convention::Exact)?;
    let deficit_paper = one_way_deficit(s, f, Convention::Paper)?;
    let deficit_exact = one_way_deficit(s, f, Convention::Exact)?;
    Ok(CorrelationReport {
        two_j: s.two_j(),
        f,
        entropy_state: closed_state_entropy(s, f),
        discord_paper,
        discord_exact,
        smin_paper: min_dephased_entropy(s, f, Convention::Paper)?,
        smin_exact: min_dephased_entropy(s, f, Convention::Exact)?,
        deficit_paper,
        deficit_exact,
        eof: entanglement_of_formation(s, f)?,
        gap_paper: deficit_paper - discord_paper,
        gap_exact: deficit_exact - discord_exact,
    })
}

/// Expected `deficit_paper - discord_paper`: `2(⌊j⌋+1)/(2j+1) - 1`, i.e. zero
/// for half-integer `j` and `1/(2j+1)` for integer `j`.
pub fn paper_gap(s: SpinLabel) -> f64 {
    if s.is_integer_spin() {
        1.0 / s.dim() as f64
    } else {
        0.0
    }
}
