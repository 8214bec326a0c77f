//! Full cross-validation run: oracle against closed forms, measurement
//! independence, the printed deficit/discord gap and SU(2) invariance.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{correlation_report, paper_gap};
use crate::numeric::{identity, max_abs_diff};
use crate::oracle::{check_dimension, run_oracle, spectrum_constancy, OracleConfig};
use crate::spin::SpinLabel;
use crate::state::{
    build_state, check_su2_invariance, reduced_qubit, reduced_spin, SU2InvariantState,
};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub two_j_max: u32,
    pub f_steps: usize,
    pub seed: u64,
    pub n_random_frames: usize,
    pub invariance_trials: usize,
    pub oracle_tol: f64,
    pub constancy_tol: f64,
    pub identity_tol: f64,
    pub invariance_tol: f64,
    pub structure_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            two_j_max: 10,
            f_steps: 51,
            seed: 1,
            n_random_frames: 200,
            invariance_trials: 20,
            oracle_tol: 1e-8,
            constancy_tol: 1e-9,
            identity_tol: 1e-10,
            invariance_tol: 1e-10,
            structure_tol: 1e-10,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.two_j_max == 0 {
            return Err(Error::InvalidConfig("two_j_max must be at least 1".into()));
        }
        if self.f_steps < 2 {
            return Err(Error::InvalidConfig("f_steps must be at least 2".into()));
        }
        if self.n_random_frames == 0 || self.invariance_trials == 0 {
            return Err(Error::InvalidConfig(
                "frame and rotation counts must be positive".into(),
            ));
        }
        check_dimension(2 * (self.two_j_max as usize + 1))
    }

    fn weights(&self) -> Vec<f64> {
        let last = (self.f_steps - 1) as f64;
        (0..self.f_steps).map(|i| i as f64 / last).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub detail: String,
}

/// Per-spin record of the paper-versus-exact multiplicity question.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinSummary {
    pub two_j: u32,
    pub integer_spin: bool,
    /// `deficit_paper - discord_paper`, maximum over the grid.
    pub gap_paper: f64,
    pub expected_gap_paper: f64,
    /// Largest `|deficit_exact - discord_exact|` over the grid.
    pub gap_exact: f64,
    /// Largest `|oracle deficit - deficit_paper|` over the grid.
    pub oracle_minus_deficit_paper: f64,
    /// Largest `|oracle discord - discord_paper|` over the grid.
    pub oracle_minus_discord_paper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub spins: Vec<SpinSummary>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {:<28} max_dev={:.3e} tol={:.0e}  {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_deviation,
                c.tolerance,
                c.detail
            );
        }
        let _ = writeln!(out, "per-spin multiplicity comparison:");
        for s in &self.spins {
            let _ = writeln!(
                out,
                "  2j={:<3} {:<13} gap_paper={:.12} (expected {:.12})  gap_exact={:.1e}  |oracle-deficit_paper|={:.3e}  |oracle-discord_paper|={:.3e}",
                s.two_j,
                if s.integer_spin { "integer j" } else { "half-integer" },
                s.gap_paper,
                s.expected_gap_paper,
                s.gap_exact,
                s.oracle_minus_deficit_paper,
                s.oracle_minus_discord_paper,
            );
        }
        let _ = writeln!(
            out,
            "overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct PointStats {
    oracle_deficit: f64,
    oracle_discord: f64,
    entropy_spread: f64,
    spectrum_spread: f64,
    paper_identity: f64,
    gap_paper: f64,
    gap_exact: f64,
    oracle_vs_paper_deficit: f64,
    oracle_vs_paper_discord: f64,
    spectrum: f64,
    marginals: f64,
}

impl PointStats {
    fn merge(self, o: PointStats) -> PointStats {
        PointStats {
            oracle_deficit: self.oracle_deficit.max(o.oracle_deficit),
            oracle_discord: self.oracle_discord.max(o.oracle_discord),
            entropy_spread: self.entropy_spread.max(o.entropy_spread),
            spectrum_spread: self.spectrum_spread.max(o.spectrum_spread),
            paper_identity: self.paper_identity.max(o.paper_identity),
            gap_paper: self.gap_paper.max(o.gap_paper),
            gap_exact: self.gap_exact.max(o.gap_exact),
            oracle_vs_paper_deficit: self.oracle_vs_paper_deficit.max(o.oracle_vs_paper_deficit),
            oracle_vs_paper_discord: self.oracle_vs_paper_discord.max(o.oracle_vs_paper_discord),
            spectrum: self.spectrum.max(o.spectrum),
            marginals: self.marginals.max(o.marginals),
        }
    }
}

fn spectrum_deviation(st: &SU2InvariantState) -> f64 {
    let two_j = st.spin().two_j() as usize;
    let mut expected = vec![st.lambda1(); two_j];
    expected.extend(std::iter::repeat_n(st.lambda2(), two_j + 2));
    expected.sort_by(|a, b| b.total_cmp(a));
    let got = st.spectrum().flattened();
    if got.len() != expected.len() {
        return f64::INFINITY;
    }
    got.iter()
        .zip(&expected)
        .map(|(g, e)| (g - e).abs())
        .fold(0.0, f64::max)
}

fn marginal_deviation(st: &SU2InvariantState) -> f64 {
    let d = st.spin().dim();
    let half = identity(2) * num_complex::Complex64::from(0.5);
    let flat = identity(d) * num_complex::Complex64::from(1.0 / d as f64);
    max_abs_diff(&reduced_qubit(st), &half).max(max_abs_diff(&reduced_spin(st), &flat))
}

fn point<B>(s: SpinLabel, f: f64, oracle: &OracleConfig, builder: &B) -> Result<PointStats>
where
    B: Fn(SpinLabel, f64) -> Result<SU2InvariantState>,
{
    let st = builder(s, f)?;
    let r = correlation_report(s, f)?;
    let o = run_oracle(&st, oracle)?;
    let constancy = spectrum_constancy(&st, oracle)?;
    Ok(PointStats {
        oracle_deficit: (o.deficit_numeric - r.deficit_exact).abs(),
        oracle_discord: (o.discord_numeric - r.discord_exact).abs(),
        entropy_spread: o.entropy_spread,
        spectrum_spread: constancy,
        paper_identity: (r.gap_paper - paper_gap(s)).abs(),
        gap_paper: r.gap_paper,
        gap_exact: r.gap_exact.abs(),
        oracle_vs_paper_deficit: (o.deficit_numeric - r.deficit_paper).abs(),
        oracle_vs_paper_discord: (o.discord_numeric - r.discord_paper).abs(),
        spectrum: spectrum_deviation(&st),
        marginals: marginal_deviation(&st),
    })
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    run_verify_with(cfg, build_state)
}

/// Runs every check with states produced by `builder`; a faulty builder
/// must make the report fail.
pub fn run_verify_with<B>(cfg: &VerifyConfig, builder: B) -> Result<VerifyReport>
where
    B: Fn(SpinLabel, f64) -> Result<SU2InvariantState> + Sync,
{
    cfg.validate()?;
    let oracle = OracleConfig {
        n_random_frames: cfg.n_random_frames,
        ..OracleConfig::with_seed(cfg.seed)
    };
    let weights = cfg.weights();
    let spins: Vec<SpinLabel> = (1..=cfg.two_j_max).map(SpinLabel::new).collect();

    let per_spin: Vec<PointStats> = spins
        .iter()
        .map(|&s| {
            weights
                .par_iter()
                .map(|&f| point(s, f, &oracle, &builder))
                .collect::<Result<Vec<_>>>()
                .map(|v| v.into_iter().fold(PointStats::default(), PointStats::merge))
        })
        .collect::<Result<_>>()?;

    let invariance = spins
        .par_iter()
        .map(|&s| {
            [0.0, 0.25, 0.5, 0.75, 1.0]
                .iter()
                .map(|&f| {
                    Ok(check_su2_invariance(
                        &builder(s, f)?,
                        cfg.invariance_trials,
                        cfg.seed,
                    ))
                })
                .collect::<Result<Vec<f64>>>()
                .map(|v| v.into_iter().fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let total = per_spin
        .iter()
        .fold(PointStats::default(), |acc, p| acc.merge(*p));
    let grid = format!(
        "2j in 1..={}, {} weights, {} random + 8 axis frames, seed {}",
        cfg.two_j_max, cfg.f_steps, cfg.n_random_frames, cfg.seed
    );
    let check = |name, dev: f64, tol: f64, detail: &str| CheckResult {
        name,
        passed: dev <= tol,
        max_deviation: dev,
        tolerance: tol,
        detail: detail.to_string(),
    };
    let checks = vec![
        check(
            "oracle_deficit_vs_exact",
            total.oracle_deficit,
            cfg.oracle_tol,
            &grid,
        ),
        check(
            "oracle_discord_vs_exact",
            total.oracle_discord,
            cfg.oracle_tol,
            &grid,
        ),
        check(
            "dephased_entropy_spread",
            total.entropy_spread,
            cfg.constancy_tol,
            "max - min over frames",
        ),
        check(
            "dephased_spectrum_constancy",
            total.spectrum_spread,
            cfg.constancy_tol,
            "sorted spectra, inf-norm",
        ),
        check(
            "paper_gap_identity",
            total.paper_identity,
            cfg.identity_tol,
            "deficit_paper - discord_paper vs 0 or 1/(2j+1)",
        ),
        check(
            "exact_gap_zero",
            total.gap_exact,
            cfg.identity_tol,
            "deficit_exact - discord_exact",
        ),
        check(
            "su2_invariance",
            invariance,
            cfg.invariance_tol,
            &format!(
                "{} rotations, F in {{0, .25, .5, .75, 1}}",
                cfg.invariance_trials
            ),
        ),
        check(
            "state_spectrum",
            total.spectrum,
            cfg.structure_tol,
            "{F/2j x 2j, (1-F)/(2j+2) x (2j+2)}",
        ),
        check(
            "maximally_mixed_marginals",
            total.marginals,
            cfg.structure_tol,
            "both reduced states",
        ),
    ];

    let spins = spins
        .iter()
        .zip(&per_spin)
        .map(|(&s, p)| SpinSummary {
            two_j: s.two_j(),
            integer_spin: s.is_integer_spin(),
            gap_paper: p.gap_paper,
            expected_gap_paper: paper_gap(s),
            gap_exact: p.gap_exact,
            oracle_minus_deficit_paper: p.oracle_vs_paper_deficit,
            oracle_minus_discord_paper: p.oracle_vs_paper_discord,
        })
        .collect();
    Ok(VerifyReport { checks, spins })
}
