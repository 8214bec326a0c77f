//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;
use su2_deficit::measures::{
    correlation_report, entanglement_of_formation, one_way_deficit, quantum_discord, Convention,
    CorrelationReport,
};
use su2_deficit::numeric::{identity, max_abs_diff};
use su2_deficit::oracle::{run_oracle, OracleConfig, OracleResult};
use su2_deficit::spin::SpinLabel;
use su2_deficit::state::{
    build_state, check_su2_invariance, reduced_qubit, reduced_spin, werner_state,
};
use su2_deficit::sweep::{run_sweep, Figure};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn grid51() -> Vec<f64> {
    (0..=50).map(|k| k as f64 / 50.0).collect()
}

fn spins() -> impl Iterator<Item = SpinLabel> {
    (1..=10).map(SpinLabel::new)
}

fn crossover(s: SpinLabel) -> f64 {
    s.j() / (2.0 * s.j() + 1.0)
}

struct GridPoint {
    two_j: u32,
    f: f64,
    report: CorrelationReport,
    oracle: OracleResult,
}

/// Oracle over 2j in 1..=10 and 51 weights, 200 random + axis frames, seed 1.
fn oracle_grid() -> &'static (Vec<GridPoint>, Duration) {
    static GRID: OnceLock<(Vec<GridPoint>, Duration)> = OnceLock::new();
    GRID.get_or_init(|| {
        let start = Instant::now();
        let cfg = OracleConfig::with_seed(1);
        let points: Vec<(SpinLabel, f64)> = spins()
            .flat_map(|s| grid51().into_iter().map(move |f| (s, f)))
            .collect();
        let results = points
            .par_iter()
            .map(|&(s, f)| GridPoint {
                two_j: s.two_j(),
                f,
                report: correlation_report(s, f).unwrap(),
                oracle: run_oracle(&build_state(s, f).unwrap(), &cfg).unwrap(),
            })
            .collect();
        (results, start.elapsed())
    })
}

fn singlet_endpoint() -> Outcome {
    let start = Instant::now();
    let s = SpinLabel::new(1);
    let r = correlation_report(s, 1.0).unwrap();
    let o = run_oracle(&build_state(s, 1.0).unwrap(), &OracleConfig::with_seed(1)).unwrap();
    let elapsed = start.elapsed();
    let closed = [r.deficit_exact, r.discord_exact, r.eof]
        .iter()
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max);
    let oracle = (o.deficit_numeric - r.deficit_exact).abs();
    outcome(
        closed <= 1e-9 && oracle <= 1e-8 && elapsed < Duration::from_secs(1),
        format!(
            "deficit={:.9} discord={:.9} eof={:.9} |oracle-exact|={oracle:.1e} in {elapsed:.2?}",
            r.deficit_exact, r.discord_exact, r.eof
        ),
    )
}

fn crossover_zeros() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for s in spins() {
        let f = crossover(s);
        let values = [
            (
                "deficit_exact",
                one_way_deficit(s, f, Convention::Exact).unwrap(),
            ),
            (
                "discord_exact",
                quantum_discord(s, f, Convention::Exact).unwrap(),
            ),
            (
                "deficit_paper",
                one_way_deficit(s, f, Convention::Paper).unwrap(),
            ),
            (
                "discord_paper",
                quantum_discord(s, f, Convention::Paper).unwrap(),
            ),
        ];
        for (name, v) in values {
            worst = worst.max(v.abs());
            if v.abs() > 1e-9 {
                failures.push(format!("2j={} {name}={v:.6}", s.two_j()));
            }
        }
        let eof = entanglement_of_formation(s, f).unwrap();
        if eof != 0.0 {
            failures.push(format!("2j={} eof={eof:e}", s.two_j()));
        }
    }
    if failures.is_empty() {
        outcome(
            true,
            format!("max |measure| = {worst:.1e} over 2j in 1..=10"),
        )
    } else {
        outcome(
            false,
            format!(
                "{} values above 1e-9: {}",
                failures.len(),
                failures.join(", ")
            ),
        )
    }
}

fn oracle_equivalence() -> Outcome {
    let (points, elapsed) = oracle_grid();
    let deficit = points
        .iter()
        .map(|p| (p.oracle.deficit_numeric - p.report.deficit_exact).abs())
        .fold(0.0, f64::max);
    let discord = points
        .iter()
        .map(|p| (p.oracle.discord_numeric - p.report.discord_exact).abs())
        .fold(0.0, f64::max);
    outcome(
        deficit <= 1e-8 && discord <= 1e-8 && *elapsed <= Duration::from_secs(300),
        format!(
            "{} points, max |Δ_oracle-Δ_exact|={deficit:.1e}, max |D_oracle-D_exact|={discord:.1e}, {elapsed:.1?}",
            points.len()
        ),
    )
}

fn measurement_independence() -> Outcome {
    let (points, _) = oracle_grid();
    let (worst, at) = points
        .iter()
        .map(|p| (p.oracle.entropy_spread, (p.two_j, p.f)))
        .fold((0.0, (0, 0.0)), |a, b| if b.0 > a.0 { b } else { a });
    outcome(
        worst <= 1e-9,
        format!("max entropy spread {worst:.1e} (2j={}, F={})", at.0, at.1),
    )
}

fn printed_case_split() -> Outcome {
    let (points, _) = oracle_grid();
    let mut identity_dev = 0.0f64;
    let mut exact_gap = 0.0f64;
    let mut oracle_vs_paper_int = 0.0f64;
    let mut oracle_vs_paper_half = 0.0f64;
    for p in points {
        let s = SpinLabel::new(p.two_j);
        let expected = if s.is_integer_spin() {
            1.0 / s.dim() as f64
        } else {
            0.0
        };
        identity_dev = identity_dev.max((p.report.gap_paper - expected).abs());
        exact_gap = exact_gap.max(p.report.gap_exact.abs());
        let d = (p.oracle.deficit_numeric - p.report.deficit_paper).abs();
        if s.is_integer_spin() {
            oracle_vs_paper_int = oracle_vs_paper_int.max(d);
        } else {
            oracle_vs_paper_half = oracle_vs_paper_half.max(d);
        }
    }
    outcome(
        identity_dev <= 1e-10,
        format!(
            "max |gap_paper - (0 or 1/(2j+1))|={identity_dev:.1e}; recorded: max |deficit_exact-discord_exact|={exact_gap:.1e}, \
             max |oracle-deficit_paper| integer j={oracle_vs_paper_int:.3e}, half-integer j={oracle_vs_paper_half:.1e}"
        ),
    )
}

fn eof_branch_boundary() -> Outcome {
    let mut bad = Vec::new();
    let mut continuity = 0.0f64;
    for s in spins() {
        let boundary = s.two_j() as f64 / s.dim() as f64;
        for f in grid51() {
            let eof = entanglement_of_formation(s, f).unwrap();
            let ok = if f <= boundary { eof == 0.0 } else { eof > 0.0 };
            if !ok {
                bad.push(format!("2j={} F={f} eof={eof:e}", s.two_j()));
            }
        }
        let left = entanglement_of_formation(s, boundary).unwrap();
        let right = entanglement_of_formation(s, (boundary + 1e-12).min(1.0)).unwrap();
        continuity = continuity.max((right - left).abs());
    }
    outcome(
        bad.is_empty() && continuity <= 1e-9,
        if bad.is_empty() {
            format!("branch signs correct on 51-point grid, boundary jump {continuity:.1e}")
        } else {
            format!("violations: {}", bad.join(", "))
        },
    )
}

/// Checks one curve: the maximum sits at an endpoint and the only local
/// minimum is the grid point nearest `target`, with strict monotonicity on
/// either side.
fn curve_shape(fs: &[f64], ys: &[f64], target: f64) -> Result<(), String> {
    let n = ys.len();
    let max = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if ys[0] < max && ys[n - 1] < max {
        return Err(format!("maximum {max} not at F=0 or F=1"));
    }
    let argmin = (0..n).min_by(|&a, &b| ys[a].total_cmp(&ys[b])).unwrap();
    let step = fs[1] - fs[0];
    if (fs[argmin] - target).abs() > step {
        return Err(format!(
            "minimum at F={} but expected near {target}",
            fs[argmin]
        ));
    }
    if argmin == 0 || argmin == n - 1 {
        return Err("minimum on the boundary".into());
    }
    if ys[..=argmin].windows(2).any(|w| w[1] >= w[0]) {
        return Err("not strictly decreasing before the minimum".into());
    }
    if ys[argmin..].windows(2).any(|w| w[1] <= w[0]) {
        return Err("not strictly increasing after the minimum".into());
    }
    Ok(())
}

fn figure_reproduction() -> Outcome {
    let mut problems = Vec::new();
    let mut timings = Vec::new();
    for fig in Figure::ALL {
        let start = Instant::now();
        let csv = run_sweep(&fig.preset()).unwrap().to_csv_string().unwrap();
        let elapsed = start.elapsed();
        timings.push(format!("{fig} {elapsed:.2?}"));
        if elapsed > Duration::from_secs(10) {
            problems.push(format!("{fig} took {elapsed:.2?}"));
        }
        let mut reader = csv::Reader::from_reader(csv.as_bytes());
        let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
        let rows: Vec<Vec<f64>> = reader
            .records()
            .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
            .collect();
        let col = |name: &str| header.iter().position(|h| h == name);
        let mut spins: Vec<u32> = rows.iter().map(|r| r[0] as u32).collect();
        spins.dedup();
        for two_j in spins {
            let s = SpinLabel::new(two_j);
            let curve: Vec<&Vec<f64>> = rows.iter().filter(|r| r[0] as u32 == two_j).collect();
            let fs: Vec<f64> = curve.iter().map(|r| r[1]).collect();
            for (c, name) in header.iter().enumerate().skip(2) {
                if name == "eof" {
                    continue;
                }
                let ys: Vec<f64> = curve.iter().map(|r| r[c]).collect();
                if let Err(e) = curve_shape(&fs, &ys, crossover(s)) {
                    problems.push(format!("{fig} 2j={two_j} {name}: {e}"));
                }
            }
            if let (Some(dc), Some(ec)) = (col("deficit_exact"), col("eof")) {
                for r in &curve {
                    // Equality holds analytically at 2j=1, F=1.
                    if r[dc] < r[ec] - 1e-12 {
                        problems.push(format!("{fig} 2j={two_j} F={}: deficit < eof", r[1]));
                    }
                    if r[ec] == 0.0 && r[dc] <= 0.0 {
                        problems.push(format!(
                            "{fig} 2j={two_j} F={}: deficit vanishes where eof=0",
                            r[1]
                        ));
                    }
                }
            }
        }
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            format!(
                "all curves endpoint-maximal with a single minimum at j/(2j+1); {}",
                timings.join(", ")
            )
        } else {
            problems.join("; ")
        },
    )
}

fn su2_invariance() -> Outcome {
    let worst = spins()
        .flat_map(|s| [0.0, 0.25, 0.5, 0.75, 1.0].map(move |f| (s, f)))
        .map(|(s, f)| check_su2_invariance(&build_state(s, f).unwrap(), 20, 1))
        .fold(0.0, f64::max);
    outcome(
        worst <= 1e-10,
        format!("max deviation {worst:.1e} over 20 rotations"),
    )
}

fn structural_invariants() -> Outcome {
    let mut spectrum = 0.0f64;
    let mut marginals = 0.0f64;
    for s in spins() {
        for f in grid51() {
            let st = build_state(s, f).unwrap();
            let two_j = s.two_j() as usize;
            let mut expected = vec![st.lambda1(); two_j];
            expected.extend(std::iter::repeat_n(st.lambda2(), two_j + 2));
            expected.sort_by(|a, b| b.total_cmp(a));
            let got = st.spectrum().flattened();
            assert_eq!(got.len(), expected.len());
            for (g, e) in got.iter().zip(&expected) {
                spectrum = spectrum.max((g - e).abs());
            }
            let half = identity(2) * Complex64::from(0.5);
            let flat = identity(s.dim()) * Complex64::from(1.0 / s.dim() as f64);
            marginals = marginals
                .max(max_abs_diff(&reduced_qubit(&st), &half))
                .max(max_abs_diff(&reduced_spin(&st), &flat));
        }
    }
    let werner = grid51()
        .into_iter()
        .map(|f| {
            max_abs_diff(
                build_state(SpinLabel::new(1), f).unwrap().rho(),
                &werner_state(f),
            )
        })
        .fold(0.0, f64::max);
    outcome(
        spectrum <= 1e-10 && marginals <= 1e-10 && werner <= 1e-12,
        format!(
            "spectrum dev {spectrum:.1e}, marginal dev {marginals:.1e}, Werner dev {werner:.1e}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 singlet endpoint", singlet_endpoint),
        ("2 crossover zeros", crossover_zeros),
        ("3 oracle equivalence", oracle_equivalence),
        ("4 measurement independence", measurement_independence),
        ("5 printed case-split identity", printed_case_split),
        ("6 EoF branch boundary", eof_branch_boundary),
        ("7 figure reproduction", figure_reproduction),
        ("8 SU(2) invariance", su2_invariance),
        ("9 structural invariants", structural_invariants),
    ];
    let mut failed = 0;
    println!("\nrunning {} acceptance criteria", criteria.len());
    for (name, check) in criteria {
        let result = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.passed {
            failed += 1;
        }
        println!(
            "criterion {name} ... {}: {}",
            if result.passed { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!(
        "\nacceptance result: {}. {} passed; {failed} failed\n",
        if failed == 0 { "ok" } else { "FAILED" },
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
