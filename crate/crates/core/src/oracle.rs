//! Brute-force deficit and discord: explicit density matrices, sampled qubit
//! measurements, dense diagonalization.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measurement::{
    axis_frames, dephase_matrix, measure_matrix, random_frame, MeasurementFrame,
};
use crate::numeric::{matrix_entropy, sorted_eigenvalues, ComplexMatrix};
use crate::state::{reduced_qubit, SU2InvariantState};

/// Largest product-space dimension the oracle will diagonalize.
pub const MAX_ORACLE_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub n_random_frames: usize,
    pub seed: u64,
    pub include_axis_frames: bool,
    pub tolerance_spectrum_constancy: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            n_random_frames: 200,
            seed: 1,
            include_axis_frames: true,
            tolerance_spectrum_constancy: 1e-9,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        OracleConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_random_frames == 0 {
            return Err(Error::InvalidConfig(
                "n_random_frames must be at least 1".into(),
            ));
        }
        if self.tolerance_spectrum_constancy.is_nan() || self.tolerance_spectrum_constancy < 0.0 {
            return Err(Error::InvalidConfig(
                "tolerance must be non-negative".into(),
            ));
        }
        Ok(())
    }

    /// Axis anchors (when enabled) followed by the seeded random draws.
    pub fn frames(&self) -> Vec<MeasurementFrame> {
        let mut frames = if self.include_axis_frames {
            axis_frames()
        } else {
            Vec::new()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        frames.extend((0..self.n_random_frames).map(|_| random_frame(&mut rng)));
        frames
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub deficit_numeric: f64,
    pub discord_numeric: f64,
    /// Max minus min of the dephased entropy over the evaluated frames.
    pub entropy_spread: f64,
    pub argmin_frame: MeasurementFrame,
    pub frames_evaluated: usize,
}

pub fn check_dimension(dim: usize) -> Result<()> {
    if dim > MAX_ORACLE_DIM {
        return Err(Error::DimensionTooLarge {
            dim,
            max: MAX_ORACLE_DIM,
        });
    }
    Ok(())
}

struct FrameEval {
    dephased_entropy: f64,
    conditional_entropy: f64,
}

fn evaluate(rho: &ComplexMatrix, spin_dim: usize, frame: &MeasurementFrame) -> Result<FrameEval> {
    let ens = measure_matrix(rho, spin_dim, frame)?;
    Ok(FrameEval {
        dephased_entropy: matrix_entropy(&ens.dephased)?,
        conditional_entropy: ens.p0 * matrix_entropy(&ens.rho0)?
            + ens.p1 * matrix_entropy(&ens.rho1)?,
    })
}

/// Evaluates every configured frame and minimizes both objectives.
///
/// Frames are generated before the parallel fan-out and reduced in index
/// order, so results are bit-identical for a fixed configuration.
pub fn run_oracle(st: &SU2InvariantState, cfg: &OracleConfig) -> Result<OracleResult> {
    check_dimension(st.dim())?;
    cfg.validate()?;
    let frames = cfg.frames();
    let spin_dim = st.spin().dim();
    let evals = frames
        .par_iter()
        .map(|f| evaluate(st.rho(), spin_dim, f))
        .collect::<Result<Vec<_>>>()?;

    let mut argmin = 0;
    let mut max_entropy = f64::NEG_INFINITY;
    let mut min_conditional = f64::INFINITY;
    for (i, e) in evals.iter().enumerate() {
        if e.dephased_entropy < evals[argmin].dephased_entropy {
            argmin = i;
        }
        max_entropy = max_entropy.max(e.dephased_entropy);
        min_conditional = min_conditional.min(e.conditional_entropy);
    }
    let min_entropy = evals[argmin].dephased_entropy;
    let joint = matrix_entropy(st.rho())?;
    let marginal = matrix_entropy(&reduced_qubit(st))?;
    Ok(OracleResult {
        deficit_numeric: min_entropy - joint,
        discord_numeric: marginal - joint + min_conditional,
        entropy_spread: max_entropy - min_entropy,
        argmin_frame: frames[argmin].clone(),
        frames_evaluated: frames.len(),
    })
}

/// `min_Π S(Σ Π ρ Π) - S(ρ)` over the configured frames.
pub fn oracle_deficit(st: &SU2InvariantState, cfg: &OracleConfig) -> Result<OracleResult> {
    run_oracle(st, cfg)
}

/// `S(ρ^b) - S(ρ) + min_Π Σ p_k S(ρ_k)` over the configured frames.
pub fn oracle_discord(st: &SU2InvariantState, cfg: &OracleConfig) -> Result<f64> {
    Ok(run_oracle(st, cfg)?.discord_numeric)
}

/// Largest ∞-norm distance between the sorted dephased spectra of any two
/// configured frames, for a raw matrix on `C^spin_dim ⊗ C^2`.
pub fn spectrum_constancy_matrix(
    rho: &ComplexMatrix,
    spin_dim: usize,
    cfg: &OracleConfig,
) -> Result<f64> {
    check_dimension(rho.nrows())?;
    cfg.validate()?;
    let spectra = cfg
        .frames()
        .par_iter()
        .map(|f| sorted_eigenvalues(&dephase_matrix(rho, spin_dim, f)))
        .collect::<Result<Vec<_>>>()?;
    let n = rho.nrows();
    let spread = (0..n)
        .map(|i| {
            let (lo, hi) = spectra
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                    (lo.min(s[i]), hi.max(s[i]))
                });
            hi - lo
        })
        .fold(0.0, f64::max);
    Ok(spread)
}

pub fn spectrum_constancy(st: &SU2InvariantState, cfg: &OracleConfig) -> Result<f64> {
    spectrum_constancy_matrix(st.rho(), st.spin().dim(), cfg)
}
