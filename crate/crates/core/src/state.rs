//! SU(2)-invariant states of a spin-j and a spin-1/2.
//!
//! The product basis is `(spin-j) ⊗ (qubit)` with the qubit ordered
//! `|+1/2⟩, |-1/2⟩`, so the state `|m⟩ ⊗ |q⟩` sits at index `2·i(m) + q`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::{
    hermitian_eigenvalues, identity, kronecker, max_abs_diff, partial_trace_first,
    partial_trace_second, ComplexMatrix, Spectrum,
};
use crate::spin::{
    clebsch_coefficients, rotation_operator, spin_operators, Branch, RotationParams, SpinLabel,
};

/// The state with weight `F` on the `j - 1/2` multiplet and `1 - F` on the
/// `j + 1/2` multiplet, each spread uniformly over its magnetic sublevels.
#[derive(Debug, Clone)]
pub struct SU2InvariantState {
    spin: SpinLabel,
    weight: f64,
    rho: ComplexMatrix,
}

impl SU2InvariantState {
    pub fn spin(&self) -> SpinLabel {
        self.spin
    }

    /// The multiplet weight `F`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    /// Product-space dimension `2(2j + 1)`.
    pub fn dim(&self) -> usize {
        2 * self.spin.dim()
    }

    /// Eigenvalue `F/(2j)` of the `j - 1/2` multiplet.
    pub fn lambda1(&self) -> f64 {
        self.weight / self.spin.two_j() as f64
    }

    /// Eigenvalue `(1 - F)/(2j + 2)` of the `j + 1/2` multiplet.
    pub fn lambda2(&self) -> f64 {
        (1.0 - self.weight) / (self.spin.two_j() + 2) as f64
    }

    /// Numerical spectrum of `rho` with degenerate levels merged.
    pub fn spectrum(&self) -> Spectrum {
        hermitian_eigenvalues(&self.rho).expect("state matrix is Hermitian")
    }
}

pub(crate) fn check_weight(f: f64) -> Result<()> {
    if (0.0..=1.0).contains(&f) {
        Ok(())
    } else {
        Err(Error::WeightOutOfRange(f))
    }
}

/// Builds the state from the coupled kets expanded in the product basis.
pub fn build_state(s: SpinLabel, f: f64) -> Result<SU2InvariantState> {
    build_state_with(s, f, clebsch_coefficients)
}

/// Same as [`build_state`], with the coupling coefficients supplied by the
/// caller. A coupling that is not the true Clebsch–Gordan table yields a
/// matrix that is generally not SU(2) invariant.
pub fn build_state_with<C>(s: SpinLabel, f: f64, coupling: C) -> Result<SU2InvariantState>
where
    C: Fn(SpinLabel, i32, Branch) -> Result<(f64, f64)>,
{
    if s.two_j() == 0 {
        return Err(Error::InvalidSpin(0));
    }
    check_weight(f)?;
    let n = 2 * s.dim();
    let two_j = s.two_j() as i32;
    let mut rho = ComplexMatrix::zeros(n, n);
    let lambda1 = f / s.two_j() as f64;
    let lambda2 = (1.0 - f) / (s.two_j() + 2) as f64;
    for (branch, bound, weight) in [
        (Branch::Minus, two_j - 1, lambda1),
        (Branch::Plus, two_j + 1, lambda2),
    ] {
        for two_m in (-bound..=bound).step_by(2) {
            let (a, b) = coupling(s, two_m, branch)?;
            let mut ket: Vec<(usize, f64)> = Vec::with_capacity(2);
            if let Some(i) = s.index_of(two_m - 1) {
                ket.push((2 * i, a));
            }
            if let Some(i) = s.index_of(two_m + 1) {
                ket.push((2 * i + 1, b));
            }
            for &(r, x) in &ket {
                for &(c, y) in &ket {
                    rho[(r, c)] += Complex64::from(weight * x * y);
                }
            }
        }
    }
    Ok(SU2InvariantState {
        spin: s,
        weight: f,
        rho,
    })
}

/// `S(ρ) = -F log(F/2j) - (1-F) log((1-F)/(2j+2))`, in bits.
pub fn state_entropy(st: &SU2InvariantState) -> f64 {
    closed_state_entropy(st.spin, st.weight)
}

pub(crate) fn closed_state_entropy(s: SpinLabel, f: f64) -> f64 {
    let two_j = s.two_j() as f64;
    let term = |w: f64, level: f64| if w > 0.0 { -w * level.log2() } else { 0.0 };
    term(f, f / two_j) + term(1.0 - f, (1.0 - f) / (two_j + 2.0))
}

/// Largest entry-wise change of `rho` under `(U_j ⊗ U_{1/2}) · (U_j ⊗ U_{1/2})†`
/// over the given rotations.
pub fn invariance_deviation(
    rho: &ComplexMatrix,
    s: SpinLabel,
    rotations: &[RotationParams],
) -> f64 {
    rotations
        .iter()
        .map(|&p| {
            let u = kronecker(
                &rotation_operator(s, p),
                &rotation_operator(SpinLabel::HALF, p),
            );
            max_abs_diff(&(&u * rho * u.adjoint()), rho)
        })
        .fold(0.0, f64::max)
}

/// `trials` rotations with each component of `η` uniform in `[-2π, 2π)`.
pub fn random_rotations(trials: usize, seed: u64) -> Vec<RotationParams> {
    use std::f64::consts::TAU;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| RotationParams {
            eta: [
                rng.random_range(-TAU..TAU),
                rng.random_range(-TAU..TAU),
                rng.random_range(-TAU..TAU),
            ],
        })
        .collect()
}

/// Maximum deviation of the state under `trials` seeded random rotations.
pub fn check_su2_invariance(st: &SU2InvariantState, trials: usize, seed: u64) -> f64 {
    invariance_deviation(&st.rho, st.spin, &random_rotations(trials, seed))
}

/// Largest entry of `[rho, J_k]` over the three total-spin components.
pub fn total_spin_commutator(st: &SU2InvariantState) -> f64 {
    let (jx, jy, jz) = spin_operators(st.spin);
    let (sx, sy, sz) = spin_operators(SpinLabel::HALF);
    let id_a = identity(st.spin.dim());
    let id_b = identity(2);
    [(jx, sx), (jy, sy), (jz, sz)]
        .iter()
        .map(|(a, b)| {
            let total = kronecker(a, &id_b) + kronecker(&id_a, b);
            max_abs_diff(&(&st.rho * &total), &(&total * &st.rho))
        })
        .fold(0.0, f64::max)
}

/// Marginal state of the qubit.
pub fn reduced_qubit(st: &SU2InvariantState) -> ComplexMatrix {
    partial_trace_first(&st.rho, st.spin.dim(), 2)
}

/// Marginal state of the spin-j factor.
pub fn reduced_spin(st: &SU2InvariantState) -> ComplexMatrix {
    partial_trace_second(&st.rho, st.spin.dim(), 2)
}

/// `(1 - c) I/4 + c |ψ⁻⟩⟨ψ⁻|` with `c = (4F - 1)/3`.
pub fn werner_state(f: f64) -> ComplexMatrix {
    let c = (4.0 * f - 1.0) / 3.0;
    let mut psi = ComplexMatrix::zeros(4, 1);
    psi[(1, 0)] = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    psi[(2, 0)] = Complex64::from(-std::f64::consts::FRAC_1_SQRT_2);
    identity(4) * Complex64::from((1.0 - c) / 4.0) + &psi * psi.adjoint() * Complex64::from(c)
}
