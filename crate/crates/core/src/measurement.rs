//! Projective measurements on the qubit and their post-measurement states.
//!
//! A measurement is fixed by a unit quaternion `(t, y)` through
//! `V = t I + i y·σ` and the projectors `B_k = V |k⟩⟨k| V†`. Equivalently,
//! `B_0 = (I + z·σ)/2` with `z` the Bloch direction below.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numeric::{identity, kronecker, trace, ComplexMatrix};
use crate::spin::SpinLabel;
use crate::state::{check_weight, SU2InvariantState};

const QUATERNION_TOL: f64 = 1e-9;
const DIRECTION_TOL: f64 = 1e-9;
const MIN_PROBABILITY: f64 = 1e-12;

/// A von Neumann measurement of the qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementFrame {
    pub t: f64,
    pub y: [f64; 3],
    /// Bloch direction of `B_0`.
    pub z: [f64; 3],
    pub v: ComplexMatrix,
    pub b0: ComplexMatrix,
    pub b1: ComplexMatrix,
}

impl MeasurementFrame {
    pub fn projector(&self, k: usize) -> &ComplexMatrix {
        match k {
            0 => &self.b0,
            1 => &self.b1,
            _ => panic!("qubit measurement has two outcomes, got {k}"),
        }
    }
}

fn pauli() -> [ComplexMatrix; 3] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        ComplexMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        ComplexMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        ComplexMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
    ]
}

/// Frame from a unit quaternion; inputs within `1e-9` of unit norm are
/// renormalized.
pub fn frame_from_quaternion(t: f64, y: [f64; 3]) -> Result<MeasurementFrame> {
    let norm2 = t * t + y.iter().map(|c| c * c).sum::<f64>();
    if !norm2.is_finite() || (norm2 - 1.0).abs() > QUATERNION_TOL {
        return Err(Error::NotUnitQuaternion(norm2.sqrt()));
    }
    let n = norm2.sqrt();
    let t = t / n;
    let y = y.map(|c| c / n);
    let z = [
        2.0 * (-t * y[1] + y[0] * y[2]),
        2.0 * (t * y[0] + y[1] * y[2]),
        t * t + y[2] * y[2] - y[0] * y[0] - y[1] * y[1],
    ];
    let [s1, s2, s3] = pauli();
    let i = Complex64::new(0.0, 1.0);
    let v = identity(2) * Complex64::from(t)
        + (s1 * Complex64::from(y[0]) + s2 * Complex64::from(y[1]) + s3 * Complex64::from(y[2]))
            * i;
    let projector = |k: usize| {
        let col = v.column(k);
        col * col.adjoint()
    };
    Ok(MeasurementFrame {
        t,
        y,
        z,
        b0: projector(0),
        b1: projector(1),
        v,
    })
}

/// Frame with `(t, y)` uniform on the unit 3-sphere.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R) -> MeasurementFrame {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = q.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 1e-6 {
            return frame_from_quaternion(q[0] / n, [q[1] / n, q[2] / n, q[3] / n])
                .expect("normalized quaternion");
        }
    }
}

/// Deterministic anchors: Bloch directions `+z, -z, +x, -x, +y, -y` and two
/// oblique frames.
pub fn axis_frames() -> Vec<MeasurementFrame> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let quaternions: [(f64, [f64; 3]); 8] = [
        (1.0, [0.0, 0.0, 0.0]),
        (0.0, [1.0, 0.0, 0.0]),
        (h, [0.0, -h, 0.0]),
        (h, [0.0, h, 0.0]),
        (h, [h, 0.0, 0.0]),
        (h, [-h, 0.0, 0.0]),
        (0.9, [0.3, -0.2, 0.25]),
        (0.4, [-0.5, 0.6, 0.48]),
    ];
    quaternions
        .iter()
        .map(|&(t, y)| {
            let n = (t * t + y.iter().map(|c| c * c).sum::<f64>()).sqrt();
            frame_from_quaternion(t / n, y.map(|c| c / n)).expect("normalized quaternion")
        })
        .collect()
}

/// `(2Fj + F - j) / (j(j+1)(2j+1))`, the signed coupling scale of `M`.
pub fn coupling_scale(s: SpinLabel, f: f64) -> f64 {
    let j = s.j();
    (2.0 * f * j + f - j) / (j * (j + 1.0) * (2.0 * j + 1.0))
}

/// The operator `M` on the spin-j factor, assembled entry by entry:
/// diagonal `z3·m·c`, and `(z1 ± i z2)/2 · √(j(j+1) - m(m+1)) · c` on the
/// pairs `|m⟩⟨m+1|` and `|m+1⟩⟨m|`.
pub fn m_operator(s: SpinLabel, f: f64, z: [f64; 3]) -> Result<ComplexMatrix> {
    check_weight(f)?;
    let norm = z.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > DIRECTION_TOL {
        return Err(Error::NotUnitVector(norm));
    }
    let c = coupling_scale(s, f);
    let j = s.j();
    let d = s.dim();
    let mut m_op = ComplexMatrix::zeros(d, d);
    let lower = Complex64::new(z[0], z[1]) * 0.5;
    for (i, two_m) in s.two_ms().enumerate() {
        let m = two_m as f64 / 2.0;
        m_op[(i, i)] = Complex64::from(z[2] * m * c);
        // |m⟩ sits at index i, |m+1⟩ at index i-1.
        if i > 0 {
            let ladder = (j * (j + 1.0) - m * (m + 1.0)).sqrt() * c;
            m_op[(i, i - 1)] = lower * ladder;
            m_op[(i - 1, i)] = lower.conj() * ladder;
        }
    }
    Ok(m_op)
}

/// Outcome probabilities and normalized conditional states.
#[derive(Debug, Clone)]
pub struct PostMeasurementEnsemble {
    pub p0: f64,
    pub p1: f64,
    pub rho0: ComplexMatrix,
    pub rho1: ComplexMatrix,
    /// `p0 rho0 + p1 rho1`.
    pub dephased: ComplexMatrix,
}

/// `(I ⊗ B_k) rho (I ⊗ B_k)` for both outcomes, unnormalized.
pub(crate) fn branch_states(
    rho: &ComplexMatrix,
    spin_dim: usize,
    frame: &MeasurementFrame,
) -> [ComplexMatrix; 2] {
    let id = identity(spin_dim);
    [0, 1].map(|k| {
        let p = kronecker(&id, frame.projector(k));
        &p * rho * &p
    })
}

/// Post-measurement ensemble of a raw density matrix on `C^spin_dim ⊗ C^2`.
pub fn measure_matrix(
    rho: &ComplexMatrix,
    spin_dim: usize,
    frame: &MeasurementFrame,
) -> Result<PostMeasurementEnsemble> {
    let [u0, u1] = branch_states(rho, spin_dim, frame);
    let p0 = trace(&u0).re;
    let p1 = trace(&u1).re;
    for p in [p0, p1] {
        if p < MIN_PROBABILITY {
            return Err(Error::VanishingProbability(p));
        }
    }
    Ok(PostMeasurementEnsemble {
        p0,
        p1,
        rho0: &u0 / Complex64::from(p0),
        rho1: &u1 / Complex64::from(p1),
        dephased: u0 + u1,
    })
}

pub fn post_measurement(
    st: &SU2InvariantState,
    frame: &MeasurementFrame,
) -> Result<PostMeasurementEnsemble> {
    measure_matrix(st.rho(), st.spin().dim(), frame)
}

/// `Σ_k (I ⊗ B_k) rho (I ⊗ B_k)` for a raw density matrix.
pub fn dephase_matrix(
    rho: &ComplexMatrix,
    spin_dim: usize,
    frame: &MeasurementFrame,
) -> ComplexMatrix {
    let [u0, u1] = branch_states(rho, spin_dim, frame);
    u0 + u1
}

pub fn dephase(st: &SU2InvariantState, frame: &MeasurementFrame) -> ComplexMatrix {
    dephase_matrix(st.rho(), st.spin().dim(), frame)
}

/// The factorized conditional states `(I/(2j+1) ∓ M) ⊗ B_k`.
pub fn factorized_conditional_states(
    s: SpinLabel,
    f: f64,
    frame: &MeasurementFrame,
) -> Result<[ComplexMatrix; 2]> {
    let m_op = m_operator(s, f, frame.z)?;
    let mixed = identity(s.dim()) * Complex64::from(1.0 / s.dim() as f64);
    Ok([
        kronecker(&(&mixed - &m_op), &frame.b0),
        kronecker(&(&mixed + &m_op), &frame.b1),
    ])
}
