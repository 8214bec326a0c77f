//! Spin matrices, spin-j ⊗ spin-1/2 Clebsch–Gordan coefficients and SU(2)
//! rotations.
//!
//! All spin-j matrices use the basis `|j⟩, |j-1⟩, …, |-j⟩` (descending m),
//! so row `i` carries magnetic number `m = j - i`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{hermitian_eigen, ComplexMatrix};

/// A spin quantum number stored exactly as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinLabel {
    two_j: u32,
}

impl SpinLabel {
    pub const HALF: SpinLabel = SpinLabel { two_j: 1 };

    pub fn new(two_j: u32) -> Self {
        SpinLabel { two_j }
    }

    /// Spin label suitable for the correlation computations (`j >= 1/2`).
    pub fn coupled(two_j: u32) -> Result<Self> {
        if two_j == 0 {
            return Err(Error::InvalidSpin(two_j));
        }
        Ok(SpinLabel { two_j })
    }

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn j(self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Dimension `d = 2j + 1`.
    pub fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    pub fn is_integer_spin(self) -> bool {
        self.two_j.is_multiple_of(2)
    }

    /// `⌊j⌋`.
    pub fn floor_j(self) -> u32 {
        self.two_j / 2
    }

    /// Magnetic numbers `2m` in basis order (descending).
    pub fn two_ms(self) -> impl Iterator<Item = i32> {
        let two_j = self.two_j as i32;
        (0..=two_j).map(move |i| two_j - 2 * i)
    }

    /// Basis index of the state with magnetic number `two_m / 2`.
    pub fn index_of(self, two_m: i32) -> Option<usize> {
        let two_j = self.two_j as i32;
        if two_m.abs() > two_j || (two_j - two_m) % 2 != 0 {
            return None;
        }
        Some(((two_j - two_m) / 2) as usize)
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer_spin() {
            write!(f, "j={}", self.two_j / 2)
        } else {
            write!(f, "j={}/2", self.two_j)
        }
    }
}

/// Rotation parameters `η` of `exp(i η·S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationParams {
    pub eta: [f64; 3],
}

/// The two total-spin multiplets `j ± 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

/// `(Sx, Sy, Sz)` for spin `s`.
pub fn spin_operators(s: SpinLabel) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let d = s.dim();
    let j = s.j();
    let mut raise = ComplexMatrix::zeros(d, d);
    let mut sz = ComplexMatrix::zeros(d, d);
    for (i, two_m) in s.two_ms().enumerate() {
        let m = two_m as f64 / 2.0;
        sz[(i, i)] = Complex64::new(m, 0.0);
        if i > 0 {
            raise[(i - 1, i)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let lower = raise.adjoint();
    let sx = (&raise + &lower) * Complex64::new(0.5, 0.0);
    let sy = (&raise - &lower) * Complex64::new(0.0, -0.5);
    (sx, sy, sz)
}

/// Coefficients `(a, b)` of `|j ± 1/2, m⟩ = a |j, m-1/2⟩⊗|↑⟩ + b |j, m+1/2⟩⊗|↓⟩`.
///
/// `a_± = ±√((j + 1/2 ± m)/(2j + 1))`, `b_± = √((j + 1/2 ∓ m)/(2j + 1))`.
pub fn clebsch_coefficients(s: SpinLabel, two_m: i32, branch: Branch) -> Result<(f64, f64)> {
    let two_j = s.two_j as i32;
    let bound = match branch {
        Branch::Plus => two_j + 1,
        Branch::Minus => two_j - 1,
    };
    if bound < 0 || two_m.abs() > bound || (two_j + two_m) % 2 == 0 {
        return Err(Error::InvalidMagneticNumber {
            two_j: s.two_j,
            two_m,
            branch: branch.name(),
        });
    }
    let denom = 2.0 * (two_j + 1) as f64;
    let up = (two_j + 1 + two_m) as f64 / denom;
    let down = (two_j + 1 - two_m) as f64 / denom;
    Ok(match branch {
        Branch::Plus => (up.sqrt(), down.sqrt()),
        Branch::Minus => (-down.sqrt(), up.sqrt()),
    })
}

/// `U = exp(i η·S)`, through the spectral decomposition of `η·S`.
pub fn rotation_operator(s: SpinLabel, p: RotationParams) -> ComplexMatrix {
    let (sx, sy, sz) = spin_operators(s);
    let generator = sx * Complex64::from(p.eta[0])
        + sy * Complex64::from(p.eta[1])
        + sz * Complex64::from(p.eta[2]);
    let (values, vectors) =
        hermitian_eigen(&generator).expect("spin generator is Hermitian by construction");
    let phases = nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex64::from_polar(1.0, v)),
    );
    &vectors * ComplexMatrix::from_diagonal(&phases) * vectors.adjoint()
}
