//! Dense complex matrices, Hermitian spectra and entropy primitives.
//!
//! Matrices are plain `nalgebra` dense matrices over `Complex64`. Every
//! entropy in this crate is measured in bits.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Entry-wise tolerance for treating a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues closer than this are reported as one degenerate level.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Eigenvalues in `[-NEGATIVE_CLAMP, 0)` are treated as exact zeros.
pub const NEGATIVE_CLAMP: f64 = 1e-10;
/// Allowed deviation of a probability spectrum's total from 1.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Real spectrum sorted in descending order, with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub multiplicities: Vec<usize>,
}

impl Spectrum {
    /// Spectrum with every value counted once, sorted descending.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        let multiplicities = vec![1; values.len()];
        Spectrum {
            values,
            multiplicities,
        }
    }

    /// Merges neighbouring levels that lie within `tol` of the first member
    /// of their cluster. The merged value is the cluster mean, so the total
    /// weight is preserved.
    pub fn clustered(&self, tol: f64) -> Self {
        let mut values = Vec::new();
        let mut multiplicities = Vec::new();
        let mut start = 0.0;
        let mut acc = 0.0;
        let mut count = 0usize;
        for (v, m) in self.expanded() {
            if count > 0 && start - v <= tol {
                acc += v * m as f64;
                count += m;
                continue;
            }
            if count > 0 {
                values.push(acc / count as f64);
                multiplicities.push(count);
            }
            start = v;
            acc = v * m as f64;
            count = m;
        }
        if count > 0 {
            values.push(acc / count as f64);
            multiplicities.push(count);
        }
        Spectrum {
            values,
            multiplicities,
        }
    }

    fn expanded(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.values
            .iter()
            .copied()
            .zip(self.multiplicities.iter().copied())
    }

    /// Number of eigenvalues counted with multiplicity.
    pub fn dimension(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// `Σ value · multiplicity`.
    pub fn total(&self) -> f64 {
        self.expanded().map(|(v, m)| v * m as f64).sum()
    }

    pub fn min(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// All eigenvalues, repeated according to multiplicity, descending.
    pub fn flattened(&self) -> Vec<f64> {
        self.expanded()
            .flat_map(|(v, m)| std::iter::repeat_n(v, m))
            .collect()
    }
}

/// Largest entry-wise deviation `|A[i][j] - conj(A[j][i])|`.
pub fn hermiticity_deviation(a: &ComplexMatrix) -> f64 {
    let n = a.nrows().min(a.ncols());
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let deviation = hermiticity_deviation(a);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Eigenvalues and eigenvectors of a Hermitian matrix, eigenvalues
/// descending and eigenvectors in matching column order.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(a)?;
    let eig = a.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..a.nrows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors =
        ComplexMatrix::from_fn(a.nrows(), a.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix, descending, each counted once.
pub fn sorted_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let mut values: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// Spectrum of a Hermitian matrix with degenerate levels merged at
/// [`CLUSTER_TOL`].
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Spectrum> {
    Ok(Spectrum::from_values(sorted_eigenvalues(a)?).clustered(CLUSTER_TOL))
}

/// `-p log2 p` with `0 log 0 = 0`; non-positive arguments contribute nothing.
pub fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Von Neumann entropy (bits) of a probability spectrum.
pub fn von_neumann_entropy(spec: &Spectrum) -> Result<f64> {
    if let Some(min) = spec.min() {
        if min < -NEGATIVE_CLAMP {
            return Err(Error::ProbabilityOutOfRange(min));
        }
    }
    let sum = spec.total();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { sum });
    }
    Ok(spec
        .values
        .iter()
        .zip(&spec.multiplicities)
        .map(|(&p, &m)| m as f64 * entropy_term(p))
        .sum())
}

/// Entropy of a density matrix computed from its unclustered eigenvalues.
pub fn matrix_entropy(rho: &ComplexMatrix) -> Result<f64> {
    von_neumann_entropy(&Spectrum::from_values(sorted_eigenvalues(rho)?))
}

/// Binary entropy `H(x)` in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    const TOL: f64 = 1e-12;
    if !(-TOL..=1.0 + TOL).contains(&x) || x.is_nan() {
        return Err(Error::ProbabilityOutOfRange(x));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(entropy_term(x) + entropy_term(1.0 - x))
}

pub fn kronecker(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// Traces out the first tensor factor of a `(dim_a * dim_b)`-square matrix.
pub fn partial_trace_first(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> ComplexMatrix {
    assert_eq!(m.nrows(), dim_a * dim_b);
    ComplexMatrix::from_fn(dim_b, dim_b, |r, c| {
        (0..dim_a).map(|k| m[(k * dim_b + r, k * dim_b + c)]).sum()
    })
}

/// Traces out the second tensor factor of a `(dim_a * dim_b)`-square matrix.
pub fn partial_trace_second(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> ComplexMatrix {
    assert_eq!(m.nrows(), dim_a * dim_b);
    ComplexMatrix::from_fn(dim_a, dim_a, |r, c| {
        (0..dim_b).map(|k| m[(r * dim_b + k, c * dim_b + k)]).sum()
    })
}

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn real_diag(d: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            d.len(),
            d.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    #[test]
    fn identity_spectrum_is_degenerate() {
        let spec = hermitian_eigenvalues(&identity(2)).unwrap();
        assert_eq!(spec.multiplicities, vec![2]);
        assert!((spec.values[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_spectrum() {
        let spec = hermitian_eigenvalues(&real_diag(&[0.25, 0.75])).unwrap();
        assert_eq!(spec.multiplicities, vec![1, 1]);
        assert!((spec.values[0] - 0.75).abs() < 1e-14);
        assert!((spec.values[1] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            hermitian_eigenvalues(&rect),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
        let mut m = identity(2);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigenvectors_reconstruct() {
        let m = DMatrix::from_fn(5, 5, |r, c| {
            let x = (r * 7 + c * 3) as f64 * 0.1;
            Complex64::new(x.sin(), (x * 1.3).cos())
        });
        let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let (vals, vecs) = hermitian_eigen(&h).unwrap();
        for (k, &v) in vals.iter().enumerate() {
            let col = vecs.column(k);
            let resid = (&h * col - col * Complex64::new(v, 0.0)).norm();
            assert!(resid < 1e-9, "residual {resid}");
        }
    }

    #[test]
    fn entropy_examples() {
        let pure = Spectrum::from_values(vec![1.0]);
        assert_eq!(von_neumann_entropy(&pure).unwrap(), 0.0);
        let mixed = Spectrum::from_values(vec![0.5, 0.5]);
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-15);
        let singlet = Spectrum::from_values(vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(von_neumann_entropy(&singlet).unwrap(), 0.0);
    }

    #[test]
    fn entropy_clamps_tiny_negatives_and_rejects_bad_sums() {
        let noisy = Spectrum::from_values(vec![1.0 + 5e-11, -5e-11]);
        assert!(von_neumann_entropy(&noisy).unwrap().abs() < 1e-9);
        let bad = Spectrum::from_values(vec![0.6, 0.6]);
        assert!(matches!(
            von_neumann_entropy(&bad),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn binary_entropy_examples() {
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // log2(3) - 2/3, evaluated at 50 digits with mpmath
        let reference = 0.918_295_834_054_489_5;
        assert!((binary_entropy(1.0 / 3.0).unwrap() - reference).abs() < 1e-15);
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(-0.01).is_err());
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(&identity(2), &identity(2)), identity(4));
        let k = kronecker(&real_diag(&[1.0, 2.0]), &real_diag(&[3.0, 5.0]));
        assert_eq!(k, real_diag(&[3.0, 5.0, 6.0, 10.0]));
    }

    #[test]
    fn partial_traces_of_product() {
        let a = real_diag(&[0.2, 0.3, 0.5]);
        let b = real_diag(&[0.9, 0.1]);
        let ab = kronecker(&a, &b);
        assert!(max_abs_diff(&partial_trace_first(&ab, 3, 2), &b) < 1e-15);
        assert!(max_abs_diff(&partial_trace_second(&ab, 3, 2), &a) < 1e-15);
    }

    #[test]
    fn clustering_merges_close_levels() {
        let s = Spectrum::from_values(vec![0.5, 0.25 + 1e-10, 0.25 - 1e-10]).clustered(CLUSTER_TOL);
        assert_eq!(s.multiplicities, vec![1, 2]);
        assert!((s.total() - 1.0).abs() < 1e-15);
        assert_eq!(s.dimension(), 3);
        assert_eq!(s.flattened().len(), 3);
    }
}
