//! Dense real linear algebra for phase space: SPD square roots, the standard
//! symplectic form and symplectic eigenvalues.

mod eigen;
mod matrix;

pub use eigen::SymmetricEigen;
pub use matrix::{SpdMatrix, SquareMatrix, SymmetricMatrix, MAX_DIM, SPD_TOL, SYM_TOL};

use crate::error::{Error, Result};

/// Relative tolerance (against `‖M‖∞`) on the gap between the two copies of
/// each squared symplectic eigenvalue.
pub const PAIRING_TOL: f64 = 1e-6;

/// The `2n×2n` matrix `J = [[0, I], [−I, 0]]`.
///
/// # Panics
/// If `n` is zero or `2n` exceeds [`MAX_DIM`].
pub fn standard_symplectic(n: usize) -> SquareMatrix {
    assert!(n >= 1, "symplectic form needs at least one degree of freedom");
    let mut j = SquareMatrix::zeros(2 * n);
    for i in 0..n {
        j[(i, i + n)] = 1.0;
        j[(i + n, i)] = -1.0;
    }
    j
}

/// `σ(z, z') = Jz·z'`.
pub fn symplectic_form(z: &[f64], w: &[f64]) -> Result<f64> {
    if z.len() != w.len() || !z.len().is_multiple_of(2) || z.is_empty() {
        return Err(Error::Dimension(format!(
            "symplectic form needs two vectors of equal even length, got {} and {}",
            z.len(),
            w.len()
        )));
    }
    let n = z.len() / 2;
    // Jz = (p, −x)
    Ok((0..n).map(|i| z[n + i] * w[i] - z[i] * w[n + i]).sum())
}

fn half_dim(m: &SquareMatrix) -> Result<usize> {
    if !m.dim().is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "phase-space matrices must have even dimension, got {}",
            m.dim()
        )));
    }
    Ok(m.dim() / 2)
}

/// True iff `‖SᵀJS − J‖∞ ≤ tol`.
pub fn is_symplectic(s: &SquareMatrix, tol: f64) -> Result<bool> {
    Ok(symplectic_defect(s)? <= tol)
}

/// `‖SᵀJS − J‖∞`.
pub fn symplectic_defect(s: &SquareMatrix) -> Result<f64> {
    let j = standard_symplectic(half_dim(s)?);
    let sjs = &(&s.transpose() * &j) * s;
    Ok((&sjs - &j).norm_inf())
}

/// Inverse of a symplectic matrix, `S⁻¹ = −J Sᵀ J`.
pub fn symplectic_inverse(s: &SquareMatrix) -> Result<SquareMatrix> {
    let j = standard_symplectic(half_dim(s)?);
    Ok(-&(&(&j * &s.transpose()) * &j))
}

/// Principal square root of an SPD matrix.
pub fn spd_sqrt(m: &SpdMatrix) -> SpdMatrix {
    m.sqrt()
}

/// Symplectic eigenvalues of a `2n×2n` SPD matrix, in descending order.
///
/// `JM` is similar to the antisymmetric `K = M^{1/2} J M^{1/2}`. The
/// eigenvalues of the symmetric `KᵀK` are the squared symplectic eigenvalues,
/// each appearing twice; after sorting the copies are paired off and averaged.
pub fn symplectic_eigenvalues(m: &SpdMatrix) -> Result<Vec<f64>> {
    let n = half_dim(m)?;
    let root = m.sqrt();
    let j = standard_symplectic(n);
    let k = &(&*root * &j) * &*root;
    let ktk = SymmetricMatrix::symmetrized(&k.transpose() * &k);
    let mut squares = ktk.eigen().values;
    squares.reverse();

    let tolerance = PAIRING_TOL * m.norm_inf();
    let mut out = Vec::with_capacity(n);
    let mut worst = 0.0_f64;
    for pair in squares.chunks(2) {
        let a = pair[0].max(0.0).sqrt();
        let b = pair[1].max(0.0).sqrt();
        worst = worst.max((a - b).abs());
        out.push(0.5 * (a + b));
    }
    if worst > tolerance {
        return Err(Error::NumericalPairing {
            mismatch: worst,
            tolerance,
        });
    }
    Ok(out)
}
