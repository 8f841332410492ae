use std::fmt;
use std::ops::{Add, Deref, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

use super::eigen::{jacobi_eigen, SymmetricEigen};

/// Largest matrix dimension accepted by the dense kernels.
pub const MAX_DIM: usize = 512;

/// Relative tolerance for the symmetry check, scaled by `max(1, ‖M‖∞)`.
pub const SYM_TOL: f64 = 1e-10;

/// Relative tolerance on the smallest eigenvalue of an SPD matrix, scaled by `max(1, ‖M‖∞)`.
pub const SPD_TOL: f64 = 1e-10;

/// Dense real square matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "matrix dimension {dim} out of range");
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Assembles `[[a, b], [c, d]]` from four equally sized blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        let n = a.dim;
        if b.dim != n || c.dim != n || d.dim != n {
            return Err(Error::Dimension("blocks must share one dimension".into()));
        }
        check_dim(2 * n)?;
        let mut m = Self::zeros(2 * n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = a[(i, j)];
                m[(i, j + n)] = b[(i, j)];
                m[(i + n, j)] = c[(i, j)];
                m[(i + n, j + n)] = d[(i, j)];
            }
        }
        Ok(m)
    }

    /// Extracts the `n×n` block at block coordinates `(bi, bj)` of a `2n×2n` matrix.
    pub fn block(&self, bi: usize, bj: usize) -> Self {
        let n = self.dim / 2;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(bi * n + i, bj * n + j)];
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Induced infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks(self.dim)
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} against {}x{} matrix",
                v.len(),
                self.dim,
                self.dim
            )));
        }
        Ok(self
            .data
            .chunks(self.dim)
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `Mv·v`.
    pub fn quadratic_form(&self, v: &[f64]) -> Result<f64> {
        let mv = self.mul_vec(v)?;
        Ok(mv.iter().zip(v).map(|(a, b)| a * b).sum())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::Dimension("matrix dimension must be at least 1".into()));
    }
    if dim > MAX_DIM {
        return Err(Error::Dimension(format!(
            "matrix dimension {dim} exceeds the limit of {MAX_DIM}"
        )));
    }
    Ok(())
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;

    fn add(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;

    fn sub(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &SquareMatrix {
    type Output = SquareMatrix;

    fn neg(self) -> SquareMatrix {
        self.scale(-1.0)
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.dim)).finish()
    }
}

/// Square matrix whose symmetry was checked and then enforced exactly.
#[derive(Clone, PartialEq)]
pub struct SymmetricMatrix(SquareMatrix);

impl SymmetricMatrix {
    pub fn new(m: SquareMatrix) -> Result<Self> {
        let tolerance = SYM_TOL * m.norm_inf().max(1.0);
        let asymmetry = m.max_abs_asymmetry();
        if asymmetry > tolerance {
            return Err(Error::NotSymmetric {
                asymmetry,
                tolerance,
            });
        }
        Ok(Self::symmetrized(m))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(SquareMatrix::from_rows(rows)?)
    }

    /// Replaces `m` by `(m + mᵀ)/2` without checking.
    pub(crate) fn symmetrized(mut m: SquareMatrix) -> Self {
        let n = m.dim;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        Self(m)
    }

    pub fn eigen(&self) -> SymmetricEigen {
        jacobi_eigen(&self.0)
    }

    pub fn as_square(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn into_square(self) -> SquareMatrix {
        self.0
    }
}

impl Deref for SymmetricMatrix {
    type Target = SquareMatrix;

    fn deref(&self) -> &SquareMatrix {
        &self.0
    }
}

impl fmt::Debug for SymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Symmetric positive definite matrix carrying its eigendecomposition.
///
/// Square roots, inverse square roots and inverses are spectral functions
/// evaluated on the stored decomposition.
#[derive(Clone)]
pub struct SpdMatrix {
    matrix: SymmetricMatrix,
    eigen: SymmetricEigen,
}

impl SpdMatrix {
    pub fn new(matrix: SymmetricMatrix) -> Result<Self> {
        let eigen = matrix.eigen();
        let min_eigenvalue = eigen.values[0];
        if !(min_eigenvalue > SPD_TOL * matrix.norm_inf().max(1.0)) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue });
        }
        Ok(Self { matrix, eigen })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(SymmetricMatrix::from_rows(rows)?)
    }

    pub fn from_square(m: SquareMatrix) -> Result<Self> {
        Self::new(SymmetricMatrix::new(m)?)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_eigen(SymmetricEigen {
            values: vec![1.0; dim],
            vectors: SquareMatrix::identity(dim),
        })
    }

    /// Rebuilds a matrix from positive eigenvalues and orthonormal eigenvectors.
    fn from_eigen(eigen: SymmetricEigen) -> Self {
        let matrix = SymmetricMatrix::symmetrized(eigen.reconstruct(|v| v));
        Self { matrix, eigen }
    }

    fn spectral_map(&self, f: impl Fn(f64) -> f64) -> Self {
        let values: Vec<f64> = self.eigen.values.iter().map(|&v| f(v)).collect();
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let n = values.len();
        let mut vectors = SquareMatrix::zeros(n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for i in 0..n {
                vectors[(i, new_col)] = self.eigen.vectors[(i, old_col)];
            }
        }
        Self::from_eigen(SymmetricEigen {
            values: order.iter().map(|&i| values[i]).collect(),
            vectors,
        })
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        self.spectral_map(f64::sqrt)
    }

    pub fn inverse_sqrt(&self) -> Self {
        self.spectral_map(|v| 1.0 / v.sqrt())
    }

    pub fn inverse(&self) -> Self {
        self.spectral_map(|v| 1.0 / v)
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "SPD scaling factor must be positive and finite, got {c}"
            )));
        }
        Ok(self.spectral_map(|v| c * v))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigen.values.last().expect("nonempty spectrum")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigen.values[0]
    }

    pub fn determinant(&self) -> f64 {
        self.eigen.values.iter().product()
    }

    pub fn as_symmetric(&self) -> &SymmetricMatrix {
        &self.matrix
    }
}

impl Deref for SpdMatrix {
    type Target = SquareMatrix;

    fn deref(&self) -> &SquareMatrix {
        &self.matrix
    }
}

impl PartialEq for SpdMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl fmt::Debug for SpdMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            SquareMatrix::from_row_major(2, vec![1.0; 3]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            SquareMatrix::from_row_major(0, vec![]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            SquareMatrix::from_row_major(MAX_DIM + 1, vec![0.0; (MAX_DIM + 1).pow(2)]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            SquareMatrix::from_rows(&[vec![1.0, f64::NAN], vec![0.0, 1.0]]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn symmetry_check_scales_with_norm() {
        let ok = SymmetricMatrix::from_rows(&[[1e6, 1.0 + 1e-6], [1.0, 1e6]]);
        assert!(ok.is_ok());
        let bad = SymmetricMatrix::from_rows(&[[1.0, 1.0 + 1e-6], [1.0, 1.0]]);
        assert!(matches!(bad, Err(Error::NotSymmetric { .. })));
        let m = ok.unwrap();
        assert_eq!(m[(0, 1)], m[(1, 0)]);
    }

    #[test]
    fn spd_rejects_indefinite_and_singular() {
        assert!(matches!(
            SpdMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(matches!(
            SpdMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn spectral_functions_of_diagonal() {
        let m = SpdMatrix::from_rows(&[[4.0, 0.0], [0.0, 9.0]]).unwrap();
        let r = m.sqrt();
        assert!((r[(0, 0)] - 2.0).abs() < 1e-15);
        assert!((r[(1, 1)] - 3.0).abs() < 1e-15);
        assert_eq!(r[(0, 1)], 0.0);
        let inv = m.inverse();
        assert!((inv[(1, 1)] - 1.0 / 9.0).abs() < 1e-16);
        assert!((m.determinant() - 36.0).abs() < 1e-12);
    }

    #[test]
    fn blocks_round_trip() {
        let a = SquareMatrix::from_rows(&[[1.0]]).unwrap();
        let b = SquareMatrix::from_rows(&[[2.0]]).unwrap();
        let c = SquareMatrix::from_rows(&[[3.0]]).unwrap();
        let d = SquareMatrix::from_rows(&[[4.0]]).unwrap();
        let m = SquareMatrix::from_blocks(&a, &b, &c, &d).unwrap();
        assert_eq!(m.rows(), vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(m.block(1, 0), c);
        assert_eq!(m.norm_inf(), 7.0);
    }
}
