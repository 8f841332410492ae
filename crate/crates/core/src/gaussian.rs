//! Closed-form Fermi and Wigner machinery for squeezed coherent states
//!
//! ```text
//! Ψ(x) = (πħ)^{-n/4} (det X)^{1/4} exp[−(X + iY)x·x / 2ħ]
//! ```
//!
//! with `X` symmetric positive definite and `Y` symmetric.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symplectic_linalg::{SpdMatrix, SquareMatrix, SymmetricMatrix};

/// Tolerance used when asserting that the factor `S` is symplectic.
pub const FACTORIZATION_TOL: f64 = 1e-10;

/// A centred squeezed coherent state with `n` degrees of freedom.
#[derive(Clone, Debug)]
pub struct SqueezedState {
    x: SpdMatrix,
    y: SymmetricMatrix,
    hbar: f64,
}

/// `g_F(z) = M_F z·z − constant`.
#[derive(Clone, Debug)]
pub struct FermiQuadric {
    pub m_f: SpdMatrix,
    pub constant: f64,
}

/// `M_F = Sᵀ D S` with `S` symplectic and `D = diag(X, X)`.
#[derive(Clone, Debug)]
pub struct FermiFactorization {
    pub s: SquareMatrix,
    pub d: SpdMatrix,
}

impl SqueezedState {
    pub fn new(x: SpdMatrix, y: SymmetricMatrix, hbar: f64) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::Dimension(format!(
                "X is {0}x{0} but Y is {1}x{1}",
                x.dim(),
                y.dim()
            )));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "hbar must be positive and finite, got {hbar}"
            )));
        }
        Ok(Self { x, y, hbar })
    }

    /// The fiducial coherent state `X = I`, `Y = 0`.
    pub fn fiducial(n: usize, hbar: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("at least one degree of freedom".into()));
        }
        Self::new(
            SpdMatrix::identity(n),
            SymmetricMatrix::new(SquareMatrix::zeros(n))?,
            hbar,
        )
    }

    pub fn from_rows<R: AsRef<[f64]>>(x: &[R], y: &[R], hbar: f64) -> Result<Self> {
        Self::new(SpdMatrix::from_rows(x)?, SymmetricMatrix::from_rows(y)?, hbar)
    }

    pub fn dof(&self) -> usize {
        self.x.dim()
    }

    pub fn x(&self) -> &SpdMatrix {
        &self.x
    }

    pub fn y(&self) -> &SymmetricMatrix {
        &self.y
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn trace_x(&self) -> f64 {
        self.x.trace()
    }

    fn check_len(&self, v: &[f64], len: usize, what: &str) -> Result<()> {
        if v.len() != len {
            return Err(Error::Dimension(format!(
                "{what} has length {}, expected {len}",
                v.len()
            )));
        }
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("phase-space point"));
        }
        Ok(())
    }

    /// `Ψ(x)`.
    pub fn evaluate(&self, x: &[f64]) -> Result<Complex64> {
        let n = self.dof();
        self.check_len(x, n, "configuration point")?;
        let prefactor = (PI * self.hbar).powf(-(n as f64) / 4.0) * self.x.determinant().powf(0.25);
        let re = self.x.quadratic_form(x)?;
        let im = self.y.quadratic_form(x)?;
        Ok(prefactor * (Complex64::new(-re, -im) / (2.0 * self.hbar)).exp())
    }

    /// `M_F = [[X² + Y², Y], [Y, I]]` and the constant `ħ Tr X`.
    pub fn fermi_quadric(&self) -> Result<FermiQuadric> {
        let n = self.dof();
        let x2 = &*self.x * &*self.x;
        let y2 = &*self.y * &*self.y;
        let m = SquareMatrix::from_blocks(&(&x2 + &y2), &self.y, &self.y, &SquareMatrix::identity(n))?;
        Ok(FermiQuadric {
            m_f: SpdMatrix::from_square(m)?,
            constant: self.hbar * self.trace_x(),
        })
    }

    /// `g_F(x, p) = (p + Yx)² + X²x·x − ħ Tr X`.
    pub fn fermi_value(&self, z: &[f64]) -> Result<f64> {
        let n = self.dof();
        self.check_len(z, 2 * n, "phase-space point")?;
        let (x, p) = z.split_at(n);
        let yx = self.y.mul_vec(x)?;
        let kinetic: f64 = p.iter().zip(&yx).map(|(a, b)| (a + b) * (a + b)).sum();
        let xx = self.x.mul_vec(x)?;
        let confining: f64 = xx.iter().map(|v| v * v).sum();
        Ok(kinetic + confining - self.hbar * self.trace_x())
    }

    /// `S = [[X^{1/2}, 0], [X^{-1/2}Y, X^{-1/2}]]`, `D = diag(X, X)`.
    pub fn fermi_factorization(&self) -> Result<FermiFactorization> {
        let n = self.dof();
        let root = self.x.sqrt();
        let inv_root = self.x.inverse_sqrt();
        let s = SquareMatrix::from_blocks(
            &root,
            &SquareMatrix::zeros(n),
            &(&*inv_root * &*self.y),
            &inv_root,
        )?;
        Ok(FermiFactorization {
            s,
            d: self.d_matrix()?,
        })
    }

    fn d_matrix(&self) -> Result<SpdMatrix> {
        let n = self.dof();
        let zero = SquareMatrix::zeros(n);
        SpdMatrix::from_square(SquareMatrix::from_blocks(&self.x, &zero, &zero, &self.x)?)
    }

    /// `G = [[X + YX⁻¹Y, YX⁻¹], [X⁻¹Y, X⁻¹]]`.
    pub fn wigner_matrix(&self) -> Result<SpdMatrix> {
        let inv = self.x.inverse();
        let y_inv = &*self.y * &*inv;
        let inv_y = &*inv * &*self.y;
        let top_left = &*self.x + &(&y_inv * &*self.y);
        SpdMatrix::from_square(SquareMatrix::from_blocks(&top_left, &y_inv, &inv_y, &inv)?)
    }

    /// `W(z) = (πħ)^{-n} exp(−Gz·z / ħ)`.
    pub fn wigner_value(&self, z: &[f64]) -> Result<f64> {
        let n = self.dof();
        self.check_len(z, 2 * n, "phase-space point")?;
        let g = self.wigner_matrix()?;
        Ok(self.wigner_peak() * (-g.quadratic_form(z)? / self.hbar).exp())
    }

    /// `W(0) = (πħ)^{-n}`.
    pub fn wigner_peak(&self) -> f64 {
        (PI * self.hbar).powi(-(self.dof() as i32))
    }

    /// The point transform `S⁻¹ D^{-1/2} S` relating the Wigner exponent to `g_F`.
    pub fn fermi_point_transform(&self) -> Result<SquareMatrix> {
        let f = self.fermi_factorization()?;
        let s_inv = crate::symplectic_linalg::symplectic_inverse(&f.s)?;
        let d_inv_root = f.d.inverse_sqrt();
        Ok(&(&s_inv * &*d_inv_root) * &f.s)
    }

    /// Largest relative deviation, over `samples`, between the Wigner function
    /// and `(πħ)^{-n} e^{−Tr X} exp[−g_F(S⁻¹D^{-1/2}Sz) / ħ]`.
    pub fn wigner_fermi_identity_residual(&self, samples: &[Vec<f64>]) -> Result<f64> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("no sample points".into()));
        }
        let f = self.fermi_factorization()?;
        let s_inv = crate::symplectic_linalg::symplectic_inverse(&f.s)?;
        let d_inv_root = f.d.inverse_sqrt();
        let g = self.wigner_matrix()?;
        let peak = self.wigner_peak();
        let damping = (-self.trace_x()).exp();
        let mut worst = 0.0_f64;
        for z in samples {
            self.check_len(z, 2 * self.dof(), "phase-space point")?;
            let w = peak * (-g.quadratic_form(z)? / self.hbar).exp();
            let sz = f.s.mul_vec(z)?;
            let dsz = d_inv_root.mul_vec(&sz)?;
            let t = s_inv.mul_vec(&dsz)?;
            let via_fermi = peak * damping * (-self.fermi_value(&t)? / self.hbar).exp();
            worst = worst.max((w - via_fermi).abs() / peak);
        }
        Ok(worst)
    }
}
