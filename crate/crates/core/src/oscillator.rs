//! Eigenstates of the isotropic harmonic oscillator with unit mass and frequency.

use std::f64::consts::PI;

use crate::capacity::PhaseSpaceEllipsoid;
use crate::error::{Error, Result};
use crate::symplectic_linalg::SpdMatrix;

/// Physicists' Hermite polynomial `H_N(x)` by the three-term recurrence.
pub fn hermite_polynomial(order: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if order == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..order {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Tensor product of unnormalized Hermite functions, one index per degree of freedom.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillatorEigenstate {
    indices: Vec<usize>,
    hbar: f64,
}

impl OscillatorEigenstate {
    pub fn new(indices: Vec<usize>, hbar: f64) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Dimension("at least one degree of freedom".into()));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "hbar must be positive and finite, got {hbar}"
            )));
        }
        Ok(Self { indices, hbar })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn dof(&self) -> usize {
        self.indices.len()
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `E = Σ_j (2N_j + 1)ħ`, the squared radius of the Fermi ball.
    pub fn fermi_energy(&self) -> f64 {
        self.indices.iter().map(|&k| (2 * k + 1) as f64).sum::<f64>() * self.hbar
    }

    /// `(2N + 1)ħ` with `N = Σ_j N_j`, the single-index radius formula.
    pub fn total_index_radius_squared(&self) -> f64 {
        (2 * self.indices.iter().sum::<usize>() + 1) as f64 * self.hbar
    }

    /// `∏_j exp(−x_j²/2ħ) H_{N_j}(x_j/√ħ)`.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dof() {
            return Err(Error::Dimension(format!(
                "point has length {}, expected {}",
                x.len(),
                self.dof()
            )));
        }
        let scale = self.hbar.sqrt();
        Ok(self
            .indices
            .iter()
            .zip(x)
            .map(|(&k, &xj)| (-xj * xj / (2.0 * self.hbar)).exp() * hermite_polynomial(k, xj / scale))
            .product())
    }

    /// `g_F(x, p) = |p|² + |x|² − E`.
    pub fn fermi_value(&self, z: &[f64]) -> Result<f64> {
        if z.len() != 2 * self.dof() {
            return Err(Error::Dimension(format!(
                "phase-space point has length {}, expected {}",
                z.len(),
                2 * self.dof()
            )));
        }
        Ok(z.iter().map(|v| v * v).sum::<f64>() - self.fermi_energy())
    }

    /// The ball `|x|² + |p|² ≤ E`.
    pub fn fermi_ball(&self) -> PhaseSpaceEllipsoid {
        PhaseSpaceEllipsoid::centered(SpdMatrix::identity(2 * self.dof()), self.fermi_energy())
            .expect("identity shape with positive bound")
    }

    /// `π E`, the capacity of the Fermi ball (its area when `n = 1`).
    pub fn fermi_area(&self) -> f64 {
        PI * self.fermi_energy()
    }
}
