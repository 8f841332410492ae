//! Symplectic capacities of phase-space ellipsoids, the Fermi ellipsoid of a
//! squeezed state and the quantum blob it contains.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gaussian::SqueezedState;
use crate::symplectic_linalg::{
    is_symplectic, symplectic_eigenvalues, symplectic_inverse, SpdMatrix, SquareMatrix,
};

/// Absolute slack on the `πħ ≤ c ≤ nπħ` check.
pub const BOUND_TOL: f64 = 1e-9;

/// Default number of sphere directions used to check blob containment.
pub const DEFAULT_BLOB_SAMPLES: usize = 1000;

/// The set `{z : shape·(z − center)·(z − center) ≤ bound}`.
#[derive(Clone, Debug)]
pub struct PhaseSpaceEllipsoid {
    center: Vec<f64>,
    shape: SpdMatrix,
    bound: f64,
}

impl PhaseSpaceEllipsoid {
    pub fn new(center: Vec<f64>, shape: SpdMatrix, bound: f64) -> Result<Self> {
        if !shape.dim().is_multiple_of(2) {
            return Err(Error::Dimension(format!(
                "ellipsoid shape must be 2n×2n, got {}",
                shape.dim()
            )));
        }
        if center.len() != shape.dim() {
            return Err(Error::Dimension(format!(
                "center has length {}, shape is {}x{}",
                center.len(),
                shape.dim(),
                shape.dim()
            )));
        }
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ellipsoid bound must be positive, got {bound}"
            )));
        }
        Ok(Self {
            center,
            shape,
            bound,
        })
    }

    pub fn centered(shape: SpdMatrix, bound: f64) -> Result<Self> {
        let dim = shape.dim();
        Self::new(vec![0.0; dim], shape, bound)
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn shape(&self) -> &SpdMatrix {
        &self.shape
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// `shape·(z − center)·(z − center) − bound`; nonpositive inside.
    pub fn level(&self, z: &[f64]) -> Result<f64> {
        if z.len() != self.center.len() {
            return Err(Error::Dimension(format!(
                "point has length {}, expected {}",
                z.len(),
                self.center.len()
            )));
        }
        let d: Vec<f64> = z.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        Ok(self.shape.quadratic_form(&d)? - self.bound)
    }

    pub fn contains(&self, z: &[f64]) -> Result<bool> {
        Ok(self.level(z)? <= 0.0)
    }

    /// Symplectic capacity `π · bound / λ^σ_max(shape)`.
    pub fn capacity(&self) -> Result<f64> {
        let lambda_max = symplectic_eigenvalues(&self.shape)?[0];
        Ok(PI * self.bound / lambda_max)
    }

    /// Image under `z ↦ Tz` for an invertible `T`.
    pub fn transformed(&self, t: &SquareMatrix) -> Result<Self> {
        let inv = invert(t)?;
        let shape = SpdMatrix::from_square(&(&inv.transpose() * &*self.shape) * &inv)?;
        Self::new(t.mul_vec(&self.center)?, shape, self.bound)
    }
}

fn invert(t: &SquareMatrix) -> Result<SquareMatrix> {
    if t.dim().is_multiple_of(2) && is_symplectic(t, 1e-9 * t.norm_inf().max(1.0).powi(2))? {
        return symplectic_inverse(t);
    }
    // General case through the SPD normal matrix: T⁻¹ = (TᵀT)⁻¹Tᵀ.
    let normal = SpdMatrix::from_square(&t.transpose() * t)?;
    Ok(&*normal.inverse() * &t.transpose())
}

/// Capacity of an ellipsoid; the center is irrelevant.
pub fn ellipsoid_capacity(e: &PhaseSpaceEllipsoid) -> Result<f64> {
    e.capacity()
}

/// The region `g_F ≤ 0`, i.e. `M_F z·z ≤ ħ Tr X`.
pub fn fermi_ellipsoid(state: &SqueezedState) -> Result<PhaseSpaceEllipsoid> {
    let q = state.fermi_quadric()?;
    PhaseSpaceEllipsoid::centered(q.m_f, q.constant)
}

/// Closed-form capacity `πħ Tr X / λ_max(X)` of the Fermi ellipsoid.
pub fn fermi_capacity(state: &SqueezedState) -> f64 {
    PI * state.hbar() * state.trace_x() / state.x().max_eigenvalue()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapacityBounds {
    pub capacity: f64,
    pub lower: f64,
    pub upper: f64,
    pub within_bounds: bool,
}

/// Compares the Fermi capacity with `h/2 = πħ` and `nh/2 = nπħ`.
pub fn capacity_bounds_report(state: &SqueezedState) -> CapacityBounds {
    let capacity = fermi_capacity(state);
    let lower = PI * state.hbar();
    let upper = state.dof() as f64 * lower;
    CapacityBounds {
        capacity,
        lower,
        upper,
        within_bounds: lower - BOUND_TOL <= capacity && capacity <= upper + BOUND_TOL,
    }
}

/// Image of the phase-space ball `B(center, radius)` under a symplectic map.
#[derive(Clone, Debug)]
pub struct QuantumBlob {
    pub symplectic: SquareMatrix,
    pub center: Vec<f64>,
    pub radius: f64,
}

impl QuantumBlob {
    pub fn new(symplectic: SquareMatrix, center: Vec<f64>, hbar: f64) -> Result<Self> {
        if !is_symplectic(&symplectic, 1e-9 * symplectic.norm_inf().max(1.0).powi(2))? {
            return Err(Error::InvalidParameter(
                "quantum blob map is not symplectic".into(),
            ));
        }
        if center.len() != symplectic.dim() {
            return Err(Error::Dimension("blob center length".into()));
        }
        Ok(Self {
            symplectic,
            center,
            radius: hbar.sqrt(),
        })
    }

    /// The blob as an ellipsoid: `(S⁻¹)ᵀS⁻¹ (z − c)·(z − c) ≤ ħ`, `c = S·center`.
    pub fn ellipsoid(&self) -> Result<PhaseSpaceEllipsoid> {
        let dim = self.symplectic.dim();
        let ball = PhaseSpaceEllipsoid::new(
            self.center.clone(),
            SpdMatrix::identity(dim),
            self.radius * self.radius,
        )?;
        ball.transformed(&self.symplectic)
    }

    pub fn capacity(&self) -> Result<f64> {
        self.ellipsoid()?.capacity()
    }

    /// Images of `count` deterministic points on the boundary sphere.
    pub fn boundary_points(&self, count: usize) -> Result<Vec<Vec<f64>>> {
        let dim = self.symplectic.dim();
        sphere_directions(dim, count)
            .into_iter()
            .map(|u| {
                let b: Vec<f64> = u
                    .iter()
                    .zip(&self.center)
                    .map(|(ui, ci)| ci + self.radius * ui)
                    .collect();
                self.symplectic.mul_vec(&b)
            })
            .collect()
    }
}

/// The blob `S⁻¹ B(0, √ħ)` with `S` the symplectic factor of `M_F`.
pub fn quantum_blob_inside(state: &SqueezedState) -> Result<QuantumBlob> {
    let f = state.fermi_factorization()?;
    let s_inv = symplectic_inverse(&f.s)?;
    QuantumBlob::new(s_inv, vec![0.0; 2 * state.dof()], state.hbar())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlobCheck {
    /// Largest `g_F` over the sampled blob boundary; containment means `≤ 0`.
    pub max_fermi_value: f64,
    pub blob_capacity: f64,
    pub samples: usize,
}

/// Samples the blob boundary and evaluates `g_F` there.
pub fn verify_blob(state: &SqueezedState, blob: &QuantumBlob, samples: usize) -> Result<BlobCheck> {
    let mut max_fermi_value = f64::NEG_INFINITY;
    for z in blob.boundary_points(samples)? {
        max_fermi_value = max_fermi_value.max(state.fermi_value(&z)?);
    }
    Ok(BlobCheck {
        max_fermi_value,
        blob_capacity: blob.capacity()?,
        samples,
    })
}

/// Deterministic, roughly uniform unit vectors in `R^dim`.
///
/// On the circle these are equally spaced angles. In higher dimension the
/// points come from an additive recurrence with the generalized golden ratio
/// of order `dim` (the `R_d` lattice), pushed to Gaussian coordinates by
/// Box–Muller pairs and normalized.
pub fn sphere_directions(dim: usize, count: usize) -> Vec<Vec<f64>> {
    assert!(dim >= 1, "sphere dimension");
    if dim == 1 {
        return (0..count).map(|i| vec![if i % 2 == 0 { 1.0 } else { -1.0 }]).collect();
    }
    if dim == 2 {
        return (0..count)
            .map(|i| {
                let t = 2.0 * PI * (i as f64 + 0.5) / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
    }
    let pairs = dim.div_ceil(2);
    let width = 2 * pairs;
    // phi_d solves x^{d+1} = x + 1
    let mut phi = 2.0_f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (width as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=width).map(|k| (1.0 / phi.powi(k as i32)).fract()).collect();
    (0..count)
        .map(|i| {
            let mut g = Vec::with_capacity(width);
            for pair in 0..pairs {
                let u1 = (0.5 + alpha[2 * pair] * (i as f64 + 1.0)).fract();
                let u2 = (0.5 + alpha[2 * pair + 1] * (i as f64 + 1.0)).fract();
                let r = (-2.0 * (1.0 - u1).ln()).sqrt();
                let t = 2.0 * PI * u2;
                g.push(r * t.cos());
                g.push(r * t.sin());
            }
            g.truncate(dim);
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            g.into_iter().map(|v| v / norm).collect()
        })
        .collect()
}
