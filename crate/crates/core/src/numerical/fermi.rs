//! Finite-difference Fermi function of a sampled wavefunction.
//!
//! All derivatives are second-order: centred in the interior, one-sided at
//! the ends of the grid or of an unmasked run.

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{polar_decompose, GridWavefunction, PhaseSpaceField, PolarFields, PolarMode, PolarOptions, UniformAxis};
use crate::error::{Error, Result};

/// Minimum number of momentum samples in a Fermi field.
pub const MIN_P_SAMPLES: usize = 16;

/// Compact second difference, one-sided (four-point) at the ends.
fn second_difference(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    let h2 = dx * dx;
    (0..n)
        .map(|k| {
            if k == 0 {
                (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2
            } else if k == n - 1 {
                (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2
            } else {
                (f[k + 1] - 2.0 * f[k] + f[k - 1]) / h2
            }
        })
        .collect()
}

/// Centred first difference with one-sided ends, for complex samples.
fn first_difference(f: &[Complex64], dx: f64) -> Vec<Complex64> {
    let n = f.len();
    (0..n)
        .map(|k| {
            if k == 0 {
                (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx)
            } else if k == n - 1 {
                (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx)
            } else {
                (f[k + 1] - f[k - 1]) / (2.0 * dx)
            }
        })
        .collect()
}

/// First derivative of a field that is only defined where `mask` is false.
fn masked_first_difference(f: &[f64], mask: &[bool], dx: f64) -> Vec<Option<f64>> {
    let n = f.len();
    let ok = |k: isize| k >= 0 && (k as usize) < n && !mask[k as usize];
    (0..n as isize)
        .map(|k| {
            if !ok(k) {
                return None;
            }
            let at = |j: isize| f[j as usize];
            if ok(k - 1) && ok(k + 1) {
                Some((at(k + 1) - at(k - 1)) / (2.0 * dx))
            } else if ok(k + 1) && ok(k + 2) {
                Some((-3.0 * at(k) + 4.0 * at(k + 1) - at(k + 2)) / (2.0 * dx))
            } else if ok(k - 1) && ok(k - 2) {
                Some((3.0 * at(k) - 4.0 * at(k - 1) + at(k - 2)) / (2.0 * dx))
            } else {
                None
            }
        })
        .collect()
}

/// `ħ² R''/R` at every grid point; `None` at nodes.
pub fn quantum_potential_term(fields: &PolarFields, dx: f64, hbar: f64) -> Vec<Option<f64>> {
    let d2 = second_difference(&fields.r, dx);
    fields
        .r
        .iter()
        .zip(&d2)
        .zip(&fields.node_mask)
        .map(|((&r, &d), &node)| {
            let q = hbar * hbar * d / r;
            (!node && r != 0.0 && q.is_finite()).then_some(q)
        })
        .collect()
}

/// Bohmian quantum potential `Q = −(ħ²/2m) R''/R`.
pub fn bohm_potential(fields: &PolarFields, dx: f64, hbar: f64, mass: f64) -> Vec<Option<f64>> {
    quantum_potential_term(fields, dx, hbar)
        .into_iter()
        .map(|t| t.map(|t| -t / (2.0 * mass)))
        .collect()
}

/// `Φ'` on the grid; identically zero in signed-real mode.
pub fn phase_gradient(fields: &PolarFields, dx: f64) -> Vec<Option<f64>> {
    if fields.mode == PolarMode::SignedReal {
        return vec![Some(0.0); fields.phi.len()];
    }
    masked_first_difference(&fields.phi, &fields.node_mask, dx)
}

/// `g_F(x_k, p_m) = (p_m − Φ'(x_k))² + ħ²R''/R(x_k)` on the sample grid
/// times `p_count` momenta spanning `[p_min, p_max]`.
pub fn fermi_field(
    psi: &GridWavefunction,
    p_min: f64,
    p_max: f64,
    p_count: usize,
    options: &PolarOptions,
) -> Result<PhaseSpaceField> {
    if p_count < MIN_P_SAMPLES {
        return Err(Error::Grid(format!(
            "need at least {MIN_P_SAMPLES} momentum samples, got {p_count}"
        )));
    }
    let p_axis = UniformAxis::spanning(p_min, p_max, p_count)?;
    let x_axis = UniformAxis::new(psi.x_min(), psi.dx(), psi.len());
    let fields = polar_decompose(psi, options)?;
    let q = quantum_potential_term(&fields, psi.dx(), psi.hbar());
    let grad = phase_gradient(&fields, psi.dx());

    let rows: Vec<(Vec<f64>, Vec<bool>)> = (0..psi.len())
        .into_par_iter()
        .map(|k| match (q[k], grad[k]) {
            (Some(qk), Some(gk)) => {
                let values = (0..p_count)
                    .map(|m| {
                        let d = p_axis.value(m) - gk;
                        d * d + qk
                    })
                    .collect();
                (values, vec![false; p_count])
            }
            _ => (vec![0.0; p_count], vec![true; p_count]),
        })
        .collect();

    let mut values = Vec::with_capacity(psi.len() * p_count);
    let mut masked = Vec::with_capacity(psi.len() * p_count);
    for (v, m) in rows {
        values.extend(v);
        masked.extend(m);
    }
    PhaseSpaceField::new(x_axis, p_axis, values, masked)
}

/// Discrete action of the Fermi operator on the samples.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorResidual {
    /// `‖ĝ_F ψ‖₂ / ‖ψ‖₂` with `ĝ_F = (−iħ∂ − Φ')² + ħ²R''/R`.
    pub relative: f64,
    /// `‖(−ħ²∂² + ħ²R''/R) R‖₂ / ‖R‖₂`, the gauge-transformed real form.
    pub trivial_relative: f64,
    /// `(ĝ_F ψ)_k`, `None` where undefined.
    pub pointwise: Vec<Option<Complex64>>,
    pub points: usize,
}

/// Applies the Fermi operator to the samples.
///
/// The first-order factor `−iħ∂ − Φ'` is applied twice with centred first
/// differences, while `R''` inside the quantum term uses the compact second
/// difference; the two stencils differ at `O(dx²)`.
pub fn fermi_operator_residual(psi: &GridWavefunction, options: &PolarOptions) -> Result<OperatorResidual> {
    let n = psi.len();
    let dx = psi.dx();
    let hbar = psi.hbar();
    let fields = polar_decompose(psi, options)?;
    let q = quantum_potential_term(&fields, dx, hbar);
    let grad = phase_gradient(&fields, dx);
    let i_hbar = Complex64::new(0.0, hbar);

    let samples = psi.samples();
    let d_psi = first_difference(samples, dx);
    let u: Vec<Option<Complex64>> = (0..n)
        .map(|k| grad[k].map(|g| -i_hbar * d_psi[k] - g * samples[k]))
        .collect();

    let mut pointwise = vec![None; n];
    let mut num = 0.0;
    let mut den = 0.0;
    let mut points = 0;
    for k in 1..n - 1 {
        let (Some(um), Some(uk), Some(up), Some(g), Some(qk)) = (u[k - 1], u[k], u[k + 1], grad[k], q[k]) else {
            continue;
        };
        let du = (up - um) / (2.0 * dx);
        let v = -i_hbar * du - g * uk + qk * samples[k];
        pointwise[k] = Some(v);
        num += v.norm_sqr();
        den += samples[k].norm_sqr();
        points += 1;
    }
    if points == 0 {
        return Err(Error::Grid("no grid point where the Fermi operator is defined".into()));
    }

    let d2r = second_difference(&fields.r, dx);
    let mut t_num = 0.0;
    let mut t_den = 0.0;
    for k in 0..n {
        if let Some(qk) = q[k] {
            let t = -hbar * hbar * d2r[k] + qk * fields.r[k];
            t_num += t * t;
            t_den += fields.r[k] * fields.r[k];
        }
    }

    Ok(OperatorResidual {
        relative: (num / den).sqrt(),
        trivial_relative: (t_num / t_den).sqrt(),
        pointwise,
        points,
    })
}
