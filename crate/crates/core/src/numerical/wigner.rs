//! Discrete Wigner transform by FFT over the relative coordinate.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::grid::{GridWavefunction, PhaseSpaceField, UniformAxis};
use crate::error::{Error, Result};

/// Relative size of the imaginary part tolerated before it is discarded.
pub const IMAGINARY_TOL: f64 = 1e-10;

/// Band-limited refinement to twice the resolution: sample `2k` is the
/// original `ψ_k`, sample `2k + 1` the trigonometric interpolant at the midpoint.
pub fn refine_twice(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut planner = FftPlanner::<f64>::new();
    let mut spectrum = samples.to_vec();
    planner.plan_fft_forward(n).process(&mut spectrum);

    let mut padded = vec![Complex64::new(0.0, 0.0); 2 * n];
    let half = n / 2;
    padded[..half].copy_from_slice(&spectrum[..half]);
    padded[2 * n - (n - half - 1)..].copy_from_slice(&spectrum[half + 1..]);
    if n.is_multiple_of(2) {
        // split the Nyquist bin symmetrically
        padded[half] = spectrum[half] * 0.5;
        padded[2 * n - half] = spectrum[half] * 0.5;
    } else {
        padded[half] = spectrum[half];
    }
    planner.plan_fft_inverse(2 * n).process(&mut padded);
    let scale = 1.0 / n as f64;
    padded.iter().map(|c| c * scale).collect()
}

/// `W(x_k, p_m) = (1/2πħ) dy Σ_j e^{−i p_m y_j/ħ} ψ(x_k + y_j/2) ψ*(x_k − y_j/2)`
/// with `y_j = j·dx`, `j ∈ [−K/2, K/2)`, and `p_m = 2πħ m / (K dx)` for
/// `m ∈ [−K/2, K/2)`. Half-step shifts read a band-limited refinement of the samples.
pub fn wigner_transform(psi: &GridWavefunction) -> Result<PhaseSpaceField> {
    let n = psi.len();
    if !n.is_multiple_of(2) {
        return Err(Error::Grid(format!("Wigner transform needs an even sample count, got {n}")));
    }
    let hbar = psi.hbar();
    let dx = psi.dx();
    let fine = refine_twice(psi.samples());
    let half = (n / 2) as isize;
    let at = |idx: isize| -> Complex64 {
        if idx >= 0 && (idx as usize) < fine.len() {
            fine[idx as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    };

    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let prefactor = dx / (2.0 * PI * hbar);

    let rows: Vec<(Vec<f64>, f64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let centre = 2 * k as isize;
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            for j in -half..half {
                let slot = j.rem_euclid(n as isize) as usize;
                let v = at(centre + j) * at(centre - j).conj();
                // j = −K/2 aliases with +K/2: the trapezoid end pair sums to the real part.
                buf[slot] = if j == -half { Complex64::new(v.re, 0.0) } else { v };
            }
            let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(&mut buf, &mut scratch);
            let mut row = vec![0.0; n];
            let mut worst_im = 0.0_f64;
            for (m, value) in buf.iter().enumerate() {
                // reorder so that momenta ascend from −K/2
                let out = (m + n / 2) % n;
                row[out] = prefactor * value.re;
                worst_im = worst_im.max((prefactor * value.im).abs());
            }
            (row, worst_im)
        })
        .collect();

    let mut values = Vec::with_capacity(n * n);
    let mut worst_im = 0.0_f64;
    for (row, im) in rows {
        values.extend(row);
        worst_im = worst_im.max(im);
    }
    let peak = values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if worst_im > IMAGINARY_TOL * peak {
        return Err(Error::NonRealWigner(worst_im / peak));
    }

    let dp = 2.0 * PI * hbar / (n as f64 * dx);
    let x_axis = UniformAxis::new(psi.x_min(), dx, n);
    let p_axis = UniformAxis::new(-(n as f64 / 2.0) * dp, dp, n);
    PhaseSpaceField::new(x_axis, p_axis, values, vec![false; n * n])
}
