use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Minimum number of samples on a wavefunction grid.
pub const MIN_SAMPLES: usize = 16;

/// Relative node threshold: samples with `|ψ| < threshold · max|ψ|` are nodes.
pub const DEFAULT_NODE_THRESHOLD: f64 = 1e-6;

/// Relative size of `Im ψ` below which a wavefunction counts as real.
pub const REALNESS_TOL: f64 = 1e-10;

/// Boundary samples are expected to decay below this fraction of the peak.
pub const BOUNDARY_DECAY: f64 = 1e-6;

/// Complex samples `ψ(x_min + k·dx)`, `k = 0..K`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridWavefunction {
    x_min: f64,
    dx: f64,
    samples: Vec<Complex64>,
    hbar: f64,
}

impl GridWavefunction {
    pub fn new(x_min: f64, dx: f64, samples: Vec<Complex64>, hbar: f64) -> Result<Self> {
        if samples.len() < MIN_SAMPLES {
            return Err(Error::Grid(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                samples.len()
            )));
        }
        if !(dx > 0.0 && dx.is_finite()) || !x_min.is_finite() {
            return Err(Error::Grid(format!("invalid grid origin {x_min} / spacing {dx}")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "hbar must be positive and finite, got {hbar}"
            )));
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::NonFinite("wavefunction samples"));
        }
        if samples.iter().all(|s| s.norm() == 0.0) {
            return Err(Error::EmptyWavefunction);
        }
        Ok(Self {
            x_min,
            dx,
            samples,
            hbar,
        })
    }

    /// Samples `f` at `x_min + k·dx` for `k < count`.
    pub fn sample(
        x_min: f64,
        dx: f64,
        count: usize,
        hbar: f64,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        let samples = (0..count).map(|k| f(x_min + k as f64 * dx)).collect();
        Self::new(x_min, dx, samples, hbar)
    }

    /// Samples a real function.
    pub fn sample_real(
        x_min: f64,
        dx: f64,
        count: usize,
        hbar: f64,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        Self::sample(x_min, dx, count, hbar, |x| Complex64::new(f(x), 0.0))
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x_min + k as f64 * self.dx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.x(k)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    /// `Σ|ψ_k|² dx`.
    pub fn norm_squared(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * self.dx
    }

    /// Larger of the two end-sample moduli relative to the peak.
    pub fn boundary_ratio(&self) -> f64 {
        let first = self.samples[0].norm();
        let last = self.samples[self.len() - 1].norm();
        first.max(last) / self.max_abs()
    }

    /// True when both ends have decayed below [`BOUNDARY_DECAY`] of the peak.
    pub fn boundary_decays(&self) -> bool {
        self.boundary_ratio() <= BOUNDARY_DECAY
    }

    /// True when `max|Im ψ| ≤ REALNESS_TOL · max|ψ|`.
    pub fn is_real(&self) -> bool {
        let im = self.samples.iter().map(|s| s.im.abs()).fold(0.0, f64::max);
        im <= REALNESS_TOL * self.max_abs()
    }
}

/// How the amplitude `R` is extracted from the samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PolarMode {
    /// `R = |ψ|`, `Φ = ħ arg ψ` unwrapped.
    #[default]
    Modulus,
    /// `R = Re ψ` (may change sign), `Φ ≡ 0`; requires a real wavefunction.
    SignedReal,
    /// `SignedReal` for real wavefunctions, `Modulus` otherwise.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarOptions {
    pub mode: PolarMode,
    pub node_threshold: f64,
}

impl Default for PolarOptions {
    fn default() -> Self {
        Self {
            mode: PolarMode::Modulus,
            node_threshold: DEFAULT_NODE_THRESHOLD,
        }
    }
}

impl PolarOptions {
    pub fn with_mode(mode: PolarMode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }
}

/// `ψ = R e^{iΦ/ħ}` on the grid. `phi` is zero at nodes and is unwrapped
/// along each run of non-node samples.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarFields {
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
    pub node_mask: Vec<bool>,
    /// The mode actually used (never `Auto`).
    pub mode: PolarMode,
}

pub fn polar_decompose(psi: &GridWavefunction, options: &PolarOptions) -> Result<PolarFields> {
    if !(options.node_threshold >= 0.0 && options.node_threshold < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "node threshold must lie in [0, 1), got {}",
            options.node_threshold
        )));
    }
    let peak = psi.max_abs();
    if peak == 0.0 {
        return Err(Error::EmptyWavefunction);
    }
    let cutoff = options.node_threshold * peak;
    let node_mask: Vec<bool> = psi.samples.iter().map(|s| s.norm() < cutoff).collect();

    let mode = match options.mode {
        PolarMode::Auto if psi.is_real() => PolarMode::SignedReal,
        PolarMode::Auto => PolarMode::Modulus,
        PolarMode::SignedReal if !psi.is_real() => {
            return Err(Error::InvalidParameter(
                "signed-real decomposition needs a real wavefunction".into(),
            ))
        }
        m => m,
    };

    if mode == PolarMode::SignedReal {
        return Ok(PolarFields {
            r: psi.samples.iter().map(|s| s.re).collect(),
            phi: vec![0.0; psi.len()],
            node_mask,
            mode,
        });
    }

    let mut phi = vec![0.0; psi.len()];
    let mut k = 0;
    while k < psi.len() {
        if node_mask[k] {
            k += 1;
            continue;
        }
        let start = k;
        let mut unwrapped = psi.samples[k].arg();
        let mut previous = unwrapped;
        while k < psi.len() && !node_mask[k] {
            let raw = psi.samples[k].arg();
            if k > start {
                unwrapped += wrap_angle(raw - previous);
            }
            phi[k] = unwrapped;
            previous = raw;
            k += 1;
        }
        // Each run keeps the principal branch at its largest sample.
        let anchor = (start..k)
            .max_by(|&a, &b| psi.samples[a].norm().total_cmp(&psi.samples[b].norm()))
            .expect("nonempty run");
        let shift = psi.samples[anchor].arg() - phi[anchor];
        for v in &mut phi[start..k] {
            *v = psi.hbar * (*v + shift);
        }
    }
    Ok(PolarFields {
        r: psi.samples.iter().map(|s| s.norm()).collect(),
        phi,
        node_mask,
        mode,
    })
}

/// Maps an angle to `(−π, π]`.
fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Uniform grid `start + i·step`, `i < len`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformAxis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl UniformAxis {
    pub fn new(start: f64, step: f64, len: usize) -> Self {
        Self { start, step, len }
    }

    /// `count` points from `min` to `max` inclusive.
    pub fn spanning(min: f64, max: f64, count: usize) -> Result<Self> {
        if count < 2 || !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(Error::Grid(format!(
                "axis needs max > min and at least two points, got [{min}, {max}] with {count}"
            )));
        }
        Ok(Self::new(min, (max - min) / (count - 1) as f64, count))
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.value(i)).collect()
    }

    pub fn end(&self) -> f64 {
        self.value(self.len - 1)
    }

    /// Fractional index of `v`.
    pub fn position(&self, v: f64) -> f64 {
        (v - self.start) / self.step
    }
}

/// Real field sampled on an `(x, p)` grid, stored x-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpaceField {
    pub x_axis: UniformAxis,
    pub p_axis: UniformAxis,
    values: Vec<f64>,
    masked: Vec<bool>,
}

impl PhaseSpaceField {
    pub fn new(
        x_axis: UniformAxis,
        p_axis: UniformAxis,
        values: Vec<f64>,
        masked: Vec<bool>,
    ) -> Result<Self> {
        let cells = x_axis.len * p_axis.len;
        if values.len() != cells || masked.len() != cells {
            return Err(Error::Dimension(format!(
                "field of {}x{} needs {cells} values and mask entries, got {} and {}",
                x_axis.len,
                p_axis.len,
                values.len(),
                masked.len()
            )));
        }
        Ok(Self {
            x_axis,
            p_axis,
            values,
            masked,
        })
    }

    /// Evaluates `f(x, p)` on every grid cell.
    pub fn from_fn(x_axis: UniformAxis, p_axis: UniformAxis, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(x_axis.len * p_axis.len);
        for i in 0..x_axis.len {
            let x = x_axis.value(i);
            for j in 0..p_axis.len {
                values.push(f(x, p_axis.value(j)));
            }
        }
        let masked = values.iter().map(|v: &f64| !v.is_finite()).collect();
        Self {
            x_axis,
            p_axis,
            values,
            masked,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.x_axis.len, self.p_axis.len)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.p_axis.len + j]
    }

    pub fn is_masked(&self, i: usize, j: usize) -> bool {
        self.masked[i * self.p_axis.len + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.masked
    }

    pub fn masked_fraction(&self) -> f64 {
        self.masked.iter().filter(|&&m| m).count() as f64 / self.masked.len() as f64
    }

    /// Largest unmasked value with its `(x, p)` location.
    pub fn max_unmasked(&self) -> Option<(f64, f64, f64)> {
        let mut best: Option<(f64, f64, f64)> = None;
        for i in 0..self.x_axis.len {
            for j in 0..self.p_axis.len {
                if self.is_masked(i, j) {
                    continue;
                }
                let v = self.value(i, j);
                if best.is_none_or(|(b, _, _)| v > b) {
                    best = Some((v, self.x_axis.value(i), self.p_axis.value(j)));
                }
            }
        }
        best
    }

    /// `ΣΣ value · dx · dp` over unmasked cells.
    pub fn integral(&self) -> f64 {
        let sum: f64 = self
            .values
            .iter()
            .zip(&self.masked)
            .filter(|(_, &m)| !m)
            .map(|(v, _)| v)
            .sum();
        sum * self.x_axis.step * self.p_axis.step
    }

    /// Bilinear interpolation; `None` outside the grid or next to a masked cell.
    pub fn interpolate(&self, x: f64, p: f64) -> Option<f64> {
        let fx = self.x_axis.position(x);
        let fp = self.p_axis.position(p);
        if !(fx >= 0.0 && fp >= 0.0) {
            return None;
        }
        let i = (fx.floor() as usize).min(self.x_axis.len.saturating_sub(2));
        let j = (fp.floor() as usize).min(self.p_axis.len.saturating_sub(2));
        if i + 1 >= self.x_axis.len || j + 1 >= self.p_axis.len || fx > (i + 1) as f64 || fp > (j + 1) as f64 {
            return None;
        }
        let corners = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)];
        if corners.iter().any(|&(a, b)| self.is_masked(a, b)) {
            return None;
        }
        let tx = fx - i as f64;
        let tp = fp - j as f64;
        Some(
            (1.0 - tx) * (1.0 - tp) * self.value(i, j)
                + tx * (1.0 - tp) * self.value(i + 1, j)
                + (1.0 - tx) * tp * self.value(i, j + 1)
                + tx * tp * self.value(i + 1, j + 1),
        )
    }

    /// Restricts the p-axis to the cells inside `[p_min, p_max]`.
    pub fn crop_p(&self, p_min: f64, p_max: f64) -> Result<Self> {
        let first = (0..self.p_axis.len).find(|&j| self.p_axis.value(j) >= p_min);
        let last = (0..self.p_axis.len).rev().find(|&j| self.p_axis.value(j) <= p_max);
        let (first, last) = match (first, last) {
            (Some(a), Some(b)) if b > a => (a, b),
            _ => {
                return Err(Error::Grid(format!(
                    "p window [{p_min}, {p_max}] holds fewer than two grid points"
                )))
            }
        };
        let p_axis = UniformAxis::new(self.p_axis.value(first), self.p_axis.step, last - first + 1);
        let mut values = Vec::with_capacity(self.x_axis.len * p_axis.len);
        let mut masked = Vec::with_capacity(values.capacity());
        for i in 0..self.x_axis.len {
            for j in first..=last {
                values.push(self.value(i, j));
                masked.push(self.is_masked(i, j));
            }
        }
        Self::new(self.x_axis, p_axis, values, masked)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(x_coeff: f64, y_coeff: f64) -> GridWavefunction {
        GridWavefunction::sample(-8.0, 16.0 / 256.0, 256, 1.0, |x| {
            (Complex64::new(-x_coeff, -y_coeff) * x * x / 2.0).exp()
        })
        .unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            GridWavefunction::new(0.0, 0.1, vec![Complex64::new(1.0, 0.0); 8], 1.0),
            Err(Error::Grid(_))
        ));
        assert!(matches!(
            GridWavefunction::new(0.0, 0.1, vec![Complex64::new(0.0, 0.0); 32], 1.0),
            Err(Error::EmptyWavefunction)
        ));
        assert!(GridWavefunction::new(0.0, -0.1, vec![Complex64::new(1.0, 0.0); 32], 1.0).is_err());
        assert!(GridWavefunction::new(0.0, 0.1, vec![Complex64::new(f64::NAN, 0.0); 32], 1.0).is_err());
    }

    #[test]
    fn fiducial_decomposition_is_real_positive() {
        let psi = gaussian(1.0, 0.0);
        let f = polar_decompose(&psi, &PolarOptions::default()).unwrap();
        assert!(f.phi.iter().all(|&p| p == 0.0));
        assert!(f.r.iter().all(|&r| r >= 0.0));
        let center = f.r[128];
        assert_eq!(center, 1.0);
        assert!(psi.boundary_decays());
        // tails beyond ~5.3 are below the node threshold
        assert!(f.node_mask[0] && f.node_mask[255] && !f.node_mask[128]);
    }

    #[test]
    fn chirped_phase_is_unwrapped() {
        let psi = gaussian(1.0, 1.0);
        let f = polar_decompose(&psi, &PolarOptions::default()).unwrap();
        for k in 0..psi.len() {
            if f.node_mask[k] {
                continue;
            }
            let x = psi.x(k);
            assert!((f.phi[k] + 0.5 * x * x).abs() < 1e-10, "x = {x}");
            let back = f.r[k] * Complex64::new(0.0, f.phi[k] / psi.hbar()).exp();
            assert!((back - psi.samples()[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn signed_mode_keeps_sign_changes() {
        let dx = 16.0 / 256.0;
        let psi = GridWavefunction::sample_real(-8.0, dx, 256, 1.0, |x| 2.0 * x * (-x * x / 2.0).exp())
            .unwrap();
        let f = polar_decompose(&psi, &PolarOptions::with_mode(PolarMode::SignedReal)).unwrap();
        assert!(f.r[100] < 0.0 && f.r[150] > 0.0);
        assert!(f.node_mask[128]);
        let auto = polar_decompose(&psi, &PolarOptions::with_mode(PolarMode::Auto)).unwrap();
        assert_eq!(auto.mode, PolarMode::SignedReal);
        let chirp = gaussian(1.0, 1.0);
        assert!(polar_decompose(&chirp, &PolarOptions::with_mode(PolarMode::SignedReal)).is_err());
        let auto = polar_decompose(&chirp, &PolarOptions::with_mode(PolarMode::Auto)).unwrap();
        assert_eq!(auto.mode, PolarMode::Modulus);
    }

    #[test]
    fn wrap_angle_range() {
        for a in [-7.0, -PI, 0.0, 3.0, PI, 10.0] {
            let w = wrap_angle(a);
            assert!(w > -PI - 1e-15 && w <= PI + 1e-15);
            assert!(((a - w) / (2.0 * PI)).fract().abs() < 1e-12 || ((a - w) / (2.0 * PI)).fract().abs() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn field_interpolation_and_crop() {
        let xa = UniformAxis::spanning(-1.0, 1.0, 21).unwrap();
        let pa = UniformAxis::spanning(-2.0, 2.0, 41).unwrap();
        let f = PhaseSpaceField::from_fn(xa, pa, |x, p| 3.0 * x - p + 0.5);
        let v = f.interpolate(0.123, -0.77).unwrap();
        assert!((v - (3.0 * 0.123 + 0.77 + 0.5)).abs() < 1e-12);
        assert!(f.interpolate(1.5, 0.0).is_none());
        let c = f.crop_p(-0.5, 0.5).unwrap();
        assert_eq!(c.p_axis.len, 11);
        assert!((c.p_axis.start + 0.5).abs() < 1e-12);
        assert_eq!(c.value(3, 0), f.value(3, 15));
        assert!(f.crop_p(5.0, 6.0).is_err());
    }
}
