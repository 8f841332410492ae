//! Fermi zero-contour against Wigner level sets.

use std::f64::consts::PI;

use super::contour::{ray_distance, zero_contour, Polyline};
use super::fermi::fermi_field;
use super::grid::{GridWavefunction, PhaseSpaceField, PolarOptions};
use super::wigner::wigner_transform;
use crate::error::{Error, Result};

/// Number of rays used for the radial metrics.
pub const DEFAULT_ANGLES: usize = 720;

#[derive(Clone, Debug)]
pub struct CompareOptions {
    /// Levels as fractions of the Wigner peak, each in `(0, 1)`.
    pub fractions: Vec<f64>,
    pub p_min: f64,
    pub p_max: f64,
    pub p_count: usize,
    pub polar: PolarOptions,
    pub angles: usize,
    /// Extra level at which the two curves are expected to coincide, if known.
    pub predicted_fraction: Option<f64>,
}

impl CompareOptions {
    pub fn new(fractions: Vec<f64>, p_min: f64, p_max: f64, p_count: usize) -> Self {
        Self {
            fractions,
            p_min,
            p_max,
            p_count,
            polar: PolarOptions::default(),
            angles: DEFAULT_ANGLES,
            predicted_fraction: None,
        }
    }
}

/// One Wigner level set measured against the Fermi contour.
#[derive(Clone, Debug)]
pub struct LevelComparison {
    pub fraction: f64,
    pub level: f64,
    pub contours: Vec<Polyline>,
    /// Mean over rays from the centroid of `|r_W(θ) − r_F(θ)|`.
    pub mean_radial_distance: Option<f64>,
    /// `Σ ½|r_W² − r_F²| Δθ` over the same rays.
    pub symmetric_area_difference: Option<f64>,
    /// Shoelace area of the largest Wigner contour.
    pub enclosed_area: f64,
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub fermi_field: PhaseSpaceField,
    pub wigner_field: PhaseSpaceField,
    pub fermi_contours: Vec<Polyline>,
    /// Shoelace area of the largest Fermi contour.
    pub fermi_area: f64,
    pub wigner_peak: f64,
    pub centroid: [f64; 2],
    /// `max(dx, dp_Fermi, dp_Wigner)`.
    pub spacing: f64,
    pub levels: Vec<LevelComparison>,
    pub predicted: Option<LevelComparison>,
    /// Mean of `W/W_max` over the Fermi contour vertices.
    pub fermi_surface_wigner_fraction: Option<f64>,
}

fn largest_area(lines: &[Polyline]) -> f64 {
    lines.iter().map(Polyline::area).fold(0.0, f64::max)
}

/// Computes both fields, the Fermi zero-contour and the Wigner contours at
/// each requested fraction of the Wigner peak, with radial metrics about the
/// Wigner centroid.
pub fn compare_fermi_wigner(psi: &GridWavefunction, options: &CompareOptions) -> Result<ComparisonReport> {
    let all_fractions = options.fractions.iter().chain(options.predicted_fraction.iter());
    for &f in all_fractions {
        if !(f > 0.0 && f < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Wigner level fractions must lie in (0, 1), got {f}"
            )));
        }
    }
    if options.angles < 8 {
        return Err(Error::InvalidParameter("need at least 8 rays".into()));
    }

    let fermi = fermi_field(psi, options.p_min, options.p_max, options.p_count, &options.polar)?;
    let wigner = wigner_transform(psi)?;
    let fermi_contours = zero_contour(&fermi, 0.0);

    let (wigner_peak, _, _) = wigner.max_unmasked().expect("unmasked Wigner field");
    let centroid = centroid(&wigner);
    let spacing = psi.dx().max(fermi.p_axis.step).max(wigner.p_axis.step);

    let fermi_radii: Vec<Option<f64>> = (0..options.angles)
        .map(|a| ray_distance(&fermi_contours, centroid, angle(a, options.angles)))
        .collect();

    let measure = |fraction: f64| -> LevelComparison {
        let level = fraction * wigner_peak;
        let contours = zero_contour(&wigner, level);
        let dtheta = 2.0 * PI / options.angles as f64;
        let mut sum = 0.0;
        let mut area = 0.0;
        let mut hits = 0usize;
        for (a, rf) in fermi_radii.iter().enumerate() {
            let (Some(rf), Some(rw)) = (rf, ray_distance(&contours, centroid, angle(a, options.angles))) else {
                continue;
            };
            sum += (rw - rf).abs();
            area += 0.5 * (rw * rw - rf * rf).abs() * dtheta;
            hits += 1;
        }
        LevelComparison {
            fraction,
            level,
            mean_radial_distance: (hits > 0).then(|| sum / hits as f64),
            symmetric_area_difference: (hits == options.angles).then_some(area),
            enclosed_area: largest_area(&contours),
            contours,
        }
    };

    let levels = options.fractions.iter().map(|&f| measure(f)).collect();
    let predicted = options.predicted_fraction.map(measure);

    let samples: Vec<f64> = fermi_contours
        .iter()
        .flat_map(|l| l.points.iter())
        .filter_map(|&[x, p]| wigner.interpolate(x, p))
        .collect();
    let fermi_surface_wigner_fraction =
        (!samples.is_empty()).then(|| samples.iter().sum::<f64>() / samples.len() as f64 / wigner_peak);

    Ok(ComparisonReport {
        fermi_area: largest_area(&fermi_contours),
        fermi_field: fermi,
        wigner_field: wigner,
        fermi_contours,
        wigner_peak,
        centroid,
        spacing,
        levels,
        predicted,
        fermi_surface_wigner_fraction,
    })
}

fn angle(a: usize, count: usize) -> f64 {
    2.0 * PI * (a as f64 + 0.5) / count as f64
}

/// First moments of the field divided by its integral.
fn centroid(field: &PhaseSpaceField) -> [f64; 2] {
    let (nx, np) = field.shape();
    let (mut total, mut mx, mut mp) = (0.0, 0.0, 0.0);
    for i in 0..nx {
        let x = field.x_axis.value(i);
        for j in 0..np {
            if field.is_masked(i, j) {
                continue;
            }
            let v = field.value(i, j);
            total += v;
            mx += v * x;
            mp += v * field.p_axis.value(j);
        }
    }
    if total.abs() < f64::MIN_POSITIVE {
        return [0.0, 0.0];
    }
    [mx / total, mp / total]
}
