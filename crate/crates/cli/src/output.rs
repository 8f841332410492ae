use std::io::Write;
use std::path::Path;

use fermi_scope::numerical::{GridWavefunction, PhaseSpaceField, Polyline};
use num_complex::Complex64;
use tempfile::NamedTempFile;

use crate::CliError;

/// Relative tolerance on the spacing of a grid-wavefunction file.
pub const SPACING_TOL: f64 = 1e-9;

/// 17 significant digits.
pub fn number(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `bytes` to a temporary file in the target directory and renames it into place.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.join(name).display()));
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))
            .map_err(io)?;
    }
    tmp.persist(dir.join(name)).map_err(|e| io(e.error))?;
    Ok(())
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for row in rows {
        w.write_record(&row).expect("write to memory");
    }
    w.into_inner().expect("flush to memory")
}

pub fn fermi_field_csv(field: &PhaseSpaceField) -> Vec<u8> {
    let (nx, np) = field.shape();
    let rows = (0..nx).flat_map(move |i| {
        (0..np).map(move |j| {
            let masked = field.is_masked(i, j);
            vec![
                number(field.x_axis.value(i)),
                number(field.p_axis.value(j)),
                if masked { String::new() } else { number(field.value(i, j)) },
                u8::from(masked).to_string(),
            ]
        })
    });
    csv_bytes(&["x", "p", "gF", "masked"], rows)
}

pub fn wigner_field_csv(field: &PhaseSpaceField) -> Vec<u8> {
    let (nx, np) = field.shape();
    let rows = (0..nx).flat_map(move |i| {
        (0..np).map(move |j| {
            vec![
                number(field.x_axis.value(i)),
                number(field.p_axis.value(j)),
                number(field.value(i, j)),
            ]
        })
    });
    csv_bytes(&["x", "p", "W"], rows)
}

/// Contours numbered in order; closed loops repeat their first vertex at the end.
pub fn contours_csv<'a>(lines: impl IntoIterator<Item = &'a Polyline>) -> Vec<u8> {
    let rows = lines.into_iter().enumerate().flat_map(|(id, line)| {
        let mut pts = line.points.clone();
        if line.closed && !pts.is_empty() {
            pts.push(pts[0]);
        }
        pts.into_iter()
            .enumerate()
            .map(move |(k, [x, p])| vec![id.to_string(), k.to_string(), number(x), number(p)])
    });
    csv_bytes(&["contourId", "vertexIndex", "x", "p"], rows)
}

/// Reads `x,re,im` rows with uniform spacing.
pub fn read_grid_file(path: &Path, hbar: f64) -> Result<GridWavefunction, CliError> {
    let field = "state.grid.path";
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Validation(format!("{field}: {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Validation(format!("{field}: {e}")))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["x", "re", "im"] {
        return Err(CliError::Validation(format!("{field}: header must be x,re,im")));
    }
    let mut xs = Vec::new();
    let mut samples = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Validation(format!("{field}: {e}")))?;
        let parse = |i: usize| -> Result<f64, CliError> {
            record[i]
                .parse::<f64>()
                .map_err(|e| CliError::Validation(format!("{field}: row {}: {e}", line + 2)))
        };
        xs.push(parse(0)?);
        samples.push(Complex64::new(parse(1)?, parse(2)?));
    }
    if xs.len() < 2 {
        return Err(CliError::Validation(format!("{field}: need at least two samples")));
    }
    let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    for (k, x) in xs.iter().enumerate() {
        let want = xs[0] + k as f64 * dx;
        if (x - want).abs() > SPACING_TOL * dx.abs() {
            return Err(CliError::Validation(format!(
                "{field}: spacing is not uniform at row {}",
                k + 2
            )));
        }
    }
    GridWavefunction::new(xs[0], dx, samples, hbar).map_err(|e| CliError::from_core(field, e))
}
