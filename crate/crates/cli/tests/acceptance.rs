//! Acceptance suite: one PASS/FAIL line per criterion, then a single assertion
//! that every criterion passed.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use fermi_scope::capacity::{
    capacity_bounds_report, ellipsoid_capacity, fermi_capacity, fermi_ellipsoid, quantum_blob_inside, verify_blob,
    DEFAULT_BLOB_SAMPLES,
};
use fermi_scope::gaussian::SqueezedState;
use fermi_scope::numerical::{
    compare_fermi_wigner, fermi_field, fermi_operator_residual, ray_distance, wigner_transform, zero_contour,
    CompareOptions, GridWavefunction, PolarMode, PolarOptions,
};
use fermi_scope::oscillator::OscillatorEigenstate;
use fermi_scope::symplectic_linalg::{
    is_symplectic, standard_symplectic, symplectic_eigenvalues, SpdMatrix, SquareMatrix, SymmetricMatrix,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SEED: u64 = 0x5eed_f3a1;
const POPULATION: usize = 1000;

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// `X = AᵀA + 0.1 I`, entries of `A` and `Y` uniform in `[−2, 2]`, `n ∈ {1..6}`.
fn population(count: usize, seed: u64) -> Vec<SqueezedState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=6);
            let a: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-2.0..=2.0)).collect();
            let a = SquareMatrix::from_row_major(n, a).unwrap();
            let x = &(&a.transpose() * &a) + &SquareMatrix::identity(n).scale(0.1);
            let mut y = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let v = rng.gen_range(-2.0..=2.0);
                    y[i * n + j] = v;
                    y[j * n + i] = v;
                }
            }
            let y = SymmetricMatrix::new(SquareMatrix::from_row_major(n, y).unwrap()).unwrap();
            SqueezedState::new(SpdMatrix::from_square(x).unwrap(), y, 1.0).unwrap()
        })
        .collect()
}

fn gaussian_grid(state: &SqueezedState, count: usize) -> GridWavefunction {
    let half = 8.0 * state.hbar().sqrt();
    GridWavefunction::sample(-half, 2.0 * half / count as f64, count, state.hbar(), |x| {
        state.evaluate(&[x]).unwrap()
    })
    .unwrap()
}

fn three_gaussians() -> Vec<(&'static str, SqueezedState)> {
    vec![
        ("fiducial", SqueezedState::fiducial(1, 1.0).unwrap()),
        ("X=2,Y=0", SqueezedState::from_rows(&[[2.0]], &[[0.0]], 1.0).unwrap()),
        ("X=2,Y=1", SqueezedState::from_rows(&[[2.0]], &[[1.0]], 1.0).unwrap()),
    ]
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn factorization_identity() -> Outcome {
    let states = population(POPULATION, SEED);
    let start = Instant::now();
    let mut worst_rel = 0.0_f64;
    let mut all_symplectic = true;
    for s in &states {
        let q = s.fermi_quadric().unwrap();
        let f = s.fermi_factorization().unwrap();
        let rebuilt = &(&f.s.transpose() * &*f.d) * &f.s;
        worst_rel = worst_rel.max((&rebuilt - &*q.m_f).norm_inf() / q.m_f.norm_inf());
        all_symplectic &= is_symplectic(&f.s, 1e-10).unwrap();
    }
    let elapsed = start.elapsed();
    outcome(
        worst_rel <= 1e-10 && all_symplectic && elapsed < Duration::from_secs(5),
        format!(
            "worst relative defect {worst_rel:.3e} (≤ 1e-10), all symplectic {all_symplectic}, {:.2}s (< 5s)",
            secs(elapsed)
        ),
    )
}

fn wigner_fermi_identity() -> Outcome {
    let states = population(POPULATION, SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for s in &states {
        let dim = 2 * s.dof();
        let radius = 4.0 * s.hbar().sqrt();
        let points: Vec<Vec<f64>> = (0..100)
            .map(|_| {
                // uniform direction, radius uniform in [0, 4√ħ]
                let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
                let r = radius * rng.gen_range(0.0..=1.0);
                v.iter().map(|c| c * r / norm).collect()
            })
            .collect();
        worst = worst.max(s.wigner_fermi_identity_residual(&points).unwrap());
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-10 && elapsed < Duration::from_secs(10),
        format!("worst relative residual {worst:.3e} (≤ 1e-10), {:.2}s (< 10s)", secs(elapsed)),
    )
}

fn capacity_bounds() -> Outcome {
    let states = population(POPULATION, SEED);
    let mut worst_agree = 0.0_f64;
    let mut bounded = true;
    for s in &states {
        let c = fermi_capacity(s);
        let e = ellipsoid_capacity(&fermi_ellipsoid(s).unwrap()).unwrap();
        worst_agree = worst_agree.max((c - e).abs() / e);
        let n = s.dof() as f64;
        bounded &= PI * s.hbar() - 1e-9 <= c && c <= n * PI * s.hbar() + 1e-9;
        bounded &= capacity_bounds_report(s).within_bounds;
    }
    let mut upper_eq = 0.0_f64;
    for n in 1..=6 {
        let s = SqueezedState::fiducial(n, 1.0).unwrap();
        upper_eq = upper_eq.max((fermi_capacity(&s) - n as f64 * PI).abs());
    }
    let mut single_eq = 0.0_f64;
    for s in states.iter().filter(|s| s.dof() == 1) {
        let r = capacity_bounds_report(s);
        single_eq = single_eq.max((r.capacity - r.lower).abs()).max((r.capacity - r.upper).abs());
    }
    outcome(
        worst_agree <= 1e-9 && bounded && upper_eq <= 1e-9 && single_eq <= 1e-9,
        format!(
            "closed form vs ellipsoid {worst_agree:.3e} (≤ 1e-9), bounds hold {bounded}, \
             X=I upper equality {upper_eq:.3e}, n=1 equality {single_eq:.3e}"
        ),
    )
}

fn blob_containment() -> Outcome {
    let states = population(POPULATION, SEED);
    let mut worst_g = f64::NEG_INFINITY;
    let mut worst_cap = 0.0_f64;
    for s in &states {
        let blob = quantum_blob_inside(s).unwrap();
        let check = verify_blob(s, &blob, DEFAULT_BLOB_SAMPLES).unwrap();
        worst_g = worst_g.max(check.max_fermi_value);
        worst_cap = worst_cap.max((check.blob_capacity - PI * s.hbar()).abs());
    }
    outcome(
        worst_g <= 1e-10 && worst_cap <= 1e-9,
        format!("max g_F on blob boundaries {worst_g:.3e} (≤ 1e-10), blob capacity error {worst_cap:.3e} (≤ 1e-9)"),
    )
}

fn oscillator_geometry() -> Outcome {
    let mut area_err = 0.0_f64;
    for n in 0..=10 {
        let s = OscillatorEigenstate::new(vec![n], 1.0).unwrap();
        area_err = area_err.max((s.fermi_area() - (2 * n + 1) as f64 * PI).abs());
    }
    let count = 2048;
    let half = 10.0;
    let dx = 2.0 * half / count as f64;
    let mut details = Vec::new();
    let mut pass = area_err <= 1e-12;
    for n in 0..=3 {
        let s = OscillatorEigenstate::new(vec![n], 1.0).unwrap();
        let psi = GridWavefunction::sample_real(-half, dx, count, 1.0, |x| s.value(&[x]).unwrap()).unwrap();
        let radius = ((2 * n + 1) as f64).sqrt();
        let p_max = radius + 1.5;
        let field = fermi_field(&psi, -p_max, p_max, 481, &PolarOptions::with_mode(PolarMode::Auto)).unwrap();
        let lines = zero_contour(&field, 0.0);
        let tol = 2.0 * dx.max(field.p_axis.step);
        let (mut sum, mut hits) = (0.0, 0usize);
        for a in 0..720 {
            let theta = 2.0 * PI * (a as f64 + 0.5) / 720.0;
            if let Some(r) = ray_distance(&lines, [0.0, 0.0], theta) {
                sum += (r - radius).abs();
                hits += 1;
            }
        }
        let mean = if hits > 0 { sum / hits as f64 } else { f64::INFINITY };
        pass &= mean <= tol && hits >= 600;
        details.push(format!("N={n}: {mean:.2e}/{tol:.2e} ({hits} rays)"));
    }
    outcome(pass, format!("closed-form area error {area_err:.1e}; mean radial error {}", details.join(", ")))
}

fn operator_residual() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for (name, s) in three_gaussians() {
        let residuals: Vec<f64> = [1024, 2048, 4096, 8192]
            .iter()
            .map(|&k| fermi_operator_residual(&gaussian_grid(&s, k), &PolarOptions::default()).unwrap().relative)
            .collect();
        let ratios: Vec<f64> = residuals.windows(2).map(|w| w[0] / w[1]).collect();
        pass &= residuals[0] <= 1e-3 && ratios.iter().all(|r| (r - 4.0).abs() <= 0.8);
        details.push(format!(
            "{name}: {:.3e} at K=1024, ratios {}",
            residuals[0],
            ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join("/")
        ));
    }
    outcome(pass, details.join("; "))
}

fn discrete_wigner() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();
    for (name, s) in three_gaussians() {
        let count = 1024;
        let w = wigner_transform(&gaussian_grid(&s, count)).unwrap();
        let mut worst = 0.0_f64;
        for i in count / 4..3 * count / 4 {
            for j in 0..count {
                let z = [w.x_axis.value(i), w.p_axis.value(j)];
                worst = worst.max((w.value(i, j) - s.wigner_value(&z).unwrap()).abs());
            }
        }
        let tol = 1e-6 / (PI * s.hbar());
        pass &= worst <= tol;
        details.push(format!("{name}: {worst:.3e}"));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(30);
    outcome(
        pass,
        format!("max deviation {} (≤ 1e-6/πħ), {:.2}s (< 30s)", details.join(", "), secs(elapsed)),
    )
}

fn level_set_coincidence() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for (name, s) in three_gaussians() {
        let psi = gaussian_grid(&s, 1024);
        let mut opts = CompareOptions::new(vec![(-1.0_f64).exp()], -4.0, 4.0, 401);
        opts.predicted_fraction = Some((-s.trace_x()).exp());
        let report = compare_fermi_wigner(&psi, &opts).unwrap();
        let tol = 2.0 * report.spacing;
        let dist = report.predicted.as_ref().unwrap().mean_radial_distance.unwrap_or(f64::INFINITY);
        pass &= dist <= tol;
        details.push(format!(
            "{name}: {dist:.3e}/{tol:.3e} at e^-TrX (e^-1 level: {:.3e})",
            report.levels[0].mean_radial_distance.unwrap_or(f64::NAN)
        ));
    }
    outcome(pass, details.join("; "))
}

fn symplectic_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut worst = 0.0_f64;
    for trial in 0..200 {
        let n = 1 + trial % 3;
        let dim = 2 * n;
        let b: Vec<f64> = (0..dim * dim).map(|_| rng.gen_range(-2.0..=2.0)).collect();
        let b = SquareMatrix::from_row_major(dim, b).unwrap();
        let m = SpdMatrix::from_square(&(&b.transpose() * &b) + &SquareMatrix::identity(dim).scale(0.1)).unwrap();
        let jm = &standard_symplectic(n) * &*m;
        let dense = DMatrix::from_row_slice(dim, dim, jm.as_slice());
        let mut moduli: Vec<f64> = dense.complex_eigenvalues().iter().map(|c| c.im.abs()).collect();
        moduli.sort_by(|a, b| b.total_cmp(a));
        let want: Vec<f64> = moduli.into_iter().step_by(2).collect();
        let got = symplectic_eigenvalues(&m).unwrap();
        for (g, w) in got.iter().zip(&want) {
            worst = worst.max((g - w).abs());
        }
    }
    let mut diag_worst = 0.0_f64;
    for s in population(200, SEED ^ 10).iter().filter(|s| s.dof() <= 3) {
        let n = s.dof();
        let zero = SquareMatrix::zeros(n);
        let m = SpdMatrix::from_square(SquareMatrix::from_blocks(s.x(), &zero, &zero, s.x()).unwrap()).unwrap();
        let got = symplectic_eigenvalues(&m).unwrap();
        let mut want = s.x().eigenvalues().to_vec();
        want.reverse();
        for (g, w) in got.iter().zip(&want) {
            diag_worst = diag_worst.max((g - w).abs());
        }
    }
    outcome(
        worst <= 1e-8 && diag_worst <= 1e-10,
        format!("vs complex eigensolve of JM {worst:.3e} (≤ 1e-8), diag(X, X) {diag_worst:.3e} (≤ 1e-10)"),
    )
}

fn run_cli(command: &str, config: &str, out: &Path) -> (i32, String) {
    let dir = out.parent().unwrap();
    let cfg = dir.join(format!("{command}.json"));
    std::fs::write(&cfg, config).unwrap();
    let output = Process::new(env!("CARGO_BIN_EXE_fermi-scope"))
        .args([command, "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(out)
        .output()
        .unwrap();
    (output.status.code().unwrap_or(-1), String::from_utf8(output.stdout).unwrap())
}

fn close(v: &Value, key: &str, want: f64) -> bool {
    v[key].as_f64().is_some_and(|x| (x - want).abs() <= 1e-9)
}

fn csv_ok(path: &Path, header: &[&str]) -> bool {
    let Ok(text) = std::fs::read_to_string(path) else {
        return false;
    };
    let mut lines = text.lines();
    if lines.next() != Some(header.join(",").as_str()) || text.contains('\r') {
        return false;
    }
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() || fields.iter().any(|f| f.parse::<f64>().is_err()) {
            return false;
        }
        rows += 1;
    }
    rows > 0
}

fn svg_ok(path: &Path) -> bool {
    std::fs::read_to_string(path).is_ok_and(|s| {
        s.starts_with("<svg") && s.trim_end().ends_with("</svg>") && s.contains(r#"width="800" height="800""#)
    })
}

fn cli_contract() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let mut notes = Vec::new();

    let (code, stdout) = run_cli("capacity", r#"{"state":{"squeezed":{"n":1,"X":[[1]],"Y":[[0]]}},"hbar":1}"#, &out);
    let v: Value = serde_json::from_str(stdout.trim()).unwrap_or(Value::Null);
    let capacity_ok = code == 0
        && stdout.trim().lines().count() == 1
        && close(&v, "capacity", PI)
        && close(&v, "lower", PI)
        && close(&v, "upper", PI)
        && v["withinBounds"] == Value::Bool(true);
    notes.push(format!("capacity {capacity_ok}"));

    let (code, stdout) = run_cli("oscillator", r#"{"state":{"oscillator":{"indices":[1]}},"hbar":1}"#, &out);
    let v: Value = serde_json::from_str(stdout.trim()).unwrap_or(Value::Null);
    let oscillator_ok = code == 0 && close(&v, "fermiArea", 3.0 * PI);
    notes.push(format!("oscillator {oscillator_ok}"));

    let compare_cfg = r#"{"state":{"squeezed":{"n":1,"X":[[1]],"Y":[[0]]}},"hbar":1,
        "grid":{"xMin":-8,"xMax":8,"xCount":512,"pMin":-4,"pMax":4,"pCount":201},
        "wignerLevelFractions":[0.5,0.36787944117144233,0.1]}"#;
    let (code, stdout) = run_cli("compare", compare_cfg, &out);
    let files_ok = code == 0
        && serde_json::from_str::<Value>(stdout.trim()).is_ok()
        && csv_ok(&out.join("fermi_contour.csv"), &["contourId", "vertexIndex", "x", "p"])
        && csv_ok(&out.join("wigner_contours.csv"), &["contourId", "vertexIndex", "x", "p"])
        && svg_ok(&out.join("compare.svg"));
    notes.push(format!("compare files {files_ok}"));

    let first: Vec<Vec<u8>> = ["fermi_contour.csv", "wigner_contours.csv", "compare.svg"]
        .iter()
        .map(|f| std::fs::read(out.join(f)).unwrap_or_default())
        .collect();
    let again = tmp.path().join("again");
    let (_, stdout_again) = run_cli("compare", compare_cfg, &again);
    let identical = stdout_again == stdout
        && ["fermi_contour.csv", "wigner_contours.csv", "compare.svg"]
            .iter()
            .zip(&first)
            .all(|(f, bytes)| std::fs::read(again.join(f)).is_ok_and(|b| &b == bytes));
    notes.push(format!("rerun byte-identical {identical}"));

    outcome(capacity_ok && oscillator_ok && files_ok && identical, notes.join(", "))
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check); 10] = [
        ("1 factorization identity", factorization_identity),
        ("2 Wigner-Fermi identity", wigner_fermi_identity),
        ("3 capacity formula and bounds", capacity_bounds),
        ("4 blob containment", blob_containment),
        ("5 oscillator geometry", oscillator_geometry),
        ("6 operator residual and convergence", operator_residual),
        ("7 discrete Wigner vs closed form", discrete_wigner),
        ("8 level-set coincidence", level_set_coincidence),
        ("9 symplectic-eigenvalue oracle", symplectic_oracle),
        ("10 CLI contract", cli_contract),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let o = check();
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
