#![allow(dead_code)]

use fermi_scope::gaussian::SqueezedState;
use fermi_scope::symplectic_linalg::{SpdMatrix, SquareMatrix, SymmetricMatrix};
use rand::Rng;

/// `X = AᵀA + 0.1 I` and symmetric `Y`, entries of `A` and `Y` uniform in `[−2, 2]`.
pub fn random_state<R: Rng>(rng: &mut R, n: usize, hbar: f64) -> SqueezedState {
    let a: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-2.0..=2.0)).collect();
    let y: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-2.0..=2.0)).collect();
    state_from_entries(n, &a, &y, hbar)
}

/// Builds a state from raw entries; only the upper triangle of `y` is used.
pub fn state_from_entries(n: usize, a: &[f64], y: &[f64], hbar: f64) -> SqueezedState {
    let a = SquareMatrix::from_row_major(n, a.to_vec()).unwrap();
    let mut x = &a.transpose() * &a;
    x = &x + &SquareMatrix::identity(n).scale(0.1);
    let mut sym = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            sym[i * n + j] = y[i * n + j];
            sym[j * n + i] = y[i * n + j];
        }
    }
    let y = SymmetricMatrix::new(SquareMatrix::from_row_major(n, sym).unwrap()).unwrap();
    SqueezedState::new(SpdMatrix::from_square(x).unwrap(), y, hbar).unwrap()
}

/// Random SPD matrix `BᵀB + 0.1 I` of size `dim`.
pub fn random_spd<R: Rng>(rng: &mut R, dim: usize) -> SpdMatrix {
    let b: Vec<f64> = (0..dim * dim).map(|_| rng.gen_range(-2.0..=2.0)).collect();
    let b = SquareMatrix::from_row_major(dim, b).unwrap();
    let m = &(&b.transpose() * &b) + &SquareMatrix::identity(dim).scale(0.1);
    SpdMatrix::from_square(m).unwrap()
}

/// A symplectic matrix built as a product of shears and a block dilation.
pub fn random_symplectic<R: Rng>(rng: &mut R, n: usize) -> SquareMatrix {
    let id = SquareMatrix::identity(n);
    let zero = SquareMatrix::zeros(n);
    let sym = |rng: &mut R| {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let e = rng.gen_range(-1.0..=1.0);
                v[i * n + j] = e;
                v[j * n + i] = e;
            }
        }
        SquareMatrix::from_row_major(n, v).unwrap()
    };
    let upper = SquareMatrix::from_blocks(&id, &sym(rng), &zero, &id).unwrap();
    let lower = SquareMatrix::from_blocks(&id, &zero, &sym(rng), &id).unwrap();
    // diag(L, L^{-T}) with L unit lower triangular
    let mut l = SquareMatrix::identity(n).as_slice().to_vec();
    for i in 0..n {
        for j in 0..i {
            l[i * n + j] = rng.gen_range(-1.0..=1.0);
        }
    }
    let l = SquareMatrix::from_row_major(n, l).unwrap();
    let l_inv_t = unit_lower_inverse(&l).transpose();
    let dil = SquareMatrix::from_blocks(&l, &zero, &zero, &l_inv_t).unwrap();
    &(&upper * &dil) * &lower
}

fn unit_lower_inverse(l: &SquareMatrix) -> SquareMatrix {
    let n = l.dim();
    let mut inv = vec![0.0; n * n];
    for col in 0..n {
        for i in 0..n {
            let mut v = if i == col { 1.0 } else { 0.0 };
            for k in 0..i {
                v -= l[(i, k)] * inv[k * n + col];
            }
            inv[i * n + col] = v;
        }
    }
    SquareMatrix::from_row_major(n, inv).unwrap()
}
