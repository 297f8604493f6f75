#![allow(dead_code)]

use pencil_core::field::{Field, FieldElement as Fe};
use pencil_core::linalg::{ExactMatrix, Matrix};
use pencil_core::pencil::Pencil;
use rand::Rng;

pub fn fe(n: i64) -> Fe {
    Fe::from_i64(n)
}

pub fn ints<const N: usize>(rows: &[[i64; N]]) -> ExactMatrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| fe(v)).collect()).collect())
}

pub fn random_invertible<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> ExactMatrix {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| fe(rng.gen_range(lo..=hi)));
        if !num_traits::Zero::is_zero(&m.det()) {
            return m;
        }
    }
}

/// Diagonal entries `(s, t)` with pairwise distinct ratios `t_i : s_i`.
pub fn distinct_diagonal<R: Rng>(rng: &mut R, n: usize, range: i64, nonzero: bool) -> (Vec<i64>, Vec<i64>) {
    loop {
        let s: Vec<i64> = (0..n).map(|_| rng.gen_range(-range..=range)).collect();
        let t: Vec<i64> = (0..n).map(|_| rng.gen_range(-range..=range)).collect();
        if nonzero && s.iter().chain(&t).any(|&v| v == 0) {
            continue;
        }
        if s.iter().zip(&t).any(|(&a, &b)| a == 0 && b == 0) {
            continue;
        }
        if (0..n).all(|i| (i + 1..n).all(|j| s[i] * t[j] != s[j] * t[i])) {
            return (s, t);
        }
    }
}

pub fn diagonal_pencil(s: &[i64], t: &[i64]) -> Pencil {
    let v = |x: &[i64]| x.iter().map(|&k| fe(k)).collect::<Vec<_>>();
    Pencil::diagonal(&v(s), &v(t))
}

/// The pencil with `A = P₀ᵗP₀` and `B = P₀ᵗ(0 ⊕ [[1,1],[1,−1]])P₀`, which
/// splits over `ℚ(√2)` and no smaller field.
pub fn sqrt_two_pencil() -> Pencil {
    let p0 = ints(&[[1, 1, 0], [0, 1, 1], [0, 0, 1]]);
    let a = p0.transpose().mul(&p0);
    let b = p0.transpose().mul(&ints(&[[0, 0, 0], [0, 1, 1], [0, 1, -1]])).mul(&p0);
    Pencil::new(a, b).unwrap()
}
