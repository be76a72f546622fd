//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use monopole_core::HalfInt;
use num_complex::Complex64;

/// `d^j(β) = exp(-iβ J_y)` in the basis `m = j, j-1, ..., -j`, by
/// scaling-and-squaring of a Taylor series. `-i J_y = -(J_+ - J_-)/2` is
/// real, so the whole computation is real.
pub fn small_d_matrix(j: HalfInt, beta: f64) -> Vec<Vec<f64>> {
    let dim = (j.twice() + 1) as usize;
    let jf = j.to_f64();
    let mut gen = vec![vec![0.0; dim]; dim];
    for col in 0..dim {
        let m = jf - col as f64;
        // <m+1| J_+ |m>
        if col > 0 {
            gen[col - 1][col] -= 0.5 * ((jf - m) * (jf + m + 1.0)).sqrt();
        }
        // <m-1| J_- |m>
        if col + 1 < dim {
            gen[col + 1][col] += 0.5 * ((jf + m) * (jf - m + 1.0)).sqrt();
        }
    }
    let squarings = 12;
    let scale = beta / f64::from(1u32 << squarings);
    let a: Vec<Vec<f64>> = gen
        .iter()
        .map(|r| r.iter().map(|x| x * scale).collect())
        .collect();
    let mut result = identity(dim);
    let mut term = identity(dim);
    for k in 1..30 {
        term = matmul(&term, &a);
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                *x /= k as f64;
            }
        }
        for (r, t) in result.iter_mut().zip(&term) {
            for (x, y) in r.iter_mut().zip(t) {
                *x += y;
            }
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

/// `d^j_{m1 m2}(β)` read off [`small_d_matrix`].
pub fn small_d(j: HalfInt, m1: HalfInt, m2: HalfInt, beta: f64) -> f64 {
    let row = ((j - m1).twice() / 2) as usize;
    let col = ((j - m2).twice() / 2) as usize;
    small_d_matrix(j, beta)[row][col]
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|k| if i == k { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| (0..n).map(|l| a[i][l] * b[l][k]).sum())
                .collect()
        })
        .collect()
}

/// Condon-Shortley `Y_l^m` from the three-term Legendre recurrence.
pub fn standard_ylm(l: i64, m: i64, theta: f64, phi: f64) -> Complex64 {
    if m < 0 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        return standard_ylm(l, -m, theta, phi).conj() * sign;
    }
    let x = theta.cos();
    let s = theta.sin();
    // P_m^m = (-1)^m (2m-1)!! s^m
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= -((2 * k - 1) as f64) * s;
    }
    let plm = if l == m {
        pmm
    } else {
        let mut p_prev = pmm;
        let mut p = x * (2 * m + 1) as f64 * pmm;
        for ll in (m + 2)..=l {
            let next =
                ((2 * ll - 1) as f64 * x * p - (ll + m - 1) as f64 * p_prev) / (ll - m) as f64;
            p_prev = p;
            p = next;
        }
        p
    };
    let ratio: f64 = ((l - m + 1)..=(l + m)).map(|k| k as f64).product();
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) / ratio).sqrt();
    Complex64::from_polar(norm * plm, m as f64 * phi)
}

/// Least-squares `κ` in `y ≈ κ x`, and the largest residual.
pub fn fit_proportional(x: &[f64], y: &[f64]) -> (f64, f64) {
    let kappa =
        x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / x.iter().map(|a| a * a).sum::<f64>();
    let resid = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - kappa * a).abs())
        .fold(0.0, f64::max);
    (kappa, resid)
}

pub fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

/// Every `j <= j_max` (doubled values), starting at `j_min`.
pub fn js(twice_min: i64, twice_max: i64) -> impl Iterator<Item = HalfInt> {
    (twice_min..=twice_max).step_by(2).map(HalfInt::from_twice)
}
