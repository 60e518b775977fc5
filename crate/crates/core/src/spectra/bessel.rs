//! Integer-order Bessel functions `J_n` and the positive zeros of `J_n`
//! and `J_n′`.
//!
//! Values come from Miller's backward recurrence normalised by
//! `J₀ + 2ΣJ_{2k} = 1`, which is accurate to a few ulps of `max_k |J_k(x)|`
//! for every order at once. Zeros are bracketed on a fixed grid in `x` and
//! refined by bisection.

use rayon::prelude::*;

use crate::error::{Error, Result};

const RESCALE_ABOVE: f64 = 1e250;

/// `J_0(x), …, J_{n_max+1}(x)` for `x ≥ 0`.
pub fn bessel_j_orders(n_max: usize, x: f64) -> Vec<f64> {
    let len = n_max + 2;
    if x == 0.0 {
        let mut out = vec![0.0; len];
        out[0] = 1.0;
        return out;
    }
    let top = (n_max + 1).max(x.ceil() as usize);
    let mut start = top + (40.0 * top as f64).sqrt() as usize + 20;
    if start % 2 == 1 {
        start += 1;
    }
    let mut j = vec![0.0f64; start + 2];
    j[start] = 1e-300;
    let two_over_x = 2.0 / x;
    for k in (1..=start).rev() {
        j[k - 1] = k as f64 * two_over_x * j[k] - j[k + 1];
        if j[k - 1].abs() > RESCALE_ABOVE {
            for v in &mut j[k - 1..] {
                *v /= RESCALE_ABOVE;
            }
        }
    }
    let mut norm = j[0];
    for k in (2..=start).step_by(2) {
        norm += 2.0 * j[k];
    }
    j.truncate(len);
    for v in &mut j {
        *v /= norm;
    }
    j
}

pub fn bessel_j(n: usize, x: f64) -> f64 {
    bessel_j_orders(n, x.abs())[n] * if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 }
}

/// `J_n′(x) = (J_{n−1}(x) − J_{n+1}(x)) / 2`, with `J₀′ = −J₁`.
pub fn bessel_j_prime(n: usize, x: f64) -> f64 {
    let j = bessel_j_orders(n, x);
    prime_from(&j, n)
}

fn prime_from(j: &[f64], n: usize) -> f64 {
    if n == 0 {
        -j[1]
    } else {
        0.5 * (j[n - 1] - j[n + 1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroKind {
    /// Zeros of `J_n`.
    Value,
    /// Zeros of `J_n′`, excluding the one at the origin.
    Derivative,
}

fn eval(kind: ZeroKind, n: usize, x: f64) -> f64 {
    match kind {
        ZeroKind::Value => bessel_j(n, x),
        ZeroKind::Derivative => bessel_j_prime(n, x),
    }
}

const GRID_STEP: f64 = 0.1;
const STEPS_PER_UNIT: usize = 10;

fn grid_point(i: usize, x_max: f64) -> f64 {
    (i as f64 * GRID_STEP).min(x_max)
}

/// First grid index at or below `x = n`; no zero of order `n` lies below it.
fn first_index(n: usize) -> usize {
    (n * STEPS_PER_UNIT).max(1)
}

/// Positive zeros of `J_n` or `J_n′` in `(0, x_max]` for every order
/// `n ≥ 0` that has one, as `(n, zeros ascending)` ordered by `n`.
///
/// Uses `j_{n,1} > n` and `j′_{n,1} > n` (`n ≥ 1`): orders above `x_max`
/// contribute nothing. Output is independent of thread scheduling.
pub fn bessel_zeros_all_orders(kind: ZeroKind, x_max: f64) -> Result<Vec<(usize, Vec<f64>)>> {
    if !(x_max > 0.0) || !x_max.is_finite() {
        return Err(Error::InvalidParameter(format!("x_max must be positive, got {x_max}")));
    }
    let n_max = x_max.floor() as usize;
    let steps = (x_max / GRID_STEP).ceil() as usize;
    let grid: Vec<f64> = (1..=steps).map(|i| grid_point(i, x_max)).collect();
    // one recurrence per grid point gives every order
    let table: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&x| {
            let j = bessel_j_orders(n_max + 1, x);
            (0..=n_max)
                .map(|n| match kind {
                    ZeroKind::Value => j[n],
                    ZeroKind::Derivative => prime_from(&j, n),
                })
                .collect()
        })
        .collect();

    (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut zeros = Vec::new();
            let first = first_index(n) - 1;
            for i in first..grid.len().saturating_sub(1) {
                let (fa, fb) = (table[i][n], table[i + 1][n]);
                if fa == 0.0 {
                    zeros.push(grid[i]);
                } else if fa * fb < 0.0 {
                    zeros.push(bisect(kind, n, grid[i], grid[i + 1], fa)?);
                }
            }
            if let Some(&last) = table.last().map(|row| &row[n]) {
                if last == 0.0 {
                    zeros.push(*grid.last().expect("nonempty grid"));
                }
            }
            Ok((n, zeros))
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().filter(|(_, z)| !z.is_empty()).collect())
}

/// Zeros of a single order in `(0, x_max]`.
pub fn bessel_zeros(kind: ZeroKind, n: usize, x_max: f64) -> Result<Vec<f64>> {
    if !(x_max > 0.0) {
        return Err(Error::InvalidParameter(format!("x_max must be positive, got {x_max}")));
    }
    let steps = (x_max / GRID_STEP).ceil() as usize;
    let mut zeros = Vec::new();
    let mut i = first_index(n);
    if i > steps {
        return Ok(zeros);
    }
    let mut a = grid_point(i, x_max);
    let mut fa = eval(kind, n, a);
    while i < steps {
        let b = grid_point(i + 1, x_max);
        let fb = eval(kind, n, b);
        if fa == 0.0 {
            zeros.push(a);
        } else if fa * fb < 0.0 {
            zeros.push(bisect(kind, n, a, b, fa)?);
        }
        i += 1;
        a = b;
        fa = fb;
    }
    if fa == 0.0 {
        zeros.push(a);
    }
    Ok(zeros)
}

fn bisect(kind: ZeroKind, n: usize, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    if !(fa * eval(kind, n, b) < 0.0) {
        return Err(Error::RootBracketing { order: n });
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b || (b - a) <= 1e-15 * b {
            break;
        }
        let fm = eval(kind, n, mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}
