//! Bessel function of the first kind, order one.

use core::f64::consts::FRAC_PI_4;

use libm::{cos, sin, sqrt};

/// First positive zero of `J1`.
pub const J1_FIRST_ZERO: f64 = 3.831_705_970_207_512_5;

const SERIES_LIMIT: f64 = 12.0;

/// `J1(x)`.
///
/// Power series up to `|x| = 12`, Hankel asymptotic expansion beyond.
/// Absolute error below 1e-12 on `[0, 12]` and below 1e-10 beyond.
pub fn j1(x: f64) -> f64 {
    if x < 0.0 {
        return -j1(-x);
    }
    if x <= SERIES_LIMIT {
        series(x)
    } else {
        asymptotic(x)
    }
}

fn series(x: f64) -> f64 {
    // sum_k (-1)^k (x/2)^(2k+1) / (k! (k+1)!)
    let h = 0.5 * x;
    let q = h * h;
    let mut term = h;
    let mut sum = h;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -q / (k * (k + 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) && k > 2.0 {
            return sum;
        }
        if k > 80.0 {
            return sum;
        }
    }
}

fn asymptotic(x: f64) -> f64 {
    // mu = 4 n^2 with n = 1
    const MU: f64 = 4.0;
    let z = 8.0 * x;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    let mut k = 1.0f64;
    let mut prev = f64::INFINITY;
    loop {
        let odd = 2.0 * k - 1.0;
        term *= (MU - odd * odd) / (k * z);
        if term.abs() >= prev || term.abs() < 1e-17 {
            break;
        }
        prev = term.abs();
        if (k as u32) % 2 == 1 {
            q += if (k as u32) % 4 == 1 { term } else { -term };
        } else {
            p += if (k as u32) % 4 == 2 { -term } else { term };
        }
        k += 1.0;
        if k > 40.0 {
            break;
        }
    }
    let chi = x - 3.0 * FRAC_PI_4;
    sqrt(2.0 / (core::f64::consts::PI * x)) * (p * cos(chi) - q * sin(chi))
}
