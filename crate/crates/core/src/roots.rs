//! Complex roots of integer polynomials.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};

fn trim(mut a: Vec<i128>) -> Vec<i128> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive(a: Vec<i128>) -> Vec<i128> {
    let g = a.iter().fold(0, |g, &c| gcd_i128(g, c));
    if g <= 1 {
        return a;
    }
    a.into_iter().map(|c| c / g).collect()
}

/// Pseudo-remainder of `a` by `b`, made primitive.
fn prem(a: &[i128], b: &[i128]) -> Result<Vec<i128>> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db];
    while r.len() > db && !r.is_empty() {
        let lr = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = c.checked_mul(lb).ok_or(Error::Overflow)?;
        }
        for (i, &c) in b.iter().enumerate() {
            let t = lr.checked_mul(c).ok_or(Error::Overflow)?;
            r[i + shift] = r[i + shift].checked_sub(t).ok_or(Error::Overflow)?;
        }
        r = trim(r);
        r = primitive(r);
    }
    Ok(r)
}

/// Primitive gcd of two integer polynomials (coefficients low to high).
pub fn gcd_int(a: &[i128], b: &[i128]) -> Result<Vec<i128>> {
    let (mut x, mut y) = (primitive(trim(a.to_vec())), primitive(trim(b.to_vec())));
    if x.len() < y.len() {
        core::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = prem(&x, &y)?;
        x = y;
        y = r;
    }
    let x = primitive(x);
    Ok(if x.last().is_some_and(|&c| c < 0) { x.into_iter().map(|c| -c).collect() } else { x })
}

/// `a / gcd(a, a')`, up to a constant.
pub fn squarefree_part_int(a: &[i128]) -> Result<Vec<i128>> {
    let a = trim(a.to_vec());
    if a.len() <= 2 {
        return Ok(a);
    }
    let da: Vec<i128> = a.iter().enumerate().skip(1).map(|(k, &c)| c * k as i128).collect();
    let g = gcd_int(&a, &da)?;
    if g.len() <= 1 {
        return Ok(a);
    }
    // exact division over Q, carried out with integer pseudo-division
    let dg = g.len() - 1;
    let lg = g[dg];
    let mut rem = a.clone();
    let mut quot = vec![0i128; a.len() - dg];
    for k in (0..quot.len()).rev() {
        // keep rem divisible by lg at the top coefficient
        let top = rem[k + dg];
        if top % lg != 0 {
            for c in rem.iter_mut().chain(quot.iter_mut()) {
                *c = c.checked_mul(lg).ok_or(Error::Overflow)?;
            }
        }
        let c = rem[k + dg] / lg;
        quot[k] = c;
        for (i, &gi) in g.iter().enumerate() {
            rem[k + i] -= c * gi;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    Ok(primitive(trim(quot)))
}

fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| (p * z + c, dp * z + p))
}

/// Roots of a real polynomial (low to high, nonzero leading coefficient) by
/// simultaneous iteration, followed by Newton polishing.
pub fn poly_roots(coeffs: &[f64], max_iter: usize, tol: f64) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c / lead, 0.0)).collect();
    // Cauchy-type radius for the starting circle
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * (radius / (1.0 + k as f64).sqrt())).collect();
    for _ in 0..max_iter {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = eval(&monic, z[i]) / denom;
            z[i] -= step;
            worst = worst.max(step.norm() / z[i].norm().max(1.0));
        }
        if worst < tol {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&monic, *r);
            if dp.norm() == 0.0 {
                break;
            }
            *r -= p / dp;
        }
    }
    z
}
