//! Exact sums of roots of unity.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

fn mobius(mut n: u32) -> i32 {
    let mut out = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            out = -out;
        }
        d += 1;
    }
    if n > 1 {
        out = -out;
    }
    out
}

fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Remainder of `a` by a monic `m`, and the quotient.
fn divrem_monic(a: &[i64], m: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= dm {
        return (vec![0], r);
    }
    let mut quot = vec![0i64; r.len() - dm];
    for k in (0..quot.len()).rev() {
        let c = r[k + dm];
        quot[k] = c;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                r[k + i] -= c * mi;
            }
        }
    }
    r.truncate(dm);
    (quot, r)
}

/// The `n`-th cyclotomic polynomial, low to high.
pub fn cyclotomic(n: u32) -> Vec<i64> {
    let mut num = vec![1i64];
    let mut den = vec![1i64];
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let mut f = vec![0i64; d as usize + 1];
        f[0] = -1;
        f[d as usize] = 1;
        match mobius(n / d) {
            1 => num = mul(&num, &f),
            -1 => den = mul(&den, &f),
            _ => {}
        }
    }
    divrem_monic(&num, &den).0
}

/// `sum_k c_k zeta_n^k` with integer `c_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloSum {
    n: u32,
    counts: Vec<i64>,
}

impl CycloSum {
    pub fn new(n: u32) -> CycloSum {
        assert!(n > 0);
        CycloSum { n, counts: vec![0; n as usize] }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    /// Adds `c zeta^k`.
    pub fn add_root(&mut self, k: u32, c: i64) {
        self.counts[(k % self.n) as usize] += c;
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// Coordinates in the power basis of `Z[zeta_n]`.
    pub fn reduced(&self) -> Vec<i64> {
        divrem_monic(&self.counts, &cyclotomic(self.n)).1
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&c| c == 0)
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.n as f64;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| Complex64::from_polar(c as f64, 2.0 * PI * k as f64 / n))
            .sum()
    }
}
