//! Finite fields `F_q`, `q = p^r`.
//!
//! An element `c_0 + c_1 y + ... + c_{r-1} y^{r-1}` of `F_p[y]/(modulus)` is stored as
//! its index `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`. Index order is the element order
//! used by every enumeration in the crate.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest field order accepted by [`Field::new`].
pub const DEFAULT_MAX_ORDER: u64 = 1024;

/// An element of a finite field, identified by its index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl core::fmt::Display for Fe {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    // addition table, empty in characteristic 2 where addition is xor
    add: Vec<u16>,
    neg: Vec<u16>,
    // exp has length 2(q-1) so products of logs need no reduction
    exp: Vec<u16>,
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r
    }
}

impl Eq for Field {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn digits(mut idx: u32, p: u32, r: u32) -> Vec<u32> {
    let mut out = vec![0; r as usize];
    for d in out.iter_mut() {
        *d = idx % p;
        idx /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

// product of two residues modulo a monic polynomial over F_p (all vectors constant-first)
fn mul_mod_p(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let r = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * r];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (r..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..r {
            let sub = c * modulus[i] as u64 % p as u64;
            prod[k - r + i] = (prod[k - r + i] + p as u64 - sub) % p as u64;
        }
    }
    prod.truncate(r);
    prod.into_iter().map(|c| c as u32).collect()
}

// trial division by every monic polynomial of degree <= deg/2
fn irreducible_over_prime_field(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = digits(idx as u32, p, d as u32);
            g.push(1);
            if remainder_is_zero(f, &g, p) {
                return false;
            }
        }
    }
    true
}

fn remainder_is_zero(f: &[u32], g: &[u32], p: u32) -> bool {
    let mut rem: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    for k in (dg..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        for i in 0..=dg {
            let sub = c * g[i] as u64 % p as u64;
            rem[k - dg + i] = (rem[k - dg + i] + p as u64 - sub) % p as u64;
        }
    }
    rem[..dg].iter().all(|&c| c == 0)
}

impl Field {
    /// The canonical field of order `p^r`, with the default size bound.
    pub fn new(p: u32, r: u32) -> Result<Field> {
        Self::with_bound(p, r, DEFAULT_MAX_ORDER)
    }

    /// The canonical field of order `p^r` with an explicit bound on `q`.
    pub fn with_bound(p: u32, r: u32, bound: u64) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrime(p));
        }
        let order = (p as u64).checked_pow(r).unwrap_or(u64::MAX);
        if r == 0 || order > bound || order > u16::MAX as u64 {
            return Err(Error::SizeExceeded { order, bound });
        }
        let q = order as u32;

        // smallest monic irreducible, constant coefficient least significant
        let modulus = (0..q)
            .map(|idx| {
                let mut m = digits(idx, p, r);
                m.push(1);
                m
            })
            .find(|m| irreducible_over_prime_field(m, p))
            .expect("an irreducible polynomial of every degree exists");

        let (add, neg) = if p == 2 {
            (Vec::new(), Vec::new())
        } else {
            let mut add = vec![0u16; (q * q) as usize];
            let mut neg = vec![0u16; q as usize];
            for a in 0..q {
                let da = digits(a, p, r);
                let na: Vec<u32> = da.iter().map(|&c| (p - c) % p).collect();
                neg[a as usize] = undigits(&na, p) as u16;
                for b in 0..q {
                    let db = digits(b, p, r);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                    add[(a * q + b) as usize] = undigits(&s, p) as u16;
                }
            }
            (add, neg)
        };

        let n = (q - 1) as usize;
        let mut exp = vec![0u16; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        if q == 2 {
            exp[0] = 1;
            exp[1] = 1;
        } else {
            let gen = (2..q)
                .find(|&g| {
                    let dg = digits(g, p, r);
                    let mut x = dg.clone();
                    let mut order = 1;
                    while undigits(&x, p) != 1 {
                        x = mul_mod_p(&x, &dg, &modulus, p);
                        order += 1;
                    }
                    order == n
                })
                .expect("the multiplicative group is cyclic");
            let dg = digits(gen, p, r);
            let mut x = digits(1, p, r);
            for k in 0..n {
                let idx = undigits(&x, p);
                exp[k] = idx as u16;
                exp[k + n] = idx as u16;
                log[idx as usize] = k as u32;
                x = mul_mod_p(&x, &dg, &modulus, p);
            }
        }
        Ok(Field { p, r, q, modulus, add, neg, exp, log })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn is_even(&self) -> bool {
        self.p == 2
    }

    /// Coefficients over `F_p` of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q as u16).map(Fe)
    }

    /// The element with the given index; panics if out of range.
    pub fn element(&self, idx: u32) -> Fe {
        assert!(idx < self.q, "element index out of range");
        Fe(idx as u16)
    }

    /// Coefficient vector over `F_p` of an element, constant term first.
    pub fn rep(&self, a: Fe) -> Vec<u32> {
        digits(a.0 as u32, self.p, self.r)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u16)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            Fe(a.0 ^ b.0)
        } else {
            Fe(self.add[a.index() * self.q as usize + b.index()])
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            a
        } else {
            Fe(self.neg[a.index()])
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            Fe::ZERO
        } else {
            Fe(self.exp[(self.log[a.index()] + self.log[b.index()]) as usize])
        }
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        let n = self.q - 1;
        Fe(self.exp[((n - self.log[a.index()]) % n) as usize])
    }

    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, e: u128) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let n = (self.q - 1) as u128;
        let k = (self.log[a.index()] as u128 * (e % n)) % n;
        Fe(self.exp[k as usize])
    }

    /// Discrete logarithm to the fixed primitive element, `None` for zero.
    pub fn log(&self, a: Fe) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.index()])
    }

    /// The fixed primitive element.
    pub fn primitive_element(&self) -> Fe {
        Fe(self.exp[1 % self.exp.len()])
    }

    pub fn is_square(&self, a: Fe) -> bool {
        self.p == 2 || a.is_zero() || self.log[a.index()].is_multiple_of(2)
    }

    /// Square root in characteristic 2 (Frobenius is bijective).
    pub fn sqrt_char2(&self, a: Fe) -> Fe {
        debug_assert!(self.p == 2);
        self.pow(a, (self.q / 2) as u128)
    }

    /// Quadratic residue symbol `a^((q-1)/2)` as -1, 0 or 1.
    pub fn residue_symbol(&self, a: Fe) -> Result<i8> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        Ok(match self.pow(a, ((self.q - 1) / 2) as u128) {
            Fe(0) => 0,
            Fe(1) => 1,
            _ => -1,
        })
    }

    /// Absolute trace to `F_p`, returned as an integer in `0..p`.
    pub fn abs_trace(&self, a: Fe) -> u32 {
        let mut acc = Fe::ZERO;
        let mut x = a;
        for _ in 0..self.r {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u128);
        }
        debug_assert!((acc.0 as u32) < self.p);
        acc.0 as u32
    }

    /// `+1` if `Y^2 + Y + a` splits over the field, `-1` otherwise.
    pub fn artin_schreier_symbol(&self, a: Fe) -> Result<i8> {
        if self.p != 2 {
            return Err(Error::OddCharacteristic);
        }
        Ok(if self.abs_trace(a) == 0 { 1 } else { -1 })
    }

    /// The least constant that is not a norm from the quadratic constant extension:
    /// the least nonsquare for odd `q`, the least element of trace 1 for even `q`.
    pub fn nonsplit_constant(&self) -> Fe {
        self.elements()
            .find(|&a| {
                if self.p == 2 {
                    self.abs_trace(a) == 1
                } else {
                    !self.is_square(a)
                }
            })
            .expect("such a constant exists")
    }
}
