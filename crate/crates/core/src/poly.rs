//! Dense univariate polynomials over `F_q`, with factorization.
//!
//! Arithmetic lives on [`Field`] so that polynomials stay plain coefficient vectors.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// A polynomial in `x`, coefficients low to high, without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Fe>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Fe::ONE)
    }

    pub fn constant(c: Fe) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// The monic polynomial `x`.
    pub fn x() -> Poly {
        Poly { coeffs: vec![Fe::ZERO, Fe::ONE] }
    }

    /// `c x^k`.
    pub fn monomial(c: Fe, k: usize) -> Poly {
        let mut coeffs = vec![Fe::ZERO; k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Fe::ONE]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn coeff(&self, k: usize) -> Fe {
        self.coeffs.get(k).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fe::ONE
    }

    /// Coefficients read as a base-`q` integer, constant term least significant.
    pub fn index(&self, q: u32) -> u128 {
        self.coeffs.iter().rev().fold(0u128, |acc, c| acc * q as u128 + c.0 as u128)
    }

    /// Inverse of [`Poly::index`].
    pub fn from_index(mut idx: u128, q: u32) -> Poly {
        let mut coeffs = Vec::new();
        while idx > 0 {
            coeffs.push(Fe((idx % q as u128) as u16));
            idx /= q as u128;
        }
        Poly { coeffs }
    }

    /// The monic polynomial of degree `d` whose lower coefficients have index `idx`.
    pub fn monic_from_index(idx: u128, d: usize, q: u32) -> Poly {
        let mut coeffs = Poly::from_index(idx, q).coeffs;
        coeffs.resize(d, Fe::ZERO);
        coeffs.push(Fe::ONE);
        Poly { coeffs }
    }
}

/// Ordered by degree, then by the base-`q` index.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Writes terms from the top down, e.g. `x^3+2*x+1`; coefficients print as indices.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c.0) {
                (0, _) => write!(f, "{c}")?,
                (_, 1) => write!(f, "x")?,
                _ => write!(f, "{c}*x")?,
            }
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

fn parse_err(s: &str) -> Error {
    Error::Parse(String::from("bad polynomial: ") + s)
}

/// Number of monic irreducible polynomials of degree `d` over `F_q`.
pub fn count_irreducibles(q: u64, d: u32) -> u64 {
    let mut total: i128 = 0;
    for e in 1..=d {
        if d.is_multiple_of(e) {
            total += mobius_int((d / e) as u64) as i128 * (q as i128).pow(e);
        }
    }
    (total / d as i128) as u64
}

pub(crate) fn mobius_int(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    pub fn parse_poly(&self, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(parse_err(s));
        }
        let mut acc = Poly::zero();
        for term in s.split('+') {
            let term = term.trim();
            let (coef, power) = match term.find('x') {
                None => (term, 0usize),
                Some(pos) => {
                    let head = &term[..pos];
                    let tail = &term[pos + 1..];
                    let coef = if head.is_empty() {
                        "1"
                    } else {
                        head.strip_suffix('*').ok_or_else(|| parse_err(s))?
                    };
                    let power = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| parse_err(s))?
                    };
                    (coef, power)
                }
            };
            let c: u32 = coef.parse().map_err(|_| parse_err(s))?;
            if c >= self.order() {
                return Err(parse_err(s));
            }
            acc = self.poly_add(&acc, &Poly::monomial(Fe(c as u16), power));
        }
        Ok(acc)
    }

    pub fn poly_add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.add(a.coeff(k), b.coeff(k))).collect())
    }

    pub fn poly_neg(&self, a: &Poly) -> Poly {
        Poly { coeffs: a.coeffs.iter().map(|&c| self.neg(c)).collect() }
    }

    pub fn poly_sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.sub(a.coeff(k), b.coeff(k))).collect())
    }

    pub fn poly_scale(&self, a: &Poly, c: Fe) -> Poly {
        Poly::from_coeffs(a.coeffs.iter().map(|&x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn poly_pow(&self, a: &Poly, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = self.poly_mul(&acc, a);
        }
        acc
    }

    /// Quotient and remainder; panics when dividing by zero.
    pub fn poly_divrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let db = b.degree().expect("division by the zero polynomial");
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return (Poly::zero(), a.clone());
        }
        let inv_lead = self.inv(b.leading());
        let mut quot = vec![Fe::ZERO; rem.len() - db];
        for k in (db..rem.len()).rev() {
            let c = self.mul(rem[k], inv_lead);
            if c.is_zero() {
                continue;
            }
            quot[k - db] = c;
            for i in 0..=db {
                rem[k - db + i] = self.sub(rem[k - db + i], self.mul(c, b.coeffs[i]));
            }
        }
        rem.truncate(db);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn poly_rem(&self, a: &Poly, b: &Poly) -> Poly {
        let db = b.degree().expect("division by the zero polynomial");
        if a.coeffs.len() <= db {
            return a.clone();
        }
        let mut rem = a.coeffs.clone();
        let inv_lead = self.inv(b.leading());
        for k in (db..rem.len()).rev() {
            let c = self.mul(rem[k], inv_lead);
            if c.is_zero() {
                continue;
            }
            for i in 0..=db {
                rem[k - db + i] = self.sub(rem[k - db + i], self.mul(c, b.coeffs[i]));
            }
        }
        rem.truncate(db);
        Poly::from_coeffs(rem)
    }

    /// Scales to leading coefficient one; returns the old leading coefficient.
    pub fn poly_monic(&self, a: &Poly) -> (Fe, Poly) {
        if a.is_zero() {
            return (Fe::ZERO, Poly::zero());
        }
        let lc = a.leading();
        (lc, self.poly_scale(a, self.inv(lc)))
    }

    /// Monic gcd; zero only if both inputs are zero.
    pub fn poly_gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.poly_rem(&x, &y);
            x = y;
            y = r;
        }
        self.poly_monic(&x).1
    }

    /// Inverse of `a` modulo `m`, if they are coprime.
    pub fn poly_inv_mod(&self, a: &Poly, m: &Poly) -> Option<Poly> {
        // extended Euclid tracking the coefficient of a
        let (mut r0, mut r1) = (m.clone(), self.poly_rem(a, m));
        let (mut s0, mut s1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (quot, rem) = self.poly_divrem(&r0, &r1);
            let s2 = self.poly_sub(&s0, &self.poly_mul(&quot, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = self.inv(r0.leading());
        Some(self.poly_rem(&self.poly_scale(&s0, c), m))
    }

    pub fn poly_derivative(&self, a: &Poly) -> Poly {
        Poly::from_coeffs(
            a.coeffs.iter().enumerate().skip(1).map(|(k, &c)| self.mul(self.from_int(k as i64), c)).collect(),
        )
    }

    pub fn poly_eval(&self, a: &Poly, x: Fe) -> Fe {
        a.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    pub fn poly_mul_mod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.poly_rem(&self.poly_mul(a, b), m)
    }

    pub fn poly_pow_mod(&self, a: &Poly, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.poly_rem(a, m);
        let mut acc = self.poly_rem(&Poly::one(), m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul_mod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.poly_mul_mod(&base, &base, m);
            }
        }
        acc
    }

    pub fn poly_is_squarefree(&self, a: &Poly) -> bool {
        match a.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.poly_gcd(a, &self.poly_derivative(a)).is_one(),
        }
    }

    /// Rabin's test.
    pub fn poly_is_irreducible(&self, a: &Poly) -> bool {
        let n = match a.degree() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        if n == 1 {
            return true;
        }
        let q = self.order() as u128;
        let x = Poly::x();
        // frob[k] = x^(q^k) mod a
        let mut frob = vec![self.poly_rem(&x, a)];
        for k in 1..=n {
            let next = self.poly_pow_mod(&frob[k - 1], q, a);
            frob.push(next);
        }
        if self.poly_sub(&frob[n], &self.poly_rem(&x, a)).coeffs.iter().any(|c| !c.is_zero()) {
            return false;
        }
        prime_divisors(n as u64).into_iter().all(|l| {
            let h = self.poly_sub(&frob[n / l as usize], &x);
            self.poly_gcd(&h, a).is_one()
        })
    }

    /// Monic irreducible polynomials of degree `d` in index order.
    pub fn irreducibles(&self, d: usize) -> Vec<Poly> {
        let q = self.order();
        let count = (q as u128).pow(d as u32);
        if d <= 1 || count > 1 << 24 {
            return (0..count)
                .map(|idx| Poly::monic_from_index(idx, d, q))
                .filter(|f| self.poly_is_irreducible(f))
                .collect();
        }
        // sieve out products with an irreducible factor of degree <= d/2
        let mut composite = vec![false; count as usize];
        for e in 1..=d / 2 {
            let cofactors = (q as u128).pow((d - e) as u32);
            for g in self.irreducibles(e) {
                for idx in 0..cofactors {
                    let h = Poly::monic_from_index(idx, d - e, q);
                    let low = self.poly_mul(&g, &h).index(q) - count;
                    composite[low as usize] = true;
                }
            }
        }
        (0..count)
            .filter(|&idx| !composite[idx as usize])
            .map(|idx| Poly::monic_from_index(idx, d, q))
            .collect()
    }

    // p-th root of a polynomial whose derivative vanishes
    fn poly_pth_root(&self, a: &Poly) -> Poly {
        let p = self.characteristic() as usize;
        let e = (self.order() / self.characteristic()) as u128;
        Poly::from_coeffs(a.coeffs.iter().step_by(p).map(|&c| self.pow(c, e)).collect())
    }

    /// Square-free decomposition of a monic polynomial: pairs `(g_i, i)` with
    /// `a = prod g_i^i`, each `g_i` square-free, nontrivial, monic.
    pub fn poly_squarefree_decomposition(&self, a: &Poly) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        self.squarefree_rec(&self.poly_monic(a).1, 1, &mut out);
        out.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
        out
    }

    fn squarefree_rec(&self, a: &Poly, mult: u32, out: &mut Vec<(Poly, u32)>) {
        if a.degree().unwrap_or(0) == 0 {
            return;
        }
        let p = self.characteristic();
        let da = self.poly_derivative(a);
        if da.is_zero() {
            self.squarefree_rec(&self.poly_pth_root(a), mult * p, out);
            return;
        }
        // Yun-style pass with the p-power remainder handled recursively
        let mut c = self.poly_gcd(a, &da);
        let mut w = self.poly_divrem(a, &c).0;
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let y = self.poly_gcd(&w, &c);
            let z = self.poly_divrem(&w, &y).0;
            if z.degree().unwrap_or(0) > 0 {
                out.push((z, i * mult));
            }
            i += 1;
            w = y;
            c = self.poly_divrem(&c, &w).0;
        }
        if c.degree().unwrap_or(0) > 0 {
            self.squarefree_rec(&self.poly_pth_root(&c), mult * p, out);
        }
    }

    /// Distinct-degree factorization of a square-free monic polynomial.
    fn distinct_degree(&self, a: &Poly) -> Vec<(Poly, usize)> {
        let q = self.order() as u128;
        let x = Poly::x();
        let mut rest = a.clone();
        let mut h = self.poly_rem(&x, &rest);
        let mut out = Vec::new();
        let mut d = 0;
        while let Some(n) = rest.degree() {
            if n == 0 {
                break;
            }
            d += 1;
            if 2 * d > n {
                out.push((rest.clone(), n));
                break;
            }
            h = self.poly_pow_mod(&h, q, &rest);
            let g = self.poly_gcd(&self.poly_sub(&h, &x), &rest);
            if !g.is_one() {
                rest = self.poly_divrem(&rest, &g).0;
                h = self.poly_rem(&h, &rest);
                out.push((g, d));
            }
        }
        out
    }

    /// Splits a product of distinct irreducibles all of degree `d`.
    fn equal_degree(&self, a: &Poly, d: usize, out: &mut Vec<Poly>) {
        let n = a.degree().unwrap_or(0);
        if n == d {
            out.push(a.clone());
            return;
        }
        let q = self.order();
        let qd = (q as u128).pow(d as u32);
        // deterministic search over test polynomials in index order
        let mut idx = q as u128;
        loop {
            let t = Poly::from_index(idx, q);
            idx += 1;
            if t.degree().unwrap_or(0) >= n {
                unreachable!("equal-degree splitting exhausted its candidates");
            }
            let s = if self.is_even() {
                let mut acc = Poly::zero();
                let mut pw = self.poly_rem(&t, a);
                for _ in 0..(d as u32 * self.degree()) {
                    acc = self.poly_add(&acc, &pw);
                    pw = self.poly_mul_mod(&pw, &pw, a);
                }
                acc
            } else {
                let pw = self.poly_pow_mod(&t, (qd - 1) / 2, a);
                self.poly_sub(&pw, &Poly::one())
            };
            let g = self.poly_gcd(&s, a);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let h = self.poly_divrem(a, &g).0;
                self.equal_degree(&g, d, out);
                self.equal_degree(&h, d, out);
                return;
            }
        }
    }

    /// Leading coefficient and monic irreducible factors with multiplicities,
    /// factors sorted in the canonical order.
    pub fn poly_factor(&self, a: &Poly) -> Result<(Fe, Vec<(Poly, u32)>)> {
        if a.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (lc, monic) = self.poly_monic(a);
        let mut out = Vec::new();
        for (g, mult) in self.poly_squarefree_decomposition(&monic) {
            for (h, d) in self.distinct_degree(&g) {
                let mut parts = Vec::new();
                self.equal_degree(&h, d, &mut parts);
                out.extend(parts.into_iter().map(|f| (f, mult)));
            }
        }
        out.sort();
        // merge repeated factors coming from different square-free layers
        let mut merged: Vec<(Poly, u32)> = Vec::new();
        for (f, m) in out {
            match merged.last_mut() {
                Some((g, k)) if *g == f => *k += m,
                _ => merged.push((f, m)),
            }
        }
        Ok((lc, merged))
    }

    /// Quadratic residue symbol of `a` modulo the irreducible `m` (odd `q`), by
    /// reciprocity: `(a/b)(b/a) = (-1)^((q-1)/2 deg a deg b)` for monic coprime `a, b`.
    pub fn poly_residue_symbol(&self, a: &Poly, m: &Poly) -> Result<i8> {
        if self.is_even() {
            return Err(Error::EvenCharacteristic);
        }
        let half_odd = (self.order() / 2) % 2 == 1;
        let (_, mut b) = self.poly_monic(m);
        let mut a = self.poly_rem(a, &b);
        let mut sign = 1i8;
        loop {
            let db = b.degree().expect("nonzero modulus");
            if db == 0 {
                return Ok(sign);
            }
            if a.is_zero() {
                return Ok(0);
            }
            let (c, monic) = self.poly_monic(&a);
            if db % 2 == 1 {
                sign *= self.residue_symbol(c)?;
            }
            let da = monic.degree().expect("nonzero");
            if half_odd && da % 2 == 1 && db % 2 == 1 {
                sign = -sign;
            }
            a = self.poly_rem(&b, &monic);
            b = monic;
        }
    }

    /// Absolute trace to `F_p` of `a` in `F_q[x]/(m)`, `m` irreducible.
    pub fn poly_abs_trace(&self, a: &Poly, m: &Poly) -> u32 {
        let d = m.degree().expect("nonzero modulus") as u32;
        let p = self.characteristic() as u128;
        let mut acc = Poly::zero();
        let mut pw = self.poly_rem(a, m);
        for _ in 0..d * self.degree() {
            acc = self.poly_add(&acc, &pw);
            pw = self.poly_pow_mod(&pw, p, m);
        }
        debug_assert!(acc.degree().unwrap_or(0) == 0);
        acc.coeff(0).0 as u32
    }

    /// Artin-Schreier symbol of `a` modulo the irreducible `m` (even `q`).
    pub fn poly_artin_schreier_symbol(&self, a: &Poly, m: &Poly) -> Result<i8> {
        if !self.is_even() {
            return Err(Error::OddCharacteristic);
        }
        Ok(if self.poly_abs_trace(a, m) == 0 { 1 } else { -1 })
    }

    /// Square root in `F_q[x]/(m)`, `m` irreducible, characteristic 2.
    pub fn poly_sqrt_mod(&self, a: &Poly, m: &Poly) -> Poly {
        let d = m.degree().expect("nonzero modulus") as u32;
        let size = (self.order() as u128).pow(d);
        self.poly_pow_mod(a, size / 2, m)
    }
}

impl Poly {
    /// Text form used in files; same as `Display`.
    pub fn render(&self) -> String {
        self.to_string()
    }
}
