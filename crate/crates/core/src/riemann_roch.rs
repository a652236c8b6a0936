//! Riemann-Roch spaces `L(a)` on the projective line.
//!
//! Write `a = sum n_i p_i + n_inf inf`. Then `L(a)` is the set of `g k / d` with
//! `d = prod p_i^max(n_i, 0)`, `g = prod p_i^max(-n_i, 0)` and `deg k <= deg d + n_inf - deg g`.
//! An element is addressed by the base-`q` index of `k`; that index order is the
//! enumeration order used everywhere else.

use alloc::vec::Vec;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::linalg;
use crate::place::{BaseField, Place};
use crate::poly::Poly;
use crate::rational::RationalFunction;

/// Default limit on `q^dim` for full enumeration.
pub const DEFAULT_ENUM_CAP: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrSpace {
    divisor: Divisor,
    q: u32,
    den: Poly,
    mult: Poly,
    dim: usize,
}

impl RrSpace {
    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Common denominator of all elements.
    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Common polynomial factor of all numerators.
    pub fn mult(&self) -> &Poly {
        &self.mult
    }

    /// `q^dim`, or `None` on overflow.
    pub fn size(&self) -> Option<u128> {
        (self.q as u128).checked_pow(self.dim as u32)
    }

    /// Numerator (over [`RrSpace::den`]) of the element with index `idx`.
    pub fn numerator(&self, field: &Field, idx: u128) -> Poly {
        field.poly_mul(&self.mult, &Poly::from_index(idx, self.q))
    }

    pub fn element(&self, field: &Field, idx: u128) -> RationalFunction {
        field.ratio(&self.numerator(field, idx), &self.den).expect("monic denominator")
    }

    /// Basis `g x^j / d`, `j = 0..dim`.
    pub fn basis(&self, field: &Field) -> Vec<RationalFunction> {
        (0..self.dim).map(|j| self.element(field, (self.q as u128).pow(j as u32))).collect()
    }

    /// All `q^dim` elements in index order.
    pub fn enumerate<'a>(
        &'a self,
        field: &'a Field,
        cap: u128,
    ) -> Result<impl Iterator<Item = RationalFunction> + 'a> {
        let size = self.size().unwrap_or(u128::MAX);
        if size > cap {
            return Err(Error::CapExceeded { what: "Riemann-Roch space", size, cap });
        }
        Ok((0..size).map(move |idx| self.element(field, idx)))
    }

    /// Whether a rational function lies in the space.
    pub fn contains(&self, field: &Field, a: &RationalFunction) -> bool {
        if a.is_zero() {
            return true;
        }
        let mut places: Vec<Place> = self.divisor.support().cloned().collect();
        for (p, _) in field.poly_factor(a.den()).expect("nonzero").1 {
            places.push(Place::Finite(p));
        }
        places.push(Place::Infinity);
        places.iter().all(|v| field.ord_at(a, v) >= -self.divisor.ord(v))
    }
}

impl BaseField {
    /// `l(a) = max(0, deg a + 1)` in genus zero.
    pub fn rr_dim(&self, a: &Divisor) -> usize {
        (a.degree() + 1 - self.genus()).max(0) as usize
    }

    pub fn rr_space(&self, a: &Divisor) -> RrSpace {
        let field = self.field();
        let (mut den, mut mult) = (Poly::one(), Poly::one());
        let mut n_inf = 0;
        for (v, n) in a.terms() {
            match v {
                Place::Infinity => n_inf = n,
                Place::Finite(p) if n > 0 => den = field.poly_mul(&den, &field.poly_pow(p, n as u32)),
                Place::Finite(p) => mult = field.poly_mul(&mult, &field.poly_pow(p, (-n) as u32)),
            }
        }
        let top = den.deg() + n_inf - mult.deg();
        RrSpace { divisor: a.clone(), q: self.q(), den, mult, dim: (top + 1).max(0) as usize }
    }

    /// Number of `x` in `L(a + b)` with `ord_v x = -ord_v a` at every `v` in the
    /// support of `a`, by inclusion-exclusion over the reduced divisor of `a`.
    pub fn count_exact_order_subset(&self, a: &Divisor, b: &Divisor) -> Result<u128> {
        if !a.is_effective() || !b.is_effective() {
            return Err(Error::NotEffective);
        }
        if !a.is_disjoint(b) {
            return Err(Error::OverlappingSupport);
        }
        let q = self.q() as i128;
        let ab = a + b;
        let mut total: i128 = 0;
        for e in a.reduced().sub_divisors()? {
            let l = self.rr_dim(&(&ab - &e));
            total += e.mobius()? as i128 * q.pow(l as u32);
        }
        Ok(total as u128)
    }
}

/// Coordinates of rational functions in a common space, for rank checks.
pub fn coordinates(field: &Field, space: &RrSpace, a: &RationalFunction) -> Option<Vec<Fe>> {
    let scaled = field.poly_mul(a.num(), &field.poly_divrem(space.den(), a.den()).0);
    let (k, rem) = field.poly_divrem(&scaled, space.mult());
    if !rem.is_zero() || k.deg() >= space.dim() as i64 {
        return None;
    }
    Some((0..space.dim()).map(|j| k.coeff(j)).collect())
}

/// Rank of a family of elements of `space`.
pub fn rank_in(field: &Field, space: &RrSpace, elems: &[RationalFunction]) -> usize {
    let rows: Vec<Vec<Fe>> = elems.iter().filter_map(|a| coordinates(field, space, a)).collect();
    linalg::rank(field, &rows, space.dim())
}
