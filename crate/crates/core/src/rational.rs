//! Rational functions `num / den` over `F_q`, kept in lowest terms with monic denominator.

use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::place::Place;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn zero() -> RationalFunction {
        RationalFunction { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RationalFunction {
        RationalFunction::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn constant(c: Fe) -> RationalFunction {
        RationalFunction::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    /// Always monic.
    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.degree().unwrap_or(0) == 0
    }

    /// Leading coefficient of the numerator over that of the (monic) denominator.
    pub fn leading_ratio(&self) -> Fe {
        self.num.leading()
    }

    /// `deg den - deg num`; `i64::MAX` for zero.
    pub fn ord_infinity(&self) -> i64 {
        if self.is_zero() {
            return i64::MAX;
        }
        self.den.deg() - self.num.deg()
    }
}

fn multiplicity(field: &Field, a: &Poly, p: &Poly) -> i64 {
    let mut n = 0;
    let mut a = a.clone();
    loop {
        let (quot, rem) = field.poly_divrem(&a, p);
        if !rem.is_zero() {
            return n;
        }
        a = quot;
        n += 1;
    }
}

impl Field {
    /// `num / den` in lowest terms; `den` must be nonzero.
    pub fn ratio(&self, num: &Poly, den: &Poly) -> Result<RationalFunction> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero());
        }
        let g = self.poly_gcd(num, den);
        let (num, den) = (self.poly_divrem(num, &g).0, self.poly_divrem(den, &g).0);
        let (lc, den) = self.poly_monic(&den);
        Ok(RationalFunction { num: self.poly_scale(&num, self.inv(lc)), den })
    }

    pub fn rat_add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        if a.den == b.den {
            return self.ratio(&self.poly_add(&a.num, &b.num), &a.den).expect("nonzero denominator");
        }
        let num = self.poly_add(&self.poly_mul(&a.num, &b.den), &self.poly_mul(&b.num, &a.den));
        self.ratio(&num, &self.poly_mul(&a.den, &b.den)).expect("nonzero denominator")
    }

    pub fn rat_neg(&self, a: &RationalFunction) -> RationalFunction {
        RationalFunction { num: self.poly_neg(&a.num), den: a.den.clone() }
    }

    pub fn rat_sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        self.rat_add(a, &self.rat_neg(b))
    }

    pub fn rat_mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        self.ratio(&self.poly_mul(&a.num, &b.num), &self.poly_mul(&a.den, &b.den)).expect("nonzero denominator")
    }

    pub fn rat_scale(&self, a: &RationalFunction, c: Fe) -> RationalFunction {
        if c.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction { num: self.poly_scale(&a.num, c), den: a.den.clone() }
    }

    pub fn rat_inv(&self, a: &RationalFunction) -> Result<RationalFunction> {
        self.ratio(&a.den, &a.num)
    }

    pub fn rat_div(&self, a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction> {
        Ok(self.rat_mul(a, &self.rat_inv(b)?))
    }

    pub fn rat_square(&self, a: &RationalFunction) -> RationalFunction {
        self.rat_mul(a, a)
    }

    /// Valuation at a place; `i64::MAX` for zero.
    pub fn ord_at(&self, a: &RationalFunction, v: &Place) -> i64 {
        if a.is_zero() {
            return i64::MAX;
        }
        match v {
            Place::Infinity => a.ord_infinity(),
            Place::Finite(p) => multiplicity(self, &a.num, p) - multiplicity(self, &a.den, p),
        }
    }

    /// The principal divisor of a nonzero rational function.
    pub fn principal_divisor(&self, a: &RationalFunction) -> Result<Divisor> {
        if a.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out = Divisor::zero();
        for (p, e) in self.poly_factor(&a.num)?.1 {
            out.add_term(Place::Finite(p), e as i64);
        }
        for (p, e) in self.poly_factor(&a.den)?.1 {
            out.add_term(Place::Finite(p), -(e as i64));
        }
        out.add_term(Place::Infinity, a.ord_infinity());
        Ok(out)
    }

    /// Parses `f`, `f/g` or `(f)/(g)`.
    pub fn parse_rational(&self, s: &str) -> Result<RationalFunction> {
        let strip = |t: &str| {
            let t = t.trim();
            String::from(t.strip_prefix('(').and_then(|u| u.strip_suffix(')')).unwrap_or(t).trim())
        };
        match s.split_once('/') {
            None => Ok(RationalFunction::from_poly(self.parse_poly(&strip(s))?)),
            Some((n, d)) => {
                let den = self.parse_poly(&strip(d))?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s}")));
                }
                self.ratio(&self.parse_poly(&strip(n))?, &den)
            }
        }
    }
}

/// `f` for polynomials, `(f)/(g)` otherwise.
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
