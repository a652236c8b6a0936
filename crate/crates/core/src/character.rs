//! Splitting symbols `chi(F/v)`, their multiplicative extension to divisors, and the
//! local character `chi_c` attached to a modulus.

use alloc::vec;
use alloc::vec::Vec;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::place::{BaseField, Place};
use crate::poly::Poly;
use crate::quadratic::QuadExt;
use crate::rational::RationalFunction;

fn strip_power(field: &Field, a: &Poly, p: &Poly) -> (i64, Poly) {
    let mut n = 0;
    let mut a = a.clone();
    loop {
        let (quot, rem) = field.poly_divrem(&a, p);
        if !rem.is_zero() {
            return (n, a);
        }
        a = quot;
        n += 1;
    }
}

/// Residue of an element integral at `p`, as a polynomial of degree below `deg p`.
fn residue_mod(field: &Field, a: &RationalFunction, p: &Poly) -> Poly {
    let den = field.poly_inv_mod(a.den(), p).expect("integral at the place");
    field.poly_mul_mod(a.num(), &den, p)
}

/// Value at infinity of an element with `ord_inf >= 0`.
fn residue_at_infinity(a: &RationalFunction) -> Fe {
    if a.num().deg() == a.den().deg() {
        a.leading_ratio()
    } else {
        Fe::ZERO
    }
}

impl BaseField {
    /// Splitting symbol at `v` of the extension generated by `w`: 0 ramified,
    /// -1 inert, +1 split. Also defined for constant generators.
    pub fn splitting_symbol(&self, w: &RationalFunction, v: &Place) -> i8 {
        let field = self.field();
        if self.is_even() {
            let w = self.artin_schreier_reduce_at(w, v);
            if field.ord_at(&w, v) < 0 {
                return 0;
            }
            match v {
                Place::Infinity => field.artin_schreier_symbol(residue_at_infinity(&w)).expect("even"),
                Place::Finite(p) => {
                    field.poly_artin_schreier_symbol(&residue_mod(field, &w, p), p).expect("even")
                }
            }
        } else {
            match v {
                Place::Infinity => {
                    if w.ord_infinity() % 2 != 0 {
                        return 0;
                    }
                    field.residue_symbol(w.leading_ratio()).expect("odd")
                }
                Place::Finite(p) => {
                    let (a, num) = strip_power(field, w.num(), p);
                    let (b, den) = strip_power(field, w.den(), p);
                    if (a - b) % 2 != 0 {
                        return 0;
                    }
                    let unit = field.poly_mul_mod(&num, &field.poly_inv_mod(&den, p).expect("coprime"), p);
                    field.poly_residue_symbol(&unit, p).expect("odd")
                }
            }
        }
    }

    /// `chi(F/v)`.
    pub fn chi_place(&self, ext: &QuadExt, v: &Place) -> i8 {
        if ext.is_ramified(v) {
            return 0;
        }
        self.splitting_symbol(ext.omega(), v)
    }

    /// `chi(F/a) = prod chi(F/v)^ord_v(a)` for effective `a`.
    pub fn chi_divisor(&self, ext: &QuadExt, a: &Divisor) -> Result<i8> {
        if !a.is_effective() {
            return Err(Error::NotEffective);
        }
        let mut out = 1i8;
        for (v, n) in a.terms() {
            let s = self.chi_place(ext, v);
            if s == 0 {
                return Ok(0);
            }
            if s < 0 && n % 2 == 1 {
                out = -out;
            }
        }
        Ok(out)
    }

    /// A generator of `F` meeting the hypotheses under which `chi(F/c)` equals
    /// `chi_c` of the generator: unit at `supp c` for odd `q`, integral there for even `q`.
    pub fn generator_for_modulus(&self, ext: &QuadExt, c: &Divisor) -> Result<RationalFunction> {
        if !ext.disc().is_disjoint(c) {
            return Err(Error::OverlappingSupport);
        }
        let field = self.field();
        if self.is_even() {
            let mut w = ext.omega().clone();
            for v in c.support() {
                w = self.artin_schreier_reduce_at(&w, v);
            }
            return Ok(w);
        }
        let (lc, f) = self.kummer_canonical(ext.omega())?;
        let w = RationalFunction::from_poly(field.poly_scale(&f, lc));
        if !c.contains(&Place::Infinity) || w.ord_infinity() == 0 {
            return Ok(w);
        }
        // divide by h^2 with deg h = deg f / 2 and h prime to the finite part of c
        let half = f.deg() as usize / 2;
        let q = self.q();
        let finite: Vec<&Poly> = c.support().filter_map(Place::poly).collect();
        let h = (0..(q as u128).pow(half as u32))
            .map(|idx| Poly::monic_from_index(idx, half, q))
            .find(|h| finite.iter().all(|p| !field.poly_rem(h, p).is_zero()))
            .ok_or(Error::NoSuchDiscriminant)?;
        field.ratio(w.num(), &field.poly_mul(&h, &h))
    }
}

/// The residues of an element at the places of a modulus `c`: modulo `p^e` for a
/// finite place, as `e` coefficients of the expansion in `1/x` at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTuple {
    modulus: Divisor,
    components: Vec<(Place, Vec<Fe>)>,
}

impl LocalTuple {
    pub fn of(base: &BaseField, c: &Divisor, a: &RationalFunction) -> Result<LocalTuple> {
        let field = base.field();
        let mut components = Vec::new();
        for (v, e) in c.terms() {
            if e <= 0 {
                return Err(Error::NotEffective);
            }
            if !a.is_zero() && field.ord_at(a, v) < 0 {
                return Err(Error::NotIntegralAtModulus);
            }
            let coeffs = match v {
                Place::Finite(p) => {
                    let m = field.poly_pow(p, e as u32);
                    let r = if a.is_zero() {
                        Poly::zero()
                    } else {
                        let inv = field.poly_inv_mod(a.den(), &m).expect("integral");
                        field.poly_mul_mod(a.num(), &inv, &m)
                    };
                    (0..p.deg() as usize * e as usize).map(|k| r.coeff(k)).collect()
                }
                Place::Infinity => expansion_at_infinity(field, a, e as usize),
            };
            components.push((v.clone(), coeffs));
        }
        Ok(LocalTuple { modulus: c.clone(), components })
    }

    pub fn modulus(&self) -> &Divisor {
        &self.modulus
    }

    pub fn components(&self) -> &[(Place, Vec<Fe>)] {
        &self.components
    }
}

/// First `n` coefficients of `a(1/t)` in `F_q[[t]]`; `a` integral at infinity.
fn expansion_at_infinity(field: &Field, a: &RationalFunction, n: usize) -> Vec<Fe> {
    if a.is_zero() {
        return vec![Fe::ZERO; n];
    }
    let shift = (a.den().deg() - a.num().deg()) as usize;
    // a(1/t) = t^shift rev(num)(t) / rev(den)(t), rev(den)(0) = 1
    let rev = |p: &Poly| -> Vec<Fe> { p.coeffs().iter().rev().copied().collect() };
    let (num, den) = (rev(a.num()), rev(a.den()));
    let mut out = vec![Fe::ZERO; n];
    let mut series = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(shift) {
        let mut c = num.get(k).copied().unwrap_or(Fe::ZERO);
        for j in 1..=k.min(den.len() - 1) {
            c = field.sub(c, field.mul(den[j], series[k - j]));
        }
        series.push(c);
        out[k + shift] = c;
    }
    out
}

impl BaseField {
    /// `chi_v` of a residue: the residue field symbol of its leading component.
    fn chi_local(&self, v: &Place, coeffs: &[Fe]) -> i8 {
        let field = self.field();
        match v {
            Place::Infinity => {
                let c = coeffs[0];
                if self.is_even() {
                    field.artin_schreier_symbol(c).expect("even")
                } else {
                    field.residue_symbol(c).expect("odd")
                }
            }
            Place::Finite(p) => {
                let r = field.poly_rem(&Poly::from_coeffs(coeffs.to_vec()), p);
                if self.is_even() {
                    field.poly_artin_schreier_symbol(&r, p).expect("even")
                } else {
                    field.poly_residue_symbol(&r, p).expect("odd")
                }
            }
        }
    }

    /// `chi_c = prod chi_v^ord_v(c)` of a local tuple.
    pub fn chi_c(&self, t: &LocalTuple) -> i8 {
        let mut out = 1i8;
        for (v, coeffs) in &t.components {
            let s = self.chi_local(v, coeffs);
            let e = t.modulus.ord(v);
            if s == 0 {
                return 0;
            }
            if s < 0 && e % 2 == 1 {
                out = -out;
            }
        }
        out
    }

    /// `chi_c(a)` for `a` integral at every place of `c`.
    pub fn chi_c_eval(&self, c: &Divisor, a: &RationalFunction) -> Result<i8> {
        Ok(self.chi_c(&LocalTuple::of(self, c, a)?))
    }
}

/// Places up to a degree with per-place symbol tables indexed by residue index, for
/// fast evaluation of splitting symbols over many extensions.
#[derive(Clone, Debug)]
pub struct PlaceCatalog {
    places: Vec<Place>,
    tables: Vec<Vec<i8>>,
}

impl PlaceCatalog {
    pub fn new(base: &BaseField, max_degree: usize) -> PlaceCatalog {
        let field = base.field();
        let q = base.q();
        let places = base.places_up_to(max_degree);
        let tables = places
            .iter()
            .map(|v| {
                let p = match v {
                    Place::Infinity => Poly::x(),
                    Place::Finite(p) => p.clone(),
                };
                let size = (q as usize).pow(p.deg() as u32);
                let mut table = vec![-1i8; size];
                for idx in 0..size {
                    let r = Poly::from_index(idx as u128, q);
                    let img = if base.is_even() {
                        field.poly_rem(&field.poly_add(&field.poly_mul(&r, &r), &r), &p)
                    } else {
                        field.poly_mul_mod(&r, &r, &p)
                    };
                    table[img.index(q) as usize] = 1;
                }
                if !base.is_even() {
                    table[0] = 0;
                }
                table
            })
            .collect();
        PlaceCatalog { places, tables }
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    /// Symbol of `a` at the `i`-th place, which must be finite: `chi_v(a)`.
    pub fn residue_symbol(&self, base: &BaseField, i: usize, a: &Poly) -> i8 {
        let p = self.places[i].poly().expect("finite place");
        let r = base.field().poly_rem(a, p);
        self.tables[i][r.index(base.q()) as usize]
    }

    /// `chi(F/v)` for the `i`-th place.
    pub fn chi(&self, base: &BaseField, ext: &QuadExt, i: usize) -> i8 {
        let v = &self.places[i];
        if ext.is_ramified(v) {
            return 0;
        }
        let w = ext.omega();
        let field = base.field();
        let q = base.q();
        let residue = match v {
            Place::Infinity => {
                if base.is_even() {
                    if w.ord_infinity() < 0 {
                        return base.splitting_symbol(w, v);
                    }
                    residue_at_infinity(w)
                } else {
                    w.leading_ratio()
                }
            }
            Place::Finite(p) => {
                let unit = if base.is_even() {
                    if !field.poly_rem(w.den(), p).is_zero() {
                        residue_mod(field, w, p)
                    } else {
                        return base.splitting_symbol(w, v);
                    }
                } else if w.is_polynomial() {
                    let r = field.poly_rem(w.num(), p);
                    if r.is_zero() {
                        return base.splitting_symbol(w, v);
                    }
                    r
                } else {
                    return base.splitting_symbol(w, v);
                };
                return self.tables[i][unit.index(q) as usize];
            }
        };
        self.tables[i][residue.0 as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::DEFAULT_FAMILY_CAP;

    fn k(p: u32, r: u32) -> BaseField {
        BaseField::from_order(p, r).unwrap()
    }

    fn w(base: &BaseField, s: &str) -> RationalFunction {
        base.field().parse_rational(s).unwrap()
    }

    fn place(base: &BaseField, s: &str) -> Place {
        if s == "inf" {
            Place::Infinity
        } else {
            Place::Finite(base.field().parse_poly(s).unwrap())
        }
    }

    #[test]
    fn place_symbol_examples() {
        let b = k(3, 1);
        let e = b.extension(&w(&b, "x")).unwrap();
        assert_eq!(b.chi_place(&e, &place(&b, "x+1")), -1);
        assert_eq!(b.chi_place(&e, &place(&b, "x")), 0);
        let b2 = k(2, 1);
        let e = b2.extension(&w(&b2, "1/x")).unwrap();
        assert_eq!(b2.chi_place(&e, &place(&b2, "x+1")), -1);
    }

    #[test]
    fn divisor_character_is_product() {
        let b = k(3, 1);
        let e = b.extension(&w(&b, "x")).unwrap();
        let a = Divisor::parse(&b, "[(x+1,1),(x+2,1)]").unwrap();
        let expect = b.chi_place(&e, &place(&b, "x+1")) * b.chi_place(&e, &place(&b, "x+2"));
        assert_eq!(b.chi_divisor(&e, &a).unwrap(), expect);
        assert_eq!(b.chi_divisor(&e, &Divisor::zero()).unwrap(), 1);
        let sq = Divisor::parse(&b, "[(x+1,2),(x^2+1,2)]").unwrap();
        assert_eq!(b.chi_divisor(&e, &sq).unwrap(), 1);
        // x+2 = x-1: y^2 = 1 splits
        assert_eq!(b.chi_place(&e, &place(&b, "x+2")), 1);
    }

    #[test]
    fn chi_c_examples() {
        let b = k(3, 1);
        let c = Divisor::parse(&b, "[(x,1)]").unwrap();
        assert_eq!(b.chi_c_eval(&c, &w(&b, "x+1")).unwrap(), 1);
        assert_eq!(b.chi_c_eval(&c, &w(&b, "1/x")), Err(Error::NotIntegralAtModulus));
        let odd = Divisor::parse(&b, "[(x,1),(x^2+1,1)]").unwrap();
        let a = RationalFunction::constant(b.field().nonsplit_constant());
        assert_eq!(b.chi_c_eval(&odd, &a).unwrap(), -1);
        let sq = w(&b, "(x^2+2*x+1)/(x^2+1)");
        assert_eq!(b.chi_c_eval(&Divisor::parse(&b, "[(x,1),(inf,1)]").unwrap(), &sq).unwrap(), 1);
    }

    #[test]
    fn expansion_matches_definition() {
        let b = k(5, 1);
        let f = b.field();
        // (x+1)/(x^2+3) = t(1+t)/(1+3t^2)
        let a = w(&b, "(x+1)/(x^2+3)");
        let exp = expansion_at_infinity(f, &a, 5);
        // 1/(1+3t^2) = 1 - 3t^2 + 9t^4 = 1 + 2t^2 + 4t^4
        let expect: Vec<Fe> = [0, 1, 1, 2, 2].iter().map(|&c| Fe(c)).collect();
        assert_eq!(exp, expect);
    }

    #[test]
    fn constant_extension_symbols() {
        for (p, r) in [(3u32, 1u32), (5, 1), (2, 1), (2, 2), (3, 2)] {
            let b = k(p, r);
            let a = RationalFunction::constant(b.field().nonsplit_constant());
            for v in b.places_up_to(4) {
                let expect = if v.degree() % 2 == 0 { 1 } else { -1 };
                assert_eq!(b.splitting_symbol(&a, &v), expect, "{p}^{r} {v}");
            }
        }
    }

    #[test]
    fn catalog_agrees_with_direct_symbols() {
        for (p, r, m) in [(3u32, 1u32, 1u32), (2, 1, 2), (2, 2, 1), (5, 1, 0)] {
            let b = k(p, r);
            let cat = PlaceCatalog::new(&b, 3);
            for e in b.enumerate_family(m, DEFAULT_FAMILY_CAP).unwrap().iter().step_by(3) {
                for (i, v) in cat.places().iter().enumerate() {
                    assert_eq!(cat.chi(&b, e, i), b.chi_place(e, v), "{} {v}", e.omega());
                }
            }
        }
    }

    // chi(F/c) = chi_c(w) for a suitably normalised generator
    #[test]
    fn modulus_character_matches_divisor_character() {
        for (p, m) in [(3u32, 1u32), (2, 2)] {
            let b = k(p, 1);
            let fam = b.enumerate_family(m, DEFAULT_FAMILY_CAP).unwrap();
            let moduli: Vec<Divisor> = (1..=3).flat_map(|n| b.effective_divisors(n)).collect();
            let mut checked = 0;
            for (i, e) in fam.iter().enumerate().step_by(5) {
                let c = &moduli[i % moduli.len()];
                if !c.is_disjoint(e.disc()) {
                    continue;
                }
                let g = b.generator_for_modulus(e, c).unwrap();
                assert_eq!(b.chi_divisor(e, c).unwrap(), b.chi_c_eval(c, &g).unwrap(), "{} {c}", e.omega());
                checked += 1;
            }
            assert!(checked > 5);
        }
    }
}
