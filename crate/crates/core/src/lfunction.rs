//! Zeta function of the base field and L-polynomials of quadratic extensions.
//!
//! For `F / F_q(x)` the Artin factor is the polynomial
//! `L*(u) = sum_a chi(F/a) u^deg a` of degree `2g`, where the sum runs over
//! effective divisors and `u = q^-s`.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::character::PlaceCatalog;
use crate::error::{Error, Result};
use crate::place::{BaseField, Place};
use crate::quadratic::QuadExt;
use crate::divisor::EffectiveDivisors;
use crate::roots;

/// Largest genus for which [`BaseField::lstar_coefficients`] runs by default.
pub const DEFAULT_GENUS_CAP: i64 = 4;

/// `u = q^-s`.
pub fn u_of(q: u32, s: Complex64) -> Complex64 {
    (-s * libm::log(q as f64)).exp()
}

/// Horner evaluation of integer coefficients (low to high) at a complex point.
pub fn horner(coeffs: &[i64], u: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c as f64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    q: u32,
    genus: i64,
    coeffs: Vec<i64>,
}

impl LPolynomial {
    pub fn new(q: u32, genus: i64, coeffs: Vec<i64>) -> LPolynomial {
        LPolynomial { q, genus, coeffs }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval_u(&self, u: Complex64) -> Complex64 {
        horner(&self.coeffs, u)
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.eval_u(u_of(self.q, s))
    }

    /// Whether `c_{2g-n} = q^(g-n) c_n` for all `n`.
    pub fn satisfies_functional_equation(&self) -> bool {
        let g = self.genus;
        let q = self.q as i128;
        (0..=g).all(|n| {
            let lo = self.coeffs[n as usize] as i128;
            let hi = self.coeffs[(2 * g - n) as usize] as i128;
            hi == q.pow((g - n) as u32) * lo
        })
    }

    /// Largest `| |u| sqrt(q) - 1 |` over the complex roots; 0 for degree 0.
    pub fn rh_deviation(&self) -> Result<f64> {
        if self.degree() == 0 {
            return Ok(0.0);
        }
        let ints: Vec<i128> = self.coeffs.iter().map(|&c| c as i128).collect();
        let sf = roots::squarefree_part_int(&ints)?;
        // substitute u = z / sqrt(q) so the roots lie near the unit circle
        let sq = libm::sqrt(self.q as f64);
        let scaled: Vec<f64> = sf.iter().enumerate().map(|(k, &c)| c as f64 / libm::pow(sq, k as f64)).collect();
        let zs = roots::poly_roots(&scaled, 200, 1e-13);
        Ok(zs.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max))
    }
}

/// Convolution of two series truncated to `n + 1` terms.
pub fn convolve(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n + 1];
    for (i, &x) in a.iter().enumerate().take(n + 1) {
        for (j, &y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

impl BaseField {
    /// `zeta(s) = 1 / ((1 - q^-s)(1 - q^(1-s)))`.
    pub fn zeta_rational(&self, s: Complex64) -> Result<Complex64> {
        let u = u_of(self.q(), s);
        let qu = u * self.q() as f64;
        let one = Complex64::new(1.0, 0.0);
        if (u - one).norm() < 1e-12 || (qu - one).norm() < 1e-12 {
            return Err(Error::PoleAt);
        }
        Ok(one / ((one - u) * (one - qu)))
    }

    /// `L_K(u) = 1` in genus zero.
    pub fn lfunc_base(&self, _s: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    /// Sums of `chi(F/a)` over effective divisors of each degree `0..=n`, with place
    /// symbols taken from `catalog`.
    fn divisor_sums(&self, ext: &QuadExt, catalog: &PlaceCatalog, n: usize) -> Vec<i64> {
        let places = catalog.places();
        let count = places.iter().take_while(|v| v.degree() <= n).count();
        let symbols: Vec<i8> = (0..count).map(|i| catalog.chi(self, ext, i)).collect();
        let mut out = vec![0i64; n + 1];
        for (deg, slot) in out.iter_mut().enumerate() {
            let mut it = EffectiveDivisors::with_places(places[..count].to_vec(), deg);
            let mut total = 0i64;
            while let Some(terms) = it.advance() {
                let mut val = 1i64;
                for &(j, k) in terms {
                    val *= (symbols[j] as i64).pow(k);
                    if val == 0 {
                        break;
                    }
                }
                total += val;
            }
            *slot = total;
        }
        out
    }

    /// `c_n = sum_{deg a = n} chi(F/a)` for `n = 0..=n_max`; no genus cap.
    pub fn lstar_series(&self, ext: &QuadExt, n_max: usize) -> Vec<i64> {
        let catalog = PlaceCatalog::new(self, n_max.max(1));
        self.divisor_sums(ext, &catalog, n_max)
    }

    /// The L-polynomial with a default genus cap.
    pub fn lstar_coefficients(&self, ext: &QuadExt) -> Result<LPolynomial> {
        self.lstar_coefficients_capped(ext, DEFAULT_GENUS_CAP)
    }

    pub fn lstar_coefficients_capped(&self, ext: &QuadExt, genus_cap: i64) -> Result<LPolynomial> {
        let g = ext.genus();
        if g > genus_cap {
            return Err(Error::CapExceeded { what: "genus", size: g as u128, cap: genus_cap as u128 });
        }
        let catalog = PlaceCatalog::new(self, (2 * g as usize).max(1));
        Ok(self.lstar_with_catalog(ext, &catalog))
    }

    /// As [`BaseField::lstar_coefficients`], reusing a catalog of places up to degree `2g`.
    pub fn lstar_with_catalog(&self, ext: &QuadExt, catalog: &PlaceCatalog) -> LPolynomial {
        let d = 2 * ext.genus() as usize;
        LPolynomial::new(self.q(), ext.genus(), self.divisor_sums(ext, catalog, d))
    }

    /// `L_F(q^-s) = L_K(q^-s) L*(q^-s)`.
    pub fn lfunc_eval(&self, ext: &QuadExt, s: Complex64) -> Result<Complex64> {
        Ok(self.lfunc_base(s) * self.lstar_coefficients(ext)?.eval(s))
    }

    /// `b_n = sum_{deg b = n} mu(b) chi(F/b)` for `n = 0..=n_max`.
    pub fn lstar_inverse_series(&self, ext: &QuadExt, n_max: usize) -> Vec<i64> {
        self.lstar_inverse_series_over(ext, &self.places_up_to(n_max), n_max)
    }

    /// As [`BaseField::lstar_inverse_series`], expanding `prod_v (1 - chi(F/v) u^deg v)`
    /// over a precomputed list holding every place of degree at most `n_max`.
    pub fn lstar_inverse_series_over(&self, ext: &QuadExt, places: &[Place], n_max: usize) -> Vec<i64> {
        let mut out = vec![0i64; n_max + 1];
        out[0] = 1;
        for v in places.iter().filter(|v| v.degree() <= n_max) {
            let s = self.chi_place(ext, v) as i64;
            if s == 0 {
                continue;
            }
            let d = v.degree();
            for n in (d..=n_max).rev() {
                out[n] -= s * out[n - d];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::place::Place;
    use approx::assert_relative_eq;

    fn k(p: u32, r: u32) -> BaseField {
        BaseField::from_order(p, r).unwrap()
    }

    fn ext(b: &BaseField, s: &str) -> QuadExt {
        b.extension(&b.field().parse_rational(s).unwrap()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeta_values() {
        assert_relative_eq!(k(3, 1).zeta_rational(c(2.0, 0.0)).unwrap().re, 27.0 / 16.0, epsilon = 1e-14);
        assert_relative_eq!(k(2, 1).zeta_rational(c(2.0, 0.0)).unwrap().re, 8.0 / 3.0, epsilon = 1e-14);
        assert!(matches!(k(3, 1).zeta_rational(c(1.0, 0.0)), Err(Error::PoleAt)));
        assert!(matches!(k(3, 1).zeta_rational(c(0.0, 0.0)), Err(Error::PoleAt)));
    }

    #[test]
    fn elliptic_examples() {
        let b = k(3, 1);
        let e = ext(&b, "x^3+2*x");
        assert_eq!(e.genus(), 1);
        let l = b.lstar_coefficients(&e).unwrap();
        assert_eq!(l.coeffs(), &[1, 0, 3]);
        assert_relative_eq!(l.eval(c(1.0, 0.0)).re, 4.0 / 3.0, epsilon = 1e-14);
        assert!(l.rh_deviation().unwrap() < 1e-12);

        let b = k(2, 1);
        let e = ext(&b, "x^3");
        let l = b.lstar_coefficients(&e).unwrap();
        assert_eq!(l.coeffs(), &[1, 0, 2]);
        assert!(l.rh_deviation().unwrap() < 1e-12);
    }

    #[test]
    fn genus_zero_is_trivial() {
        let b = k(3, 1);
        let e = ext(&b, "x");
        assert_eq!(e.genus(), 0);
        assert_eq!(b.lstar_coefficients(&e).unwrap().coeffs(), &[1]);
        assert_eq!(b.lfunc_eval(&e, c(0.3, 4.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(b.lstar_inverse_series(&e, 5), vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn inverse_series_convolves_to_delta() {
        let b = k(3, 1);
        let e = ext(&b, "x^3+2*x");
        let l = b.lstar_coefficients(&e).unwrap();
        let inv = b.lstar_inverse_series(&e, 6);
        let mut delta = vec![0i64; 7];
        delta[0] = 1;
        assert_eq!(convolve(l.coeffs(), &inv, 6), delta);
        // direct Mobius sums over square-free divisors
        for (n, &bn) in inv.iter().enumerate().take(5) {
            let direct: i64 = b
                .effective_divisors(n)
                .filter(|a| a.is_squarefree() || a.is_zero())
                .map(|a| a.mobius().unwrap() * b.chi_divisor(&e, &a).unwrap() as i64)
                .sum();
            assert_eq!(direct, bn);
        }
    }

    #[test]
    fn rh_with_repeated_roots() {
        // (1 + 3u^2)^2 has double roots on the circle
        let l = LPolynomial::new(3, 2, vec![1, 0, 6, 0, 9]);
        assert!(l.rh_deviation().unwrap() < 1e-12);
        assert!(l.satisfies_functional_equation());
        let bad = LPolynomial::new(3, 1, vec![1, 0, 1]);
        assert!(bad.rh_deviation().unwrap() > 0.5);
    }

    // Number of degree-1 places of F over F_{q^k}, by splitting types over the
    // extended constant field.
    fn rational_places(p: u32, k: u32, omega: &str) -> i64 {
        let b = BaseField::from_order(p, k).unwrap();
        let e = ext(&b, omega);
        b.places_of_degree(1).iter().map(|v| 1 + b.chi_place(&e, v) as i64).sum()
    }

    // c_1..c_g from point counts via Newton's identities, the rest by symmetry.
    fn lpoly_from_point_counts(p: u32, omega: &str, g: usize) -> (Vec<i64>, Vec<i64>) {
        let q = p as i64;
        let counts: Vec<i64> = (1..=(2 * g + 2) as u32).map(|k| rational_places(p, k, omega)).collect();
        let s: Vec<i64> = counts.iter().enumerate().map(|(i, &n)| q.pow(i as u32 + 1) + 1 - n).collect();
        let mut c = vec![1i64];
        for kk in 1..=g {
            let acc: i64 = (1..=kk).map(|i| s[i - 1] * c[kk - i]).sum();
            c.push(-acc / kk as i64);
        }
        for n in (0..g).rev() {
            c.push(q.pow((g - n) as u32) * c[n]);
        }
        (c, counts)
    }

    // power sums of reciprocal roots, recovered from coefficients
    fn power_sums(c: &[i64], upto: usize) -> Vec<i64> {
        let d = c.len() - 1;
        let mut s = Vec::new();
        for kk in 1..=upto {
            let mut acc = if kk <= d { kk as i64 * c[kk] } else { 0 };
            for i in 1..kk {
                if kk - i <= d {
                    acc += s[i - 1] * c[kk - i];
                }
            }
            s.push(-acc);
        }
        s
    }

    #[test]
    fn point_count_oracle() {
        let cases = [(3u32, "x^3+2*x"), (3, "x^5+x+1"), (3, "(x^3+1)/(x^2+1)"), (2, "x^3"), (2, "x^5+x"), (2, "1/(x^3+x)"), (2, "(x^2+x+1)/(x^3+x^2+1)")];
        for (p, omega) in cases {
            let b = k(p, 1);
            let e = ext(&b, omega);
            let g = e.genus() as usize;
            let l = b.lstar_coefficients(&e).unwrap();
            let (c, counts) = lpoly_from_point_counts(p, omega, g);
            assert_eq!(l.coeffs(), &c[..], "{omega}");
            // counts beyond g must be predicted by the fitted polynomial
            let s = power_sums(&c, counts.len());
            for (i, &n) in counts.iter().enumerate() {
                assert_eq!(n, (p as i64).pow(i as u32 + 1) + 1 - s[i], "{omega} k={}", i + 1);
            }
        }
    }

    #[test]
    fn vanishing_beyond_degree() {
        for (p, omega) in [(3u32, "x^5+x+1"), (2, "(x^2+x+1)/(x^3+x^2+1)"), (5, "x^3+x")] {
            let b = k(p, 1);
            let e = ext(&b, omega);
            let d = 2 * e.genus() as usize;
            let series = b.lstar_series(&e, d + 3);
            let l = b.lstar_coefficients(&e).unwrap();
            assert_eq!(&series[..=d], l.coeffs());
            assert!(series[d + 1..].iter().all(|&x| x == 0), "{omega}: {series:?}");
            assert!(l.satisfies_functional_equation());
        }
    }

    #[test]
    fn first_coefficient_counts_places() {
        let b = k(3, 1);
        for f in b.enumerate_family(1, 1 << 20).unwrap() {
            let l = b.lstar_coefficients(&f).unwrap();
            let deg1: Vec<Place> = b.places_of_degree(1);
            let ramified = deg1.iter().filter(|v| f.is_ramified(v)).count() as i64;
            let split = deg1.iter().filter(|v| b.chi_place(&f, v) == 1).count() as i64;
            assert_eq!(1 + l.coeffs()[1] + 3, 2 * split + ramified);
        }
    }

    #[test]
    fn eval_matches_horner() {
        let b = k(2, 1);
        let e = ext(&b, "x^5+x");
        let l = b.lstar_coefficients(&e).unwrap();
        for s in [c(2.0, 0.0), c(0.5, 3.0), c(1.2, -0.7)] {
            let direct = b.lfunc_eval(&e, s).unwrap();
            let u = u_of(2, s);
            let h = horner(l.coeffs(), u);
            assert!((direct - h).norm() <= 1e-12 * h.norm());
        }
    }

    #[test]
    fn genus_cap() {
        let b = k(2, 1);
        let e = ext(&b, "x^11");
        assert!(matches!(b.lstar_coefficients(&e), Err(Error::CapExceeded { .. })));
        assert_eq!(b.lstar_coefficients_capped(&e, 5).unwrap().degree(), 10);
    }
}
