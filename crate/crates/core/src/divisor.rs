//! Divisors of `F_q(x)`: sparse integer combinations of places.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::place::{BaseField, Place};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    /// The divisor `1 * v`.
    pub fn place(v: Place) -> Divisor {
        Divisor::from_terms([(v, 1)])
    }

    /// Sums the given terms; zero coefficients are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (Place, i64)>) -> Divisor {
        let mut out = Divisor::zero();
        for (v, n) in terms {
            out.add_term(v, n);
        }
        out
    }

    pub fn add_term(&mut self, v: Place, n: i64) {
        if n == 0 {
            return;
        }
        match self.terms.entry(v) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += n;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(n);
            }
        }
    }

    pub fn ord(&self, v: &Place) -> i64 {
        self.terms.get(v).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Place, i64)> + '_ {
        self.terms.iter().map(|(v, &n)| (v, n))
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> + '_ {
        self.terms.keys()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(v, &n)| n * v.degree() as i64).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&n| n > 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.terms.values().all(|&n| n == 1)
    }

    /// Whether every coefficient is even.
    pub fn is_even(&self) -> bool {
        self.terms.values().all(|&n| n % 2 == 0)
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::from_terms(self.terms.iter().map(|(v, &n)| (v.clone(), k * n)))
    }

    /// Partial order: `self <= other` coefficientwise.
    pub fn le(&self, other: &Divisor) -> bool {
        let keys = self.terms.keys().chain(other.terms.keys());
        keys.into_iter().all(|v| self.ord(v) <= other.ord(v))
    }

    pub fn is_disjoint(&self, other: &Divisor) -> bool {
        self.terms.keys().all(|v| !other.terms.contains_key(v))
    }

    pub fn contains(&self, v: &Place) -> bool {
        self.terms.contains_key(v)
    }

    /// Sum of the places in the support, each with coefficient one.
    pub fn reduced(&self) -> Divisor {
        Divisor::from_terms(self.terms.keys().map(|v| (v.clone(), 1)))
    }

    fn require_effective(&self) -> Result<()> {
        if self.is_effective() {
            Ok(())
        } else {
            Err(Error::NotEffective)
        }
    }

    /// Möbius function of an effective divisor.
    pub fn mobius(&self) -> Result<i64> {
        self.require_effective()?;
        Ok(if !self.is_squarefree() {
            0
        } else if self.terms.len().is_multiple_of(2) {
            1
        } else {
            -1
        })
    }

    /// The divisor totient `prod (q^(n deg v) - q^((n-1) deg v))`.
    pub fn phi(&self, q: u32) -> Result<u64> {
        self.require_effective()?;
        let mut acc: u64 = 1;
        for (v, &n) in &self.terms {
            let d = v.degree() as u32;
            let lo = (q as u64).checked_pow((n as u32 - 1) * d).ok_or(Error::Overflow)?;
            let hi = lo.checked_mul((q as u64).pow(d)).ok_or(Error::Overflow)?;
            acc = acc.checked_mul(hi - lo).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }

    /// Splits an effective divisor into its reduced part and the rest.
    pub fn squarefree_split(&self) -> Result<(Divisor, Divisor)> {
        self.require_effective()?;
        let first = self.reduced();
        let second = self - &first;
        Ok((first, second))
    }

    /// All effective `b` with `0 <= b <= self`, in lexicographic order of exponents.
    pub fn sub_divisors(&self) -> Result<Vec<Divisor>> {
        self.require_effective()?;
        let places: Vec<(&Place, i64)> = self.terms().collect();
        let mut out = Vec::new();
        let mut exps = alloc::vec![0i64; places.len()];
        loop {
            out.push(Divisor::from_terms(places.iter().zip(&exps).map(|((v, _), &e)| ((*v).clone(), e))));
            let mut i = 0;
            loop {
                if i == places.len() {
                    return Ok(out);
                }
                if exps[i] < places[i].1 {
                    exps[i] += 1;
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    /// `sum_{0 <= c <= self} mu(c)`.
    pub fn mobius_interval_sum(&self) -> Result<i64> {
        self.sub_divisors()?.iter().map(|c| c.mobius()).sum()
    }

    /// Parses the text form `[(inf,2),(x^2+x+1,1)]`.
    pub fn parse(base: &BaseField, s: &str) -> Result<Divisor> {
        let err = || Error::Parse(format!("bad divisor: {s}"));
        let body = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(err)?;
        let mut out = Divisor::zero();
        let mut rest = body.trim();
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(err)?;
            let close = inner.find(')').ok_or_else(err)?;
            let (pl, mult) = inner[..close].rsplit_once(',').ok_or_else(err)?;
            let mult: i64 = mult.trim().parse().map_err(|_| err())?;
            let place = match pl.trim() {
                "inf" => Place::Infinity,
                text => base.place(parse_poly_of(base.field(), text)?)?,
            };
            if mult == 0 || out.contains(&place) {
                return Err(err());
            }
            out.add_term(place, mult);
            rest = inner[close + 1..].trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
            }
        }
        Ok(out)
    }
}

fn parse_poly_of(field: &Field, text: &str) -> Result<crate::poly::Poly> {
    field.parse_poly(text)
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (v, n)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({v},{n})")?;
        }
        write!(f, "]")
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (v, &n) in &rhs.terms {
            out.add_term(v.clone(), n);
        }
        out
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (v, &n) in &rhs.terms {
            out.add_term(v.clone(), -n);
        }
        out
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        self.scale(-1)
    }
}

/// Effective divisors of a fixed degree, in lexicographic order of their sorted
/// `(place, multiplicity)` lists.
///
/// The traversal works on indices into a place list sorted by degree;
/// [`EffectiveDivisors::advance`] exposes the index form for hot loops.
#[derive(Clone, Debug)]
pub struct EffectiveDivisors {
    places: Vec<Place>,
    degrees: Vec<usize>,
    stack: Vec<(usize, u32)>,
    remaining: usize,
    fresh: bool,
}

impl EffectiveDivisors {
    /// `places` must contain every place of degree at most `n`, in canonical order.
    pub fn with_places(places: Vec<Place>, n: usize) -> EffectiveDivisors {
        let degrees = places.iter().map(Place::degree).collect();
        EffectiveDivisors { places, degrees, stack: Vec::new(), remaining: n, fresh: true }
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    /// Moves to the next divisor and returns its `(place index, multiplicity)` list.
    pub fn advance(&mut self) -> Option<&[(usize, u32)]> {
        if self.fresh {
            self.fresh = false;
            if self.remaining == 0 {
                return Some(&self.stack);
            }
        }
        loop {
            if !self.step() {
                return None;
            }
            if self.remaining == 0 {
                return Some(&self.stack);
            }
        }
    }

    // next node of the preorder traversal of the prefix tree
    fn step(&mut self) -> bool {
        let n = self.degrees.len();
        let first = self.stack.last().map_or(0, |&(j, _)| j + 1);
        if self.remaining > 0 && first < n && self.degrees[first] <= self.remaining {
            self.stack.push((first, 1));
            self.remaining -= self.degrees[first];
            return true;
        }
        while let Some((j, k)) = self.stack.pop() {
            self.remaining += self.degrees[j] * k as usize;
            if self.degrees[j] * (k as usize + 1) <= self.remaining {
                self.stack.push((j, k + 1));
                self.remaining -= self.degrees[j] * (k as usize + 1);
                return true;
            }
            if j + 1 < n && self.degrees[j + 1] <= self.remaining {
                self.stack.push((j + 1, 1));
                self.remaining -= self.degrees[j + 1];
                return true;
            }
        }
        false
    }
}

impl Iterator for EffectiveDivisors {
    type Item = Divisor;

    fn next(&mut self) -> Option<Divisor> {
        self.advance()?;
        Some(Divisor::from_terms(self.stack.iter().map(|&(j, k)| (self.places[j].clone(), k as i64))))
    }
}

impl BaseField {
    /// Every effective divisor of degree `n`, each exactly once.
    pub fn effective_divisors(&self, n: usize) -> EffectiveDivisors {
        EffectiveDivisors::with_places(self.places_up_to(n), n)
    }
}

/// Number of effective divisors of degree `n` on the projective line.
pub fn count_effective(q: u64, n: u32) -> u64 {
    (q.pow(n + 1) - 1) / (q - 1)
}
