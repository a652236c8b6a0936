//! Places of the rational function field `F_q(x)` and the base-field context.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;

/// A place of `F_q(x)`: a monic irreducible polynomial or the place at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Infinity,
    Finite(Poly),
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Infinity => 1,
            Place::Finite(p) => p.degree().expect("place polynomial is nonzero"),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn poly(&self) -> Option<&Poly> {
        match self {
            Place::Infinity => None,
            Place::Finite(p) => Some(p),
        }
    }
}

/// Infinity first, then finite places by degree and coefficient index.
impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, _) => Ordering::Less,
            (_, Place::Infinity) => Ordering::Greater,
            (Place::Finite(a), Place::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// The rational function field `K = F_q(x)`: genus 0, class number 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseField {
    field: Field,
}

impl BaseField {
    pub fn new(field: Field) -> BaseField {
        BaseField { field }
    }

    pub fn from_order(p: u32, r: u32) -> Result<BaseField> {
        Ok(BaseField::new(Field::new(p, r)?))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn is_even(&self) -> bool {
        self.field.is_even()
    }

    pub fn genus(&self) -> i64 {
        0
    }

    pub fn class_number(&self) -> u64 {
        1
    }

    /// The canonical divisor `-2 inf`.
    pub fn canonical_divisor(&self) -> Divisor {
        Divisor::from_terms([(Place::Infinity, -2)])
    }

    /// Places of degree `d` in canonical order.
    pub fn places_of_degree(&self, d: usize) -> Vec<Place> {
        if d == 0 {
            return Vec::new();
        }
        let mut out = if d == 1 { vec![Place::Infinity] } else { Vec::new() };
        out.extend(self.field.irreducibles(d).into_iter().map(Place::Finite));
        out
    }

    /// All places of degree at most `d`, in canonical order.
    pub fn places_up_to(&self, d: usize) -> Vec<Place> {
        (1..=d).flat_map(|e| self.places_of_degree(e)).collect()
    }

    /// Checks that a finite place polynomial is monic irreducible.
    pub fn place(&self, p: Poly) -> Result<Place> {
        if p.is_monic() && self.field.poly_is_irreducible(&p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::Parse(alloc::format!("{p} is not a monic irreducible")))
        }
    }
}
