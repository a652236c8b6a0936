//! Exact integer identities between family character sums and sums of `chi_c`
//! over Riemann-Roch spaces, used as a self-check of the whole pipeline.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::character::PlaceCatalog;
use crate::divisor::{Divisor, EffectiveDivisors};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::place::{BaseField, Place};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub witness: String,
    pub lhs: i64,
    pub rhs: i64,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.holds())
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(IdentityCheck::holds)
    }

    /// `(name, checks run, failures)` per identity, in first-seen order.
    pub fn tally(&self) -> Vec<(&'static str, usize, usize)> {
        let mut out: Vec<(&'static str, usize, usize)> = Vec::new();
        for c in &self.checks {
            let pos = match out.iter().position(|t| t.0 == c.name) {
                Some(p) => p,
                None => {
                    out.push((c.name, 0, 0));
                    out.len() - 1
                }
            };
            out[pos].1 += 1;
            out[pos].2 += !c.holds() as usize;
        }
        out
    }
}

/// The exponents `n_v = max { n : L(n v) in ker chi_c }` in characteristic two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelDivisor {
    /// `n_v` for the places outside `supp c` of degree at most `deg c`.
    pub exponents: Vec<(Place, i64)>,
    /// `n_v` for every other place outside `supp c`.
    pub default: i64,
    /// `sum n_v v`, present when `deg c` is even.
    pub divisor: Option<Divisor>,
}

impl KernelDivisor {
    pub fn exponent(&self, v: &Place) -> i64 {
        self.exponents.iter().find(|(w, _)| w == v).map_or(self.default, |(_, n)| *n)
    }
}

fn sign(k: i64) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

impl BaseField {
    /// Whether all of `L(a)` lies in the kernel of the additive character `chi_c`.
    fn space_in_kernel(&self, c: &Divisor, a: &Divisor) -> Result<bool> {
        let field = self.field();
        let space = self.rr_space(a);
        for b in space.basis(field) {
            for bit in 0..field.degree() {
                let g = field.rat_scale(&b, Fe(1 << bit));
                if self.chi_c_eval(c, &g)? != 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn kernel_divisor_even(&self, c: &Divisor) -> Result<KernelDivisor> {
        self.require_even()?;
        if c.is_zero() || !c.is_effective() {
            return Err(Error::NotEffective);
        }
        if c.is_even() {
            return Err(Error::IsSquareClass);
        }
        let even_degree = c.degree() % 2 == 0;
        let default = if even_degree { 0 } else { -1 };
        let mut exponents = Vec::new();
        for v in self.places_up_to(c.degree() as usize) {
            if c.contains(&v) {
                continue;
            }
            let mut n = -1;
            while n <= c.degree() + 2 && self.space_in_kernel(c, &Divisor::place(v.clone()).scale(n + 1))? {
                n += 1;
            }
            exponents.push((v, n));
        }
        let divisor = even_degree.then(|| Divisor::from_terms(exponents.iter().filter(|e| e.1 > 0).cloned()));
        Ok(KernelDivisor { exponents, default, divisor })
    }

    /// `sum chi_c(alpha)` over `L(a)`, optionally restricted to `L'(a)`.
    fn chi_c_space_sum(&self, c: &Divisor, a: &Divisor, exact_poles: bool) -> Result<i64> {
        let field = self.field();
        let space = self.rr_space(a);
        let size = space.size().ok_or(Error::Overflow)?;
        let mut total = 0i64;
        for idx in 0..size {
            let g = space.element(field, idx);
            if exact_poles && a.terms().any(|(v, e)| field.ord_at(&g, v) != -e) {
                continue;
            }
            total += self.chi_c_eval(c, &g)? as i64;
        }
        Ok(total)
    }
}

/// Sums of `chi(F/c)` over the extensions of each discriminant, cached.
struct DiscSums<'a> {
    base: &'a BaseField,
    c: Divisor,
    cache: BTreeMap<Divisor, i64>,
}

impl<'a> DiscSums<'a> {
    fn new(base: &'a BaseField, c: &Divisor) -> Self {
        DiscSums { base, c: c.clone(), cache: BTreeMap::new() }
    }

    /// `sum chi(F/c)` over `F` with discriminant `2 d`.
    fn get(&mut self, d: &Divisor) -> Result<i64> {
        if let Some(&v) = self.cache.get(d) {
            return Ok(v);
        }
        let exts = self.base.artin_schreier_classes(d)?;
        let v = exts.iter().map(|f| self.base.chi_divisor(f, &self.c).map(i64::from)).sum::<Result<i64>>()?;
        self.cache.insert(d.clone(), v);
        Ok(v)
    }
}

impl BaseField {
    /// Every identity that applies to this characteristic, over the moduli and
    /// discriminants of degree at most `m + 1`.
    pub fn identity_suite(&self, m: u32) -> Result<IdentityReport> {
        if self.is_even() {
            self.even_identities(m)
        } else {
            self.odd_identities(m)
        }
    }

    /// `(q - 1)/2 sum_F chi(F/c)` against the nested sum over generators with
    /// `v0 = infinity`, for every effective `c` of degree at most `m + 1` with finite support.
    fn odd_identities(&self, m: u32) -> Result<IdentityReport> {
        let q = self.q() as i64;
        let top = m as usize + 1;
        let family = self.enumerate_family(m, 1 << 24)?;
        let catalog = PlaceCatalog::new(self, top);
        let finite: Vec<usize> = (0..catalog.places().len()).filter(|&i| !catalog.places()[i].is_infinite()).collect();
        let chis: Vec<Vec<i8>> =
            family.iter().map(|f| finite.iter().map(|&i| catalog.chi(self, f, i)).collect()).collect();
        let finite_places: Vec<Place> = finite.iter().map(|&i| catalog.places()[i].clone()).collect();
        let mut report = IdentityReport::default();
        for n in 0..=top {
            let mut it = EffectiveDivisors::with_places(finite_places.clone(), n);
            while let Some(terms) = it.advance() {
                let terms: Vec<(usize, u32)> = terms.to_vec();
                let c = Divisor::from_terms(terms.iter().map(|&(j, e)| (finite_places[j].clone(), e as i64)));
                let lhs: i64 = chis
                    .iter()
                    .map(|row| terms.iter().map(|&(j, e)| (row[j] as i64).pow(e)).product::<i64>())
                    .sum();
                let rhs = self.generator_side(&catalog, &finite, &finite_places, &terms, m)?;
                report.checks.push(IdentityCheck {
                    name: "odd_generator_sum",
                    witness: format!("c={c} m={m} v0=inf"),
                    lhs: (q - 1) * lhs,
                    rhs: 2 * rhs,
                });
            }
        }
        Ok(report)
    }

    // sum_b mu(b) sum over polynomials of degree 2k - 1 or 2k (nonzero constants for
    // k = 0) of chi_c, with k = m + 1 - deg b and b prime to c and infinity
    fn generator_side(
        &self,
        catalog: &PlaceCatalog,
        finite: &[usize],
        finite_places: &[Place],
        c_terms: &[(usize, u32)],
        m: u32,
    ) -> Result<i64> {
        let q = self.q() as u128;
        let top = m as usize + 1;
        let mut by_degree = alloc::vec![0i64; 2 * top + 1];
        let limit = q.checked_pow(2 * top as u32 + 1).ok_or(Error::Overflow)?;
        for idx in 1..limit {
            let a = Poly::from_index(idx, q as u32);
            let mut x = 1i64;
            for &(j, e) in c_terms {
                let s = catalog.residue_symbol(self, finite[j], &a) as i64;
                x *= s.pow(e);
                if x == 0 {
                    break;
                }
            }
            by_degree[a.deg() as usize] += x;
        }
        let block = |k: usize| if k == 0 { by_degree[0] } else { by_degree[2 * k - 1] + by_degree[2 * k] };
        let others: Vec<Place> = finite_places
            .iter()
            .enumerate()
            .filter(|(j, _)| !c_terms.iter().any(|t| t.0 == *j))
            .map(|(_, v)| v.clone())
            .collect();
        let mut total = 0i64;
        for deg_b in 0..=top {
            let mut it = EffectiveDivisors::with_places(others.clone(), deg_b);
            let mut mobius = 0i64;
            while let Some(t) = it.advance() {
                if t.iter().all(|&(_, e)| e == 1) {
                    mobius += sign(t.len() as i64);
                }
            }
            total += mobius * block(top - deg_b);
        }
        Ok(total)
    }

    /// Characteristic two: the generator count identity, the vanishing when the
    /// square part escapes the kernel divisor, the telescoping over multiples of a
    /// place, and its unrolled form over square-free discriminants.
    fn even_identities(&self, m: u32) -> Result<IdentityReport> {
        let q = self.q() as i64;
        let top = m as usize + 1;
        let places = self.places_up_to(top);
        let near: Vec<Place> = self.places_up_to(2);
        let mut report = IdentityReport::default();
        for deg_c in 1..=3usize {
            let pool = self.places_up_to(deg_c);
            let mut cs = EffectiveDivisors::with_places(pool.clone(), deg_c);
            let mut moduli = Vec::new();
            while let Some(t) = cs.advance() {
                let c = Divisor::from_terms(t.iter().map(|&(j, e)| (pool[j].clone(), e as i64)));
                if !c.is_even() {
                    moduli.push(c);
                }
            }
            for c in moduli {
                let kernel = self.kernel_divisor_even(&c)?;
                let mut sums = DiscSums::new(self, &c);
                let rest: Vec<Place> = places.iter().filter(|v| !c.contains(v)).cloned().collect();
                let tel = |v: &Place| kernel.exponent(v).div_euclid(2) + 1;
                let sign_c = sign(c.degree());
                for v0 in near.iter().filter(|v| !c.contains(v)) {
                    let rhs = -1 - sign_c;
                    let mut lhs = 0;
                    for i in 1..=tel(v0) {
                        lhs += sums.get(&Divisor::place(v0.clone()).scale(i))?;
                    }
                    report.checks.push(IdentityCheck {
                        name: "even_telescoping",
                        witness: format!("c={c} d=0 v0={v0}"),
                        lhs,
                        rhs,
                    });
                }
                for n in 1..=top {
                    let mut it = EffectiveDivisors::with_places(rest.clone(), n);
                    while let Some(t) = it.advance() {
                        let d = Divisor::from_terms(t.iter().map(|&(j, e)| (rest[j].clone(), e as i64)));
                        let (d1, d2) = d.squarefree_split()?;
                        let target = &d1 + &d2.scale(2);
                        let family_sum = sums.get(&d)?;
                        // each extension has q^l(d2)/2 generators in L'(d1 + 2 d2)
                        let l2 = self.rr_space(&d2).dim() as u32;
                        let exact = self.chi_c_space_sum(&c, &target, true)?;
                        report.checks.push(IdentityCheck {
                            name: "even_generator_count",
                            witness: format!("c={c} d={d}"),
                            lhs: q.pow(l2) * family_sum,
                            rhs: 2 * exact,
                        });
                        let mut inverted = 0;
                        for a in target.sub_divisors()? {
                            let mu = a.mobius()?;
                            if mu != 0 {
                                inverted += mu * self.chi_c_space_sum(&c, &(&target - &a), false)?;
                            }
                        }
                        report.checks.push(IdentityCheck {
                            name: "even_mobius_inversion",
                            witness: format!("c={c} d={d}"),
                            lhs: exact,
                            rhs: inverted,
                        });
                        if let Some(cchi) = &kernel.divisor {
                            if !d2.scale(2).le(cchi) {
                                report.checks.push(IdentityCheck {
                                    name: "even_vanishing",
                                    witness: format!("c={c} d={d} c_chi={cchi}"),
                                    lhs: family_sum,
                                    rhs: 0,
                                });
                            }
                        }
                        for v0 in near.iter().filter(|v| !c.contains(v) && !d.contains(v)) {
                            let mut lhs = 0;
                            for i in 0..=tel(v0) {
                                lhs += sums.get(&(&d + &Divisor::place(v0.clone()).scale(i)))?;
                            }
                            report.checks.push(IdentityCheck {
                                name: "even_telescoping",
                                witness: format!("c={c} d={d} v0={v0}"),
                                lhs,
                                rhs: 0,
                            });
                        }
                        if d.is_squarefree() {
                            let vs: Vec<Place> = d.support().cloned().collect();
                            let k = vs.len() as i64;
                            let mut rhs = sign(k) * (1 + sign_c);
                            let mut prefix = Divisor::zero();
                            for (i, v) in vs.iter().enumerate() {
                                let mut inner = 0;
                                for j in 2..=tel(v) {
                                    inner += sums.get(&(&prefix + &Divisor::place(v.clone()).scale(j)))?;
                                }
                                rhs += sign(k - i as i64) * inner;
                                prefix = &prefix + &Divisor::place(v.clone());
                            }
                            report.checks.push(IdentityCheck {
                                name: "even_unrolled",
                                witness: format!("c={c} d={d}"),
                                lhs: family_sum,
                                rhs,
                            });
                        }
                    }
                }
            }
        }
        Ok(report)
    }
}
