//! Residue rings `F_q[x]/(c)` for a modulus supported on finite places, with
//! multiplicative and additive characters, Gauss sums and incomplete sums.
//!
//! Ring elements are addressed by the base-`q` index of their reduced
//! representative; the same index read in base `p` gives coordinates over `F_p`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::cyclo::CycloSum;
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::linalg;
use crate::place::{BaseField, Place};
use crate::poly::Poly;
use crate::rational::RationalFunction;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Component {
    place: Poly,
    exp: u32,
    power: Poly,
    // idempotent lifting a residue mod `power` to the full ring
    lift: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRing {
    modulus: Divisor,
    q: u32,
    p: u32,
    c: Poly,
    components: Vec<Component>,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 { a } else { gcd(b, a % b) }
}

impl BaseField {
    /// `O(c)/Pi(c)`, realised as `F_q[x]/(c)`.
    pub fn quotient_ring(&self, c: &Divisor) -> Result<QuotientRing> {
        if !c.is_effective() || c.is_zero() {
            return Err(Error::NotEffective);
        }
        if c.contains(&Place::Infinity) {
            return Err(Error::InfinityInModulus);
        }
        let field = self.field();
        let mut full = Poly::one();
        let mut parts = Vec::new();
        for (v, n) in c.terms() {
            let p = v.poly().expect("finite place").clone();
            let power = field.poly_pow(&p, n as u32);
            full = field.poly_mul(&full, &power);
            parts.push((p, n as u32, power));
        }
        let components = parts
            .into_iter()
            .map(|(place, exp, power)| {
                let rest = field.poly_divrem(&full, &power).0;
                let inv = field.poly_inv_mod(&rest, &power).expect("coprime parts");
                let lift = field.poly_mul(&rest, &inv);
                Component { place, exp, power, lift }
            })
            .collect();
        Ok(QuotientRing { modulus: c.clone(), q: self.q(), p: field.characteristic(), c: full, components })
    }
}

impl QuotientRing {
    pub fn modulus(&self) -> &Divisor {
        &self.modulus
    }

    pub fn modulus_poly(&self) -> &Poly {
        &self.c
    }

    pub fn degree(&self) -> usize {
        self.c.deg() as usize
    }

    pub fn size(&self) -> usize {
        (self.q as usize).pow(self.degree() as u32)
    }

    pub fn is_squarefree(&self) -> bool {
        self.components.iter().all(|c| c.exp == 1)
    }

    /// `(place, exponent)` of each CRT component.
    pub fn components(&self) -> impl Iterator<Item = (&Poly, u32)> + '_ {
        self.components.iter().map(|c| (&c.place, c.exp))
    }

    pub fn elem(&self, i: usize) -> Poly {
        Poly::from_index(i as u128, self.q)
    }

    pub fn index_of(&self, field: &Field, a: &Poly) -> usize {
        field.poly_rem(a, &self.c).index(self.q) as usize
    }

    pub fn one(&self, field: &Field) -> usize {
        self.index_of(field, &Poly::one())
    }

    pub fn add(&self, field: &Field, a: usize, b: usize) -> usize {
        field.poly_add(&self.elem(a), &self.elem(b)).index(self.q) as usize
    }

    pub fn mul(&self, field: &Field, a: usize, b: usize) -> usize {
        self.index_of(field, &field.poly_mul(&self.elem(a), &self.elem(b)))
    }

    pub fn is_unit(&self, field: &Field, a: usize) -> bool {
        let g = field.poly_gcd(&self.elem(a), &self.c);
        g.deg() == 0
    }

    pub fn units(&self, field: &Field) -> Vec<usize> {
        (0..self.size()).filter(|&a| self.is_unit(field, a)).collect()
    }

    /// Residues modulo each `p^e`.
    pub fn project(&self, field: &Field, a: usize) -> Vec<Poly> {
        let x = self.elem(a);
        self.components.iter().map(|c| field.poly_rem(&x, &c.power)).collect()
    }

    /// Inverse of [`QuotientRing::project`].
    pub fn lift(&self, field: &Field, parts: &[Poly]) -> usize {
        let mut acc = Poly::zero();
        for (c, r) in self.components.iter().zip(parts) {
            acc = field.poly_add(&acc, &field.poly_mul(r, &c.lift));
        }
        self.index_of(field, &acc)
    }

    /// Reduction of an element integral at every place of the modulus.
    pub fn theta(&self, field: &Field, a: &RationalFunction) -> Result<usize> {
        let inv = field.poly_inv_mod(a.den(), &self.c).ok_or(Error::NotIntegralAtModulus)?;
        Ok(self.index_of(field, &field.poly_mul(a.num(), &inv)))
    }

    fn coords(&self, i: usize) -> Vec<Fe> {
        let x = self.elem(i);
        (0..self.degree()).map(|j| x.coeff(j)).collect()
    }

    fn index_of_coords(&self, v: &[Fe]) -> usize {
        Poly::from_coeffs(v.to_vec()).index(self.q) as usize
    }

    /// All `F_q`-combinations of `gens`, sorted.
    pub fn span(&self, field: &Field, gens: &[usize]) -> Vec<usize> {
        let mut rows: Vec<Vec<Fe>> = gens.iter().map(|&g| self.coords(g)).collect();
        linalg::row_reduce(field, &mut rows, self.degree());
        let mut out = vec![0usize];
        for row in rows {
            let r = self.index_of_coords(&row);
            let mut next = Vec::with_capacity(out.len() * self.q as usize);
            for c in field.elements() {
                let scaled = self.index_of(field, &field.poly_scale(&self.elem(r), c));
                next.extend(out.iter().map(|&x| self.add(field, x, scaled)));
            }
            out = next;
        }
        out.sort_unstable();
        out
    }

    /// `theta(L(a))` as a sorted set of ring elements.
    pub fn theta_image(&self, base: &BaseField, a: &Divisor) -> Result<Vec<usize>> {
        if !a.is_disjoint(&self.modulus) {
            return Err(Error::OverlappingSupport);
        }
        let field = base.field();
        let space = base.rr_space(a);
        let gens: Vec<usize> =
            space.basis(field).iter().map(|x| self.theta(field, x)).collect::<Result<_>>()?;
        Ok(self.span(field, &gens))
    }

    /// Base-`p` digits of an element, i.e. its coordinates over `F_p`.
    pub fn fp_coords(&self, a: usize) -> Vec<u32> {
        let n = self.fp_dim();
        let mut a = a;
        (0..n)
            .map(|_| {
                let d = (a % self.p as usize) as u32;
                a /= self.p as usize;
                d
            })
            .collect()
    }

    pub fn from_fp_coords(&self, v: &[u32]) -> usize {
        v.iter().rev().fold(0usize, |acc, &d| acc * self.p as usize + d as usize)
    }

    /// Dimension over the prime field.
    pub fn fp_dim(&self) -> usize {
        let (mut r, mut q) = (0, self.q);
        while q > 1 {
            q /= self.p;
            r += 1;
        }
        r * self.degree()
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Monic divisors of the modulus polynomial.
    pub fn modulus_divisors(&self, field: &Field) -> Vec<Poly> {
        let mut out = vec![Poly::one()];
        for c in &self.components {
            let mut next = Vec::new();
            for h in &out {
                let mut acc = h.clone();
                for _ in 0..=c.exp {
                    next.push(acc.clone());
                    acc = field.poly_mul(&acc, &c.place);
                }
            }
            out = next;
        }
        out
    }

    /// The ideal `(h)` as a sorted set.
    pub fn ideal(&self, field: &Field, h: &Poly) -> Vec<usize> {
        let mut out: Vec<usize> =
            (0..self.size()).map(|t| self.index_of(field, &field.poly_mul(h, &self.elem(t)))).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// All `F_p`-subspaces of `F_p^n`, each given by a basis in reduced echelon form.
pub fn fp_subspaces(p: u32, n: usize) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    for k in 0..=n {
        let mut pivots: Vec<usize> = (0..k).collect();
        loop {
            // free slots: (row, col) with col > pivot[row] and col not a pivot
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| ((pivots[i] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
                .collect();
            let total = (p as u64).pow(free.len() as u32);
            for mut code in 0..total {
                let mut rows = vec![vec![0u32; n]; k];
                for (i, &pc) in pivots.iter().enumerate() {
                    rows[i][pc] = 1;
                }
                for &(i, c) in &free {
                    rows[i][c] = (code % p as u64) as u32;
                    code /= p as u64;
                }
                out.push(rows);
            }
            // next k-subset of 0..n
            let mut i = k;
            while i > 0 && pivots[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            pivots[i - 1] += 1;
            for j in i..k {
                pivots[j] = pivots[j - 1] + 1;
            }
        }
    }
    out
}

/// Sorted elements of the `F_p`-span of the given coordinate vectors.
pub fn fp_span(ring: &QuotientRing, basis: &[Vec<u32>]) -> Vec<usize> {
    let p = ring.characteristic();
    let n = ring.fp_dim();
    let mut out = vec![vec![0u32; n]];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for c in 0..p {
            next.extend(out.iter().map(|v| v.iter().zip(b).map(|(&x, &y)| (x + c * y) % p).collect::<Vec<_>>()));
        }
        out = next;
    }
    let mut idx: Vec<usize> = out.iter().map(|v| ring.from_fp_coords(v)).collect();
    idx.sort_unstable();
    idx
}

/// A multiplicative character with values in the `order`-th roots of unity,
/// stored as a table of exponents (`None` off the units).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultChar {
    modulus: Poly,
    order: u32,
    table: Vec<Option<u32>>,
}

/// Discrete logarithms in `F_q[x]/(p)` for an irreducible `p`.
struct ResidueLog {
    size: u64,
    log: Vec<u32>,
}

impl ResidueLog {
    fn new(field: &Field, q: u32, p: &Poly) -> ResidueLog {
        let size = (q as u64).pow(p.deg() as u32);
        let order = size - 1;
        let factors = prime_factors(order);
        let gen = (1..size)
            .map(|i| Poly::from_index(i as u128, q))
            .find(|g| {
                factors.iter().all(|&l| !field.poly_pow_mod(g, (order / l) as u128, p).is_one())
            })
            .expect("cyclic unit group");
        let mut log = vec![0u32; size as usize];
        let mut x = Poly::one();
        for k in 0..order {
            log[x.index(q) as usize] = k as u32;
            x = field.poly_mul_mod(&x, &gen, p);
        }
        ResidueLog { size, log }
    }
}

impl MultChar {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// `Phi(r) = zeta^k`, or `None` when `r` is not a unit.
    pub fn exponent(&self, r: usize) -> Option<u32> {
        self.table[r]
    }

    pub fn value(&self, r: usize) -> Complex64 {
        match self.table[r] {
            None => Complex64::new(0.0, 0.0),
            Some(k) => Complex64::from_polar(1.0, 2.0 * PI * k as f64 / self.order as f64),
        }
    }

    pub fn conj(&self) -> MultChar {
        let n = self.order;
        MultChar { modulus: self.modulus.clone(), order: n, table: self.table.iter().map(|e| e.map(|k| (n - k) % n)).collect() }
    }

    pub fn is_principal(&self) -> bool {
        self.table.iter().all(|e| matches!(e, None | Some(0)))
    }

    pub fn principal(field: &Field, ring: &QuotientRing) -> MultChar {
        let table = (0..ring.size()).map(|r| ring.is_unit(field, r).then_some(0)).collect();
        MultChar { modulus: ring.c.clone(), order: 1, table }
    }

    /// Every character of a square-free ring, by exponent tuples in odometer order
    /// (last component fastest).
    pub fn all(field: &Field, ring: &QuotientRing) -> Result<Vec<MultChar>> {
        if !ring.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let logs: Vec<ResidueLog> = ring.components.iter().map(|c| ResidueLog::new(field, ring.q, &c.place)).collect();
        let orders: Vec<u32> = logs.iter().map(|l| (l.size - 1) as u32).collect();
        let total: u64 = orders.iter().map(|&o| o as u64).product();
        let residues: Vec<Option<Vec<u32>>> = (0..ring.size())
            .map(|r| {
                let parts = ring.project(field, r);
                parts
                    .iter()
                    .zip(&logs)
                    .map(|(x, l)| (!x.is_zero()).then(|| l.log[x.index(ring.q) as usize]))
                    .collect()
            })
            .collect();
        let mut out = Vec::with_capacity(total as usize);
        let mut exps = vec![0u32; orders.len()];
        for _ in 0..total {
            out.push(Self::from_logs(ring, &orders, &residues, &exps));
            for i in (0..exps.len()).rev() {
                exps[i] += 1;
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = 0;
            }
        }
        Ok(out)
    }

    /// The character `u -> prod zeta_{Q_i - 1}^{a_i log_i(u)}` on a square-free ring.
    pub fn from_exponents(field: &Field, ring: &QuotientRing, exps: &[u32]) -> Result<MultChar> {
        if !ring.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let logs: Vec<ResidueLog> = ring.components.iter().map(|c| ResidueLog::new(field, ring.q, &c.place)).collect();
        let orders: Vec<u32> = logs.iter().map(|l| (l.size - 1) as u32).collect();
        let residues: Vec<Option<Vec<u32>>> = (0..ring.size())
            .map(|r| {
                ring.project(field, r)
                    .iter()
                    .zip(&logs)
                    .map(|(x, l)| (!x.is_zero()).then(|| l.log[x.index(ring.q) as usize]))
                    .collect()
            })
            .collect();
        Ok(Self::from_logs(ring, &orders, &residues, exps))
    }

    fn from_logs(ring: &QuotientRing, orders: &[u32], residues: &[Option<Vec<u32>>], exps: &[u32]) -> MultChar {
        // reduce to the exact order of this character
        let n = orders.iter().zip(exps).fold(1u32, |acc, (&o, &a)| {
            let k = o / gcd(o, a % o.max(1));
            acc / gcd(acc, k) * k
        });
        let table = residues
            .iter()
            .map(|res| {
                res.as_ref().map(|logs| {
                    let mut e = 0u64;
                    for ((&o, &a), &l) in orders.iter().zip(exps).zip(logs) {
                        // a * l / o as a fraction of a full turn, scaled to n
                        e += (a as u64 * l as u64 % o as u64) * n as u64 / o as u64;
                    }
                    (e % n as u64) as u32
                })
            })
            .collect();
        MultChar { modulus: ring.c.clone(), order: n, table }
    }

    /// `prod_v chi_v(r)^ord_v(c)` built from quadratic residue symbols; odd `q` only.
    pub fn quadratic(field: &Field, ring: &QuotientRing) -> Result<MultChar> {
        if field.is_even() {
            return Err(Error::EvenCharacteristic);
        }
        let table = (0..ring.size())
            .map(|r| {
                let x = ring.elem(r);
                let mut sign = 1i8;
                for c in &ring.components {
                    let s = field.poly_residue_symbol(&field.poly_rem(&x, &c.place), &c.place).expect("odd");
                    if s == 0 {
                        return None;
                    }
                    if c.exp % 2 == 1 {
                        sign *= s;
                    }
                }
                Some(if sign < 0 { 1 } else { 0 })
            })
            .collect();
        Ok(MultChar { modulus: ring.c.clone(), order: 2, table })
    }

    /// For every nonzero ideal `I` there are units `u = v mod I` with `Phi(u) != Phi(v)`.
    pub fn is_primitive(&self, field: &Field, ring: &QuotientRing) -> bool {
        // enough to test the maximal proper ideals I = (c / p)
        ring.components.iter().all(|comp| {
            let h = field.poly_divrem(&ring.c, &comp.place).0;
            let width = (ring.q as usize).pow(comp.place.deg() as u32);
            (0..width).any(|t| {
                let u = field.poly_add(&Poly::one(), &field.poly_mul(&h, &Poly::from_index(t as u128, ring.q)));
                let u = ring.index_of(field, &u);
                matches!(self.table[u], Some(k) if k != 0)
            })
        })
    }

    /// Exact `sum Phi(r)` over a set of ring elements.
    pub fn sum_over(&self, set: &[usize]) -> CycloSum {
        let mut s = CycloSum::new(self.order);
        for &r in set {
            if let Some(k) = self.table[r] {
                s.add_root(k, 1);
            }
        }
        s
    }
}

/// An additive character `r -> exp(2 pi i lambda(r) / p)` with `lambda` an
/// `F_p`-linear functional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddChar {
    modulus: Poly,
    p: u32,
    lambda: Vec<u32>,
}

impl AddChar {
    /// Sum over components of the absolute trace of the top `p`-adic digit.
    /// Fails if the character is trivial on a nonzero principal ideal.
    pub fn standard(field: &Field, ring: &QuotientRing) -> Result<AddChar> {
        let lambda: Vec<u32> = (0..ring.size())
            .map(|r| {
                let x = ring.elem(r);
                let mut acc = 0u32;
                for c in &ring.components {
                    let local = field.poly_rem(&x, &c.power);
                    let shift = field.poly_pow(&c.place, c.exp - 1);
                    let top = field.poly_divrem(&local, &shift).0;
                    acc += field.poly_abs_trace(&top, &c.place);
                }
                acc % ring.p
            })
            .collect();
        let psi = AddChar { modulus: ring.c.clone(), p: ring.p, lambda };
        for h in 1..ring.size() {
            if (0..ring.size()).all(|g| psi.lambda[ring.mul(field, g, h)] == 0) {
                return Err(Error::DegenerateCharacter);
            }
        }
        Ok(psi)
    }

    pub fn lambda(&self, r: usize) -> u32 {
        self.lambda[r]
    }

    pub fn value(&self, r: usize) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.lambda[r] as f64 / self.p as f64)
    }

    /// Exact `sum psi(h)` over a set.
    pub fn sum_over(&self, set: &[usize]) -> CycloSum {
        let mut s = CycloSum::new(self.p);
        for &h in set {
            s.add_root(self.lambda[h], 1);
        }
        s
    }
}

/// `tau(Phi) = sum_r Phi(r) psi(r)`.
pub fn gauss_sum(phi: &MultChar, psi: &AddChar) -> Result<Complex64> {
    if phi.modulus != psi.modulus {
        return Err(Error::RingMismatch);
    }
    Ok((0..phi.table.len()).map(|r| phi.value(r) * psi.value(r)).sum())
}

/// `sum_r conj(Phi(r)) psi(r r0)`, which equals `Phi(r0) tau(conj Phi)` for primitive `Phi`.
pub fn twisted_sum(field: &Field, ring: &QuotientRing, phi: &MultChar, psi: &AddChar, r0: usize) -> Result<Complex64> {
    if phi.modulus != ring.c || psi.modulus != ring.c {
        return Err(Error::RingMismatch);
    }
    if !phi.is_primitive(field, ring) {
        return Err(Error::NotPrimitive);
    }
    Ok((0..ring.size()).map(|r| phi.value(r).conj() * psi.value(ring.mul(field, r, r0))).sum())
}

/// `#{u unit : lambda(u h) = 0 for all h in H}`.
pub fn annihilating_units(field: &Field, ring: &QuotientRing, psi: &AddChar, h: &[usize]) -> usize {
    ring.units(field).into_iter().filter(|&u| h.iter().all(|&x| psi.lambda(ring.mul(field, u, x)) == 0)).count()
}

fn check_sum_inputs(ring: &QuotientRing, v0: &Place, d: &Divisor) -> Result<()> {
    if ring.modulus.contains(v0) || d.contains(v0) {
        return Err(Error::PlaceInSupport);
    }
    if !d.is_effective() {
        return Err(Error::NotEffective);
    }
    if !d.is_disjoint(&ring.modulus) {
        return Err(Error::OverlappingSupport);
    }
    Ok(())
}

/// `sum Phi(r)` over the set `theta(L(n v0 - d))`, exactly.
pub fn incomplete_sum(
    base: &BaseField,
    ring: &QuotientRing,
    phi: &MultChar,
    n: i64,
    v0: &Place,
    d: &Divisor,
) -> Result<CycloSum> {
    check_sum_inputs(ring, v0, d)?;
    if phi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    if phi.modulus != ring.c {
        return Err(Error::RingMismatch);
    }
    let a = &Divisor::from_terms([(v0.clone(), n)]) - d;
    Ok(phi.sum_over(&ring.theta_image(base, &a)?))
}

/// `#{u unit : u theta(L(n v0 - d)) in G}` for a proper subgroup `G` given by an
/// `F_p`-basis in coordinates.
pub fn subgroup_multiplier_count(
    base: &BaseField,
    ring: &QuotientRing,
    g_basis: &[Vec<u32>],
    n: i64,
    v0: &Place,
    d: &Divisor,
) -> Result<usize> {
    check_sum_inputs(ring, v0, d)?;
    let g = fp_span(ring, g_basis);
    if g.len() >= ring.size() || g_basis.iter().any(|b| b.len() != ring.fp_dim()) {
        return Err(Error::NotASubgroup);
    }
    let field = base.field();
    let a = &Divisor::from_terms([(v0.clone(), n)]) - d;
    let image = ring.theta_image(base, &a)?;
    Ok(ring
        .units(field)
        .into_iter()
        .filter(|&u| image.iter().all(|&x| g.binary_search(&ring.mul(field, u, x)).is_ok()))
        .count())
}

/// One `(c, d, v0, n)` cell of the incomplete-sum sweep, reporting the character
/// with the largest sum.
#[derive(Clone, Debug, PartialEq)]
pub struct CharSumRow {
    pub c: Divisor,
    pub d: Divisor,
    pub v0: Place,
    pub n: i64,
    pub sum: Complex64,
    pub bound_trivial: f64,
    pub bound_pv: f64,
    pub ratio: f64,
    /// `n deg v0 >= deg c + deg d - 1`, where every sum must vanish.
    pub vanishing: bool,
    /// Number of characters whose sum is not exactly zero in the vanishing regime.
    pub nonzero: usize,
    pub characters: usize,
}

/// Non-principal characters the sweep can use: all of them on square-free moduli,
/// the quadratic one otherwise (odd `q` only).
pub fn sweep_characters(field: &Field, ring: &QuotientRing) -> Result<Vec<MultChar>> {
    let chars = if ring.is_squarefree() {
        MultChar::all(field, ring)?
    } else if field.is_even() {
        Vec::new()
    } else {
        vec![MultChar::quadratic(field, ring)?]
    };
    Ok(chars.into_iter().filter(|c| !c.is_principal()).collect())
}

/// Incomplete sums over `theta(L(n v0 - d))` for every `v0` of degree at most
/// `max_v0_degree` outside `supp c`, `d` zero or a place of degree at most
/// `max_d_degree`, and `n` from 0 to one step into the vanishing regime.
pub fn charsum_sweep(base: &BaseField, c: &Divisor, max_v0_degree: usize, max_d_degree: usize) -> Result<Vec<CharSumRow>> {
    let field = base.field();
    let ring = base.quotient_ring(c)?;
    let chars = sweep_characters(field, &ring)?;
    if chars.is_empty() {
        return Ok(Vec::new());
    }
    let q = base.q() as f64;
    let deg_c = c.degree();
    let mut rows = Vec::new();
    for v0 in base.places_up_to(max_v0_degree).into_iter().filter(|v| !c.contains(v)) {
        let dv0 = v0.degree() as i64;
        let mut ds = vec![Divisor::zero()];
        ds.extend(
            base.places_up_to(max_d_degree)
                .into_iter()
                .filter(|v| !c.contains(v) && *v != v0)
                .map(Divisor::place),
        );
        for d in ds {
            let threshold = deg_c + d.degree() - 1;
            let first_vanishing = (threshold.max(0) + dv0 - 1) / dv0;
            for n in 0..=first_vanishing {
                let a = &Divisor::from_terms([(v0.clone(), n)]) - &d;
                let image = ring.theta_image(base, &a)?;
                let vanishing = n * dv0 >= threshold;
                let mut worst = Complex64::new(0.0, 0.0);
                let mut nonzero = 0;
                for phi in &chars {
                    let s = phi.sum_over(&image);
                    if vanishing && !s.is_zero() {
                        nonzero += 1;
                    }
                    let z = s.to_complex();
                    if z.norm() > worst.norm() + 1e-12 {
                        worst = z;
                    }
                }
                let bound_trivial = libm::pow(q, (n * dv0 - d.degree()) as f64);
                let bound_pv = libm::pow(q, deg_c as f64 / 2.0 + dv0 as f64);
                rows.push(CharSumRow {
                    c: c.clone(),
                    d: d.clone(),
                    v0: v0.clone(),
                    n,
                    sum: worst,
                    bound_trivial,
                    bound_pv,
                    ratio: worst.norm() / bound_trivial.min(bound_pv),
                    vanishing,
                    nonzero,
                    characters: chars.len(),
                });
            }
        }
    }
    Ok(rows)
}
