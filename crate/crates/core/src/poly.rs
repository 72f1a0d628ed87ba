//! Weighted polynomial rings `Q[z_1..z_{n+1}]`, their graded pieces, and
//! quotients by a single weighted homogeneous polynomial.
//!
//! Monomials compare lexicographically on exponent vectors with `z_1` largest.
//! Inside one weighted degree this is the graded-lex order, so the leading
//! monomial of a homogeneous `f` is its lex-largest term. A principal ideal is
//! generated by a Groebner basis of one element, hence the standard monomials
//! (those not divisible by `lead(f)`) form a basis of every graded piece of
//! `S/(f)` and division by `f` is the row reduction against `f * S_{m-d}`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn power(i: usize, exp: u32, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = exp;
        Monomial(e)
    }

    pub fn degree(&self, weights: &[u64]) -> u64 {
        self.0.iter().zip(weights).map(|(e, w)| *e as u64 * w).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn constant(c: i64, nvars: usize) -> Self {
        Self::term(Monomial::one(nvars), BigRational::from_integer(c.into()))
    }

    /// `c * z_i`.
    pub fn scaled_var(i: usize, c: i64, nvars: usize) -> Self {
        Self::term(Monomial::var(i, nvars), BigRational::from_integer(c.into()))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Weighted degree if the polynomial is nonzero and homogeneous.
    pub fn homogeneous_degree(&self, weights: &[u64]) -> Option<u64> {
        let mut degrees = self.terms.keys().map(|m| m.degree(weights));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::from_terms(self.terms().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    pub fn derivative(&self, var: usize) -> Poly {
        Poly::from_terms(self.terms().filter(|(m, _)| m.0[var] > 0).map(|(m, c)| {
            let mut e = m.clone();
            let k = e.0[var];
            e.0[var] -= 1;
            (e, c * BigRational::from_integer(BigInt::from(k)))
        }))
    }

    /// Fermat polynomial `Σ z_i^{e_i}`.
    pub fn fermat(exponents: &[u64]) -> Poly {
        let n = exponents.len();
        Poly::from_terms(
            exponents
                .iter()
                .enumerate()
                .map(|(i, &e)| (Monomial::power(i, e as u32, n), BigRational::one())),
        )
    }
}

/// Number of monomials of weighted degree `m` (0 for negative `m`).
pub fn monomial_count(weights: &[u64], m: i64) -> u64 {
    if m < 0 {
        return 0;
    }
    let m = m as usize;
    let mut count = vec![0u64; m + 1];
    count[0] = 1;
    for &w in weights {
        let w = w as usize;
        for j in w..=m {
            count[j] += count[j - w];
        }
    }
    count[m]
}

/// All monomials of weighted degree `m`, descending in graded-lex order.
pub fn monomials_of_degree(weights: &[u64], m: i64) -> Vec<Monomial> {
    fn rec(weights: &[u64], i: usize, left: u64, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == weights.len() {
            if left == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        if i + 1 == weights.len() {
            if left.is_multiple_of(weights[i]) {
                cur[i] = (left / weights[i]) as u32;
                out.push(Monomial(cur.clone()));
                cur[i] = 0;
            }
            return;
        }
        for e in (0..=left / weights[i]).rev() {
            cur[i] = e as u32;
            rec(weights, i + 1, left - e * weights[i], cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if m >= 0 {
        rec(weights, 0, m as u64, &mut vec![0; weights.len()], &mut out);
    }
    out
}

/// `S = Q[z]` with the given weights, or `S/(f)` when a modulus is set.
#[derive(Debug, Clone)]
pub struct GradedRing {
    weights: Vec<u64>,
    modulus: Option<(Poly, Monomial, BigRational)>,
}

impl GradedRing {
    pub fn polynomial(weights: Vec<u64>) -> Self {
        Self {
            weights,
            modulus: None,
        }
    }

    /// Panics if `f` is zero.
    pub fn quotient(weights: Vec<u64>, f: Poly) -> Self {
        let (lead, lc) = f.leading().map(|(m, c)| (m.clone(), c.clone())).expect("nonzero modulus");
        Self {
            weights,
            modulus: Some((f, lead, lc)),
        }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    fn is_standard(&self, m: &Monomial) -> bool {
        match &self.modulus {
            Some((_, lead, _)) => !lead.divides(m),
            None => true,
        }
    }

    /// Basis of the degree-`m` piece, descending graded-lex.
    pub fn basis(&self, m: i64) -> Vec<Monomial> {
        monomials_of_degree(&self.weights, m)
            .into_iter()
            .filter(|b| self.is_standard(b))
            .collect()
    }

    pub fn dim(&self, m: i64) -> u64 {
        match &self.modulus {
            Some((f, _, _)) => {
                let d = f.homogeneous_degree(&self.weights).expect("homogeneous modulus") as i64;
                monomial_count(&self.weights, m) - monomial_count(&self.weights, m - d)
            }
            None => monomial_count(&self.weights, m),
        }
    }

    /// Remainder of division by the modulus; a combination of standard monomials.
    pub fn normal_form(&self, p: &Poly) -> Poly {
        let Some((f, lead, lc)) = &self.modulus else {
            return p.clone();
        };
        let mut work = p.terms.clone();
        let mut out = Poly::zero();
        while let Some((m, c)) = work.pop_last() {
            if !lead.divides(&m) {
                out.terms.insert(m, c);
                continue;
            }
            let q = lead.quotient_of(&m);
            let factor = &c / lc;
            for (t, ct) in f.terms().filter(|(t, _)| *t != lead) {
                let key = t.mul(&q);
                let delta = -(&factor * ct);
                match work.entry(key) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += delta;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_zero_mod(&self, p: &Poly) -> bool {
        self.normal_form(p).is_zero()
    }
}

/// Memoized normal forms of monomials for one ring.
pub(crate) struct NormalForms<'a> {
    ring: &'a GradedRing,
    cache: HashMap<Monomial, Poly>,
}

impl<'a> NormalForms<'a> {
    pub(crate) fn new(ring: &'a GradedRing) -> Self {
        Self {
            ring,
            cache: HashMap::new(),
        }
    }

    /// Normal form of `g * m`.
    pub(crate) fn reduce_product(&mut self, g: &Poly, m: &Monomial) -> Poly {
        let mut out = Poly::zero();
        for (t, c) in g.terms() {
            let mono = t.mul(m);
            let nf = match self.cache.get(&mono) {
                Some(nf) => nf,
                None => {
                    let nf = self.ring.normal_form(&Poly::term(mono.clone(), BigRational::one()));
                    self.cache.entry(mono).or_insert(nf)
                }
            };
            for (s, cs) in nf.terms() {
                out.add_term(s.clone(), c * cs);
            }
        }
        out
    }
}
