//! Polynomials in the even generators and Gaussian kernels.

use std::collections::BTreeMap;

use crate::coeff::Coefficient;

/// Even monomial: sorted `(slot, exponent)` pairs, exponents positive.
pub type EvenMono = Vec<(u16, u16)>;

pub fn mono_mul(a: &EvenMono, b: &EvenMono) -> EvenMono {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].0 < b[j].0 {
            out.push(a[i]);
            i += 1;
        } else if a[i].0 > b[j].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn mono_degree(m: &EvenMono) -> u32 {
    m.iter().map(|(_, e)| *e as u32).sum()
}

pub fn mono_exp(m: &EvenMono, slot: u16) -> u16 {
    m.iter().find(|(s, _)| *s == slot).map_or(0, |(_, e)| *e)
}

pub fn mono_without(m: &EvenMono, slot: u16) -> EvenMono {
    m.iter().copied().filter(|(s, _)| *s != slot).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EvenPoly<S> {
    pub(crate) terms: BTreeMap<EvenMono, S>,
}

impl<S: Coefficient> Default for EvenPoly<S> {
    fn default() -> Self {
        EvenPoly::zero()
    }
}

impl<S: Coefficient> EvenPoly<S> {
    pub fn zero() -> Self {
        EvenPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        EvenPoly::term(c, Vec::new())
    }

    pub fn term(c: S, m: EvenMono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        EvenPoly { terms }
    }

    pub fn var(slot: u16) -> Self {
        EvenPoly::term(S::one(), vec![(slot, 1)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&EvenMono, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> S {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(S::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(mono_degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, slot: u16) -> u16 {
        self.terms.keys().map(|m| mono_exp(m, slot)).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: EvenMono, c: S) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add_ref(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn neg(&self) -> Self {
        EvenPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return EvenPoly::zero();
        }
        if k.is_one() {
            return self.clone();
        }
        EvenPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul_ref(k))).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = EvenPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(mono_mul(m1, m2), c1.mul_ref(c2));
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = EvenPoly::constant(S::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derive(&self, slot: u16) -> Self {
        let mut r = EvenPoly::zero();
        for (m, c) in &self.terms {
            let e = mono_exp(m, slot);
            if e == 0 {
                continue;
            }
            let mut m2: EvenMono = m.clone();
            for f in m2.iter_mut() {
                if f.0 == slot {
                    f.1 -= 1;
                }
            }
            m2.retain(|f| f.1 > 0);
            r.add_term(m2, c.mul_ref(&S::from_i64(e as i64)));
        }
        r
    }

    /// Coefficients as a univariate polynomial in `slot`.
    pub fn coeffs_in(&self, slot: u16) -> BTreeMap<u16, EvenPoly<S>> {
        let mut out: BTreeMap<u16, EvenPoly<S>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(mono_exp(m, slot)).or_default().add_term(mono_without(m, slot), c.clone());
        }
        out
    }

    /// Substitutes `value` for the variable at `slot`.
    pub fn substitute(&self, slot: u16, value: &EvenPoly<S>) -> Self {
        let mut r = EvenPoly::zero();
        let mut powers: Vec<EvenPoly<S>> = vec![EvenPoly::constant(S::one())];
        for (e, p) in self.coeffs_in(slot) {
            while powers.len() <= e as usize {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            r.add_assign(&p.mul(&powers[e as usize]));
        }
        r
    }

    pub fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        let mut r = EvenPoly::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), f(c));
        }
        r
    }

    pub fn slots(&self) -> Vec<u16> {
        let mut v: Vec<u16> = self.terms.keys().flat_map(|m| m.iter().map(|(s, _)| *s)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// `exp(−½ vᵀAv + bᵀv + c)` over even slots. `A` is stored as its upper
/// triangle `(i ≤ j)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Kernel<S> {
    pub(crate) a: BTreeMap<(u16, u16), S>,
    pub(crate) b: BTreeMap<u16, S>,
    pub(crate) c: S,
}

impl<S: Coefficient> Default for Kernel<S> {
    fn default() -> Self {
        Kernel::identity()
    }
}

fn put<K: Ord, S: Coefficient>(m: &mut BTreeMap<K, S>, k: K, v: S) {
    if v.is_zero() {
        m.remove(&k);
    } else {
        m.insert(k, v);
    }
}

impl<S: Coefficient> Kernel<S> {
    pub fn identity() -> Self {
        Kernel { a: BTreeMap::new(), b: BTreeMap::new(), c: S::zero() }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_empty() && self.b.is_empty() && self.c.is_zero()
    }

    pub fn a(&self, i: u16, j: u16) -> S {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.a.get(&key).cloned().unwrap_or_else(S::zero)
    }

    pub fn set_a(&mut self, i: u16, j: u16, v: S) {
        let key = if i <= j { (i, j) } else { (j, i) };
        put(&mut self.a, key, v);
    }

    pub fn b(&self, i: u16) -> S {
        self.b.get(&i).cloned().unwrap_or_else(S::zero)
    }

    pub fn set_b(&mut self, i: u16, v: S) {
        put(&mut self.b, i, v);
    }

    pub fn c(&self) -> &S {
        &self.c
    }

    pub fn set_c(&mut self, v: S) {
        self.c = v;
    }

    pub fn quadratic_entries(&self) -> impl Iterator<Item = (&(u16, u16), &S)> {
        self.a.iter()
    }

    pub fn linear_entries(&self) -> impl Iterator<Item = (&u16, &S)> {
        self.b.iter()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, v) in &o.a {
            let s = r.a.get(k).map_or_else(|| v.clone(), |x| x.add_ref(v));
            put(&mut r.a, *k, s);
        }
        for (k, v) in &o.b {
            let s = r.b.get(k).map_or_else(|| v.clone(), |x| x.add_ref(v));
            put(&mut r.b, *k, s);
        }
        r.c = r.c.add_ref(&o.c);
        r
    }

    pub fn neg(&self) -> Self {
        Kernel {
            a: self.a.iter().map(|(k, v)| (*k, v.neg_ref())).collect(),
            b: self.b.iter().map(|(k, v)| (*k, v.neg_ref())).collect(),
            c: self.c.neg_ref(),
        }
    }

    /// The exponent as a polynomial.
    pub fn exponent(&self) -> EvenPoly<S> {
        let half = S::from_i64(2).inv().unwrap();
        let mut p = EvenPoly::constant(self.c.clone());
        for ((i, j), v) in &self.a {
            if i == j {
                p.add_term(vec![(*i, 2)], v.mul_ref(&half).neg_ref());
            } else {
                p.add_term(vec![(*i, 1), (*j, 1)], v.neg_ref());
            }
        }
        for (i, v) in &self.b {
            p.add_term(vec![(*i, 1)], v.clone());
        }
        p
    }

    /// Reads a kernel off a polynomial of degree at most two.
    pub fn from_exponent(p: &EvenPoly<S>) -> Option<Self> {
        let mut k = Kernel::identity();
        let two = S::from_i64(2);
        for (m, c) in p.terms() {
            match m.as_slice() {
                [] => k.c = c.clone(),
                [(i, 1)] => k.set_b(*i, c.clone()),
                [(i, 2)] => k.set_a(*i, *i, c.mul_ref(&two).neg_ref()),
                [(i, 1), (j, 1)] => k.set_a(*i, *j, c.neg_ref()),
                _ => return None,
            }
        }
        Some(k)
    }

    /// `∂E/∂v` at `slot`: `−(Av)_slot + b_slot`.
    pub fn gradient(&self, slot: u16) -> EvenPoly<S> {
        let mut p = EvenPoly::constant(self.b(slot));
        for ((i, j), v) in &self.a {
            if *i == slot {
                p.add_term(vec![(*j, 1)], v.neg_ref());
            }
            if *j == slot && i != j {
                p.add_term(vec![(*i, 1)], v.neg_ref());
            }
        }
        p
    }

    /// Even slots mentioned by the quadratic or linear part.
    pub fn slots(&self) -> Vec<u16> {
        let mut v: Vec<u16> =
            self.a.keys().flat_map(|(i, j)| [*i, *j]).chain(self.b.keys().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn map_slots(&self, f: impl Fn(u16) -> u16) -> Self {
        let mut k = Kernel::identity();
        for ((i, j), v) in &self.a {
            k.set_a(f(*i), f(*j), v.clone());
        }
        for (i, v) in &self.b {
            k.set_b(f(*i), v.clone());
        }
        k.c = self.c.clone();
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Scalar;

    #[test]
    fn exponent_round_trip() {
        let mut k: Kernel<Scalar> = Kernel::identity();
        k.set_a(0, 0, Scalar::from_i64(3));
        k.set_a(0, 1, Scalar::from_ratio(1, 2));
        k.set_b(1, Scalar::i());
        k.set_c(Scalar::from_i64(5));
        let p = k.exponent();
        assert_eq!(Kernel::from_exponent(&p).unwrap(), k);
        assert_eq!(k.gradient(0), p.derive(0));
        assert_eq!(k.gradient(1), p.derive(1));
    }

    #[test]
    fn substitution_expands_powers() {
        let x: EvenPoly<Scalar> = EvenPoly::var(0);
        let p = x.mul(&x).add(&EvenPoly::constant(Scalar::one()));
        let shifted = p.substitute(0, &x.add(&EvenPoly::constant(Scalar::from_i64(2))));
        assert_eq!(shifted.constant_term(), Scalar::from_i64(5));
        assert_eq!(shifted.degree(), 2);
    }

    use num_traits::One;
}
