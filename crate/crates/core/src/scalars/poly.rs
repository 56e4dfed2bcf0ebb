//! Sparse multivariate polynomials over ℚ(i) in the root variables.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::gauss::GaussRational;

/// A root variable: `q_p` with `q_p² = p` for a named parameter, or `τ`
/// with `τ² = 2π`. Parameters sort by name and `τ` comes last.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Root(Arc<str>),
    Tau,
}

impl Sym {
    pub fn root(name: &str) -> Sym {
        Sym::Root(Arc::from(name))
    }
}

/// A monomial, stored as sorted `(symbol, exponent)` pairs with positive
/// exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(pub(crate) Vec<(Sym, u32)>);

impl Mono {
    pub fn one() -> Mono {
        Mono(Vec::new())
    }

    pub fn var(s: Sym, e: u32) -> Mono {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(s, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exp(&self, s: &Sym) -> u32 {
        self.0.iter().find(|(t, _)| t == s).map_or(0, |(_, e)| *e)
    }

    pub fn factors(&self) -> &[(Sym, u32)] {
        &self.0
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            match self.0[i].0.cmp(&o.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(o.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + o.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        Mono(out)
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (s, e) in &self.0 {
            let d = if j < o.0.len() && &o.0[j].0 == s {
                j += 1;
                o.0[j - 1].1
            } else {
                0
            };
            if d > *e {
                return None;
            }
            if e - d > 0 {
                out.push((s.clone(), e - d));
            }
        }
        if j < o.0.len() {
            return None;
        }
        Some(Mono(out))
    }

    pub fn gcd(&self, o: &Mono) -> Mono {
        let mut out = Vec::new();
        for (s, e) in &self.0 {
            let f = o.exp(s);
            if f > 0 {
                out.push((s.clone(), (*e).min(f)));
            }
        }
        Mono(out)
    }

    pub fn without(&self, s: &Sym) -> Mono {
        Mono(self.0.iter().filter(|(t, _)| t != s).cloned().collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        match self.degree().cmp(&o.degree()) {
            Ordering::Equal => {}
            other => return other,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), o.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((s, e)), Some((t, f))) => match s.cmp(t) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(f);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Polynomial with Gaussian-rational coefficients. Terms are kept in a map
/// ordered by degree-lexicographic monomial order, so the leading term is
/// the last entry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    pub(crate) terms: BTreeMap<Mono, GaussRational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Poly {
        Poly::term(c, Mono::one())
    }

    pub fn term(c: GaussRational, m: Mono) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &GaussRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<GaussRational> {
        match self.terms.len() {
            0 => Some(GaussRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&GaussRational, &Mono)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((c, m))
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &GaussRational)> {
        self.terms.iter().next_back()
    }

    pub fn syms(&self) -> Vec<Sym> {
        let mut v: Vec<Sym> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(s, _)| s.clone()))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    fn add_term(&mut self, m: Mono, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }

    pub fn scale(&self, k: &GaussRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul_term(&self, k: &GaussRational, mono: &Mono) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c * k)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Makes the leading coefficient one; returns the divisor used.
    pub fn monic(&self) -> (Poly, GaussRational) {
        match self.leading() {
            None => (Poly::zero(), GaussRational::one()),
            Some((_, lc)) => {
                let lc = lc.clone();
                (self.scale(&lc.inv().unwrap()), lc)
            }
        }
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        if let Some((c, m)) = d.as_monomial() {
            let ci = c.inv()?;
            let mut q = Poly::zero();
            for (mm, cc) in &self.terms {
                q.terms.insert(mm.div(m)?, cc * &ci);
            }
            return Some(q);
        }
        let dci = dc.inv()?;
        let mut p = self.clone();
        let mut q = Poly::zero();
        while let Some((pm, pc)) = p.leading() {
            let m = pm.div(dm)?;
            let c = pc * &dci;
            p = p.sub(&d.mul_term(&c, &m));
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Smallest monomial dividing every term.
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.keys();
        match it.next() {
            None => Mono::one(),
            Some(first) => it.fold(first.clone(), |g, m| g.gcd(m)),
        }
    }

    pub fn degree_in(&self, s: &Sym) -> u32 {
        self.terms.keys().map(|m| m.exp(s)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Coefficients as a univariate polynomial in `s`.
    pub fn coeffs_in(&self, s: &Sym) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(s);
            out.entry(e).or_insert_with(Poly::zero).add_term(m.without(s), c.clone());
        }
        out
    }

    fn lc_in(&self, s: &Sym) -> Poly {
        let cs = self.coeffs_in(s);
        cs.into_iter().next_back().map(|(_, p)| p).unwrap_or_else(Poly::zero)
    }

    fn content_in(&self, s: &Sym) -> Poly {
        let mut g = Poly::zero();
        for p in self.coeffs_in(s).values() {
            g = gcd(&g, p);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn prem(&self, b: &Poly, s: &Sym) -> Poly {
        let db = b.degree_in(s);
        let lb = b.lc_in(s);
        let mut r = self.clone();
        let mut e = (self.degree_in(s) + 1).saturating_sub(db);
        while !r.is_zero() && r.degree_in(s) >= db {
            let dr = r.degree_in(s);
            let t = r.lc_in(s).mul_term(&GaussRational::one(), &Mono::var(s.clone(), dr - db));
            r = lb.mul(&r).sub(&t.mul(b));
            e = e.saturating_sub(1);
        }
        lb.pow(e).mul(&r)
    }

    /// Substitutes `value` for every occurrence of `s`.
    pub fn substitute(&self, s: &Sym, value: &Poly) -> Poly {
        let cs = self.coeffs_in(s);
        let mut r = Poly::zero();
        for (e, p) in cs {
            r = r.add(&p.mul(&value.pow(e)));
        }
        r
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic().0;
    }
    if b.is_zero() {
        return a.monic().0;
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    if let Some((_, m)) = a.as_monomial() {
        return Poly::term(GaussRational::one(), m.gcd(&b.monomial_content()));
    }
    if let Some((_, m)) = b.as_monomial() {
        return Poly::term(GaussRational::one(), m.gcd(&a.monomial_content()));
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let gm = ma.gcd(&mb);
    let a = a.div_exact(&Poly::term(GaussRational::one(), ma)).unwrap();
    let b = b.div_exact(&Poly::term(GaussRational::one(), mb)).unwrap();
    let g = gcd_stripped(&a, &b);
    g.mul_term(&GaussRational::one(), &gm).monic().0
}

fn gcd_stripped(a: &Poly, b: &Poly) -> Poly {
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    if a == b {
        return a.monic().0;
    }
    let sa = a.syms();
    let sb = b.syms();
    let shared: Vec<&Sym> = sa.iter().filter(|s| sb.contains(s)).collect();
    if let Some(s) = sa.iter().find(|s| !sb.contains(s)) {
        return gcd(&a.content_in(s), b);
    }
    if let Some(s) = sb.iter().find(|s| !sa.contains(s)) {
        return gcd(a, &b.content_in(s));
    }
    let s = match shared.first() {
        Some(s) => (*s).clone(),
        None => return Poly::one(),
    };
    let ca = a.content_in(&s);
    let cb = b.content_in(&s);
    let gc = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).unwrap();
    let mut q = b.div_exact(&cb).unwrap();
    if p.degree_in(&s) < q.degree_in(&s) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = p.prem(&q, &s);
        p = q;
        if r.is_zero() {
            break;
        }
        if r.degree_in(&s) == 0 {
            p = Poly::one();
            break;
        }
        let c = r.content_in(&s);
        q = r.div_exact(&c).unwrap();
    }
    let cp = p.content_in(&s);
    let pp = p.div_exact(&cp).unwrap_or(p);
    gc.mul(&pp).monic().0
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::display::render_poly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Poly {
        Poly::term(GaussRational::one(), Mono::var(Sym::root("z"), 2))
    }
    fn w() -> Poly {
        Poly::term(GaussRational::one(), Mono::var(Sym::root("w"), 2))
    }
    fn c(n: i64) -> Poly {
        Poly::constant(GaussRational::from_i64(n))
    }

    #[test]
    fn deglex_leading_term() {
        let p = z().add(&w().mul(&w()));
        assert_eq!(p.leading().unwrap().0.degree(), 4);
    }

    #[test]
    fn exact_division() {
        let a = z().add(&c(1));
        let b = z().sub(&c(1));
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.div_exact(&z()), None);
    }

    #[test]
    fn gcd_multivariate() {
        let a = z().add(&w());
        let b = z().sub(&c(3));
        let d = w().add(&c(2));
        let g = gcd(&a.mul(&b), &a.mul(&d));
        assert_eq!(g, a.monic().0);
        assert!(gcd(&b, &d).is_one());
        let g2 = gcd(&a.mul(&a).mul(&b), &a.mul(&b).mul(&d));
        assert_eq!(g2, a.mul(&b).monic().0);
    }
}
