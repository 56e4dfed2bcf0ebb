use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use super::poly::{EvenMono, EvenPoly, Kernel};
use super::table::{Parity, VariableTable};
use super::GrassmannError;
use crate::coeff::Coefficient;

/// Odd monomial as a bitset over odd slots, read in ascending slot order.
pub type OddMono = u64;

/// Sign of `ξ^a · ξ^b` after sorting into ascending order; `None` if the
/// product vanishes.
pub fn odd_product_sign(a: OddMono, b: OddMono) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += if j >= 63 { 0 } else { (a >> (j + 1)).count_ones() };
    }
    Some(swaps % 2 == 1)
}

pub(crate) type Coeffs<S> = BTreeMap<Kernel<S>, EvenPoly<S>>;

/// `Σ_I ξ^I φ_I` with each `φ_I` a sum of Gaussian kernels times
/// polynomials in the even generators.
#[derive(Clone, Debug)]
pub struct SuperFunction<S> {
    table: Arc<VariableTable>,
    terms: BTreeMap<OddMono, Coeffs<S>>,
}

impl<S: Coefficient> PartialEq for SuperFunction<S> {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.table, &o.table) || self.table == o.table) && self.terms == o.terms
    }
}

impl<S: Coefficient> Eq for SuperFunction<S> {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityClass {
    Even,
    Odd,
    Mixed,
}

impl<S: Coefficient> SuperFunction<S> {
    pub fn zero(table: &Arc<VariableTable>) -> Self {
        SuperFunction { table: table.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(table: &Arc<VariableTable>, c: S) -> Self {
        let mut f = SuperFunction::zero(table);
        f.add_term(0, Kernel::identity(), EvenPoly::constant(c));
        f
    }

    pub fn one(table: &Arc<VariableTable>) -> Self {
        SuperFunction::constant(table, S::one())
    }

    /// The generator at table index `k`.
    pub fn gen(table: &Arc<VariableTable>, k: usize) -> Self {
        let slot = table.slot(k);
        let mut f = SuperFunction::zero(table);
        match table.parity(k) {
            Parity::Odd => f.add_term(1u64 << slot, Kernel::identity(), EvenPoly::constant(S::one())),
            Parity::Even => f.add_term(0, Kernel::identity(), EvenPoly::var(slot)),
        }
        f
    }

    pub fn var(table: &Arc<VariableTable>, name: &str) -> Result<Self, GrassmannError> {
        Ok(SuperFunction::gen(table, table.require(name)?))
    }

    /// `exp(kernel)`.
    pub fn kernel(table: &Arc<VariableTable>, k: Kernel<S>) -> Self {
        let mut f = SuperFunction::zero(table);
        f.add_term(0, k, EvenPoly::constant(S::one()));
        f
    }

    pub fn from_term(table: &Arc<VariableTable>, odd: OddMono, k: Kernel<S>, p: EvenPoly<S>) -> Self {
        let mut f = SuperFunction::zero(table);
        f.add_term(odd, k, p);
        f
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn same_table(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.table, &o.table) || self.table == o.table
    }

    fn check(&self, o: &Self) -> Result<(), GrassmannError> {
        if self.same_table(o) {
            Ok(())
        } else {
            Err(GrassmannError::TableMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (OddMono, &Kernel<S>, &EvenPoly<S>)> {
        self.terms.iter().flat_map(|(i, m)| m.iter().map(move |(k, p)| (*i, k, p)))
    }

    pub fn term_count(&self) -> usize {
        self.terms.values().map(|m| m.values().map(|p| p.len()).sum::<usize>()).sum()
    }

    pub(crate) fn add_term(&mut self, odd: OddMono, k: Kernel<S>, p: EvenPoly<S>) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(odd).or_default();
        let merged = match slot.remove(&k) {
            Some(q) => q.add(&p),
            None => p,
        };
        if !merged.is_zero() {
            slot.insert(k, merged);
        }
        if slot.is_empty() {
            self.terms.remove(&odd);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.same_table(o), "table mismatch in add");
        let mut r = self.clone();
        for (i, k, p) in o.iter() {
            r.add_term(i, k.clone(), p.clone());
        }
        r
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, GrassmannError> {
        self.check(o)?;
        Ok(self.add(o))
    }

    pub fn neg(&self) -> Self {
        self.scale(&S::one().neg_ref())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut r = SuperFunction::zero(&self.table);
        if c.is_zero() {
            return r;
        }
        for (i, k, p) in self.iter() {
            r.add_term(i, k.clone(), p.scale(c));
        }
        r
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, GrassmannError> {
        self.check(o)?;
        Ok(self.mul(o))
    }

    /// Product with Koszul signs; panics on a table mismatch (see
    /// [`SuperFunction::try_mul`]).
    pub fn mul(&self, o: &Self) -> Self {
        assert!(self.same_table(o), "table mismatch in mul");
        let mut r = SuperFunction::zero(&self.table);
        for (i, ci) in &self.terms {
            for (j, cj) in &o.terms {
                let Some(neg) = odd_product_sign(*i, *j) else { continue };
                for (k1, p1) in ci {
                    for (k2, p2) in cj {
                        let k = if k1.is_identity() {
                            k2.clone()
                        } else if k2.is_identity() {
                            k1.clone()
                        } else {
                            k1.add(k2)
                        };
                        let mut p = p1.mul(p2);
                        if neg {
                            p = p.neg();
                        }
                        r.add_term(i | j, k, p);
                    }
                }
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = SuperFunction::one(&self.table);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn parity_of(&self) -> ParityClass {
        let mut even = false;
        let mut odd = false;
        for i in self.terms.keys() {
            if i.count_ones() % 2 == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
        match (even, odd) {
            (_, false) => ParityClass::Even,
            (false, true) => ParityClass::Odd,
            (true, true) => ParityClass::Mixed,
        }
    }

    /// The homogeneous parity, `None` for mixed elements; zero is even.
    pub fn parity(&self) -> Option<Parity> {
        match self.parity_of() {
            ParityClass::Even => Some(Parity::Even),
            ParityClass::Odd => Some(Parity::Odd),
            ParityClass::Mixed => None,
        }
    }

    pub fn part(&self, p: Parity) -> Self {
        let mut r = SuperFunction::zero(&self.table);
        for (i, k, q) in self.iter() {
            if Parity::from_odd(i.count_ones() % 2 == 1) == p {
                r.add_term(i, k.clone(), q.clone());
            }
        }
        r
    }

    pub fn has_kernels(&self) -> bool {
        self.iter().any(|(_, k, _)| !k.is_identity())
    }

    /// Constant coefficient (odd-free, kernel-free, degree zero).
    pub fn body(&self) -> S {
        self.terms
            .get(&0)
            .and_then(|m| m.get(&Kernel::identity()))
            .map(|p| p.constant_term())
            .unwrap_or_else(S::zero)
    }

    /// The value as a constant, if it is one.
    pub fn as_constant(&self) -> Option<S> {
        if self.is_zero() {
            return Some(S::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        let m = self.terms.get(&0)?;
        if m.len() != 1 {
            return None;
        }
        let p = m.get(&Kernel::identity())?;
        p.as_constant()
    }

    /// The coefficient of `ξ^odd` as a function with no odd part.
    pub fn odd_coefficient(&self, odd: OddMono) -> Self {
        let mut r = SuperFunction::zero(&self.table);
        if let Some(m) = self.terms.get(&odd) {
            for (k, p) in m {
                r.add_term(0, k.clone(), p.clone());
            }
        }
        r
    }

    pub fn odd_monomials(&self) -> impl Iterator<Item = OddMono> + '_ {
        self.terms.keys().copied()
    }

    /// Left derivative with respect to generator `k`.
    pub fn derive(&self, k: usize) -> Result<Self, GrassmannError> {
        if k >= self.table.len() {
            return Err(GrassmannError::UnknownGenerator(format!("#{}", k)));
        }
        let slot = self.table.slot(k);
        let mut r = SuperFunction::zero(&self.table);
        match self.table.parity(k) {
            Parity::Odd => {
                let bit = 1u64 << slot;
                for (i, kern, p) in self.iter() {
                    if i & bit == 0 {
                        continue;
                    }
                    let before = (i & (bit - 1)).count_ones();
                    let q = if before % 2 == 1 { p.neg() } else { p.clone() };
                    r.add_term(i & !bit, kern.clone(), q);
                }
            }
            Parity::Even => {
                for (i, kern, p) in self.iter() {
                    let mut q = p.derive(slot);
                    if !kern.is_identity() {
                        q.add_assign(&kern.gradient(slot).mul(p));
                    }
                    r.add_term(i, kern.clone(), q);
                }
            }
        }
        Ok(r)
    }

    pub fn derive_by_name(&self, name: &str) -> Result<Self, GrassmannError> {
        self.derive(self.table.require(name)?)
    }

    /// `exp(f)` for even `f = Q + N`, `Q` of degree at most two in the even
    /// generators and `N` nilpotent.
    pub fn exp_even(&self) -> Result<Self, GrassmannError> {
        if self.has_kernels() {
            return Err(GrassmannError::HasKernel);
        }
        if self.parity_of() != ParityClass::Even {
            return Err(GrassmannError::NotEven);
        }
        let mut q = EvenPoly::zero();
        let mut n = SuperFunction::zero(&self.table);
        for (i, _, p) in self.iter() {
            if i == 0 {
                q = p.clone();
            } else {
                n.add_term(i, Kernel::identity(), p.clone());
            }
        }
        if q.degree() > 2 {
            return Err(GrassmannError::DegreeTooHigh);
        }
        let kernel = Kernel::from_exponent(&q).ok_or(GrassmannError::DegreeTooHigh)?;
        let series = nilpotent_series(&n, |k| {
            let mut c = S::one();
            for j in 2..=k {
                c = c.mul_ref(&S::from_i64(j as i64));
            }
            c.inv().unwrap()
        });
        if kernel.is_identity() {
            return Ok(series);
        }
        Ok(series.mul(&SuperFunction::kernel(&self.table, kernel)))
    }

    /// Square root of an even polynomial with invertible square body.
    pub fn sqrt_even(&self) -> Result<Self, GrassmannError> {
        if self.has_kernels() {
            return Err(GrassmannError::HasKernel);
        }
        if self.parity_of() != ParityClass::Even {
            return Err(GrassmannError::NotEven);
        }
        let b = self.body();
        let soul = self.sub(&SuperFunction::constant(&self.table, b.clone()));
        if soul.terms.contains_key(&0) {
            return Err(GrassmannError::NonInvertibleBody);
        }
        let sb = b.sqrt_exact().filter(|s| !s.is_zero()).ok_or(GrassmannError::NonInvertibleBody)?;
        let m = soul.scale(&b.inv().unwrap());
        let half = BigRational::new(1.into(), 2.into());
        let series = nilpotent_series(&m, |k| {
            let mut c = BigRational::from_integer(1.into());
            for j in 0..k {
                c = c * (&half - BigRational::from_integer(j.into()))
                    / BigRational::from_integer((j + 1).into());
            }
            S::from_rational(c)
        });
        Ok(series.scale(&sb))
    }

    /// Replaces every generator by its image in `target`. Images must be
    /// kernel-free and of the generator's parity.
    pub fn substitute(
        &self,
        target: &Arc<VariableTable>,
        images: &[SuperFunction<S>],
    ) -> Result<Self, GrassmannError> {
        if images.len() != self.table.len() {
            return Err(GrassmannError::TableMismatch);
        }
        for (k, img) in images.iter().enumerate() {
            if !(Arc::ptr_eq(img.table(), target) || **img.table() == **target) {
                return Err(GrassmannError::TableMismatch);
            }
            if img.has_kernels() {
                return Err(GrassmannError::HasKernel);
            }
            if !img.is_zero() && img.parity() != Some(self.table.parity(k)) {
                return Err(GrassmannError::ParityMismatch(self.table.name(k).to_string()));
            }
        }
        let mut powers: HashMap<(u16, u16), SuperFunction<S>> = HashMap::new();
        let mut power = |slot: u16, e: u16| -> SuperFunction<S> {
            if let Some(v) = powers.get(&(slot, e)) {
                return v.clone();
            }
            let v = images[self.table.even_gen(slot as usize)].pow(e as u32);
            powers.insert((slot, e), v.clone());
            v
        };
        let mut r = SuperFunction::zero(target);
        for (i, coeffs) in &self.terms {
            let mut odd = SuperFunction::one(target);
            let mut rest = *i;
            while rest != 0 {
                let s = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                odd = odd.mul(&images[self.table.odd_gen(s)]);
            }
            if odd.is_zero() {
                continue;
            }
            for (k, p) in coeffs {
                let mut val = SuperFunction::zero(target);
                for (m, c) in p.terms() {
                    let mut t = SuperFunction::constant(target, c.clone());
                    for (slot, e) in m {
                        t = t.mul(&power(*slot, *e));
                    }
                    val = val.add(&t);
                }
                if !k.is_identity() {
                    let mut ex = SuperFunction::zero(target);
                    for (m, c) in k.exponent().terms() {
                        let mut t = SuperFunction::constant(target, c.clone());
                        for (slot, e) in m {
                            t = t.mul(&power(*slot, *e));
                        }
                        ex = ex.add(&t);
                    }
                    val = val.mul(&ex.exp_even()?);
                }
                r = r.add(&odd.mul(&val));
            }
        }
        Ok(r)
    }

    /// Re-homes the function in a table that extends this one.
    pub fn embed(&self, target: &Arc<VariableTable>) -> Result<Self, GrassmannError> {
        if !self.table.is_prefix_of(target) {
            return Err(GrassmannError::TableMismatch);
        }
        Ok(SuperFunction { table: target.clone(), terms: self.terms.clone() })
    }

    /// Moves the function to a prefix table; generators outside it must
    /// not occur.
    pub fn project(&self, target: &Arc<VariableTable>) -> Result<Self, GrassmannError> {
        if !target.is_prefix_of(&self.table) {
            return Err(GrassmannError::TableMismatch);
        }
        let odd_limit = target.odd_count();
        let even_limit = target.even_count() as u16;
        for (i, k, p) in self.iter() {
            let high_odd = if odd_limit >= 64 { 0 } else { i >> odd_limit };
            if high_odd != 0
                || k.slots().iter().any(|s| *s >= even_limit)
                || p.slots().iter().any(|s| *s >= even_limit)
            {
                return Err(GrassmannError::ResidualGenerator);
            }
        }
        Ok(SuperFunction { table: target.clone(), terms: self.terms.clone() })
    }

    /// Moves the function to another table, matching generators by name.
    /// Every generator that occurs must exist in `target` with the same
    /// parity.
    pub fn rehome(&self, target: &Arc<VariableTable>) -> Result<Self, GrassmannError> {
        let t = &self.table;
        let mut map: Vec<Option<usize>> = Vec::with_capacity(t.len());
        for g in t.generators() {
            map.push(match target.index(&g.name) {
                Some(j) if target.parity(j) == g.parity => Some(target.slot(j) as usize),
                Some(_) => return Err(GrassmannError::ParityMismatch(g.name.clone())),
                None => None,
            });
        }
        let odd_map = |s: usize| map[t.odd_gen(s)].ok_or(GrassmannError::ResidualGenerator);
        let even_map = |s: u16| -> Result<u16, GrassmannError> {
            map[t.even_gen(s as usize)].map(|v| v as u16).ok_or(GrassmannError::ResidualGenerator)
        };
        let mut r = SuperFunction::zero(target);
        for (i, k, p) in self.iter() {
            let mut odd: OddMono = 0;
            let mut neg = false;
            let mut rest = i;
            while rest != 0 {
                let s = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let bit = 1u64 << odd_map(s)?;
                neg ^= odd_product_sign(odd, bit).expect("distinct generators");
                odd |= bit;
            }
            for s in k.slots() {
                even_map(s)?;
            }
            let k2 = k.map_slots(|s| even_map(s).unwrap());
            let mut p2 = EvenPoly::zero();
            for (m, c) in p.terms() {
                let mut m2: EvenMono =
                    m.iter().map(|(s, e)| Ok((even_map(*s)?, *e))).collect::<Result<_, GrassmannError>>()?;
                m2.sort_unstable();
                p2.add_term(m2, if neg { c.neg_ref() } else { c.clone() });
            }
            r.add_term(odd, k2, p2);
        }
        Ok(r)
    }

    /// Sets the listed generators to zero.
    pub fn set_zero(&self, gens: &[usize]) -> Result<Self, GrassmannError> {
        let images: Vec<SuperFunction<S>> = (0..self.table.len())
            .map(|k| {
                if gens.contains(&k) {
                    SuperFunction::zero(&self.table)
                } else {
                    SuperFunction::gen(&self.table, k)
                }
            })
            .collect();
        self.substitute(&self.table.clone(), &images)
    }

    /// Applies `f` to every scalar (polynomial and kernel coefficients).
    pub fn map_coeffs(&self, f: &impl Fn(&S) -> S) -> Self {
        let mut r = SuperFunction::zero(&self.table);
        for (i, k, p) in self.iter() {
            let mut k2 = Kernel::identity();
            for ((a, b), v) in k.quadratic_entries() {
                k2.set_a(*a, *b, f(v));
            }
            for (a, v) in k.linear_entries() {
                k2.set_b(*a, f(v));
            }
            k2.set_c(f(k.c()));
            r.add_term(i, k2, p.map_coeffs(f));
        }
        r
    }

    /// Evaluation at a point of a Grassmann envelope: `point[k]` is the
    /// value of generator `k` in `envelope`, which has only odd generators.
    pub fn evaluate_at_point(
        &self,
        envelope: &Arc<VariableTable>,
        point: &[SuperFunction<S>],
    ) -> Result<Self, GrassmannError> {
        if envelope.even_count() > 0 {
            return Err(GrassmannError::ParityMismatch("envelope has even generators".into()));
        }
        let mut r = SuperFunction::zero(envelope);
        for (i, k, p) in self.iter() {
            let piece = SuperFunction::from_term(&self.table, i, k.clone(), p.clone());
            let v = piece.substitute(envelope, point)?;
            if v.has_kernels() {
                return Err(GrassmannError::NonNilpotentExponentBody);
            }
            r = r.add(&v);
        }
        Ok(r)
    }

    pub fn render(&self) -> String {
        render(self)
    }
}

/// `Σ_k w(k) n^k` for nilpotent `n`.
fn nilpotent_series<S: Coefficient>(n: &SuperFunction<S>, w: impl Fn(u32) -> S) -> SuperFunction<S> {
    let mut acc = SuperFunction::one(n.table());
    let mut pw = SuperFunction::one(n.table());
    let mut k = 0u32;
    loop {
        k += 1;
        pw = pw.mul(n);
        if pw.is_zero() {
            return acc;
        }
        acc = acc.add(&pw.scale(&w(k)));
    }
}

fn coef_factor<S: Coefficient>(c: &S) -> (bool, Option<String>) {
    let s = c.to_string();
    if s == "1" {
        return (false, None);
    }
    if s == "-1" {
        return (true, None);
    }
    let body = s.strip_prefix('-').unwrap_or(&s);
    let compound = body.contains(" + ") || body.contains(" - ") || body.contains('/') && body.contains(')');
    if compound {
        return (false, Some(format!("({})", s)));
    }
    (s.starts_with('-'), Some(body.to_string()))
}

fn even_mono_str(t: &VariableTable, m: &EvenMono) -> Vec<String> {
    m.iter()
        .map(|(s, e)| {
            let name = t.name(t.even_gen(*s as usize));
            if *e == 1 {
                name.to_string()
            } else {
                format!("{}^{}", name, e)
            }
        })
        .collect()
}

fn odd_mono_str(t: &VariableTable, i: OddMono) -> Vec<String> {
    let mut v = Vec::new();
    let mut rest = i;
    while rest != 0 {
        let s = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        v.push(t.name(t.odd_gen(s)).to_string());
    }
    v
}

fn poly_str<S: Coefficient>(t: &VariableTable, p: &EvenPoly<S>) -> String {
    let mut parts: Vec<(bool, String)> = Vec::new();
    for (m, c) in p.terms().rev() {
        let (neg, cf) = coef_factor(c);
        let mut fs: Vec<String> = cf.into_iter().collect();
        fs.extend(even_mono_str(t, m));
        if fs.is_empty() {
            fs.push("1".into());
        }
        parts.push((neg, fs.join("*")));
    }
    join(parts)
}

fn join(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (neg, body)) in parts.into_iter().enumerate() {
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

fn render<S: Coefficient>(f: &SuperFunction<S>) -> String {
    let t = f.table();
    let mut keys: Vec<OddMono> = f.terms.keys().copied().collect();
    keys.sort_by_key(|i| (i.count_ones(), i.reverse_bits()));
    let mut parts: Vec<(bool, String)> = Vec::new();
    for i in keys {
        let odd = odd_mono_str(t, i);
        for (k, p) in &f.terms[&i] {
            let exp = (!k.is_identity()).then(|| format!("exp({})", poly_str(t, &k.exponent())));
            if k.is_identity() || p.len() == 1 {
                for (m, c) in p.terms().rev() {
                    let (neg, cf) = coef_factor(c);
                    let mut fs: Vec<String> = cf.into_iter().collect();
                    fs.extend(even_mono_str(t, m));
                    fs.extend(odd.iter().cloned());
                    fs.extend(exp.iter().cloned());
                    if fs.is_empty() {
                        fs.push("1".into());
                    }
                    parts.push((neg, fs.join("*")));
                }
            } else {
                let mut fs = vec![format!("({})", poly_str(t, p))];
                fs.extend(odd.iter().cloned());
                fs.extend(exp.iter().cloned());
                parts.push((false, fs.join("*")));
            }
        }
    }
    join(parts)
}

impl<S: Coefficient> fmt::Display for SuperFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}
