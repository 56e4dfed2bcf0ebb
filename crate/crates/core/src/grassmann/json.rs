//! JSON mirror of [`SuperFunction`]: one record per odd monomial, with
//! `kernels[i]` multiplying the polynomial `poly[i]`.

use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::function::{OddMono, SuperFunction};
use super::poly::{EvenPoly, Kernel};
use super::table::{Parity, VariableTable};
use super::GrassmannError;
use crate::coeff::Coefficient;

fn bad(msg: &str) -> GrassmannError {
    GrassmannError::Json(msg.to_string())
}

fn kernel_json<S: Coefficient>(t: &VariableTable, k: &Kernel<S>) -> Value {
    let slots = k.slots();
    let names: Vec<&str> = slots.iter().map(|s| t.name(t.even_gen(*s as usize))).collect();
    let a: Vec<Vec<String>> = slots
        .iter()
        .map(|i| slots.iter().map(|j| k.a(*i, *j).to_string()).collect())
        .collect();
    let b: Vec<String> = slots.iter().map(|i| k.b(*i).to_string()).collect();
    json!({ "vars": names, "A": a, "b": b, "c": k.c().to_string() })
}

fn poly_json<S: Coefficient>(t: &VariableTable, p: &EvenPoly<S>) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| {
                let mut ex = Map::new();
                for (s, e) in m {
                    ex.insert(t.name(t.even_gen(*s as usize)).to_string(), json!(e));
                }
                json!({ "exponents": ex, "scalar": c.to_string() })
            })
            .collect(),
    )
}

impl<S: Coefficient> SuperFunction<S> {
    pub fn to_json(&self) -> Value {
        let t = self.table().clone();
        let mut out = Vec::new();
        for i in self.odd_monomials() {
            let mut names = Vec::new();
            let mut rest = i;
            while rest != 0 {
                let s = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                names.push(t.name(t.odd_gen(s)).to_string());
            }
            let mut kernels = Vec::new();
            let mut polys = Vec::new();
            for (odd, k, p) in self.iter() {
                if odd == i {
                    kernels.push(kernel_json(&t, k));
                    polys.push(poly_json(&t, p));
                }
            }
            out.push(json!({ "odd_monomial": names, "kernels": kernels, "poly": polys }));
        }
        Value::Array(out)
    }
}

fn scalar<S: FromStr>(v: &Value) -> Result<S, GrassmannError> {
    v.as_str().ok_or_else(|| bad("scalar must be a string"))?.parse().map_err(|_| bad("bad scalar"))
}

fn even_slot(t: &VariableTable, name: &str) -> Result<u16, GrassmannError> {
    let k = t.require(name)?;
    if t.parity(k) != Parity::Even {
        return Err(GrassmannError::ParityMismatch(name.to_string()));
    }
    Ok(t.slot(k))
}

impl<S: Coefficient + FromStr> SuperFunction<S> {
    pub fn from_json(table: &Arc<VariableTable>, v: &Value) -> Result<Self, GrassmannError> {
        let mut f = SuperFunction::zero(table);
        for rec in v.as_array().ok_or_else(|| bad("expected an array"))? {
            let mut odd: OddMono = 0;
            let mut sign_neg = false;
            for n in rec["odd_monomial"].as_array().ok_or_else(|| bad("odd_monomial"))? {
                let name = n.as_str().ok_or_else(|| bad("odd name"))?;
                let k = table.require(name)?;
                if table.parity(k) != Parity::Odd {
                    return Err(GrassmannError::ParityMismatch(name.to_string()));
                }
                let bit = 1u64 << table.slot(k);
                match super::function::odd_product_sign(odd, bit) {
                    Some(neg) => sign_neg ^= neg,
                    None => return Err(bad("repeated odd generator")),
                }
                odd |= bit;
            }
            let kernels = rec["kernels"].as_array().ok_or_else(|| bad("kernels"))?;
            let polys = rec["poly"].as_array().ok_or_else(|| bad("poly"))?;
            if kernels.len() != polys.len() {
                return Err(bad("kernels and poly differ in length"));
            }
            for (kv, pv) in kernels.iter().zip(polys) {
                let vars: Vec<u16> = kv["vars"]
                    .as_array()
                    .ok_or_else(|| bad("vars"))?
                    .iter()
                    .map(|n| even_slot(table, n.as_str().unwrap_or("")))
                    .collect::<Result<_, _>>()?;
                let mut k = Kernel::identity();
                let a = kv["A"].as_array().ok_or_else(|| bad("A"))?;
                for (ii, row) in a.iter().enumerate() {
                    let row = row.as_array().ok_or_else(|| bad("A row"))?;
                    for (jj, e) in row.iter().enumerate().skip(ii) {
                        k.set_a(vars[ii], vars[jj], scalar(e)?);
                    }
                }
                for (ii, e) in kv["b"].as_array().ok_or_else(|| bad("b"))?.iter().enumerate() {
                    k.set_b(vars[ii], scalar(e)?);
                }
                k.set_c(scalar(&kv["c"])?);
                let mut p = EvenPoly::zero();
                for term in pv.as_array().ok_or_else(|| bad("poly terms"))? {
                    let mut m = Vec::new();
                    for (name, e) in term["exponents"].as_object().ok_or_else(|| bad("exponents"))? {
                        let e = e.as_u64().ok_or_else(|| bad("exponent"))? as u16;
                        if e > 0 {
                            m.push((even_slot(table, name)?, e));
                        }
                    }
                    m.sort_unstable();
                    let c: S = scalar(&term["scalar"])?;
                    p.add_term(m, if sign_neg { c.neg_ref() } else { c });
                }
                f.add_term(odd, k, p);
            }
        }
        Ok(f)
    }
}
