use num_traits::One;

use super::gauss::GaussRational;
use super::poly::{Mono, Poly, Sym};

fn half_power(e: i64) -> String {
    if e % 2 == 0 {
        let k = e / 2;
        if k == 1 {
            String::new()
        } else if k < 0 {
            format!("^({})", k)
        } else {
            format!("^{}", k)
        }
    } else {
        format!("^({}/2)", e)
    }
}

pub(crate) fn render_factors(factors: &[(Sym, i64)]) -> Vec<String> {
    factors
        .iter()
        .map(|(s, e)| {
            let base = match s {
                Sym::Root(name) => name.to_string(),
                Sym::Tau => "(2pi)".to_string(),
            };
            format!("{}{}", base, half_power(*e))
        })
        .collect()
}

/// Renders `c * factors` as a signed term; returns (negative, body).
pub(crate) fn render_term(c: &GaussRational, factors: &[(Sym, i64)]) -> (bool, String) {
    let fs = render_factors(factors);
    if fs.is_empty() {
        let (neg, s) = c.render_factor();
        return (neg, s);
    }
    let (neg, cs) = c.render_factor();
    let mut parts = Vec::new();
    if cs != "1" {
        parts.push(cs);
    }
    parts.extend(fs);
    (neg, parts.join("*"))
}

pub(crate) fn mono_factors(m: &Mono, sign: i64) -> Vec<(Sym, i64)> {
    m.factors().iter().map(|(s, e)| (s.clone(), sign * *e as i64)).collect()
}

pub(crate) fn join_terms(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (neg, body)) in terms.into_iter().enumerate() {
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

pub(crate) fn render_poly(p: &Poly) -> String {
    let terms: Vec<(bool, String)> = p
        .terms()
        .rev()
        .map(|(m, c)| render_term(c, &mono_factors(m, 1)))
        .collect();
    join_terms(terms)
}

pub(crate) fn render_scalar(num: &Poly, den: &Poly) -> String {
    if den.is_one() {
        return render_poly(num);
    }
    if let Some((dc, dm)) = den.as_monomial() {
        if dc.is_one() {
            let inv = mono_factors(dm, -1);
            if let Some((c, m)) = num.as_monomial() {
                let mut fs = mono_factors(m, 1);
                fs.extend(inv);
                let (neg, s) = render_term(c, &fs);
                return if neg { format!("-{}", s) } else { s };
            }
            return format!("({})*{}", render_poly(num), render_factors(&inv).join("*"));
        }
    }
    format!("({})/({})", render_poly(num), render_poly(den))
}
