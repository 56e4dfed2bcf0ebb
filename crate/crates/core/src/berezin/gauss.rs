//! Closed-form Gaussian integration over even generators by completing
//! squares, one variable at a time.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{AssumptionLog, AssumptionRecord, BerezinError};
use crate::grassmann::{EvenPoly, Kernel, OddMono, Parity};
use crate::scalars::{GaussRational, Scalar};
use crate::SuperFn;

/// Highest polynomial degree accepted in front of a kernel.
pub const MAX_DEGREE: u32 = 64;

enum Step {
    /// `s ↦ s + t`, used when no diagonal entry is left.
    Shift { s: u16, t: u16 },
    /// `s ↦ s + m`, then integrate `s` against `exp(−a s²/2)`.
    Complete { s: u16, a: Scalar, m: EvenPoly<Scalar> },
}

struct Elimination {
    steps: Vec<Step>,
    kernel: Kernel<Scalar>,
    factor: Scalar,
}

fn var(s: u16) -> EvenPoly<Scalar> {
    EvenPoly::var(s)
}

fn square_coeff(e: &EvenPoly<Scalar>, s: u16) -> Scalar {
    e.coeffs_in(s).get(&2).map(|p| p.constant_term()).unwrap_or_else(Scalar::zero)
}

fn cross_pair(e: &EvenPoly<Scalar>, remaining: &[u16]) -> Option<(u16, u16)> {
    for (m, _) in e.terms() {
        if let [(s, 1), (t, 1)] = m.as_slice() {
            if remaining.contains(s) && remaining.contains(t) {
                return Some((*s, *t));
            }
        }
    }
    None
}

fn eliminate(
    kernel: &Kernel<Scalar>,
    slots: &[u16],
    names: &dyn Fn(u16) -> String,
    log: &mut AssumptionLog,
) -> Result<Elimination, BerezinError> {
    let mut e = kernel.exponent();
    let mut remaining: Vec<u16> = slots.to_vec();
    let mut steps = Vec::new();
    let mut pivots = Vec::new();
    while !remaining.is_empty() {
        let found = remaining.iter().position(|s| !square_coeff(&e, *s).is_zero());
        let pos = match found {
            Some(p) => p,
            None => {
                let (s, t) = cross_pair(&e, &remaining)
                    .ok_or_else(|| BerezinError::SingularKernel(names(remaining[0])))?;
                e = e.substitute(s, &var(s).add(&var(t)));
                steps.push(Step::Shift { s, t });
                continue;
            }
        };
        let s = remaining.remove(pos);
        let a = -(&square_coeff(&e, s) * &Scalar::from_i64(2));
        let cs = e.coeffs_in(s);
        let lin = cs.get(&1).cloned().unwrap_or_default();
        let rest = cs.get(&0).cloned().unwrap_or_default();
        let inv_a = a.inv().expect("nonzero pivot");
        let m = lin.scale(&inv_a);
        e = rest.add(&lin.mul(&m).scale(&Scalar::from_ratio(1, 2)));
        pivots.push((s, a.clone()));
        steps.push(Step::Complete { s, a, m });
    }
    let root = formal_root(&pivots, names, log)?;
    let tau_power = Scalar::tau().powi(pivots.len() as i64);
    let kernel = Kernel::from_exponent(&e).expect("quadratic exponent stays quadratic");
    Ok(Elimination { steps, kernel, factor: &tau_power * &root.inv().expect("nonzero root") })
}

const PHASE: [&str; 4] = ["1", "exp(i*pi/4)", "i", "exp(-i*pi/4)"];

/// Principal square root of the product of the pivots: each pivot
/// contributes half its argument in `(−π/2, π/2]`.
fn formal_root(
    pivots: &[(u16, Scalar)],
    names: &dyn Fn(u16) -> String,
    log: &mut AssumptionLog,
) -> Result<Scalar, BerezinError> {
    let mut quarter_turns: i64 = 0;
    let mut magnitude = Scalar::one();
    for (s, a) in pivots {
        let fail = || BerezinError::NoFormalRoot(a.to_string());
        let (c, factors) = a.monomial_parts().ok_or_else(fail)?;
        let (k, r) = c.unit_split().ok_or_else(fail)?;
        quarter_turns += [0, 1, 2, -1][k as usize];
        let mag = Scalar::from_monomial_parts(GaussRational::real(r), &factors);
        if k != 0 || !factors.is_empty() {
            let root = match mag.sqrt_monomial() {
                Ok(m) if k == 0 => m.to_string(),
                Ok(m) => format!("{}*({})", PHASE[k as usize], m),
                Err(_) => format!("{}*({})^(1/2)", PHASE[k as usize], mag),
            };
            log.push(AssumptionRecord { variable: names(*s), pivot: a.to_string(), root });
        }
        magnitude = &magnitude * &mag;
    }
    if quarter_turns % 2 != 0 {
        let prod = pivots.iter().fold(Scalar::one(), |acc, (_, a)| &acc * a);
        return Err(BerezinError::NoFormalRoot(prod.to_string()));
    }
    let unit = Scalar::i().powi(quarter_turns / 2);
    let mag_root = magnitude.sqrt_monomial().map_err(|_| BerezinError::NoFormalRoot(magnitude.to_string()))?;
    Ok(&unit * &mag_root)
}

fn double_factorial_odd(n: u32) -> Scalar {
    // (2n − 1)!!
    let mut r = Scalar::one();
    let mut k = 1i64;
    while k < 2 * n as i64 {
        r = &r * &Scalar::from_i64(k);
        k += 2;
    }
    r
}

fn integrate_poly(el: &Elimination, p: &EvenPoly<Scalar>) -> EvenPoly<Scalar> {
    let mut p = p.clone();
    for step in &el.steps {
        match step {
            Step::Shift { s, t } => p = p.substitute(*s, &var(*s).add(&var(*t))),
            Step::Complete { s, a, m } => {
                let shifted = p.substitute(*s, &var(*s).add(m));
                let inv_a = a.inv().expect("nonzero pivot");
                let mut out = EvenPoly::zero();
                for (e, c) in shifted.coeffs_in(*s) {
                    if e % 2 == 1 {
                        continue;
                    }
                    let n = (e / 2) as u32;
                    let w = &double_factorial_odd(n) * &inv_a.powi(n as i64);
                    out.add_assign(&c.scale(&w));
                }
                p = out;
            }
        }
    }
    p.scale(&el.factor)
}

/// Integrates `f` over the listed even generators with the Lebesgue
/// measure `|dx¹…dxᵐ|`. Oscillatory kernels are evaluated by the same
/// formal rule; every branch choice is recorded in the returned log.
pub fn gaussian_integral_even(f: &SuperFn, vars: &[String]) -> Result<(SuperFn, AssumptionLog), BerezinError> {
    let table = f.table().clone();
    let mut slots = Vec::with_capacity(vars.len());
    for v in vars {
        let k = table.index(v).ok_or_else(|| BerezinError::UnknownVariable(v.clone()))?;
        if table.parity(k) != Parity::Even {
            return Err(BerezinError::NotEven(v.clone()));
        }
        let s = table.slot(k);
        if slots.contains(&s) {
            return Err(BerezinError::RepeatedVariable(v.clone()));
        }
        slots.push(s);
    }
    let mut log = AssumptionLog::default();
    if slots.is_empty() {
        return Ok((f.clone(), log));
    }
    let names = |s: u16| table.name(table.even_gen(s as usize)).to_string();
    let mut by_kernel: BTreeMap<&Kernel<Scalar>, Vec<(OddMono, &EvenPoly<Scalar>)>> = BTreeMap::new();
    for (odd, k, p) in f.iter() {
        if p.degree() > MAX_DEGREE {
            return Err(BerezinError::UnboundedPolynomialDegree(p.degree()));
        }
        by_kernel.entry(k).or_default().push((odd, p));
    }
    let mut out = SuperFn::zero(&table);
    for (k, terms) in by_kernel {
        let el = eliminate(k, &slots, &names, &mut log)?;
        for (odd, p) in terms {
            let q = integrate_poly(&el, p);
            out = out.add(&SuperFn::from_term(&table, odd, el.kernel.clone(), q));
        }
    }
    Ok((out, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::VariableTable;

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_odd(0), Scalar::one());
        assert_eq!(double_factorial_odd(1), Scalar::one());
        assert_eq!(double_factorial_odd(3), Scalar::from_i64(15));
    }

    #[test]
    fn cross_terms_without_diagonal_use_a_shift() {
        let t = VariableTable::coordinates(&[("x", Parity::Even), ("y", Parity::Even)]).unwrap();
        let (x, y) = (SuperFn::var(&t, "x").unwrap(), SuperFn::var(&t, "y").unwrap());
        // exp(−xy) has A = [[0,1],[1,0]], det −1.
        let f = x.mul(&y).neg().exp_even().unwrap();
        let (r, log) = gaussian_integral_even(&f, &["x".into(), "y".into()]).unwrap();
        // Pivots −1 and 1: formal value 2π·(−1)^{−1/2} = −2πi.
        assert_eq!(r.as_constant().unwrap(), -(&Scalar::two_pi() * &Scalar::i()));
        assert_eq!(log.len(), 1);
    }

    #[test]
    fn polynomial_without_kernel_is_singular() {
        let t = VariableTable::coordinates(&[("x", Parity::Even)]).unwrap();
        let x = SuperFn::var(&t, "x").unwrap();
        assert!(matches!(gaussian_integral_even(&x, &["x".into()]), Err(BerezinError::SingularKernel(_))));
    }
}
