use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::cartan::{d_g, lie, vector_field_of};
use super::{Element, EquivariantError, LinearAction};
use crate::berezin::{direct_image, liouville_integral, AssumptionLog};
use crate::grassmann::{Generator, Parity, Role, VariableTable};
use crate::scalars::Scalar;
use crate::superlinalg::{
    moment_map, nullspace, pi_flip_form, pi_flip_operator, scalar_det, symplectic_basis, Orientation,
    SuperMatrix, SymplecticBasis,
};
use crate::SuperFn;

/// Attached to every Thom form with odd directions.
pub const NORMALIZATION_CAVEAT: &str = "θ carries the Liouville factor (2π)^(-l/2) of the fibre measure, \
     so that π_*θ = 1; the unnormalized closed form is larger by (2π)^(l/2)";

fn i_pow(e: i64) -> Scalar {
    Scalar::i().powi(e)
}

fn half_rank(action: &LinearAction) -> i64 {
    (action.k() as i64 - action.l() as i64) / 2
}

/// Pfaffian of an antisymmetric matrix by expansion along the first row.
fn pfaffian(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    if n == 0 {
        return Scalar::one();
    }
    if n % 2 == 1 {
        return Scalar::zero();
    }
    let mut acc = Scalar::zero();
    for j in 1..n {
        if m[0][j].is_zero() {
            continue;
        }
        let keep: Vec<usize> = (1..n).filter(|c| *c != j).collect();
        let minor: Vec<Vec<Scalar>> = keep.iter().map(|r| keep.iter().map(|c| m[*r][*c].clone()).collect()).collect();
        let term = &m[0][j] * &pfaffian(&minor);
        acc = if j % 2 == 1 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// `σ_V = (−1)^{l/2}·sign Pf(Q₁)`: the sign relating the orientation of
/// `V` fixed by `Q` to the coordinate order `(x, dξ, dx, ξ)` of the fibre
/// integral. Rescaling the coordinates changes the even and odd parts of
/// that measure by inverse factors, so only a sign survives.
pub fn orientation_factor(action: &LinearAction) -> Result<Scalar, EquivariantError> {
    let (_, q1) = action.blocks(&action.form_rows());
    let pf = pfaffian(&q1).as_rational().ok_or(EquivariantError::BadForm)?;
    let negative = (pf < BigRational::zero()) ^ ((action.l() / 2) % 2 == 1);
    Ok(if negative { -Scalar::one() } else { Scalar::one() })
}

fn odd_block_invertible(action: &LinearAction, x: &Element) -> Result<bool, EquivariantError> {
    let (_, d) = action.blocks(&action.rho_rows(x)?);
    Ok(!scalar_det(&d).is_zero())
}

/// Auxiliary coordinates of `ΠV` in the basis order of the flipped form:
/// one even `P<ξ>` per odd coordinate, then one odd `P<x>` per even one.
fn auxiliaries(action: &LinearAction) -> Result<Vec<Generator>, EquivariantError> {
    let t = action.table();
    let (even, odd): (Vec<_>, Vec<_>) = action.coordinates().iter().partition(|(_, p)| *p == Parity::Even);
    let mut out = Vec::new();
    for (name, p) in odd.iter().chain(even.iter()) {
        let aux = format!("P{}", name);
        if t.index(&aux).is_some() {
            return Err(EquivariantError::NameClash(aux));
        }
        out.push(Generator { name: aux, parity: p.flip(), role: Role::Auxiliary });
    }
    Ok(out)
}

fn fibre_basis(action: &LinearAction) -> Result<SymplecticBasis<Scalar>, EquivariantError> {
    Ok(symplectic_basis(&pi_flip_form(action.form())?, Orientation::Positive)?)
}

/// `β(Y)` with its equivariant differential and the check of the 0-form
/// part of `d_𝔤β(Y)` against `−i·Q(Y_M, Y_M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaForm {
    pub beta: SuperFn,
    pub d_g_beta: SuperFn,
    pub zero_part: SuperFn,
    pub q_norm: SuperFn,
    pub invariant: bool,
    pub holds: bool,
}

/// `β(Y) = Σᵢⱼ cᵢ Qᵢⱼ dzʲ`, where `Y_M = Σ cᵢ ∂ᵢ`; it satisfies
/// `ι(Y)β(Y) = Q(Y_M, Y_M)`.
pub fn beta_form(action: &LinearAction, y: &Element) -> Result<BetaForm, EquivariantError> {
    let t = action.table().clone();
    let v = vector_field_of(action, y, &t)?;
    let c: Vec<SuperFn> = v.components().map(|(_, c)| c.clone()).collect();
    let q = action.form();
    let n = c.len();
    let mut beta = SuperFn::zero(&t);
    for (i, ci) in c.iter().enumerate() {
        for j in 0..n {
            let qij = q.get(i, j);
            if qij.is_zero() || ci.is_zero() {
                continue;
            }
            let dz = SuperFn::gen(&t, t.differential_of(j).expect("action table has differentials"));
            beta = beta.add(&ci.mul(&dz).scale(qij));
        }
    }
    let d_g_beta = d_g(&beta, &v)?;
    let diffs: Vec<usize> = (n..2 * n).collect();
    let zero_part = d_g_beta.set_zero(&diffs)?;
    let q_norm = q.evaluate(&c, &c)?;
    let invariant = lie(&beta, &v)?.is_zero();
    let holds = zero_part == q_norm.scale(&-Scalar::i());
    Ok(BetaForm { beta, d_g_beta, zero_part, q_norm, invariant, holds })
}

/// The Mathai–Quillen representative at `X` and its certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThomForm {
    pub theta: SuperFn,
    pub orientation: Scalar,
    /// `d_𝔤(X)θ(X) = 0`.
    pub closed: bool,
    /// `π_*θ` along `V`.
    pub pushforward: SuperFn,
    pub normalized: bool,
    pub log: AssumptionLog,
    pub caveat: Option<&'static str>,
}

impl ThomForm {
    pub fn verified(&self) -> bool {
        self.closed && self.normalized
    }

    pub fn to_json(&self) -> Value {
        json!({
            "theta": self.theta.to_json(),
            "rendered": self.theta.render(),
            "orientation": self.orientation.to_string(),
            "closed": self.closed,
            "pushforward": self.pushforward.render(),
            "normalized": self.normalized,
        })
    }
}

/// `θ(X) = ∫ D_ΠV exp ω_V(X)` with
/// `ω_V = −½ΠQ(v,v) + i·Σ Q dz·Πz + i·μ(ρ(X))` on `V × ΠV`:
///
/// `−½xᵀQ₀x + ½ξᵀQ₁ξ + i dxᵀQ₀θ − i dξᵀQ₁u + (i/2)(θᵀQ₀Aθ + uᵀQ₁Du)`,
///
/// where `θ`, `u` are the auxiliary coordinates and `A`, `D` the diagonal
/// blocks of `ρ(X)`.
pub fn mathai_quillen_thom(action: &LinearAction, x: &Element) -> Result<ThomForm, EquivariantError> {
    if !odd_block_invertible(action, x)? {
        return Err(EquivariantError::NotInvertibleOnOdd);
    }
    let (k, l) = (action.k(), action.l());
    let aux = auxiliaries(action)?;
    let aux_names: Vec<String> = aux.iter().map(|g| g.name.clone()).collect();
    let t: Arc<VariableTable> = action.table().extend(aux)?;
    let gen = |name: &str| SuperFn::var(&t, name).expect("known generator");
    let names = action.coordinate_names();
    let (xs, xis) = names.split_at(k);
    let us: Vec<SuperFn> = aux_names[..l].iter().map(|n| gen(n)).collect();
    let thetas: Vec<SuperFn> = aux_names[l..].iter().map(|n| gen(n)).collect();
    let (q0, q1) = action.blocks(&action.form_rows());
    let (a, dblk) = action.blocks(&action.rho_rows(x)?);
    let half = Scalar::from_ratio(1, 2);
    let i = Scalar::i();
    let mut omega = SuperFn::zero(&t);
    for p in 0..k {
        for r in 0..k {
            let q = &q0[p][r];
            if !q.is_zero() {
                let xx = gen(&xs[p]).mul(&gen(&xs[r])).scale(&-(&half * q));
                let dxt = gen(&format!("d{}", xs[p])).mul(&thetas[r]).scale(&(&i * q));
                omega = omega.add(&xx).add(&dxt);
            }
            let qa: Scalar = (0..k).fold(Scalar::zero(), |acc, s| &acc + &(&q0[p][s] * &a[s][r]));
            if !qa.is_zero() {
                omega = omega.add(&thetas[p].mul(&thetas[r]).scale(&(&(&i * &half) * &qa)));
            }
        }
    }
    for p in 0..l {
        for r in 0..l {
            let q = &q1[p][r];
            if !q.is_zero() {
                let xx = gen(&xis[p]).mul(&gen(&xis[r])).scale(&(&half * q));
                let dxu = gen(&format!("d{}", xis[p])).mul(&us[r]).scale(&-(&i * q));
                omega = omega.add(&xx).add(&dxu);
            }
            let qd: Scalar = (0..l).fold(Scalar::zero(), |acc, s| &acc + &(&q1[p][s] * &dblk[s][r]));
            if !qd.is_zero() {
                omega = omega.add(&us[p].mul(&us[r]).scale(&(&(&i * &half) * &qd)));
            }
        }
    }
    let integrand = omega.exp_even()?;
    let integrated = liouville_integral(&integrand, &aux_names, l, &fibre_basis(action)?)?;
    let theta = integrated.value.rehome(action.table())?;
    let v = vector_field_of(action, x, action.table())?;
    let closed = d_g(&theta, &v)?.is_zero();
    let orientation = orientation_factor(action)?;
    let pushed = direct_image(&theta, &names, &orientation)?;
    let normalized = pushed.value.as_constant().is_some_and(|c| c.is_one());
    let mut log = integrated.log;
    log.extend(pushed.log);
    Ok(ThomForm {
        theta,
        orientation,
        closed,
        pushforward: pushed.value,
        normalized,
        log,
        caveat: (l > 0).then_some(NORMALIZATION_CAVEAT),
    })
}

fn pullback_to_origin(f: &SuperFn) -> Result<Scalar, EquivariantError> {
    let all: Vec<usize> = (0..f.table().len()).collect();
    f.set_zero(&all)?.as_constant().ok_or(EquivariantError::NotScalar)
}

/// `Spf(ρ(X)) = i^{(k−l)/2} ∫ D_ΠV exp μ(iρ(X)^Π)`, evaluated from the
/// moment map of the flipped operator on the flipped form.
pub fn spf(action: &LinearAction, x: &Element) -> Result<(Scalar, AssumptionLog), EquivariantError> {
    if !odd_block_invertible(action, x)? {
        return Err(EquivariantError::NotInvertibleOnOdd);
    }
    let aux = auxiliaries(action)?;
    let names: Vec<String> = aux.iter().map(|g| g.name.clone()).collect();
    let t = VariableTable::new(aux)?;
    let y = pi_flip_operator(&action.rho(x)?)?.scale(&Scalar::i());
    let y = SuperMatrix::from_scalars(y.k(), y.l(), &scalar_rows(&y)?)?;
    let mu = moment_map(&y, &pi_flip_form(action.form())?, &t)?;
    let r = liouville_integral(&mu.exp_even()?, &names, action.l(), &fibre_basis(action)?)?;
    let value = r.value.as_constant().ok_or(EquivariantError::NotScalar)?;
    Ok((&i_pow(half_rank(action)) * &value, r.log))
}

fn scalar_rows(m: &SuperMatrix<Scalar>) -> Result<Vec<Vec<Scalar>>, EquivariantError> {
    let n = m.size();
    (0..n)
        .map(|i| (0..n).map(|j| m.scalar(i, j).ok_or(EquivariantError::NotScalar)).collect())
        .collect()
}

/// `E_𝔤(X) = j*θ(X)` together with `Spf` and the relation
/// `E_𝔤·i^{(k−l)/2} = Spf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerForm {
    pub value: Scalar,
    pub spf: Scalar,
    pub holds: bool,
    pub log: AssumptionLog,
}

impl EulerForm {
    pub fn to_json(&self) -> Value {
        json!({ "euler": self.value.to_string(), "spf": self.spf.to_string(), "holds": self.holds })
    }
}

pub fn euler_form(action: &LinearAction, x: &Element) -> Result<EulerForm, EquivariantError> {
    let thom = mathai_quillen_thom(action, x)?;
    let value = pullback_to_origin(&thom.theta)?;
    let (spf, slog) = spf(action, x)?;
    let holds = &value * &i_pow(half_rank(action)) == spf;
    let mut log = thom.log;
    log.extend(slog);
    Ok(EulerForm { value, spf, holds, log })
}

/// Both sides of `∫_V α = i^{(k−l)/2}(2π)^{(k+l)/2} j*α / Spf(ρ(X))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Localization {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub equal: bool,
    pub log: AssumptionLog,
}

impl Localization {
    pub fn to_json(&self) -> Value {
        json!({ "lhs": self.lhs.to_string(), "rhs": self.rhs.to_string(), "equal": self.equal })
    }
}

pub fn localize_linear(alpha: &SuperFn, action: &LinearAction, x: &Element) -> Result<Localization, EquivariantError> {
    let alpha = alpha.rehome(action.table())?;
    let v = vector_field_of(action, x, action.table())?;
    if !d_g(&alpha, &v)?.is_zero() {
        return Err(EquivariantError::NotClosed);
    }
    let (k, l) = (action.k(), action.l());
    let full = Scalar::tau().powi((k + l) as i64);
    let pushed = direct_image(&alpha, &action.coordinate_names(), &orientation_factor(action)?)?;
    let lhs = &pushed.value.as_constant().ok_or(EquivariantError::NotScalar)? * &full;
    let (s, slog) = spf(action, x)?;
    let j = pullback_to_origin(&alpha)?;
    let rhs = &(&(&i_pow(half_rank(action)) * &full) * &j) * &s.inv().ok_or(EquivariantError::NotInvertibleOnOdd)?;
    let mut log = pushed.log;
    log.extend(slog);
    Ok(Localization { equal: lhs == rhs, lhs, rhs, log })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    /// `ρ(X)` invertible on `V₁`.
    U,
    /// `w ↦ Q(w, ρ(X)w)` positive definite on `V₁`.
    UPlus,
}

pub fn u_membership(action: &LinearAction, x: &Element, which: Membership) -> Result<bool, EquivariantError> {
    match which {
        Membership::U => odd_block_invertible(action, x),
        Membership::UPlus => {
            if !x.is_numeric() {
                return Err(EquivariantError::ParameterizedPoint);
            }
            let (_, q1) = action.blocks(&action.form_rows());
            let (_, dblk) = action.blocks(&action.rho_rows(x)?);
            let l = action.l();
            let prod: Vec<Vec<Scalar>> = (0..l)
                .map(|p| {
                    (0..l).map(|r| (0..l).fold(Scalar::zero(), |acc, s| &acc + &(&q1[p][s] * &dblk[s][r]))).collect()
                })
                .collect();
            let half = Scalar::from_ratio(1, 2);
            let sym: Vec<Vec<Scalar>> =
                (0..l).map(|p| (0..l).map(|r| &half * &(&prod[p][r] + &prod[r][p])).collect()).collect();
            for m in 1..=l {
                let minor: Vec<Vec<Scalar>> = sym[..m].iter().map(|r| r[..m].to_vec()).collect();
                match scalar_det(&minor).as_rational() {
                    Some(v) if v > BigRational::zero() => {}
                    _ => return Ok(false),
                }
            }
            Ok(true)
        }
    }
}

/// Basis of `ker ρ(X)`, split into even and odd vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroLocus {
    pub even: Vec<Vec<Scalar>>,
    pub odd: Vec<Vec<Scalar>>,
}

impl ZeroLocus {
    pub fn dimension(&self) -> (usize, usize) {
        (self.even.len(), self.odd.len())
    }
}

pub fn zero_locus_linear(action: &LinearAction, x: &Element) -> Result<ZeroLocus, EquivariantError> {
    let (a, d) = action.blocks(&action.rho_rows(x)?);
    Ok(ZeroLocus { even: nullspace(&a, action.k()), odd: nullspace(&d, action.l()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::cartan::d;

    fn s(src: &str) -> Scalar {
        src.parse().unwrap()
    }

    fn var(t: &Arc<VariableTable>, n: &str) -> SuperFn {
        SuperFn::var(t, n).unwrap()
    }

    #[test]
    fn pfaffians() {
        let j = vec![vec![s("0"), s("3")], vec![s("-3"), s("0")]];
        assert_eq!(pfaffian(&j), s("3"));
        let m: Vec<Vec<Scalar>> = [[0, 1, 2, 3], [-1, 0, 4, 5], [-2, -4, 0, 6], [-3, -5, -6, 0]]
            .iter()
            .map(|r| r.iter().map(|x| Scalar::from_i64(*x)).collect())
            .collect();
        // af − be + cd = 6 − 10 + 12.
        assert_eq!(pfaffian(&m), s("8"));
    }

    #[test]
    fn orientation_factors() {
        assert_eq!(orientation_factor(&LinearAction::rotation_odd()).unwrap(), s("-1"));
        assert_eq!(orientation_factor(&LinearAction::rotation_even()).unwrap(), s("1"));
        assert_eq!(orientation_factor(&LinearAction::skewed()).unwrap(), s("-1"));
    }

    #[test]
    fn worked_example_thom_form() {
        let a = LinearAction::rotation_odd();
        let th = mathai_quillen_thom(&a, &a.generic()).unwrap();
        let t = a.table().clone();
        let z = Scalar::param("z");
        let (xi, eta, dxi, deta) = (var(&t, "xi"), var(&t, "eta"), var(&t, "dxi"), var(&t, "deta"));
        let quad = dxi.mul(&dxi).add(&deta.mul(&deta));
        let c = &s("-i/2") * &z.inv().unwrap();
        let expect = xi.mul(&eta).add(&quad.scale(&c)).exp_even().unwrap().scale(&(&Scalar::i() * &z.inv().unwrap()));
        assert_eq!(th.theta, expect);
        // Restoring (2π)^{l/2} gives the unnormalized constant 2iπ/z.
        let j = pullback_to_origin(&th.theta).unwrap();
        let unnormalized = &(&Scalar::two_pi() * &Scalar::i()) * &z.inv().unwrap();
        assert_eq!(&j * &Scalar::two_pi(), unnormalized);
        assert!(th.closed);
        assert!(th.normalized, "π_*θ = {}", th.pushforward.render());
        assert_eq!(th.caveat, Some(NORMALIZATION_CAVEAT));
    }

    #[test]
    fn thom_forms_are_closed_and_normalized() {
        for name in ["rot02", "rot20", "rot22", "skew22"] {
            let a = LinearAction::preset(name).unwrap();
            let th = mathai_quillen_thom(&a, &a.generic()).unwrap();
            assert!(th.closed, "{}", name);
            assert!(th.normalized, "{}: π_*θ = {}", name, th.pushforward.render());
        }
    }

    #[test]
    fn even_plane_gives_gaussian_body() {
        let a = LinearAction::rotation_even();
        let th = mathai_quillen_thom(&a, &a.generic()).unwrap();
        let t = a.table().clone();
        let body = th.theta.set_zero(&[2, 3]).unwrap();
        let r2 = var(&t, "x").pow(2).add(&var(&t, "y").pow(2)).scale(&s("-1/2"));
        // The body is the Gaussian times the Euler class.
        let e = pullback_to_origin(&th.theta).unwrap();
        assert_eq!(body, r2.exp_even().unwrap().scale(&e));
        assert_eq!(e, &Scalar::param("z") * &Scalar::i());
        assert!(th.caveat.is_none());
    }

    #[test]
    fn euler_relation() {
        for name in ["rot02", "rot20", "rot22", "skew22"] {
            let a = LinearAction::preset(name).unwrap();
            let e = euler_form(&a, &a.generic()).unwrap();
            assert!(e.holds, "{}: E = {}, Spf = {}", name, e.value, e.spf);
        }
    }

    #[test]
    fn spf_of_a_direct_sum_is_the_product() {
        let mixed = LinearAction::rotation_mixed();
        let x = mixed.generic();
        let (whole, _) = spf(&mixed, &x).unwrap();
        let (odd, _) = spf(&LinearAction::rotation_odd(), &Element(vec![Scalar::param("z2")])).unwrap();
        let (even, _) = spf(&LinearAction::rotation_even(), &Element(vec![Scalar::param("z1")])).unwrap();
        assert_eq!(whole, &odd * &even);
    }

    #[test]
    fn spf_needs_invertible_odd_block() {
        let a = LinearAction::rotation_odd();
        let zero = a.element(&[]).unwrap();
        assert_eq!(spf(&a, &zero).unwrap_err(), EquivariantError::NotInvertibleOnOdd);
        assert_eq!(mathai_quillen_thom(&a, &zero).unwrap_err(), EquivariantError::NotInvertibleOnOdd);
    }

    #[test]
    fn beta_zero_part() {
        for name in LinearAction::PRESETS {
            let a = LinearAction::preset(name).unwrap();
            let b = beta_form(&a, &a.generic()).unwrap();
            assert!(b.holds, "{}", name);
            assert!(b.invariant, "{}", name);
        }
        let a = LinearAction::rotation_odd();
        let b = beta_form(&a, &a.generic()).unwrap();
        let t = a.table().clone();
        // Q(X_M, X_M) = −2z²ξη for the odd plane.
        let z2 = Scalar::param("z").powi(2);
        assert_eq!(b.q_norm, var(&t, "xi").mul(&var(&t, "eta")).scale(&(&s("-2") * &z2)));
        let zero = beta_form(&a, &a.element(&[]).unwrap()).unwrap();
        assert!(zero.beta.is_zero());
    }

    #[test]
    fn localization_of_thom_and_multiples() {
        for name in ["rot02", "rot22"] {
            let a = LinearAction::preset(name).unwrap();
            let x = a.generic();
            let th = mathai_quillen_thom(&a, &x).unwrap();
            let loc = localize_linear(&th.theta, &a, &x).unwrap();
            assert!(loc.equal, "{}: {} vs {}", name, loc.lhs, loc.rhs);
            assert_eq!(loc.lhs, Scalar::tau().powi((a.k() + a.l()) as i64));
            let c = s("3/7");
            let scaled = localize_linear(&th.theta.scale(&c), &a, &x).unwrap();
            assert!(scaled.equal);
            assert_eq!(scaled.lhs, &loc.lhs * &c);
            let omega = beta_form(&a, &x).unwrap().d_g_beta;
            let p = SuperFn::one(a.table()).add(&omega).add(&omega.mul(&omega).scale(&s("2")));
            let with_poly = localize_linear(&th.theta.mul(&p), &a, &x).unwrap();
            assert!(with_poly.equal, "{}: {} vs {}", name, with_poly.lhs, with_poly.rhs);
        }
    }

    #[test]
    fn localization_rejects_non_closed_forms() {
        let a = LinearAction::rotation_odd();
        let t = a.table().clone();
        assert_eq!(localize_linear(&var(&t, "xi"), &a, &a.generic()).unwrap_err(), EquivariantError::NotClosed);
        assert!(!d(&var(&t, "xi")).unwrap().is_zero());
    }

    #[test]
    fn membership() {
        let a = LinearAction::rotation_odd();
        let one = a.basis_element(0);
        assert!(u_membership(&a, &one, Membership::U).unwrap());
        // Q₁ρ₁ = [[0,1],[−1,0]]·[[0,−1],[1,0]] = 1.
        assert!(u_membership(&a, &one, Membership::UPlus).unwrap());
        let minus = a.element(&[("G", s("-1"))]).unwrap();
        assert!(!u_membership(&a, &minus, Membership::UPlus).unwrap());
        assert!(!u_membership(&a, &a.element(&[]).unwrap(), Membership::U).unwrap());
        assert_eq!(u_membership(&a, &a.generic(), Membership::UPlus).unwrap_err(), EquivariantError::ParameterizedPoint);
        let m = LinearAction::rotation_mixed();
        let only_even = m.element(&[("G1", s("1"))]).unwrap();
        assert!(!u_membership(&m, &only_even, Membership::U).unwrap());
    }

    #[test]
    fn zero_loci() {
        let m = LinearAction::rotation_mixed();
        assert_eq!(zero_locus_linear(&m, &m.generic()).unwrap().dimension(), (0, 0));
        assert_eq!(zero_locus_linear(&m, &m.element(&[]).unwrap()).unwrap().dimension(), (2, 2));
        assert_eq!(zero_locus_linear(&m, &m.element(&[("G1", s("2"))]).unwrap()).unwrap().dimension(), (0, 2));
    }
}
