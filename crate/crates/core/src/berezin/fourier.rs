//! Fourier transforms between functions on `V` and distributions on `V*`.

use std::sync::Arc;

use super::{integrate_superspace, AssumptionLog, BerezinError, IntegrationSpec};
use crate::grassmann::{Generator, Parity, Role, VariableTable};
use crate::scalars::Scalar;
use crate::SuperFn;

/// `prefactor · d_(measure) · density`. A plain function is a
/// distribution with an empty measure and unit prefactor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub prefactor: Scalar,
    pub measure: Vec<String>,
    pub density: SuperFn,
}

impl Distribution {
    pub fn function(f: SuperFn) -> Self {
        Distribution { prefactor: Scalar::from_i64(1), measure: Vec::new(), density: f }
    }

    /// `prefactor · density`, forgetting the measure.
    pub fn flatten(&self) -> SuperFn {
        self.density.scale(&self.prefactor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierDirection {
    FunctionToDistribution,
    DistributionToFunction,
}

/// The variables integrated out and the dual variables introduced, paired
/// by position and of equal parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourierSpace {
    pub vars: Vec<String>,
    pub duals: Vec<String>,
}

impl FourierSpace {
    pub fn new<T: AsRef<str>>(vars: &[T], duals: &[T]) -> Self {
        FourierSpace {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            duals: duals.iter().map(|v| v.as_ref().to_string()).collect(),
        }
    }
}

/// `(−1)^{n(n−1)/2} iⁿ / (2π)^m` for `m` even and `n` odd directions.
pub fn fourier_prefactor(m: usize, n: usize) -> Scalar {
    let sign = if (n * n.saturating_sub(1) / 2) % 2 == 1 { -1 } else { 1 };
    &(&Scalar::from_i64(sign) * &Scalar::i().powi(n as i64)) * &Scalar::two_pi().powi(-(m as i64))
}

/// Function to distribution:
/// `φ ↦ c · d_(e,f) ∫ d_(x,ξ) φ · exp(i Σ eᵢxⁱ + i Σ f_jξʲ)`.
/// Distribution to function:
/// `c·d_(e,f)·ψ ↦ c ∫ d_(e,f) ψ · exp(−i Σ eᵢxⁱ − i Σ f_jξʲ)`.
/// In both directions the point of `V*` stands on the left of the pairing.
pub fn fourier_transform(
    input: &Distribution,
    direction: FourierDirection,
    space: &FourierSpace,
) -> Result<(Distribution, AssumptionLog), BerezinError> {
    let f = &input.density;
    let table = f.table().clone();
    if space.vars.len() != space.duals.len() {
        return Err(BerezinError::DimensionMismatch);
    }
    let mut parities = Vec::with_capacity(space.vars.len());
    for v in &space.vars {
        let k = table.index(v).ok_or_else(|| BerezinError::UnknownVariable(v.clone()))?;
        parities.push(table.parity(k));
    }
    match direction {
        FourierDirection::FunctionToDistribution if !input.measure.is_empty() => {
            return Err(BerezinError::MeasureMismatch)
        }
        FourierDirection::DistributionToFunction if input.measure != space.vars => {
            return Err(BerezinError::MeasureMismatch)
        }
        _ => {}
    }
    let duals: Vec<Generator> = space
        .duals
        .iter()
        .zip(&parities)
        .map(|(name, p)| Generator { name: name.clone(), parity: *p, role: Role::ParameterDual })
        .collect();
    let work = table.extend(duals.clone())?;
    let g = f.embed(&work)?;
    let mut pairing = SuperFn::zero(&work);
    for (v, d) in space.vars.iter().zip(&space.duals) {
        let (v, d) = (SuperFn::var(&work, v)?, SuperFn::var(&work, d)?);
        pairing = pairing.add(&match direction {
            FourierDirection::FunctionToDistribution => d.mul(&v),
            FourierDirection::DistributionToFunction => v.mul(&d).neg(),
        });
    }
    let phase = pairing.scale(&Scalar::i()).exp_even()?;
    let integrated = integrate_superspace(&g.mul(&phase), &IntegrationSpec::raw(&space.vars))?;
    // Differential roles are re-indexed; a differential whose coordinate
    // was integrated out becomes a plain generator.
    let survivors: Vec<usize> =
        (0..table.len()).filter(|&k| !space.vars.contains(&table.gen(k).name)).collect();
    let kept: Vec<Generator> = survivors
        .iter()
        .map(|&k| {
            let mut g = table.gen(k).clone();
            if let Role::Differential(base) = g.role {
                g.role = match survivors.iter().position(|&j| j == base) {
                    Some(b) => Role::Differential(b),
                    None => Role::Coordinate,
                };
            }
            g
        })
        .chain(duals)
        .collect();
    let target: Arc<VariableTable> = VariableTable::new(kept)?;
    let density = integrated.value.rehome(&target)?;
    let out = match direction {
        FourierDirection::FunctionToDistribution => {
            let m = parities.iter().filter(|p| **p == Parity::Even).count();
            let n = parities.len() - m;
            Distribution {
                prefactor: &input.prefactor * &fourier_prefactor(m, n),
                measure: space.duals.clone(),
                density,
            }
        }
        FourierDirection::DistributionToFunction => {
            Distribution::function(density.scale(&input.prefactor))
        }
    };
    Ok((out, integrated.log))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(src: &str) -> Scalar {
        src.parse().unwrap()
    }

    #[test]
    fn purely_odd_line() {
        let t = VariableTable::coordinates(&[("xi", Parity::Odd), ("a", Parity::Even), ("b", Parity::Even)])
            .unwrap();
        let (xi, a, b) = (SuperFn::var(&t, "xi").unwrap(), SuperFn::var(&t, "a").unwrap(), SuperFn::var(&t, "b").unwrap());
        let phi = a.add(&xi.mul(&b));
        let space = FourierSpace::new(&["xi"], &["f"]);
        let (hat, _) =
            fourier_transform(&Distribution::function(phi.clone()), FourierDirection::FunctionToDistribution, &space)
                .unwrap();
        assert_eq!(hat.prefactor, Scalar::i());
        assert_eq!(hat.measure, vec!["f".to_string()]);
        let dt = hat.density.table().clone();
        let f = SuperFn::var(&dt, "f").unwrap();
        let (a2, b2) = (SuperFn::var(&dt, "a").unwrap(), SuperFn::var(&dt, "b").unwrap());
        assert_eq!(hat.density, b2.sub(&a2.mul(&f).scale(&Scalar::i())));
        let back_space = FourierSpace::new(&["f"], &["xi"]);
        let (back, _) = fourier_transform(&hat, FourierDirection::DistributionToFunction, &back_space).unwrap();
        assert_eq!(back.density.rehome(&t).unwrap(), phi);
    }

    #[test]
    fn even_line_gaussian() {
        let t = VariableTable::coordinates(&[("x", Parity::Even)]).unwrap();
        let x = SuperFn::var(&t, "x").unwrap();
        let phi = x.mul(&x).scale(&s("-1/2")).exp_even().unwrap();
        let space = FourierSpace::new(&["x"], &["e"]);
        let (hat, _) =
            fourier_transform(&Distribution::function(phi.clone()), FourierDirection::FunctionToDistribution, &space)
                .unwrap();
        let dt = hat.density.table().clone();
        let e = SuperFn::var(&dt, "e").unwrap();
        let expect = e.mul(&e).scale(&s("-1/2")).exp_even().unwrap().scale(&Scalar::tau());
        assert_eq!(hat.density, expect);
        assert_eq!(hat.prefactor, Scalar::two_pi().inv().unwrap());
        let (back, _) =
            fourier_transform(&hat, FourierDirection::DistributionToFunction, &FourierSpace::new(&["e"], &["x"]))
                .unwrap();
        assert_eq!(back.density.rehome(&t).unwrap(), phi);
    }

    #[test]
    fn odd_involution_up_to_three() {
        for n in 1..=3usize {
            let names: Vec<String> = (1..=n).map(|i| format!("xi{}", i)).collect();
            let duals: Vec<String> = (1..=n).map(|i| format!("f{}", i)).collect();
            let spec: Vec<(&str, Parity)> = names.iter().map(|v| (v.as_str(), Parity::Odd)).collect();
            let t = VariableTable::coordinates(&spec).unwrap();
            let mut phi = SuperFn::constant(&t, s("2"));
            let mut mono = SuperFn::one(&t);
            for (i, v) in names.iter().enumerate() {
                mono = mono.mul(&SuperFn::var(&t, v).unwrap());
                phi = phi.add(&mono.scale(&Scalar::from_i64(i as i64 + 3)));
                phi = phi.add(&SuperFn::var(&t, v).unwrap().scale(&Scalar::i()));
            }
            let fwd = FourierSpace { vars: names.clone(), duals: duals.clone() };
            let (hat, _) =
                fourier_transform(&Distribution::function(phi.clone()), FourierDirection::FunctionToDistribution, &fwd)
                    .unwrap();
            let back_space = FourierSpace { vars: duals, duals: names };
            let (back, _) = fourier_transform(&hat, FourierDirection::DistributionToFunction, &back_space).unwrap();
            assert_eq!(back.density.rehome(&t).unwrap(), phi, "n = {}", n);
        }
    }

    #[test]
    fn prefactors() {
        assert_eq!(fourier_prefactor(0, 1), Scalar::i());
        assert_eq!(fourier_prefactor(0, 2), Scalar::from_i64(1));
        assert_eq!(fourier_prefactor(0, 3), Scalar::i());
        assert_eq!(fourier_prefactor(2, 0), Scalar::two_pi().powi(-2));
    }

    #[test]
    fn differentials_survive_the_transform() {
        let t = VariableTable::with_differentials(&[("x", Parity::Even), ("xi", Parity::Odd)]).unwrap();
        let v = |n: &str| SuperFn::var(&t, n).unwrap();
        let phi = v("dx").add(&v("xi").mul(&v("dxi")));
        let space = FourierSpace::new(&["xi"], &["f"]);
        let (hat, _) =
            fourier_transform(&Distribution::function(phi.clone()), FourierDirection::FunctionToDistribution, &space)
                .unwrap();
        let dt = hat.density.table();
        assert_eq!(dt.gen(dt.index("dx").unwrap()).role, Role::Differential(dt.index("x").unwrap()));
        assert_eq!(dt.gen(dt.index("dxi").unwrap()).role, Role::Coordinate);
        let (back, _) =
            fourier_transform(&hat, FourierDirection::DistributionToFunction, &FourierSpace::new(&["f"], &["xi"])).unwrap();
        assert_eq!(back.density.rehome(&t).unwrap(), phi);
    }
}
