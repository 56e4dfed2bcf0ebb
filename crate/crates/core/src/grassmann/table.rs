use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::GrassmannError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn from_odd(odd: bool) -> Parity {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn add(self, o: Parity) -> Parity {
        Parity::from_odd(self.is_odd() ^ o.is_odd())
    }

    /// `(-1)^{p q}` as a boolean "negate".
    pub fn sign_negates(self, o: Parity) -> bool {
        self.is_odd() && o.is_odd()
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Coordinate,
    /// The differential of the generator at this index.
    Differential(usize),
    Auxiliary,
    ParameterDual,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
    pub role: Role,
}

/// Ordered generators of a function algebra. Odd generators are numbered
/// by their position among odd generators (at most 64), even ones likewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableTable {
    gens: Vec<Generator>,
    slots: Vec<u16>,
    odd: Vec<usize>,
    even: Vec<usize>,
    by_name: HashMap<String, usize>,
}

impl VariableTable {
    pub fn new(gens: Vec<Generator>) -> Result<Arc<VariableTable>, GrassmannError> {
        let mut by_name = HashMap::new();
        let mut slots = Vec::with_capacity(gens.len());
        let mut odd = Vec::new();
        let mut even = Vec::new();
        for (k, g) in gens.iter().enumerate() {
            if by_name.insert(g.name.clone(), k).is_some() {
                return Err(GrassmannError::DuplicateName(g.name.clone()));
            }
            if let Role::Differential(base) = g.role {
                let b = gens.get(base).ok_or_else(|| GrassmannError::UnknownGenerator(g.name.clone()))?;
                if b.parity == g.parity {
                    return Err(GrassmannError::DifferentialParity(g.name.clone()));
                }
            }
            match g.parity {
                Parity::Odd => {
                    slots.push(odd.len() as u16);
                    odd.push(k);
                }
                Parity::Even => {
                    slots.push(even.len() as u16);
                    even.push(k);
                }
            }
        }
        if odd.len() > 64 {
            return Err(GrassmannError::TooManyOdd(odd.len()));
        }
        Ok(Arc::new(VariableTable { gens, slots, odd, even, by_name }))
    }

    /// A table from `(name, parity)` pairs, all coordinates.
    pub fn coordinates(spec: &[(&str, Parity)]) -> Result<Arc<VariableTable>, GrassmannError> {
        VariableTable::new(
            spec.iter()
                .map(|(n, p)| Generator { name: n.to_string(), parity: *p, role: Role::Coordinate })
                .collect(),
        )
    }

    /// Coordinates followed by their differentials `d<name>`.
    pub fn with_differentials(spec: &[(&str, Parity)]) -> Result<Arc<VariableTable>, GrassmannError> {
        let mut gens: Vec<Generator> = spec
            .iter()
            .map(|(n, p)| Generator { name: n.to_string(), parity: *p, role: Role::Coordinate })
            .collect();
        for (k, (n, p)) in spec.iter().enumerate() {
            gens.push(Generator { name: format!("d{}", n), parity: p.flip(), role: Role::Differential(k) });
        }
        VariableTable::new(gens)
    }

    /// A new table with `extra` appended; indices of existing generators
    /// are unchanged.
    pub fn extend(&self, extra: Vec<Generator>) -> Result<Arc<VariableTable>, GrassmannError> {
        let mut gens = self.gens.clone();
        gens.extend(extra);
        VariableTable::new(gens)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn gen(&self, k: usize) -> &Generator {
        &self.gens[k]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, GrassmannError> {
        self.index(name).ok_or_else(|| GrassmannError::UnknownGenerator(name.to_string()))
    }

    pub fn parity(&self, k: usize) -> Parity {
        self.gens[k].parity
    }

    pub fn slot(&self, k: usize) -> u16 {
        self.slots[k]
    }

    pub fn odd_count(&self) -> usize {
        self.odd.len()
    }

    pub fn even_count(&self) -> usize {
        self.even.len()
    }

    /// Table index of the odd generator with bit position `slot`.
    pub fn odd_gen(&self, slot: usize) -> usize {
        self.odd[slot]
    }

    /// Table index of the even generator with slot `slot`.
    pub fn even_gen(&self, slot: usize) -> usize {
        self.even[slot]
    }

    pub fn name(&self, k: usize) -> &str {
        &self.gens[k].name
    }

    /// Index of the differential of generator `k`, if present.
    pub fn differential_of(&self, k: usize) -> Option<usize> {
        self.gens.iter().position(|g| g.role == Role::Differential(k))
    }

    /// True when `self` is a prefix of `other` (same leading generators).
    pub fn is_prefix_of(&self, other: &VariableTable) -> bool {
        self.gens.len() <= other.gens.len() && self.gens[..] == other.gens[..self.gens.len()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differentials_flip_parity() {
        let t = VariableTable::with_differentials(&[("x", Parity::Even), ("xi", Parity::Odd)]).unwrap();
        assert_eq!(t.parity(t.require("dx").unwrap()), Parity::Odd);
        assert_eq!(t.parity(t.require("dxi").unwrap()), Parity::Even);
        assert_eq!(t.differential_of(0), Some(2));
        assert_eq!(t.odd_count(), 2);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(VariableTable::coordinates(&[("x", Parity::Even), ("x", Parity::Odd)]).is_err());
        let bad = vec![
            Generator { name: "x".into(), parity: Parity::Even, role: Role::Coordinate },
            Generator { name: "dx".into(), parity: Parity::Even, role: Role::Differential(0) },
        ];
        assert_eq!(VariableTable::new(bad), Err(GrassmannError::DifferentialParity("dx".into())));
    }
}
