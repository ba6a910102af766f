//! Reference data shipped with the crate: printed polynomials and tuples.
//!
//! Fixture files are plain text. Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::numerics::{NumericsError, PrecReal};
use crate::poly::{MultiPoly, PolyError, VarSet};
use crate::realroots::{RootError, UniPoly};
use crate::secular::{ModelSpec, SecularError};

pub const N6_SECULAR: &str = include_str!("../fixtures/n6_secular.txt");
pub const N7_SECULAR_Z1: &str = include_str!("../fixtures/n7_secular_z1.txt");
pub const N8_CONSTRAINTS_Z1: &str = include_str!("../fixtures/n8_constraints_z1.txt");
pub const N9_CONSTRAINTS_Z1: &str = include_str!("../fixtures/n9_constraints_z1.txt");
pub const N6_QUARTIC: &str = include_str!("../fixtures/n6_quartic.txt");
pub const N8_ELIMINANT: &str = include_str!("../fixtures/n8_eliminant.txt");
pub const TUPLES: &str = include_str!("../fixtures/tuples.txt");
pub const BOUNDARIES: &str = include_str!("../fixtures/boundaries.txt");

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("fixture has no data lines")]
    Empty,
    #[error("malformed line `{0}`")]
    Malformed(String),
    #[error("no reference entry `{0}`")]
    MissingKey(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Secular(#[from] SecularError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Non-comment, non-blank lines.
pub fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn joined(text: &str) -> Result<String, FixtureError> {
    let body: Vec<&str> = data_lines(text).collect();
    if body.is_empty() {
        return Err(FixtureError::Empty);
    }
    Ok(body.join(" "))
}

fn per_line(text: &str, vars: &Arc<VarSet>) -> Result<Vec<MultiPoly>, FixtureError> {
    data_lines(text)
        .map(|l| MultiPoly::parse(l, vars).map_err(Into::into))
        .collect()
}

/// The N=6 secular polynomial, over the model's secular variables.
pub fn n6_secular() -> Result<MultiPoly, FixtureError> {
    let vars = ModelSpec::new(6)?.secular_vars();
    Ok(MultiPoly::parse(&joined(N6_SECULAR)?, &vars)?)
}

/// The N=7 secular polynomial at `z = 1`, over the model's secular variables.
pub fn n7_secular_z1() -> Result<MultiPoly, FixtureError> {
    let vars = ModelSpec::new(7)?.secular_vars();
    Ok(MultiPoly::parse(&joined(N7_SECULAR_Z1)?, &vars)?)
}

/// `P_1 .. P_4` at `z = 1` for N=8.
pub fn n8_constraints_z1() -> Result<Vec<MultiPoly>, FixtureError> {
    per_line(N8_CONSTRAINTS_Z1, &ModelSpec::new(8)?.param_vars())
}

/// `P_1 .. P_4` at `z = 1` for N=9.
pub fn n9_constraints_z1() -> Result<Vec<MultiPoly>, FixtureError> {
    per_line(N9_CONSTRAINTS_Z1, &ModelSpec::new(9)?.param_vars())
}

/// Quartic in `C` for N=6.
pub fn n6_quartic() -> Result<UniPoly, FixtureError> {
    let vars = ModelSpec::new(6)?.param_vars();
    let p = MultiPoly::parse(&joined(N6_QUARTIC)?, &vars)?;
    Ok(UniPoly::from_multipoly(&p, "C")?)
}

/// The degree-17 polynomial `R(y)` for N=8.
pub fn n8_eliminant() -> Result<UniPoly, FixtureError> {
    let vars = VarSet::new(["y"])?;
    let p = MultiPoly::parse(&joined(N8_ELIMINANT)?, &vars)?;
    Ok(UniPoly::from_multipoly(&p, "y")?)
}

/// Key/value table of decimal strings.
#[derive(Clone, Debug, Default)]
pub struct ReferenceTable {
    entries: BTreeMap<String, Vec<String>>,
}

impl ReferenceTable {
    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        let mut entries = BTreeMap::new();
        for line in data_lines(text) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| FixtureError::Malformed(line.to_string()))?;
            let vals = v.split(',').map(|x| x.trim().to_string()).collect();
            entries.insert(k.trim().to_string(), vals);
        }
        Ok(ReferenceTable { entries })
    }

    pub fn tuples() -> Self {
        Self::parse(TUPLES).expect("bundled tuple table parses")
    }

    pub fn boundaries() -> Self {
        Self::parse(BOUNDARIES).expect("bundled boundary table parses")
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn raw(&self, key: &str) -> Result<&[String], FixtureError> {
        self.entries
            .get(key)
            .map(Vec::as_slice)
            .ok_or_else(|| FixtureError::MissingKey(key.to_string()))
    }

    pub fn reals(&self, key: &str, digits: u32) -> Result<Vec<PrecReal>, FixtureError> {
        self.raw(key)?
            .iter()
            .map(|t| PrecReal::parse(t, digits).map_err(Into::into))
            .collect()
    }

    pub fn f64s(&self, key: &str) -> Result<Vec<f64>, FixtureError> {
        self.raw(key)?
            .iter()
            .map(|t| t.parse::<f64>().map_err(|_| FixtureError::Malformed(t.clone())))
            .collect()
    }
}

/// Number of significant digits written in a decimal string.
pub fn printed_digits(text: &str) -> usize {
    let digits: String = text.chars().filter(char::is_ascii_digit).collect();
    digits.trim_start_matches('0').len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_parse() {
        assert_eq!(n6_secular().unwrap().degree_in("s").unwrap(), 3);
        assert_eq!(n7_secular_z1().unwrap().degree_in("z").unwrap(), 0);
        assert_eq!(n8_constraints_z1().unwrap().len(), 4);
        assert_eq!(n9_constraints_z1().unwrap().len(), 4);
        assert_eq!(n6_quartic().unwrap().degree(), 4);
        assert_eq!(n8_eliminant().unwrap().degree(), 17);
        let t = ReferenceTable::tuples();
        assert_eq!(t.f64s("n8.roots").unwrap().len(), 7);
        assert_eq!(t.raw("n4.nonbh").unwrap(), ["64", "-27"]);
        assert_eq!(printed_digits("-65.80360706"), 10);
        assert_eq!(printed_digits("0.01041"), 4);
    }
}
