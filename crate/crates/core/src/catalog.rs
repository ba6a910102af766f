//! Named parameter tuples and inline tuple syntax.
//!
//! Ids: `bh` (any N), `a`/`b` (N=6), `alpha`/`beta`/`gamma`/`delta` (N=7),
//! `t1`, `t2`, ... (k-th real non-BH solver tuple), or an inline list
//! `A=673.77,B=-253.58,C=-65.80`.

use std::collections::HashMap;

use thiserror::Error;

use crate::fixtures::{FixtureError, ReferenceTable};
use crate::numerics::{PrecReal, Rational};
use crate::poly::MultiPoly;
use crate::secular::{bh_tuple, constraints_at, derive_secular, ModelSpec, SecularError};
use crate::solve::{
    certify, refine_seed, solve_epn, ParamValue, ParameterTuple, RealityClass, SolveError, SolveMethod,
};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown tuple `{id}` for N={n}")]
    Unknown { id: String, n: usize },
    #[error("bad inline tuple: {0}")]
    Inline(String),
    #[error("N={n} has only {available} real non-BH tuples, asked for t{index}")]
    OutOfRange { n: usize, index: usize, available: usize },
    #[error(transparent)]
    Secular(#[from] SecularError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
}

/// Maximal-degeneracy system at `z = 1` with its parameter names.
pub fn epn_system(n: usize) -> Result<(Vec<MultiPoly>, Vec<String>), CatalogError> {
    let model = ModelSpec::new(n)?;
    let sys = constraints_at(&derive_secular(&model)?, &Rational::from(1))?;
    Ok((sys, model.param_names()))
}

/// Ids accepted by [`resolve`] for dimension `n`, not counting `tK` and inline forms.
pub fn named_ids(n: usize) -> Vec<&'static str> {
    match n {
        6 => vec!["bh", "a", "b"],
        7 => vec!["bh", "alpha", "beta", "gamma", "delta"],
        _ => vec!["bh"],
    }
}

/// Resolves an id to a certified tuple. `solved` supplies previously
/// computed solver tuples for `tK` ids; without it the solver is run.
pub fn resolve(
    n: usize,
    id: &str,
    digits: u32,
    solved: Option<&[ParameterTuple]>,
) -> Result<ParameterTuple, CatalogError> {
    let (system, names) = epn_system(n)?;
    let unknown = || CatalogError::Unknown { id: id.to_string(), n };
    let mut tuple = match (n, id) {
        (_, "bh") => {
            let vals: Vec<Rational> = bh_tuple(n)?.into_iter().map(|(_, v)| v).collect();
            let mut t = ParameterTuple::from_exact(&names, &vals);
            t.is_bh = true;
            t
        }
        (6, "a") | (6, "b") => {
            let seed = ReferenceTable::tuples().reals(&format!("n6.{id}"), digits + 20)?;
            refine_seed(&system, &names, &seed, digits)?
        }
        (7, "alpha" | "beta" | "gamma" | "delta") => closed_form_n7(id, &names, digits),
        _ if id.contains('=') => inline(&system, &names, id, digits)?,
        _ => {
            let index: usize = id
                .strip_prefix('t')
                .and_then(|k| k.parse().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(unknown)?;
            let owned;
            let list = match solved {
                Some(l) => l,
                None => {
                    owned = solve_epn(n, digits.max(20), SolveMethod::Auto)?.tuples;
                    &owned
                }
            };
            let real: Vec<&ParameterTuple> = list
                .iter()
                .filter(|t| !t.is_bh && t.reality == RealityClass::AllReal)
                .collect();
            (*real.get(index - 1).ok_or(CatalogError::OutOfRange {
                n,
                index,
                available: real.len(),
            })?)
            .clone()
        }
    };
    if tuple.residual.is_none() && tuple.reality == RealityClass::AllReal {
        tuple.digits = digits;
        let cert = certify(&tuple, &system, digits)?;
        tuple.exact_zero = cert.exact_zero;
        tuple.residual = Some(cert.residual);
    }
    Ok(tuple)
}

/// `A = -48, B = 76 - 6r, C = 6r` with `r = -59 +- 10 sqrt 34`, and
/// `A = 36r, B = 28 - 54r, C = 18r` with `r = (3 +- sqrt 21) / 2`.
fn closed_form_n7(id: &str, names: &[String], digits: u32) -> ParameterTuple {
    let wd = digits + 30;
    let real = |k: i64| PrecReal::from_i64(k, wd);
    let values = match id {
        "alpha" | "beta" => {
            let root = real(34).sqrt_nonneg() * real(10);
            let r = if id == "alpha" { real(-59) + root } else { real(-59) - root };
            vec![
                ParamValue::Exact(Rational::from(-48)),
                ParamValue::Numeric(real(76) - real(6) * r.clone()),
                ParamValue::Numeric(real(6) * r),
            ]
        }
        _ => {
            let root = real(21).sqrt_nonneg();
            let r = if id == "gamma" { real(3) + root } else { real(3) - root };
            let r = r * PrecReal::from_rational(&Rational::from((1, 2)), wd);
            vec![
                ParamValue::Numeric(real(36) * r.clone()),
                ParamValue::Numeric(real(28) - real(54) * r.clone()),
                ParamValue::Numeric(real(18) * r),
            ]
        }
    };
    let mut t = ParameterTuple::from_exact(names, &[]);
    t.values = values;
    t.digits = digits;
    t
}

fn inline(system: &[MultiPoly], names: &[String], text: &str, digits: u32) -> Result<ParameterTuple, CatalogError> {
    let mut given: HashMap<&str, &str> = HashMap::new();
    for part in text.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CatalogError::Inline(format!("`{part}` is not NAME=VALUE")))?;
        given.insert(k.trim(), v.trim());
    }
    if given.len() != names.len() || names.iter().any(|n| !given.contains_key(n.as_str())) {
        return Err(CatalogError::Inline(format!("expected exactly {}", names.join(","))));
    }
    let texts: Vec<&str> = names.iter().map(|n| given[n.as_str()]).collect();
    let exact: Option<Vec<Rational>> = texts.iter().map(|t| t.parse::<Rational>().ok()).collect();
    if let Some(vals) = exact {
        return Ok(ParameterTuple::from_exact(names, &vals));
    }
    let seed = texts
        .iter()
        .map(|t| PrecReal::parse(t, digits + 20))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CatalogError::Inline(e.to_string()))?;
    Ok(refine_seed(system, names, &seed, digits)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_tuples_certify() {
        for (n, id) in [(6, "bh"), (6, "a"), (6, "b"), (7, "alpha"), (7, "gamma"), (7, "delta")] {
            let t = resolve(n, id, 40, None).unwrap();
            assert!(t.certified(), "{n} {id}");
        }
        let a = resolve(7, "alpha", 40, None).unwrap();
        assert!((a.get("C").unwrap().real().unwrap().to_f64() - 6.0 * -0.69048).abs() < 1e-3);
    }

    #[test]
    fn inline_forms() {
        let t = resolve(4, "A=64,B=-27", 30, None).unwrap();
        assert!(t.exact_zero);
        let t = resolve(6, "A=673.7717872,B=-253.5822865,C=-65.80360706", 40, None).unwrap();
        assert!(t.certified());
        assert!(matches!(resolve(6, "A=1,B=2", 30, None), Err(CatalogError::Inline(_))));
        assert!(matches!(resolve(6, "nope", 30, None), Err(CatalogError::Unknown { .. })));
    }
}
