//! Exact solution of the maximal-degeneracy constraints `P_m(z = 1) = 0`.
//!
//! The primary path is a lex Gröbner basis; when it is in shape position the
//! parameters are explicit polynomials in the last variable. A resultant
//! chain gives an independent second path.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groebner::{groebner_lex_with_budget, shape_form, GroebnerBudget, GroebnerError};
use crate::numerics::{CMatrix, Integer, PrecComplex, PrecReal, Rational};
use crate::poly::{resultant, MultiPoly, PolyError, VarSet};
use crate::realroots::{
    complex_roots, complex_roots_rational, isolate, real_roots, refine_interval, IsolatingInterval,
    RootError, UniPoly,
};
use crate::secular::{bh_tuple, constraints_at, derive_secular, ModelSpec, SecularError};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SolveError {
    #[error("system must have as many equations as unknowns ({equations} vs {unknowns})")]
    NotSquare { equations: usize, unknowns: usize },
    #[error("resultant of `{0}` and `{1}` vanishes identically (common component)")]
    Degenerate(String, String),
    #[error("no eliminant in `{0}` was produced")]
    NoEliminant(String),
    #[error("requested precision {0} is below the minimum of 20 digits")]
    PrecisionTooLow(u32),
    #[error("Gröbner budget exceeded and resultant fallback failed: {0}")]
    BudgetExceeded(String),
    #[error("tuple does not assign `{0}`")]
    MissingValue(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error(transparent)]
    Secular(#[from] SecularError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Groebner,
    ResultantChain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SolveMethod {
    Groebner,
    Resultant,
    #[default]
    Auto,
}

/// How a variable is recovered once the values of later variables are known.
#[derive(Clone, Debug, PartialEq)]
pub enum BackSubstitution {
    /// `var = expr`, with `expr` a polynomial in the eliminated variable.
    Explicit { var: String, expr: MultiPoly },
    /// `var` is a common root of these polynomials in `var` and later variables.
    Triangular { var: String, polys: Vec<MultiPoly> },
}

impl BackSubstitution {
    pub fn var(&self) -> &str {
        match self {
            BackSubstitution::Explicit { var, .. } | BackSubstitution::Triangular { var, .. } => var,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EliminationResult {
    /// Variable the eliminant is univariate in.
    pub variable: String,
    /// Primitive, square-free integer polynomial in `variable`.
    pub eliminant: MultiPoly,
    /// Back-substitution steps, outermost-first in solving order.
    pub chain: Vec<BackSubstitution>,
    pub provenance: Provenance,
    /// Eliminant roots that could not be extended to the full system.
    pub extension_failures: Vec<String>,
}

impl EliminationResult {
    pub fn degree(&self) -> usize {
        self.eliminant.degree_in(&self.variable).unwrap_or(0) as usize
    }

    pub fn eliminant_uni(&self) -> UniPoly {
        UniPoly::from_multipoly(&self.eliminant, &self.variable).expect("eliminant is univariate")
    }

    /// Splits the eliminant into the linear factor vanishing at `value` and its cofactor.
    pub fn split_root(&self, value: &Rational) -> Option<(UniPoly, UniPoly)> {
        let e = self.eliminant_uni();
        if e.eval(value) != 0 {
            return None;
        }
        let lin = UniPoly::new(vec![Rational::from(-value), Rational::from(1)]);
        let (q, r) = e.div_rem(&lin);
        debug_assert!(r.is_zero());
        Some((lin, q.primitive()))
    }

    pub fn to_record(&self) -> EliminationRecord {
        EliminationRecord {
            variables: self.eliminant.vars().names().to_vec(),
            variable: self.variable.clone(),
            eliminant: self.eliminant.to_string(),
            chain: self
                .chain
                .iter()
                .map(|b| match b {
                    BackSubstitution::Explicit { var, expr } => ChainRecord {
                        var: var.clone(),
                        explicit: Some(expr.to_string()),
                        polys: Vec::new(),
                    },
                    BackSubstitution::Triangular { var, polys } => ChainRecord {
                        var: var.clone(),
                        explicit: None,
                        polys: polys.iter().map(|p| p.to_string()).collect(),
                    },
                })
                .collect(),
            provenance: self.provenance,
            extension_failures: self.extension_failures.clone(),
        }
    }

    pub fn from_record(rec: &EliminationRecord) -> Result<Self, SolveError> {
        let vars = VarSet::new(rec.variables.iter().cloned())?;
        let chain = rec
            .chain
            .iter()
            .map(|c| -> Result<BackSubstitution, PolyError> {
                Ok(match &c.explicit {
                    Some(t) => BackSubstitution::Explicit {
                        var: c.var.clone(),
                        expr: MultiPoly::parse(t, &vars)?,
                    },
                    None => BackSubstitution::Triangular {
                        var: c.var.clone(),
                        polys: c
                            .polys
                            .iter()
                            .map(|t| MultiPoly::parse(t, &vars))
                            .collect::<Result<_, _>>()?,
                    },
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(EliminationResult {
            variable: rec.variable.clone(),
            eliminant: MultiPoly::parse(&rec.eliminant, &vars)?,
            chain,
            provenance: rec.provenance,
            extension_failures: rec.extension_failures.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub var: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub explicit: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub polys: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationRecord {
    pub variables: Vec<String>,
    pub variable: String,
    pub eliminant: String,
    pub chain: Vec<ChainRecord>,
    pub provenance: Provenance,
    pub extension_failures: Vec<String>,
}

/// Real algebraic number: a root of a square-free integer polynomial inside
/// an isolating interval. The polynomial is irreducible when its degree is
/// at most two.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    pub poly: UniPoly,
    pub interval: IsolatingInterval,
    pub approx: PrecReal,
}

#[derive(Clone, Debug)]
pub enum ParamValue {
    Exact(Rational),
    Algebraic(AlgebraicNumber),
    Numeric(PrecReal),
    /// Uncertified approximation on a complex branch.
    Complex(PrecComplex),
}

impl ParamValue {
    pub fn approx(&self, digits: u32) -> PrecComplex {
        match self {
            ParamValue::Exact(q) => PrecComplex::from_rational(q, digits),
            ParamValue::Algebraic(a) => PrecComplex::from_real(a.approx.with_digits(digits)),
            ParamValue::Numeric(x) => PrecComplex::from_real(x.with_digits(digits)),
            ParamValue::Complex(c) => c.with_digits(digits),
        }
    }

    pub fn real(&self) -> Option<PrecReal> {
        match self {
            ParamValue::Exact(q) => Some(PrecReal::from_rational(q, 64)),
            ParamValue::Algebraic(a) => Some(a.approx.clone()),
            ParamValue::Numeric(x) => Some(x.clone()),
            ParamValue::Complex(_) => None,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            ParamValue::Exact(q) => Some(q),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RealityClass {
    AllReal,
    Complex,
}

#[derive(Clone, Debug)]
pub struct ParameterTuple {
    pub names: Vec<String>,
    pub values: Vec<ParamValue>,
    /// Requested number of correct digits.
    pub digits: u32,
    /// `max_m |P_m(tuple)|`; `None` for unrefined complex branches.
    pub residual: Option<PrecReal>,
    pub exact_zero: bool,
    pub reality: RealityClass,
    pub is_bh: bool,
}

impl ParameterTuple {
    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.names.iter().position(|n| n == name).map(|i| &self.values[i])
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(|v| matches!(v, ParamValue::Exact(_)))
    }

    /// Real values at (at least) `digits` precision.
    pub fn real_map(&self, digits: u32) -> Option<HashMap<String, PrecReal>> {
        self.names
            .iter()
            .zip(&self.values)
            .map(|(n, v)| {
                let x = match v {
                    ParamValue::Exact(q) => PrecReal::from_rational(q, digits),
                    ParamValue::Complex(_) => return None,
                    other => other.real()?.with_digits(digits),
                };
                Some((n.clone(), x))
            })
            .collect()
    }

    pub fn exact_map(&self) -> Option<HashMap<String, Rational>> {
        self.names
            .iter()
            .zip(&self.values)
            .map(|(n, v)| v.exact().map(|q| (n.clone(), q.clone())))
            .collect()
    }

    pub fn certified(&self) -> bool {
        self.exact_zero
            || self
                .residual
                .as_ref()
                .is_some_and(|r| r <= &PrecReal::pow10(20 - self.digits as i32, 30))
    }

    pub fn from_exact(names: &[String], values: &[Rational]) -> Self {
        ParameterTuple {
            names: names.to_vec(),
            values: values.iter().cloned().map(ParamValue::Exact).collect(),
            digits: 20,
            residual: None,
            exact_zero: false,
            reality: RealityClass::AllReal,
            is_bh: false,
        }
    }

    pub fn from_reals(names: &[String], values: &[PrecReal], digits: u32) -> Self {
        ParameterTuple {
            names: names.to_vec(),
            values: values.iter().cloned().map(ParamValue::Numeric).collect(),
            digits,
            residual: None,
            exact_zero: false,
            reality: RealityClass::AllReal,
            is_bh: false,
        }
    }
}

/// Decimal text of a real that parses back bit-exactly at `digits`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealRecord {
    pub value: String,
    pub digits: u32,
}

impl RealRecord {
    pub fn from_real(x: &PrecReal) -> Self {
        RealRecord {
            value: x.to_roundtrip_string(),
            digits: x.digits(),
        }
    }

    pub fn to_real(&self) -> Result<PrecReal, SolveError> {
        PrecReal::parse(&self.value, self.digits).map_err(|e| SolveError::MissingValue(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ValueRecord {
    Exact { value: String },
    /// Root of `poly` (ascending rational coefficients) in `[lower, upper]`.
    Algebraic { poly: Vec<String>, lower: String, upper: String, approx: RealRecord },
    Numeric { value: RealRecord },
    Complex { re: RealRecord, im: RealRecord },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleRecord {
    pub names: Vec<String>,
    pub values: Vec<ValueRecord>,
    pub digits: u32,
    pub residual: Option<RealRecord>,
    pub exact_zero: bool,
    pub reality: RealityClass,
    pub is_bh: bool,
}

fn parse_rational(t: &str) -> Result<Rational, SolveError> {
    t.parse::<Rational>().map_err(|_| SolveError::MissingValue(format!("bad rational `{t}`")))
}

impl ParameterTuple {
    pub fn to_record(&self) -> TupleRecord {
        let values = self
            .values
            .iter()
            .map(|v| match v {
                ParamValue::Exact(q) => ValueRecord::Exact { value: q.to_string() },
                ParamValue::Algebraic(a) => ValueRecord::Algebraic {
                    poly: a.poly.coeffs().iter().map(|c| c.to_string()).collect(),
                    lower: a.interval.lower.to_string(),
                    upper: a.interval.upper.to_string(),
                    approx: RealRecord::from_real(&a.approx),
                },
                ParamValue::Numeric(x) => ValueRecord::Numeric { value: RealRecord::from_real(x) },
                ParamValue::Complex(c) => ValueRecord::Complex {
                    re: RealRecord::from_real(&c.re),
                    im: RealRecord::from_real(&c.im),
                },
            })
            .collect();
        TupleRecord {
            names: self.names.clone(),
            values,
            digits: self.digits,
            residual: self.residual.as_ref().map(RealRecord::from_real),
            exact_zero: self.exact_zero,
            reality: self.reality,
            is_bh: self.is_bh,
        }
    }

    pub fn from_record(rec: &TupleRecord) -> Result<Self, SolveError> {
        let values = rec
            .values
            .iter()
            .map(|v| -> Result<ParamValue, SolveError> {
                Ok(match v {
                    ValueRecord::Exact { value } => ParamValue::Exact(parse_rational(value)?),
                    ValueRecord::Algebraic { poly, lower, upper, approx } => {
                        let poly = UniPoly::new(poly.iter().map(|c| parse_rational(c)).collect::<Result<_, _>>()?);
                        let (lower, upper) = (parse_rational(lower)?, parse_rational(upper)?);
                        let interval = IsolatingInterval {
                            sign_lower: poly.sign_at(&lower),
                            sign_upper: poly.sign_at(&upper),
                            lower,
                            upper,
                            poly: Arc::new(poly.clone()),
                        };
                        ParamValue::Algebraic(AlgebraicNumber {
                            poly,
                            interval,
                            approx: approx.to_real()?,
                        })
                    }
                    ValueRecord::Numeric { value } => ParamValue::Numeric(value.to_real()?),
                    ValueRecord::Complex { re, im } => ParamValue::Complex(PrecComplex::new(re.to_real()?, im.to_real()?)),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(ParameterTuple {
            names: rec.names.clone(),
            values,
            digits: rec.digits,
            residual: rec.residual.as_ref().map(RealRecord::to_real).transpose()?,
            exact_zero: rec.exact_zero,
            reality: rec.reality,
            is_bh: rec.is_bh,
        })
    }
}

/// Residual certificate of a tuple against a system.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub residual: PrecReal,
    pub exact_zero: bool,
    pub pass: bool,
    pub working_digits: u32,
}

fn abs_scale(p: &MultiPoly, vals: &HashMap<String, PrecReal>) -> f64 {
    // sum of |c| |x|^e in double precision for precision planning
    let names = p.vars().names();
    p.terms()
        .iter()
        .map(|(e, c)| {
            let mut t = c.to_f64().abs();
            for (name, &k) in names.iter().zip(e) {
                if k > 0 {
                    t *= vals.get(name).map(|v| v.to_f64().abs()).unwrap_or(0.0).powi(k as i32);
                }
            }
            t
        })
        .sum()
}

/// Extra digits needed so that evaluating `system` at `vals` loses nothing
/// visible at `digits`.
fn guard_digits(system: &[MultiPoly], vals: &HashMap<String, PrecReal>) -> u32 {
    let scale = system.iter().map(|p| abs_scale(p, vals)).fold(1.0f64, f64::max);
    (scale.log10().max(0.0).ceil() as u32) + 10
}

/// Evaluates `max_m |P_m(tuple)|`; passes iff the residual is at most `10^(20 - digits)`.
pub fn certify(tuple: &ParameterTuple, system: &[MultiPoly], digits: u32) -> Result<Certificate, SolveError> {
    if let Some(exact) = tuple.exact_map() {
        let mut worst = Rational::new();
        for p in system {
            let v = Rational::from(p.eval_rational(&exact)?.abs_ref());
            if v > worst {
                worst = v;
            }
        }
        let zero = worst == 0;
        let residual = PrecReal::from_rational(&worst, digits);
        let pass = zero || residual <= PrecReal::pow10(20 - digits as i32, digits);
        return Ok(Certificate {
            residual,
            exact_zero: zero,
            pass,
            working_digits: digits,
        });
    }
    let probe = tuple.real_map(30);
    let wd = match &probe {
        Some(v) => digits + guard_digits(system, v),
        None => digits + 10,
    };
    let mut vals: HashMap<String, PrecComplex> = HashMap::new();
    for (n, v) in tuple.names.iter().zip(&tuple.values) {
        vals.insert(n.clone(), v.approx(wd));
    }
    let mut worst = PrecReal::zero(wd);
    for p in system {
        for name in p.support() {
            if !vals.contains_key(&name) {
                return Err(SolveError::MissingValue(name));
            }
        }
        let r = p.eval_prec(&vals, wd)?.abs();
        worst = worst.max(r);
    }
    let pass = tuple.reality == RealityClass::AllReal && worst <= PrecReal::pow10(20 - digits as i32, wd);
    Ok(Certificate {
        residual: worst,
        exact_zero: false,
        pass,
        working_digits: wd,
    })
}

/// Damped Newton iteration on a square real system, using the exact Jacobian.
pub fn newton_refine(
    system: &[MultiPoly],
    names: &[String],
    start: &[PrecReal],
    digits: u32,
) -> Result<Vec<PrecReal>, SolveError> {
    let n = names.len();
    if system.len() != n {
        return Err(SolveError::NotSquare {
            equations: system.len(),
            unknowns: n,
        });
    }
    let jac: Vec<Vec<MultiPoly>> = system
        .iter()
        .map(|p| names.iter().map(|v| p.derivative(v)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let to_map = |x: &[PrecReal]| -> HashMap<String, PrecComplex> {
        names
            .iter()
            .zip(x)
            .map(|(k, v)| (k.clone(), PrecComplex::from_real(v.clone())))
            .collect()
    };
    let eval_f = |x: &[PrecReal]| -> Result<Vec<PrecReal>, PolyError> {
        let m = to_map(x);
        system.iter().map(|p| Ok(p.eval_prec(&m, digits)?.re)).collect()
    };
    let norm = |v: &[PrecReal]| v.iter().map(PrecReal::abs).fold(PrecReal::zero(digits), PrecReal::max);
    let mut x: Vec<PrecReal> = start.iter().map(|v| v.with_digits(digits)).collect();
    let mut fx = eval_f(&x)?;
    let mut fnorm = norm(&fx);
    let tiny = PrecReal::pow10(-(digits as i32) + 6, digits);
    let mut stalls = 0;
    for _ in 0..80 {
        if fnorm.is_zero() {
            break;
        }
        let m = to_map(&x);
        let mut jm = CMatrix::zeros(n, digits);
        for i in 0..n {
            for j in 0..n {
                jm.set(i, j, jac[i][j].eval_prec(&m, digits)?);
            }
        }
        let Some(lu) = jm.lu() else { break };
        let rhs: Vec<PrecComplex> = fx.iter().map(|v| PrecComplex::from_real(v.clone())).collect();
        let step: Vec<PrecReal> = lu.solve(&rhs).into_iter().map(|c| c.re).collect();
        let mut t = PrecReal::one(digits);
        let mut accepted = false;
        for _ in 0..40 {
            let cand: Vec<PrecReal> = x.iter().zip(&step).map(|(a, s)| a - &(s * &t)).collect();
            let fc = eval_f(&cand)?;
            let nc = norm(&fc);
            if nc < fnorm || nc.is_zero() {
                x = cand;
                fx = fc;
                fnorm = nc;
                accepted = true;
                break;
            }
            t = &t / &PrecReal::from_i64(2, digits);
        }
        let scale = norm(&x).max(PrecReal::one(digits));
        let rel = &norm(&step) / &scale;
        if !accepted {
            stalls += 1;
            if stalls >= 2 {
                break;
            }
        }
        if rel <= tiny {
            break;
        }
    }
    Ok(x)
}

fn real_tolerance(digits: u32) -> PrecReal {
    PrecReal::pow10(-(digits as i32) / 2, digits)
}

/// Shortest rational among the continued-fraction convergents of `x`
/// whose denominator has at most `max_bits` bits and that satisfies `accept`.
fn convergents(x: &Rational, max_bits: u32) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let mut rest = x.clone();
    for _ in 0..200 {
        let a = rest.clone().floor().numer().clone();
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if k2.significant_bits() > max_bits {
            break;
        }
        out.push(Rational::from((h2.clone(), k2.clone())));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = Rational::from(&rest - Rational::from(a));
        if frac == 0 {
            break;
        }
        rest = frac.recip();
    }
    out
}

/// Exact factors of degree at most two found by recognizing rational
/// coefficient combinations of numerically computed roots; the last entry
/// is the remaining cofactor (possibly of degree 0).
pub fn split_small_factors(p: &UniPoly, digits: u32) -> Result<Vec<UniPoly>, SolveError> {
    let mut rest = p.square_free();
    let mut out = Vec::new();
    for r in real_roots(&rest, digits)? {
        if let Some(q) = r.exact {
            let lin = UniPoly::new(vec![Rational::from(-&q), Rational::from(1)]).primitive();
            let (quo, rem) = rest.div_rem(&lin);
            if rem.is_zero() {
                rest = quo.primitive();
                out.push(lin);
            }
        }
    }
    if rest.degree() >= 2 {
        let roots = complex_roots_rational(&rest, digits)?.roots;
        let bits = (digits as f64 * 3.32 / 3.0) as u32;
        let mut used = vec![false; roots.len()];
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if used[i] || used[j] || rest.degree() < 2 {
                    continue;
                }
                let sum = &roots[i] + &roots[j];
                let prod = &roots[i] * &roots[j];
                let tol = PrecReal::pow10(-(digits as i32) / 2, digits);
                if sum.im.abs() > tol.clone() * sum.abs().max(PrecReal::one(digits))
                    || prod.im.abs() > tol * prod.abs().max(PrecReal::one(digits))
                {
                    continue;
                }
                let lc = rest.leading().clone();
                let b = Rational::from(&lc * sum.re.to_rational());
                let c = Rational::from(&lc * prod.re.to_rational());
                // a x^2 - (a s) x + (a p) with a = lc, coefficients must be small rationals
                let bcands = convergents(&b, bits);
                let ccands = convergents(&c, bits);
                let (Some(bq), Some(cq)) = (bcands.last(), ccands.last()) else {
                    continue;
                };
                let quad = UniPoly::new(vec![cq.clone(), Rational::from(-bq), lc.clone()]).primitive();
                let (quo, rem) = rest.div_rem(&quad);
                if rem.is_zero() {
                    rest = quo.primitive();
                    out.push(quad);
                    used[i] = true;
                    used[j] = true;
                }
            }
        }
    }
    out.push(rest);
    Ok(out)
}

/// Algebraic number defined by `poly` closest to the approximation `x`.
pub fn algebraic_near(poly: &UniPoly, x: &PrecReal, digits: u32) -> Result<Option<AlgebraicNumber>, SolveError> {
    let sf = poly.square_free();
    let xr = x.to_rational();
    let mut best: Option<(Rational, IsolatingInterval)> = None;
    for iv in isolate(&sf)? {
        let fine = refine_interval(&iv, digits)?;
        let d = Rational::from(&fine.midpoint() - &xr).abs();
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, fine));
        }
    }
    let tol = PrecReal::pow10(-(digits as i32) / 2, digits).to_rational()
        * Rational::from(xr.abs_ref()).max(Rational::from(1));
    Ok(best.and_then(|(d, iv)| {
        (d <= tol).then(|| AlgebraicNumber {
            approx: PrecReal::from_rational(&iv.midpoint(), digits),
            poly: sf.clone(),
            interval: iv,
        })
    }))
}

/// Eliminant and back-substitution chain from a lex Gröbner basis of `system`
/// under `order` (first variable largest, eliminant in the last).
pub fn eliminate_groebner(
    system: &[MultiPoly],
    order: &Arc<VarSet>,
    budget: &GroebnerBudget,
) -> Result<EliminationResult, SolveError> {
    let basis = groebner_lex_with_budget(system, order, budget)?;
    let last = order.names().last().cloned().unwrap_or_default();
    if let Some((elim, chain)) = shape_form(&basis) {
        return Ok(EliminationResult {
            variable: last,
            eliminant: elim.primitive(),
            chain: chain
                .into_iter()
                .map(|(var, expr)| BackSubstitution::Explicit { var, expr })
                .collect(),
            provenance: Provenance::Groebner,
            extension_failures: Vec::new(),
        });
    }
    let elim = basis
        .iter()
        .find(|p| !p.is_constant() && p.support().iter().all(|v| *v == last))
        .ok_or_else(|| SolveError::NoEliminant(last.clone()))?;
    let uni = UniPoly::from_multipoly(elim, &last)?.square_free();
    let chain = triangular_levels(&basis, order);
    Ok(EliminationResult {
        variable: last.clone(),
        eliminant: uni.to_multipoly(order, &last)?,
        chain,
        provenance: Provenance::Groebner,
        extension_failures: Vec::new(),
    })
}

/// Groups polynomials by their largest variable, skipping the last variable.
fn triangular_levels(polys: &[MultiPoly], order: &Arc<VarSet>) -> Vec<BackSubstitution> {
    let names = order.names();
    let mut out = Vec::new();
    for k in (0..names.len() - 1).rev() {
        let level: Vec<MultiPoly> = polys
            .iter()
            .filter(|p| {
                let s = p.support();
                s.contains(&names[k]) && names[..k].iter().all(|v| !s.contains(v))
            })
            .cloned()
            .collect();
        out.push(BackSubstitution::Triangular {
            var: names[k].clone(),
            polys: level,
        });
    }
    out
}

/// Iterated pairwise resultants eliminating every variable except `keep`.
pub fn eliminate_by_resultants(system: &[MultiPoly], keep: &str) -> Result<EliminationResult, SolveError> {
    let Some(first) = system.first() else {
        return Err(SolveError::NotSquare {
            equations: 0,
            unknowns: 0,
        });
    };
    let vars = Arc::clone(first.vars());
    if system.len() != vars.len() {
        return Err(SolveError::NotSquare {
            equations: system.len(),
            unknowns: vars.len(),
        });
    }
    if vars.index_of(keep).is_none() {
        return Err(PolyError::UnknownVariable(keep.to_string()).into());
    }
    let order: Vec<String> = vars.names().iter().filter(|v| *v != keep).cloned().collect();
    let mut current: Vec<MultiPoly> = system.iter().map(MultiPoly::primitive).collect();
    let mut levels: Vec<BackSubstitution> = Vec::new();
    for var in &order {
        let (with, without): (Vec<_>, Vec<_>) = current.into_iter().partition(|p| p.degree_in(var).unwrap_or(0) > 0);
        levels.push(BackSubstitution::Triangular {
            var: var.clone(),
            polys: with.clone(),
        });
        let mut next = without;
        if with.is_empty() {
            current = next;
            continue;
        }
        // pivot: lowest degree in `var`, then fewest terms
        let pivot_idx = (0..with.len())
            .min_by_key(|&i| (with[i].degree_in(var).unwrap(), with[i].num_terms()))
            .unwrap();
        let pivot = &with[pivot_idx];
        for (i, other) in with.iter().enumerate() {
            if i == pivot_idx {
                continue;
            }
            let r = resultant(pivot, other, var)?;
            if r.is_zero() {
                return Err(SolveError::Degenerate(pivot.to_string(), other.to_string()));
            }
            if !r.is_constant() {
                next.push(r.primitive());
            }
        }
        current = next;
    }
    // the remaining polynomials are univariate in `keep`; take their gcd
    let mut elim: Option<UniPoly> = None;
    for p in &current {
        let u = UniPoly::from_multipoly(p, keep)?;
        elim = Some(match elim {
            None => u,
            Some(e) => {
                let g = e.gcd(&u);
                if g.degree() == 0 {
                    e
                } else {
                    g
                }
            }
        });
    }
    let elim = elim.ok_or_else(|| SolveError::NoEliminant(keep.to_string()))?.square_free();
    levels.reverse();
    Ok(EliminationResult {
        variable: keep.to_string(),
        eliminant: elim.to_multipoly(&vars, keep)?,
        chain: levels,
        provenance: Provenance::ResultantChain,
        extension_failures: Vec::new(),
    })
}

/// Numeric values of every chain variable extending one eliminant root.
fn extend_root(
    elim: &EliminationResult,
    y: &PrecComplex,
    digits: u32,
) -> Result<Vec<HashMap<String, PrecComplex>>, SolveError> {
    let mut partial = vec![HashMap::from([(elim.variable.clone(), y.clone())])];
    for step in &elim.chain {
        let mut next = Vec::new();
        for vals in &partial {
            match step {
                BackSubstitution::Explicit { var, expr } => {
                    let mut v = vals.clone();
                    v.insert(var.clone(), expr.eval_prec(vals, digits)?);
                    next.push(v);
                }
                BackSubstitution::Triangular { var, polys } => {
                    for root in common_roots(polys, var, vals, digits)? {
                        let mut v = vals.clone();
                        v.insert(var.clone(), root);
                        next.push(v);
                    }
                }
            }
        }
        partial = next;
    }
    Ok(partial)
}

/// Roots in `var` shared by all `polys` after substituting `vals`.
fn common_roots(
    polys: &[MultiPoly],
    var: &str,
    vals: &HashMap<String, PrecComplex>,
    digits: u32,
) -> Result<Vec<PrecComplex>, SolveError> {
    let mut univariate: Vec<Vec<PrecComplex>> = Vec::new();
    for p in polys {
        let coeffs = p.coefficients_in(var)?;
        let c: Vec<PrecComplex> = coeffs
            .iter()
            .map(|q| q.eval_prec(vals, digits))
            .collect::<Result<_, _>>()?;
        univariate.push(c);
    }
    let tol = PrecReal::pow10(-(digits as i32) / 3, digits);
    let magnitude = |c: &[PrecComplex]| c.iter().map(PrecComplex::abs).fold(PrecReal::zero(digits), PrecReal::max);
    // drop polynomials whose coefficients all vanish numerically
    let live: Vec<Vec<PrecComplex>> = univariate
        .into_iter()
        .filter(|c| {
            let m = magnitude(c);
            c.len() > 1 && c[1..].iter().any(|x| x.abs() > &tol * &m)
        })
        .collect();
    let Some(pivot) = live
        .iter()
        .min_by_key(|c| {
            let m = magnitude(c);
            c.iter().rposition(|x| x.abs() > &tol * &m).unwrap_or(0)
        })
        .cloned()
    else {
        return Ok(Vec::new());
    };
    let m = magnitude(&pivot);
    let mut trimmed = pivot.clone();
    while trimmed.len() > 1 && trimmed.last().unwrap().abs() <= &tol * &m {
        trimmed.pop();
    }
    let roots = complex_roots(&trimmed, digits)?.roots;
    let horner = |c: &[PrecComplex], x: &PrecComplex| -> (PrecReal, PrecReal) {
        let mut acc = PrecComplex::zero(digits);
        let mut scale = PrecReal::zero(digits);
        let ax = x.abs();
        for a in c.iter().rev() {
            acc = &(&acc * x) + a;
            scale = &(&scale * &ax) + &a.abs();
        }
        (acc.abs(), scale)
    };
    Ok(roots
        .into_iter()
        .filter(|x| {
            live.iter().all(|c| {
                let (v, s) = horner(c, x);
                v <= &tol * &s.max(PrecReal::one(digits))
            })
        })
        .collect())
}

/// Per-variable precision sufficient to evaluate the chain without loss.
fn chain_digits(elim: &EliminationResult, y_abs: f64, digits: u32) -> u32 {
    let deg = elim.degree() as f64;
    let bits = elim
        .chain
        .iter()
        .map(|b| match b {
            BackSubstitution::Explicit { expr, .. } => expr.max_coeff_bits(),
            BackSubstitution::Triangular { polys, .. } => polys.iter().map(MultiPoly::max_coeff_bits).max().unwrap_or(0),
        })
        .max()
        .unwrap_or(0)
        .max(elim.eliminant.max_coeff_bits());
    digits + 30 + (bits as f64 * 0.30103) as u32 + (deg * y_abs.max(1.0).log10()) as u32
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub dimension: usize,
    pub names: Vec<String>,
    pub system: Vec<MultiPoly>,
    pub elimination: EliminationResult,
    pub tuples: Vec<ParameterTuple>,
    /// Non-BH eliminant degree (the eliminant degree with the BH linear factor removed).
    pub non_bh_degree: usize,
    pub diagnostics: Vec<String>,
}

/// Full pipeline for dimension `n`: derive, eliminate, isolate, extend, refine, certify.
pub fn solve_epn(n: usize, digits: u32, method: SolveMethod) -> Result<SolveReport, SolveError> {
    solve_epn_with_budget(n, digits, method, &GroebnerBudget::default())
}

pub fn solve_epn_with_budget(
    n: usize,
    digits: u32,
    method: SolveMethod,
    budget: &GroebnerBudget,
) -> Result<SolveReport, SolveError> {
    if digits < 20 {
        return Err(SolveError::PrecisionTooLow(digits));
    }
    let model = ModelSpec::new(n)?;
    let sys = derive_secular(&model)?;
    let system = constraints_at(&sys, &Rational::from(1))?;
    let order = model.param_vars();
    let names = model.param_names();
    let mut diagnostics = Vec::new();
    let elimination = match method {
        SolveMethod::Groebner => eliminate_groebner(&system, &order, budget)?,
        SolveMethod::Resultant => eliminate_by_resultants(&system, names.last().unwrap())?,
        SolveMethod::Auto => match eliminate_groebner(&system, &order, budget) {
            Ok(e) => e,
            Err(SolveError::Groebner(GroebnerError::BudgetExceeded { reason, .. })) => {
                diagnostics.push(format!("Gröbner budget exceeded ({reason}); using resultant chain"));
                eliminate_by_resultants(&system, names.last().unwrap())
                    .map_err(|e| SolveError::BudgetExceeded(e.to_string()))?
            }
            Err(e) => return Err(e),
        },
    };
    let bh: Vec<Rational> = bh_tuple(n)?.into_iter().map(|(_, v)| v).collect();
    let (tuples, mut diag) = tuples_from_elimination(&system, &names, &elimination, &bh, digits)?;
    diagnostics.append(&mut diag);
    let non_bh_degree = elimination
        .split_root(bh.last().unwrap())
        .map(|(_, q)| q.degree())
        .unwrap_or(elimination.degree());
    Ok(SolveReport {
        dimension: n,
        names,
        system,
        elimination,
        tuples,
        non_bh_degree,
        diagnostics,
    })
}

/// Builds certified real tuples (and flagged complex branches) from an elimination.
pub fn tuples_from_elimination(
    system: &[MultiPoly],
    names: &[String],
    elim: &EliminationResult,
    bh: &[Rational],
    digits: u32,
) -> Result<(Vec<ParameterTuple>, Vec<String>), SolveError> {
    let mut diagnostics = Vec::new();
    let uni = elim.eliminant_uni();
    let factors = split_small_factors(&uni, digits + 20)?;
    let wd_base = digits + 20;
    let roots = real_roots(&uni, wd_base)?;
    let explicit = elim.chain.iter().all(|b| matches!(b, BackSubstitution::Explicit { .. }));

    let real_results: Vec<Result<Vec<ParameterTuple>, SolveError>> = roots
        .par_iter()
        .map(|root| -> Result<Vec<ParameterTuple>, SolveError> {
            let y_abs = root.value.to_f64().abs();
            let cd = chain_digits(elim, y_abs, digits);
            if let (Some(q), true) = (&root.exact, explicit) {
                let mut vals: HashMap<String, Rational> = HashMap::from([(elim.variable.clone(), q.clone())]);
                for b in &elim.chain {
                    if let BackSubstitution::Explicit { var, expr } = b {
                        let v = expr.eval_rational(&vals)?;
                        vals.insert(var.clone(), v);
                    }
                }
                let values: Vec<Rational> = names.iter().map(|n| vals[n].clone()).collect();
                let mut t = ParameterTuple::from_exact(names, &values);
                t.digits = digits;
                t.is_bh = values == bh;
                let cert = certify(&t, system, digits)?;
                t.residual = Some(cert.residual);
                t.exact_zero = cert.exact_zero;
                return Ok(vec![t]);
            }
            let fine = refine_interval(&root.interval, cd)?;
            let y = PrecReal::from_rational(&fine.midpoint(), cd);
            let exts = extend_root(elim, &PrecComplex::from_real(y.clone()), cd)?;
            let mut out = Vec::new();
            for ext in exts {
                if ext.values().any(|v| v.im.abs() > real_tolerance(cd).max(PrecReal::zero(cd)) * v.abs().max(PrecReal::one(cd))) {
                    continue;
                }
                let start: Vec<PrecReal> = names.iter().map(|n| ext[n].re.clone()).collect();
                let probe: HashMap<String, PrecReal> = names.iter().cloned().zip(start.iter().cloned()).collect();
                let wd = digits + guard_digits(system, &probe) + 10;
                let refined = newton_refine(system, names, &start, wd)?;
                let y_index = names.iter().position(|n| *n == elim.variable).unwrap();
                let mut values: Vec<ParamValue> = refined.iter().cloned().map(ParamValue::Numeric).collect();
                // exact handles where a small factor owns this root
                if let Some(f) = factors.iter().find(|f| f.degree() <= 2 && f.degree() >= 1 && f.sign_at(&fine.lower) * f.sign_at(&fine.upper) < 0) {
                    if let Some(a) = algebraic_near(f, &refined[y_index], wd)? {
                        values[y_index] = ParamValue::Algebraic(a);
                    }
                    for (i, n) in names.iter().enumerate() {
                        if i == y_index {
                            continue;
                        }
                        if let Some(BackSubstitution::Explicit { expr, .. }) =
                            elim.chain.iter().find(|b| b.var() == n)
                        {
                            let (exact, alg) = coordinate_over_factor(expr, &elim.variable, f, &refined[i], wd)?;
                            if let Some(q) = exact {
                                values[i] = ParamValue::Exact(q);
                            } else if let Some(a) = alg {
                                values[i] = ParamValue::Algebraic(a);
                            }
                        }
                    }
                }
                for v in values.iter_mut() {
                    if let ParamValue::Algebraic(a) = v {
                        if a.poly.degree() == 1 {
                            let c = a.poly.coeffs();
                            *v = ParamValue::Exact(-Rational::from(&c[0] / &c[1]));
                        }
                    }
                }
                let mut t = ParameterTuple {
                    names: names.to_vec(),
                    values,
                    digits,
                    residual: None,
                    exact_zero: false,
                    reality: RealityClass::AllReal,
                    is_bh: false,
                };
                if let Some(exact) = recognize_exact(&t, system)? {
                    t = exact;
                } else {
                    let cert = certify(&t, system, digits)?;
                    t.residual = Some(cert.residual.clone());
                    if !cert.pass {
                        continue;
                    }
                }
                t.is_bh = t.exact_map().is_some_and(|m| names.iter().map(|n| &m[n]).eq(bh.iter()));
                out.push(t);
            }
            Ok(out)
        })
        .collect();

    let mut tuples: Vec<ParameterTuple> = Vec::new();
    for (root, res) in roots.iter().zip(real_results) {
        let found = res?;
        if found.is_empty() {
            diagnostics.push(format!(
                "eliminant root {} = {} has no certified real extension",
                elim.variable,
                root.value.to_string_sig(20)
            ));
        }
        for t in found {
            if !tuples.iter().any(|u| same_tuple(u, &t)) {
                tuples.push(t);
            }
        }
    }

    // complex branches: listed, never refined
    if explicit {
        let all = complex_roots_rational(&uni, digits + 10)?;
        if !all.converged {
            diagnostics.push("complex root iteration did not fully converge".into());
        }
        let tol = PrecReal::pow10(-(digits as i32) / 2, digits + 10);
        for y in all.roots.iter().filter(|y| y.im.abs() > &tol * &y.abs().max(PrecReal::one(digits + 10))) {
            if y.im.is_negative() {
                continue;
            }
            let cd = chain_digits(elim, y.abs().to_f64(), digits);
            let yv = y.with_digits(cd);
            for ext in extend_root(elim, &yv, cd)? {
                for conj in [false, true] {
                    tuples.push(ParameterTuple {
                        names: names.to_vec(),
                        values: names
                            .iter()
                            .map(|n| {
                                let v = ext[n].with_digits(digits);
                                ParamValue::Complex(if conj { v.conj() } else { v })
                            })
                            .collect(),
                        digits,
                        residual: None,
                        exact_zero: false,
                        reality: RealityClass::Complex,
                        is_bh: false,
                    });
                }
            }
        }
    } else {
        diagnostics.push("complex branches are not extended on a triangular chain".into());
    }
    sort_tuples(&mut tuples);
    Ok((tuples, diagnostics))
}

/// Replaces a numeric tuple by nearby small rationals when they solve the system exactly.
fn recognize_exact(t: &ParameterTuple, system: &[MultiPoly]) -> Result<Option<ParameterTuple>, SolveError> {
    if t.is_exact() {
        let cert = certify(t, system, t.digits)?;
        let mut u = t.clone();
        u.residual = Some(cert.residual);
        u.exact_zero = cert.exact_zero;
        return Ok(cert.exact_zero.then_some(u));
    }
    let mut values = Vec::with_capacity(t.values.len());
    for v in &t.values {
        let q = match v {
            ParamValue::Exact(q) => q.clone(),
            other => {
                let Some(x) = other.real() else { return Ok(None) };
                let xr = x.to_rational();
                let Some(q) = convergents(&xr, 64).into_iter().find(|q| {
                    let d = Rational::from(q - &xr).abs();
                    d * 1_000_000_000_000_000_000u128 <= Rational::from(xr.abs_ref()).max(Rational::from(1))
                }) else {
                    return Ok(None);
                };
                q
            }
        };
        values.push(q);
    }
    let mut u = ParameterTuple::from_exact(&t.names, &values);
    u.digits = t.digits;
    let cert = certify(&u, system, t.digits)?;
    if !cert.exact_zero {
        return Ok(None);
    }
    u.residual = Some(cert.residual);
    u.exact_zero = true;
    Ok(Some(u))
}

fn coordinate_over_factor(
    expr: &MultiPoly,
    var: &str,
    factor: &UniPoly,
    approx: &PrecReal,
    digits: u32,
) -> Result<(Option<Rational>, Option<AlgebraicNumber>), SolveError> {
    let g = UniPoly::from_multipoly(expr, var)?;
    let (_, r) = g.div_rem(factor);
    if r.degree() == 0 {
        return Ok((Some(r.coeffs()[0].clone()), None));
    }
    // defining polynomial of r(y) over the factor: res_y(f(y), x - r(y))
    let vs = VarSet::new(["x", "y"])?;
    let f = factor.to_multipoly(&vs, "y")?;
    let ry = r.to_multipoly(&vs, "y")?;
    let x = MultiPoly::var(&vs, "x")?;
    let res = resultant(&f, &(&x - &ry), "y")?;
    let px = UniPoly::from_multipoly(&res.with_vars(&VarSet::new(["x"])?)?, "x")?;
    Ok((None, algebraic_near(&px, approx, digits)?))
}

fn same_tuple(a: &ParameterTuple, b: &ParameterTuple) -> bool {
    if a.reality != b.reality {
        return false;
    }
    a.values.iter().zip(&b.values).all(|(x, y)| {
        let d = 30;
        let (x, y) = (x.approx(d), y.approx(d));
        let diff = (&x - &y).abs().to_f64();
        diff <= 1e-15 * x.abs().to_f64().max(1.0)
    })
}

/// BH first, then real tuples by innermost parameter ascending, then complex branches.
pub fn sort_tuples(tuples: &mut [ParameterTuple]) {
    tuples.sort_by(|a, b| {
        let rank = |t: &ParameterTuple| match (t.is_bh, t.reality) {
            (true, _) => 0,
            (false, RealityClass::AllReal) => 1,
            (false, RealityClass::Complex) => 2,
        };
        rank(a).cmp(&rank(b)).then_with(|| {
            let x = a.values[0].approx(30);
            let y = b.values[0].approx(30);
            x.re.partial_cmp(&y.re)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal))
        })
    });
}

/// Builds a tuple by inserting a value for the eliminated variable and
/// back-substituting through an explicit chain, then Newton-refining.
pub fn tuple_from_value(
    system: &[MultiPoly],
    names: &[String],
    elim: &EliminationResult,
    value: &PrecReal,
    digits: u32,
) -> Result<ParameterTuple, SolveError> {
    let cd = chain_digits(elim, value.to_f64().abs(), digits);
    // snap to the nearest eliminant root so that back-substitution is accurate
    let uni = elim.eliminant_uni();
    let target = value.to_rational();
    let mut y = value.with_digits(cd);
    for iv in isolate(&uni)? {
        if iv.lower <= target && target <= iv.upper {
            let fine = refine_interval(&iv, cd)?;
            y = PrecReal::from_rational(&fine.midpoint(), cd);
            break;
        }
        let fine = refine_interval(&iv, 30)?;
        let mid = fine.midpoint();
        let close = Rational::from(&mid - &target).abs() <= Rational::from(target.abs_ref()).max(Rational::from(1)) / 1_000_000_000u64;
        if close {
            let fine = refine_interval(&iv, cd)?;
            y = PrecReal::from_rational(&fine.midpoint(), cd);
            break;
        }
    }
    let ext = extend_root(elim, &PrecComplex::from_real(y), cd)?
        .into_iter()
        .next()
        .ok_or_else(|| SolveError::NoEliminant(elim.variable.clone()))?;
    let start: Vec<PrecReal> = names.iter().map(|n| ext[n].re.clone()).collect();
    let probe: HashMap<String, PrecReal> = names.iter().cloned().zip(start.iter().cloned()).collect();
    let wd = digits + guard_digits(system, &probe) + 10;
    let refined = newton_refine(system, names, &start, wd)?;
    let mut t = ParameterTuple::from_reals(names, &refined, digits);
    let cert = certify(&t, system, digits)?;
    t.residual = Some(cert.residual);
    Ok(t)
}

/// Refines a numeric seed (e.g. printed digits) to a certified tuple.
pub fn refine_seed(system: &[MultiPoly], names: &[String], seed: &[PrecReal], digits: u32) -> Result<ParameterTuple, SolveError> {
    let probe: HashMap<String, PrecReal> = names.iter().cloned().zip(seed.iter().cloned()).collect();
    let wd = digits + guard_digits(system, &probe) + 10;
    let mut x: Vec<PrecReal> = seed.to_vec();
    // refine in stages so that the Newton basin is entered at low cost
    for d in [30, wd] {
        x = newton_refine(system, names, &x, d)?;
    }
    let mut t = ParameterTuple::from_reals(names, &x, digits);
    let cert = certify(&t, system, digits)?;
    t.residual = Some(cert.residual);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(names: &[&str]) -> Arc<VarSet> {
        VarSet::new(names.iter().copied()).unwrap()
    }

    fn p(t: &str, v: &Arc<VarSet>) -> MultiPoly {
        MultiPoly::parse(t, v).unwrap()
    }

    #[test]
    fn resultant_chain_examples() {
        let v = vs(&["r", "C"]);
        let e = eliminate_by_resultants(&[p("r^2+118*r+81", &v), p("C-6*r", &v)], "C").unwrap();
        assert_eq!(e.eliminant, p("C^2+708*C+2916", &v));
        let roots = real_roots(&e.eliminant_uni(), 20).unwrap();
        assert!((roots[0].value.to_f64() + 703.857).abs() < 1e-3);
        assert!((roots[1].value.to_f64() + 4.1429).abs() < 1e-4);
        let w = vs(&["x", "y"]);
        let e = eliminate_by_resultants(&[p("x^2-2", &w), p("y-x", &w)], "y").unwrap();
        assert_eq!(e.eliminant, p("y^2-2", &w));
        assert!(matches!(
            eliminate_by_resultants(&[p("x-y", &w)], "y"),
            Err(SolveError::NotSquare { .. })
        ));
    }

    #[test]
    fn degenerate_pair_is_reported() {
        let w = vs(&["x", "y"]);
        let r = eliminate_by_resultants(&[p("x*y-1", &w), p("2*x*y-2", &w)], "y");
        assert!(matches!(r, Err(SolveError::Degenerate(..))));
    }

    #[test]
    fn small_factor_split() {
        // (C - 6)(C^2 - 54C - 972)(C^2 + 708C + 2916)
        let v = vs(&["C"]);
        let f = p("(C-6)*(C^2-54*C-972)*(C^2+708*C+2916)", &v);
        let u = UniPoly::from_multipoly(&f, "C").unwrap();
        let parts = split_small_factors(&u, 40).unwrap();
        let degs: Vec<usize> = parts.iter().map(UniPoly::degree).collect();
        assert_eq!(degs, vec![1, 2, 2, 0]);
    }

    #[test]
    fn certify_examples() {
        let m = ModelSpec::new(6).unwrap();
        let sys = constraints_at(&derive_secular(&m).unwrap(), &Rational::from(1)).unwrap();
        let names = m.param_names();
        let bh = ParameterTuple::from_exact(&names, &[9.into(), 8.into(), 5.into()]);
        let c = certify(&bh, &sys, 40).unwrap();
        assert!(c.exact_zero && c.pass);
        let random = ParameterTuple::from_exact(&names, &[3.into(), 1.into(), 4.into()]);
        let c = certify(&random, &sys, 40).unwrap();
        assert!(!c.pass && c.residual.to_f64() >= 1.0);
    }

    #[test]
    fn seed_refinement_certifies() {
        let m = ModelSpec::new(6).unwrap();
        let sys = constraints_at(&derive_secular(&m).unwrap(), &Rational::from(1)).unwrap();
        let seed: Vec<PrecReal> = ["673.7717872", "-253.5822865", "-65.80360706"]
            .iter()
            .map(|t| PrecReal::parse(t, 40).unwrap())
            .collect();
        let t = refine_seed(&sys, &m.param_names(), &seed, 40).unwrap();
        assert!(t.residual.as_ref().unwrap() <= &PrecReal::pow10(-20, 40));
        assert!(t.certified());
    }

    #[test]
    fn tuple_records_roundtrip() {
        let r = solve_epn(7, 30, SolveMethod::Groebner).unwrap();
        for t in &r.tuples {
            let rec = t.to_record();
            let back = ParameterTuple::from_record(&rec).unwrap();
            assert_eq!(back.to_record(), rec);
        }
        assert!(r.tuples.iter().any(|t| t.to_record().values.iter().any(|v| matches!(v, ValueRecord::Algebraic { .. }))));
    }

    #[test]
    fn four_and_five_are_exact() {
        for (n, want) in [(4, vec![(4, 3), (64, -27)]), (5, vec![(6, 4), (-54, 64)])] {
            let r = solve_epn(n, 30, SolveMethod::Groebner).unwrap();
            let got: Vec<(i64, i64)> = r
                .tuples
                .iter()
                .map(|t| {
                    let m = t.exact_map().unwrap();
                    (m["A"].to_f64() as i64, m["B"].to_f64() as i64)
                })
                .collect();
            assert!(want.iter().all(|w| got.contains(w)), "N={n}: {got:?}");
            assert!(r.tuples[0].is_bh);
        }
    }
}
