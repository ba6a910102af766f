//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept sorted by the lexicographic order induced by the variable
//! list: the first variable is the most significant. Reordering the
//! [`VarSet`] is how elimination orders are chosen.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rug::ops::Pow;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{Integer, PrecComplex, PrecReal, Rational};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable sets differ: [{0}] vs [{1}]")]
    VarSetMismatch(String, String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("degree of `{var}` is {degree}, at least {required} required")]
    DegreeTooLow {
        var: String,
        degree: u32,
        required: u32,
    },
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("division is not exact")]
    NotExact,
    #[error("no value assigned to `{0}`")]
    MissingAssignment(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Ordered, duplicate-free list of variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<I, S>(names: I) -> Result<Arc<VarSet>, PolyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        Ok(Arc::new(VarSet { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn require(&self, name: &str) -> Result<usize, PolyError> {
        self.index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names.join(","))
    }
}

pub type Exponents = Vec<u32>;

/// Value substituted for a variable.
#[derive(Clone, Debug)]
pub enum SubstValue {
    Rational(Rational),
    Poly(MultiPoly),
}

impl From<Rational> for SubstValue {
    fn from(q: Rational) -> Self {
        SubstValue::Rational(q)
    }
}

impl From<i64> for SubstValue {
    fn from(q: i64) -> Self {
        SubstValue::Rational(Rational::from(q))
    }
}

impl From<MultiPoly> for SubstValue {
    fn from(p: MultiPoly) -> Self {
        SubstValue::Poly(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Sparse polynomial with exact rational coefficients.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Arc<VarSet>,
    // strictly decreasing in lex order, no zero coefficients
    terms: Vec<(Exponents, Rational)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        MultiPoly {
            vars: Arc::clone(vars),
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: &Arc<VarSet>, c: Rational) -> Self {
        let mut p = MultiPoly::zero(vars);
        if c != 0 {
            p.terms.push((vec![0; vars.len()], c));
        }
        p
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        MultiPoly::constant(vars, Rational::from(1))
    }

    pub fn var(vars: &Arc<VarSet>, name: &str) -> Result<Self, PolyError> {
        let idx = vars.require(name)?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Ok(MultiPoly {
            vars: Arc::clone(vars),
            terms: vec![(e, Rational::from(1))],
        })
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I>(vars: &Arc<VarSet>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut acc: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            *acc.entry(e).or_default() += c;
        }
        MultiPoly::from_map(vars, acc)
    }

    fn from_map(vars: &Arc<VarSet>, acc: BTreeMap<Exponents, Rational>) -> Self {
        let terms = acc.into_iter().rev().filter(|(_, c)| *c != 0).collect();
        MultiPoly {
            vars: Arc::clone(vars),
            terms,
        }
    }

    /// Univariate polynomial `sum coeffs[k] * var^k`.
    pub fn univariate(vars: &Arc<VarSet>, var: &str, coeffs: &[Rational]) -> Result<Self, PolyError> {
        let idx = vars.require(var)?;
        Ok(MultiPoly::from_terms(
            vars,
            coeffs.iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; vars.len()];
                e[idx] = k as u32;
                (e, c.clone())
            }),
        ))
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn terms(&self) -> &[(Exponents, Rational)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    /// Constant term (coefficient of the empty monomial).
    pub fn constant_term(&self) -> Rational {
        match self.terms.last() {
            Some((e, c)) if e.iter().all(|&x| x == 0) => c.clone(),
            _ => Rational::new(),
        }
    }

    pub fn leading_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn leading_coeff(&self) -> Rational {
        self.terms.first().map(|(_, c)| c.clone()).unwrap_or_default()
    }

    pub fn degree_in(&self, var: &str) -> Result<u32, PolyError> {
        Ok(self.degree_at(self.vars.require(var)?))
    }

    pub(crate) fn degree_at(&self, idx: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[idx]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Names of the variables that actually occur.
    pub fn support(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.degree_at(i) > 0)
            .map(|i| self.vars.names[i].clone())
            .collect()
    }

    fn check_same(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VarSetMismatch(
                self.vars.to_string(),
                other.vars.to_string(),
            ))
        }
    }

    /// Ring arithmetic with a structural check on the variable sets.
    pub fn arith(&self, other: &MultiPoly, op: ArithOp) -> Result<MultiPoly, PolyError> {
        self.check_same(other)?;
        Ok(match op {
            ArithOp::Add => self.add_impl(other, false),
            ArithOp::Sub => self.add_impl(other, true),
            ArithOp::Mul => self.mul_impl(other),
        })
    }

    fn add_impl(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let one = Rational::from(1);
        let b = if negate { Rational::from(-1) } else { one.clone() };
        let zero_exp = vec![0; self.vars.len()];
        self.sub_mul_scaled_impl(&one, &(-b), &zero_exp, other)
    }

    /// `a * self - b * x^mono * g` computed in a single merge pass.
    pub(crate) fn sub_mul_scaled_impl(
        &self,
        a: &Rational,
        b: &Rational,
        mono: &[u32],
        g: &MultiPoly,
    ) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |k: usize| -> Exponents {
            g.terms[k].0.iter().zip(mono).map(|(x, y)| x + y).collect()
        };
        let a_is_one = *a == 1;
        let mut gj = if g.terms.is_empty() { None } else { Some(shifted(0)) };
        while i < self.terms.len() || gj.is_some() {
            let ord = match (&self.terms.get(i), &gj) {
                (Some((e, _)), Some(ge)) => e.cmp(ge),
                (Some(_), None) => std::cmp::Ordering::Greater,
                (None, Some(_)) => std::cmp::Ordering::Less,
                (None, None) => unreachable!(),
            };
            match ord {
                std::cmp::Ordering::Greater => {
                    let (e, c) = &self.terms[i];
                    let c = if a_is_one { c.clone() } else { Rational::from(c * a) };
                    out.push((e.clone(), c));
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = -Rational::from(b * &g.terms[j].1);
                    out.push((gj.take().unwrap(), c));
                    j += 1;
                    gj = if j < g.terms.len() { Some(shifted(j)) } else { None };
                }
                std::cmp::Ordering::Equal => {
                    let (e, c) = &self.terms[i];
                    let mut c = if a_is_one { c.clone() } else { Rational::from(c * a) };
                    c -= Rational::from(b * &g.terms[j].1);
                    if c != 0 {
                        out.push((e.clone(), c));
                    }
                    i += 1;
                    j += 1;
                    gj = if j < g.terms.len() { Some(shifted(j)) } else { None };
                }
            }
        }
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: out,
        }
    }

    fn mul_impl(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.mul_term(e, c);
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return other.mul_term(e, c);
        }
        let mut acc: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = acc.entry(e).or_default();
                *entry += Rational::from(ca * cb);
            }
        }
        MultiPoly::from_map(&self.vars, acc)
    }

    /// Multiplies by the single term `c * x^e`.
    pub fn mul_term(&self, e: &[u32], c: &Rational) -> MultiPoly {
        if *c == 0 {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: self
                .terms
                .iter()
                .map(|(x, d)| {
                    (
                        x.iter().zip(e).map(|(a, b)| a + b).collect(),
                        Rational::from(d * c),
                    )
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        self.mul_term(&vec![0; self.vars.len()], c)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact substitution of `value` for `var`; the result no longer depends on `var`.
    pub fn substitute(&self, var: &str, value: &SubstValue) -> Result<MultiPoly, PolyError> {
        let idx = self.vars.require(var)?;
        match value {
            SubstValue::Rational(q) => {
                let maxdeg = self.degree_at(idx) as usize;
                let mut powers = Vec::with_capacity(maxdeg + 1);
                let mut p = Rational::from(1);
                for _ in 0..=maxdeg {
                    powers.push(p.clone());
                    p *= q;
                }
                Ok(MultiPoly::from_terms(
                    &self.vars,
                    self.terms.iter().map(|(e, c)| {
                        let mut e2 = e.clone();
                        let k = e2[idx] as usize;
                        e2[idx] = 0;
                        (e2, Rational::from(c * &powers[k]))
                    }),
                ))
            }
            SubstValue::Poly(v) => {
                self.check_same(v)?;
                if v.degree_at(idx) > 0 {
                    // x -> f(x): evaluate via Horner in the univariate view.
                    let coeffs = self.coefficients_at(idx);
                    let mut acc = MultiPoly::zero(&self.vars);
                    for c in coeffs.iter().rev() {
                        acc = &(&acc * v) + c;
                    }
                    return Ok(acc);
                }
                let coeffs = self.coefficients_at(idx);
                let mut acc = MultiPoly::zero(&self.vars);
                let mut power = MultiPoly::one(&self.vars);
                for (k, c) in coeffs.iter().enumerate() {
                    if k > 0 {
                        power = &power * v;
                    }
                    if !c.is_zero() {
                        acc = &acc + &(c * &power);
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Substitutes rational values for several variables at once.
    pub fn substitute_all(&self, values: &[(&str, Rational)]) -> Result<MultiPoly, PolyError> {
        let mut p = self.clone();
        for (name, q) in values {
            p = p.substitute(name, &SubstValue::Rational(q.clone()))?;
        }
        Ok(p)
    }

    pub fn derivative(&self, var: &str) -> Result<MultiPoly, PolyError> {
        let idx = self.vars.require(var)?;
        Ok(self.derivative_at(idx))
    }

    pub(crate) fn derivative_at(&self, idx: usize) -> MultiPoly {
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[idx] > 0)
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    let k = e2[idx];
                    e2[idx] -= 1;
                    (e2, Rational::from(c * k))
                })
                .collect(),
        }
    }

    /// Coefficients with respect to `var`, indexed by degree.
    pub fn coefficients_in(&self, var: &str) -> Result<Vec<MultiPoly>, PolyError> {
        Ok(self.coefficients_at(self.vars.require(var)?))
    }

    pub(crate) fn coefficients_at(&self, idx: usize) -> Vec<MultiPoly> {
        let deg = self.degree_at(idx) as usize;
        let mut buckets: Vec<Vec<(Exponents, Rational)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[idx] as usize;
            e2[idx] = 0;
            buckets[k].push((e2, c.clone()));
        }
        buckets
            .into_iter()
            .map(|terms| {
                // relative order is preserved after zeroing one coordinate
                let mut t = terms;
                t.sort_by(|a, b| b.0.cmp(&a.0));
                MultiPoly {
                    vars: Arc::clone(&self.vars),
                    terms: t,
                }
            })
            .collect()
    }

    /// Rational coefficients of a polynomial in `var` alone, low degree first.
    pub fn univariate_coeffs(&self, var: &str) -> Result<Vec<Rational>, PolyError> {
        let idx = self.vars.require(var)?;
        let deg = self.degree_at(idx) as usize;
        let mut out = vec![Rational::new(); deg + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &x)| i != idx && x > 0) {
                return Err(PolyError::UnknownVariable(format!(
                    "polynomial is not univariate in `{var}`"
                )));
            }
            out[e[idx] as usize] = c.clone();
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over another variable list. Variables that
    /// occur in `self` must exist in `vars`.
    pub fn with_vars(&self, vars: &Arc<VarSet>) -> Result<MultiPoly, PolyError> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names.iter().enumerate() {
            match vars.index_of(name) {
                Some(j) => map.push(Some(j)),
                None if self.degree_at(i) == 0 => map.push(None),
                None => return Err(PolyError::UnknownVariable(name.clone())),
            }
        }
        Ok(MultiPoly::from_terms(
            vars,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = vec![0; vars.len()];
                for (i, &x) in e.iter().enumerate() {
                    if let Some(j) = map[i] {
                        e2[j] = x;
                    }
                }
                (e2, c.clone())
            }),
        ))
    }

    /// Exact quotient `self / divisor`, failing if a remainder appears.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_same(divisor)?;
        if divisor.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let (le, lc) = divisor.leading_term().unwrap();
        let (le, lc) = (le.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot: Vec<(Exponents, Rational)> = Vec::new();
        let one = Rational::from(1);
        while let Some((e, c)) = rem.terms.first() {
            if !e.iter().zip(&le).all(|(a, b)| a >= b) {
                return Err(PolyError::NotExact);
            }
            let qe: Exponents = e.iter().zip(&le).map(|(a, b)| a - b).collect();
            let qc = Rational::from(c / &lc);
            rem = rem.sub_mul_scaled_impl(&one, &qc, &qe, divisor);
            quot.push((qe, qc));
        }
        Ok(MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: quot,
        })
    }

    /// Splits off the rational content: `self = content * primitive`, where
    /// the primitive part has coprime integer coefficients and a positive
    /// leading coefficient.
    pub fn content_primitive(&self) -> Result<(Rational, MultiPoly), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut num_gcd = Integer::new();
        let mut den_lcm = Integer::from(1);
        for (_, c) in &self.terms {
            num_gcd.gcd_mut(c.numer());
            den_lcm.lcm_mut(c.denom());
        }
        let mut content = Rational::from((num_gcd, den_lcm));
        if self.terms[0].1 < 0 {
            content = -content;
        }
        let inv = Rational::from(content.recip_ref());
        Ok((content, self.scale(&inv)))
    }

    /// Primitive part, or zero for the zero polynomial.
    pub fn primitive(&self) -> MultiPoly {
        match self.content_primitive() {
            Ok((_, p)) => p,
            Err(_) => self.clone(),
        }
    }

    /// Monic normalization (leading coefficient 1).
    pub fn monic(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = Rational::from(self.terms[0].1.recip_ref());
        self.scale(&inv)
    }

    /// Largest coefficient size in bits (numerator or denominator).
    pub fn max_coeff_bits(&self) -> u32 {
        self.terms
            .iter()
            .map(|(_, c)| c.numer().significant_bits().max(c.denom().significant_bits()))
            .max()
            .unwrap_or(0)
    }

    /// Exact evaluation at rational values for every variable that occurs.
    pub fn eval_rational(&self, values: &HashMap<String, Rational>) -> Result<Rational, PolyError> {
        let mut vals = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names.iter().enumerate() {
            match values.get(name) {
                Some(v) => vals.push(v.clone()),
                None if self.degree_at(i) == 0 => vals.push(Rational::new()),
                None => return Err(PolyError::MissingAssignment(name.clone())),
            }
        }
        let mut acc = Rational::new();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in vals.iter().zip(e) {
                if k > 0 {
                    t *= Rational::from(x.pow(k));
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Horner-style evaluation at the requested precision.
    pub fn eval_prec(
        &self,
        values: &HashMap<String, PrecComplex>,
        digits: u32,
    ) -> Result<PrecComplex, PolyError> {
        let mut vals = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names.iter().enumerate() {
            match values.get(name) {
                Some(v) => vals.push(v.with_digits(digits)),
                None if self.degree_at(i) == 0 => vals.push(PrecComplex::zero(digits)),
                None => return Err(PolyError::MissingAssignment(name.clone())),
            }
        }
        Ok(horner(&self.terms, 0, &vals, digits))
    }

    /// Real-valued convenience wrapper around [`MultiPoly::eval_prec`].
    pub fn eval_real(&self, values: &HashMap<String, PrecReal>, digits: u32) -> Result<PrecReal, PolyError> {
        let cv: HashMap<String, PrecComplex> = values
            .iter()
            .map(|(k, v)| (k.clone(), PrecComplex::from_real(v.clone())))
            .collect();
        Ok(self.eval_prec(&cv, digits)?.re)
    }

    /// Parses an infix expression such as `3/4*A^2 - 2*B*z + 1`.
    pub fn parse(text: &str, vars: &Arc<VarSet>) -> Result<MultiPoly, PolyError> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            vars,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

fn horner(terms: &[(Exponents, Rational)], idx: usize, vals: &[PrecComplex], digits: u32) -> PrecComplex {
    if terms.is_empty() {
        return PrecComplex::zero(digits);
    }
    if idx == vals.len() {
        let mut acc = PrecComplex::zero(digits);
        for (_, c) in terms {
            acc = &acc + &PrecComplex::from_rational(c, digits);
        }
        return acc;
    }
    let x = &vals[idx];
    let mut acc: Option<PrecComplex> = None;
    let mut prev = 0u32;
    let mut start = 0;
    while start < terms.len() {
        let e = terms[start].0[idx];
        let mut end = start + 1;
        while end < terms.len() && terms[end].0[idx] == e {
            end += 1;
        }
        let inner = horner(&terms[start..end], idx + 1, vals, digits);
        acc = Some(match acc {
            None => inner,
            Some(a) => &(&a * &x.powu(prev - e)) + &inner,
        });
        prev = e;
        start = end;
    }
    let acc = acc.unwrap();
    if prev > 0 {
        &acc * &x.powu(prev)
    } else {
        acc
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical form: lex-descending terms `coeff * var^exp * ...` joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for (name, &x) in self.vars.names.iter().zip(e) {
                match x {
                    0 => {}
                    1 => write!(f, " * {name}")?,
                    _ => write!(f, " * {name}^{x}")?,
                }
            }
        }
        Ok(())
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.arith(rhs, $op).expect("polynomial arithmetic across different variable sets")
            }
        }
        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, ArithOp::Add);
poly_binop!(Sub, sub, ArithOp::Sub);
poly_binop!(Mul, mul, ArithOp::Mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&Rational::from(-1))
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Arc<VarSet>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut sign = 1;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            if c == b'-' {
                sign = -sign;
            }
            self.pos += 1;
        }
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(if sign < 0 { -acc } else { acc })
    }

    fn factor(&mut self) -> Result<MultiPoly, PolyError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.integer()?;
            let e = n.to_u32().ok_or_else(|| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<Integer, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Integer::from_str_radix(s, 10).map_err(|_| self.err("bad integer"))
    }

    fn primary(&mut self) -> Result<MultiPoly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut q = Rational::from(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.integer()?;
                    if den == 0 {
                        return Err(self.err("zero denominator"));
                    }
                    q /= Rational::from(den);
                }
                Ok(MultiPoly::constant(self.vars, q))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                MultiPoly::var(self.vars, name)
            }
            _ => Err(self.err("expected number, variable or `(`")),
        }
    }
}

// --- elimination algebra ---------------------------------------------------

fn trim(v: &mut Vec<MultiPoly>) {
    while v.len() > 1 && v.last().is_some_and(MultiPoly::is_zero) {
        v.pop();
    }
}

fn deg(v: &[MultiPoly]) -> usize {
    v.len() - 1
}

fn is_zero_uni(v: &[MultiPoly]) -> bool {
    v.iter().all(MultiPoly::is_zero)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b` in the univariate view.
fn prem(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let db = deg(b);
    let lcb = &b[db];
    let mut r: Vec<MultiPoly> = a.to_vec();
    let mut e = deg(a) as i64 - db as i64 + 1;
    while !is_zero_uni(&r) && deg(&r) >= db {
        let dr = deg(&r);
        let lcr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * lcb;
        }
        for (j, bj) in b.iter().enumerate() {
            let k = j + dr - db;
            r[k] = &r[k] - &(&lcr * bj);
        }
        r.pop();
        trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = lcb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

/// Resultant by the subresultant polynomial remainder sequence. The sign
/// convention is that of the Sylvester determinant with `p` rows first, so
/// `res(x - a, x - b) = a - b`.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: &str) -> Result<MultiPoly, PolyError> {
    p.check_same(q)?;
    let idx = p.vars.require(var)?;
    for f in [p, q] {
        let d = f.degree_at(idx);
        if d == 0 {
            return Err(PolyError::DegreeTooLow {
                var: var.to_string(),
                degree: d,
                required: 1,
            });
        }
    }
    Ok(resultant_at(p, q, idx))
}

pub(crate) fn resultant_at(p: &MultiPoly, q: &MultiPoly, idx: usize) -> MultiPoly {
    let vars = Arc::clone(&p.vars);
    let mut a = p.coefficients_at(idx);
    let mut b = q.coefficients_at(idx);
    if p.is_zero() || q.is_zero() {
        return MultiPoly::zero(&vars);
    }
    let mut negate = false;
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            negate = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if deg(&b) == 0 {
        let r = b[0].pow(deg(&a) as u32);
        return if negate { -r } else { r };
    }
    let mut g = MultiPoly::one(&vars);
    let mut h = MultiPoly::one(&vars);
    loop {
        let delta = deg(&a) - deg(&b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            negate = !negate;
        }
        let r = prem(&a, &b);
        a = b;
        if is_zero_uni(&r) {
            return MultiPoly::zero(&vars);
        }
        let divisor = &g * &h.pow(delta as u32);
        b = r
            .iter()
            .map(|c| c.div_exact(&divisor).expect("subresultant division is exact"))
            .collect();
        g = a[deg(&a)].clone();
        if delta > 0 {
            let num = g.pow(delta as u32);
            h = num
                .div_exact(&h.pow(delta as u32 - 1))
                .expect("subresultant division is exact");
        }
        if deg(&b) == 0 {
            break;
        }
    }
    let da = deg(&a) as u32;
    let num = b[0].pow(da);
    let r = if da > 1 {
        num.div_exact(&h.pow(da - 1)).expect("subresultant division is exact")
    } else {
        num
    };
    if negate {
        -r
    } else {
        r
    }
}

/// Discriminant `(-1)^(n(n-1)/2) res(p, p') / lc(p)` with respect to `var`.
pub fn discriminant(p: &MultiPoly, var: &str) -> Result<MultiPoly, PolyError> {
    let idx = p.vars.require(var)?;
    let n = p.degree_at(idx);
    if n < 2 {
        return Err(PolyError::DegreeTooLow {
            var: var.to_string(),
            degree: n,
            required: 2,
        });
    }
    let dp = p.derivative_at(idx);
    let r = resultant_at(p, &dp, idx);
    let lc = p.coefficients_at(idx).pop().unwrap();
    let d = r.div_exact(&lc)?;
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vs(names: &[&str]) -> Arc<VarSet> {
        VarSet::new(names.iter().copied()).unwrap()
    }

    fn p(text: &str, v: &Arc<VarSet>) -> MultiPoly {
        MultiPoly::parse(text, v).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let v = vs(&["A", "B", "C", "z", "s"]);
        assert_eq!(&p("s+1", &v) * &p("s-1", &v), p("s^2-1", &v));
        assert!((&p("A+2*z", &v) * &MultiPoly::zero(&v)).is_zero());
        let sum = &p("s^2", &v) + &p("(-A+35*z-2*C-2*B)*s", &v);
        assert_eq!(sum.num_terms(), 5);
        let other = vs(&["x"]);
        assert!(matches!(
            p("s", &v).arith(&p("x", &other), ArithOp::Add),
            Err(PolyError::VarSetMismatch(..))
        ));
    }

    #[test]
    fn canonical_text_round_trip() {
        let v = vs(&["A", "B", "z"]);
        let a = p("3/4*A^2*B - z + 7 - 2*B*z", &v);
        let text = a.to_string();
        assert_eq!(text, "3/4 * A^2 * B + -2 * B * z + -1 * z + 7");
        assert_eq!(MultiPoly::parse(&text, &v).unwrap(), a);
        assert_eq!(MultiPoly::zero(&v).to_string(), "0");
    }

    #[test]
    fn substitution_examples() {
        let v = vs(&["A", "B", "C", "z", "s"]);
        let r = p("s^2 - z", &v).substitute("z", &1.into()).unwrap();
        assert_eq!(r, p("s^2-1", &v));
        assert_eq!(r.degree_in("z").unwrap(), 0);
        let p1 = p("-A + 35*z - 2*C - 2*B", &v);
        let r = p1
            .substitute_all(&[("z", 1.into()), ("A", 9.into()), ("B", 8.into()), ("C", 5.into())])
            .unwrap();
        assert!(r.is_zero());
        assert!(matches!(
            p1.substitute("y", &1.into()),
            Err(PolyError::UnknownVariable(_))
        ));
    }

    #[test]
    fn substitute_defining_relation() {
        let v = vs(&["w", "z", "s"]);
        let minus_z = p("-z", &v);
        // w^2 * s with w^2 -> -z: substitute in the square.
        let w2s = p("w^2*s", &v);
        let coeffs = w2s.coefficients_in("w").unwrap();
        let r = &coeffs[2] * &minus_z;
        assert_eq!(r, p("-z*s", &v));
    }

    #[test]
    fn resultant_examples() {
        let v = vs(&["a", "b", "s"]);
        assert_eq!(resultant(&p("s-a", &v), &p("s-b", &v), "s").unwrap(), p("a-b", &v));
        assert_eq!(
            resultant(&p("s^2+1", &v), &p("s+1", &v), "s").unwrap(),
            p("2", &v)
        );
        let w = vs(&["r", "C"]);
        let r = resultant(&p("r^2+118*r+81", &w), &p("C-6*r", &w), "r").unwrap();
        let (_, prim) = r.content_primitive().unwrap();
        assert_eq!(prim, p("C^2 + 708*C + 2916", &w));
        assert!(matches!(
            resultant(&p("a", &v), &p("s", &v), "s"),
            Err(PolyError::DegreeTooLow { .. })
        ));
    }

    #[test]
    fn resultant_matches_sylvester_determinant() {
        // 3x3 Sylvester for (s^2 + a s + b, s + c): b - a c + c^2
        let v = vs(&["a", "b", "c", "s"]);
        let r = resultant(&p("s^2+a*s+b", &v), &p("s+c", &v), "s").unwrap();
        assert_eq!(r, p("c^2 - a*c + b", &v));
        let r2 = resultant(&p("s+c", &v), &p("s^2+a*s+b", &v), "s").unwrap();
        assert_eq!(r2, r);
    }

    #[test]
    fn discriminant_examples() {
        let v = vs(&["b", "c", "z", "s"]);
        assert_eq!(discriminant(&p("s^2-z", &v), "s").unwrap(), p("4*z", &v));
        assert_eq!(
            discriminant(&p("s^2+b*s+c", &v), "s").unwrap(),
            p("b^2-4*c", &v)
        );
        let cubic = discriminant(&p("s^3+b*s+c", &v), "s").unwrap();
        assert_eq!(cubic, p("-4*b^3-27*c^2", &v));
        assert!(discriminant(&p("s+1", &v), "s").is_err());
    }

    #[test]
    fn content_examples() {
        let v = vs(&["s"]);
        let (c, q) = p("2*s+4", &v).content_primitive().unwrap();
        assert_eq!(c, 2);
        assert_eq!(q, p("s+2", &v));
        let (c, q) = p("1/3*s^2 - 2/3", &v).content_primitive().unwrap();
        assert_eq!(c, Rational::from((1, 3)));
        assert_eq!(q, p("s^2-2", &v));
        let (c, q) = p("-6*s+3", &v).content_primitive().unwrap();
        assert_eq!(c, -3);
        assert_eq!(q, p("2*s-1", &v));
        assert_eq!(MultiPoly::zero(&v).content_primitive(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn eval_examples() {
        let v = vs(&["A", "B", "C", "D"]);
        let p1 = p("-A-2*D+84-2*C-2*B", &v);
        let vals: HashMap<String, PrecComplex> = [("A", 16), ("B", 15), ("C", 12), ("D", 7)]
            .iter()
            .map(|&(n, x)| (n.to_string(), PrecComplex::from_f64(x as f64, 0.0, 30)))
            .collect();
        assert!(p1.eval_prec(&vals, 30).unwrap().is_zero());
        let x = vs(&["x"]);
        let mut iv = HashMap::new();
        iv.insert("x".to_string(), PrecComplex::i(30));
        assert!(p("x^2+1", &x).eval_prec(&iv, 30).unwrap().is_zero());
        assert!(matches!(
            p1.eval_prec(&HashMap::new(), 30),
            Err(PolyError::MissingAssignment(_))
        ));
    }

    #[test]
    fn exact_division() {
        let v = vs(&["x", "y"]);
        let a = p("x^2 - y^2", &v);
        assert_eq!(a.div_exact(&p("x-y", &v)).unwrap(), p("x+y", &v));
        assert_eq!(a.div_exact(&p("x-2", &v)), Err(PolyError::NotExact));
    }

    fn small_poly() -> impl Strategy<Value = Vec<((u32, u32, u32), i64)>> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -9i64..10), 0..6)
    }

    fn build(v: &Arc<VarSet>, raw: &[((u32, u32, u32), i64)]) -> MultiPoly {
        MultiPoly::from_terms(
            v,
            raw.iter().map(|&((a, b, c), k)| (vec![a, b, c], Rational::from(k))),
        )
    }

    proptest! {
        #[test]
        fn distributive(a in small_poly(), b in small_poly(), c in small_poly()) {
            let v = vs(&["x", "y", "z"]);
            let (a, b, c) = (build(&v, &a), build(&v, &b), build(&v, &c));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        }

        #[test]
        fn resultant_swap_sign(a in small_poly(), b in small_poly()) {
            let v = vs(&["x", "y", "z"]);
            let (a, b) = (build(&v, &a), build(&v, &b));
            let (da, db) = (a.degree_at(0), b.degree_at(0));
            prop_assume!(da > 0 && db > 0);
            let r1 = resultant(&a, &b, "x").unwrap();
            let r2 = resultant(&b, &a, "x").unwrap();
            let expected = if (da * db) % 2 == 1 { -r2 } else { r2 };
            prop_assert_eq!(r1, expected);
        }

        #[test]
        fn substituting_a_root_annihilates(roots in prop::collection::vec((-20i64..20, 1i64..5), 1..4), pick in 0usize..4) {
            let v = vs(&["x"]);
            let mut f = MultiPoly::one(&v);
            for &(n, d) in &roots {
                f = &f * &p(&format!("{d}*x - {n}"), &v);
            }
            let (n, d) = roots[pick % roots.len()];
            let r = f.substitute("x", &SubstValue::Rational(Rational::from((n, d)))).unwrap();
            prop_assert!(r.is_zero());
        }
    }
}
