//! Real-root isolation by Sturm sequences and certified refinement, plus an
//! uncertified Aberth pass for complex roots.

use std::sync::Arc;

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{bits_for_digits, Integer, PrecComplex, PrecReal, Rational};
use crate::poly::{MultiPoly, PolyError, VarSet};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial is not univariate: {0}")]
    NotUnivariate(String),
    #[error("interval does not bracket a root")]
    InvalidInterval,
    #[error("root iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
}

impl From<PolyError> for RootError {
    fn from(e: PolyError) -> Self {
        RootError::NotUnivariate(e.to_string())
    }
}

/// Dense univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniPoly {
    #[serde(with = "rational_vec")]
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::new());
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn from_multipoly(p: &MultiPoly, var: &str) -> Result<Self, RootError> {
        let support = p.support();
        if support.iter().any(|v| v != var) {
            return Err(RootError::NotUnivariate(support.join(",")));
        }
        if p.vars().index_of(var).is_none() {
            return Ok(UniPoly::new(vec![p.constant_term()]));
        }
        Ok(UniPoly::new(p.univariate_coeffs(var)?))
    }

    pub fn to_multipoly(&self, vars: &Arc<VarSet>, var: &str) -> Result<MultiPoly, PolyError> {
        MultiPoly::univariate(vars, var, &self.coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0
    }

    pub fn leading(&self) -> &Rational {
        self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i32 {
        self.eval(x).cmp0() as i32
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let prec = x.prec();
        let mut acc = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += Float::with_val(prec, c);
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() == 1 {
            return UniPoly::new(vec![Rational::new()]);
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Rational::from(c * k as u32))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|x| Rational::from(x * c)).collect())
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = Rational::from(self.leading().recip_ref());
        self.scale(&inv)
    }

    /// Divides by the positive rational content, giving coprime integers.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = Integer::new();
        let mut l = Integer::from(1);
        for c in &self.coeffs {
            g.gcd_mut(c.numer());
            l.lcm_mut(c.denom());
        }
        let k = Rational::from((l, g));
        self.scale(&k)
    }

    /// Euclidean division `(quotient, remainder)`.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree();
        let lc = d.leading().clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::new(vec![Rational::new()]), self.clone());
        }
        let mut q = vec![Rational::new(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = Rational::from(&r[k + dd] / &lc);
            if t != 0 {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[k + j] -= Rational::from(&t * dj);
                }
            }
            q[k] = t;
        }
        r.truncate(dd.max(1));
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, normalized to a primitive integer polynomial.
    pub fn square_free(&self) -> UniPoly {
        if self.degree() < 1 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        let (q, _) = self.div_rem(&g);
        q.primitive()
    }

    /// Cauchy bound `1 + max |a_i / a_n|`: every root lies strictly inside.
    pub fn cauchy_bound(&self) -> Rational {
        let lc = Rational::from(self.leading().abs_ref());
        let mut m = Rational::new();
        for c in &self.coeffs[..self.degree()] {
            let r = Rational::from(c.abs_ref()) / &lc;
            if r > m {
                m = r;
            }
        }
        m + 1
    }
}

mod rational_vec {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(|q| q.to_string()).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|t| {
                Rational::from_str_radix(t, 10).map_err(|e| serde::de::Error::custom(e.to_string()))
            })
            .collect()
    }
}

/// Sturm chain of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<UniPoly>,
}

impl SturmSequence {
    pub fn new(p: &UniPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative().primitive()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() || chain[n - 1].degree() == 0 {
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.primitive().scale(&Rational::from(-1)));
        }
        chain.retain(|q| !q.is_zero());
        SturmSequence { chain }
    }

    fn variations<I: Iterator<Item = i32>>(signs: I) -> usize {
        let mut last = 0;
        let mut v = 0;
        for s in signs {
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.chain.iter().map(|q| q.sign_at(x)))
    }

    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.chain.iter().map(|q| {
            let s = q.leading().cmp0() as i32;
            if !positive && q.degree() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots on the whole line.
    pub fn total_count(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }

    /// Number of distinct roots in `(a, b]`.
    pub fn count_in(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }
}

/// Interval `(lower, upper)` holding exactly one simple root of `poly`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatingInterval {
    #[serde(with = "rational_str")]
    pub lower: Rational,
    #[serde(with = "rational_str")]
    pub upper: Rational,
    pub sign_lower: i32,
    pub sign_upper: i32,
    pub poly: Arc<UniPoly>,
}

mod rational_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let t = String::deserialize(d)?;
        Rational::from_str_radix(&t, 10).map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

impl IsolatingInterval {
    pub fn width(&self) -> Rational {
        Rational::from(&self.upper - &self.lower)
    }

    pub fn is_valid(&self) -> bool {
        self.lower < self.upper
            && self.poly.sign_at(&self.lower) == self.sign_lower
            && self.poly.sign_at(&self.upper) == self.sign_upper
            && self.sign_lower * self.sign_upper < 0
    }

    pub fn midpoint(&self) -> Rational {
        Rational::from(&self.lower + &self.upper) / 2
    }
}

/// Isolates every real root of the square-free part of `p`.
pub fn isolate(p: &UniPoly) -> Result<Vec<IsolatingInterval>, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let sf = Arc::new(p.square_free());
    if sf.degree() == 0 {
        return Ok(Vec::new());
    }
    let sturm = SturmSequence::new(&sf);
    let total = sturm.total_count();
    let bound = sf.cauchy_bound();
    let mut out = Vec::with_capacity(total);
    let mut stack = vec![(Rational::from(-&bound), bound)];
    const SPLITS: [(i32, i32); 6] = [(1, 2), (1, 3), (2, 3), (2, 5), (3, 5), (3, 7)];
    while let Some((a, b)) = stack.pop() {
        let count = sturm.count_in(&a, &b);
        if count == 0 {
            continue;
        }
        if count == 1 {
            out.push(IsolatingInterval {
                sign_lower: sf.sign_at(&a),
                sign_upper: sf.sign_at(&b),
                lower: a,
                upper: b,
                poly: Arc::clone(&sf),
            });
            continue;
        }
        let w = Rational::from(&b - &a);
        let mid = SPLITS
            .iter()
            .map(|&(n, d)| Rational::from(&a + Rational::from(&w * Rational::from((n, d)))))
            .find(|m| sf.sign_at(m) != 0)
            .expect("a polynomial cannot vanish at every split point");
        stack.push((mid.clone(), b));
        stack.push((a, mid));
    }
    out.sort_by(|x, y| x.lower.cmp(&y.lower));
    debug_assert_eq!(out.len(), total);
    Ok(out)
}

fn float_of(q: &Rational, prec: u32) -> Float {
    Float::with_val(prec, q)
}

/// Shrinks `iv` until its width is at most `2 * 10^-digits` and returns the
/// midpoint. Newton steps run in floating point; every eight steps the
/// candidate enclosure is confirmed by exact sign evaluation.
pub fn refine(iv: &IsolatingInterval, digits: u32) -> Result<PrecReal, RootError> {
    let enclosure = refine_interval(iv, digits)?;
    let mid = enclosure.midpoint();
    Ok(PrecReal::from_rational(&mid, digits + 10))
}

pub fn refine_interval(iv: &IsolatingInterval, digits: u32) -> Result<IsolatingInterval, RootError> {
    if !iv.is_valid() {
        return Err(RootError::InvalidInterval);
    }
    let p = &*iv.poly;
    let dp = p.derivative();
    let target = Rational::from(2) / Rational::from(Integer::from(10).pow(digits));
    let mut lo = iv.lower.clone();
    let mut hi = iv.upper.clone();
    let slo = iv.sign_lower;
    let mag = {
        let m = Rational::from(lo.abs_ref()).max(Rational::from(hi.abs_ref()));
        m.to_f64().max(1.0).log2().ceil() as u32
    };
    let mut prec = bits_for_digits(digits) + mag + 32;
    let bisect = |lo: &mut Rational, hi: &mut Rational, times: usize| {
        for _ in 0..times {
            let mid = Rational::from(&*lo + &*hi) / 2;
            let s = p.sign_at(&mid);
            if s == 0 {
                let eps = Rational::from(&target / 8);
                *lo = Rational::from(&mid - &eps);
                *hi = mid + eps;
                return;
            }
            if s == slo {
                *lo = mid;
            } else {
                *hi = mid;
            }
        }
    };
    // coarse bisection until the interval is small relative to its scale
    for _ in 0..200 {
        let w = Rational::from(&hi - &lo);
        let scale = Rational::from(lo.abs_ref()).max(Rational::from(hi.abs_ref())).max(Rational::from(1));
        if w * 1000 <= scale {
            break;
        }
        bisect(&mut lo, &mut hi, 1);
    }
    let mut rounds = 0;
    while Rational::from(&hi - &lo) > target {
        rounds += 1;
        if rounds > 500 {
            return Err(RootError::NoConvergence(rounds));
        }
        let flo = float_of(&lo, prec);
        let fhi = float_of(&hi, prec);
        let mut x: Float = Float::with_val(prec, &flo + &fhi) / 2;
        let mut step = Float::with_val(prec, &fhi - &flo);
        let mut escaped = false;
        for _ in 0..8 {
            let fx = p.eval_float(&x);
            let dfx = dp.eval_float(&x);
            if dfx.is_zero() || !fx.is_finite() {
                escaped = true;
                break;
            }
            step = fx / dfx;
            x -= &step;
            if x < flo || x > fhi {
                escaped = true;
                break;
            }
            if step.is_zero() {
                break;
            }
        }
        if escaped {
            bisect(&mut lo, &mut hi, 4);
            continue;
        }
        let xr = x.to_rational().expect("finite Newton iterate");
        let quarter = Rational::from(&target / 4);
        let mut h = step.abs().to_rational().unwrap_or_default() * 2;
        if h < quarter {
            h = quarter.clone();
        }
        let a = Rational::from(&xr - &h).max(lo.clone());
        let b = Rational::from(&xr + &h).min(hi.clone());
        let sa = p.sign_at(&a);
        let sb = p.sign_at(&b);
        if a < b && sa == slo && sb == -slo {
            lo = a;
            hi = b;
        } else if sa == 0 || sb == 0 {
            let r = if sa == 0 { a } else { b };
            lo = Rational::from(&r - &quarter);
            hi = r + quarter;
            if p.sign_at(&lo) != slo {
                return Err(RootError::InvalidInterval);
            }
        } else {
            prec = (prec * 3 / 2).min(1 << 20);
            bisect(&mut lo, &mut hi, 4);
        }
    }
    Ok(IsolatingInterval {
        sign_lower: p.sign_at(&lo),
        sign_upper: p.sign_at(&hi),
        lower: lo,
        upper: hi,
        poly: Arc::clone(&iv.poly),
    })
}

/// A refined real root, with its exact value when it is rational.
#[derive(Clone, Debug)]
pub struct RealRoot {
    pub interval: IsolatingInterval,
    pub value: PrecReal,
    pub exact: Option<Rational>,
}

/// Small-denominator rational inside the enclosure that is an exact root.
pub fn rational_root_in(iv: &IsolatingInterval) -> Option<Rational> {
    let lc = iv.poly.leading().numer().clone();
    let c0 = iv.poly.coeffs()[0].numer().clone();
    if c0 == 0 {
        let zero = Rational::new();
        return (iv.lower < zero && zero < iv.upper).then_some(zero);
    }
    // continued-fraction convergents of the midpoint; any rational root a/b
    // of a primitive integer polynomial has b | lc
    let x = iv.midpoint();
    let mut convergents = Vec::new();
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.clone().floor().numer().clone();
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if k2.significant_bits() > lc.significant_bits() + 1 {
            break;
        }
        convergents.push(Rational::from((h2.clone(), k2.clone())));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = Rational::from(&rest - Rational::from(a));
        if frac == 0 {
            break;
        }
        rest = frac.recip();
    }
    convergents
        .into_iter()
        .find(|q| iv.lower < *q && *q < iv.upper && iv.poly.eval(q) == 0)
}

/// Isolates, refines and recognizes rational roots of `p`.
pub fn real_roots(p: &UniPoly, digits: u32) -> Result<Vec<RealRoot>, RootError> {
    isolate(p)?
        .into_iter()
        .map(|iv| {
            let fine = refine_interval(&iv, digits)?;
            let exact = rational_root_in(&fine);
            let value = match &exact {
                Some(q) => PrecReal::from_rational(q, digits + 10),
                None => PrecReal::from_rational(&fine.midpoint(), digits + 10),
            };
            Ok(RealRoot {
                interval: fine,
                value,
                exact,
            })
        })
        .collect()
}

/// Result of the uncertified simultaneous-iteration root finder.
#[derive(Clone, Debug)]
pub struct ComplexRoots {
    pub roots: Vec<PrecComplex>,
    pub converged: bool,
    pub sweeps: usize,
}

/// All complex roots by Aberth–Ehrlich iteration. `coeffs` are lowest degree
/// first; the output is uncertified.
pub fn complex_roots(coeffs: &[PrecComplex], digits: u32) -> Result<ComplexRoots, RootError> {
    let mut c: Vec<PrecComplex> = coeffs.iter().map(|x| x.with_digits(digits + 10)).collect();
    while c.len() > 1 && c.last().is_some_and(PrecComplex::is_zero) {
        c.pop();
    }
    if c.is_empty() || (c.len() == 1 && c[0].is_zero()) {
        return Err(RootError::ZeroPolynomial);
    }
    let n = c.len() - 1;
    if n == 0 {
        return Ok(ComplexRoots {
            roots: Vec::new(),
            converged: true,
            sweeps: 0,
        });
    }
    let wd = digits + 10;
    let lc = c[n].clone();
    let c: Vec<PrecComplex> = c.iter().map(|x| x / &lc).collect();
    let dc: Vec<PrecComplex> = (1..=n)
        .map(|k| c[k].scale(&PrecReal::from_i64(k as i64, wd)))
        .collect();
    // initial radius from the Fujiwara-style bound
    let radius = (0..n)
        .map(|k| {
            let a = c[k].abs().to_f64();
            if a == 0.0 {
                0.0
            } else {
                a.powf(1.0 / (n - k) as f64)
            }
        })
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<PrecComplex> = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            PrecComplex::from_f64(radius * t.cos(), radius * t.sin(), wd)
        })
        .collect();
    let tol = PrecReal::pow10(-(digits as i32) - 2, wd);
    let eval = |coef: &[PrecComplex], x: &PrecComplex| -> PrecComplex {
        let mut acc = PrecComplex::zero(wd);
        for a in coef.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    };
    let max_sweeps = 400 + 40 * n;
    let mut frozen = vec![false; n];
    for sweep in 1..=max_sweeps {
        let mut all_small = true;
        for k in 0..n {
            if frozen[k] {
                continue;
            }
            let pv = eval(&c, &z[k]);
            if pv.is_zero() {
                frozen[k] = true;
                continue;
            }
            let dv = eval(&dc, &z[k]);
            let ratio = &pv / &dv;
            let mut sum = PrecComplex::zero(wd);
            for j in 0..n {
                if j != k {
                    let d = &z[k] - &z[j];
                    if !d.is_zero() {
                        sum = &sum + &(&PrecComplex::one(wd) / &d);
                    }
                }
            }
            let denom = &PrecComplex::one(wd) - &(&ratio * &sum);
            let w = if denom.is_zero() { ratio } else { &ratio / &denom };
            z[k] = &z[k] - &w;
            let scale = z[k].abs().max(PrecReal::one(wd));
            if w.abs() > &tol * &scale {
                all_small = false;
            } else {
                frozen[k] = true;
            }
        }
        if all_small || frozen.iter().all(|&f| f) {
            return Ok(ComplexRoots {
                roots: z.into_iter().map(|x| x.with_digits(digits)).collect(),
                converged: true,
                sweeps: sweep,
            });
        }
    }
    Ok(ComplexRoots {
        roots: z.into_iter().map(|x| x.with_digits(digits)).collect(),
        converged: false,
        sweeps: max_sweeps,
    })
}

/// Complex roots of a rational polynomial (uncertified).
pub fn complex_roots_rational(p: &UniPoly, digits: u32) -> Result<ComplexRoots, RootError> {
    let c: Vec<PrecComplex> = p
        .coeffs()
        .iter()
        .map(|q| PrecComplex::from_rational(q, digits + 10))
        .collect();
    complex_roots(&c, digits)
}
