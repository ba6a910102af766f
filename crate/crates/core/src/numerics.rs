//! Exact rationals and precision-tracked real/complex floating point.
//!
//! Precision is counted in decimal digits. A value created at `p` digits
//! carries `ceil(p * log2(10)) + 16` binary digits of mantissa, and binary
//! operations run at the smaller precision of their two operands.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;
use thiserror::Error;

pub use rug::{Integer, Rational};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Extra binary digits carried beyond the requested decimal precision.
pub const GUARD_BITS: u32 = 16;

/// Binary mantissa size used for `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits.max(1)) * LOG2_10).ceil() as u32 + GUARD_BITS
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NumericsError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("degenerate input: zero vector cannot be normalized")]
    ZeroVector,
    #[error("invalid decimal literal `{0}`")]
    Parse(String),
}

/// A real number held at a stated decimal precision.
#[derive(Clone, Debug)]
pub struct PrecReal {
    value: Float,
    digits: u32,
}

impl PrecReal {
    pub fn from_float(value: Float, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        let value = if value.prec() == bits {
            value
        } else {
            Float::with_val(bits, value)
        };
        PrecReal { value, digits }
    }

    pub fn zero(digits: u32) -> Self {
        PrecReal::from_i64(0, digits)
    }

    pub fn one(digits: u32) -> Self {
        PrecReal::from_i64(1, digits)
    }

    pub fn from_i64(v: i64, digits: u32) -> Self {
        PrecReal {
            value: Float::with_val(bits_for_digits(digits), v),
            digits,
        }
    }

    pub fn from_f64(v: f64, digits: u32) -> Self {
        PrecReal {
            value: Float::with_val(bits_for_digits(digits), v),
            digits,
        }
    }

    pub fn from_rational(q: &Rational, digits: u32) -> Self {
        PrecReal {
            value: Float::with_val(bits_for_digits(digits), q),
            digits,
        }
    }

    pub fn from_integer(q: &Integer, digits: u32) -> Self {
        PrecReal {
            value: Float::with_val(bits_for_digits(digits), q),
            digits,
        }
    }

    /// Parses a decimal literal such as `-65.80360706` or `1.4e-13`.
    pub fn parse(text: &str, digits: u32) -> Result<Self, NumericsError> {
        let parsed =
            Float::parse(text.trim()).map_err(|_| NumericsError::Parse(text.to_string()))?;
        Ok(PrecReal {
            value: Float::with_val(bits_for_digits(digits), parsed),
            digits,
        })
    }

    /// `10^exponent` at the given precision.
    pub fn pow10(exponent: i32, digits: u32) -> Self {
        let ten = Float::with_val(bits_for_digits(digits), 10);
        PrecReal {
            value: ten.pow(exponent),
            digits,
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn float(&self) -> &Float {
        &self.value
    }

    /// Re-rounds to a different precision.
    pub fn with_digits(&self, digits: u32) -> Self {
        PrecReal {
            value: Float::with_val(bits_for_digits(digits), &self.value),
            digits,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Exact rational value of the stored binary float.
    pub fn to_rational(&self) -> Rational {
        self.value.to_rational().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_sign_negative() && !self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn abs(&self) -> Self {
        PrecReal {
            value: self.value.clone().abs(),
            digits: self.digits,
        }
    }

    /// Square root of a nonnegative value (negative input is clamped to zero).
    pub fn sqrt_nonneg(&self) -> Self {
        let v = if self.is_negative() {
            Float::with_val(self.value.prec(), 0)
        } else {
            self.value.clone().sqrt()
        };
        PrecReal {
            value: v,
            digits: self.digits,
        }
    }

    pub fn square(&self) -> Self {
        PrecReal {
            value: self.value.clone().square(),
            digits: self.digits,
        }
    }

    pub fn powu(&self, e: u32) -> Self {
        PrecReal {
            value: self.value.clone().pow(e),
            digits: self.digits,
        }
    }

    /// Base-10 logarithm of `|self|` as an `f64`; `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.value.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (mantissa, exp) = self.value.to_f64_exp();
        mantissa.abs().log10() + f64::from(exp) * std::f64::consts::LOG10_2
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Decimal rendering that parses back to the identical value at `digits()`.
    pub fn to_roundtrip_string(&self) -> String {
        let sig = (f64::from(self.value.prec()) / LOG2_10).ceil() as usize + 1;
        self.to_string_sig(sig)
    }

    /// Decimal rendering with `sig` significant digits.
    pub fn to_string_sig(&self, sig: usize) -> String {
        if self.value.is_zero() {
            return "0".to_string();
        }
        format_sig(&self.value, sig)
    }
}

fn format_sig(value: &Float, sig: usize) -> String {
    let (negative, digits, exp) = value.to_sign_string_exp_round(10, Some(sig.max(1)), Round::Nearest);
    let exp = exp.unwrap_or(0);
    let trimmed = digits.trim_end_matches('0');
    let digits = if trimmed.is_empty() { "0" } else { trimmed };
    let sign = if negative { "-" } else { "" };
    // digits d1 d2 ... with value 0.d1d2... * 10^exp
    if exp > 0 && (exp as usize) <= 24 {
        let e = exp as usize;
        if digits.len() <= e {
            format!("{sign}{digits}{}", "0".repeat(e - digits.len()))
        } else {
            format!("{sign}{}.{}", &digits[..e], &digits[e..])
        }
    } else if exp <= 0 && exp > -8 {
        format!("{sign}0.{}{digits}", "0".repeat((-exp) as usize))
    } else {
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{}", exp - 1)
        } else {
            format!("{sign}{head}.{tail}e{}", exp - 1)
        }
    }
}

impl fmt::Display for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(self.digits as usize);
        f.write_str(&self.to_string_sig(sig))
    }
}

impl PartialEq for PrecReal {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for PrecReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&PrecReal> for &PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: &PrecReal) -> PrecReal {
                let digits = self.digits.min(rhs.digits);
                PrecReal {
                    value: Float::with_val(bits_for_digits(digits), &self.value $op &rhs.value),
                    digits,
                }
            }
        }
        impl $trait<PrecReal> for PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: PrecReal) -> PrecReal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&PrecReal> for PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: &PrecReal) -> PrecReal {
                (&self).$method(rhs)
            }
        }
        impl $trait<PrecReal> for &PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: PrecReal) -> PrecReal {
                self.$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add, +);
real_binop!(Sub, sub, -);
real_binop!(Mul, mul, *);
real_binop!(Div, div, /);

impl Neg for PrecReal {
    type Output = PrecReal;
    fn neg(self) -> PrecReal {
        PrecReal {
            value: -self.value,
            digits: self.digits,
        }
    }
}

impl Neg for &PrecReal {
    type Output = PrecReal;
    fn neg(self) -> PrecReal {
        -(self.clone())
    }
}

/// A complex number whose components share one precision.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecComplex {
    pub re: PrecReal,
    pub im: PrecReal,
}

impl PrecComplex {
    pub fn new(re: PrecReal, im: PrecReal) -> Self {
        let digits = re.digits.min(im.digits);
        PrecComplex {
            re: if re.digits == digits { re } else { re.with_digits(digits) },
            im: if im.digits == digits { im } else { im.with_digits(digits) },
        }
    }

    pub fn from_real(re: PrecReal) -> Self {
        let digits = re.digits;
        PrecComplex {
            re,
            im: PrecReal::zero(digits),
        }
    }

    pub fn zero(digits: u32) -> Self {
        PrecComplex::from_real(PrecReal::zero(digits))
    }

    pub fn one(digits: u32) -> Self {
        PrecComplex::from_real(PrecReal::one(digits))
    }

    pub fn i(digits: u32) -> Self {
        PrecComplex {
            re: PrecReal::zero(digits),
            im: PrecReal::one(digits),
        }
    }

    pub fn from_f64(re: f64, im: f64, digits: u32) -> Self {
        PrecComplex {
            re: PrecReal::from_f64(re, digits),
            im: PrecReal::from_f64(im, digits),
        }
    }

    pub fn from_rational(q: &Rational, digits: u32) -> Self {
        PrecComplex::from_real(PrecReal::from_rational(q, digits))
    }

    pub fn digits(&self) -> u32 {
        self.re.digits.min(self.im.digits)
    }

    pub fn with_digits(&self, digits: u32) -> Self {
        PrecComplex {
            re: self.re.with_digits(digits),
            im: self.im.with_digits(digits),
        }
    }

    pub fn conj(&self) -> Self {
        PrecComplex {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sqr(&self) -> PrecReal {
        &self.re.square() + &self.im.square()
    }

    pub fn abs(&self) -> PrecReal {
        let digits = self.digits();
        PrecReal::from_float(
            Float::with_val(bits_for_digits(digits), self.re.value.hypot_ref(&self.im.value)),
            digits,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, k: &PrecReal) -> Self {
        PrecComplex {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    /// Principal square root; branch cut on the negative real axis with
    /// `sqrt(-x) = +i sqrt(x)`.
    pub fn sqrt(&self) -> Self {
        let digits = self.digits();
        if self.im.is_zero() {
            return if self.re.is_negative() {
                PrecComplex {
                    re: PrecReal::zero(digits),
                    im: self.re.abs().sqrt_nonneg(),
                }
            } else {
                PrecComplex::from_real(self.re.sqrt_nonneg())
            };
        }
        let r = self.abs();
        let two = PrecReal::from_i64(2, digits);
        let re = ((&r + &self.re) / &two).sqrt_nonneg();
        let mut im = ((&r - &self.re) / &two).sqrt_nonneg();
        if self.im.is_negative() {
            im = -im;
        }
        PrecComplex { re, im }
    }

    pub fn powu(&self, e: u32) -> Self {
        let digits = self.digits();
        let mut acc = PrecComplex::one(digits);
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

    pub fn to_string_sig(&self, sig: usize) -> String {
        let im = self.im.to_string_sig(sig);
        if im.starts_with('-') {
            format!("{} - {}i", self.re.to_string_sig(sig), &im[1..])
        } else {
            format!("{} + {}i", self.re.to_string_sig(sig), im)
        }
    }
}

impl fmt::Display for PrecComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(self.digits() as usize);
        f.write_str(&self.to_string_sig(sig))
    }
}

impl Add<&PrecComplex> for &PrecComplex {
    type Output = PrecComplex;
    fn add(self, rhs: &PrecComplex) -> PrecComplex {
        PrecComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub<&PrecComplex> for &PrecComplex {
    type Output = PrecComplex;
    fn sub(self, rhs: &PrecComplex) -> PrecComplex {
        PrecComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul<&PrecComplex> for &PrecComplex {
    type Output = PrecComplex;
    fn mul(self, rhs: &PrecComplex) -> PrecComplex {
        PrecComplex {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Div<&PrecComplex> for &PrecComplex {
    type Output = PrecComplex;
    fn div(self, rhs: &PrecComplex) -> PrecComplex {
        let den = rhs.norm_sqr();
        PrecComplex {
            re: &(&(&self.re * &rhs.re) + &(&self.im * &rhs.im)) / &den,
            im: &(&(&self.im * &rhs.re) - &(&self.re * &rhs.im)) / &den,
        }
    }
}

macro_rules! complex_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<PrecComplex> for PrecComplex {
            type Output = PrecComplex;
            fn $method(self, rhs: PrecComplex) -> PrecComplex {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&PrecComplex> for PrecComplex {
            type Output = PrecComplex;
            fn $method(self, rhs: &PrecComplex) -> PrecComplex {
                (&self).$method(rhs)
            }
        }
        impl $trait<PrecComplex> for &PrecComplex {
            type Output = PrecComplex;
            fn $method(self, rhs: PrecComplex) -> PrecComplex {
                self.$method(&rhs)
            }
        }
    };
}

complex_owned!(Add, add);
complex_owned!(Sub, sub);
complex_owned!(Mul, mul);
complex_owned!(Div, div);

impl Neg for PrecComplex {
    type Output = PrecComplex;
    fn neg(self) -> PrecComplex {
        PrecComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &PrecComplex {
    type Output = PrecComplex;
    fn neg(self) -> PrecComplex {
        -(self.clone())
    }
}

/// Square root of a real number at `digits` precision. Negative arguments
/// map to `+i sqrt(|x|)`.
pub fn sqrt_prec(x: &PrecReal, digits: u32) -> PrecComplex {
    let x = x.with_digits(digits);
    if x.is_negative() {
        PrecComplex {
            re: PrecReal::zero(digits),
            im: x.abs().sqrt_nonneg(),
        }
    } else {
        PrecComplex::from_real(x.sqrt_nonneg())
    }
}

/// Conjugating inner product `sum_k conj(u_k) v_k`.
pub fn conj_inner(u: &[PrecComplex], v: &[PrecComplex]) -> Result<PrecComplex, NumericsError> {
    if u.len() != v.len() {
        return Err(NumericsError::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let digits = u
        .iter()
        .chain(v.iter())
        .map(PrecComplex::digits)
        .min()
        .unwrap_or(16);
    let mut acc = PrecComplex::zero(digits);
    for (a, b) in u.iter().zip(v) {
        acc = &acc + &(&a.conj() * b);
    }
    Ok(acc)
}

/// Euclidean norm `sqrt(sum |v_k|^2)`.
pub fn norm2(v: &[PrecComplex]) -> PrecReal {
    let digits = v.iter().map(PrecComplex::digits).min().unwrap_or(16);
    let mut acc = PrecReal::zero(digits);
    for x in v {
        acc = &acc + &x.norm_sqr();
    }
    acc.sqrt_nonneg()
}

/// Rescales `v` to unit conjugating norm.
pub fn normalize(v: &[PrecComplex]) -> Result<Vec<PrecComplex>, NumericsError> {
    let n = norm2(v);
    if n.is_zero() {
        return Err(NumericsError::ZeroVector);
    }
    Ok(v.iter()
        .map(|x| PrecComplex {
            re: &x.re / &n,
            im: &x.im / &n,
        })
        .collect())
}

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<PrecComplex>,
}

impl CMatrix {
    pub fn zeros(n: usize, digits: u32) -> Self {
        CMatrix {
            n,
            data: vec![PrecComplex::zero(digits); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &PrecComplex {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PrecComplex) {
        self.data[i * self.n + j] = v;
    }

    pub fn digits(&self) -> u32 {
        self.data.iter().map(PrecComplex::digits).min().unwrap_or(16)
    }

    pub fn with_digits(&self, digits: u32) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|x| x.with_digits(digits)).collect(),
        }
    }

    /// Equality with the plain (non-conjugated) transpose.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// True when every entry outside the three central diagonals is exactly zero.
    pub fn is_tridiagonal(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| i.abs_diff(j) <= 1 || self.get(i, j).is_zero())
        })
    }

    pub fn frobenius_norm(&self) -> PrecReal {
        norm2(&self.data)
    }

    pub fn mul_vec(&self, v: &[PrecComplex]) -> Vec<PrecComplex> {
        let digits = self.digits();
        (0..self.n)
            .map(|i| {
                let mut acc = PrecComplex::zero(digits);
                for (j, x) in v.iter().enumerate() {
                    acc = &acc + &(self.get(i, j) * x);
                }
                acc
            })
            .collect()
    }

    /// LU factorization with partial pivoting; `None` for an exactly singular matrix.
    pub fn lu(&self) -> Option<LuFactors> {
        self.lu_impl(None)
    }

    /// LU factorization in which exactly vanishing pivots are replaced by `floor`
    /// (the usual device for inverse iteration at a converged eigenvalue).
    pub fn lu_regularized(&self, floor: &PrecReal) -> LuFactors {
        self.lu_impl(Some(floor)).expect("regularized factorization always succeeds")
    }

    fn lu_impl(&self, floor: Option<&PrecReal>) -> Option<LuFactors> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, _) = (k..n)
                .map(|i| (i, a[i * n + k].norm_sqr()))
                .fold((k, PrecReal::zero(16)), |best, cur| if cur.1 > best.1 { cur } else { best });
            if a[p * n + k].is_zero() {
                match floor {
                    Some(f) => a[p * n + k] = PrecComplex::from_real(f.clone()),
                    None => return None,
                }
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                if a[i * n + k].is_zero() {
                    continue;
                }
                let f = &a[i * n + k] / &pivot;
                for j in k + 1..n {
                    let t = &f * &a[k * n + j];
                    a[i * n + j] = &a[i * n + j] - &t;
                }
                a[i * n + k] = f;
            }
        }
        Some(LuFactors {
            n,
            lu: a,
            perm,
            odd: swaps % 2 == 1,
        })
    }

    pub fn determinant(&self) -> PrecComplex {
        match self.lu() {
            Some(f) => f.determinant(),
            None => PrecComplex::zero(self.digits()),
        }
    }
}

/// Packed `PA = LU` factors.
#[derive(Clone, Debug)]
pub struct LuFactors {
    n: usize,
    lu: Vec<PrecComplex>,
    perm: Vec<usize>,
    odd: bool,
}

impl LuFactors {
    pub fn determinant(&self) -> PrecComplex {
        let mut d = self.lu[0].clone();
        for k in 1..self.n {
            d = &d * &self.lu[k * self.n + k];
        }
        if self.odd {
            -d
        } else {
            d
        }
    }

    pub fn solve(&self, b: &[PrecComplex]) -> Vec<PrecComplex> {
        let n = self.n;
        let mut y: Vec<PrecComplex> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                let t = &self.lu[i * n + j] * &y[j];
                y[i] = &y[i] - &t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = &self.lu[i * n + j] * &y[j];
                y[i] = &y[i] - &t;
            }
            y[i] = &y[i] / &self.lu[i * n + i];
        }
        y
    }
}

impl Add<&CMatrix> for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Rational with numerator and denominator given as machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> PrecComplex {
        PrecComplex::from_f64(re, im, 30)
    }

    #[test]
    fn regularized_lu_gives_null_direction() {
        let mut m = CMatrix::zeros(2, 30);
        for i in 0..2 {
            for j in 0..2 {
                m.set(i, j, c(1.0, 0.0));
            }
        }
        assert!(m.lu().is_none());
        let lu = m.lu_regularized(&PrecReal::pow10(-30, 30));
        let x = normalize(&lu.solve(&[c(1.0, 0.0), c(0.5, 0.0)])).unwrap();
        let r = norm2(&m.mul_vec(&x));
        assert!(r.to_f64() < 1e-25);
    }

    #[test]
    fn sqrt_of_perfect_square_is_real() {
        let r = sqrt_prec(&PrecReal::from_i64(4, 30), 30);
        assert_eq!(r.re.to_f64(), 2.0);
        assert!(r.im.is_zero());
    }

    #[test]
    fn sqrt_of_negative_is_positive_imaginary() {
        let r = sqrt_prec(&PrecReal::from_i64(-27, 30), 30);
        assert!(r.re.is_zero());
        let expected = PrecReal::parse("5.19615242270663188058233902451", 30).unwrap();
        assert!((&r.im - &expected).abs().to_f64() < 1e-28);
        let back = &r * &r;
        assert!((&back.re + &PrecReal::from_i64(27, 30)).abs().to_f64() < 1e-27);
    }

    #[test]
    fn sqrt_34_at_forty_digits() {
        let r = sqrt_prec(&PrecReal::from_i64(34, 40), 40);
        assert_eq!(&r.re.to_string_sig(34), "5.830951894845300470874152877545583");
        let r_alpha = &PrecReal::from_i64(-59, 40) + &(&PrecReal::from_i64(10, 40) * &r.re);
        assert!((r_alpha.to_f64() + 0.69048).abs() < 1e-5);
    }

    #[test]
    fn inner_product_examples() {
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let e2 = vec![c(0.0, 0.0), c(1.0, 0.0)];
        assert!(conj_inner(&e1, &e2).unwrap().is_zero());
        let ii = vec![c(0.0, 1.0), c(0.0, 0.0)];
        let p = conj_inner(&ii, &ii).unwrap();
        assert_eq!(p.re.to_f64(), 1.0);
        assert!(p.im.is_zero());
        let u = normalize(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let v = normalize(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let p = conj_inner(&u, &v).unwrap();
        assert!((p.re.to_f64() - 0.5).abs() < 1e-25);
        assert!((p.im.to_f64() - 0.5).abs() < 1e-25);
        assert!((p.abs().to_f64() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            conj_inner(&e1, &[c(1.0, 0.0)]),
            Err(NumericsError::DimensionMismatch { left: 2, right: 1 })
        );
    }

    #[test]
    fn normalize_examples() {
        let r = normalize(&[c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!((r[0].re.to_f64() - 0.6).abs() < 1e-25);
        assert!((r[1].re.to_f64() - 0.8).abs() < 1e-25);
        let r = normalize(&[c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(r[0].abs().to_f64(), 1.0);
        assert!(r[1].is_zero());
        let r = normalize(&vec![c(1.0, 0.0); 4]).unwrap();
        assert!(r.iter().all(|x| (x.abs().to_f64() - 0.5).abs() < 1e-25));
        assert_eq!(normalize(&[c(0.0, 0.0)]), Err(NumericsError::ZeroVector));
    }

    #[test]
    fn precision_is_minimum_of_operands() {
        let a = PrecReal::from_i64(1, 10);
        let b = PrecReal::from_i64(3, 50);
        assert_eq!((&a / &b).digits(), 10);
    }

    #[test]
    fn formatting() {
        assert_eq!(PrecReal::from_i64(-48, 20).to_string_sig(10), "-48");
        assert_eq!(PrecReal::parse("0.0104", 20).unwrap().to_string_sig(3), "0.0104");
        assert_eq!(PrecReal::parse("1.4e-13", 20).unwrap().to_string_sig(2), "1.4e-13");
        assert_eq!(
            PrecReal::parse("673.7717872", 20).unwrap().to_string_sig(10),
            "673.7717872"
        );
    }

    fn rational_strategy() -> impl Strategy<Value = Rational> {
        (-1_000_000i64..1_000_000, 1i64..100_000).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn roundtrip_string_is_exact(num in -10i64.pow(12)..10i64.pow(12), den in 1i64..10i64.pow(9), d in 20u32..90) {
            let x = PrecReal::from_rational(&Rational::from((num, den)), d);
            let y = PrecReal::parse(&x.to_roundtrip_string(), d).unwrap();
            prop_assert_eq!(x.float(), y.float());
        }

        #[test]
        fn rational_sum_is_exact(a in rational_strategy(), b in rational_strategy()) {
            let (an, ad) = (a.numer().clone(), a.denom().clone());
            let (bn, bd) = (b.numer().clone(), b.denom().clone());
            let via_cross = Rational::from((an * &bd + bn * &ad, ad * bd));
            prop_assert_eq!(Rational::from(&a + &b) - via_cross, Rational::from(0));
        }

        #[test]
        fn sqrt_relative_error(x in 1e-6f64..1e6, d in prop::sample::select(vec![10u32, 20, 40])) {
            let xr = PrecReal::from_f64(x, d);
            let r = sqrt_prec(&xr, d);
            let err = (&(&r * &r).re - &xr).abs() / xr.clone();
            prop_assert!(err.to_f64() <= 10f64.powi(2 - d as i32));
        }

        #[test]
        fn cauchy_schwarz(v in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..6),
                          w in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 6)) {
            let u: Vec<PrecComplex> = v.iter().map(|&(a, b)| c(a, b)).collect();
            let x: Vec<PrecComplex> = w.iter().take(u.len()).map(|&(a, b)| c(a, b)).collect();
            let lhs = conj_inner(&u, &x).unwrap().abs();
            let rhs = (&conj_inner(&u, &u).unwrap().re * &conj_inner(&x, &x).unwrap().re).sqrt_nonneg();
            prop_assert!(lhs.to_f64() <= rhs.to_f64() * (1.0 + 1e-20) + 1e-25);
        }
    }
}
