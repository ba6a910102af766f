//! Spectrum of a fixed parameter tuple as a function of `z`: sampling,
//! EP2 boundary location and per-interval census of energy types.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{PrecComplex, PrecReal, Rational};
use crate::poly::{discriminant, MultiPoly, PolyError};
use crate::realroots::{complex_roots, real_roots, RootError, UniPoly};
use crate::secular::{derive_secular, ModelSpec, SecularError, SecularSystem, Z};
use crate::solve::{ParamValue, ParameterTuple, RealityClass};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpectrumError {
    #[error("tuple is on a complex branch; spectra need a real tuple")]
    ComplexTuple,
    #[error("tuple does not assign `{0}`")]
    MissingValue(String),
    #[error("empty or inverted z window [{0}, {1}]")]
    BadWindow(f64, f64),
    #[error("sweep needs at least 2 grid points")]
    GridTooSmall,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error(transparent)]
    Secular(#[from] SecularError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootClass {
    RealPositive,
    RealNegative,
    /// `|s|` below the reality threshold; both energies vanish.
    Zero,
    ComplexPairMember,
}

impl RootClass {
    pub fn code(self) -> &'static str {
        match self {
            RootClass::RealPositive => "R+",
            RootClass::RealNegative => "R-",
            RootClass::Zero => "0",
            RootClass::ComplexPairMember => "C",
        }
    }
}

/// Number of energies of each type.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub real: usize,
    pub imaginary: usize,
    pub complex: usize,
}

impl Census {
    pub fn total(&self) -> usize {
        self.real + self.imaginary + self.complex
    }
}

impl std::fmt::Display for Census {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.real, self.imaginary, self.complex)
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumSample {
    pub z: PrecReal,
    /// Roots in `s`, sorted by real part then imaginary part.
    pub roots: Vec<PrecComplex>,
    pub classes: Vec<RootClass>,
    pub zero_mode: bool,
    pub ambiguous: bool,
    pub digits: u32,
}

impl SpectrumSample {
    pub fn census(&self) -> Census {
        let mut c = Census::default();
        for k in &self.classes {
            match k {
                RootClass::RealPositive | RootClass::Zero => c.real += 2,
                RootClass::RealNegative => c.imaginary += 2,
                RootClass::ComplexPairMember => c.complex += 2,
            }
        }
        if self.zero_mode {
            c.real += 1;
        }
        c
    }

    pub fn real_root_count(&self) -> usize {
        self.classes.iter().filter(|c| **c != RootClass::ComplexPairMember).count()
    }

    /// Energies `±sqrt(s_k)` (and the zero mode for odd dimension).
    pub fn energies(&self) -> Vec<PrecComplex> {
        let mut out = Vec::with_capacity(2 * self.roots.len() + 1);
        for s in &self.roots {
            let e = s.sqrt();
            out.push(-&e);
            out.push(e);
        }
        if self.zero_mode {
            out.push(PrecComplex::zero(self.digits));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    /// With growing `z`, two real roots `s` collide and leave the real axis.
    MergeAndComplexify,
    /// With growing `z`, a complex pair lands on the real axis and splits.
    Unfolding,
    /// Two real roots touch without changing the census.
    Touch,
    /// A root `s` crosses zero: a real energy pair turns imaginary.
    RealCrossingZero,
    /// All roots vanish simultaneously.
    Epn,
}

impl BoundaryKind {
    pub fn label(self) -> &'static str {
        match self {
            BoundaryKind::MergeAndComplexify => "merge",
            BoundaryKind::Unfolding => "unfold",
            BoundaryKind::Touch => "touch",
            BoundaryKind::RealCrossingZero => "zero-cross",
            BoundaryKind::Epn => "EPN",
        }
    }
}

#[derive(Clone, Debug)]
pub struct EP2Boundary {
    pub z: PrecReal,
    /// Value of the colliding roots (0 for zero crossings and the EPN point).
    pub s: PrecReal,
    pub kind: BoundaryKind,
    /// Order of the root of the discriminant (or constant term) at `z`.
    pub multiplicity: usize,
    /// False when the `z` polynomial came from numeric tuple values.
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct IntervalCensus {
    pub lower: f64,
    pub upper: f64,
    pub census: Census,
    /// Census agrees at three probe points inside the interval.
    pub consistent: bool,
}

#[derive(Clone, Debug)]
pub struct IntervalReport {
    pub boundaries: Vec<EP2Boundary>,
    pub intervals: Vec<IntervalCensus>,
}

/// Secular polynomial specialized to a tuple: coefficients `P_m` as polynomials in `z`.
#[derive(Clone, Debug)]
pub struct SpectralFamily {
    model: ModelSpec,
    /// `coeffs[m-1][k]` is the `z^k` coefficient of `P_m`.
    coeffs: Vec<Vec<PrecReal>>,
    exact: Option<Vec<UniPoly>>,
    disc: ZPoly,
    constant: ZPoly,
    digits: u32,
}

#[derive(Clone, Debug)]
enum ZPoly {
    Exact(UniPoly),
    Numeric(Vec<PrecReal>),
}

fn specialize(
    p: &MultiPoly,
    tuple: &ParameterTuple,
    digits: u32,
) -> Result<(Vec<PrecReal>, Option<UniPoly>), SpectrumError> {
    let by_z = p.coefficients_in(Z)?;
    if let Some(exact) = tuple.exact_map() {
        let qs: Vec<Rational> = by_z.iter().map(|c| c.eval_rational(&exact)).collect::<Result<_, _>>()?;
        let nums = qs.iter().map(|q| PrecReal::from_rational(q, digits)).collect();
        return Ok((nums, Some(UniPoly::new(qs))));
    }
    let mut vals: HashMap<String, PrecComplex> = HashMap::new();
    for (n, v) in tuple.names.iter().zip(&tuple.values) {
        if matches!(v, ParamValue::Complex(_)) {
            return Err(SpectrumError::ComplexTuple);
        }
        vals.insert(n.clone(), v.approx(digits));
    }
    let nums = by_z
        .iter()
        .map(|c| {
            for name in c.support() {
                if !vals.contains_key(&name) {
                    return Err(SpectrumError::MissingValue(name));
                }
            }
            Ok(c.eval_prec(&vals, digits)?.re)
        })
        .collect::<Result<_, SpectrumError>>()?;
    Ok((nums, None))
}

impl SpectralFamily {
    /// Family for a `dimension`-sized model; odd and even sizes share parameter counts.
    pub fn new(dimension: usize, tuple: &ParameterTuple, digits: u32) -> Result<Self, SpectrumError> {
        let model = ModelSpec::new(dimension)?;
        Self::for_model(&model, tuple, digits)
    }

    fn for_model(model: &ModelSpec, tuple: &ParameterTuple, digits: u32) -> Result<Self, SpectrumError> {
        if tuple.reality == RealityClass::Complex {
            return Err(SpectrumError::ComplexTuple);
        }
        let sys: SecularSystem = derive_secular(model)?;
        let params = model.param_vars();
        let zvars = crate::poly::VarSet::new(params.names().iter().cloned().chain([Z.to_string()]))?;
        let mut coeffs = Vec::new();
        let mut exact = Vec::new();
        for p in sys.coefficients() {
            let (c, e) = specialize(&p.with_vars(&zvars)?, tuple, digits)?;
            coeffs.push(c);
            if let Some(e) = e {
                exact.push(e);
            }
        }
        let is_exact = exact.len() == coeffs.len();
        let disc_sym = if model.half_size() >= 2 {
            discriminant(sys.secular(), crate::secular::S)?.with_vars(&zvars)?
        } else {
            MultiPoly::one(&zvars)
        };
        let (dn, de) = specialize(&disc_sym, tuple, digits)?;
        let disc = match de {
            Some(e) => ZPoly::Exact(e),
            None => ZPoly::Numeric(dn),
        };
        let constant = if is_exact {
            ZPoly::Exact(exact.last().cloned().unwrap_or_else(|| UniPoly::new(vec![Rational::from(1)])))
        } else {
            ZPoly::Numeric(coeffs.last().cloned().unwrap_or_default())
        };
        Ok(SpectralFamily {
            model: *model,
            coeffs,
            exact: is_exact.then_some(exact),
            disc,
            constant,
            digits,
        })
    }

    pub fn model(&self) -> &ModelSpec {
        &self.model
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Coefficients of the monic polynomial in `s` at `z`, lowest degree first.
    fn s_poly(&self, z: &PrecReal, digits: u32) -> Vec<PrecComplex> {
        let j = self.coeffs.len();
        let mut out = vec![PrecComplex::zero(digits); j + 1];
        out[j] = PrecComplex::one(digits);
        for (m, c) in self.coeffs.iter().enumerate() {
            let mut acc = PrecReal::zero(digits);
            for a in c.iter().rev() {
                acc = &(&acc * z) + &a.with_digits(digits);
            }
            out[j - (m + 1)] = PrecComplex::from_real(acc);
        }
        out
    }

    /// Every `P_m(z)` vanishes relative to the size of its terms.
    pub fn is_epn_point(&self, z: &PrecReal) -> bool {
        let d = self.digits;
        let z = z.with_digits(d);
        let tol = PrecReal::pow10(-(d as i32) / 2, d);
        self.coeffs.iter().all(|c| {
            let mut acc = PrecReal::zero(d);
            let mut mag = PrecReal::zero(d);
            let az = z.abs();
            for a in c.iter().rev() {
                acc = &(&acc * &z) + a;
                mag = &(&mag * &az) + &a.abs();
            }
            acc.abs() <= &tol * &mag.max(PrecReal::one(d))
        })
    }

    /// Roots `s_k(z)` with classification.
    pub fn sample(&self, z: &PrecReal, digits: u32) -> Result<SpectrumSample, SpectrumError> {
        let z = z.with_digits(digits);
        let j = self.coeffs.len();
        let mut roots = if j == 0 {
            Vec::new()
        } else {
            let wd = digits.max(self.digits) + 10;
            let poly = self.s_poly(&z.with_digits(wd), wd);
            let mut r = complex_roots(&poly, wd)?.roots;
            for x in r.iter_mut() {
                *x = polish(&poly, x, wd);
            }
            r
        };
        roots.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
        });
        let scale = roots.iter().map(PrecComplex::abs).fold(PrecReal::one(digits), PrecReal::max);
        let thr = &PrecReal::pow10(10 - digits as i32, digits) * &scale;
        let loose = &thr * &PrecReal::pow10(4, digits);
        let mut ambiguous = false;
        let classes = roots
            .iter()
            .map(|s| {
                let im = s.im.abs();
                if im <= thr {
                    if s.re.abs() <= thr {
                        RootClass::Zero
                    } else if s.re.is_negative() {
                        RootClass::RealNegative
                    } else {
                        RootClass::RealPositive
                    }
                } else {
                    if im <= loose {
                        ambiguous = true;
                    }
                    RootClass::ComplexPairMember
                }
            })
            .collect();
        Ok(SpectrumSample {
            z,
            roots: roots.into_iter().map(|r| r.with_digits(digits)).collect(),
            classes,
            zero_mode: self.model.is_odd(),
            ambiguous,
            digits,
        })
    }

    /// Samples, doubling the precision once if the classification is ambiguous.
    pub fn sample_escalating(&self, z: &PrecReal, digits: u32) -> Result<SpectrumSample, SpectrumError> {
        let s = self.sample(z, digits)?;
        if s.ambiguous {
            self.sample(z, 2 * digits)
        } else {
            Ok(s)
        }
    }

    fn real_roots_of(&self, p: &ZPoly, lo: f64, hi: f64) -> Result<Vec<(PrecReal, usize)>, SpectrumError> {
        let d = self.digits;
        match p {
            ZPoly::Exact(u) => {
                let mut u = u.clone();
                if u.is_zero() {
                    return Ok(Vec::new());
                }
                let mut out = Vec::new();
                let one = UniPoly::new(vec![Rational::from(-1), Rational::from(1)]);
                let mut mult = 0;
                while u.degree() > 0 && u.eval(&Rational::from(1)) == 0 {
                    u = u.div_rem(&one).0;
                    mult += 1;
                }
                if mult > 0 && (lo..=hi).contains(&1.0) {
                    out.push((PrecReal::one(d), mult));
                }
                let sf = u.square_free();
                for r in real_roots(&sf, d)? {
                    let x = r.value.to_f64();
                    if x >= lo && x <= hi {
                        let mut m = 0;
                        let mut q = u.clone();
                        let lin = match &r.exact {
                            Some(e) => Some(UniPoly::new(vec![Rational::from(-e), Rational::from(1)])),
                            None => None,
                        };
                        if let Some(l) = lin {
                            while q.degree() > 0 && q.div_rem(&l).1.is_zero() {
                                q = q.div_rem(&l).0;
                                m += 1;
                            }
                        }
                        out.push((r.value, m.max(1)));
                    }
                }
                out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                Ok(out)
            }
            ZPoly::Numeric(c) => {
                let mut c: Vec<PrecReal> = c.clone();
                let mag = |c: &[PrecReal]| c.iter().map(PrecReal::abs).fold(PrecReal::zero(d), PrecReal::max);
                let tiny = PrecReal::pow10(-(d as i32) / 2, d);
                let m0 = mag(&c);
                while c.len() > 1 && c.last().unwrap().abs() <= &tiny * &m0 {
                    c.pop();
                }
                if c.len() <= 1 {
                    return Ok(Vec::new());
                }
                // deflate the EPN point z = 1
                let mut mult = 0;
                loop {
                    let (q, r) = synthetic_division(&c);
                    if c.len() > 1 && r.abs() <= &tiny * &mag(&c) {
                        c = q;
                        mult += 1;
                    } else {
                        break;
                    }
                }
                let mut out = Vec::new();
                if mult > 0 && (lo..=hi).contains(&1.0) {
                    out.push((PrecReal::one(d), mult));
                }
                if c.len() > 1 {
                    let cc: Vec<PrecComplex> = c.iter().map(|x| PrecComplex::from_real(x.clone())).collect();
                    let roots = complex_roots(&cc, d)?.roots;
                    let tol = PrecReal::pow10(-(d as i32) / 3, d);
                    let mut reals: Vec<PrecReal> = Vec::new();
                    for r in roots {
                        let polished = polish(&cc, &r, d);
                        if polished.im.abs() <= &tol * &polished.abs().max(PrecReal::one(d)) {
                            let x = polished.re;
                            let xf = x.to_f64();
                            if xf >= lo && xf <= hi {
                                reals.push(x);
                            }
                        }
                    }
                    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    // merge numerically repeated roots
                    let mut i = 0;
                    while i < reals.len() {
                        let mut k = i + 1;
                        while k < reals.len()
                            && (&reals[k] - &reals[i]).abs() <= &tol * &reals[i].abs().max(PrecReal::one(d))
                        {
                            k += 1;
                        }
                        out.push((reals[i].clone(), k - i));
                        i = k;
                    }
                }
                out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                Ok(out)
            }
        }
    }

    /// Discriminant zeros (root collisions) and constant-term zeros (`s = 0` crossings) in `[lo, hi]`.
    pub fn ep2_boundaries(&self, lo: f64, hi: f64) -> Result<Vec<EP2Boundary>, SpectrumError> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(SpectrumError::BadWindow(lo, hi));
        }
        let d = self.digits;
        let certified = self.is_exact();
        let disc = self.real_roots_of(&self.disc, lo, hi)?;
        let zeros = self.real_roots_of(&self.constant, lo, hi)?;
        let one = PrecReal::one(d);
        let mut raw: Vec<(PrecReal, usize, bool)> = Vec::new();
        for (z, m) in disc {
            raw.push((z, m, true));
        }
        for (z, m) in zeros {
            if z == one {
                continue;
            }
            raw.push((z, m, false));
        }
        raw.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let points: Vec<f64> = raw.iter().map(|r| r.0.to_f64()).collect();
        let mut out = Vec::new();
        for (i, (z, mult, from_disc)) in raw.iter().enumerate() {
            let zf = points[i];
            if *z == one && *from_disc && self.is_epn_point(z) {
                out.push(EP2Boundary {
                    z: z.clone(),
                    s: PrecReal::zero(d),
                    kind: BoundaryKind::Epn,
                    multiplicity: *mult,
                    certified,
                });
                continue;
            }
            if !from_disc {
                out.push(EP2Boundary {
                    z: z.clone(),
                    s: PrecReal::zero(d),
                    kind: BoundaryKind::RealCrossingZero,
                    multiplicity: *mult,
                    certified,
                });
                continue;
            }
            let mut gap = 1e-4 * zf.abs().max(1.0);
            for (k, p) in points.iter().enumerate() {
                if k != i && (p - zf).abs() > 0.0 {
                    gap = gap.min(0.25 * (p - zf).abs());
                }
            }
            let delta = PrecReal::from_f64(gap, d);
            let left = self.sample_escalating(&(z - &delta), d)?;
            let right = self.sample_escalating(&(z + &delta), d)?;
            let kind = match right.real_root_count().cmp(&left.real_root_count()) {
                std::cmp::Ordering::Less => BoundaryKind::MergeAndComplexify,
                std::cmp::Ordering::Greater => BoundaryKind::Unfolding,
                std::cmp::Ordering::Equal => BoundaryKind::Touch,
            };
            let at = self.sample(z, d)?;
            out.push(EP2Boundary {
                z: z.clone(),
                s: colliding_value(&at.roots, d),
                kind,
                multiplicity: *mult,
                certified,
            });
        }
        Ok(out)
    }

    /// Samples on a uniform grid, densified within two grid steps of every boundary.
    pub fn sweep(
        &self,
        lo: f64,
        hi: f64,
        grid: usize,
        digits: u32,
    ) -> Result<(Vec<SpectrumSample>, IntervalReport), SpectrumError> {
        if grid < 2 {
            return Err(SpectrumError::GridTooSmall);
        }
        if !(lo < hi) {
            return Err(SpectrumError::BadWindow(lo, hi));
        }
        let boundaries = self.ep2_boundaries(lo, hi)?;
        let h = (hi - lo) / (grid - 1) as f64;
        let mut zs: Vec<Rational> = (0..grid)
            .map(|k| {
                let t = Rational::from(k) / Rational::from(grid - 1);
                Rational::from_f64(lo).unwrap() + t * Rational::from_f64(hi - lo).unwrap()
            })
            .collect();
        for b in &boundaries {
            let zb = b.z.to_rational();
            let step = Rational::from_f64(h / 4.0).unwrap();
            for k in -8i32..=8 {
                if k == 0 {
                    continue;
                }
                let z = Rational::from(&zb + Rational::from(k) * &step);
                if z >= Rational::from_f64(lo).unwrap() && z <= Rational::from_f64(hi).unwrap() {
                    zs.push(z);
                }
            }
        }
        zs.sort();
        zs.dedup();
        let samples: Vec<SpectrumSample> = zs
            .par_iter()
            .map(|z| self.sample_escalating(&PrecReal::from_rational(z, digits), digits))
            .collect::<Result<_, _>>()?;
        let report = self.interval_report(lo, hi, boundaries, digits)?;
        Ok((samples, report))
    }

    /// Census between consecutive boundaries, checked at three probe points.
    pub fn interval_report(
        &self,
        lo: f64,
        hi: f64,
        boundaries: Vec<EP2Boundary>,
        digits: u32,
    ) -> Result<IntervalReport, SpectrumError> {
        let mut edges = vec![lo];
        edges.extend(boundaries.iter().map(|b| b.z.to_f64()).filter(|z| *z > lo && *z < hi));
        edges.push(hi);
        edges.dedup();
        let intervals = edges
            .windows(2)
            .map(|w| -> Result<IntervalCensus, SpectrumError> {
                let probes = [0.25, 0.5, 0.75].map(|t| w[0] + t * (w[1] - w[0]));
                let cs: Vec<Census> = probes
                    .iter()
                    .map(|z| Ok(self.sample_escalating(&PrecReal::from_f64(*z, digits), digits)?.census()))
                    .collect::<Result<_, SpectrumError>>()?;
                Ok(IntervalCensus {
                    lower: w[0],
                    upper: w[1],
                    census: cs[1],
                    consistent: cs.iter().all(|c| *c == cs[1]),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(IntervalReport { boundaries, intervals })
    }
}

fn synthetic_division(c: &[PrecReal]) -> (Vec<PrecReal>, PrecReal) {
    // divide by (z - 1); c is lowest degree first
    let n = c.len() - 1;
    let mut q = vec![PrecReal::zero(c[0].digits()); n];
    let mut acc = c[n].clone();
    for k in (0..n).rev() {
        q[k] = acc.clone();
        acc = &acc + &c[k];
    }
    (q, acc)
}

fn polish(coeffs: &[PrecComplex], x: &PrecComplex, digits: u32) -> PrecComplex {
    let mut x = x.with_digits(digits);
    for _ in 0..4 {
        let mut p = PrecComplex::zero(digits);
        let mut dp = PrecComplex::zero(digits);
        for a in coeffs.iter().rev() {
            dp = &(&dp * &x) + &p;
            p = &(&p * &x) + a;
        }
        if dp.is_zero() || p.is_zero() {
            break;
        }
        x = &x - &(&p / &dp);
    }
    x
}

fn colliding_value(roots: &[PrecComplex], digits: u32) -> PrecReal {
    let mut best: Option<(PrecReal, PrecReal)> = None;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = (&roots[i] - &roots[j]).abs();
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                let mid = &(&roots[i].re + &roots[j].re) / &PrecReal::from_i64(2, digits);
                best = Some((d, mid));
            }
        }
    }
    best.map(|b| b.1).unwrap_or_else(|| PrecReal::zero(digits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::refine_seed;
    use crate::secular::constraints_at;

    fn a_tuple(digits: u32) -> ParameterTuple {
        let m = ModelSpec::new(6).unwrap();
        let sys = constraints_at(&derive_secular(&m).unwrap(), &Rational::from(1)).unwrap();
        let seed: Vec<PrecReal> = ["673.7717872", "-253.5822865", "-65.80360706"]
            .iter()
            .map(|t| PrecReal::parse(t, 30).unwrap())
            .collect();
        refine_seed(&sys, &m.param_names(), &seed, digits).unwrap()
    }

    fn bh6() -> ParameterTuple {
        let names = ModelSpec::new(6).unwrap().param_names();
        ParameterTuple::from_exact(&names, &[9.into(), 8.into(), 5.into()])
    }

    #[test]
    fn bh_spectrum_closed_form() {
        let fam = SpectralFamily::new(6, &bh6(), 40).unwrap();
        let s = fam.sample(&PrecReal::parse("0.75", 40).unwrap(), 40).unwrap();
        let want = [0.25, 2.25, 6.25];
        for (r, w) in s.roots.iter().zip(want) {
            assert!((r.re.to_f64() - w).abs() < 1e-30 && r.im.abs().to_f64() < 1e-30);
        }
        assert_eq!(s.census(), Census { real: 6, imaginary: 0, complex: 0 });
    }

    #[test]
    fn a_tuple_at_and_past_epn() {
        let t = a_tuple(70);
        let fam = SpectralFamily::new(6, &t, 90).unwrap();
        let at = fam.sample(&PrecReal::one(40), 40).unwrap();
        assert!(at.roots.iter().all(|r| r.abs() <= PrecReal::pow10(-20, 40)));
        let past = fam.sample(&PrecReal::parse("1.5", 40).unwrap(), 40).unwrap();
        assert_eq!(past.classes.iter().filter(|c| **c == RootClass::RealNegative).count(), 1);
    }

    #[test]
    fn bh_sweep_single_interval() {
        let fam = SpectralFamily::new(6, &bh6(), 40).unwrap();
        let (samples, rep) = fam.sweep(-1.0, 0.99, 12, 30).unwrap();
        assert!(samples.len() >= 12);
        assert_eq!(rep.intervals.len(), 1);
        assert_eq!(rep.intervals[0].census, Census { real: 6, imaginary: 0, complex: 0 });
    }

    #[test]
    fn census_conserves_dimension() {
        let t = a_tuple(40);
        let fam = SpectralFamily::new(6, &t, 60).unwrap();
        for z in [-600.0, -100.0, 0.5, 5.0, 14.0, 100.0, 1000.0] {
            let s = fam.sample(&PrecReal::from_f64(z, 40), 40).unwrap();
            assert_eq!(s.census().total(), 6, "z = {z}");
            let nonreal: Vec<_> = s.roots.iter().filter(|r| r.im.abs().to_f64() > 1e-20).collect();
            assert_eq!(nonreal.len() % 2, 0);
        }
    }
}
