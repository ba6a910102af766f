//! Tridiagonal doubly-symmetric Hamiltonians and their secular polynomials.
//!
//! For dimension `N` with half-size `J = N / 2`, the diagonal is
//! `(2k - N + 1) i sqrt(z)` and the coupling between rows `j-1` and `j` is the
//! square root of a parameter. Parameters are named innermost-first: `A`
//! couples the two central rows, the last one couples the outermost rows.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{sqrt_prec, CMatrix, PrecComplex, PrecReal, Rational};
use crate::poly::{MultiPoly, PolyError, SubstValue, VarSet};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SecularError {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("parameter `{0}` has no value")]
    MissingParameter(String),
    #[error("internal parity check failed: {0}")]
    ParityViolation(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Name of the spectral-parameter variable in every symbolic object.
pub const Z: &str = "z";
/// Squared energy `s = E^2`.
pub const S: &str = "s";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelSpec {
    n: usize,
}

impl ModelSpec {
    pub fn new(n: usize) -> Result<Self, SecularError> {
        if n < 2 {
            return Err(SecularError::InvalidDimension(n));
        }
        Ok(ModelSpec { n })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn half_size(&self) -> usize {
        self.n / 2
    }

    pub fn is_odd(&self) -> bool {
        self.n % 2 == 1
    }

    /// `A, B, C, ...`, innermost first.
    pub fn param_names(&self) -> Vec<String> {
        (0..self.half_size()).map(param_name).collect()
    }

    pub fn param_vars(&self) -> Arc<VarSet> {
        VarSet::new(self.param_names()).expect("parameter names are distinct")
    }

    /// Parameter variables followed by `z` and `s`.
    pub fn secular_vars(&self) -> Arc<VarSet> {
        let mut names = self.param_names();
        names.push(Z.to_string());
        names.push(S.to_string());
        VarSet::new(names).expect("parameter names are distinct")
    }

    /// Index into [`ModelSpec::param_names`] of the coupling between rows `j-1` and `j`.
    pub fn coupling_param(&self, j: usize) -> usize {
        assert!((1..self.n).contains(&j), "coupling index out of range");
        self.half_size() - j.min(self.n - j)
    }

    /// Integer multiplying `i sqrt(z)` on diagonal entry `k`.
    pub fn diagonal_coeff(&self, k: usize) -> i64 {
        2 * k as i64 - self.n as i64 + 1
    }
}

fn param_name(i: usize) -> String {
    let letters = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    if i < letters.len() {
        (letters[i] as char).to_string()
    } else {
        format!("P{i}")
    }
}

/// Coupling values of the Bose-Hubbard member: the coupling `j` carries `j (N - j)`.
pub fn bh_tuple(n: usize) -> Result<Vec<(String, Rational)>, SecularError> {
    let m = ModelSpec::new(n)?;
    let j_half = m.half_size();
    Ok(m
        .param_names()
        .into_iter()
        .enumerate()
        .map(|(i, name)| {
            let j = j_half - i;
            (name, Rational::from((j * (n - j)) as u64))
        })
        .collect())
}

/// Numeric Hamiltonian at spectral parameter `z`.
pub fn build_matrix(
    model: &ModelSpec,
    params: &HashMap<String, PrecReal>,
    z: &PrecReal,
    digits: u32,
) -> Result<CMatrix, SecularError> {
    let n = model.dimension();
    let names = model.param_names();
    let mut roots = Vec::with_capacity(names.len());
    for name in &names {
        let v = params
            .get(name)
            .ok_or_else(|| SecularError::MissingParameter(name.clone()))?;
        roots.push(sqrt_prec(v, digits));
    }
    let i_sqrt_z = &PrecComplex::i(digits) * &sqrt_prec(z, digits);
    let mut h = CMatrix::zeros(n, digits);
    for k in 0..n {
        let d = i_sqrt_z.scale(&PrecReal::from_i64(model.diagonal_coeff(k), digits));
        h.set(k, k, d);
    }
    for j in 1..n {
        let c = roots[model.coupling_param(j)].clone();
        h.set(j - 1, j, c.clone());
        h.set(j, j - 1, c);
    }
    Ok(h)
}

/// Secular polynomial `s^J + P_1 s^(J-1) + ... + P_J` of a model.
#[derive(Clone, Debug, PartialEq)]
pub struct SecularSystem {
    model: ModelSpec,
    vars: Arc<VarSet>,
    secular: MultiPoly,
    coefficients: Vec<MultiPoly>,
}

impl SecularSystem {
    pub fn model(&self) -> &ModelSpec {
        &self.model
    }

    /// Variables `params..., z, s`.
    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn secular(&self) -> &MultiPoly {
        &self.secular
    }

    /// `P_1 .. P_J`, each free of `s`.
    pub fn coefficients(&self) -> &[MultiPoly] {
        &self.coefficients
    }

    /// True when a zero mode `E = 0` was factored out.
    pub fn has_zero_mode(&self) -> bool {
        self.model.is_odd()
    }

    /// Portable text form of the coefficients (canonical polynomial syntax).
    pub fn to_record(&self) -> SecularRecord {
        SecularRecord {
            dimension: self.model.dimension(),
            variables: self.vars.names().to_vec(),
            coefficients: self.coefficients.iter().map(|p| p.to_string()).collect(),
        }
    }

    pub fn from_record(rec: &SecularRecord) -> Result<Self, SecularError> {
        let model = ModelSpec::new(rec.dimension)?;
        let vars = model.secular_vars();
        if rec.variables != vars.names() {
            return Err(PolyError::VarSetMismatch(rec.variables.join(","), vars.to_string()).into());
        }
        let coefficients = rec
            .coefficients
            .iter()
            .map(|t| MultiPoly::parse(t, &vars))
            .collect::<Result<Vec<_>, _>>()?;
        let secular = assemble(&vars, &coefficients)?;
        Ok(SecularSystem {
            model,
            vars,
            secular,
            coefficients,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecularRecord {
    pub dimension: usize,
    pub variables: Vec<String>,
    pub coefficients: Vec<String>,
}

fn assemble(vars: &Arc<VarSet>, coefficients: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
    let s = MultiPoly::var(vars, S)?;
    let j = coefficients.len() as u32;
    let mut acc = s.pow(j);
    for (m, p) in coefficients.iter().enumerate() {
        acc = &acc + &(p * &s.pow(j - 1 - m as u32));
    }
    Ok(acc)
}

/// Rewrites `w^2 -> -z`.
fn reduce_w(p: &MultiPoly, w: usize, z: usize) -> MultiPoly {
    MultiPoly::from_terms(
        p.vars(),
        p.terms().iter().map(|(e, c)| {
            let mut e2 = e.clone();
            let half = e2[w] / 2;
            e2[w] %= 2;
            e2[z] += half;
            let c = if half % 2 == 1 { Rational::from(-c) } else { c.clone() };
            (e2, c)
        }),
    )
}

/// Exact characteristic-polynomial expansion by the tridiagonal recurrence
/// `p_k = (E - d_k) p_(k-1) - c_k^2 p_(k-2)`, with `i sqrt(z)` adjoined as `w`.
pub fn derive_secular(model: &ModelSpec) -> Result<SecularSystem, SecularError> {
    let n = model.dimension();
    let mut names = model.param_names();
    names.extend([Z.to_string(), "w".to_string(), "e".to_string()]);
    let work = VarSet::new(names)?;
    let np = model.half_size();
    let (zi, wi, ei) = (np, np + 1, np + 2);
    let e = MultiPoly::var(&work, "e")?;
    let w = MultiPoly::var(&work, "w")?;
    let params: Vec<MultiPoly> = model
        .param_names()
        .iter()
        .map(|name| MultiPoly::var(&work, name))
        .collect::<Result<_, _>>()?;

    let mut prev2 = MultiPoly::one(&work);
    let mut prev = &e - &w.scale(&Rational::from(model.diagonal_coeff(0)));
    for k in 1..n {
        let dk = w.scale(&Rational::from(model.diagonal_coeff(k)));
        let c2 = &params[model.coupling_param(k)];
        let next = &(&(&e - &dk) * &prev) - &(c2 * &prev2);
        prev2 = prev;
        prev = reduce_w(&next, wi, zi);
    }
    let mut chi = prev;
    if let Some((exps, _)) = chi.terms().iter().find(|(x, _)| x[wi] % 2 == 1) {
        return Err(SecularError::ParityViolation(format!(
            "odd power of i*sqrt(z) survives in term with exponents {exps:?}"
        )));
    }
    if model.is_odd() {
        chi = chi.div_exact(&e).map_err(|_| {
            SecularError::ParityViolation("characteristic polynomial not divisible by E".into())
        })?;
    }
    if let Some((exps, _)) = chi.terms().iter().find(|(x, _)| x[ei] % 2 == 1) {
        return Err(SecularError::ParityViolation(format!(
            "odd power of E survives in term with exponents {exps:?}"
        )));
    }
    let vars = model.secular_vars();
    let si = np + 1;
    let secular = MultiPoly::from_terms(
        &vars,
        chi.terms().iter().map(|(x, c)| {
            let mut y = vec![0; vars.len()];
            y[..=zi].copy_from_slice(&x[..=zi]);
            y[si] = x[ei] / 2;
            (y, c.clone())
        }),
    );
    let by_s = secular.coefficients_in(S)?;
    let j = model.half_size();
    debug_assert_eq!(by_s.len(), j + 1);
    let coefficients = (1..=j).map(|m| by_s[j - m].clone()).collect();
    Ok(SecularSystem {
        model: *model,
        vars,
        secular,
        coefficients,
    })
}

/// `[P_1(z0), ..., P_J(z0)]` as polynomials in the parameters alone.
pub fn constraints_at(system: &SecularSystem, z0: &Rational) -> Result<Vec<MultiPoly>, SecularError> {
    let pv = system.model.param_vars();
    system
        .coefficients
        .iter()
        .map(|p| {
            let q = p.substitute(Z, &SubstValue::Rational(z0.clone()))?;
            Ok(q.with_vars(&pv)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;
    use proptest::prelude::*;

    fn assign(pairs: &[(String, Rational)], digits: u32) -> HashMap<String, PrecReal> {
        pairs
            .iter()
            .map(|(k, v)| (k.clone(), PrecReal::from_rational(v, digits)))
            .collect()
    }

    #[test]
    fn bh_tuples() {
        let vals = |n| -> Vec<i64> {
            bh_tuple(n).unwrap().iter().map(|(_, v)| v.to_f64() as i64).collect()
        };
        assert_eq!(vals(6), vec![9, 8, 5]);
        assert_eq!(vals(7), vec![12, 10, 6]);
        assert_eq!(vals(8), vec![16, 15, 12, 7]);
        assert_eq!(vals(9), vec![20, 18, 14, 8]);
        assert_eq!(vals(2), vec![1]);
    }

    #[test]
    fn coupling_layout_is_doubly_symmetric() {
        let m6 = ModelSpec::new(6).unwrap();
        let idx: Vec<_> = (1..6).map(|j| m6.coupling_param(j)).collect();
        assert_eq!(idx, vec![2, 1, 0, 1, 2]);
        let m7 = ModelSpec::new(7).unwrap();
        let idx: Vec<_> = (1..7).map(|j| m7.coupling_param(j)).collect();
        assert_eq!(idx, vec![2, 1, 0, 0, 1, 2]);
        assert!(ModelSpec::new(1).is_err());
    }

    #[test]
    fn two_by_two_matrix() {
        let m = ModelSpec::new(2).unwrap();
        let g = 0.6f64;
        let h = build_matrix(
            &m,
            &assign(&bh_tuple(2).unwrap(), 30),
            &PrecReal::from_f64(g * g, 30),
            30,
        )
        .unwrap();
        assert!((h.get(0, 0).im.to_f64() + g).abs() < 1e-15);
        assert!(h.get(0, 0).re.is_zero());
        assert!((h.get(1, 1).im.to_f64() - g).abs() < 1e-15);
        assert_eq!(h.get(0, 1).re.to_f64(), 1.0);
        assert!(h.is_symmetric());
    }

    #[test]
    fn six_site_bh_at_zero() {
        let m = ModelSpec::new(6).unwrap();
        let h = build_matrix(&m, &assign(&bh_tuple(6).unwrap(), 30), &PrecReal::zero(30), 30).unwrap();
        let c: Vec<f64> = (1..6).map(|j| h.get(j - 1, j).re.to_f64()).collect();
        let want = [5f64.sqrt(), 8f64.sqrt(), 3.0, 8f64.sqrt(), 5f64.sqrt()];
        for (a, b) in c.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(h.is_tridiagonal() && h.is_symmetric());
    }

    #[test]
    fn negative_parameter_gives_imaginary_coupling() {
        let m = ModelSpec::new(4).unwrap();
        let t = vec![("A".to_string(), Rational::from(64)), ("B".to_string(), Rational::from(-27))];
        let h = build_matrix(&m, &assign(&t, 30), &PrecReal::one(30), 30).unwrap();
        assert!((h.get(0, 1).im.to_f64() - 27f64.sqrt()).abs() < 1e-14);
        assert_eq!(h.get(1, 2).re.to_f64(), 8.0);
        let diag: Vec<f64> = (0..4).map(|k| h.get(k, k).im.to_f64()).collect();
        assert_eq!(diag, vec![-3.0, -1.0, 1.0, 3.0]);
        let missing = build_matrix(&m, &HashMap::new(), &PrecReal::one(30), 30);
        assert_eq!(missing, Err(SecularError::MissingParameter("A".into())));
    }

    #[test]
    fn secular_two() {
        let sys = derive_secular(&ModelSpec::new(2).unwrap()).unwrap();
        let v = sys.vars();
        assert_eq!(sys.secular(), &MultiPoly::parse("s + z - A", v).unwrap());
    }

    #[test]
    fn secular_six_matches_hand_expansion() {
        let sys = derive_secular(&ModelSpec::new(6).unwrap()).unwrap();
        let v = sys.vars();
        let want = [
            "-A+35*z-2*C-2*B",
            "B^2+2*A*C+28*C*z+259*z^2+C^2-34*A*z+2*B*C-44*B*z",
            "30*C*z^2+C^2*z-A*C^2+25*B^2*z-225*A*z^2+150*B*z^2+225*z^3+10*B*C*z-30*A*C*z",
        ];
        for (got, w) in sys.coefficients().iter().zip(want) {
            assert_eq!(got, &MultiPoly::parse(w, v).unwrap());
        }
    }

    #[test]
    fn bh_tuples_are_epn_degenerate() {
        for n in 2..=10 {
            let sys = derive_secular(&ModelSpec::new(n).unwrap()).unwrap();
            let cons = constraints_at(&sys, &Rational::from(1)).unwrap();
            let bh = bh_tuple(n).unwrap();
            let vals: HashMap<String, Rational> = bh.into_iter().collect();
            for p in cons {
                assert_eq!(p.eval_rational(&vals).unwrap(), 0, "N={n}");
            }
        }
    }

    #[test]
    fn coefficients_are_weighted_homogeneous() {
        for n in 2..=9 {
            let sys = derive_secular(&ModelSpec::new(n).unwrap()).unwrap();
            let si = sys.vars().index_of(S).unwrap();
            for (m, p) in sys.coefficients().iter().enumerate() {
                for (e, _) in p.terms() {
                    assert_eq!(e[si], 0);
                    let w: u32 = e[..si].iter().sum();
                    assert_eq!(w as usize, m + 1, "N={n} P_{}", m + 1);
                }
            }
        }
    }

    #[test]
    fn record_round_trip() {
        let sys = derive_secular(&ModelSpec::new(7).unwrap()).unwrap();
        let back = SecularSystem::from_record(&sys.to_record()).unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn bh_spectrum_law() {
        let n = 5;
        let m = ModelSpec::new(n).unwrap();
        let z = rat(9, 25);
        let h = build_matrix(&m, &assign(&bh_tuple(n).unwrap(), 40), &PrecReal::from_rational(&z, 40), 40).unwrap();
        // det(E - H) must vanish at E = (1 - N + 2k) sqrt(1 - z) = (1 - N + 2k) * 4/5
        for k in 0..n {
            let e = PrecReal::from_rational(&rat((1 - n as i64 + 2 * k as i64) * 4, 5), 40);
            let mut shifted = CMatrix::zeros(n, 40);
            for i in 0..n {
                for j in 0..n {
                    let mut v = -h.get(i, j).clone();
                    if i == j {
                        v = &v + &PrecComplex::from_real(e.clone());
                    }
                    shifted.set(i, j, v);
                }
            }
            assert!(shifted.determinant().abs().to_f64() < 1e-30);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn secular_roots_are_eigenvalues(n in 2usize..9, seeds in prop::collection::vec((-30i64..30, 1i64..7), 5), zn in -20i64..20, zd in 1i64..9) {
            let m = ModelSpec::new(n).unwrap();
            let sys = derive_secular(&m).unwrap();
            let digits = 40;
            let z = rat(zn, zd);
            let tuple: Vec<(String, Rational)> = m.param_names().into_iter()
                .zip(seeds.iter().map(|&(a, b)| rat(a, b))).collect();
            let h = build_matrix(&m, &assign(&tuple, digits), &PrecReal::from_rational(&z, digits), digits).unwrap();
            let mut vals: HashMap<String, Rational> = tuple.into_iter().collect();
            vals.insert(Z.into(), z);
            let pv = sys.secular().substitute_all(&vals.iter().map(|(k, v)| (k.as_str(), v.clone())).collect::<Vec<_>>()).unwrap();
            let uni = crate::realroots::UniPoly::from_multipoly(&pv.with_vars(&VarSet::new([S]).unwrap()).unwrap(), S).unwrap();
            let roots = crate::realroots::complex_roots_rational(&uni, digits).unwrap();
            let norm = h.frobenius_norm().to_f64().max(1.0);
            for s in &roots.roots {
                let e = s.sqrt();
                for sign in [1i64, -1] {
                    let ev = e.scale(&PrecReal::from_i64(sign, digits));
                    let mut shifted = CMatrix::zeros(n, digits);
                    for i in 0..n {
                        for j in 0..n {
                            let mut v = -h.get(i, j).clone();
                            if i == j { v = &v + &ev; }
                            shifted.set(i, j, v);
                        }
                    }
                    let det = shifted.determinant().abs().to_f64();
                    prop_assert!(det <= 1e-20 * norm.powi(n as i32), "det {} at N={}", det, n);
                }
            }
        }
    }
}
