//! Numerical confluence test for a maximal exceptional point: perturb the
//! degenerate matrix at scale `10^-p`, diagonalize at high precision and
//! watch the eigenvector non-overlaps shrink as `p` grows.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{conj_inner, norm2, normalize, CMatrix, NumericsError, PrecComplex, PrecReal, Rational};
use crate::realroots::{complex_roots, RootError};
use crate::secular::{build_matrix, ModelSpec, SecularError};
use crate::solve::{ParamValue, ParameterTuple};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum VerifyError {
    #[error("matrix dimension {0} outside 1..=32")]
    BadDimension(usize),
    #[error("eigenpair residual target missed even at {digits} digits (residual {residual:e})")]
    ResidualTarget { digits: u32, residual: f64 },
    #[error("vector {index} is not normalized (norm {norm})")]
    NotNormalized { index: usize, norm: f64 },
    #[error("ladder must be strictly ascending and nonempty")]
    BadLadder,
    #[error("need at least {needed} ladder rungs, got {got}")]
    TooFewRungs { needed: usize, got: usize },
    #[error("tuple value `{name}` is known to {have} digits; {need} are required")]
    InsufficientPrecision { name: String, have: u32, need: u32 },
    #[error("tuple is on a complex branch")]
    ComplexTuple,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error(transparent)]
    Secular(#[from] SecularError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationStructure {
    /// `V = V^T`, so complex symmetry of `H + V` is preserved.
    #[default]
    ComplexSymmetric,
    DenseUnstructured,
}

impl std::fmt::Display for PerturbationStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PerturbationStructure::ComplexSymmetric => "complex-symmetric",
            PerturbationStructure::DenseUnstructured => "dense-unstructured",
        })
    }
}

/// Random perturbation with entries of modulus uniform in `[0, 10^-p]` and uniform phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub exponent: u32,
    pub structure: PerturbationStructure,
    pub seed: u64,
}

impl PerturbationSpec {
    /// Independent stream per `(seed, exponent, trial)`.
    fn rng(&self, trial: u32) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream((u64::from(self.exponent) << 32) | u64::from(trial));
        rng
    }

    pub fn sample(&self, n: usize, trial: u32, digits: u32) -> CMatrix {
        let mut rng = self.rng(trial);
        let scale = PrecReal::pow10(-(self.exponent as i32), digits);
        let mut v = CMatrix::zeros(n, digits);
        let entry = |rng: &mut ChaCha20Rng| {
            let modulus: f64 = rng.gen::<f64>() * (1.0 - 1e-12);
            let phase: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            let re = &scale * &PrecReal::from_f64(modulus * phase.cos(), digits);
            let im = &scale * &PrecReal::from_f64(modulus * phase.sin(), digits);
            PrecComplex::new(re, im)
        };
        for i in 0..n {
            let start = match self.structure {
                PerturbationStructure::ComplexSymmetric => i,
                PerturbationStructure::DenseUnstructured => 0,
            };
            for j in start..n {
                let x = entry(&mut rng);
                if self.structure == PerturbationStructure::ComplexSymmetric && j != i {
                    v.set(j, i, x.clone());
                }
                v.set(i, j, x);
            }
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: PrecComplex,
    pub vector: Vec<PrecComplex>,
    pub residual: PrecReal,
}

fn hessenberg(a: &CMatrix) -> CMatrix {
    // Gaussian similarity reduction with pivoting
    let n = a.dim();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let mut piv = k + 1;
        let mut best = h.get(k + 1, k).abs();
        for r in k + 2..n {
            let m = h.get(r, k).abs();
            if m > best {
                best = m;
                piv = r;
            }
        }
        if best.is_zero() {
            continue;
        }
        if piv != k + 1 {
            for j in 0..n {
                let t = h.get(piv, j).clone();
                h.set(piv, j, h.get(k + 1, j).clone());
                h.set(k + 1, j, t);
            }
            for i in 0..n {
                let t = h.get(i, piv).clone();
                h.set(i, piv, h.get(i, k + 1).clone());
                h.set(i, k + 1, t);
            }
        }
        let pivot = h.get(k + 1, k).clone();
        for i in k + 2..n {
            let m = h.get(i, k) / &pivot;
            if m.is_zero() {
                continue;
            }
            for j in 0..n {
                let v = h.get(i, j) - &(&m * h.get(k + 1, j));
                h.set(i, j, v);
            }
            for r in 0..n {
                let v = h.get(r, k + 1) + &(&m * h.get(r, i));
                h.set(r, k + 1, v);
            }
        }
    }
    h
}

/// Characteristic polynomial `det(lambda I - A)`, lowest degree first.
pub fn characteristic_polynomial(a: &CMatrix) -> Vec<PrecComplex> {
    let n = a.dim();
    let d = a.digits();
    let h = hessenberg(a);
    let mut p: Vec<Vec<PrecComplex>> = vec![vec![PrecComplex::one(d)]];
    for k in 1..=n {
        // (lambda - h_kk) p_{k-1}
        let prev = &p[k - 1];
        let mut next = vec![PrecComplex::zero(d); k + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(h.get(k - 1, k - 1) * c);
        }
        let mut prod = PrecComplex::one(d);
        for i in (1..k).rev() {
            prod = &prod * h.get(i, i - 1);
            let t = h.get(i - 1, k - 1) * &prod;
            if t.is_zero() {
                continue;
            }
            for (j, c) in p[i - 1].iter().enumerate() {
                next[j] = &next[j] - &(&t * c);
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

fn eig_at(h: &CMatrix, digits: u32) -> Result<(Vec<EigenPair>, PrecReal), VerifyError> {
    let n = h.dim();
    let h = h.with_digits(digits);
    let cp = characteristic_polynomial(&h);
    let mut values = complex_roots(&cp, digits)?.roots;
    values.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    let hnorm = h.frobenius_norm().with_digits(digits).max(PrecReal::pow10(-(digits as i32), digits));
    let floor = (&hnorm * &PrecReal::pow10(-(digits as i32), digits)).with_digits(digits);
    let mut worst = PrecReal::zero(digits);
    let mut out = Vec::with_capacity(n);
    for lam in values {
        let mut shifted = h.clone();
        for i in 0..n {
            shifted.set(i, i, h.get(i, i) - &lam);
        }
        let lu = shifted.lu_regularized(&floor);
        let mut x: Vec<PrecComplex> = (0..n)
            .map(|k| PrecComplex::from_f64(1.0, (k as f64 + 1.0) / (n as f64 + 1.0), digits))
            .collect();
        for _ in 0..3 {
            let y = lu.solve(&x);
            x = match normalize(&y) {
                Ok(v) => v,
                Err(_) => break,
            };
        }
        let mut r = h.mul_vec(&x);
        for (ri, xi) in r.iter_mut().zip(&x) {
            *ri = &*ri - &(&lam * xi);
        }
        let res = norm2(&r);
        worst = worst.max(&res / &hnorm);
        out.push(EigenPair {
            value: lam,
            vector: x,
            residual: res,
        });
    }
    Ok((out, worst))
}

/// Eigenvalues from the characteristic polynomial and eigenvectors by inverse
/// iteration; retries once at doubled precision if some residual exceeds
/// `10^(12 - digits) * ||H||`.
pub fn eig_prec(h: &CMatrix, digits: u32) -> Result<Vec<EigenPair>, VerifyError> {
    let n = h.dim();
    if n == 0 || n > 32 {
        return Err(VerifyError::BadDimension(n));
    }
    let mut d = digits;
    for attempt in 0..2 {
        let (pairs, worst) = eig_at(h, d)?;
        if worst <= PrecReal::pow10(12 - digits as i32, d) {
            return Ok(pairs);
        }
        if attempt == 1 {
            return Err(VerifyError::ResidualTarget {
                digits: d,
                residual: worst.to_f64(),
            });
        }
        d *= 2;
    }
    unreachable!()
}

/// `rho_mn = 1 - |<psi_m|psi_n>|`, zero diagonal.
pub fn nonoverlaps(vectors: &[Vec<PrecComplex>]) -> Result<Vec<Vec<f64>>, VerifyError> {
    for (i, v) in vectors.iter().enumerate() {
        let nv = norm2(v);
        let d = nv.digits();
        if (&nv - &PrecReal::one(d)).abs() > PrecReal::pow10(-(d as i32) / 2, d) {
            return Err(VerifyError::NotNormalized { index: i, norm: nv.to_f64() });
        }
    }
    let n = vectors.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let ip = conj_inner(&vectors[i], &vectors[j])?.abs();
            let d = ip.digits();
            let rho = (&PrecReal::one(d) - &ip).to_f64().clamp(0.0, 1.0);
            out[i][j] = rho;
            out[j][i] = rho;
        }
    }
    Ok(out)
}

fn offdiag_min_max(rho: &[Vec<f64>]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for i in 0..rho.len() {
        for j in i + 1..rho.len() {
            lo = lo.min(rho[i][j]);
            hi = hi.max(rho[i][j]);
        }
    }
    if rho.len() < 2 {
        lo = 0.0;
    }
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub p: u32,
    pub trial: u32,
    pub min_rho: f64,
    pub max_rho: f64,
    /// Partition suggested by clustering this trial's non-overlaps.
    pub clusters: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RungSummary {
    pub p: u32,
    pub min_rho: f64,
    pub max_rho: f64,
    pub median_max_rho: f64,
    pub dropped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict", content = "partition")]
pub enum Verdict {
    SingleBlock,
    SuspectedSplit(Vec<usize>),
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::SingleBlock => f.write_str("single-block"),
            Verdict::SuspectedSplit(p) => {
                let parts: Vec<String> = p.iter().map(usize::to_string).collect();
                write!(f, "suspected-split({})", parts.join(","))
            }
            Verdict::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub ladder: Vec<u32>,
    pub trials: u32,
    pub seed: u64,
    pub structure: PerturbationStructure,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            ladder: vec![10, 20, 30, 40],
            trials: 3,
            seed: 1,
            structure: PerturbationStructure::ComplexSymmetric,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfluenceReport {
    pub dimension: usize,
    pub config: SweepConfig,
    pub rungs: Vec<RungSummary>,
    pub trials: Vec<TrialResult>,
    pub verdict: Verdict,
}

/// Partition of `0..n` into clusters of mutually confluent vectors: pairs
/// below the largest gap in `log10 rho` are joined.
fn cluster_partition(rho: &[Vec<f64>]) -> Vec<usize> {
    let n = rho.len();
    if n < 2 {
        return vec![n];
    }
    let mut logs: Vec<f64> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            logs.push(rho[i][j].max(1e-300).log10());
        }
    }
    logs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let (mut gap, mut cut) = (0.0, f64::INFINITY);
    for w in logs.windows(2) {
        if w[1] - w[0] > gap {
            gap = w[1] - w[0];
            cut = 0.5 * (w[0] + w[1]);
        }
    }
    if gap < 2.0 {
        return vec![n];
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if rho[i][j].max(1e-300).log10() < cut {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for i in 0..n {
        *sizes.entry(find(&mut parent, i)).or_default() += 1;
    }
    let mut out: Vec<usize> = sizes.into_values().collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Confluence sweep over an arbitrary base matrix; `base(p, digits)` builds
/// the unperturbed matrix for rung `p` at `digits` precision.
pub fn precision_sweep_matrix<F>(n: usize, base: F, config: &SweepConfig) -> Result<ConfluenceReport, VerifyError>
where
    F: Fn(u32, u32) -> CMatrix + Sync,
{
    if config.ladder.is_empty() || config.ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(VerifyError::BadLadder);
    }
    if config.trials == 0 {
        return Err(VerifyError::NoTrials);
    }
    let jobs: Vec<(u32, u32)> = config
        .ladder
        .iter()
        .flat_map(|&p| (0..config.trials).map(move |t| (p, t)))
        .collect();
    let results: Vec<Option<TrialResult>> = jobs
        .par_iter()
        .map(|&(p, trial)| {
            let digits = 2 * p + 20;
            let spec = PerturbationSpec {
                exponent: p,
                structure: config.structure,
                seed: config.seed,
            };
            let h = &base(p, digits) + &spec.sample(n, trial, digits);
            let pairs = eig_prec(&h, digits).ok()?;
            let vecs: Vec<Vec<PrecComplex>> = pairs.into_iter().map(|e| e.vector).collect();
            let rho = nonoverlaps(&vecs).ok()?;
            let (min_rho, max_rho) = offdiag_min_max(&rho);
            Some(TrialResult {
                p,
                trial,
                min_rho,
                max_rho,
                clusters: cluster_partition(&rho),
            })
        })
        .collect();
    let mut trials = Vec::new();
    let mut rungs = Vec::new();
    for &p in &config.ladder {
        let here: Vec<&TrialResult> = results.iter().flatten().filter(|t| t.p == p).collect();
        let dropped = config.trials as usize - here.len();
        let mut maxes: Vec<f64> = here.iter().map(|t| t.max_rho).collect();
        rungs.push(RungSummary {
            p,
            min_rho: here.iter().map(|t| t.min_rho).fold(f64::INFINITY, f64::min),
            max_rho: here.iter().map(|t| t.max_rho).fold(0.0, f64::max),
            median_max_rho: median(&mut maxes),
            dropped,
        });
        trials.extend(here.into_iter().cloned());
    }
    let verdict = decide(&rungs, &trials, n);
    Ok(ConfluenceReport {
        dimension: n,
        config: config.clone(),
        rungs,
        trials,
        verdict,
    })
}

fn decide(rungs: &[RungSummary], trials: &[TrialResult], n: usize) -> Verdict {
    let Some(top) = rungs.last() else {
        return Verdict::Inconclusive;
    };
    if rungs.iter().any(|r| r.median_max_rho.is_nan()) {
        return Verdict::Inconclusive;
    }
    let monotone = rungs.windows(2).all(|w| w[1].median_max_rho < w[0].median_max_rho);
    let bound = 10f64.powi(-((top.p as i32 + 3) / 4));
    if monotone && top.max_rho <= bound {
        return Verdict::SingleBlock;
    }
    // stalled: the largest non-overlap stays of order one along the ladder
    let stalled = rungs.iter().all(|r| r.median_max_rho > 0.1);
    if stalled {
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for t in trials.iter().filter(|t| t.p == top.p) {
            *counts.entry(t.clusters.clone()).or_default() += 1;
        }
        if let Some((part, _)) = counts
            .into_iter()
            .filter(|(p, _)| p.len() >= 2 && p.iter().sum::<usize>() == n)
            .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
        {
            return Verdict::SuspectedSplit(part);
        }
    }
    Verdict::Inconclusive
}

/// Required precision check and confluence sweep for a tuple at `z = 1`.
pub fn precision_sweep(tuple: &ParameterTuple, n: usize, config: &SweepConfig) -> Result<ConfluenceReport, VerifyError> {
    let model = ModelSpec::new(n)?;
    let top = *config.ladder.iter().max().ok_or(VerifyError::BadLadder)?;
    let need = 2 * top + 20;
    let mut vals: HashMap<String, ParamValue> = HashMap::new();
    for (name, v) in tuple.names.iter().zip(&tuple.values) {
        let have = match v {
            ParamValue::Exact(_) => u32::MAX,
            ParamValue::Algebraic(a) => a.approx.digits(),
            ParamValue::Numeric(x) => x.digits(),
            ParamValue::Complex(_) => return Err(VerifyError::ComplexTuple),
        };
        if have < need {
            return Err(VerifyError::InsufficientPrecision {
                name: name.clone(),
                have,
                need,
            });
        }
        vals.insert(name.clone(), v.clone());
    }
    let base = |_p: u32, digits: u32| {
        let params: HashMap<String, PrecReal> = vals.iter().map(|(k, v)| (k.clone(), v.approx(digits).re)).collect();
        build_matrix(&model, &params, &PrecReal::one(digits), digits).expect("tuple covers the model")
    };
    precision_sweep_matrix(n, base, config)
}

/// `J3(0) ⊕ J3(1/10)`: two separated Jordan blocks, a known non-EPN.
pub fn split_block_matrix(digits: u32) -> CMatrix {
    let mut m = CMatrix::zeros(6, digits);
    let one = PrecComplex::one(digits);
    for i in [0, 1, 3, 4] {
        m.set(i, i + 1, one.clone());
    }
    let offset = PrecComplex::from_rational(&Rational::from((1, 10)), digits);
    for i in 3..6 {
        m.set(i, i, offset.clone());
    }
    m
}

/// All integer partitions of `n`, parts in non-increasing order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionResult {
    pub verdict: Verdict,
    /// Multi-block partitions ruled out by the sweep.
    pub excluded: Vec<Vec<usize>>,
    pub suggested: Option<Vec<usize>>,
}

/// Turns a confluence report into excluded (or suggested) Jordan partitions.
pub fn jordan_exclusion(report: &ConfluenceReport) -> Result<ExclusionResult, VerifyError> {
    if report.rungs.len() < 3 {
        return Err(VerifyError::TooFewRungs {
            needed: 3,
            got: report.rungs.len(),
        });
    }
    Ok(match &report.verdict {
        Verdict::SingleBlock => ExclusionResult {
            verdict: Verdict::SingleBlock,
            excluded: partitions(report.dimension).into_iter().filter(|p| p.len() >= 2).collect(),
            suggested: None,
        },
        Verdict::SuspectedSplit(p) => ExclusionResult {
            verdict: report.verdict.clone(),
            excluded: Vec::new(),
            suggested: Some(p.clone()),
        },
        Verdict::Inconclusive => ExclusionResult {
            verdict: Verdict::Inconclusive,
            excluded: Vec::new(),
            suggested: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn bh_matrix(n: usize, z: &str, digits: u32) -> CMatrix {
        let model = ModelSpec::new(n).unwrap();
        let params: HashMap<String, PrecReal> = crate::secular::bh_tuple(n)
            .unwrap()
            .into_iter()
            .map(|(k, v)| (k, PrecReal::from_rational(&v, digits)))
            .collect();
        build_matrix(&model, &params, &PrecReal::parse(z, digits).unwrap(), digits).unwrap()
    }

    #[test]
    fn bh_two_by_two() {
        let pairs = eig_prec(&bh_matrix(2, "0.36", 40), 40).unwrap();
        assert!((pairs[0].value.re.to_f64() + 0.8).abs() < 1e-30);
        assert!((pairs[1].value.re.to_f64() - 0.8).abs() < 1e-30);
    }

    #[test]
    fn bh_six_at_zero() {
        let pairs = eig_prec(&bh_matrix(6, "0", 40), 40).unwrap();
        for (p, want) in pairs.iter().zip([-5.0, -3.0, -1.0, 1.0, 3.0, 5.0]) {
            assert!((p.value.re.to_f64() - want).abs() < 1e-30);
            assert!(p.value.im.abs().to_f64() < 1e-30);
        }
    }

    #[test]
    fn diagonal_matrix_standard_basis() {
        let mut m = CMatrix::zeros(3, 30);
        for i in 0..3 {
            m.set(i, i, PrecComplex::from_f64(i as f64, 0.0, 30));
        }
        let pairs = eig_prec(&m, 30).unwrap();
        let vecs: Vec<_> = pairs.into_iter().map(|p| p.vector).collect();
        let rho = nonoverlaps(&vecs).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!((rho[i][j] - 1.0).abs() < 1e-25);
                }
            }
        }
    }

    #[test]
    fn nonoverlap_rotation() {
        let th: f64 = 0.3;
        let v = vec![PrecComplex::from_f64(1.0, 0.0, 30), PrecComplex::from_f64(0.0, 0.0, 30)];
        let w = vec![PrecComplex::from_f64(th.cos(), 0.0, 30), PrecComplex::from_f64(th.sin(), 0.0, 30)];
        let rho = nonoverlaps(&[v.clone(), w, v.clone()]).unwrap();
        assert!((rho[0][1] - (1.0 - th.cos())).abs() < 1e-12);
        assert_eq!(rho[0][2], 0.0);
        let bad = vec![PrecComplex::from_f64(2.0, 0.0, 30)];
        assert!(matches!(nonoverlaps(&[bad]), Err(VerifyError::NotNormalized { .. })));
    }

    #[test]
    fn symmetric_perturbation_stays_symmetric() {
        for seed in 0..4 {
            let spec = PerturbationSpec {
                exponent: 12,
                structure: PerturbationStructure::ComplexSymmetric,
                seed,
            };
            let v = spec.sample(5, 2, 40);
            assert!(v.is_symmetric());
            let bound = PrecReal::pow10(-12, 40);
            for i in 0..5 {
                for j in 0..5 {
                    assert!(v.get(i, j).abs() <= bound);
                }
            }
            let h = &bh_matrix(5, "1", 40) + &v;
            assert!(h.is_symmetric());
        }
    }

    #[test]
    fn partitions_of_six() {
        let all = partitions(6);
        assert_eq!(all.len(), 11);
        assert_eq!(all.iter().filter(|p| p.len() >= 2).count(), 10);
        assert!(all.contains(&vec![3, 3]));
    }

    #[test]
    fn split_block_flagged() {
        let cfg = SweepConfig {
            ladder: vec![10, 20, 30],
            trials: 2,
            seed: 3,
            structure: PerturbationStructure::ComplexSymmetric,
        };
        let rep = precision_sweep_matrix(6, |_, d| split_block_matrix(d), &cfg).unwrap();
        assert_eq!(rep.verdict, Verdict::SuspectedSplit(vec![3, 3]));
        let ex = jordan_exclusion(&rep).unwrap();
        assert_eq!(ex.suggested, Some(vec![3, 3]));
    }

    #[test]
    fn bh_six_is_single_block() {
        let bh = ParameterTuple::from_exact(
            &ModelSpec::new(6).unwrap().param_names(),
            &[rat(9, 1), rat(8, 1), rat(5, 1)],
        );
        let rep = precision_sweep(&bh, 6, &SweepConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::SingleBlock, "{:?}", rep.rungs);
        let ex = jordan_exclusion(&rep).unwrap();
        assert_eq!(ex.excluded.len(), 10);
        let short = ConfluenceReport {
            rungs: rep.rungs[..2].to_vec(),
            ..rep
        };
        assert!(matches!(jordan_exclusion(&short), Err(VerifyError::TooFewRungs { .. })));
    }
}
