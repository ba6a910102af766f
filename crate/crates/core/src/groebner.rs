//! Lexicographic Gröbner bases by Buchberger's algorithm with the
//! Gebauer–Möller pair update and fraction-free, primitive reduction.

use std::sync::Arc;

use thiserror::Error;

use crate::numerics::Rational;
use crate::poly::{Exponents, MultiPoly, PolyError, VarSet};

/// Order in which critical pairs are processed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairSelection {
    /// Smallest lcm in the lex order first.
    Normal,
    /// Smallest total degree of the lcm first, lex order breaking ties.
    Degree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroebnerBudget {
    /// Maximum number of S-pairs reduced.
    pub max_pairs: usize,
    /// Maximum coefficient size, in bits, of any basis element.
    pub max_coeff_bits: u32,
    pub selection: PairSelection,
}

impl Default for GroebnerBudget {
    fn default() -> Self {
        GroebnerBudget {
            max_pairs: 50_000,
            max_coeff_bits: 400_000,
            selection: PairSelection::Normal,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GroebnerError {
    #[error("empty input system")]
    EmptySystem,
    #[error("budget exceeded ({reason}) after {pairs_reduced} S-pairs")]
    BudgetExceeded {
        reason: String,
        pairs_reduced: usize,
        /// Basis elements collected so far (not a Gröbner basis).
        partial: Vec<MultiPoly>,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn sub(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn lm(p: &MultiPoly) -> &Exponents {
    p.leading_term().expect("nonzero basis element").0
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Exponents,
    degree: u32,
}

fn pair(polys: &[MultiPoly], i: usize, j: usize) -> Pair {
    let l = lcm(lm(&polys[i]), lm(&polys[j]));
    Pair {
        i,
        j,
        degree: l.iter().sum(),
        lcm: l,
    }
}

/// Primitive integer polynomial with positive leading coefficient.
fn make_primitive(p: &MultiPoly) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    p.primitive()
}

struct Reducer<'a> {
    polys: &'a [MultiPoly],
    active: &'a [bool],
}

impl Reducer<'_> {
    fn find(&self, mono: &[u32], skip: Option<usize>) -> Option<usize> {
        self.polys
            .iter()
            .enumerate()
            .filter(|(k, _)| self.active[*k] && Some(*k) != skip)
            .find(|(_, g)| divides(lm(g), mono))
            .map(|(k, _)| k)
    }

    /// Full normal form, returned as a primitive integer polynomial.
    fn normal_form(&self, f: &MultiPoly, skip: Option<usize>) -> MultiPoly {
        let vars = Arc::clone(f.vars());
        let mut f = f.clone();
        let mut done: Vec<(Exponents, Rational)> = Vec::new();
        let one = Rational::from(1);
        let zero_mono = vec![0; vars.len()];
        while let Some((mono, coeff)) = f.leading_term() {
            let mono = mono.clone();
            let coeff = coeff.clone();
            match self.find(&mono, skip) {
                Some(k) => {
                    let g = &self.polys[k];
                    let (gm, gc) = g.leading_term().unwrap();
                    let b = Rational::from(&coeff / gc);
                    f = f.sub_mul_scaled_impl(&one, &b, &sub(&mono, gm), g);
                }
                None => {
                    done.push((mono.clone(), coeff.clone()));
                    let lead = MultiPoly::from_terms(&vars, [(mono, coeff)]);
                    f = f.sub_mul_scaled_impl(&one, &one, &zero_mono, &lead);
                }
            }
        }
        make_primitive(&MultiPoly::from_terms(&vars, done))
    }
}

/// Reduced Gröbner basis for lex order on `order` (first variable largest),
/// sorted by increasing leading monomial; elements are monic.
pub fn groebner_lex(system: &[MultiPoly], order: &Arc<VarSet>) -> Result<Vec<MultiPoly>, GroebnerError> {
    groebner_lex_with_budget(system, order, &GroebnerBudget::default())
}

pub fn groebner_lex_with_budget(
    system: &[MultiPoly],
    order: &Arc<VarSet>,
    budget: &GroebnerBudget,
) -> Result<Vec<MultiPoly>, GroebnerError> {
    if system.is_empty() {
        return Err(GroebnerError::EmptySystem);
    }
    let mut polys: Vec<MultiPoly> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut pairs_reduced = 0usize;

    let inputs: Vec<MultiPoly> = system
        .iter()
        .map(|p| p.with_vars(order).map(|q| make_primitive(&q)))
        .collect::<Result<_, _>>()?;
    for p in inputs {
        let h = Reducer {
            polys: &polys,
            active: &active,
        }
        .normal_form(&p, None);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![MultiPoly::one(order)]);
        }
        update(&mut polys, &mut active, &mut pairs, h);
    }

    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let by_lcm = pairs[a].lcm.cmp(&pairs[b].lcm);
                match budget.selection {
                    PairSelection::Normal => by_lcm,
                    PairSelection::Degree => pairs[a].degree.cmp(&pairs[b].degree).then(by_lcm),
                }
            })
            .unwrap();
        let p = pairs.swap_remove(best);
        pairs_reduced += 1;
        if pairs_reduced > budget.max_pairs {
            return Err(GroebnerError::BudgetExceeded {
                reason: format!("more than {} S-pairs", budget.max_pairs),
                pairs_reduced,
                partial: collect_active(&polys, &active),
            });
        }
        let s = s_poly(&polys[p.i], &polys[p.j], &p.lcm);
        let h = Reducer {
            polys: &polys,
            active: &active,
        }
        .normal_form(&s, None);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![MultiPoly::one(order)]);
        }
        if h.max_coeff_bits() > budget.max_coeff_bits {
            return Err(GroebnerError::BudgetExceeded {
                reason: format!("coefficient size above {} bits", budget.max_coeff_bits),
                pairs_reduced,
                partial: collect_active(&polys, &active),
            });
        }
        update(&mut polys, &mut active, &mut pairs, h);
    }
    Ok(reduce_basis(&polys, &active))
}

fn collect_active(polys: &[MultiPoly], active: &[bool]) -> Vec<MultiPoly> {
    polys
        .iter()
        .zip(active)
        .filter(|(_, a)| **a)
        .map(|(p, _)| p.clone())
        .collect()
}

fn s_poly(f: &MultiPoly, g: &MultiPoly, l: &[u32]) -> MultiPoly {
    let (fm, fc) = f.leading_term().unwrap();
    let (gm, gc) = g.leading_term().unwrap();
    let a = f.mul_term(&sub(l, fm), gc);
    a.sub_mul_scaled_impl(&Rational::from(1), fc, &sub(l, gm), g)
}

/// Gebauer–Möller installation of a new element `h`.
fn update(polys: &mut Vec<MultiPoly>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>, h: MultiPoly) {
    let hi = polys.len();
    polys.push(h);
    active.push(false);
    let hm = lm(&polys[hi]).clone();

    let mut c: Vec<Pair> = (0..hi).filter(|&k| active[k]).map(|k| pair(polys, k, hi)).collect();
    let mut kept: Vec<Pair> = Vec::new();
    while let Some(cand) = (!c.is_empty()).then(|| c.remove(0)) {
        let keep = coprime(lm(&polys[cand.i]), &hm)
            || !c.iter().chain(kept.iter()).any(|o| divides(&o.lcm, &cand.lcm));
        if keep {
            kept.push(cand);
        }
    }
    // product criterion
    kept.retain(|c| !coprime(lm(&polys[c.i]), &hm));

    // discard old pairs whose lcm is a proper multiple through h
    pairs.retain(|p| {
        let l1 = lcm(lm(&polys[p.i]), &hm);
        let l2 = lcm(lm(&polys[p.j]), &hm);
        !(divides(&hm, &p.lcm) && l1 != p.lcm && l2 != p.lcm)
    });
    pairs.extend(kept);

    for k in 0..hi {
        if active[k] && divides(&hm, lm(&polys[k])) {
            active[k] = false;
        }
    }
    active[hi] = true;
}

fn reduce_basis(polys: &[MultiPoly], active: &[bool]) -> Vec<MultiPoly> {
    let mut g: Vec<MultiPoly> = collect_active(polys, active);
    // minimal basis
    let mut keep = vec![true; g.len()];
    for i in 0..g.len() {
        for j in 0..g.len() {
            if i != j && keep[j] && divides(lm(&g[j]), lm(&g[i])) && (lm(&g[i]) != lm(&g[j]) || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    g = g.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
    // inter-reduction
    let all = vec![true; g.len()];
    for i in 0..g.len() {
        let r = Reducer {
            polys: &g,
            active: &all,
        }
        .normal_form_tail(i);
        g[i] = r;
    }
    let mut out: Vec<MultiPoly> = g.iter().map(MultiPoly::monic).collect();
    out.sort_by(|a, b| lm(a).cmp(lm(b)));
    out
}

impl Reducer<'_> {
    /// Reduces all terms of element `i` except its leading term by the others.
    fn normal_form_tail(&self, i: usize) -> MultiPoly {
        let f = &self.polys[i];
        let vars = Arc::clone(f.vars());
        let one = Rational::from(1);
        let zero_mono = vec![0; vars.len()];
        let (m, c) = f.leading_term().unwrap();
        let mut done: Vec<(Exponents, Rational)> = vec![(m.clone(), c.clone())];
        let lead = MultiPoly::from_terms(&vars, done.clone());
        let mut f = f - &lead;
        while let Some((mono, coeff)) = f.leading_term() {
            let mono = mono.clone();
            let coeff = coeff.clone();
            match self.find(&mono, Some(i)) {
                Some(k) => {
                    let g = &self.polys[k];
                    let (gm, gc) = g.leading_term().unwrap();
                    let b = Rational::from(&coeff / gc);
                    f = f.sub_mul_scaled_impl(&one, &b, &sub(&mono, gm), g);
                }
                None => {
                    done.push((mono.clone(), coeff.clone()));
                    let t = MultiPoly::from_terms(&vars, [(mono, coeff)]);
                    f = f.sub_mul_scaled_impl(&one, &one, &zero_mono, &t);
                }
            }
        }
        MultiPoly::from_terms(&vars, done)
    }
}

/// Elements of `basis` that involve only the last variable of `order`.
pub fn eliminant_of(basis: &[MultiPoly], order: &Arc<VarSet>) -> Option<MultiPoly> {
    let last = order.names().last()?.clone();
    basis
        .iter()
        .find(|p| !p.is_constant() && p.support().iter().all(|v| *v == last))
        .cloned()
}

/// True when the ideal has exactly one basis element per variable, each with
/// a leading monomial that is a pure power of its own variable.
pub fn is_triangular(basis: &[MultiPoly]) -> bool {
    let Some(first) = basis.first() else {
        return false;
    };
    let n = first.vars().len();
    if basis.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for p in basis {
        let m = lm(p);
        let nz: Vec<usize> = (0..n).filter(|&k| m[k] > 0).collect();
        if nz.len() != 1 || seen[nz[0]] {
            return false;
        }
        seen[nz[0]] = true;
    }
    true
}

/// Shape position: every variable but the last appears linearly as `x_i - g_i(y)`.
pub fn shape_form(basis: &[MultiPoly]) -> Option<(MultiPoly, Vec<(String, MultiPoly)>)> {
    if !is_triangular(basis) {
        return None;
    }
    let vars = Arc::clone(basis[0].vars());
    let n = vars.len();
    let last = n - 1;
    let mut eliminant = None;
    let mut chain = Vec::new();
    for p in basis {
        let m = lm(p);
        if m[last] > 0 {
            eliminant = Some(p.clone());
            continue;
        }
        let k = (0..n).find(|&k| m[k] > 0).unwrap();
        if m[k] != 1 {
            return None;
        }
        let x = MultiPoly::var(&vars, &vars.names()[k]).ok()?;
        let rest = &x - p;
        if rest.support().iter().any(|v| *v != vars.names()[last]) {
            return None;
        }
        chain.push((vars.names()[k].clone(), rest));
    }
    Some((eliminant?, chain))
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
    fn linear_system() {
        let v = vs(&["x", "y"]);
        let g = groebner_lex(&[p("x+y-2", &v), p("x-y", &v)], &v).unwrap();
        assert_eq!(g, vec![p("y-1", &v), p("x-1", &v)]);
    }

    #[test]
    fn ideal_membership_collapses() {
        let v = vs(&["x"]);
        let g = groebner_lex(&[p("x^2-1", &v), p("x-1", &v)], &v).unwrap();
        assert_eq!(g, vec![p("x-1", &v)]);
    }

    #[test]
    fn inconsistent_system_gives_unit_ideal() {
        let v = vs(&["x", "y"]);
        let g = groebner_lex(&[p("x*y-1", &v), p("x", &v)], &v).unwrap();
        assert_eq!(g, vec![MultiPoly::one(&v)]);
    }

    #[test]
    fn classic_example() {
        // Cox-Little-O'Shea: x^2 + y + z - 1, x + y^2 + z - 1, x + y + z^2 - 1
        let v = vs(&["x", "y", "z"]);
        let sys = [p("x^2+y+z-1", &v), p("x+y^2+z-1", &v), p("x+y+z^2-1", &v)];
        let g = groebner_lex(&sys, &v).unwrap();
        let elim = eliminant_of(&g, &v).unwrap();
        assert_eq!(elim, p("z^6-4*z^4+4*z^3-z^2", &v));
        assert_eq!(groebner_lex(&g, &v).unwrap(), g);
        let graded = GroebnerBudget {
            selection: PairSelection::Degree,
            ..GroebnerBudget::default()
        };
        assert_eq!(groebner_lex_with_budget(&sys, &v, &graded).unwrap(), g);
    }

    #[test]
    fn budget_is_enforced() {
        let v = vs(&["x", "y", "z"]);
        let sys = [p("x^2+y+z-1", &v), p("x+y^2+z-1", &v), p("x+y+z^2-1", &v)];
        let tight = GroebnerBudget {
            max_pairs: 1,
            ..GroebnerBudget::default()
        };
        match groebner_lex_with_budget(&sys, &v, &tight) {
            Err(GroebnerError::BudgetExceeded { partial, .. }) => assert!(!partial.is_empty()),
            other => panic!("expected budget error, got {other:?}"),
        }
        assert_eq!(groebner_lex(&[], &v), Err(GroebnerError::EmptySystem));
    }

    #[test]
    fn shape_position_detection() {
        let v = vs(&["x", "y"]);
        let g = groebner_lex(&[p("x^2-1", &v), p("y^2-1", &v)], &v).unwrap();
        assert!(is_triangular(&g));
        assert!(shape_form(&g).is_none());
        let g = groebner_lex(&[p("x^2-2", &v), p("y-x", &v)], &v).unwrap();
        let (e, chain) = shape_form(&g).unwrap();
        assert_eq!(e, p("y^2-2", &v));
        assert_eq!(chain, vec![("x".to_string(), p("y", &v))]);
    }
}
