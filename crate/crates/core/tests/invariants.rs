use epn_core::catalog::{epn_system, resolve};
use epn_core::epnverify::{eig_prec, precision_sweep, SweepConfig, Verdict};
use epn_core::fixtures::{n8_eliminant, ReferenceTable};
use epn_core::groebner::groebner_lex;
use epn_core::numerics::{PrecComplex, PrecReal, Rational};
use epn_core::poly::{MultiPoly, VarSet};
use epn_core::realroots::{isolate, refine};
use epn_core::secular::{build_matrix, ModelSpec};
use epn_core::solve::{solve_epn, ParameterTuple, RealityClass, SolveMethod};
use epn_core::spectrum::{BoundaryKind, RootClass, SpectralFamily};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_poly(coeffs: &[i64], vars: &std::sync::Arc<VarSet>) -> MultiPoly {
    // c0 + c1 x + c2 y + c3 x y + c4 x^2 + c5 y^2
    let monos = [[0, 0], [1, 0], [0, 1], [1, 1], [2, 0], [0, 2]];
    MultiPoly::from_terms(
        vars,
        coeffs
            .iter()
            .zip(monos)
            .filter(|(c, _)| **c != 0)
            .map(|(c, m)| (m.to_vec(), Rational::from(*c))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn groebner_is_idempotent(
        a in prop::collection::vec(-4i64..5, 6),
        b in prop::collection::vec(-4i64..5, 6),
    ) {
        let vars = VarSet::new(["x", "y"]).unwrap();
        let sys = [small_poly(&a, &vars), small_poly(&b, &vars)];
        prop_assume!(sys.iter().all(|p| !p.is_zero()));
        let g = groebner_lex(&sys, &vars).unwrap();
        let again = groebner_lex(&g, &vars).unwrap();
        prop_assert_eq!(g, again);
    }

    #[test]
    fn conjugate_closure(z in -600.0f64..900.0) {
        let t = resolve(6, "a", 40, None).unwrap();
        let fam = SpectralFamily::new(6, &t, 60).unwrap();
        let s = fam.sample(&PrecReal::from_f64(z, 40), 40).unwrap();
        for (r, c) in s.roots.iter().zip(&s.classes) {
            if *c == RootClass::ComplexPairMember {
                let partner = s.roots.iter().any(|q| (&q.conj() - r).abs().to_f64() <= 1e-20 * (1.0 + r.abs().to_f64()));
                prop_assert!(partner, "z = {}: no conjugate for {:?}", z, r.re.to_f64());
            }
        }
        prop_assert_eq!(s.census().total(), 6);
    }
}

#[test]
fn epn_systems_are_groebner_fixed_points() {
    for n in 4..=6 {
        let (sys, names) = epn_system(n).unwrap();
        let vars = VarSet::new(names).unwrap();
        let g = groebner_lex(&sys, &vars).unwrap();
        assert_eq!(groebner_lex(&g, &vars).unwrap(), g, "N={n}");
    }
}

#[test]
fn solver_tuples_certify() {
    for n in 4..=7 {
        let r = solve_epn(n, 40, SolveMethod::Groebner).unwrap();
        for t in r.tuples.iter().filter(|t| t.reality == RealityClass::AllReal) {
            assert!(t.certified(), "N={n}: {:?}", t.residual.as_ref().map(PrecReal::to_f64));
        }
        assert!(r.tuples.iter().any(|t| t.is_bh));
    }
}

fn real_set(tuples: &[ParameterTuple]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = tuples
        .iter()
        .filter(|t| t.reality == RealityClass::AllReal && t.certified())
        .map(|t| t.values.iter().map(|v| v.approx(40).re.to_string_sig(30)).collect())
        .collect();
    out.sort();
    out
}

#[test]
fn elimination_paths_agree() {
    for n in 4..=7 {
        let g = solve_epn(n, 40, SolveMethod::Groebner).unwrap();
        let r = solve_epn(n, 40, SolveMethod::Resultant).unwrap();
        assert_eq!(real_set(&g.tuples), real_set(&r.tuples), "N={n}");
    }
}

/// Squares of eigenvalues of the numeric matrix against the secular roots.
fn cross_check(n: usize, id: &str, zs: &[f64], digits: u32) {
    let t = resolve(n, id, digits + 30, None).unwrap();
    let fam = SpectralFamily::new(n, &t, digits + 50).unwrap();
    let model = ModelSpec::new(n).unwrap();
    let params = t.real_map(digits + 30).unwrap();
    let tol = 10f64.powi(8 - digits as i32);
    for &z in zs {
        let zr = PrecReal::from_f64(z, digits);
        let s = fam.sample(&zr, digits).unwrap();
        let h = build_matrix(&model, &params, &zr, digits).unwrap();
        let mut squares: Vec<PrecComplex> = eig_prec(&h, digits).unwrap().iter().map(|e| &e.value * &e.value).collect();
        for r in &s.roots {
            let scale = 1.0 + r.abs().to_f64();
            for _ in 0..2 {
                let (k, d) = squares
                    .iter()
                    .enumerate()
                    .map(|(k, q)| (k, (q - r).abs().to_f64()))
                    .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                    .unwrap();
                assert!(d <= tol * scale, "N={n} {id} z={z}: {d:e}");
                squares.remove(k);
            }
        }
        if n % 2 == 1 {
            assert!(squares[0].abs().to_f64() <= tol);
        }
    }
}

#[test]
fn secular_roots_match_matrix_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut zs = |lo: f64, hi: f64| -> Vec<f64> { (0..10).map(|_| rng.gen_range(lo..hi)).collect() };
    cross_check(6, "a", &zs(-500.0, 900.0), 30);
    cross_check(6, "b", &zs(-100.0, 200.0), 30);
    cross_check(7, "alpha", &zs(-50.0, 2.0), 30);
    cross_check(8, "bh", &zs(-2.0, 0.9), 30);
}

#[test]
fn boundaries_change_census_and_intervals_are_stable() {
    for (n, id, lo, hi) in [(6, "a", -1000.0, 1000.0), (6, "b", -100.0, 200.0), (7, "alpha", -50.0, 2.0)] {
        let t = resolve(n, id, 70, None).unwrap();
        let fam = SpectralFamily::new(n, &t, 90).unwrap();
        let bs = fam.ep2_boundaries(lo, hi).unwrap();
        let rep = fam.interval_report(lo, hi, bs.clone(), 40).unwrap();
        assert!(rep.intervals.iter().all(|iv| iv.consistent), "{id}");
        for (k, b) in bs.iter().enumerate() {
            if b.kind != BoundaryKind::Touch {
                assert_ne!(rep.intervals[k].census, rep.intervals[k + 1].census, "{id} at {}", b.z.to_f64());
            }
        }
    }
}

#[test]
fn confluence_is_monotone_for_epn_tuples() {
    for (n, id) in [(4, "bh"), (4, "t1"), (5, "bh"), (5, "t1"), (6, "bh"), (6, "a")] {
        let t = resolve(n, id, 100, None).unwrap();
        for seed in 0..5 {
            let cfg = SweepConfig {
                seed,
                ..SweepConfig::default()
            };
            let r = precision_sweep(&t, n, &cfg).unwrap();
            let med: Vec<f64> = r.rungs.iter().map(|g| g.median_max_rho).collect();
            assert!(med.windows(2).all(|w| w[1] < w[0]), "N={n} {id} seed {seed}: {med:?}");
            assert_eq!(r.verdict, Verdict::SingleBlock, "N={n} {id} seed {seed}");
        }
    }
}

#[test]
fn eliminant_residual_at_refined_roots() {
    // budget: |R(x)| <= 10^(cond - digits), cond = log10 sum_i |a_i| max(1,|x|)^i
    let p = n8_eliminant().unwrap().primitive();
    let digits = 50;
    let roots: Vec<PrecReal> = isolate(&p).unwrap().iter().map(|iv| refine(iv, digits).unwrap()).collect();
    let printed = ReferenceTable::tuples().f64s("n8.roots").unwrap();
    assert_eq!(roots.len(), printed.len());
    for x in &roots {
        let xr = x.with_digits(digits + 40);
        let mut val = PrecReal::zero(digits + 40);
        let mut scale = 0.0f64;
        for (i, a) in p.coeffs().iter().enumerate().rev() {
            val = &(&val * &xr) + &PrecReal::from_rational(a, digits + 40);
            scale += a.to_f64().abs() * x.to_f64().abs().max(1.0).powi(i as i32);
        }
        let cond = scale.log10();
        assert!(val.abs().log10_abs() <= cond - digits as f64 + 1.0, "{}", x.to_f64());
    }
    for (x, want) in roots.iter().zip(&printed) {
        assert!((x.to_f64() - want).abs() <= 1e-10 * want.abs().max(1.0));
    }
}
