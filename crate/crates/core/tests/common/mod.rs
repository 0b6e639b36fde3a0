//! Property suites shared by the property tests and the acceptance run.
#![allow(dead_code)]

use k3cone::arith::{int, prime_divisors, Rat};
use k3cone::conegeom::{cone_from_rays, dual_cone_q};
use k3cone::diophant::{hilbert_symbol, pell_sweep, pell_window, Place};
use k3cone::hilbscheme::{beauville_op, build_hilb};
use k3cone::par::Exec;
use k3cone::quadlat::{IsometryOp, LatVec, QuadLattice};
use k3cone::runner::{recheck, run_claims, Expectations, RunOptions, Scenario};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use std::sync::Arc;

pub const CASES: u32 = 1000;

pub fn run<S: Strategy>(cases: u32, strat: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, max_global_rejects: cases * 20, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strat, f).map_err(|e| e.to_string())
}

fn x_lattice() -> Arc<QuadLattice> {
    build_hilb(&[vec![6, 8], vec![8, 6]], 3, &[]).unwrap().lattice().clone()
}

fn vec3() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-40i64..=40, 3)
}

/// Words in the two involutions preserve the form, on both built-in lattices.
pub fn isometry_preservation(cases: u32) -> Result<(), String> {
    let hls = [
        build_hilb(&[vec![6, 8], vec![8, 6]], 3, &[]).unwrap(),
        build_hilb(&[vec![4, 7], vec![7, 4]], 2, &[]).unwrap(),
    ];
    let ops: Vec<[IsometryOp; 2]> = hls.iter().map(|h| [beauville_op(h, 1).unwrap(), beauville_op(h, 2).unwrap()]).collect();
    let strat = (0usize..2, prop::collection::vec(0usize..2, 0..7), vec3(), vec3());
    run(cases, strat, |(which, word, v, w)| {
        let lat = hls[which].lattice();
        let mut m = IsometryOp::identity(lat.clone());
        for k in word {
            m = m.compose(&ops[which][k]).unwrap();
        }
        let (v, w) = (LatVec::from_i64(&v), LatVec::from_i64(&w));
        let before = lat.pair(&v, &w).unwrap();
        let after = lat.pair(&m.apply(&v).unwrap(), &m.apply(&w).unwrap()).unwrap();
        prop_assert_eq!(before, after);
        Ok(())
    })
}

fn sym3() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(-6i64..=6, 6).prop_map(|c| vec![vec![c[0], c[1], c[2]], vec![c[1], c[3], c[4]], vec![c[2], c[4], c[5]]])
}

/// `s_r ∘ s_r = id` and `s_r` preserves the form, for random lattices and roots.
pub fn reflection_involution(cases: u32) -> Result<(), String> {
    run(cases, (sym3(), vec3(), vec3()), |(g, r, w)| {
        let Ok(lat) = QuadLattice::unlabeled(g.iter().map(|row| row.iter().map(|&x| int(x)).collect()).collect()) else {
            return Err(TestCaseError::reject("degenerate"));
        };
        let (r, w) = (LatVec::from_i64(&r), LatVec::from_i64(&w));
        if lat.square(&r).unwrap() == Rat::from_integer(0.into()) {
            return Err(TestCaseError::reject("isotropic root"));
        }
        let once = lat.reflect(&r, &w).unwrap();
        prop_assert_eq!(lat.reflect(&r, &once).unwrap(), w.clone());
        prop_assert_eq!(lat.square(&once).unwrap(), lat.square(&w).unwrap());
        Ok(())
    })
}

fn nonzero(range: i64) -> impl Strategy<Value = i64> {
    (-range..=range).prop_filter("nonzero", |x| *x != 0)
}

/// `∏_v (a,b)_v = 1` over the places dividing `2ab` and infinity.
pub fn hilbert_product_formula(cases: u32) -> Result<(), String> {
    run(cases, (nonzero(20_000), nonzero(20_000)), |(a, b)| {
        let mut primes = prime_divisors(2 * a.unsigned_abs() * b.unsigned_abs());
        primes.sort();
        let mut prod = hilbert_symbol(a, b, Place::Infinity).unwrap();
        for p in primes {
            prod *= hilbert_symbol(a, b, Place::Prime(p)).unwrap();
        }
        prop_assert_eq!(prod, 1, "a={} b={}", a, b);
        Ok(())
    })
}

fn nonsquare_d() -> impl Strategy<Value = i64> {
    (2i64..80).prop_filter("nonsquare", |d| {
        let r = (*d as f64).sqrt() as i64;
        (r - 1..=r + 1).all(|s| s * s != *d)
    })
}

/// Orbit generation and the direct sweep list the same solutions on a window.
pub fn pell_completeness(cases: u32) -> Result<(), String> {
    run(cases, (nonsquare_d(), -60i64..=60, 1i64..3000), |(d, n, t)| {
        let w: Vec<(i64, i64)> = pell_window(d, n, &int(t))
            .unwrap()
            .into_iter()
            .map(|(a, b)| (a.try_into().unwrap(), b.try_into().unwrap()))
            .collect();
        let s = pell_sweep(d, n, t, Exec::Sequential).unwrap();
        prop_assert_eq!(w, s, "d={} n={} t={}", d, n, t);
        Ok(())
    })
}

/// Pointed full-dimensional cones (all rays in `x > 0`) satisfy `C** = C`.
pub fn dual_of_dual(cases: u32) -> Result<(), String> {
    let lat = x_lattice();
    let ray = (1i64..=5, -5i64..=5, -5i64..=5).prop_map(|(a, b, c)| vec![a, b, c]);
    run(cases, prop::collection::vec(ray, 3..7), |rays| {
        let rays: Vec<LatVec> = rays.iter().map(|r| LatVec::from_i64(r)).collect();
        let Ok(c) = cone_from_rays(lat.clone(), &rays) else {
            return Err(TestCaseError::reject("not full-dimensional"));
        };
        let dd = dual_cone_q(&dual_cone_q(&c).unwrap()).unwrap();
        prop_assert_eq!(dd.rays(), c.rays());
        for r in &rays {
            prop_assert!(c.contains(r).unwrap());
        }
        Ok(())
    })
}

/// A random two-polarized scenario `[[2n, b], [b, 2n]]` with the cheap claims.
pub fn random_scenario() -> impl Strategy<Value = Scenario> {
    (2u32..=4, -12i64..=12).prop_filter_map("degenerate", |(n, b)| {
        let d = 2 * n as i64;
        if b * b == d * d {
            return None;
        }
        Some(Scenario {
            name: format!("random-n{n}-b{b}"),
            surface_gram: vec![vec![d, b], vec![b, d]],
            hilb_n: n,
            polarizations: vec![vec![1, 0], vec![0, 1]],
            curve_denominators: None,
            mori_generators: vec![],
            ample_generators: vec![],
            ht_predicates: k3cone::conegeom::HTPredicate::defaults(),
            search_box: Default::default(),
            growth_class: None,
            expected: Expectations::default(),
            claim_ids: ["C01", "C03", "C04", "C05", "C06", "C20"].iter().map(|s| s.to_string()).collect(),
        })
    })
}

/// Two runs (parallel and sequential) give identical bytes, and every claim
/// rechecks from its certificate alone.
pub fn report_determinism(cases: u32) -> Result<(), String> {
    run(cases, random_scenario(), |scn| {
        let par = RunOptions { exec: Exec::Parallel, search_height: 20, timings: false };
        let seq = RunOptions { exec: Exec::Sequential, ..par };
        let a = run_claims(&scn, None, &par).unwrap();
        let b = run_claims(&scn, None, &seq).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        let summary = recheck(&a, Exec::Sequential);
        prop_assert!(summary.all_consistent, "{:?}", summary.entries);
        let back = k3cone::runner::parse_scenario(&scn.to_json()).unwrap();
        prop_assert_eq!(back, scn);
        Ok(())
    })
}
