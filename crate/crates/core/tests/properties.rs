mod common;

use common::{run, CASES};
use k3cone::arith::{int, ratio};
use k3cone::conegeom::cone_from_rays;
use k3cone::diophant::{hilbert_symbol, quad_isotropic_rank3, represents, Place, Verdict};
use k3cone::dynamics::j_cones;
use k3cone::hilbscheme::{build_hilb, f_star_reversed};
use k3cone::par::Exec;
use k3cone::quadlat::LatVec;
use k3cone::runner::{builtin, parse_scenario};
use proptest::prelude::*;

#[test]
fn isometry_preservation() {
    common::isometry_preservation(CASES).unwrap();
}

#[test]
fn reflection_involution() {
    common::reflection_involution(CASES).unwrap();
}

#[test]
fn hilbert_product_formula() {
    common::hilbert_product_formula(CASES).unwrap();
}

#[test]
fn pell_completeness() {
    common::pell_completeness(CASES).unwrap();
}

#[test]
fn dual_of_dual() {
    common::dual_of_dual(CASES).unwrap();
}

#[test]
fn report_determinism_and_recheck() {
    common::report_determinism(CASES).unwrap();
}

#[test]
fn hilbert_bimultiplicativity() {
    let nz = (-500i64..=500).prop_filter("nonzero", |x| *x != 0);
    let place = prop_oneof![Just(Place::Infinity), prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]).prop_map(Place::Prime)];
    run(CASES, (nz.clone(), nz.clone(), nz, place), |(a1, a2, b, v)| {
        let lhs = hilbert_symbol(a1 * a2, b, v).unwrap();
        let rhs = hilbert_symbol(a1, b, v).unwrap() * hilbert_symbol(a2, b, v).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(hilbert_symbol(a1, b, v).unwrap(), hilbert_symbol(b, a1, v).unwrap());
        Ok(())
    })
    .unwrap();
}

fn brute_zero(g: &[Vec<i64>], h: i64) -> Option<[i64; 3]> {
    for x in -h..=h {
        for y in -h..=h {
            for z in -h..=h {
                if (x, y, z) == (0, 0, 0) {
                    continue;
                }
                let v = [x, y, z];
                let q: i64 = (0..3).map(|i| (0..3).map(|j| v[i] * g[i][j] * v[j]).sum::<i64>()).sum();
                if q == 0 {
                    return Some(v);
                }
            }
        }
    }
    None
}

#[test]
fn isotropy_matches_brute_force() {
    // 60 forms: 30 diagonal, 30 general symmetric.
    let diag = prop::collection::vec((-9i64..=9).prop_filter("nonzero", |x| *x != 0), 3)
        .prop_map(|d| vec![vec![d[0], 0, 0], vec![0, d[1], 0], vec![0, 0, d[2]]]);
    let general = prop::collection::vec(-4i64..=4, 6).prop_map(|c| vec![vec![c[0], c[1], c[2]], vec![c[1], c[3], c[4]], vec![c[2], c[4], c[5]]]);
    for strat in [diag.boxed(), general.boxed()] {
        run(30, strat, |g| {
            let Ok(cert) = quad_isotropic_rank3(&g, 30, Exec::Parallel) else {
                return Err(TestCaseError::reject("degenerate"));
            };
            prop_assert!(cert.consistent);
            let oracle = brute_zero(&g, 10);
            match cert.verdict {
                Verdict::Isotropic => {
                    let w = cert.witness.clone().unwrap();
                    prop_assert!(w.iter().any(|x| *x != 0));
                    prop_assert_eq!(brute_zero(&g, 0), None);
                    let q: i64 = (0..3).map(|i| (0..3).map(|j| w[i] * g[i][j] * w[j]).sum::<i64>()).sum();
                    prop_assert_eq!(q, 0);
                }
                Verdict::Anisotropic => {
                    prop_assert!(oracle.is_none(), "{:?} has zero {:?}", g, oracle);
                    prop_assert!(cert.obstruction.is_some());
                }
            }
            Ok(())
        })
        .unwrap();
    }
}

#[test]
fn binary_represents_zero_iff_square_discriminant() {
    run(CASES, (-30i64..=30, -30i64..=30, -30i64..=30), |(a, b, c)| {
        if (a, b, c) == (0, 0, 0) {
            return Err(TestCaseError::reject("zero form"));
        }
        let disc = b * b - 4 * a * c;
        let square = disc >= 0 && (disc as f64).sqrt().round().powi(2) as i64 == disc;
        let rep = represents(a, b, c, 0, 1, Exec::Sequential).unwrap();
        prop_assert_eq!(rep.witness().is_some(), square, "({},{},{})", a, b, c);
        if let Some((x, y)) = rep.witness() {
            prop_assert_eq!(a * x * x + b * x * y + c * y * y, 0);
        }
        Ok(())
    })
    .unwrap();
}

#[test]
fn orbit_power_matches_iteration() {
    let hl = build_hilb(&[vec![6, 8], vec![8, 6]], 3, &[]).unwrap();
    let op = f_star_reversed(&hl).unwrap();
    let num = prop::collection::vec(-20i64..=20, 3);
    run(200, (num, 0u32..=20), |(v, m)| {
        let seed = LatVec::new(vec![ratio(v[0], 1), ratio(v[1], 2), ratio(v[2], 1)]);
        let mut cur = seed.clone();
        for _ in 0..m {
            cur = op.apply(&cur).unwrap();
        }
        prop_assert_eq!(op.power(m as i64).unwrap().apply(&seed).unwrap(), cur);
        Ok(())
    })
    .unwrap();
}

#[test]
fn j_cones_meet_along_e() {
    let scn = builtin("hilb3-deg6").unwrap();
    let hl = scn.hilb().unwrap();
    let mori = cone_from_rays(hl.lattice().clone(), &scn.mori_generators).unwrap();
    let j = j_cones(&hl, &mori).unwrap();
    let e = hl.e();
    for x in -4i64..=4 {
        for z in -8i64..=8 {
            for y in -4i64..=4 {
                let v = LatVec::new(vec![int(x).into(), ratio(z, 2), int(y).into()]);
                let both = j.j1.contains(&v).unwrap() && j.j2.contains(&v).unwrap();
                let on_e = x == 0 && y == 0 && z >= 0;
                assert_eq!(both, on_e, "{v:?}");
            }
        }
    }
    assert!(j.j1.contains(&e).unwrap());
}

#[test]
fn scenario_round_trip() {
    run(200, common::random_scenario(), |scn| {
        prop_assert_eq!(parse_scenario(&scn.to_json()).unwrap(), scn);
        Ok(())
    })
    .unwrap();
}
