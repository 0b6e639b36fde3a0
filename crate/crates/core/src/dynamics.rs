//! Orbits of curve classes under `f = ι₂∘ι₁`: the cones `J1, J2`, their
//! images, non-periodicity and the fixed divisor line.

use crate::arith::{fmt_rat, proportionality, rat, rational_sqrt, serde_rat, Int, Rat};
use crate::conegeom::{cone_from_rays, ConeError, RatCone};
use crate::hilbscheme::{beauville_op, f_star, f_star_reversed, lke_basis, HilbError, HilbLattice};
use crate::poly::Poly;
use crate::quadlat::{IsometryOp, LatVec, LatticeError, RationalEnclosure};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DynError {
    #[error(transparent)]
    Hilb(#[from] HilbError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{0} is not an extremal ray of the Mori cone")]
    NotExtremal(String),
    #[error("seed class is zero")]
    ZeroSeed,
    #[error("eigenvalue {eigenvalue} has a {dim}-dimensional eigenspace, expected a line")]
    EigenspaceDim { eigenvalue: String, dim: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JConePair {
    pub j1: RatCone,
    pub j2: RatCone,
    /// `[L_i, K_i, E]` for `i = 1, 2`.
    pub generators: [[LatVec; 3]; 2],
}

/// `J_i = cone(L_i, K_i, E)`, each generator checked extremal in `mori`.
pub fn j_cones(hl: &HilbLattice, mori: &RatCone) -> Result<JConePair, DynError> {
    let names = ["L", "K", "E"];
    let mut gens = Vec::with_capacity(2);
    let mut cones = Vec::with_capacity(2);
    for i in 1..=2 {
        let b = lke_basis(hl, i)?;
        for (v, n) in b.iter().zip(names) {
            if !mori.is_extremal(v)? {
                return Err(DynError::NotExtremal(format!("{n}{i}")));
            }
        }
        cones.push(cone_from_rays(hl.lattice().clone(), &b)?);
        gens.push(b);
    }
    let g2 = gens.pop().unwrap();
    let g1 = gens.pop().unwrap();
    let j2 = cones.pop().unwrap();
    let j1 = cones.pop().unwrap();
    Ok(JConePair { j1, j2, generators: [g1, g2] })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageCheck {
    pub source: LatVec,
    pub image: LatVec,
    pub facet_pairings: Vec<String>,
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionCertificate {
    pub operator: Vec<Vec<String>>,
    pub target_facets: Vec<Vec<String>>,
    pub images: Vec<ImageCheck>,
    pub passed: bool,
}

pub fn matrix_strings(op: &IsometryOp) -> Vec<Vec<String>> {
    op.matrix().to_rows().iter().map(|r| r.iter().map(fmt_rat).collect()).collect()
}

/// Maps every generator and tests membership in `dst` facet by facet.
pub fn cone_inclusion_check(op: &IsometryOp, generators: &[LatVec], dst: &RatCone) -> Result<InclusionCertificate, DynError> {
    let mut images = Vec::with_capacity(generators.len());
    for g in generators {
        let image = op.apply(g)?;
        let pairings = dst.facet_pairings(&image)?;
        let inside = pairings.iter().all(|p| !p.is_negative());
        images.push(ImageCheck { source: g.clone(), image, facet_pairings: pairings.iter().map(fmt_rat).collect(), inside });
    }
    let passed = images.iter().all(|i| i.inside);
    Ok(InclusionCertificate {
        operator: matrix_strings(op),
        target_facets: dst.facets().iter().map(|f| f.iter().map(|x| x.to_string()).collect()).collect(),
        images,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundarySide {
    pub index: usize,
    /// Facet vector of the Mori cone through `K_i` and `E`.
    pub facet: LatVec,
    pub with_k: String,
    pub with_e: String,
    pub with_l: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCertificate {
    pub sides: Vec<BoundarySide>,
    pub passed: bool,
}

/// For each `i`, the Mori facet through `K_i` and `E` vanishes on both and is
/// positive on `L_i`, so removing a multiple of `L_i` keeps a class of `J_i`
/// on the right side of that facet.
pub fn boundary_pairing_check(hl: &HilbLattice, mori: &RatCone) -> Result<BoundaryCertificate, DynError> {
    let lat = hl.lattice();
    let mut sides = Vec::new();
    let mut passed = true;
    for i in 1..=2 {
        let [l, k, e] = lke_basis(hl, i)?;
        let tk = mori.tight_facets(&k)?;
        let te = mori.tight_facets(&e)?;
        let common: Vec<usize> = tk.into_iter().filter(|f| te.contains(f)).collect();
        if common.len() != 1 {
            passed = false;
            continue;
        }
        let facet = LatVec::from_ints(&mori.facets()[common[0]]);
        let (pk, pe, pl) = (lat.pair(&facet, &k)?, lat.pair(&facet, &e)?, lat.pair(&facet, &l)?);
        passed &= pk.is_zero() && pe.is_zero() && pl.is_positive();
        sides.push(BoundarySide { index: i, facet, with_k: fmt_rat(&pk), with_e: fmt_rat(&pe), with_l: fmt_rat(&pl) });
    }
    Ok(BoundaryCertificate { sides, passed })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitStep {
    pub m: u32,
    pub class: LatVec,
    pub in_j1: Option<bool>,
    #[serde(with = "serde_rat")]
    pub ample_pairing: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub seed: LatVec,
    pub ample: LatVec,
    pub steps: Vec<OrbitStep>,
}

/// `(f_*)^m seed` for `m = 0..=steps`, by repeated application.
pub fn orbit(hl: &HilbLattice, seed: &LatVec, steps: u32, ample: &LatVec, j1: Option<&RatCone>) -> Result<OrbitRecord, DynError> {
    let op = f_star_reversed(hl)?;
    let lat = hl.lattice();
    let mut cur = seed.clone();
    let mut out = Vec::with_capacity(steps as usize + 1);
    for m in 0..=steps {
        let in_j1 = j1.map(|c| c.contains(&cur)).transpose()?;
        out.push(OrbitStep { m, class: cur.clone(), in_j1, ample_pairing: lat.pair(ample, &cur)? });
        cur = op.apply(&cur)?;
    }
    Ok(OrbitRecord { seed: seed.clone(), ample: ample.clone(), steps: out })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenlineCheck {
    #[serde(with = "serde_rat")]
    pub eigenvalue: Rat,
    #[serde(with = "crate::arith::serde_int_vec")]
    pub line: Vec<Int>,
    pub seed_on_line: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicityCertificate {
    pub operator: Vec<Vec<String>>,
    pub char_poly: String,
    pub squarefree: bool,
    pub all_roots_positive: bool,
    pub rational_eigenlines: Vec<EigenlineCheck>,
    /// Part of the characteristic polynomial with no rational roots.
    pub irrational_factor: String,
    pub irrational_factor_discriminant: Option<String>,
    pub discriminant_is_square: Option<bool>,
    pub max_m: u32,
    /// First `m` with `(f_*)^m seed` proportional to the seed.
    pub ray_return: Option<u32>,
    pub growth: Option<GrowthCheck>,
    pub periodic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCheck {
    pub m: u32,
    pub ample: LatVec,
    pub ratio: String,
    pub enclosure: RationalEnclosure,
    /// `|ratio − λ| ≤ λ/100` for every `λ` in the enclosure.
    pub within_one_percent: bool,
}

fn poly_string(p: &Poly) -> String {
    p.to_string()
}

/// Certifies that no power of `f_*` maps `seed` to a multiple of itself.
///
/// When the characteristic polynomial is squarefree with only positive real
/// roots, the powers of `f_*` share its eigenlines, so periodicity would put
/// `seed` on a rational eigenline of `f_*`. The orbit sweep to `max_m` checks
/// the same thing directly.
pub fn periodicity_certificate(hl: &HilbLattice, seed: &LatVec, max_m: u32, growth_at: Option<(u32, &LatVec)>) -> Result<PeriodicityCertificate, DynError> {
    if seed.is_zero() {
        return Err(DynError::ZeroSeed);
    }
    hl.lattice().check(seed)?;
    let op = f_star_reversed(hl)?;
    let cp = op.char_poly();
    let squarefree = cp.is_squarefree();
    let bound = cp.root_bound();
    let all_roots_positive = Some(cp.count_roots_in(&Rat::zero(), &bound)) == cp.degree();
    let mut rest = cp.clone();
    let mut lines = Vec::new();
    for es in op.rational_eigenlines() {
        rest = rest.div_rem(&Poly::linear_root(&es.eigenvalue)).0;
        for line in es.basis {
            let on = proportionality(seed.coords(), &crate::arith::int_to_rat(&line)).is_some();
            lines.push(EigenlineCheck { eigenvalue: es.eigenvalue.clone(), line, seed_on_line: on });
        }
    }
    let (disc, disc_sq) = if rest.degree() == Some(2) {
        let d = rest.discriminant();
        let sq = rational_sqrt(&d).is_some();
        (Some(fmt_rat(&d)), Some(sq))
    } else {
        (None, None)
    };
    let mut ray_return = None;
    let mut cur = seed.clone();
    for m in 1..=max_m {
        cur = op.apply(&cur)?;
        if proportionality(cur.coords(), seed.coords()).is_some() {
            ray_return = Some(m);
            break;
        }
    }
    let growth = match growth_at {
        None => None,
        Some((m, ample)) if m >= 1 => {
            let rec = orbit(hl, seed, m, ample, None)?;
            let (prev, last) = (&rec.steps[m as usize - 1].ample_pairing, &rec.steps[m as usize].ample_pairing);
            if prev.is_zero() {
                None
            } else {
                let ratio = last / prev;
                let enc = op.spectral_radius_enclosure(&Rat::new(1.into(), 1000.into()))?;
                let tol_lo = &enc.lo / rat(100);
                let within = (&ratio - &enc.lo).abs() <= tol_lo && (&ratio - &enc.hi).abs() <= tol_lo;
                Some(GrowthCheck { m, ample: ample.clone(), ratio: fmt_rat(&ratio), enclosure: enc, within_one_percent: within })
            }
        }
        Some(_) => None,
    };
    let on_rational = lines.iter().any(|l| l.seed_on_line);
    let periodic = ray_return.is_some() || on_rational || !(squarefree && all_roots_positive);
    Ok(PeriodicityCertificate {
        operator: matrix_strings(&op),
        char_poly: poly_string(&cp),
        squarefree,
        all_roots_positive,
        rational_eigenlines: lines,
        irrational_factor: poly_string(&rest),
        irrational_factor_discriminant: disc,
        discriminant_is_square: disc_sq,
        max_m,
        ray_return,
        growth,
        periodic,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantDivisorCertificate {
    pub operator: Vec<Vec<String>>,
    /// Primitive generator of the eigenvalue-1 line of `f*`.
    pub line: LatVec,
    pub square: String,
    /// `(k, ι_k*(w))` for each involution.
    pub images: Vec<(usize, LatVec)>,
    pub negated_by: Vec<usize>,
    pub proportional_to_e: bool,
    pub e_square: String,
    /// `q(E)/q(w)`: a rational square iff some rational multiple of `w` has the square of `E`.
    pub e_ratio: String,
    pub e_ratio_is_square: bool,
    pub ample_pairings: Vec<(LatVec, String)>,
    pub passed: bool,
}

/// The eigenvalue-1 line of `op`; an error unless it is exactly one-dimensional.
pub fn fixed_line(op: &IsometryOp) -> Result<Vec<Int>, DynError> {
    let es = op.rational_eigenlines();
    let one = es.iter().find(|e| e.eigenvalue == rat(1));
    match one {
        Some(e) if e.basis.len() == 1 => {
            let mut v = e.basis[0].clone();
            if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                v = v.iter().map(|x| -x).collect();
            }
            Ok(v)
        }
        Some(e) => Err(DynError::EigenspaceDim { eigenvalue: "1".into(), dim: e.basis.len() }),
        None => Err(DynError::EigenspaceDim { eigenvalue: "1".into(), dim: 0 }),
    }
}

/// Every `f`-invariant divisor class is a multiple of `w`; an involution
/// preserving effectivity negates `w`, so no nonzero multiple is effective.
pub fn invariant_divisor_report(hl: &HilbLattice, ample: &[LatVec]) -> Result<InvariantDivisorCertificate, DynError> {
    invariant_divisor_report_for(hl, &f_star(hl)?, ample)
}

pub fn invariant_divisor_report_for(hl: &HilbLattice, op: &IsometryOp, ample: &[LatVec]) -> Result<InvariantDivisorCertificate, DynError> {
    let lat = hl.lattice();
    let w = LatVec::from_ints(&fixed_line(op)?);
    let square = lat.square(&w)?;
    let mut images = Vec::new();
    let mut negated_by = Vec::new();
    for k in 1..=hl.polarizations().len() {
        let Ok(iota) = beauville_op(hl, k) else { continue };
        let img = iota.apply(&w)?;
        if img == w.neg() {
            negated_by.push(k);
        }
        images.push((k, img));
    }
    let e = hl.e();
    let proportional_to_e = proportionality(w.coords(), e.coords()).is_some();
    let e_sq = lat.square(&e)?;
    let (ratio, ratio_sq) = if square.is_zero() {
        ("undefined".to_string(), false)
    } else {
        let r = &e_sq / &square;
        let sq = rational_sqrt(&r).is_some();
        (fmt_rat(&r), sq)
    };
    let mut ample_pairings = Vec::new();
    for a in ample {
        ample_pairings.push((a.clone(), fmt_rat(&lat.pair(a, &w)?)));
    }
    let passed = !negated_by.is_empty() && !proportional_to_e && !ratio_sq;
    Ok(InvariantDivisorCertificate {
        operator: matrix_strings(op),
        line: w,
        square: fmt_rat(&square),
        images,
        negated_by,
        proportional_to_e,
        e_square: fmt_rat(&e_sq),
        e_ratio: ratio,
        e_ratio_is_square: ratio_sq,
        ample_pairings,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionCertificate {
    /// `h1·(2h1 − h2)` on the surface.
    pub degree: String,
    /// `(h2 − h1)·h2`; negative against an ample class, so `h2 − h1` is not effective.
    pub difference_pairing: String,
    pub source: LatVec,
    pub image: LatVec,
    pub expected_image: LatVec,
    pub passed: bool,
}

/// Numerical inputs to the disjointness of the two lagrangian planes.
pub fn intersection_emptiness_numerics(hl: &HilbLattice) -> Result<IntersectionCertificate, DynError> {
    let s = hl.surface();
    let h1 = LatVec::from_i64(&[1, 0]);
    let h2 = LatVec::from_i64(&[0, 1]);
    if s.rank() != 2 {
        return Err(HilbError::NotTwoPolarized.into());
    }
    let degree = s.pair(&h1, &h1.scale(&rat(2)).sub(&h2))?;
    let diff = s.pair(&h2.sub(&h1), &h2)?;
    let [l1, _, _] = lke_basis(hl, 1)?;
    let [_, k2, _] = lke_basis(hl, 2)?;
    let image = beauville_op(hl, 1)?.apply(&k2)?;
    let passed = degree.is_positive() && diff.is_negative() && image == l1;
    Ok(IntersectionCertificate {
        degree: fmt_rat(&degree),
        difference_pairing: fmt_rat(&diff),
        source: k2,
        image,
        expected_image: l1,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::hilbscheme::build_hilb;

    fn setup() -> (HilbLattice, RatCone) {
        let hl = build_hilb(&[vec![6, 8], vec![8, 6]], 3, &[]).unwrap();
        let rays = vec![
            LatVec::from_i64(&[0, 1, 0]),
            LatVec::new(vec![rat(1), ratio(-3, 2), rat(0)]),
            LatVec::new(vec![rat(0), ratio(-3, 2), rat(1)]),
            LatVec::new(vec![rat(2), ratio(-1, 2), rat(-1)]),
            LatVec::new(vec![rat(-1), ratio(-1, 2), rat(2)]),
        ];
        let mori = cone_from_rays(hl.lattice().clone(), &rays).unwrap();
        (hl, mori)
    }

    #[test]
    fn j_cones_and_membership() {
        let (hl, mori) = setup();
        let j = j_cones(&hl, &mori).unwrap();
        let [l1, _, e] = j.generators[0].clone();
        let [l2, _, _] = j.generators[1].clone();
        assert!(j.j1.contains(&e).unwrap());
        assert!(!j.j1.contains(&l2).unwrap());
        assert!(!j.j2.contains(&l1).unwrap());
        let i1 = beauville_op(&hl, 1).unwrap();
        let i2 = beauville_op(&hl, 2).unwrap();
        assert!(cone_inclusion_check(&i1, &j.generators[0], &j.j2).unwrap().passed);
        assert!(cone_inclusion_check(&i2, &j.generators[1], &j.j1).unwrap().passed);
        let id = IsometryOp::identity(hl.lattice().clone());
        assert!(cone_inclusion_check(&id, &j.generators[0], &j.j1).unwrap().passed);
        assert!(!cone_inclusion_check(&id, &j.generators[0], &j.j2).unwrap().passed);
    }

    #[test]
    fn boundary_values() {
        let (hl, mori) = setup();
        let b = boundary_pairing_check(&hl, &mori).unwrap();
        assert!(b.passed);
        assert_eq!(b.sides[0].facet, LatVec::from_i64(&[-2, 0, 5]));
        assert_eq!((b.sides[0].with_l.as_str(), b.sides[0].with_k.as_str(), b.sides[0].with_e.as_str()), ("14", "0", "0"));
        assert_eq!(b.sides[1].facet, LatVec::from_i64(&[5, 0, -2]));
    }

    #[test]
    fn l1_orbit_stays_in_j1_and_is_not_periodic() {
        let (hl, mori) = setup();
        let j = j_cones(&hl, &mori).unwrap();
        let l1 = j.generators[0][0].clone();
        let ample = LatVec::from_i64(&[3, -7, 3]);
        let rec = orbit(&hl, &l1, 20, &ample, Some(&j.j1)).unwrap();
        assert!(rec.steps.iter().all(|s| s.in_j1 == Some(true)));
        assert!(rec.steps[0].ample_pairing.is_zero());
        let op = f_star_reversed(&hl).unwrap();
        assert_eq!(rec.steps[7].class, op.power(7).unwrap().apply(&l1).unwrap());
        let cert = periodicity_certificate(&hl, &l1, 20, Some((6, &ample))).unwrap();
        assert!(!cert.periodic);
        assert_eq!(cert.irrational_factor_discriminant.as_deref(), Some("192"));
        assert_eq!(cert.discriminant_is_square, Some(false));
        assert!(cert.growth.unwrap().within_one_percent);
        let fixed = periodicity_certificate(&hl, &LatVec::from_i64(&[2, -7, 2]), 5, None).unwrap();
        assert!(fixed.periodic);
        assert_eq!(fixed.ray_return, Some(1));
        assert_eq!(periodicity_certificate(&hl, &LatVec::zero(3), 5, None), Err(DynError::ZeroSeed));
    }

    #[test]
    fn invariant_divisor() {
        let (hl, _) = setup();
        let amp = [LatVec::from_i64(&[5, 0, -2])];
        let c = invariant_divisor_report(&hl, &amp).unwrap();
        assert_eq!(c.line, LatVec::from_i64(&[2, -7, 2]));
        assert_eq!(c.square, "-84");
        assert_eq!(c.negated_by, vec![1, 2]);
        assert_eq!(c.e_ratio, "1/21");
        assert_eq!(c.ample_pairings[0].1, "84");
        assert!(c.passed);
        let id = IsometryOp::identity(hl.lattice().clone());
        assert!(matches!(invariant_divisor_report_for(&hl, &id, &amp), Err(DynError::EigenspaceDim { dim: 3, .. })));
    }

    #[test]
    fn intersection_numbers() {
        let (hl, _) = setup();
        let c = intersection_emptiness_numerics(&hl).unwrap();
        assert_eq!((c.degree.as_str(), c.difference_pairing.as_str()), ("4", "-2"));
        assert_eq!(c.image, LatVec::new(vec![rat(0), ratio(-3, 2), rat(1)]));
        assert!(c.passed);
    }
}
