//! Rational polyhedral cones of rank at most 4, dual with respect to the
//! lattice form, plus the extremal-ray predicates and the brute-force replay
//! of the Mori cone computation.
//!
//! A facet is stored as the vector `v` whose halfspace is `{w : q(v, w) ≥ 0}`.

use crate::arith::{gcd_of, int, int_to_rat, primitive_integral, rat, to_i64, Int, Rat};
use crate::hilbscheme::{HilbError, HilbLattice, E_INDEX};
use crate::linalg::QMat;
use crate::par::{map_slice, Exec};
use crate::quadlat::{LatVec, LatticeError, QuadLattice};
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub const MAX_RANK: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Hilb(#[from] HilbError),
    #[error("cone engine supports rank at most {MAX_RANK}, got {0}")]
    RankTooLarge(usize),
    #[error("zero vector cannot generate a ray")]
    ZeroRay,
    #[error("rays span a subspace of dimension {span} in rank {rank}")]
    NotFullDimensional { span: usize, rank: usize },
    #[error("cone contains a line")]
    ContainsLine,
    #[error("predicate list is empty")]
    NoPredicates,
    #[error("search box bounds must be nonnegative and the denominator positive")]
    BadBox,
}

#[derive(Clone, PartialEq, Eq)]
pub struct RatCone {
    lattice: Arc<QuadLattice>,
    rays: Vec<Vec<Int>>,
    facets: Vec<Vec<Int>>,
}

impl fmt::Debug for RatCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Vec<Vec<Int>>| v.iter().map(|r| format!("{r:?}")).collect::<Vec<_>>().join(" ");
        write!(f, "RatCone {{ rays: {}, facets: {} }}", show(&self.rays), show(&self.facets))
    }
}

fn to_rat_rows(v: &[Vec<Int>]) -> Vec<Vec<Rat>> {
    v.iter().map(|r| int_to_rat(r)).collect()
}

fn dot(a: &[Int], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| Rat::from_integer(x.clone()) * y).sum()
}

/// Integer subsets of size `k` from `0..n`, in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Inequalities `a·w ≥ 0` (plain dot product) cutting out cone(rays).
fn facet_normals(rays: &[Vec<Int>], d: usize) -> Vec<Vec<Int>> {
    let rr = to_rat_rows(rays);
    if d == 1 {
        return vec![vec![if rays[0][0].is_positive() { int(1) } else { int(-1) }]];
    }
    let mut normals: BTreeSet<Vec<Int>> = BTreeSet::new();
    for sub in subsets(rays.len(), d - 1) {
        let m = QMat::from_rows(sub.iter().map(|&i| rr[i].clone()).collect());
        if m.rank() != d - 1 {
            continue;
        }
        let ker = m.kernel();
        let a = primitive_integral(&ker[0]).expect("kernel vector is nonzero");
        let signs: Vec<Rat> = rr.iter().map(|r| dot(&a, r)).collect();
        let a = if signs.iter().all(|s| !s.is_negative()) {
            a
        } else if signs.iter().all(|s| !s.is_positive()) {
            a.iter().map(|x| -x).collect()
        } else {
            continue;
        };
        normals.insert(a);
    }
    normals.into_iter().collect()
}

impl RatCone {
    pub fn lattice(&self) -> &Arc<QuadLattice> {
        &self.lattice
    }

    /// Primitive integral extremal rays, sorted.
    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    /// Primitive integral facet vectors, sorted.
    pub fn facets(&self) -> &[Vec<Int>] {
        &self.facets
    }

    pub fn ray_vecs(&self) -> Vec<LatVec> {
        self.rays.iter().map(|r| LatVec::from_ints(r)).collect()
    }

    /// `q(f, v)` for every facet `f`, in facet order.
    pub fn facet_pairings(&self, v: &LatVec) -> Result<Vec<Rat>, ConeError> {
        self.lattice.check(v)?;
        self.facets
            .iter()
            .map(|f| Ok(self.lattice.pair(&LatVec::from_ints(f), v)?))
            .collect()
    }

    pub fn contains(&self, v: &LatVec) -> Result<bool, ConeError> {
        Ok(self.facet_pairings(v)?.iter().all(|s| !s.is_negative()))
    }

    /// Indices of facets on which `v` vanishes.
    pub fn tight_facets(&self, v: &LatVec) -> Result<Vec<usize>, ConeError> {
        Ok(self.facet_pairings(v)?.iter().enumerate().filter(|(_, s)| s.is_zero()).map(|(i, _)| i).collect())
    }

    /// Nonzero, inside, and on `rank − 1` independent facets.
    pub fn is_extremal(&self, v: &LatVec) -> Result<bool, ConeError> {
        if v.is_zero() || !self.contains(v)? {
            return Ok(false);
        }
        let d = self.lattice.rank();
        let tight = self.tight_facets(v)?;
        if d == 1 {
            return Ok(true);
        }
        if tight.is_empty() {
            return Ok(false);
        }
        let m = QMat::from_rows(tight.iter().map(|&i| int_to_rat(&self.facets[i])).collect());
        Ok(m.rank() == d - 1)
    }

    /// Same ray set, compared projectively.
    pub fn same_rays(&self, rays: &[LatVec]) -> bool {
        let mut other: Vec<Vec<Int>> = rays.iter().filter_map(|r| r.primitive()).collect();
        other.sort();
        other.dedup();
        other == self.rays
    }
}

/// Cone generated by `rays`. Redundant generators are dropped.
pub fn cone_from_rays(lat: Arc<QuadLattice>, rays: &[LatVec]) -> Result<RatCone, ConeError> {
    let d = lat.rank();
    if d > MAX_RANK {
        return Err(ConeError::RankTooLarge(d));
    }
    let mut prim: Vec<Vec<Int>> = Vec::with_capacity(rays.len());
    for r in rays {
        lat.check(r)?;
        prim.push(r.primitive().ok_or(ConeError::ZeroRay)?);
    }
    prim.sort();
    prim.dedup();
    let span = QMat::from_rows(to_rat_rows(&prim)).rank();
    if span != d {
        return Err(ConeError::NotFullDimensional { span, rank: d });
    }
    let normals = facet_normals(&prim, d);
    if normals.is_empty() || QMat::from_rows(to_rat_rows(&normals)).rank() != d {
        return Err(ConeError::ContainsLine);
    }
    // Keep only rays lying on d − 1 independent facets.
    let rays: Vec<Vec<Int>> = prim
        .into_iter()
        .filter(|r| {
            let rr = int_to_rat(r);
            let tight: Vec<Vec<Rat>> = normals.iter().filter(|a| dot(a, &rr).is_zero()).map(|a| int_to_rat(a)).collect();
            d == 1 || (!tight.is_empty() && QMat::from_rows(tight).rank() == d - 1)
        })
        .collect();
    let ginv = lat.gram().inverse().ok_or(LatticeError::Degenerate)?;
    let mut facets: Vec<Vec<Int>> = normals
        .iter()
        .map(|a| primitive_integral(&ginv.mul_vec(&int_to_rat(a))).expect("nonzero"))
        .collect();
    facets.sort();
    Ok(RatCone { lattice: lat, rays, facets })
}

/// `{v : q(v, w) ≥ 0 for all w in the cone}`.
pub fn dual_cone_q(cone: &RatCone) -> Result<RatCone, ConeError> {
    let rays: Vec<LatVec> = cone.facets.iter().map(|f| LatVec::from_ints(f)).collect();
    cone_from_rays(cone.lattice.clone(), &rays)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Div {
    None,
    TwoNotFour,
    Four,
    Two,
}

impl Div {
    /// Evaluates the rule on the surface coordinates.
    pub fn holds(self, coords: &[Int]) -> bool {
        let all = |m: i64| coords.iter().all(|c| (c % int(m)).is_zero());
        match self {
            Div::None => true,
            Div::Two => all(2),
            Div::Four => all(4),
            Div::TwoNotFour => all(2) && !all(4),
        }
    }
}

impl fmt::Display for Div {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Div::None => "none",
            Div::TwoNotFour => "2-not-4",
            Div::Four => "4",
            Div::Two => "2",
        })
    }
}

impl FromStr for Div {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Div::None),
            "2-not-4" => Ok(Div::TwoNotFour),
            "4" => Ok(Div::Four),
            "2" => Ok(Div::Two),
            other => Err(format!("unknown divisibility rule '{other}'")),
        }
    }
}

impl Serialize for Div {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Div {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `q(R, R) = square`, a divisibility rule on the surface coordinates of the
/// primitive integral representative, and `q(R, H1) ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HTPredicate {
    pub square: i64,
    pub div: Div,
}

impl HTPredicate {
    pub fn defaults() -> Vec<HTPredicate> {
        vec![
            HTPredicate { square: -2, div: Div::None },
            HTPredicate { square: -4, div: Div::TwoNotFour },
            HTPredicate { square: -4, div: Div::Four },
            HTPredicate { square: -12, div: Div::Two },
            HTPredicate { square: -36, div: Div::Four },
        ]
    }

    /// Evaluated on a primitive integral vector; positivity is checked separately.
    pub fn matches(&self, lat: &QuadLattice, primitive: &[Int]) -> bool {
        let v = LatVec::from_ints(primitive);
        let Ok(sq) = lat.square(&v) else { return false };
        sq == rat(self.square) && self.div.holds(&surface_coords(primitive))
    }
}

fn surface_coords(v: &[Int]) -> Vec<Int> {
    v.iter().enumerate().filter(|(i, _)| *i != E_INDEX).map(|(_, x)| x.clone()).collect()
}

/// Box `|x|, |y| ≤ h_bound` on surface coordinates and E-coefficient
/// `k / e_denominator` with `|k| ≤ e_numerator_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBox {
    pub h_bound: i64,
    pub e_numerator_bound: i64,
    pub e_denominator: i64,
}

impl Default for SearchBox {
    fn default() -> Self {
        SearchBox { h_bound: 6, e_numerator_bound: 12, e_denominator: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    #[serde(with = "crate::arith::serde_int_vec")]
    pub primitive: Vec<Int>,
    pub square: i64,
    pub h1_pairing: i64,
    /// Indices into the predicate list.
    pub predicates: Vec<usize>,
}

/// Primitive classes from the box satisfying some predicate, deduplicated by
/// ray and sorted.
pub fn ht_candidates(hl: &HilbLattice, predicates: &[HTPredicate], sbox: &SearchBox) -> Result<Vec<Candidate>, ConeError> {
    if predicates.is_empty() {
        return Err(ConeError::NoPredicates);
    }
    if sbox.h_bound < 0 || sbox.e_numerator_bound < 0 || sbox.e_denominator < 1 {
        return Err(ConeError::BadBox);
    }
    let lat = hl.lattice();
    let h1 = hl.polarization(1)?.clone();
    let r = hl.surface().rank();
    let mut seen: BTreeSet<Vec<Int>> = BTreeSet::new();
    let mut out = Vec::new();
    let hb = sbox.h_bound;
    let total = (2 * hb + 1).pow(r as u32);
    for code in 0..total {
        let mut c = code;
        let mut surf = Vec::with_capacity(r);
        for _ in 0..r {
            surf.push(c % (2 * hb + 1) - hb);
            c /= 2 * hb + 1;
        }
        for k in -sbox.e_numerator_bound..=sbox.e_numerator_bound {
            let mut coords: Vec<Rat> = surf.iter().map(|&x| rat(x)).collect();
            coords.insert(E_INDEX, Rat::new(int(k), int(sbox.e_denominator)));
            let v = LatVec::new(coords);
            let Some(p) = v.primitive() else { continue };
            if seen.contains(&p) {
                continue;
            }
            let pv = LatVec::from_ints(&p);
            let h1p = lat.pair(&pv, &h1)?;
            if h1p.is_negative() {
                continue;
            }
            let idx: Vec<usize> =
                predicates.iter().enumerate().filter(|(_, pr)| pr.matches(lat, &p)).map(|(i, _)| i).collect();
            if idx.is_empty() {
                continue;
            }
            seen.insert(p.clone());
            let square = lat.square(&pv)?.to_integer().to_i64().unwrap_or(i64::MIN);
            out.push(Candidate { primitive: p, square, h1_pairing: h1p.to_integer().to_i64().unwrap_or(0), predicates: idx });
        }
    }
    out.sort_by(|a, b| a.primitive.cmp(&b.primitive));
    Ok(out)
}

/// Coefficients of the lattice form restricted to `x·H1 + y·H2 + z·E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub e: i64,
}

impl PlaneForm {
    pub fn of(hl: &HilbLattice) -> Result<PlaneForm, ConeError> {
        let lat = hl.lattice();
        let h1 = hl.polarization(1)?;
        let h2 = hl.polarization(2)?;
        let get = |v: &LatVec, w: &LatVec| -> Result<i64, ConeError> {
            Ok(lat.pair(v, w)?.to_integer().to_i64().ok_or(LatticeError::Degenerate)?)
        };
        Ok(PlaneForm { a: get(h1, h1)?, b: get(h1, h2)?, c: get(h2, h2)?, e: get(&hl.e(), &hl.e())? })
    }

    pub fn q(&self, x: i64, y: i64, z: i64) -> i128 {
        let (x, y, z) = (x as i128, y as i128, z as i128);
        self.a as i128 * x * x + 2 * self.b as i128 * x * y + self.c as i128 * y * y + self.e as i128 * z * z
    }

    /// `b² − ac`.
    pub fn delta(&self) -> i64 {
        self.b * self.b - self.a * self.c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayHit {
    /// `(x, y, z)` with `R = x·H1 + y·H2 + z·E`.
    pub xyz: [i64; 3],
    pub square: i64,
    pub facet_value: i64,
    pub primitive: bool,
    pub predicate_match: bool,
}

/// One violated inequality and one square value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayCase {
    #[serde(with = "crate::arith::serde_int_vec")]
    pub facet: Vec<Int>,
    /// `φ(R) = p·x + r·y + w·z`.
    pub p: i64,
    pub r: i64,
    pub w: i64,
    pub square: i64,
    /// `p²·a·q(R,R) < α·y² + 2β·yz + γ·z²` on the region; finite iff negative definite.
    pub bound_form: [i64; 3],
    pub finite: bool,
    pub y_bound: i64,
    pub z_bound: i64,
    pub visited: u64,
    pub hits: Vec<ReplayHit>,
}

impl ReplayCase {
    pub fn counterexamples(&self) -> usize {
        self.hits.iter().filter(|h| h.primitive && h.predicate_match).count()
    }
}

/// Classes with `q(R, H1) = 0`: `(x, y) = m·d` for the primitive direction `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalAnalysis {
    pub direction: [i64; 2],
    pub direction_square: i64,
    pub finite: bool,
    /// `(m, z, square)` with `m²·q(d) + e·z² = square`.
    pub solutions: Vec<[i64; 3]>,
    pub only_multiples_of_e: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoriReplay {
    pub form: PlaneForm,
    pub delta: i64,
    pub identity: String,
    pub squares: Vec<i64>,
    pub cases: Vec<ReplayCase>,
    pub orthogonal: OrthogonalAnalysis,
    pub counterexamples: usize,
    pub all_finite: bool,
    pub passed: bool,
}

fn floor_sqrt_ratio(num: i128, den: i128) -> i64 {
    if num <= 0 || den <= 0 {
        return 0;
    }
    let q = num / den;
    let r = (q as u128).sqrt() as i128;
    r.min(i64::MAX as i128) as i64
}

const REPLAY_BOUND_CAP: i64 = 100_000;

fn replay_case(form: &PlaneForm, facet: &[Int], prw: (i64, i64, i64), s: i64, lat: &QuadLattice, hl: &HilbLattice, preds: &[HTPredicate]) -> ReplayCase {
    let (p, r, w) = prw;
    let (a, b) = (form.a as i128, form.b as i128);
    let delta = form.delta() as i128;
    let (pi, ri, wi) = (p as i128, r as i128, w as i128);
    // t = a x + b y; φ < 0 with p > 0 gives t < (c1 y + c2 z) / p.
    let c1 = pi * b - a * ri;
    let c2 = -a * wi;
    let alpha = c1 * c1 - delta * pi * pi;
    let beta = c1 * c2;
    let gamma = c2 * c2 + a * form.e as i128 * pi * pi;
    let det = alpha * gamma - beta * beta;
    let finite = p > 0 && a > 0 && alpha < 0 && det > 0;
    let mut case = ReplayCase {
        facet: facet.to_vec(),
        p,
        r,
        w,
        square: s,
        bound_form: [alpha as i64, beta as i64, gamma as i64],
        finite,
        y_bound: 0,
        z_bound: 0,
        visited: 0,
        hits: vec![],
    };
    if !finite {
        return case;
    }
    let k = (-(a * s as i128) * pi * pi).max(0);
    let yb = floor_sqrt_ratio(k * -gamma, det);
    let zb = floor_sqrt_ratio(k * -alpha, det);
    if yb > REPLAY_BOUND_CAP || zb > REPLAY_BOUND_CAP {
        case.finite = false;
        return case;
    }
    case.y_bound = yb;
    case.z_bound = zb;
    for y in -yb..=yb {
        for z in -zb..=zb {
            let num = c1 * y as i128 + c2 * z as i128;
            if num <= 0 {
                continue;
            }
            // largest t with t < num / p
            let t_max = (num - 1).div_euclid(pi);
            for t in 1..=t_max {
                case.visited += 1;
                let xn = t - b * y as i128;
                if xn.rem_euclid(a) != 0 {
                    continue;
                }
                let x = (xn / a) as i64;
                if form.q(x, y, z) != s as i128 {
                    continue;
                }
                let phi = pi * x as i128 + ri * y as i128 + wi * z as i128;
                if phi >= 0 {
                    continue;
                }
                let primitive = x.gcd(&y).gcd(&z) == 1;
                let predicate_match = primitive
                    && hl
                        .class(rat(x), rat(y), rat(z))
                        .ok()
                        .and_then(|v| v.primitive())
                        .is_some_and(|pv| preds.iter().any(|pr| pr.square == s && pr.matches(lat, &pv)));
                case.hits.push(ReplayHit { xyz: [x, y, z], square: s, facet_value: phi as i64, primitive, predicate_match });
            }
        }
    }
    case
}

fn orthogonal_analysis(form: &PlaneForm, squares: &[i64]) -> OrthogonalAnalysis {
    let g = form.a.gcd(&form.b).max(1);
    let d = [form.b / g, -form.a / g];
    let dsq = form.q(d[0], d[1], 0) as i64;
    let finite = dsq < 0 && form.e < 0;
    let mut solutions = Vec::new();
    if finite {
        for &s in squares {
            if s >= 0 {
                continue;
            }
            let mmax = floor_sqrt_ratio(s as i128, dsq as i128);
            for m in -mmax..=mmax {
                let rest = s as i128 - dsq as i128 * (m as i128) * (m as i128);
                if rest % form.e as i128 != 0 {
                    continue;
                }
                let z2 = rest / form.e as i128;
                if z2 < 0 {
                    continue;
                }
                let z = (z2 as u128).sqrt() as i128;
                if z * z == z2 {
                    for zz in if z == 0 { vec![0] } else { vec![-z, z] } {
                        solutions.push([m, zz as i64, s]);
                    }
                }
            }
        }
    }
    let only = finite && solutions.iter().all(|s| s[0] == 0);
    OrthogonalAnalysis { direction: d, direction_square: dsq, finite, solutions, only_multiples_of_e: only }
}

/// Enumerates, for every facet of `mori` and every predicate square, the
/// finite region where a class of that square pairs positively with `H1`
/// yet violates the facet. A hit counts against the cone only when it is
/// primitive and satisfies a predicate.
pub fn mori_lemma_replay(hl: &HilbLattice, mori: &RatCone, predicates: &[HTPredicate], exec: Exec) -> Result<MoriReplay, ConeError> {
    if predicates.is_empty() {
        return Err(ConeError::NoPredicates);
    }
    let form = PlaneForm::of(hl)?;
    let lat = hl.lattice();
    let h1 = hl.polarization(1)?.clone();
    let h2 = hl.polarization(2)?.clone();
    let e = hl.e();
    let mut squares: Vec<i64> = predicates.iter().map(|p| p.square).collect();
    squares.sort_unstable();
    squares.dedup();
    let mut jobs = Vec::new();
    for f in mori.facets() {
        let fv = LatVec::from_ints(f);
        let coef = |v: &LatVec| -> Result<i64, ConeError> {
            let x = lat.pair(&fv, v)?;
            Ok(to_i64(&x.to_integer()).filter(|_| x.is_integer()).ok_or(LatticeError::Degenerate)?)
        };
        let (p, r, w) = (coef(&h1)?, coef(&h2)?, coef(&e)?);
        let g = gcd_of(&[int(p), int(r), int(w)]).to_i64().unwrap_or(1).max(1);
        for &s in &squares {
            jobs.push((f.clone(), (p / g, r / g, w / g), s));
        }
    }
    let cases: Vec<ReplayCase> =
        map_slice(&jobs, exec, |(f, prw, s)| replay_case(&form, f, *prw, *s, lat, hl, predicates));
    let orthogonal = orthogonal_analysis(&form, &squares);
    let counterexamples = cases.iter().map(|c| c.counterexamples()).sum();
    let all_finite = cases.iter().all(|c| c.finite) && orthogonal.finite;
    let passed = all_finite && counterexamples == 0 && orthogonal.only_multiples_of_e;
    Ok(MoriReplay {
        form,
        delta: form.delta(),
        identity: format!(
            "{}*q(R,R) = t^2 - {}*y^2 + ({})*z^2 with t = q(R,H1)",
            form.a,
            form.delta(),
            form.a * form.e
        ),
        squares,
        cases,
        orthogonal,
        counterexamples,
        all_finite,
        passed,
    })
}
