//! The Beauville–Bogomolov lattice of `S^[n]`, Beauville involutions, and
//! curve classes embedded as rational vectors through the form.
//!
//! Basis order is `H1, E, H2, ..., Hr`: the exceptional class `E` sits right
//! after the first surface class.

use crate::arith::{int, rat, Int, Rat};
use crate::linalg::QMat;
use crate::quadlat::{IsometryOp, LatVec, LatticeError, QuadLattice};
use std::sync::Arc;

pub const E_INDEX: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HilbError {
    #[error("n must be at least 2, got {0}")]
    BadN(u32),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("polarization {index} has length {got}, surface rank is {expected}")]
    PolarizationShape { index: usize, expected: usize, got: usize },
    #[error("polarization index {0} is out of range (1..={1})")]
    BadIndex(usize, usize),
    #[error("Beauville involution on H{k} needs q(H{k} - E) = 2, got {got}")]
    NotBeauville { k: usize, got: String },
    #[error("this operation needs exactly two polarizations and a rank-3 lattice")]
    NotTwoPolarized,
    #[error("class {class} exceeds denominator profile {profile:?}")]
    Denominator { class: String, profile: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbLattice {
    surface: Arc<QuadLattice>,
    n: u32,
    lattice: Arc<QuadLattice>,
    polarizations: Vec<LatVec>,
}

fn surface_labels(r: usize) -> Vec<String> {
    (1..=r).map(|i| format!("H{i}")).collect()
}

/// `NS(S) ⊕ ⟨−2(n−1)⟩` with `E` at index 1. Polarizations are integral
/// vectors in the surface basis; when empty, the surface basis vectors are used.
pub fn build_hilb(surface_gram: &[Vec<i64>], n: u32, polarizations: &[Vec<i64>]) -> Result<HilbLattice, HilbError> {
    if n < 2 {
        return Err(HilbError::BadN(n));
    }
    let r = surface_gram.len();
    let g: Vec<Vec<Int>> = surface_gram.iter().map(|row| row.iter().map(|&x| int(x)).collect()).collect();
    let surface = Arc::new(QuadLattice::new(g, surface_labels(r))?);
    let pos = |i: usize| if i == 0 { 0 } else { i + 1 };
    let mut big = vec![vec![Int::from(0); r + 1]; r + 1];
    for i in 0..r {
        for j in 0..r {
            big[pos(i)][pos(j)] = int(surface_gram[i][j]);
        }
    }
    big[E_INDEX][E_INDEX] = int(-2 * (n as i64 - 1));
    let mut labels = surface_labels(r);
    labels.insert(E_INDEX, "E".to_string());
    let lattice = Arc::new(QuadLattice::new(big, labels)?);
    let pols: Vec<Vec<i64>> = if polarizations.is_empty() {
        (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect()
    } else {
        polarizations.to_vec()
    };
    let mut embedded = Vec::with_capacity(pols.len());
    for (index, p) in pols.iter().enumerate() {
        if p.len() != r {
            return Err(HilbError::PolarizationShape { index: index + 1, expected: r, got: p.len() });
        }
        embedded.push(embed_coords(p));
    }
    Ok(HilbLattice { surface, n, lattice, polarizations: embedded })
}

fn embed_coords(v: &[i64]) -> LatVec {
    let mut c: Vec<Rat> = v.iter().map(|&x| rat(x)).collect();
    c.insert(E_INDEX, rat(0));
    LatVec::new(c)
}

impl HilbLattice {
    pub fn surface(&self) -> &Arc<QuadLattice> {
        &self.surface
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lattice(&self) -> &Arc<QuadLattice> {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn polarizations(&self) -> &[LatVec] {
        &self.polarizations
    }

    /// `H_k`, 1-based.
    pub fn polarization(&self, k: usize) -> Result<&LatVec, HilbError> {
        if k == 0 || k > self.polarizations.len() {
            return Err(HilbError::BadIndex(k, self.polarizations.len()));
        }
        Ok(&self.polarizations[k - 1])
    }

    pub fn e(&self) -> LatVec {
        self.lattice.basis_vector(E_INDEX)
    }

    pub fn e_square(&self) -> i64 {
        -2 * (self.n as i64 - 1)
    }

    /// Surface class as a class on `S^[n]`.
    pub fn embed(&self, v: &[i64]) -> Result<LatVec, HilbError> {
        self.surface.check(&LatVec::from_i64(v))?;
        Ok(embed_coords(v))
    }

    /// `H_k − E`.
    pub fn beauville_vector(&self, k: usize) -> Result<LatVec, HilbError> {
        Ok(self.polarization(k)?.sub(&self.e()))
    }

    /// `a·H_1 + b·H_2 + c·E` for a two-polarized rank-3 lattice.
    pub fn class(&self, a: Rat, b: Rat, c: Rat) -> Result<LatVec, HilbError> {
        self.require_two()?;
        let h1 = &self.polarizations[0];
        let h2 = &self.polarizations[1];
        Ok(h1.scale(&a).add(&h2.scale(&b)).add(&self.e().scale(&c)))
    }

    fn require_two(&self) -> Result<(), HilbError> {
        if self.polarizations.len() != 2 || self.rank() != 3 {
            return Err(HilbError::NotTwoPolarized);
        }
        Ok(())
    }
}

/// `ι_k*`: `L ↦ −L + q(L, H_k − E)(H_k − E)`, with `k` 1-based.
pub fn beauville_op(hl: &HilbLattice, k: usize) -> Result<IsometryOp, HilbError> {
    let h = hl.beauville_vector(k)?;
    let hh = hl.lattice.square(&h)?;
    if hh != rat(2) {
        return Err(HilbError::NotBeauville { k, got: crate::arith::fmt_rat(&hh) });
    }
    Ok(IsometryOp::neg_reflection(hl.lattice.clone(), &h)?)
}

/// `f* = ι₁*·ι₂*` for `f = ι₂∘ι₁`.
pub fn f_star(hl: &HilbLattice) -> Result<IsometryOp, HilbError> {
    hl.require_two()?;
    Ok(beauville_op(hl, 1)?.compose(&beauville_op(hl, 2)?)?)
}

/// `ι₂*·ι₁*`, the other order. On curve classes this is `f_*`.
pub fn f_star_reversed(hl: &HilbLattice) -> Result<IsometryOp, HilbError> {
    hl.require_two()?;
    Ok(beauville_op(hl, 2)?.compose(&beauville_op(hl, 1)?)?)
}

/// A curve class as a rational vector, with the largest denominator allowed
/// in each coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    class: LatVec,
    profile: Vec<i64>,
}

/// Denominator 1 on surface directions and 2 on `E`.
pub fn default_profile(rank: usize) -> Vec<i64> {
    (0..rank).map(|i| if i == E_INDEX { 2 } else { 1 }).collect()
}

impl CurveClass {
    pub fn new(class: LatVec, profile: Vec<i64>) -> Result<Self, HilbError> {
        let fits = class.len() == profile.len()
            && class.coords().iter().zip(&profile).all(|(x, &d)| d > 0 && (int(d) % x.denom()) == Int::from(0));
        if !fits {
            return Err(HilbError::Denominator { class: class.to_strings().join(","), profile });
        }
        Ok(CurveClass { class, profile })
    }

    pub fn with_default_profile(class: LatVec) -> Result<Self, HilbError> {
        let p = default_profile(class.len());
        Self::new(class, p)
    }

    pub fn class(&self) -> &LatVec {
        &self.class
    }

    pub fn profile(&self) -> &[i64] {
        &self.profile
    }
}

/// Pushforward along an involutive isometry: the same matrix on the embedded
/// rational vector.
pub fn pushforward_on_curves(op: &IsometryOp, c: &CurveClass) -> Result<CurveClass, HilbError> {
    let image = op.apply(&c.class)?;
    CurveClass::new(image, c.profile.clone())
}

/// `L_i = H_{i+1} − 3/2 E`, `K_i = 2H_{i+1} − H_i − 1/2 E`, indices mod 2.
pub fn lke_basis(hl: &HilbLattice, i: usize) -> Result<[LatVec; 3], HilbError> {
    hl.require_two()?;
    if !(1..=2).contains(&i) {
        return Err(HilbError::BadIndex(i, 2));
    }
    let j = 3 - i;
    let hi = hl.polarization(i)?.clone();
    let hj = hl.polarization(j)?.clone();
    let e = hl.e();
    let l = hj.sub(&e.scale(&crate::arith::ratio(3, 2)));
    let k = hj.scale(&rat(2)).sub(&hi).sub(&e.scale(&crate::arith::ratio(1, 2)));
    Ok([l, k, e])
}

/// Columns `L_i, K_i, E` and the exact inverse: `v = P·c` and `c = P⁻¹·v`.
pub fn lke_change_of_basis(hl: &HilbLattice, i: usize) -> Result<(QMat, QMat), HilbError> {
    let b = lke_basis(hl, i)?;
    let p = QMat::from_cols(&[b[0].0.clone(), b[1].0.clone(), b[2].0.clone()]);
    let inv = p.inverse().ok_or(LatticeError::Singular)?;
    debug_assert!(p.mul(&inv) == QMat::identity(3));
    Ok((p, inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn hilb3() -> HilbLattice {
        build_hilb(&[vec![6, 8], vec![8, 6]], 3, &[]).unwrap()
    }

    fn v(c: &[Rat]) -> LatVec {
        LatVec::new(c.to_vec())
    }

    #[test]
    fn gram_and_labels() {
        let hl = hilb3();
        assert_eq!(*hl.lattice().gram(), QMat::from_i64(&[&[6, 0, 8], &[0, -4, 0], &[8, 0, 6]]));
        assert_eq!(hl.lattice().labels(), &["H1", "E", "H2"]);
        let small = build_hilb(&[vec![2]], 2, &[]).unwrap();
        assert_eq!(*small.lattice().gram(), QMat::from_i64(&[&[2, 0], &[0, -2]]));
        let d4 = build_hilb(&[vec![4, 7], vec![7, 4]], 2, &[]).unwrap();
        assert_eq!(d4.e_square(), -2);
        assert!(matches!(build_hilb(&[vec![1, 1], vec![1, 1]], 3, &[]), Err(HilbError::Lattice(LatticeError::Degenerate))));
        assert_eq!(build_hilb(&[vec![2]], 1, &[]), Err(HilbError::BadN(1)));
    }

    #[test]
    fn involution_matrices() {
        let hl = hilb3();
        let m1 = beauville_op(&hl, 1).unwrap();
        let m2 = beauville_op(&hl, 2).unwrap();
        assert_eq!(*m1.matrix(), QMat::from_i64(&[&[5, 4, 8], &[-6, -5, -8], &[0, 0, -1]]));
        assert_eq!(*m2.matrix(), QMat::from_i64(&[&[-1, 0, 0], &[-8, -5, -6], &[8, 4, 5]]));
        assert_eq!(m1.power(2).unwrap(), IsometryOp::identity(hl.lattice().clone()));
        let f = f_star(&hl).unwrap();
        assert_eq!(*f.matrix(), QMat::from_i64(&[&[27, 12, 16], &[-18, -7, -10], &[-8, -4, -5]]));
        assert_eq!(f.det(), rat(1));
        let w = LatVec::from_i64(&[2, -7, 2]);
        assert_eq!(f.apply(&w).unwrap(), w);
        let fr = f_star_reversed(&hl).unwrap();
        assert_eq!(fr, f.inverse().unwrap());
        assert!(matches!(beauville_op(&hl, 3), Err(HilbError::BadIndex(3, 2))));
    }

    #[test]
    fn degree_four_predecessor() {
        let hl = build_hilb(&[vec![4, 7], vec![7, 4]], 2, &[]).unwrap();
        for k in 1..=2 {
            let op = beauville_op(&hl, k).unwrap();
            assert_eq!(op.power(2).unwrap(), IsometryOp::identity(hl.lattice().clone()));
        }
        let bad = build_hilb(&[vec![4, 7], vec![7, 4]], 3, &[]).unwrap();
        assert!(matches!(beauville_op(&bad, 1), Err(HilbError::NotBeauville { k: 1, .. })));
    }

    #[test]
    fn pushforward_identities() {
        let hl = hilb3();
        let i1 = beauville_op(&hl, 1).unwrap();
        let [l1, k1, e] = lke_basis(&hl, 1).unwrap();
        let [l2, k2, _] = lke_basis(&hl, 2).unwrap();
        let push = |c: &LatVec| pushforward_on_curves(&i1, &CurveClass::with_default_profile(c.clone()).unwrap()).unwrap();
        assert_eq!(push(&l1).class(), &k2);
        let expect = v(&[rat(9), ratio(-15, 2), rat(-2)]);
        assert_eq!(push(&k1).class(), &expect);
        assert_eq!(expect, l2.scale(&rat(5)).add(&k2.scale(&rat(2))).add(&e));
        assert_eq!(push(&e).class(), &l2.scale(&rat(4)).add(&e));
        assert_eq!(hl.lattice().square(&l1).unwrap(), rat(-3));
        assert_eq!(hl.lattice().square(&k2).unwrap(), rat(-3));
    }

    #[test]
    fn profiles_and_change_of_basis() {
        let ruling = v(&[rat(0), ratio(1, 4), rat(0)]);
        assert!(CurveClass::with_default_profile(ruling.clone()).is_err());
        assert!(CurveClass::new(ruling, vec![1, 4, 1]).is_ok());
        let hl = hilb3();
        let (p, inv) = lke_change_of_basis(&hl, 1).unwrap();
        assert_eq!(p.det(), rat(-1));
        assert_eq!(inv.mul(&p), QMat::identity(3));
    }
}
