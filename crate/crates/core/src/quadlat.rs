//! Integral quadratic lattices, their isometries and spectral data.
//!
//! Operators act on coordinate columns: column `j` of an operator matrix is
//! the image of basis vector `j`. Basis order is part of the lattice.

use crate::arith::{fmt_rat, int_to_rat, primitive_integral, serde_rat, Int, Rat};
use crate::linalg::QMat;
use crate::poly::{refine_largest_root, Poly};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("Gram matrix must be square and nonempty")]
    NotSquare,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is degenerate (determinant 0)")]
    Degenerate,
    #[error("expected {expected} basis labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("vector has length {got}, lattice rank is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("reflection root is isotropic")]
    IsotropicRoot,
    #[error("negated reflection needs a vector of square 2, got {0}")]
    NotSquareTwo(String),
    #[error("matrix does not preserve the Gram form")]
    NotIsometry,
    #[error("operators act on different lattices")]
    LatticeMismatch,
    #[error("operator is not invertible")]
    Singular,
    #[error("enclosure width must be positive")]
    NonPositiveWidth,
}

/// Free lattice with a symmetric nondegenerate integer Gram matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadLattice {
    gram: QMat,
    labels: Vec<String>,
}

impl QuadLattice {
    pub fn new(gram: Vec<Vec<Int>>, labels: Vec<String>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        if labels.len() != n {
            return Err(LatticeError::LabelCount { expected: n, got: labels.len() });
        }
        let gram = QMat::from_rows(gram.iter().map(|r| int_to_rat(r)).collect());
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if gram.det().is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(QuadLattice { gram, labels })
    }

    pub fn from_i64(gram: &[&[i64]], labels: &[&str]) -> Result<Self, LatticeError> {
        Self::new(
            gram.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect(),
            labels.iter().map(|s| s.to_string()).collect(),
        )
    }

    /// Labels `e1..en`.
    pub fn unlabeled(gram: Vec<Vec<Int>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        Self::new(gram, (1..=n).map(|i| format!("e{i}")).collect())
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &QMat {
        &self.gram
    }

    pub fn gram_int(&self) -> Vec<Vec<Int>> {
        self.gram.to_rows().iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis_vector(&self, i: usize) -> LatVec {
        let mut v = vec![Rat::zero(); self.rank()];
        v[i] = Rat::one();
        LatVec(v)
    }

    pub fn det(&self) -> Rat {
        self.gram.det()
    }

    pub fn check(&self, v: &LatVec) -> Result<(), LatticeError> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), got: v.len() });
        }
        Ok(())
    }

    /// The vector `G v`, i.e. the functional `w ↦ b(v, w)` in coordinates.
    pub fn dual_functional(&self, v: &LatVec) -> Result<Vec<Rat>, LatticeError> {
        self.check(v)?;
        Ok(self.gram.mul_vec(v.coords()))
    }

    /// `vᵀ G w`, exact.
    pub fn pair(&self, v: &LatVec, w: &LatVec) -> Result<Rat, LatticeError> {
        self.check(w)?;
        let gv = self.dual_functional(v)?;
        Ok(gv.iter().zip(w.coords()).fold(Rat::zero(), |acc, (a, b)| acc + a * b))
    }

    pub fn square(&self, v: &LatVec) -> Result<Rat, LatticeError> {
        self.pair(v, v)
    }

    /// `w − (2 b(w, r) / b(r, r)) r`
    pub fn reflect(&self, root: &LatVec, w: &LatVec) -> Result<LatVec, LatticeError> {
        let rr = self.square(root)?;
        if rr.is_zero() {
            return Err(LatticeError::IsotropicRoot);
        }
        let k = Rat::from_integer(Int::from(2)) * self.pair(w, root)? / rr;
        Ok(w.sub(&root.scale(&k)))
    }
}

impl fmt::Debug for QuadLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadLattice({:?} {:?})", self.labels, self.gram)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeWire {
    rank: usize,
    gram: Vec<Vec<i64>>,
    basis: Vec<String>,
}

impl Serialize for QuadLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let gram = self
            .gram_int()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().expect("Gram entry exceeds i64")).collect())
            .collect();
        LatticeWire { rank: self.rank(), gram, basis: self.labels.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadLattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = LatticeWire::deserialize(d)?;
        if w.gram.len() != w.rank {
            return Err(serde::de::Error::custom(format!(
                "rank {} does not match a Gram matrix with {} rows",
                w.rank,
                w.gram.len()
            )));
        }
        let gram = w.gram.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        QuadLattice::new(gram, w.basis).map_err(serde::de::Error::custom)
    }
}

/// Rational coordinate vector in a lattice basis.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatVec(#[serde(with = "crate::arith::serde_rat_vec")] pub Vec<Rat>);

impl LatVec {
    pub fn new(coords: Vec<Rat>) -> Self {
        LatVec(coords)
    }

    pub fn from_i64(v: &[i64]) -> Self {
        LatVec(crate::arith::rat_vec(v))
    }

    pub fn from_ints(v: &[Int]) -> Self {
        LatVec(int_to_rat(v))
    }

    pub fn parse(s: &str) -> Result<Self, crate::arith::ParseRatError> {
        crate::arith::parse_rat_list(s).map(LatVec)
    }

    pub fn zero(n: usize) -> Self {
        LatVec(vec![Rat::zero(); n])
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        crate::arith::is_integral(&self.0)
    }

    /// Defined for integral nonzero vectors only.
    pub fn is_primitive(&self) -> Option<bool> {
        if !self.is_integral() || self.is_zero() {
            return None;
        }
        let ints: Vec<Int> = self.0.iter().map(|x| x.to_integer()).collect();
        Some(crate::arith::gcd_of(&ints).is_one())
    }

    /// Primitive integral vector on the same ray.
    pub fn primitive(&self) -> Option<Vec<Int>> {
        primitive_integral(&self.0)
    }

    pub fn add(&self, o: &LatVec) -> LatVec {
        LatVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &LatVec) -> LatVec {
        LatVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Rat) -> LatVec {
        LatVec(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> LatVec {
        LatVec(self.0.iter().map(|a| -a.clone()).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(fmt_rat).collect()
    }
}

impl fmt::Debug for LatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

/// Exact isometry of a [`QuadLattice`], acting on coordinate columns.
#[derive(Clone, PartialEq, Eq)]
pub struct IsometryOp {
    matrix: QMat,
    lattice: Arc<QuadLattice>,
}

impl IsometryOp {
    /// Checks `Mᵀ G M = G`.
    pub fn new(lattice: Arc<QuadLattice>, matrix: QMat) -> Result<Self, LatticeError> {
        let n = lattice.rank();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(LatticeError::DimensionMismatch { expected: n, got: matrix.rows() });
        }
        if matrix.transpose().mul(lattice.gram()).mul(&matrix) != *lattice.gram() {
            return Err(LatticeError::NotIsometry);
        }
        Ok(IsometryOp { matrix, lattice })
    }

    pub fn identity(lattice: Arc<QuadLattice>) -> Self {
        let n = lattice.rank();
        IsometryOp { matrix: QMat::identity(n), lattice }
    }

    /// Reflection in the hyperplane orthogonal to `root`.
    pub fn reflection(lattice: Arc<QuadLattice>, root: &LatVec) -> Result<Self, LatticeError> {
        let n = lattice.rank();
        let cols = (0..n)
            .map(|j| lattice.reflect(root, &lattice.basis_vector(j)).map(|v| v.0))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(lattice, QMat::from_cols(&cols))
    }

    /// `L ↦ −L + b(L, h) h`, valid when `b(h, h) = 2`.
    pub fn neg_reflection(lattice: Arc<QuadLattice>, h: &LatVec) -> Result<Self, LatticeError> {
        let hh = lattice.square(h)?;
        if hh != Rat::from_integer(Int::from(2)) {
            return Err(LatticeError::NotSquareTwo(fmt_rat(&hh)));
        }
        let n = lattice.rank();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e = lattice.basis_vector(j);
            let k = lattice.pair(&e, h)?;
            cols.push(e.neg().add(&h.scale(&k)).0);
        }
        Self::new(lattice, QMat::from_cols(&cols))
    }

    pub fn matrix(&self) -> &QMat {
        &self.matrix
    }

    pub fn lattice(&self) -> &Arc<QuadLattice> {
        &self.lattice
    }

    /// Integer matrix rows, if integral.
    pub fn int_rows(&self) -> Option<Vec<Vec<Int>>> {
        self.matrix
            .is_integral()
            .then(|| self.matrix.to_rows().iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect())
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &IsometryOp) -> Result<IsometryOp, LatticeError> {
        if self.lattice != other.lattice {
            return Err(LatticeError::LatticeMismatch);
        }
        Self::new(self.lattice.clone(), self.matrix.mul(&other.matrix))
    }

    pub fn apply(&self, v: &LatVec) -> Result<LatVec, LatticeError> {
        self.lattice.check(v)?;
        Ok(LatVec(self.matrix.mul_vec(v.coords())))
    }

    pub fn inverse(&self) -> Result<IsometryOp, LatticeError> {
        let inv = self.matrix.inverse().ok_or(LatticeError::Singular)?;
        Self::new(self.lattice.clone(), inv)
    }

    /// Exact `m`-th power; negative exponents go through the inverse.
    pub fn power(&self, m: i64) -> Result<IsometryOp, LatticeError> {
        let base = if m < 0 { self.inverse()? } else { self.clone() };
        let mut e = m.unsigned_abs();
        let mut acc = QMat::identity(self.lattice.rank());
        let mut sq = base.matrix.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Self::new(self.lattice.clone(), acc)
    }

    pub fn det(&self) -> Rat {
        self.matrix.det()
    }

    pub fn trace(&self) -> Rat {
        self.matrix.trace()
    }

    /// `det(xI − M)` by the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Poly {
        char_poly(&self.matrix)
    }

    /// Every rational eigenvalue with a primitive integral basis of its eigenspace.
    pub fn rational_eigenlines(&self) -> Vec<Eigenspace> {
        let n = self.lattice.rank();
        self.char_poly()
            .rational_roots()
            .into_iter()
            .map(|lambda| {
                let shifted = self.matrix.add(&QMat::identity(n).scale(&-lambda.clone()));
                let basis = shifted
                    .kernel()
                    .iter()
                    .map(|v| primitive_integral(v).expect("kernel vector is nonzero"))
                    .collect();
                Eigenspace { eigenvalue: lambda, basis }
            })
            .collect()
    }

    /// Enclosure of the largest modulus among the real roots of the
    /// characteristic polynomial, of width at most `eps`.
    pub fn spectral_radius_enclosure(&self, eps: &Rat) -> Result<RationalEnclosure, LatticeError> {
        spectral_radius_enclosure(&self.char_poly(), eps)
    }
}

impl fmt::Debug for IsometryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IsometryOp({:?})", self.matrix)
    }
}

pub fn char_poly(m: &QMat) -> Poly {
    let n = m.rows();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut mk = QMat::zeros(n, n);
    for k in 1..=n {
        mk = m.mul(&mk).add(&QMat::identity(n).scale(&coeffs[n - k + 1]));
        let t = m.mul(&mk).trace();
        coeffs[n - k] = -t / Rat::from_integer(Int::from(k));
    }
    Poly::new(coeffs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenspace {
    #[serde(with = "serde_rat")]
    pub eigenvalue: Rat,
    #[serde(with = "crate::arith::serde_int_mat")]
    pub basis: Vec<Vec<Int>>,
}

/// `lo ≤ α ≤ hi` for a real algebraic `α` that is a root of `polynomial`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalEnclosure {
    #[serde(with = "serde_rat")]
    pub lo: Rat,
    #[serde(with = "serde_rat")]
    pub hi: Rat,
    /// Squarefree polynomial vanishing at the enclosed number; its
    /// coefficients in ascending order.
    #[serde(with = "crate::arith::serde_int_vec")]
    pub polynomial: Vec<Int>,
    /// True when `lo == hi` is the exact (rational) value.
    pub exact: bool,
    /// True when `polynomial` is certified irreducible over the rationals
    /// (degree ≤ 3 and no rational root).
    pub irreducible: bool,
}

impl RationalEnclosure {
    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Re-derives the claim from the payload: either exact with the root
    /// verified, or a Sturm count of exactly one root of `polynomial` in
    /// `(lo, hi]` with `lo` not a root.
    pub fn verify(&self) -> bool {
        let p = Poly::new(int_to_rat(&self.polynomial));
        if p.is_zero() || self.lo > self.hi {
            return false;
        }
        if self.exact {
            return self.lo == self.hi && p.eval(&self.lo).is_zero();
        }
        p.is_squarefree() && !p.eval(&self.lo).is_zero() && p.count_roots_in(&self.lo, &self.hi) == 1
    }
}

/// Whether the unique root of `p` in `(l1, h1]` equals the unique root of
/// `q` in `(l2, h2]`.
fn same_root(p: &Poly, (l1, h1): (&Rat, &Rat), q: &Poly, (l2, h2): (&Rat, &Rat)) -> bool {
    let lo = l1.max(l2);
    let hi = h1.min(h2);
    if lo >= hi {
        return false;
    }
    let g = p.gcd(q);
    g.degree().unwrap_or(0) > 0 && g.count_roots_in(lo, hi) >= 1
}

/// Spectral radius enclosure directly from a characteristic polynomial.
pub fn spectral_radius_enclosure(cp: &Poly, eps: &Rat) -> Result<RationalEnclosure, LatticeError> {
    if !eps.is_positive() {
        return Err(LatticeError::NonPositiveWidth);
    }
    let sqf = cp.squarefree_part();
    let rational = sqf.rational_roots();
    let mut rest = sqf.clone();
    for r in &rational {
        rest = rest.div_rem(&Poly::linear_root(r)).0;
    }
    let best_rational = rational.iter().map(|r| r.abs()).max();

    // Largest positive root of `rest` and of `rest(-x)`, both irrational.
    let mut irrational: Option<(Poly, Rat, Rat)> = None;
    if rest.degree().unwrap_or(0) > 0 {
        let bound = rest.root_bound();
        for p in [rest.clone(), rest.reflect()] {
            if p.count_roots_in(&Rat::zero(), &bound) == 0 {
                continue;
            }
            let (lo, hi) = refine_largest_root(&p, &Rat::zero(), &bound, eps);
            let better = match &irrational {
                None => true,
                Some((q, l, h)) => {
                    // Disjoint intervals decide; overlapping ones get refined until they separate.
                    let (mut l1, mut h1, mut l2, mut h2) = (lo.clone(), hi.clone(), l.clone(), h.clone());
                    loop {
                        if same_root(&p, (&l1, &h1), q, (&l2, &h2)) {
                            break false;
                        }
                        if l1 >= h2 {
                            break true;
                        }
                        if l2 >= h1 {
                            break false;
                        }
                        let w = (&h1 - &l1) / Rat::from_integer(Int::from(4));
                        (l1, h1) = refine_largest_root(&p, &l1, &h1, &w);
                        let w2 = (&h2 - &l2) / Rat::from_integer(Int::from(4));
                        (l2, h2) = refine_largest_root(q, &l2, &h2, &w2);
                    }
                }
            };
            if better {
                irrational = Some((p, lo, hi));
            }
        }
    }

    let exact_enclosure = |r: Rat| RationalEnclosure {
        polynomial: Poly::new(vec![-r.clone(), Rat::one()]).to_primitive_integer(),
        lo: r.clone(),
        hi: r,
        exact: true,
        irreducible: true,
    };

    match (best_rational, irrational) {
        (None, None) => Ok(exact_enclosure(Rat::zero())),
        (Some(r), None) => Ok(exact_enclosure(r)),
        (r, Some((p, mut lo, mut hi))) => {
            if let Some(r) = &r {
                // The irrational root differs from r, so refining separates them.
                while &lo < r && r < &hi || &lo == r {
                    let w = (&hi - &lo) / Rat::from_integer(Int::from(4));
                    (lo, hi) = refine_largest_root(&p, &lo, &hi, &w);
                }
                if r >= &hi {
                    return Ok(exact_enclosure(r.clone()));
                }
            }
            let deg = p.degree().unwrap_or(0);
            Ok(RationalEnclosure {
                lo,
                hi,
                polynomial: p.to_primitive_integer(),
                exact: false,
                irreducible: deg <= 3,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, ratio};

    fn s_lattice() -> QuadLattice {
        QuadLattice::from_i64(&[&[6, 8], &[8, 6]], &["h1", "h2"]).unwrap()
    }

    fn x_lattice() -> Arc<QuadLattice> {
        Arc::new(QuadLattice::from_i64(&[&[6, 0, 8], &[0, -4, 0], &[8, 0, 6]], &["H1", "E", "H2"]).unwrap())
    }

    #[test]
    fn rejects_bad_gram() {
        assert_eq!(QuadLattice::from_i64(&[&[1, 2], &[3, 4]], &["a", "b"]), Err(LatticeError::NotSymmetric));
        assert_eq!(QuadLattice::from_i64(&[&[1, 2], &[2, 4]], &["a", "b"]), Err(LatticeError::Degenerate));
        assert_eq!(QuadLattice::from_i64(&[&[1, 2]], &["a"]), Err(LatticeError::NotSquare));
        assert!(matches!(
            QuadLattice::from_i64(&[&[1]], &["a", "b"]),
            Err(LatticeError::LabelCount { .. })
        ));
    }

    #[test]
    fn pairing_examples() {
        let s = s_lattice();
        let v = LatVec::from_i64(&[2, -1]);
        assert_eq!(s.pair(&v, &v).unwrap(), rat(-2));
        assert_eq!(s.pair(&LatVec::from_i64(&[1, 0]), &LatVec::from_i64(&[0, 1])).unwrap(), rat(8));
        assert_eq!(s.pair(&LatVec::zero(2), &v).unwrap(), rat(0));
        let x = x_lattice();
        let e = x.basis_vector(1);
        assert_eq!(x.square(&e).unwrap(), rat(-4));
        assert!(matches!(
            s.pair(&v, &LatVec::from_i64(&[1, 2, 3])),
            Err(LatticeError::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn reflection_examples() {
        let s = s_lattice();
        let root = LatVec::from_i64(&[2, -1]);
        assert_eq!(s.reflect(&root, &root).unwrap(), LatVec::from_i64(&[-2, 1]));
        let w = LatVec::from_i64(&[1, 0]);
        let img = s.reflect(&root, &w).unwrap();
        assert_eq!(img, LatVec::from_i64(&[9, -4]));
        assert_eq!(s.square(&img).unwrap(), rat(6));
        // G·root = (4, 10), so (5, -2) is orthogonal to the root.
        let w0 = LatVec::from_i64(&[5, -2]);
        assert_eq!(s.pair(&w0, &root).unwrap(), rat(0));
        assert_eq!(s.reflect(&root, &w0).unwrap(), w0);
        let iso = QuadLattice::from_i64(&[&[0, 1], &[1, 0]], &["a", "b"]).unwrap();
        assert_eq!(iso.reflect(&LatVec::from_i64(&[1, 0]), &w), Err(LatticeError::IsotropicRoot));
    }

    #[test]
    fn beauville_matrices() {
        let x = x_lattice();
        let m1 = IsometryOp::neg_reflection(x.clone(), &LatVec::from_i64(&[1, -1, 0])).unwrap();
        let m2 = IsometryOp::neg_reflection(x.clone(), &LatVec::from_i64(&[0, -1, 1])).unwrap();
        assert_eq!(*m1.matrix(), QMat::from_i64(&[&[5, 4, 8], &[-6, -5, -8], &[0, 0, -1]]));
        assert_eq!(*m2.matrix(), QMat::from_i64(&[&[-1, 0, 0], &[-8, -5, -6], &[8, 4, 5]]));
        let h = LatVec::from_i64(&[1, -1, 0]);
        assert_eq!(m1.apply(&h).unwrap(), h);
        assert!(matches!(
            IsometryOp::neg_reflection(x, &LatVec::from_i64(&[1, 0, 0])),
            Err(LatticeError::NotSquareTwo(s)) if s == "6"
        ));
    }

    #[test]
    fn composition_and_powers() {
        let x = x_lattice();
        let m1 = IsometryOp::neg_reflection(x.clone(), &LatVec::from_i64(&[1, -1, 0])).unwrap();
        let m2 = IsometryOp::neg_reflection(x.clone(), &LatVec::from_i64(&[0, -1, 1])).unwrap();
        let f = m1.compose(&m2).unwrap();
        assert_eq!(*f.matrix(), QMat::from_i64(&[&[27, 12, 16], &[-18, -7, -10], &[-8, -4, -5]]));
        assert_eq!(m1.power(2).unwrap(), IsometryOp::identity(x.clone()));
        assert_eq!(m1.apply(&LatVec::from_i64(&[2, -7, 2])).unwrap(), LatVec::from_i64(&[-2, 7, -2]));
        assert_eq!(f.power(-1).unwrap(), m2.compose(&m1).unwrap());
        assert_eq!(f.power(3).unwrap(), f.compose(&f).unwrap().compose(&f).unwrap());
        let other = Arc::new(QuadLattice::from_i64(&[&[2, 0, 0], &[0, -2, 0], &[0, 0, 2]], &["a", "b", "c"]).unwrap());
        assert_eq!(m1.compose(&IsometryOp::identity(other)), Err(LatticeError::LatticeMismatch));
    }

    #[test]
    fn spectral_data() {
        let x = x_lattice();
        let m1 = IsometryOp::neg_reflection(x.clone(), &LatVec::from_i64(&[1, -1, 0])).unwrap();
        let m2 = IsometryOp::neg_reflection(x.clone(), &LatVec::from_i64(&[0, -1, 1])).unwrap();
        let f = m1.compose(&m2).unwrap();
        assert_eq!(f.char_poly(), Poly::from_i64(&[-1, 15, -15, 1]));
        assert_eq!(m1.char_poly(), Poly::from_i64(&[-1, -1, 1, 1]));
        assert_eq!(IsometryOp::identity(x.clone()).char_poly(), Poly::from_i64(&[-1, 3, -3, 1]));

        let lines = f.rational_eigenlines();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].eigenvalue, rat(1));
        let b = &lines[0].basis;
        assert_eq!(b.len(), 1);
        let v: Vec<Int> = b[0].clone();
        assert!(v == vec![int(2), int(-7), int(2)] || v == vec![int(-2), int(7), int(-2)]);

        let m1_lines = m1.rational_eigenlines();
        let minus = m1_lines.iter().find(|e| e.eigenvalue == rat(-1)).unwrap();
        assert_eq!(minus.basis.len(), 2);
        for v in &minus.basis {
            let lv = LatVec::from_ints(v);
            assert_eq!(m1.apply(&lv).unwrap(), lv.neg());
        }

        let enc = f.spectral_radius_enclosure(&ratio(1, 100)).unwrap();
        assert!(enc.width() <= ratio(1, 100));
        assert!(!enc.exact && enc.irreducible && enc.verify());
        assert_eq!(enc.polynomial, vec![int(1), int(-14), int(1)]);
        // 7 + 4√3 ∈ [lo, hi] ⇔ (lo − 7)² ≤ 48 ≤ (hi − 7)² with lo, hi > 7.
        assert!(enc.lo > rat(7));
        let sq = |r: &Rat| (r - rat(7)) * (r - rat(7));
        assert!(sq(&enc.lo) <= rat(48) && rat(48) <= sq(&enc.hi));

        let id = IsometryOp::identity(x.clone()).spectral_radius_enclosure(&ratio(1, 100)).unwrap();
        assert!(id.exact && id.lo == rat(1) && id.hi == rat(1));
        let e1 = m1.spectral_radius_enclosure(&ratio(1, 100)).unwrap();
        assert!(e1.exact && e1.lo == rat(1));
        assert_eq!(f.spectral_radius_enclosure(&rat(0)), Err(LatticeError::NonPositiveWidth));
    }

    #[test]
    fn negative_root_dominates() {
        // x^2 + 3x + 1 has roots (-3 ± √5)/2; largest modulus ≈ 2.618 is negative.
        let p = Poly::from_i64(&[1, 3, 1]);
        let enc = spectral_radius_enclosure(&p, &ratio(1, 1000)).unwrap();
        assert!(enc.lo > ratio(2617, 1000) && enc.hi < ratio(2619, 1000));
        assert!(enc.verify());
        // Rational root 3 beats the irrational pair ±√2.
        let sym = spectral_radius_enclosure(&Poly::from_i64(&[-2, 0, 1]), &ratio(1, 100)).unwrap();
        assert!(sym.verify() && sym.lo > ratio(141, 100) && sym.hi < ratio(142, 100));
        let q = Poly::from_i64(&[-2, 0, 1]).mul(&Poly::from_i64(&[-3, 1]));
        let e = spectral_radius_enclosure(&q, &ratio(1, 10)).unwrap();
        assert!(e.exact && e.lo == rat(3));
    }
}
