//! Univariate polynomials over the rationals: arithmetic, rational roots,
//! Sturm sequences and exact root isolation by bisection.

use crate::arith::{divisors, fmt_rat, lcm_of_denominators, gcd_of, Int, Rat};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Coefficients in ascending degree order; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(crate::arith::rat_vec(coeffs))
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Rat) -> Self {
        Self::new(vec![-r.clone(), Rat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn sign_at(&self, x: &Rat) -> Ordering {
        self.eval(x).cmp(&Rat::zero())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(Int::from(i)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    /// `p(-x)`
    pub fn reflect(&self) -> Self {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rat::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lead;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn to_primitive_integer(&self) -> Vec<Int> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = lcm_of_denominators(&self.coeffs);
        let mut ints: Vec<Int> =
            self.coeffs.iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
        let g = gcd_of(&ints);
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
        if ints.last().unwrap().is_negative() {
            for x in ints.iter_mut() {
                *x = -x.clone();
            }
        }
        ints
    }

    /// Integer coefficients if every coefficient is integral.
    pub fn integer_coeffs(&self) -> Option<Vec<Int>> {
        self.coeffs.iter().all(|c| c.is_integer()).then(|| self.coeffs.iter().map(|c| c.to_integer()).collect())
    }

    /// Distinct rational roots, ascending, by the rational root theorem.
    pub fn rational_roots(&self) -> Vec<Rat> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let mut p = self.clone();
        if p.coeffs[0].is_zero() {
            roots.push(Rat::zero());
            let k = p.coeffs.iter().position(|c| !c.is_zero()).unwrap();
            p = Poly::new(p.coeffs[k..].to_vec());
        }
        let ints = p.to_primitive_integer();
        if ints.len() > 1 {
            let a0 = &ints[0];
            let an = ints.last().unwrap();
            for num in divisors(a0) {
                for den in divisors(an) {
                    for s in [1i64, -1] {
                        let r = Rat::new(&num * Int::from(s), den.clone());
                        if !roots.contains(&r) && p.eval(&r).is_zero() {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Cauchy bound: every complex root has modulus < 1 + max |a_i / a_n|.
    pub fn root_bound(&self) -> Rat {
        let lead = self.leading().abs();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rat::zero);
        m + Rat::one()
    }

    /// Discriminant via the resultant of `p` and `p'`.
    pub fn discriminant(&self) -> Rat {
        let n = self.degree().unwrap_or(0);
        if n < 1 {
            return Rat::zero();
        }
        let res = resultant(self, &self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 { Rat::one() } else { -Rat::one() };
        sign * res / self.leading()
    }

    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        seq
    }

    /// Number of distinct real roots in `(a, b]` for a squarefree polynomial.
    pub fn count_roots_in(&self, a: &Rat, b: &Rat) -> usize {
        let seq = self.sturm_sequence();
        let va = sign_variations(&seq, a);
        let vb = sign_variations(&seq, b);
        va.saturating_sub(vb)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn sign_variations(seq: &[Poly], x: &Rat) -> usize {
    let signs: Vec<Ordering> =
        seq.iter().map(|p| p.sign_at(x)).filter(|s| *s != Ordering::Equal).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Sylvester-matrix resultant.
pub fn resultant(p: &Poly, q: &Poly) -> Rat {
    let (m, n) = match (p.degree(), q.degree()) {
        (Some(m), Some(n)) => (m, n),
        _ => return Rat::zero(),
    };
    if m + n == 0 {
        return Rat::one();
    }
    let size = m + n;
    let mut rows = vec![vec![Rat::zero(); size]; size];
    for i in 0..n {
        for (k, c) in p.coeffs.iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in q.coeffs.iter().rev().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    crate::linalg::QMat::from_rows(rows).det()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{}", fmt_rat(&a))?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Shrinks `(lo, hi]`, known to contain exactly the largest root of the
/// squarefree `p` above `lo`, until its width is at most `eps`. The root must
/// be irrational so midpoints never hit it.
pub fn refine_largest_root(p: &Poly, lo: &Rat, hi: &Rat, eps: &Rat) -> (Rat, Rat) {
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let two = Rat::from_integer(Int::from(2));
    while &hi - &lo > *eps || p.count_roots_in(&lo, &hi) > 1 {
        let mid = (&lo + &hi) / &two;
        if p.count_roots_in(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    #[test]
    fn arithmetic_and_division() {
        let p = Poly::from_i64(&[-1, 15, -15, 1]);
        let (q, r) = p.div_rem(&Poly::linear_root(&rat(1)));
        assert!(r.is_zero());
        assert_eq!(q, Poly::from_i64(&[1, -14, 1]));
        assert_eq!(q.mul(&Poly::linear_root(&rat(1))), p);
    }

    #[test]
    fn display_format() {
        assert_eq!(Poly::from_i64(&[-1, 15, -15, 1]).to_string(), "x^3 - 15x^2 + 15x - 1");
        assert_eq!(Poly::from_i64(&[0, -1]).to_string(), "-x");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn rational_roots_and_squarefree() {
        let p = Poly::from_i64(&[-1, -1, 1, 1]); // (x-1)(x+1)^2
        assert_eq!(p.rational_roots(), vec![rat(-1), rat(1)]);
        assert_eq!(p.squarefree_part(), Poly::from_i64(&[-1, 0, 1]));
        assert!(!p.is_squarefree());
        let q = Poly::new(vec![ratio(-1, 2), rat(0), rat(2)]); // 2x^2 - 1/2
        assert_eq!(q.rational_roots(), vec![ratio(-1, 2), ratio(1, 2)]);
    }

    #[test]
    fn discriminants() {
        assert_eq!(Poly::from_i64(&[1, -14, 1]).discriminant(), rat(192));
        // (x-1)(x^2-14x+1): disc = disc(q) * q(1)^2 = 192 * 144
        assert_eq!(Poly::from_i64(&[-1, 15, -15, 1]).discriminant(), rat(192 * 144));
        assert_eq!(Poly::from_i64(&[-1, -1, 1, 1]).discriminant(), rat(0));
    }

    #[test]
    fn sturm_counts() {
        let p = Poly::from_i64(&[1, -14, 1]);
        assert_eq!(p.count_roots_in(&rat(0), &rat(20)), 2);
        assert_eq!(p.count_roots_in(&rat(1), &rat(20)), 1);
        assert_eq!(p.count_roots_in(&rat(14), &rat(20)), 0);
        let (lo, hi) = refine_largest_root(&p, &rat(1), &rat(20), &ratio(1, 1000));
        assert!(&hi - &lo <= ratio(1, 1000));
        assert!(p.sign_at(&lo) != p.sign_at(&hi));
    }
}
