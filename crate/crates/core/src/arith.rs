//! Exact integer and rational helpers shared by every module.
//!
//! Rationals travel as canonical `"p/q"` strings (`"p"` when integral) so
//! serialized certificates never lose precision.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::str::FromStr;

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_vec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn int_to_rat(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Canonical textual form: reduced, positive denominator, no `/1`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational literal {0:?}")]
pub struct ParseRatError(pub String);

pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let t = s.trim();
    let bad = || ParseRatError(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n = Int::from_str(n.trim()).map_err(|_| bad())?;
            let d = Int::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Int::from_str(t).map(Rat::from_integer).map_err(|_| bad()),
    }
}

/// Parses `"0,-3/2,1"` (brackets optional) into a rational vector.
pub fn parse_rat_list(s: &str) -> Result<Vec<Rat>, ParseRatError> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(parse_rat).collect()
}

pub fn lcm_of_denominators(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn gcd_of(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |acc, x| acc.gcd(x))
}

/// Clears denominators and divides out the content. Keeps the direction
/// (positive scaling only). Returns `None` for the zero vector.
pub fn primitive_integral(v: &[Rat]) -> Option<Vec<Int>> {
    let l = lcm_of_denominators(v);
    let scaled: Vec<Int> = v.iter().map(|r| (r * Rat::from_integer(l.clone())).to_integer()).collect();
    let g = gcd_of(&scaled);
    if g.is_zero() {
        return None;
    }
    Some(scaled.into_iter().map(|x| x / &g).collect())
}

pub fn primitive_int(v: &[Int]) -> Option<Vec<Int>> {
    let g = gcd_of(v);
    if g.is_zero() {
        return None;
    }
    Some(v.iter().map(|x| x / &g).collect())
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|r| r.is_integer())
}

/// `Some(k)` with `k*a == b` and `k > 0` when `b` is a positive multiple of `a`.
pub fn positive_multiple(a: &[Rat], b: &[Rat]) -> Option<Rat> {
    let k = proportionality(a, b)?;
    if k.is_positive() {
        Some(k)
    } else {
        None
    }
}

/// `Some(k)` with `k*a == b`, `k != 0`, if `b` lies on the line of nonzero `a`.
pub fn proportionality(a: &[Rat], b: &[Rat]) -> Option<Rat> {
    if a.len() != b.len() {
        return None;
    }
    let i = a.iter().position(|x| !x.is_zero())?;
    let k = &b[i] / &a[i];
    if k.is_zero() {
        return None;
    }
    a.iter().zip(b).all(|(x, y)| &(x * &k) == y).then_some(k)
}

pub fn exact_sqrt(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn exact_sqrt_i128(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt_i128(n);
    (r * r == n).then_some(r)
}

/// Floor square root of a nonnegative `i128`.
pub fn isqrt_i128(n: i128) -> i128 {
    debug_assert!(n >= 0);
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `Some(q)` with `q*q == r` when the rational `r` is a square of a rational.
pub fn rational_sqrt(r: &Rat) -> Option<Rat> {
    let n = exact_sqrt(r.numer())?;
    let d = exact_sqrt(r.denom())?;
    Some(Rat::new(n, d))
}

pub fn is_square_free(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    let m = n.unsigned_abs();
    let mut p = 2u64;
    let mut k = m;
    while p * p <= k {
        if k % (p * p) == 0 {
            return false;
        }
        if k % p == 0 {
            k /= p;
        }
        p += 1;
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = n;
    let mut p = 2u64;
    while p * p <= k {
        if k % p == 0 {
            out.push(p);
            while k % p == 0 {
                k /= p;
            }
        }
        p += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

/// Positive divisors of `|n|` (n != 0), ascending.
pub fn divisors(n: &Int) -> Vec<Int> {
    let m = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = Int::one();
    while &d * &d <= m {
        if (&m % &d).is_zero() {
            small.push(d.clone());
            let e = &m / &d;
            if e != d {
                large.push(e);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

pub fn to_i64(v: &Int) -> Option<i64> {
    v.to_i64()
}

pub mod serde_rat {
    //! `#[serde(with = "...")]` adapters for rationals as `"p/q"` strings.
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        fmt_rat(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(fmt_rat).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_rat(s).map_err(serde::de::Error::custom)).collect()
    }
}

pub mod serde_rat_mat {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|row| row.iter().map(fmt_rat).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let m = Vec::<Vec<String>>::deserialize(d)?;
        m.iter()
            .map(|row| row.iter().map(|s| parse_rat(s).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

pub mod serde_int {
    //! Big integers as decimal strings.
    use super::*;

    pub fn serialize<S: Serializer>(v: &Int, s: S) -> Result<S::Ok, S::Error> {
        v.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        let s = String::deserialize(d)?;
        Int::from_str(s.trim()).map_err(serde::de::Error::custom)
    }
}

pub mod serde_int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| Int::from_str(s.trim()).map_err(serde::de::Error::custom)).collect()
    }
}

pub mod serde_int_mat {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<Int>], s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Int>>, D::Error> {
        let m = Vec::<Vec<String>>::deserialize(d)?;
        m.iter()
            .map(|row| row.iter().map(|s| Int::from_str(s.trim()).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings_are_canonical() {
        assert_eq!(fmt_rat(&ratio(6, -4)), "-3/2");
        assert_eq!(fmt_rat(&ratio(4, 2)), "2");
        assert_eq!(parse_rat(" -3/2 ").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rat("7").unwrap(), rat(7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(parse_rat_list("0,-3/2,1").unwrap(), vec![rat(0), ratio(-3, 2), rat(1)]);
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![rat(1), ratio(-3, 2), rat(0)];
        assert_eq!(primitive_integral(&v).unwrap(), vec![int(2), int(-3), int(0)]);
        assert!(primitive_integral(&[rat(0), rat(0)]).is_none());
        let w = vec![rat(0), rat(4), rat(0)];
        assert_eq!(primitive_integral(&w).unwrap(), vec![int(0), int(1), int(0)]);
    }

    #[test]
    fn proportional_vectors() {
        let a = rat_vec(&[2, -7, 2]);
        let b = rat_vec(&[-4, 14, -4]);
        assert_eq!(proportionality(&a, &b), Some(rat(-2)));
        assert_eq!(positive_multiple(&a, &b), None);
        assert_eq!(proportionality(&a, &rat_vec(&[2, -7, 3])), None);
    }

    #[test]
    fn squares_and_primes() {
        assert_eq!(exact_sqrt(&int(192)), None);
        assert_eq!(exact_sqrt(&int(196)), Some(int(14)));
        assert_eq!(exact_sqrt_i128(1369), Some(37));
        assert_eq!(isqrt_i128(1_000_000_000_000_000_000), 1_000_000_000);
        assert_eq!(rational_sqrt(&ratio(4, 9)), Some(ratio(2, 3)));
        assert_eq!(rational_sqrt(&ratio(1, 21)), None);
        assert!(is_prime(7) && !is_prime(1) && !is_prime(21));
        assert_eq!(prime_divisors(84), vec![2, 3, 7]);
        assert!(is_square_free(-42) && !is_square_free(12));
        assert_eq!(divisors(&int(-12)), vec![int(1), int(2), int(3), int(4), int(6), int(12)]);
    }
}
