use super::DiophantError;
use crate::arith::is_prime;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl Place {
    pub fn prime(p: u64) -> Result<Place, DiophantError> {
        if is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(DiophantError::NotAPlace(p))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Place {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "oo" => Ok(Place::Infinity),
            t => {
                let p: u64 = t.parse().map_err(|_| format!("bad place '{t}'"))?;
                Place::prime(p).map_err(|e| e.to_string())
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn split_valuation(mut n: i128, p: i128) -> (u32, i128) {
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    (k, n)
}

fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Legendre symbol of a unit `u` modulo the odd prime `p`.
fn legendre(u: i128, p: u64) -> i32 {
    let m = p as i128;
    let r = u.rem_euclid(m) as u128;
    if pow_mod(r, (p as u128 - 1) / 2, p as u128) == 1 {
        1
    } else {
        -1
    }
}

/// The Hilbert symbol `(a, b)_v` for nonzero integers.
pub fn hilbert_symbol(a: i64, b: i64, place: Place) -> Result<i32, DiophantError> {
    if a == 0 || b == 0 {
        return Err(DiophantError::ZeroArgument);
    }
    match place {
        Place::Infinity => Ok(if a < 0 && b < 0 { -1 } else { 1 }),
        Place::Prime(p) => {
            if !is_prime(p) {
                return Err(DiophantError::NotAPlace(p));
            }
            let (alpha, u) = split_valuation(a as i128, p as i128);
            let (beta, v) = split_valuation(b as i128, p as i128);
            if p == 2 {
                let eps = |x: i128| ((x - 1) / 2).rem_euclid(2);
                let omega = |x: i128| ((x * x - 1) / 8).rem_euclid(2);
                let e = eps(u) * eps(v) + alpha as i128 * omega(v) + beta as i128 * omega(u);
                Ok(if e % 2 == 0 { 1 } else { -1 })
            } else {
                let mut s = if (alpha as u64 * beta as u64 * ((p - 1) / 2)) % 2 == 0 { 1 } else { -1 };
                if beta % 2 == 1 {
                    s *= legendre(u, p);
                }
                if alpha % 2 == 1 {
                    s *= legendre(v, p);
                }
                Ok(s)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `(a, b)_p = 1` iff `z² = ax² + by²` has a primitive solution mod `p^k`
    /// for `k` large enough; checked by brute force on small moduli.
    fn locally_solvable(a: i64, b: i64, p: u64) -> bool {
        let k = match p { 2 => 5, 3 => 3, _ => 2 };
        let m = (p as i64).pow(k);
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    let primitive = x % p as i64 != 0 || y % p as i64 != 0 || z % p as i64 != 0;
                    if primitive && (a * x * x + b * y * y - z * z).rem_euclid(m) == 0 {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn textbook_values() {
        let two = Place::Prime(2);
        assert_eq!(hilbert_symbol(-1, -1, two).unwrap(), -1);
        assert_eq!(hilbert_symbol(-1, -1, Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(-1, -1, Place::Prime(3)).unwrap(), 1);
        assert_eq!(hilbert_symbol(2, 3, Place::Prime(3)).unwrap(), -1);
        assert_eq!(hilbert_symbol(2, 3, two).unwrap(), -1);
        assert_eq!(hilbert_symbol(2, 5, Place::Prime(5)).unwrap(), -1);
        assert_eq!(hilbert_symbol(1, 7, Place::Prime(7)).unwrap(), 1);
        assert_eq!(hilbert_symbol(0, 7, Place::Prime(7)), Err(DiophantError::ZeroArgument));
        assert_eq!(hilbert_symbol(1, 7, Place::Prime(9)), Err(DiophantError::NotAPlace(9)));
    }

    #[test]
    fn agrees_with_local_solvability() {
        for p in [2u64, 3, 5] {
            for a in [-6i64, -3, -2, -1, 1, 2, 3, 5, 6, 10] {
                for b in [-5i64, -2, -1, 1, 3, 7] {
                    let h = hilbert_symbol(a, b, Place::Prime(p)).unwrap();
                    assert_eq!(h == 1, locally_solvable(a, b, p), "({a},{b})_{p}");
                }
            }
        }
    }

    #[test]
    fn place_round_trip() {
        for s in ["2", "13", "inf"] {
            let p: Place = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
            let j = serde_json::to_string(&p).unwrap();
            assert_eq!(serde_json::from_str::<Place>(&j).unwrap(), p);
        }
        assert!("4".parse::<Place>().is_err());
    }
}
