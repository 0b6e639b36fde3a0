use super::DiophantError;
use crate::arith::{exact_sqrt, exact_sqrt_i128, int, Int};
use crate::par::{chunked, Exec};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

type Pair = (Int, Int);

/// One class of solutions of `t² − D·y² = N` under multiplication by the
/// fundamental unit, with the first few members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellClass {
    pub fundamental: Pair,
    pub orbit: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolutions {
    pub d: i64,
    pub n: i64,
    /// Least `(u, v)` with `u² − D·v² = 1`, `v > 0`.
    pub unit: Pair,
    /// Bound on `|y|` used to find class representatives.
    pub seed_bound: Int,
    pub classes: Vec<PellClass>,
}

impl PellSolutions {
    pub fn class_of(&self, t: i64, y: i64) -> Option<&PellClass> {
        let p = (int(t), int(y));
        self.classes.iter().find(|c| equivalent(&c.fundamental, &p, self.d, self.n))
    }
}

fn check_d(d: i64) -> Result<(), DiophantError> {
    if d <= 0 || exact_sqrt(&int(d)).is_some() {
        return Err(DiophantError::BadPellD(d));
    }
    Ok(())
}

/// Least nontrivial solution of `t² − D·y² = 1` via the continued fraction of √D.
pub fn fundamental_unit(d: i64) -> Result<Pair, DiophantError> {
    check_d(d)?;
    let a0 = int(d).sqrt();
    let dd = int(d);
    let (mut m, mut q, mut a) = (Int::zero(), Int::one(), a0.clone());
    let (mut p_prev, mut p) = (Int::one(), a0.clone());
    let (mut q_prev, mut qq) = (Int::zero(), Int::one());
    loop {
        if &p * &p - &dd * &qq * &qq == Int::one() {
            return Ok((p, qq));
        }
        m = &q * &a - &m;
        q = (&dd - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &qq + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut qq, q_next);
    }
}

fn mul(a: &Pair, b: &Pair, d: &Int) -> Pair {
    (&a.0 * &b.0 + d * &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn normalize(p: Pair) -> Pair {
    if p.0.is_negative() || (p.0.is_zero() && p.1.is_negative()) {
        (-p.0, -p.1)
    } else {
        p
    }
}

/// Same class iff `α·β̄ / N` lies in `Z[√D]`.
fn equivalent(a: &Pair, b: &Pair, d: i64, n: i64) -> bool {
    let (d, n) = (int(d), int(n));
    let re = &a.0 * &b.0 - &d * &a.1 * &b.1;
    let im = &a.1 * &b.0 - &a.0 * &b.1;
    (re % &n).is_zero() && (im % &n).is_zero()
}

/// Class representatives from the classical bound
/// `|y| ≤ v·sqrt(|N| / (2(u ± 1)))`, one per class.
fn class_seeds(d: i64, n: i64, unit: &Pair) -> (Int, Vec<Pair>) {
    let (u, v) = unit;
    let denom: Int = if n > 0 { (u + Int::one()) * 2 } else { (u - Int::one()) * 2 };
    let bound: Int = (v * v * int(n.abs()) / denom).sqrt();
    let mut seeds: Vec<Pair> = Vec::new();
    let mut y = Int::zero();
    while y <= bound {
        let t2 = int(n) + int(d) * &y * &y;
        if !t2.is_negative() {
            if let Some(t) = exact_sqrt(&t2) {
                for cand in [(t.clone(), y.clone()), (t.clone(), -y.clone())] {
                    let cand = normalize(cand);
                    if !seeds.iter().any(|s| equivalent(s, &cand, d, n)) {
                        seeds.push(cand);
                    }
                }
            }
        }
        y += 1;
    }
    seeds.sort();
    (bound, seeds)
}

/// Solutions of `t² − D·y² = N`, grouped into classes under the unit group.
///
/// Each class lists `count` consecutive members `α·εᵏ` (`k ≥ 0`), sign-normalized
/// so that `t > 0`. For `N = 1` the trivial solution is skipped and the
/// orbit starts at `ε`. `N = 0` has no nonzero solutions and yields no classes.
pub fn pell_orbit(d: i64, n: i64, count: usize) -> Result<PellSolutions, DiophantError> {
    let unit = fundamental_unit(d)?;
    if n == 0 {
        return Ok(PellSolutions { d, n, unit, seed_bound: Int::zero(), classes: vec![] });
    }
    let dd = int(d);
    let (seed_bound, seeds) = class_seeds(d, n, &unit);
    let classes = seeds
        .into_iter()
        .map(|seed| {
            let mut cur = if n == 1 { unit.clone() } else { seed.clone() };
            let mut orbit = Vec::with_capacity(count);
            for _ in 0..count {
                orbit.push(normalize(cur.clone()));
                cur = mul(&cur, &unit, &dd);
            }
            PellClass { fundamental: seed, orbit }
        })
        .collect();
    Ok(PellSolutions { d, n, unit, seed_bound, classes })
}

/// Every solution with `0 ≤ t ≤ t_max`, generated from the class orbits in both
/// directions. Sorted by `(t, y)`.
pub fn pell_window(d: i64, n: i64, t_max: &Int) -> Result<Vec<Pair>, DiophantError> {
    let unit = fundamental_unit(d)?;
    if n == 0 {
        return Ok(vec![(Int::zero(), Int::zero())]);
    }
    let dd = int(d);
    let inv = (unit.0.clone(), -unit.1.clone());
    let (_, seeds) = class_seeds(d, n, &unit);
    let mut out: BTreeSet<Pair> = BTreeSet::new();
    let keep = |p: &Pair, out: &mut BTreeSet<Pair>| {
        if p.0.abs() <= *t_max {
            let q = normalize(p.clone());
            if q.0.is_zero() {
                out.insert((q.0.clone(), -q.1.clone()));
            }
            out.insert(q);
        }
    };
    for seed in &seeds {
        for step in [&unit, &inv] {
            // |t| along an orbit is eventually increasing in both directions.
            let mut cur = seed.clone();
            let mut last = cur.0.abs();
            loop {
                keep(&cur, &mut out);
                cur = mul(&cur, step, &dd);
                let now = cur.0.abs();
                if now > *t_max && now > last {
                    break;
                }
                last = now;
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Direct sweep: every `(t, y)` with `0 ≤ t ≤ t_max` and `t² − D·y² = N`,
/// found by testing whether `(t² − N)/D` is a perfect square.
pub fn pell_sweep(d: i64, n: i64, t_max: i64, exec: Exec) -> Result<Vec<(i64, i64)>, DiophantError> {
    check_d(d)?;
    if t_max < 0 {
        return Err(DiophantError::BadBound);
    }
    if t_max > 3_000_000_000 {
        return Err(DiophantError::Overflow(t_max.to_string()));
    }
    let (d_, n_) = (d as i128, n as i128);
    Ok(chunked(0, t_max, 4096, exec, |lo, hi| {
        let mut out = Vec::new();
        for t in lo..=hi {
            let r = (t as i128) * (t as i128) - n_;
            if r < 0 || r % d_ != 0 {
                continue;
            }
            if let Some(y) = exact_sqrt_i128(r / d_) {
                let y = y as i64;
                if y == 0 {
                    out.push((t, 0));
                } else {
                    out.push((t, -y));
                    out.push((t, y));
                }
            }
        }
        out
    }))
}
