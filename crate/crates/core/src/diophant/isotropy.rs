use super::hilbert::{hilbert_symbol, Place};
use super::DiophantError;
use crate::arith::{exact_sqrt_i128, int, prime_divisors, primitive_integral, rat, to_i64, Rat};
use crate::linalg::QMat;
use crate::par::{flat_map_range, Exec};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEARCH_HEIGHT: i64 = 200;
pub const SEARCH_HEIGHT_ENV: &str = "K3CONE_SEARCH_HEIGHT";

/// Search height for brute-force sweeps, from the environment when set.
pub fn search_height_from_env() -> i64 {
    std::env::var(SEARCH_HEIGHT_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .filter(|&h| h >= 1)
        .unwrap_or(DEFAULT_SEARCH_HEIGHT)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Isotropic,
    Anisotropic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSymbol {
    pub place: Place,
    pub symbol: i32,
}

/// `Tᵀ·G·T = diag(diagonal)` with squarefree integer diagonal entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagonalization {
    #[serde(with = "crate::arith::serde_rat_mat")]
    pub transform: Vec<Vec<Rat>>,
    pub diagonal: Vec<i64>,
}

impl Diagonalization {
    pub fn verify(&self, gram: &[Vec<i64>]) -> bool {
        let rows: Vec<&[i64]> = gram.iter().map(|r| r.as_slice()).collect();
        let g = QMat::from_i64(&rows);
        let t = QMat::from_rows(self.transform.clone());
        let d = t.transpose().mul(&g).mul(&t);
        (0..d.rows()).all(|i| {
            (0..d.cols()).all(|j| d[(i, j)] == if i == j { rat(self.diagonal[i]) } else { Rat::zero() })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentCase {
    pub pattern: String,
    pub zeros: u64,
}

/// Census of zeros of the form modulo `p^k`. When no zero has a coordinate
/// prime to `p`, an integral zero could be divided by `p` forever, so none
/// exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentTrace {
    pub prime: u64,
    pub exponent: u32,
    pub modulus: u64,
    /// The gram matrix is divided by this content before reduction.
    pub content: i64,
    pub total_zeros: u64,
    pub cases: Vec<DescentCase>,
    pub closes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub height: i64,
    pub visited: u64,
    pub first_zero: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropyCertificate {
    pub gram: Vec<Vec<i64>>,
    pub verdict: Verdict,
    pub diagonalization: Diagonalization,
    pub local_symbols: Vec<LocalSymbol>,
    pub obstruction: Option<Place>,
    /// Primitive integral zero in the original coordinates.
    pub witness: Option<Vec<i64>>,
    /// Sweep over `|v1|, |v2| ≤ height`, solving exactly for `v3`.
    pub sweep: SweepRecord,
    pub descent: Option<DescentTrace>,
    /// Local symbols, sweep, witness and descent all tell the same story.
    pub consistent: bool,
}

fn check_ternary(gram: &[Vec<i64>]) -> Result<(), DiophantError> {
    if gram.len() != 3 || gram.iter().any(|r| r.len() != 3) {
        return Err(DiophantError::NotTernary);
    }
    for i in 0..3 {
        for j in 0..3 {
            if gram[i][j] != gram[j][i] {
                return Err(DiophantError::NotTernary);
            }
        }
    }
    Ok(())
}

fn to_i128(r: &crate::arith::Int) -> Result<i128, DiophantError> {
    r.to_i128().ok_or_else(|| DiophantError::Overflow(r.to_string()))
}

/// `n = s²·m` with `m` squarefree and `s > 0`.
fn square_split(n: i128) -> (i128, i128) {
    let sign = n.signum();
    let mut rest = n.abs();
    let (mut s, mut m) = (1i128, 1i128);
    let mut p = 2i128;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            m *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (s, sign * m * rest)
}

/// Congruence diagonalization over Q, then rescaling each coordinate so the
/// diagonal is squarefree and integral.
pub fn diagonalize(gram: &[Vec<i64>]) -> Result<Diagonalization, DiophantError> {
    let n = gram.len();
    let mut a: Vec<Vec<Rat>> = gram.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
    let mut p: Vec<Vec<Rat>> = QMat::identity(n).to_rows();
    let col_op = |m: &mut Vec<Vec<Rat>>, dst: usize, src: usize, c: &Rat| {
        for row in m.iter_mut() {
            let v = &row[src] * c;
            row[dst] += v;
        }
    };
    for i in 0..n {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
                for row in p.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                let one = rat(1);
                col_op(&mut a, i, j, &one);
                let rj = a[j].clone();
                for (x, y) in a[i].iter_mut().zip(rj) {
                    *x += y;
                }
                col_op(&mut p, i, j, &one);
            } else {
                return Err(DiophantError::Degenerate);
            }
        }
        for j in i + 1..n {
            if a[i][j].is_zero() {
                continue;
            }
            let c = -(&a[i][j] / &a[i][i]);
            col_op(&mut a, j, i, &c);
            let ri = a[i].clone();
            for (x, y) in a[j].iter_mut().zip(ri) {
                *x += y * &c;
            }
            col_op(&mut p, j, i, &c);
        }
    }
    let mut diagonal = Vec::with_capacity(n);
    for i in 0..n {
        let d = &a[i][i];
        let (num, den) = (to_i128(d.numer())?, to_i128(d.denom())?);
        let (s, m) = square_split(num * den);
        let m64 = i64::try_from(m).map_err(|_| DiophantError::Overflow(m.to_string()))?;
        diagonal.push(m64);
        let scale = Rat::new(int(den as i64), int(s as i64));
        for row in p.iter_mut() {
            row[i] = &row[i] * &scale;
        }
    }
    Ok(Diagonalization { transform: p, diagonal })
}

fn local_symbols(d: &[i64]) -> Result<Vec<LocalSymbol>, DiophantError> {
    let (a, b, c) = (d[0], d[1], d[2]);
    let prod = (a as i128 * b as i128 * c as i128 * 2).unsigned_abs();
    let prod = u64::try_from(prod).map_err(|_| DiophantError::Overflow(prod.to_string()))?;
    let mut places: Vec<Place> = prime_divisors(prod).into_iter().map(Place::Prime).collect();
    places.push(Place::Infinity);
    places
        .into_iter()
        .map(|place| Ok(LocalSymbol { place, symbol: hilbert_symbol(-a * c, -b * c, place)? }))
        .collect()
}

fn eval(gram: &[Vec<i64>], v: &[i64]) -> i128 {
    let mut s = 0i128;
    for i in 0..3 {
        for j in 0..3 {
            s += gram[i][j] as i128 * v[i] as i128 * v[j] as i128;
        }
    }
    s
}

/// Zeros `(v1, v2, v3) ≠ 0` with `|v1|, |v2| ≤ h`, solving for `v3` exactly.
fn sweep(gram: &[Vec<i64>], h: i64, exec: Exec) -> SweepRecord {
    let g = |i: usize, j: usize| gram[i][j] as i128;
    let hits = flat_map_range(-h..h + 1, exec, |x| {
        let x = x as i128;
        let mut out: Vec<Vec<i64>> = Vec::new();
        for y in -(h as i128)..=(h as i128) {
            let b = g(0, 2) * x + g(1, 2) * y;
            let q2 = g(0, 0) * x * x + 2 * g(0, 1) * x * y + g(1, 1) * y * y;
            let c33 = g(2, 2);
            let mut zs: Vec<i128> = Vec::new();
            if c33 != 0 {
                if let Some(s) = exact_sqrt_i128(b * b - c33 * q2) {
                    for num in [-b - s, -b + s] {
                        if num % c33 == 0 {
                            zs.push(num / c33);
                        }
                    }
                }
            } else if b != 0 {
                if q2 % (2 * b) == 0 {
                    zs.push(-q2 / (2 * b));
                }
            } else if q2 == 0 {
                zs.push(1);
            }
            zs.sort_unstable();
            for z in zs {
                if x != 0 || y != 0 || z != 0 {
                    if let Ok(z) = i64::try_from(z) {
                        out.push(vec![x as i64, y as i64, z]);
                        break;
                    }
                }
            }
            if !out.is_empty() {
                break;
            }
        }
        out
    });
    let side = (2 * h + 1) as u64;
    SweepRecord { height: h, visited: side * side, first_zero: hits.into_iter().next() }
}

fn content(gram: &[Vec<i64>]) -> i64 {
    gram.iter().flatten().fold(0i64, |g, &x| g.gcd(&x)).max(1)
}

/// Zeros of the form (divided by its content) modulo `p^k`, grouped by the
/// first coordinate prime to `p`.
pub fn descent_trace(gram: &[Vec<i64>], p: u64, k: u32) -> Result<DescentTrace, DiophantError> {
    check_ternary(gram)?;
    if !crate::arith::is_prime(p) {
        return Err(DiophantError::NotAPlace(p));
    }
    let m = p.checked_pow(k).filter(|&m| m <= 256).ok_or(DiophantError::BadBound)? as i128;
    let c = content(gram);
    let reduced: Vec<Vec<i64>> = gram.iter().map(|r| r.iter().map(|x| x / c).collect()).collect();
    let pi = p as i128;
    let labels = ["v1 unit", "v1 = 0, v2 unit", "v1 = v2 = 0, v3 unit", "all divisible"];
    let mut counts = [0u64; 4];
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                if eval(&reduced, &[x as i64, y as i64, z as i64]).rem_euclid(m) != 0 {
                    continue;
                }
                let idx = if x % pi != 0 {
                    0
                } else if y % pi != 0 {
                    1
                } else if z % pi != 0 {
                    2
                } else {
                    3
                };
                counts[idx] += 1;
            }
        }
    }
    let cases = labels
        .iter()
        .zip(counts)
        .map(|(l, zeros)| DescentCase { pattern: l.to_string(), zeros })
        .collect();
    Ok(DescentTrace {
        prime: p,
        exponent: k,
        modulus: m as u64,
        content: c,
        total_zeros: counts.iter().sum(),
        cases,
        closes: counts[..3].iter().all(|&z| z == 0),
    })
}

fn find_descent(gram: &[Vec<i64>], det: i64) -> Result<Option<DescentTrace>, DiophantError> {
    let mut primes = prime_divisors(2 * det.unsigned_abs());
    primes.sort_unstable();
    primes.dedup();
    for p in primes {
        let mut k = 1;
        while p.pow(k) <= 64 {
            let t = descent_trace(gram, p, k)?;
            if t.closes {
                return Ok(Some(t));
            }
            k += 1;
        }
    }
    Ok(None)
}

/// Zero of `Σ dᵢ zᵢ²` by growing boxes; `None` only past the cap.
fn diagonal_witness(d: &[i64], cap: i64) -> Option<[i64; 3]> {
    let (a, b, c) = (d[0] as i128, d[1] as i128, d[2] as i128);
    let mut h = 1i64;
    while h <= cap {
        for x in -h..=h {
            for y in -h..=h {
                let r = -(a * (x as i128).pow(2) + b * (y as i128).pow(2));
                if r % c != 0 {
                    continue;
                }
                if let Some(z) = exact_sqrt_i128(r / c) {
                    if x != 0 || y != 0 || z != 0 {
                        return Some([x, y, z as i64]);
                    }
                }
            }
        }
        h *= 2;
    }
    None
}

/// Decides isotropy of a nondegenerate ternary form over Q by local symbols,
/// and backs the verdict with a witness or a bounded sweep plus descent.
pub fn quad_isotropic_rank3(gram: &[Vec<i64>], height: i64, exec: Exec) -> Result<IsotropyCertificate, DiophantError> {
    check_ternary(gram)?;
    if height < 1 {
        return Err(DiophantError::BadBound);
    }
    let rows: Vec<&[i64]> = gram.iter().map(|r| r.as_slice()).collect();
    let det = QMat::from_i64(&rows).det();
    if det.is_zero() {
        return Err(DiophantError::Degenerate);
    }
    let diag = diagonalize(gram)?;
    let symbols = local_symbols(&diag.diagonal)?;
    let obstruction = symbols.iter().find(|s| s.symbol == -1).map(|s| s.place);
    let verdict = if obstruction.is_some() { Verdict::Anisotropic } else { Verdict::Isotropic };
    let sweep_rec = sweep(gram, height, exec);
    let (witness, descent) = match verdict {
        Verdict::Isotropic => {
            let w = diagonal_witness(&diag.diagonal, 1 << 12).and_then(|z| {
                let t = QMat::from_rows(diag.transform.clone());
                let x = t.mul_vec(&[rat(z[0]), rat(z[1]), rat(z[2])]);
                primitive_integral(&x).and_then(|v| v.iter().map(to_i64).collect::<Option<Vec<i64>>>())
            });
            (w.or_else(|| sweep_rec.first_zero.clone()), None)
        }
        Verdict::Anisotropic => {
            let det_i = to_i64(&det.to_integer()).ok_or_else(|| DiophantError::Overflow(det.to_string()))?;
            (None, find_descent(gram, det_i)?)
        }
    };
    let consistent = match verdict {
        Verdict::Isotropic => witness.as_ref().is_some_and(|w| eval(gram, w) == 0),
        Verdict::Anisotropic => sweep_rec.first_zero.is_none() && descent.as_ref().is_none_or(|d| d.closes),
    };
    Ok(IsotropyCertificate {
        gram: gram.to_vec(),
        verdict,
        diagonalization: diag,
        local_symbols: symbols,
        obstruction,
        witness,
        sweep: sweep_rec,
        descent,
        consistent,
    })
}

/// Isotropy of the diagonal form `a·x² + b·y² + c·z²`.
pub fn ternary_isotropic(a: i64, b: i64, c: i64, height: i64, exec: Exec) -> Result<IsotropyCertificate, DiophantError> {
    quad_isotropic_rank3(&[vec![a, 0, 0], vec![0, b, 0], vec![0, 0, c]], height, exec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_form() -> Vec<Vec<i64>> {
        vec![vec![3, 4, 0], vec![4, 3, 0], vec![0, 0, -2]]
    }

    #[test]
    fn surface_form_is_anisotropic() {
        let cert = quad_isotropic_rank3(&x_form(), 60, Exec::Parallel).unwrap();
        assert_eq!(cert.verdict, Verdict::Anisotropic);
        assert!(cert.consistent);
        assert!(cert.diagonalization.verify(&cert.gram));
        let d = cert.descent.unwrap();
        assert_eq!((d.prime, d.modulus), (2, 8));
        assert!(d.closes);
        let prod: i32 = cert.local_symbols.iter().map(|s| s.symbol).product();
        assert_eq!(prod, 1);
    }

    #[test]
    fn hilbert_cube_form_is_anisotropic() {
        let g = vec![vec![6, 0, 8], vec![0, -4, 0], vec![8, 0, 6]];
        let cert = quad_isotropic_rank3(&g, 50, Exec::Sequential).unwrap();
        assert_eq!(cert.verdict, Verdict::Anisotropic);
        assert!(cert.consistent);
        let d = cert.descent.unwrap();
        assert_eq!(d.content, 2);
        assert!(d.closes);
    }

    #[test]
    fn mod_four_does_not_close() {
        let t = descent_trace(&x_form(), 2, 2).unwrap();
        assert!(!t.closes);
        let t8 = descent_trace(&x_form(), 2, 3).unwrap();
        assert!(t8.closes);
        assert_eq!(t8.cases[3].zeros, t8.total_zeros);
    }

    #[test]
    fn isotropic_examples() {
        let c = ternary_isotropic(1, 1, -2, 10, Exec::Sequential).unwrap();
        assert_eq!(c.verdict, Verdict::Isotropic);
        assert!(c.consistent);
        let hyp = quad_isotropic_rank3(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 5]], 5, Exec::Sequential).unwrap();
        assert_eq!(hyp.verdict, Verdict::Isotropic);
        assert!(hyp.diagonalization.verify(&hyp.gram));
        assert!(hyp.consistent);
        assert_eq!(ternary_isotropic(1, 1, 1, 5, Exec::Sequential).unwrap().obstruction, Some(Place::Prime(2)));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(ternary_isotropic(1, 0, 1, 5, Exec::Sequential), Err(DiophantError::Degenerate));
        assert_eq!(
            quad_isotropic_rank3(&[vec![1, 2, 0], vec![0, 1, 0], vec![0, 0, 1]], 5, Exec::Sequential),
            Err(DiophantError::NotTernary)
        );
    }

    #[test]
    fn square_split_works() {
        assert_eq!(square_split(72), (6, 2));
        assert_eq!(square_split(-12), (2, -3));
        assert_eq!(square_split(1), (1, 1));
    }
}
