use super::DiophantError;
use crate::arith::{exact_sqrt_i128, int};
use crate::par::{flat_map_range, Exec};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// All `(x, y)` with `ax² + bxy + cy² = N` and `max(|x|, |y|) ≤ bound`,
/// in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicSolutionSet {
    pub form: (i64, i64, i64),
    pub target: i64,
    pub bound: i64,
    pub solutions: Vec<(i64, i64)>,
}

/// Exhaustive enumeration over the box. For each `x` the equation is solved
/// exactly for `y`, so the cost is linear in `bound`.
pub fn solve_conic(a: i64, b: i64, c: i64, n: i64, bound: i64, exec: Exec) -> Result<ConicSolutionSet, DiophantError> {
    if bound < 1 {
        return Err(DiophantError::BadBound);
    }
    let (a_, b_, c_, n_, bnd) = (a as i128, b as i128, c as i128, n as i128, bound as i128);
    let solutions = flat_map_range(-bound..bound + 1, exec, |x| {
        let x = x as i128;
        let mut ys: Vec<i128> = Vec::new();
        // c y² + (b x) y + (a x² − N) = 0
        let (qa, qb, qc) = (c_, b_ * x, a_ * x * x - n_);
        if qa != 0 {
            let disc = qb * qb - 4 * qa * qc;
            if let Some(s) = exact_sqrt_i128(disc) {
                for num in [-qb - s, -qb + s] {
                    if num % (2 * qa) == 0 {
                        ys.push(num / (2 * qa));
                    }
                }
            }
        } else if qb != 0 {
            if (-qc) % qb == 0 {
                ys.push(-qc / qb);
            }
        } else if qc == 0 {
            ys.extend(-bnd..=bnd);
        }
        ys.sort_unstable();
        ys.dedup();
        ys.into_iter().filter(|y| y.abs() <= bnd).map(|y| (x as i64, y as i64)).collect()
    });
    Ok(ConicSolutionSet { form: (a, b, c), target: n, bound, solutions })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Representation {
    /// Primitive `(x, y)` with `ax² + bxy + cy² = d`.
    Witness { x: i64, y: i64 },
    /// No primitive solution; `bound` is `None` when the absence is exact.
    Absent { bound: Option<i64>, reason: String },
}

impl Representation {
    pub fn witness(&self) -> Option<(i64, i64)> {
        match self {
            Representation::Witness { x, y } => Some((*x, *y)),
            Representation::Absent { .. } => None,
        }
    }
}

/// Primitive representation of `d`. For `d = 0` the answer is exact (the
/// form is isotropic iff its discriminant is a perfect square); otherwise the
/// search covers `max(|x|, |y|) ≤ bound` and returns the solution of least
/// height, lexicographically largest among those.
pub fn represents(a: i64, b: i64, c: i64, d: i64, bound: i64, exec: Exec) -> Result<Representation, DiophantError> {
    if bound < 1 {
        return Err(DiophantError::BadBound);
    }
    if d == 0 {
        let disc = (b as i128) * (b as i128) - 4 * (a as i128) * (c as i128);
        let Some(s) = exact_sqrt_i128(disc) else {
            return Ok(Representation::Absent {
                bound: None,
                reason: format!("discriminant {disc} is not a perfect square"),
            });
        };
        if a == 0 {
            return Ok(Representation::Witness { x: 1, y: 0 });
        }
        // x / y = (−b + s) / (2a)
        let (num, den) = (-(b as i128) + s, 2 * a as i128);
        let g = num.gcd(&den).max(1);
        let (mut x, mut y) = (num / g, den / g);
        if y < 0 {
            (x, y) = (-x, -y);
        }
        return Ok(Representation::Witness { x: x as i64, y: y as i64 });
    }
    let set = solve_conic(a, b, c, d, bound, exec)?;
    let best = set
        .solutions
        .iter()
        .filter(|(x, y)| x.gcd(y) == 1)
        .max_by_key(|(x, y)| (std::cmp::Reverse(x.abs().max(y.abs())), *x, *y));
    Ok(match best {
        Some(&(x, y)) => Representation::Witness { x, y },
        None => Representation::Absent { bound: Some(bound), reason: "no primitive solution in the search box".into() },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ParamSolutions {
    /// Every `t` works (the orthogonal line is isotropic and the target is 0).
    All,
    Finite { ts: Vec<i64> },
}

/// Classes `v = t·direction` with `b(v, h) = 0` and `b(v, v) = square`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalClasses {
    pub direction: (i64, i64),
    pub direction_square: i64,
    pub square: i64,
    pub solutions: ParamSolutions,
}

impl OrthogonalClasses {
    /// Nonzero solution vectors, when finitely many.
    pub fn nonzero_classes(&self) -> Option<Vec<(i64, i64)>> {
        match &self.solutions {
            ParamSolutions::All => None,
            ParamSolutions::Finite { ts } => Some(
                ts.iter()
                    .filter(|&&t| t != 0)
                    .map(|&t| (t * self.direction.0, t * self.direction.1))
                    .collect(),
            ),
        }
    }
}

/// Exact: `v·h = 0` cuts out the rank-one sublattice `Z·v₀`, on which the
/// square is `t²·q(v₀)`.
pub fn orthogonal_square_classes(gram: [[i64; 2]; 2], h: (i64, i64), square: i64) -> Result<OrthogonalClasses, DiophantError> {
    if h == (0, 0) {
        return Err(DiophantError::ZeroVector);
    }
    let f1 = gram[0][0] * h.0 + gram[0][1] * h.1;
    let f2 = gram[1][0] * h.0 + gram[1][1] * h.1;
    if f1 == 0 && f2 == 0 {
        return Err(DiophantError::Degenerate);
    }
    let g = f1.gcd(&f2);
    let v0 = (f2 / g, -f1 / g);
    let s0 = gram[0][0] * v0.0 * v0.0 + 2 * gram[0][1] * v0.0 * v0.1 + gram[1][1] * v0.1 * v0.1;
    let solutions = if s0 == 0 {
        if square == 0 {
            ParamSolutions::All
        } else {
            ParamSolutions::Finite { ts: vec![] }
        }
    } else if square % s0 != 0 {
        ParamSolutions::Finite { ts: vec![] }
    } else {
        match crate::arith::exact_sqrt(&int(square / s0)) {
            None => ParamSolutions::Finite { ts: vec![] },
            Some(r) => {
                let r = crate::arith::to_i64(&r).expect("small root");
                if r == 0 {
                    ParamSolutions::Finite { ts: vec![0] }
                } else {
                    ParamSolutions::Finite { ts: vec![-r, r] }
                }
            }
        }
    };
    Ok(OrthogonalClasses { direction: v0, direction_square: s0, square, solutions })
}
