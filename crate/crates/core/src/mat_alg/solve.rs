//! Exact solving of `A x = b`: Gaussian elimination over fields, Smith normal
//! form over ℤ, and ℤ[β] through its ℤ-basis `{1, β}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{smith_normal_form, Matrix, MatrixError};
use crate::ring::{RingDescriptor, RingElement};

/// Why `A x = b` has no solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// Over a field: `rank A < rank [A | b]`.
    Rank { rank: usize, augmented_rank: usize },
    /// Over ℤ: after the Smith transform an equation reads `divisor · y = value`
    /// and `value ≢ 0 (mod divisor)`; `residue` is `value mod divisor`.
    Divisibility {
        divisor: String,
        value: String,
        residue: String,
    },
    /// Over ℤ: a transformed equation reads `0 = value` with `value ≠ 0`.
    ZeroRow { value: String },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::Rank {
                rank,
                augmented_rank,
            } => write!(f, "rank(A) = {rank} < rank([A|b]) = {augmented_rank}"),
            Obstruction::Divisibility {
                divisor, residue, ..
            } => write!(f, "{divisor} ∤ {residue}"),
            Obstruction::ZeroRow { value } => write!(f, "0 = {value} is inconsistent"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve {
    Solution(Vec<RingElement>),
    NoSolution(Obstruction),
}

impl Solve {
    pub fn is_solvable(&self) -> bool {
        matches!(self, Solve::Solution(_))
    }
}

/// Solve `a · x = b` exactly. Supported rings: fields, ℤ, ℤ[β].
pub fn solve_linear(a: &Matrix, b: &[RingElement]) -> Result<Solve, MatrixError> {
    if b.len() != a.rows() {
        return Err(MatrixError::Dimension(format!(
            "right-hand side has {} entries, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    if let Some(bad) = b.iter().find(|x| x.ring() != a.ring()) {
        return Err(
            crate::ring::RingError::Mismatch(a.ring().to_string(), bad.ring().to_string()).into(),
        );
    }
    if a.ring().is_field() {
        return Ok(solve_field(a, b));
    }
    match a.ring().descriptor() {
        RingDescriptor::Integers => Ok(solve_integers(a, b)),
        RingDescriptor::QuadraticZBeta => Ok(solve_zbeta(a, b)),
        _ => Err(MatrixError::Unsupported {
            op: "linear solving",
            ring: a.ring().to_string(),
        }),
    }
}

fn solve_field(a: &Matrix, b: &[RingElement]) -> Solve {
    let (m, n) = a.dims();
    let ring = a.ring().clone();
    // augmented rows
    let mut rows: Vec<Vec<RingElement>> = (0..m)
        .map(|i| {
            let mut r: Vec<RingElement> = (0..n).map(|j| a[(i, j)].clone()).collect();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].try_invert().expect("nonzero field element");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if let Some(_bad) = (r..m).find(|&i| !rows[i][n].is_zero()) {
        return Solve::NoSolution(Obstruction::Rank {
            rank: r,
            augmented_rank: r + 1,
        });
    }
    let mut x = vec![ring.zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][n].clone();
    }
    Solve::Solution(x)
}

fn solve_int_system(
    a: &[Vec<BigInt>],
    b: &[BigInt],
    ncols: usize,
) -> Result<Vec<BigInt>, Obstruction> {
    let s = smith_normal_form(a);
    let c: Vec<BigInt> =
        s.u.iter()
            .map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum())
            .collect();
    let mut y = vec![BigInt::zero(); ncols];
    for (i, ci) in c.iter().enumerate() {
        if i < s.rank {
            let d = &s.diag[i];
            let (q, r) = ci.div_mod_floor(d);
            if !r.is_zero() {
                return Err(Obstruction::Divisibility {
                    divisor: d.to_string(),
                    value: ci.to_string(),
                    residue: r.to_string(),
                });
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return Err(Obstruction::ZeroRow {
                value: ci.to_string(),
            });
        }
    }
    Ok(s.v
        .iter()
        .map(|row| row.iter().zip(&y).map(|(x, yy)| x * yy).sum())
        .collect())
}

fn solve_integers(a: &Matrix, b: &[RingElement]) -> Solve {
    let (m, n) = a.dims();
    let rows: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| a[(i, j)].as_bigint().unwrap().clone())
                .collect()
        })
        .collect();
    let rhs: Vec<BigInt> = b.iter().map(|x| x.as_bigint().unwrap().clone()).collect();
    match solve_int_system(&rows, &rhs, n) {
        Ok(x) => Solve::Solution(x.iter().map(|v| a.ring().from_bigint(v)).collect()),
        Err(o) => Solve::NoSolution(o),
    }
}

/// `(c + dβ)(u + vβ) = (cu − 3dv) + (du + (c + d)v)β`, so each ℤ[β] equation
/// splits into two ℤ equations in the unknown coordinates `(u, v)`.
fn solve_zbeta(a: &Matrix, b: &[RingElement]) -> Solve {
    let (m, n) = a.dims();
    let mut rows = vec![vec![BigInt::zero(); 2 * n]; 2 * m];
    for i in 0..m {
        for j in 0..n {
            let (c, d) = a[(i, j)].as_zbeta().unwrap();
            rows[2 * i][2 * j] = c.clone();
            rows[2 * i][2 * j + 1] = -(d * BigInt::from(3));
            rows[2 * i + 1][2 * j] = d.clone();
            rows[2 * i + 1][2 * j + 1] = c + d;
        }
    }
    let rhs: Vec<BigInt> = b
        .iter()
        .flat_map(|x| {
            let (p, q) = x.as_zbeta().unwrap();
            [p.clone(), q.clone()]
        })
        .collect();
    match solve_int_system(&rows, &rhs, 2 * n) {
        Ok(x) => Solve::Solution(
            x.chunks(2)
                .map(|uv| {
                    a.ring()
                        .zbeta_element(uv[0].clone(), uv[1].clone())
                        .unwrap()
                })
                .collect(),
        ),
        Err(o) => Solve::NoSolution(o),
    }
}
