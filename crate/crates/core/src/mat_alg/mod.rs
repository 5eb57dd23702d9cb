//! Dense matrices over any supported ring, with division-free determinant,
//! characteristic polynomial and adjugate, plus exact linear solving.

mod berkowitz;
mod smith;
mod solve;

use std::fmt;
use std::ops::Index;

use thiserror::Error;

use crate::ring::{Ring, RingElement, RingError};

pub use berkowitz::{adjugate_from_char_poly, char_poly_coeffs, RingOps};
pub use smith::{smith_normal_form, SmithForm};
pub use solve::{solve_linear, Obstruction, Solve};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("unsupported ring for {op}: {ring}")]
    Unsupported { op: &'static str, ring: String },
}

/// Dense row-major matrix. All entries belong to `ring`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<RingElement>,
}

/// Characteristic polynomial `det(A − xI) = p₀ + p₁x + … + pₙxⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    /// `coeffs[k]` is `p_k`; `p_n = (−1)ⁿ`, `p_0 = det A`.
    pub coeffs: Vec<RingElement>,
}

impl CharPoly {
    pub fn det(&self) -> &RingElement {
        &self.coeffs[0]
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `p₀I + p₁A + … + pₙAⁿ` (Horner).
    pub fn eval_matrix(&self, a: &Matrix) -> Result<Matrix, MatrixError> {
        let n = a.square_dim()?;
        let ring = a.ring().clone();
        let mut acc = Matrix::zeros(&ring, n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.matmul(a)?.add(&Matrix::identity(&ring, n).scale(c))?;
        }
        Ok(acc)
    }
}

/// Result of [`Matrix::inverse`] when the determinant is not a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotInvertible {
    pub det: RingElement,
}

impl Matrix {
    pub fn from_entries(
        ring: Ring,
        rows: usize,
        cols: usize,
        entries: Vec<RingElement>,
    ) -> Result<Matrix, MatrixError> {
        if rows * cols != entries.len() {
            return Err(MatrixError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| *e.ring() != ring) {
            return Err(RingError::Mismatch(ring.to_string(), bad.ring().to_string()).into());
        }
        Ok(Matrix {
            ring,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        ring: &Ring,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> RingElement,
    ) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert!(*e.ring() == *ring, "entry ring differs from matrix ring");
                entries.push(e);
            }
        }
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            entries,
        }
    }

    /// Integer matrix (entries embedded into `ring`).
    pub fn from_ints(ring: &Ring, rows: &[&[i64]]) -> Matrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix::from_fn(ring, rows.len(), ncols, |i, j| ring.from_int(rows[i][j]))
    }

    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        let z = ring.zero();
        Matrix::from_fn(ring, rows, cols, |_, _| z.clone())
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let (z, o) = (ring.zero(), ring.one());
        Matrix::from_fn(
            ring,
            n,
            n,
            |i, j| if i == j { o.clone() } else { z.clone() },
        )
    }

    /// Matrix unit `e_ij`.
    pub fn unit(ring: &Ring, rows: usize, cols: usize, i: usize, j: usize) -> Matrix {
        let (z, o) = (ring.zero(), ring.one());
        Matrix::from_fn(ring, rows, cols, |a, b| {
            if (a, b) == (i, j) {
                o.clone()
            } else {
                z.clone()
            }
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: RingElement) {
        assert!(
            *value.ring() == self.ring,
            "entry ring differs from matrix ring"
        );
        self.entries[i * self.cols + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElement::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn square_dim(&self) -> Result<usize, MatrixError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare(self.rows, self.cols))
        }
    }

    fn same_ring(&self, other: &Matrix) -> Result<(), MatrixError> {
        if self.ring != other.ring {
            return Err(RingError::Mismatch(self.ring.to_string(), other.ring.to_string()).into());
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.same_ring(other)?;
        if self.dims() != other.dims() {
            return Err(MatrixError::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        self.map(|e| -e)
    }

    pub fn scale(&self, c: &RingElement) -> Matrix {
        self.map(|e| c * e)
    }

    fn map(&self, f: impl Fn(&RingElement) -> RingElement) -> Matrix {
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.same_ring(other)?;
        if self.cols != other.rows {
            return Err(MatrixError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let zero = self.ring.zero();
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = zero.clone();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// `self * other`, panicking on shape or ring mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.matmul(other).expect("compatible matrices")
    }

    pub fn pow(&self, e: u32) -> Result<Matrix, MatrixError> {
        let n = self.square_dim()?;
        let mut acc = Matrix::identity(&self.ring, n);
        for _ in 0..e {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    /// Copy with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> Matrix {
        let mut entries = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows - 1,
            cols: self.cols - 1,
            entries,
        }
    }

    /// Rows (in the given order) of `self`.
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(&self.ring, rows.len(), self.cols, |i, j| {
            self.get(rows[i], j).clone()
        })
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(&self.ring, self.rows, cols.len(), |i, j| {
            self.get(i, cols[j]).clone()
        })
    }

    /// Re-express every entry in `target` (see [`Ring::coerce`]).
    pub fn coerce(&self, target: &Ring) -> Result<Matrix, MatrixError> {
        let entries = self
            .entries
            .iter()
            .map(|e| target.coerce(e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix {
            ring: target.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    fn rows_as_vecs(&self) -> Vec<RingElement> {
        self.entries.clone()
    }

    /// Characteristic polynomial `det(A − xI)` by Berkowitz's algorithm.
    pub fn char_poly(&self) -> Result<CharPoly, MatrixError> {
        let n = self.square_dim()?;
        let monic = char_poly_coeffs(&self.rows_as_vecs(), n, &self.ring.one());
        // monic[k] is the coefficient of x^(n-k) in det(xI − A);
        // det(A − xI) = (−1)^n det(xI − A)
        let flip = n % 2 == 1;
        let coeffs = monic
            .into_iter()
            .rev()
            .map(|c| if flip { -c } else { c })
            .collect();
        Ok(CharPoly { coeffs })
    }

    /// Gaussian elimination when the ring embeds in an implemented field,
    /// the characteristic polynomial otherwise.
    pub fn det(&self) -> Result<RingElement, MatrixError> {
        match self.eliminate(false)? {
            Some((det, _)) => Ok(det),
            None => Ok(self.char_poly()?.coeffs.swap_remove(0)),
        }
    }

    /// Gauss–Jordan on `[A | I]` over the evaluation field. Returns the
    /// determinant brought back into this ring and, when asked for and the
    /// determinant is nonzero, the inverse over the field. `None` when the
    /// evaluation ring is not a field.
    #[allow(clippy::type_complexity)]
    fn eliminate(
        &self,
        with_inverse: bool,
    ) -> Result<Option<(RingElement, Option<Vec<RingElement>>)>, MatrixError> {
        let n = self.square_dim()?;
        let field = self.ring.evaluation_ring();
        if !field.is_field() {
            return Ok(None);
        }
        let w = if with_inverse { 2 * n } else { n };
        let mut t: Vec<Vec<RingElement>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(w);
            for j in 0..n {
                row.push(field.coerce(&self.entries[i * n + j])?);
            }
            if with_inverse {
                row.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            }
            t.push(row);
        }
        let mut det = field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !t[r][c].is_zero()) else {
                return Ok(Some((self.ring.zero(), None)));
            };
            if p != c {
                t.swap(p, c);
                det = -det;
            }
            let pivot = t[c][c].clone();
            det = &det * &pivot;
            let inv = pivot.try_invert().expect("nonzero field element");
            for x in &mut t[c][c..] {
                *x = &*x * &inv;
            }
            let pivot_row = t[c].clone();
            let lo = if with_inverse { 0 } else { c + 1 };
            for (r, row) in t.iter_mut().enumerate().skip(lo) {
                if r == c || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        let det = self.ring.coerce(&det)?;
        let inv = with_inverse.then(|| {
            t.into_iter()
                .flat_map(|row| row.into_iter().skip(n))
                .collect()
        });
        Ok(Some((det, inv)))
    }

    /// `adj(A) = −(p₁I + p₂A + … + pₙAⁿ⁻¹)` from the characteristic polynomial.
    pub fn adjugate(&self) -> Result<Matrix, MatrixError> {
        let n = self.square_dim()?;
        let cp = self.char_poly()?;
        let entries = adjugate_from_char_poly(&self.rows_as_vecs(), n, &cp.coeffs);
        Ok(Matrix {
            ring: self.ring.clone(),
            rows: n,
            cols: n,
            entries,
        })
    }

    /// `det(A)⁻¹ adj(A)` when `det(A)` is a unit.
    pub fn inverse(&self) -> Result<Result<Matrix, NotInvertible>, MatrixError> {
        let n = self.square_dim()?;
        if let Some((det, inv)) = self.eliminate(true)? {
            if !det.is_unit() {
                return Ok(Err(NotInvertible { det }));
            }
            let entries = inv
                .expect("nonzero determinant")
                .iter()
                .map(|x| self.ring.coerce(x))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Ok(Matrix {
                ring: self.ring.clone(),
                rows: n,
                cols: n,
                entries,
            }));
        }
        let cp = self.char_poly()?;
        let det = cp.det().clone();
        let inv = match det.try_invert() {
            Ok(i) => i,
            Err(_) => return Ok(Err(NotInvertible { det })),
        };
        let adj = adjugate_from_char_poly(&self.rows_as_vecs(), n, &cp.coeffs);
        Ok(Ok(Matrix {
            ring: self.ring.clone(),
            rows: n,
            cols: n,
            entries: adj.iter().map(|e| &inv * e).collect(),
        }))
    }

    /// Entries in row-major order as a column.
    pub fn vectorize(&self) -> Vec<RingElement> {
        self.entries.clone()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        crate::expr::matrix_strings(self)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = RingElement;

    fn index(&self, (i, j): (usize, usize)) -> &RingElement {
        self.get(i, j)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_matrix(self))
    }
}

/// Serializes as rows of canonical expression strings.
impl serde::Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}", self.ring, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counterexample_g(z: &Ring) -> Matrix {
        Matrix::from_ints(z, &[&[0, 0, 0], &[0, 0, 1], &[0, 1, 0]])
    }

    fn k0(z: &Ring) -> Matrix {
        Matrix::from_ints(z, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])
    }

    #[test]
    fn product_with_identity() {
        let q = Ring::rationals();
        let a = Matrix::from_ints(&q, &[&[1, 2], &[3, 4]]);
        assert_eq!(Matrix::identity(&q, 2).mul(&a), a);
        assert!(a.matmul(&Matrix::identity(&q, 3)).is_err());
    }

    #[test]
    fn counterexample_products() {
        let z = Ring::integers();
        let gk = counterexample_g(&z).mul(&k0(&z));
        assert_eq!(
            gk,
            Matrix::from_ints(&z, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]])
        );
        let a = Matrix::identity(&z, 3).sub(&gk).unwrap();
        assert!(a.det().unwrap().is_one());
        let lower = Matrix::from_ints(&z, &[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1]]);
        assert_eq!(a.adjugate().unwrap(), lower);
        assert_eq!(a.inverse().unwrap().unwrap(), lower);
        // the computed product; the printed version in the literature has
        // different signs but the same (1,1) entry
        let prod = k0(&z).mul(&lower);
        assert_eq!(
            prod,
            Matrix::from_ints(&z, &[&[1, 1, 1], &[1, 1, 0], &[1, 0, 0]])
        );
    }

    #[test]
    fn char_poly_small() {
        let q = Ring::rationals();
        let zero = Matrix::zeros(&q, 2, 2);
        let cp = zero.char_poly().unwrap();
        assert_eq!(cp.coeffs, vec![q.zero(), q.zero(), q.one()]);
        let a = Matrix::from_ints(&q, &[&[1, 2], &[3, 4]]);
        let cp = a.char_poly().unwrap();
        assert_eq!(
            cp.coeffs,
            vec![q.from_int(-2), q.from_int(-5), q.from_int(1)]
        );
        assert!(cp.eval_matrix(&a).unwrap().is_zero());
        let z3 = Matrix::zeros(&q, 3, 3).char_poly().unwrap();
        assert_eq!(z3.coeffs[3], q.from_int(-1));
    }

    #[test]
    fn adjugate_2x2_and_identity() {
        let r = Ring::poly(&["a", "b", "c", "d"]).unwrap();
        let v = |n: &str| r.var(n).unwrap();
        let m = Matrix::from_fn(&r, 2, 2, |i, j| v(["a", "b", "c", "d"][2 * i + j]));
        let adj = m.adjugate().unwrap();
        assert_eq!(adj[(0, 0)], v("d"));
        assert_eq!(adj[(0, 1)], -v("b"));
        assert_eq!(adj[(1, 0)], -v("c"));
        assert_eq!(adj[(1, 1)], v("a"));
        let z = Ring::integers();
        assert_eq!(
            Matrix::identity(&z, 3).adjugate().unwrap(),
            Matrix::identity(&z, 3)
        );
        assert_eq!(
            Matrix::identity(&z, 1).adjugate().unwrap(),
            Matrix::identity(&z, 1)
        );
    }

    #[test]
    fn inverse_cases() {
        let z = Ring::integers();
        assert_eq!(
            Matrix::identity(&z, 2).inverse().unwrap().unwrap(),
            Matrix::identity(&z, 2)
        );
        let two = Matrix::from_ints(&z, &[&[2]]);
        assert_eq!(
            two.inverse().unwrap(),
            Err(NotInvertible { det: z.from_int(2) })
        );
        assert!(Matrix::zeros(&z, 2, 3).inverse().is_err());
    }
}
