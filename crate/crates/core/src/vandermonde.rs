//! Vandermonde matrices over a ring: construction, the product formula for
//! the determinant, left inverses and generator reconstruction from
//! evaluations.

use itertools::Itertools;

use crate::mat_alg::{solve_linear, Matrix, MatrixError, Solve};
use crate::ring::{Ring, RingDescriptor, RingElement, RingError};

/// Points `r₁..r_N` and width `n ≤ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VandermondeSpec {
    ring: Ring,
    points: Vec<RingElement>,
    width: usize,
}

impl VandermondeSpec {
    pub fn new(ring: &Ring, points: Vec<RingElement>, width: usize) -> Result<Self, MatrixError> {
        if width == 0 || width > points.len() {
            return Err(MatrixError::Dimension(format!(
                "need 1 <= n <= N, got n = {width}, N = {}",
                points.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| p.ring() != ring) {
            return Err(RingError::Mismatch(ring.to_string(), p.ring().to_string()).into());
        }
        Ok(VandermondeSpec {
            ring: ring.clone(),
            points,
            width,
        })
    }

    pub fn points(&self) -> &[RingElement] {
        &self.points
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

/// `V_ij = r_i^j` (zero-based), an `N×n` matrix.
pub fn build(spec: &VandermondeSpec) -> Matrix {
    Matrix::from_fn(&spec.ring, spec.points.len(), spec.width, |i, j| {
        spec.points[i].pow(j as u32)
    })
}

/// `∏_{i<j} (r_j − r_i)`, which equals `det` of the square Vandermonde
/// matrix on the same points.
pub fn det_product_formula(ring: &Ring, points: &[RingElement]) -> RingElement {
    points
        .iter()
        .tuple_combinations()
        .fold(ring.one(), |acc, (ri, rj)| &acc * &(rj - ri))
}

/// `L·V = I_n` exactly.
pub fn verify_left_inverse(l: &Matrix, v: &Matrix) -> Result<bool, MatrixError> {
    let lv = l.matmul(v)?;
    Ok(lv.is_square() && lv == Matrix::identity(v.ring(), v.cols()))
}

/// `Σ_s det(L[:, s])·det(V[s, :])` over all `n`-subsets `s` of rows of `V`;
/// equals `det(L·V)`.
pub fn cauchy_binet_sum(l: &Matrix, v: &Matrix) -> Result<RingElement, MatrixError> {
    let n = v.cols();
    if l.dims() != (n, v.rows()) {
        return Err(MatrixError::Dimension(format!(
            "L is {}x{}, V is {}x{}",
            l.rows(),
            l.cols(),
            v.rows(),
            v.cols()
        )));
    }
    let mut acc = v.ring().zero();
    for s in (0..v.rows()).combinations(n) {
        let term = &l.select_cols(&s).det()? * &v.select_rows(&s).det()?;
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Points together with a left inverse of their Vandermonde matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftInverse {
    pub points: Vec<RingElement>,
    pub vandermonde: Matrix,
    pub l: Matrix,
}

/// Search subsets of `candidates` (by size `n..=n_max`, then
/// lexicographically) for a left-invertible `N×n` Vandermonde matrix.
///
/// Over a field a square matrix on any `n` distinct points works. Over ℤ and
/// ℤ[β] each row of `L` solves `Vᵀ·l_i = e_i`. `None` means no subset of the
/// supplied candidates works.
pub fn search_left_invertible(
    ring: &Ring,
    n: usize,
    candidates: &[RingElement],
    n_max: usize,
) -> Result<Option<LeftInverse>, MatrixError> {
    if n == 0 {
        return Err(MatrixError::Dimension("width must be at least 1".into()));
    }
    if let Some(p) = candidates.iter().find(|p| p.ring() != ring) {
        return Err(RingError::Mismatch(ring.to_string(), p.ring().to_string()).into());
    }
    let integral = matches!(
        ring.descriptor(),
        RingDescriptor::Integers | RingDescriptor::QuadraticZBeta
    );
    if !ring.is_field() && !integral {
        return Err(MatrixError::Unsupported {
            op: "left-inverse search",
            ring: ring.to_string(),
        });
    }
    let sizes = if ring.is_field() {
        n..=n
    } else {
        n..=n_max.min(candidates.len())
    };
    for size in sizes {
        for subset in candidates.iter().cloned().combinations(size) {
            let spec = VandermondeSpec::new(ring, subset, n)?;
            let v = build(&spec);
            let l = if ring.is_field() {
                match v.inverse()? {
                    Ok(inv) => inv,
                    Err(_) => continue,
                }
            } else {
                match left_inverse_by_rows(&v)? {
                    Some(l) => l,
                    None => continue,
                }
            };
            return Ok(Some(LeftInverse {
                points: spec.points,
                vandermonde: v,
                l,
            }));
        }
    }
    Ok(None)
}

fn left_inverse_by_rows(v: &Matrix) -> Result<Option<Matrix>, MatrixError> {
    let vt = v.transpose();
    let ring = v.ring();
    let n = v.cols();
    let mut rows = Vec::with_capacity(n * v.rows());
    for i in 0..n {
        let e: Vec<RingElement> = (0..n)
            .map(|k| if k == i { ring.one() } else { ring.zero() })
            .collect();
        match solve_linear(&vt, &e)? {
            Solve::Solution(x) => rows.extend(x),
            Solve::NoSolution(_) => return Ok(None),
        }
    }
    Ok(Some(Matrix::from_entries(ring.clone(), n, v.rows(), rows)?))
}

/// Checks `H_i = Σ_j L_ij (H_1 + r_j H_2 + … + r_j^{n−1} H_n)` for every `i`.
pub fn reconstruct_generators(
    h: &[Matrix],
    points: &[RingElement],
    l: &Matrix,
) -> Result<bool, MatrixError> {
    let n = h.len();
    let Some(first) = h.first() else {
        return Ok(true);
    };
    if l.dims() != (n, points.len()) {
        return Err(MatrixError::Dimension(format!(
            "L is {}x{}, expected {n}x{}",
            l.rows(),
            l.cols(),
            points.len()
        )));
    }
    let ring = first.ring();
    // evaluations E_j = Σ_k r_j^k H_{k+1}
    let mut evals = Vec::with_capacity(points.len());
    for r in points {
        let mut acc = Matrix::zeros(ring, first.rows(), first.cols());
        for (k, hk) in h.iter().enumerate() {
            acc = acc.add(&hk.scale(&r.pow(k as u32)))?;
        }
        evals.push(acc);
    }
    for (i, hi) in h.iter().enumerate() {
        let mut acc = Matrix::zeros(ring, first.rows(), first.cols());
        for (j, e) in evals.iter().enumerate() {
            acc = acc.add(&e.scale(&l[(i, j)]))?;
        }
        if &acc != hi {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(r: &Ring, xs: &[i64]) -> Vec<RingElement> {
        xs.iter().map(|&x| r.from_int(x)).collect()
    }

    #[test]
    fn build_and_product() {
        let z = Ring::integers();
        let spec = VandermondeSpec::new(&z, ints(&z, &[0, 1, 2]), 3).unwrap();
        let v = build(&spec);
        assert_eq!(
            v,
            Matrix::from_ints(&z, &[&[1, 0, 0], &[1, 1, 1], &[1, 2, 4]])
        );
        assert_eq!(det_product_formula(&z, spec.points()), z.from_int(2));
        assert_eq!(v.det().unwrap(), z.from_int(2));
        assert!(det_product_formula(&z, &ints(&z, &[3, 3])).is_zero());
        let col = build(&VandermondeSpec::new(&z, ints(&z, &[5, 7]), 1).unwrap());
        assert_eq!(col, Matrix::from_ints(&z, &[&[1], &[1]]));
    }

    #[test]
    fn symbolic_product() {
        let r = Ring::poly(&["x", "y", "z"]).unwrap();
        let pts: Vec<_> = ["x", "y", "z"].iter().map(|v| r.var(v).unwrap()).collect();
        let v = build(&VandermondeSpec::new(&r, pts.clone(), 3).unwrap());
        let ours = det_product_formula(&r, &pts);
        assert_eq!(v.det().unwrap(), ours);
        // −(x−y)(y−z)(z−x) = ∏_{i<j}(r_i − r_j) differs by (−1)^(n(n−1)/2) = −1
        let (x, y, z) = (&pts[0], &pts[1], &pts[2]);
        let theirs = -&(&(&(x - y) * &(y - z)) * &(z - x));
        assert_eq!(ours, -theirs);
    }

    #[test]
    fn search_cases() {
        let f7 = Ring::modp(7).unwrap();
        let found = search_left_invertible(&f7, 3, &ints(&f7, &[0, 1, 2, 3, 4, 5, 6]), 3)
            .unwrap()
            .unwrap();
        assert_eq!(found.points, ints(&f7, &[0, 1, 2]));
        assert!(verify_left_inverse(&found.l, &found.vandermonde).unwrap());

        let z = Ring::integers();
        assert_eq!(
            search_left_invertible(&z, 3, &ints(&z, &[0, 1, 2]), 3).unwrap(),
            None
        );

        let zb = Ring::zbeta();
        let mut cands = ints(&zb, &[0, 1, 2]);
        cands.push(zb.beta().unwrap());
        let found = search_left_invertible(&zb, 3, &cands, 4).unwrap().unwrap();
        assert_eq!(found.points.len(), 4);
        assert!(verify_left_inverse(&found.l, &found.vandermonde).unwrap());
        assert!(cauchy_binet_sum(&found.l, &found.vandermonde)
            .unwrap()
            .is_one());
        let gens: Vec<Matrix> = (1..=3)
            .map(|k| Matrix::from_ints(&zb, &[&[k, 2 * k - 7]]))
            .collect();
        assert!(reconstruct_generators(&gens, &found.points, &found.l).unwrap());
    }

    #[test]
    fn reconstruct_rationals() {
        let q = Ring::rationals();
        let h = vec![Matrix::unit(&q, 2, 2, 0, 0), Matrix::unit(&q, 2, 2, 0, 1)];
        let l = Matrix::from_ints(&q, &[&[1, 0], &[-1, 1]]);
        assert!(reconstruct_generators(&h, &ints(&q, &[0, 1]), &l).unwrap());
        let bad = Matrix::from_ints(&q, &[&[1, 0], &[1, 1]]);
        assert!(!reconstruct_generators(&h, &ints(&q, &[0, 1]), &bad).unwrap());
        let one = vec![Matrix::from_ints(&q, &[&[3]])];
        assert!(reconstruct_generators(&one, &ints(&q, &[0]), &Matrix::identity(&q, 1)).unwrap());
    }

    #[test]
    fn zero_is_not_a_left_inverse() {
        let q = Ring::rationals();
        let v = build(&VandermondeSpec::new(&q, ints(&q, &[1, 2]), 2).unwrap());
        assert!(!verify_left_inverse(&Matrix::zeros(&q, 2, 2), &v).unwrap());
        assert!(verify_left_inverse(&v.inverse().unwrap().unwrap(), &v).unwrap());
    }
}
