//! Division-free characteristic polynomial (Berkowitz) and the
//! Cayley–Hamilton adjugate, generic over any commutative ring element type.

use crate::ring::RingElement;

/// Arithmetic needed by the division-free algorithms.
pub trait RingOps: Clone {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl RingOps for RingElement {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        RingElement::is_zero(self)
    }
}

fn matvec<T: RingOps>(a: &[T], stride: usize, r: usize, v: &[T], zero: &T) -> Vec<T> {
    // leading r×r block of `a` times v
    (0..r)
        .map(|i| {
            let mut acc = zero.clone();
            for (k, x) in v.iter().enumerate() {
                let aik = &a[i * stride + k];
                if !aik.is_zero() && !x.is_zero() {
                    acc = acc.add(&aik.mul(x));
                }
            }
            acc
        })
        .collect()
}

/// Coefficients of `det(xI − A)` from the leading power down: `out[0] = 1`,
/// `out[n] = (−1)ⁿ det A`. `a` is row-major `n×n`.
pub fn char_poly_coeffs<T: RingOps>(a: &[T], n: usize, one: &T) -> Vec<T> {
    assert_eq!(a.len(), n * n);
    let zero = one.sub(one);
    if n == 0 {
        return vec![one.clone()];
    }
    let mut vect = vec![one.clone(), a[0].neg()];
    for r in 1..n {
        // A_r = leading (r+1)×(r+1) block = [[P, c], [row, a_rr]]
        let row: Vec<T> = (0..r).map(|j| a[r * n + j].clone()).collect();
        let col: Vec<T> = (0..r).map(|i| a[i * n + r].clone()).collect();
        let arr = &a[r * n + r];
        // Toeplitz column t = [1, −a_rr, −row·c, −row·P·c, …, −row·P^(r−1)·c]
        let mut t = Vec::with_capacity(r + 2);
        t.push(one.clone());
        t.push(arr.neg());
        let mut pc = col;
        for k in 0..r {
            let mut dot = zero.clone();
            for (x, y) in row.iter().zip(&pc) {
                dot = dot.add(&x.mul(y));
            }
            t.push(dot.neg());
            if k + 1 < r {
                pc = matvec(a, n, r, &pc, &zero);
            }
        }
        // vect ← T · vect with T lower-triangular Toeplitz, (r+2)×(r+1)
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = zero.clone();
            for (j, v) in vect.iter().enumerate().take(i.min(r) + 1) {
                let tij = &t[i - j];
                if !tij.is_zero() && !v.is_zero() {
                    acc = acc.add(&tij.mul(v));
                }
            }
            next.push(acc);
        }
        vect = next;
    }
    vect
}

fn matmul_sq<T: RingOps>(a: &[T], b: &[T], n: usize, zero: &T) -> Vec<T> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = zero.clone();
            for k in 0..n {
                let (x, y) = (&a[i * n + k], &b[k * n + j]);
                if !x.is_zero() && !y.is_zero() {
                    acc = acc.add(&x.mul(y));
                }
            }
            out.push(acc);
        }
    }
    out
}

/// `adj(A) = −(p₁I + p₂A + … + pₙAⁿ⁻¹)` where `p` are the coefficients of
/// `det(A − xI)` in increasing degree. Evaluated by Horner's rule.
pub fn adjugate_from_char_poly<T: RingOps>(a: &[T], n: usize, p: &[T]) -> Vec<T> {
    assert_eq!(p.len(), n + 1);
    let zero = p[n].sub(&p[n]);
    let diag = |c: &T| -> Vec<T> {
        (0..n * n)
            .map(|idx| {
                if idx / n == idx % n {
                    c.clone()
                } else {
                    zero.clone()
                }
            })
            .collect()
    };
    let mut acc = diag(&p[n]);
    for k in (1..n).rev() {
        acc = matmul_sq(&acc, a, n, &zero);
        for i in 0..n {
            acc[i * n + i] = acc[i * n + i].add(&p[k]);
        }
    }
    acc.into_iter().map(|x| x.neg()).collect()
}
