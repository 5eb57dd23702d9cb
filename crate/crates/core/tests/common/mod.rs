//! Shared helpers for integration tests: random ring elements and an
//! independent cofactor-expansion determinant.

#![allow(dead_code)]

use qinv_core::mat_alg::Matrix;
use qinv_core::ring::{Ring, RingElement};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Determinant by Laplace expansion along the first row.
pub fn laplace_det(a: &Matrix) -> RingElement {
    let n = a.rows();
    let ring = a.ring();
    match n {
        0 => ring.one(),
        1 => a[(0, 0)].clone(),
        _ => {
            let mut acc = ring.zero();
            for j in 0..n {
                let x = &a[(0, j)];
                if x.is_zero() {
                    continue;
                }
                let term = x * &laplace_det(&a.minor(0, j));
                acc = if j % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
    }
}

/// `adj(A)_ij = (−1)^{i+j} det(minor(j, i))`.
pub fn cofactor_adjugate(a: &Matrix) -> Matrix {
    let n = a.rows();
    let ring = a.ring();
    if n == 1 {
        return Matrix::identity(ring, 1);
    }
    Matrix::from_fn(ring, n, n, |i, j| {
        let d = laplace_det(&a.minor(j, i));
        if (i + j) % 2 == 0 {
            d
        } else {
            -d
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Integers,
    Rationals,
    ModP(u64),
    ZBeta,
    RatFunc,
    Proper,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::Integers,
        Kind::Rationals,
        Kind::ModP(5),
        Kind::ModP(7),
        Kind::ZBeta,
        Kind::RatFunc,
        Kind::Proper,
    ];

    pub fn ring(self) -> Ring {
        match self {
            Kind::Integers => Ring::integers(),
            Kind::Rationals => Ring::rationals(),
            Kind::ModP(p) => Ring::modp(p).unwrap(),
            Kind::ZBeta => Ring::zbeta(),
            Kind::RatFunc => Ring::ratfunc(&["s"]).unwrap(),
            Kind::Proper => Ring::proper::<&str>(&[], &["s"]).unwrap(),
        }
    }
}

/// Random small elements of one ring.
pub struct Sampler {
    pub kind: Kind,
    pub ring: Ring,
    s: Option<RingElement>,
}

impl Sampler {
    pub fn new(kind: Kind) -> Sampler {
        let ring = kind.ring();
        let s = match kind {
            Kind::RatFunc | Kind::Proper => Some(ring.evaluation_ring().var("s").unwrap()),
            _ => None,
        };
        Sampler { kind, ring, s }
    }

    fn small(&self, rng: &mut ChaCha8Rng) -> i64 {
        rng.gen_range(-4..=4)
    }

    /// `(a·s + b)/(s + c)` in the rational-function ring, or `b/(s + c)`
    /// when `strict`.
    fn ratio(&self, rng: &mut ChaCha8Rng, strict: bool) -> RingElement {
        let s = self.s.as_ref().unwrap();
        let f = s.ring().clone();
        let a = if strict { 0 } else { self.small(rng) };
        let num = &(s * &f.from_int(a)) + &f.from_int(self.small(rng));
        let den = s + &f.from_int(self.small(rng));
        self.ring
            .coerce(&(&num * &den.try_invert().unwrap()))
            .unwrap()
    }

    pub fn elem(&self, rng: &mut ChaCha8Rng) -> RingElement {
        let r = &self.ring;
        match self.kind {
            Kind::Integers => r.from_int(self.small(rng)),
            Kind::Rationals => {
                let q = r.from_int(self.small(rng));
                let d = r.from_int(rng.gen_range(1..=4));
                &q * &d.try_invert().unwrap()
            }
            Kind::ModP(p) => r.from_int(rng.gen_range(0..p as i64)),
            Kind::ZBeta => {
                let a = r.from_int(rng.gen_range(-3..=3));
                let b = r.from_int(rng.gen_range(-3..=3));
                &a + &(&b * &r.beta().unwrap())
            }
            Kind::RatFunc | Kind::Proper => match rng.gen_range(0..3) {
                0 => r.zero(),
                1 => r.from_int(self.small(rng)),
                _ => self.ratio(rng, false),
            },
        }
    }

    /// Strictly proper element (proper ring only).
    pub fn strictly_proper(&self, rng: &mut ChaCha8Rng) -> RingElement {
        assert_eq!(self.kind, Kind::Proper);
        if rng.gen_bool(0.25) {
            self.ring.zero()
        } else {
            self.ratio(rng, true)
        }
    }

    pub fn matrix(&self, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
        Matrix::from_fn(&self.ring, rows, cols, |_, _| self.elem(rng))
    }
}
