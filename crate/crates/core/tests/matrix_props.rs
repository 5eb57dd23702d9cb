//! Matrix identities checked against cofactor expansion and direct products.

mod common;

use common::{cofactor_adjugate, laplace_det, Kind, Sampler};
use proptest::prelude::*;
use qinv_core::mat_alg::{solve_linear, Matrix, Solve};
use qinv_core::ring::Ring;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kind() -> impl Strategy<Value = Kind> {
    proptest::sample::select(Kind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn determinant_adjugate_inverse(kind in kind(), n in 1usize..=3, seed in any::<u64>()) {
        let s = Sampler::new(kind);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = s.matrix(n, n, &mut rng);
        let cp = a.char_poly().unwrap();
        prop_assert_eq!(cp.coeffs.len(), n + 1);
        let lead = if n % 2 == 0 { s.ring.one() } else { -s.ring.one() };
        prop_assert_eq!(&cp.coeffs[n], &lead);
        let det = a.det().unwrap();
        prop_assert_eq!(&det, cp.det());
        prop_assert_eq!(&det, &laplace_det(&a));
        prop_assert_eq!(a.adjugate().unwrap(), cofactor_adjugate(&a));
        prop_assert_eq!(a.transpose().det().unwrap(), det.clone());
        match a.inverse().unwrap() {
            Ok(inv) => {
                prop_assert!(det.is_unit());
                prop_assert_eq!(a.mul(&inv), Matrix::identity(&s.ring, n));
                prop_assert_eq!(inv.mul(&a), Matrix::identity(&s.ring, n));
            }
            Err(e) => {
                prop_assert!(!det.is_unit());
                prop_assert_eq!(e.det, det);
            }
        }
    }

    #[test]
    fn determinant_is_multiplicative(kind in kind(), n in 1usize..=3, seed in any::<u64>()) {
        let s = Sampler::new(kind);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (s.matrix(n, n, &mut rng), s.matrix(n, n, &mut rng));
        prop_assert_eq!(a.mul(&b).det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
        prop_assert_eq!(a.mul(&b).adjugate().unwrap(), b.adjugate().unwrap().mul(&a.adjugate().unwrap()));
    }

    #[test]
    fn push_through(kind in kind(), m in 1usize..=3, n in 1usize..=3, seed in any::<u64>()) {
        let s = Sampler::new(kind);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = s.matrix(m, n, &mut rng);
        let k = s.matrix(n, m, &mut rng);
        let im = Matrix::identity(&s.ring, m).sub(&g.mul(&k)).unwrap();
        let in_ = Matrix::identity(&s.ring, n).sub(&k.mul(&g)).unwrap();
        // det(I − GK) = det(I − KG)
        prop_assert_eq!(im.det().unwrap(), in_.det().unwrap());
        prop_assert_eq!(k.mul(&im.adjugate().unwrap()), in_.adjugate().unwrap().mul(&k));
        // adj(A) commutes with A
        prop_assert_eq!(im.mul(&im.adjugate().unwrap()), im.adjugate().unwrap().mul(&im));
    }
}

fn check_solution(
    a: &Matrix,
    b: &[qinv_core::ring::RingElement],
    x: &[qinv_core::ring::RingElement],
) {
    for i in 0..a.rows() {
        let mut acc = a.ring().zero();
        for (j, xj) in x.iter().enumerate() {
            acc = &acc + &(&a[(i, j)] * xj);
        }
        assert_eq!(acc, b[i]);
    }
}

#[test]
fn solve_linear_consistent_systems() {
    for kind in [Kind::Integers, Kind::Rationals, Kind::ModP(7), Kind::ZBeta] {
        let s = Sampler::new(kind);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..150 {
            let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let a = s.matrix(rows, cols, &mut rng);
            let x0: Vec<_> = (0..cols).map(|_| s.elem(&mut rng)).collect();
            let b: Vec<_> = (0..rows)
                .map(|i| (0..cols).fold(s.ring.zero(), |acc, j| &acc + &(&a[(i, j)] * &x0[j])))
                .collect();
            match solve_linear(&a, &b).unwrap() {
                Solve::Solution(x) => check_solution(&a, &b, &x),
                Solve::NoSolution(o) => panic!("{kind:?}: solvable system reported {o}"),
            }
        }
    }
}

#[test]
fn solve_linear_obstructions_are_genuine() {
    // over ℤ/5 a NoSolution answer is checked by exhausting all x
    let f5 = Ring::modp(5).unwrap();
    let s = Sampler::new(Kind::ModP(5));
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut refused = 0;
    for _ in 0..200 {
        let a = s.matrix(3, 2, &mut rng);
        let b: Vec<_> = (0..3).map(|_| s.elem(&mut rng)).collect();
        match solve_linear(&a, &b).unwrap() {
            Solve::Solution(x) => check_solution(&a, &b, &x),
            Solve::NoSolution(_) => {
                refused += 1;
                for x0 in 0..5 {
                    for x1 in 0..5 {
                        let x = [f5.from_int(x0), f5.from_int(x1)];
                        let ok =
                            (0..3).all(|i| &(&a[(i, 0)] * &x[0]) + &(&a[(i, 1)] * &x[1]) == b[i]);
                        assert!(!ok, "solution {x0},{x1} missed");
                    }
                }
            }
        }
    }
    assert!(refused > 0);
}

#[test]
fn integer_obstruction_is_divisibility() {
    let z = Ring::integers();
    let a = Matrix::from_ints(&z, &[&[2, 4], &[6, 8]]);
    let b = [z.from_int(1), z.from_int(0)];
    match solve_linear(&a, &b).unwrap() {
        Solve::NoSolution(o) => assert!(o.to_string().contains('∤'), "{o}"),
        Solve::Solution(x) => panic!("{x:?}"),
    }
}
