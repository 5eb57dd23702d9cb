//! Ring axioms, rational-function canonical form and parse/print round trips.

mod common;

use common::{Kind, Sampler};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qinv_core::expr::parse_scalar;
use qinv_core::poly_rat::{gcd, vars, MultiPoly, RatFunc, Vars};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kind() -> impl Strategy<Value = Kind> {
    proptest::sample::select(Kind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(kind in kind(), seed in any::<u64>()) {
        let s = Sampler::new(kind);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (s.elem(&mut rng), s.elem(&mut rng), s.elem(&mut rng));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &s.ring.one(), a.clone());
        prop_assert_eq!(&a + &s.ring.zero(), a.clone());
        if let Ok(inv) = a.try_invert() {
            prop_assert!((&a * &inv).is_one());
            prop_assert!(a.is_unit());
        } else {
            prop_assert!(!a.is_unit());
        }
    }

    #[test]
    fn print_parse_round_trip(kind in kind(), seed in any::<u64>()) {
        let s = Sampler::new(kind);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = s.elem(&mut rng);
        let text = a.to_canonical_string();
        let back = parse_scalar(&text, &s.ring).unwrap();
        prop_assert_eq!(back, a);
    }
}

fn random_poly(rng: &mut ChaCha8Rng, vs: &Vars, terms: usize) -> MultiPoly {
    MultiPoly::from_terms(
        vs.clone(),
        (0..terms).map(|_| {
            let e: Vec<u32> = (0..vs.len()).map(|_| rng.gen_range(0..=2)).collect();
            let c = BigRational::new(
                BigInt::from(rng.gen_range(-5..=5)),
                BigInt::from(rng.gen_range(1..=3)),
            );
            (e, c)
        }),
    )
}

fn random_ratfunc(rng: &mut ChaCha8Rng, vs: &Vars) -> RatFunc {
    loop {
        let k = rng.gen_range(1..=3);
        let den = random_poly(rng, vs, k);
        if !den.is_zero() {
            let k = rng.gen_range(0..=3);
            let num = random_poly(rng, vs, k);
            return RatFunc::new(num, den).unwrap();
        }
    }
}

fn is_canonical(f: &RatFunc) -> bool {
    gcd(f.num(), f.den()).is_one()
        && f.den()
            .leading_coeff()
            .is_some_and(|c| *c == BigRational::from_integer(1.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ratfunc_canonical_and_homomorphic(seed in any::<u64>(), x in -6i64..=6, y in -6i64..=6) {
        let vs = vars(&["s", "d"]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g) = (random_ratfunc(&mut rng, &vs), random_ratfunc(&mut rng, &vs));
        let results = [f.add(&g), f.sub(&g), f.mul(&g)];
        for h in results.iter().chain([&f, &g]) {
            prop_assert!(is_canonical(h));
            prop_assert_eq!(h.normalize(), h.clone());
        }
        if let Some(q) = f.div(&g) {
            prop_assert!(is_canonical(&q));
            prop_assert_eq!(q.mul(&g), f.clone());
        }
        let pt = [BigRational::from_integer(x.into()), BigRational::from_integer(y.into())];
        let (Some(fv), Some(gv)) = (f.eval(&pt), g.eval(&pt)) else { return Ok(()) };
        if let Some(v) = results[0].eval(&pt) {
            prop_assert_eq!(v, &fv + &gv);
        }
        if let Some(v) = results[2].eval(&pt) {
            prop_assert_eq!(v, &fv * &gv);
        }
    }

    #[test]
    fn degree_additivity_needs_no_reduction(seed in any::<u64>()) {
        let vs = vars(&["s", "d"]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_ratfunc(&mut rng, &vs);
        let common = random_poly(&mut rng, &vs, 2);
        prop_assume!(!common.is_zero());
        let unreduced = RatFunc::new_unreduced(f.num().mul(&common), f.den().mul(&common)).unwrap();
        for v in 0..2 {
            prop_assert_eq!(unreduced.is_proper_in(v), f.is_proper_in(v));
            prop_assert_eq!(unreduced.is_strictly_proper_in(v), f.is_strictly_proper_in(v));
            prop_assert_eq!(unreduced.delay(v), f.delay(v));
        }
        prop_assert_eq!(unreduced.normalize(), f);
    }

    #[test]
    fn gcd_divides_both(seed in any::<u64>()) {
        let vs = vars(&["x", "y", "z"]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(&mut rng, &vs, 2);
        let a = f.mul(&random_poly(&mut rng, &vs, 2));
        let b = f.mul(&random_poly(&mut rng, &vs, 2));
        let g = gcd(&a, &b);
        if a.is_zero() && b.is_zero() {
            prop_assert!(g.is_zero());
        } else {
            prop_assert!(a.div_exact(&g).is_some());
            prop_assert!(b.div_exact(&g).is_some());
            if !f.is_zero() && !a.is_zero() && !b.is_zero() {
                prop_assert!(g.div_exact(&f.monic()).is_some());
            }
        }
    }
}

#[test]
fn ratfunc_ring_round_trip_with_two_variables() {
    let ring = qinv_core::ring::Ring::ratfunc(&["s", "d"]).unwrap();
    let vs = vars(&["s", "d"]);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let f = random_ratfunc(&mut rng, &vs);
        let text = f.to_canonical_string();
        let back = parse_scalar(&text, &ring).unwrap();
        assert_eq!(back.as_ratfunc().unwrap(), f, "{text}");
        assert_eq!(back.to_canonical_string(), text);
    }
}
