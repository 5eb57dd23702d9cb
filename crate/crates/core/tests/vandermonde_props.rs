use proptest::prelude::*;
use qinv_core::mat_alg::Matrix;
use qinv_core::ring::{Ring, RingElement};
use qinv_core::vandermonde::{
    build, cauchy_binet_sum, det_product_formula, reconstruct_generators, search_left_invertible,
    verify_left_inverse, VandermondeSpec,
};

fn prime() -> impl Strategy<Value = u64> {
    proptest::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

fn elems(r: &Ring, xs: &[i64]) -> Vec<RingElement> {
    xs.iter().map(|&x| r.from_int(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn square_det_is_the_product(p in prime(), xs in proptest::collection::vec(0i64..13, 1..=5)) {
        let r = Ring::modp(p).unwrap();
        let pts = elems(&r, &xs);
        let v = build(&VandermondeSpec::new(&r, pts.clone(), pts.len()).unwrap());
        let det = v.det().unwrap();
        prop_assert_eq!(&det, &det_product_formula(&r, &pts));
        let mut residues: Vec<i64> = xs.iter().map(|x| x.rem_euclid(p as i64)).collect();
        residues.sort();
        residues.dedup();
        prop_assert_eq!(det.is_zero(), residues.len() < xs.len());
    }

    #[test]
    fn integer_det_is_the_product(xs in proptest::collection::vec(-6i64..=6, 1..=5)) {
        let z = Ring::integers();
        let pts = elems(&z, &xs);
        let v = build(&VandermondeSpec::new(&z, pts.clone(), pts.len()).unwrap());
        prop_assert_eq!(v.det().unwrap(), det_product_formula(&z, &pts));
    }

    #[test]
    fn field_search_needs_n_distinct_points(p in prime(), n in 1usize..=4) {
        let r = Ring::modp(p).unwrap();
        let cands: Vec<_> = (0..p as i64).map(|x| r.from_int(x)).collect();
        let found = search_left_invertible(&r, n, &cands, n).unwrap();
        prop_assert_eq!(found.is_some(), n as u64 <= p);
        if let Some(f) = found {
            prop_assert!(verify_left_inverse(&f.l, &f.vandermonde).unwrap());
            let gens: Vec<Matrix> = (0..n as i64).map(|k| Matrix::from_ints(&r, &[&[k, 1 - k]])).collect();
            prop_assert!(reconstruct_generators(&gens, &f.points, &f.l).unwrap());
        }
    }
}

#[test]
fn cauchy_binet_equals_det_of_product() {
    let zb = Ring::zbeta();
    let mut pts = elems(&zb, &[0, 1, 2, -1]);
    pts.push(zb.beta().unwrap());
    for n in 1..=3 {
        let found = search_left_invertible(&zb, n, &pts, 5)
            .unwrap()
            .expect("left inverse");
        let lv = found.l.mul(&found.vandermonde);
        assert_eq!(
            cauchy_binet_sum(&found.l, &found.vandermonde).unwrap(),
            lv.det().unwrap()
        );
        assert!(lv.det().unwrap().is_one());
    }
}
