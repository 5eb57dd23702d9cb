//! Multivariate gcd over ℚ by recursive content / primitive-part Euclid.
//!
//! The main variable at each level is the lowest-index variable occurring in
//! either operand; coefficients with respect to it live in ℚ[remaining vars]
//! and their gcd is computed recursively. The univariate step is a primitive
//! pseudo-remainder sequence. Results are made monic under graded-lex order.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Monomial, MultiPoly};

/// Monic gcd of `a` and `b`; zero only when both inputs are zero.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.vars().clone());
    }
    if a == b {
        return a.monic();
    }
    let v = match (0..a.nvars()).find(|&i| a.mentions(i) || b.mentions(i)) {
        Some(v) => v,
        None => return MultiPoly::one(a.vars().clone()),
    };
    if (v + 1..a.nvars()).all(|i| !a.mentions(i) && !b.mentions(i)) {
        return univariate_gcd(a, b, v);
    }

    let ca = content(a, v);
    let cb = content(b, v);
    let c = gcd(&ca, &cb);
    let mut pa = a.div_exact(&ca).expect("content divides");
    let mut pb = b.div_exact(&cb).expect("content divides");
    if deg(&pa, v) < deg(&pb, v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    let g = loop {
        if deg(&pb, v) == 0 {
            break MultiPoly::one(a.vars().clone());
        }
        let r = prem(&pa, &pb, v);
        if r.is_zero() {
            break pb;
        }
        pa = pb;
        pb = primitive_part(&r, v);
    };
    c.mul(&primitive_part(&g, v)).monic()
}

/// Dense Euclid over ℚ with monic remainders, for operands in `x_v` only.
fn univariate_gcd(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let dense = |p: &MultiPoly| {
        let mut c = vec![BigRational::zero(); deg(p, v) as usize + 1];
        for (m, x) in p.terms() {
            c[m.0[v] as usize] = x.clone();
        }
        make_monic(c)
    };
    let (mut x, mut y) = (dense(a), dense(b));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        // x mod y with y monic
        let dy = y.len() - 1;
        while x.len() > dy {
            let lead = x.pop().expect("nonempty");
            if lead.is_zero() {
                continue;
            }
            let shift = x.len() - dy;
            for (k, c) in y[..dy].iter().enumerate() {
                x[shift + k] -= &lead * c;
            }
        }
        while x.last().is_some_and(Zero::is_zero) {
            x.pop();
        }
        let r = make_monic(x);
        x = std::mem::replace(&mut y, r);
    }
    let mut e = vec![0; a.nvars()];
    MultiPoly::from_terms(
        a.vars().clone(),
        x.into_iter().enumerate().map(|(k, c)| {
            e[v] = k as u32;
            (e.clone(), c)
        }),
    )
}

fn make_monic(mut c: Vec<BigRational>) -> Vec<BigRational> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    if let Some(lc) = c.last().cloned() {
        if !lc.is_one() {
            let inv = lc.recip();
            for x in &mut c {
                *x *= &inv;
            }
        }
    }
    c
}

fn deg(p: &MultiPoly, v: usize) -> u32 {
    p.degree_in(v).unwrap_or(0)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x_v`.
pub fn content(p: &MultiPoly, v: usize) -> MultiPoly {
    let d = match p.degree_in(v) {
        Some(d) => d,
        None => return MultiPoly::zero(p.vars().clone()),
    };
    let mut acc = MultiPoly::zero(p.vars().clone());
    for k in (0..=d).rev() {
        let c = p.coeff_in(v, k);
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// `p / content(p)`, made monic.
pub fn primitive_part(p: &MultiPoly, v: usize) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

/// Pseudo-remainder of `a` by `b` with respect to `x_v`.
fn prem(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let db = deg(b, v);
    let lcb = b.coeff_in(v, db);
    let mut r = a.clone();
    while !r.is_zero() && deg(&r, v) >= db {
        let dr = deg(&r, v);
        let lcr = r.coeff_in(v, dr);
        let mut shift = Monomial::one(r.nvars());
        shift.0[v] = dr - db;
        r = r.mul(&lcb).sub(&lcr.mul(&b.mul_monomial(&shift)));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_rat::poly::Vars;

    fn vars(names: &[&str]) -> Vars {
        names
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .into()
    }

    #[test]
    fn univariate_common_factor() {
        let v = vars(&["s"]);
        let s = MultiPoly::var(v.clone(), 0);
        let one = MultiPoly::one(v.clone());
        let a = s.pow(2).sub(&one);
        let b = s.sub(&one).mul(&s.add(&MultiPoly::from_int(v.clone(), 3)));
        assert_eq!(gcd(&a, &b), s.sub(&one));
    }

    #[test]
    fn multivariate_common_factor() {
        let v = vars(&["x", "y", "z"]);
        let x = MultiPoly::var(v.clone(), 0);
        let y = MultiPoly::var(v.clone(), 1);
        let z = MultiPoly::var(v.clone(), 2);
        let f = x
            .mul(&y)
            .add(&z.pow(2))
            .add(&MultiPoly::from_int(v.clone(), 1));
        let a = f.mul(&x.add(&y));
        let b = f.mul(&y.sub(&z)).mul(&z);
        assert_eq!(gcd(&a, &b), f.monic());
    }

    #[test]
    fn coprime_and_constants() {
        let v = vars(&["s", "d"]);
        let s = MultiPoly::var(v.clone(), 0);
        let d = MultiPoly::var(v.clone(), 1);
        assert!(gcd(&s, &d).is_one());
        let two = MultiPoly::constant(v.clone(), BigRational::from_integer(2.into()));
        assert!(gcd(&two, &s).is_one());
        assert_eq!(
            gcd(
                &s.scale(&BigRational::from_integer(4.into())),
                &MultiPoly::zero(v)
            ),
            s
        );
    }

    #[test]
    fn content_in_second_variable() {
        let v = vars(&["s", "d"]);
        let s = MultiPoly::var(v.clone(), 0);
        let d = MultiPoly::var(v.clone(), 1);
        // (s+1)*d^2 + (s+1)*d = (s+1) * (d^2 + d)
        let p = s.add(&MultiPoly::one(v.clone())).mul(&d.pow(2).add(&d));
        assert_eq!(content(&p, 1), s.add(&MultiPoly::one(v)));
    }
}
