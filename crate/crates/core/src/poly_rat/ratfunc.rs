//! Rational functions with per-variable degree, properness and delay.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{MultiPoly, Vars};
use super::PolyError;

/// Delay of a rational function in a designated variable.
///
/// `Infinite` is the delay of the zero function and compares greater than
/// every finite delay.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Delay {
    Finite(i64),
    Infinite,
}

impl Ord for Delay {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Delay::Infinite, Delay::Infinite) => Ordering::Equal,
            (Delay::Infinite, _) => Ordering::Greater,
            (_, Delay::Infinite) => Ordering::Less,
            (Delay::Finite(a), Delay::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Delay {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Delay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delay::Finite(k) => write!(f, "{k}"),
            Delay::Infinite => f.write_str("inf"),
        }
    }
}

/// `num / den` over ℚ. Values built through [`RatFunc::new`] or arithmetic
/// are reduced with a monic denominator; [`RatFunc::new_unreduced`] keeps the
/// given representation, which properness and delay queries accept as well.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, PolyError> {
        Ok(RatFunc::new_unreduced(num, den)?.normalize())
    }

    pub fn new_unreduced(num: MultiPoly, den: MultiPoly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        assert_eq!(
            num.vars(),
            den.vars(),
            "numerator/denominator variable lists"
        );
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.vars().clone());
        RatFunc { num: p, den }
    }

    pub fn zero(vars: Vars) -> Self {
        RatFunc::from_poly(MultiPoly::zero(vars))
    }

    pub fn one(vars: Vars) -> Self {
        RatFunc::from_poly(MultiPoly::one(vars))
    }

    pub fn constant(vars: Vars, c: BigRational) -> Self {
        RatFunc::from_poly(MultiPoly::constant(vars, c))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Canonical form: numerator and denominator coprime, denominator monic.
    pub fn normalize(&self) -> RatFunc {
        if self.num.is_zero() {
            return RatFunc::zero(self.vars().clone());
        }
        let (num, den) = if self.den.is_constant() {
            (self.num.clone(), self.den.clone())
        } else {
            let g = gcd(&self.num, &self.den);
            if g.is_one() {
                (self.num.clone(), self.den.clone())
            } else {
                (
                    self.num.div_exact(&g).expect("gcd divides numerator"),
                    self.den.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        let lc = den.leading_coeff().expect("nonzero denominator").clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFunc {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            }
            .normalize();
        }
        // Henrici: with g = gcd(b, d), gcd(a·d/g + c·b/g, b·d/g) = gcd(·, g)
        let g = gcd(&self.den, &other.den);
        let (b, d) = if g.is_one() {
            (self.den.clone(), other.den.clone())
        } else {
            (
                self.den.div_exact(&g).expect("gcd divides"),
                other.den.div_exact(&g).expect("gcd divides"),
            )
        };
        let num = self.num.mul(&d).add(&other.num.mul(&b));
        if num.is_zero() {
            return RatFunc::zero(self.vars().clone());
        }
        let den = self.den.mul(&d);
        if g.is_one() {
            return RatFunc { num, den }.monic_den();
        }
        let h = gcd(&num, &g);
        if h.is_one() {
            RatFunc { num, den }.monic_den()
        } else {
            RatFunc {
                num: num.div_exact(&h).expect("gcd divides"),
                den: den.div_exact(&h).expect("gcd divides"),
            }
            .monic_den()
        }
    }

    fn monic_den(self) -> RatFunc {
        let lc = self
            .den
            .leading_coeff()
            .expect("nonzero denominator")
            .clone();
        if lc.is_one() {
            self
        } else {
            let inv = lc.recip();
            RatFunc {
                num: self.num.scale(&inv),
                den: self.den.scale(&inv),
            }
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.vars().clone());
        }
        // cross-cancel so the product of reduced inputs is reduced
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = other.den.div_exact(&g1).expect("gcd divides");
        let n2 = other.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coeff().expect("nonzero").clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        let r = RatFunc {
            num: self.den.clone(),
            den: self.num.clone(),
        };
        let lc = r.den.leading_coeff().expect("nonzero").clone();
        Some(RatFunc {
            num: r.num.scale(&lc.recip()),
            den: r.den.scale(&lc.recip()),
        })
    }

    pub fn div(&self, other: &RatFunc) -> Option<RatFunc> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// `(deg num, deg den)` in variable `index`; `None` marks the zero
    /// numerator (degree −∞).
    pub fn degree_in(&self, index: usize) -> (Option<u32>, u32) {
        (
            self.num.degree_in(index),
            self.den.degree_in(index).expect("nonzero denominator"),
        )
    }

    pub fn is_proper_in(&self, index: usize) -> bool {
        match self.degree_in(index) {
            (None, _) => true,
            (Some(n), d) => n <= d,
        }
    }

    pub fn is_strictly_proper_in(&self, index: usize) -> bool {
        match self.degree_in(index) {
            (None, _) => true,
            (Some(n), d) => n < d,
        }
    }

    /// Denominator degree minus numerator degree in `index`.
    pub fn delay(&self, index: usize) -> Delay {
        match self.degree_in(index) {
            (None, _) => Delay::Infinite,
            (Some(n), d) => Delay::Finite(d as i64 - n as i64),
        }
    }

    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn reindex(&self, target: &Vars) -> Option<RatFunc> {
        Some(RatFunc {
            num: self.num.reindex(target)?,
            den: self.den.reindex(target)?,
        })
    }

    pub fn to_canonical_string(&self) -> String {
        if self.den.is_one() {
            return self.num.to_canonical_string();
        }
        let num = self.num.to_canonical_string();
        let den = self.den.to_canonical_string();
        let num = if self.num.num_terms() > 1 {
            format!("({num})")
        } else {
            num
        };
        let den = if self.den.is_atomic_text() {
            den
        } else {
            format!("({den})")
        };
        format!("{num}/{den}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self.to_canonical_string())
    }
}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vars {
        names
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .into()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn worked_delay_values() {
        let v = vars(&["s", "d"]);
        let s = MultiPoly::var(v.clone(), 0);
        let d = MultiPoly::var(v.clone(), 1);
        let one = MultiPoly::one(v.clone());
        let two = MultiPoly::from_int(v.clone(), 2);
        let f = RatFunc::new(one.clone(), s.mul(&d).add(&two)).unwrap();
        assert_eq!(f.delay(1), Delay::Finite(1));
        let g = RatFunc::new(s.add(&d.pow(2)), s.pow(2).mul(&d).add(&d.pow(5))).unwrap();
        assert_eq!(g.delay(1), Delay::Finite(3));
        assert_eq!(RatFunc::zero(v).delay(1), Delay::Infinite);
    }

    #[test]
    fn per_variable_properness_of_g() {
        let v = vars(&["s1", "s2", "s3"]);
        let s1 = MultiPoly::var(v.clone(), 0);
        let s2 = MultiPoly::var(v.clone(), 1);
        let s3 = MultiPoly::var(v.clone(), 2);
        let g = RatFunc::new(
            s1.mul(&s2).mul(&s3),
            s1.pow(2).add(&s2.scale(&q(2))).add(&s3),
        )
        .unwrap();
        for i in 0..3 {
            assert!(g.is_proper_in(i));
        }
        // total degree 3 > 2: not proper in the single-variable sense
        assert!(g.num().total_degree() > g.den().total_degree());
        assert!(g.is_strictly_proper_in(0));
        assert!(!g.is_strictly_proper_in(1));
        assert!(!g.is_strictly_proper_in(2));
    }

    #[test]
    fn normalize_cancels_and_makes_monic() {
        let v = vars(&["s"]);
        let s = MultiPoly::var(v.clone(), 0);
        let one = MultiPoly::one(v.clone());
        let f = RatFunc::new(s.pow(2).sub(&one), s.sub(&one)).unwrap();
        assert_eq!(f, RatFunc::from_poly(s.add(&one)));
        let h = RatFunc::new(s.scale(&q(2)), MultiPoly::from_int(v.clone(), 4)).unwrap();
        assert_eq!(h.den(), &one);
        assert_eq!(h.num(), &s.scale(&BigRational::new(1.into(), 2.into())));
        let z = RatFunc::new(MultiPoly::zero(v.clone()), s.add(&one)).unwrap();
        assert_eq!(z.den(), &one);
        assert!(RatFunc::new(one, MultiPoly::zero(v)).is_err());
    }

    #[test]
    fn zero_is_strictly_proper() {
        let v = vars(&["s"]);
        assert!(RatFunc::zero(v).is_strictly_proper_in(0));
    }
}
