//! Commutative rings used throughout the crate.
//!
//! A [`Ring`] is a cheap-to-clone handle on a [`RingDescriptor`]. Every
//! [`RingElement`] carries its ring, so mixed-ring arithmetic is detected.
//! The `std::ops` impls panic on a ring mismatch; [`arith`] is the checked
//! entry point.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly_rat::{vars, Delay, MultiPoly, RatFunc, Vars};

/// Which ring, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingDescriptor {
    Integers,
    Rationals,
    #[serde(rename = "mod_p")]
    IntegersModP {
        p: u64,
    },
    /// ℤ[β] with β = (1+√−11)/2, i.e. β² = β − 3.
    #[serde(rename = "zbeta")]
    QuadraticZBeta,
    #[serde(rename = "poly")]
    PolyRing {
        vars: Vec<String>,
    },
    #[serde(rename = "ratfunc")]
    RatFuncField {
        vars: Vec<String>,
    },
    /// Rational functions in `free_vars ++ proper_vars` that are proper in
    /// each proper variable separately.
    #[serde(rename = "proper_ratfunc")]
    ProperRatRing {
        #[serde(default)]
        free_vars: Vec<String>,
        proper_vars: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring mismatch: {0} vs {1}")]
    Mismatch(String, String),
    #[error("invalid ring: {0}")]
    InvalidDescriptor(String),
    #[error("value outside ring: {0}")]
    ValueOutsideRing(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

/// Returned by [`RingElement::try_invert`] for non-units.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0} is not a unit")]
pub struct NotAUnit(pub String);

/// Sound lower bound on the size of every residue field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueFloor {
    Finite(u64),
    Infinite,
    Unknown,
}

impl ResidueFloor {
    /// Whether every residue field is known to have at least `k` elements.
    pub fn at_least(self, k: u64) -> Option<bool> {
        match self {
            ResidueFloor::Infinite => Some(true),
            ResidueFloor::Finite(f) if f >= k => Some(true),
            // a finite floor is exact for the rings in scope
            ResidueFloor::Finite(_) => Some(false),
            ResidueFloor::Unknown => None,
        }
    }
}

impl fmt::Display for ResidueFloor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueFloor::Finite(k) => write!(f, "{k}"),
            ResidueFloor::Infinite => f.write_str("infinite"),
            ResidueFloor::Unknown => f.write_str("unknown"),
        }
    }
}

struct RingInner {
    desc: RingDescriptor,
    /// All variables in polynomial order (free first for proper rings).
    vars: Vars,
    /// Indices into `vars` of the proper variables.
    proper: Vec<usize>,
}

/// Shared handle on a validated ring descriptor.
#[derive(Clone)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.desc {
            RingDescriptor::Integers => f.write_str("Z"),
            RingDescriptor::Rationals => f.write_str("Q"),
            RingDescriptor::IntegersModP { p } => write!(f, "Z/{p}Z"),
            RingDescriptor::QuadraticZBeta => f.write_str("Z[b]"),
            RingDescriptor::PolyRing { vars } => write!(f, "Q[{}]", vars.join(",")),
            RingDescriptor::RatFuncField { vars } => write!(f, "Q({})", vars.join(",")),
            RingDescriptor::ProperRatRing {
                free_vars,
                proper_vars,
            } => {
                // free variables before the semicolon
                if free_vars.is_empty() {
                    write!(f, "Q({})_p", proper_vars.join(","))
                } else {
                    write!(f, "Q({}; {})_p", free_vars.join(","), proper_vars.join(","))
                }
            }
        }
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_var_list(names: &[String]) -> Result<(), RingError> {
    for (i, v) in names.iter().enumerate() {
        if !valid_identifier(v) {
            return Err(RingError::InvalidDescriptor(format!(
                "`{v}` is not a valid variable name"
            )));
        }
        if names[..i].contains(v) {
            return Err(RingError::InvalidDescriptor(format!(
                "variable `{v}` declared twice"
            )));
        }
    }
    Ok(())
}

impl Ring {
    pub fn new(desc: RingDescriptor) -> Result<Ring, RingError> {
        let (all, proper) = match &desc {
            RingDescriptor::IntegersModP { p } => {
                if !is_prime_u64(*p) {
                    return Err(RingError::InvalidDescriptor(format!("{p} is not prime")));
                }
                (vec![], vec![])
            }
            RingDescriptor::PolyRing { vars } | RingDescriptor::RatFuncField { vars } => {
                check_var_list(vars)?;
                (vars.clone(), vec![])
            }
            RingDescriptor::ProperRatRing {
                free_vars,
                proper_vars,
            } => {
                if proper_vars.is_empty() {
                    return Err(RingError::InvalidDescriptor(
                        "proper ring needs at least one proper variable".into(),
                    ));
                }
                let all: Vec<String> = free_vars.iter().chain(proper_vars).cloned().collect();
                check_var_list(&all)?;
                let proper = (free_vars.len()..all.len()).collect();
                (all, proper)
            }
            _ => (vec![], vec![]),
        };
        Ok(Ring(Arc::new(RingInner {
            desc,
            vars: vars(&all),
            proper,
        })))
    }

    pub fn integers() -> Ring {
        Ring::new(RingDescriptor::Integers).unwrap()
    }

    pub fn rationals() -> Ring {
        Ring::new(RingDescriptor::Rationals).unwrap()
    }

    pub fn zbeta() -> Ring {
        Ring::new(RingDescriptor::QuadraticZBeta).unwrap()
    }

    pub fn modp(p: u64) -> Result<Ring, RingError> {
        Ring::new(RingDescriptor::IntegersModP { p })
    }

    pub fn poly<S: AsRef<str>>(names: &[S]) -> Result<Ring, RingError> {
        Ring::new(RingDescriptor::PolyRing {
            vars: names.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    pub fn ratfunc<S: AsRef<str>>(names: &[S]) -> Result<Ring, RingError> {
        Ring::new(RingDescriptor::RatFuncField {
            vars: names.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    pub fn proper<S: AsRef<str>>(free: &[S], proper: &[S]) -> Result<Ring, RingError> {
        Ring::new(RingDescriptor::ProperRatRing {
            free_vars: free.iter().map(|s| s.as_ref().to_string()).collect(),
            proper_vars: proper.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0.desc
    }

    /// Variables in polynomial order (empty for non-polynomial rings).
    pub fn vars(&self) -> &Vars {
        &self.0.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    /// Indices (into [`Ring::vars`]) of the proper variables.
    pub fn proper_indices(&self) -> &[usize] {
        &self.0.proper
    }

    pub fn is_field(&self) -> bool {
        matches!(
            self.0.desc,
            RingDescriptor::Rationals
                | RingDescriptor::IntegersModP { .. }
                | RingDescriptor::RatFuncField { .. }
        )
    }

    /// Number of elements when the ring is finite.
    pub fn cardinality(&self) -> Option<u64> {
        match self.0.desc {
            RingDescriptor::IntegersModP { p } => Some(p),
            _ => None,
        }
    }

    pub fn residue_floor(&self) -> ResidueFloor {
        match self.0.desc {
            RingDescriptor::Integers => ResidueFloor::Finite(2),
            RingDescriptor::IntegersModP { p } => ResidueFloor::Finite(p),
            RingDescriptor::QuadraticZBeta => ResidueFloor::Unknown,
            // residue fields are extensions of ℚ or of ℚ(free vars)
            RingDescriptor::Rationals
            | RingDescriptor::PolyRing { .. }
            | RingDescriptor::RatFuncField { .. }
            | RingDescriptor::ProperRatRing { .. } => ResidueFloor::Infinite,
        }
    }

    pub fn two_is_unit(&self) -> bool {
        self.from_int(2).is_unit()
    }

    fn wrap(&self, value: Value) -> RingElement {
        RingElement {
            ring: self.clone(),
            value,
        }
    }

    pub fn zero(&self) -> RingElement {
        self.from_int(0)
    }

    pub fn one(&self) -> RingElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> RingElement {
        let v = match &self.0.desc {
            RingDescriptor::Integers => Value::Int(n.clone()),
            RingDescriptor::Rationals => Value::Rat(BigRational::from_integer(n.clone())),
            RingDescriptor::IntegersModP { p } => Value::Mod(reduce_mod(n, *p)),
            RingDescriptor::QuadraticZBeta => Value::ZBeta(n.clone(), BigInt::zero()),
            RingDescriptor::PolyRing { .. } => Value::Poly(MultiPoly::constant(
                self.0.vars.clone(),
                BigRational::from_integer(n.clone()),
            )),
            RingDescriptor::RatFuncField { .. } | RingDescriptor::ProperRatRing { .. } => {
                Value::Frac(RatFunc::constant(
                    self.0.vars.clone(),
                    BigRational::from_integer(n.clone()),
                ))
            }
        };
        self.wrap(v)
    }

    /// A rational constant, when the ring contains it.
    pub fn from_rational(&self, q: &BigRational) -> Result<RingElement, RingError> {
        if q.is_integer() {
            return Ok(self.from_bigint(q.numer()));
        }
        let v = match &self.0.desc {
            RingDescriptor::Rationals => Value::Rat(q.clone()),
            RingDescriptor::IntegersModP { p } => {
                let d = reduce_mod(q.denom(), *p);
                if d == 0 {
                    return Err(RingError::ValueOutsideRing(format!(
                        "{q} has denominator divisible by {p}"
                    )));
                }
                let n = reduce_mod(q.numer(), *p);
                Value::Mod(mul_mod(n, inv_mod(d, *p), *p))
            }
            RingDescriptor::PolyRing { .. } => {
                Value::Poly(MultiPoly::constant(self.0.vars.clone(), q.clone()))
            }
            RingDescriptor::RatFuncField { .. } | RingDescriptor::ProperRatRing { .. } => {
                Value::Frac(RatFunc::constant(self.0.vars.clone(), q.clone()))
            }
            RingDescriptor::Integers | RingDescriptor::QuadraticZBeta => {
                return Err(RingError::ValueOutsideRing(format!("{q} is not integral")))
            }
        };
        Ok(self.wrap(v))
    }

    /// The element β of ℤ[β].
    pub fn beta(&self) -> Result<RingElement, RingError> {
        match self.0.desc {
            RingDescriptor::QuadraticZBeta => {
                Ok(self.wrap(Value::ZBeta(BigInt::zero(), BigInt::one())))
            }
            _ => Err(RingError::UnknownVariable("b".into())),
        }
    }

    /// `a + bβ` in ℤ[β].
    pub fn zbeta_element(&self, a: BigInt, b: BigInt) -> Result<RingElement, RingError> {
        match self.0.desc {
            RingDescriptor::QuadraticZBeta => Ok(self.wrap(Value::ZBeta(a, b))),
            _ => Err(RingError::Mismatch(self.to_string(), "Z[b]".into())),
        }
    }

    /// The variable `name` as a ring element. In a proper ring a proper
    /// variable is itself improper, so this fails for it.
    pub fn var(&self, name: &str) -> Result<RingElement, RingError> {
        if let RingDescriptor::QuadraticZBeta = self.0.desc {
            if name == "b" {
                return self.beta();
            }
        }
        let idx = self
            .var_index(name)
            .ok_or_else(|| RingError::UnknownVariable(name.to_string()))?;
        let p = MultiPoly::var(self.0.vars.clone(), idx);
        match &self.0.desc {
            RingDescriptor::PolyRing { .. } => Ok(self.wrap(Value::Poly(p))),
            _ => self.from_ratfunc(RatFunc::from_poly(p)),
        }
    }

    pub fn from_poly(&self, p: MultiPoly) -> Result<RingElement, RingError> {
        let p = p
            .reindex(&self.0.vars)
            .ok_or_else(|| RingError::ValueOutsideRing(format!("{p} uses undeclared variables")))?;
        match &self.0.desc {
            RingDescriptor::PolyRing { .. } => Ok(self.wrap(Value::Poly(p))),
            _ => self.from_ratfunc(RatFunc::from_poly(p)),
        }
    }

    /// Wrap a rational function; fails unless it lies in this ring.
    pub fn from_ratfunc(&self, f: RatFunc) -> Result<RingElement, RingError> {
        let f = f
            .reindex(&self.0.vars)
            .ok_or_else(|| RingError::ValueOutsideRing(format!("{f} uses undeclared variables")))?
            .normalize();
        match &self.0.desc {
            RingDescriptor::RatFuncField { .. } => Ok(self.wrap(Value::Frac(f))),
            RingDescriptor::ProperRatRing { .. } => {
                for &i in &self.0.proper {
                    if !f.is_proper_in(i) {
                        return Err(RingError::ValueOutsideRing(format!(
                            "{f} is not proper in {}",
                            self.0.vars[i]
                        )));
                    }
                }
                Ok(self.wrap(Value::Frac(f)))
            }
            RingDescriptor::PolyRing { .. } => {
                if f.den().is_one() {
                    Ok(self.wrap(Value::Poly(f.num().clone())))
                } else {
                    Err(RingError::ValueOutsideRing(format!(
                        "{f} is not a polynomial"
                    )))
                }
            }
            _ => match f.as_constant() {
                Some(c) => self.from_rational(&c),
                None => Err(RingError::ValueOutsideRing(format!(
                    "{f} is not a constant"
                ))),
            },
        }
    }

    /// The ring in which text expressions are evaluated before being brought
    /// back into `self` (the fraction field where one is implemented).
    pub fn evaluation_ring(&self) -> Ring {
        match &self.0.desc {
            RingDescriptor::Integers => Ring::rationals(),
            RingDescriptor::PolyRing { vars } => Ring::ratfunc(vars).unwrap(),
            RingDescriptor::ProperRatRing { .. } => Ring::ratfunc(&self.0.vars).unwrap(),
            _ => self.clone(),
        }
    }

    /// Bring an element of another ring into this one, when it denotes a
    /// value of this ring (integers into anything, ℚ into fields, rational
    /// functions into polynomial or proper rings, ...).
    pub fn coerce(&self, x: &RingElement) -> Result<RingElement, RingError> {
        if x.ring == *self {
            return Ok(x.clone());
        }
        let outside = || RingError::ValueOutsideRing(format!("{x} is not an element of {self}"));
        match &x.value {
            Value::Int(n) => Ok(self.from_bigint(n)),
            Value::Rat(q) => self.from_rational(q),
            Value::Mod(r) => match self.0.desc {
                RingDescriptor::IntegersModP { p } if Some(p) == x.ring.cardinality() => {
                    Ok(self.wrap(Value::Mod(*r)))
                }
                _ => Err(outside()),
            },
            Value::ZBeta(a, b) => {
                if b.is_zero() {
                    Ok(self.from_bigint(a))
                } else {
                    Err(outside())
                }
            }
            Value::Poly(p) => self.from_poly(p.clone()),
            Value::Frac(f) => self.from_ratfunc(f.clone()),
        }
    }
}

/// Kind-specific payload of a ring element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Value {
    Int(BigInt),
    Rat(BigRational),
    /// Residue in `[0, p)`.
    Mod(u64),
    /// `a + bβ`.
    ZBeta(BigInt, BigInt),
    Poly(MultiPoly),
    Frac(RatFunc),
}

fn reduce_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime, a != 0 (mod p)
    pow_mod(a, p - 2, p)
}

#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: Ring,
    value: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic.
pub fn arith(op: ArithOp, a: &RingElement, b: &RingElement) -> Result<RingElement, RingError> {
    if a.ring != b.ring {
        return Err(RingError::Mismatch(a.ring.to_string(), b.ring.to_string()));
    }
    Ok(match op {
        ArithOp::Add => a.add_same(b),
        ArithOp::Sub => a.sub_same(b),
        ArithOp::Mul => a.mul_same(b),
    })
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Int(n) => n.is_zero(),
            Value::Rat(q) => q.is_zero(),
            Value::Mod(r) => *r == 0,
            Value::ZBeta(a, b) => a.is_zero() && b.is_zero(),
            Value::Poly(p) => p.is_zero(),
            Value::Frac(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    fn with(&self, value: Value) -> RingElement {
        RingElement {
            ring: self.ring.clone(),
            value,
        }
    }

    fn add_same(&self, other: &RingElement) -> RingElement {
        let v = match (&self.value, &other.value) {
            (Value::Int(a), Value::Int(b)) => Value::Int(a + b),
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            (Value::Mod(a), Value::Mod(b)) => {
                let p = self.ring.cardinality().unwrap();
                Value::Mod(((*a as u128 + *b as u128) % p as u128) as u64)
            }
            (Value::ZBeta(a, b), Value::ZBeta(c, d)) => Value::ZBeta(a + c, b + d),
            (Value::Poly(a), Value::Poly(b)) => Value::Poly(a.add(b)),
            (Value::Frac(a), Value::Frac(b)) => Value::Frac(a.add(b)),
            _ => unreachable!("payload does not match ring"),
        };
        self.with(v)
    }

    fn neg_same(&self) -> RingElement {
        let v = match &self.value {
            Value::Int(a) => Value::Int(-a),
            Value::Rat(a) => Value::Rat(-a),
            Value::Mod(a) => {
                let p = self.ring.cardinality().unwrap();
                Value::Mod(if *a == 0 { 0 } else { p - a })
            }
            Value::ZBeta(a, b) => Value::ZBeta(-a, -b),
            Value::Poly(a) => Value::Poly(a.neg()),
            Value::Frac(a) => Value::Frac(a.neg()),
        };
        self.with(v)
    }

    fn sub_same(&self, other: &RingElement) -> RingElement {
        self.add_same(&other.neg_same())
    }

    fn mul_same(&self, other: &RingElement) -> RingElement {
        let v = match (&self.value, &other.value) {
            (Value::Int(a), Value::Int(b)) => Value::Int(a * b),
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
            (Value::Mod(a), Value::Mod(b)) => {
                Value::Mod(mul_mod(*a, *b, self.ring.cardinality().unwrap()))
            }
            // (a + bβ)(c + dβ) = ac + (ad + bc)β + bdβ², β² = β − 3
            (Value::ZBeta(a, b), Value::ZBeta(c, d)) => {
                let bd = b * d;
                Value::ZBeta(a * c - &bd * 3, a * d + b * c + bd)
            }
            (Value::Poly(a), Value::Poly(b)) => Value::Poly(a.mul(b)),
            (Value::Frac(a), Value::Frac(b)) => Value::Frac(a.mul(b)),
            _ => unreachable!("payload does not match ring"),
        };
        self.with(v)
    }

    pub fn pow(&self, e: u32) -> RingElement {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        acc
    }

    /// Norm a² + ab + 3b² of a + bβ.
    fn zbeta_norm(a: &BigInt, b: &BigInt) -> BigInt {
        a * a + a * b + b * b * 3
    }

    pub fn is_unit(&self) -> bool {
        match &self.value {
            Value::Int(n) => n.abs().is_one(),
            Value::Rat(q) => !q.is_zero(),
            Value::Mod(r) => *r != 0,
            Value::ZBeta(a, b) => Self::zbeta_norm(a, b).is_one(),
            Value::Poly(p) => !p.is_zero() && p.is_constant(),
            Value::Frac(f) => match self.ring.descriptor() {
                RingDescriptor::ProperRatRing { .. } => {
                    !f.is_zero()
                        && self
                            .ring
                            .proper_indices()
                            .iter()
                            .all(|&i| !f.is_strictly_proper_in(i))
                }
                _ => !f.is_zero(),
            },
        }
    }

    pub fn try_invert(&self) -> Result<RingElement, NotAUnit> {
        if !self.is_unit() {
            return Err(NotAUnit(self.to_string()));
        }
        let v = match &self.value {
            Value::Int(n) => Value::Int(n.clone()),
            Value::Rat(q) => Value::Rat(q.recip()),
            Value::Mod(r) => Value::Mod(inv_mod(*r, self.ring.cardinality().unwrap())),
            // norm 1: inverse is the conjugate a + b(1 − β) = (a + b) − bβ
            Value::ZBeta(a, b) => Value::ZBeta(a + b, -b),
            Value::Poly(p) => {
                let c = p.as_constant().expect("unit polynomial is constant");
                Value::Poly(MultiPoly::constant(p.vars().clone(), c.recip()))
            }
            Value::Frac(f) => Value::Frac(f.inv().expect("nonzero")),
        };
        Ok(self.with(v))
    }

    /// The underlying rational function for polynomial-like rings.
    pub fn as_ratfunc(&self) -> Option<RatFunc> {
        match &self.value {
            Value::Poly(p) => Some(RatFunc::from_poly(p.clone())),
            Value::Frac(f) => Some(f.clone()),
            _ => None,
        }
    }

    pub fn as_bigint(&self) -> Option<&BigInt> {
        match &self.value {
            Value::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match &self.value {
            Value::Mod(r) => Some(*r),
            _ => None,
        }
    }

    /// `(a, b)` with `self = a + bβ`.
    pub fn as_zbeta(&self) -> Option<(&BigInt, &BigInt)> {
        match &self.value {
            Value::ZBeta(a, b) => Some((a, b)),
            _ => None,
        }
    }

    fn ratfunc_in(&self, var: &str) -> Result<(RatFunc, usize), RingError> {
        let idx = self
            .ring
            .var_index(var)
            .ok_or_else(|| RingError::UnknownVariable(var.to_string()))?;
        let f = self
            .as_ratfunc()
            .ok_or_else(|| RingError::UnknownVariable(var.to_string()))?;
        Ok((f, idx))
    }

    /// `(deg num, deg den)` in `var`; `None` for the zero numerator.
    pub fn degree_in(&self, var: &str) -> Result<(Option<u32>, u32), RingError> {
        let (f, i) = self.ratfunc_in(var)?;
        Ok(f.degree_in(i))
    }

    pub fn is_proper_in(&self, var: &str) -> Result<bool, RingError> {
        let (f, i) = self.ratfunc_in(var)?;
        Ok(f.is_proper_in(i))
    }

    pub fn is_strictly_proper_in(&self, var: &str) -> Result<bool, RingError> {
        let (f, i) = self.ratfunc_in(var)?;
        Ok(f.is_strictly_proper_in(i))
    }

    pub fn delay(&self, var: &str) -> Result<Delay, RingError> {
        let (f, i) = self.ratfunc_in(var)?;
        Ok(f.delay(i))
    }

    /// Canonical text, re-parseable in the same ring.
    pub fn to_canonical_string(&self) -> String {
        match &self.value {
            Value::Int(n) => n.to_string(),
            Value::Rat(q) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            Value::Mod(r) => r.to_string(),
            Value::ZBeta(a, b) => fmt_zbeta(a, b),
            Value::Poly(p) => p.to_canonical_string(),
            Value::Frac(f) => f.to_canonical_string(),
        }
    }
}

fn fmt_zbeta(a: &BigInt, b: &BigInt) -> String {
    let bpart = |lead: bool| -> String {
        let sign = if b.is_negative() {
            "-"
        } else if lead {
            ""
        } else {
            "+"
        };
        let mag = b.abs();
        if mag.is_one() {
            format!("{sign}b")
        } else {
            format!("{sign}{mag}*b")
        }
    };
    match (a.is_zero(), b.is_zero()) {
        (_, true) => a.to_string(),
        (true, false) => bpart(true),
        (false, false) => format!("{a}{}", bpart(false)),
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.to_canonical_string(), self.ring)
    }
}

fn expect_same(a: &RingElement, b: &RingElement) {
    if a.ring != b.ring {
        panic!("ring mismatch: {} vs {}", a.ring, b.ring);
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        expect_same(self, rhs);
        self.add_same(rhs)
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        expect_same(self, rhs);
        self.sub_same(rhs)
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        expect_same(self, rhs);
        self.mul_same(rhs)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.neg_same()
    }
}

impl Add for RingElement {
    type Output = RingElement;
    fn add(self, rhs: RingElement) -> RingElement {
        &self + &rhs
    }
}

impl Sub for RingElement {
    type Output = RingElement;
    fn sub(self, rhs: RingElement) -> RingElement {
        &self - &rhs
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    fn mul(self, rhs: RingElement) -> RingElement {
        &self * &rhs
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.neg_same()
    }
}
