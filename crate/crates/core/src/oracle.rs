//! Exhaustive verification over small prime fields.
//!
//! Everything here uses its own `ℤ/p` matrix arithmetic (Gauss–Jordan and
//! cofactor expansion on `u64`) so that it can serve as an independent check
//! on the symbolic machinery elsewhere in the crate.

use std::collections::HashSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ctrl::{ControllerSet, Membership};
use crate::mat_alg::Matrix;
use crate::qi::{adjugate_invariance, check_qi, Verdict};
use crate::ring::{is_prime_u64, Ring};

/// Largest module the oracle will enumerate.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{p}^{q} elements exceeds the enumeration limit of {ENUMERATION_LIMIT}")]
    Guard { p: u64, q: usize },
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Dense matrix over `ℤ/p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FpMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl FpMat {
    pub fn zeros(rows: usize, cols: usize) -> FpMat {
        FpMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> FpMat {
        let mut m = FpMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[&[i64]]) -> FpMat {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64))
            .collect();
        FpMat {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &FpMat, p: u64) -> FpMat {
        FpMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        }
    }

    pub fn sub(&self, o: &FpMat, p: u64) -> FpMat {
        self.add(&o.neg(p), p)
    }

    pub fn neg(&self, p: u64) -> FpMat {
        self.scale(p - 1, p)
    }

    pub fn scale(&self, c: u64, p: u64) -> FpMat {
        FpMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| mulm(a, c, p)).collect(),
        }
    }

    pub fn mul(&self, o: &FpMat, p: u64) -> FpMat {
        assert_eq!(self.cols, o.rows);
        let mut out = FpMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = (out.data[idx] + mulm(a, o.get(k, j), p)) % p;
                }
            }
        }
        out
    }

    /// Determinant by elimination.
    pub fn det(&self, p: u64) -> u64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1;
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| a[r * n + c] != 0) else {
                return 0;
            };
            if r != c {
                for j in 0..n {
                    a.swap(r * n + j, c * n + j);
                }
                det = (p - det) % p;
            }
            let piv = a[c * n + c];
            det = mulm(det, piv, p);
            let inv = inv_mod(piv, p);
            for r in c + 1..n {
                let f = mulm(a[r * n + c], inv, p);
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    a[r * n + j] = (a[r * n + j] + p - mulm(f, a[c * n + j], p)) % p;
                }
            }
        }
        det
    }

    /// Inverse by Gauss–Jordan, `None` when singular.
    pub fn inverse(&self, p: u64) -> Option<FpMat> {
        let n = self.rows;
        let w = 2 * n;
        let mut a = vec![0u64; n * w];
        for i in 0..n {
            for j in 0..n {
                a[i * w + j] = self.get(i, j);
            }
            a[i * w + n + i] = 1;
        }
        for c in 0..n {
            let r = (c..n).find(|&r| a[r * w + c] != 0)?;
            for j in 0..w {
                a.swap(r * w + j, c * w + j);
            }
            let inv = inv_mod(a[c * w + c], p);
            for j in 0..w {
                a[c * w + j] = mulm(a[c * w + j], inv, p);
            }
            for r in 0..n {
                let f = a[r * w + c];
                if r == c || f == 0 {
                    continue;
                }
                for j in 0..w {
                    a[r * w + j] = (a[r * w + j] + p - mulm(f, a[c * w + j], p)) % p;
                }
            }
        }
        let mut out = FpMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = a[i * w + n + j];
            }
        }
        Some(out)
    }

    fn minor(&self, r: usize, c: usize) -> FpMat {
        let n = self.rows;
        let mut data = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != r) {
            for j in (0..n).filter(|&j| j != c) {
                data.push(self.get(i, j));
            }
        }
        FpMat {
            rows: n - 1,
            cols: n - 1,
            data,
        }
    }

    /// Adjugate from cofactors.
    pub fn adjugate(&self, p: u64) -> FpMat {
        let n = self.rows;
        if n == 1 {
            return FpMat::identity(1);
        }
        let mut out = FpMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let d = self.minor(j, i).det(p);
                out.data[i * n + j] = if (i + j) % 2 == 0 { d } else { (p - d) % p };
            }
        }
        out
    }

    /// Embed into `ℤ/p` as a crate [`Matrix`].
    pub fn to_matrix(&self, ring: &Ring) -> Matrix {
        Matrix::from_fn(ring, self.rows, self.cols, |i, j| {
            ring.from_int(self.get(i, j) as i64)
        })
    }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, base, p);
        }
        base = mulm(base, base, p);
        e >>= 1;
    }
    acc
}

fn check_prime(p: u64) -> Result<(), OracleError> {
    if p < (1 << 31) && is_prime_u64(p) {
        Ok(())
    } else {
        Err(OracleError::NotPrime(p))
    }
}

/// Row-reduced basis of a span of matrices.
#[derive(Clone, Debug)]
pub struct Span {
    p: u64,
    basis: Vec<(usize, Vec<u64>)>,
}

impl Span {
    pub fn new(p: u64, gens: &[FpMat]) -> Span {
        let mut s = Span { p, basis: vec![] };
        for g in gens {
            let v = s.reduce(g.data.clone());
            if let Some(piv) = v.iter().position(|&x| x != 0) {
                let inv = inv_mod(v[piv], p);
                let v: Vec<u64> = v.iter().map(|&x| mulm(x, inv, p)).collect();
                s.basis.push((piv, v));
            }
        }
        s
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let p = self.p;
        for (piv, b) in &self.basis {
            let f = v[*piv];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + p - mulm(f, *y, p)) % p;
                }
            }
        }
        v
    }

    pub fn contains(&self, m: &FpMat) -> bool {
        self.reduce(m.data.clone()).iter().all(|&x| x == 0)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn guard(p: u64, q: usize) -> Result<u64, OracleError> {
    let mut size: u64 = 1;
    for _ in 0..q {
        size = size
            .checked_mul(p)
            .filter(|&s| s <= ENUMERATION_LIMIT)
            .ok_or(OracleError::Guard { p, q })?;
    }
    Ok(size)
}

/// All `Σ c_i H_i` for `c ∈ (ℤ/p)^q`, `c₁` varying slowest.
pub fn enumerate_module(
    p: u64,
    gens: &[FpMat],
    dims: (usize, usize),
) -> Result<Vec<FpMat>, OracleError> {
    check_prime(p)?;
    let q = gens.len();
    let size = guard(p, q)?;
    if let Some(h) = gens.iter().find(|h| (h.rows, h.cols) != dims) {
        return Err(OracleError::Dimension(format!(
            "generator is {}x{}, expected {}x{}",
            h.rows, h.cols, dims.0, dims.1
        )));
    }
    let mut out = Vec::with_capacity(size as usize);
    let mut c = vec![0u64; q];
    for _ in 0..size {
        let mut acc = FpMat::zeros(dims.0, dims.1);
        for (ci, h) in c.iter().zip(gens) {
            if *ci != 0 {
                acc = acc.add(&h.scale(*ci, p), p);
            }
        }
        out.push(acc);
        for k in (0..q).rev() {
            c[k] += 1;
            if c[k] < p {
                break;
            }
            c[k] = 0;
        }
    }
    Ok(out)
}

/// Outcome of an exhaustive check, with the first failing `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exhaustive {
    pub holds: bool,
    pub counterexample: Option<FpMat>,
}

impl Exhaustive {
    fn from_failure(k: Option<FpMat>) -> Exhaustive {
        Exhaustive {
            holds: k.is_none(),
            counterexample: k,
        }
    }
}

fn controller_dims(g: &FpMat) -> (usize, usize) {
    (g.cols, g.rows)
}

/// `K G K ∈ S` for every `K ∈ S`.
pub fn qi_bruteforce(g: &FpMat, gens: &[FpMat], p: u64) -> Result<Exhaustive, OracleError> {
    let elems = enumerate_module(p, gens, controller_dims(g))?;
    let span = Span::new(p, gens);
    Ok(Exhaustive::from_failure(
        elems
            .into_iter()
            .find(|k| !span.contains(&k.mul(g, p).mul(k, p))),
    ))
}

/// `K·adj(I − GK) ∈ S` for every `K ∈ S`.
pub fn adjugate_bruteforce(g: &FpMat, gens: &[FpMat], p: u64) -> Result<Exhaustive, OracleError> {
    let elems = enumerate_module(p, gens, controller_dims(g))?;
    let span = Span::new(p, gens);
    let i = FpMat::identity(g.rows);
    Ok(Exhaustive::from_failure(elems.into_iter().find(|k| {
        let a = i.sub(&g.mul(k, p), p);
        !span.contains(&k.mul(&a.adjugate(p), p))
    })))
}

/// `h(K) = −K(I − GK)⁻¹`, or `None` outside `M`.
pub fn h_fp(k: &FpMat, g: &FpMat, p: u64) -> Option<FpMat> {
    let a = FpMat::identity(g.rows).sub(&g.mul(k, p), p);
    Some(k.mul(&a.inverse(p)?, p).neg(p))
}

/// `h(S ∩ M) = S ∩ M`, checking both inclusion and equality of the sets.
pub fn h_invariance_bruteforce(
    g: &FpMat,
    gens: &[FpMat],
    p: u64,
) -> Result<Exhaustive, OracleError> {
    let elems = enumerate_module(p, gens, controller_dims(g))?;
    let span = Span::new(p, gens);
    let in_m: HashSet<FpMat> = elems
        .into_iter()
        .filter(|k| h_fp(k, g, p).is_some())
        .collect();
    let mut images = HashSet::with_capacity(in_m.len());
    let mut ordered: Vec<&FpMat> = in_m.iter().collect();
    ordered.sort_by(|a, b| a.data.cmp(&b.data));
    for k in ordered {
        let hk = h_fp(k, g, p).expect("filtered to M");
        let back_in_m = h_fp(&hk, g, p).is_some();
        if !span.contains(&hk) || !back_in_m {
            return Ok(Exhaustive::from_failure(Some(k.clone())));
        }
        images.insert(hk);
    }
    Ok(Exhaustive {
        holds: images == in_m,
        counterexample: None,
    })
}

/// `K(GK)^i ∈ S` for every `K ∈ S` and `1 ≤ i ≤ i_max`. Requires `p ≠ 2`
/// and `S` QI with respect to `G`.
pub fn power_closure_bruteforce(
    g: &FpMat,
    gens: &[FpMat],
    p: u64,
    i_max: u32,
) -> Result<Exhaustive, OracleError> {
    if p == 2 {
        return Err(OracleError::Precondition("2 is not a unit in Z/2Z".into()));
    }
    if !qi_bruteforce(g, gens, p)?.holds {
        return Err(OracleError::Precondition(
            "S is not QI with respect to G".into(),
        ));
    }
    let elems = enumerate_module(p, gens, controller_dims(g))?;
    let span = Span::new(p, gens);
    Ok(Exhaustive::from_failure(elems.into_iter().find(|k| {
        let gk = g.mul(k, p);
        let mut acc = k.clone();
        (1..=i_max).any(|_| {
            acc = acc.mul(&gk, p);
            !span.contains(&acc)
        })
    })))
}

/// Polynomials of degree at most `degree_bound` over `ℤ/p` that vanish at
/// every element yet are nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyZeroReport {
    pub p: u64,
    pub degree_bound: u32,
    pub polynomials_checked: u64,
    /// Coefficient vectors, constant term first.
    pub vanishing_nonzero: Vec<Vec<u64>>,
}

pub fn poly_zero_property(p: u64, degree_bound: u32) -> Result<PolyZeroReport, OracleError> {
    check_prime(p)?;
    let q = degree_bound as usize + 1;
    let total = guard(p, q)?;
    let mut found = Vec::new();
    let mut c = vec![0u64; q];
    for _ in 0..total {
        let nonzero = c.iter().any(|&x| x != 0);
        let vanishes =
            (0..p).all(|x| c.iter().rev().fold(0, |acc, &a| (mulm(acc, x, p) + a) % p) == 0);
        if nonzero && vanishes {
            found.push(c.clone());
        }
        for x in c.iter_mut() {
            *x += 1;
            if *x < p {
                break;
            }
            *x = 0;
        }
    }
    Ok(PolyZeroReport {
        p,
        degree_bound,
        polynomials_checked: total,
        vanishing_nonzero: found,
    })
}

/// End-to-end replay of the integer counterexample in which QI holds but
/// adjugate invariance fails because 2 is not a unit.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub module_closure_samples: usize,
    pub module_closure_ok: bool,
    pub qi: Verdict,
    pub k0: Matrix,
    pub k0_coefficients: Vec<String>,
    pub k0_image: Matrix,
    pub k0_image_member: bool,
    pub obstruction: String,
    pub adjugate_invariance: Verdict,
    pub mod2_qi: bool,
    pub mod2_adjugate_invariant: bool,
}

impl CounterexampleReport {
    pub fn confirmed(&self) -> bool {
        self.module_closure_ok
            && self.qi == Verdict::True
            && !self.k0_image_member
            && self.obstruction == "2 ∤ 1"
            && self.adjugate_invariance == Verdict::False
            && self.mod2_qi
            && !self.mod2_adjugate_invariant
    }
}

pub const COUNTEREXAMPLE_G: [[i64; 3]; 3] = [[0, 0, 0], [0, 0, 1], [0, 1, 0]];
pub const COUNTEREXAMPLE_GENS: [[[i64; 3]; 3]; 3] = [
    [[2, 0, 0], [0, 0, 0], [0, 0, 0]],
    [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
    [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
];
pub const COUNTEREXAMPLE_K0: [[i64; 3]; 3] = [[0, 0, 1], [0, 1, 0], [1, 0, 0]];

fn rows3(m: &[[i64; 3]; 3]) -> [&[i64]; 3] {
    [&m[0], &m[1], &m[2]]
}

pub fn counterexample_replay() -> CounterexampleReport {
    let z = Ring::integers();
    let g = Matrix::from_ints(&z, &rows3(&COUNTEREXAMPLE_G));
    let gens: Vec<Matrix> = COUNTEREXAMPLE_GENS
        .iter()
        .map(|h| Matrix::from_ints(&z, &rows3(h)))
        .collect();
    let s = ControllerSet::generated(&z, (3, 3), gens).expect("well-formed generators");

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let samples = 50;
    let rand_k = |rng: &mut ChaCha8Rng| {
        let c: Vec<_> = (0..3).map(|_| z.from_int(rng.gen_range(-9..=9))).collect();
        s.combine(&c)
    };
    let closure_ok = (0..samples).all(|_| {
        let (k1, k2) = (rand_k(&mut rng), rand_k(&mut rng));
        let r = z.from_int(rng.gen_range(-9..=9));
        let k = k1.add(&k2.scale(&r)).expect("same shape");
        s.contains(&k).is_ok_and(|m| m.member)
    });

    let qi = check_qi(&g, &s).expect("dimensions match").verdict;
    let k0 = Matrix::from_ints(&z, &rows3(&COUNTEREXAMPLE_K0));
    let k0_coefficients = match s.contains(&k0).expect("supported ring") {
        Membership {
            member: true,
            certificate: crate::ctrl::Certificate::Coefficients(c),
        } => c.iter().map(|x| x.to_string()).collect(),
        _ => vec![],
    };
    let a = Matrix::identity(&z, 3).sub(&g.mul(&k0)).expect("square");
    let k0_image = k0.mul(&a.adjugate().expect("square"));
    let mem = s.contains(&k0_image).expect("supported ring");
    let adjugate = adjugate_invariance(&g, &s)
        .expect("dimensions match")
        .verdict;

    let p = 2;
    let g2 = FpMat::from_rows(p, &rows3(&COUNTEREXAMPLE_G));
    let gens2: Vec<FpMat> = COUNTEREXAMPLE_GENS
        .iter()
        .map(|h| FpMat::from_rows(p, &rows3(h)))
        .collect();
    let mod2_qi = qi_bruteforce(&g2, &gens2, p).expect("tiny").holds;
    let mod2_adj = adjugate_bruteforce(&g2, &gens2, p).expect("tiny").holds;

    CounterexampleReport {
        module_closure_samples: samples,
        module_closure_ok: closure_ok,
        qi,
        k0,
        k0_coefficients,
        k0_image_member: mem.member,
        obstruction: mem.certificate.to_string(),
        k0_image,
        adjugate_invariance: adjugate,
        mod2_qi,
        mod2_adjugate_invariant: mod2_adj,
    }
}

/// Parameters of a seeded random experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentConfig {
    pub p: u64,
    pub m: usize,
    pub n: usize,
    pub gens: usize,
    pub trials: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        check_prime(self.p)?;
        if !(1..=3).contains(&self.m) || !(1..=3).contains(&self.n) {
            return Err(OracleError::Dimension(
                "m and n must be between 1 and 3".into(),
            ));
        }
        if self.gens > 3 {
            return Err(OracleError::Dimension("at most 3 generators".into()));
        }
        guard(self.p, self.gens).map(|_| ())
    }

    /// `p ≥ 2·min(m,n) + 1` and `p ≠ 2`.
    pub fn hypotheses_hold(&self) -> bool {
        self.p > 2 * self.m.min(self.n) as u64 && self.p != 2
    }
}

/// How a trial's instance was drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    /// Generators and plant entrywise uniform.
    Uniform,
    /// Generators are distinct matrix units; the plant has random zeros.
    Sparsity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub kind: InstanceKind,
    pub g: FpMat,
    pub gens: Vec<FpMat>,
}

/// Instance for trial `t`: even trials uniform, odd trials sparsity-shaped.
pub fn draw_instance(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, t: usize) -> Instance {
    let (m, n, p) = (cfg.m, cfg.n, cfg.p);
    let uniform = |rows, cols, rng: &mut ChaCha8Rng| FpMat {
        rows,
        cols,
        data: (0..rows * cols).map(|_| rng.gen_range(0..p)).collect(),
    };
    if t.is_multiple_of(2) {
        let g = uniform(m, n, rng);
        let gens = (0..cfg.gens).map(|_| uniform(n, m, rng)).collect();
        return Instance {
            kind: InstanceKind::Uniform,
            g,
            gens,
        };
    }
    let mut g = uniform(m, n, rng);
    for x in g.data.iter_mut() {
        if rng.gen_bool(0.5) {
            *x = 0;
        }
    }
    let mut positions: Vec<usize> = (0..n * m).collect();
    for i in 0..positions.len() {
        let j = rng.gen_range(i..positions.len());
        positions.swap(i, j);
    }
    let gens = positions
        .iter()
        .take(cfg.gens.min(n * m))
        .map(|&pos| {
            let mut h = FpMat::zeros(n, m);
            h.data[pos] = 1;
            h
        })
        .collect();
    Instance {
        kind: InstanceKind::Sparsity,
        g,
        gens,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub trial: usize,
    pub instance: Instance,
    pub qi: bool,
    pub h_invariant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EngineDisagreement {
    pub trial: usize,
    pub instance: Instance,
    pub bruteforce_qi: bool,
    pub engine_qi: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// The field hypotheses hold; any discrepancy refutes the equivalence.
    Verify,
    /// Hypotheses fail; discrepancies are recorded only.
    Exploratory,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub mode: Mode,
    pub trials: usize,
    pub qi_true: usize,
    /// Trials where QI and h-invariance agree.
    pub agreements: usize,
    pub discrepancies: Vec<Discrepancy>,
    /// Trials where the generator-polarization engine matches brute force.
    pub engine_agreements: usize,
    pub engine_disagreements: Vec<EngineDisagreement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl ExperimentReport {
    /// No discrepancy of either kind.
    pub fn clean(&self) -> bool {
        self.discrepancies.is_empty() && self.engine_disagreements.is_empty()
    }
}

struct TrialOutcome {
    instance: Instance,
    qi: bool,
    h: bool,
    engine: Verdict,
}

/// Seeded experiment comparing QI with h-invariance (and with the
/// polarization engine) by exhaustive enumeration. The report depends only on
/// the configuration; `runtime_ms` is filled when `timing` is set.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    timing: bool,
) -> Result<ExperimentReport, OracleError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seeds: Vec<u64> = (0..cfg.trials).map(|_| master.gen()).collect();
    let ring = Ring::modp(cfg.p).map_err(|_| OracleError::NotPrime(cfg.p))?;
    let outcomes = seeds
        .par_iter()
        .enumerate()
        .map(|(t, &seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let instance = draw_instance(cfg, &mut rng, t);
            let qi = qi_bruteforce(&instance.g, &instance.gens, cfg.p)?.holds;
            let h = h_invariance_bruteforce(&instance.g, &instance.gens, cfg.p)?.holds;
            let gens = instance.gens.iter().map(|h| h.to_matrix(&ring)).collect();
            let s = ControllerSet::generated(&ring, (cfg.n, cfg.m), gens)
                .expect("shapes come from the config");
            let engine = check_qi(&instance.g.to_matrix(&ring), &s)
                .expect("shapes come from the config")
                .verdict;
            Ok(TrialOutcome {
                instance,
                qi,
                h,
                engine,
            })
        })
        .collect::<Result<Vec<_>, OracleError>>()?;

    let mut report = ExperimentReport {
        config: *cfg,
        mode: if cfg.hypotheses_hold() {
            Mode::Verify
        } else {
            Mode::Exploratory
        },
        trials: cfg.trials,
        qi_true: 0,
        agreements: 0,
        discrepancies: vec![],
        engine_agreements: 0,
        engine_disagreements: vec![],
        runtime_ms: None,
    };
    for (trial, o) in outcomes.into_iter().enumerate() {
        report.qi_true += usize::from(o.qi);
        if o.qi == o.h {
            report.agreements += 1;
        } else {
            report.discrepancies.push(Discrepancy {
                trial,
                instance: o.instance.clone(),
                qi: o.qi,
                h_invariant: o.h,
            });
        }
        if o.engine == Verdict::from_bool(o.qi) {
            report.engine_agreements += 1;
        } else {
            report.engine_disagreements.push(EngineDisagreement {
                trial,
                instance: o.instance,
                bruteforce_qi: o.qi,
                engine_qi: o.engine,
            });
        }
    }
    if timing {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}
