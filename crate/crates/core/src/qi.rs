//! Decision procedures for quadratic invariance and its consequences: QI
//! and strong QI by generator polarization, adjugate invariance by symbolic
//! expansion, the feedback map `h`, h-invariance through the equivalence
//! theorems, and affine closed-loop sets.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ctrl::{ControllerSet, CtrlError};
use crate::mat_alg::{adjugate_from_char_poly, char_poly_coeffs, Matrix, MatrixError, RingOps};
use crate::ring::{RingDescriptor, RingElement, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QiError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    SparsityClosedForm,
    GeneratorPolarization,
    AdjugateSymbolic,
    FiniteBruteForce,
    TheoremChain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl Status {
    fn of(b: Option<bool>) -> Status {
        match b {
            Some(true) => Status::Holds,
            Some(false) => Status::Fails,
            None => Status::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Precondition {
    pub name: String,
    pub status: Status,
}

macro_rules! display_as_serde {
    ($t:ty { $($v:ident => $s:literal),* $(,)? }) => {
        impl std::fmt::Display for $t {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(match self { $(Self::$v => $s),* })
            }
        }
    };
}

display_as_serde!(Verdict { True => "true", False => "false", Unknown => "unknown" });
display_as_serde!(Status { Holds => "holds", Fails => "fails", Unknown => "unknown" });
display_as_serde!(Method {
    SparsityClosedForm => "sparsity_closed_form",
    GeneratorPolarization => "generator_polarization",
    AdjugateSymbolic => "adjugate_symbolic",
    FiniteBruteForce => "finite_brute_force",
    TheoremChain => "theorem_chain",
});

fn pre(name: impl Into<String>, status: Status) -> Precondition {
    Precondition {
        name: name.into(),
        status,
    }
}

/// Evidence for a `False` verdict. Every matrix named `image` or `matrix`
/// fails membership in `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `k ∈ S` with `image ∉ S` (`image` is `KGK` or `K·adj(I−GK)`).
    Controller {
        generators: Vec<usize>,
        k: Matrix,
        image: Matrix,
        reason: String,
    },
    /// `k1, k2 ∈ S` with `k1·G·k2 ∉ S`.
    ControllerPair {
        generators: (usize, usize),
        k1: Matrix,
        k2: Matrix,
        image: Matrix,
        reason: String,
    },
    /// Coefficient of `c^monomial` in the symbolic expansion of
    /// `K·adj(I−GK)` for `K = Σ c_i H_i`.
    Coefficient {
        monomial: Vec<u32>,
        matrix: Matrix,
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QiReport {
    pub verdict: Verdict,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub preconditions: Vec<Precondition>,
}

impl QiReport {
    fn unknown(method: Method, preconditions: Vec<Precondition>) -> QiReport {
        QiReport {
            verdict: Verdict::Unknown,
            method,
            witness: None,
            preconditions,
        }
    }
}

/// Which QI procedure to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum QiMethod {
    /// Closed form for sparsity sets, polarization otherwise.
    #[default]
    Auto,
    Generators,
    Sparsity,
}

fn check_dims(g: &Matrix, s: &ControllerSet) -> Result<(), QiError> {
    if g.ring() != s.ring() {
        return Err(RingError::Mismatch(g.ring().to_string(), s.ring().to_string()).into());
    }
    let (m, n) = g.dims();
    if s.dims() != (n, m) {
        return Err(QiError::Dimension(format!(
            "plant is {m}x{n}, so controllers must be {n}x{m}, not {}x{}",
            s.dims().0,
            s.dims().1
        )));
    }
    Ok(())
}

const MEMBERSHIP: &str = "membership in S is decidable";

fn capability_unknown(method: Method, e: &CtrlError) -> QiReport {
    QiReport::unknown(
        method,
        vec![pre(format!("{MEMBERSHIP} ({e})"), Status::Unknown)],
    )
}

fn sum(a: &Matrix, b: &Matrix) -> Matrix {
    a.add(b).expect("same shape")
}

/// Whether `K G K ∈ S` for all `K ∈ S`.
pub fn check_qi(g: &Matrix, s: &ControllerSet) -> Result<QiReport, QiError> {
    check_qi_with(g, s, QiMethod::Auto)
}

pub fn check_qi_with(g: &Matrix, s: &ControllerSet, method: QiMethod) -> Result<QiReport, QiError> {
    check_dims(g, s)?;
    match (method, s.sparsity_pattern()) {
        (QiMethod::Auto | QiMethod::Sparsity, Some(p)) => Ok(sparsity_closed_form(g, s, p)),
        (QiMethod::Sparsity, None) => Ok(QiReport::unknown(
            Method::SparsityClosedForm,
            vec![pre("S is given by a sparsity pattern", Status::Fails)],
        )),
        _ => Ok(polarization(g, s)),
    }
}

/// `S` is QI iff for pattern-true `(i,j)`, `(k,l)` with `G_jk ≠ 0` the entry
/// `(i,l)` is pattern-true: `KGK = Σ c_ij c_kl G_jk e_il`.
fn sparsity_closed_form(g: &Matrix, s: &ControllerSet, p: &[Vec<bool>]) -> QiReport {
    let (n, m) = s.dims();
    let on: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i][j])
        .collect();
    for (a, &(i, j)) in on.iter().enumerate() {
        for (b, &(k, l)) in on.iter().enumerate() {
            if !g[(j, k)].is_zero() && !p[i][l] {
                let r = s.ring();
                let k_mat = sum(&Matrix::unit(r, n, m, i, j), &Matrix::unit(r, n, m, k, l));
                let image = k_mat.mul(g).mul(&k_mat);
                return QiReport {
                    verdict: Verdict::False,
                    method: Method::SparsityClosedForm,
                    witness: Some(Witness::Controller {
                        generators: vec![a, b],
                        k: k_mat,
                        image,
                        reason: format!(
                            "G({},{}) is nonzero but ({},{}) is outside the pattern",
                            j + 1,
                            k + 1,
                            i + 1,
                            l + 1
                        ),
                    }),
                    preconditions: vec![],
                };
            }
        }
    }
    QiReport {
        verdict: Verdict::True,
        method: Method::SparsityClosedForm,
        witness: None,
        preconditions: vec![],
    }
}

/// Pairs `(i, j)`, `i ≤ j`, in lexicographic order.
fn upper_pairs(q: usize) -> Vec<(usize, usize)> {
    (0..q).flat_map(|i| (i..q).map(move |j| (i, j))).collect()
}

/// Runs `check` over `items` in parallel and returns the first (in order)
/// non-`None` result.
fn first_failure<T, F>(items: &[T], check: F) -> Result<Option<Witness>, CtrlError>
where
    T: Sync,
    F: Fn(&T) -> Result<Option<Witness>, CtrlError> + Sync + Send,
{
    let results: Vec<_> = items.par_iter().map(check).collect();
    for r in results {
        if let Some(w) = r? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// `KGK = Σ c_i² H_iGH_i + Σ_{i<j} c_i c_j (H_iGH_j + H_jGH_i)`; specializing
/// `c` to `e_i` and `e_i + e_j` shows each bracket must lie in `S`.
fn polarization(g: &Matrix, s: &ControllerSet) -> QiReport {
    let gens = s.generators();
    let pairs = upper_pairs(gens.len());
    let outcome = first_failure(&pairs, |&(i, j)| {
        let (hi, hj) = (&gens[i], &gens[j]);
        let image = if i == j {
            hi.mul(g).mul(hi)
        } else {
            sum(&hi.mul(g).mul(hj), &hj.mul(g).mul(hi))
        };
        let m = s.contains(&image)?;
        if m.member {
            return Ok(None);
        }
        let (k, generators) = if i == j {
            (hi.clone(), vec![i])
        } else {
            (sum(hi, hj), vec![i, j])
        };
        let image = k.mul(g).mul(&k);
        let reason = s.contains(&image)?.certificate.to_string();
        Ok(Some(Witness::Controller {
            generators,
            k,
            image,
            reason,
        }))
    });
    match outcome {
        Ok(w) => QiReport {
            verdict: Verdict::from_bool(w.is_none()),
            method: Method::GeneratorPolarization,
            witness: w,
            preconditions: vec![pre(MEMBERSHIP, Status::Holds)],
        },
        Err(e) => capability_unknown(Method::GeneratorPolarization, &e),
    }
}

/// Whether `K₁ G K₂ ∈ S` for all `K₁, K₂ ∈ S`: `H_i G H_j ∈ S` for all
/// ordered pairs.
pub fn check_strong_qi(g: &Matrix, s: &ControllerSet) -> Result<QiReport, QiError> {
    check_dims(g, s)?;
    let gens = s.generators();
    let q = gens.len();
    let pairs: Vec<(usize, usize)> = (0..q).flat_map(|i| (0..q).map(move |j| (i, j))).collect();
    let outcome = first_failure(&pairs, |&(i, j)| {
        let image = gens[i].mul(g).mul(&gens[j]);
        let m = s.contains(&image)?;
        Ok((!m.member).then(|| Witness::ControllerPair {
            generators: (i, j),
            k1: gens[i].clone(),
            k2: gens[j].clone(),
            image,
            reason: m.certificate.to_string(),
        }))
    });
    Ok(match outcome {
        Ok(w) => QiReport {
            verdict: Verdict::from_bool(w.is_none()),
            method: Method::GeneratorPolarization,
            witness: w,
            preconditions: vec![pre(MEMBERSHIP, Status::Holds)],
        },
        Err(e) => capability_unknown(Method::GeneratorPolarization, &e),
    })
}

/// Polynomial in the coefficient indeterminates `c₁..c_q` with coefficients
/// in the base ring.
#[derive(Clone, Debug)]
struct CPoly {
    zero: RingElement,
    terms: BTreeMap<Vec<u32>, RingElement>,
}

impl CPoly {
    fn constant(c: &RingElement, q: usize) -> CPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; q], c.clone());
        }
        CPoly {
            zero: c.ring().zero(),
            terms,
        }
    }

    fn insert(&mut self, mono: Vec<u32>, c: RingElement) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn empty(&self) -> CPoly {
        CPoly {
            zero: self.zero.clone(),
            terms: BTreeMap::new(),
        }
    }
}

impl RingOps for CPoly {
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = self.empty();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mono = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                out.insert(mono, ca * cb);
            }
        }
        out
    }

    fn neg(&self) -> Self {
        CPoly {
            zero: self.zero.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Largest symbolic expansion attempted (number of generators, plant rows).
const MAX_SYMBOLIC: (usize, usize) = (24, 6);

/// Coefficient matrices of `K·adj(I − GK)` for `K = Σ c_i H_i`, keyed by
/// the exponent vector of `c`.
fn symbolic_adjugate_expansion(g: &Matrix, gens: &[Matrix]) -> BTreeMap<Vec<u32>, Matrix> {
    let ring = g.ring();
    let (m, n) = g.dims();
    let q = gens.len();
    let zero = CPoly::constant(&ring.zero(), q);
    let k: Vec<CPoly> = (0..n * m)
        .map(|idx| {
            let mut p = zero.clone();
            for (t, h) in gens.iter().enumerate() {
                let mut mono = vec![0; q];
                mono[t] = 1;
                p.insert(mono, h[(idx / m, idx % m)].clone());
            }
            p
        })
        .collect();
    let gc: Vec<CPoly> = g.entries().iter().map(|x| CPoly::constant(x, q)).collect();
    let one = CPoly::constant(&ring.one(), q);
    // A = I − G K, m×m
    let mut a = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let mut acc = if i == j { one.clone() } else { zero.clone() };
            for t in 0..n {
                acc = acc.sub(&gc[i * n + t].mul(&k[t * m + j]));
            }
            a.push(acc);
        }
    }
    let monic = char_poly_coeffs(&a, m, &one);
    let p: Vec<CPoly> = monic
        .into_iter()
        .rev()
        .map(|c| if m % 2 == 1 { c.neg() } else { c })
        .collect();
    let adj = adjugate_from_char_poly(&a, m, &p);
    let mut out: BTreeMap<Vec<u32>, Matrix> = BTreeMap::new();
    for i in 0..n {
        for j in 0..m {
            let mut acc = zero.clone();
            for t in 0..m {
                acc = acc.add(&k[i * m + t].mul(&adj[t * m + j]));
            }
            for (mono, c) in acc.terms {
                out.entry(mono)
                    .or_insert_with(|| Matrix::zeros(ring, n, m))
                    .set(i, j, c);
            }
        }
    }
    out
}

/// `K·adj(I − GK)`.
pub fn adjugate_image(k: &Matrix, g: &Matrix) -> Result<Matrix, QiError> {
    let m = g.rows();
    let a = Matrix::identity(g.ring(), m).sub(&g.matmul(k)?)?;
    Ok(k.matmul(&a.adjugate()?)?)
}

/// Explicit coefficient vectors tried when looking for a violating `K`.
fn candidate_coefficients(q: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..q {
        let mut c = vec![0; q];
        c[i] = 1;
        out.push(c);
    }
    for i in 0..q {
        for j in i + 1..q {
            for sign in [1, -1] {
                let mut c = vec![0; q];
                c[i] = 1;
                c[j] = sign;
                out.push(c);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ad1_u64);
    for _ in 0..64 {
        out.push((0..q).map(|_| rng.gen_range(-3..=3)).collect());
    }
    out
}

/// Whether `K·adj(I − GK) ∈ S` for all `K ∈ S`.
///
/// Writes `K = Σ c_i H_i` with indeterminate `c` and tests every coefficient
/// matrix of the expansion. Passing is sufficient for `True` over any ring.
/// On failure an explicit violating `K` is searched for; without one, the
/// verdict is `False` only when residue fields are large enough for the
/// coefficients to be recovered from evaluations.
pub fn adjugate_invariance(g: &Matrix, s: &ControllerSet) -> Result<QiReport, QiError> {
    check_dims(g, s)?;
    let gens = s.generators();
    let (m, _) = g.dims();
    if gens.len() > MAX_SYMBOLIC.0 || m > MAX_SYMBOLIC.1 {
        return Ok(QiReport::unknown(
            Method::AdjugateSymbolic,
            vec![pre("symbolic expansion within size limits", Status::Fails)],
        ));
    }
    let expansion = symbolic_adjugate_expansion(g, &gens);
    let mut failing = None;
    for (mono, mat) in &expansion {
        match s.contains(mat) {
            Ok(mem) if mem.member => {}
            Ok(mem) => {
                failing = Some((mono.clone(), mat.clone(), mem.certificate.to_string()));
                break;
            }
            Err(e) => return Ok(capability_unknown(Method::AdjugateSymbolic, &e)),
        }
    }
    const COEFF: &str = "every coefficient matrix of the expansion lies in S";
    let Some((monomial, matrix, reason)) = failing else {
        return Ok(QiReport {
            verdict: Verdict::True,
            method: Method::AdjugateSymbolic,
            witness: None,
            preconditions: vec![pre(COEFF, Status::Holds)],
        });
    };
    let ring = s.ring();
    for c in candidate_coefficients(gens.len()) {
        let coeffs: Vec<RingElement> = c.iter().map(|&x| ring.from_int(x)).collect();
        let k = s.combine(&coeffs);
        let image = adjugate_image(&k, g)?;
        let mem = s
            .contains(&image)
            .expect("membership already decided above");
        if !mem.member {
            let generators = c
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, _)| i)
                .collect();
            return Ok(QiReport {
                verdict: Verdict::False,
                method: Method::AdjugateSymbolic,
                witness: Some(Witness::Controller {
                    generators,
                    k,
                    image,
                    reason: mem.certificate.to_string(),
                }),
                preconditions: vec![pre(COEFF, Status::Fails)],
            });
        }
    }
    let degree = expansion
        .keys()
        .map(|mono| mono.iter().sum::<u32>())
        .max()
        .unwrap_or(0);
    let floor_ok = ring.residue_floor().at_least(u64::from(degree) + 1);
    let preconditions = vec![
        pre(COEFF, Status::Fails),
        pre(
            format!("every residue field has at least {} elements", degree + 1),
            Status::of(floor_ok),
        ),
    ];
    Ok(if floor_ok == Some(true) {
        QiReport {
            verdict: Verdict::False,
            method: Method::AdjugateSymbolic,
            witness: Some(Witness::Coefficient {
                monomial,
                matrix,
                reason,
            }),
            preconditions,
        }
    } else {
        QiReport::unknown(Method::AdjugateSymbolic, preconditions)
    })
}

/// Result of the feedback map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HMap {
    Image(Matrix),
    /// `det(I − GK)` is not a unit.
    NotInM {
        det: RingElement,
    },
}

/// `h(K) = −K(I − GK)⁻¹`.
pub fn h_map(k: &Matrix, g: &Matrix) -> Result<HMap, QiError> {
    let (m, n) = g.dims();
    if k.dims() != (n, m) {
        return Err(QiError::Dimension(format!(
            "plant is {m}x{n}, controller is {}x{}",
            k.rows(),
            k.cols()
        )));
    }
    let a = Matrix::identity(g.ring(), m).sub(&g.matmul(k)?)?;
    Ok(match a.inverse()? {
        Ok(inv) => HMap::Image(k.matmul(&inv)?.neg()),
        Err(e) => HMap::NotInM { det: e.det },
    })
}

const QI_HOLDS: &str = "S is QI with respect to G";

/// Whether `h(S ∩ M) = S ∩ M` (or `h(S) = S` over proper rational rings),
/// decided by the equivalence with QI once its hypotheses are checked.
pub fn h_invariance(g: &Matrix, s: &ControllerSet) -> Result<QiReport, QiError> {
    let qi = check_qi(g, s)?;
    let ring = s.ring();
    let (m, n) = g.dims();
    let k = m.min(n) as u64;
    let qi_status = match qi.verdict {
        Verdict::True => Status::Holds,
        Verdict::False => Status::Fails,
        Verdict::Unknown => Status::Unknown,
    };
    let mut trace = vec![pre(QI_HOLDS, qi_status)];
    let field_size = format!("field has at least {} elements", 2 * k + 1);
    let char_two = "field characteristic is not 2";
    match ring.descriptor() {
        RingDescriptor::ProperRatRing { .. } => {
            trace.push(pre(
                "equivalence for proper rational functions applies",
                Status::Holds,
            ));
            for &v in ring.proper_indices() {
                let name = &ring.vars()[v];
                let sp = g
                    .entries()
                    .iter()
                    .all(|x| x.is_strictly_proper_in(name).unwrap_or(false));
                trace.push(pre(
                    format!("G is strictly proper in {name}"),
                    Status::of(Some(sp)),
                ));
            }
        }
        RingDescriptor::Rationals | RingDescriptor::RatFuncField { .. } => {
            trace.push(pre("equivalence for fields applies", Status::Holds));
            trace.push(pre(field_size, Status::Holds));
            trace.push(pre(char_two, Status::Holds));
        }
        RingDescriptor::IntegersModP { p } => {
            trace.push(pre("equivalence for fields applies", Status::Holds));
            trace.push(pre(field_size, Status::of(Some(*p > 2 * k))));
            trace.push(pre(char_two, Status::of(Some(*p != 2))));
        }
        RingDescriptor::Integers
        | RingDescriptor::QuadraticZBeta
        | RingDescriptor::PolyRing { .. } => {
            trace.push(pre(
                "ring admits an h-invariance equivalence",
                Status::Fails,
            ));
        }
    }
    let all_hold = trace[1..].iter().all(|p| p.status == Status::Holds);
    if !all_hold || qi.verdict == Verdict::Unknown {
        return Ok(QiReport::unknown(Method::TheoremChain, trace));
    }
    Ok(QiReport {
        verdict: qi.verdict,
        method: Method::TheoremChain,
        witness: qi.witness,
        preconditions: trace,
    })
}

/// `C = {P11 − P12·Q·P21 : Q ∈ S}` described by its offset and the images of
/// the generators of `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedLoop {
    Affine { offset: Matrix, images: Vec<Matrix> },
    Unknown(QiReport),
}

/// The achievable closed-loop maps `P11 − P12·h(K)·P21`, `K ∈ S`, when
/// `h(S) = S`: then `C = {P11 − Σ c_i·P12 H_i P21}`.
pub fn closed_loop_set(
    p11: &Matrix,
    p12: &Matrix,
    p21: &Matrix,
    g: &Matrix,
    s: &ControllerSet,
) -> Result<ClosedLoop, QiError> {
    check_dims(g, s)?;
    let (n, m) = s.dims();
    if p12.cols() != n || p21.rows() != m || p11.dims() != (p12.rows(), p21.cols()) {
        return Err(QiError::Dimension(format!(
            "P11 {}x{}, P12 {}x{}, P21 {}x{} do not fit controllers {n}x{m}",
            p11.rows(),
            p11.cols(),
            p12.rows(),
            p12.cols(),
            p21.rows(),
            p21.cols()
        )));
    }
    let report = h_invariance(g, s)?;
    if report.verdict != Verdict::True {
        return Ok(ClosedLoop::Unknown(report));
    }
    let images = s
        .generators()
        .iter()
        .map(|h| p12.matmul(h)?.matmul(p21))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ClosedLoop::Affine {
        offset: p11.clone(),
        images,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_matrix, parse_scalar};
    use crate::ring::Ring;

    fn counterexample() -> (Matrix, ControllerSet) {
        let z = Ring::integers();
        let g = Matrix::from_ints(&z, &[&[0, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
        let gens = vec![
            Matrix::from_ints(&z, &[&[2, 0, 0], &[0, 0, 0], &[0, 0, 0]]),
            Matrix::from_ints(&z, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]),
            Matrix::from_ints(&z, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]),
        ];
        (g, ControllerSet::generated(&z, (3, 3), gens).unwrap())
    }

    #[test]
    fn counterexample_is_qi_but_not_adjugate_invariant() {
        let (g, s) = counterexample();
        assert_eq!(check_qi(&g, &s).unwrap().verdict, Verdict::True);
        // H_y G H_z = e11 is not in S, though H_y G H_z + H_z G H_y = 2e11 is
        let strong = check_strong_qi(&g, &s).unwrap();
        assert_eq!(strong.verdict, Verdict::False);
        let Some(Witness::ControllerPair {
            generators, image, ..
        }) = strong.witness
        else {
            panic!("expected a generator pair");
        };
        assert_eq!(generators, (1, 2));
        assert_eq!(image, Matrix::unit(s.ring(), 3, 3, 0, 0));
        let adj = adjugate_invariance(&g, &s).unwrap();
        assert_eq!(adj.verdict, Verdict::False);
        let Some(Witness::Controller {
            k, image, reason, ..
        }) = adj.witness
        else {
            panic!("expected an explicit controller");
        };
        let z = s.ring();
        assert_eq!(
            k,
            Matrix::from_ints(z, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])
        );
        assert_eq!(
            image,
            Matrix::from_ints(z, &[&[1, 1, 1], &[1, 1, 0], &[1, 0, 0]])
        );
        assert_eq!(reason, "2 ∤ 1");
    }

    #[test]
    fn counterexample_over_rationals_is_adjugate_invariant() {
        let (g, s) = counterexample();
        let q = Ring::rationals();
        let gens = s
            .generators()
            .iter()
            .map(|h| h.coerce(&q).unwrap())
            .collect();
        let s = ControllerSet::generated(&q, (3, 3), gens).unwrap();
        let g = g.coerce(&q).unwrap();
        assert_eq!(adjugate_invariance(&g, &s).unwrap().verdict, Verdict::True);
        assert_eq!(h_invariance(&g, &s).unwrap().verdict, Verdict::True);
    }

    #[test]
    fn diagonal_pattern_with_full_plant() {
        let q = Ring::rationals();
        let s = ControllerSet::sparsity(&q, vec![vec![true, false], vec![false, true]]).unwrap();
        let g = Matrix::from_ints(&q, &[&[1, 1], &[1, 1]]);
        for method in [QiMethod::Sparsity, QiMethod::Generators] {
            let r = check_qi_with(&g, &s, method).unwrap();
            assert_eq!(r.verdict, Verdict::False);
            let Some(Witness::Controller { k, image, .. }) = r.witness else {
                panic!()
            };
            assert!(s.contains(&k).unwrap().member);
            assert!(!s.contains(&image).unwrap().member);
        }
    }

    #[test]
    fn h_map_scalar() {
        let r = Ring::proper::<&str>(&[], &["s"]).unwrap();
        let g = Matrix::from_fn(&r, 1, 1, |_, _| parse_scalar("1/s", &r).unwrap());
        let k = Matrix::identity(&r, 1);
        let HMap::Image(h) = h_map(&k, &g).unwrap() else {
            panic!()
        };
        assert_eq!(h[(0, 0)].to_string(), "-s/(s-1)");
        assert_eq!(h_map(&h, &g).unwrap(), HMap::Image(k));
        let z = Matrix::zeros(&r, 1, 1);
        assert_eq!(h_map(&z, &g).unwrap(), HMap::Image(z));
    }

    #[test]
    fn h_map_outside_m() {
        let q = Ring::rationals();
        let g = Matrix::identity(&q, 2);
        let k = Matrix::from_ints(&q, &[&[1, 0], &[0, 2]]);
        assert_eq!(h_map(&k, &g).unwrap(), HMap::NotInM { det: q.zero() });
    }

    #[test]
    fn network_example() {
        let r = Ring::proper(&["s"], &["d"]).unwrap();
        let g = parse_matrix(
            &[vec!["1/(s*d+2)", "0"], vec!["0", "(s+d^2)/(s^2*d+d^5)"]],
            &r,
        )
        .unwrap();
        let s = ControllerSet::delay_bounds(&r, "d", vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(check_qi(&g, &s).unwrap().verdict, Verdict::True);
        assert_eq!(adjugate_invariance(&g, &s).unwrap().verdict, Verdict::True);
        let h = h_invariance(&g, &s).unwrap();
        assert_eq!(h.verdict, Verdict::True, "{h:?}");
        let i = Matrix::identity(&r, 2);
        let z = Matrix::zeros(&r, 2, 2);
        let ClosedLoop::Affine { offset, images } = closed_loop_set(&z, &i, &i, &g, &s).unwrap()
        else {
            panic!()
        };
        assert_eq!(offset, z);
        assert_eq!(images, s.generators());
    }

    #[test]
    fn small_field_is_unknown() {
        let f = Ring::modp(3).unwrap();
        let s = ControllerSet::sparsity(&f, vec![vec![true, true], vec![true, true]]).unwrap();
        let g = Matrix::from_ints(&f, &[&[1, 2], &[0, 1]]);
        let r = h_invariance(&g, &s).unwrap();
        assert_eq!(r.verdict, Verdict::Unknown);
        assert!(r.preconditions.iter().any(|p| p.status == Status::Fails));
    }

    #[test]
    fn report_json_shape() {
        let (g, s) = counterexample();
        let json = serde_json::to_value(adjugate_invariance(&g, &s).unwrap()).unwrap();
        assert_eq!(json["verdict"], "false");
        assert_eq!(json["method"], "adjugate_symbolic");
        assert_eq!(json["witness"]["k"][0][2], "1");
        assert_eq!(json["preconditions"][0]["status"], "fails");
    }
}
