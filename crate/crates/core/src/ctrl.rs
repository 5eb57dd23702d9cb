//! Controller constraint sets: modules `S ⊆ R^{n×m}` given by a sparsity
//! pattern, by per-entry delay bounds, or by explicit generators.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_matrix, ParseError};
use crate::mat_alg::{solve_linear, Matrix, MatrixError, Obstruction, Solve};
use crate::poly_rat::Delay;
use crate::ring::{Ring, RingDescriptor, RingElement, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CtrlError {
    #[error("invalid controller set: {0}")]
    Invalid(String),
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    Dimension {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("capability: {0}")]
    Capability(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl From<MatrixError> for CtrlError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::Ring(r) => CtrlError::Ring(r),
            MatrixError::Unsupported { op, ring } => {
                CtrlError::Capability(format!("{op} is not implemented over {ring}"))
            }
            other => CtrlError::Invalid(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ControllerKind {
    /// `K_ij` must vanish where the pattern is false.
    Sparsity(Vec<Vec<bool>>),
    /// `delay(K_ij) ≥ bounds[i][j]` in the proper variable `d_var`.
    DelayBounds {
        d_var: String,
        bounds: Vec<Vec<u32>>,
    },
    /// The `R`-span of the listed matrices.
    Generators(Vec<Matrix>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControllerSet {
    ring: Ring,
    rows: usize,
    cols: usize,
    kind: ControllerKind,
}

/// Evidence for a membership verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Entries that break the sparsity pattern.
    Pattern {
        violations: Vec<(usize, usize)>,
    },
    /// Entries whose delay is below its bound: `(i, j, delay, bound)`.
    Delays {
        violations: Vec<(usize, usize, Delay, u32)>,
    },
    /// `K = Σ c_i H_i`.
    Coefficients(Vec<RingElement>),
    Obstruction(Obstruction),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub certificate: Certificate,
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Certificate::Pattern { violations } if violations.is_empty() => {
                f.write_str("pattern respected")
            }
            Certificate::Pattern { violations } => {
                let list: Vec<String> = violations
                    .iter()
                    .map(|(i, j)| format!("({},{})", i + 1, j + 1))
                    .collect();
                write!(f, "nonzero outside pattern at {}", list.join(", "))
            }
            Certificate::Delays { violations } if violations.is_empty() => {
                f.write_str("delay bounds respected")
            }
            Certificate::Delays { violations } => {
                let list: Vec<String> = violations
                    .iter()
                    .map(|(i, j, d, a)| format!("({},{}): delay {d} < {a}", i + 1, j + 1))
                    .collect();
                f.write_str(&list.join(", "))
            }
            Certificate::Coefficients(c) => {
                let list: Vec<String> = c.iter().map(|x| x.to_canonical_string()).collect();
                write!(f, "coefficients ({})", list.join(", "))
            }
            Certificate::Obstruction(o) => write!(f, "{o}"),
        }
    }
}

fn check_shape<T>(grid: &[Vec<T>]) -> Result<(usize, usize), CtrlError> {
    let rows = grid.len();
    let cols = grid.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(CtrlError::Invalid("empty pattern".into()));
    }
    if grid.iter().any(|r| r.len() != cols) {
        return Err(CtrlError::Invalid("ragged rows".into()));
    }
    Ok((rows, cols))
}

impl ControllerSet {
    pub fn sparsity(ring: &Ring, pattern: Vec<Vec<bool>>) -> Result<Self, CtrlError> {
        let (rows, cols) = check_shape(&pattern)?;
        Ok(ControllerSet {
            ring: ring.clone(),
            rows,
            cols,
            kind: ControllerKind::Sparsity(pattern),
        })
    }

    pub fn delay_bounds(
        ring: &Ring,
        d_var: &str,
        bounds: Vec<Vec<u32>>,
    ) -> Result<Self, CtrlError> {
        let (rows, cols) = check_shape(&bounds)?;
        let is_proper_var = ring
            .var_index(d_var)
            .is_some_and(|i| ring.proper_indices().contains(&i));
        if !matches!(ring.descriptor(), RingDescriptor::ProperRatRing { .. }) || !is_proper_var {
            return Err(CtrlError::Invalid(format!(
                "delay bounds need a proper rational ring with proper variable `{d_var}`, got {ring}"
            )));
        }
        Ok(ControllerSet {
            ring: ring.clone(),
            rows,
            cols,
            kind: ControllerKind::DelayBounds {
                d_var: d_var.to_string(),
                bounds,
            },
        })
    }

    /// Span of `gens`; `dims` is needed when `gens` is empty (`S = {0}`).
    pub fn generated(
        ring: &Ring,
        dims: (usize, usize),
        gens: Vec<Matrix>,
    ) -> Result<Self, CtrlError> {
        for h in &gens {
            if h.ring() != ring {
                return Err(RingError::Mismatch(ring.to_string(), h.ring().to_string()).into());
            }
            if h.dims() != dims {
                return Err(CtrlError::Dimension {
                    expected: dims,
                    found: h.dims(),
                });
            }
        }
        Ok(ControllerSet {
            ring: ring.clone(),
            rows: dims.0,
            cols: dims.1,
            kind: ControllerKind::Generators(gens),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn kind(&self) -> &ControllerKind {
        &self.kind
    }

    pub fn sparsity_pattern(&self) -> Option<&[Vec<bool>]> {
        match &self.kind {
            ControllerKind::Sparsity(p) => Some(p),
            _ => None,
        }
    }

    /// A finite generating set of `S` as an `R`-module.
    ///
    /// For delay bounds the generator of entry `(i,j)` is `d^(-a_ij)·e_ij`:
    /// `f` has delay at least `a` iff `d^a·f` is proper in `d`.
    pub fn generators(&self) -> Vec<Matrix> {
        let r = &self.ring;
        let unit = |i, j| Matrix::unit(r, self.rows, self.cols, i, j);
        match &self.kind {
            ControllerKind::Sparsity(p) => self
                .positions()
                .filter(|&(i, j)| p[i][j])
                .map(|(i, j)| unit(i, j))
                .collect(),
            ControllerKind::DelayBounds { d_var, bounds } => {
                let d = r.evaluation_ring().var(d_var).expect("validated variable");
                let inv_d = d.try_invert().expect("d is nonzero");
                self.positions()
                    .map(|(i, j)| {
                        let g = r
                            .coerce(&inv_d.pow(bounds[i][j]))
                            .expect("negative powers of d are proper");
                        let mut m = Matrix::zeros(r, self.rows, self.cols);
                        m.set(i, j, g);
                        m
                    })
                    .collect()
            }
            ControllerKind::Generators(g) => g.clone(),
        }
    }

    fn positions(&self) -> impl Iterator<Item = (usize, usize)> {
        let cols = self.cols;
        (0..self.rows).flat_map(move |i| (0..cols).map(move |j| (i, j)))
    }

    /// Membership of `k` in `S`, with a certificate either way.
    pub fn contains(&self, k: &Matrix) -> Result<Membership, CtrlError> {
        if k.ring() != &self.ring {
            return Err(RingError::Mismatch(self.ring.to_string(), k.ring().to_string()).into());
        }
        if k.dims() != self.dims() {
            return Err(CtrlError::Dimension {
                expected: self.dims(),
                found: k.dims(),
            });
        }
        match &self.kind {
            ControllerKind::Sparsity(p) => {
                let violations: Vec<_> = self
                    .positions()
                    .filter(|&(i, j)| !p[i][j] && !k[(i, j)].is_zero())
                    .collect();
                Ok(Membership {
                    member: violations.is_empty(),
                    certificate: Certificate::Pattern { violations },
                })
            }
            ControllerKind::DelayBounds { d_var, bounds } => {
                let mut violations = Vec::new();
                for (i, j) in self.positions() {
                    let delay = k[(i, j)].delay(d_var)?;
                    if delay < Delay::Finite(i64::from(bounds[i][j])) {
                        violations.push((i, j, delay, bounds[i][j]));
                    }
                }
                Ok(Membership {
                    member: violations.is_empty(),
                    certificate: Certificate::Delays { violations },
                })
            }
            ControllerKind::Generators(gens) => self.contains_span(gens, k),
        }
    }

    fn contains_span(&self, gens: &[Matrix], k: &Matrix) -> Result<Membership, CtrlError> {
        let r = &self.ring;
        let supported = r.is_field()
            || matches!(
                r.descriptor(),
                RingDescriptor::Integers | RingDescriptor::QuadraticZBeta
            );
        if !supported {
            return Err(CtrlError::Capability(format!(
                "membership in a span of generators is not implemented over {r}"
            )));
        }
        if gens.is_empty() {
            return Ok(if k.is_zero() {
                Membership {
                    member: true,
                    certificate: Certificate::Coefficients(vec![]),
                }
            } else {
                Membership {
                    member: false,
                    certificate: Certificate::Obstruction(Obstruction::Rank {
                        rank: 0,
                        augmented_rank: 1,
                    }),
                }
            });
        }
        // columns are the vectorized generators
        let vecs: Vec<Vec<RingElement>> = gens.iter().map(Matrix::vectorize).collect();
        let a = Matrix::from_fn(r, self.rows * self.cols, gens.len(), |i, j| {
            vecs[j][i].clone()
        });
        Ok(match solve_linear(&a, &k.vectorize())? {
            Solve::Solution(c) => Membership {
                member: true,
                certificate: Certificate::Coefficients(c),
            },
            Solve::NoSolution(o) => Membership {
                member: false,
                certificate: Certificate::Obstruction(o),
            },
        })
    }

    /// `Σ c_i H_i` over [`ControllerSet::generators`].
    pub fn combine(&self, coeffs: &[RingElement]) -> Matrix {
        let gens = self.generators();
        assert_eq!(coeffs.len(), gens.len(), "one coefficient per generator");
        gens.iter().zip(coeffs).fold(
            Matrix::zeros(&self.ring, self.rows, self.cols),
            |acc, (h, c)| acc.add(&h.scale(c)).expect("same shape"),
        )
    }

    pub fn to_spec(&self) -> ControllerSetSpec {
        match &self.kind {
            ControllerKind::Sparsity(p) => ControllerSetSpec::Sparsity { pattern: p.clone() },
            ControllerKind::DelayBounds { d_var, bounds } => ControllerSetSpec::DelayBounds {
                d_var: d_var.clone(),
                bounds: bounds.clone(),
            },
            ControllerKind::Generators(g) => ControllerSetSpec::Generators {
                matrices: g.iter().map(Matrix::to_strings).collect(),
                dims: Some([self.rows, self.cols]),
            },
        }
    }
}

/// JSON form of a controller set; matrices are rows of expression strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ControllerSetSpec {
    Sparsity {
        pattern: Vec<Vec<bool>>,
    },
    DelayBounds {
        d_var: String,
        bounds: Vec<Vec<u32>>,
    },
    Generators {
        matrices: Vec<Vec<Vec<String>>>,
        /// Required only when `matrices` is empty.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dims: Option<[usize; 2]>,
    },
}

impl ControllerSetSpec {
    pub fn build(&self, ring: &Ring) -> Result<ControllerSet, CtrlError> {
        match self {
            ControllerSetSpec::Sparsity { pattern } => {
                ControllerSet::sparsity(ring, pattern.clone())
            }
            ControllerSetSpec::DelayBounds { d_var, bounds } => {
                ControllerSet::delay_bounds(ring, d_var, bounds.clone())
            }
            ControllerSetSpec::Generators { matrices, dims } => {
                let gens = matrices
                    .iter()
                    .map(|m| parse_matrix(m, ring))
                    .collect::<Result<Vec<_>, _>>()?;
                let shape = match (gens.first(), dims) {
                    (Some(h), _) => h.dims(),
                    (None, Some([r, c])) => (*r, *c),
                    (None, None) => {
                        return Err(CtrlError::Invalid(
                            "an empty generator list needs \"dims\"".into(),
                        ))
                    }
                };
                ControllerSet::generated(ring, shape, gens)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_scalar;

    fn counterexample_set() -> ControllerSet {
        let z = Ring::integers();
        let gens = vec![
            Matrix::from_ints(&z, &[&[2, 0, 0], &[0, 0, 0], &[0, 0, 0]]),
            Matrix::from_ints(&z, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]),
            Matrix::from_ints(&z, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]),
        ];
        ControllerSet::generated(&z, (3, 3), gens).unwrap()
    }

    #[test]
    fn integer_span_membership() {
        let s = counterexample_set();
        let z = s.ring().clone();
        let k0 = Matrix::from_ints(&z, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        let m = s.contains(&k0).unwrap();
        assert!(m.member);
        assert_eq!(
            m.certificate,
            Certificate::Coefficients(vec![z.zero(), z.zero(), z.one()])
        );
        let bad = Matrix::from_ints(&z, &[&[1, 1, 1], &[1, 1, 0], &[1, 0, 0]]);
        let m = s.contains(&bad).unwrap();
        assert!(!m.member);
        assert_eq!(m.certificate.to_string(), "2 ∤ 1");
        assert!(s.contains(&Matrix::zeros(&z, 3, 3)).unwrap().member);
    }

    #[test]
    fn delay_membership() {
        let r = Ring::proper(&["s"], &["d"]).unwrap();
        let s = ControllerSet::delay_bounds(&r, "d", vec![vec![0, 1], vec![1, 0]]).unwrap();
        let entry = |t: &str| parse_scalar(t, &r).unwrap();
        let mut k = Matrix::zeros(&r, 2, 2);
        k.set(0, 1, entry("1/(d*(s+1))"));
        assert!(s.contains(&k).unwrap().member);
        k.set(0, 1, entry("1/(s+1)"));
        let m = s.contains(&k).unwrap();
        assert!(!m.member);
        assert_eq!(m.certificate.to_string(), "(1,2): delay 0 < 1");
        let gens = s.generators();
        assert_eq!(gens.len(), 4);
        assert_eq!(gens[1][(0, 1)].to_string(), "1/d");
        assert!(gens.iter().all(|g| s.contains(g).unwrap().member));
    }

    #[test]
    fn delay_bounds_need_proper_variable() {
        let r = Ring::ratfunc(&["s", "d"]).unwrap();
        assert!(ControllerSet::delay_bounds(&r, "d", vec![vec![1]]).is_err());
        let r = Ring::proper(&["d"], &["s"]).unwrap();
        assert!(ControllerSet::delay_bounds(&r, "d", vec![vec![1]]).is_err());
    }

    #[test]
    fn sparsity_generators() {
        let q = Ring::rationals();
        let s = ControllerSet::sparsity(&q, vec![vec![true, false], vec![true, true]]).unwrap();
        let g = s.generators();
        assert_eq!(g.len(), 3);
        assert_eq!(g[1], Matrix::unit(&q, 2, 2, 1, 0));
        let k = Matrix::from_ints(&q, &[&[1, 2], &[3, 4]]);
        let m = s.contains(&k).unwrap();
        assert_eq!(
            m.certificate.to_string(),
            "nonzero outside pattern at (1,2)"
        );
    }

    #[test]
    fn span_over_proper_ring_is_a_capability_error() {
        let r = Ring::proper::<&str>(&[], &["s"]).unwrap();
        let s = ControllerSet::generated(&r, (1, 1), vec![Matrix::identity(&r, 1)]).unwrap();
        assert!(matches!(
            s.contains(&Matrix::identity(&r, 1)),
            Err(CtrlError::Capability(_))
        ));
    }

    #[test]
    fn spec_round_trip() {
        let s = counterexample_set();
        let json = serde_json::to_string(&s.to_spec()).unwrap();
        let back: ControllerSetSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build(s.ring()).unwrap(), s);
        let spec: ControllerSetSpec =
            serde_json::from_str(r#"{"kind":"delay_bounds","d_var":"d","bounds":[[0,1],[1,0]]}"#)
                .unwrap();
        let r = Ring::proper(&["s"], &["d"]).unwrap();
        assert_eq!(spec.build(&r).unwrap().dims(), (2, 2));
    }
}
