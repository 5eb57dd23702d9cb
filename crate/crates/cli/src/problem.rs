//! Problem files: ring, plant, controller set and optional four-block plant.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use qinv_core::ctrl::{ControllerSet, ControllerSetSpec};
use qinv_core::expr::parse_matrix;
use qinv_core::mat_alg::Matrix;
use qinv_core::ring::{Ring, RingDescriptor};
use serde::{Deserialize, Serialize};

pub const FORMAT: u32 = 1;

pub type TextMatrix = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub format: u32,
    pub ring: RingDescriptor,
    pub plant: TextMatrix,
    pub controller_set: ControllerSetSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p11: Option<TextMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p12: Option<TextMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p21: Option<TextMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

/// A validated problem.
pub struct Problem {
    pub ring: Ring,
    pub g: Matrix,
    pub s: ControllerSet,
    pub four_block: Option<(Matrix, Matrix, Matrix)>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{}: invalid JSON", path.display()))
}

pub fn matrix(field: &str, rows: &TextMatrix, ring: &Ring) -> Result<Matrix> {
    parse_matrix(rows, ring).with_context(|| field.to_string())
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Problem> {
        let file: ProblemFile = read_json(path)?;
        file.validate().with_context(|| path.display().to_string())
    }

    pub fn validate(&self) -> Result<Problem> {
        if self.format != FORMAT {
            bail!(
                "format: unsupported version {}, expected {FORMAT}",
                self.format
            );
        }
        let ring = Ring::new(self.ring.clone()).context("ring")?;
        let g = matrix("plant", &self.plant, &ring)?;
        let s = self.controller_set.build(&ring).context("controller_set")?;
        let (m, n) = g.dims();
        if s.dims() != (n, m) {
            bail!(
                "controller_set: controllers are {}x{}, the {m}x{n} plant needs {n}x{m}",
                s.dims().0,
                s.dims().1
            );
        }
        let four_block = match (&self.p11, &self.p12, &self.p21) {
            (None, None, None) => None,
            (Some(a), Some(b), Some(c)) => {
                let p11 = matrix("p11", a, &ring)?;
                let p12 = matrix("p12", b, &ring)?;
                let p21 = matrix("p21", c, &ring)?;
                if p12.cols() != n || p21.rows() != m || p11.dims() != (p12.rows(), p21.cols()) {
                    bail!(
                        "p11/p12/p21: shapes {}x{}, {}x{}, {}x{} do not fit {n}x{m} controllers",
                        p11.rows(),
                        p11.cols(),
                        p12.rows(),
                        p12.cols(),
                        p21.rows(),
                        p21.cols()
                    );
                }
                Some((p11, p12, p21))
            }
            _ => bail!("p11, p12 and p21 must be given together"),
        };
        Ok(Problem {
            ring,
            g,
            s,
            four_block,
        })
    }
}

/// A controller file: a bare matrix or `{"k": matrix}`.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum ControllerFile {
    Bare(TextMatrix),
    Wrapped { k: TextMatrix },
}

impl ControllerFile {
    pub fn rows(&self) -> &TextMatrix {
        match self {
            ControllerFile::Bare(m) | ControllerFile::Wrapped { k: m } => m,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_round_trips_and_validates() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems");
        let mut seen = 0;
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            let file: ProblemFile = read_json(&path).unwrap();
            let again: ProblemFile =
                serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
            assert_eq!(file, again);
            file.validate().unwrap();
            seen += 1;
        }
        assert!(seen >= 5);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"format":1,"ring":{"kind":"integers"},"plant":[["1"]],
            "controller_set":{"kind":"sparsity","pattern":[[true]]},"plnat":[]}"#;
        assert!(serde_json::from_str::<ProblemFile>(text).is_err());
    }
}
