//! Subcommand bodies. Each returns the text rendering, the JSON document and
//! the exit code; `main` picks the rendering.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use qinv_core::expr::{matrix_strings, parse_scalar};
use qinv_core::mat_alg::Matrix;
use qinv_core::oracle::{run_experiment, ExperimentConfig, Mode};
use qinv_core::qi::{
    adjugate_invariance, check_qi_with, closed_loop_set, h_map, ClosedLoop, HMap, QiMethod,
    QiReport, Verdict, Witness,
};
use qinv_core::ring::{Ring, RingDescriptor};
use qinv_core::vandermonde::{cauchy_binet_sum, search_left_invertible, verify_left_inverse};
use serde_json::{json, Value};

use crate::problem::{matrix, read_json, ControllerFile, ProblemFile, FORMAT};

pub const EXIT_HOLDS: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_FAILS: u8 = 3;
pub const EXIT_UNKNOWN: u8 = 4;

pub struct Output {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

pub fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::True => EXIT_HOLDS,
        Verdict::False => EXIT_FAILS,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn show(m: &Matrix) -> String {
    m.to_string()
}

fn render_report(out: &mut String, title: &str, r: &QiReport) {
    let _ = writeln!(out, "{title}: {} [{}]", r.verdict, r.method);
    for p in &r.preconditions {
        let _ = writeln!(out, "  - {}: {}", p.name, p.status);
    }
    match &r.witness {
        None => {}
        Some(Witness::Controller {
            generators,
            k,
            image,
            reason,
        }) => {
            let _ = writeln!(out, "  witness K = {} (generators {generators:?})", show(k));
            let _ = writeln!(out, "    image {} is not in S: {reason}", show(image));
        }
        Some(Witness::ControllerPair {
            generators,
            k1,
            k2,
            image,
            reason,
        }) => {
            let _ = writeln!(
                out,
                "  witness K1 = {}, K2 = {} (generators {}, {})",
                show(k1),
                show(k2),
                generators.0,
                generators.1
            );
            let _ = writeln!(out, "    K1 G K2 = {} is not in S: {reason}", show(image));
        }
        Some(Witness::Coefficient {
            monomial,
            matrix,
            reason,
        }) => {
            let _ = writeln!(out, "  witness coefficient of c^{monomial:?}");
            let _ = writeln!(out, "    {} is not in S: {reason}", show(matrix));
        }
    }
}

pub fn check_qi(path: &Path, method: QiMethod) -> Result<Output> {
    let p = ProblemFile::load(path)?;
    let qi = check_qi_with(&p.g, &p.s, method)?;
    let adj = adjugate_invariance(&p.g, &p.s)?;
    let h = qinv_core::qi::h_invariance(&p.g, &p.s)?;
    let mut warnings = Vec::new();
    if qi.verdict != adj.verdict && adj.verdict != Verdict::Unknown {
        warnings.push(format!(
            "QI is {} but adjugate invariance is {} over {}; the two notions differ on this ring",
            qi.verdict, adj.verdict, p.ring
        ));
    }
    let (m, n) = p.g.dims();
    let mut text = format!("ring: {}\nplant: {m}x{n}, controllers: {n}x{m}\n", p.ring);
    render_report(&mut text, "QI", &qi);
    render_report(&mut text, "adjugate invariance", &adj);
    render_report(&mut text, "h-invariance", &h);
    for w in &warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    let json = json!({
        "format": FORMAT,
        "command": "check-qi",
        "ring": p.ring.descriptor(),
        "qi": qi,
        "adjugate_invariance": adj,
        "h_invariance": h,
        "warnings": warnings,
    });
    Ok(Output {
        text,
        json,
        code: exit_code(qi.verdict),
    })
}

pub fn h_map_cmd(path: &Path, k_path: &Path) -> Result<Output> {
    let p = ProblemFile::load(path)?;
    let kf: ControllerFile = read_json(k_path)?;
    let k = matrix("k", kf.rows(), &p.ring).with_context(|| k_path.display().to_string())?;
    let (m, n) = p.g.dims();
    if k.dims() != (n, m) {
        bail!(
            "k: controller is {}x{}, expected {n}x{m}",
            k.rows(),
            k.cols()
        );
    }
    Ok(match h_map(&k, &p.g)? {
        HMap::Image(h) => Output {
            text: format!("h(K) = {}\n", show(&h)),
            json: json!({"format": FORMAT, "command": "h-map", "result": "image", "h": h}),
            code: EXIT_HOLDS,
        },
        HMap::NotInM { det } => {
            let det = det.to_canonical_string();
            Output {
                text: format!("K is not in M: det(I - GK) = {det} is not a unit\n"),
                json: json!({"format": FORMAT, "command": "h-map", "result": "not_in_m", "det": det}),
                code: EXIT_FAILS,
            }
        }
    })
}

pub fn closed_loop(path: &Path) -> Result<Output> {
    let p = ProblemFile::load(path)?;
    let (m, n) = p.g.dims();
    // without a four-block plant, C = {−h(K)} : P11 = 0, P12 = I, P21 = I
    let (p11, p12, p21) = p.four_block.clone().unwrap_or_else(|| {
        (
            Matrix::zeros(&p.ring, n, m),
            Matrix::identity(&p.ring, n),
            Matrix::identity(&p.ring, m),
        )
    });
    Ok(match closed_loop_set(&p11, &p12, &p21, &p.g, &p.s)? {
        ClosedLoop::Affine { offset, images } => {
            let mut text = format!(
                "closed-loop set: P11 - sum_i c_i T_i\nP11 = {}\n",
                show(&offset)
            );
            for (i, t) in images.iter().enumerate() {
                let _ = writeln!(text, "T{} = {}", i + 1, show(t));
            }
            let json = json!({
                "format": FORMAT,
                "command": "closed-loop",
                "result": "affine",
                "offset": offset,
                "images": images,
            });
            Output {
                text,
                json,
                code: EXIT_HOLDS,
            }
        }
        ClosedLoop::Unknown(report) => {
            let mut text =
                String::from("closed-loop set not described: h-invariance not established\n");
            render_report(&mut text, "h-invariance", &report);
            let code = exit_code(report.verdict);
            let json = json!({
                "format": FORMAT,
                "command": "closed-loop",
                "result": "unknown",
                "h_invariance": report,
            });
            Output { text, json, code }
        }
    })
}

pub fn oracle(cfg: &ExperimentConfig, timing: bool) -> Result<Output> {
    let r = run_experiment(cfg, timing)?;
    let mode = match r.mode {
        Mode::Verify => "verify",
        Mode::Exploratory => "exploratory (field hypotheses fail)",
    };
    let mut text = format!(
        "Z/{}Z, {}x{} plants, {} generators, {} trials, seed {}\nmode: {mode}\n",
        cfg.p, cfg.m, cfg.n, cfg.gens, cfg.trials, cfg.seed
    );
    let _ = writeln!(text, "QI instances: {}", r.qi_true);
    let _ = writeln!(text, "QI / h-invariance agreements: {}", r.agreements);
    let _ = writeln!(text, "discrepancies: {}", r.discrepancies.len());
    for d in &r.discrepancies {
        let _ = writeln!(
            text,
            "  trial {}: QI {}, h-invariant {}, G = {:?}",
            d.trial, d.qi, d.h_invariant, d.instance.g.data
        );
    }
    let _ = writeln!(text, "engine agreements: {}", r.engine_agreements);
    let _ = writeln!(
        text,
        "engine disagreements: {}",
        r.engine_disagreements.len()
    );
    if let Some(ms) = r.runtime_ms {
        let _ = writeln!(text, "runtime: {ms} ms");
    }
    // a discrepancy only refutes anything when the hypotheses hold
    let code = if r.mode == Mode::Verify && !r.clean() || !r.engine_disagreements.is_empty() {
        EXIT_FAILS
    } else {
        EXIT_HOLDS
    };
    let json = json!({"format": FORMAT, "command": "oracle", "report": r});
    Ok(Output { text, json, code })
}

/// `integers`, `rationals`, `zbeta` or `mod:p`.
pub fn parse_ring(text: &str) -> Result<Ring> {
    let desc = match text {
        "integers" => RingDescriptor::Integers,
        "rationals" => RingDescriptor::Rationals,
        "zbeta" => RingDescriptor::QuadraticZBeta,
        _ => match text.strip_prefix("mod:") {
            Some(p) => RingDescriptor::IntegersModP {
                p: p.parse().with_context(|| format!("bad modulus `{p}`"))?,
            },
            None => bail!("unknown ring `{text}` (integers, rationals, zbeta, mod:p)"),
        },
    };
    Ok(Ring::new(desc)?)
}

pub fn vandermonde(ring: &str, points: &str, n: usize, n_max: Option<usize>) -> Result<Output> {
    let ring = parse_ring(ring)?;
    let cands = points
        .split(',')
        .map(|t| parse_scalar(t.trim(), &ring).with_context(|| format!("point `{t}`")))
        .collect::<Result<Vec<_>>>()?;
    let n_max = n_max.unwrap_or(cands.len());
    let Some(found) = search_left_invertible(&ring, n, &cands, n_max)? else {
        let text = format!("no left-invertible Vandermonde matrix of width {n} on subsets of size <= {n_max} over {ring}\n");
        let json = json!({"format": FORMAT, "command": "vandermonde", "result": "not_found"});
        return Ok(Output {
            text,
            json,
            code: EXIT_FAILS,
        });
    };
    let lv = found.l.matmul(&found.vandermonde)?;
    let ok = verify_left_inverse(&found.l, &found.vandermonde)?;
    let cb = cauchy_binet_sum(&found.l, &found.vandermonde)?.to_canonical_string();
    let pts: Vec<String> = found
        .points
        .iter()
        .map(|x| x.to_canonical_string())
        .collect();
    let text = format!(
        "ring: {ring}\npoints: {}\nV = {}\nL = {}\nL V = {}\nsum over n-subsets of det(L_s) det(V_s) = {cb}\n",
        pts.join(", "),
        show(&found.vandermonde),
        show(&found.l),
        show(&lv)
    );
    let json = json!({
        "format": FORMAT,
        "command": "vandermonde",
        "result": "found",
        "points": pts,
        "v": matrix_strings(&found.vandermonde),
        "l": matrix_strings(&found.l),
        "lv": matrix_strings(&lv),
        "left_inverse": ok,
        "cauchy_binet": cb,
    });
    Ok(Output {
        text,
        json,
        code: if ok { EXIT_HOLDS } else { EXIT_FAILS },
    })
}
