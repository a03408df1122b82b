//! Command implementations.  Every command produces a `Report` plus a
//! process exit code:
//!
//!   0  all requested checks hold
//!   1  a mathematical check failed (theorem mismatch, bound violated,
//!      polynomial is not an identity, containment refuted)
//!   2  input, parse, or validation error (including evaluation budgets)
//!   3  structure could not be resolved over the rationals (center does
//!      not split, simplicity certificate unavailable, invariance broken)

use crate::document::{load_algebra, load_polynomial, LoadError};
use crate::report::{digest_file, InputDigest, Report};
use piexp_core::construct::{incidence, tensor_product, ut};
use piexp_core::exponent::{
    matrix_theorem_check, pi_exponent, tensor_theorem_check, ExponentError, ExponentReport,
};
use piexp_core::identities::{
    codimension_exact, codimension_sampled, containment_at_degree, default_sample_count,
    is_identity, regev_bound_check, render_polynomial, IdentityError, IdentityOutcome,
    DEFAULT_BUDGET,
};
use piexp_core::structure::{structure_report, StructureError};
use piexp_core::structured::StructuredAlgebra;
use serde_json::{json, Value};
use std::path::Path;

pub struct Outcome {
    pub report: Report,
    pub exit: i32,
}

fn digests(paths: &[&Path]) -> Vec<InputDigest> {
    paths
        .iter()
        .filter_map(|p| digest_file(p).ok())
        .collect()
}

fn error_outcome(echo: Vec<String>, inputs: Vec<InputDigest>, exit: i32, msg: String) -> Outcome {
    Outcome {
        report: Report::new(echo, inputs, exit, json!({ "error": msg })),
        exit,
    }
}

fn load_exit(_: &LoadError) -> i32 {
    2
}

fn structure_exit(_: &StructureError) -> i32 {
    3
}

fn exponent_exit(e: &ExponentError) -> i32 {
    match e {
        ExponentError::Structure(_) => 3,
        ExponentError::NotCentralSimple { .. } => 3,
        ExponentError::Build(_) => 2,
    }
}

fn identity_exit(_: &IdentityError) -> i32 {
    2
}

/// Test-harness shim: shifts every scalar expectation inside `verify`
/// commands so the exit-code discipline can be exercised end to end.
/// Unset (the normal case) means zero shift.
fn verify_perturbation() -> i64 {
    std::env::var("PIEXP_VERIFY_PERTURB")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

fn expected_with_shim(expected: i64) -> i64 {
    expected + verify_perturbation()
}

fn exponent_value(rep: &ExponentReport) -> Value {
    json!({
        "value": rep.value,
        "radical_dim": rep.radical_dim,
        "complement_dim": rep.complement_dim,
        "component_dims": rep.component_dims,
        "witness_sequence": rep.witness_sequence,
        "witness_chain": rep.witness_chain,
    })
}

macro_rules! try_load {
    ($path:expr, $echo:expr, $inputs:expr) => {
        match load_algebra($path) {
            Ok(sa) => sa,
            Err(e) => {
                let exit = load_exit(&e);
                return error_outcome($echo, $inputs, exit, e.to_string());
            }
        }
    };
}

pub fn cmd_validate(path: &Path) -> Outcome {
    let echo = vec!["validate".into(), path.display().to_string()];
    let inputs = digests(&[path]);
    let sa = try_load!(path, echo, inputs);
    let results = json!({
        "valid": true,
        "dim": sa.dim(),
        "unital": sa.algebra.is_unital(),
        "structure": sa.structure.kind_name(),
    });
    Outcome {
        report: Report::new(echo, inputs, 0, results),
        exit: 0,
    }
}

pub fn cmd_info(path: &Path) -> Outcome {
    let echo = vec!["info".into(), path.display().to_string()];
    let inputs = digests(&[path]);
    let sa = try_load!(path, echo, inputs);
    match structure_report(&sa) {
        Ok(rep) => {
            let results = json!({
                "dim": sa.dim(),
                "unital": sa.algebra.is_unital(),
                "structure": sa.structure.kind_name(),
                "center_dim": sa.algebra.center().dim(),
                "radical_dim": rep.radical.dim(),
                "complement_dim": rep.complement.dim(),
                "component_dims": rep.component_dims(),
            });
            Outcome {
                report: Report::new(echo, inputs, 0, results),
                exit: 0,
            }
        }
        Err(e) => {
            let exit = structure_exit(&e);
            error_outcome(echo, inputs, exit, e.to_string())
        }
    }
}

pub fn cmd_exponent(path: &Path) -> Outcome {
    let echo = vec!["exponent".into(), path.display().to_string()];
    let inputs = digests(&[path]);
    let sa = try_load!(path, echo, inputs);
    match pi_exponent(&sa) {
        Ok(rep) => Outcome {
            report: Report::new(echo, inputs, 0, exponent_value(&rep)),
            exit: 0,
        },
        Err(e) => {
            let exit = exponent_exit(&e);
            error_outcome(echo, inputs, exit, e.to_string())
        }
    }
}

pub struct CodimArgs {
    pub m: usize,
    pub sampled: bool,
    pub samples: Option<usize>,
    pub seed: u64,
    pub budget: Option<u128>,
}

pub fn cmd_codim(path: &Path, args: &CodimArgs) -> Outcome {
    let mut echo = vec![
        "codim".into(),
        "-m".into(),
        args.m.to_string(),
        "--strategy".into(),
        if args.sampled { "sampled".into() } else { "exact".into() },
    ];
    echo.push(path.display().to_string());
    let inputs = digests(&[path]);
    let budget = args.budget.unwrap_or(DEFAULT_BUDGET);
    let sa = try_load!(path, echo, inputs);
    let run = if args.sampled {
        let n = args.samples.unwrap_or_else(|| default_sample_count(&sa, args.m));
        // the resolved sample count is part of the echoed command so that
        // defaulted and explicit invocations produce the same report
        let file = echo.pop().expect("echo ends with the file path");
        echo.extend([
            "--samples".into(),
            n.to_string(),
            "--seed".into(),
            args.seed.to_string(),
            file,
        ]);
        codimension_sampled(&sa, args.m, n, args.seed)
    } else {
        codimension_exact(&sa, args.m, budget)
    };
    match run {
        Ok(rep) => {
            let results = json!({
                "m": rep.m,
                "monomial_count": rep.monomial_count,
                "strategy": if rep.exact { "exact" } else { "sampled" },
                "value": rep.value,
                "exact": rep.exact,
                "samples": rep.samples,
            });
            let mut report = Report::new(echo, inputs, 0, results);
            if let Some(seed) = rep.seed {
                report = report.with_seeds(vec![seed]);
            }
            Outcome { report, exit: 0 }
        }
        Err(e) => {
            let exit = identity_exit(&e);
            error_outcome(echo, inputs, exit, e.to_string())
        }
    }
}

pub fn cmd_identity(path: &Path, poly_path: &Path) -> Outcome {
    let echo = vec![
        "identity".into(),
        "--poly".into(),
        poly_path.display().to_string(),
        path.display().to_string(),
    ];
    let inputs = digests(&[path, poly_path]);
    let sa = try_load!(path, echo, inputs);
    let poly = match load_polynomial(poly_path) {
        Ok(p) => p,
        Err(e) => return error_outcome(echo, inputs, 2, e.to_string()),
    };
    match is_identity(&sa, &poly) {
        Ok(IdentityOutcome::Holds) => {
            let results = json!({
                "polynomial": render_polynomial(&poly),
                "holds": true,
            });
            Outcome {
                report: Report::new(echo, inputs, 0, results),
                exit: 0,
            }
        }
        Ok(IdentityOutcome::Fails { tuple, value }) => {
            let labels: Vec<&str> = tuple.iter().map(|&i| sa.algebra.label(i)).collect();
            let results = json!({
                "polynomial": render_polynomial(&poly),
                "holds": false,
                "witness": { "tuple": tuple, "labels": labels, "value": value },
            });
            Outcome {
                report: Report::new(echo, inputs, 1, results),
                exit: 1,
            }
        }
        Err(e) => {
            let exit = identity_exit(&e);
            error_outcome(echo, inputs, exit, e.to_string())
        }
    }
}

pub fn cmd_contain(m: usize, a_path: &Path, b_path: &Path, budget: Option<u128>) -> Outcome {
    let echo = vec![
        "contain".into(),
        "-m".into(),
        m.to_string(),
        a_path.display().to_string(),
        b_path.display().to_string(),
    ];
    let inputs = digests(&[a_path, b_path]);
    let a = try_load!(a_path, echo, inputs);
    let b = try_load!(b_path, echo, inputs);
    match containment_at_degree(&a, &b, m, budget.unwrap_or(DEFAULT_BUDGET)) {
        Ok(rep) if rep.contained => Outcome {
            report: Report::new(echo, inputs, 0, json!({ "m": m, "contained": true })),
            exit: 0,
        },
        Ok(rep) => {
            let (poly, tuple, value) = rep.counterexample.expect("refutations carry a witness");
            let labels: Vec<&str> = tuple.iter().map(|&i| b.algebra.label(i)).collect();
            let results = json!({
                "m": m,
                "contained": false,
                "counterexample": {
                    "polynomial": render_polynomial(&poly),
                    "tuple": tuple,
                    "labels": labels,
                    "value": value,
                },
            });
            Outcome {
                report: Report::new(echo, inputs, 1, results),
                exit: 1,
            }
        }
        Err(e) => {
            let exit = identity_exit(&e);
            error_outcome(echo, inputs, exit, e.to_string())
        }
    }
}

pub fn cmd_verify_main_theorem(base_path: &Path, nmax: usize, dim_cap: usize) -> Outcome {
    let echo = vec![
        "verify".into(),
        "main-theorem".into(),
        "--base".into(),
        base_path.display().to_string(),
        "--nmax".into(),
        nmax.to_string(),
        "--dim-cap".into(),
        dim_cap.to_string(),
    ];
    let inputs = digests(&[base_path]);
    let base = try_load!(base_path, echo, inputs);
    match matrix_theorem_check(&base, nmax, dim_cap) {
        Ok(rows) => {
            let mut all_hold = true;
            let rendered: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let expected = expected_with_shim(r.expected as i64);
                    let holds =
                        r.skipped || r.computed.map(|c| c as i64) == Some(expected);
                    all_hold &= holds;
                    json!({
                        "n": r.n,
                        "dim": r.dim,
                        "computed": r.computed,
                        "expected": expected,
                        "skipped": r.skipped,
                        "holds": holds,
                    })
                })
                .collect();
            let exit = if all_hold { 0 } else { 1 };
            Outcome {
                report: Report::new(echo, inputs, exit, json!({ "rows": rendered, "holds": all_hold })),
                exit,
            }
        }
        Err(e) => {
            let exit = exponent_exit(&e);
            error_outcome(echo, inputs, exit, e.to_string())
        }
    }
}

pub fn cmd_verify_tensor_theorem(a_path: &Path, s_path: &Path) -> Outcome {
    let echo = vec![
        "verify".into(),
        "tensor-theorem".into(),
        "--a".into(),
        a_path.display().to_string(),
        "--s".into(),
        s_path.display().to_string(),
    ];
    let inputs = digests(&[a_path, s_path]);
    let a = try_load!(a_path, echo, inputs);
    let s = try_load!(s_path, echo, inputs);
    match tensor_theorem_check(&a, &s) {
        Ok(rep) => {
            let expected =
                expected_with_shim((rep.simple_dim * rep.factor_exponent) as i64);
            let holds = rep.product_exponent as i64 == expected;
            let exit = if holds { 0 } else { 1 };
            let results = json!({
                "factor_exponent": rep.factor_exponent,
                "simple_dim": rep.simple_dim,
                "product_exponent": rep.product_exponent,
                "expected": expected,
                "holds": holds,
            });
            Outcome {
                report: Report::new(echo, inputs, exit, results),
                exit,
            }
        }
        Err(e) => {
            let exit = exponent_exit(&e);
            error_outcome(echo, inputs, exit, e.to_string())
        }
    }
}

pub fn cmd_verify_regev(m: usize, a_path: &Path, b_path: &Path) -> Outcome {
    let echo = vec![
        "verify".into(),
        "regev".into(),
        "-m".into(),
        m.to_string(),
        a_path.display().to_string(),
        b_path.display().to_string(),
    ];
    let inputs = digests(&[a_path, b_path]);
    let a = try_load!(a_path, echo, inputs);
    let b = try_load!(b_path, echo, inputs);
    match regev_bound_check(&a, &b, m, DEFAULT_BUDGET) {
        Ok(rep) => {
            let bound = expected_with_shim((rep.left * rep.right) as i64);
            let holds = rep.product as i64 <= bound;
            let exit = if holds { 0 } else { 1 };
            let results = json!({
                "m": rep.m,
                "left": rep.left,
                "right": rep.right,
                "product": rep.product,
                "bound": bound,
                "holds": holds,
            });
            Outcome {
                report: Report::new(echo, inputs, exit, results),
                exit,
            }
        }
        Err(e) => {
            let exit = identity_exit(&e);
            error_outcome(echo, inputs, exit, e.to_string())
        }
    }
}

struct CheckSet {
    checks: Vec<Value>,
    all_hold: bool,
}

impl CheckSet {
    fn new() -> CheckSet {
        CheckSet { checks: Vec::new(), all_hold: true }
    }

    fn number(&mut self, name: &str, expected: usize, got: usize) {
        let expected = expected_with_shim(expected as i64);
        let holds = got as i64 == expected;
        self.all_hold &= holds;
        self.checks.push(json!({
            "check": name, "expected": expected, "got": got, "holds": holds,
        }));
    }

    fn list(&mut self, name: &str, expected: &[usize], got: &[usize]) {
        let holds = expected == got;
        self.all_hold &= holds;
        self.checks.push(json!({
            "check": name, "expected": expected, "got": got, "holds": holds,
        }));
    }

    fn strings(&mut self, name: &str, expected: &[&str], got: &[String]) {
        let holds = expected.len() == got.len()
            && expected.iter().zip(got).all(|(e, g)| e == g);
        self.all_hold &= holds;
        self.checks.push(json!({
            "check": name, "expected": expected, "got": got, "holds": holds,
        }));
    }

    fn flag(&mut self, name: &str, got: bool) {
        self.all_hold &= got;
        self.checks.push(json!({
            "check": name, "expected": true, "got": got, "holds": got,
        }));
    }
}

/// The pinned regression numbers for the worked tensor-square example and
/// its incidence-algebra double.
pub fn cmd_verify_paper_examples() -> Outcome {
    let echo = vec!["verify".into(), "paper-examples".into()];
    let inputs = Vec::new();

    let ut2 = ut(2);
    let square = match tensor_product(&ut2, &ut2) {
        Ok(t) => t,
        Err(e) => return error_outcome(echo, inputs, 2, e.to_string()),
    };
    let mut set = CheckSet::new();

    let base_exp = match pi_exponent(&ut2) {
        Ok(r) => r,
        Err(e) => return error_outcome(echo, inputs, exponent_exit(&e), e.to_string()),
    };
    set.number("exp(UT2)", 2, base_exp.value);

    let sq_exp = match pi_exponent(&square) {
        Ok(r) => r,
        Err(e) => return error_outcome(echo, inputs, exponent_exit(&e), e.to_string()),
    };
    set.number("exp(UT2⊗UT2)", 3, sq_exp.value);
    set.list("witness_sequence", &[1, 2, 4], &sq_exp.witness_sequence);
    set.list("component_dims", &[1, 1, 1, 1], &sq_exp.component_dims);
    set.number("radical_dim", 5, sq_exp.radical_dim);

    // powers of the radical: J² is a line, J³ vanishes
    let rep = match structure_report(&square) {
        Ok(r) => r,
        Err(e) => return error_outcome(echo, inputs, structure_exit(&e), e.to_string()),
    };
    let j = &rep.radical;
    let j2 = square.algebra.subspace_product(j, j);
    let j3 = square.algebra.subspace_product(&j2, j);
    set.number("radical_square_dim", 1, j2.dim());
    set.number("radical_cube_dim", 0, j3.dim());

    // the witness chain actually multiplies out to something nonzero
    set.flag(
        "witness_chain_product_nonzero",
        chain_product_nonzero(&square, &sq_exp.witness_chain),
    );

    // the incidence algebra of the diamond order tells the same story
    let diamond = match incidence(&[(1, 2), (1, 3), (2, 4), (3, 4)]) {
        Ok(a) => a,
        Err(e) => return error_outcome(echo, inputs, 2, e.to_string()),
    };
    let dia_exp = match pi_exponent(&diamond) {
        Ok(r) => r,
        Err(e) => return error_outcome(echo, inputs, exponent_exit(&e), e.to_string()),
    };
    set.number("incidence_dim", square.dim(), diamond.dim());
    set.number("incidence_radical_dim", sq_exp.radical_dim, dia_exp.radical_dim);
    set.list("incidence_component_dims", &sq_exp.component_dims, &dia_exp.component_dims);
    set.number("incidence_exponent", sq_exp.value, dia_exp.value);
    set.list("incidence_witness_sequence", &sq_exp.witness_sequence, &dia_exp.witness_sequence);
    set.strings(
        "incidence_witness_chain",
        &["e11", "e12", "e22", "e24", "e44"],
        &dia_exp.witness_chain,
    );
    set.flag(
        "incidence_chain_product_nonzero",
        chain_product_nonzero(&diamond, &dia_exp.witness_chain),
    );

    let exit = if set.all_hold { 0 } else { 1 };
    let results = json!({ "checks": set.checks, "holds": set.all_hold });
    Outcome {
        report: Report::new(echo, inputs, exit, results),
        exit,
    }
}

fn chain_product_nonzero(sa: &StructuredAlgebra, chain: &[String]) -> bool {
    let mut prod: Option<piexp_core::sparse::SparseVec> = None;
    for label in chain {
        let Some(idx) = sa.algebra.labels().iter().position(|l| l == label) else {
            return false;
        };
        let v = piexp_core::sparse::sv_unit(idx);
        prod = Some(match prod {
            None => v,
            Some(p) => sa.algebra.mul_sparse(&p, &v),
        });
    }
    prod.is_some_and(|p| !p.is_empty())
}
