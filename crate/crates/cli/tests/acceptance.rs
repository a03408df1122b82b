//! The acceptance gate: eight criteria, each printing exactly one
//! `ACCEPTANCE n (name): PASS|FAIL` line (run with `-- --nocapture` to see
//! them).  Time budgets are pinned next to each criterion and enforced.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use common::{
    complement_postconditions, corpus, exhaustive_admissible, radical_postconditions,
    random_conjugate,
};
use piexp_core::construct::{
    field, full_matrix, full_matrix_graded, grassmann_truncated, matrix_algebra, tensor_product,
    ut, ut_with_reflection, with_grading, zero_algebra,
};
use piexp_core::exponent::{admissible_max, pi_exponent};
use piexp_core::identities::{
    codimension_exact, codimension_sampled, containment_at_degree, default_sample_count,
    is_identity, parse_polynomial, regev_bound_check, IdentityOutcome, Polynomial, DEFAULT_BUDGET,
};
use piexp_core::structure::{action_invariant, is_action_simple, structure_report, Simplicity};
use piexp_core::structured::{ActionSet, GroupSpec, StructuredAlgebra};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

fn criterion(n: u32, name: &str, budget: Duration, body: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let verdict = match &outcome {
        Ok(()) if elapsed <= budget => "PASS",
        _ => "FAIL",
    };
    println!(
        "ACCEPTANCE {n} ({name}): {verdict} [{:.2}s of {:.0}s budget]",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    if let Err(e) = outcome {
        panic!("criterion {n} ({name}): {e}");
    }
    assert!(
        elapsed <= budget,
        "criterion {n} ({name}) exceeded its {:.0}s budget: {:.2}s",
        budget.as_secs_f64(),
        elapsed.as_secs_f64()
    );
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_piexp"))
        .args(args)
        .output()
        .expect("the binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// Runs with `--format json` prepended and parses the report.
fn run_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, stdout, stderr) = run(&full);
    let report: Value = serde_json::from_str(&stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}); stderr: {stderr}"));
    (code, report)
}

fn write_doc(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).expect("fixture writes");
    path
}

fn expect(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

#[test]
fn acceptance_1_paper_examples() {
    criterion(1, "paper example suite", Duration::from_secs(10), || {
        let (code, report) = run_json(&["verify", "paper-examples"]);
        expect(code == 0, format!("exit code {code}, want 0"))?;
        expect(
            report["status"] == "ok",
            format!("status {}", report["status"]),
        )?;
        let results = &report["results"];
        expect(results["holds"] == true, "not all checks hold")?;
        let checks = results["checks"].as_array().ok_or("checks missing")?;
        expect(checks.len() == 15, format!("{} checks, want 15", checks.len()))?;
        for c in checks {
            expect(
                c["holds"] == true,
                format!("check {} failed: got {}", c["check"], c["got"]),
            )?;
        }
        let got = |name: &str| {
            checks
                .iter()
                .find(|c| c["check"] == name)
                .map(|c| c["got"].clone())
                .unwrap_or(Value::Null)
        };
        expect(got("exp(UT2)") == 2, "exp(UT2) != 2")?;
        expect(got("exp(UT2⊗UT2)") == 3, "exp(UT2⊗UT2) != 3")?;
        expect(
            got("witness_sequence") == serde_json::json!([1, 2, 4]),
            "witness sequence is not (1,2,4)",
        )?;
        expect(
            got("incidence_witness_chain") == serde_json::json!(["e11", "e12", "e22", "e24", "e44"]),
            "incidence chain differs",
        )?;
        Ok(())
    });
}

#[test]
fn acceptance_2_main_theorem() {
    criterion(2, "matrix extension theorem", Duration::from_secs(300), || {
        let dir = tempfile::tempdir().expect("tempdir");
        let bases: [(&str, &str, usize); 6] = [
            ("field.json", r#"{"name":"field","family":"field"}"#, 1),
            ("ut2.json", r#"{"name":"ut2","family":{"ut":2}}"#, 2),
            ("ut3.json", r#"{"name":"ut3","family":{"ut":3}}"#, 3),
            ("m2.json", r#"{"name":"m2","family":{"full_matrix":2}}"#, 4),
            (
                "t22.json",
                r#"{"name":"t22","family":{"tensor":[{"ut":2},{"ut":2}]}}"#,
                3,
            ),
            ("zero2.json", r#"{"name":"zero2","family":{"zero":2}}"#, 0),
        ];
        for (file, body, base_exp) in bases {
            let path = write_doc(dir.path(), file, body);
            let (code, report) = run_json(&[
                "verify",
                "main-theorem",
                "--base",
                path.to_str().unwrap(),
                "--nmax",
                "3",
            ]);
            expect(code == 0, format!("{file}: exit {code}"))?;
            expect(
                report["results"]["holds"] == true,
                format!("{file}: theorem rows do not all hold"),
            )?;
            let rows = report["results"]["rows"].as_array().ok_or("rows missing")?;
            expect(rows.len() == 3, format!("{file}: {} rows", rows.len()))?;
            for (i, row) in rows.iter().enumerate() {
                let n = i + 1;
                expect(
                    row["skipped"] == false,
                    format!("{file}: n={n} skipped below the dimension cap"),
                )?;
                let want = (n * n * base_exp) as i64;
                expect(
                    row["expected"].as_i64() == Some(want),
                    format!("{file}: n={n} expected {} want {want}", row["expected"]),
                )?;
                expect(
                    row["computed"].as_i64() == Some(want),
                    format!("{file}: n={n} computed {} want {want}", row["computed"]),
                )?;
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_3_generalized_tensor_theorem() {
    criterion(3, "graded and involutive tensor theorem", Duration::from_secs(120), || {
        let dir = tempfile::tempdir().expect("tempdir");
        let gut2 = write_doc(
            dir.path(),
            "gut2.json",
            r#"{"name":"gut2","family":{"graded":{"base":{"ut":2},"group":[2],"degrees":[[0],[1],[0]]}}}"#,
        );
        let gm2 = write_doc(
            dir.path(),
            "gm2.json",
            r#"{"name":"gm2","family":{"graded_matrix":{"n":2,"group":[2],"degrees":[[0],[1]]}}}"#,
        );
        let xut2 = write_doc(
            dir.path(),
            "xut2.json",
            r#"{"name":"xut2","family":{"exchange":{"ut":2}}}"#,
        );
        let tm2 = write_doc(
            dir.path(),
            "tm2.json",
            r#"{"name":"tm2","family":{"transpose_matrix":2}}"#,
        );
        let instances = [
            ("graded", &gut2, &gm2, (2i64, 4i64, 8i64)),
            ("involutive", &xut2, &tm2, (4i64, 4i64, 16i64)),
        ];
        for (kind, a, s, (factor, sdim, product)) in instances {
            let (code, report) = run_json(&[
                "verify",
                "tensor-theorem",
                "--a",
                a.to_str().unwrap(),
                "--s",
                s.to_str().unwrap(),
            ]);
            expect(code == 0, format!("{kind}: exit {code}"))?;
            let r = &report["results"];
            expect(r["holds"] == true, format!("{kind}: equality fails"))?;
            expect(
                r["factor_exponent"].as_i64() == Some(factor),
                format!("{kind}: factor {}", r["factor_exponent"]),
            )?;
            expect(
                r["simple_dim"].as_i64() == Some(sdim),
                format!("{kind}: simple dim {}", r["simple_dim"]),
            )?;
            expect(
                r["product_exponent"].as_i64() == Some(product),
                format!("{kind}: product {}", r["product_exponent"]),
            )?;
        }
        Ok(())
    });
}

#[test]
fn acceptance_4_tensor_simplicity() {
    criterion(4, "tensor simplicity certificates", Duration::from_secs(60), || {
        let gm2 = full_matrix_graded(2, GroupSpec::z2(), vec![vec![0], vec![1]])
            .map_err(|e| e.to_string())?;
        let t = tensor_product(&gm2, &full_matrix(2)).map_err(|e| e.to_string())?;
        expect(t.dim() == 16, format!("tensor dim {}", t.dim()))?;
        let acts = ActionSet::for_structure(&t);
        expect(
            matches!(is_action_simple(&t.algebra, &acts), Simplicity::Simple),
            "the graded-by-plain matrix tensor must certify simple",
        )?;

        let graded_ut2 = with_grading(&ut(2), GroupSpec::z2(), vec![vec![0], vec![1], vec![0]])
            .map_err(|e| e.to_string())?;
        let reflected = ut_with_reflection(2).map_err(|e| e.to_string())?;
        for (kind, sa) in [
            ("trivial", ut(2)),
            ("graded", graded_ut2),
            ("involutive", reflected),
        ] {
            let acts = ActionSet::for_structure(&sa);
            match is_action_simple(&sa.algebra, &acts) {
                Simplicity::ProperIdeal(w) => {
                    expect(
                        w.dim() > 0 && w.dim() < sa.dim(),
                        format!("ut(2)/{kind}: witness dim {}", w.dim()),
                    )?;
                    expect(
                        common::is_ideal(&sa.algebra, &w),
                        format!("ut(2)/{kind}: witness is not an ideal"),
                    )?;
                    expect(
                        action_invariant(&w, &acts).is_ok(),
                        format!("ut(2)/{kind}: witness is not stable"),
                    )?;
                }
                other => {
                    return Err(format!("ut(2)/{kind}: expected a witness ideal, got {other:?}"))
                }
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_5_codimension_table() {
    criterion(5, "codimension table", Duration::from_secs(300), || {
        let mut instances: Vec<(String, StructuredAlgebra, usize, usize)> = Vec::new();
        for m in 1..=6 {
            instances.push((format!("field m={m}"), field(), m, 1));
        }
        for m in 2..=5 {
            instances.push((format!("zero(3) m={m}"), zero_algebra(3), m, 0));
        }
        for (m, c) in [(2, 2), (3, 6), (4, 18)] {
            instances.push((format!("ut(2) m={m}"), ut(2), m, c));
        }
        for m in 2..=4usize {
            let plain = StructuredAlgebra::plain(grassmann_truncated(m).algebra);
            instances.push((format!("grassmann({m}) m={m}"), plain, m, 1 << (m - 1)));
        }
        for (name, sa, m, want) in &instances {
            let exact = codimension_exact(sa, *m, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            expect(
                exact.value == *want,
                format!("{name}: exact {} want {want}", exact.value),
            )?;
            // a third of the default sampling effort is already far past the
            // rank ceiling here; capped to keep the whole table under budget
            let samples = default_sample_count(sa, *m).min(32);
            for seed in [1u64, 2, 3] {
                let lower =
                    codimension_sampled(sa, *m, samples, seed).map_err(|e| e.to_string())?;
                expect(
                    lower.value == *want,
                    format!("{name}: sampled(seed {seed}) {} want {want}", lower.value),
                )?;
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_6_identities_and_containment() {
    criterion(6, "identities and containment", Duration::from_secs(300), || {
        let m2 = full_matrix(2);
        match is_identity(&m2, &Polynomial::standard(4)).map_err(|e| e.to_string())? {
            IdentityOutcome::Holds => {}
            IdentityOutcome::Fails { tuple, value } => {
                return Err(format!("s4 fails on 2x2 matrices at {tuple:?} = {value}"))
            }
        }
        let p = parse_polynomial("x1x2x3x4 - x2x1x3x4 - x1x2x4x3 + x2x1x4x3")
            .map_err(|e| e.to_string())?;
        expect(
            matches!(is_identity(&ut(2), &p), Ok(IdentityOutcome::Holds)),
            "[x1,x2][x3,x4] must vanish on ut(2)",
        )?;
        let big = matrix_algebra(&ut(2), 2);
        expect(
            matches!(is_identity(&big, &p), Ok(IdentityOutcome::Fails { .. })),
            "[x1,x2][x3,x4] must fail on 2x2 matrices over ut(2)",
        )?;
        for m in 1..=3 {
            let rep = containment_at_degree(&big, &ut(2), m, DEFAULT_BUDGET)
                .map_err(|e| e.to_string())?;
            expect(
                rep.contained,
                format!("degree-{m} identities of the extension must hold in ut(2)"),
            )?;
        }
        let rev = containment_at_degree(&ut(2), &big, 4, DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?;
        expect(!rev.contained, "a degree-4 identity of ut(2) must fail upstairs")?;
        let (witness, tuple, value) = rev.counterexample.ok_or("counterexample missing")?;
        match is_identity(&big, &witness).map_err(|e| e.to_string())? {
            IdentityOutcome::Fails { .. } => {}
            IdentityOutcome::Holds => {
                return Err(format!(
                    "counterexample {} at {tuple:?} = {value} is not actually failing",
                    piexp_core::identities::render_polynomial(&witness)
                ))
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_7_regev_bound() {
    criterion(7, "codimension product bound", Duration::from_secs(120), || {
        for (name, b) in [("ut(2)", ut(2)), ("field", field())] {
            for m in 1..=3 {
                let rep = regev_bound_check(&ut(2), &b, m, DEFAULT_BUDGET)
                    .map_err(|e| e.to_string())?;
                expect(
                    rep.holds(),
                    format!(
                        "ut(2) x {name} at m={m}: product {} exceeds {}·{}",
                        rep.product, rep.left, rep.right
                    ),
                )?;
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_8_property_suites() {
    criterion(8, "property suites", Duration::from_secs(600), || {
        // radical postconditions on at least 20 randomly conjugated algebras
        let mut cases = 0usize;
        for (name, sa) in corpus(16) {
            for seed in [101u64, 202] {
                radical_postconditions(&name, &random_conjugate(&sa.algebra, seed));
                cases += 1;
            }
        }
        expect(cases >= 20, format!("only {cases} radical cases"))?;

        // complement closure under conjugation
        for (name, sa) in corpus(12) {
            complement_postconditions(&name, &random_conjugate(&sa.algebra, 303));
        }

        // pruned admissible search against brute force
        for (name, sa) in corpus(12) {
            let rep = structure_report(&sa).map_err(|e| format!("{name}: {e}"))?;
            let (value, _) = admissible_max(&sa.algebra, &rep.components, &rep.radical);
            let oracle = exhaustive_admissible(&sa.algebra, &rep.components, &rep.radical);
            expect(value == oracle, format!("{name}: search {value} oracle {oracle}"))?;
        }

        // exponent and codimension are basis invariants
        for (name, sa) in corpus(9) {
            let plain = StructuredAlgebra::plain(sa.algebra.clone());
            let exp0 = pi_exponent(&plain).map_err(|e| format!("{name}: {e}"))?.value;
            let c0 = codimension_exact(&plain, 2, DEFAULT_BUDGET)
                .map_err(|e| format!("{name}: {e}"))?
                .value;
            for seed in 1..=5u64 {
                let moved = StructuredAlgebra::plain(random_conjugate(&sa.algebra, seed));
                let exp1 = pi_exponent(&moved).map_err(|e| format!("{name}: {e}"))?.value;
                expect(exp0 == exp1, format!("{name} seed {seed}: exponent {exp0} -> {exp1}"))?;
                if sa.dim() <= 6 {
                    let c1 = codimension_exact(&moved, 2, DEFAULT_BUDGET)
                        .map_err(|e| format!("{name}: {e}"))?
                        .value;
                    expect(c0 == c1, format!("{name} seed {seed}: codim {c0} -> {c1}"))?;
                }
            }
        }

        // reports are byte-identical across thread counts
        let dir = tempfile::tempdir().expect("tempdir");
        let t22 = write_doc(
            dir.path(),
            "t22.json",
            r#"{"name":"t22","family":{"tensor":[{"ut":2},{"ut":2}]}}"#,
        );
        let file = t22.to_str().unwrap();
        for args in [
            vec!["--format", "json", "codim", file, "-m", "2", "--strategy", "sampled", "--seed", "7"],
            vec!["--format", "json", "codim", file, "-m", "2"],
            vec!["exponent", file],
        ] {
            let mut pinned = vec!["--threads", "1"];
            pinned.extend_from_slice(&args);
            let (code_a, out_a, _) = run(&pinned);
            let (code_b, out_b, _) = run(&args);
            expect(
                code_a == 0 && code_b == 0,
                format!("{args:?}: exits {code_a}/{code_b}"),
            )?;
            expect(out_a == out_b, format!("{args:?}: reports differ across thread counts"))?;
        }
        Ok(())
    });
}
