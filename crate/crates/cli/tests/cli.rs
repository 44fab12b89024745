use std::path::PathBuf;
use std::process::Command;

use eqfib_cli::format::{parse, print, ParseError};
use eqfib_cli::pipeline::{run, Manifest, ManifestError, Subject};
use eqfib_cli::report::{Stage, Status};
use eqfib_cli::samples;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(golden(name)).unwrap()
}

/// Compare against a golden file; `UPDATE_GOLDEN=1` rewrites it instead.
fn assert_golden(name: &str, actual: &str) {
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(golden(name), actual).unwrap();
        return;
    }
    assert_eq!(
        read(name),
        actual,
        "{name} is out of date; rerun with UPDATE_GOLDEN=1"
    );
}

fn explicit(name: &str) -> Subject {
    Subject::Explicit {
        label: name.into(),
        doc: parse(&read(name)).unwrap(),
    }
}

fn eqfib() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eqfib"))
}

#[test]
fn shipped_documents_match_their_generators() {
    let codomain =
        samples::codomain_document(&samples::named_base("walking_arrow").unwrap(), 10_000).unwrap();
    assert_golden("walking_arrow_codomain.fcat", &print(&codomain));
    assert_golden(
        "mutant_no_diagonal_lift.fcat",
        &print(&samples::mutant_document()),
    );
    assert_golden("frobenius.fcat", &print(&samples::frobenius_document()));
    assert_golden(
        "groupoids.family",
        &print(&samples::standard_family_document()),
    );
}

#[test]
fn printing_round_trips() {
    for name in [
        "walking_arrow_codomain.fcat",
        "mutant_no_diagonal_lift.fcat",
        "frobenius.fcat",
        "groupoids.family",
    ] {
        let text = read(name);
        let doc = parse(&text).unwrap();
        assert_eq!(print(&doc), text, "{name}");
        assert_eq!(parse(&print(&doc)).unwrap(), doc);
    }
}

#[test]
fn dangling_references_are_reported_with_their_line() {
    let text = "category c\nobject a\nmorphism f : a -> b\n";
    match parse(text) {
        Err(ParseError::DanglingReference { line, name, .. }) => {
            assert_eq!(line, 3);
            assert_eq!(name, "b");
        }
        other => panic!("expected a dangling reference, got {other:?}"),
    }
}

#[test]
fn explicit_reports_match_goldens() {
    for name in [
        "walking_arrow_codomain",
        "mutant_no_diagonal_lift",
        "frobenius",
    ] {
        let out = run(&explicit(&format!("{name}.fcat")), &Manifest::default());
        assert_golden(&format!("{name}.report"), &out.report.render(false));
    }
    let out = run(
        &Subject::Codomain {
            base: samples::named_base("walking_arrow").unwrap(),
        },
        &Manifest::default(),
    );
    assert_golden(
        "walking_arrow_codomain.twocat",
        out.twocat.as_deref().unwrap(),
    );
}

#[test]
fn codomain_instances_pass_with_trivial_homotopies() {
    for name in [
        "terminal",
        "walking_arrow",
        "chain3",
        "square_lattice",
        "twin_top",
    ] {
        let out = run(
            &Subject::Codomain {
                base: samples::named_base(name).unwrap(),
            },
            &Manifest::default(),
        );
        assert!(out.report.passed(), "{name}:\n{}", out.report.render(false));
        let verify = out.report.verdict(Stage::Verify).unwrap();
        let triv = verify
            .checks
            .iter()
            .find(|c| c.law == "homotopies are identities")
            .unwrap();
        assert!(triv.passed && !triv.informational);
        assert_eq!(
            out.report.verdict(Stage::Correspond).unwrap().status,
            Status::Skip
        );
    }
}

#[test]
fn codomain_twocat_has_only_identity_cells() {
    let out = run(
        &Subject::Codomain {
            base: samples::named_base("square_lattice").unwrap(),
        },
        &Manifest::default(),
    );
    let twocat = out.twocat.unwrap();
    let cells: Vec<&str> = twocat.lines().filter(|l| l.starts_with("cell ")).collect();
    assert!(!cells.is_empty());
    assert!(cells.iter().all(|l| l.ends_with(" identity")));
}

#[test]
fn non_lex_bases_fail_at_validate() {
    let out = run(
        &Subject::Codomain {
            base: samples::named_base("finset2").unwrap(),
        },
        &Manifest::default(),
    );
    let v = out.report.verdict(Stage::Validate).unwrap();
    assert_eq!(v.error.as_deref(), Some("NoFiniteLimits"));
    assert_eq!(out.report.exit_code(), 1);
    assert!(out.report.verdict(Stage::Wedgeq).is_none());
}

#[test]
fn the_mutant_fails_at_validate() {
    let out = run(
        &explicit("mutant_no_diagonal_lift.fcat"),
        &Manifest::default(),
    );
    let v = out.report.verdict(Stage::Validate).unwrap();
    assert_eq!(v.status, Status::Fail);
    assert_eq!(v.error.as_deref(), Some("MissingIdentity"));
    assert!(v.witness[0].contains("id_1"));
}

#[test]
fn frobenius_counterexample_passes_with_a_note() {
    let out = run(&explicit("frobenius.fcat"), &Manifest::default());
    assert!(out.report.passed());
    let wq = out.report.verdict(Stage::Wedgeq).unwrap();
    let note = wq.checks.iter().find(|c| c.informational).unwrap();
    assert!(!note.passed);
    assert_eq!(note.failure.as_deref(), Some("p1<=r1 against rm"));
}

#[test]
fn subobject_instances_pass() {
    for k in 0..=2 {
        let out = run(&Subject::Subobject { k }, &Manifest::default());
        assert!(
            out.report.passed(),
            "k = {k}:\n{}",
            out.report.render(false)
        );
    }
}

#[test]
fn groupoid_family_recovers_centers() {
    let doc = parse(&read("groupoids.family")).unwrap();
    let out = run(
        &Subject::Groupoids {
            label: "standard".into(),
            doc,
        },
        &Manifest::default(),
    );
    assert!(out.report.passed(), "{}", out.report.render(false));
    let c = out.report.verdict(Stage::Correspond).unwrap();
    assert_eq!(c.get("automorphisms_of_identity Z2"), Some("2"));
    assert_eq!(c.get("automorphisms_of_identity S3"), Some("1"));
    assert_eq!(c.get("automorphisms_of_identity Z2xZ2"), Some("4"));
    let twocat = out.twocat.unwrap();
    // The identity of BZ2 sends the generator to itself.
    let id = "Z2->Z2[*|e,g1]";
    let at_id = twocat
        .lines()
        .filter(|l| l.starts_with("cell ") && l.contains(&format!(" {id} => {id} ")))
        .count();
    assert_eq!(at_id, 2);
}

#[test]
fn reports_are_identical_sequential_and_parallel() {
    let subject = Subject::Subobject { k: 2 };
    let par = run(&subject, &Manifest::default()).report.render(false);
    eqfib_core::exec::set_sequential(true);
    let seq = run(&subject, &Manifest::default()).report.render(false);
    eqfib_core::exec::set_sequential(false);
    assert_eq!(par, seq);
}

#[test]
fn seeds_do_not_change_verdicts() {
    let base = samples::named_base("square_lattice").unwrap();
    let plain = run(
        &Subject::Codomain { base: base.clone() },
        &Manifest::default(),
    )
    .report;
    for seed in [1, 2] {
        let m = Manifest {
            seed: Some(seed),
            ..Manifest::default()
        };
        let seeded = run(&Subject::Codomain { base: base.clone() }, &m).report;
        assert!(seeded.passed());
        for (a, b) in plain.verdicts.iter().zip(&seeded.verdicts) {
            assert_eq!(a.status, b.status, "{}", a.stage);
        }
    }
}

#[test]
fn cell_budget_gives_exit_three() {
    let m = Manifest {
        budget_cells: 2,
        ..Manifest::default()
    };
    let out = run(
        &Subject::Codomain {
            base: samples::named_base("chain3").unwrap(),
        },
        &m,
    );
    assert_eq!(out.report.exit_code(), 3);
    assert_eq!(
        out.report
            .verdict(Stage::Synthesize)
            .unwrap()
            .error
            .as_deref(),
        Some("BudgetExceeded")
    );
}

#[test]
fn stage_prefixes() {
    assert_eq!(
        Manifest::parse_stages("wedge").unwrap(),
        vec![Stage::Validate, Stage::Analyze, Stage::Wedge]
    );
    assert_eq!(Manifest::parse_stages("all").unwrap().len(), 7);
    assert!(matches!(
        Manifest::parse_stages("validate,wedge"),
        Err(ManifestError::NotAPrefix(_))
    ));
    assert!(matches!(
        Manifest::parse_stages("lint"),
        Err(ManifestError::UnknownStage(_))
    ));
    let m = Manifest {
        stages: Manifest::parse_stages("analyze").unwrap(),
        ..Manifest::default()
    };
    let out = run(&explicit("walking_arrow_codomain.fcat"), &m);
    assert_eq!(out.report.verdicts.len(), 2);
}

#[test]
fn binary_exit_codes() {
    let st = eqfib()
        .args(["run"])
        .arg(golden("walking_arrow_codomain.fcat"))
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(st.stdout).unwrap(),
        read("walking_arrow_codomain.report")
    );
    let st = eqfib()
        .args(["run"])
        .arg(golden("mutant_no_diagonal_lift.fcat"))
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));
    let st = eqfib()
        .args(["instance", "codomain", "chain3", "--budget-cells", "2"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(3));
    let st = eqfib()
        .args(["instance", "subobject", "--k", "1", "--stages", "bogus"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("eqfib-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.fcat");
    std::fs::write(&bad, "category c\nobject a\nmorphism f a -> a\n").unwrap();
    let st = eqfib().arg("run").arg(&bad).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert!(String::from_utf8(st.stderr).unwrap().contains("line 3"));
    let st = eqfib()
        .arg("print")
        .arg(golden("frobenius.fcat"))
        .output()
        .unwrap();
    assert_eq!(
        String::from_utf8(st.stdout).unwrap(),
        read("frobenius.fcat")
    );
    let st = eqfib()
        .args(["instance", "codomain", "walking_arrow", "--emit", "dot"])
        .output()
        .unwrap();
    assert!(String::from_utf8(st.stdout).unwrap().starts_with("digraph"));
}
