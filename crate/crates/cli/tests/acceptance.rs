//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion.
//!
//! Criterion 2 cannot hold as stated (the finite-set skeleton has no product
//! `2×2`, and a mutant of a posetal fibration cannot reach the diagonal-lift
//! check); it is reported as FAIL and the test only asserts that it fails for
//! exactly those reasons.

use std::path::PathBuf;

use eqfib_cli::format::{parse, Document};
use eqfib_cli::pipeline::{run, Manifest, RunOutput, Subject};
use eqfib_cli::report::{Report, Stage, Status};
use eqfib_core::fincat::{is_pullback_square, validate_category, zoo, FinCategory, PullbackSquare};
use eqfib_core::instances::{build_codomain, codomain_bases, codomain_prefibration, InstanceError};

const SEED: u64 = 1;

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(p).unwrap()
}

fn family_doc() -> Document {
    parse(&golden("groupoids.family")).unwrap()
}

/// Sum of instances over the named checks of `stage`; every one must be
/// present, required and passing.
fn laws(r: &Report, stage: Stage, names: &[&str]) -> Result<u64, String> {
    let v = r
        .verdict(stage)
        .ok_or_else(|| format!("{}: no {stage} stage", r.subject))?;
    let mut total = 0;
    for &n in names {
        let c = v
            .checks
            .iter()
            .find(|c| c.law == n)
            .ok_or_else(|| format!("{}: {stage} lacks `{n}`", r.subject))?;
        if !c.passed {
            return Err(format!(
                "{}: `{n}` fails: {}",
                r.subject,
                c.failure.clone().unwrap_or_default()
            ));
        }
        if c.informational {
            return Err(format!("{}: `{n}` is only informational", r.subject));
        }
        total += c.instances;
    }
    Ok(total)
}

fn over<'a>(
    reports: impl IntoIterator<Item = &'a Report>,
    stage: Stage,
    names: &[&str],
) -> Result<u64, String> {
    reports.into_iter().map(|r| laws(r, stage, names)).sum()
}

fn kernel_soundness() -> Result<String, String> {
    let cats = [
        zoo::finset_skeleton(2),
        zoo::walking_arrow(),
        zoo::chain(3),
        zoo::square_lattice(),
    ];
    let mut squares = 0;
    for c in &cats {
        if let Some(t) = c.associativity_failure() {
            return Err(format!("{} not associative at {t:?}", c.name()));
        }
        if let Some(t) = c.identity_failure() {
            return Err(format!("{} not unital at {t:?}", c.name()));
        }
        validate_category(&c.to_raw()).map_err(|e| format!("{}: {e}", c.name()))?;
        let (arrow, fib) = codomain_prefibration(c, 1 << 20).map_err(|e| e.to_string())?;
        let t = &arrow.cat;
        for m in t.morphisms() {
            let sq = PullbackSquare {
                p1: arrow.top(m),
                p2: arrow.arrow(t.src(m)),
                f: arrow.arrow(t.tgt(m)),
                g: arrow.bottom(m),
            };
            if is_pullback_square(c, &sq) != fib.is_cartesian(m) {
                return Err(format!("{}: square {} disagrees", c.name(), t.mor_name(m)));
            }
            squares += 1;
        }
    }
    Ok(format!("4 categories, {squares} squares agree"))
}

/// Both halves are checked; the expected outcome of each is recorded so a
/// change in behavior is noticed.
fn wedgeq_detection() -> (Result<String, String>, bool) {
    let finset = match build_codomain(&zoo::finset_skeleton(2)) {
        Ok(_) => Ok("finset2 passes".to_string()),
        Err(InstanceError::NoFiniteLimits(e)) => Err(format!("finset2 is not lex ({e})")),
        Err(e) => Err(format!("finset2: {e}")),
    };
    let doc = parse(&golden("mutant_no_diagonal_lift.fcat")).unwrap();
    let out = run(
        &Subject::Explicit {
            label: "mutant".into(),
            doc,
        },
        &Manifest::default(),
    );
    let failed_at = out
        .report
        .verdicts
        .iter()
        .find(|v| v.status == Status::Fail);
    let mutant = match failed_at {
        Some(v) if v.stage == Stage::Wedgeq && v.error.as_deref() == Some("NoDiagonalLift") => Ok(
            format!("mutant fails with NoDiagonalLift: {}", v.witness.join("; ")),
        ),
        Some(v) => Err(format!(
            "mutant fails at {} with {}",
            v.stage,
            v.error.clone().unwrap_or_default()
        )),
        None => Err("mutant passes".into()),
    };
    let expected = matches!(&finset, Err(s) if s.starts_with("finset2 is not lex"))
        && matches!(&mutant, Err(s) if s == "mutant fails at validate with MissingIdentity");
    let result = match (finset, mutant) {
        (Ok(a), Ok(b)) => Ok(format!("{a}; {b}")),
        (a, b) => Err(format!(
            "{}; {}",
            a.unwrap_or_else(|e| e),
            b.unwrap_or_else(|e| e)
        )),
    };
    (result, expected)
}

fn discrete(codomain: &[RunOutput]) -> Result<String, String> {
    let mut homs = 0;
    for out in codomain {
        laws(&out.report, Stage::Verify, &["homotopies are identities"])?;
        let twocat = out.twocat.as_deref().ok_or("no 2-category")?;
        for l in twocat.lines().filter(|l| l.starts_with("hom ")) {
            let w: Vec<&str> = l.split(' ').collect();
            if w[4] != w[6] {
                return Err(format!("{}: {l}", out.report.subject));
            }
            homs += 1;
        }
        if let Some(l) = twocat
            .lines()
            .find(|l| l.starts_with("cell ") && !l.ends_with(" identity"))
        {
            return Err(format!("{}: {l}", out.report.subject));
        }
    }
    Ok(format!(
        "{} instances, {homs} hom-categories discrete",
        codomain.len()
    ))
}

const AXIOMS: [&str; 9] = [
    "base composition is associative and unital",
    "hom-category identities",
    "hom-category associativity",
    "hom-categories are groupoids",
    "horizontal composite endpoints",
    "horizontal associativity",
    "horizontal units",
    "horizontal composite of identities",
    "interchange",
];

const PSF: [&str; 7] = [
    "comparison coherence squares",
    "unit triangles",
    "identity homotopies act as identities",
    "vertical composites act as composites",
    "inverses act as inverses",
    "actions are natural",
    "comparison maps are natural in 2-cells",
];

const PRODUCTS: [&str; 3] = [
    "2-products on morphisms",
    "2-products on homotopies",
    "2-terminal object",
];

const TRANSPORT: [&str; 4] = [
    "transport is a bijection on homotopies",
    "transport respects identities, inverses and vertical composites",
    "transport respects horizontal composites",
    "reseeded verdicts agree",
];

const MODEL: [&str; 3] = [
    "mapping-path factorizations are (injective equivalence, isofibration)",
    "pullbacks of equivalences along isofibrations are equivalences",
    "homotopy classes over f match left-homotopy classes out of the pushforward",
];

/// Natural automorphisms of the identity functor, by trying every choice of
/// one endomorphism per object.
fn center_size(g: &FinCategory) -> u64 {
    let objs: Vec<_> = g.objects().collect();
    let choices: Vec<&[u32]> = objs.iter().map(|&a| g.hom(a, a)).collect();
    let mut idx = vec![0usize; objs.len()];
    let mut count = 0;
    loop {
        let comp = |a: u32| {
            choices[objs.iter().position(|&o| o == a).unwrap()]
                [idx[objs.iter().position(|&o| o == a).unwrap()]]
        };
        let natural = g
            .morphisms()
            .all(|m| g.compose(comp(g.tgt(m)), m) == g.compose(m, comp(g.src(m))));
        let invertible = objs.iter().all(|&a| g.is_isomorphism(comp(a)));
        if natural && invertible {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return count;
            }
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn correspondence(gpd: &Report) -> Result<String, String> {
    laws(
        gpd,
        Stage::Correspond,
        &[
            "2-cells biject with natural isomorphisms",
            "identity 2-cells are identity transformations",
            "vertical composition is composition of components",
            "horizontal composition is whiskered composition",
            "2-cells at identities count natural automorphisms",
        ],
    )?;
    let synth = gpd.verdict(Stage::Synthesize).unwrap();
    let corr = gpd.verdict(Stage::Correspond).unwrap();
    let mut seen = Vec::new();
    for block in family_doc().categories() {
        let g = validate_category(&block.raw).map_err(|e| e.to_string())?;
        let brute = center_size(&g).to_string();
        let name = g.name();
        for (v, key) in [
            (synth, "identity_cells"),
            (corr, "automorphisms_of_identity"),
        ] {
            let got = v.get(&format!("{key} {name}"));
            if got != Some(brute.as_str()) {
                return Err(format!("{name}: {key} {got:?}, brute force {brute}"));
            }
        }
        seen.push(format!("{name}={brute}"));
    }
    for (name, want) in [("Z2", "2"), ("S3", "1")] {
        if corr.get(&format!("automorphisms_of_identity {name}")) != Some(want) {
            return Err(format!("|2-cells(id,id)| at {name} is not {want}"));
        }
    }
    Ok(format!("centers {}", seen.join(" ")))
}

fn line(n: usize, name: &str, r: &Result<String, String>) -> bool {
    match r {
        Ok(d) => println!("criterion {n} {name}: PASS (tolerance Exact) {d}"),
        Err(d) => println!("criterion {n} {name}: FAIL (tolerance Exact) {d}"),
    }
    r.is_ok()
}

fn main() {
    let seeded = Manifest {
        seed: Some(SEED),
        ..Manifest::default()
    };
    let codomain: Vec<RunOutput> = codomain_bases()
        .into_iter()
        .map(|base| run(&Subject::Codomain { base }, &seeded))
        .collect();
    let gpd = run(
        &Subject::Groupoids {
            label: "standard".into(),
            doc: family_doc(),
        },
        &seeded,
    );
    for out in codomain.iter().chain([&gpd]) {
        if out.report.verdict(Stage::Synthesize).map(|v| v.status) != Some(Status::Pass) {
            panic!("{}", out.report.render(false));
        }
    }
    let all: Vec<&Report> = codomain
        .iter()
        .map(|o| &o.report)
        .chain([&gpd.report])
        .collect();
    let counted = |names: &[&str]| {
        over(all.iter().copied(), Stage::Verify, names)
            .map(|n| format!("{n} instances on {} subjects", all.len()))
    };

    let (c2, c2_expected) = wedgeq_detection();
    let results = [
        ("kernel soundness", kernel_soundness()),
        ("wedgeq detection", c2),
        ("discrete synthesis", discrete(&codomain)),
        ("2-category laws", counted(&AXIOMS)),
        ("pseudo-functor coherence", counted(&PSF)),
        ("2-products", counted(&PRODUCTS)),
        ("groupoid correspondence", correspondence(&gpd.report)),
        (
            "canonicity",
            counted(&TRANSPORT).map(|s| format!("seed {SEED}, {s}")),
        ),
        (
            "model-structure spot checks",
            laws(&gpd.report, Stage::Analyze, &MODEL).map(|n| format!("{n} instances")),
        ),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, r)) in results.iter().enumerate() {
        let ok = line(i + 1, name, r);
        if i == 1 {
            if !c2_expected {
                unexpected.push(format!("criterion 2 changed: {r:?}"));
            }
        } else if !ok {
            unexpected.push(format!("criterion {}: {r:?}", i + 1));
        }
    }
    if !unexpected.is_empty() {
        eprintln!("{unexpected:#?}");
        std::process::exit(1);
    }
}
