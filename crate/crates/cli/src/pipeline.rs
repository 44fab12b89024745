//! The staged pipeline: validate → analyze → wedge → wedgeq → synthesize →
//! verify → correspond, short-circuiting on the first failed stage.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use eqfib_core::choice::ChoiceOrder;
use eqfib_core::conformance::{check_conformance, ConformanceScope};
use eqfib_core::fibcore::{build_cleavage, Cleavage, FibError, Prefibration};
use eqfib_core::fincat::{
    check_finite_limits, is_pullback_square, validate_category_capped, ArrowCategory, FinCategory,
    FinFunctor, PullbackSquare, DEFAULT_MORPHISM_CAP,
};
use eqfib_core::gpd::{
    classical_correspondence, model_spot_checks, natural_isos, ConeSpec, GpdError, GpdFamily,
    GpdOracle, SpotCheckScope, DEFAULT_CLOSURE_BUDGET,
};
use eqfib_core::htpy::{
    check_two_products, cleavage_transport, synthesize, verify_axioms, verify_psf, Htpy, LawCheck,
    PsfScope, SynthError, SynthesizedTwoCategory,
};
use eqfib_core::instances::{
    codomain_prefibration, verify_codomain_triviality, InstanceError, SubobjectOracle,
    DEFAULT_ARROW_CAP,
};
use eqfib_core::oracle::{FibrationOracle, MaterializedOracle, OracleError};
use eqfib_core::wedgeq::{
    check_frobenius, check_wedge, check_wedgeq, FrobeniusInstance, WedgeCleavage, WedgeFailure,
    WedgeqCleavage, WedgeqFailure,
};

use crate::export::{export_dot, export_twocat, export_twocat_dot};
use crate::format::Document;
use crate::report::{Check, Report, Stage, Status, Verdict};

pub const DEFAULT_CELL_BUDGET: usize = 100_000;

/// Largest subobject instance accepted.
pub const MAX_SUBOBJECT_K: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    /// A prefix of [`Stage::ALL`].
    pub stages: Vec<Stage>,
    /// Size cap for categories, arrow categories and the groupoid closure.
    pub budget_morphisms: Option<usize>,
    pub budget_cells: usize,
    /// Rerun the structure choices under this seed and transport.
    pub seed: Option<u64>,
}

impl Default for Manifest {
    fn default() -> Self {
        Manifest {
            stages: Stage::ALL.to_vec(),
            budget_morphisms: None,
            budget_cells: DEFAULT_CELL_BUDGET,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ManifestError {
    #[error("unknown stage {0}")]
    UnknownStage(String),
    #[error("stages must be a prefix of validate,analyze,wedge,wedgeq,synthesize,verify,correspond; got {0}")]
    NotAPrefix(String),
}

impl Manifest {
    /// `all`, a single stage (everything up to it), or an explicit prefix.
    pub fn parse_stages(s: &str) -> Result<Vec<Stage>, ManifestError> {
        if s == "all" {
            return Ok(Stage::ALL.to_vec());
        }
        let named: Vec<Stage> = s
            .split(',')
            .map(|x| {
                Stage::from_name(x.trim())
                    .ok_or_else(|| ManifestError::UnknownStage(x.trim().into()))
            })
            .collect::<Result<_, _>>()?;
        if let [one] = named[..] {
            return Ok(Stage::ALL.into_iter().take_while(|&x| x <= one).collect());
        }
        if named[..] != Stage::ALL[..named.len().min(Stage::ALL.len())] {
            return Err(ManifestError::NotAPrefix(s.into()));
        }
        Ok(named)
    }
}

#[derive(Debug, Clone)]
pub enum Subject {
    /// A fibration given by tables; the document names its projection.
    Explicit { label: String, doc: Document },
    /// The codomain fibration of a finite category.
    Codomain { base: FinCategory },
    /// Subobjects of finite sets of size `0..=k`.
    Subobject { k: u32 },
    /// A FAMILY block and the groupoids and cones it references.
    Groupoids { label: String, doc: Document },
}

impl Subject {
    fn describe(&self) -> String {
        match self {
            Subject::Explicit { label, .. } => format!("explicit {label}"),
            Subject::Codomain { base } => format!("codomain {}", base.name()),
            Subject::Subobject { k } => format!("subobject {k}"),
            Subject::Groupoids { label, .. } => format!("groupoids {label}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub twocat: Option<String>,
    pub dot: Option<String>,
}

struct Runner<'m> {
    m: &'m Manifest,
    verdicts: Vec<Verdict>,
    stopped: bool,
    twocat: Option<String>,
    dot: Option<String>,
}

impl<'m> Runner<'m> {
    /// Run `body` if the stage is requested and nothing failed before it.
    fn stage<T>(&mut self, st: Stage, body: impl FnOnce(&mut Verdict) -> Option<T>) -> Option<T> {
        if self.stopped || !self.m.stages.contains(&st) {
            self.stopped = true;
            return None;
        }
        let mut v = Verdict::new(st);
        let t0 = Instant::now();
        let out = body(&mut v);
        v.time = Some(t0.elapsed());
        if v.status == Status::Fail || (out.is_none() && v.status != Status::Skip) {
            self.stopped = true;
        }
        self.verdicts.push(v);
        out
    }

    fn skip(&mut self, st: Stage, why: &str) {
        if !self.stopped && self.m.stages.contains(&st) {
            self.verdicts.push(Verdict::skip(st, why));
        }
    }
}

pub fn run(subject: &Subject, m: &Manifest) -> RunOutput {
    let mut r = Runner {
        m,
        verdicts: vec![],
        stopped: false,
        twocat: None,
        dot: None,
    };
    match subject {
        Subject::Explicit { doc, .. } => {
            let proj = r.stage(Stage::Validate, |v| validate_explicit(doc, m, v));
            if let Some(proj) = proj {
                r.dot = Some(export_dot(&proj.source));
                materialized(&mut r, proj, None);
            }
        }
        Subject::Codomain { base } => {
            r.dot = Some(export_dot(base));
            if let Some((arrow, proj)) = r.stage(Stage::Validate, |v| validate_codomain(base, m, v))
            {
                materialized(&mut r, proj, Some(arrow));
            }
        }
        Subject::Subobject { k } => subobject(&mut r, *k),
        Subject::Groupoids { doc, .. } => groupoids(&mut r, doc),
    }
    let report = Report {
        subject: subject.describe(),
        verdicts: r.verdicts,
    };
    RunOutput {
        report,
        twocat: r.twocat,
        dot: r.dot,
    }
}

fn size_cap(m: &Manifest) -> usize {
    m.budget_morphisms.unwrap_or(DEFAULT_MORPHISM_CAP)
}

fn category_checks(c: &FinCategory, v: &mut Verdict) {
    let pairs: u64 = c.morphisms().map(|f| c.out_of(c.tgt(f)).len() as u64).sum();
    let failure = c
        .associativity_failure()
        .map(|(h, g, f)| format!("{} . {} . {}", c.mor_name(h), c.mor_name(g), c.mor_name(f)))
        .or_else(|| {
            c.identity_failure()
                .map(|(i, f)| format!("{} and {}", c.mor_name(i), c.mor_name(f)))
        });
    v.check(Check::new(
        format!("{} is associative and unital", c.name()),
        pairs,
        failure,
    ));
}

fn cat_error(v: &mut Verdict, e: eqfib_core::fincat::CatError) {
    use eqfib_core::fincat::CatError as E;
    let kind = match &e {
        E::SizeCap { .. } => return v.budget(e.to_string()),
        E::MissingComposite { .. } => "MissingComposite",
        E::AssociativityViolation { .. } => "AssociativityViolation",
        E::IdentityViolation { .. } => "IdentityViolation",
        E::MissingIdentity(_) => "MissingIdentity",
        E::UnknownObject(_) | E::UnknownMorphism(_) => "DanglingReference",
        E::Duplicate(_) => "Duplicate",
        E::BadComposite { .. } => "BadComposite",
        E::ConflictingComposite { .. } => "ConflictingComposite",
        E::BadIdentity { .. } => "BadIdentity",
    };
    v.fail(kind, e.to_string());
}

/// Validate every category block; `None` after recording the failure.
fn validate_blocks(
    doc: &Document,
    m: &Manifest,
    v: &mut Verdict,
) -> Option<HashMap<String, Arc<FinCategory>>> {
    let mut cats = HashMap::new();
    for b in doc.categories() {
        match validate_category_capped(&b.raw, size_cap(m)) {
            Ok(c) => {
                category_checks(&c, v);
                if b.groupoid {
                    if let Some(f) = c.morphisms().find(|&f| !c.is_isomorphism(f)) {
                        v.fail(
                            "NotAGroupoid",
                            format!("{}: {} has no inverse", c.name(), c.mor_name(f)),
                        );
                        return None;
                    }
                }
                v.fact(
                    &format!("category {}", c.name()),
                    format!(
                        "{} objects {} morphisms",
                        c.num_objects(),
                        c.num_morphisms()
                    ),
                );
                cats.insert(b.raw.name.clone(), Arc::new(c));
            }
            Err(e) => {
                cat_error(v, e);
                return None;
            }
        }
    }
    Some(cats)
}

fn functor_from(
    cats: &HashMap<String, Arc<FinCategory>>,
    f: &crate::format::FunctorBlock,
    v: &mut Verdict,
) -> Option<FinFunctor> {
    match FinFunctor::from_names(
        f.name.clone(),
        cats[&f.source].clone(),
        cats[&f.target].clone(),
        &f.objs,
        &f.mors,
    ) {
        Ok(p) => Some(p),
        Err(e) => {
            v.fail("NotAFunctor", e.to_string());
            None
        }
    }
}

fn validate_explicit(doc: &Document, m: &Manifest, v: &mut Verdict) -> Option<FinFunctor> {
    let cats = validate_blocks(doc, m, v)?;
    let Some(fb) = doc.fibration() else {
        v.fail(
            "NoProjection",
            "the document has several functors and no `fibration` line",
        );
        return None;
    };
    let proj = functor_from(&cats, fb, v)?;
    v.check(Check::new(
        format!("{} is a functor", proj.name),
        proj.source.num_morphisms() as u64,
        None,
    ));
    Some(proj)
}

fn validate_codomain(
    base: &FinCategory,
    m: &Manifest,
    v: &mut Verdict,
) -> Option<(ArrowCategory, FinFunctor)> {
    category_checks(base, v);
    if v.status == Status::Fail {
        return None;
    }
    if let Err(e) = check_finite_limits(base) {
        v.fail("NoFiniteLimits", format!("{}: {e}", base.name()));
        return None;
    }
    match codomain_prefibration(base, m.budget_morphisms.unwrap_or(DEFAULT_ARROW_CAP)) {
        Ok((arrow, fib)) => {
            let t = &arrow.cat;
            v.fact(
                "total",
                format!(
                    "{} objects {} morphisms",
                    t.num_objects(),
                    t.num_morphisms()
                ),
            );
            Some((arrow, fib.proj.clone()))
        }
        Err(InstanceError::TooLarge { cap }) => {
            v.budget(format!(
                "arrow category of {} over {cap} morphisms",
                base.name()
            ));
            None
        }
        Err(e) => {
            v.fail("InstanceError", e.to_string());
            None
        }
    }
}

fn fib_error(v: &mut Verdict, e: FibError) {
    let kind = match &e {
        FibError::NotAFibration { .. } => "NotAFibration",
        FibError::NotAnOpFibration { .. } => "NotAnOpFibration",
        FibError::NoFactorization(_) => "NoFactorization",
        FibError::NonUniqueFactorization { .. } => "NonUniqueFactorization",
        FibError::Cat(_) | FibError::Functor(_) => "NotAFunctor",
        FibError::Precondition(_) => "Precondition",
    };
    v.fail(kind, e.to_string());
}

/// Stages for a fibration with materialized total category.
fn materialized(r: &mut Runner<'_>, proj: FinFunctor, arrow: Option<ArrowCategory>) {
    let Some((fib, cl)) = r.stage(Stage::Analyze, |v| analyze(proj, arrow.as_ref(), v)) else {
        return;
    };
    let Some(wc) = r.stage(Stage::Wedge, |v| wedge(&fib, &cl, v)) else {
        return;
    };
    let Some(wq) = r.stage(Stage::Wedgeq, |v| wedgeq(&fib, &wc, arrow.as_ref(), v)) else {
        return;
    };
    let o = MaterializedOracle::from_parts(fib.clone(), wq);
    let seed = r.m.seed;
    let reseed = move || -> Result<MaterializedOracle, String> {
        MaterializedOracle::new(fib.clone(), ChoiceOrder::seeded(seed.unwrap_or(0)))
            .map_err(|e| e.to_string())
    };
    oracle_stages(r, o, reseed, None, arrow.is_some());
    r.skip(Stage::Correspond, "defined for groupoid families only");
}

fn analyze(
    proj: FinFunctor,
    arrow: Option<&ArrowCategory>,
    v: &mut Verdict,
) -> Option<(Arc<Prefibration>, Cleavage)> {
    let fib = match Prefibration::new(proj) {
        Ok(f) => Arc::new(f),
        Err(e) => {
            fib_error(v, e);
            return None;
        }
    };
    let problems = fib.lift_problems().len() as u64;
    let failure = fib.fibration_failure().map(|(f, q)| {
        format!(
            "no cartesian lift of {} at {}",
            fib.base.mor_name(f),
            fib.total.obj_name(q)
        )
    });
    if let Some(w) = failure {
        v.fail("NotAFibration", w);
        v.checks.push(Check::new(
            "cartesian lifts exist",
            problems,
            Some("see witness".into()),
        ));
        return None;
    }
    v.check(Check::new("cartesian lifts exist", problems, None));
    let t = &fib.total;
    let cartesian = t.morphisms().filter(|&m| fib.is_cartesian(m)).count();
    let cocartesian = t.morphisms().filter(|&m| fib.is_cocartesian(m)).count();
    if let Some(arrow) = arrow {
        let base = &*arrow.base;
        let mut failure = None;
        for m in t.morphisms() {
            let sq = PullbackSquare {
                p1: arrow.top(m),
                p2: t.src(m),
                f: t.tgt(m),
                g: arrow.bottom(m),
            };
            if is_pullback_square(base, &sq) != fib.is_cartesian(m) && failure.is_none() {
                failure = Some(t.mor_name(m).to_string());
            }
        }
        v.check(Check::new(
            "cartesian squares are exactly the pullback squares",
            t.num_morphisms() as u64,
            failure,
        ));
        let mut failure = None;
        for m in t.morphisms() {
            if base.is_isomorphism(arrow.top(m)) != fib.is_cocartesian(m) && failure.is_none() {
                failure = Some(t.mor_name(m).to_string());
            }
        }
        v.check(Check::new(
            "cocartesian squares are exactly those with invertible top",
            t.num_morphisms() as u64,
            failure,
        ));
    }
    v.fact("cartesian", cartesian);
    v.fact("cocartesian", cocartesian);
    for a in fib.base.objects() {
        v.fact(
            &format!("fiber {}", fib.base.obj_name(a)),
            fib.objects_over(a).len(),
        );
    }
    match build_cleavage(&fib) {
        Ok(cl) => Some((fib, cl)),
        Err(e) => {
            fib_error(v, e);
            None
        }
    }
}

fn wedge(fib: &Prefibration, cl: &Cleavage, v: &mut Verdict) -> Option<WedgeCleavage> {
    match check_wedge(fib, cl) {
        Ok(wc) => {
            for a in fib.base.objects() {
                v.fact(
                    &format!("top {}", fib.base.obj_name(a)),
                    fib.total.obj_name(wc.top(a)),
                );
            }
            v.check(Check::new(
                "fibers are finitely complete and reindexing preserves it",
                fib.base.num_morphisms() as u64,
                None,
            ));
            Some(wc)
        }
        Err(e) => {
            let kind = match &e {
                WedgeFailure::FiberNotFP { .. } => "FiberNotFP",
                WedgeFailure::TerminalNotStable { .. } => "TerminalNotStable",
                WedgeFailure::ProductNotStable { .. } => "ProductNotStable",
                WedgeFailure::Fib(_) => "FibrationError",
            };
            v.fail(kind, e.to_string());
            None
        }
    }
}

fn wedgeq(
    fib: &Prefibration,
    wc: &WedgeCleavage,
    arrow: Option<&ArrowCategory>,
    v: &mut Verdict,
) -> Option<WedgeqCleavage> {
    let (t, b) = (&*fib.total, &*fib.base);
    let wq = match check_wedgeq(fib, wc) {
        Ok(wq) => wq,
        Err(e) => {
            let kind = match &e {
                WedgeqFailure::NoDiagonalLift { .. } => "NoDiagonalLift",
                WedgeqFailure::FrobeniusFails { .. } => "FrobeniusFails",
                WedgeqFailure::StabilityFails { .. } => "StabilityFails",
                WedgeqFailure::IllFormedInstance(_) => "IllFormedInstance",
                WedgeqFailure::NoBaseProducts(_) => "NoBaseProducts",
                WedgeqFailure::Fib(_) => "FibrationError",
            };
            v.fail(kind, e.to_string());
            return None;
        }
    };
    v.check(Check::new(
        "diagonals have cocartesian lifts with Frobenius and stability",
        b.num_objects() as u64,
        None,
    ));
    for a in b.objects() {
        let (eq, rho) = wq.eq(a);
        v.fact(
            &format!("eq {}", b.obj_name(a)),
            format!("{} via {}", t.obj_name(eq), t.mor_name(rho)),
        );
    }
    if let Some(arrow) = arrow {
        let failure = b
            .objects()
            .find(|&a| {
                let rho = wq.eq(a).1;
                !b.is_isomorphism(arrow.top(rho)) || arrow.bottom(rho) != wq.base.diagonal(b, a)
            })
            .map(|a| b.obj_name(a).to_string());
        v.check(Check::new(
            "equality objects are the diagonals up to isomorphism",
            b.num_objects() as u64,
            failure,
        ));
    }
    // Not part of the definition: Frobenius for every cocartesian morphism.
    let mut count = 0;
    let mut failure = None;
    for q in t.morphisms().filter(|&q| fib.is_cocartesian(q)) {
        for &r in fib.objects_over(b.tgt(fib.lies_over(q))) {
            count += 1;
            if failure.is_none()
                && !check_frobenius(fib, wc, FrobeniusInstance { q, r }).unwrap_or(false)
            {
                failure = Some(format!("{} against {}", t.mor_name(q), t.obj_name(r)));
            }
        }
    }
    v.check(
        Check::new(
            "Frobenius for every cocartesian morphism (not required)",
            count,
            failure,
        )
        .info(),
    );
    Some(wq)
}

fn synth_error(v: &mut Verdict, e: SynthError) {
    if e.is_budget() {
        v.budget(e.to_string());
    } else {
        let kind = match &e {
            SynthError::Missing { .. } => "SynthesisIncomplete",
            SynthError::Oracle(_) => "OracleError",
        };
        v.fail(kind, e.to_string());
    }
}

fn oracle_error(v: &mut Verdict, e: OracleError) {
    match e {
        OracleError::Budget(w) => v.budget(w),
        e => v.fail("OracleError", e.to_string()),
    }
}

fn record(v: &mut Verdict, checks: &[LawCheck]) {
    for c in checks {
        v.check(Check::law(c));
    }
}

/// Synthesize and verify over an oracle. `scope` restricts the products and
/// pseudo-functor checks to some 0-cells; `discrete` makes the triviality of
/// homotopies part of the verdict.
fn oracle_stages<O: FibrationOracle>(
    r: &mut Runner<'_>,
    mut o: O,
    reseed: impl FnOnce() -> Result<O, String>,
    scope: Option<Vec<usize>>,
    discrete: bool,
) -> Option<(O, SynthesizedTwoCategory<O::BMor, O::TMor>)> {
    let budget = r.m.budget_cells;
    let t = r.stage(Stage::Synthesize, |v| {
        match synthesize(&Htpy::new(&o), budget) {
            Ok(t) => {
                v.fact("zero_cells", t.num_objects());
                v.fact("morphisms", t.total_morphisms());
                v.fact("cells", t.total_cells());
                for a in 0..t.num_objects() {
                    let id = t.identity[a];
                    v.fact(
                        &format!("identity_cells {}", t.objects[a]),
                        t.hom(a, a).cells_between(id, id).count(),
                    );
                }
                Some(t)
            }
            Err(e) => {
                synth_error(v, e);
                None
            }
        }
    })?;
    r.twocat = Some(export_twocat(&t));
    r.dot = Some(export_twocat_dot(&t));
    let seed = r.m.seed;
    let ok = r.stage(Stage::Verify, |v| {
        record(v, &verify_axioms(&t).checks);
        let triv = verify_codomain_triviality(&t);
        v.check(if discrete {
            Check::law(&triv)
        } else {
            Check::law(&triv).info()
        });
        match check_two_products(&Htpy::new(&o), &t, scope.as_deref()) {
            Ok(p) => record(v, &p.checks),
            Err(e) => oracle_error(v, e),
        }
        let psf_scope = PsfScope {
            objects: scope.clone(),
            ..Default::default()
        };
        match verify_psf(&mut o, &t, &psf_scope) {
            Ok(p) => record(v, &p.checks),
            Err(e) => oracle_error(v, e),
        }
        if let Some(seed) = seed {
            v.fact("seed", seed);
            match reseed() {
                Ok(o2) => {
                    let h2 = Htpy::new(&o2);
                    match synthesize(&h2, budget) {
                        Ok(t2) => match cleavage_transport(&Htpy::new(&o), &t, &h2, &t2) {
                            Ok(tr) => {
                                record(v, &tr.checks);
                                let same =
                                    (!tr.same_verdicts).then(|| "verdicts differ".to_string());
                                v.check(Check::new("reseeded verdicts agree", 1, same));
                            }
                            Err(e) => oracle_error(v, e),
                        },
                        Err(e) => synth_error(v, e),
                    }
                }
                Err(e) => v.fail("ReseedFailed", e),
            }
        }
        Some(())
    });
    ok.map(|_| (o, t))
}

/// Conformance laws grouped by the stage that reports them.
fn conformance_stage(law: &str) -> Stage {
    match law {
        "fiber terminals" | "fiber products" => Stage::Wedge,
        "equality objects and their cofactors"
        | "asserted cocartesians have the universal property on samples"
        | "Frobenius reciprocity on samples"
        | "stability of cocartesians along product squares" => Stage::Wedgeq,
        _ => Stage::Analyze,
    }
}

fn conformance_stages<O: FibrationOracle>(
    r: &mut Runner<'_>,
    o: &O,
    scope: &ConformanceScope,
) -> bool {
    let report = check_conformance(o, scope);
    for st in [Stage::Analyze, Stage::Wedge, Stage::Wedgeq] {
        let done = r.stage(st, |v| {
            v.fact("scope", "sampled");
            for c in report
                .checks
                .iter()
                .filter(|c| conformance_stage(c.law) == st)
            {
                v.check(Check::law(c));
            }
            Some(())
        });
        if done.is_none() {
            return false;
        }
    }
    true
}

fn subobject(r: &mut Runner<'_>, k: u32) {
    let ok = r.stage(Stage::Validate, |v| {
        if k > MAX_SUBOBJECT_K {
            v.fail(
                "TooLarge",
                format!("subobject instances go up to size {MAX_SUBOBJECT_K}, asked for {k}"),
            );
            return None;
        }
        v.fact("zero_cells", k + 1);
        Some(())
    });
    if ok.is_none() {
        return;
    }
    let o = SubobjectOracle::new(k);
    if !conformance_stages(r, &o, &ConformanceScope::default()) {
        return;
    }
    let scope = (k >= 3).then(|| vec![0, 1, 2]);
    oracle_stages(r, o, move || Ok(SubobjectOracle::new(k)), scope, true);
    r.skip(Stage::Correspond, "defined for groupoid families only");
}

fn validate_family(doc: &Document, m: &Manifest, v: &mut Verdict) -> Option<GpdFamily> {
    let cats = validate_blocks(doc, m, v)?;
    let mut fams = doc.families();
    let Some(fam) = fams.next() else {
        v.fail("NoFamily", "the document has no `family` block");
        return None;
    };
    let Some(terminal) = &fam.terminal else {
        v.fail(
            "NoTerminal",
            format!("family {} names no terminal member", fam.name),
        );
        return None;
    };
    let members: Vec<FinCategory> = fam.members.iter().map(|n| (*cats[n]).clone()).collect();
    let mut cones = Vec::new();
    for p in &fam.products {
        let (p1, p2) = (doc.functor(&p.proj1)?, doc.functor(&p.proj2)?);
        for (f, side) in [(p1, &p.left), (p2, &p.right)] {
            if f.source != p.vertex || &f.target != side {
                v.fail(
                    "BadCone",
                    format!("{} must map {} to {}", f.name, p.vertex, side),
                );
                return None;
            }
        }
        let (f1, f2) = (functor_from(&cats, p1, v)?, functor_from(&cats, p2, v)?);
        cones.push(ConeSpec {
            left: p.left.clone(),
            right: p.right.clone(),
            vertex: p.vertex.clone(),
            proj1: (f1.obj_map, f1.mor_map),
            proj2: (f2.obj_map, f2.mor_map),
        });
    }
    let budget = m.budget_morphisms.unwrap_or(DEFAULT_CLOSURE_BUDGET);
    match GpdFamily::with_budget(&members, terminal, &cones, budget) {
        Ok(f) => {
            v.check(Check::new(
                "members are groupoids and the cones are products",
                members.len() as u64,
                None,
            ));
            v.fact("members", fam.members.join(","));
            Some(f)
        }
        Err(GpdError::Budget(w)) => {
            v.budget(w);
            None
        }
        Err(e) => {
            let kind = match &e {
                GpdError::NotAGroupoid { .. } => "NotAGroupoid",
                GpdError::DuplicateMember(_) => "DuplicateMember",
                GpdError::UnknownMember(_) => "DanglingReference",
                GpdError::FamilyNotClosed { .. } => "FamilyNotClosed",
                GpdError::NoTerminal(_) => "NoTerminal",
                GpdError::Functor { .. } => "NotAFunctor",
                GpdError::Budget(_) => unreachable!(),
            };
            v.fail(kind, e.to_string());
            None
        }
    }
}

fn groupoids(r: &mut Runner<'_>, doc: &Document) {
    let m = r.m;
    let Some(fam) = r.stage(Stage::Validate, |v| validate_family(doc, m, v)) else {
        return;
    };
    let fam = Arc::new(fam);
    // Members that are not the vertex of a supplied cone.
    let atoms: Vec<usize> = (0..fam.members.len())
        .filter(|&i| !fam.cones().any(|c| c.vertex == fam.members[i]))
        .collect();
    let atom_ids = atoms.iter().map(|&i| fam.members[i]).collect();
    let restricted = GpdOracle::new(fam.clone()).restricted(atom_ids);
    let report = check_conformance(&restricted, &ConformanceScope::default());
    for st in [Stage::Analyze, Stage::Wedge, Stage::Wedgeq] {
        let done = r.stage(st, |v| {
            v.fact("scope", "atoms, sampled");
            if st == Stage::Analyze {
                match model_spot_checks(&restricted, &SpotCheckScope::default()) {
                    Ok(cs) => record(v, &cs),
                    Err(e) => v.fail("ModelError", e.to_string()),
                }
            }
            for c in report
                .checks
                .iter()
                .filter(|c| conformance_stage(c.law) == st)
            {
                v.check(Check::law(c));
            }
            Some(())
        });
        if done.is_none() {
            return;
        }
    }
    let o = GpdOracle::new(fam.clone());
    let seed = m.seed.unwrap_or(0);
    let fam2 = fam.clone();
    let reseed = move || Ok(GpdOracle::with_order(fam2, ChoiceOrder::seeded(seed)));
    let Some((o, t)) = oracle_stages(r, o, reseed, Some(atoms), false) else {
        return;
    };
    r.stage(Stage::Correspond, |v| {
        let all: Vec<usize> = (0..t.num_objects()).collect();
        match classical_correspondence(&o, &t, &all) {
            Ok(rep) => record(v, &rep.checks),
            Err(e) => v.fail("CorrespondenceFailure", e.to_string()),
        }
        let zero = o.zero_cells();
        let mut failure = None;
        for (a, &g) in zero.iter().enumerate() {
            let gpd = o.store.gpd(g);
            let id = o.store.fun(o.store.identity(g));
            let centre = natural_isos(&gpd, &gpd, &id, &id).len();
            let cells = t
                .hom(a, a)
                .cells_between(t.identity[a], t.identity[a])
                .count();
            v.fact(
                &format!("automorphisms_of_identity {}", t.objects[a]),
                centre,
            );
            if centre != cells && failure.is_none() {
                failure = Some(format!(
                    "{}: {cells} cells, {centre} natural automorphisms",
                    t.objects[a]
                ));
            }
        }
        v.check(Check::new(
            "2-cells at identities count natural automorphisms",
            zero.len() as u64,
            failure,
        ));
        Some(())
    });
}
