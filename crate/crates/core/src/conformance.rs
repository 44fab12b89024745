//! Spot checks of the oracle contract on sampled data.
//!
//! Each law is checked on the chosen 0-cells, the base morphisms between
//! them and the oracle's fiber samples, up to a cap per law. Oracle errors
//! inside a check count as failures of that law.

use crate::htpy::LawCheck;
use crate::oracle::{BaseOps, FibrationOracle, OResult};

#[derive(Debug, Clone)]
pub struct ConformanceScope {
    /// Indices into `zero_cells`; `None` means all.
    pub objects: Option<Vec<usize>>,
    /// Instances per law before the law stops sampling.
    pub cap: u64,
}

impl Default for ConformanceScope {
    fn default() -> Self {
        ConformanceScope {
            objects: None,
            cap: 2_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformanceReport {
    pub checks: Vec<LawCheck>,
}

impl ConformanceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(LawCheck::passed)
    }
    pub fn first_failure(&self) -> Option<&LawCheck> {
        self.checks.iter().find(|c| !c.passed())
    }
}

struct Law {
    check: LawCheck,
    cap: u64,
}

impl Law {
    fn new(law: &'static str, cap: u64) -> Self {
        Law {
            check: LawCheck {
                law,
                instances: 0,
                failure: None,
            },
            cap,
        }
    }

    /// False once the law has failed or reached its cap.
    fn open(&self) -> bool {
        self.check.failure.is_none() && self.check.instances < self.cap
    }

    fn case(&mut self, r: OResult<Option<String>>) {
        self.check.instances += 1;
        match r {
            Ok(None) => {}
            Ok(Some(msg)) => self.check.failure = Some(msg),
            Err(e) => self.check.failure = Some(e.to_string()),
        }
    }
}

fn expect(ok: bool, what: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(what)
}

pub fn check_conformance<O: FibrationOracle>(o: &O, scope: &ConformanceScope) -> ConformanceReport {
    let all = o.zero_cells();
    let objs: Vec<O::BObj> = match &scope.objects {
        Some(ix) => ix.iter().map(|&i| all[i].clone()).collect(),
        None => all,
    };
    let cap = scope.cap;
    let hom = |a: &O::BObj, b: &O::BObj| o.b_hom(a, b).unwrap_or_default();
    let sample = |a: &O::BObj| o.fiber_sample(a).unwrap_or_default();
    let mut checks = Vec::new();

    let mut cat = Law::new("base composition is associative and unital", cap);
    'cat: for a in &objs {
        for b in &objs {
            for f in hom(a, b) {
                cat.case((|| {
                    let (ia, ib) = (o.b_id(a), o.b_id(b));
                    Ok(expect(
                        o.b_comp(&f, &ia)? == f && o.b_comp(&ib, &f)? == f,
                        || format!("unit law at {}", o.show_bmor(&f)),
                    ))
                })());
                for c in &objs {
                    for g in hom(b, c) {
                        for d in &objs {
                            for h in hom(c, d) {
                                if !cat.open() {
                                    break 'cat;
                                }
                                cat.case((|| {
                                    let l = o.b_comp(&h, &o.b_comp(&g, &f)?)?;
                                    let r = o.b_comp(&o.b_comp(&h, &g)?, &f)?;
                                    Ok(expect(l == r, || {
                                        format!("associativity at {}", o.show_bmor(&f))
                                    }))
                                })());
                            }
                        }
                    }
                }
            }
        }
    }
    checks.push(cat.check);

    let mut term = Law::new("terminal object", cap);
    for a in &objs {
        term.case((|| {
            let t = o.b_terminal();
            let h = o.b_hom(a, &t)?;
            Ok(expect(h == vec![o.b_to_terminal(a)?], || {
                format!("{} has {} maps to the terminal", o.show_bobj(a), h.len())
            }))
        })());
    }
    checks.push(term.check);

    let mut prod = Law::new("binary products", cap);
    'prod: for a in &objs {
        for b in &objs {
            for c in &objs {
                if !prod.open() {
                    break 'prod;
                }
                prod.case((|| {
                    let p = o.b_product(a, b)?;
                    for f in o.b_hom(c, a)? {
                        for g in o.b_hom(c, b)? {
                            let fg = o.b_pair(&f, &g)?;
                            if o.b_comp(&p.proj1, &fg)? != f || o.b_comp(&p.proj2, &fg)? != g {
                                return Ok(Some(format!(
                                    "pairing {} and {}",
                                    o.show_bmor(&f),
                                    o.show_bmor(&g)
                                )));
                            }
                        }
                    }
                    for h in o.b_hom(c, &p.vertex)? {
                        let back = o.b_pair(&o.b_comp(&p.proj1, &h)?, &o.b_comp(&p.proj2, &h)?)?;
                        if back != h {
                            return Ok(Some(format!(
                                "{} is not determined by its projections",
                                o.show_bmor(&h)
                            )));
                        }
                    }
                    Ok(None)
                })());
            }
        }
    }
    checks.push(prod.check);

    let mut fcat = Law::new("fiber composition is associative and unital", cap);
    let mut top = Law::new("fiber terminals", cap);
    let mut meet = Law::new("fiber products", cap);
    for a in &objs {
        let ps = sample(a);
        let id = o.b_id(a);
        for p in &ps {
            top.case((|| {
                let t = o.top(a)?;
                let h = o.hom_over(p, &t, &id)?;
                Ok(expect(h == vec![o.ex(p, &id)?], || {
                    format!(
                        "{} has {} maps to the fiber terminal",
                        o.show_tobj(p),
                        h.len()
                    )
                }))
            })());
            for q in &ps {
                for u in o.hom_over(p, q, &id).unwrap_or_default() {
                    if !fcat.open() {
                        break;
                    }
                    fcat.case((|| {
                        let (ip, iq) = (o.t_id(p)?, o.t_id(q)?);
                        let ok = o.t_comp(&u, &ip)? == u
                            && o.t_comp(&iq, &u)? == u
                            && o.t_base(&u) == id;
                        Ok(expect(ok, || format!("unit law at {}", o.show_tmor(&u))))
                    })());
                }
                if !meet.open() {
                    continue;
                }
                meet.case((|| {
                    let m = o.meet(p, q)?;
                    if o.t_base(&m.proj1) != id || o.t_base(&m.proj2) != id {
                        return Ok(Some("meet projections are not vertical".into()));
                    }
                    for r in &ps {
                        let (us, vs) = (o.hom_over(r, p, &id)?, o.hom_over(r, q, &id)?);
                        let ws = o.hom_over(r, &m.vertex, &id)?;
                        if ws.len() != us.len() * vs.len() {
                            return Ok(Some(format!(
                                "{} maps into the meet of {} and {}, expected {}",
                                ws.len(),
                                o.show_tobj(p),
                                o.show_tobj(q),
                                us.len() * vs.len()
                            )));
                        }
                        for u in &us {
                            for v in &vs {
                                let w = o.pair_over(u, v)?;
                                if o.t_comp(&m.proj1, &w)? != *u || o.t_comp(&m.proj2, &w)? != *v {
                                    return Ok(Some(format!(
                                        "pairing {} and {}",
                                        o.show_tmor(u),
                                        o.show_tmor(v)
                                    )));
                                }
                            }
                        }
                    }
                    Ok(None)
                })());
            }
        }
    }
    checks.extend([fcat.check, top.check, meet.check]);

    let mut crt = Law::new("cartesian lifts factor uniquely", cap);
    'crt: for a in &objs {
        for b in &objs {
            for f in hom(a, b) {
                for q in sample(b) {
                    for c in &objs {
                        for h in hom(c, a) {
                            for p in sample(c) {
                                if !crt.open() {
                                    break 'crt;
                                }
                                crt.case((|| {
                                    let lift = o.crt(&f, &q)?;
                                    if o.t_base(&lift) != f || o.t_tgt(&lift) != q {
                                        return Ok(Some(format!(
                                            "crt of {} along {}",
                                            o.show_tobj(&q),
                                            o.show_bmor(&f)
                                        )));
                                    }
                                    let fh = o.b_comp(&f, &h)?;
                                    let into = o.hom_over(&p, &o.t_src(&lift), &h)?;
                                    for m in o.hom_over(&p, &q, &fh)? {
                                        let u = o.cind(&m, &h, &f)?;
                                        if o.t_base(&u) != h || o.t_comp(&lift, &u)? != m {
                                            return Ok(Some(format!(
                                                "cind of {}",
                                                o.show_tmor(&m)
                                            )));
                                        }
                                        let mut through = 0;
                                        for v in &into {
                                            if o.t_comp(&lift, v)? == m {
                                                through += 1;
                                            }
                                        }
                                        if through != 1 {
                                            return Ok(Some(format!(
                                                "{} factors {through} times",
                                                o.show_tmor(&m)
                                            )));
                                        }
                                    }
                                    Ok(None)
                                })());
                            }
                        }
                    }
                }
            }
        }
    }
    checks.push(crt.check);

    let mut eq = Law::new("equality objects and their cofactors", cap);
    'eq: for b in &objs {
        let (eqo, rho) = match o.eq(b) {
            Ok(x) => x,
            Err(e) => {
                eq.case(Err(e));
                break;
            }
        };
        eq.case((|| {
            let delta = o.b_diagonal(b)?;
            let ok = o.t_base(&rho) == delta && o.t_src(&rho) == o.top(b)? && o.t_tgt(&rho) == eqo;
            Ok(expect(ok && o.is_cocartesian(&rho) != Some(false), || {
                format!("ρ at {}", o.show_bobj(b))
            }))
        })());
        let b2 = match o.b_product(b, b) {
            Ok(p) => p.vertex,
            Err(_) => continue,
        };
        for c in &objs {
            for g in hom(&b2, c) {
                for s in sample(c) {
                    if !eq.open() {
                        break 'eq;
                    }
                    eq.case((|| {
                        let gd = o.b_comp(&g, &o.t_base(&rho))?;
                        let candidates = o.hom_over(&eqo, &s, &g)?;
                        for r in o.hom_over(&o.t_src(&rho), &s, &gd)? {
                            let x = o.cofactor(&rho, &r, &g)?;
                            if o.t_base(&x) != g || o.t_comp(&x, &rho)? != r {
                                return Ok(Some(format!("cofactor of {}", o.show_tmor(&r))));
                            }
                            let mut through = 0;
                            for y in &candidates {
                                if o.t_comp(y, &rho)? == r {
                                    through += 1;
                                }
                            }
                            if through != 1 {
                                return Ok(Some(format!(
                                    "{} factors through ρ {through} times",
                                    o.show_tmor(&r)
                                )));
                            }
                        }
                        Ok(None)
                    })());
                }
            }
        }
    }
    checks.push(eq.check);

    let mut coc = Law::new(
        "asserted cocartesians have the universal property on samples",
        cap,
    );
    'coc: for a in &objs {
        for b in &objs {
            for f in hom(a, b) {
                for p in sample(a) {
                    for q in sample(b) {
                        for m in o.hom_over(&p, &q, &f).unwrap_or_default() {
                            if o.is_cocartesian(&m) != Some(true) {
                                continue;
                            }
                            if !coc.open() {
                                break 'coc;
                            }
                            coc.case(
                                cocartesian_on_samples(o, &m, &objs)
                                    .map(|w| w.map(|w| format!("{}: {w}", o.show_tmor(&m)))),
                            );
                        }
                    }
                }
            }
        }
    }
    checks.push(coc.check);
    checks.push(frobenius_samples(o, &objs, cap));
    checks.push(stability_samples(o, &objs, cap));

    ConformanceReport { checks }
}

/// Asserted cocartesian morphisms between fiber samples over `f: a → b`.
fn cocartesians<O: FibrationOracle>(o: &O, f: &O::BMor) -> OResult<Vec<O::TMor>> {
    let (a, b) = (o.b_src(f), o.b_tgt(f));
    let mut out = Vec::new();
    for p in o.fiber_sample(&a)? {
        for q in o.fiber_sample(&b)? {
            out.extend(
                o.hom_over(&p, &q, f)?
                    .into_iter()
                    .filter(|m| o.is_cocartesian(m) == Some(true)),
            );
        }
    }
    Ok(out)
}

/// `q ∧∧ crt_f R` is cocartesian for cocartesian `q` over `f` and `R` over
/// the codomain.
pub fn frobenius_samples<O: FibrationOracle>(o: &O, objs: &[O::BObj], cap: u64) -> LawCheck {
    let mut law = Law::new("Frobenius reciprocity on samples", cap);
    'all: for a in objs {
        for b in objs {
            for f in o.b_hom(a, b).unwrap_or_default() {
                for q in cocartesians(o, &f).unwrap_or_default() {
                    for r in o.fiber_sample(b).unwrap_or_default() {
                        if !law.open() {
                            break 'all;
                        }
                        law.case((|| {
                            let c = o.crt(&f, &r)?;
                            let d = o.meet(&o.t_src(&q), &o.t_src(&c))?;
                            let m =
                                o.pair_over(&o.t_comp(&q, &d.proj1)?, &o.t_comp(&c, &d.proj2)?)?;
                            let what =
                                || format!("{} against {}", o.show_tmor(&q), o.show_tobj(&r));
                            if o.is_cocartesian(&m) == Some(false) {
                                return Ok(Some(format!("{} is not cocartesian", what())));
                            }
                            Ok(cocartesian_on_samples(o, &m, objs)?
                                .map(|w| format!("{}: {w}", what())))
                        })());
                    }
                }
            }
        }
    }
    law.check
}

/// Cocartesian `p` over `g: a → b` transported along the pullback square of
/// `g × id_c` over `g`, which must stay cocartesian.
pub fn stability_samples<O: FibrationOracle>(o: &O, objs: &[O::BObj], cap: u64) -> LawCheck {
    let mut law = Law::new("stability of cocartesians along product squares", cap);
    'all: for a in objs {
        for b in objs {
            for g in o.b_hom(a, b).unwrap_or_default() {
                for p in cocartesians(o, &g).unwrap_or_default() {
                    for c in objs {
                        if !law.open() {
                            break 'all;
                        }
                        law.case((|| {
                            let (ac, bc) = (o.b_product(a, c)?, o.b_product(b, c)?);
                            let top = o.b_pair(&o.b_comp(&g, &ac.proj1)?, &ac.proj2)?;
                            let s = o.crt(&ac.proj1, &o.t_src(&p))?;
                            let lifted = o.cind(&o.t_comp(&p, &s)?, &top, &bc.proj1)?;
                            let what = || format!("{} along {}", o.show_tmor(&p), o.show_bobj(c));
                            if o.is_cocartesian(&lifted) == Some(false) {
                                return Ok(Some(format!("{} is not cocartesian", what())));
                            }
                            Ok(cocartesian_on_samples(o, &lifted, objs)?
                                .map(|w| format!("{}: {w}", what())))
                        })());
                    }
                }
            }
        }
    }
    law.check
}

/// A witness against `m` being cocartesian among the fiber samples over
/// `objs`, if any: some `g` and `S` for which precomposition with `m` is not
/// a bijection `Hom_g(Q, S) → Hom_{g∘f}(P, S)`.
pub fn cocartesian_on_samples<O: FibrationOracle>(
    o: &O,
    m: &O::TMor,
    objs: &[O::BObj],
) -> OResult<Option<String>> {
    let (p, q, f) = (o.t_src(m), o.t_tgt(m), o.t_base(m));
    let b = o.t_over(&q);
    for c in objs {
        for g in o.b_hom(&b, c)? {
            let gf = o.b_comp(&g, &f)?;
            for s in o.fiber_sample(c)? {
                let from_q = o.hom_over(&q, &s, &g)?;
                let from_p = o.hom_over(&p, &s, &gf)?;
                let mut images = Vec::with_capacity(from_q.len());
                for x in &from_q {
                    images.push(o.t_comp(x, m)?);
                }
                images.sort();
                images.dedup();
                if images.len() != from_q.len() || images.len() != from_p.len() {
                    return Ok(Some(format!(
                        "over {} into {}: {} maps out of the target, {} distinct composites, {} maps out of the source",
                        o.show_bmor(&g),
                        o.show_tobj(&s),
                        from_q.len(),
                        images.len(),
                        from_p.len()
                    )));
                }
            }
        }
    }
    Ok(None)
}
