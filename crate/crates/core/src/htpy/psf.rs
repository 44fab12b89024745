//! The pseudo-functor `A ↦ fiber(A)`, `f ↦ f*`, `α ↦ α*` and its coherence.

use std::collections::HashMap;
use std::sync::Arc;

use super::twocat::{tally, LawCheck, SynthesizedTwoCategory};
use super::{Cell, Htpy};
use crate::exec;
use crate::fincat::{FinFunctor, NatTransform};
use crate::oracle::{BaseOps, FibrationOracle, MaterializedOracle, OResult, OracleError};

/// Which data the coherence checks range over.
#[derive(Debug, Clone)]
pub struct PsfScope {
    /// Indices of 0-cells; `None` means all.
    pub objects: Option<Vec<usize>>,
    /// At most this many 2-cell pairs per object triple for the naturality
    /// of the comparison maps; `usize::MAX` means all.
    pub naturality_pairs: usize,
    /// At most this many vertical morphisms per pair of sample objects for
    /// the naturality of `α*`.
    pub vertical_samples: usize,
}

impl Default for PsfScope {
    fn default() -> Self {
        PsfScope {
            objects: None,
            naturality_pairs: usize::MAX,
            vertical_samples: usize::MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsfReport {
    pub checks: Vec<LawCheck>,
}

impl PsfReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(LawCheck::passed)
    }
    pub fn first_failure(&self) -> Option<&LawCheck> {
        self.checks.iter().find(|c| !c.passed())
    }
}

/// Components of the pseudo-functor on sample fiber objects.
#[derive(Debug, Clone)]
pub struct PseudoFunctorData<B, TO, TM> {
    /// `(f, Q) ↦ f*Q`.
    pub pullbacks: HashMap<(B, TO), TO>,
    /// `(f, g, Q) ↦ C_{fg}(Q): f*g*Q → (gf)*Q`.
    pub comparisons: HashMap<(B, B, TO), TM>,
    /// `P ↦ (C_A)_P: id*P → P`.
    pub units: HashMap<TO, TM>,
    /// `(α body, P) ↦ α*_P`.
    pub actions: HashMap<(TM, TO), TM>,
}

/// Materialize the pseudo-functor's components over the fiber samples of
/// every 0-cell of `t`.
#[allow(clippy::type_complexity)]
pub fn assemble_pseudofunctor<O: FibrationOracle>(
    h: &Htpy<'_, O>,
    t: &SynthesizedTwoCategory<O::BMor, O::TMor>,
) -> OResult<PseudoFunctorData<O::BMor, O::TObj, O::TMor>> {
    let o = h.oracle;
    let objs = o.zero_cells();
    let n = objs.len();
    let samples = exec::try_map(&objs, |a| o.fiber_sample(a))?;
    let mut data = PseudoFunctorData {
        pullbacks: HashMap::new(),
        comparisons: HashMap::new(),
        units: HashMap::new(),
        actions: HashMap::new(),
    };
    for (a, sample) in samples.iter().enumerate() {
        for p in sample {
            data.units.insert(p.clone(), h.unit(p)?);
        }
        for b in 0..n {
            let hom = t.hom(a, b);
            for f in &hom.morphisms {
                for q in &samples[b] {
                    data.pullbacks
                        .insert((f.clone(), q.clone()), o.pullback_obj(f, q)?);
                }
            }
            for c in 0..n {
                for f in &hom.morphisms {
                    for g in &t.hom(b, c).morphisms {
                        for q in &samples[c] {
                            data.comparisons
                                .insert((f.clone(), g.clone(), q.clone()), h.comparison(f, g, q)?);
                        }
                    }
                }
            }
            for c in 0..hom.num_cells() as u32 {
                let cell = hom.cell(c);
                for p in &samples[b] {
                    data.actions
                        .insert((cell.body.clone(), p.clone()), h.alpha_star(&cell, p)?);
                }
            }
        }
    }
    Ok(data)
}

/// `α*` as a validated natural transformation between the materialized
/// pullback functors of a finite fibration.
pub fn action_as_nat_transform(
    h: &Htpy<'_, MaterializedOracle>,
    alpha: &Cell<MaterializedOracle>,
) -> OResult<NatTransform> {
    let o = h.oracle;
    let fib = &o.fib;
    let cl = &o.wq.wedge.cleavage;
    let (_, _, fstar) = cl.pullback_functor(fib, alpha.src)?;
    let (fb, fa, gstar) = cl.pullback_functor(fib, alpha.tgt)?;
    let target = Arc::new(fa.cat.clone());
    let fstar = FinFunctor {
        target: target.clone(),
        ..fstar
    };
    let gstar = FinFunctor { target, ..gstar };
    let mut components = Vec::new();
    for &p in &fb.objects {
        let m = h.alpha_star(alpha, &p)?;
        components.push(
            fa.local_mor(m)
                .ok_or_else(|| OracleError::contract("α* is not vertical"))?,
        );
    }
    NatTransform::new(fstar, gstar, components)
        .map_err(|e| OracleError::contract(format!("α* is not natural: {e}")))
}

fn eq_check<T: PartialEq>(
    lhs: OResult<T>,
    rhs: OResult<T>,
    what: impl FnOnce() -> String,
) -> (u64, Option<String>) {
    match (lhs, rhs) {
        (Ok(l), Ok(r)) if l == r => (1, None),
        (Ok(_), Ok(_)) => (1, Some(what())),
        (Err(e), _) | (_, Err(e)) => (1, Some(format!("{}: {e}", what()))),
    }
}

fn merge(acc: &mut (u64, Option<String>), r: (u64, Option<String>)) {
    acc.0 += r.0;
    if acc.1.is_none() {
        acc.1 = r.1;
    }
}

/// Check coherence of the comparison maps, the unit triangles, and the
/// functoriality and naturality of `α ↦ α*`.
pub fn verify_psf<O: FibrationOracle>(
    o: &mut O,
    t: &SynthesizedTwoCategory<O::BMor, O::TMor>,
    scope: &PsfScope,
) -> OResult<PsfReport> {
    let objs = o.zero_cells();
    let idx: Vec<usize> = scope
        .objects
        .clone()
        .unwrap_or_else(|| (0..objs.len()).collect());
    let mut checks = Vec::new();

    // (i) coherence squares, one scratch scope per (A, B, f).
    let mut sq = (0u64, None);
    let mut tri = (0u64, None);
    for &a in &idx {
        for &b in &idx {
            for f in t.hom(a, b).morphisms.clone() {
                let r = o.scoped(|o| coherence_from(o, t, &objs, &idx, b, &f));
                merge(&mut sq, r?);
            }
            let r = o.scoped(|o| triangles(o, t, &objs, a, b));
            merge(&mut tri, r?);
        }
    }
    checks.push(LawCheck {
        law: "comparison coherence squares",
        instances: sq.0,
        failure: sq.1,
    });
    checks.push(LawCheck {
        law: "unit triangles",
        instances: tri.0,
        failure: tri.1,
    });

    // Functoriality of α ↦ α* on each hom-category.
    let mut funct = [(0u64, None), (0u64, None), (0u64, None), (0u64, None)];
    for &a in &idx {
        for &b in &idx {
            let r = o.scoped(|o| action_laws(o, t, &objs, a, b, scope.vertical_samples))?;
            for (acc, x) in funct.iter_mut().zip(r) {
                merge(acc, x);
            }
        }
    }
    let names = [
        "identity homotopies act as identities",
        "vertical composites act as composites",
        "inverses act as inverses",
        "actions are natural",
    ];
    for (law, (instances, failure)) in names.into_iter().zip(funct) {
        checks.push(LawCheck {
            law,
            instances,
            failure,
        });
    }

    // Naturality of the comparison maps in 2-cells.
    let mut nat = (0u64, None);
    for &a in &idx {
        for &b in &idx {
            for &c in &idx {
                let r = o.scoped(|o| {
                    comparison_naturality(o, t, &objs, (a, b, c), scope.naturality_pairs)
                })?;
                merge(&mut nat, r);
            }
        }
    }
    checks.push(LawCheck {
        law: "comparison maps are natural in 2-cells",
        instances: nat.0,
        failure: nat.1,
    });
    Ok(PsfReport { checks })
}

fn coherence_from<O: FibrationOracle>(
    o: &O,
    t: &SynthesizedTwoCategory<O::BMor, O::TMor>,
    objs: &[O::BObj],
    idx: &[usize],
    b: usize,
    f: &O::BMor,
) -> OResult<(u64, Option<String>)> {
    let h = Htpy::new(o);
    let mut work = Vec::new();
    for &c in idx {
        for g in &t.hom(b, c).morphisms {
            for &d in idx {
                for k in &t.hom(c, d).morphisms {
                    for q in o.fiber_sample(&objs[d])? {
                        work.push((g.clone(), k.clone(), q));
                    }
                }
            }
        }
    }
    let law = tally("", &work, |(g, k, q)| {
        let lhs = (|| {
            let kg = o.b_comp(k, g)?;
            o.t_comp(
                &h.comparison(f, &kg, q)?,
                &o.pullback_mor(f, &h.comparison(g, k, q)?)?,
            )
        })();
        let rhs = (|| {
            let gf = o.b_comp(g, f)?;
            o.t_comp(
                &h.comparison(&gf, k, q)?,
                &h.comparison(f, g, &o.pullback_obj(k, q)?)?,
            )
        })();
        eq_check(lhs, rhs, || {
            format!(
                "f={} g={} h={} Q={}",
                o.show_bmor(f),
                o.show_bmor(g),
                o.show_bmor(k),
                o.show_tobj(q)
            )
        })
    });
    Ok((law.instances, law.failure))
}

fn triangles<O: FibrationOracle>(
    o: &O,
    t: &SynthesizedTwoCategory<O::BMor, O::TMor>,
    objs: &[O::BObj],
    a: usize,
    b: usize,
) -> OResult<(u64, Option<String>)> {
    let h = Htpy::new(o);
    let mut work = Vec::new();
    for f in &t.hom(a, b).morphisms {
        for q in o.fiber_sample(&objs[b])? {
            work.push((f.clone(), q));
        }
    }
    let ida = o.b_id(&objs[a]);
    let idb = o.b_id(&objs[b]);
    let law = tally("", &work, |(f, q)| {
        let left = eq_check(
            h.comparison(&ida, f, q),
            o.pullback_obj(f, q).and_then(|fq| h.unit(&fq)),
            || format!("left unit at f={} Q={}", o.show_bmor(f), o.show_tobj(q)),
        );
        let right = eq_check(
            h.comparison(f, &idb, q),
            h.unit(q).and_then(|u| o.pullback_mor(f, &u)),
            || format!("right unit at f={} Q={}", o.show_bmor(f), o.show_tobj(q)),
        );
        (2, left.1.or(right.1))
    });
    Ok((law.instances, law.failure))
}

#[allow(clippy::type_complexity)]
fn action_laws<O: FibrationOracle>(
    o: &O,
    t: &SynthesizedTwoCategory<O::BMor, O::TMor>,
    objs: &[O::BObj],
    a: usize,
    b: usize,
    vertical_samples: usize,
) -> OResult<[(u64, Option<String>); 4]> {
    let h = Htpy::new(o);
    let hom = t.hom(a, b);
    let sample = o.fiber_sample(&objs[b])?;
    let cells: Vec<u32> = (0..hom.num_cells() as u32).collect();
    let stars: Vec<Vec<O::TMor>> = exec::try_map(&cells, |&c| {
        let cell = hom.cell(c);
        sample
            .iter()
            .map(|p| h.alpha_star(&cell, p))
            .collect::<OResult<Vec<_>>>()
    })?;
    let label = |c: u32, p: usize| format!("{} at {}", hom.cell_label(c), o.show_tobj(&sample[p]));

    let ident = tally("", &(0..hom.morphisms.len()).collect::<Vec<_>>(), |&f| {
        let mut acc = (0, None);
        for p in 0..sample.len() {
            let hid = hom.ident[f];
            let fp = o
                .pullback_obj(&hom.morphisms[f], &sample[p])
                .and_then(|x| o.t_id(&x));
            merge(
                &mut acc,
                eq_check(Ok(stars[hid as usize][p].clone()), fp, || label(hid, p)),
            );
        }
        acc
    });
    let vert = tally("", &cells, |&alpha| {
        let mut acc = (0, None);
        for &beta in hom.cells_out_of(hom.cells[alpha as usize].tgt) {
            let ba = hom.vcomp(beta, alpha).unwrap();
            for p in 0..sample.len() {
                merge(
                    &mut acc,
                    eq_check(
                        Ok(stars[ba as usize][p].clone()),
                        o.t_comp(&stars[beta as usize][p], &stars[alpha as usize][p]),
                        || format!("{} after {}", label(beta, p), hom.cell_label(alpha)),
                    ),
                );
            }
        }
        acc
    });
    let inv = tally("", &cells, |&alpha| {
        let mut acc = (0, None);
        let inv = hom.inverse[alpha as usize];
        let src = &hom.morphisms[hom.cells[alpha as usize].src as usize];
        for p in 0..sample.len() {
            let id = o.pullback_obj(src, &sample[p]).and_then(|x| o.t_id(&x));
            merge(
                &mut acc,
                eq_check(
                    o.t_comp(&stars[inv as usize][p], &stars[alpha as usize][p]),
                    id,
                    || label(alpha, p),
                ),
            );
        }
        acc
    });
    let idb = o.b_id(&objs[b]);
    let mut verticals = Vec::new();
    for (pi, p) in sample.iter().enumerate() {
        for (qi, q) in sample.iter().enumerate() {
            for u in o.hom_over(p, q, &idb)?.into_iter().take(vertical_samples) {
                verticals.push((pi, qi, u));
            }
        }
    }
    let natural = tally("", &cells, |&alpha| {
        let mut acc = (0, None);
        let cell: Cell<O> = hom.cell(alpha);
        for (pi, qi, u) in &verticals {
            let lhs = o
                .pullback_mor(&cell.tgt, u)
                .and_then(|gu| o.t_comp(&gu, &stars[alpha as usize][*pi]));
            let rhs = o
                .pullback_mor(&cell.src, u)
                .and_then(|fu| o.t_comp(&stars[alpha as usize][*qi], &fu));
            merge(
                &mut acc,
                eq_check(lhs, rhs, || {
                    format!("{} along {}", label(alpha, *pi), o.show_tmor(u))
                }),
            );
        }
        acc
    });
    Ok([ident, vert, inv, natural].map(|l| (l.instances, l.failure)))
}

fn comparison_naturality<O: FibrationOracle>(
    o: &O,
    t: &SynthesizedTwoCategory<O::BMor, O::TMor>,
    objs: &[O::BObj],
    (a, b, c): (usize, usize, usize),
    cap: usize,
) -> OResult<(u64, Option<String>)> {
    let h = Htpy::new(o);
    let (hab, hbc) = (t.hom(a, b), t.hom(b, c));
    let total = hab.num_cells() * hbc.num_cells();
    let step = if cap == usize::MAX || total <= cap {
        1
    } else {
        total.div_ceil(cap)
    };
    let pairs: Vec<(u32, u32)> = (0..total)
        .step_by(step)
        .map(|i| ((i / hab.num_cells()) as u32, (i % hab.num_cells()) as u32))
        .collect();
    let sample = o.fiber_sample(&objs[c])?;
    let law = tally("", &pairs, |&(bi, ai)| {
        let (alpha, beta): (Cell<O>, Cell<O>) = (hab.cell(ai), hbc.cell(bi));
        let composite = t.hom(a, c).cell(t.hcomp(a, b, c, bi, ai));
        let mut acc = (0, None);
        for q in &sample {
            let lhs = (|| {
                let gq = o.pullback_obj(&beta.tgt, q)?;
                let fbeta = o.pullback_mor(&alpha.src, &h.alpha_star(&beta, q)?)?;
                let m = o.t_comp(&h.alpha_star(&alpha, &gq)?, &fbeta)?;
                o.t_comp(&h.comparison(&alpha.tgt, &beta.tgt, q)?, &m)
            })();
            let rhs = (|| {
                o.t_comp(
                    &h.alpha_star(&composite, q)?,
                    &h.comparison(&alpha.src, &beta.src, q)?,
                )
            })();
            merge(
                &mut acc,
                eq_check(lhs, rhs, || {
                    format!(
                        "{} o {} at {}",
                        hbc.cell_label(bi),
                        hab.cell_label(ai),
                        o.show_tobj(q)
                    )
                }),
            );
        }
        acc
    });
    Ok((law.instances, law.failure))
}
