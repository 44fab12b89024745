use std::sync::Arc;

use eqfib_core::choice::ChoiceOrder;
use eqfib_core::fibcore::{build_cleavage, Prefibration};
use eqfib_core::fincat::{find_products, find_pullbacks, zoo, FinCategory, FinFunctor, Mo, Ob};
use eqfib_core::instances::{codomain_prefibration, materialize_subobject, DEFAULT_ARROW_CAP};
use eqfib_core::wedgeq::{
    check_frobenius, check_stability, check_wedge, check_wedge_with, check_wedgeq,
    check_wedgeq_with, is_generalized_diagonal, BaseProducts, FrobeniusInstance, StabilityInstance,
    WedgeCleavage, WedgeFailure,
};

fn codomain(c: &FinCategory) -> (eqfib_core::fincat::ArrowCategory, Prefibration) {
    codomain_prefibration(c, DEFAULT_ARROW_CAP).unwrap()
}

/// Over `0 → 1`: the fiber over 0 is `p0 < p1`, over 1 is `r0 < rm < r1`,
/// and pulling back sends only `r1` to `p1`. The cocartesian `p1 → r1` then
/// fails Frobenius against `rm`.
fn frobenius_counterexample() -> Prefibration {
    let total = Arc::new(zoo::preorder(
        "frob",
        &["p0", "p1", "r0", "rm", "r1"],
        &[
            ("p0", "p1"),
            ("r0", "rm"),
            ("rm", "r1"),
            ("p0", "r0"),
            ("p1", "r1"),
        ],
    ));
    let base = Arc::new(zoo::walking_arrow());
    let obj = |x: &str| if x.starts_with('p') { 0 } else { 1 };
    let obj_map: Vec<Ob> = total.objects().map(|x| obj(total.obj_name(x))).collect();
    let mor_map: Vec<Mo> = total
        .morphisms()
        .map(|m| {
            base.hom(
                obj_map[total.src(m) as usize],
                obj_map[total.tgt(m) as usize],
            )[0]
        })
        .collect();
    Prefibration::new(FinFunctor::new("proj", total, base, obj_map, mor_map).unwrap()).unwrap()
}

fn bang(c: FinCategory) -> Prefibration {
    let (n, m) = (c.num_objects(), c.num_morphisms());
    Prefibration::new(
        FinFunctor::new(
            "bang",
            Arc::new(c),
            Arc::new(zoo::terminal()),
            vec![0; n],
            vec![0; m],
        )
        .unwrap(),
    )
    .unwrap()
}

fn lex_fibrations() -> Vec<Prefibration> {
    let mut v: Vec<Prefibration> = [
        zoo::terminal(),
        zoo::walking_arrow(),
        zoo::chain(3),
        zoo::square_lattice(),
        zoo::twin_top(),
    ]
    .iter()
    .map(|c| codomain(c).1)
    .collect();
    v.push(Prefibration::new(FinFunctor::identity(Arc::new(zoo::square_lattice()))).unwrap());
    v.push(materialize_subobject(1).unwrap());
    v.push(frobenius_counterexample());
    v
}

#[test]
fn wedge_examples() {
    let id = Prefibration::new(FinFunctor::identity(Arc::new(zoo::square_lattice()))).unwrap();
    let wc = check_wedge(&id, &build_cleavage(&id).unwrap()).unwrap();
    for a in id.base.objects() {
        assert_eq!(wc.top(a), a);
    }
    for fib in lex_fibrations() {
        let cl = build_cleavage(&fib).unwrap();
        assert!(check_wedge(&fib, &cl).is_ok());
    }
    // Two incomparable objects over the point: no fiber terminal.
    let total = Arc::new(zoo::discrete(2));
    let base = Arc::new(zoo::terminal());
    let proj = FinFunctor::new("bang", total, base, vec![0, 0], vec![0, 0]).unwrap();
    let fib = Prefibration::new(proj).unwrap();
    match check_wedge(&fib, &build_cleavage(&fib).unwrap()) {
        Err(WedgeFailure::FiberNotFP { what, .. }) => assert_eq!(what, "terminal object"),
        other => panic!("{other:?}"),
    }
    // a ≤ c ≥ b over the point: a terminal but no product of a and b.
    let fib = bang(zoo::cospan_poset());
    match check_wedge(&fib, &build_cleavage(&fib).unwrap()) {
        Err(WedgeFailure::FiberNotFP { what, .. }) => {
            assert!(what.starts_with("product"), "{what}")
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn pairing_laws() {
    for fib in lex_fibrations() {
        let (t, b) = (&*fib.total, &*fib.base);
        let wc = check_wedge(&fib, &build_cleavage(&fib).unwrap()).unwrap();
        let spans = |p: Ob, g: Mo| -> Vec<(Mo, Mo)> {
            let bt = b.tgt(g);
            let mut out = Vec::new();
            for &q in fib.objects_over(bt) {
                for &r in fib.objects_over(bt) {
                    for &x in fib.hom_over(p, q, g) {
                        for &y in fib.hom_over(p, r, g) {
                            out.push((x, y));
                        }
                    }
                }
            }
            out
        };
        for g in b.morphisms() {
            for &p in fib.objects_over(b.src(g)) {
                for (q, r) in spans(p, g) {
                    let m = wc.pair_over(&fib, q, r).unwrap();
                    let d = wc.meet(t.tgt(q), t.tgt(r));
                    assert_eq!((t.compose(d.proj1, m), t.compose(d.proj2, m)), (q, r));
                    if b.is_identity(g) {
                        let fiber: Vec<Mo> = fib
                            .hom_over(p, d.vertex, g)
                            .iter()
                            .copied()
                            .filter(|&x| t.compose(d.proj1, x) == q && t.compose(d.proj2, x) == r)
                            .collect();
                        assert_eq!(fiber, vec![m]);
                    }
                    // ⟨⟨q, r⟩⟩ ∘ s = ⟨⟨q s, r s⟩⟩.
                    for &s in t.into_obj(p) {
                        let lhs = t.compose(m, s);
                        let rhs = wc
                            .pair_over(&fib, t.compose(q, s), t.compose(r, s))
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
                // ex_g ∘ u = ex_{g f} for u over f into p.
                let ex = wc.ex(&fib, p, g).unwrap();
                for &u in t.into_obj(p) {
                    let gf = b.compose(g, fib.lies_over(u));
                    assert_eq!(t.compose(ex, u), wc.ex(&fib, t.src(u), gf).unwrap());
                }
            }
        }
        // (s ∧∧ t)(p ∧∧ q) = sp ∧∧ tq.
        for p in t.morphisms() {
            for q in t
                .morphisms()
                .filter(|&q| fib.lies_over(q) == fib.lies_over(p))
            {
                let pq = wc.meet_mor(&fib, p, q).unwrap();
                for &s in t.out_of(t.tgt(p)) {
                    for &u in t
                        .out_of(t.tgt(q))
                        .iter()
                        .filter(|&&u| fib.lies_over(u) == fib.lies_over(s))
                    {
                        let lhs = t.compose(wc.meet_mor(&fib, s, u).unwrap(), pq);
                        let rhs = wc.meet_mor(&fib, t.compose(s, p), t.compose(u, q)).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn generalized_diagonals() {
    for c in [zoo::terminal(), zoo::square_lattice(), zoo::twin_top()] {
        let pr = BaseProducts::choose(&c, ChoiceOrder::FIRST).unwrap();
        for y in c.objects() {
            let d = pr.diagonal(&c, y);
            assert!(is_generalized_diagonal(&c, d).is_some());
            for x in c.objects() {
                let m = pr.times(&c, c.id(x), d);
                let w = is_generalized_diagonal(&c, m).unwrap();
                assert_eq!(w.square.p1, m);
            }
        }
    }
    // In a poset generalized diagonals are identities.
    let c = zoo::chain(3);
    assert!(is_generalized_diagonal(&c, c.hom(0, 1)[0]).is_none());
    // A non-injective map of finite sets is not one either.
    let f = zoo::finset_skeleton(2);
    assert!(is_generalized_diagonal(&f, f.morphism("f2to1[00]").unwrap()).is_none());
    assert!(is_generalized_diagonal(&f, f.morphism("f1to2[0]").unwrap()).is_none());
    assert!(is_generalized_diagonal(&f, f.morphism("f1to1[0]").unwrap()).is_some());
}

/// Every Frobenius instance built from a cocartesian morphism.
fn frobenius_instances(fib: &Prefibration) -> Vec<FrobeniusInstance> {
    let (t, b) = (&*fib.total, &*fib.base);
    t.morphisms()
        .filter(|&q| fib.is_cocartesian(q))
        .flat_map(|q| {
            fib.objects_over(b.tgt(fib.lies_over(q)))
                .iter()
                .map(move |&r| FrobeniusInstance { q, r })
        })
        .collect()
}

#[test]
fn frobenius_checks() {
    for c in [
        zoo::walking_arrow(),
        zoo::chain(3),
        zoo::square_lattice(),
        zoo::twin_top(),
    ] {
        let (_, fib) = codomain(&c);
        let wc = check_wedge(&fib, &build_cleavage(&fib).unwrap()).unwrap();
        let insts = frobenius_instances(&fib);
        assert!(!insts.is_empty());
        for inst in insts {
            assert!(check_frobenius(&fib, &wc, inst).unwrap());
        }
    }
    let fib = frobenius_counterexample();
    let wc = check_wedge(&fib, &build_cleavage(&fib).unwrap()).unwrap();
    let t = &*fib.total;
    let (p1, r1, rm) = (
        t.object("p1").unwrap(),
        t.object("r1").unwrap(),
        t.object("rm").unwrap(),
    );
    let q = fib.hom_over(p1, r1, fib.base.hom(0, 1)[0])[0];
    assert!(fib.is_cocartesian(q));
    assert!(!check_frobenius(&fib, &wc, FrobeniusInstance { q, r: rm }).unwrap());
    let failing = frobenius_instances(&fib)
        .into_iter()
        .filter(|&i| !check_frobenius(&fib, &wc, i).unwrap())
        .count();
    assert_eq!(failing, 1);
    // Only plain and generalized diagonals are required to satisfy Frobenius.
    assert!(check_wedgeq(&fib, &wc).is_ok());
    // Isomorphisms over isomorphisms are fine.
    for inst in frobenius_instances(&fib) {
        if t.is_isomorphism(inst.q) {
            assert!(check_frobenius(&fib, &wc, inst).unwrap());
        }
    }
}

#[test]
fn stability_checks() {
    for c in [
        zoo::walking_arrow(),
        zoo::chain(3),
        zoo::square_lattice(),
        zoo::twin_top(),
    ] {
        let (_, fib) = codomain(&c);
        let (t, b) = (&*fib.total, &*fib.base);
        let cl = build_cleavage(&fib).unwrap();
        let mut count = 0;
        for p in t.morphisms().filter(|&p| fib.is_cocartesian(p)) {
            let g = fib.lies_over(p);
            for &k in b.into_obj(b.tgt(g)) {
                for sq in find_pullbacks(b, k, g) {
                    let inst = StabilityInstance {
                        f: sq.p1,
                        g,
                        h: sq.p2,
                        k,
                        p,
                    };
                    assert!(check_stability(&fib, &cl, inst).unwrap());
                    count += 1;
                }
            }
        }
        assert!(count > 0);
        // The identity square.
        let p = t.id(0);
        let ida = b.id(fib.over(0));
        assert!(check_stability(
            &fib,
            &cl,
            StabilityInstance {
                f: ida,
                g: ida,
                h: ida,
                k: ida,
                p
            }
        )
        .unwrap());
    }
}

#[test]
fn wedgeq_on_codomain_fibrations() {
    for c in [
        zoo::terminal(),
        zoo::walking_arrow(),
        zoo::chain(3),
        zoo::square_lattice(),
        zoo::twin_top(),
    ] {
        let (arrow, fib) = codomain(&c);
        let wc = check_wedge(&fib, &build_cleavage(&fib).unwrap()).unwrap();
        let wq = check_wedgeq(&fib, &wc).unwrap();
        for b in c.objects() {
            let (eq, rho) = wq.eq(b);
            assert!(fib.is_cocartesian(rho));
            assert_eq!(fib.total.src(rho), wc.top(b));
            let delta = wq.base.diagonal(&c, b);
            assert_eq!(fib.lies_over(rho), delta);
            // Eq_B is Δ_B as an object of the slice, up to isomorphism.
            let e = arrow.arrow(eq);
            let iso = c
                .hom(b, c.src(e))
                .iter()
                .any(|&i| c.is_isomorphism(i) && c.compose(e, i) == delta);
            assert!(iso, "{}", c.name());
        }
    }
    let id = Prefibration::new(FinFunctor::identity(Arc::new(zoo::square_lattice()))).unwrap();
    let wc = check_wedge(&id, &build_cleavage(&id).unwrap()).unwrap();
    assert!(check_wedgeq(&id, &wc).is_ok());
}

#[test]
fn verdicts_do_not_depend_on_choices() {
    let mut fibs = lex_fibrations();
    fibs.push(bang(zoo::cospan_poset()));
    fibs.push(bang(zoo::discrete(2)));
    for fib in fibs {
        let base_verdict = build_cleavage(&fib)
            .map_err(|e| e.to_string())
            .and_then(|cl| check_wedge(&fib, &cl).map_err(|e| e.to_string()))
            .and_then(|wc| {
                check_wedgeq(&fib, &wc)
                    .map(|_| ())
                    .map_err(|e| e.to_string())
            });
        for seed in 1..4 {
            let order = ChoiceOrder::seeded(seed);
            let cl = eqfib_core::fibcore::build_cleavage_with(&fib, order).unwrap();
            let v = check_wedge_with(&fib, &cl, order)
                .map_err(|e| e.to_string())
                .and_then(|wc| {
                    check_wedgeq_with(&fib, &wc, order)
                        .map(|_| ())
                        .map_err(|e| e.to_string())
                });
            assert_eq!(v.is_ok(), base_verdict.is_ok());
        }
    }
}

/// Morphisms produced by Frobenius instances are again cocartesian, satisfy
/// Frobenius, and are stable along pullbacks.
#[test]
fn derived_cocartesians_are_closed() {
    for fib in [
        codomain(&zoo::square_lattice()).1,
        codomain(&zoo::twin_top()).1,
        materialize_subobject(1).unwrap(),
    ] {
        let b = &*fib.base;
        let cl = build_cleavage(&fib).unwrap();
        let wc: WedgeCleavage = check_wedge(&fib, &cl).unwrap();
        for inst in frobenius_instances(&fib) {
            let f = fib.lies_over(inst.q);
            let d = wc.meet_mor(&fib, inst.q, cl.crt(f, inst.r)).unwrap();
            assert!(fib.is_cocartesian(d));
            for &r in fib.objects_over(b.tgt(f)) {
                assert!(check_frobenius(&fib, &wc, FrobeniusInstance { q: d, r }).unwrap());
            }
            let g = fib.lies_over(d);
            for &k in b.into_obj(b.tgt(g)) {
                for sq in find_pullbacks(b, k, g) {
                    assert!(check_stability(
                        &fib,
                        &cl,
                        StabilityInstance {
                            f: sq.p1,
                            g,
                            h: sq.p2,
                            k,
                            p: d
                        }
                    )
                    .unwrap());
                }
            }
        }
    }
}

#[test]
fn finite_product_bases_are_preorders() {
    // Why a missing diagonal lift cannot be produced by a finite example:
    // binary products force every hom-set to have at most one element.
    for c in [
        zoo::finset_skeleton(2),
        zoo::walking_iso(),
        zoo::parallel_pair(),
        zoo::square_lattice(),
    ] {
        let lex = BaseProducts::choose(&c, ChoiceOrder::FIRST).is_ok();
        let thin = c
            .objects()
            .all(|x| c.objects().all(|y| c.hom(x, y).len() <= 1));
        assert!(!lex || thin, "{}", c.name());
        if lex {
            for y in c.objects() {
                assert!(!find_products(&c, y, y).is_empty());
            }
        }
    }
    // In a fibration, cocartesian lifts along isomorphisms always exist.
    for fib in lex_fibrations() {
        let b = &*fib.base;
        for f in b.morphisms().filter(|&f| b.is_isomorphism(f)) {
            for &p in fib.objects_over(b.src(f)) {
                assert!(!fib.find_cocartesian_lifts(f, p).is_empty());
            }
        }
    }
}
