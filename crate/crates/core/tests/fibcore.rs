use std::sync::Arc;

use eqfib_core::choice::ChoiceOrder;
use eqfib_core::fibcore::{
    build_cleavage, build_cleavage_with, build_op_cleavage, build_op_cleavage_with, cind, cofactor,
    FibError, Prefibration,
};
use eqfib_core::fincat::{
    find_pullbacks, is_pullback_square, zoo, FinCategory, FinFunctor, Mo, PullbackSquare,
};
use eqfib_core::instances::{codomain_prefibration, materialize_subobject, DEFAULT_ARROW_CAP};
use proptest::prelude::*;

fn codomain(c: &FinCategory) -> (eqfib_core::fincat::ArrowCategory, Prefibration) {
    codomain_prefibration(c, DEFAULT_ARROW_CAP).unwrap()
}

fn identity_fibration(c: FinCategory) -> Prefibration {
    Prefibration::new(FinFunctor::identity(Arc::new(c))).unwrap()
}

/// Prefibrations used across the exhaustive checks.
fn zoo_fibrations() -> Vec<Prefibration> {
    let mut out: Vec<Prefibration> = [
        zoo::walking_arrow(),
        zoo::chain(3),
        zoo::square_lattice(),
        zoo::twin_top(),
        zoo::finset_skeleton(2),
    ]
    .iter()
    .map(|c| codomain(c).1)
    .collect();
    out.push(identity_fibration(zoo::walking_iso()));
    out.push(identity_fibration(zoo::parallel_pair()));
    out.push(materialize_subobject(2).unwrap());
    out
}

/// The square `(p, f)` as a pullback-square candidate `y∘p = f∘x`.
fn as_square(arrow: &eqfib_core::fincat::ArrowCategory, m: Mo) -> PullbackSquare {
    let t = &arrow.cat;
    PullbackSquare {
        p1: arrow.top(m),
        p2: arrow.arrow(t.src(m)),
        f: arrow.arrow(t.tgt(m)),
        g: arrow.bottom(m),
    }
}

#[test]
fn fibers() {
    for c in [
        zoo::chain(3),
        zoo::square_lattice(),
        zoo::finset_skeleton(2),
    ] {
        let (arrow, fib) = codomain(&c);
        for a in c.objects() {
            let fa = fib.fiber(a).unwrap();
            let slice = eqfib_core::fincat::slice_category(&c, a);
            assert_eq!(
                fa.objects
                    .iter()
                    .map(|&x| arrow.arrow(x))
                    .collect::<Vec<_>>(),
                slice.objects
            );
            let mut fm: Vec<(u32, u32, Mo)> = fa
                .morphisms
                .iter()
                .map(|&m| (arrow.cat.src(m), arrow.cat.tgt(m), arrow.top(m)))
                .collect();
            let mut sm: Vec<(u32, u32, Mo)> = slice
                .morphisms
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    (
                        slice.objects[slice.cat.src(i as Mo) as usize],
                        slice.objects[slice.cat.tgt(i as Mo) as usize],
                        p,
                    )
                })
                .collect();
            fm.sort();
            sm.sort();
            assert_eq!(fm, sm);
        }
    }
    let id = identity_fibration(zoo::square_lattice());
    for a in id.base.objects() {
        let f = id.fiber(a).unwrap();
        assert_eq!((f.cat.num_objects(), f.cat.num_morphisms()), (1, 1));
    }
    let (_, fib) = codomain(&zoo::walking_arrow());
    assert_eq!(fib.fiber(1).unwrap().cat.num_objects(), 2);
    assert!(matches!(fib.fiber(9), Err(FibError::Cat(_))));
}

#[test]
fn cartesian_and_cocartesian_in_codomain_fibrations() {
    for c in [
        zoo::walking_arrow(),
        zoo::chain(3),
        zoo::square_lattice(),
        zoo::twin_top(),
        zoo::finset_skeleton(2),
    ] {
        let (arrow, fib) = codomain(&c);
        for m in arrow.cat.morphisms() {
            assert_eq!(
                fib.is_cartesian(m),
                is_pullback_square(&c, &as_square(&arrow, m)),
                "{}",
                arrow.cat.mor_name(m)
            );
            assert_eq!(
                fib.is_cocartesian(m),
                c.is_isomorphism(arrow.top(m)),
                "{}",
                arrow.cat.mor_name(m)
            );
        }
    }
}

#[test]
fn cartesian_calculus_exhaustive() {
    for fib in zoo_fibrations() {
        let (t, b) = (&*fib.total, &*fib.base);
        let cart: Vec<bool> = t.morphisms().map(|m| fib.is_cartesian(m)).collect();
        let cocart: Vec<bool> = t.morphisms().map(|m| fib.is_cocartesian(m)).collect();
        let is_fib = fib.is_fibration();
        for m in t.morphisms() {
            if t.is_isomorphism(m) {
                assert!(cart[m as usize] && cocart[m as usize]);
            }
            assert_eq!(cocart[m as usize], fib.opposite().is_cartesian(m));
            if is_fib {
                assert_eq!(
                    cocart[m as usize],
                    fib.is_weakly_cocartesian(m),
                    "{}",
                    t.mor_name(m)
                );
            } else if cocart[m as usize] {
                assert!(fib.is_weakly_cocartesian(m));
            }
            if b.is_isomorphism(fib.lies_over(m)) {
                assert_eq!(cart[m as usize], t.is_isomorphism(m), "{}", t.mor_name(m));
            }
        }
        for q in t.morphisms() {
            for &r in t.out_of(t.tgt(q)) {
                let rq = t.compose(r, q);
                if cart[r as usize] {
                    assert_eq!(
                        cart[rq as usize],
                        cart[q as usize],
                        "two of three at {} . {}",
                        t.mor_name(r),
                        t.mor_name(q)
                    );
                }
                if cocart[q as usize] && cocart[r as usize] {
                    assert!(cocart[rq as usize]);
                }
                // Cancellation against a cartesian r, for parallel morphisms over one base morphism.
                if cart[r as usize] {
                    for &p in fib.hom_over(t.src(q), t.tgt(q), fib.lies_over(q)) {
                        if t.compose(r, p) == rq {
                            assert_eq!(p, q);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn cartesian_lifts_and_cleavages() {
    for fib in zoo_fibrations() {
        let (t, b) = (&*fib.total, &*fib.base);
        if !fib.is_fibration() {
            let (f, q) = fib.fibration_failure().unwrap();
            assert!(fib.find_cartesian_lifts(f, q).is_empty());
            assert!(matches!(
                build_cleavage(&fib),
                Err(FibError::NotAFibration { .. })
            ));
            continue;
        }
        for (f, q) in fib.lift_problems() {
            let lifts = fib.find_cartesian_lifts(f, q);
            assert!(!lifts.is_empty());
            if b.is_identity(f) {
                let isos: Vec<Mo> = fib
                    .objects_over(b.src(f))
                    .iter()
                    .flat_map(|&p| fib.hom_over(p, q, f).iter().copied())
                    .filter(|&m| t.is_isomorphism(m))
                    .collect();
                assert_eq!(lifts, isos);
            }
            for &l1 in &lifts {
                for &l2 in &lifts {
                    let ida = b.id(b.src(f));
                    let is: Vec<Mo> = fib
                        .hom_over(t.src(l1), t.src(l2), ida)
                        .iter()
                        .copied()
                        .filter(|&i| t.compose(l2, i) == l1)
                        .collect();
                    assert_eq!(is.len(), 1);
                    assert!(t.is_isomorphism(is[0]));
                }
            }
        }
        for order in [ChoiceOrder::FIRST, ChoiceOrder::seeded(7)] {
            let cl = build_cleavage_with(&fib, order).unwrap();
            for (f, q) in fib.lift_problems() {
                let l = cl.crt(f, q);
                assert!(fib.is_cartesian(l) && fib.lies_over(l) == f && t.tgt(l) == q);
                if order.is_default() && b.is_identity(f) {
                    assert_eq!(l, t.id(q));
                }
            }
            for f in b.morphisms() {
                let (_, _, functor) = cl.pullback_functor(&fib, f).unwrap();
                assert!(functor.check().is_ok());
            }
        }
    }
}

#[test]
fn codomain_cleavage_is_pullback() {
    let c = zoo::square_lattice();
    let (arrow, fib) = codomain(&c);
    let cl = build_cleavage(&fib).unwrap();
    for f in c.morphisms() {
        for &q in fib.objects_over(c.tgt(f)) {
            let l = cl.crt(f, q);
            let apexes: Vec<u32> = find_pullbacks(&c, arrow.arrow(q), f)
                .iter()
                .map(|s| s.apex(&c))
                .collect();
            assert!(apexes.contains(&c.src(arrow.arrow(arrow.cat.src(l)))));
        }
    }
    let id = identity_fibration(zoo::chain(3));
    let cl = build_cleavage(&id).unwrap();
    for f in id.base.morphisms() {
        assert_eq!(cl.pullback_obj(&id, f, id.base.tgt(f)), id.base.src(f));
    }
}

#[test]
fn factorization_calculus() {
    for fib in zoo_fibrations().into_iter().filter(|f| f.is_fibration()) {
        let (t, b) = (&*fib.total, &*fib.base);
        let cl = build_cleavage(&fib).unwrap();
        let mut checked = 0;
        for p in t.morphisms() {
            let h = fib.lies_over(p);
            // Every factorization h = g∘f of the base morphism under p.
            for f in b.out_of(b.src(h)).iter().copied() {
                for &g in b.hom(b.tgt(f), b.tgt(h)) {
                    if b.compose(g, f) != h {
                        continue;
                    }
                    let m = cind(&fib, &cl, p, f, g).unwrap();
                    assert_eq!(t.compose(cl.crt(g, t.tgt(p)), m), p);
                    assert_eq!(fib.lies_over(m), f);
                    checked += 1;
                }
            }
            // ⟨q⟩ ∘ r = ⟨q ∘ r⟩.
            for &r in t.into_obj(t.src(p)) {
                let (f, g) = (b.id(b.src(h)), h);
                let lhs = t.compose(cind(&fib, &cl, p, f, g).unwrap(), r);
                let rhs = cind(&fib, &cl, t.compose(p, r), fib.lies_over(r), g).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        // f*u = ⟨u ∘ crt_f Q⟩ by definition, and f* preserves composites.
        for f in b.morphisms() {
            let bb = b.tgt(f);
            for u in t.morphisms().filter(|&u| fib.lies_over(u) == b.id(bb)) {
                let fu = cl.pullback_mor(&fib, f, u).unwrap();
                let direct = cind(
                    &fib,
                    &cl,
                    t.compose(u, cl.crt(f, t.src(u))),
                    b.id(b.src(f)),
                    f,
                )
                .unwrap();
                assert_eq!(fu, direct);
            }
        }
        assert!(checked > 0);
        let bad = t.morphisms().find(|&p| !b.is_identity(fib.lies_over(p)));
        if let Some(p) = bad {
            let a = b.src(fib.lies_over(p));
            assert!(matches!(
                cind(&fib, &cl, p, b.id(a), b.id(a)),
                Err(FibError::Precondition(_))
            ));
        }
    }
}

#[test]
fn op_cleavages_and_cofactors() {
    for c in [zoo::chain(3), zoo::square_lattice(), zoo::twin_top()] {
        let (arrow, fib) = codomain(&c);
        let t = &*fib.total;
        let op = build_op_cleavage(&fib).unwrap();
        assert!(op.split || c.name() == "twintop");
        for f in c.morphisms() {
            for &p in fib.objects_over(c.src(f)) {
                let colift = op.colift(f, p);
                assert!(fib.is_cocartesian(colift));
                assert_eq!(arrow.bottom(colift), f);
                // cofactor(q, q) over the identity is the identity.
                assert_eq!(
                    cofactor(&fib, colift, colift, c.id(c.tgt(f))).unwrap(),
                    t.id(t.tgt(colift))
                );
                for &r in t.out_of(p) {
                    let gf = arrow.bottom(r);
                    for &g in c.hom(c.tgt(f), c.tgt(gf)) {
                        if c.compose(g, f) != gf {
                            continue;
                        }
                        let s = cofactor(&fib, colift, r, g).unwrap();
                        assert_eq!(t.compose(s, colift), r);
                        // Dual of ⟨q⟩p = ⟨qp⟩: cofactor(q, u∘r) = u∘cofactor(q, r).
                        for &u in t.out_of(t.tgt(r)) {
                            let g2 = c.compose(arrow.bottom(u), g);
                            assert_eq!(
                                cofactor(&fib, colift, t.compose(u, r), g2).unwrap(),
                                t.compose(u, s)
                            );
                        }
                    }
                }
            }
        }
    }
    let id = identity_fibration(zoo::square_lattice());
    let op = build_op_cleavage(&id).unwrap();
    for f in id.base.morphisms() {
        let p = id.base.src(f);
        assert_eq!(op.colift(f, p), f);
    }
}

#[test]
fn codomain_colifts_are_identity_squares() {
    // In finite sets every (id_X, f) is cocartesian, and choosing those gives
    // a split op-cleavage even though pullbacks are missing.
    let c = zoo::finset_skeleton(2);
    let (arrow, fib) = codomain(&c);
    let op = build_op_cleavage_with(&fib, |_, _, lifts| {
        lifts.iter().copied().find(|&m| c.is_identity(arrow.top(m)))
    })
    .unwrap();
    assert!(op.split);
    for m in arrow.cat.morphisms() {
        if c.is_identity(arrow.top(m)) {
            assert!(fib.is_cocartesian(m));
        }
    }
    for f in c.morphisms() {
        for &p in fib.objects_over(c.src(f)) {
            let colift = op.colift(f, p);
            assert!(c.is_isomorphism(arrow.top(colift)));
        }
    }
}

fn arb_preorder() -> impl Strategy<Value = FinCategory> {
    (1usize..5).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..6).prop_map(move |rel| {
            let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let pairs: Vec<(&str, &str)> = rel.iter().map(|&(a, b)| (refs[a], refs[b])).collect();
            zoo::preorder("P", &refs, &pairs)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Cartesian squares of a codomain prefibration are exactly the pullbacks,
    /// cocartesian ones exactly those with invertible top.
    #[test]
    fn codomain_predicates_on_random_preorders(c in arb_preorder()) {
        let (arrow, fib) = codomain(&c);
        for m in arrow.cat.morphisms() {
            prop_assert_eq!(fib.is_cartesian(m), is_pullback_square(&c, &as_square(&arrow, m)));
            prop_assert_eq!(fib.is_cocartesian(m), c.is_isomorphism(arrow.top(m)));
        }
        let has_pullbacks = c.morphisms().all(|f| c.into_obj(c.tgt(f)).iter().all(|&g| !find_pullbacks(&c, f, g).is_empty()));
        prop_assert_eq!(fib.is_fibration(), has_pullbacks);
    }
}
