use std::sync::Arc;

use eqfib_core::fincat::{
    arrow_category, find_products, find_pullbacks, find_terminals, is_product_diagram,
    is_pullback_square, is_terminal, opposite, slice_category, validate_category,
    validate_category_capped, zoo, CatError, FinCategory, FinFunctor, Mo, NatError, NatTransform,
    Ob, ProductDiagram, PullbackSquare, RawCategory,
};
use proptest::prelude::*;

fn raw(
    name: &str,
    objects: &[&str],
    morphisms: &[(&str, &str, &str)],
    ids: &[(&str, &str)],
    comps: &[(&str, &str, &str)],
) -> RawCategory {
    let s = |x: &str| x.to_string();
    RawCategory {
        name: name.into(),
        objects: objects.iter().map(|o| s(o)).collect(),
        morphisms: morphisms
            .iter()
            .map(|(m, a, b)| (s(m), s(a), s(b)))
            .collect(),
        identities: ids.iter().map(|(o, m)| (s(o), s(m))).collect(),
        compositions: comps.iter().map(|(g, f, h)| (s(g), s(f), s(h))).collect(),
    }
}

/// Reflexive-transitive closure, computed independently of the kernel.
fn closure(n: usize, rel: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in rel {
        le[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    le
}

fn preorder_from(n: usize, rel: &[(usize, usize)]) -> FinCategory {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let pairs: Vec<(&str, &str)> = rel.iter().map(|&(a, b)| (refs[a], refs[b])).collect();
    zoo::preorder("P", &refs, &pairs)
}

#[test]
fn validation_examples() {
    let t = validate_category(&raw(
        "one",
        &["*"],
        &[("id", "*", "*")],
        &[("*", "id")],
        &[],
    ))
    .unwrap();
    assert_eq!((t.num_objects(), t.num_morphisms()), (1, 1));
    assert!(is_terminal(&t, 0));

    let iso = validate_category(&raw(
        "iso",
        &["a", "b"],
        &[
            ("1a", "a", "a"),
            ("1b", "b", "b"),
            ("i", "a", "b"),
            ("j", "b", "a"),
        ],
        &[("a", "1a"), ("b", "1b")],
        &[("j", "i", "1a"), ("i", "j", "1b")],
    ))
    .unwrap();
    assert!(iso.is_isomorphism(iso.morphism("i").unwrap()));

    // A one-object table with a∘a = b, b∘a = e, a∘b = a, b∘b = b.
    let bad = raw(
        "bad",
        &["*"],
        &[("e", "*", "*"), ("a", "*", "*"), ("b", "*", "*")],
        &[("*", "e")],
        &[
            ("a", "a", "b"),
            ("b", "a", "e"),
            ("a", "b", "a"),
            ("b", "b", "b"),
        ],
    );
    match validate_category(&bad) {
        Err(CatError::AssociativityViolation { h, g, f }) => {
            let c = |x: &str| ["e", "a", "b"].contains(&x);
            assert!(c(&h) && c(&g) && c(&f));
        }
        other => panic!("expected an associativity violation, got {other:?}"),
    }

    let missing = raw(
        "m",
        &["*"],
        &[("e", "*", "*"), ("a", "*", "*")],
        &[("*", "e")],
        &[],
    );
    assert!(matches!(
        validate_category(&missing),
        Err(CatError::MissingComposite { .. })
    ));

    let bad_id = raw(
        "i",
        &["*"],
        &[("e", "*", "*"), ("a", "*", "*")],
        &[("*", "e")],
        &[("e", "a", "e"), ("a", "a", "a")],
    );
    assert!(matches!(
        validate_category(&bad_id),
        Err(CatError::IdentityViolation { .. })
    ));

    let big = zoo::finset_skeleton(2).to_raw();
    assert!(matches!(
        validate_category_capped(&big, 5),
        Err(CatError::SizeCap { cap: 5, .. })
    ));
    assert!(validate_category(&big).is_ok());
}

#[test]
fn terminal_examples() {
    let t = zoo::terminal();
    assert!(is_terminal(&t, 0));
    let c = zoo::chain(3);
    assert!(is_terminal(&c, 2) && !is_terminal(&c, 0));
    let d = zoo::discrete(2);
    assert!(!is_terminal(&d, 0) && !is_terminal(&d, 1));
    assert_eq!(find_terminals(&zoo::twin_top()).len(), 2);
}

#[test]
fn product_examples() {
    // Bottom 0 below 1 and 2: the meet of 1 and 2 is 0.
    let v = preorder_from(3, &[(0, 1), (0, 2)]);
    let ds = find_products(&v, 1, 2);
    assert_eq!(ds.len(), 1);
    assert_eq!(ds[0].vertex, 0);
    assert!(is_product_diagram(&v, &ds[0]));

    let t = zoo::terminal();
    let d = ProductDiagram {
        left: 0,
        vertex: 0,
        right: 0,
        proj1: 0,
        proj2: 0,
    };
    assert!(is_product_diagram(&t, &d));
    assert_eq!(find_products(&t, 0, 0), vec![d]);

    assert!(find_products(&zoo::discrete(2), 0, 1).is_empty());

    // u1, u2: x → v become equal after k: v → y, so the span y ← v → y
    // admits two mediators for the cone (w, w).
    let c = validate_category(&raw(
        "coeq",
        &["x", "v", "y"],
        &[
            ("1x", "x", "x"),
            ("1v", "v", "v"),
            ("1y", "y", "y"),
            ("u1", "x", "v"),
            ("u2", "x", "v"),
            ("k", "v", "y"),
            ("w", "x", "y"),
        ],
        &[("x", "1x"), ("v", "1v"), ("y", "1y")],
        &[("k", "u1", "w"), ("k", "u2", "w")],
    ))
    .unwrap();
    let (v, y, k) = (
        c.object("v").unwrap(),
        c.object("y").unwrap(),
        c.morphism("k").unwrap(),
    );
    assert!(!is_product_diagram(
        &c,
        &ProductDiagram {
            left: y,
            vertex: v,
            right: y,
            proj1: k,
            proj2: k
        }
    ));
}

#[test]
fn products_in_finset_are_unique_up_to_unique_isomorphism() {
    let c = zoo::finset_skeleton(2);
    for a in c.objects() {
        for b in c.objects() {
            let ds = find_products(&c, a, b);
            if a == 2 && b == 2 {
                assert!(ds.is_empty(), "4 is not in the skeleton");
                continue;
            }
            assert!(!ds.is_empty());
            for d in &ds {
                for e in &ds {
                    let isos: Vec<Mo> = c
                        .hom(d.vertex, e.vertex)
                        .iter()
                        .copied()
                        .filter(|&m| {
                            c.compose(e.proj1, m) == d.proj1 && c.compose(e.proj2, m) == d.proj2
                        })
                        .collect();
                    assert_eq!(isos.len(), 1);
                    assert!(c.is_isomorphism(isos[0]));
                }
            }
        }
    }
}

#[test]
fn pullback_of_distinct_points_is_empty() {
    let c = zoo::finset_skeleton(2);
    let (p0, p1) = (
        c.morphism("f1to2[0]").unwrap(),
        c.morphism("f1to2[1]").unwrap(),
    );
    let sqs = find_pullbacks(&c, p0, p1);
    assert!(!sqs.is_empty());
    assert!(sqs.iter().all(|s| c.obj_name(s.apex(&c)) == "0"));
    // The identity leg: (id, g) over (g, id).
    for g in c.morphisms() {
        let (a, b) = (c.src(g), c.tgt(g));
        let sq = PullbackSquare {
            p1: g,
            p2: c.id(a),
            f: c.id(b),
            g,
        };
        assert!(is_pullback_square(&c, &sq));
    }
}

/// All commutative cubes in the finite-set skeleton whose bottom, left and
/// right faces are pullbacks have a pullback top face.
#[test]
fn cube_rule_in_finite_sets() {
    let c = zoo::finset_skeleton(2);
    let mut cubes = 0;
    for b1 in c.morphisms() {
        for b2 in c.into_obj(c.tgt(b1)).iter().copied() {
            for bottom in find_pullbacks(&c, b1, b2) {
                let b3 = c.tgt(b1);
                let (b0, bb1, bb2) = (bottom.apex(&c), c.src(b1), c.src(b2));
                // Front face T2 → T3 over B2 → B3.
                for &v3 in c.into_obj(b3) {
                    let t3 = c.src(v3);
                    for t2 in c.objects() {
                        for &v2 in c.hom(t2, bb2) {
                            for &e23 in c.hom(t2, t3) {
                                if c.compose(v3, e23) != c.compose(b2, v2) {
                                    continue;
                                }
                                for left in find_pullbacks(&c, bottom.p2, v2) {
                                    for right in find_pullbacks(&c, b1, v3) {
                                        let (t0, t1) = (left.apex(&c), right.apex(&c));
                                        let (v0, e02) = (left.p1, left.p2);
                                        let (v1, e13) = (right.p1, right.p2);
                                        assert_eq!(c.tgt(v0), b0);
                                        assert_eq!(c.tgt(v1), bb1);
                                        for &e01 in c.hom(t0, t1) {
                                            let commutes = c.compose(e13, e01)
                                                == c.compose(e23, e02)
                                                && c.compose(v1, e01) == c.compose(bottom.p1, v0);
                                            if !commutes {
                                                continue;
                                            }
                                            cubes += 1;
                                            let top = PullbackSquare {
                                                p1: e01,
                                                p2: e02,
                                                f: e13,
                                                g: e23,
                                            };
                                            assert!(is_pullback_square(&c, &top));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(cubes > 100, "{cubes} cubes");
}

#[test]
fn arrow_and_slice_categories() {
    let t = Arc::new(zoo::terminal());
    let at = arrow_category(&t);
    assert_eq!((at.cat.num_objects(), at.cat.num_morphisms()), (1, 1));

    let w = Arc::new(zoo::walking_arrow());
    let aw = arrow_category(&w);
    assert_eq!(aw.cat.num_objects(), 3);

    for c in [
        zoo::chain(3),
        zoo::finset_skeleton(2),
        zoo::walking_iso(),
        zoo::parallel_pair(),
    ] {
        let c = Arc::new(c);
        let a = arrow_category(&c);
        assert_eq!(a.cat.num_objects(), c.num_morphisms());
        assert!(a.codomain_functor().check().is_ok() && a.domain_functor().check().is_ok());
        for x in c.objects() {
            let s = slice_category(&c, x);
            assert_eq!(s.cat.num_objects(), c.into_obj(x).len());
        }
    }
    let s = slice_category(&zoo::terminal(), 0);
    assert_eq!((s.cat.num_objects(), s.cat.num_morphisms()), (1, 1));
}

#[test]
fn opposite_is_an_involution() {
    for c in [
        zoo::finset_skeleton(2),
        zoo::walking_iso(),
        zoo::square_lattice(),
        zoo::parallel_pair(),
    ] {
        let op = opposite(&c);
        assert_eq!(op.num_morphisms(), c.num_morphisms());
        for m in c.morphisms() {
            assert_eq!((op.src(m), op.tgt(m)), (c.tgt(m), c.src(m)));
        }
        assert_eq!(opposite(&op), c);
    }
}

#[test]
fn functors_and_natural_transformations() {
    let c = Arc::new(zoo::walking_arrow());
    let id = FinFunctor::identity(c.clone());
    assert!(id.check().is_ok());
    // Constant functors at 0 and 1; the arrow is a natural transformation between them.
    let k = |o: Ob| {
        FinFunctor::new(
            format!("const{o}"),
            c.clone(),
            c.clone(),
            vec![o; 2],
            vec![c.id(o); 3],
        )
        .unwrap()
    };
    let arrow = c.hom(0, 1)[0];
    assert!(NatTransform::new(k(0), k(1), vec![arrow, arrow]).is_ok());
    assert!(matches!(
        NatTransform::new(k(1), k(0), vec![arrow, arrow]),
        Err(NatError::Component(_))
    ));
    // Swapping objects is not a functor on the walking arrow.
    assert!(FinFunctor::new(
        "swap",
        c.clone(),
        c.clone(),
        vec![1, 0],
        vec![c.id(1), c.id(0), arrow]
    )
    .is_err());
}

fn arb_relation() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..6).prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..8)))
}

proptest! {
    #[test]
    fn preorder_laws_and_limits((n, rel) in arb_relation()) {
        let c = preorder_from(n, &rel);
        let le = closure(n, &rel);
        prop_assert!(c.associativity_failure().is_none());
        prop_assert_eq!(opposite(&opposite(&c)), c.clone());
        for a in 0..n {
            let brute = (0..n).all(|x| le[x][a]);
            prop_assert_eq!(is_terminal(&c, a as Ob), brute);
        }
        for a in 0..n {
            for b in 0..n {
                let lower = |v: usize| le[v][a] && le[v][b];
                let meets: Vec<usize> = (0..n).filter(|&v| lower(v) && (0..n).all(|x| !lower(x) || le[x][v])).collect();
                let found: Vec<usize> = find_products(&c, a as Ob, b as Ob).iter().map(|d| d.vertex as usize).collect();
                prop_assert_eq!(found.clone(), meets.clone());
                // Pullbacks over a common upper bound are the same meets.
                for t in (0..n).filter(|&t| le[a][t] && le[b][t]) {
                    let f = c.hom(a as Ob, t as Ob)[0];
                    let g = c.hom(b as Ob, t as Ob)[0];
                    let apexes: Vec<usize> = find_pullbacks(&c, f, g).iter().map(|s| s.apex(&c) as usize).collect();
                    prop_assert_eq!(&apexes, &meets);
                }
            }
        }
    }

    #[test]
    fn cyclic_groups_are_categories(n in 1usize..9) {
        let names: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
        let mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let c = zoo::group_category("Zn", &names, &mul);
        prop_assert!(c.associativity_failure().is_none() && c.identity_failure().is_none());
        prop_assert!(c.morphisms().all(|m| c.is_isomorphism(m)));
        let reparsed = validate_category(&c.to_raw()).unwrap();
        prop_assert_eq!(reparsed, c);
    }
}
