use eqfib_core::fincat::zoo;
use eqfib_core::gpd::{standard_family, GpdOracle};
use eqfib_core::htpy::{synthesize, Htpy};
use eqfib_core::instances::{build_codomain, codomain_bases};
use eqfib_core::oracle::{BaseOps, FibrationOracle, OracleError};
use proptest::prelude::*;
use std::sync::Arc;

fn atoms() -> GpdOracle {
    let fam = Arc::new(standard_family());
    let atoms: Vec<_> = ["T", "Z2", "S3", "J"]
        .iter()
        .map(|n| fam.member(n).unwrap())
        .collect();
    GpdOracle::new(fam).restricted(atoms)
}

/// Laws of the equality family at every 0-cell.
fn eq_family_laws<O: FibrationOracle>(o: &O) {
    let h = Htpy::new(o);
    for b in o.zero_cells() {
        let (_, rho) = o.eq(&b).unwrap();
        for (i, j) in [(1, 2), (2, 3), (1, 3), (3, 1)] {
            let e = h.eq_ij(&b, 3, i, j).unwrap();
            assert_eq!(
                o.t_comp(&e.crt, &e.rho).unwrap(),
                rho,
                "crt ∘ ρ^{i}{j} at {}",
                o.show_bobj(&b)
            );
        }
        let (r12, r23, r13) = (
            h.eq_ij(&b, 3, 1, 2).unwrap().rho,
            h.eq_ij(&b, 3, 2, 3).unwrap().rho,
            h.eq_ij(&b, 3, 1, 3).unwrap().rho,
        );
        let paired = o.pair_over(&r12, &r23).unwrap();
        assert_eq!(
            o.t_comp(&h.tr(&b, 3, 1, 2, 3).unwrap(), &paired).unwrap(),
            r13
        );
        assert_eq!(o.t_comp(&h.sym(&b).unwrap(), &rho).unwrap(), rho);
        let id = o.b_id(&b);
        assert_eq!(
            h.beta_check(&h.hid(&id).unwrap()).unwrap(),
            o.t_id(&o.eq(&b).unwrap().0).unwrap()
        );
    }
}

/// Groupoid laws of homotopies on every parallel pair, plus `β̌ ∘ ρ = β`.
fn cell_laws<O: FibrationOracle>(o: &O) -> usize {
    let h = Htpy::new(o);
    let objs = o.zero_cells();
    let mut seen = 0;
    for a in &objs {
        for b in &objs {
            let (_, rho_a) = o.eq(a).unwrap();
            let fs = o.b_hom(a, b).unwrap();
            for f in &fs {
                let hf = h.hid(f).unwrap();
                assert_eq!(h.invert(&hf).unwrap(), hf);
                for g in &fs {
                    for alpha in h.enumerate_two_cells(f, g).unwrap() {
                        seen += 1;
                        assert_eq!(h.vcomp(&alpha, &hf).unwrap(), alpha);
                        assert_eq!(h.vcomp(&h.hid(g).unwrap(), &alpha).unwrap(), alpha);
                        let inv = h.invert(&alpha).unwrap();
                        assert_eq!(h.invert(&inv).unwrap(), alpha);
                        assert_eq!(h.vcomp(&inv, &alpha).unwrap(), hf);
                        let check = h.beta_check(&alpha).unwrap();
                        assert_eq!(o.t_comp(&check, &rho_a).unwrap(), alpha.body);
                    }
                }
            }
        }
    }
    seen
}

#[test]
fn equality_family_on_codomain_instances() {
    for c in codomain_bases() {
        eq_family_laws(&build_codomain(&c).unwrap().oracle);
    }
}

#[test]
fn equality_family_on_groupoid_atoms() {
    eq_family_laws(&atoms());
}

#[test]
fn homotopies_form_groupoids() {
    for c in codomain_bases() {
        let o = build_codomain(&c).unwrap().oracle;
        cell_laws(&o);
    }
    // Z2 carries two automorphisms of its identity.
    assert!(cell_laws(&atoms()) > 0);
}

#[test]
fn codomain_homotopies_are_equalities() {
    let o = build_codomain(&zoo::square_lattice()).unwrap().oracle;
    let h = Htpy::new(&o);
    let objs = o.zero_cells();
    for a in &objs {
        for b in &objs {
            let fs = o.b_hom(a, b).unwrap();
            for f in &fs {
                for g in &fs {
                    let n = h.enumerate_two_cells(f, g).unwrap().len();
                    assert_eq!(
                        n,
                        usize::from(f == g),
                        "{} {}",
                        o.show_bmor(f),
                        o.show_bmor(g)
                    );
                }
            }
        }
    }
}

#[test]
fn identity_homotopies_compose_horizontally() {
    let o = atoms();
    let h = Htpy::new(&o);
    let objs = o.zero_cells();
    for a in &objs {
        for b in &objs {
            for c in &objs {
                for f in o.b_hom(a, b).unwrap() {
                    for k in o.b_hom(b, c).unwrap() {
                        let lhs = h.hcomp(&h.hid(&k).unwrap(), &h.hid(&f).unwrap()).unwrap();
                        assert_eq!(lhs, h.hid(&o.b_comp(&k, &f).unwrap()).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn non_parallel_pairs_are_rejected() {
    let o = build_codomain(&zoo::walking_arrow()).unwrap().oracle;
    let h = Htpy::new(&o);
    let objs = o.zero_cells();
    let (x, y) = (&objs[0], &objs[1]);
    let f = o.b_id(x);
    let g = o.b_id(y);
    match h.enumerate_two_cells(&f, &g) {
        Err(OracleError::Precondition(m)) => assert!(m.contains("not parallel"), "{m}"),
        other => panic!("expected a precondition failure, got {other:?}"),
    }
    let hf = h.hid(&f).unwrap();
    let hg = h.hid(&g).unwrap();
    assert!(h.vcomp(&hg, &hf).is_err());
}

#[test]
fn actions_of_homotopies_are_invertible() {
    let o = atoms();
    let h = Htpy::new(&o);
    let objs = o.zero_cells();
    for a in &objs {
        for b in &objs {
            let fs = o.b_hom(a, b).unwrap();
            for f in &fs {
                for g in &fs {
                    for alpha in h.enumerate_two_cells(f, g).unwrap() {
                        let inv = h.invert(&alpha).unwrap();
                        for p in o.fiber_sample(b).unwrap() {
                            let s = h.alpha_star(&alpha, &p).unwrap();
                            let t = h.alpha_star(&inv, &p).unwrap();
                            let st = o.t_comp(&t, &s).unwrap();
                            assert_eq!(st, o.t_id(&o.t_src(&s)).unwrap());
                            let ts = o.t_comp(&s, &t).unwrap();
                            assert_eq!(ts, o.t_id(&o.t_src(&t)).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn nat_restricts_to_the_identity_along_the_diagonal() {
    let o = atoms();
    let h = Htpy::new(&o);
    for b in o.zero_cells() {
        let (_, rho) = o.eq(&b).unwrap();
        let pr = o.b_product(&b, &b).unwrap();
        let delta = o.b_diagonal(&b).unwrap();
        for p in o.fiber_sample(&b).unwrap() {
            let idp = o.t_id(&p).unwrap();
            let c1 = o.cind(&idp, &delta, &pr.proj1).unwrap();
            let c2 = o.cind(&idp, &delta, &pr.proj2).unwrap();
            let e = o.t_comp(&rho, &o.ex(&p, &o.b_id(&b)).unwrap()).unwrap();
            let q = o.pair_over(&c1, &e).unwrap();
            assert_eq!(o.t_comp(&h.nat(&b, &p).unwrap(), &q).unwrap(), c2);
        }
    }
}

#[test]
fn cell_budget_is_enforced() {
    let o = atoms();
    let err = synthesize(&Htpy::new(&o), 2).unwrap_err();
    assert!(err.is_budget(), "{err}");
    let c = build_codomain(&zoo::chain(3)).unwrap().oracle;
    assert!(synthesize(&Htpy::new(&c), 100_000).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn codomain_cells_on_random_chains(n in 1usize..5) {
        let o = build_codomain(&zoo::chain(n)).unwrap().oracle;
        let t = synthesize(&Htpy::new(&o), 100_000).unwrap();
        prop_assert_eq!(t.total_cells(), t.total_morphisms());
        cell_laws(&o);
    }
}
