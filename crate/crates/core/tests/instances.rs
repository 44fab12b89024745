use eqfib_core::choice::ChoiceOrder;
use eqfib_core::fincat::zoo;
use eqfib_core::htpy::{
    check_two_products, cleavage_transport, synthesize, verify_axioms, verify_psf, Htpy, PsfScope,
};
use eqfib_core::instances::{
    build_codomain, build_codomain_with, codomain_bases, materialize_subobject,
    verify_codomain_triviality, InstanceError, SubobjectOracle,
};
use eqfib_core::oracle::MaterializedOracle;
use std::sync::Arc;

#[test]
fn codomain_instances_are_discrete_and_coherent() {
    for c in codomain_bases() {
        let inst = build_codomain(&c).unwrap_or_else(|e| panic!("{}: {e}", c.name()));
        let mut o = inst.oracle.clone();
        let t = synthesize(&Htpy::new(&o), 100_000).unwrap();
        let ax = verify_axioms(&t);
        assert!(ax.passed(), "{}: {:?}", c.name(), ax.first_failure());
        let triv = verify_codomain_triviality(&t);
        assert!(triv.passed(), "{}: {:?}", c.name(), triv.failure);
        let prod = check_two_products(&Htpy::new(&o), &t, None).unwrap();
        assert!(prod.passed(), "{}: {:?}", c.name(), prod.checks);
        let psf = verify_psf(&mut o, &t, &PsfScope::default()).unwrap();
        assert!(psf.passed(), "{}: {:?}", c.name(), psf.first_failure());
    }
}

#[test]
fn finset_is_not_lex() {
    let err = build_codomain(&zoo::finset_skeleton(2)).unwrap_err();
    assert!(matches!(err, InstanceError::NoFiniteLimits(_)), "{err}");
}

#[test]
fn seeded_codomain_transports() {
    let c = zoo::twin_top();
    for seed in 1..6 {
        let a = build_codomain(&c).unwrap().oracle;
        let b = build_codomain_with(&c, ChoiceOrder::seeded(seed))
            .unwrap()
            .oracle;
        let (ha, hb) = (Htpy::new(&a), Htpy::new(&b));
        let (ta, tb) = (
            synthesize(&ha, 100_000).unwrap(),
            synthesize(&hb, 100_000).unwrap(),
        );
        let r = cleavage_transport(&ha, &ta, &hb, &tb).unwrap();
        assert!(r.passed(), "seed {seed}: {:?}", r.checks);
    }
}

#[test]
fn lazy_subobjects_are_discrete() {
    let mut o = SubobjectOracle::new(3);
    let t = synthesize(&Htpy::new(&o), 100_000).unwrap();
    assert!(verify_axioms(&t).passed());
    assert!(verify_codomain_triviality(&t).passed());
    let prod = check_two_products(&Htpy::new(&o), &t, Some(&[0, 1, 2])).unwrap();
    assert!(prod.passed(), "{:?}", prod.checks);
    let psf = verify_psf(
        &mut o,
        &t,
        &PsfScope {
            objects: Some(vec![0, 1, 2]),
            ..Default::default()
        },
    )
    .unwrap();
    assert!(psf.passed(), "{:?}", psf.first_failure());
}

#[test]
fn small_subobject_fibration_materializes() {
    for k in 0..=1 {
        let fib = Arc::new(materialize_subobject(k).unwrap());
        let o = MaterializedOracle::new(fib, ChoiceOrder::FIRST).unwrap();
        let t = synthesize(&Htpy::new(&o), 100_000).unwrap();
        assert!(verify_codomain_triviality(&t).passed());
    }
    assert!(materialize_subobject(2).unwrap().is_fibration());
}
