use eqfib_core::conformance::{check_conformance, ConformanceScope};
use eqfib_core::fincat::zoo;
use eqfib_core::gpd::{cyclic, explicit_product, GpdFamily, GpdOracle};
use eqfib_core::instances::{build_codomain, codomain_bases, SubobjectOracle};
use std::sync::Arc;

#[test]
fn codomain_oracles_conform() {
    for c in codomain_bases() {
        let o = build_codomain(&c).unwrap().oracle;
        let r = check_conformance(&o, &ConformanceScope::default());
        assert!(r.passed(), "{}: {:?}", c.name(), r.first_failure());
    }
}

#[test]
fn subobject_oracle_conforms() {
    let o = SubobjectOracle::new(3);
    let r = check_conformance(
        &o,
        &ConformanceScope {
            objects: Some(vec![0, 1, 2]),
            cap: 500,
        },
    );
    assert!(r.passed(), "{:?}", r.first_failure());
}

#[test]
fn point_and_z2_family_conforms() {
    let z2 = cyclic(2, "Z2");
    let (z2z2, cone) = explicit_product(&z2, &z2, "Z2xZ2");
    let fam = GpdFamily::new(&[zoo::terminal().with_name("T"), z2, z2z2], "T", &[cone]).unwrap();
    let o = GpdOracle::new(Arc::new(fam));
    let t0 = std::time::Instant::now();
    let r = check_conformance(&o, &ConformanceScope::default());
    eprintln!("{:?} {:#?}", t0.elapsed(), r.checks);
    assert!(r.passed(), "{:?}", r.first_failure());
}
