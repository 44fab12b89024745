use eqfib_core::gpd::{standard_family, GpdOracle};
use eqfib_core::htpy::Htpy;
use eqfib_core::oracle::FibrationOracle;
use std::sync::Arc;

#[test]
fn automorphism_cells_of_identities() {
    let fam = Arc::new(standard_family());
    let o = GpdOracle::new(fam.clone());
    let h = Htpy::new(&o);
    for (name, cells) in [("Z2", 2), ("S3", 1), ("J", 1), ("T", 1)] {
        let g = fam.member(name).unwrap();
        let id = o.b_id(&g);
        let c = h.enumerate_two_cells(&id, &id).unwrap();
        assert_eq!(c.len(), cells, "{name}");
    }
    let z2 = fam.member("Z2").unwrap();
    let (eq, _) = o.eq(&z2).unwrap();
    assert_eq!(o.store.gpd(o.total_of(eq)).num_objects(), 2);
}

#[test]
fn atoms_synthesize_and_satisfy_axioms() {
    use eqfib_core::htpy::{synthesize, verify_axioms};
    let fam = Arc::new(standard_family());
    let atoms: Vec<_> = ["T", "Z2", "S3", "J"]
        .iter()
        .map(|n| fam.member(n).unwrap())
        .collect();
    let o = GpdOracle::new(fam.clone()).restricted(atoms);
    let t0 = std::time::Instant::now();
    let t = synthesize(&Htpy::new(&o), 100_000).unwrap();
    eprintln!(
        "synth {:?} cells {} mors {}",
        t0.elapsed(),
        t.total_cells(),
        t.total_morphisms()
    );
    let ax = verify_axioms(&t);
    eprintln!("axioms {:?}", t0.elapsed());
    assert!(ax.passed(), "{:?}", ax.first_failure());
}

#[test]
fn full_family_synthesizes() {
    use eqfib_core::htpy::{synthesize, verify_axioms};
    let fam = Arc::new(standard_family());
    let o = GpdOracle::new(fam.clone());
    let t0 = std::time::Instant::now();
    let t = synthesize(&Htpy::new(&o), 100_000).unwrap();
    eprintln!(
        "synth {:?} cells {} mors {} store {:?}",
        t0.elapsed(),
        t.total_cells(),
        t.total_morphisms(),
        o.store
    );
    let ax = verify_axioms(&t);
    eprintln!("axioms {:?}", t0.elapsed());
    assert!(ax.passed(), "{:?}", ax.first_failure());
}

#[test]
fn atoms_psf_products_transport() {
    use eqfib_core::choice::ChoiceOrder;
    use eqfib_core::htpy::{
        check_two_products, cleavage_transport, synthesize, verify_psf, PsfScope,
    };
    let fam = Arc::new(standard_family());
    let t0 = std::time::Instant::now();
    let mut o = GpdOracle::new(fam.clone());
    let t = synthesize(&Htpy::new(&o), 100_000).unwrap();
    let atoms: Vec<usize> = ["T", "Z2", "S3", "J"]
        .iter()
        .map(|n| t.find_object(n).unwrap())
        .collect();
    let prod = check_two_products(&Htpy::new(&o), &t, Some(&atoms)).unwrap();
    eprintln!("products {:?}", t0.elapsed());
    assert!(prod.passed(), "{:?}", prod.checks);
    let psf = verify_psf(
        &mut o,
        &t,
        &PsfScope {
            objects: Some(atoms.clone()),
            ..Default::default()
        },
    )
    .unwrap();
    eprintln!("psf {:?}", t0.elapsed());
    assert!(psf.passed(), "{:?}", psf.first_failure());
    for seed in 1..4 {
        let o2 = GpdOracle::with_order(fam.clone(), ChoiceOrder::seeded(seed));
        let t2 = synthesize(&Htpy::new(&o2), 100_000).unwrap();
        let r = cleavage_transport(&Htpy::new(&o), &t, &Htpy::new(&o2), &t2).unwrap();
        eprintln!("transport {seed} {:?}", t0.elapsed());
        assert!(r.passed(), "{:?}", r.checks);
    }
}
