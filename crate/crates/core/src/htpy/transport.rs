//! Comparing the 2-categories synthesized from two choices of structure on
//! one fibration.

use super::twocat::{verify_axioms, LawCheck, SynthesizedTwoCategory};
use super::Htpy;
use crate::oracle::{FibrationOracle, OResult, OracleError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportReport {
    pub checks: Vec<LawCheck>,
    /// `verify_axioms` gave the same verdicts and instance counts on both sides.
    pub same_verdicts: bool,
    pub cells: u64,
}

impl TransportReport {
    pub fn passed(&self) -> bool {
        self.same_verdicts && self.checks.iter().all(LawCheck::passed)
    }
}

/// Build `j_B: Eq_B → Eq′_B` over `i = ⟨π₁, π₂⟩′` with `j∘ρ_B = ρ′_B∘!`, map
/// each homotopy `α` to `j∘α∘e` with `e: ⊤′_A → ⊤_A`, and check the map is a bijection on every
/// hom-category commuting with identities, inverses and both compositions.
///
/// Both oracles must present the same underlying fibration and the same
/// base morphisms between 0-cells.
pub fn cleavage_transport<O: FibrationOracle>(
    h1: &Htpy<'_, O>,
    t1: &SynthesizedTwoCategory<O::BMor, O::TMor>,
    h2: &Htpy<'_, O>,
    t2: &SynthesizedTwoCategory<O::BMor, O::TMor>,
) -> OResult<TransportReport> {
    let (o1, o2) = (h1.oracle, h2.oracle);
    let objs = o1.zero_cells();
    if objs != o2.zero_cells() {
        return Err(OracleError::Precondition(
            "no transport: 0-cells differ".into(),
        ));
    }
    let n = objs.len();
    for a in 0..n {
        for b in 0..n {
            if t1.hom(a, b).morphisms != t2.hom(a, b).morphisms {
                return Err(OracleError::Precondition(
                    "no transport: base morphisms differ".into(),
                ));
            }
        }
    }
    let mut js = Vec::with_capacity(n);
    let mut es = Vec::with_capacity(n);
    for b in &objs {
        es.push(o1.ex(&o2.top(b)?, &o1.b_id(b))?);
        let p1 = o1.b_product(b, b)?;
        let i = o2.b_pair(&p1.proj1, &p1.proj2)?;
        let (_, rho1) = o1.eq(b)?;
        let (_, rho2) = o2.eq(b)?;
        // The two terminals over B may differ; compare through ⊤_B → ⊤′_B.
        let e = o2.ex(&o1.t_src(&rho1), &o1.b_id(b))?;
        js.push(o1.cofactor(&rho1, &o2.t_comp(&rho2, &e)?, &i)?);
    }

    // tau[a*n+b][c] = image of cell c of t1.hom(a, b) in t2.hom(a, b).
    let mut tau: Vec<Vec<u32>> = Vec::with_capacity(n * n);
    let mut bij = LawCheck {
        law: "transport is a bijection on homotopies",
        instances: 0,
        failure: None,
    };
    let mut total = 0u64;
    for a in 0..n {
        for b in 0..n {
            let (x, y) = (t1.hom(a, b), t2.hom(a, b));
            let mut map = Vec::with_capacity(x.num_cells());
            let mut hit = vec![false; y.num_cells()];
            for (c, e) in x.cells.iter().enumerate() {
                bij.instances += 1;
                let body = o1.t_comp(&o1.t_comp(&js[b], &e.body)?, &es[a])?;
                match y.lookup(&body) {
                    Some(d)
                        if y.cells[d as usize].src == e.src
                            && y.cells[d as usize].tgt == e.tgt
                            && !hit[d as usize] =>
                    {
                        hit[d as usize] = true;
                        map.push(d);
                    }
                    _ => {
                        bij.failure.get_or_insert_with(|| {
                            format!("{} has no distinct image", x.cell_label(c as u32))
                        });
                        map.push(u32::MAX);
                    }
                }
            }
            if x.num_cells() != y.num_cells() {
                bij.failure.get_or_insert_with(|| {
                    format!("HOM({}, {}) sizes differ", t1.objects[a], t1.objects[b])
                });
            }
            total += x.num_cells() as u64;
            tau.push(map);
        }
    }
    let mut checks = vec![bij];
    if checks[0].passed() {
        let tau_at = |a: usize, b: usize, c: u32| tau[a * n + b][c as usize];
        let mut vert = LawCheck {
            law: "transport respects identities, inverses and vertical composites",
            instances: 0,
            failure: None,
        };
        for a in 0..n {
            for b in 0..n {
                let (x, y) = (t1.hom(a, b), t2.hom(a, b));
                for f in 0..x.morphisms.len() {
                    vert.instances += 1;
                    if tau_at(a, b, x.ident[f]) != y.ident[f] {
                        vert.failure
                            .get_or_insert_with(|| format!("identity at {}", x.mor_labels[f]));
                    }
                }
                for c in 0..x.num_cells() as u32 {
                    vert.instances += 1;
                    if tau_at(a, b, x.inverse[c as usize]) != y.inverse[tau_at(a, b, c) as usize] {
                        vert.failure
                            .get_or_insert_with(|| format!("inverse of {}", x.cell_label(c)));
                    }
                    for &d in x.cells_out_of(x.cells[c as usize].tgt) {
                        vert.instances += 1;
                        let lhs = tau_at(a, b, x.vcomp(d, c).unwrap());
                        if y.vcomp(tau_at(a, b, d), tau_at(a, b, c)) != Some(lhs) {
                            vert.failure.get_or_insert_with(|| {
                                format!("{} . {}", x.cell_label(d), x.cell_label(c))
                            });
                        }
                    }
                }
            }
        }
        let mut horiz = LawCheck {
            law: "transport respects horizontal composites",
            instances: 0,
            failure: None,
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (hab, hbc) = (t1.hom(a, b), t1.hom(b, c));
                    for beta in 0..hbc.num_cells() as u32 {
                        for alpha in 0..hab.num_cells() as u32 {
                            horiz.instances += 1;
                            let lhs = tau_at(a, c, t1.hcomp(a, b, c, beta, alpha));
                            let rhs = t2.hcomp(a, b, c, tau_at(b, c, beta), tau_at(a, b, alpha));
                            if lhs != rhs {
                                horiz.failure.get_or_insert_with(|| {
                                    format!("{} o {}", hbc.cell_label(beta), hab.cell_label(alpha))
                                });
                            }
                        }
                    }
                }
            }
        }
        checks.push(vert);
        checks.push(horiz);
    }
    let (r1, r2) = (verify_axioms(t1), verify_axioms(t2));
    Ok(TransportReport {
        checks,
        same_verdicts: r1 == r2,
        cells: total,
    })
}
