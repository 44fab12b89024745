//! Finite products in the synthesized 2-category.

use std::collections::HashSet;

use super::twocat::{LawCheck, SynthesizedTwoCategory};
use super::{Cell, Htpy};
use crate::exec;
use crate::oracle::{FibrationOracle, OResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductsReport {
    pub checks: Vec<LawCheck>,
    /// Homotopies enumerated into product objects.
    pub cells_examined: u64,
}

impl ProductsReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(LawCheck::passed)
    }
}

/// For every pair `(A, B)` and every `C` among `objects` (default: all
/// 0-cells), `⟨π₁∘-, π₂∘-⟩: HOM(C, A×B) → HOM(C, A) × HOM(C, B)` must be
/// bijective on morphisms and on homotopies; and `HOM(C, ⊤)` must have one
/// morphism carrying exactly one homotopy.
pub fn check_two_products<O: FibrationOracle>(
    h: &Htpy<'_, O>,
    t: &SynthesizedTwoCategory<O::BMor, O::TMor>,
    objects: Option<&[usize]>,
) -> OResult<ProductsReport> {
    let o = h.oracle;
    let objs = o.zero_cells();
    let idx: Vec<usize> = objects
        .map(<[usize]>::to_vec)
        .unwrap_or_else(|| (0..objs.len()).collect());
    let mut on_mor = LawCheck {
        law: "2-products on morphisms",
        instances: 0,
        failure: None,
    };
    let mut on_cells = LawCheck {
        law: "2-products on homotopies",
        instances: 0,
        failure: None,
    };
    let mut examined = 0u64;

    for &a in &idx {
        for &b in &idx {
            let pr = o.b_product(&objs[a], &objs[b])?;
            let (w1, w2) = (h.hid(&pr.proj1)?, h.hid(&pr.proj2)?);
            let (k1, k2) = (h.beta_check(&w1)?, h.beta_check(&w2)?);
            for &c in &idx {
                let into = o.b_hom(&objs[c], &pr.vertex)?;
                let (hca, hcb) = (t.hom(c, a), t.hom(c, b));
                // Morphisms.
                let images = exec::try_map(&into, |m| -> OResult<_> {
                    Ok((o.b_comp(&pr.proj1, m)?, o.b_comp(&pr.proj2, m)?))
                })?;
                let distinct: HashSet<_> = images.iter().collect();
                on_mor.instances += (hca.morphisms.len() * hcb.morphisms.len()) as u64;
                let covers = images
                    .iter()
                    .all(|(x, y)| hca.morphisms.contains(x) && hcb.morphisms.contains(y));
                if on_mor.failure.is_none()
                    && (distinct.len() != images.len()
                        || !covers
                        || images.len() != hca.morphisms.len() * hcb.morphisms.len())
                {
                    on_mor.failure = Some(format!(
                        "C={} A={} B={}: {} morphisms into the product, {} pairs",
                        t.objects[c],
                        t.objects[a],
                        t.objects[b],
                        images.len(),
                        hca.morphisms.len() * hcb.morphisms.len()
                    ));
                }
                // Homotopies, per pair of parallel morphisms.
                let pairs: Vec<(usize, usize)> = (0..into.len())
                    .flat_map(|i| (0..into.len()).map(move |j| (i, j)))
                    .collect();
                let results = exec::try_map(&pairs, |&(i, j)| -> OResult<(u64, Option<String>)> {
                    let cells: Vec<Cell<O>> = h.enumerate_two_cells(&into[i], &into[j])?;
                    let (ci, cj) = (&images[i], &images[j]);
                    let pos = |m: &O::BMor, hom: &super::HomCategory<O::BMor, O::TMor>| {
                        hom.morphisms.iter().position(|x| x == m).unwrap() as u32
                    };
                    let left: HashSet<u32> = hca
                        .cells_between(pos(&ci.0, hca), pos(&cj.0, hca))
                        .collect();
                    let right: HashSet<u32> = hcb
                        .cells_between(pos(&ci.1, hcb), pos(&cj.1, hcb))
                        .collect();
                    let mut seen = HashSet::new();
                    for g in &cells {
                        let l = hca.lookup(&o.t_comp(&k1, &g.body)?);
                        let r = hcb.lookup(&o.t_comp(&k2, &g.body)?);
                        match (l, r) {
                            (Some(l), Some(r)) if left.contains(&l) && right.contains(&r) => {
                                seen.insert((l, r));
                            }
                            _ => {
                                return Ok((
                                    cells.len() as u64,
                                    Some(format!(
                                        "whiskered homotopy lands outside at {}",
                                        o.show_tmor(&g.body)
                                    )),
                                ))
                            }
                        }
                    }
                    let bijective =
                        seen.len() == cells.len() && cells.len() == left.len() * right.len();
                    let failure = (!bijective).then(|| {
                        format!(
                            "{} => {}: {} homotopies, {} x {} pairs",
                            o.show_bmor(&into[i]),
                            o.show_bmor(&into[j]),
                            cells.len(),
                            left.len(),
                            right.len()
                        )
                    });
                    Ok((cells.len() as u64, failure))
                })?;
                for (count, failure) in results {
                    examined += count;
                    on_cells.instances += count;
                    if on_cells.failure.is_none() {
                        on_cells.failure = failure;
                    }
                }
            }
        }
    }

    let mut terminal = LawCheck {
        law: "2-terminal object",
        instances: 0,
        failure: None,
    };
    let top = o.b_terminal();
    for &c in &idx {
        terminal.instances += 1;
        let homs = o.b_hom(&objs[c], &top)?;
        let ok = homs.len() == 1 && h.enumerate_two_cells(&homs[0], &homs[0])?.len() == 1;
        if !ok && terminal.failure.is_none() {
            terminal.failure = Some(format!(
                "HOM({}, terminal) is not a single point",
                t.objects[c]
            ));
        }
    }
    Ok(ProductsReport {
        checks: vec![on_mor, on_cells, terminal],
        cells_examined: examined,
    })
}
