//! The synthesized 2-category: hom-categories and composition tables over a
//! finite set of base objects, and exhaustive verification of its laws.

use std::collections::HashMap;

use super::{Cell, Htpy, TwoCell};
use crate::exec;
use crate::oracle::{FibrationOracle, Key, OracleError};

pub const DEFAULT_CELL_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{law}: {witness}")]
    Missing { law: &'static str, witness: String },
}

impl SynthError {
    pub fn is_budget(&self) -> bool {
        matches!(self, SynthError::Oracle(OracleError::Budget(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellEntry<T> {
    pub src: u32,
    pub tgt: u32,
    pub body: T,
    in_pos: u32,
    out_pos: u32,
}

/// `HOM(A, B)`: base morphisms `A → B` and the homotopies between them.
#[derive(Debug, Clone)]
pub struct HomCategory<B, T> {
    pub a: usize,
    pub b: usize,
    pub morphisms: Vec<B>,
    pub mor_labels: Vec<String>,
    pub cells: Vec<CellEntry<T>>,
    pub body_labels: Vec<String>,
    /// `hid_f` per morphism.
    pub ident: Vec<u32>,
    pub inverse: Vec<u32>,
    ins: Vec<Vec<u32>>,
    outs: Vec<Vec<u32>>,
    vc: Vec<Vec<u32>>,
    index: HashMap<T, u32>,
}

impl<B: Key, T: Key> HomCategory<B, T> {
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Cells into / out of morphism `g`.
    pub fn cells_into(&self, g: u32) -> &[u32] {
        &self.ins[g as usize]
    }
    pub fn cells_out_of(&self, g: u32) -> &[u32] {
        &self.outs[g as usize]
    }

    pub fn cells_between(&self, f: u32, g: u32) -> impl Iterator<Item = u32> + '_ {
        self.outs[f as usize]
            .iter()
            .copied()
            .filter(move |&c| self.cells[c as usize].tgt == g)
    }

    /// `β·α`, if composable.
    pub fn vcomp(&self, beta: u32, alpha: u32) -> Option<u32> {
        let (b, a) = (&self.cells[beta as usize], &self.cells[alpha as usize]);
        if b.src != a.tgt {
            return None;
        }
        let g = a.tgt as usize;
        Some(self.vc[g][b.out_pos as usize * self.ins[g].len() + a.in_pos as usize])
    }

    pub fn lookup(&self, body: &T) -> Option<u32> {
        self.index.get(body).copied()
    }

    pub fn cell(&self, c: u32) -> TwoCell<B, T> {
        let e = &self.cells[c as usize];
        TwoCell {
            src: self.morphisms[e.src as usize].clone(),
            tgt: self.morphisms[e.tgt as usize].clone(),
            body: e.body.clone(),
        }
    }

    pub fn cell_label(&self, c: u32) -> String {
        let e = &self.cells[c as usize];
        format!(
            "c{}:{}=>{}",
            c, self.mor_labels[e.src as usize], self.mor_labels[e.tgt as usize]
        )
    }
}

#[derive(Debug, Clone)]
pub struct SynthesizedTwoCategory<B, T> {
    pub label: String,
    pub objects: Vec<String>,
    n: usize,
    homs: Vec<HomCategory<B, T>>,
    /// Index of `id_A` in `HOM(A, A)`.
    pub identity: Vec<u32>,
    comp: Vec<Vec<u32>>,
    hcomp: Vec<Vec<u32>>,
}

impl<B: Key, T: Key> SynthesizedTwoCategory<B, T> {
    pub fn num_objects(&self) -> usize {
        self.n
    }
    pub fn hom(&self, a: usize, b: usize) -> &HomCategory<B, T> {
        &self.homs[a * self.n + b]
    }
    pub fn total_cells(&self) -> usize {
        self.homs.iter().map(|h| h.num_cells()).sum()
    }
    pub fn total_morphisms(&self) -> usize {
        self.homs.iter().map(|h| h.morphisms.len()).sum()
    }
    /// `g ∘ f` for `f ∈ Hom(a,b)`, `g ∈ Hom(b,c)`.
    pub fn compose(&self, a: usize, b: usize, c: usize, g: u32, f: u32) -> u32 {
        let nf = self.hom(a, b).morphisms.len();
        self.comp[(a * self.n + b) * self.n + c][g as usize * nf + f as usize]
    }
    /// `β ∘ α` for `α ∈ HOM(a,b)`, `β ∈ HOM(b,c)`.
    pub fn hcomp(&self, a: usize, b: usize, c: usize, beta: u32, alpha: u32) -> u32 {
        let na = self.hom(a, b).num_cells();
        self.hcomp[(a * self.n + b) * self.n + c][beta as usize * na + alpha as usize]
    }
    pub fn find_object(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == label)
    }

    /// Equal tables and bodies, ignoring the label and lookup indices.
    pub fn same_structure(&self, other: &Self) -> bool {
        let hom_eq = |x: &HomCategory<B, T>, y: &HomCategory<B, T>| {
            x.a == y.a
                && x.b == y.b
                && x.morphisms == y.morphisms
                && x.mor_labels == y.mor_labels
                && x.cells == y.cells
                && x.body_labels == y.body_labels
                && x.ident == y.ident
                && x.inverse == y.inverse
                && x.vc == y.vc
        };
        self.objects == other.objects
            && self.identity == other.identity
            && self.comp == other.comp
            && self.hcomp == other.hcomp
            && self.homs.len() == other.homs.len()
            && self.homs.iter().zip(&other.homs).all(|(x, y)| hom_eq(x, y))
    }
}

/// Build every hom-category and composition table over the oracle's 0-cells.
pub fn synthesize<O: FibrationOracle>(
    h: &Htpy<'_, O>,
    cell_budget: usize,
) -> Result<SynthesizedTwoCategory<O::BMor, O::TMor>, SynthError> {
    let o = h.oracle;
    let objs = o.zero_cells();
    let n = objs.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let hom_lists = exec::try_map(&pairs, |&(a, b)| o.b_hom(&objs[a], &objs[b]))?;

    let mut homs = Vec::with_capacity(pairs.len());
    let mut total = 0usize;
    for (&(a, b), morphisms) in pairs.iter().zip(hom_lists) {
        let fg: Vec<(u32, u32)> = (0..morphisms.len() as u32)
            .flat_map(|f| (0..morphisms.len() as u32).map(move |g| (f, g)))
            .collect();
        let lists = exec::try_map(&fg, |&(f, g)| {
            h.enumerate_two_cells(&morphisms[f as usize], &morphisms[g as usize])
        })?;
        total += lists.iter().map(Vec::len).sum::<usize>();
        if total > cell_budget {
            return Err(OracleError::Budget(format!("more than {cell_budget} homotopies")).into());
        }
        let mut cells = Vec::new();
        let mut ins = vec![Vec::new(); morphisms.len()];
        let mut outs = vec![Vec::new(); morphisms.len()];
        for (&(f, g), list) in fg.iter().zip(lists) {
            for TwoCell { body, .. } in list {
                let id = cells.len() as u32;
                cells.push(CellEntry {
                    src: f,
                    tgt: g,
                    body,
                    in_pos: ins[g as usize].len() as u32,
                    out_pos: outs[f as usize].len() as u32,
                });
                ins[g as usize].push(id);
                outs[f as usize].push(id);
            }
        }
        let index = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.body.clone(), i as u32))
            .collect();
        homs.push(HomCategory {
            a,
            b,
            mor_labels: morphisms.iter().map(|m| o.show_bmor(m)).collect(),
            body_labels: cells.iter().map(|c| o.show_tmor(&c.body)).collect(),
            morphisms,
            cells,
            ident: Vec::new(),
            inverse: Vec::new(),
            ins,
            outs,
            vc: Vec::new(),
            index,
        });
    }

    let missing = |law: &'static str, hom: &HomCategory<O::BMor, O::TMor>, what: String| {
        SynthError::Missing {
            law,
            witness: format!(
                "in HOM({}, {}): {}",
                o.show_bobj(&objs[hom.a]),
                o.show_bobj(&objs[hom.b]),
                what
            ),
        }
    };

    // Vertical structure.
    for hom in homs.iter_mut() {
        let cellv: Vec<Cell<O>> = (0..hom.cells.len() as u32).map(|c| hom.cell(c)).collect();
        let ids = exec::try_map(&hom.morphisms, |f| h.hid(f))?;
        hom.ident = ids
            .iter()
            .enumerate()
            .map(|(i, c)| {
                hom.lookup(&c.body)
                    .ok_or_else(|| missing("identity homotopy", hom, hom.mor_labels[i].clone()))
            })
            .collect::<Result<_, _>>()?;
        let invs = exec::try_map(&cellv, |c| h.invert(c))?;
        hom.inverse = invs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                hom.lookup(&c.body)
                    .ok_or_else(|| missing("inverse", hom, hom.cell_label(i as u32)))
            })
            .collect::<Result<_, _>>()?;
        let mut vc = Vec::with_capacity(hom.morphisms.len());
        for g in 0..hom.morphisms.len() {
            let work: Vec<(u32, u32)> = hom.outs[g]
                .iter()
                .flat_map(|&bc| hom.ins[g].iter().map(move |&ac| (bc, ac)))
                .collect();
            let comps = exec::try_map(&work, |&(bc, ac)| {
                h.vcomp(&cellv[bc as usize], &cellv[ac as usize])
            })?;
            let table = comps
                .iter()
                .zip(&work)
                .map(|(c, &(bc, ac))| {
                    hom.lookup(&c.body).ok_or_else(|| {
                        missing(
                            "vertical composite",
                            hom,
                            format!("{} . {}", hom.cell_label(bc), hom.cell_label(ac)),
                        )
                    })
                })
                .collect::<Result<Vec<u32>, _>>()?;
            vc.push(table);
        }
        hom.vc = vc;
    }

    let identity = (0..n)
        .map(|a| {
            let hom = &homs[a * n + a];
            let id = o.b_id(&objs[a]);
            hom.morphisms
                .iter()
                .position(|m| *m == id)
                .map(|i| i as u32)
                .ok_or_else(|| missing("identity morphism", hom, o.show_bmor(&id)))
        })
        .collect::<Result<Vec<u32>, _>>()?;

    // Base composition and horizontal composition.
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
        .collect();
    let mut comp = Vec::with_capacity(triples.len());
    let mut hcomp = Vec::with_capacity(triples.len());
    for &(a, b, c) in &triples {
        let (hab, hbc, hac) = (&homs[a * n + b], &homs[b * n + c], &homs[a * n + c]);
        let mor_pos: HashMap<&O::BMor, u32> = hac
            .morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i as u32))
            .collect();
        let work: Vec<(usize, usize)> = (0..hbc.morphisms.len())
            .flat_map(|g| (0..hab.morphisms.len()).map(move |f| (g, f)))
            .collect();
        let table = exec::try_map(&work, |&(g, f)| -> Result<u32, SynthError> {
            let gf = o.b_comp(&hbc.morphisms[g], &hab.morphisms[f])?;
            mor_pos
                .get(&gf)
                .copied()
                .ok_or_else(|| missing("base composite", hac, o.show_bmor(&gf)))
        })?;
        comp.push(table);

        let beta_cells: Vec<Cell<O>> = (0..hbc.num_cells() as u32).map(|x| hbc.cell(x)).collect();
        let checks = exec::try_map(&beta_cells, |beta| h.beta_check(beta))?;
        let work: Vec<(usize, usize)> = (0..hbc.num_cells())
            .flat_map(|bc| (0..hab.num_cells()).map(move |ac| (bc, ac)))
            .collect();
        let table = exec::try_map(&work, |&(bc, ac)| -> Result<u32, SynthError> {
            let body = o.t_comp(&checks[bc], &hab.cells[ac].body)?;
            hac.lookup(&body).ok_or_else(|| {
                missing(
                    "horizontal composite",
                    hac,
                    format!(
                        "{} o {}",
                        hbc.cell_label(bc as u32),
                        hab.cell_label(ac as u32)
                    ),
                )
            })
        })?;
        hcomp.push(table);
    }

    Ok(SynthesizedTwoCategory {
        label: o.label(),
        objects: objs.iter().map(|x| o.show_bobj(x)).collect(),
        n,
        homs,
        identity,
        comp,
        hcomp,
    })
}

/// Outcome of one law over all its instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub law: &'static str,
    pub instances: u64,
    pub failure: Option<String>,
}

impl LawCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<LawCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(LawCheck::passed)
    }
    pub fn first_failure(&self) -> Option<&LawCheck> {
        self.checks.iter().find(|c| !c.passed())
    }
}

/// Run `per` on every item, summing instance counts and keeping the first
/// failure in item order.
pub(crate) fn tally<X: Sync>(
    law: &'static str,
    items: &[X],
    per: impl Fn(&X) -> (u64, Option<String>) + Sync + Send,
) -> LawCheck {
    let results = exec::map(items, per);
    let instances = results.iter().map(|r| r.0).sum();
    let failure = results.into_iter().find_map(|r| r.1);
    LawCheck {
        law,
        instances,
        failure,
    }
}

pub fn verify_axioms<B: Key, T: Key>(t: &SynthesizedTwoCategory<B, T>) -> AxiomReport {
    let n = t.n;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
        .collect();
    let quads: Vec<(usize, usize, usize, usize)> = triples
        .iter()
        .flat_map(|&(a, b, c)| (0..n).map(move |d| (a, b, c, d)))
        .collect();
    let at = |a: usize, b: usize| format!("({}, {})", t.objects[a], t.objects[b]);
    let mut checks = Vec::new();

    checks.push(tally(
        "base composition is associative and unital",
        &quads,
        |&(a, b, c, d)| {
            let (nab, nbc, ncd) = (
                t.hom(a, b).morphisms.len(),
                t.hom(b, c).morphisms.len(),
                t.hom(c, d).morphisms.len(),
            );
            let mut count = 0;
            for f in 0..nab as u32 {
                if d == 0 {
                    count += 1;
                    let (ia, ib) = (t.identity[a], t.identity[b]);
                    if t.compose(a, a, b, f, ia) != f || t.compose(a, b, b, ib, f) != f {
                        return (
                            count,
                            Some(format!(
                                "unit law at {} in {}",
                                t.hom(a, b).mor_labels[f as usize],
                                at(a, b)
                            )),
                        );
                    }
                }
                for g in 0..nbc as u32 {
                    let gf = t.compose(a, b, c, g, f);
                    for hh in 0..ncd as u32 {
                        count += 1;
                        if t.compose(a, c, d, hh, gf)
                            != t.compose(a, b, d, t.compose(b, c, d, hh, g), f)
                        {
                            return (count, Some(format!("associativity at {}", at(a, d))));
                        }
                    }
                }
            }
            (count, None)
        },
    ));

    checks.push(tally("hom-category identities", &pairs, |&(a, b)| {
        let hom = t.hom(a, b);
        for (i, c) in hom.cells.iter().enumerate() {
            let i = i as u32;
            if hom.vcomp(i, hom.ident[c.src as usize]) != Some(i)
                || hom.vcomp(hom.ident[c.tgt as usize], i) != Some(i)
            {
                return (i as u64 + 1, Some(hom.cell_label(i)));
            }
        }
        (hom.cells.len() as u64, None)
    }));

    checks.push(tally("hom-category associativity", &pairs, |&(a, b)| {
        let hom = t.hom(a, b);
        let mut count = 0;
        for (ai, ac) in hom.cells.iter().enumerate() {
            let ai = ai as u32;
            for &bi in hom.cells_out_of(ac.tgt) {
                let ba = hom.vcomp(bi, ai).unwrap();
                for &ci in hom.cells_out_of(hom.cells[bi as usize].tgt) {
                    count += 1;
                    let lhs = hom.vcomp(ci, ba).unwrap();
                    let rhs = hom.vcomp(hom.vcomp(ci, bi).unwrap(), ai).unwrap();
                    if lhs != rhs {
                        return (
                            count,
                            Some(format!(
                                "{} {} {}",
                                hom.cell_label(ci),
                                hom.cell_label(bi),
                                hom.cell_label(ai)
                            )),
                        );
                    }
                }
            }
        }
        (count, None)
    }));

    checks.push(tally("hom-categories are groupoids", &pairs, |&(a, b)| {
        let hom = t.hom(a, b);
        for (i, c) in hom.cells.iter().enumerate() {
            let (i, inv) = (i as u32, hom.inverse[i]);
            let e = &hom.cells[inv as usize];
            if e.src != c.tgt
                || e.tgt != c.src
                || hom.vcomp(inv, i) != Some(hom.ident[c.src as usize])
                || hom.vcomp(i, inv) != Some(hom.ident[c.tgt as usize])
            {
                return (i as u64 + 1, Some(hom.cell_label(i)));
            }
        }
        (hom.cells.len() as u64, None)
    }));

    checks.push(tally(
        "horizontal composite endpoints",
        &triples,
        |&(a, b, c)| {
            let (hab, hbc, hac) = (t.hom(a, b), t.hom(b, c), t.hom(a, c));
            let mut count = 0;
            for (bi, bc) in hbc.cells.iter().enumerate() {
                for (ai, ac) in hab.cells.iter().enumerate() {
                    count += 1;
                    let r = &hac.cells[t.hcomp(a, b, c, bi as u32, ai as u32) as usize];
                    if r.src != t.compose(a, b, c, bc.src, ac.src)
                        || r.tgt != t.compose(a, b, c, bc.tgt, ac.tgt)
                    {
                        return (
                            count,
                            Some(format!(
                                "{} o {}",
                                hbc.cell_label(bi as u32),
                                hab.cell_label(ai as u32)
                            )),
                        );
                    }
                }
            }
            (count, None)
        },
    ));

    checks.push(tally(
        "horizontal associativity",
        &quads,
        |&(a, b, c, d)| {
            let (hab, hbc, hcd) = (t.hom(a, b), t.hom(b, c), t.hom(c, d));
            let mut count = 0;
            for gi in 0..hcd.num_cells() as u32 {
                for bi in 0..hbc.num_cells() as u32 {
                    let gb = t.hcomp(b, c, d, gi, bi);
                    for ai in 0..hab.num_cells() as u32 {
                        count += 1;
                        let lhs = t.hcomp(a, b, d, gb, ai);
                        let rhs = t.hcomp(a, c, d, gi, t.hcomp(a, b, c, bi, ai));
                        if lhs != rhs {
                            return (
                                count,
                                Some(format!(
                                    "{} {} {}",
                                    hcd.cell_label(gi),
                                    hbc.cell_label(bi),
                                    hab.cell_label(ai)
                                )),
                            );
                        }
                    }
                }
            }
            (count, None)
        },
    ));

    checks.push(tally("horizontal units", &pairs, |&(a, b)| {
        let hom = t.hom(a, b);
        let ida = t.hom(a, a).ident[t.identity[a] as usize];
        let idb = t.hom(b, b).ident[t.identity[b] as usize];
        for i in 0..hom.num_cells() as u32 {
            if t.hcomp(a, a, b, i, ida) != i || t.hcomp(a, b, b, idb, i) != i {
                return (i as u64 + 1, Some(hom.cell_label(i)));
            }
        }
        (hom.num_cells() as u64, None)
    }));

    checks.push(tally(
        "horizontal composite of identities",
        &triples,
        |&(a, b, c)| {
            let (hab, hbc, hac) = (t.hom(a, b), t.hom(b, c), t.hom(a, c));
            let mut count = 0;
            for k in 0..hbc.morphisms.len() as u32 {
                for f in 0..hab.morphisms.len() as u32 {
                    count += 1;
                    let kf = t.compose(a, b, c, k, f);
                    if t.hcomp(a, b, c, hbc.ident[k as usize], hab.ident[f as usize])
                        != hac.ident[kf as usize]
                    {
                        return (
                            count,
                            Some(format!(
                                "hid_{} o hid_{}",
                                hbc.mor_labels[k as usize], hab.mor_labels[f as usize]
                            )),
                        );
                    }
                }
            }
            (count, None)
        },
    ));

    checks.push(tally("interchange", &triples, |&(a, b, c)| {
        let (hab, hbc, hac) = (t.hom(a, b), t.hom(b, c), t.hom(a, c));
        let mut count = 0;
        for g in 0..hab.morphisms.len() as u32 {
            for &alpha in hab.cells_into(g) {
                for &beta in hab.cells_out_of(g) {
                    let ba = hab.vcomp(beta, alpha).unwrap();
                    for l in 0..hbc.morphisms.len() as u32 {
                        for &gamma in hbc.cells_into(l) {
                            let ga = t.hcomp(a, b, c, gamma, alpha);
                            for &delta in hbc.cells_out_of(l) {
                                count += 1;
                                let dg = hbc.vcomp(delta, gamma).unwrap();
                                let lhs = t.hcomp(a, b, c, dg, ba);
                                let rhs = hac.vcomp(t.hcomp(a, b, c, delta, beta), ga);
                                if rhs != Some(lhs) {
                                    return (
                                        count,
                                        Some(format!(
                                            "{} {} {} {}",
                                            hbc.cell_label(delta),
                                            hbc.cell_label(gamma),
                                            hab.cell_label(beta),
                                            hab.cell_label(alpha)
                                        )),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        (count, None)
    }));

    AxiomReport { checks }
}
