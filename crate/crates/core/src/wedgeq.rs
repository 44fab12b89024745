//! Fiberwise finite products, their stability under pullback, and equality
//! objects: the ∧- and ∧=-structure of a finite fibration.

use std::collections::HashMap;

use crate::choice::ChoiceOrder;
use crate::exec;
use crate::fibcore::{cind, Cleavage, FibError, Prefibration};
use crate::fincat::{
    find_products, find_terminals, is_product_diagram, is_pullback_square, is_terminal,
    FinCategory, LimitFailure, Mo, Ob, ProductDiagram, PullbackSquare,
};

/// Chosen terminal object and binary products of a finite category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseProducts {
    pub terminal: Ob,
    prods: HashMap<(Ob, Ob), ProductDiagram>,
}

impl BaseProducts {
    pub fn choose(c: &FinCategory, order: ChoiceOrder) -> Result<Self, LimitFailure> {
        let terminal = order
            .pick(&[1], &find_terminals(c))
            .ok_or(LimitFailure::NoTerminal)?;
        let pairs: Vec<(Ob, Ob)> = c
            .objects()
            .flat_map(|a| c.objects().map(move |b| (a, b)))
            .collect();
        let found = exec::map(&pairs, |&(a, b)| {
            order.pick(&[2, a as u64, b as u64], &find_products(c, a, b))
        });
        let mut prods = HashMap::new();
        for (&(a, b), d) in pairs.iter().zip(found) {
            let d = d.ok_or_else(|| {
                LimitFailure::NoProduct(c.obj_name(a).into(), c.obj_name(b).into())
            })?;
            prods.insert((a, b), d);
        }
        Ok(BaseProducts { terminal, prods })
    }

    pub fn product(&self, a: Ob, b: Ob) -> ProductDiagram {
        self.prods[&(a, b)]
    }

    pub fn to_terminal(&self, c: &FinCategory, a: Ob) -> Mo {
        c.hom(a, self.terminal)[0]
    }

    /// `⟨f, g⟩` into the chosen product.
    pub fn pair(&self, c: &FinCategory, f: Mo, g: Mo) -> Mo {
        let d = self.product(c.tgt(f), c.tgt(g));
        let hits: Vec<Mo> = c
            .hom(c.src(f), d.vertex)
            .iter()
            .copied()
            .filter(|&m| c.compose(d.proj1, m) == f && c.compose(d.proj2, m) == g)
            .collect();
        assert_eq!(hits.len(), 1, "chosen product has a unique mediator");
        hits[0]
    }

    pub fn diagonal(&self, c: &FinCategory, b: Ob) -> Mo {
        self.pair(c, c.id(b), c.id(b))
    }

    /// `f × g = ⟨f π₁, g π₂⟩`.
    pub fn times(&self, c: &FinCategory, f: Mo, g: Mo) -> Mo {
        let d = self.product(c.src(f), c.src(g));
        self.pair(c, c.compose(f, d.proj1), c.compose(g, d.proj2))
    }

    /// `B^n`, bracketed to the left; `B^1 = B`.
    pub fn power(&self, b: Ob, n: usize) -> Ob {
        assert!(n >= 1);
        (1..n).fold(b, |acc, _| self.product(acc, b).vertex)
    }

    /// `π_i: B^n → B`, `1 ≤ i ≤ n`.
    pub fn proj(&self, c: &FinCategory, b: Ob, n: usize, i: usize) -> Mo {
        assert!(1 <= i && i <= n);
        if n == 1 {
            return c.id(b);
        }
        let d = self.product(self.power(b, n - 1), b);
        if i == n {
            d.proj2
        } else {
            c.compose(self.proj(c, b, n - 1, i), d.proj1)
        }
    }

    /// Left-bracketed tuple `⟨f₁, …, fₙ⟩`.
    pub fn tuple(&self, c: &FinCategory, fs: &[Mo]) -> Mo {
        let mut acc = fs[0];
        for &f in &fs[1..] {
            acc = self.pair(c, acc, f);
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WedgeFailure {
    #[error("fiber over {base} has no {what}")]
    FiberNotFP { base: String, what: String },
    #[error("pulling the terminal back along {f} gives {pulled}, which is not terminal")]
    TerminalNotStable { f: String, pulled: String },
    #[error("pulling the product of {p} and {q} back along {f} does not give a product")]
    ProductNotStable { f: String, p: String, q: String },
    #[error(transparent)]
    Fib(#[from] FibError),
}

/// A cleavage together with chosen fiber terminals and fiber products.
#[derive(Debug, Clone)]
pub struct WedgeCleavage {
    pub cleavage: Cleavage,
    top: Vec<Ob>,
    meets: HashMap<(Ob, Ob), ProductDiagram>,
}

pub fn check_wedge(fib: &Prefibration, cl: &Cleavage) -> Result<WedgeCleavage, WedgeFailure> {
    check_wedge_with(fib, cl, ChoiceOrder::FIRST)
}

pub fn check_wedge_with(
    fib: &Prefibration,
    cl: &Cleavage,
    order: ChoiceOrder,
) -> Result<WedgeCleavage, WedgeFailure> {
    let (t, b) = (&*fib.total, &*fib.base);
    let bases: Vec<Ob> = b.objects().collect();
    let per_fiber = exec::try_map(
        &bases,
        |&a| -> Result<(Ob, Vec<((Ob, Ob), ProductDiagram)>), WedgeFailure> {
            let fa = fib.fiber(a)?;
            let not_fp = |what: String| WedgeFailure::FiberNotFP {
                base: b.obj_name(a).into(),
                what,
            };
            let top = order
                .pick(&[3, a as u64], &find_terminals(&fa.cat))
                .ok_or_else(|| not_fp("terminal object".into()))?;
            let mut meets = Vec::new();
            for p in fa.cat.objects() {
                for q in fa.cat.objects() {
                    let d = order
                        .pick(
                            &[4, a as u64, p as u64, q as u64],
                            &find_products(&fa.cat, p, q),
                        )
                        .ok_or_else(|| {
                            not_fp(format!(
                                "product of {} and {}",
                                fa.cat.obj_name(p),
                                fa.cat.obj_name(q)
                            ))
                        })?;
                    let g = |o: Ob| fa.objects[o as usize];
                    let h = |m: Mo| fa.morphisms[m as usize];
                    meets.push((
                        (g(p), g(q)),
                        ProductDiagram {
                            left: g(d.left),
                            vertex: g(d.vertex),
                            right: g(d.right),
                            proj1: h(d.proj1),
                            proj2: h(d.proj2),
                        },
                    ));
                }
            }
            Ok((fa.objects[top as usize], meets))
        },
    )?;
    let mut top = Vec::new();
    let mut meets = HashMap::new();
    for (tp, ms) in per_fiber {
        top.push(tp);
        meets.extend(ms);
    }
    let wc = WedgeCleavage {
        cleavage: cl.clone(),
        top,
        meets,
    };

    // Stability of terminals and products under every pullback functor.
    let morphisms: Vec<Mo> = b.morphisms().collect();
    let failure = exec::find_map_first(&morphisms, |&f| -> Option<WedgeFailure> {
        let (a, bb) = (b.src(f), b.tgt(f));
        let fa = match fib.fiber(a) {
            Ok(x) => x,
            Err(e) => return Some(e.into()),
        };
        let pulled = cl.pullback_obj(fib, f, wc.top(bb));
        if !is_terminal(&fa.cat, fa.local_obj(pulled)?) {
            return Some(WedgeFailure::TerminalNotStable {
                f: b.mor_name(f).into(),
                pulled: t.obj_name(pulled).into(),
            });
        }
        for &p in fib.objects_over(bb) {
            for &q in fib.objects_over(bb) {
                let d = wc.meet(p, q);
                let pm = |m: Mo| {
                    cl.pullback_mor(fib, f, m)
                        .ok()
                        .and_then(|x| fa.local_mor(x))
                };
                let local = (|| {
                    Some(ProductDiagram {
                        left: fa.local_obj(cl.pullback_obj(fib, f, p))?,
                        vertex: fa.local_obj(cl.pullback_obj(fib, f, d.vertex))?,
                        right: fa.local_obj(cl.pullback_obj(fib, f, q))?,
                        proj1: pm(d.proj1)?,
                        proj2: pm(d.proj2)?,
                    })
                })();
                if !local.is_some_and(|ld| is_product_diagram(&fa.cat, &ld)) {
                    return Some(WedgeFailure::ProductNotStable {
                        f: b.mor_name(f).into(),
                        p: t.obj_name(p).into(),
                        q: t.obj_name(q).into(),
                    });
                }
            }
        }
        None
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(wc),
    }
}

impl WedgeCleavage {
    /// `⊤_A`.
    pub fn top(&self, a: Ob) -> Ob {
        self.top[a as usize]
    }

    /// Chosen product `P ∧ Q` in the fiber, in total indices.
    pub fn meet(&self, p: Ob, q: Ob) -> ProductDiagram {
        self.meets[&(p, q)]
    }

    /// `ex_g: P → ⊤_{cod g}`, the unique morphism over `g`.
    pub fn ex(&self, fib: &Prefibration, p: Ob, g: Mo) -> Result<Mo, FibError> {
        let hits = fib.hom_over(p, self.top(fib.base.tgt(g)), g);
        match hits.len() {
            1 => Ok(hits[0]),
            0 => Err(FibError::NoFactorization(format!(
                "ex_{}",
                fib.base.mor_name(g)
            ))),
            count => Err(FibError::NonUniqueFactorization {
                morphism: format!("ex_{}", fib.base.mor_name(g)),
                count,
            }),
        }
    }

    /// `⟨⟨q, r⟩⟩` for `q: P → Q`, `r: P → R` over the same `g`, computed by
    /// pairing the factorizations in the fiber and composing with the lift,
    /// then checked to be the only morphism with both projections.
    pub fn pair_over(&self, fib: &Prefibration, q: Mo, r: Mo) -> Result<Mo, FibError> {
        let (t, b) = (&*fib.total, &*fib.base);
        let g = fib.lies_over(q);
        if fib.lies_over(r) != g || t.src(q) != t.src(r) {
            return Err(FibError::Precondition(
                "pair_over needs a span over one base morphism".into(),
            ));
        }
        let p = t.src(q);
        let a = b.src(g);
        let ida = b.id(a);
        let d = self.meet(t.tgt(q), t.tgt(r));
        let cl = &self.cleavage;
        let (cq, cr) = (cind(fib, cl, q, ida, g)?, cind(fib, cl, r, ida, g)?);
        let (g1, g2) = (
            cl.pullback_mor(fib, g, d.proj1)?,
            cl.pullback_mor(fib, g, d.proj2)?,
        );
        let vertex = cl.pullback_obj(fib, g, d.vertex);
        let mediators: Vec<Mo> = fib
            .hom_over(p, vertex, ida)
            .iter()
            .copied()
            .filter(|&m| t.compose(g1, m) == cq && t.compose(g2, m) == cr)
            .collect();
        if mediators.len() != 1 {
            return Err(FibError::NonUniqueFactorization {
                morphism: "fiber pairing".into(),
                count: mediators.len(),
            });
        }
        let m = t.compose(cl.crt(g, d.vertex), mediators[0]);
        let direct: Vec<Mo> = fib
            .hom_over(p, d.vertex, g)
            .iter()
            .copied()
            .filter(|&x| t.compose(d.proj1, x) == q && t.compose(d.proj2, x) == r)
            .collect();
        if direct != [m] {
            return Err(FibError::NonUniqueFactorization {
                morphism: "pair_over".into(),
                count: direct.len(),
            });
        }
        Ok(m)
    }

    /// `q ∧∧ r = ⟨⟨q π₁, r π₂⟩⟩` for `q`, `r` over the same base morphism.
    pub fn meet_mor(&self, fib: &Prefibration, q: Mo, r: Mo) -> Result<Mo, FibError> {
        let t = &*fib.total;
        let d = self.meet(t.src(q), t.src(r));
        self.pair_over(fib, t.compose(q, d.proj1), t.compose(r, d.proj2))
    }
}

/// A Frobenius instance: cocartesian `q` over `f` and an object `r` over `cod f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrobeniusInstance {
    pub q: Mo,
    pub r: Ob,
}

/// Base pullback square `k∘f = g∘h` (`f` top, `g` bottom, `h` left, `k`
/// right) with `p` cocartesian over `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StabilityInstance {
    pub f: Mo,
    pub g: Mo,
    pub h: Mo,
    pub k: Mo,
    pub p: Mo,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WedgeqFailure {
    #[error("no cocartesian lift of the diagonal of {b} out of the fiber terminal")]
    NoDiagonalLift { b: String },
    #[error("Frobenius fails for {q} against {r}: {detail}")]
    FrobeniusFails {
        q: String,
        r: String,
        detail: String,
    },
    #[error("stability fails for {p} along {k}: {detail}")]
    StabilityFails {
        p: String,
        k: String,
        detail: String,
    },
    #[error("ill-formed instance: {0}")]
    IllFormedInstance(String),
    #[error("base lacks chosen finite products: {0}")]
    NoBaseProducts(#[from] LimitFailure),
    #[error(transparent)]
    Fib(#[from] FibError),
}

fn describe_failure(fib: &Prefibration, m: Mo) -> String {
    match fib.cocartesian_failure(m) {
        None => "ok".into(),
        Some(crate::fibcore::BijectionFailure::NotInjective { f, p, a, b }) => format!(
            "two morphisms {} and {} out of {} over {} collapse",
            fib.total.mor_name(a),
            fib.total.mor_name(b),
            fib.total.obj_name(p),
            fib.base.mor_name(f)
        ),
        Some(crate::fibcore::BijectionFailure::NotSurjective { f, p, r }) => format!(
            "{} over {} at {} does not factor",
            fib.total.mor_name(r),
            fib.base.mor_name(f),
            fib.total.obj_name(p)
        ),
    }
}

/// `q ∧∧ crt_f R` stays cocartesian.
pub fn check_frobenius(
    fib: &Prefibration,
    wc: &WedgeCleavage,
    inst: FrobeniusInstance,
) -> Result<bool, WedgeqFailure> {
    frobenius_morphism(fib, wc, inst).map(|m| fib.is_cocartesian(m))
}

fn frobenius_morphism(
    fib: &Prefibration,
    wc: &WedgeCleavage,
    inst: FrobeniusInstance,
) -> Result<Mo, WedgeqFailure> {
    let f = fib.lies_over(inst.q);
    if fib.over(inst.r) != fib.base.tgt(f) {
        return Err(WedgeqFailure::IllFormedInstance(
            "object does not lie over the codomain".into(),
        ));
    }
    Ok(wc.meet_mor(fib, inst.q, wc.cleavage.crt(f, inst.r))?)
}

/// The induced `p′` over `f` (the cind of `p ∘ crt_h(dom p)` through `crt_k(cod p)`) stays cocartesian.
pub fn check_stability(
    fib: &Prefibration,
    cl: &Cleavage,
    inst: StabilityInstance,
) -> Result<bool, WedgeqFailure> {
    stability_morphism(fib, cl, inst).map(|m| fib.is_cocartesian(m))
}

fn stability_morphism(
    fib: &Prefibration,
    cl: &Cleavage,
    inst: StabilityInstance,
) -> Result<Mo, WedgeqFailure> {
    let (t, b) = (&*fib.total, &*fib.base);
    let sq = PullbackSquare {
        p1: inst.f,
        p2: inst.h,
        f: inst.k,
        g: inst.g,
    };
    if !is_pullback_square(b, &sq) || fib.lies_over(inst.p) != inst.g {
        return Err(WedgeqFailure::IllFormedInstance(
            "base square is not a pullback over p".into(),
        ));
    }
    let s = cl.crt(inst.h, t.src(inst.p));
    Ok(cind(fib, cl, t.compose(inst.p, s), inst.f, inst.k)?)
}

/// Equality objects on top of a ∧-cleavage.
#[derive(Debug, Clone)]
pub struct WedgeqCleavage {
    pub wedge: WedgeCleavage,
    pub base: BaseProducts,
    eq: Vec<(Ob, Mo)>,
}

impl WedgeqCleavage {
    /// `(Eq_B, ρ_B)`.
    pub fn eq(&self, b: Ob) -> (Ob, Mo) {
        self.eq[b as usize]
    }
}

pub fn check_wedgeq(
    fib: &Prefibration,
    wc: &WedgeCleavage,
) -> Result<WedgeqCleavage, WedgeqFailure> {
    check_wedgeq_with(fib, wc, ChoiceOrder::FIRST)
}

pub fn check_wedgeq_with(
    fib: &Prefibration,
    wc: &WedgeCleavage,
    order: ChoiceOrder,
) -> Result<WedgeqCleavage, WedgeqFailure> {
    let (t, b) = (&*fib.total, &*fib.base);
    let base = BaseProducts::choose(b, order)?;
    let objs: Vec<Ob> = b.objects().collect();
    let lifts = exec::map(&objs, |&bb| {
        let delta = base.diagonal(b, bb);
        let top = wc.top(bb);
        let cands: Vec<Mo> = fib
            .objects_over(b.tgt(delta))
            .iter()
            .flat_map(|&q| fib.hom_over(top, q, delta).iter().copied())
            .filter(|&m| fib.is_cocartesian(m))
            .collect();
        order.pick(&[5, bb as u64], &cands)
    });
    let mut eq = Vec::new();
    for (&bb, lift) in objs.iter().zip(lifts) {
        let rho = lift.ok_or_else(|| WedgeqFailure::NoDiagonalLift {
            b: b.obj_name(bb).into(),
        })?;
        eq.push((t.tgt(rho), rho));
    }
    let wq = WedgeqCleavage {
        wedge: wc.clone(),
        base,
        eq,
    };
    verify_condition_iii(fib, &wq)?;
    Ok(wq)
}

/// Lifts of `id_A × Δ_B` obtained by pulling `ρ_B` back along `π₂: A×(B×B) → B×B`.
fn derived_diagonal(
    fib: &Prefibration,
    wq: &WedgeqCleavage,
    a: Ob,
    bb: Ob,
) -> Result<(StabilityInstance, Mo), WedgeqFailure> {
    let b = &*fib.base;
    let pr = &wq.base;
    let delta = pr.diagonal(b, bb);
    let bxb = b.tgt(delta);
    let left = pr.product(a, bb);
    let right = pr.product(a, bxb);
    let f = pr.times(b, b.id(a), delta);
    let inst = StabilityInstance {
        f,
        g: delta,
        h: left.proj2,
        k: right.proj2,
        p: wq.eq(bb).1,
    };
    let m = stability_morphism(fib, &wq.wedge.cleavage, inst)?;
    Ok((inst, m))
}

fn verify_condition_iii(fib: &Prefibration, wq: &WedgeqCleavage) -> Result<(), WedgeqFailure> {
    let (t, b) = (&*fib.total, &*fib.base);
    let pr = &wq.base;
    let cl = &wq.wedge.cleavage;
    let pairs: Vec<(Ob, Ob)> = b
        .objects()
        .flat_map(|a| b.objects().map(move |x| (a, x)))
        .collect();

    // Plain diagonals: Frobenius against every object over B×B.
    for bb in b.objects() {
        let rho = wq.eq(bb).1;
        for &r in fib.objects_over(fib.over(t.tgt(rho))) {
            let inst = FrobeniusInstance { q: rho, r };
            let m = frobenius_morphism(fib, &wq.wedge, inst)?;
            if !fib.is_cocartesian(m) {
                return Err(WedgeqFailure::FrobeniusFails {
                    q: t.mor_name(rho).into(),
                    r: t.obj_name(r).into(),
                    detail: describe_failure(fib, m),
                });
            }
        }
    }
    // Generalized diagonals id_A × Δ_B: stability, Frobenius, and stability
    // along the further projections C×(A×(B×B)) → A×(B×B).
    let failure = exec::find_map_first(&pairs, |&(a, bb)| -> Option<WedgeqFailure> {
        let (inst, d) = match derived_diagonal(fib, wq, a, bb) {
            Ok(x) => x,
            Err(e) => return Some(e),
        };
        if !fib.is_cocartesian(d) {
            return Some(WedgeqFailure::StabilityFails {
                p: t.mor_name(inst.p).into(),
                k: b.mor_name(inst.k).into(),
                detail: describe_failure(fib, d),
            });
        }
        for &r in fib.objects_over(b.tgt(inst.f)) {
            let m = match frobenius_morphism(fib, &wq.wedge, FrobeniusInstance { q: d, r }) {
                Ok(m) => m,
                Err(e) => return Some(e),
            };
            if !fib.is_cocartesian(m) {
                return Some(WedgeqFailure::FrobeniusFails {
                    q: t.mor_name(d).into(),
                    r: t.obj_name(r).into(),
                    detail: describe_failure(fib, m),
                });
            }
        }
        for c in b.objects() {
            let left = pr.product(c, b.src(inst.f));
            let right = pr.product(c, b.tgt(inst.f));
            let outer = StabilityInstance {
                f: pr.times(b, b.id(c), inst.f),
                g: inst.f,
                h: left.proj2,
                k: right.proj2,
                p: d,
            };
            match stability_morphism(fib, cl, outer) {
                Ok(m) if fib.is_cocartesian(m) => {}
                Ok(m) => {
                    return Some(WedgeqFailure::StabilityFails {
                        p: t.mor_name(d).into(),
                        k: b.mor_name(outer.k).into(),
                        detail: describe_failure(fib, m),
                    })
                }
                Err(e) => return Some(e),
            }
        }
        None
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// A pullback square exhibiting `m` as the pullback of `Δ_Y` along a product
/// projection `π₂: V → Y×Y` with `V` a product of some `X` and `Y×Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagonalWitness {
    pub y: Ob,
    pub product: ProductDiagram,
    pub square: PullbackSquare,
}

pub fn is_generalized_diagonal(c: &FinCategory, m: Mo) -> Option<DiagonalWitness> {
    for y in c.objects() {
        for yy in find_products(c, y, y) {
            let delta: Vec<Mo> = c
                .hom(y, yy.vertex)
                .iter()
                .copied()
                .filter(|&d| c.compose(yy.proj1, d) == c.id(y) && c.compose(yy.proj2, d) == c.id(y))
                .collect();
            let Some(&delta) = delta.first() else {
                continue;
            };
            for x in c.objects() {
                for prod in find_products(c, x, yy.vertex) {
                    if c.tgt(m) != prod.vertex {
                        continue;
                    }
                    for &h in c.hom(c.src(m), y) {
                        let square = PullbackSquare {
                            p1: m,
                            p2: h,
                            f: prod.proj2,
                            g: delta,
                        };
                        if is_pullback_square(c, &square) {
                            return Some(DiagonalWitness {
                                y,
                                product: prod,
                                square,
                            });
                        }
                    }
                }
            }
        }
    }
    None
}
