//! Prefibrations over finite data: fibers, (co)cartesian morphisms,
//! cleavages, pullback functors and the factorization calculus.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::choice::ChoiceOrder;
use crate::exec;
use crate::fincat::{CatError, FinCategory, FinFunctor, FunctorError, Mo, Ob};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FibError {
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error("no cartesian lift of {f} at {q}")]
    NotAFibration { f: String, q: String },
    #[error("no cocartesian lift of {f} at {p}")]
    NotAnOpFibration { f: String, p: String },
    #[error("no factorization of {0}")]
    NoFactorization(String),
    #[error("{count} factorizations of {morphism}; the lift used is not (co)cartesian")]
    NonUniqueFactorization { morphism: String, count: usize },
    #[error("{0}")]
    Precondition(String),
}

/// Why a morphism fails the bijection criterion. Morphisms and objects are
/// total-category indices; `f` is a base morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BijectionFailure {
    /// Two distinct morphisms over `f` out of `p` with the same composite.
    NotInjective { f: Mo, p: Ob, a: Mo, b: Mo },
    /// A morphism out of `p` over the composite that does not factor.
    NotSurjective { f: Mo, p: Ob, r: Mo },
}

/// A functor `total → base`.
#[derive(Debug)]
pub struct Prefibration {
    pub total: Arc<FinCategory>,
    pub base: Arc<FinCategory>,
    pub proj: FinFunctor,
    over_obj: Vec<Vec<Ob>>,
    hom_over: HashMap<(Ob, Ob, Mo), Vec<Mo>>,
    op: OnceLock<Box<Prefibration>>,
}

/// A fiber copied out as a category of its own, with the index maps back
/// into the total category.
#[derive(Debug, Clone)]
pub struct Fiber {
    pub cat: FinCategory,
    pub objects: Vec<Ob>,
    pub morphisms: Vec<Mo>,
}

impl Fiber {
    pub fn local_obj(&self, p: Ob) -> Option<Ob> {
        self.objects.iter().position(|&x| x == p).map(|i| i as Ob)
    }
    pub fn local_mor(&self, m: Mo) -> Option<Mo> {
        self.morphisms.iter().position(|&x| x == m).map(|i| i as Mo)
    }
}

impl Prefibration {
    pub fn new(proj: FinFunctor) -> Result<Self, FibError> {
        proj.check()?;
        let (total, base) = (proj.source.clone(), proj.target.clone());
        let mut over_obj = vec![Vec::new(); base.num_objects()];
        for p in total.objects() {
            over_obj[proj.obj(p) as usize].push(p);
        }
        let mut hom_over: HashMap<(Ob, Ob, Mo), Vec<Mo>> = HashMap::new();
        for m in total.morphisms() {
            hom_over
                .entry((total.src(m), total.tgt(m), proj.mor(m)))
                .or_default()
                .push(m);
        }
        Ok(Prefibration {
            total,
            base,
            proj,
            over_obj,
            hom_over,
            op: OnceLock::new(),
        })
    }

    /// Base object under a total object.
    pub fn over(&self, p: Ob) -> Ob {
        self.proj.obj(p)
    }
    /// Base morphism under a total morphism.
    pub fn lies_over(&self, m: Mo) -> Mo {
        self.proj.mor(m)
    }
    pub fn objects_over(&self, a: Ob) -> &[Ob] {
        &self.over_obj[a as usize]
    }
    /// Morphisms `p → q` lying over `f`.
    pub fn hom_over(&self, p: Ob, q: Ob, f: Mo) -> &[Mo] {
        self.hom_over
            .get(&(p, q, f))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn fiber(&self, a: Ob) -> Result<Fiber, FibError> {
        if a as usize >= self.base.num_objects() {
            return Err(CatError::UnknownObject(a.to_string()).into());
        }
        let objects = self.objects_over(a).to_vec();
        let ida = self.base.id(a);
        let morphisms: Vec<Mo> = self
            .total
            .morphisms()
            .filter(|&m| self.lies_over(m) == ida)
            .collect();
        let name = format!("{}^{}", self.total.name(), self.base.obj_name(a));
        let (cat, objects, morphisms) = self.total.subcategory(name, &objects, &morphisms)?;
        Ok(Fiber {
            cat,
            objects,
            morphisms,
        })
    }

    /// The prefibration `total^op → base^op` on the same indices.
    pub fn opposite(&self) -> &Prefibration {
        self.op.get_or_init(|| {
            Box::new(
                Prefibration::new(self.proj.opposite())
                    .expect("opposite of a functor is a functor"),
            )
        })
    }

    /// First failure of the bijection criterion for `q`, if any.
    pub fn cartesian_failure(&self, q: Mo) -> Option<BijectionFailure> {
        let (t, b) = (&*self.total, &*self.base);
        let (dq, cq, g) = (t.src(q), t.tgt(q), self.lies_over(q));
        let bsrc = b.src(g);
        for &f in b.into_obj(bsrc) {
            let gf = b.compose(g, f);
            for &p in self.objects_over(b.src(f)) {
                let over_f = self.hom_over(p, dq, f);
                let mut seen: HashMap<Mo, Mo> = HashMap::with_capacity(over_f.len());
                for &a in over_f {
                    if let Some(&prev) = seen.get(&t.compose(q, a)) {
                        return Some(BijectionFailure::NotInjective {
                            f,
                            p,
                            a: prev,
                            b: a,
                        });
                    }
                    seen.insert(t.compose(q, a), a);
                }
                for &r in self.hom_over(p, cq, gf) {
                    if !seen.contains_key(&r) {
                        return Some(BijectionFailure::NotSurjective { f, p, r });
                    }
                }
            }
        }
        None
    }

    pub fn is_cartesian(&self, q: Mo) -> bool {
        self.cartesian_failure(q).is_none()
    }

    /// Cocartesian means cartesian in the opposite prefibration.
    pub fn is_cocartesian(&self, q: Mo) -> bool {
        self.opposite().is_cartesian(q)
    }

    pub fn cocartesian_failure(&self, q: Mo) -> Option<BijectionFailure> {
        self.opposite().cartesian_failure(q)
    }

    /// The fiberwise criterion: `s ↦ s∘q` is a bijection from fiber morphisms
    /// out of `cod q` to morphisms over `proj q` out of `dom q`, for every
    /// target. It agrees with cocartesianness when the prefibration is a fibration.
    pub fn is_weakly_cocartesian(&self, q: Mo) -> bool {
        let (t, b) = (&*self.total, &*self.base);
        let (p, qq, f) = (t.src(q), t.tgt(q), self.lies_over(q));
        let btgt = b.tgt(f);
        self.objects_over(btgt).iter().all(|&r| {
            let vert = self.hom_over(qq, r, b.id(btgt));
            let over = self.hom_over(p, r, f);
            let mut images: Vec<Mo> = vert.iter().map(|&s| t.compose(s, q)).collect();
            images.sort_unstable();
            let n = images.len();
            images.dedup();
            n == images.len() && n == over.len()
        })
    }

    pub fn find_cartesian_lifts(&self, f: Mo, q: Ob) -> Vec<Mo> {
        let t = &*self.total;
        let a = self.base.src(f);
        let mut out = Vec::new();
        for &p in self.objects_over(a) {
            for &m in self.hom_over(p, q, f) {
                if self.is_cartesian(m) {
                    out.push(m);
                }
            }
        }
        debug_assert!(out.iter().all(|&m| t.tgt(m) == q));
        out
    }

    pub fn find_cocartesian_lifts(&self, f: Mo, p: Ob) -> Vec<Mo> {
        let b = self.base.tgt(f);
        let mut out = Vec::new();
        for &q in self.objects_over(b) {
            for &m in self.hom_over(p, q, f) {
                if self.is_cocartesian(m) {
                    out.push(m);
                }
            }
        }
        out
    }

    /// All pairs `(f, Q)` with `Q` over `tgt f`, in index order.
    pub fn lift_problems(&self) -> Vec<(Mo, Ob)> {
        let b = &*self.base;
        b.morphisms()
            .flat_map(|f| self.objects_over(b.tgt(f)).iter().map(move |&q| (f, q)))
            .collect()
    }

    /// First `(f, Q)` without a cartesian lift.
    pub fn fibration_failure(&self) -> Option<(Mo, Ob)> {
        let problems = self.lift_problems();
        exec::find_map_first(&problems, |&(f, q)| {
            self.find_cartesian_lifts(f, q).is_empty().then_some((f, q))
        })
    }

    pub fn is_fibration(&self) -> bool {
        self.fibration_failure().is_none()
    }

    pub fn describe_mor(&self, m: Mo) -> String {
        self.total.mor_name(m).to_string()
    }
}

/// A choice of cartesian lift for every `(f, Q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cleavage {
    lifts: HashMap<(Mo, Ob), Mo>,
    pub order: ChoiceOrder,
}

pub fn build_cleavage(fib: &Prefibration) -> Result<Cleavage, FibError> {
    build_cleavage_with(fib, ChoiceOrder::FIRST)
}

/// Pick a cartesian lift per `(f, Q)`. Over identities the identity lift is
/// taken under the default order.
pub fn build_cleavage_with(fib: &Prefibration, order: ChoiceOrder) -> Result<Cleavage, FibError> {
    let problems = fib.lift_problems();
    let picks = exec::map(&problems, |&(f, q)| {
        if order.is_default() && fib.base.is_identity(f) {
            return Some(fib.total.id(q));
        }
        order.pick(&[f as u64, q as u64], &fib.find_cartesian_lifts(f, q))
    });
    let mut lifts = HashMap::with_capacity(problems.len());
    for (&(f, q), pick) in problems.iter().zip(picks) {
        match pick {
            Some(m) => {
                lifts.insert((f, q), m);
            }
            None => {
                return Err(FibError::NotAFibration {
                    f: fib.base.mor_name(f).into(),
                    q: fib.total.obj_name(q).into(),
                })
            }
        }
    }
    Ok(Cleavage { lifts, order })
}

impl Cleavage {
    /// `crt_f Q`.
    pub fn crt(&self, f: Mo, q: Ob) -> Mo {
        self.lifts[&(f, q)]
    }

    /// `f*Q`, the domain of `crt_f Q`.
    pub fn pullback_obj(&self, fib: &Prefibration, f: Mo, q: Ob) -> Ob {
        fib.total.src(self.crt(f, q))
    }

    /// `f*u = ⟨u ∘ crt_f Q⟩` for a fiber morphism `u: Q → Q'`.
    pub fn pullback_mor(&self, fib: &Prefibration, f: Mo, u: Mo) -> Result<Mo, FibError> {
        let t = &*fib.total;
        let q = t.src(u);
        let a = fib.base.src(f);
        cind(fib, self, t.compose(u, self.crt(f, q)), fib.base.id(a), f)
    }

    /// The pullback functor `f*` between materialized fibers, validated.
    pub fn pullback_functor(
        &self,
        fib: &Prefibration,
        f: Mo,
    ) -> Result<(Fiber, Fiber, FinFunctor), FibError> {
        let (a, b) = (fib.base.src(f), fib.base.tgt(f));
        let (fa, fb) = (fib.fiber(a)?, fib.fiber(b)?);
        let mut obj_map = Vec::new();
        for &q in &fb.objects {
            obj_map.push(
                fa.local_obj(self.pullback_obj(fib, f, q))
                    .expect("pullback lies over the source"),
            );
        }
        let mut mor_map = Vec::new();
        for &u in &fb.morphisms {
            mor_map.push(
                fa.local_mor(self.pullback_mor(fib, f, u)?)
                    .expect("induced map is vertical"),
            );
        }
        let functor = FinFunctor::new(
            format!("{}*", fib.base.mor_name(f)),
            Arc::new(fb.cat.clone()),
            Arc::new(fa.cat.clone()),
            obj_map,
            mor_map,
        )?;
        Ok((fb, fa, functor))
    }
}

/// `⟨p⟩`: for `p` over `g∘f`, the unique `m` over `f` with `crt_g(cod p) ∘ m = p`.
pub fn cind(fib: &Prefibration, cl: &Cleavage, p: Mo, f: Mo, g: Mo) -> Result<Mo, FibError> {
    let (t, b) = (&*fib.total, &*fib.base);
    if b.tgt(f) != b.src(g) || b.compose(g, f) != fib.lies_over(p) {
        return Err(FibError::Precondition(format!(
            "{} does not lie over {} . {}",
            t.mor_name(p),
            b.mor_name(g),
            b.mor_name(f)
        )));
    }
    let lift = cl.crt(g, t.tgt(p));
    let hits: Vec<Mo> = fib
        .hom_over(t.src(p), t.src(lift), f)
        .iter()
        .copied()
        .filter(|&m| t.compose(lift, m) == p)
        .collect();
    unique(hits, || t.mor_name(p).to_string())
}

/// For `q` cocartesian over `f` and `r` over `g∘f` with the same domain, the
/// unique `s` over `g` with `s ∘ q = r`.
pub fn cofactor(fib: &Prefibration, q: Mo, r: Mo, g: Mo) -> Result<Mo, FibError> {
    let (t, b) = (&*fib.total, &*fib.base);
    let f = fib.lies_over(q);
    if t.src(q) != t.src(r) || b.tgt(f) != b.src(g) || b.compose(g, f) != fib.lies_over(r) {
        return Err(FibError::Precondition(format!(
            "cannot factor {} through {}",
            t.mor_name(r),
            t.mor_name(q)
        )));
    }
    let hits: Vec<Mo> = fib
        .hom_over(t.tgt(q), t.tgt(r), g)
        .iter()
        .copied()
        .filter(|&s| t.compose(s, q) == r)
        .collect();
    unique(hits, || t.mor_name(r).to_string())
}

fn unique(hits: Vec<Mo>, what: impl Fn() -> String) -> Result<Mo, FibError> {
    match hits.len() {
        1 => Ok(hits[0]),
        0 => Err(FibError::NoFactorization(what())),
        count => Err(FibError::NonUniqueFactorization {
            morphism: what(),
            count,
        }),
    }
}

/// A choice of cocartesian lift `P → ∑_f P` for every `(f, P)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpCleavage {
    colifts: HashMap<(Mo, Ob), Mo>,
    pub split: bool,
}

impl OpCleavage {
    pub fn colift(&self, f: Mo, p: Ob) -> Mo {
        self.colifts[&(f, p)]
    }
}

pub fn build_op_cleavage(fib: &Prefibration) -> Result<OpCleavage, FibError> {
    build_op_cleavage_with(fib, |_, _, lifts| lifts.first().copied())
}

/// Op-cleavage with a caller-supplied selection among the cocartesian lifts.
pub fn build_op_cleavage_with(
    fib: &Prefibration,
    select: impl Fn(Mo, Ob, &[Mo]) -> Option<Mo> + Sync + Send,
) -> Result<OpCleavage, FibError> {
    let b = &*fib.base;
    let problems: Vec<(Mo, Ob)> = b
        .morphisms()
        .flat_map(|f| fib.objects_over(b.src(f)).iter().map(move |&p| (f, p)))
        .collect();
    let picks = exec::map(&problems, |&(f, p)| {
        if b.is_identity(f) {
            return Some(fib.total.id(p));
        }
        select(f, p, &fib.find_cocartesian_lifts(f, p))
    });
    let mut colifts = HashMap::new();
    for (&(f, p), pick) in problems.iter().zip(picks) {
        let m = pick.ok_or_else(|| FibError::NotAnOpFibration {
            f: b.mor_name(f).into(),
            p: fib.total.obj_name(p).into(),
        })?;
        colifts.insert((f, p), m);
    }
    let t = &*fib.total;
    let split = problems.iter().all(|&(f, p)| {
        let first = colifts[&(f, p)];
        b.out_of(b.tgt(f)).iter().all(|&g| {
            let second = colifts[&(g, t.tgt(first))];
            t.compose(second, first) == colifts[&(b.compose(g, f), p)]
        })
    });
    Ok(OpCleavage { colifts, split })
}
