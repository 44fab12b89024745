//! The homotopy fibration of isofibrations over a family of groupoids.
//!
//! A fiber object over `A` is an isofibration `x: X → A`; a morphism over
//! `f` is a fiberwise-homotopy class of functors `m` with `y∘m = f∘x`,
//! stored as its class key.

use std::sync::Arc;

use super::family::GpdFamily;
use super::groupoid::{FunId, GId};
use super::ho::{all_functors, canonical, class_keys, is_equivalence};
use super::store::{GFun, GpdStore};
use crate::choice::ChoiceOrder;
use crate::oracle::{BProduct, FibrationOracle, Meet, OResult, OracleError};

/// A morphism of the homotopy fibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HoMor {
    /// Slice objects `x: X → A` and `y: Y → B`.
    pub src: FunId,
    pub tgt: FunId,
    /// `f: A → B`.
    pub over: FunId,
    /// Class key, a functor `X → Y`.
    pub rep: FunId,
}

#[derive(Debug, Clone)]
pub struct GpdOracle {
    pub family: Arc<GpdFamily>,
    pub store: Arc<GpdStore>,
    order: ChoiceOrder,
    zero: Vec<GId>,
    greatest_quasi_inverse: bool,
}

impl GpdOracle {
    pub fn new(family: Arc<GpdFamily>) -> Self {
        Self::with_order(family, ChoiceOrder::FIRST)
    }

    /// A seeded order replaces some equality objects `B^I` by `B^I × I`, with
    /// `I` the walking isomorphism. The store is shared, so morphisms of
    /// both oracles can be compared.
    pub fn with_order(family: Arc<GpdFamily>, order: ChoiceOrder) -> Self {
        let store = family.store.clone();
        let zero = family.members.clone();
        GpdOracle {
            family,
            store,
            order,
            zero,
            greatest_quasi_inverse: false,
        }
    }

    /// Restrict the 0-cells to the given members.
    pub fn restricted(mut self, zero: Vec<GId>) -> Self {
        self.zero = zero;
        self
    }

    /// Build cofactors from the greatest rather than the least choices.
    pub fn with_greatest_quasi_inverse(mut self, on: bool) -> Self {
        self.greatest_quasi_inverse = on;
        self
    }

    pub fn order(&self) -> ChoiceOrder {
        self.order
    }

    fn fun(&self, f: FunId) -> Arc<GFun> {
        self.store.fun(f)
    }

    /// The class of `tables: X → Y` over `f`, from slice `p` to slice `q`.
    pub fn make(&self, p: FunId, q: FunId, f: FunId, obj: &[u32], mor: &[u32]) -> HoMor {
        let (fp, fq) = (self.fun(p), self.fun(q));
        let (o, m) = canonical(&fp.src, &fq, obj, mor);
        let rep = self.store.functor(fp.src.id(), fq.src.id(), o, m);
        HoMor {
            src: p,
            tgt: q,
            over: f,
            rep,
        }
    }

    fn make_from(&self, p: FunId, q: FunId, f: FunId, rep: FunId) -> HoMor {
        let r = self.fun(rep);
        self.make(p, q, f, &r.obj, &r.mor)
    }

    /// Whether `Eq_B` is the mapping-path alternative.
    fn alternative_eq(&self, b: GId) -> bool {
        let g = self.store.gpd(b);
        let salt = [7, g.num_objects() as u64, g.num_morphisms() as u64];
        self.order.pick_index(&salt, 2) == Some(1)
    }

    /// The groupoid underlying a slice object.
    pub fn total_of(&self, p: FunId) -> GId {
        self.fun(p).src.id()
    }

    fn functor_label(&self, f: &GFun) -> String {
        let objs: Vec<String> = f.obj.iter().map(|&a| f.tgt.obj_label(a)).collect();
        let mors: Vec<String> = f.mor.iter().map(|&m| f.tgt.mor_label(m)).collect();
        format!(
            "{}->{}[{}|{}]",
            f.src.name,
            f.tgt.name,
            objs.join(","),
            mors.join(",")
        )
    }
}

impl FibrationOracle for GpdOracle {
    type BObj = GId;
    type BMor = FunId;
    type TObj = FunId;
    type TMor = HoMor;

    fn label(&self) -> String {
        let names: Vec<String> = self
            .zero
            .iter()
            .map(|&g| self.store.gpd(g).name.clone())
            .collect();
        format!("isofibrations over {{{}}}", names.join(", "))
    }
    fn zero_cells(&self) -> Vec<GId> {
        self.zero.clone()
    }

    fn b_hom(&self, a: &GId, b: &GId) -> OResult<Vec<FunId>> {
        let (ga, gb) = (self.store.gpd(*a), self.store.gpd(*b));
        Ok(all_functors(&ga, &gb)
            .into_iter()
            .map(|(o, m)| self.store.functor(*a, *b, o, m))
            .collect())
    }
    fn b_src(&self, f: &FunId) -> GId {
        self.fun(*f).src.id()
    }
    fn b_tgt(&self, f: &FunId) -> GId {
        self.fun(*f).tgt.id()
    }
    fn b_id(&self, a: &GId) -> FunId {
        self.store.identity(*a)
    }
    fn b_comp(&self, g: &FunId, f: &FunId) -> OResult<FunId> {
        self.store.compose(*g, *f)
    }
    fn b_terminal(&self) -> GId {
        self.family.terminal
    }
    fn b_to_terminal(&self, a: &GId) -> OResult<FunId> {
        let ga = self.store.gpd(*a);
        Ok(self.store.functor(
            *a,
            self.family.terminal,
            vec![0; ga.num_objects()],
            vec![0; ga.num_morphisms()],
        ))
    }
    fn b_product(&self, a: &GId, b: &GId) -> OResult<BProduct<GId, FunId>> {
        if let Some(c) = self.family.cone(*a, *b) {
            return Ok(BProduct {
                vertex: c.vertex,
                proj1: c.proj1,
                proj2: c.proj2,
            });
        }
        let p = self.store.product(*a, *b)?;
        let (p1, p2) = self.store.projections(p)?;
        Ok(BProduct {
            vertex: p,
            proj1: p1,
            proj2: p2,
        })
    }
    fn b_pair(&self, f: &FunId, g: &FunId) -> OResult<FunId> {
        let (a, b) = (self.b_tgt(f), self.b_tgt(g));
        let s = self.store.product(a, b)?;
        let pair = self.store.pair_into(s, *f, *g)?;
        match self.family.cone(a, b) {
            Some(c) => self.store.compose(c.from_structural, pair),
            None => Ok(pair),
        }
    }

    fn t_src(&self, m: &HoMor) -> FunId {
        m.src
    }
    fn t_tgt(&self, m: &HoMor) -> FunId {
        m.tgt
    }
    fn t_over(&self, p: &FunId) -> GId {
        self.fun(*p).tgt.id()
    }
    fn t_base(&self, m: &HoMor) -> FunId {
        m.over
    }
    fn t_id(&self, p: &FunId) -> OResult<HoMor> {
        let x = self.total_of(*p);
        Ok(self.make_from(
            *p,
            *p,
            self.store.identity(self.t_over(p)),
            self.store.identity(x),
        ))
    }
    fn t_comp(&self, q: &HoMor, p: &HoMor) -> OResult<HoMor> {
        if p.tgt != q.src {
            return Err(OracleError::contract(
                "composing morphisms with mismatched ends",
            ));
        }
        let rep = self.store.compose(q.rep, p.rep)?;
        let over = self.store.compose(q.over, p.over)?;
        Ok(self.make_from(p.src, q.tgt, over, rep))
    }

    fn top(&self, a: &GId) -> OResult<FunId> {
        Ok(self.store.identity(*a))
    }
    fn ex(&self, p: &FunId, g: &FunId) -> OResult<HoMor> {
        if self.t_over(p) != self.b_src(g) {
            return Err(OracleError::contract("ex: base mismatch"));
        }
        let top = self.top(&self.b_tgt(g))?;
        let rep = self.store.compose(*g, *p)?;
        Ok(self.make_from(*p, top, *g, rep))
    }
    fn meet(&self, p: &FunId, q: &FunId) -> OResult<Meet<FunId, HoMor>> {
        let a = self.t_over(p);
        if self.t_over(q) != a {
            return Err(OracleError::contract(
                "meet of objects over different bases",
            ));
        }
        let v = self.store.pullback(*p, *q)?;
        let (pi1, pi2) = self.store.projections(v)?;
        let vertex = self.store.compose(*p, pi1)?;
        let id = self.store.identity(a);
        let (r1, r2) = self.store.meet_reps(*p, *q, || {
            Ok((
                self.make_from(vertex, *p, id, pi1).rep,
                self.make_from(vertex, *q, id, pi2).rep,
            ))
        })?;
        let proj = |tgt, rep| HoMor {
            src: vertex,
            tgt,
            over: id,
            rep,
        };
        Ok(Meet {
            vertex,
            proj1: proj(*p, r1),
            proj2: proj(*q, r2),
        })
    }
    fn pair_over(&self, q: &HoMor, r: &HoMor) -> OResult<HoMor> {
        if q.src != r.src || q.over != r.over {
            return Err(OracleError::contract(
                "pair_over needs a span over one morphism",
            ));
        }
        let m = self.meet(&q.tgt, &r.tgt)?;
        let v = self.total_of(m.vertex);
        let rep = self.store.pair_into(v, q.rep, r.rep)?;
        Ok(self.make_from(q.src, m.vertex, q.over, rep))
    }
    fn crt(&self, f: &FunId, q: &FunId) -> OResult<HoMor> {
        if self.b_tgt(f) != self.t_over(q) {
            return Err(OracleError::contract("crt: base mismatch"));
        }
        let ff = self.fun(*f);
        if ff.src.id() == ff.tgt.id() && *f == self.store.identity(ff.src.id()) {
            return self.t_id(q);
        }
        let pb = self.store.pullback(*f, *q)?;
        let (pi1, pi2) = self.store.projections(pb)?;
        let rep = self
            .store
            .lift_rep(*f, *q, || Ok(self.make_from(pi1, *q, *f, pi2).rep))?;
        Ok(HoMor {
            src: pi1,
            tgt: *q,
            over: *f,
            rep,
        })
    }
    fn cind(&self, p: &HoMor, f: &FunId, g: &FunId) -> OResult<HoMor> {
        if self.store.compose(*g, *f)? != p.over {
            return Err(OracleError::contract(
                "cind: morphism is not over the composite",
            ));
        }
        let target = self.crt(g, &p.tgt)?;
        if target.src == p.tgt {
            // Identity lift: nothing to factor.
            return Ok(self.make_from(p.src, p.tgt, *f, p.rep));
        }
        let pb = self.total_of(target.src);
        let fx = self.store.compose(*f, p.src)?;
        let rep = self.store.pair_into(pb, fx, p.rep)?;
        Ok(self.make_from(p.src, target.src, *f, rep))
    }
    fn eq(&self, b: &GId) -> OResult<(FunId, HoMor)> {
        let id = self.store.identity(*b);
        let delta = self.b_pair(&id, &id)?;
        let top = self.top(b)?;
        let alt = self.alternative_eq(*b);
        let (eq, rep) = self.store.eq_object(*b, alt, || {
            let (d1, d2) = self.store.path_ends(*b)?;
            let s = self.store.path_const(*b)?;
            let (eq, rho) = if alt {
                // B^I × I over B × B, with ρ landing on the first object of I.
                let i = self.store.interval()?;
                let pi = self.b_tgt(&s);
                let v = self.store.product(pi, i)?;
                let (p1, _) = self.store.projections(v)?;
                let ends = self.b_pair(&d1, &d2)?;
                let zero = self.store.functor(
                    *b,
                    i,
                    vec![0; self.store.gpd(*b).num_objects()],
                    vec![0; self.store.gpd(*b).num_morphisms()],
                );
                (
                    self.store.compose(ends, p1)?,
                    self.store.pair_into(v, s, zero)?,
                )
            } else {
                (self.b_pair(&d1, &d2)?, s)
            };
            Ok((eq, self.make_from(top, eq, delta, rho).rep))
        })?;
        Ok((
            eq,
            HoMor {
                src: top,
                tgt: eq,
                over: delta,
                rep,
            },
        ))
    }
    fn cofactor(&self, q: &HoMor, r: &HoMor, g: &FunId) -> OResult<HoMor> {
        if q.src != r.src || self.store.compose(*g, q.over)? != r.over {
            return Err(OracleError::contract("cofactor: r is not over g after q"));
        }
        let (qh, rh) = (self.fun(q.rep), self.fun(r.rep));
        if !is_equivalence(&qh) {
            return Err(OracleError::contract(
                "cofactor through a morphism that is not cocartesian",
            ));
        }
        let (x, y) = (&*qh.src, &*qh.tgt);
        let (fy, fz, fg) = (self.fun(q.tgt), self.fun(r.tgt), self.fun(*g));
        let z = &*fz.src;
        let zidx = fz.index();
        let greatest = self.greatest_quasi_inverse;

        // (ξ_η, e_η: q̂ξ_η → η), least or greatest in (ξ, e) order.
        let mut pick: Vec<Option<(u32, u32)>> = vec![None; y.num_objects()];
        let xs: Vec<u32> = if greatest {
            (0..x.num_objects() as u32).rev().collect()
        } else {
            (0..x.num_objects() as u32).collect()
        };
        for xi in xs {
            let outs = y.outs(qh.obj[xi as usize]);
            let iter: Box<dyn Iterator<Item = &u32>> = if greatest {
                Box::new(outs.iter().rev())
            } else {
                Box::new(outs.iter())
            };
            for &e in iter {
                pick[y.tgt(e) as usize].get_or_insert((xi, e));
            }
        }
        let mut k = Vec::with_capacity(y.num_objects());
        for (eta, choice) in pick.iter().enumerate() {
            let (xi, e) = choice.ok_or_else(|| {
                OracleError::contract(format!(
                    "{} is not in the essential image",
                    y.obj_label(eta as u32)
                ))
            })?;
            let base = fg.mor[fy.mor[e as usize] as usize];
            let lifts = zidx
                .lifts
                .get(&(rh.obj[xi as usize], base))
                .ok_or_else(|| OracleError::contract("target is not an isofibration"))?;
            k.push(if greatest {
                *lifts.last().unwrap()
            } else {
                lifts[0]
            });
        }
        let obj: Vec<u32> = k.iter().map(|&m| z.tgt(m)).collect();
        let mut mor = Vec::with_capacity(y.num_morphisms());
        for n in 0..y.num_morphisms() as u32 {
            let (s, t) = (y.src(n) as usize, y.tgt(n) as usize);
            let ((xs, es), (xt, et)) = (pick[s].unwrap(), pick[t].unwrap());
            let u = y.comp(y.inv(et), y.comp(n, es));
            let m = x
                .hom(xs, xt)
                .find(|&m| qh.mor[m as usize] == u)
                .ok_or_else(|| {
                    OracleError::contract("cofactor through a functor that is not full")
                })?;
            mor.push(z.comp(k[t], z.comp(rh.mor[m as usize], z.inv(k[s]))));
        }
        let s = self.make(q.tgt, r.tgt, *g, &obj, &mor);
        if self.t_comp(&s, q)? != *r {
            return Err(OracleError::contract("cofactor does not factor r"));
        }
        Ok(s)
    }
    fn hom_over(&self, p: &FunId, q: &FunId, f: &FunId) -> OResult<Vec<HoMor>> {
        let (fp, fq, ff) = (self.fun(*p), self.fun(*q), self.fun(*f));
        if ff.src.id() != fp.tgt.id() || ff.tgt.id() != fq.tgt.id() {
            return Err(OracleError::contract("hom_over: base mismatch"));
        }
        let b_obj: Vec<u32> = fp.obj.iter().map(|&a| ff.obj[a as usize]).collect();
        let b_mor: Vec<u32> = fp.mor.iter().map(|&m| ff.mor[m as usize]).collect();
        Ok(class_keys(&fp.src, &fq, &b_obj, &b_mor)
            .into_iter()
            .map(|(o, m)| HoMor {
                src: *p,
                tgt: *q,
                over: *f,
                rep: self.store.functor(fp.src.id(), fq.src.id(), o, m),
            })
            .collect())
    }
    fn is_cocartesian(&self, m: &HoMor) -> Option<bool> {
        Some(is_equivalence(&self.fun(m.rep)))
    }
    fn fiber_sample(&self, a: &GId) -> OResult<Vec<FunId>> {
        let mut out = vec![self.top(a)?];
        if let Some(s) = self.family.sample {
            let p = self.store.product(*a, s)?;
            out.push(self.store.projections(p)?.0);
        }
        Ok(out)
    }

    fn scoped<R>(&mut self, f: impl FnOnce(&Self) -> R) -> R {
        let mark = self.store.checkpoint();
        let r = f(self);
        self.store.truncate(mark);
        r
    }

    fn show_bobj(&self, a: &GId) -> String {
        self.store.gpd(*a).name.clone()
    }
    fn show_bmor(&self, f: &FunId) -> String {
        self.functor_label(&self.fun(*f))
    }
    fn show_tobj(&self, p: &FunId) -> String {
        let fp = self.fun(*p);
        format!("{}->{}", fp.src.name, fp.tgt.name)
    }
    fn show_tmor(&self, m: &HoMor) -> String {
        self.functor_label(&self.fun(m.rep))
    }
}
