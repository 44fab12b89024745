//! Interning store for groupoids and functors.
//!
//! Every groupoid and functor the oracle touches lives here, keyed by how it
//! was built (groupoids) or by its tables (functors), so equal keys always
//! give equal ids. The store only grows, except that `truncate` discards
//! everything created after a checkpoint.

use rustc_hash::FxHashMap as HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use super::groupoid::{self, FunId, GId, GKey, Gpd, Shape};
use super::GpdError;
use crate::fincat::FinCategory;
use crate::oracle::{OResult, OracleError};

/// Default bound on the number of groupoids in a store.
pub const DEFAULT_CLOSURE_BUDGET: usize = 5_000;

/// A functor between interned groupoids.
pub struct GFun {
    pub(crate) id: FunId,
    pub src: Arc<Gpd>,
    pub tgt: Arc<Gpd>,
    pub obj: Arc<[u32]>,
    pub mor: Arc<[u32]>,
    index: OnceLock<SliceIndex>,
}

impl std::fmt::Debug for GFun {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GFun#{}({} -> {})",
            self.id, self.src.name, self.tgt.name
        )
    }
}

/// Lookup tables for a functor used as a slice object `y: Y → B`.
pub(crate) struct SliceIndex {
    /// Least object reachable from each object by vertical morphisms.
    pub vmin: Vec<u32>,
    /// `(src, tgt, base morphism) ↦` morphisms of `Y`, ascending.
    pub over: HashMap<(u32, u32, u32), Vec<u32>>,
    /// `(src, base morphism) ↦` morphisms of `Y` out of `src`, ascending.
    pub lifts: HashMap<(u32, u32), Vec<u32>>,
}

impl GFun {
    pub fn id(&self) -> FunId {
        self.id
    }

    pub(crate) fn index(&self) -> &SliceIndex {
        self.index.get_or_init(|| {
            let (y, b) = (&*self.src, &*self.tgt);
            let mut parent: Vec<u32> = (0..y.num_objects() as u32).collect();
            fn find(p: &mut [u32], mut a: u32) -> u32 {
                while p[a as usize] != a {
                    p[a as usize] = p[p[a as usize] as usize];
                    a = p[a as usize];
                }
                a
            }
            let mut over: HashMap<(u32, u32, u32), Vec<u32>> = HashMap::default();
            let mut lifts: HashMap<(u32, u32), Vec<u32>> = HashMap::default();
            for k in 0..y.num_morphisms() as u32 {
                let (s, t, bk) = (y.src(k), y.tgt(k), self.mor[k as usize]);
                over.entry((s, t, bk)).or_default().push(k);
                lifts.entry((s, bk)).or_default().push(k);
                if b.is_identity(bk) {
                    let (rs, rt) = (find(&mut parent, s), find(&mut parent, t));
                    // Keep the smaller index as representative.
                    let (lo, hi) = if rs < rt { (rs, rt) } else { (rt, rs) };
                    parent[hi as usize] = lo;
                }
            }
            let vmin = (0..y.num_objects() as u32)
                .map(|a| find(&mut parent, a))
                .collect();
            SliceIndex { vmin, over, lifts }
        })
    }
}

type FKey = (GId, GId, Arc<[u32]>, Arc<[u32]>);

#[derive(Default)]
struct Inner {
    gpds: Vec<Arc<Gpd>>,
    gkeys: HashMap<GKey, GId>,
    gtrace: Vec<GKey>,
    funs: Vec<Arc<GFun>>,
    fkeys: HashMap<FKey, FunId>,
    derived: HashMap<Derived, (FunId, FunId)>,
}

/// Functors derived from ids alone, cached so large tables are built and
/// hashed once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Derived {
    Identity(GId),
    Compose(FunId, FunId),
    Projections(GId),
    PathConst(GId),
    PathEnds(GId),
    /// Class keys of the projections out of the meet of two slice objects.
    Meet(FunId, FunId),
    /// Class key of the cartesian lift of a slice object along a functor.
    Lift(FunId, FunId),
    /// Equality object and its `ρ`, standard or alternative.
    Eq(GId, bool),
}

impl Derived {
    fn survives(&self, g: GId, f: FunId) -> bool {
        match *self {
            Derived::Identity(a)
            | Derived::Projections(a)
            | Derived::PathConst(a)
            | Derived::PathEnds(a)
            | Derived::Eq(a, _) => a < g,
            Derived::Compose(a, b) | Derived::Meet(a, b) | Derived::Lift(a, b) => a < f && b < f,
        }
    }
}

/// Position in the store to truncate back to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mark {
    gpds: usize,
    funs: usize,
}

pub struct GpdStore {
    inner: RwLock<Inner>,
    budget: usize,
}

impl std::fmt::Debug for GpdStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (g, n) = self.size();
        write!(
            f,
            "GpdStore({g} groupoids, {n} functors, budget {})",
            self.budget
        )
    }
}

impl GpdStore {
    pub fn new(budget: usize) -> Self {
        GpdStore {
            inner: RwLock::new(Inner::default()),
            budget,
        }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// `(groupoids, functors)` currently stored.
    pub fn size(&self) -> (usize, usize) {
        let inner = self.inner.read().unwrap();
        (inner.gpds.len(), inner.funs.len())
    }

    pub fn gpd(&self, g: GId) -> Arc<Gpd> {
        self.inner.read().unwrap().gpds[g as usize].clone()
    }

    pub fn fun(&self, f: FunId) -> Arc<GFun> {
        self.inner.read().unwrap().funs[f as usize].clone()
    }

    pub fn checkpoint(&self) -> Mark {
        let inner = self.inner.read().unwrap();
        Mark {
            gpds: inner.gpds.len(),
            funs: inner.funs.len(),
        }
    }

    /// Drop every groupoid and functor created after `mark`.
    pub fn truncate(&self, mark: Mark) {
        let mut inner = self.inner.write().unwrap();
        inner.gpds.truncate(mark.gpds);
        inner.gtrace.truncate(mark.gpds);
        inner.funs.truncate(mark.funs);
        let (g, f) = (mark.gpds as u32, mark.funs as u32);
        inner.gkeys.retain(|_, id| *id < g);
        inner.fkeys.retain(|_, id| *id < f);
        inner
            .derived
            .retain(|k, v| k.survives(g, f) && v.0 < f && v.1 < f);
    }

    /// Cached class-key representatives of the meet projections of `p` and `q`.
    pub(crate) fn meet_reps(
        &self,
        p: FunId,
        q: FunId,
        build: impl FnOnce() -> OResult<(FunId, FunId)>,
    ) -> OResult<(FunId, FunId)> {
        self.derived(Derived::Meet(p, q), build)
    }

    /// Cached class-key representative of the cartesian lift of `q` along `f`.
    pub(crate) fn lift_rep(
        &self,
        f: FunId,
        q: FunId,
        build: impl FnOnce() -> OResult<FunId>,
    ) -> OResult<FunId> {
        self.derived(Derived::Lift(f, q), || build().map(|r| (r, r)))
            .map(|v| v.0)
    }

    /// Cached equality object of `b` and the class key of its `ρ`.
    pub(crate) fn eq_object(
        &self,
        b: GId,
        alternative: bool,
        build: impl FnOnce() -> OResult<(FunId, FunId)>,
    ) -> OResult<(FunId, FunId)> {
        self.derived(Derived::Eq(b, alternative), build)
    }

    fn derived(
        &self,
        key: Derived,
        build: impl FnOnce() -> OResult<(FunId, FunId)>,
    ) -> OResult<(FunId, FunId)> {
        if let Some(&v) = self.inner.read().unwrap().derived.get(&key) {
            return Ok(v);
        }
        let v = build()?;
        self.inner.write().unwrap().derived.insert(key, v);
        Ok(v)
    }

    fn lookup(&self, key: &GKey) -> Option<GId> {
        self.inner.read().unwrap().gkeys.get(key).copied()
    }

    fn insert(&self, key: GKey, build: impl FnOnce() -> Gpd) -> OResult<GId> {
        if let Some(g) = self.lookup(&key) {
            return Ok(g);
        }
        let mut gpd = build();
        let mut inner = self.inner.write().unwrap();
        if let Some(&g) = inner.gkeys.get(&key) {
            return Ok(g);
        }
        if inner.gpds.len() >= self.budget {
            let recent: Vec<String> = inner
                .gtrace
                .iter()
                .rev()
                .take(8)
                .map(|k| format!("{k:?}"))
                .collect();
            return Err(OracleError::Budget(format!(
                "closure budget of {} groupoids exhausted building {} ({key:?}); latest constructions: {}",
                self.budget,
                gpd.name,
                recent.join(", ")
            )));
        }
        let g = inner.gpds.len() as GId;
        gpd.id = g;
        inner.gpds.push(Arc::new(gpd));
        inner.gkeys.insert(key.clone(), g);
        inner.gtrace.push(key);
        Ok(g)
    }

    pub fn atom(&self, c: &FinCategory) -> Result<GId, GpdError> {
        let key = GKey::Atom(c.name().to_string());
        if self.lookup(&key).is_some() {
            return Err(GpdError::DuplicateMember(c.name().into()));
        }
        let gpd = groupoid::from_category(c)?;
        self.insert(key, || gpd)
            .map_err(|e| GpdError::Budget(e.to_string()))
    }

    pub fn product(&self, a: GId, b: GId) -> OResult<GId> {
        let (ga, gb) = (self.gpd(a), self.gpd(b));
        self.insert(GKey::Product(a, b), || groupoid::product(&ga, &gb))
    }

    /// `X ×_A Y` for `x: X → A` and `y: Y → A`.
    pub fn pullback(&self, x: FunId, y: FunId) -> OResult<GId> {
        let (fx, fy) = (self.fun(x), self.fun(y));
        if fx.tgt.id != fy.tgt.id {
            return Err(OracleError::contract("pullback of a non-cospan"));
        }
        self.insert(GKey::Pullback(x, y), || {
            let name = format!("({}x_{}{})", fx.src.name, fx.tgt.name, fy.src.name);
            groupoid::pullback(
                &fx.src,
                (&fx.obj, &fx.mor),
                &fy.src,
                (&fy.obj, &fy.mor),
                name,
            )
        })
    }

    pub fn interval(&self) -> OResult<GId> {
        self.insert(GKey::Interval, || {
            groupoid::from_category(&crate::fincat::zoo::walking_iso().with_name("I"))
                .expect("walking isomorphism is a groupoid")
        })
    }

    pub fn path(&self, b: GId) -> OResult<GId> {
        let gb = self.gpd(b);
        self.insert(GKey::Path(b), || groupoid::path(&gb))
    }

    /// Intern a functor from its tables. The tables are trusted; use
    /// `check_functor` on anything not built by this module.
    pub fn functor(&self, src: GId, tgt: GId, obj: Vec<u32>, mor: Vec<u32>) -> FunId {
        let key: FKey = (src, tgt, obj.into(), mor.into());
        if let Some(&f) = self.inner.read().unwrap().fkeys.get(&key) {
            return f;
        }
        let (s, t) = (self.gpd(src), self.gpd(tgt));
        let mut inner = self.inner.write().unwrap();
        if let Some(&f) = inner.fkeys.get(&key) {
            return f;
        }
        let id = inner.funs.len() as FunId;
        inner.funs.push(Arc::new(GFun {
            id,
            src: s,
            tgt: t,
            obj: key.2.clone(),
            mor: key.3.clone(),
            index: OnceLock::new(),
        }));
        inner.fkeys.insert(key, id);
        id
    }

    pub fn identity(&self, g: GId) -> FunId {
        let built = self.derived(Derived::Identity(g), || {
            let gg = self.gpd(g);
            let id = self.functor(
                g,
                g,
                (0..gg.num_objects() as u32).collect(),
                (0..gg.num_morphisms() as u32).collect(),
            );
            Ok((id, id))
        });
        built.expect("identity always builds").0
    }

    /// `g∘f`.
    pub fn compose(&self, g: FunId, f: FunId) -> OResult<FunId> {
        self.derived(Derived::Compose(g, f), || {
            self.compose_tables(g, f).map(|c| (c, c))
        })
        .map(|v| v.0)
    }

    fn compose_tables(&self, g: FunId, f: FunId) -> OResult<FunId> {
        let (fg, ff) = (self.fun(g), self.fun(f));
        if ff.tgt.id != fg.src.id {
            return Err(OracleError::contract(format!(
                "cannot compose functors {} -> {} and {} -> {}",
                ff.src.name, ff.tgt.name, fg.src.name, fg.tgt.name
            )));
        }
        let obj = ff.obj.iter().map(|&a| fg.obj[a as usize]).collect();
        let mor = ff.mor.iter().map(|&m| fg.mor[m as usize]).collect();
        Ok(self.functor(ff.src.id, fg.tgt.id, obj, mor))
    }

    /// Both projections out of a product or pullback groupoid.
    pub fn projections(&self, p: GId) -> OResult<(FunId, FunId)> {
        self.derived(Derived::Projections(p), || self.projection_tables(p))
    }

    fn projection_tables(&self, p: GId) -> OResult<(FunId, FunId)> {
        let gp = self.gpd(p);
        let (l, r) = match &gp.shape {
            Shape::Product(l, r) | Shape::Pullback(l, r) => (l.id(), r.id()),
            _ => {
                return Err(OracleError::contract(format!(
                    "{} has no projections",
                    gp.name
                )))
            }
        };
        let n = gp.num_objects() as u32;
        let m = gp.num_morphisms() as u32;
        let proj = |i: usize, tgt: GId| {
            let obj = (0..n).map(|a| gp.obj_coord(a)[i]).collect();
            let mor = (0..m).map(|k| gp.mor_coord(k)[i]).collect();
            self.functor(p, tgt, obj, mor)
        };
        Ok((proj(0, l), proj(1, r)))
    }

    /// `⟨f, g⟩` into the product or pullback groupoid `p` of their targets.
    pub fn pair_into(&self, p: GId, f: FunId, g: FunId) -> OResult<FunId> {
        let (gp, ff, fg) = (self.gpd(p), self.fun(f), self.fun(g));
        if ff.src.id != fg.src.id {
            return Err(OracleError::contract(
                "pairing functors with different sources",
            ));
        }
        let mut obj = Vec::with_capacity(ff.obj.len());
        for (&a, &b) in ff.obj.iter().zip(fg.obj.iter()) {
            obj.push(
                gp.obj_at([a, b])
                    .ok_or_else(|| OracleError::contract(format!("pair misses {}", gp.name)))?,
            );
        }
        let mut mor = Vec::with_capacity(ff.mor.len());
        for (&a, &b) in ff.mor.iter().zip(fg.mor.iter()) {
            mor.push(
                gp.mor_at([a, b, 0])
                    .ok_or_else(|| OracleError::contract(format!("pair misses {}", gp.name)))?,
            );
        }
        Ok(self.functor(ff.src.id, p, obj, mor))
    }

    /// `s: B → B^I`, `b ↦ id_b`.
    pub fn path_const(&self, b: GId) -> OResult<FunId> {
        self.derived(Derived::PathConst(b), || {
            self.path_const_tables(b).map(|s| (s, s))
        })
        .map(|v| v.0)
    }

    fn path_const_tables(&self, b: GId) -> OResult<FunId> {
        let (gb, pi) = (self.gpd(b), self.path(b)?);
        let gpi = self.gpd(pi);
        let obj = (0..gb.num_objects() as u32)
            .map(|a| gpi.obj_at([gb.ident(a), 0]).unwrap())
            .collect();
        let mor = (0..gb.num_morphisms() as u32)
            .map(|m| gpi.mor_at([gb.ident(gb.src(m)), m, m]).unwrap())
            .collect();
        Ok(self.functor(b, pi, obj, mor))
    }

    /// `(d₁, d₂): B^I → B`, source and target of the stored isomorphism.
    pub fn path_ends(&self, b: GId) -> OResult<(FunId, FunId)> {
        self.derived(Derived::PathEnds(b), || self.path_end_tables(b))
    }

    fn path_end_tables(&self, b: GId) -> OResult<(FunId, FunId)> {
        let (gb, pi) = (self.gpd(b), self.path(b)?);
        let gpi = self.gpd(pi);
        let n = gpi.num_objects() as u32;
        let m = gpi.num_morphisms() as u32;
        let d1 = self.functor(
            pi,
            b,
            (0..n).map(|u| gb.src(gpi.obj_coord(u)[0])).collect(),
            (0..m).map(|k| gpi.mor_coord(k)[1]).collect(),
        );
        let d2 = self.functor(
            pi,
            b,
            (0..n).map(|u| gb.tgt(gpi.obj_coord(u)[0])).collect(),
            (0..m).map(|k| gpi.mor_coord(k)[2]).collect(),
        );
        Ok((d1, d2))
    }

    /// The inverse of a functor bijective on objects and morphisms.
    pub fn inverse(&self, f: FunId) -> OResult<FunId> {
        let ff = self.fun(f);
        let (s, t) = (&ff.src, &ff.tgt);
        let mut obj = vec![u32::MAX; t.num_objects()];
        let mut mor = vec![u32::MAX; t.num_morphisms()];
        for (a, &b) in ff.obj.iter().enumerate() {
            obj[b as usize] = a as u32;
        }
        for (m, &n) in ff.mor.iter().enumerate() {
            mor[n as usize] = m as u32;
        }
        if s.num_objects() != t.num_objects()
            || s.num_morphisms() != t.num_morphisms()
            || obj.contains(&u32::MAX)
            || mor.contains(&u32::MAX)
        {
            return Err(OracleError::contract(format!(
                "{} -> {} is not an isomorphism",
                s.name, t.name
            )));
        }
        Ok(self.functor(t.id, s.id, obj, mor))
    }
}

/// Check that tables define a functor between the given groupoids.
pub fn check_functor(src: &Gpd, tgt: &Gpd, obj: &[u32], mor: &[u32]) -> Result<(), String> {
    if obj.len() != src.num_objects() || mor.len() != src.num_morphisms() {
        return Err("table sizes do not match the source".into());
    }
    if obj.iter().any(|&a| a as usize >= tgt.num_objects())
        || mor.iter().any(|&m| m as usize >= tgt.num_morphisms())
    {
        return Err("image outside the target".into());
    }
    for m in 0..src.num_morphisms() as u32 {
        let fm = mor[m as usize];
        if tgt.src(fm) != obj[src.src(m) as usize] || tgt.tgt(fm) != obj[src.tgt(m) as usize] {
            return Err(format!(
                "morphism {} lands on the wrong endpoints",
                src.mor_label(m)
            ));
        }
        for &n in src.outs(src.tgt(m)) {
            if mor[src.comp(n, m) as usize] != tgt.comp(mor[n as usize], fm) {
                return Err(format!(
                    "composite {} . {} is not preserved",
                    src.mor_label(n),
                    src.mor_label(m)
                ));
            }
        }
    }
    for a in 0..src.num_objects() as u32 {
        if mor[src.ident(a) as usize] != tgt.ident(obj[a as usize]) {
            return Err(format!("identity of {} is not preserved", src.obj_label(a)));
        }
    }
    Ok(())
}
