//! The folk model structure on finite groupoids, checked by brute force:
//! path and cylinder objects, the mapping-path factorization, fiberwise
//! homotopy, right properness samples, and the comparison of synthesized
//! 2-cells with natural isomorphisms.
//!
//! Everything here enumerates directly and shares no code with the class
//! keys in `ho`, so it can serve as an oracle for them.

use std::collections::BTreeMap;

use super::family::GpdFamily;
use super::groupoid::{FunId, GId, Gpd, Shape};
use super::ho::{is_equivalence, is_inj_on_objects, is_isofibration, Tables};
use super::oracle::{GpdOracle, HoMor};
use super::store::{GFun, GpdStore};
use crate::htpy::{LawCheck, SynthesizedTwoCategory};
use crate::oracle::{OResult, OracleError};

/// Brute-force enumeration refuses sources with more morphisms than this.
pub const BRUTE_FORCE_MORPHISMS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("correspondence fails: {witness}")]
    CorrespondenceFailure { witness: String },
    #[error("{0} is too large to enumerate")]
    TooLarge(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// `B^I` with `s: B → B^I` and `d₁, d₂: B^I → B` (source and target).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathObject {
    pub path: GId,
    pub s: FunId,
    pub d1: FunId,
    pub d2: FunId,
    /// `⟨d₁, d₂⟩` into the structural `B × B`.
    pub ends: FunId,
}

pub fn path_object(store: &GpdStore, b: GId) -> OResult<PathObject> {
    let path = store.path(b)?;
    let s = store.path_const(b)?;
    let (d1, d2) = store.path_ends(b)?;
    let bb = store.product(b, b)?;
    let ends = store.pair_into(bb, d1, d2)?;
    Ok(PathObject {
        path,
        s,
        d1,
        d2,
        ends,
    })
}

/// `⟨d₁,d₂⟩∘s = Δ`, `s` an equivalence, `⟨d₁,d₂⟩` an isofibration.
pub fn check_path_object(store: &GpdStore, b: GId, po: &PathObject) -> OResult<LawCheck> {
    let id = store.identity(b);
    let bb = store.product(b, b)?;
    let delta = store.pair_into(bb, id, id)?;
    let failure = if store.compose(po.ends, po.s)? != delta {
        Some("ends after s is not the diagonal".to_string())
    } else if !is_equivalence(&store.fun(po.s)) {
        Some("s is not an equivalence".into())
    } else if !is_isofibration(&store.fun(po.ends)) {
        Some("the ends map is not an isofibration".into())
    } else {
        None
    };
    Ok(LawCheck {
        law: "path object",
        instances: 1,
        failure,
    })
}

/// `A × I` with `∂₁, ∂₂: A → A × I` and `σ: A × I → A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cylinder {
    pub cyl: GId,
    pub del1: FunId,
    pub del2: FunId,
    pub sigma: FunId,
}

pub fn cylinder(store: &GpdStore, a: GId) -> OResult<Cylinder> {
    let i = store.interval()?;
    let cyl = store.product(a, i)?;
    let ga = store.gpd(a);
    let gi = store.gpd(i);
    let id = store.identity(a);
    let end = |e: u32| {
        store.functor(
            a,
            i,
            vec![e; ga.num_objects()],
            vec![gi.ident(e); ga.num_morphisms()],
        )
    };
    let del1 = store.pair_into(cyl, id, end(0))?;
    let del2 = store.pair_into(cyl, id, end(1))?;
    let (sigma, _) = store.projections(cyl)?;
    Ok(Cylinder {
        cyl,
        del1,
        del2,
        sigma,
    })
}

/// `σ∘∂ᵢ = id`, `σ` an equivalence, `[∂₁, ∂₂]` injective on objects.
pub fn check_cylinder(store: &GpdStore, a: GId, c: &Cylinder) -> OResult<LawCheck> {
    let id = store.identity(a);
    let (d1, d2) = (store.fun(c.del1), store.fun(c.del2));
    let disjoint = d1.obj.iter().all(|o| !d2.obj.contains(o));
    let failure = if store.compose(c.sigma, c.del1)? != id || store.compose(c.sigma, c.del2)? != id
    {
        Some("σ is not a retraction of both ends".to_string())
    } else if !is_equivalence(&store.fun(c.sigma)) {
        Some("σ is not an equivalence".into())
    } else if !(is_inj_on_objects(&d1) && is_inj_on_objects(&d2) && disjoint) {
        Some("the two ends are not jointly injective on objects".into())
    } else {
        None
    };
    Ok(LawCheck {
        law: "cylinder object",
        instances: 1,
        failure,
    })
}

/// `f = p∘w` with `w` an injective-on-objects equivalence and `p` an
/// isofibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factorization {
    pub middle: GId,
    pub w: FunId,
    pub p: FunId,
}

/// Mapping path `M = X ×_Y Y^I`: objects `(ξ, v: η → f(ξ))`, with
/// `w = ⟨id, s∘f⟩` and `p` the source of `v`.
pub fn factor_we_fib(store: &GpdStore, f: FunId) -> OResult<Factorization> {
    let ff = store.fun(f);
    let (x, y) = (ff.src.id(), ff.tgt.id());
    let po = path_object(store, y)?;
    let middle = store.pullback(f, po.d2)?;
    let (_, pi2) = store.projections(middle)?;
    let w = store.pair_into(middle, store.identity(x), store.compose(po.s, f)?)?;
    let p = store.compose(po.d1, pi2)?;
    Ok(Factorization { middle, w, p })
}

pub fn check_factorization(store: &GpdStore, f: FunId, fac: &Factorization) -> OResult<LawCheck> {
    let (w, p) = (store.fun(fac.w), store.fun(fac.p));
    let failure = if store.compose(fac.p, fac.w)? != f {
        Some("p after w is not f".to_string())
    } else if !is_equivalence(&w) || !is_inj_on_objects(&w) {
        Some("w is not an injective-on-objects equivalence".into())
    } else if !is_isofibration(&p) {
        Some("p is not an isofibration".into())
    } else {
        None
    };
    Ok(LawCheck {
        law: "factorization",
        instances: 1,
        failure,
    })
}

/// Composition triples `(g, f, g∘f)` of `x`, grouped by their largest entry.
fn triples_by_last(x: &Gpd) -> Vec<Vec<(u32, u32, u32)>> {
    let mut out = vec![Vec::new(); x.num_morphisms()];
    for f in 0..x.num_morphisms() as u32 {
        for &g in x.outs(x.tgt(f)) {
            let gf = x.comp(g, f);
            out[f.max(g).max(gf) as usize].push((g, f, gf));
        }
    }
    out
}

/// Every functor `X → Y` with `y∘m = b`, by backtracking over object and
/// then morphism images. Sorted.
pub fn functors_over(
    x: &Gpd,
    y: &GFun,
    b_obj: &[u32],
    b_mor: &[u32],
) -> Result<Vec<Tables>, ModelError> {
    if x.num_morphisms() > BRUTE_FORCE_MORPHISMS {
        return Err(ModelError::TooLarge(x.name.clone()));
    }
    let yg = &*y.src;
    let obj_cands: Vec<Vec<u32>> = (0..x.num_objects())
        .map(|xi| {
            (0..yg.num_objects() as u32)
                .filter(|&e| y.obj[e as usize] == b_obj[xi])
                .collect()
        })
        .collect();
    let triples = triples_by_last(x);
    let mut out = Vec::new();
    let mut obj = vec![0u32; x.num_objects()];
    let mut mor = vec![0u32; x.num_morphisms()];

    fn mors(
        k: usize,
        x: &Gpd,
        y: &GFun,
        b_mor: &[u32],
        triples: &[Vec<(u32, u32, u32)>],
        obj: &[u32],
        mor: &mut [u32],
        out: &mut Vec<Tables>,
    ) {
        if k == x.num_morphisms() {
            out.push((obj.to_vec(), mor.to_vec()));
            return;
        }
        let yg = &*y.src;
        let (s, t) = (obj[x.src(k as u32) as usize], obj[x.tgt(k as u32) as usize]);
        let cands: Vec<u32> = if x.is_identity(k as u32) {
            vec![yg.ident(s)]
        } else {
            yg.hom(s, t)
                .filter(|&c| y.mor[c as usize] == b_mor[k])
                .collect()
        };
        for c in cands {
            mor[k] = c;
            if triples[k]
                .iter()
                .all(|&(g, f, gf)| yg.comp(mor[g as usize], mor[f as usize]) == mor[gf as usize])
            {
                mors(k + 1, x, y, b_mor, triples, obj, mor, out);
            }
        }
    }

    fn objs(
        i: usize,
        x: &Gpd,
        y: &GFun,
        b_mor: &[u32],
        cands: &[Vec<u32>],
        triples: &[Vec<(u32, u32, u32)>],
        obj: &mut [u32],
        mor: &mut [u32],
        out: &mut Vec<Tables>,
    ) {
        if i == x.num_objects() {
            mors(0, x, y, b_mor, triples, obj, mor, out);
            return;
        }
        for &c in &cands[i] {
            obj[i] = c;
            objs(i + 1, x, y, b_mor, cands, triples, obj, mor, out);
        }
    }

    objs(
        0, x, y, b_mor, &obj_cands, &triples, &mut obj, &mut mor, &mut out,
    );
    out.sort();
    Ok(out)
}

/// Whether some natural isomorphism `p ⇒ q` has every component sent to an
/// identity by `y`.
pub fn fiberwise_homotopic(x: &Gpd, y: &GFun, p: &Tables, q: &Tables) -> Result<bool, ModelError> {
    let sizes = |t: &Tables| t.0.len() == x.num_objects() && t.1.len() == x.num_morphisms();
    if !sizes(p) || !sizes(q) {
        return Err(ModelError::EndpointMismatch(format!(
            "tables do not match {}",
            x.name
        )));
    }
    let base = |t: &Tables| -> (Vec<u32>, Vec<u32>) {
        (
            t.0.iter().map(|&e| y.obj[e as usize]).collect(),
            t.1.iter().map(|&m| y.mor[m as usize]).collect(),
        )
    };
    if base(p) != base(q) {
        return Err(ModelError::EndpointMismatch(
            "the two functors lie over different base functors".into(),
        ));
    }
    // Morphisms to check once both endpoints have components.
    let mut ready: Vec<Vec<u32>> = vec![Vec::new(); x.num_objects()];
    for k in 0..x.num_morphisms() as u32 {
        ready[x.src(k).max(x.tgt(k)) as usize].push(k);
    }
    fn search(
        i: usize,
        x: &Gpd,
        y: &GFun,
        p: &Tables,
        q: &Tables,
        ready: &[Vec<u32>],
        h: &mut Vec<u32>,
    ) -> bool {
        if i == x.num_objects() {
            return true;
        }
        let yg = &*y.src;
        let cands: Vec<u32> = yg
            .hom(p.0[i], q.0[i])
            .filter(|&c| y.tgt.is_identity(y.mor[c as usize]))
            .collect();
        for c in cands {
            h[i] = c;
            let natural = ready[i].iter().all(|&k| {
                let (s, t) = (x.src(k) as usize, x.tgt(k) as usize);
                yg.comp(h[t], p.1[k as usize]) == yg.comp(q.1[k as usize], h[s])
            });
            if natural && search(i + 1, x, y, p, q, ready, h) {
                return true;
            }
        }
        false
    }
    let mut h = vec![0; x.num_objects()];
    Ok(search(0, x, y, p, q, &ready, &mut h))
}

fn partition(
    items: &[Tables],
    mut related: impl FnMut(&Tables, &Tables) -> Result<bool, ModelError>,
) -> Result<Vec<Vec<Tables>>, ModelError> {
    let mut classes: Vec<Vec<Tables>> = Vec::new();
    'next: for m in items {
        for c in classes.iter_mut() {
            if related(&c[0], m)? {
                c.push(m.clone());
                continue 'next;
            }
        }
        classes.push(vec![m.clone()]);
    }
    Ok(classes)
}

/// Base tables of `f∘x`.
fn over_tables(x: &GFun, f: &GFun) -> Result<(Vec<u32>, Vec<u32>), ModelError> {
    if x.tgt.id() != f.src.id() {
        return Err(ModelError::EndpointMismatch(format!(
            "{} does not lie over the source of {}",
            x.src.name, f.src.name
        )));
    }
    Ok((
        x.obj.iter().map(|&a| f.obj[a as usize]).collect(),
        x.mor.iter().map(|&m| f.mor[m as usize]).collect(),
    ))
}

/// All squares from `x` to `y` over `f`, partitioned into fiberwise-homotopy
/// classes. Classes and their members are sorted.
pub fn pi_f_classes(
    store: &GpdStore,
    x: FunId,
    y: FunId,
    f: FunId,
) -> Result<Vec<Vec<Tables>>, ModelError> {
    let (fx, fy, ff) = (store.fun(x), store.fun(y), store.fun(f));
    if ff.tgt.id() != fy.tgt.id() {
        return Err(ModelError::EndpointMismatch(format!(
            "{} does not lie over the target of {}",
            fy.src.name, ff.src.name
        )));
    }
    let (bo, bm) = over_tables(&fx, &ff)?;
    let squares = functors_over(&fx.src, &fy, &bo, &bm)?;
    let mut classes = partition(&squares, |p, q| fiberwise_homotopic(&fx.src, &fy, p, q))?;
    for c in &mut classes {
        c.sort();
    }
    classes.sort();
    Ok(classes)
}

/// Left-homotopy classes of maps `∑_f P → Q` in the slice over the target of
/// `f`, using the cylinder `X × I` over `f∘x∘σ`.
pub fn left_homotopy_classes(
    store: &GpdStore,
    x: FunId,
    y: FunId,
    f: FunId,
) -> Result<Vec<Vec<Tables>>, ModelError> {
    let (fx, fy, ff) = (store.fun(x), store.fun(y), store.fun(f));
    let (bo, bm) = over_tables(&fx, &ff)?;
    let maps = functors_over(&fx.src, &fy, &bo, &bm)?;
    let cyl = cylinder(store, fx.src.id())?;
    let (sigma, gc) = (store.fun(cyl.sigma), store.gpd(cyl.cyl));
    let co: Vec<u32> = sigma.obj.iter().map(|&a| bo[a as usize]).collect();
    let cm: Vec<u32> = sigma.mor.iter().map(|&m| bm[m as usize]).collect();
    let homotopies = functors_over(&gc, &fy, &co, &cm)?;
    let ends = |d: &GFun, h: &Tables| -> Tables {
        (
            d.obj.iter().map(|&a| h.0[a as usize]).collect(),
            d.mor.iter().map(|&m| h.1[m as usize]).collect(),
        )
    };
    let (d1, d2) = (store.fun(cyl.del1), store.fun(cyl.del2));
    let index: BTreeMap<&Tables, usize> = maps.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut parent: Vec<usize> = (0..maps.len()).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    for h in &homotopies {
        let (a, b) = (index[&ends(&d1, h)], index[&ends(&d2, h)]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra.max(rb)] = ra.min(rb);
    }
    let mut groups: BTreeMap<usize, Vec<Tables>> = BTreeMap::new();
    for (i, m) in maps.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(m.clone());
    }
    let mut classes: Vec<Vec<Tables>> = groups.into_values().collect();
    classes.sort();
    Ok(classes)
}

/// Fiberwise-homotopy classes over `f` and left-homotopy classes out of
/// `∑_f P` are the same partition of the same set of maps.
pub fn check_sum_bijection(
    store: &GpdStore,
    x: FunId,
    y: FunId,
    f: FunId,
) -> Result<LawCheck, ModelError> {
    let over = pi_f_classes(store, x, y, f)?;
    let left = left_homotopy_classes(store, x, y, f)?;
    let failure = (over != left).then(|| {
        format!(
            "{} classes over the base map, {} left-homotopy classes",
            over.len(),
            left.len()
        )
    });
    Ok(LawCheck {
        law: "homotopy classes over f match left-homotopy classes out of the pushforward",
        instances: 1,
        failure,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightPropernessReport {
    /// Pullbacks of an equivalence along an isofibration that were checked.
    pub squares: u64,
    pub failure: Option<String>,
}

impl RightPropernessReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Pull equivalences back along isofibrations and check the result is an
/// equivalence. Targets are the members and their squares; isofibrations
/// include identities, path-object ends, projections and mapping-path
/// factorizations of functors between members.
pub fn check_right_properness_samples(fam: &GpdFamily, cap: u64) -> OResult<RightPropernessReport> {
    let store = &fam.store;
    let mut into: BTreeMap<GId, (Vec<FunId>, Vec<FunId>)> = BTreeMap::new();
    let mut add = |f: FunId, store: &GpdStore| {
        let ff = store.fun(f);
        let e = into.entry(ff.tgt.id()).or_default();
        if is_equivalence(&ff) {
            e.0.push(f);
        }
        if is_isofibration(&ff) {
            e.1.push(f);
        }
    };
    for &b in &fam.members {
        add(store.identity(b), store);
        let po = path_object(store, b)?;
        add(po.d1, store);
        add(po.d2, store);
        add(po.ends, store);
        for &a in &fam.members {
            let p = store.product(a, b)?;
            let (p1, p2) = store.projections(p)?;
            add(p1, store);
            add(p2, store);
            let ga = store.gpd(a);
            let gb = store.gpd(b);
            for (o, m) in super::ho::all_functors(&ga, &gb).into_iter().take(4) {
                let f = store.functor(a, b, o, m);
                add(f, store);
                add(factor_we_fib(store, f)?.p, store);
            }
        }
    }
    let mut squares = 0;
    for (w_list, p_list) in into.values() {
        for &w in w_list {
            for &p in p_list {
                if squares >= cap {
                    return Ok(RightPropernessReport {
                        squares,
                        failure: None,
                    });
                }
                squares += 1;
                let pb = store.pullback(w, p)?;
                let (_, leg) = store.projections(pb)?;
                if !is_equivalence(&store.fun(leg)) {
                    let (fw, fp) = (store.fun(w), store.fun(p));
                    return Ok(RightPropernessReport {
                        squares,
                        failure: Some(format!(
                            "pulling {} -> {} back along {} -> {} gives no equivalence; the folk structure is right proper, so this is an implementation bug",
                            fw.src.name, fw.tgt.name, fp.src.name, fp.tgt.name
                        )),
                    });
                }
            }
        }
    }
    Ok(RightPropernessReport {
        squares,
        failure: None,
    })
}

/// Natural isomorphisms `f ⇒ g` between functors `A → B`, as component
/// tables indexed by the objects of `A`. Sorted.
pub fn natural_isos(a: &Gpd, b: &Gpd, f: &GFun, g: &GFun) -> Vec<Vec<u32>> {
    let mut ready: Vec<Vec<u32>> = vec![Vec::new(); a.num_objects()];
    for k in 0..a.num_morphisms() as u32 {
        ready[a.src(k).max(a.tgt(k)) as usize].push(k);
    }
    fn search(
        i: usize,
        a: &Gpd,
        b: &Gpd,
        f: &GFun,
        g: &GFun,
        ready: &[Vec<u32>],
        h: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if i == a.num_objects() {
            out.push(h.clone());
            return;
        }
        let cands: Vec<u32> = b.hom(f.obj[i], g.obj[i]).collect();
        for c in cands {
            h[i] = c;
            let natural = ready[i].iter().all(|&k| {
                let (s, t) = (a.src(k) as usize, a.tgt(k) as usize);
                b.comp(h[t], f.mor[k as usize]) == b.comp(g.mor[k as usize], h[s])
            });
            if natural {
                search(i + 1, a, b, f, g, ready, h, out);
            }
        }
    }
    let mut out = Vec::new();
    search(
        0,
        a,
        b,
        f,
        g,
        &ready,
        &mut vec![0; a.num_objects()],
        &mut out,
    );
    out.sort();
    out
}

/// The natural isomorphism carried by a 2-cell body `⊤_A → Eq_B`.
fn read_off(o: &GpdOracle, body: &HoMor) -> Result<Vec<u32>, ModelError> {
    let rep = o.store.fun(body.rep);
    let total = &*rep.tgt;
    let iso_of = |e: u32| -> Result<u32, ModelError> {
        match &total.shape {
            Shape::Path(_) => Ok(total.obj_coord(e)[0]),
            Shape::Product(l, _) if matches!(l.shape, Shape::Path(_)) => {
                Ok(l.obj_coord(total.obj_coord(e)[0])[0])
            }
            _ => Err(ModelError::CorrespondenceFailure {
                witness: format!(
                    "2-cell body lands in {}, which is no path groupoid",
                    total.name
                ),
            }),
        }
    };
    rep.obj.iter().map(|&e| iso_of(e)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub checks: Vec<LawCheck>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(LawCheck::passed)
    }
}

/// Compare the synthesized 2-cells between the given 0-cells (indices into
/// `t`) with natural isomorphisms: a bijection on each hom-pair that sends
/// identities, vertical composites and horizontal composites to theirs.
pub fn classical_correspondence(
    o: &GpdOracle,
    t: &SynthesizedTwoCategory<FunId, HoMor>,
    objects: &[usize],
) -> Result<CorrespondenceReport, ModelError> {
    let store = &o.store;
    let zero = crate::oracle::FibrationOracle::zero_cells(o);
    let gpd_at = |a: usize| store.gpd(zero[a]);
    let fail = |witness: String| Err(ModelError::CorrespondenceFailure { witness });
    // nat[(a, b)][cell] = components.
    let mut nat: BTreeMap<(usize, usize), Vec<Vec<u32>>> = BTreeMap::new();
    let mut bij = LawCheck {
        law: "2-cells biject with natural isomorphisms",
        instances: 0,
        failure: None,
    };
    let mut ids = LawCheck {
        law: "identity 2-cells are identity transformations",
        instances: 0,
        failure: None,
    };
    let mut vert = LawCheck {
        law: "vertical composition is composition of components",
        instances: 0,
        failure: None,
    };
    for &a in objects {
        for &b in objects {
            let hom = t.hom(a, b);
            let (ga, gb) = (gpd_at(a), gpd_at(b));
            let mut table = Vec::with_capacity(hom.num_cells());
            for c in &hom.cells {
                table.push(read_off(o, &c.body)?);
            }
            for (fi, f) in hom.morphisms.iter().enumerate() {
                for (gi, g) in hom.morphisms.iter().enumerate() {
                    bij.instances += 1;
                    let (ff, fg) = (store.fun(*f), store.fun(*g));
                    let brute = natural_isos(&ga, &gb, &ff, &fg);
                    let mut ours: Vec<Vec<u32>> = hom
                        .cells_between(fi as u32, gi as u32)
                        .map(|c| table[c as usize].clone())
                        .collect();
                    ours.sort();
                    if ours != brute {
                        return fail(format!(
                            "{} 2-cells {} => {} but {} natural isomorphisms",
                            ours.len(),
                            hom.mor_labels[fi],
                            hom.mor_labels[gi],
                            brute.len()
                        ));
                    }
                }
                ids.instances += 1;
                let fa = store.fun(*f);
                let want: Vec<u32> = fa.obj.iter().map(|&e| gb.ident(e)).collect();
                if table[hom.ident[fi] as usize] != want {
                    return fail(format!("identity 2-cell on {}", hom.mor_labels[fi]));
                }
            }
            for (ai, al) in hom.cells.iter().enumerate() {
                for &bi in hom.cells_out_of(al.tgt) {
                    vert.instances += 1;
                    let ab = hom.vcomp(bi, ai as u32).expect("composable");
                    let want: Vec<u32> = table[bi as usize]
                        .iter()
                        .zip(&table[ai])
                        .map(|(&y, &x)| gb.comp(y, x))
                        .collect();
                    if table[ab as usize] != want {
                        return fail(format!(
                            "{} . {}",
                            hom.cell_label(bi),
                            hom.cell_label(ai as u32)
                        ));
                    }
                }
            }
            nat.insert((a, b), table);
        }
    }
    let mut horiz = LawCheck {
        law: "horizontal composition is whiskered composition",
        instances: 0,
        failure: None,
    };
    for &a in objects {
        for &b in objects {
            for &c in objects {
                let (hab, hbc) = (t.hom(a, b), t.hom(b, c));
                let gc = gpd_at(c);
                for (bi, be) in hbc.cells.iter().enumerate() {
                    let k = store.fun(hbc.morphisms[be.tgt as usize]);
                    for (ai, al) in hab.cells.iter().enumerate() {
                        horiz.instances += 1;
                        let f = store.fun(hab.morphisms[al.src as usize]);
                        let (na, nb) = (&nat[&(a, b)][ai], &nat[&(b, c)][bi]);
                        // (β∘α)_x = k(α_x) ∘ β_{f x}
                        let want: Vec<u32> = (0..na.len())
                            .map(|x| gc.comp(k.mor[na[x] as usize], nb[f.obj[x] as usize]))
                            .collect();
                        let got = t.hcomp(a, b, c, bi as u32, ai as u32);
                        if nat[&(a, c)][got as usize] != want {
                            return fail(format!(
                                "{} o {}",
                                hbc.cell_label(bi as u32),
                                hab.cell_label(ai as u32)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(CorrespondenceReport {
        checks: vec![bij, ids, vert, horiz],
    })
}

/// Caps for [`model_spot_checks`].
#[derive(Debug, Clone, Copy)]
pub struct SpotCheckScope {
    /// Functors per ordered pair of members to factor.
    pub functors_per_pair: usize,
    /// Pullback squares for right properness.
    pub squares: u64,
    /// Base maps per pair of sample slices for the `∑_f` bijection.
    pub maps_per_pair: usize,
    /// Slices whose total groupoid has more morphisms are skipped.
    pub slice_morphisms: usize,
}

impl Default for SpotCheckScope {
    fn default() -> Self {
        SpotCheckScope {
            functors_per_pair: 6,
            squares: 5_000,
            maps_per_pair: 2,
            slice_morphisms: 16,
        }
    }
}

/// The mapping-path factorization of functors between members, right
/// properness on the family's closure, and the `∑_f` bijection on slices
/// sampled from the oracle's 0-cells.
pub fn model_spot_checks(
    o: &GpdOracle,
    scope: &SpotCheckScope,
) -> Result<Vec<LawCheck>, ModelError> {
    use crate::oracle::FibrationOracle;
    let fam = &o.family;
    let s = &*o.store;
    let mut fac = LawCheck {
        law: "mapping-path factorizations are (injective equivalence, isofibration)",
        instances: 0,
        failure: None,
    };
    for &a in &fam.members {
        for &b in &fam.members {
            let (ga, gb) = (s.gpd(a), s.gpd(b));
            for (obj, mor) in super::ho::all_functors(&ga, &gb)
                .into_iter()
                .take(scope.functors_per_pair)
            {
                let f = s.functor(a, b, obj, mor);
                let r = check_factorization(s, f, &factor_we_fib(s, f)?)?;
                fac.instances += 1;
                if let (Some(w), None) = (r.failure, &fac.failure) {
                    fac.failure = Some(format!("{} -> {}: {w}", ga.name, gb.name));
                }
            }
        }
    }
    let rp = check_right_properness_samples(fam, scope.squares)?;
    let rp = LawCheck {
        law: "pullbacks of equivalences along isofibrations are equivalences",
        instances: rp.squares,
        failure: rp.failure,
    };

    let mut slices = Vec::new();
    for a in o.zero_cells() {
        slices.extend(o.fiber_sample(&a)?);
        slices.push(o.eq(&a)?.0);
    }
    slices.retain(|&p| s.fun(p).src.num_morphisms() <= scope.slice_morphisms);
    slices.sort();
    slices.dedup();
    let mut sum = LawCheck {
        law: "homotopy classes over f match left-homotopy classes out of the pushforward",
        instances: 0,
        failure: None,
    };
    for &p in &slices {
        for &q in &slices {
            let (fp, fq) = (s.fun(p), s.fun(q));
            for f in o
                .b_hom(&fp.tgt.id(), &fq.tgt.id())?
                .into_iter()
                .take(scope.maps_per_pair)
            {
                let r = check_sum_bijection(s, p, q, f)?;
                sum.instances += 1;
                if let (Some(w), None) = (r.failure, &sum.failure) {
                    sum.failure = Some(w);
                }
            }
        }
    }
    Ok(vec![fac, rp, sum])
}
