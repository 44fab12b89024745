//! Subsets of finite sets over the category of finite sets and functions.
//!
//! The base is generated lazily: an object is a size `n` standing for
//! `{0, …, n-1}`, a morphism is a function table, and `n × m` is `n·m` with
//! `(i, j) ↦ i·m + j`. The fiber over `n` is the powerset of `n`, ordered by
//! inclusion, so it is a preorder and morphisms are determined by their
//! endpoints and base map.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::fibcore::{FibError, Prefibration};
use crate::fincat::{assemble, FinFunctor, Mo, Ob};
use crate::oracle::{BProduct, FibrationOracle, Meet, OResult, OracleError};

/// Largest set size whose subsets fit a `Subset`.
pub const MAX_SUBOBJECT_SIZE: u32 = 256;
/// Largest base hom-set `b_hom` will enumerate.
const HOM_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    pub n: u32,
    pub bits: [u64; 4],
}

impl Subset {
    pub fn empty(n: u32) -> Self {
        Subset { n, bits: [0; 4] }
    }

    pub fn full(n: u32) -> Self {
        let mut s = Subset::empty(n);
        (0..n).for_each(|i| s.insert(i));
        s
    }

    pub fn from_elems(n: u32, elems: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Subset::empty(n);
        elems.into_iter().for_each(|i| s.insert(i));
        s
    }

    pub fn contains(&self, i: u32) -> bool {
        self.bits[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: u32) {
        debug_assert!(i < self.n);
        self.bits[(i / 64) as usize] |= 1 << (i % 64);
    }

    pub fn elems(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.n).filter(|&i| self.contains(i))
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect(&self, other: &Subset) -> Subset {
        let mut bits = self.bits;
        bits.iter_mut().zip(&other.bits).for_each(|(a, b)| *a &= b);
        Subset { n: self.n, bits }
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let elems: Vec<String> = self.elems().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}<={}", elems.join(","), self.n)
    }
}

/// A function `{0..dom} → {0..cod}` as its table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetMap {
    pub dom: u32,
    pub cod: u32,
    pub map: Arc<[u32]>,
}

impl SetMap {
    pub fn new(dom: u32, cod: u32, map: Vec<u32>) -> Self {
        debug_assert!(map.len() == dom as usize && map.iter().all(|&x| x < cod));
        SetMap {
            dom,
            cod,
            map: map.into(),
        }
    }

    pub fn identity(n: u32) -> Self {
        SetMap::new(n, n, (0..n).collect())
    }

    pub fn then(&self, g: &SetMap) -> SetMap {
        SetMap::new(
            self.dom,
            g.cod,
            self.map.iter().map(|&x| g.map[x as usize]).collect(),
        )
    }

    pub fn preimage(&self, s: &Subset) -> Subset {
        Subset::from_elems(
            self.dom,
            (0..self.dom).filter(|&i| s.contains(self.map[i as usize])),
        )
    }

    pub fn image(&self, s: &Subset) -> Subset {
        Subset::from_elems(self.cod, s.elems().map(|i| self.map[i as usize]))
    }
}

impl fmt::Display for SetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.map.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]:{}->{}", m.join(","), self.dom, self.cod)
    }
}

/// The inclusion `src ⊆ over⁻¹(tgt)`, the only morphism `src → tgt` over `over`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubMor {
    pub src: Subset,
    pub tgt: Subset,
    pub over: SetMap,
}

#[derive(Debug, Clone)]
pub struct SubobjectOracle {
    zero: Vec<u32>,
}

impl SubobjectOracle {
    /// 0-cells are the sets of size `0..=k`.
    pub fn new(k: u32) -> Self {
        SubobjectOracle {
            zero: (0..=k).collect(),
        }
    }

    fn check_size(n: u64) -> OResult<u32> {
        if n > MAX_SUBOBJECT_SIZE as u64 {
            return Err(OracleError::Budget(format!(
                "finite set of size {n} exceeds {MAX_SUBOBJECT_SIZE}"
            )));
        }
        Ok(n as u32)
    }

    fn mk(&self, src: Subset, tgt: Subset, over: SetMap) -> OResult<SubMor> {
        if src.n != over.dom || tgt.n != over.cod || !src.is_subset(&over.preimage(&tgt)) {
            return Err(OracleError::contract(format!(
                "no morphism {src} -> {tgt} over {over}"
            )));
        }
        Ok(SubMor { src, tgt, over })
    }
}

impl FibrationOracle for SubobjectOracle {
    type BObj = u32;
    type BMor = SetMap;
    type TObj = Subset;
    type TMor = SubMor;

    fn label(&self) -> String {
        format!(
            "subobjects of finite sets, sizes 0..={}",
            self.zero.len() - 1
        )
    }
    fn zero_cells(&self) -> Vec<u32> {
        self.zero.clone()
    }

    fn b_hom(&self, a: &u32, b: &u32) -> OResult<Vec<SetMap>> {
        let count = (*b as u64).checked_pow(*a).filter(|&c| c <= HOM_CAP);
        let Some(count) = count else {
            return Err(OracleError::Budget(format!("{b}^{a} functions")));
        };
        let mut out = Vec::with_capacity(count as usize);
        let mut table = vec![0u32; *a as usize];
        for _ in 0..count {
            out.push(SetMap::new(*a, *b, table.clone()));
            // Odometer, last digit fastest, so `out` is in lexicographic order.
            for d in table.iter_mut().rev() {
                *d += 1;
                if *d < *b {
                    break;
                }
                *d = 0;
            }
        }
        Ok(out)
    }
    fn b_src(&self, f: &SetMap) -> u32 {
        f.dom
    }
    fn b_tgt(&self, f: &SetMap) -> u32 {
        f.cod
    }
    fn b_id(&self, a: &u32) -> SetMap {
        SetMap::identity(*a)
    }
    fn b_comp(&self, g: &SetMap, f: &SetMap) -> OResult<SetMap> {
        if f.cod != g.dom {
            return Err(OracleError::contract(format!(
                "cannot compose {g} after {f}"
            )));
        }
        Ok(f.then(g))
    }
    fn b_terminal(&self) -> u32 {
        1
    }
    fn b_to_terminal(&self, a: &u32) -> OResult<SetMap> {
        Ok(SetMap::new(*a, 1, vec![0; *a as usize]))
    }
    fn b_product(&self, a: &u32, b: &u32) -> OResult<BProduct<u32, SetMap>> {
        let n = Self::check_size(*a as u64 * *b as u64)?;
        Ok(BProduct {
            vertex: n,
            proj1: SetMap::new(n, *a, (0..n).map(|x| x / b).collect()),
            proj2: SetMap::new(n, *b, (0..n).map(|x| x % b).collect()),
        })
    }
    fn b_pair(&self, f: &SetMap, g: &SetMap) -> OResult<SetMap> {
        if f.dom != g.dom {
            return Err(OracleError::contract(format!("cannot pair {f} with {g}")));
        }
        let n = Self::check_size(f.cod as u64 * g.cod as u64)?;
        Ok(SetMap::new(
            f.dom,
            n,
            f.map
                .iter()
                .zip(g.map.iter())
                .map(|(x, y)| x * g.cod + y)
                .collect(),
        ))
    }

    fn t_src(&self, m: &SubMor) -> Subset {
        m.src
    }
    fn t_tgt(&self, m: &SubMor) -> Subset {
        m.tgt
    }
    fn t_over(&self, p: &Subset) -> u32 {
        p.n
    }
    fn t_base(&self, m: &SubMor) -> SetMap {
        m.over.clone()
    }
    fn t_id(&self, p: &Subset) -> OResult<SubMor> {
        Ok(SubMor {
            src: *p,
            tgt: *p,
            over: SetMap::identity(p.n),
        })
    }
    fn t_comp(&self, q: &SubMor, p: &SubMor) -> OResult<SubMor> {
        if p.tgt != q.src {
            return Err(OracleError::contract(format!(
                "cannot compose at {} / {}",
                p.tgt, q.src
            )));
        }
        Ok(SubMor {
            src: p.src,
            tgt: q.tgt,
            over: p.over.then(&q.over),
        })
    }

    fn top(&self, a: &u32) -> OResult<Subset> {
        Ok(Subset::full(Self::check_size(*a as u64)?))
    }
    fn ex(&self, p: &Subset, g: &SetMap) -> OResult<SubMor> {
        self.mk(*p, Subset::full(g.cod), g.clone())
    }
    fn meet(&self, p: &Subset, q: &Subset) -> OResult<Meet<Subset, SubMor>> {
        if p.n != q.n {
            return Err(OracleError::contract(format!(
                "{p} and {q} lie over different sets"
            )));
        }
        let v = p.intersect(q);
        let id = SetMap::identity(p.n);
        Ok(Meet {
            vertex: v,
            proj1: self.mk(v, *p, id.clone())?,
            proj2: self.mk(v, *q, id)?,
        })
    }
    fn pair_over(&self, q: &SubMor, r: &SubMor) -> OResult<SubMor> {
        if q.src != r.src || q.over != r.over {
            return Err(OracleError::contract(
                "pair_over needs a span over one morphism",
            ));
        }
        self.mk(q.src, q.tgt.intersect(&r.tgt), q.over.clone())
    }
    fn crt(&self, f: &SetMap, q: &Subset) -> OResult<SubMor> {
        self.mk(f.preimage(q), *q, f.clone())
    }
    fn cind(&self, p: &SubMor, f: &SetMap, g: &SetMap) -> OResult<SubMor> {
        if f.then(g) != p.over {
            return Err(OracleError::contract(format!(
                "{} is not over {g} after {f}",
                p.over
            )));
        }
        self.mk(p.src, g.preimage(&p.tgt), f.clone())
    }
    fn eq(&self, b: &u32) -> OResult<(Subset, SubMor)> {
        let pr = self.b_product(b, b)?;
        let id = SetMap::identity(*b);
        let delta = self.b_pair(&id, &id)?;
        let eq = delta.image(&Subset::full(*b));
        debug_assert_eq!(eq.n, pr.vertex);
        Ok((eq, self.mk(Subset::full(*b), eq, delta)?))
    }
    fn cofactor(&self, q: &SubMor, r: &SubMor, g: &SetMap) -> OResult<SubMor> {
        if q.tgt != q.over.image(&q.src) {
            return Err(OracleError::contract(format!(
                "{} -> {} is not cocartesian",
                q.src, q.tgt
            )));
        }
        if q.src != r.src || q.over.then(g) != r.over {
            return Err(OracleError::contract("cofactor: r is not over g after q"));
        }
        self.mk(q.tgt, r.tgt, g.clone())
    }
    fn hom_over(&self, p: &Subset, q: &Subset, f: &SetMap) -> OResult<Vec<SubMor>> {
        Ok(self.mk(*p, *q, f.clone()).into_iter().collect())
    }
    fn is_cocartesian(&self, m: &SubMor) -> Option<bool> {
        Some(m.tgt == m.over.image(&m.src))
    }
    fn fiber_sample(&self, a: &u32) -> OResult<Vec<Subset>> {
        let n = Self::check_size(*a as u64)?;
        if n <= 3 {
            Ok((0u64..1 << n)
                .map(|bits| Subset {
                    n,
                    bits: [bits, 0, 0, 0],
                })
                .collect())
        } else {
            Ok(vec![Subset::empty(n), Subset::full(n)])
        }
    }

    fn show_bobj(&self, a: &u32) -> String {
        a.to_string()
    }
    fn show_bmor(&self, f: &SetMap) -> String {
        f.to_string()
    }
    fn show_tobj(&self, p: &Subset) -> String {
        p.to_string()
    }
    fn show_tmor(&self, m: &SubMor) -> String {
        format!("{} -> {} over {}", m.src, m.tgt, m.over)
    }
}

/// The subobject fibration restricted to sets of size `0..=k`, as explicit
/// finite categories. For `k ≤ 1` the base is lex; beyond that products
/// leave the range.
pub fn materialize_subobject(k: u32) -> Result<Prefibration, FibError> {
    let o = SubobjectOracle::new(k);
    let sizes = o.zero_cells();
    let hom = |a: u32, b: u32| o.b_hom(&a, &b).expect("small hom-set");

    let mut maps: Vec<SetMap> = Vec::new();
    for &a in &sizes {
        for &b in &sizes {
            maps.extend(hom(a, b));
        }
    }
    let map_index: HashMap<SetMap, Mo> = maps
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), i as Mo))
        .collect();
    let mut comp = HashMap::new();
    for (i, f) in maps.iter().enumerate() {
        for (j, g) in maps.iter().enumerate() {
            if f.cod == g.dom {
                comp.insert((j as Mo, i as Mo), map_index[&f.then(g)]);
            }
        }
    }
    let base = assemble(
        format!("FinSet<={k}"),
        sizes.iter().map(u32::to_string).collect(),
        maps.iter().map(SetMap::to_string).collect(),
        maps.iter().map(|f| f.dom as Ob).collect(),
        maps.iter().map(|f| f.cod as Ob).collect(),
        sizes
            .iter()
            .map(|&a| map_index[&SetMap::identity(a)])
            .collect(),
        comp,
    )?;

    let subsets: Vec<Subset> = sizes
        .iter()
        .flat_map(|a| o.fiber_sample(a).expect("small set"))
        .collect();
    let obj_index: HashMap<Subset, Ob> = subsets
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i as Ob))
        .collect();
    let mut mors: Vec<SubMor> = Vec::new();
    for s in &subsets {
        for t in &subsets {
            for f in hom(s.n, t.n) {
                mors.extend(o.hom_over(s, t, &f).expect("hom_over is total"));
            }
        }
    }
    let mor_index: HashMap<SubMor, Mo> = mors
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i as Mo))
        .collect();
    let mut comp = HashMap::new();
    for (i, f) in mors.iter().enumerate() {
        for (j, g) in mors.iter().enumerate() {
            if f.tgt == g.src {
                comp.insert(
                    (j as Mo, i as Mo),
                    mor_index[&o.t_comp(g, f).expect("composable")],
                );
            }
        }
    }
    let total = assemble(
        format!("Sub(FinSet<={k})"),
        subsets.iter().map(Subset::to_string).collect(),
        mors.iter().map(|m| o.show_tmor(m)).collect(),
        mors.iter().map(|m| obj_index[&m.src]).collect(),
        mors.iter().map(|m| obj_index[&m.tgt]).collect(),
        subsets
            .iter()
            .map(|s| mor_index[&o.t_id(s).expect("identity")])
            .collect(),
        comp,
    )?;

    let proj = FinFunctor::new(
        "dom",
        Arc::new(total),
        Arc::new(base),
        subsets.iter().map(|s| s.n as Ob).collect(),
        mors.iter().map(|m| map_index[&m.over]).collect(),
    )?;
    Prefibration::new(proj)
}
