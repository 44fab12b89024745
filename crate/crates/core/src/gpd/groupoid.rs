//! Finite groupoids with structural composition.
//!
//! Atoms carry a dense composition table. Products, pullbacks and path
//! groupoids store coordinates into their components and compose through
//! them, so no groupoid built from others needs a table of its own.

use std::collections::VecDeque;

use rustc_hash::FxHashMap as HashMap;
use std::sync::{Arc, OnceLock};

use super::GpdError;
use crate::fincat::FinCategory;

pub type GId = u32;
pub type FunId = u32;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum GKey {
    Atom(String),
    Product(GId, GId),
    /// `X ×_A Y` for `x: X → A`, `y: Y → A`.
    Pullback(FunId, FunId),
    Path(GId),
    /// The walking isomorphism, kept apart from family members.
    Interval,
}

pub(crate) enum Shape {
    Atom {
        comp: Vec<u32>,
    },
    Product(Arc<Gpd>, Arc<Gpd>),
    Pullback(Arc<Gpd>, Arc<Gpd>),
    /// Objects are the morphisms `u` of the component; `(u, m₁, m₂)` goes
    /// from `u` to `m₂∘u∘m₁⁻¹`.
    Path(Arc<Gpd>),
}

/// BFS forest: roots are the least object of each component, children are
/// visited along `outs` in index order.
#[derive(Debug, Clone)]
pub struct Spanning {
    pub roots: Vec<u32>,
    /// Component index of every object.
    pub component: Vec<u32>,
    /// Objects of each component in BFS order, root first.
    pub order: Vec<Vec<u32>>,
    /// Tree edge into each non-root object.
    pub parent: Vec<u32>,
    /// The tree path `root → ξ` composed into one morphism.
    pub from_root: Vec<u32>,
    /// Morphisms of each component, ascending.
    pub mors: Vec<Vec<u32>>,
    /// A generating set of each root's vertex group.
    pub gens: Vec<Vec<u32>>,
    /// The vertex group of each root, ascending.
    pub group: Vec<Vec<u32>>,
}

pub struct Gpd {
    pub(crate) id: GId,
    pub name: String,
    pub(crate) shape: Shape,
    obj_coords: Vec<[u32; 2]>,
    mor_coords: Vec<[u32; 3]>,
    obj_index: HashMap<[u32; 2], u32>,
    mor_index: HashMap<[u32; 3], u32>,
    src: Vec<u32>,
    tgt: Vec<u32>,
    ident: Vec<u32>,
    inv: Vec<u32>,
    outs: Vec<Vec<u32>>,
    labels: Option<(Vec<String>, Vec<String>)>,
    spanning: OnceLock<Spanning>,
}

impl std::fmt::Debug for Gpd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Gpd#{}({}: {} objects, {} morphisms)",
            self.id,
            self.name,
            self.num_objects(),
            self.num_morphisms()
        )
    }
}

impl Gpd {
    pub fn id(&self) -> GId {
        self.id
    }
    pub fn num_objects(&self) -> usize {
        self.ident.len()
    }
    pub fn num_morphisms(&self) -> usize {
        self.src.len()
    }
    pub fn src(&self, m: u32) -> u32 {
        self.src[m as usize]
    }
    pub fn tgt(&self, m: u32) -> u32 {
        self.tgt[m as usize]
    }
    pub fn ident(&self, a: u32) -> u32 {
        self.ident[a as usize]
    }
    pub fn is_identity(&self, m: u32) -> bool {
        self.ident[self.src(m) as usize] == m
    }
    pub fn inv(&self, m: u32) -> u32 {
        self.inv[m as usize]
    }
    /// Morphisms out of `a`, ascending.
    pub fn outs(&self, a: u32) -> &[u32] {
        &self.outs[a as usize]
    }
    pub fn hom(&self, a: u32, b: u32) -> impl Iterator<Item = u32> + '_ {
        self.outs(a)
            .iter()
            .copied()
            .filter(move |&m| self.tgt(m) == b)
    }
    pub(crate) fn obj_coord(&self, a: u32) -> [u32; 2] {
        self.obj_coords[a as usize]
    }
    pub(crate) fn mor_coord(&self, m: u32) -> [u32; 3] {
        self.mor_coords[m as usize]
    }
    pub(crate) fn obj_at(&self, c: [u32; 2]) -> Option<u32> {
        self.obj_index.get(&c).copied()
    }
    pub(crate) fn mor_at(&self, c: [u32; 3]) -> Option<u32> {
        self.mor_index.get(&c).copied()
    }

    /// `g∘f`; panics unless `tgt f = src g`.
    pub fn comp(&self, g: u32, f: u32) -> u32 {
        assert_eq!(
            self.tgt(f),
            self.src(g),
            "{}: morphisms {g} and {f} do not compose",
            self.name
        );
        match &self.shape {
            Shape::Atom { comp } => comp[g as usize * self.num_morphisms() + f as usize],
            Shape::Product(l, r) | Shape::Pullback(l, r) => {
                let ([g1, g2, _], [f1, f2, _]) = (self.mor_coord(g), self.mor_coord(f));
                self.mor_index[&[l.comp(g1, f1), r.comp(g2, f2), 0]]
            }
            Shape::Path(b) => {
                let ([_, n1, n2], [u, m1, m2]) = (self.mor_coord(g), self.mor_coord(f));
                self.mor_index[&[u, b.comp(n1, m1), b.comp(n2, m2)]]
            }
        }
    }

    pub fn obj_label(&self, a: u32) -> String {
        match (&self.labels, &self.shape) {
            (Some((objs, _)), _) => objs[a as usize].clone(),
            (None, Shape::Product(l, r)) | (None, Shape::Pullback(l, r)) => {
                let [x, y] = self.obj_coord(a);
                format!("({},{})", l.obj_label(x), r.obj_label(y))
            }
            (None, Shape::Path(b)) => format!("<{}>", b.mor_label(self.obj_coord(a)[0])),
            _ => a.to_string(),
        }
    }

    pub fn mor_label(&self, m: u32) -> String {
        match (&self.labels, &self.shape) {
            (Some((_, mors)), _) => mors[m as usize].clone(),
            (None, Shape::Product(l, r)) | (None, Shape::Pullback(l, r)) => {
                let [x, y, _] = self.mor_coord(m);
                format!("({},{})", l.mor_label(x), r.mor_label(y))
            }
            (None, Shape::Path(b)) => {
                let [u, m1, m2] = self.mor_coord(m);
                format!(
                    "<{};{},{}>",
                    b.mor_label(u),
                    b.mor_label(m1),
                    b.mor_label(m2)
                )
            }
            _ => m.to_string(),
        }
    }

    /// Object and morphism names of an atom, in index order.
    pub fn atom_labels(&self) -> Option<(&[String], &[String])> {
        self.labels
            .as_ref()
            .map(|(o, m)| (o.as_slice(), m.as_slice()))
    }

    pub fn spanning(&self) -> &Spanning {
        self.spanning.get_or_init(|| self.build_spanning())
    }

    fn build_spanning(&self) -> Spanning {
        let n = self.num_objects();
        let mut component = vec![NONE; n];
        let mut parent = vec![NONE; n];
        let mut from_root = vec![NONE; n];
        let (mut roots, mut order, mut mors, mut gens, mut group) =
            (vec![], vec![], vec![], vec![], vec![]);
        for r in 0..n as u32 {
            if component[r as usize] != NONE {
                continue;
            }
            let c = roots.len() as u32;
            roots.push(r);
            component[r as usize] = c;
            from_root[r as usize] = self.ident(r);
            let mut seen = vec![r];
            let mut queue = VecDeque::from([r]);
            while let Some(s) = queue.pop_front() {
                for &k in self.outs(s) {
                    let t = self.tgt(k);
                    if component[t as usize] == NONE {
                        component[t as usize] = c;
                        parent[t as usize] = k;
                        from_root[t as usize] = self.comp(k, from_root[s as usize]);
                        seen.push(t);
                        queue.push_back(t);
                    }
                }
            }
            let mut ms: Vec<u32> = seen
                .iter()
                .flat_map(|&a| self.outs(a).iter().copied())
                .collect();
            ms.sort_unstable();
            let vg: Vec<u32> = self.hom(r, r).collect();
            gens.push(self.generators(r, &vg));
            group.push(vg);
            order.push(seen);
            mors.push(ms);
        }
        Spanning {
            roots,
            component,
            order,
            parent,
            from_root,
            mors,
            gens,
            group,
        }
    }

    /// Greedy generating set of the vertex group at `r`.
    fn generators(&self, r: u32, group: &[u32]) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span = vec![self.ident(r)];
        for &g in group {
            if span.contains(&g) {
                continue;
            }
            gens.push(g);
            // Closure of the generated subgroup.
            span = vec![self.ident(r)];
            let mut i = 0;
            while i < span.len() {
                let h = span[i];
                for &s in &gens {
                    let p = self.comp(s, h);
                    if !span.contains(&p) {
                        span.push(p);
                    }
                }
                i += 1;
            }
        }
        gens
    }
}

/// Tables shared by every constructor.
struct Builder {
    obj_coords: Vec<[u32; 2]>,
    mor_coords: Vec<[u32; 3]>,
    src: Vec<u32>,
    tgt: Vec<u32>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            obj_coords: vec![],
            mor_coords: vec![],
            src: vec![],
            tgt: vec![],
        }
    }

    fn finish(
        self,
        name: String,
        shape: Shape,
        ident_of: impl Fn(&HashMap<[u32; 3], u32>, [u32; 2]) -> [u32; 3],
        inv_of: impl Fn(&HashMap<[u32; 3], u32>, [u32; 3]) -> [u32; 3],
        labels: Option<(Vec<String>, Vec<String>)>,
    ) -> Gpd {
        let obj_index: HashMap<[u32; 2], u32> = self
            .obj_coords
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32))
            .collect();
        let mor_index: HashMap<[u32; 3], u32> = self
            .mor_coords
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32))
            .collect();
        let ident = self
            .obj_coords
            .iter()
            .map(|&c| mor_index[&ident_of(&mor_index, c)])
            .collect();
        let inv = self
            .mor_coords
            .iter()
            .map(|&c| mor_index[&inv_of(&mor_index, c)])
            .collect();
        let mut outs = vec![Vec::new(); self.obj_coords.len()];
        for (m, &s) in self.src.iter().enumerate() {
            outs[s as usize].push(m as u32);
        }
        Gpd {
            id: NONE,
            name,
            shape,
            obj_coords: self.obj_coords,
            mor_coords: self.mor_coords,
            obj_index,
            mor_index,
            src: self.src,
            tgt: self.tgt,
            ident,
            inv,
            outs,
            labels,
            spanning: OnceLock::new(),
        }
    }
}

pub(crate) fn from_category(c: &FinCategory) -> Result<Gpd, GpdError> {
    let n_mor = c.num_morphisms();
    let mut b = Builder::new();
    for a in c.objects() {
        b.obj_coords.push([a, 0]);
    }
    let mut inv = vec![0u32; n_mor];
    for m in c.morphisms() {
        b.mor_coords.push([m, 0, 0]);
        b.src.push(c.src(m));
        b.tgt.push(c.tgt(m));
        inv[m as usize] = c.inverse(m).ok_or_else(|| GpdError::NotAGroupoid {
            category: c.name().into(),
            morphism: c.mor_name(m).into(),
        })?;
    }
    let mut comp = vec![NONE; n_mor * n_mor];
    for f in c.morphisms() {
        for &g in c.out_of(c.tgt(f)) {
            comp[g as usize * n_mor + f as usize] = c.compose(g, f);
        }
    }
    let labels = Some((c.obj_names().to_vec(), c.mor_names().to_vec()));
    Ok(b.finish(
        c.name().into(),
        Shape::Atom { comp },
        |_, [a, _]| [c.id(a), 0, 0],
        |_, [m, _, _]| [inv[m as usize], 0, 0],
        labels,
    ))
}

pub(crate) fn product(l: &Arc<Gpd>, r: &Arc<Gpd>) -> Gpd {
    let mut b = Builder::new();
    let (nl, nr) = (l.num_objects() as u32, r.num_objects() as u32);
    for x in 0..nl {
        for y in 0..nr {
            b.obj_coords.push([x, y]);
        }
    }
    for m in 0..l.num_morphisms() as u32 {
        for n in 0..r.num_morphisms() as u32 {
            b.mor_coords.push([m, n, 0]);
            b.src.push(l.src(m) * nr + r.src(n));
            b.tgt.push(l.tgt(m) * nr + r.tgt(n));
        }
    }
    let name = format!("({}*{})", l.name, r.name);
    let (l2, r2) = (l.clone(), r.clone());
    b.finish(
        name,
        Shape::Product(l.clone(), r.clone()),
        |_, [x, y]| [l.ident(x), r.ident(y), 0],
        move |_, [m, n, _]| [l2.inv(m), r2.inv(n), 0],
        None,
    )
}

/// `X ×_A Y` from the object and morphism maps of `x` and `y`.
pub(crate) fn pullback(
    xg: &Arc<Gpd>,
    x: (&[u32], &[u32]),
    yg: &Arc<Gpd>,
    y: (&[u32], &[u32]),
    name: String,
) -> Gpd {
    let mut b = Builder::new();
    let mut y_by_obj: HashMap<u32, Vec<u32>> = HashMap::default();
    for (eta, &a) in y.0.iter().enumerate() {
        y_by_obj.entry(a).or_default().push(eta as u32);
    }
    let mut y_by_mor: HashMap<u32, Vec<u32>> = HashMap::default();
    for (n, &a) in y.1.iter().enumerate() {
        y_by_mor.entry(a).or_default().push(n as u32);
    }
    let mut obj_pos = HashMap::default();
    for (xi, &a) in x.0.iter().enumerate() {
        for &eta in y_by_obj.get(&a).map(Vec::as_slice).unwrap_or(&[]) {
            obj_pos.insert([xi as u32, eta], b.obj_coords.len() as u32);
            b.obj_coords.push([xi as u32, eta]);
        }
    }
    for (m, &a) in x.1.iter().enumerate() {
        let m = m as u32;
        for &n in y_by_mor.get(&a).map(Vec::as_slice).unwrap_or(&[]) {
            b.mor_coords.push([m, n, 0]);
            b.src.push(obj_pos[&[xg.src(m), yg.src(n)]]);
            b.tgt.push(obj_pos[&[xg.tgt(m), yg.tgt(n)]]);
        }
    }
    let (x2, y2) = (xg.clone(), yg.clone());
    b.finish(
        name,
        Shape::Pullback(xg.clone(), yg.clone()),
        |_, [p, q]| [xg.ident(p), yg.ident(q), 0],
        move |_, [m, n, _]| [x2.inv(m), y2.inv(n), 0],
        None,
    )
}

pub(crate) fn path(g: &Arc<Gpd>) -> Gpd {
    let mut b = Builder::new();
    for u in 0..g.num_morphisms() as u32 {
        b.obj_coords.push([u, 0]);
    }
    for u in 0..g.num_morphisms() as u32 {
        for &m1 in g.outs(g.src(u)) {
            for &m2 in g.outs(g.tgt(u)) {
                b.mor_coords.push([u, m1, m2]);
                b.src.push(u);
                b.tgt.push(g.comp(g.comp(m2, u), g.inv(m1)));
            }
        }
    }
    let g2 = g.clone();
    b.finish(
        format!("{}^I", g.name),
        Shape::Path(g.clone()),
        |_, [u, _]| [u, g.ident(g.src(u)), g.ident(g.tgt(u))],
        move |_, [u, m1, m2]| [g2.comp(g2.comp(m2, u), g2.inv(m1)), g2.inv(m1), g2.inv(m2)],
        None,
    )
}
