//! Fiberwise-homotopy classes of functors over a fixed base functor, and
//! the predicates of the folk model structure.
//!
//! Two functors `m, m': X → Y` over the same base are fiberwise homotopic
//! when some natural isomorphism `θ: m ⇒ m'` has every component vertical
//! (sent by `y` to an identity). Any family of vertical `θ_ξ` out of the
//! `m(ξ)` conjugates `m` into a member of its class, so a class is an orbit
//! under such families.
//!
//! The class key fixes each object image to the least object of its
//! vertical class and each spanning-tree edge image to the least morphism
//! with the forced endpoints and base image. What is left is a vertical
//! automorphism at the root of each component; the key takes the
//! lexicographically least morphism table over those.

use std::collections::{BTreeSet, HashSet};

use rustc_hash::FxHashMap as HashMap;

use super::groupoid::Gpd;
use super::store::GFun;

/// Functor tables `(objects, morphisms)`.
pub type Tables = (Vec<u32>, Vec<u32>);

/// The class key of the functor `(obj, mor): X → Y` over `y: Y → B`.
pub fn canonical(x: &Gpd, y: &GFun, obj: &[u32], mor: &[u32]) -> Tables {
    let mut out = (obj.to_vec(), mor.to_vec());
    for c in 0..x.spanning().roots.len() {
        canonical_component(x, y, c, &mut out);
    }
    out
}

fn canonical_component(x: &Gpd, y: &GFun, c: usize, out: &mut Tables) {
    let (yg, b) = (&*y.src, &*y.tgt);
    let idx = y.index();
    let sp = x.spanning();
    let root = sp.roots[c];
    let (obj, mor) = (&mut out.0, &mut out.1);
    let start = obj[root as usize];
    let c_root = idx.vmin[start as usize];
    let vert = b.ident(y.obj[start as usize]);
    let Some(cands) = idx.over.get(&(start, c_root, vert)) else {
        unreachable!("an object is vertically related to its class minimum")
    };
    let mut theta = vec![0u32; x.num_objects()];
    let mut best: Option<Vec<u32>> = None;
    let mut best_theta = Vec::new();
    for &t0 in cands {
        theta[root as usize] = t0;
        for &xi in &sp.order[c][1..] {
            let k = sp.parent[xi as usize];
            let s = x.src(k);
            let c_s = yg.tgt(theta[s as usize]);
            let c_xi = idx.vmin[obj[xi as usize] as usize];
            let least = idx.over[&(c_s, c_xi, y.mor[mor[k as usize] as usize])][0];
            // least = θ_ξ ∘ m(k) ∘ θ_s⁻¹
            theta[xi as usize] =
                yg.comp(yg.comp(least, theta[s as usize]), yg.inv(mor[k as usize]));
        }
        // Compare against the best so far, stopping at the first difference.
        let image = |k: u32| {
            let (s, t) = (x.src(k), x.tgt(k));
            yg.comp(
                yg.comp(theta[t as usize], mor[k as usize]),
                yg.inv(theta[s as usize]),
            )
        };
        let better = match &best {
            None => true,
            Some(b) => {
                let mut verdict = false;
                for (&k, &bk) in sp.mors[c].iter().zip(b) {
                    let v = image(k);
                    if v != bk {
                        verdict = v < bk;
                        break;
                    }
                }
                verdict
            }
        };
        if better {
            best = Some(sp.mors[c].iter().map(|&k| image(k)).collect());
            best_theta = sp.order[c].iter().map(|&xi| theta[xi as usize]).collect();
        }
    }
    for (&xi, &t) in sp.order[c].iter().zip(&best_theta) {
        obj[xi as usize] = yg.tgt(t);
    }
    for (&k, img) in sp.mors[c].iter().zip(best.unwrap()) {
        mor[k as usize] = img;
    }
}

/// Choices for one component of `X`: root images, lifts of tree edges, and
/// candidate images of the root group's generators.
trait ComponentChoices {
    fn roots(&self, c: usize) -> Vec<u32>;
    /// Morphisms out of `from` that may image the tree edge `k`.
    fn edge(&self, from: u32, k: u32) -> Vec<u32>;
    /// Automorphisms of `at` that may image the generator `g`.
    fn generator(&self, at: u32, g: u32) -> Vec<u32>;
}

/// Every functor on component `c` of `x` allowed by `ch`, as
/// `(object images, morphism images)` over the component's own lists.
fn component_functors(
    x: &Gpd,
    y: &Gpd,
    c: usize,
    ch: &impl ComponentChoices,
) -> Vec<(Vec<u32>, Vec<u32>)> {
    let sp = x.spanning();
    let order = &sp.order[c];
    let gens = &sp.gens[c];
    let root = sp.roots[c];
    let mut out = Vec::new();
    for r_img in ch.roots(c) {
        // Tree edges: every admissible choice, in order.
        let mut trees: Vec<Vec<u32>> = vec![Vec::new()];
        for &xi in &order[1..] {
            let k = sp.parent[xi as usize];
            let mut next = Vec::new();
            for partial in &trees {
                let s_img = image_of(y, order, partial, r_img, x.src(k));
                for e in ch.edge(s_img, k) {
                    let mut p = partial.clone();
                    p.push(e);
                    next.push(p);
                }
            }
            trees = next;
        }
        // Generator images, checked for consistency by closing the group.
        let gen_cands: Vec<Vec<u32>> = gens.iter().map(|&g| ch.generator(r_img, g)).collect();
        let mut assign = vec![0usize; gens.len()];
        'outer: loop {
            if gen_cands.iter().all(|v| !v.is_empty()) {
                let imgs: Vec<u32> = assign.iter().zip(&gen_cands).map(|(&i, v)| v[i]).collect();
                if let Some(phi) = close_hom(x, y, root, r_img, gens, &imgs) {
                    for tree in &trees {
                        out.push(extend(x, y, c, r_img, tree, &phi));
                    }
                }
            } else {
                break;
            }
            // Odometer over generator choices.
            for i in (0..assign.len()).rev() {
                assign[i] += 1;
                if assign[i] < gen_cands[i].len() {
                    continue 'outer;
                }
                assign[i] = 0;
            }
            break;
        }
    }
    out
}

/// Object image of `xi` given tree edge images in BFS order.
fn image_of(y: &Gpd, order: &[u32], tree: &[u32], r_img: u32, xi: u32) -> u32 {
    if xi == order[0] {
        return r_img;
    }
    let pos = order
        .iter()
        .position(|&o| o == xi)
        .expect("object in component");
    y.tgt(tree[pos - 1])
}

/// The homomorphism on the root group determined by generator images, if
/// they define one.
fn close_hom(
    x: &Gpd,
    y: &Gpd,
    root: u32,
    r_img: u32,
    gens: &[u32],
    imgs: &[u32],
) -> Option<HashMap<u32, u32>> {
    let mut phi = [(x.ident(root), y.ident(r_img))]
        .into_iter()
        .collect::<HashMap<_, _>>();
    let mut queue = vec![x.ident(root)];
    while let Some(h) = queue.pop() {
        let ph = phi[&h];
        for (&g, &pg) in gens.iter().zip(imgs) {
            let (gh, pgh) = (x.comp(g, h), y.comp(pg, ph));
            match phi.get(&gh) {
                Some(&v) if v != pgh => return None,
                Some(_) => {}
                None => {
                    phi.insert(gh, pgh);
                    queue.push(gh);
                }
            }
        }
    }
    Some(phi)
}

/// Full component tables from root image, tree edge images and `φ`.
fn extend(
    x: &Gpd,
    y: &Gpd,
    c: usize,
    r_img: u32,
    tree: &[u32],
    phi: &HashMap<u32, u32>,
) -> (Vec<u32>, Vec<u32>) {
    let sp = x.spanning();
    let order = &sp.order[c];
    let mut path_img: HashMap<u32, u32> = [(order[0], y.ident(r_img))]
        .into_iter()
        .collect::<HashMap<_, _>>();
    for (i, &xi) in order[1..].iter().enumerate() {
        let k = sp.parent[xi as usize];
        let s = x.src(k);
        path_img.insert(xi, y.comp(tree[i], path_img[&s]));
    }
    let objs = order.iter().map(|xi| y.tgt(path_img[xi])).collect();
    let mors = sp.mors[c]
        .iter()
        .map(|&k| {
            let (s, t) = (x.src(k), x.tgt(k));
            let (ps, pt) = (sp.from_root[s as usize], sp.from_root[t as usize]);
            let g = x.comp(x.inv(pt), x.comp(k, ps));
            y.comp(path_img[&t], y.comp(phi[&g], y.inv(path_img[&s])))
        })
        .collect();
    (objs, mors)
}

/// Assemble per-component choices into full tables, in sorted order.
fn assemble(x: &Gpd, parts: Vec<Vec<(Vec<u32>, Vec<u32>)>>) -> Vec<Tables> {
    let sp = x.spanning();
    let mut out: Vec<Tables> = vec![(vec![0; x.num_objects()], vec![0; x.num_morphisms()])];
    for (c, options) in parts.into_iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for base in &out {
            for (objs, mors) in &options {
                let mut t = base.clone();
                for (&xi, &o) in sp.order[c].iter().zip(objs) {
                    t.0[xi as usize] = o;
                }
                for (&k, &m) in sp.mors[c].iter().zip(mors) {
                    t.1[k as usize] = m;
                }
                next.push(t);
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// All functors `X → Y`, sorted by tables.
pub fn all_functors(x: &Gpd, y: &Gpd) -> Vec<Tables> {
    struct Any<'a>(&'a Gpd);
    impl ComponentChoices for Any<'_> {
        fn roots(&self, _: usize) -> Vec<u32> {
            (0..self.0.num_objects() as u32).collect()
        }
        fn edge(&self, from: u32, _: u32) -> Vec<u32> {
            self.0.outs(from).to_vec()
        }
        fn generator(&self, at: u32, _: u32) -> Vec<u32> {
            self.0.hom(at, at).collect()
        }
    }
    let n = x.spanning().roots.len();
    let parts = (0..n)
        .map(|c| component_functors(x, y, c, &Any(y)))
        .collect();
    assemble(x, parts)
}

/// Class keys of all functors `X → Y` with `y∘m = b`, where `b` gives the
/// required base image of every object and morphism of `X`. Sorted.
pub fn class_keys(x: &Gpd, y: &GFun, b_obj: &[u32], b_mor: &[u32]) -> Vec<Tables> {
    struct Over<'a> {
        x: &'a Gpd,
        y: &'a GFun,
        b_obj: &'a [u32],
        b_mor: &'a [u32],
    }
    impl ComponentChoices for Over<'_> {
        fn roots(&self, c: usize) -> Vec<u32> {
            let r = self.x.spanning().roots[c];
            let want = self.b_obj[r as usize];
            let idx = self.y.index();
            let reps: BTreeSet<u32> = (0..self.y.src.num_objects() as u32)
                .filter(|&e| self.y.obj[e as usize] == want)
                .map(|e| idx.vmin[e as usize])
                .collect();
            reps.into_iter().collect()
        }
        fn edge(&self, from: u32, k: u32) -> Vec<u32> {
            // Least lift into the least object of the target's vertical class.
            let idx = self.y.index();
            let bk = self.b_mor[k as usize];
            let Some(lifts) = idx.lifts.get(&(from, bk)) else {
                return vec![];
            };
            let t = idx.vmin[self.y.src.tgt(lifts[0]) as usize];
            vec![idx.over[&(from, t, bk)][0]]
        }
        fn generator(&self, at: u32, g: u32) -> Vec<u32> {
            let idx = self.y.index();
            idx.over
                .get(&(at, at, self.b_mor[g as usize]))
                .cloned()
                .unwrap_or_default()
        }
    }
    let ch = Over { x, y, b_obj, b_mor };
    let n = x.spanning().roots.len();
    let mut parts = Vec::with_capacity(n);
    for c in 0..n {
        let mut keys = BTreeSet::new();
        for (objs, mors) in component_functors(x, &y.src, c, &ch) {
            // Canonicalize this component alone, inside scratch tables.
            let sp = x.spanning();
            let mut t: Tables = (vec![0; x.num_objects()], vec![0; x.num_morphisms()]);
            for (&xi, &o) in sp.order[c].iter().zip(&objs) {
                t.0[xi as usize] = o;
            }
            for (&k, &m) in sp.mors[c].iter().zip(&mors) {
                t.1[k as usize] = m;
            }
            canonical_component(x, y, c, &mut t);
            let objs: Vec<u32> = sp.order[c].iter().map(|&xi| t.0[xi as usize]).collect();
            let mors: Vec<u32> = sp.mors[c].iter().map(|&k| t.1[k as usize]).collect();
            keys.insert((objs, mors));
        }
        parts.push(keys.into_iter().collect());
    }
    assemble(x, parts)
}

/// Fully faithful and essentially surjective.
pub fn is_equivalence(f: &GFun) -> bool {
    let (x, y) = (&*f.src, &*f.tgt);
    let (sx, sy) = (x.spanning(), y.spanning());
    let mut hit = vec![false; sy.roots.len()];
    for (c, &r) in sx.roots.iter().enumerate() {
        let d = sy.component[f.obj[r as usize] as usize] as usize;
        if std::mem::replace(&mut hit[d], true) {
            return false;
        }
        let image: HashSet<u32> = sx.group[c].iter().map(|&g| f.mor[g as usize]).collect();
        if image.len() != sx.group[c].len()
            || image.len() != y.hom(f.obj[r as usize], f.obj[r as usize]).count()
        {
            return false;
        }
    }
    hit.iter().all(|&h| h)
}

/// Every morphism out of an object in the image lifts at each preimage.
pub fn is_isofibration(f: &GFun) -> bool {
    let (x, y) = (&*f.src, &*f.tgt);
    (0..x.num_objects() as u32).all(|xi| {
        let lifted: HashSet<u32> = x.outs(xi).iter().map(|&k| f.mor[k as usize]).collect();
        y.outs(f.obj[xi as usize])
            .iter()
            .all(|k| lifted.contains(k))
    })
}

pub fn is_inj_on_objects(f: &GFun) -> bool {
    let mut seen = HashSet::new();
    f.obj.iter().all(|a| seen.insert(*a))
}
