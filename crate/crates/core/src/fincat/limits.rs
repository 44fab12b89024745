//! Limit predicates and finders, all by exhaustive cone enumeration.

use super::{FinCategory, Mo, Ob};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductDiagram {
    pub left: Ob,
    pub vertex: Ob,
    pub right: Ob,
    pub proj1: Mo,
    pub proj2: Mo,
}

/// A commuting square `f∘p1 = g∘p2` with apex `dom p1 = dom p2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PullbackSquare {
    pub p1: Mo,
    pub p2: Mo,
    pub f: Mo,
    pub g: Mo,
}

impl PullbackSquare {
    pub fn apex(&self, c: &FinCategory) -> Ob {
        c.src(self.p1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LimitFailure {
    #[error("no terminal object")]
    NoTerminal,
    #[error("no product of {0} and {1}")]
    NoProduct(String, String),
    #[error("no pullback of the cospan {0}, {1}")]
    NoPullback(String, String),
}

pub fn is_terminal(c: &FinCategory, a: Ob) -> bool {
    c.objects().all(|x| c.hom(x, a).len() == 1)
}

pub fn is_initial(c: &FinCategory, a: Ob) -> bool {
    c.objects().all(|x| c.hom(a, x).len() == 1)
}

pub fn find_terminals(c: &FinCategory) -> Vec<Ob> {
    c.objects().filter(|&a| is_terminal(c, a)).collect()
}

/// Morphisms `m: x → vertex` with `proj1∘m = p` and `proj2∘m = q`.
pub fn mediators_to_product(c: &FinCategory, d: &ProductDiagram, p: Mo, q: Mo) -> Vec<Mo> {
    let x = c.src(p);
    c.hom(x, d.vertex)
        .iter()
        .copied()
        .filter(|&m| c.compose(d.proj1, m) == p && c.compose(d.proj2, m) == q)
        .collect()
}

pub fn is_product_diagram(c: &FinCategory, d: &ProductDiagram) -> bool {
    let ends_ok = c.src(d.proj1) == d.vertex
        && c.src(d.proj2) == d.vertex
        && c.tgt(d.proj1) == d.left
        && c.tgt(d.proj2) == d.right;
    if !ends_ok {
        return false;
    }
    c.objects().all(|x| {
        c.hom(x, d.left).iter().all(|&p| {
            c.hom(x, d.right)
                .iter()
                .all(|&q| mediators_to_product(c, d, p, q).len() == 1)
        })
    })
}

/// All product diagrams over `(a, b)`, ordered by vertex then projections.
pub fn find_products(c: &FinCategory, a: Ob, b: Ob) -> Vec<ProductDiagram> {
    let mut out = Vec::new();
    for v in c.objects() {
        for &p1 in c.hom(v, a) {
            for &p2 in c.hom(v, b) {
                let d = ProductDiagram {
                    left: a,
                    vertex: v,
                    right: b,
                    proj1: p1,
                    proj2: p2,
                };
                if is_product_diagram(c, &d) {
                    out.push(d);
                }
            }
        }
    }
    out
}

fn commutes(c: &FinCategory, s: &PullbackSquare) -> bool {
    c.src(s.p1) == c.src(s.p2)
        && c.tgt(s.p1) == c.src(s.f)
        && c.tgt(s.p2) == c.src(s.g)
        && c.tgt(s.f) == c.tgt(s.g)
        && c.compose(s.f, s.p1) == c.compose(s.g, s.p2)
}

pub fn is_pullback_square(c: &FinCategory, s: &PullbackSquare) -> bool {
    if !commutes(c, s) {
        return false;
    }
    let apex = c.src(s.p1);
    let (l, r) = (c.src(s.f), c.src(s.g));
    c.objects().all(|x| {
        c.hom(x, l).iter().all(|&a| {
            c.hom(x, r).iter().all(|&b| {
                if c.compose(s.f, a) != c.compose(s.g, b) {
                    return true;
                }
                let n = c
                    .hom(x, apex)
                    .iter()
                    .filter(|&&m| c.compose(s.p1, m) == a && c.compose(s.p2, m) == b)
                    .count();
                n == 1
            })
        })
    })
}

/// All pullback squares completing the cospan `f, g`.
pub fn find_pullbacks(c: &FinCategory, f: Mo, g: Mo) -> Vec<PullbackSquare> {
    let (l, r) = (c.src(f), c.src(g));
    let mut out = Vec::new();
    if c.tgt(f) != c.tgt(g) {
        return out;
    }
    for v in c.objects() {
        for &p1 in c.hom(v, l) {
            for &p2 in c.hom(v, r) {
                let s = PullbackSquare { p1, p2, f, g };
                if is_pullback_square(c, &s) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Terminal object, binary products and pullbacks all exist.
pub fn check_finite_limits(c: &FinCategory) -> Result<(), LimitFailure> {
    if find_terminals(c).is_empty() {
        return Err(LimitFailure::NoTerminal);
    }
    for a in c.objects() {
        for b in c.objects() {
            if find_products(c, a, b).is_empty() {
                return Err(LimitFailure::NoProduct(
                    c.obj_name(a).into(),
                    c.obj_name(b).into(),
                ));
            }
        }
    }
    for f in c.morphisms() {
        for &g in c.into_obj(c.tgt(f)) {
            if find_pullbacks(c, f, g).is_empty() {
                return Err(LimitFailure::NoPullback(
                    c.mor_name(f).into(),
                    c.mor_name(g).into(),
                ));
            }
        }
    }
    Ok(())
}
