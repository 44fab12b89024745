//! Finite families of groupoids with a chosen terminal and chosen product
//! cones.

use std::collections::HashMap;
use std::sync::Arc;

use super::groupoid::{FunId, GId, Gpd};
use super::store::{check_functor, GpdStore, DEFAULT_CLOSURE_BUDGET};
use super::GpdError;
use crate::fincat::{assemble, zoo, FinCategory, Mo, Ob};

/// A supplied product `P` of `A` and `B` with its projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductCone {
    pub left: GId,
    pub right: GId,
    pub vertex: GId,
    pub proj1: FunId,
    pub proj2: FunId,
    /// `A ×ₛ B → P`, inverse to `⟨p₁, p₂⟩` into the structural product.
    pub(crate) from_structural: FunId,
}

#[derive(Debug)]
pub struct GpdFamily {
    pub store: Arc<GpdStore>,
    pub members: Vec<GId>,
    pub terminal: GId,
    cones: HashMap<(GId, GId), ProductCone>,
    /// Fiber samples over `A` use `A × sample → A`.
    pub sample: Option<GId>,
}

/// A cone as tables over member names, before validation.
#[derive(Debug, Clone)]
pub struct ConeSpec {
    pub left: String,
    pub right: String,
    pub vertex: String,
    /// `(object images, morphism images)` of each projection, by index.
    pub proj1: (Vec<Ob>, Vec<Mo>),
    pub proj2: (Vec<Ob>, Vec<Mo>),
}

impl GpdFamily {
    pub fn new(
        members: &[FinCategory],
        terminal: &str,
        cones: &[ConeSpec],
    ) -> Result<Self, GpdError> {
        Self::with_budget(members, terminal, cones, DEFAULT_CLOSURE_BUDGET)
    }

    pub fn with_budget(
        members: &[FinCategory],
        terminal: &str,
        cones: &[ConeSpec],
        budget: usize,
    ) -> Result<Self, GpdError> {
        let store = Arc::new(GpdStore::new(budget));
        let mut ids = Vec::new();
        let mut by_name = HashMap::new();
        for c in members {
            let g = store.atom(c)?;
            by_name.insert(c.name().to_string(), g);
            ids.push(g);
        }
        let member = |n: &str| {
            by_name
                .get(n)
                .copied()
                .ok_or_else(|| GpdError::UnknownMember(n.into()))
        };
        let t = member(terminal)?;
        let gt = store.gpd(t);
        if gt.num_objects() != 1 || gt.num_morphisms() != 1 {
            return Err(GpdError::NoTerminal(terminal.into()));
        }
        let mut table = HashMap::new();
        for spec in cones {
            let (a, b, p) = (
                member(&spec.left)?,
                member(&spec.right)?,
                member(&spec.vertex)?,
            );
            let functor =
                |tgt: GId, (o, m): &(Vec<Ob>, Vec<Mo>), which: &str| -> Result<FunId, GpdError> {
                    check_functor(&store.gpd(p), &store.gpd(tgt), o, m).map_err(|reason| {
                        GpdError::Functor {
                            name: format!("{which} of {}", spec.vertex),
                            reason,
                        }
                    })?;
                    Ok(store.functor(p, tgt, o.clone(), m.clone()))
                };
            let (p1, p2) = (
                functor(a, &spec.proj1, "first projection")?,
                functor(b, &spec.proj2, "second projection")?,
            );
            let s = store
                .product(a, b)
                .map_err(|e| GpdError::Budget(e.to_string()))?;
            let pair = store
                .pair_into(s, p1, p2)
                .map_err(|e| GpdError::Budget(e.to_string()))?;
            let inv = store.inverse(pair).map_err(|_| GpdError::FamilyNotClosed {
                witness: format!(
                    "{} with its projections is not a product of {} and {}",
                    spec.vertex, spec.left, spec.right
                ),
            })?;
            let cone = ProductCone {
                left: a,
                right: b,
                vertex: p,
                proj1: p1,
                proj2: p2,
                from_structural: inv,
            };
            if table.insert((a, b), cone).is_some() {
                return Err(GpdError::DuplicateMember(format!(
                    "product of {} and {}",
                    spec.left, spec.right
                )));
            }
        }
        let sample = ids
            .iter()
            .copied()
            .find(|&g| g != t && store.gpd(g).num_morphisms() > 1);
        Ok(GpdFamily {
            store,
            members: ids,
            terminal: t,
            cones: table,
            sample,
        })
    }

    pub fn cone(&self, a: GId, b: GId) -> Option<&ProductCone> {
        self.cones.get(&(a, b))
    }

    pub fn cones(&self) -> impl Iterator<Item = &ProductCone> {
        let mut v: Vec<&ProductCone> = self.cones.values().collect();
        v.sort_by_key(|c| (c.left, c.right));
        v.into_iter()
    }

    pub fn member(&self, name: &str) -> Option<GId> {
        self.members
            .iter()
            .copied()
            .find(|&g| self.store.gpd(g).name == name)
    }
}

/// `Z/2`, `S₃`, the walking isomorphism and the terminal groupoid, with two
/// explicit binary products and their cones.
pub fn standard_members() -> (Vec<FinCategory>, Vec<ConeSpec>) {
    let z2 = cyclic(2, "Z2");
    let s3 = symmetric3();
    let j = zoo::walking_iso().with_name("J");
    let top = zoo::terminal().with_name("T");
    let (z2z2, c1) = explicit_product(&z2, &z2, "Z2xZ2");
    let (z2j, c2) = explicit_product(&z2, &j, "Z2xJ");
    (vec![top, z2, s3, j, z2z2, z2j], vec![c1, c2])
}

pub fn standard_family() -> GpdFamily {
    let (members, cones) = standard_members();
    GpdFamily::new(&members, "T", &cones).expect("standard family is valid")
}

pub fn cyclic(n: usize, name: &str) -> FinCategory {
    let names: Vec<String> = (0..n)
        .map(|i| if i == 0 { "e".into() } else { format!("g{i}") })
        .collect();
    let mul: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect();
    zoo::group_category(name, &names, &mul)
}

/// `S₃` as permutations of `{0,1,2}` in lexicographic order.
pub fn symmetric3() -> FinCategory {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let names: Vec<String> = perms
        .iter()
        .map(|p| {
            if *p == [0, 1, 2] {
                "e".into()
            } else {
                format!("p{}{}{}", p[0], p[1], p[2])
            }
        })
        .collect();
    let mul: Vec<Vec<usize>> = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| {
                    let ab = [a[b[0]], a[b[1]], a[b[2]]];
                    perms.iter().position(|p| *p == ab).unwrap()
                })
                .collect()
        })
        .collect();
    zoo::group_category("S3", &names, &mul)
}

/// The product of two finite groupoids as explicit tables, with its cone.
pub fn explicit_product(a: &FinCategory, b: &FinCategory, name: &str) -> (FinCategory, ConeSpec) {
    let store = GpdStore::new(8);
    let ga = store.atom(a).expect("groupoid");
    let gb = if a.name() == b.name() {
        ga
    } else {
        store.atom(b).expect("groupoid")
    };
    let p = store.product(ga, gb).expect("within budget");
    let gp: Arc<Gpd> = store.gpd(p);
    let n = gp.num_objects() as u32;
    let m = gp.num_morphisms() as u32;
    let mut comp = HashMap::new();
    for f in 0..m {
        for &g in gp.outs(gp.tgt(f)) {
            comp.insert((g, f), gp.comp(g, f));
        }
    }
    let cat = assemble(
        name.into(),
        (0..n).map(|x| gp.obj_label(x)).collect(),
        (0..m).map(|k| gp.mor_label(k)).collect(),
        (0..m).map(|k| gp.src(k)).collect(),
        (0..m).map(|k| gp.tgt(k)).collect(),
        (0..n).map(|x| gp.ident(x)).collect(),
        comp,
    )
    .expect("product tables form a category");
    let proj = |i: usize| {
        (
            (0..n).map(|x| gp.obj_coord(x)[i]).collect(),
            (0..m).map(|k| gp.mor_coord(k)[i]).collect(),
        )
    };
    let cone = ConeSpec {
        left: a.name().into(),
        right: b.name().into(),
        vertex: name.into(),
        proj1: proj(0),
        proj2: proj(1),
    };
    (cat, cone)
}
