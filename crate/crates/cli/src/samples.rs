//! Shipped example documents, generated from the kernel so the golden files
//! can be regenerated and compared.

use eqfib_core::fincat::{zoo, FinCategory, FinFunctor};
use eqfib_core::gpd::standard_members;
use eqfib_core::instances::{codomain_prefibration, InstanceError};

use crate::format::{Block, CategoryBlock, Document, FamilyBlock, FunctorBlock, ProductLine};

fn category_block(c: &FinCategory, groupoid: bool) -> Block {
    Block::Category(CategoryBlock {
        raw: c.to_raw(),
        groupoid,
    })
}

/// Object and morphism images by name; identities are left implicit.
pub fn functor_block(f: &FinFunctor) -> Block {
    let (s, t) = (&f.source, &f.target);
    Block::Functor(FunctorBlock {
        name: f.name.clone(),
        source: s.name().into(),
        target: t.name().into(),
        objs: s
            .objects()
            .map(|a| (s.obj_name(a).into(), t.obj_name(f.obj(a)).into()))
            .collect(),
        mors: s
            .morphisms()
            .filter(|&m| !s.is_identity(m))
            .map(|m| (s.mor_name(m).into(), t.mor_name(f.mor(m)).into()))
            .collect(),
    })
}

/// Base, arrow category and codomain functor of `C→ → C`.
pub fn codomain_document(base: &FinCategory, cap: usize) -> Result<Document, InstanceError> {
    let (arrow, _) = codomain_prefibration(base, cap)?;
    let total = arrow
        .cat
        .as_ref()
        .clone()
        .with_name(format!("{}_arrows", base.name()));
    let mut proj = arrow.codomain_functor();
    proj.source = std::sync::Arc::new(total.clone());
    proj.name = "cod".into();
    Ok(Document {
        header: vec![format!("# codomain fibration of {}", base.name())],
        blocks: vec![
            category_block(base, false),
            category_block(&total, false),
            functor_block(&proj),
            Block::Fibration("cod".into()),
        ],
    })
}

/// The document with morphism `mor` of category `cat` deleted, together
/// with every line that mentions it.
pub fn without_morphism(doc: &Document, cat: &str, mor: &str) -> Document {
    let mut out = doc.clone();
    for b in &mut out.blocks {
        match b {
            Block::Category(c) if c.raw.name == cat => {
                let r = &mut c.raw;
                r.morphisms.retain(|m| m.0 != mor);
                r.identities.retain(|i| i.1 != mor);
                r.compositions
                    .retain(|(g, f, h)| g != mor && f != mor && h != mor);
            }
            Block::Functor(f) if f.source == cat => f.mors.retain(|m| m.0 != mor),
            Block::Functor(f) if f.target == cat => f.mors.retain(|m| m.1 != mor),
            _ => {}
        }
    }
    out
}

/// A posetal fibration over `0 → 1`: fibers `p0 < p1` and `r0 < rm < r1`,
/// with reindexing sending only `r1` to `p1`. It is a ∧=-fibration, yet the
/// cocartesian `p1 → r1` fails Frobenius against `rm`.
pub fn frobenius_counterexample() -> (FinCategory, FinCategory, FinFunctor) {
    let total = zoo::preorder(
        "frob",
        &["p0", "p1", "r0", "rm", "r1"],
        &[
            ("p0", "p1"),
            ("r0", "rm"),
            ("rm", "r1"),
            ("p0", "r0"),
            ("p1", "r1"),
        ],
    );
    let base = zoo::walking_arrow();
    let over = |x: &str| u32::from(!x.starts_with('p'));
    let obj_map: Vec<u32> = total.objects().map(|x| over(total.obj_name(x))).collect();
    let mor_map: Vec<u32> = total
        .morphisms()
        .map(|m| {
            base.hom(
                obj_map[total.src(m) as usize],
                obj_map[total.tgt(m) as usize],
            )[0]
        })
        .collect();
    let (t, b) = (
        std::sync::Arc::new(total.clone()),
        std::sync::Arc::new(base.clone()),
    );
    let proj = FinFunctor::new("proj", t, b, obj_map, mor_map).expect("monotone map of preorders");
    (base, total, proj)
}

pub fn frobenius_document() -> Document {
    let (base, total, proj) = frobenius_counterexample();
    Document {
        header: vec!["# a ∧=-fibration with a cocartesian morphism that fails Frobenius".into()],
        blocks: vec![
            category_block(&base, false),
            category_block(&total, false),
            functor_block(&proj),
            Block::Fibration("proj".into()),
        ],
    }
}

/// The standard groupoid family with its two explicit product cones.
pub fn standard_family_document() -> Document {
    let (members, cones) = standard_members();
    let find = |n: &str| {
        members
            .iter()
            .find(|c| c.name() == n)
            .expect("cone names a member")
    };
    let mut blocks: Vec<Block> = members.iter().map(|c| category_block(c, true)).collect();
    let mut products = Vec::new();
    for cone in &cones {
        let p = find(&cone.vertex);
        let mut names = Vec::new();
        for (i, (side, (obj, mor))) in [(&cone.left, &cone.proj1), (&cone.right, &cone.proj2)]
            .into_iter()
            .enumerate()
        {
            let t = find(side);
            let name = format!("{}_p{}", cone.vertex, i + 1);
            blocks.push(Block::Functor(FunctorBlock {
                name: name.clone(),
                source: p.name().into(),
                target: t.name().into(),
                objs: p
                    .objects()
                    .map(|a| (p.obj_name(a).into(), t.obj_name(obj[a as usize]).into()))
                    .collect(),
                mors: p
                    .morphisms()
                    .filter(|&m| !p.is_identity(m))
                    .map(|m| (p.mor_name(m).into(), t.mor_name(mor[m as usize]).into()))
                    .collect(),
            }));
            names.push(name);
        }
        products.push(ProductLine {
            left: cone.left.clone(),
            right: cone.right.clone(),
            vertex: cone.vertex.clone(),
            proj1: names[0].clone(),
            proj2: names[1].clone(),
        });
    }
    blocks.push(Block::Family(FamilyBlock {
        name: "standard".into(),
        members: members.iter().map(|c| c.name().to_string()).collect(),
        terminal: Some("T".into()),
        products,
    }));
    Document {
        header: vec!["# the standard family of finite groupoids".into()],
        blocks,
    }
}

/// Named bases for `instance codomain`.
pub fn named_base(name: &str) -> Option<FinCategory> {
    Some(match name {
        "terminal" => zoo::terminal(),
        "walking_arrow" => zoo::walking_arrow(),
        "chain3" => zoo::chain(3),
        "square_lattice" => zoo::square_lattice(),
        "twin_top" => zoo::twin_top(),
        "cospan" => zoo::cospan_poset(),
        "finset2" => zoo::finset_skeleton(2),
        "finset3" => zoo::finset_skeleton(3),
        _ => return None,
    })
}

pub const BASE_NAMES: [&str; 8] = [
    "terminal",
    "walking_arrow",
    "chain3",
    "square_lattice",
    "twin_top",
    "cospan",
    "finset2",
    "finset3",
];

/// The codomain fibration of the walking arrow with the chosen cocartesian
/// lift of the diagonal of `1` deleted. The base is a poset, so that lift is
/// an identity morphism of the arrow category.
pub fn mutant_document() -> Document {
    use eqfib_core::fibcore::{build_cleavage, Prefibration};
    use eqfib_core::wedgeq::{check_wedge, check_wedgeq};
    let base = zoo::walking_arrow();
    let doc =
        codomain_document(&base, eqfib_core::instances::DEFAULT_ARROW_CAP).expect("small base");
    let (arrow, fib) =
        codomain_prefibration(&base, eqfib_core::instances::DEFAULT_ARROW_CAP).expect("small base");
    let _ = arrow;
    let fib: Prefibration = fib;
    let wc = check_wedge(&fib, &build_cleavage(&fib).expect("fibration")).expect("∧-fibration");
    let wq = check_wedgeq(&fib, &wc).expect("∧=-fibration");
    let rho = wq.eq(base.object("1").expect("object 1")).1;
    let total = format!("{}_arrows", base.name());
    let mut out = without_morphism(&doc, &total, fib.total.mor_name(rho));
    out.header = vec![format!(
        "# codomain fibration of {} without the diagonal lift {}",
        base.name(),
        fib.total.mor_name(rho)
    )];
    out
}
