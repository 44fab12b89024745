use std::collections::HashMap;
use std::sync::Arc;

use super::{assemble, FinCategory, FinFunctor, Mo, Ob};

/// Opposite category on the same index tables. Applying it twice returns the
/// original category, name included.
pub fn opposite(c: &FinCategory) -> FinCategory {
    let name = match c.name().strip_suffix("^op") {
        Some(base) => base.to_string(),
        None => format!("{}^op", c.name()),
    };
    let mut comp = HashMap::new();
    for f in c.morphisms() {
        for &g in c.out_of(c.tgt(f)) {
            // g∘f in C is f∘g in C^op.
            comp.insert((f, g), c.compose(g, f));
        }
    }
    assemble(
        name,
        c.obj_names().to_vec(),
        c.mor_names().to_vec(),
        c.morphisms().map(|m| c.tgt(m)).collect(),
        c.morphisms().map(|m| c.src(m)).collect(),
        c.objects().map(|a| c.id(a)).collect(),
        comp,
    )
    .expect("opposite of a valid category is valid")
}

/// The arrow category `C→` together with its codomain functor.
#[derive(Debug, Clone)]
pub struct ArrowCategory {
    pub base: Arc<FinCategory>,
    pub cat: Arc<FinCategory>,
    /// Object `i` of `cat` is the base morphism `i`.
    /// Morphism `m` of `cat` is the square `(p, f)`.
    pub squares: Vec<(Mo, Mo)>,
    square_index: HashMap<(Ob, Ob, Mo, Mo), Mo>,
}

impl ArrowCategory {
    /// Base morphism underlying an object of the arrow category.
    pub fn arrow(&self, x: Ob) -> Mo {
        x
    }
    pub fn object_of(&self, m: Mo) -> Ob {
        m
    }
    pub fn top(&self, sq: Mo) -> Mo {
        self.squares[sq as usize].0
    }
    pub fn bottom(&self, sq: Mo) -> Mo {
        self.squares[sq as usize].1
    }
    /// The square `(p, f)` from `x` to `y`, if it commutes.
    pub fn square(&self, x: Ob, y: Ob, p: Mo, f: Mo) -> Option<Mo> {
        self.square_index.get(&(x, y, p, f)).copied()
    }
    pub fn codomain_functor(&self) -> FinFunctor {
        FinFunctor {
            name: "cod".into(),
            source: self.cat.clone(),
            target: self.base.clone(),
            obj_map: self.cat.objects().map(|x| self.base.tgt(x)).collect(),
            mor_map: self.squares.iter().map(|&(_, f)| f).collect(),
        }
    }
    pub fn domain_functor(&self) -> FinFunctor {
        FinFunctor {
            name: "dom".into(),
            source: self.cat.clone(),
            target: self.base.clone(),
            obj_map: self.cat.objects().map(|x| self.base.src(x)).collect(),
            mor_map: self.squares.iter().map(|&(p, _)| p).collect(),
        }
    }
}

pub fn arrow_category(c: &Arc<FinCategory>) -> ArrowCategory {
    let mut squares = Vec::new();
    let mut names = Vec::new();
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    let mut square_index = HashMap::new();
    for x in c.morphisms() {
        for y in c.morphisms() {
            for &p in c.hom(c.src(x), c.src(y)) {
                for &f in c.hom(c.tgt(x), c.tgt(y)) {
                    if c.compose(y, p) == c.compose(f, x) {
                        square_index.insert((x, y, p, f), squares.len() as Mo);
                        squares.push((p, f));
                        names.push(format!(
                            "sq({},{},{},{})",
                            c.mor_name(p),
                            c.mor_name(f),
                            c.mor_name(x),
                            c.mor_name(y)
                        ));
                        src.push(x);
                        tgt.push(y);
                    }
                }
            }
        }
    }
    let ident = c
        .morphisms()
        .map(|x| square_index[&(x, x, c.id(c.src(x)), c.id(c.tgt(x)))])
        .collect();
    let mut comp = HashMap::new();
    for (s1, &(p1, f1)) in squares.iter().enumerate() {
        let (x, y) = (src[s1], tgt[s1]);
        for (s2, &(p2, f2)) in squares.iter().enumerate() {
            if src[s2] != y {
                continue;
            }
            let z = tgt[s2];
            let h = square_index[&(x, z, c.compose(p2, p1), c.compose(f2, f1))];
            comp.insert((s2 as Mo, s1 as Mo), h);
        }
    }
    let cat = assemble(
        format!("{}->", c.name()),
        c.morphisms().map(|m| c.mor_name(m).to_string()).collect(),
        names,
        src,
        tgt,
        ident,
        comp,
    )
    .expect("arrow category of a valid category is valid");
    ArrowCategory {
        base: c.clone(),
        cat: Arc::new(cat),
        squares,
        square_index,
    }
}

/// The slice `C/A`: arrows into `A` and the maps between them over `A`.
#[derive(Debug, Clone)]
pub struct SliceCategory {
    pub cat: FinCategory,
    /// Object `i` of the slice is the base morphism `objects[i]`.
    pub objects: Vec<Mo>,
    /// Morphism `i` of the slice is the base morphism `morphisms[i]`.
    pub morphisms: Vec<Mo>,
}

pub fn slice_category(c: &FinCategory, a: Ob) -> SliceCategory {
    let objects: Vec<Mo> = c.into_obj(a).to_vec();
    let pos: HashMap<Mo, Ob> = objects
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i as Ob))
        .collect();
    let mut morphisms = Vec::new();
    let mut names = Vec::new();
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    let mut index = HashMap::new();
    for &x in &objects {
        for &y in &objects {
            for &p in c.hom(c.src(x), c.src(y)) {
                if c.compose(y, p) == x {
                    index.insert((x, y, p), morphisms.len() as Mo);
                    morphisms.push(p);
                    names.push(format!(
                        "{}@{}>{}",
                        c.mor_name(p),
                        c.mor_name(x),
                        c.mor_name(y)
                    ));
                    src.push(pos[&x]);
                    tgt.push(pos[&y]);
                }
            }
        }
    }
    let ident = objects
        .iter()
        .map(|&x| index[&(x, x, c.id(c.src(x)))])
        .collect();
    let mut comp = HashMap::new();
    for (i, &p) in morphisms.iter().enumerate() {
        for (j, &q) in morphisms.iter().enumerate() {
            if src[j] == tgt[i] {
                let (x, z) = (objects[src[i] as usize], objects[tgt[j] as usize]);
                comp.insert((j as Mo, i as Mo), index[&(x, z, c.compose(q, p))]);
            }
        }
    }
    let cat = assemble(
        format!("{}/{}", c.name(), c.obj_name(a)),
        objects.iter().map(|&x| c.mor_name(x).to_string()).collect(),
        names,
        src,
        tgt,
        ident,
        comp,
    )
    .expect("slice of a valid category is valid");
    SliceCategory {
        cat,
        objects,
        morphisms,
    }
}
