//! Finite categories given by explicit tables.
//!
//! Objects and morphisms are dense indices (`Ob`, `Mo`) into tables that keep
//! their input order; names are interned once at validation time.

mod construct;
mod functor;
mod limits;
pub mod zoo;

use std::collections::HashMap;
use std::fmt;

pub use construct::{arrow_category, opposite, slice_category, ArrowCategory, SliceCategory};
pub use functor::{FinFunctor, FunctorError, NatError, NatTransform};
pub use limits::{
    check_finite_limits, find_products, find_pullbacks, find_terminals, is_initial,
    is_product_diagram, is_pullback_square, is_terminal, mediators_to_product, LimitFailure,
    ProductDiagram, PullbackSquare,
};

pub type Ob = u32;
pub type Mo = u32;

/// Default refusal threshold on the number of morphisms.
pub const DEFAULT_MORPHISM_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatError {
    #[error("no composite recorded for {g} . {f}")]
    MissingComposite { g: String, f: String },
    #[error("associativity fails for {h} . {g} . {f}")]
    AssociativityViolation { h: String, g: String, f: String },
    #[error("identity law fails for {identity} and {morphism}")]
    IdentityViolation { identity: String, morphism: String },
    #[error("object {0} has no identity")]
    MissingIdentity(String),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown morphism {0}")]
    UnknownMorphism(String),
    #[error("duplicate declaration of {0}")]
    Duplicate(String),
    #[error("{g} . {f} = {h} has wrong endpoints")]
    BadComposite { g: String, f: String, h: String },
    #[error("composite {g} . {f} declared twice with different values")]
    ConflictingComposite { g: String, f: String },
    #[error("{morphism} cannot be the identity of {object}")]
    BadIdentity { object: String, morphism: String },
    #[error("category has {size} morphisms, over the cap of {cap}")]
    SizeCap { size: usize, cap: usize },
}

/// Unvalidated category tables, referenced by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub name: String,
    pub objects: Vec<String>,
    /// `(name, source, target)`
    pub morphisms: Vec<(String, String, String)>,
    /// `(object, morphism)`
    pub identities: Vec<(String, String)>,
    /// `(g, f, g∘f)`
    pub compositions: Vec<(String, String, String)>,
}

impl RawCategory {
    pub fn new(name: impl Into<String>) -> Self {
        RawCategory {
            name: name.into(),
            ..Default::default()
        }
    }
}

/// A validated finite category.
#[derive(Clone, PartialEq, Eq)]
pub struct FinCategory {
    name: String,
    obj_names: Vec<String>,
    mor_names: Vec<String>,
    obj_index: HashMap<String, Ob>,
    mor_index: HashMap<String, Mo>,
    src: Vec<Ob>,
    tgt: Vec<Ob>,
    ident: Vec<Mo>,
    comp: HashMap<(Mo, Mo), Mo>,
    homs: HashMap<(Ob, Ob), Vec<Mo>>,
    outs: Vec<Vec<Mo>>,
    ins: Vec<Vec<Mo>>,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCategory({}: {} objects, {} morphisms)",
            self.name,
            self.num_objects(),
            self.num_morphisms()
        )
    }
}

/// Validate raw tables with the default size cap.
pub fn validate_category(raw: &RawCategory) -> Result<FinCategory, CatError> {
    validate_category_capped(raw, DEFAULT_MORPHISM_CAP)
}

pub fn validate_category_capped(raw: &RawCategory, cap: usize) -> Result<FinCategory, CatError> {
    if raw.morphisms.len() > cap {
        return Err(CatError::SizeCap {
            size: raw.morphisms.len(),
            cap,
        });
    }
    let mut obj_index = HashMap::new();
    for (i, o) in raw.objects.iter().enumerate() {
        if obj_index.insert(o.clone(), i as Ob).is_some() {
            return Err(CatError::Duplicate(o.clone()));
        }
    }
    let obj = |n: &str| {
        obj_index
            .get(n)
            .copied()
            .ok_or_else(|| CatError::UnknownObject(n.to_string()))
    };
    let mut mor_index = HashMap::new();
    let mut src = Vec::with_capacity(raw.morphisms.len());
    let mut tgt = Vec::with_capacity(raw.morphisms.len());
    for (i, (m, s, t)) in raw.morphisms.iter().enumerate() {
        if mor_index.insert(m.clone(), i as Mo).is_some() {
            return Err(CatError::Duplicate(m.clone()));
        }
        src.push(obj(s)?);
        tgt.push(obj(t)?);
    }
    let mor = |n: &str| {
        mor_index
            .get(n)
            .copied()
            .ok_or_else(|| CatError::UnknownMorphism(n.to_string()))
    };
    let mut ident: Vec<Option<Mo>> = vec![None; raw.objects.len()];
    for (o, m) in &raw.identities {
        let (oi, mi) = (obj(o)?, mor(m)?);
        if src[mi as usize] != oi || tgt[mi as usize] != oi {
            return Err(CatError::BadIdentity {
                object: o.clone(),
                morphism: m.clone(),
            });
        }
        if ident[oi as usize]
            .replace(mi)
            .is_some_and(|prev| prev != mi)
        {
            return Err(CatError::Duplicate(format!("identity of {o}")));
        }
    }
    let ident: Vec<Mo> = ident
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| CatError::MissingIdentity(raw.objects[i].clone())))
        .collect::<Result<_, _>>()?;
    let mut comp = HashMap::new();
    for (g, f, h) in &raw.compositions {
        let (gi, fi, hi) = (mor(g)?, mor(f)?, mor(h)?);
        let ok = tgt[fi as usize] == src[gi as usize]
            && src[hi as usize] == src[fi as usize]
            && tgt[hi as usize] == tgt[gi as usize];
        if !ok {
            return Err(CatError::BadComposite {
                g: g.clone(),
                f: f.clone(),
                h: h.clone(),
            });
        }
        if comp.insert((gi, fi), hi).is_some_and(|prev| prev != hi) {
            return Err(CatError::ConflictingComposite {
                g: g.clone(),
                f: f.clone(),
            });
        }
    }
    assemble(
        raw.name.clone(),
        raw.objects.clone(),
        raw.morphisms.iter().map(|m| m.0.clone()).collect(),
        src,
        tgt,
        ident,
        comp,
    )
}

/// Build a category from index tables. Composites with identities may be
/// omitted; they are filled in before the laws are checked.
pub(crate) fn assemble(
    name: String,
    obj_names: Vec<String>,
    mor_names: Vec<String>,
    src: Vec<Ob>,
    tgt: Vec<Ob>,
    ident: Vec<Mo>,
    mut comp: HashMap<(Mo, Mo), Mo>,
) -> Result<FinCategory, CatError> {
    let n_mor = mor_names.len();
    let mut homs: HashMap<(Ob, Ob), Vec<Mo>> = HashMap::new();
    let mut outs = vec![Vec::new(); obj_names.len()];
    let mut ins = vec![Vec::new(); obj_names.len()];
    for m in 0..n_mor {
        homs.entry((src[m], tgt[m])).or_default().push(m as Mo);
        outs[src[m] as usize].push(m as Mo);
        ins[tgt[m] as usize].push(m as Mo);
    }
    // Identity composites: fill when absent, check when present.
    for m in 0..n_mor as Mo {
        let (s, t) = (src[m as usize], tgt[m as usize]);
        for (id, key) in [
            (ident[t as usize], (ident[t as usize], m)),
            (ident[s as usize], (m, ident[s as usize])),
        ] {
            match comp.get(&key) {
                None => {
                    comp.insert(key, m);
                }
                Some(&h) if h != m => {
                    return Err(CatError::IdentityViolation {
                        identity: mor_names[id as usize].clone(),
                        morphism: mor_names[m as usize].clone(),
                    })
                }
                _ => {}
            }
        }
    }
    let obj_index = obj_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i as Ob))
        .collect();
    let mor_index = mor_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i as Mo))
        .collect();
    let cat = FinCategory {
        name,
        obj_names,
        mor_names,
        obj_index,
        mor_index,
        src,
        tgt,
        ident,
        comp,
        homs,
        outs,
        ins,
    };
    // Totality on composable pairs.
    for f in cat.morphisms() {
        for &g in cat.out_of(cat.tgt(f)) {
            if !cat.comp.contains_key(&(g, f)) {
                return Err(CatError::MissingComposite {
                    g: cat.mor_name(g).into(),
                    f: cat.mor_name(f).into(),
                });
            }
        }
    }
    if let Some((h, g, f)) = cat.associativity_failure() {
        return Err(CatError::AssociativityViolation {
            h: cat.mor_name(h).into(),
            g: cat.mor_name(g).into(),
            f: cat.mor_name(f).into(),
        });
    }
    Ok(cat)
}

impl FinCategory {
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn num_objects(&self) -> usize {
        self.obj_names.len()
    }
    pub fn num_morphisms(&self) -> usize {
        self.mor_names.len()
    }
    pub fn objects(&self) -> impl Iterator<Item = Ob> + Clone {
        0..self.obj_names.len() as Ob
    }
    pub fn morphisms(&self) -> impl Iterator<Item = Mo> + Clone {
        0..self.mor_names.len() as Mo
    }
    pub fn obj_name(&self, a: Ob) -> &str {
        &self.obj_names[a as usize]
    }
    pub fn mor_name(&self, m: Mo) -> &str {
        &self.mor_names[m as usize]
    }
    pub fn obj_names(&self) -> &[String] {
        &self.obj_names
    }
    pub fn mor_names(&self) -> &[String] {
        &self.mor_names
    }
    pub fn object(&self, name: &str) -> Result<Ob, CatError> {
        self.obj_index
            .get(name)
            .copied()
            .ok_or_else(|| CatError::UnknownObject(name.into()))
    }
    pub fn morphism(&self, name: &str) -> Result<Mo, CatError> {
        self.mor_index
            .get(name)
            .copied()
            .ok_or_else(|| CatError::UnknownMorphism(name.into()))
    }
    pub fn src(&self, m: Mo) -> Ob {
        self.src[m as usize]
    }
    pub fn tgt(&self, m: Mo) -> Ob {
        self.tgt[m as usize]
    }
    pub fn id(&self, a: Ob) -> Mo {
        self.ident[a as usize]
    }
    pub fn is_identity(&self, m: Mo) -> bool {
        self.ident[self.src(m) as usize] == m
    }
    /// `g ∘ f`. Panics on a non-composable pair: that is a caller bug.
    pub fn compose(&self, g: Mo, f: Mo) -> Mo {
        match self.comp.get(&(g, f)) {
            Some(&h) => h,
            None => panic!(
                "{}: {} . {} is not a composable pair",
                self.name,
                self.mor_name(g),
                self.mor_name(f)
            ),
        }
    }
    pub fn try_compose(&self, g: Mo, f: Mo) -> Option<Mo> {
        self.comp.get(&(g, f)).copied()
    }
    /// Compose a path given in application order: `chain(&[h, g, f]) = h∘g∘f`.
    pub fn chain(&self, ms: &[Mo]) -> Mo {
        let (&last, rest) = ms.split_last().expect("empty chain");
        rest.iter().rev().fold(last, |acc, &g| self.compose(g, acc))
    }
    pub fn hom(&self, a: Ob, b: Ob) -> &[Mo] {
        self.homs.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }
    /// Morphisms with source `a`, in index order.
    pub fn out_of(&self, a: Ob) -> &[Mo] {
        &self.outs[a as usize]
    }
    /// Morphisms with target `a`, in index order.
    pub fn into_obj(&self, a: Ob) -> &[Mo] {
        &self.ins[a as usize]
    }
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// First composable triple (in index order) that fails to associate.
    pub fn associativity_failure(&self) -> Option<(Mo, Mo, Mo)> {
        for f in self.morphisms() {
            for &g in self.out_of(self.tgt(f)) {
                let gf = self.comp[&(g, f)];
                for &h in self.out_of(self.tgt(g)) {
                    if self.comp[&(h, gf)] != self.comp[&(self.comp[&(h, g)], f)] {
                        return Some((h, g, f));
                    }
                }
            }
        }
        None
    }

    /// First identity-law failure, as `(identity, morphism)`.
    pub fn identity_failure(&self) -> Option<(Mo, Mo)> {
        for f in self.morphisms() {
            let (is, it) = (self.id(self.src(f)), self.id(self.tgt(f)));
            if self.compose(it, f) != f {
                return Some((it, f));
            }
            if self.compose(f, is) != f {
                return Some((is, f));
            }
        }
        None
    }

    pub fn is_isomorphism(&self, m: Mo) -> bool {
        self.inverse(m).is_some()
    }

    pub fn inverse(&self, m: Mo) -> Option<Mo> {
        let (a, b) = (self.src(m), self.tgt(m));
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&n| self.compose(n, m) == self.id(a) && self.compose(m, n) == self.id(b))
    }

    /// Raw tables, with every composite listed (identity composites included).
    pub fn to_raw(&self) -> RawCategory {
        let mut raw = RawCategory::new(self.name.clone());
        raw.objects = self.obj_names.clone();
        raw.morphisms = self
            .morphisms()
            .map(|m| {
                (
                    self.mor_name(m).into(),
                    self.obj_name(self.src(m)).into(),
                    self.obj_name(self.tgt(m)).into(),
                )
            })
            .collect();
        raw.identities = self
            .objects()
            .map(|a| (self.obj_name(a).into(), self.mor_name(self.id(a)).into()))
            .collect();
        for f in self.morphisms() {
            for &g in self.out_of(self.tgt(f)) {
                if self.is_identity(g) || self.is_identity(f) {
                    continue;
                }
                raw.compositions.push((
                    self.mor_name(g).into(),
                    self.mor_name(f).into(),
                    self.mor_name(self.compose(g, f)).into(),
                ));
            }
        }
        raw
    }

    /// Full subcategory-like restriction to the given objects and morphisms.
    /// The morphism list must be closed under composition and contain the
    /// identities of the listed objects.
    pub fn subcategory(
        &self,
        name: String,
        objs: &[Ob],
        mors: &[Mo],
    ) -> Result<(FinCategory, Vec<Ob>, Vec<Mo>), CatError> {
        let obj_pos: HashMap<Ob, Ob> = objs
            .iter()
            .enumerate()
            .map(|(i, &o)| (o, i as Ob))
            .collect();
        let mor_pos: HashMap<Mo, Mo> = mors
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i as Mo))
            .collect();
        let src = mors.iter().map(|&m| obj_pos[&self.src(m)]).collect();
        let tgt = mors.iter().map(|&m| obj_pos[&self.tgt(m)]).collect();
        let ident = objs.iter().map(|&o| mor_pos[&self.id(o)]).collect();
        let mut comp = HashMap::new();
        for &f in mors {
            for &g in mors {
                if self.tgt(f) == self.src(g) {
                    let h = self.compose(g, f);
                    let hp = *mor_pos.get(&h).ok_or_else(|| CatError::MissingComposite {
                        g: self.mor_name(g).into(),
                        f: self.mor_name(f).into(),
                    })?;
                    comp.insert((mor_pos[&g], mor_pos[&f]), hp);
                }
            }
        }
        let cat = assemble(
            name,
            objs.iter().map(|&o| self.obj_name(o).to_string()).collect(),
            mors.iter().map(|&m| self.mor_name(m).to_string()).collect(),
            src,
            tgt,
            ident,
            comp,
        )?;
        Ok((cat, objs.to_vec(), mors.to_vec()))
    }
}
