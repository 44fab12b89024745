use std::sync::Arc;

use super::{CatError, FinCategory, Mo, Ob};

/// A functor between finite categories, checked exhaustively on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    pub name: String,
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub obj_map: Vec<Ob>,
    pub mor_map: Vec<Mo>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctorError {
    #[error("{0}: map has the wrong length")]
    Shape(String),
    #[error("{functor}: {morphism} is sent to a morphism with the wrong endpoints")]
    Endpoints { functor: String, morphism: String },
    #[error("{functor}: identity of {object} is not preserved")]
    Identity { functor: String, object: String },
    #[error("{functor}: composite {g} . {f} is not preserved")]
    Composite {
        functor: String,
        g: String,
        f: String,
    },
    #[error(transparent)]
    Cat(#[from] CatError),
}

impl FinFunctor {
    pub fn new(
        name: impl Into<String>,
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<Ob>,
        mor_map: Vec<Mo>,
    ) -> Result<Self, FunctorError> {
        let f = FinFunctor {
            name: name.into(),
            source,
            target,
            obj_map,
            mor_map,
        };
        f.check()?;
        Ok(f)
    }

    /// Build from name pairs, as read from a file.
    pub fn from_names(
        name: impl Into<String>,
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        objs: &[(String, String)],
        mors: &[(String, String)],
    ) -> Result<Self, FunctorError> {
        let name = name.into();
        let mut obj_map = vec![None; source.num_objects()];
        for (a, b) in objs {
            obj_map[source.object(a)? as usize] = Some(target.object(b)?);
        }
        let mut mor_map = vec![None; source.num_morphisms()];
        for (f, g) in mors {
            mor_map[source.morphism(f)? as usize] = Some(target.morphism(g)?);
        }
        // Identities may be left implicit.
        for a in source.objects() {
            if mor_map[source.id(a) as usize].is_none() {
                if let Some(b) = obj_map[a as usize] {
                    mor_map[source.id(a) as usize] = Some(target.id(b));
                }
            }
        }
        let obj_map = obj_map
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| FunctorError::Shape(name.clone()))?;
        let mor_map = mor_map
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| FunctorError::Shape(name.clone()))?;
        Self::new(name, source, target, obj_map, mor_map)
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        FinFunctor {
            name: format!("id_{}", c.name()),
            obj_map: c.objects().collect(),
            mor_map: c.morphisms().collect(),
            source: c.clone(),
            target: c,
        }
    }

    pub fn obj(&self, a: Ob) -> Ob {
        self.obj_map[a as usize]
    }

    pub fn mor(&self, m: Mo) -> Mo {
        self.mor_map[m as usize]
    }

    pub fn check(&self) -> Result<(), FunctorError> {
        let (s, t) = (&*self.source, &*self.target);
        if self.obj_map.len() != s.num_objects() || self.mor_map.len() != s.num_morphisms() {
            return Err(FunctorError::Shape(self.name.clone()));
        }
        for m in s.morphisms() {
            let fm = self.mor(m);
            if fm as usize >= t.num_morphisms()
                || t.src(fm) != self.obj(s.src(m))
                || t.tgt(fm) != self.obj(s.tgt(m))
            {
                return Err(FunctorError::Endpoints {
                    functor: self.name.clone(),
                    morphism: s.mor_name(m).into(),
                });
            }
        }
        for a in s.objects() {
            if self.mor(s.id(a)) != t.id(self.obj(a)) {
                return Err(FunctorError::Identity {
                    functor: self.name.clone(),
                    object: s.obj_name(a).into(),
                });
            }
        }
        for f in s.morphisms() {
            for &g in s.out_of(s.tgt(f)) {
                if self.mor(s.compose(g, f)) != t.compose(self.mor(g), self.mor(f)) {
                    return Err(FunctorError::Composite {
                        functor: self.name.clone(),
                        g: s.mor_name(g).into(),
                        f: s.mor_name(f).into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &FinFunctor) -> FinFunctor {
        assert!(Arc::ptr_eq(&other.target, &self.source) || other.target == self.source);
        FinFunctor {
            name: format!("{}.{}", self.name, other.name),
            source: other.source.clone(),
            target: self.target.clone(),
            obj_map: other.obj_map.iter().map(|&a| self.obj(a)).collect(),
            mor_map: other.mor_map.iter().map(|&m| self.mor(m)).collect(),
        }
    }

    /// The same functor between opposite categories.
    pub fn opposite(&self) -> FinFunctor {
        FinFunctor {
            name: format!("{}^op", self.name),
            source: Arc::new(super::opposite(&self.source)),
            target: Arc::new(super::opposite(&self.target)),
            obj_map: self.obj_map.clone(),
            mor_map: self.mor_map.clone(),
        }
    }
}

/// A natural transformation between parallel functors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTransform {
    pub source_functor: FinFunctor,
    pub target_functor: FinFunctor,
    pub components: Vec<Mo>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NatError {
    #[error("functors are not parallel")]
    NotParallel,
    #[error("component at {0} has the wrong endpoints")]
    Component(String),
    #[error("naturality fails at {0}")]
    Naturality(String),
}

impl NatTransform {
    pub fn new(
        source_functor: FinFunctor,
        target_functor: FinFunctor,
        components: Vec<Mo>,
    ) -> Result<Self, NatError> {
        let n = NatTransform {
            source_functor,
            target_functor,
            components,
        };
        n.check()?;
        Ok(n)
    }

    pub fn check(&self) -> Result<(), NatError> {
        let (f, g) = (&self.source_functor, &self.target_functor);
        if f.source != g.source || f.target != g.target {
            return Err(NatError::NotParallel);
        }
        let (s, t) = (&*f.source, &*f.target);
        if self.components.len() != s.num_objects() {
            return Err(NatError::Component("<arity>".into()));
        }
        for a in s.objects() {
            let c = self.components[a as usize];
            if t.src(c) != f.obj(a) || t.tgt(c) != g.obj(a) {
                return Err(NatError::Component(s.obj_name(a).into()));
            }
        }
        for m in s.morphisms() {
            let (a, b) = (s.src(m), s.tgt(m));
            let lhs = t.compose(self.components[b as usize], f.mor(m));
            let rhs = t.compose(g.mor(m), self.components[a as usize]);
            if lhs != rhs {
                return Err(NatError::Naturality(s.mor_name(m).into()));
            }
        }
        Ok(())
    }
}
