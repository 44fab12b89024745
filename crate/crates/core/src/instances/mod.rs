//! Concrete fibrations: codomain fibrations of finite lex categories, the
//! subobject fibration of finite sets, and fibrations read from files.

mod subobject;

use std::sync::Arc;

use crate::choice::ChoiceOrder;
use crate::fibcore::{build_op_cleavage_with, FibError, OpCleavage, Prefibration};
use crate::fincat::{
    arrow_category, check_finite_limits, ArrowCategory, FinCategory, FinFunctor, FunctorError,
    LimitFailure,
};
use crate::htpy::{LawCheck, SynthesizedTwoCategory};
use crate::oracle::{Key, MaterializeError, MaterializedOracle};

pub use subobject::{
    materialize_subobject, SetMap, SubMor, SubobjectOracle, Subset, MAX_SUBOBJECT_SIZE,
};

/// Default size guard for eagerly materialized arrow categories.
pub const DEFAULT_ARROW_CAP: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("base lacks finite limits: {0}")]
    NoFiniteLimits(LimitFailure),
    #[error("arrow category would have more than {cap} morphisms")]
    TooLarge { cap: usize },
    #[error(transparent)]
    Fib(#[from] FibError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Structure(#[from] MaterializeError),
}

/// The codomain fibration `C→ → C` of a finite lex category.
#[derive(Debug, Clone)]
pub struct CodomainInstance {
    pub arrow: ArrowCategory,
    pub oracle: MaterializedOracle,
    /// Colifts `(id_X, f): (X, x) → (X, f x)`.
    pub op: OpCleavage,
}

/// The prefibration `cod: C→ → C`, for any finite category.
pub fn codomain_prefibration(
    c: &FinCategory,
    cap: usize,
) -> Result<(ArrowCategory, Prefibration), InstanceError> {
    let base = Arc::new(c.clone());
    let squares: usize = c
        .morphisms()
        .map(|x| c.out_of(c.src(x)).len() * c.out_of(c.tgt(x)).len())
        .sum();
    if squares > cap {
        return Err(InstanceError::TooLarge { cap });
    }
    let arrow = arrow_category(&base);
    let fib = Prefibration::new(arrow.codomain_functor())?;
    Ok((arrow, fib))
}

pub fn build_codomain(c: &FinCategory) -> Result<CodomainInstance, InstanceError> {
    build_codomain_with(c, ChoiceOrder::FIRST)
}

pub fn build_codomain_with(
    c: &FinCategory,
    order: ChoiceOrder,
) -> Result<CodomainInstance, InstanceError> {
    check_finite_limits(c).map_err(InstanceError::NoFiniteLimits)?;
    let (arrow, fib) = codomain_prefibration(c, DEFAULT_ARROW_CAP)?;
    let fib = Arc::new(fib);
    let base = arrow.base.clone();
    let op = build_op_cleavage_with(&fib, |_, p, lifts| {
        lifts
            .iter()
            .copied()
            .find(|&m| base.is_identity(arrow.top(m)) && fib.total.src(m) == p)
    })?;
    let oracle = MaterializedOracle::new(fib, order)?;
    Ok(CodomainInstance { arrow, oracle, op })
}

/// Every homotopy is an identity homotopy: `|cells(f, g)| = [f = g]`.
pub fn verify_codomain_triviality<B: Key, T: Key>(t: &SynthesizedTwoCategory<B, T>) -> LawCheck {
    let n = t.num_objects();
    let mut check = LawCheck {
        law: "homotopies are identities",
        instances: 0,
        failure: None,
    };
    for a in 0..n {
        for b in 0..n {
            let hom = t.hom(a, b);
            for f in 0..hom.morphisms.len() as u32 {
                for g in 0..hom.morphisms.len() as u32 {
                    check.instances += 1;
                    let count = hom.cells_between(f, g).count();
                    if count != usize::from(f == g) && check.failure.is_none() {
                        check.failure = Some(format!(
                            "{} homotopies {} => {}",
                            count, hom.mor_labels[f as usize], hom.mor_labels[g as usize]
                        ));
                    }
                }
            }
        }
    }
    check
}

/// A fibration given as explicit tables: validate the functor, then run the
/// fibration, ∧ and ∧= checks and wrap the result as an oracle.
pub fn load_explicit(
    proj: FinFunctor,
    order: ChoiceOrder,
) -> Result<MaterializedOracle, InstanceError> {
    let fib = Arc::new(Prefibration::new(proj)?);
    Ok(MaterializedOracle::new(fib, order)?)
}

/// The lex categories whose codomain fibrations are shipped as instances.
pub fn codomain_bases() -> Vec<FinCategory> {
    use crate::fincat::zoo;
    vec![
        zoo::terminal(),
        zoo::walking_arrow(),
        zoo::chain(3),
        zoo::square_lattice(),
        zoo::twin_top(),
    ]
}
