//! The data a synthesizer needs from a ∧=-fibration, as an interface that both
//! materialized finite fibrations and lazily generated ones implement.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::choice::ChoiceOrder;
use crate::fibcore::{build_cleavage_with, cind, cofactor, FibError, Prefibration};
use crate::fincat::{Mo, Ob};
use crate::wedgeq::{
    check_wedge_with, check_wedgeq_with, WedgeFailure, WedgeqCleavage, WedgeqFailure,
};

pub trait Key: Clone + Eq + Hash + Ord + Debug + Send + Sync {}
impl<T: Clone + Eq + Hash + Ord + Debug + Send + Sync> Key for T {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("oracle contract violated: {0}")]
    Contract(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error(transparent)]
    Fib(#[from] FibError),
}

impl OracleError {
    pub fn contract(msg: impl Into<String>) -> Self {
        OracleError::Contract(msg.into())
    }
}

pub type OResult<T> = Result<T, OracleError>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BProduct<O, M> {
    pub vertex: O,
    pub proj1: M,
    pub proj2: M,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Meet<O, M> {
    pub vertex: O,
    pub proj1: M,
    pub proj2: M,
}

/// A ∧=-fibration with chosen structure and decidable equality of morphisms.
///
/// Total morphisms carry their endpoints and the base morphism they lie
/// over; equality of `TMor` values is equality of morphisms.
pub trait FibrationOracle: Sync + Send {
    type BObj: Key;
    type BMor: Key;
    type TObj: Key;
    type TMor: Key;

    fn label(&self) -> String;
    /// The base objects a synthesized 2-category is built on.
    fn zero_cells(&self) -> Vec<Self::BObj>;

    fn b_hom(&self, a: &Self::BObj, b: &Self::BObj) -> OResult<Vec<Self::BMor>>;
    fn b_src(&self, f: &Self::BMor) -> Self::BObj;
    fn b_tgt(&self, f: &Self::BMor) -> Self::BObj;
    fn b_id(&self, a: &Self::BObj) -> Self::BMor;
    fn b_comp(&self, g: &Self::BMor, f: &Self::BMor) -> OResult<Self::BMor>;
    fn b_terminal(&self) -> Self::BObj;
    fn b_to_terminal(&self, a: &Self::BObj) -> OResult<Self::BMor>;
    fn b_product(
        &self,
        a: &Self::BObj,
        b: &Self::BObj,
    ) -> OResult<BProduct<Self::BObj, Self::BMor>>;
    /// `⟨f, g⟩` into the chosen product of the codomains.
    fn b_pair(&self, f: &Self::BMor, g: &Self::BMor) -> OResult<Self::BMor>;

    fn t_src(&self, m: &Self::TMor) -> Self::TObj;
    fn t_tgt(&self, m: &Self::TMor) -> Self::TObj;
    fn t_over(&self, p: &Self::TObj) -> Self::BObj;
    fn t_base(&self, m: &Self::TMor) -> Self::BMor;
    fn t_id(&self, p: &Self::TObj) -> OResult<Self::TMor>;
    fn t_comp(&self, q: &Self::TMor, p: &Self::TMor) -> OResult<Self::TMor>;

    /// `⊤_A`.
    fn top(&self, a: &Self::BObj) -> OResult<Self::TObj>;
    /// The unique `P → ⊤_{cod g}` over `g`.
    fn ex(&self, p: &Self::TObj, g: &Self::BMor) -> OResult<Self::TMor>;
    /// Chosen fiber product of two objects over the same base object.
    fn meet(&self, p: &Self::TObj, q: &Self::TObj) -> OResult<Meet<Self::TObj, Self::TMor>>;
    /// `⟨⟨q, r⟩⟩` for a span over one base morphism.
    fn pair_over(&self, q: &Self::TMor, r: &Self::TMor) -> OResult<Self::TMor>;
    /// `crt_f Q`.
    fn crt(&self, f: &Self::BMor, q: &Self::TObj) -> OResult<Self::TMor>;
    /// `⟨p⟩` for `p` over `g∘f`, through `crt_g(cod p)`.
    fn cind(&self, p: &Self::TMor, f: &Self::BMor, g: &Self::BMor) -> OResult<Self::TMor>;
    /// `(Eq_B, ρ_B)`.
    fn eq(&self, b: &Self::BObj) -> OResult<(Self::TObj, Self::TMor)>;
    /// For cocartesian `q` over `f` and `r` over `g∘f`, the unique `s` over
    /// `g` with `s∘q = r`.
    fn cofactor(&self, q: &Self::TMor, r: &Self::TMor, g: &Self::BMor) -> OResult<Self::TMor>;
    /// All morphisms `P → Q` over `f`.
    fn hom_over(&self, p: &Self::TObj, q: &Self::TObj, f: &Self::BMor) -> OResult<Vec<Self::TMor>>;
    /// `None` when the instance cannot decide cocartesianness.
    fn is_cocartesian(&self, m: &Self::TMor) -> Option<bool>;
    /// A finite set of fiber objects over `a` used by pseudo-functor checks.
    fn fiber_sample(&self, a: &Self::BObj) -> OResult<Vec<Self::TObj>>;

    /// Run `f` in a scratch scope: objects the oracle creates inside it may be
    /// discarded afterwards, so nothing built inside may escape except plain
    /// data. Materialized oracles create nothing and just run `f`.
    fn scoped<R>(&mut self, f: impl FnOnce(&Self) -> R) -> R
    where
        Self: Sized,
    {
        f(self)
    }

    fn show_bobj(&self, a: &Self::BObj) -> String;
    fn show_bmor(&self, f: &Self::BMor) -> String;
    fn show_tobj(&self, p: &Self::TObj) -> String;
    fn show_tmor(&self, m: &Self::TMor) -> String;
}

/// Derived base structure shared by every oracle.
pub trait BaseOps: FibrationOracle {
    fn b_diagonal(&self, b: &Self::BObj) -> OResult<Self::BMor> {
        let id = self.b_id(b);
        self.b_pair(&id, &id)
    }

    /// `f × g = ⟨f π₁, g π₂⟩`.
    fn b_times(&self, f: &Self::BMor, g: &Self::BMor) -> OResult<Self::BMor> {
        let d = self.b_product(&self.b_src(f), &self.b_src(g))?;
        self.b_pair(&self.b_comp(f, &d.proj1)?, &self.b_comp(g, &d.proj2)?)
    }

    fn b_swap(&self, b: &Self::BObj) -> OResult<Self::BMor> {
        let d = self.b_product(b, b)?;
        self.b_pair(&d.proj2, &d.proj1)
    }

    /// `B^n`, bracketed to the left.
    fn b_power(&self, b: &Self::BObj, n: usize) -> OResult<Self::BObj> {
        let mut acc = b.clone();
        for _ in 1..n {
            acc = self.b_product(&acc, b)?.vertex;
        }
        Ok(acc)
    }

    /// `π_i: B^n → B`, `1 ≤ i ≤ n`.
    fn b_proj(&self, b: &Self::BObj, n: usize, i: usize) -> OResult<Self::BMor> {
        if n == 1 {
            return Ok(self.b_id(b));
        }
        let d = self.b_product(&self.b_power(b, n - 1)?, b)?;
        if i == n {
            Ok(d.proj2)
        } else {
            self.b_comp(&self.b_proj(b, n - 1, i)?, &d.proj1)
        }
    }

    /// Left-bracketed tuple into `B^n`.
    fn b_tuple(&self, fs: &[Self::BMor]) -> OResult<Self::BMor> {
        let mut acc = fs[0].clone();
        for f in &fs[1..] {
            acc = self.b_pair(&acc, f)?;
        }
        Ok(acc)
    }

    /// `Δ^n: B → B^n`.
    fn b_diagonal_n(&self, b: &Self::BObj, n: usize) -> OResult<Self::BMor> {
        self.b_tuple(&vec![self.b_id(b); n])
    }

    /// `f*Q`.
    fn pullback_obj(&self, f: &Self::BMor, q: &Self::TObj) -> OResult<Self::TObj> {
        Ok(self.t_src(&self.crt(f, q)?))
    }

    /// `f*u = ⟨u ∘ crt_f Q⟩` for a vertical `u: Q → Q'`.
    fn pullback_mor(&self, f: &Self::BMor, u: &Self::TMor) -> OResult<Self::TMor> {
        let c = self.crt(f, &self.t_src(u))?;
        let a = self.b_src(f);
        self.cind(&self.t_comp(u, &c)?, &self.b_id(&a), f)
    }
}

impl<O: FibrationOracle + ?Sized> BaseOps for O {}

/// A finite prefibration that passed `check_wedgeq`, used as an oracle.
#[derive(Debug, Clone)]
pub struct MaterializedOracle {
    pub fib: Arc<Prefibration>,
    pub wq: WedgeqCleavage,
    zero: Vec<Ob>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MaterializeError {
    #[error(transparent)]
    Fib(#[from] FibError),
    #[error(transparent)]
    Wedge(#[from] WedgeFailure),
    #[error(transparent)]
    Wedgeq(#[from] WedgeqFailure),
}

impl MaterializedOracle {
    pub fn new(fib: Arc<Prefibration>, order: ChoiceOrder) -> Result<Self, MaterializeError> {
        let cl = build_cleavage_with(&fib, order)?;
        let wc = check_wedge_with(&fib, &cl, order)?;
        let wq = check_wedgeq_with(&fib, &wc, order)?;
        Ok(Self::from_parts(fib, wq))
    }

    pub fn from_parts(fib: Arc<Prefibration>, wq: WedgeqCleavage) -> Self {
        let zero = fib.base.objects().collect();
        MaterializedOracle { fib, wq, zero }
    }

    fn pre(&self, ok: bool, what: impl FnOnce() -> String) -> OResult<()> {
        if ok {
            Ok(())
        } else {
            Err(OracleError::Precondition(what()))
        }
    }
}

impl FibrationOracle for MaterializedOracle {
    type BObj = Ob;
    type BMor = Mo;
    type TObj = Ob;
    type TMor = Mo;

    fn label(&self) -> String {
        format!("{} over {}", self.fib.total.name(), self.fib.base.name())
    }
    fn zero_cells(&self) -> Vec<Ob> {
        self.zero.clone()
    }
    fn b_hom(&self, a: &Ob, b: &Ob) -> OResult<Vec<Mo>> {
        Ok(self.fib.base.hom(*a, *b).to_vec())
    }
    fn b_src(&self, f: &Mo) -> Ob {
        self.fib.base.src(*f)
    }
    fn b_tgt(&self, f: &Mo) -> Ob {
        self.fib.base.tgt(*f)
    }
    fn b_id(&self, a: &Ob) -> Mo {
        self.fib.base.id(*a)
    }
    fn b_comp(&self, g: &Mo, f: &Mo) -> OResult<Mo> {
        self.fib
            .base
            .try_compose(*g, *f)
            .ok_or_else(|| OracleError::Precondition("base morphisms not composable".into()))
    }
    fn b_terminal(&self) -> Ob {
        self.wq.base.terminal
    }
    fn b_to_terminal(&self, a: &Ob) -> OResult<Mo> {
        Ok(self.wq.base.to_terminal(&self.fib.base, *a))
    }
    fn b_product(&self, a: &Ob, b: &Ob) -> OResult<BProduct<Ob, Mo>> {
        let d = self.wq.base.product(*a, *b);
        Ok(BProduct {
            vertex: d.vertex,
            proj1: d.proj1,
            proj2: d.proj2,
        })
    }
    fn b_pair(&self, f: &Mo, g: &Mo) -> OResult<Mo> {
        let c = &*self.fib.base;
        self.pre(c.src(*f) == c.src(*g), || {
            "pairing needs a common source".into()
        })?;
        Ok(self.wq.base.pair(c, *f, *g))
    }

    fn t_src(&self, m: &Mo) -> Ob {
        self.fib.total.src(*m)
    }
    fn t_tgt(&self, m: &Mo) -> Ob {
        self.fib.total.tgt(*m)
    }
    fn t_over(&self, p: &Ob) -> Ob {
        self.fib.over(*p)
    }
    fn t_base(&self, m: &Mo) -> Mo {
        self.fib.lies_over(*m)
    }
    fn t_id(&self, p: &Ob) -> OResult<Mo> {
        Ok(self.fib.total.id(*p))
    }
    fn t_comp(&self, q: &Mo, p: &Mo) -> OResult<Mo> {
        self.fib
            .total
            .try_compose(*q, *p)
            .ok_or_else(|| OracleError::Precondition("total morphisms not composable".into()))
    }

    fn top(&self, a: &Ob) -> OResult<Ob> {
        Ok(self.wq.wedge.top(*a))
    }
    fn ex(&self, p: &Ob, g: &Mo) -> OResult<Mo> {
        self.pre(self.fib.over(*p) == self.fib.base.src(*g), || {
            "ex: object not over the source".into()
        })?;
        Ok(self.wq.wedge.ex(&self.fib, *p, *g)?)
    }
    fn meet(&self, p: &Ob, q: &Ob) -> OResult<Meet<Ob, Mo>> {
        self.pre(self.fib.over(*p) == self.fib.over(*q), || {
            "meet: objects in different fibers".into()
        })?;
        let d = self.wq.wedge.meet(*p, *q);
        Ok(Meet {
            vertex: d.vertex,
            proj1: d.proj1,
            proj2: d.proj2,
        })
    }
    fn pair_over(&self, q: &Mo, r: &Mo) -> OResult<Mo> {
        Ok(self.wq.wedge.pair_over(&self.fib, *q, *r)?)
    }
    fn crt(&self, f: &Mo, q: &Ob) -> OResult<Mo> {
        self.pre(self.fib.over(*q) == self.fib.base.tgt(*f), || {
            "crt: object not over the codomain".into()
        })?;
        Ok(self.wq.wedge.cleavage.crt(*f, *q))
    }
    fn cind(&self, p: &Mo, f: &Mo, g: &Mo) -> OResult<Mo> {
        Ok(cind(&self.fib, &self.wq.wedge.cleavage, *p, *f, *g)?)
    }
    fn eq(&self, b: &Ob) -> OResult<(Ob, Mo)> {
        Ok(self.wq.eq(*b))
    }
    fn cofactor(&self, q: &Mo, r: &Mo, g: &Mo) -> OResult<Mo> {
        Ok(cofactor(&self.fib, *q, *r, *g)?)
    }
    fn hom_over(&self, p: &Ob, q: &Ob, f: &Mo) -> OResult<Vec<Mo>> {
        Ok(self.fib.hom_over(*p, *q, *f).to_vec())
    }
    fn is_cocartesian(&self, m: &Mo) -> Option<bool> {
        Some(self.fib.is_cocartesian(*m))
    }
    fn fiber_sample(&self, a: &Ob) -> OResult<Vec<Ob>> {
        Ok(self.fib.objects_over(*a).to_vec())
    }

    fn show_bobj(&self, a: &Ob) -> String {
        self.fib.base.obj_name(*a).into()
    }
    fn show_bmor(&self, f: &Mo) -> String {
        self.fib.base.mor_name(*f).into()
    }
    fn show_tobj(&self, p: &Ob) -> String {
        self.fib.total.obj_name(*p).into()
    }
    fn show_tmor(&self, m: &Mo) -> String {
        self.fib.total.mor_name(*m).into()
    }
}
