//! Homotopies between base morphisms of a ∧=-fibration and the operations
//! that make them the 2-cells of a 2-category.
//!
//! Every structural morphism (transitivity, symmetry, `β̌`, `nat`) is obtained
//! from the oracle's cofactor, never by searching hom-sets, so the same code
//! runs on materialized and lazily generated instances.

mod memo;
pub mod products;
pub mod psf;
pub mod transport;
pub mod twocat;

use crate::oracle::{BaseOps, FibrationOracle, OResult, OracleError};

pub use memo::Memo;
pub use products::{check_two_products, ProductsReport};
pub use psf::{assemble_pseudofunctor, verify_psf, PseudoFunctorData, PsfReport, PsfScope};
pub use transport::{cleavage_transport, TransportReport};
pub use twocat::{
    synthesize, verify_axioms, AxiomReport, HomCategory, LawCheck, SynthError,
    SynthesizedTwoCategory,
};

/// A homotopy `src ⇒ tgt`: a morphism `⊤_A → Eq_B` over `⟨src, tgt⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoCell<B, T> {
    pub src: B,
    pub tgt: B,
    pub body: T,
}

pub type Cell<O> = TwoCell<<O as FibrationOracle>::BMor, <O as FibrationOracle>::TMor>;

/// `Eq_B^{ij}` on `B^n`: the object, its cartesian map to `Eq_B` over
/// `⟨π_i, π_j⟩`, and `ρ^{ij}: ⊤_B → Eq^{ij}` over `Δ^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqIJ<T, M> {
    pub obj: T,
    pub crt: M,
    pub rho: M,
}

type EqKey<B> = (B, usize, usize, usize);
type TrKey<B> = (B, usize, usize, usize, usize);

/// Synthesis context over one oracle, with write-once caches.
pub struct Htpy<'o, O: FibrationOracle> {
    pub oracle: &'o O,
    eqij: Memo<EqKey<O::BObj>, EqIJ<O::TObj, O::TMor>>,
    tr: Memo<TrKey<O::BObj>, O::TMor>,
    sym: Memo<O::BObj, O::TMor>,
    check: Memo<O::TMor, O::TMor>,
    nat: Memo<(O::BObj, O::TObj), O::TMor>,
}

fn contract<T>(what: &str, r: OResult<T>) -> OResult<T> {
    r.map_err(|e| match e {
        OracleError::Fib(f) => OracleError::Contract(format!("{what}: {f}")),
        other => other,
    })
}

impl<'o, O: FibrationOracle> Htpy<'o, O> {
    pub fn new(oracle: &'o O) -> Self {
        Self::with_memo(oracle, true)
    }

    /// With `memo = false` nothing is cached; results must not change.
    pub fn with_memo(oracle: &'o O, memo: bool) -> Self {
        Htpy {
            oracle,
            eqij: Memo::new(memo),
            tr: Memo::new(memo),
            sym: Memo::new(memo),
            check: Memo::new(memo),
            nat: Memo::new(memo),
        }
    }

    /// Require an asserted cocartesian morphism to be one, when decidable.
    fn ensure_cocartesian(&self, m: &O::TMor, what: &str) -> OResult<()> {
        match self.oracle.is_cocartesian(m) {
            Some(false) => Err(OracleError::contract(format!("{what} is not cocartesian"))),
            _ => Ok(()),
        }
    }

    pub fn enumerate_two_cells(&self, f: &O::BMor, g: &O::BMor) -> OResult<Vec<Cell<O>>> {
        let o = self.oracle;
        let (a, b) = (o.b_src(f), o.b_tgt(f));
        if o.b_src(g) != a || o.b_tgt(g) != b {
            return Err(OracleError::Precondition(format!(
                "not parallel: {} and {}",
                o.show_bmor(f),
                o.show_bmor(g)
            )));
        }
        let top = o.top(&a)?;
        let (eq, _) = o.eq(&b)?;
        let over = o.b_pair(f, g)?;
        Ok(o.hom_over(&top, &eq, &over)?
            .into_iter()
            .map(|body| TwoCell {
                src: f.clone(),
                tgt: g.clone(),
                body,
            })
            .collect())
    }

    pub fn eq_ij(
        &self,
        b: &O::BObj,
        n: usize,
        i: usize,
        j: usize,
    ) -> OResult<EqIJ<O::TObj, O::TMor>> {
        self.eqij.get_or((b.clone(), n, i, j), || {
            let o = self.oracle;
            let pij = o.b_pair(&o.b_proj(b, n, i)?, &o.b_proj(b, n, j)?)?;
            let (eq, rho) = o.eq(b)?;
            let crt = o.crt(&pij, &eq)?;
            let rho_ij = contract("ρ^ij", o.cind(&rho, &o.b_diagonal_n(b, n)?, &pij))?;
            Ok(EqIJ {
                obj: o.t_src(&crt),
                crt,
                rho: rho_ij,
            })
        })
    }

    /// `⟨α⟩: ⊤_A → Eq^{ij}` over the tuple `t: A → B^n`, for `α` over `⟨π_i t, π_j t⟩`.
    pub fn cind_ij(
        &self,
        alpha: &O::TMor,
        t: &O::BMor,
        b: &O::BObj,
        n: usize,
        i: usize,
        j: usize,
    ) -> OResult<O::TMor> {
        let o = self.oracle;
        let pij = o.b_pair(&o.b_proj(b, n, i)?, &o.b_proj(b, n, j)?)?;
        contract("cind into Eq^ij", o.cind(alpha, t, &pij))
    }

    /// `tr^{ijk}: Eq^{ij} ∧ Eq^{jk} → Eq^{ik}` over `id_{B^n}`.
    pub fn tr(&self, b: &O::BObj, n: usize, i: usize, j: usize, k: usize) -> OResult<O::TMor> {
        self.tr.get_or((b.clone(), n, i, j, k), || {
            let o = self.oracle;
            let (eij, ejk, eik) = (
                self.eq_ij(b, n, i, j)?,
                self.eq_ij(b, n, j, k)?,
                self.eq_ij(b, n, i, k)?,
            );
            let q = contract("⟨⟨ρ^ij, ρ^jk⟩⟩", o.pair_over(&eij.rho, &ejk.rho))?;
            self.ensure_cocartesian(&q, "⟨⟨ρ^ij, ρ^jk⟩⟩")?;
            let id = o.b_id(&o.b_power(b, n)?);
            contract("tr", o.cofactor(&q, &eik.rho, &id))
        })
    }

    /// `sym_B: Eq_B → Eq_B` over the swap `⟨π₂, π₁⟩`.
    pub fn sym(&self, b: &O::BObj) -> OResult<O::TMor> {
        self.sym.get_or(b.clone(), || {
            let o = self.oracle;
            let (_, rho) = o.eq(b)?;
            contract("sym", o.cofactor(&rho, &rho, &o.b_swap(b)?))
        })
    }

    /// `β·α` for `α: f ⇒ g`, `β: g ⇒ h`.
    pub fn vcomp(&self, beta: &Cell<O>, alpha: &Cell<O>) -> OResult<Cell<O>> {
        let o = self.oracle;
        if alpha.tgt != beta.src {
            return Err(OracleError::Precondition(
                "vertical composite of non-composable homotopies".into(),
            ));
        }
        let b = o.b_tgt(&alpha.src);
        let t = o.b_tuple(&[alpha.src.clone(), alpha.tgt.clone(), beta.tgt.clone()])?;
        let ca = self.cind_ij(&alpha.body, &t, &b, 3, 1, 2)?;
        let cb = self.cind_ij(&beta.body, &t, &b, 3, 2, 3)?;
        let paired = contract("⟨⟨⟨α⟩, ⟨β⟩⟩⟩", o.pair_over(&ca, &cb))?;
        let m = o.t_comp(&self.tr(&b, 3, 1, 2, 3)?, &paired)?;
        let body = o.t_comp(&self.eq_ij(&b, 3, 1, 3)?.crt, &m)?;
        Ok(TwoCell {
            src: alpha.src.clone(),
            tgt: beta.tgt.clone(),
            body,
        })
    }

    /// `hid_f = ρ_B ∘ ex_f`.
    pub fn hid(&self, f: &O::BMor) -> OResult<Cell<O>> {
        let o = self.oracle;
        let (a, b) = (o.b_src(f), o.b_tgt(f));
        let (_, rho) = o.eq(&b)?;
        let body = o.t_comp(&rho, &o.ex(&o.top(&a)?, f)?)?;
        Ok(TwoCell {
            src: f.clone(),
            tgt: f.clone(),
            body,
        })
    }

    pub fn invert(&self, alpha: &Cell<O>) -> OResult<Cell<O>> {
        let o = self.oracle;
        let b = o.b_tgt(&alpha.src);
        let body = o.t_comp(&self.sym(&b)?, &alpha.body)?;
        Ok(TwoCell {
            src: alpha.tgt.clone(),
            tgt: alpha.src.clone(),
            body,
        })
    }

    /// `β̌: Eq_B → Eq_C` over `h × k` for `β: h ⇒ k`.
    pub fn beta_check(&self, beta: &Cell<O>) -> OResult<O::TMor> {
        self.check.get_or(beta.body.clone(), || {
            let o = self.oracle;
            let (_, rho) = o.eq(&o.b_src(&beta.src))?;
            contract(
                "β̌",
                o.cofactor(&rho, &beta.body, &o.b_times(&beta.src, &beta.tgt)?),
            )
        })
    }

    /// `β ∘ α = β̌ ∘ α: hf ⇒ kg`.
    pub fn hcomp(&self, beta: &Cell<O>, alpha: &Cell<O>) -> OResult<Cell<O>> {
        let o = self.oracle;
        if o.b_tgt(&alpha.src) != o.b_src(&beta.src) {
            return Err(OracleError::Precondition(
                "horizontal composite of non-composable homotopies".into(),
            ));
        }
        let body = o.t_comp(&self.beta_check(beta)?, &alpha.body)?;
        Ok(TwoCell {
            src: o.b_comp(&beta.src, &alpha.src)?,
            tgt: o.b_comp(&beta.tgt, &alpha.tgt)?,
            body,
        })
    }

    /// `nat^B_P: π₁*P ∧ Eq_B → π₂*P` over `id_{B×B}`.
    pub fn nat(&self, b: &O::BObj, p: &O::TObj) -> OResult<O::TMor> {
        self.nat.get_or((b.clone(), p.clone()), || {
            let o = self.oracle;
            let pr = o.b_product(b, b)?;
            let delta = o.b_diagonal(b)?;
            let idp = o.t_id(p)?;
            let c1 = contract("⟨id_P⟩ into π₁*P", o.cind(&idp, &delta, &pr.proj1))?;
            let c2 = contract("⟨id_P⟩ into π₂*P", o.cind(&idp, &delta, &pr.proj2))?;
            let (_, rho) = o.eq(b)?;
            let e = o.t_comp(&rho, &o.ex(p, &o.b_id(b))?)?;
            let q = contract("⟨⟨⟨id_P⟩, ρ!⟩⟩", o.pair_over(&c1, &e))?;
            self.ensure_cocartesian(&q, "⟨⟨⟨id_P⟩, ρ!⟩⟩")?;
            contract("nat", o.cofactor(&q, &c2, &o.b_id(&pr.vertex)))
        })
    }

    /// `α*_P: f*P → g*P` over `id_A` for `α: f ⇒ g` and `P` over `B`.
    pub fn alpha_star(&self, alpha: &Cell<O>, p: &O::TObj) -> OResult<O::TMor> {
        let o = self.oracle;
        let (f, g) = (&alpha.src, &alpha.tgt);
        let (a, b) = (o.b_src(f), o.b_tgt(f));
        let pr = o.b_product(&b, &b)?;
        let fg = o.b_pair(f, g)?;
        let cf = o.crt(f, p)?;
        let fp = o.t_src(&cf);
        let into_pi1 = contract("⟨crt_f P⟩", o.cind(&cf, &fg, &pr.proj1))?;
        let alpha_bang = o.t_comp(&alpha.body, &o.ex(&fp, &o.b_id(&a))?)?;
        let paired = contract("⟨⟨⟨crt⟩, α!⟩⟩", o.pair_over(&into_pi1, &alpha_bang))?;
        let m = o.t_comp(
            &o.crt(&pr.proj2, p)?,
            &o.t_comp(&self.nat(&b, p)?, &paired)?,
        )?;
        contract("α*", o.cind(&m, &o.b_id(&a), g))
    }

    /// Comparison `f*g*Q → (gf)*Q` for `A -f-> B -g-> C`.
    pub fn comparison(&self, f: &O::BMor, g: &O::BMor, q: &O::TObj) -> OResult<O::TMor> {
        let o = self.oracle;
        let cg = o.crt(g, q)?;
        let cf = o.crt(f, &o.t_src(&cg))?;
        let gf = o.b_comp(g, f)?;
        contract(
            "comparison",
            o.cind(&o.t_comp(&cg, &cf)?, &o.b_id(&o.b_src(f)), &gf),
        )
    }

    /// Unit `id_A* P → P`.
    pub fn unit(&self, p: &O::TObj) -> OResult<O::TMor> {
        let o = self.oracle;
        o.crt(&o.b_id(&o.t_over(p)), p)
    }
}
