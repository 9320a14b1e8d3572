//! Smallness: explicit modules, intensional free modules, and `λ_I^M`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::abgroup::{analyze_epimorphism, subgroup_window, FgAbGroup, GroupElement, GroupHom, GroupOrder};
use crate::coarsen::CoarseningContext;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{direct_sum, hom_space, GradedModule, GradedRing};
use crate::linalg::{self, Matrix};

/// How the generators of an intensional free module are indexed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexScheme {
    /// One generator per listed element (repetitions allowed).
    FiniteDegrees(Vec<GroupElement>),
    /// One generator `e_k` per element `k` of the subgroup with these generators.
    SubgroupIndexed { generators: Vec<GroupElement> },
}

/// `⊕_k R(-d(k))` over an index set `K`, with `d` a group homomorphism from
/// the ambient group of `K` to the grading group. The generator `e_k` has
/// degree `d(k)`. Freshly built modules have `d = id`; coarsening composes
/// `d` with `ψ`.
#[derive(Clone, Debug)]
pub struct IntensionalFreeModule<F: Field> {
    ring: Arc<GradedRing<F>>,
    index: IndexScheme,
    degree_map: GroupHom,
    /// The index subgroup and its embedding, for subgroup-indexed modules.
    subgroup: Option<(FgAbGroup, GroupHom)>,
}

impl<F: Field> IntensionalFreeModule<F> {
    pub fn finite_degrees(ring: Arc<GradedRing<F>>, degrees: Vec<GroupElement>) -> Result<Self> {
        for d in &degrees {
            ring.group().check(d)?;
        }
        let degree_map = GroupHom::identity(ring.group());
        Ok(Self { ring, index: IndexScheme::FiniteDegrees(degrees), degree_map, subgroup: None })
    }

    /// `⊕_{g ∈ K} R(-g)` for the subgroup `K` generated by `generators`.
    pub fn subgroup_indexed(ring: Arc<GradedRing<F>>, generators: Vec<GroupElement>) -> Result<Self> {
        let subgroup = ring.group().subgroup(&generators)?;
        let degree_map = GroupHom::identity(ring.group());
        Ok(Self { ring, index: IndexScheme::SubgroupIndexed { generators }, degree_map, subgroup: Some(subgroup) })
    }

    pub fn ring(&self) -> &Arc<GradedRing<F>> {
        &self.ring
    }

    pub fn index(&self) -> &IndexScheme {
        &self.index
    }

    /// The group the index elements live in.
    pub fn index_group(&self) -> &FgAbGroup {
        self.degree_map.domain()
    }

    pub fn degree_map(&self) -> &GroupHom {
        &self.degree_map
    }

    /// The abstract index subgroup and its embedding, if subgroup-indexed.
    pub fn index_subgroup(&self) -> Option<&(FgAbGroup, GroupHom)> {
        self.subgroup.as_ref()
    }

    pub fn degree(&self, k: &GroupElement) -> GroupElement {
        self.degree_map.apply(k)
    }

    pub fn index_order(&self) -> GroupOrder {
        match (&self.index, &self.subgroup) {
            (IndexScheme::FiniteDegrees(d), _) => GroupOrder::Finite(d.len() as u64),
            (_, Some((k, _))) => k.order(),
            _ => unreachable!("subgroup-indexed modules carry their subgroup"),
        }
    }

    pub fn contains_index(&self, k: &GroupElement) -> bool {
        match (&self.index, &self.subgroup) {
            (IndexScheme::FiniteDegrees(d), _) => d.contains(k),
            (_, Some((_, emb))) => self.index_group().contains(k) && emb.preimage(k).is_some(),
            _ => false,
        }
    }

    /// All index elements, when there are finitely many.
    pub fn index_elements(&self) -> Option<Vec<GroupElement>> {
        match (&self.index, &self.subgroup) {
            (IndexScheme::FiniteDegrees(d), _) => Some(d.clone()),
            (_, Some((k, emb))) => k.is_finite().then(|| subgroup_window(emb, 0)),
            _ => None,
        }
    }

    /// Index elements with free coefficients bounded by `radius`.
    pub fn index_window(&self, radius: i64) -> Vec<GroupElement> {
        match (&self.index, &self.subgroup) {
            (IndexScheme::FiniteDegrees(d), _) => d.clone(),
            (_, Some((_, emb))) => subgroup_window(emb, radius),
            _ => Vec::new(),
        }
    }

    /// Finitely generated: finitely many generators, or the zero ring.
    pub fn is_finite_type(&self) -> bool {
        self.index_order().is_finite() || self.ring.is_zero_ring()
    }

    /// The explicit module `⊕ R(-d(k))`, when the index is finite.
    pub fn materialize(&self) -> Option<Arc<GradedModule<F>>> {
        let parts: Vec<_> = self
            .index_elements()?
            .iter()
            .map(|k| Arc::new(GradedModule::free_cyclic(self.ring.clone(), &self.degree(k))))
            .collect();
        Some(direct_sum(&self.ring, &parts).expect("summands share the ring").module)
    }

    /// `(⊕_k R(-d(k)))_[ψ] = ⊕_k R_[ψ](-ψ(d(k)))`.
    pub fn coarsen(&self, ctx: &CoarseningContext) -> Result<Self> {
        self.coarsen_over(ctx, Arc::new(ctx.coarsen_ring(&self.ring)?))
    }

    pub fn coarsen_over(&self, ctx: &CoarseningContext, ring: Arc<GradedRing<F>>) -> Result<Self> {
        if *ring != ctx.coarsen_ring(&self.ring)? {
            return Err(Error::RingMismatch("supplied ring is not the coarsening of the module's ring".into()));
        }
        let degree_map = self.degree_map.then(ctx.psi())?;
        Ok(Self { ring, index: self.index.clone(), degree_map, subgroup: self.subgroup.clone() })
    }
}

/// A module in a class whose smallness can be decided.
#[derive(Clone, Debug)]
pub enum ModuleClass<F: Field> {
    Explicit(Arc<GradedModule<F>>),
    Intensional(IntensionalFreeModule<F>),
}

impl<F: Field> ModuleClass<F> {
    pub fn ring(&self) -> &Arc<GradedRing<F>> {
        match self {
            ModuleClass::Explicit(m) => m.ring(),
            ModuleClass::Intensional(m) => m.ring(),
        }
    }

    pub fn coarsen(&self, ctx: &CoarseningContext) -> Result<Self> {
        Ok(match self {
            ModuleClass::Explicit(m) => ModuleClass::Explicit(Arc::new(ctx.coarsen_module(m)?)),
            ModuleClass::Intensional(m) => ModuleClass::Intensional(m.coarsen(ctx)?),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SmallReason {
    /// A finite homogeneous basis generates the module.
    ExplicitBasis,
    /// Finitely many free generators.
    FiniteIndex,
    /// The ring is zero, so the module is zero.
    ZeroRing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallCertificate {
    pub reason: SmallReason,
    /// Size of the finite generating set.
    pub generators: usize,
}

/// The projection of the identity of `⊕_k R(-d(k))` onto summand `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandProjection {
    pub index: GroupElement,
    pub degree: GroupElement,
    pub projection_nonzero: bool,
}

/// The identity `M -> ⊕_k R(-d(k))` projects nonzero onto every summand, so
/// it is not a finite sum of morphisms into single summands: `λ` misses it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotSmallWitness {
    pub index_generators: Vec<GroupElement>,
    pub index_rank: usize,
    pub window_radius: i64,
    pub entries: Vec<SummandProjection>,
}

impl NotSmallWitness {
    pub const RADIUS: i64 = 3;

    fn build<F: Field>(m: &IntensionalFreeModule<F>) -> Self {
        let (k, emb) = m.index_subgroup().expect("infinite index is subgroup-indexed");
        let nonzero = !m.ring().is_zero_ring();
        let entries = m
            .index_window(Self::RADIUS)
            .into_iter()
            .map(|i| SummandProjection { degree: m.degree(&i), index: i, projection_nonzero: nonzero })
            .collect();
        NotSmallWitness {
            index_generators: (0..k.ngens()).map(|i| emb.apply(&k.generator(i))).collect(),
            index_rank: k.rank(),
            window_radius: Self::RADIUS,
            entries,
        }
    }

    /// Recomputes each projection: `e_k` maps to `1·e_k`, nonzero iff `1 ≠ 0` in `R`.
    pub fn verify<F: Field>(&self, m: &IntensionalFreeModule<F>) -> bool {
        let Some((k, _)) = m.index_subgroup() else { return false };
        if k.is_finite() || k.rank() != self.index_rank || self.index_rank == 0 {
            return false;
        }
        let window = m.index_window(self.window_radius);
        if window.len() != self.entries.len() {
            return false;
        }
        window.iter().zip(&self.entries).all(|(i, e)| {
            let summand = GradedModule::free_cyclic(m.ring().clone(), &m.degree(i));
            let one = summand.embed_component(&m.degree(i), &summand.restrict_component(&m.degree(i), m.ring().one()));
            let nonzero = !summand.is_zero_vector(&one);
            e.index == *i && e.degree == m.degree(i) && e.projection_nonzero == nonzero && nonzero && m.contains_index(i)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "evidence")]
pub enum SmallnessVerdict {
    Small(SmallCertificate),
    NotSmall(NotSmallWitness),
    Unknown(String),
}

impl SmallnessVerdict {
    pub fn is_small(&self) -> bool {
        matches!(self, SmallnessVerdict::Small(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SmallnessVerdict::Small(_) => "small",
            SmallnessVerdict::NotSmall(_) => "not_small",
            SmallnessVerdict::Unknown(_) => "unknown",
        }
    }
}

pub fn smallness_report<F: Field>(m: &ModuleClass<F>) -> SmallnessVerdict {
    match m {
        ModuleClass::Explicit(m) => {
            SmallnessVerdict::Small(SmallCertificate { reason: SmallReason::ExplicitBasis, generators: m.dim() })
        }
        ModuleClass::Intensional(m) => {
            if m.ring().is_zero_ring() {
                return SmallnessVerdict::Small(SmallCertificate { reason: SmallReason::ZeroRing, generators: 0 });
            }
            match m.index_order() {
                GroupOrder::Finite(n) => {
                    SmallnessVerdict::Small(SmallCertificate { reason: SmallReason::FiniteIndex, generators: n as usize })
                }
                GroupOrder::Infinite => SmallnessVerdict::NotSmall(NotSmallWitness::build(m)),
            }
        }
    }
}

/// Re-checks the evidence attached to a verdict.
fn verify_verdict<F: Field>(m: &ModuleClass<F>, v: &SmallnessVerdict) -> bool {
    match (m, v) {
        (ModuleClass::Explicit(m), SmallnessVerdict::Small(c)) => {
            c.reason == SmallReason::ExplicitBasis && c.generators == m.dim()
        }
        (ModuleClass::Intensional(m), SmallnessVerdict::Small(c)) => match c.reason {
            SmallReason::ZeroRing => m.ring().is_zero_ring(),
            SmallReason::FiniteIndex => {
                m.index_order() == GroupOrder::Finite(c.generators as u64)
                    && m.materialize().is_some_and(|x| x.dim() == c.generators * m.ring().dim())
            }
            SmallReason::ExplicitBasis => false,
        },
        (ModuleClass::Intensional(m), SmallnessVerdict::NotSmall(w)) => w.verify(m),
        _ => false,
    }
}

/// Whether `M` is `⊕_{g ∈ ker ψ} N(g)`-small and `M_[ψ]` is `N_[ψ]`-small.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeSmallness {
    pub fine: bool,
    pub coarse: bool,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub original: SmallnessVerdict,
    pub coarsened: SmallnessVerdict,
    pub witnesses_verified: bool,
    pub consistent: bool,
    pub relative: Option<RelativeSmallness>,
}

/// A free module `⊕_k R(-d(k))` over a nonzero ring is `L`-small for
/// `L = ⊕_i L_i` iff only finitely many `k` have `L_{d(k)} ≠ 0`: a morphism
/// from a free module may send each generator anywhere in the right degree.
/// Here `L_{d} ≠ 0` iff `φ(d) ∈ targets` for a homomorphism `φ`.
fn free_relatively_small<F: Field>(
    m: &IntensionalFreeModule<F>,
    phi: &GroupHom,
    targets: &BTreeSet<GroupElement>,
) -> Result<bool> {
    if m.ring().is_zero_ring() || targets.is_empty() {
        return Ok(true);
    }
    if m.index_order().is_finite() {
        return Ok(true);
    }
    let (_, emb) = m.index_subgroup().expect("infinite index is subgroup-indexed");
    let on_index = emb.then(m.degree_map())?.then(phi)?;
    let kernel = analyze_epimorphism(&on_index)?.kernel;
    if kernel.is_finite() {
        return Ok(true);
    }
    Ok(!targets.iter().any(|t| on_index.preimage(t).is_some()))
}

fn relative_smallness<F: Field>(
    m: &ModuleClass<F>,
    coarse: &ModuleClass<F>,
    ctx: &CoarseningContext,
    n: &GradedModule<F>,
) -> Result<RelativeSmallness> {
    let (fine, coarse_small) = match (m, coarse) {
        (ModuleClass::Explicit(_), _) => (true, true),
        (ModuleClass::Intensional(fm), ModuleClass::Intensional(cm)) => {
            // (⊕_{g ∈ ker ψ} N(g))_d ≠ 0 iff ψ(d) ∈ ψ(supp N)
            let image: BTreeSet<GroupElement> = n.support().iter().map(|d| ctx.apply(d)).collect();
            let fine = free_relatively_small(fm, ctx.psi(), &image)?;
            let coarse_n = ctx.coarsen_module(n)?;
            let support: BTreeSet<GroupElement> = coarse_n.support().into_iter().collect();
            let coarse_small =
                free_relatively_small(cm, &GroupHom::identity(ctx.codomain()), &support)?;
            (fine, coarse_small)
        }
        _ => return Err(Error::UnsupportedClass("coarsening changed the module class".into())),
    };
    Ok(RelativeSmallness { fine, coarse: coarse_small, agree: fine == coarse_small })
}

pub fn smallness_coarsening_transfer<F: Field>(
    m: &ModuleClass<F>,
    ctx: &CoarseningContext,
    n: Option<&GradedModule<F>>,
) -> Result<TransferReport> {
    let coarse = m.coarsen(ctx)?;
    let original = smallness_report(m);
    let coarsened = smallness_report(&coarse);
    if let (SmallnessVerdict::Unknown(_), _) | (_, SmallnessVerdict::Unknown(_)) = (&original, &coarsened) {
        return Err(Error::UnsupportedClass("smallness is undecided for this module".into()));
    }
    let witnesses_verified = verify_verdict(m, &original) && verify_verdict(&coarse, &coarsened);
    let consistent = original.kind() == coarsened.kind();
    let relative = match n {
        Some(n) => {
            if !Arc::ptr_eq(n.ring(), m.ring()) && n.ring() != m.ring() {
                return Err(Error::RingMismatch("N is over a different ring".into()));
            }
            Some(relative_smallness(m, &coarse, ctx, n)?)
        }
        None => None,
    };
    Ok(TransferReport { original, coarsened, witnesses_verified, consistent, relative })
}

/// The families `λ_I^M` is evaluated on.
#[derive(Clone, Debug)]
pub enum LambdaFamily<F: Field> {
    Finite(Vec<Arc<GradedModule<F>>>),
    /// `(R(-g))_{g ∈ K}` for the subgroup `K` with these generators.
    Shifts { ring: Arc<GradedRing<F>>, generators: Vec<GroupElement> },
}

/// Every morphism `M -> ⊕_{g ∈ K} R(-g)` lands in the summands indexed by
/// `support_bound`, because `(R(-g))_d = R_{d-g}` vanishes unless
/// `d - g ∈ supp R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportCertificate {
    pub support_bound: Vec<GroupElement>,
    /// Indices outside the bound that were checked to admit no morphism.
    pub checked_beyond: Vec<GroupElement>,
    pub bound_hom_dim: usize,
}

impl SupportCertificate {
    pub fn verify<F: Field>(&self, m: &Arc<GradedModule<F>>, ring: &Arc<GradedRing<F>>) -> Result<bool> {
        let bound = shifts_sum(ring, &self.support_bound)?;
        let bound_dim = hom_space(m, &bound)?.dim();
        let mut wider = self.support_bound.clone();
        wider.extend(self.checked_beyond.iter().cloned());
        let wider_dim = hom_space(m, &shifts_sum(ring, &wider)?)?.dim();
        let outside_zero = self
            .checked_beyond
            .iter()
            .map(|g| hom_space(m, &Arc::new(GradedModule::free_cyclic(ring.clone(), g))).map(|h| h.dim() == 0))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .all(|z| z);
        Ok(bound_dim == self.bound_hom_dim && wider_dim == bound_dim && outside_zero)
    }
}

fn shifts_sum<F: Field>(ring: &Arc<GradedRing<F>>, degrees: &[GroupElement]) -> Result<Arc<GradedModule<F>>> {
    let parts: Vec<_> = degrees.iter().map(|g| Arc::new(GradedModule::free_cyclic(ring.clone(), g))).collect();
    Ok(direct_sum(ring, &parts)?.module)
}

#[derive(Clone, Debug)]
pub struct LambdaReport<F: Field> {
    /// Columns: coordinates of `ι_i ∘ u` for the basis morphisms `u` of each `Hom(M, N_i)`.
    pub matrix: Option<Matrix<F::Elem>>,
    pub source_dim: usize,
    pub target_dim: usize,
    pub mono: bool,
    pub iso: bool,
    pub certificate: Option<SupportCertificate>,
}

pub fn lambda_morphism<F: Field>(m: &Arc<GradedModule<F>>, family: &LambdaFamily<F>) -> Result<LambdaReport<F>> {
    match family {
        LambdaFamily::Finite(modules) => finite_lambda(m, modules),
        LambdaFamily::Shifts { ring, generators } => {
            if !Arc::ptr_eq(ring, m.ring()) && ring != m.ring() {
                return Err(Error::RingMismatch("family is over a different ring".into()));
            }
            let group = ring.group();
            let (_, emb) = group.subgroup(generators)?;
            let in_k = |g: &GroupElement| emb.preimage(g).is_some();
            let mut bound = BTreeSet::new();
            for d in m.components().keys() {
                for s in ring.support() {
                    let g = group.sub(d, &s);
                    if in_k(&g) {
                        bound.insert(g);
                    }
                }
            }
            let bound: Vec<GroupElement> = bound.into_iter().collect();
            let steps = subgroup_window(&emb, 1);
            let mut beyond = BTreeSet::new();
            for base in bound.iter().cloned().chain(std::iter::once(group.zero())) {
                for s in &steps {
                    let g = group.add(&base, s);
                    if !bound.contains(&g) {
                        beyond.insert(g);
                    }
                }
            }
            let summands: Vec<_> = bound.iter().map(|g| Arc::new(GradedModule::free_cyclic(ring.clone(), g))).collect();
            let inner = finite_lambda(m, &summands)?;
            let certificate = SupportCertificate {
                support_bound: bound,
                checked_beyond: beyond.into_iter().collect(),
                bound_hom_dim: inner.target_dim,
            };
            if !certificate.verify(m, ring)? {
                return Err(Error::Soundness("support certificate failed to re-verify".into()));
            }
            Ok(LambdaReport { certificate: Some(certificate), ..inner })
        }
    }
}

fn finite_lambda<F: Field>(m: &Arc<GradedModule<F>>, modules: &[Arc<GradedModule<F>>]) -> Result<LambdaReport<F>> {
    let f = m.field();
    let sum = direct_sum(m.ring(), modules)?;
    let target = hom_space(m, &sum.module)?;
    let mut columns = Vec::new();
    for (n, iota) in modules.iter().zip(&sum.injections) {
        for u in hom_space(m, n)?.basis {
            let v = u.then(iota)?;
            let c = target.coordinates(&v).ok_or_else(|| Error::Soundness("ι ∘ u is not a morphism".into()))?;
            columns.push(c);
        }
    }
    let matrix = Matrix::columns_matrix(f, &columns, target.dim());
    let rank = linalg::rank(f, &matrix);
    let mono = rank == columns.len();
    let iso = mono && rank == target.dim();
    if !iso {
        return Err(Error::Soundness("λ is not an isomorphism on a finite family".into()));
    }
    Ok(LambdaReport { source_dim: columns.len(), target_dim: target.dim(), matrix: Some(matrix), mono, iso, certificate: None })
}
