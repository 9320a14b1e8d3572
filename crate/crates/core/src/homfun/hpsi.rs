//! The comparison map `h_ψ`, its predicted behaviour, and rule morphisms out
//! of intensional free modules.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::small::{smallness_report, IntensionalFreeModule, ModuleClass, SmallnessVerdict};
use super::{degree_differences, graded_hom, Dim};
use crate::abgroup::{subgroup_window, GroupElement, GroupHom};
use crate::coarsen::CoarseningContext;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{hom_space, GradedModule, GradedMorphism};
use crate::linalg::{self, Matrix};

/// `h_ψ` restricted to one H-degree `h`:
/// `⊕_{g ∈ ψ^{-1}(h)} Hom(M, N(g)) -> Hom(M_[ψ], N_[ψ](h))`.
#[derive(Clone, Debug)]
pub struct HPsiDegree<F: Field> {
    pub h: GroupElement,
    /// The G-degrees over `h` where `GRHom(M, N)` is nonzero.
    pub fiber_degrees: Vec<GroupElement>,
    pub source_dim: Dim,
    pub target_dim: Dim,
    pub cokernel_dim: Dim,
    pub injective: bool,
    /// Columns: coordinates of each `u_[ψ]` in the target basis.
    pub matrix: Option<Matrix<F::Elem>>,
}

#[derive(Clone, Debug)]
pub struct HPsiReport<F: Field> {
    pub degrees: Vec<HPsiDegree<F>>,
    pub mono: bool,
    pub iso: bool,
}

pub fn h_psi<F: Field>(
    m: &Arc<GradedModule<F>>,
    n: &Arc<GradedModule<F>>,
    ctx: &CoarseningContext,
) -> Result<HPsiReport<F>> {
    if !m.same_ring(n) {
        return Err(Error::RingMismatch("h_ψ between modules over different rings".into()));
    }
    let coarse_ring = Arc::new(ctx.coarsen_ring(m.ring())?);
    let grhom = graded_hom(m, n)?;
    let mc = Arc::new(ctx.coarsen_module_over(m, coarse_ring.clone())?);
    let nc = ctx.coarsen_module_over(n, coarse_ring)?;
    // Hom(M_[ψ], N_[ψ](h)) vanishes unless h ∈ ψ(supp N) - ψ(supp M)
    let hs: BTreeSet<GroupElement> = degree_differences(&mc, &nc);
    let f = m.field();
    let degrees = hs
        .into_par_iter()
        .map(|h| {
            let target = hom_space(&mc, &Arc::new(nc.shift(&h)))?;
            let fiber: Vec<GroupElement> = grhom.support().into_iter().filter(|g| ctx.apply(g) == h).collect();
            let mut columns = Vec::new();
            for g in &fiber {
                for u in &grhom.component(g).expect("support").basis {
                    let coarse = GradedMorphism::new(mc.clone(), target.target.clone(), u.matrix().clone())
                        .map_err(|e| Error::Soundness(format!("coarsened morphism has the wrong degree: {e}")))?;
                    let c = target
                        .coordinates(&coarse)
                        .ok_or_else(|| Error::Soundness("coarsened morphism is not a morphism".into()))?;
                    columns.push(c);
                }
            }
            let matrix = Matrix::columns_matrix(f, &columns, target.dim());
            let rank = linalg::rank(f, &matrix);
            Ok(HPsiDegree {
                h,
                fiber_degrees: fiber,
                source_dim: Dim::Finite(columns.len()),
                target_dim: Dim::Finite(target.dim()),
                cokernel_dim: Dim::Finite(target.dim() - rank),
                injective: rank == columns.len(),
                matrix: Some(matrix),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mono = degrees.iter().all(|d| d.injective);
    let iso = mono && degrees.iter().all(|d| d.cokernel_dim == Dim::Finite(0));
    Ok(HPsiReport { degrees, mono, iso })
}

/// Which side of "small or finite kernel" decided the prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Small,
    FiniteKernel,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub iso: bool,
    pub branch: Branch,
    pub smallness: SmallnessVerdict,
}

/// `h_ψ^M` is an isomorphism iff `M` is small or `ker ψ` is finite.
pub fn h_psi_prediction<F: Field>(m: &ModuleClass<F>, ctx: &CoarseningContext) -> Result<Prediction> {
    ctx.coarsen_ring(m.ring())?;
    let smallness = smallness_report(m);
    let (iso, branch) = match (&smallness, ctx.kernel_is_finite()) {
        (SmallnessVerdict::Small(_), _) => (true, Branch::Small),
        (_, true) => (true, Branch::FiniteKernel),
        (SmallnessVerdict::NotSmall(_), false) => (false, Branch::Neither),
        (SmallnessVerdict::Unknown(why), false) => {
            return Err(Error::UnsupportedClass(format!("smallness unknown ({why}) and the kernel is infinite")))
        }
    };
    Ok(Prediction { iso, branch, smallness })
}

/// Where a rule morphism sends generators.
#[derive(Clone, Debug)]
pub enum RuleTarget<F: Field> {
    Explicit(Arc<GradedModule<F>>),
    Intensional(IntensionalFreeModule<F>),
}

/// An element of the target: coordinates in an explicit module, or a finite
/// sum `Σ r_j e_j` in an intensional free module (ring coordinates per index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleValue<F: Field> {
    Vector(Vec<F::Elem>),
    Terms(Vec<(GroupElement, Vec<F::Elem>)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule<F: Field> {
    /// Every generator goes to the same element.
    Constant(RuleValue<F>),
    FinitelyManyExceptions { default: RuleValue<F>, exceptions: Vec<(GroupElement, RuleValue<F>)> },
}

/// An H-degree-zero morphism `M_[ψ] -> N_[ψ]` out of a subgroup-indexed free
/// module, given by the image of each generator.
#[derive(Clone, Debug)]
pub struct UniformRuleMorphism<F: Field> {
    psi: GroupHom,
    source: IntensionalFreeModule<F>,
    target: RuleTarget<F>,
    rule: Rule<F>,
}

impl<F: Field> UniformRuleMorphism<F> {
    /// `source` and `target` are G-graded; the morphism lives on their coarsenings.
    pub fn new(
        ctx: &CoarseningContext,
        source: IntensionalFreeModule<F>,
        target: RuleTarget<F>,
        rule: Rule<F>,
    ) -> Result<Self> {
        let ring = source.ring();
        let target_ring = match &target {
            RuleTarget::Explicit(n) => n.ring(),
            RuleTarget::Intensional(n) => n.ring(),
        };
        if !Arc::ptr_eq(ring, target_ring) && ring != target_ring {
            return Err(Error::RingMismatch("rule source and target are over different rings".into()));
        }
        ctx.coarsen_ring(ring)?;
        if source.index_subgroup().is_none() {
            return Err(Error::MalformedRule("rule morphisms need a subgroup-indexed source".into()));
        }
        let u = Self { psi: ctx.psi().clone(), source, target, rule };
        u.validate(ctx)?;
        Ok(u)
    }

    pub fn source(&self) -> &IntensionalFreeModule<F> {
        &self.source
    }

    pub fn target(&self) -> &RuleTarget<F> {
        &self.target
    }

    pub fn rule(&self) -> &Rule<F> {
        &self.rule
    }

    /// The image of `e_k`.
    pub fn evaluate(&self, k: &GroupElement) -> &RuleValue<F> {
        match &self.rule {
            Rule::Constant(v) => v,
            Rule::FinitelyManyExceptions { default, exceptions } => {
                exceptions.iter().find(|(e, _)| e == k).map_or(default, |(_, v)| v)
            }
        }
    }

    /// G-degrees of the nonzero homogeneous parts of a value.
    pub fn value_degrees(&self, v: &RuleValue<F>) -> Result<BTreeSet<GroupElement>> {
        let ring = self.source.ring();
        let f = ring.field();
        match (&self.target, v) {
            (RuleTarget::Explicit(n), RuleValue::Vector(x)) => {
                if x.len() != n.dim() {
                    return Err(Error::MalformedRule(format!("value has {} coordinates, target has {}", x.len(), n.dim())));
                }
                Ok(n.homogeneous_parts(x).into_keys().collect())
            }
            (RuleTarget::Intensional(n), RuleValue::Terms(terms)) => {
                let mut merged: BTreeMap<GroupElement, Vec<F::Elem>> = BTreeMap::new();
                for (j, r) in terms {
                    if r.len() != ring.dim() {
                        return Err(Error::MalformedRule("ring coefficient has the wrong length".into()));
                    }
                    if !n.contains_index(j) {
                        return Err(Error::MalformedRule(format!("{j} is not an index of the target")));
                    }
                    let slot = merged.entry(j.clone()).or_insert_with(|| vec![f.zero(); ring.dim()]);
                    *slot = linalg::add_vec(f, slot, r);
                }
                let mut out = BTreeSet::new();
                for (j, r) in merged {
                    for (e, idx) in ring.components() {
                        if idx.iter().any(|&i| !f.is_zero(&r[i])) {
                            out.insert(ring.group().add(&e, &n.degree(&j)));
                        }
                    }
                }
                Ok(out)
            }
            _ => Err(Error::MalformedRule("value kind does not match the target".into())),
        }
    }

    /// G-degrees `c` of the components `u_c` that `e_k` contributes to.
    fn contributions(&self, k: &GroupElement) -> Result<BTreeSet<GroupElement>> {
        let group = self.source.ring().group();
        let deg = self.source.degree(k);
        Ok(self.value_degrees(self.evaluate(k))?.into_iter().map(|d| group.sub(&d, &deg)).collect())
    }

    fn check_h_degree(&self, ctx: &CoarseningContext, k: &GroupElement, v: &RuleValue<F>) -> Result<()> {
        let h = ctx.apply(&self.source.degree(k));
        for d in self.value_degrees(v)? {
            if ctx.apply(&d) != h {
                return Err(Error::MalformedRule(format!("e_{k} has H-degree {h} but its image has a part in H-degree {}", ctx.apply(&d))));
            }
        }
        Ok(())
    }

    fn validate(&self, ctx: &CoarseningContext) -> Result<()> {
        let (sub, emb) = self.source.index_subgroup().expect("checked");
        let (default, exceptions): (&RuleValue<F>, &[(GroupElement, RuleValue<F>)]) = match &self.rule {
            Rule::Constant(v) => (v, &[]),
            Rule::FinitelyManyExceptions { default, exceptions } => (default, exceptions),
        };
        let default_degrees = self.value_degrees(default)?;
        if !default_degrees.is_empty() {
            // a constant image has a fixed H-degree, so ψ ∘ d must vanish on the index
            for i in 0..sub.ngens() {
                let k = emb.apply(&sub.generator(i));
                if ctx.apply(&self.source.degree(&k)) != ctx.codomain().zero() {
                    return Err(Error::MalformedRule(format!("generators e_k do not share an H-degree (k = {k})")));
                }
            }
            self.check_h_degree(ctx, &self.source.index_group().zero(), default)?;
        }
        let mut seen = BTreeSet::new();
        for (k, v) in exceptions {
            if !self.source.contains_index(k) {
                return Err(Error::MalformedRule(format!("exception {k} is not an index")));
            }
            if !seen.insert(k.clone()) {
                return Err(Error::MalformedRule(format!("duplicate exception {k}")));
            }
            self.check_h_degree(ctx, k, v)?;
        }
        Ok(())
    }
}

/// Evidence that infinitely many G-components of a rule morphism are nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfiniteSupportWitness {
    pub index_generators: Vec<GroupElement>,
    /// Rank of the subgroup `d(K)` of generator degrees; positive, so the
    /// components `deg(value) - d(k)` run through infinitely many cosets.
    pub degree_image_rank: usize,
    pub default_degrees: Vec<GroupElement>,
    pub window_radius: i64,
    /// `(k, c)`: generator `e_k` contributes to the component of degree `c`.
    pub samples: Vec<(GroupElement, GroupElement)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "support", content = "evidence")]
pub enum ComponentSupportReport {
    Finite(Vec<GroupElement>),
    Infinite(InfiniteSupportWitness),
}

impl ComponentSupportReport {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ComponentSupportReport::Infinite(_))
    }
}

const SAMPLE_RADIUS: i64 = 3;

/// The G-degrees `c` with `u_c ≠ 0`, where `u = Σ_c u_c` and `u_c` sends
/// `e_k` to the part of `u(e_k)` in degree `d(k) + c`.
pub fn component_decomposition<F: Field>(
    u: &UniformRuleMorphism<F>,
    ctx: &CoarseningContext,
) -> Result<ComponentSupportReport> {
    if ctx.psi() != &u.psi {
        return Err(Error::GroupMismatch("rule morphism was built for a different ψ".into()));
    }
    let src = &u.source;
    let group = src.ring().group();
    if let Some(ks) = src.index_elements() {
        let mut out = BTreeSet::new();
        for k in &ks {
            out.extend(u.contributions(k)?);
        }
        return Ok(ComponentSupportReport::Finite(out.into_iter().collect()));
    }
    let (default, exceptions): (&RuleValue<F>, &[(GroupElement, RuleValue<F>)]) = match &u.rule {
        Rule::Constant(v) => (v, &[]),
        Rule::FinitelyManyExceptions { default, exceptions } => (default, exceptions),
    };
    let default_degrees = u.value_degrees(default)?;
    let mut out = BTreeSet::new();
    for (k, _) in exceptions {
        out.extend(u.contributions(k)?);
    }
    if default_degrees.is_empty() {
        return Ok(ComponentSupportReport::Finite(out.into_iter().collect()));
    }
    let (sub, emb) = src.index_subgroup().expect("infinite index is subgroup-indexed");
    let gens: Vec<GroupElement> = (0..sub.ngens()).map(|i| emb.apply(&sub.generator(i))).collect();
    let degree_gens: Vec<GroupElement> = gens.iter().map(|k| src.degree(k)).collect();
    let (image, image_emb) = group.subgroup(&degree_gens)?;
    if image.is_finite() {
        // every degree in d(K) is hit by infinitely many non-exceptional k
        for delta in subgroup_window(&image_emb, 0) {
            for d in &default_degrees {
                out.insert(group.sub(d, &delta));
            }
        }
        return Ok(ComponentSupportReport::Finite(out.into_iter().collect()));
    }
    let d0 = default_degrees.iter().next().expect("nonempty").clone();
    let samples = src
        .index_window(SAMPLE_RADIUS)
        .into_iter()
        .filter(|k| !exceptions.iter().any(|(e, _)| e == k))
        .map(|k| {
            let c = group.sub(&d0, &src.degree(&k));
            (k, c)
        })
        .collect();
    let witness = InfiniteSupportWitness {
        index_generators: gens,
        degree_image_rank: image.rank(),
        default_degrees: default_degrees.into_iter().collect(),
        window_radius: SAMPLE_RADIUS,
        samples,
    };
    if !witness.verify(u)? {
        return Err(Error::Soundness("infinite-support witness failed to re-verify".into()));
    }
    Ok(ComponentSupportReport::Infinite(witness))
}

impl InfiniteSupportWitness {
    /// Re-evaluates the rule on every sample and checks the sampled
    /// components are pairwise distinct.
    pub fn verify<F: Field>(&self, u: &UniformRuleMorphism<F>) -> Result<bool> {
        let src = &u.source;
        let group = src.ring().group();
        if self.degree_image_rank == 0 {
            return Ok(false);
        }
        let degree_gens: Vec<GroupElement> = self.index_generators.iter().map(|k| src.degree(k)).collect();
        if group.subgroup(&degree_gens)?.0.rank() != self.degree_image_rank {
            return Ok(false);
        }
        let mut components = BTreeSet::new();
        for (k, c) in &self.samples {
            if !src.contains_index(k) || !u.contributions(k)?.contains(c) {
                return Ok(false);
            }
            components.insert(c.clone());
        }
        Ok(components.len() == self.samples.len() && self.samples.len() > 1)
    }
}

/// Whether a rule morphism lies in the image of `h_ψ`: the image consists of
/// finite sums of homogeneous G-morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleImageReport {
    pub support: ComponentSupportReport,
    pub in_image: bool,
}

pub fn h_psi_rule<F: Field>(u: &UniformRuleMorphism<F>, ctx: &CoarseningContext) -> Result<RuleImageReport> {
    let support = component_decomposition(u, ctx)?;
    let in_image = !support.is_infinite();
    Ok(RuleImageReport { support, in_image })
}

/// `h_ψ` for one epimorphism in the list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpimorphismCheck {
    pub psi: GroupHom,
    pub kernel_finite: bool,
    pub predicted: bool,
    /// Computed on the probe modules; `None` for intensional `M`.
    pub computed: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoTransferReport {
    pub subgroup_generators: Vec<GroupElement>,
    pub projection: GroupHom,
    pub premise_predicted: bool,
    pub premise_computed: Option<bool>,
    pub premise_holds: bool,
    /// Drawn from the premise: `M` is small.
    pub concluded_small: bool,
    pub checks: Vec<EpimorphismCheck>,
    pub all_iso: bool,
}

fn computed_iso<F: Field>(m: &ModuleClass<F>, ctx: &CoarseningContext, probes: &[Arc<GradedModule<F>>]) -> Result<Option<bool>> {
    let ModuleClass::Explicit(m) = m else { return Ok(None) };
    let mut all = true;
    let defaults = [m.clone(), Arc::new(GradedModule::regular(m.ring().clone()))];
    let probes: &[Arc<GradedModule<F>>] = if probes.is_empty() { &defaults } else { probes };
    for n in probes {
        let r = h_psi(m, n, ctx)?;
        if !r.mono {
            return Err(Error::Soundness("h_ψ is not injective".into()));
        }
        all &= r.iso;
    }
    Ok(Some(all))
}

/// If `h_π^M` is an isomorphism for the projection `π: G -> G/F` with `F`
/// infinite, then `h_ψ^M` is an isomorphism for every epimorphism `ψ`. The
/// zero map `G -> 0` is always checked. Explicit modules are checked on
/// `probes` (default: `M` and `R`).
pub fn iso_for_all_epimorphisms<F: Field>(
    m: &ModuleClass<F>,
    subgroup: &[GroupElement],
    psi_list: &[GroupHom],
    probes: &[Arc<GradedModule<F>>],
) -> Result<IsoTransferReport> {
    let group = m.ring().group().clone();
    let (f_group, _) = group.subgroup(subgroup)?;
    if f_group.is_finite() {
        return Err(Error::FiniteSubgroup(format!("{f_group}")));
    }
    let (_, projection) = group.quotient(subgroup)?;
    let ctx = CoarseningContext::new(projection.clone())?;
    let premise = h_psi_prediction(m, &ctx)?;
    let premise_computed = computed_iso(m, &ctx, probes)?;
    if premise_computed.is_some_and(|c| c != premise.iso) {
        return Err(Error::Soundness("computed h_π disagrees with the prediction".into()));
    }
    let premise_holds = premise.iso;
    let mut report = IsoTransferReport {
        subgroup_generators: subgroup.to_vec(),
        projection,
        premise_predicted: premise.iso,
        premise_computed,
        premise_holds,
        concluded_small: premise_holds,
        checks: Vec::new(),
        all_iso: false,
    };
    if !premise_holds {
        return Ok(report);
    }
    let mut list = psi_list.to_vec();
    let zero = GroupHom::to_trivial(&group);
    if !list.contains(&zero) {
        list.push(zero);
    }
    for psi in list {
        let ctx = CoarseningContext::new(psi.clone())?;
        let predicted = h_psi_prediction(m, &ctx)?.iso;
        let computed = computed_iso(m, &ctx, probes)?;
        if computed.is_some_and(|c| c != predicted) {
            return Err(Error::Soundness("computed h_ψ disagrees with the prediction".into()));
        }
        report.checks.push(EpimorphismCheck { psi, kernel_finite: ctx.kernel_is_finite(), predicted, computed });
    }
    report.all_iso = report.checks.iter().all(|c| c.predicted && c.computed.unwrap_or(true));
    Ok(report)
}
