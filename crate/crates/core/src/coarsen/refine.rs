use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::CoarseningContext;
use crate::abgroup::{GroupElement, GroupHom};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{direct_sum, BasisElement, DirectSum, GradedModule, GradedMorphism, GradedRing, GradedView};
use crate::linalg::Matrix;

/// `N^[ψ]` for an H-graded module `N`, as a G-graded module over a G-graded
/// ring `R` acting through `images` (the image of each basis element of `R`
/// in the ring of `N`). Components are produced on demand.
#[derive(Clone, Debug)]
pub struct LazyRefinedModule<F: Field> {
    psi: GroupHom,
    base: Arc<GradedModule<F>>,
    ring: Arc<GradedRing<F>>,
    images: Arc<Vec<Vec<F::Elem>>>,
}

impl<F: Field> LazyRefinedModule<F> {
    /// Refinement over `R` when `N` is a module over `R_[ψ]`.
    pub fn new(ctx: &CoarseningContext, base: Arc<GradedModule<F>>, ring: Arc<GradedRing<F>>) -> Result<Self> {
        ctx.check_refinement_ring(&base, &ring)?;
        let images = (0..ring.dim()).map(|i| ring.unit_vector(i)).collect();
        Ok(Self { psi: ctx.psi().clone(), base, ring, images: Arc::new(images) })
    }

    /// Refinement over the explicit refined ring `S^[ψ]`, where `S` is the ring of `N`.
    pub fn over_refined_ring(base: Arc<GradedModule<F>>, refined: &RefinedRing<F>, psi: &GroupHom) -> Result<Self> {
        if **base.ring() != *refined.base {
            return Err(Error::RingMismatch("module is not over the ring that was refined".into()));
        }
        let images = refined.index.iter().map(|&(_, i)| refined.base.unit_vector(i)).collect();
        Ok(Self { psi: psi.clone(), base, ring: refined.ring.clone(), images: Arc::new(images) })
    }

    pub fn base(&self) -> &Arc<GradedModule<F>> {
        &self.base
    }

    pub fn g_ring(&self) -> &Arc<GradedRing<F>> {
        &self.ring
    }

    /// Basis indices of the base module spanning the component at `d`.
    pub fn component(&self, d: &GroupElement) -> &[usize] {
        self.base.component(&self.psi.apply(d))
    }

    /// `r_i * m` for base basis element `j`, as a base vector.
    fn act(&self, i: usize, j: usize) -> Vec<F::Elem> {
        let f = self.base.field();
        let mut out = vec![f.zero(); self.base.dim()];
        for (l, c) in self.images[i].iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            for (o, x) in out.iter_mut().zip(self.base.act_basis(l, j)) {
                *o = f.add(o, &f.mul(c, x));
            }
        }
        out
    }

    /// Explicit module on the given G-degrees, or on all of `ψ^{-1}(supp N)`
    /// when no window is given (finite kernel only).
    pub fn materialize(&self, ctx: &CoarseningContext, window: Option<&[GroupElement]>) -> Result<RefinedModule<F>> {
        let degrees = refined_degrees(ctx, &self.base.support(), window)?;
        let mut index = Vec::new();
        for g in &degrees {
            for &j in self.component(g) {
                index.push((g.clone(), j));
            }
        }
        let position: BTreeMap<(GroupElement, usize), usize> =
            index.iter().enumerate().map(|(p, k)| (k.clone(), p)).collect();
        let f = self.base.field();
        let group = self.ring.group();
        let n = index.len();
        let mut action = Vec::with_capacity(self.ring.dim() * n);
        for i in 0..self.ring.dim() {
            for (g, j) in &index {
                let e = group.add(g, self.ring.degree(i));
                let v = self.act(i, *j);
                let mut out = vec![f.zero(); n];
                for (k, x) in v.iter().enumerate() {
                    if f.is_zero(x) {
                        continue;
                    }
                    let p = position.get(&(e.clone(), k)).ok_or_else(|| {
                        Error::WindowNotClosed(format!("{} maps degree {g} to {e}", self.ring.basis()[i].name))
                    })?;
                    out[*p] = x.clone();
                }
                action.push(out);
            }
        }
        let basis = index
            .iter()
            .map(|(g, j)| BasisElement::new(format!("{}@{g}", self.base.basis()[*j].name), g.clone()))
            .collect();
        let module = Arc::new(GradedModule::from_parts(self.ring.clone(), basis, action));
        Ok(RefinedModule { module, index, position })
    }
}

impl<F: Field> GradedView<F> for LazyRefinedModule<F> {
    fn ring(&self) -> &Arc<GradedRing<F>> {
        &self.ring
    }

    fn component_dim(&self, d: &GroupElement) -> usize {
        self.component(d).len()
    }

    fn action_block(&self, i: usize, d: &GroupElement) -> Matrix<F::Elem> {
        let f = self.base.field();
        let e = self.ring.group().add(d, self.ring.degree(i));
        let src = self.component(d);
        let dst = self.component(&e);
        let mut m = Matrix::zero(f, dst.len(), src.len());
        for (c, &j) in src.iter().enumerate() {
            let v = self.act(i, j);
            for (r, &k) in dst.iter().enumerate() {
                m.set(r, c, v[k].clone());
            }
        }
        m
    }
}

fn refined_degrees(
    ctx: &CoarseningContext,
    support: &[GroupElement],
    window: Option<&[GroupElement]>,
) -> Result<Vec<GroupElement>> {
    let support: BTreeSet<GroupElement> = support.iter().cloned().collect();
    let degrees: BTreeSet<GroupElement> = match window {
        Some(w) => {
            for g in w {
                ctx.domain().check(g)?;
            }
            w.iter().filter(|g| support.contains(&ctx.apply(g))).cloned().collect()
        }
        None => {
            if !ctx.kernel_is_finite() {
                return Err(Error::InfiniteSupport(format!(
                    "refinement along a map with kernel {} needs a degree window",
                    ctx.analysis().kernel.kernel
                )));
            }
            let mut all = BTreeSet::new();
            for h in &support {
                all.extend(ctx.fiber(h)?);
            }
            all
        }
    };
    Ok(degrees.into_iter().collect())
}

/// An explicit refinement; basis element `p` is base element `index[p].1`
/// placed in G-degree `index[p].0`. Ordered by degree, then base index.
#[derive(Clone, Debug)]
pub struct RefinedModule<F: Field> {
    pub module: Arc<GradedModule<F>>,
    pub index: Vec<(GroupElement, usize)>,
    position: BTreeMap<(GroupElement, usize), usize>,
}

impl<F: Field> RefinedModule<F> {
    pub fn position(&self, g: &GroupElement, j: usize) -> Option<usize> {
        self.position.get(&(g.clone(), j)).copied()
    }

    /// `k^[ψ]` between two explicit refinements: `(g, j) ↦ Σ k_{lj} (g, l)`.
    pub fn refine_morphism(&self, target: &RefinedModule<F>, k: &GradedMorphism<F>) -> Result<GradedMorphism<F>> {
        let f = self.module.field();
        let mut m = Matrix::zero(f, target.module.dim(), self.module.dim());
        for (p, (g, j)) in self.index.iter().enumerate() {
            for l in 0..k.target().dim() {
                let x = k.matrix().get(l, *j);
                if f.is_zero(x) {
                    continue;
                }
                let q = target
                    .position(g, l)
                    .ok_or_else(|| Error::WindowNotClosed(format!("target refinement lacks degree {g}")))?;
                m.set(q, p, x.clone());
            }
        }
        GradedMorphism::from_parts(self.module.clone(), target.module.clone(), m)
    }
}

/// `S^[ψ]` for an H-graded ring, made explicit on finitely many G-degrees.
#[derive(Clone, Debug)]
pub struct RefinedRing<F: Field> {
    pub ring: Arc<GradedRing<F>>,
    pub base: Arc<GradedRing<F>>,
    pub index: Vec<(GroupElement, usize)>,
}

impl<F: Field> RefinedRing<F> {
    /// Product is `(g, i)(g', i') = Σ c_{ii'}^k (g + g', k)`; the unit is `1_S` in degree 0.
    pub fn new(ctx: &CoarseningContext, base: Arc<GradedRing<F>>, window: Option<&[GroupElement]>) -> Result<Self> {
        ctx.check_codomain(base.group())?;
        let degrees = refined_degrees(ctx, &base.support(), window)?;
        let comps = base.components();
        let mut index = Vec::new();
        for g in &degrees {
            for &i in comps.get(&ctx.apply(g)).map_or(&[][..], Vec::as_slice) {
                index.push((g.clone(), i));
            }
        }
        let position: BTreeMap<(GroupElement, usize), usize> =
            index.iter().enumerate().map(|(p, k)| (k.clone(), p)).collect();
        let f = base.field().clone();
        let group = ctx.domain();
        let n = index.len();
        let locate = |g: &GroupElement, k: usize| {
            position
                .get(&(g.clone(), k))
                .copied()
                .ok_or_else(|| Error::WindowNotClosed(format!("degree {g} is missing from the window")))
        };
        let mut mul = Vec::with_capacity(n * n);
        for (g, i) in &index {
            for (h, j) in &index {
                let e = group.add(g, h);
                let mut out = vec![f.zero(); n];
                for (k, x) in base.product(*i, *j).iter().enumerate() {
                    if !f.is_zero(x) {
                        out[locate(&e, k)?] = x.clone();
                    }
                }
                mul.push(out);
            }
        }
        let mut one = vec![f.zero(); n];
        let zero = group.zero();
        for (k, x) in base.one().iter().enumerate() {
            if !f.is_zero(x) {
                one[locate(&zero, k)?] = x.clone();
            }
        }
        let basis = index
            .iter()
            .map(|(g, i)| BasisElement::new(format!("{}@{g}", base.basis()[*i].name), g.clone()))
            .collect();
        let ring = Arc::new(GradedRing::new(f, group.clone(), basis, mul, one)?);
        Ok(Self { ring, base, index })
    }
}

/// `S^[ψ]` answered degree by degree; needed when the kernel is infinite.
#[derive(Clone, Debug)]
pub struct LazyRefinedRing<F: Field> {
    psi: GroupHom,
    base: Arc<GradedRing<F>>,
    components: BTreeMap<GroupElement, Vec<usize>>,
}

impl<F: Field> LazyRefinedRing<F> {
    pub fn new(ctx: &CoarseningContext, base: Arc<GradedRing<F>>) -> Result<Self> {
        ctx.check_codomain(base.group())?;
        let components = base.components();
        Ok(Self { psi: ctx.psi().clone(), base, components })
    }

    pub fn component(&self, d: &GroupElement) -> &[usize] {
        self.components.get(&self.psi.apply(d)).map_or(&[], Vec::as_slice)
    }

    /// Product of `a` in degree `d` and `b` in degree `e` (component-local
    /// coordinates); the result lies in degree `d + e`.
    pub fn multiply(&self, d: &GroupElement, a: &[F::Elem], e: &GroupElement, b: &[F::Elem]) -> (GroupElement, Vec<F::Elem>) {
        let ga = self.embed(d, a);
        let gb = self.embed(e, b);
        let p = self.base.multiply(&ga, &gb);
        let de = self.psi.domain().add(d, e);
        let local = self.component(&de).iter().map(|&k| p[k].clone()).collect();
        (de, local)
    }

    fn embed(&self, d: &GroupElement, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![self.base.field().zero(); self.base.dim()];
        for (&k, x) in self.component(d).iter().zip(v) {
            out[k] = x.clone();
        }
        out
    }
}

/// `(N^[ψ])_[ψ] ≅ N^{⊕ ker ψ}` with the explicit isomorphism.
#[derive(Clone, Debug)]
pub struct Decomposition<F: Field> {
    pub refined: RefinedModule<F>,
    pub coarsened: Arc<GradedModule<F>>,
    pub sum: DirectSum<F>,
    pub iso: GradedMorphism<F>,
    pub kernel: Vec<GroupElement>,
}

/// Needs a finite kernel, and a ring concentrated in degree zero unless the
/// kernel is trivial: otherwise the copies of `N` are permuted by the action.
pub fn refine_then_coarsen_decomposition<F: Field>(
    ctx: &CoarseningContext,
    n: Arc<GradedModule<F>>,
    ring: Arc<GradedRing<F>>,
) -> Result<Decomposition<F>> {
    let kernel = ctx.require_finite_kernel()?.to_vec();
    if kernel.len() > 1 && !ring.is_concentrated_in_zero() {
        return Err(Error::NotConcentrated(
            "the copies of N are only preserved when the ring lives in degree zero".into(),
        ));
    }
    let lazy = LazyRefinedModule::new(ctx, n.clone(), ring)?;
    let refined = lazy.materialize(ctx, None)?;
    let coarsened = Arc::new(ctx.coarsen_module_over(&refined.module, n.ring().clone())?);
    let copies = vec![n.clone(); kernel.len()];
    let sum = direct_sum(n.ring(), &copies)?;
    let f = n.field();
    let group = ctx.domain();
    let mut m = Matrix::zero(f, sum.module.dim(), coarsened.dim());
    for (p, (g, j)) in refined.index.iter().enumerate() {
        let k = group.sub(g, &ctx.section(n.degree(*j)));
        let copy = kernel.binary_search(&k).map_err(|_| Error::Soundness(format!("{k} is not in the kernel")))?;
        m.set(copy * n.dim() + j, p, f.one());
    }
    let iso = GradedMorphism::new(coarsened.clone(), sum.module.clone(), m)?;
    if !iso.is_isomorphism() {
        return Err(Error::Soundness("the decomposition map is not bijective".into()));
    }
    Ok(Decomposition { refined, coarsened, sum, iso, kernel })
}
