//! Coarsening and refinement along an epimorphism of grading groups.
//!
//! `ψ: G -> H` turns a G-graded object into an H-graded one by summing the
//! components over each fiber (coarsening), and an H-graded object into a
//! G-graded one whose component at `g` is the component at `ψ(g)`
//! (refinement). Refinement of a module over an H-graded ring `R_[ψ]` is
//! taken over the G-graded ring `R` itself, by restricting scalars along the
//! canonical ring map `R -> (R_[ψ])^[ψ]`.

mod adjunction;
mod product;
mod refine;
mod transform;

pub use adjunction::{CoarsenRefineAdjunction, RefineCoarsenAdjunction, TriangleCheck};
pub use product::{product_coarsening_comparison, ComparisonReport, ComparisonVerdict, ProductFamily, ProductWitness};
pub use refine::{refine_then_coarsen_decomposition, Decomposition, LazyRefinedModule, LazyRefinedRing, RefinedModule, RefinedRing};
pub use transform::{Carrier, RingMap, Transformation};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::abgroup::{analyze_epimorphism, subgroup_window, EpiAnalysis, FgAbGroup, GroupElement, GroupHom, GroupOrder};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{GradedModule, GradedMorphism, GradedRing};

/// A validated epimorphism with its kernel and fiber data.
#[derive(Clone, Debug)]
pub struct CoarseningContext {
    psi: GroupHom,
    analysis: EpiAnalysis,
    kernel_elements: Option<Vec<GroupElement>>,
    /// Fibers of every element of a finite codomain, when the kernel is finite.
    fibers: BTreeMap<GroupElement, Vec<GroupElement>>,
}

impl CoarseningContext {
    pub fn new(psi: GroupHom) -> Result<Self> {
        let analysis = analyze_epimorphism(&psi)?;
        if !analysis.is_epi {
            return Err(Error::NotEpimorphism {
                cokernel: analysis.cokernel_invariants.clone(),
                free_rank: analysis.cokernel_rank,
            });
        }
        let kernel_elements = analysis.kernel.elements();
        let mut ctx = Self { psi, analysis, kernel_elements, fibers: BTreeMap::new() };
        if ctx.kernel_elements.is_some() {
            if let Some(hs) = ctx.psi.codomain().elements() {
                for h in hs {
                    let f = ctx.compute_fiber(&h)?;
                    ctx.fibers.insert(h, f);
                }
            }
        }
        Ok(ctx)
    }

    pub fn psi(&self) -> &GroupHom {
        &self.psi
    }

    pub fn domain(&self) -> &FgAbGroup {
        self.psi.domain()
    }

    pub fn codomain(&self) -> &FgAbGroup {
        self.psi.codomain()
    }

    pub fn analysis(&self) -> &EpiAnalysis {
        &self.analysis
    }

    pub fn kernel_order(&self) -> GroupOrder {
        self.analysis.kernel.order
    }

    pub fn kernel_is_finite(&self) -> bool {
        self.kernel_elements.is_some()
    }

    /// Kernel elements in the domain, sorted; `None` if the kernel is infinite.
    pub fn kernel_elements(&self) -> Option<&[GroupElement]> {
        self.kernel_elements.as_deref()
    }

    pub fn kernel_generators(&self) -> Vec<GroupElement> {
        self.analysis.kernel.generators()
    }

    /// Kernel elements `Σ c_i k_i` with `|c_i| <= radius` on the free
    /// generators, sorted. Equals the whole kernel when it is finite.
    pub fn kernel_window(&self, radius: i64) -> Vec<GroupElement> {
        subgroup_window(&self.analysis.kernel.embedding, radius)
    }

    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        self.psi.apply(g)
    }

    fn compute_fiber(&self, h: &GroupElement) -> Result<Vec<GroupElement>> {
        self.codomain().check(h)?;
        let kernel = self.kernel_elements.as_ref().ok_or_else(|| self.infinite_kernel_error())?;
        let base = self.psi.preimage(h).expect("epimorphism has preimages");
        let mut out: Vec<GroupElement> = kernel.iter().map(|k| self.domain().add(&base, k)).collect();
        out.sort();
        Ok(out)
    }

    /// `ψ^{-1}(h)`, sorted lexicographically.
    pub fn fiber(&self, h: &GroupElement) -> Result<Vec<GroupElement>> {
        match self.fibers.get(h) {
            Some(f) => Ok(f.clone()),
            None => self.compute_fiber(h),
        }
    }

    /// A fixed preimage of `h` (the first element of its fiber when finite).
    pub fn section(&self, h: &GroupElement) -> GroupElement {
        match self.fibers.get(h) {
            Some(f) => f[0].clone(),
            None => self.psi.preimage(h).expect("epimorphism has preimages"),
        }
    }

    pub(crate) fn infinite_kernel_error(&self) -> Error {
        Error::InfiniteKernel(format!("kernel of {} -> {} is {}", self.domain(), self.codomain(), self.analysis.kernel.kernel))
    }

    pub(crate) fn require_finite_kernel(&self) -> Result<&[GroupElement]> {
        self.kernel_elements.as_deref().ok_or_else(|| self.infinite_kernel_error())
    }

    fn check_domain(&self, group: &FgAbGroup) -> Result<()> {
        if group != self.domain() {
            return Err(Error::GroupMismatch(format!("object is graded by {group}, ψ starts at {}", self.domain())));
        }
        Ok(())
    }

    fn check_codomain(&self, group: &FgAbGroup) -> Result<()> {
        if group != self.codomain() {
            return Err(Error::GroupMismatch(format!("object is graded by {group}, ψ ends at {}", self.codomain())));
        }
        Ok(())
    }

    pub fn coarsen_ring<F: Field>(&self, r: &GradedRing<F>) -> Result<GradedRing<F>> {
        self.check_domain(r.group())?;
        let degrees = r.basis().iter().map(|b| self.apply(&b.degree)).collect();
        Ok(r.regraded(self.codomain().clone(), degrees))
    }

    pub fn coarsen_module<F: Field>(&self, m: &GradedModule<F>) -> Result<GradedModule<F>> {
        let ring = Arc::new(self.coarsen_ring(m.ring())?);
        self.coarsen_module_over(m, ring)
    }

    /// Coarsening with a caller-supplied copy of `R_[ψ]`, so results share one ring.
    pub fn coarsen_module_over<F: Field>(&self, m: &GradedModule<F>, ring: Arc<GradedRing<F>>) -> Result<GradedModule<F>> {
        self.check_domain(m.ring().group())?;
        if *ring != self.coarsen_ring(m.ring())? {
            return Err(Error::RingMismatch("supplied ring is not the coarsening of the module's ring".into()));
        }
        let degrees = m.basis().iter().map(|b| self.apply(&b.degree)).collect();
        Ok(m.regraded(ring, degrees))
    }

    /// Same matrix between the coarsened source and target.
    pub fn coarsen_morphism<F: Field>(&self, u: &GradedMorphism<F>) -> Result<GradedMorphism<F>> {
        let ring = Arc::new(self.coarsen_ring(u.source().ring())?);
        self.coarsen_morphism_over(u, ring)
    }

    pub fn coarsen_morphism_over<F: Field>(&self, u: &GradedMorphism<F>, ring: Arc<GradedRing<F>>) -> Result<GradedMorphism<F>> {
        let s = Arc::new(self.coarsen_module_over(u.source(), ring.clone())?);
        let t = Arc::new(self.coarsen_module_over(u.target(), ring)?);
        GradedMorphism::from_parts(s, t, u.matrix().clone())
    }

    /// Checks that `n` is a module over the coarsening of `ring`.
    pub(crate) fn check_refinement_ring<F: Field>(&self, n: &GradedModule<F>, ring: &GradedRing<F>) -> Result<()> {
        self.check_codomain(n.ring().group())?;
        if self.coarsen_ring(ring)? != **n.ring() {
            return Err(Error::RingMismatch(
                "the H-graded module is not over the coarsening of the given G-graded ring".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
