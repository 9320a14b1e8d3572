//! Comparison of coarsened products with products of coarsenings.

use std::sync::Arc;

use serde::Serialize;

use super::CoarseningContext;
use crate::abgroup::GroupElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{finite_product, GradedModule, GradedMorphism, GradedRing};

/// The families the comparison accepts.
#[derive(Clone, Debug)]
pub enum ProductFamily<F: Field> {
    Finite { ring: Arc<GradedRing<F>>, modules: Vec<Arc<GradedModule<F>>> },
    /// `(R(-g))_{g ∈ ker ψ}`.
    KernelShifts(Arc<GradedRing<F>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonVerdict {
    Iso,
    ProperMono,
}

/// One coordinate `x^g` of the witness tuple: `x^g_f` is nonzero exactly for `f = g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    pub index: GroupElement,
    pub support: Vec<GroupElement>,
    pub diagonal_nonzero: bool,
}

/// The tuple `(x^g)_g` with `x^g_g = e_g = 1_R ∈ R(-g)_g` in degree 0 of the
/// product of coarsenings. Each `x^g` is a finite sum, but the set of
/// summands `f` where the tuple is nonzero is the whole (infinite) kernel,
/// so the tuple is not in the image of the coarsened product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductWitness {
    pub kernel_generators: Vec<GroupElement>,
    pub kernel_rank: usize,
    pub window_radius: i64,
    pub entries: Vec<WitnessEntry>,
}

impl ProductWitness {
    /// Recomputes every entry from the family and checks the kernel is infinite.
    pub fn verify<F: Field>(&self, ctx: &CoarseningContext, ring: &Arc<GradedRing<F>>) -> bool {
        if self.kernel_rank == 0 || ctx.kernel_is_finite() {
            return false;
        }
        let window = ctx.kernel_window(self.window_radius);
        if window.len() != self.entries.len() {
            return false;
        }
        window.iter().zip(&self.entries).all(|(g, e)| {
            let m = GradedModule::free_cyclic(ring.clone(), g);
            let x = m.restrict_component(g, ring.one());
            let nonzero = !m.is_zero_vector(&m.embed_component(g, &x));
            e.index == *g && e.support == [g.clone()] && e.diagonal_nonzero == nonzero && nonzero
        })
    }
}

#[derive(Clone, Debug)]
pub struct ComparisonReport<F: Field> {
    pub verdict: ComparisonVerdict,
    /// The comparison map `ξ`, for finite families.
    pub xi: Option<GradedMorphism<F>>,
    pub witness: Option<ProductWitness>,
}

pub const WITNESS_RADIUS: i64 = 3;

pub fn product_coarsening_comparison<F: Field>(
    ctx: &CoarseningContext,
    family: &ProductFamily<F>,
) -> Result<ComparisonReport<F>> {
    match family {
        ProductFamily::Finite { ring, modules } => finite_comparison(ctx, ring, modules),
        ProductFamily::KernelShifts(ring) => {
            if let Some(kernel) = ctx.kernel_elements() {
                let modules = kernel.iter().map(|g| Arc::new(GradedModule::free_cyclic(ring.clone(), g))).collect::<Vec<_>>();
                return finite_comparison(ctx, ring, &modules);
            }
            if ring.is_zero_ring() {
                // every member is zero, so both sides vanish
                return Ok(ComparisonReport { verdict: ComparisonVerdict::Iso, xi: None, witness: None });
            }
            let entries = ctx
                .kernel_window(WITNESS_RADIUS)
                .into_iter()
                .map(|g| WitnessEntry { support: vec![g.clone()], index: g, diagonal_nonzero: true })
                .collect();
            let witness = ProductWitness {
                kernel_generators: ctx.kernel_generators(),
                kernel_rank: ctx.analysis().kernel.kernel.rank(),
                window_radius: WITNESS_RADIUS,
                entries,
            };
            if !witness.verify(ctx, ring) {
                return Err(Error::Soundness("product witness failed to re-verify".into()));
            }
            Ok(ComparisonReport { verdict: ComparisonVerdict::ProperMono, xi: None, witness: Some(witness) })
        }
    }
}

fn finite_comparison<F: Field>(
    ctx: &CoarseningContext,
    ring: &Arc<GradedRing<F>>,
    modules: &[Arc<GradedModule<F>>],
) -> Result<ComparisonReport<F>> {
    let coarse_ring = Arc::new(ctx.coarsen_ring(ring)?);
    let product = finite_product(ring, modules)?;
    let coarse_modules = modules
        .iter()
        .map(|m| ctx.coarsen_module_over(m, coarse_ring.clone()).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    let coarse_product = finite_product(&coarse_ring, &coarse_modules)?;
    let source = Arc::new(ctx.coarsen_module_over(&product.module, coarse_ring.clone())?);
    // both products are permutations of the same sum
    let f = ring.field();
    let matrix = coarse_product.to_sum.matrix().transpose().mul(f, product.to_sum.matrix());
    let xi = GradedMorphism::new(source, coarse_product.module.clone(), matrix)?;
    for (k, (pi, rho)) in product.projections.iter().zip(&coarse_product.projections).enumerate() {
        let pi_coarse = ctx.coarsen_morphism_over(pi, coarse_ring.clone())?;
        if xi.then(rho)?.matrix() != pi_coarse.matrix() {
            return Err(Error::Soundness(format!("comparison map does not commute with projection {k}")));
        }
    }
    if !xi.is_isomorphism() {
        return Err(Error::Soundness("finite product comparison is not bijective".into()));
    }
    Ok(ComparisonReport { verdict: ComparisonVerdict::Iso, xi: Some(xi), witness: None })
}
