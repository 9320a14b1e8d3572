//! Graded Hom modules and their behaviour under coarsening.
//!
//! `GRHom(M, N) = ⊕_g Hom(M, N(g))` is computed degree by degree. The map
//! `h_ψ(M, N): GRHom(M, N)_[ψ] -> GRHom(M_[ψ], N_[ψ])` sends a degree-`g`
//! morphism to itself regarded as a morphism of H-degree `ψ(g)`; it is
//! always injective, and surjective exactly when `M` is small or `ker ψ` is
//! finite. Non-small modules are represented intensionally as free modules
//! indexed by an infinite subgroup.

mod hpsi;
mod small;

pub use hpsi::{
    component_decomposition, h_psi, h_psi_prediction, h_psi_rule, iso_for_all_epimorphisms, Branch, ComponentSupportReport,
    EpimorphismCheck, HPsiDegree, HPsiReport, InfiniteSupportWitness, IsoTransferReport, Prediction, Rule, RuleImageReport,
    RuleTarget, RuleValue, UniformRuleMorphism,
};
pub use small::{
    lambda_morphism, smallness_coarsening_transfer, smallness_report, IndexScheme, IntensionalFreeModule, LambdaFamily,
    LambdaReport, ModuleClass, NotSmallWitness, RelativeSmallness, SmallCertificate, SmallReason, SmallnessVerdict,
    SummandProjection, SupportCertificate, TransferReport,
};

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::abgroup::GroupElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{hom_space, BasisElement, GradedModule, GradedMorphism, HomSpace};
use crate::linalg::Matrix;

/// A dimension that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dim {
    Finite(usize),
    Infinite,
}

/// `GRHom(M, N)`: the component of degree `g` is `Hom(M, N(g))`, i.e. the
/// morphisms raising degrees by `g`. Only nonzero components are stored.
#[derive(Clone, Debug)]
pub struct GradedHomModule<F: Field> {
    source: Arc<GradedModule<F>>,
    target: Arc<GradedModule<F>>,
    components: BTreeMap<GroupElement, HomSpace<F>>,
    module: Arc<GradedModule<F>>,
    /// `(degree, index in that component)` for each basis vector of `module`.
    position: Vec<(GroupElement, usize)>,
}

impl<F: Field> GradedHomModule<F> {
    pub fn source(&self) -> &Arc<GradedModule<F>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedModule<F>> {
        &self.target
    }

    pub fn support(&self) -> Vec<GroupElement> {
        self.components.keys().cloned().collect()
    }

    pub fn component(&self, g: &GroupElement) -> Option<&HomSpace<F>> {
        self.components.get(g)
    }

    pub fn component_dim(&self, g: &GroupElement) -> usize {
        self.components.get(g).map_or(0, HomSpace::dim)
    }

    pub fn components(&self) -> &BTreeMap<GroupElement, HomSpace<F>> {
        &self.components
    }

    /// The graded R-module structure, with basis the union of the component bases.
    pub fn module(&self) -> &Arc<GradedModule<F>> {
        &self.module
    }

    /// The morphism behind basis vector `j` of [`GradedHomModule::module`].
    pub fn morphism(&self, j: usize) -> (&GroupElement, &GradedMorphism<F>) {
        let (g, k) = &self.position[j];
        (g, &self.components[g].basis[*k])
    }

    /// Splits an element of the module into one morphism per degree.
    pub fn homogeneous_morphisms(&self, v: &[F::Elem]) -> BTreeMap<GroupElement, GradedMorphism<F>> {
        self.module
            .homogeneous_parts(v)
            .into_iter()
            .map(|(g, part)| {
                let coeffs: Vec<F::Elem> = self.module.component(&g).iter().map(|&j| part[j].clone()).collect();
                let u = self.components[&g].combination(&coeffs);
                (g, u)
            })
            .collect()
    }
}

/// Degrees `n - m` for `n` in `supp N` and `m` in `supp M`: the only
/// candidates for nonzero components of `GRHom(M, N)`.
pub(crate) fn degree_differences<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>) -> BTreeSet<GroupElement> {
    let group = m.ring().group();
    let mut out = BTreeSet::new();
    for d in n.components().keys() {
        for e in m.components().keys() {
            out.insert(group.sub(d, e));
        }
    }
    out
}

/// Matrix of multiplication by `r_i` on the underlying space of `n`.
pub(crate) fn action_matrix<F: Field>(n: &GradedModule<F>, i: usize) -> Matrix<F::Elem> {
    let cols: Vec<Vec<F::Elem>> = (0..n.dim()).map(|j| n.act_basis(i, j).to_vec()).collect();
    Matrix::columns_matrix(n.field(), &cols, n.dim())
}

pub fn graded_hom<F: Field>(m: &Arc<GradedModule<F>>, n: &Arc<GradedModule<F>>) -> Result<GradedHomModule<F>> {
    if !m.same_ring(n) {
        return Err(Error::RingMismatch("graded Hom between modules over different rings".into()));
    }
    let ring = m.ring();
    let f = m.field();
    let mut components = BTreeMap::new();
    for g in degree_differences(m, n) {
        let space = hom_space(m, &Arc::new(n.shift(&g)))?;
        if space.dim() > 0 {
            components.insert(g, space);
        }
    }
    let mut basis = Vec::new();
    let mut position = Vec::new();
    let mut offset = BTreeMap::new();
    for (g, space) in &components {
        offset.insert(g.clone(), basis.len());
        for k in 0..space.dim() {
            basis.push(BasisElement::new(format!("hom{g}.{k}"), g.clone()));
            position.push((g.clone(), k));
        }
    }
    let dim = basis.len();
    let mut action = Vec::with_capacity(ring.dim() * dim);
    for i in 0..ring.dim() {
        let a = action_matrix(n, i);
        for (g, k) in &position {
            let u = &components[g].basis[*k];
            let product = a.mul(f, u.matrix());
            let e = ring.group().add(g, ring.degree(i));
            let mut coords = vec![f.zero(); dim];
            match components.get(&e) {
                Some(space) => {
                    let target = Arc::new(n.shift(&e));
                    let v = GradedMorphism::new(m.clone(), target, product)
                        .map_err(|_| Error::InvalidStructure("ring action does not preserve graded morphisms".into()))?;
                    let c = space.coordinates(&v).ok_or_else(|| {
                        Error::InvalidStructure("r·u is not a module morphism; the ring is not commutative".into())
                    })?;
                    for (x, val) in c.into_iter().enumerate() {
                        coords[offset[&e] + x] = val;
                    }
                }
                None if product.is_zero(f) => {}
                None => {
                    return Err(Error::InvalidStructure(format!("r·u lands in degree {e}, where GRHom vanishes")));
                }
            }
            action.push(coords);
        }
    }
    let module = Arc::new(GradedModule::new(ring.clone(), basis, action)?);
    Ok(GradedHomModule { source: m.clone(), target: n.clone(), components, module, position })
}

#[cfg(test)]
mod tests;
