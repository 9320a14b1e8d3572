//! Sums, finite products, kernels, images and quotients.

use std::sync::Arc;

use super::module::GradedModule;
use super::morphism::GradedMorphism;
use super::ring::BasisElement;
use super::submodule::GradedSubmodule;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;

/// A finite direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum<F: Field> {
    pub module: Arc<GradedModule<F>>,
    pub injections: Vec<GradedMorphism<F>>,
    pub projections: Vec<GradedMorphism<F>>,
}

/// A finite product with its projections and the comparison map to the sum.
#[derive(Clone, Debug)]
pub struct FiniteProduct<F: Field> {
    pub module: Arc<GradedModule<F>>,
    pub projections: Vec<GradedMorphism<F>>,
    pub to_sum: GradedMorphism<F>,
}

fn check_rings<F: Field>(modules: &[Arc<GradedModule<F>>]) -> Result<()> {
    if let Some(first) = modules.first() {
        if let Some(k) = modules.iter().position(|m| !m.same_ring(first)) {
            return Err(Error::RingMismatch(format!("summand {k} is over a different ring")));
        }
    }
    Ok(())
}

/// Stacks modules in the order given by `order` (pairs of summand and basis index).
fn stacked<F: Field>(
    ring: &Arc<super::ring::GradedRing<F>>,
    modules: &[Arc<GradedModule<F>>],
    order: &[(usize, usize)],
) -> (Arc<GradedModule<F>>, Vec<Vec<usize>>) {
    let f = ring.field();
    let n = order.len();
    let mut position: Vec<Vec<usize>> = modules.iter().map(|m| vec![0; m.dim()]).collect();
    for (p, &(k, j)) in order.iter().enumerate() {
        position[k][j] = p;
    }
    let basis = order
        .iter()
        .map(|&(k, j)| {
            let b = &modules[k].basis()[j];
            BasisElement::new(format!("{k}.{}", b.name), b.degree.clone())
        })
        .collect();
    let mut action = Vec::with_capacity(ring.dim() * n);
    for i in 0..ring.dim() {
        for &(k, j) in order {
            let mut v = vec![f.zero(); n];
            for (l, x) in modules[k].act_basis(i, j).iter().enumerate() {
                v[position[k][l]] = x.clone();
            }
            action.push(v);
        }
    }
    (Arc::new(GradedModule::from_parts(ring.clone(), basis, action)), position)
}

fn structure_maps<F: Field>(
    sum: &Arc<GradedModule<F>>,
    modules: &[Arc<GradedModule<F>>],
    position: &[Vec<usize>],
) -> Result<(Vec<GradedMorphism<F>>, Vec<GradedMorphism<F>>)> {
    let f = sum.field();
    let mut inj = Vec::new();
    let mut proj = Vec::new();
    for (k, m) in modules.iter().enumerate() {
        let mut a = Matrix::zero(f, sum.dim(), m.dim());
        let mut b = Matrix::zero(f, m.dim(), sum.dim());
        for (j, &p) in position[k].iter().enumerate() {
            a.set(p, j, f.one());
            b.set(j, p, f.one());
        }
        inj.push(GradedMorphism::from_parts(m.clone(), sum.clone(), a)?);
        proj.push(GradedMorphism::from_parts(sum.clone(), m.clone(), b)?);
    }
    Ok((inj, proj))
}

/// `M_0 ⊕ ... ⊕ M_{k-1}`, summand by summand. An empty family needs the ring.
pub fn direct_sum<F: Field>(
    ring: &Arc<super::ring::GradedRing<F>>,
    modules: &[Arc<GradedModule<F>>],
) -> Result<DirectSum<F>> {
    check_rings(modules)?;
    if let Some(m) = modules.first() {
        if !(Arc::ptr_eq(m.ring(), ring) || m.ring() == ring) {
            return Err(Error::RingMismatch("summands are not over the given ring".into()));
        }
    }
    let order: Vec<(usize, usize)> =
        modules.iter().enumerate().flat_map(|(k, m)| (0..m.dim()).map(move |j| (k, j))).collect();
    let (module, position) = stacked(ring, modules, &order);
    let (injections, projections) = structure_maps(&module, modules, &position)?;
    Ok(DirectSum { module, injections, projections })
}

/// The degreewise product: the component of degree `d` is the product of the
/// components `(M_k)_d`, laid out degree by degree.
pub fn finite_product<F: Field>(
    ring: &Arc<super::ring::GradedRing<F>>,
    modules: &[Arc<GradedModule<F>>],
) -> Result<FiniteProduct<F>> {
    let sum = direct_sum(ring, modules)?;
    let mut order: Vec<(usize, usize)> =
        modules.iter().enumerate().flat_map(|(k, m)| (0..m.dim()).map(move |j| (k, j))).collect();
    order.sort_by(|a, b| modules[a.0].degree(a.1).cmp(modules[b.0].degree(b.1)).then(a.cmp(b)));
    let (module, position) = stacked(ring, modules, &order);
    let (_, projections) = structure_maps(&module, modules, &position)?;
    // comparison: assemble the projections into the sum
    let f = ring.field();
    let mut m = Matrix::zero(f, sum.module.dim(), module.dim());
    let sum_position: Vec<usize> = {
        let mut offs = Vec::new();
        let mut acc = 0;
        for x in modules {
            offs.push(acc);
            acc += x.dim();
        }
        offs
    };
    for (p, &(k, j)) in order.iter().enumerate() {
        m.set(sum_position[k] + j, p, f.one());
    }
    let to_sum = GradedMorphism::from_parts(module.clone(), sum.module.clone(), m)?;
    Ok(FiniteProduct { module, projections, to_sum })
}

/// `v ∘ u`.
pub fn compose<F: Field>(u: &GradedMorphism<F>, v: &GradedMorphism<F>) -> Result<GradedMorphism<F>> {
    u.then(v)
}

pub fn kernel_of<F: Field>(u: &GradedMorphism<F>) -> Result<(Arc<GradedModule<F>>, GradedMorphism<F>)> {
    u.kernel().to_module()
}

pub fn image_of<F: Field>(u: &GradedMorphism<F>) -> Result<(Arc<GradedModule<F>>, GradedMorphism<F>)> {
    u.image().to_module()
}

pub fn quotient_by<F: Field>(sub: &GradedSubmodule<F>) -> Result<(Arc<GradedModule<F>>, GradedMorphism<F>)> {
    sub.quotient()
}
