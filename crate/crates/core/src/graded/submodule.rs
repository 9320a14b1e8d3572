use std::collections::BTreeMap;
use std::sync::Arc;

use super::module::GradedModule;
use super::morphism::GradedMorphism;
use super::ring::BasisElement;
use crate::abgroup::GroupElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Matrix};

/// A graded submodule, stored as a reduced row echelon basis of each
/// component (in component-local coordinates). Zero components are omitted,
/// so equal submodules compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubmodule<F: Field> {
    parent: Arc<GradedModule<F>>,
    components: BTreeMap<GroupElement, Vec<Vec<F::Elem>>>,
}

fn echelon_rows<F: Field>(field: &F, rows: &[Vec<F::Elem>], dim: usize) -> (Vec<Vec<F::Elem>>, Vec<usize>) {
    if rows.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let ech = linalg::rref(field, &Matrix::from_rows(rows.to_vec(), dim));
    let basis = (0..ech.rank()).map(|r| ech.matrix.row(r).to_vec()).collect();
    (basis, ech.pivots)
}

impl<F: Field> GradedSubmodule<F> {
    pub fn zero(parent: Arc<GradedModule<F>>) -> Self {
        Self { parent, components: BTreeMap::new() }
    }

    pub fn whole(parent: Arc<GradedModule<F>>) -> Self {
        let f = parent.field().clone();
        let components = parent
            .components()
            .iter()
            .map(|(d, idx)| {
                let n = idx.len();
                let rows = (0..n)
                    .map(|i| {
                        let mut v = vec![f.zero(); n];
                        v[i] = f.one();
                        v
                    })
                    .collect();
                (d.clone(), rows)
            })
            .collect();
        Self { parent, components }
    }

    /// Per-degree spans given in component-local coordinates; no closure is applied.
    pub fn from_component_spans(
        parent: Arc<GradedModule<F>>,
        spans: BTreeMap<GroupElement, Vec<Vec<F::Elem>>>,
    ) -> Result<Self> {
        let f = parent.field().clone();
        let mut components = BTreeMap::new();
        for (d, rows) in spans {
            let n = parent.component_dim(&d);
            if rows.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch(format!("span vectors for degree {d} must have length {n}")));
            }
            let (basis, _) = echelon_rows(&f, &rows, n);
            if !basis.is_empty() {
                components.insert(d, basis);
            }
        }
        Ok(Self { parent, components })
    }

    /// The submodule generated by homogeneous vectors (global coordinates).
    pub fn generated_by(parent: Arc<GradedModule<F>>, vectors: &[Vec<F::Elem>]) -> Result<Self> {
        for v in vectors {
            if v.len() != parent.dim() {
                return Err(Error::DimensionMismatch(format!("vector of length {} in module of dim {}", v.len(), parent.dim())));
            }
            parent.homogeneous_degree(v)?;
        }
        Ok(Self::spanned_closed(parent, vectors))
    }

    /// Closure of homogeneous vectors under the action. Callers guarantee homogeneity.
    pub(crate) fn spanned_closed(parent: Arc<GradedModule<F>>, vectors: &[Vec<F::Elem>]) -> Self {
        let f = parent.field().clone();
        let ring = parent.ring().clone();
        let mut spans: BTreeMap<GroupElement, Vec<Vec<F::Elem>>> = BTreeMap::new();
        let mut queue: Vec<(GroupElement, Vec<F::Elem>)> = Vec::new();
        let push = |spans: &mut BTreeMap<GroupElement, Vec<Vec<F::Elem>>>,
                        queue: &mut Vec<(GroupElement, Vec<F::Elem>)>,
                        d: GroupElement,
                        local: Vec<F::Elem>| {
            let n = local.len();
            let rows = spans.entry(d.clone()).or_default();
            let before = rows.len();
            let mut candidate = rows.clone();
            candidate.push(local.clone());
            let (basis, _) = echelon_rows(&f, &candidate, n);
            if basis.len() > before {
                *rows = basis;
                queue.push((d, local));
            }
        };
        for v in vectors {
            if let Ok(Some(d)) = parent.homogeneous_degree(v) {
                let local = parent.restrict_component(&d, v);
                push(&mut spans, &mut queue, d, local);
            }
        }
        while let Some((d, local)) = queue.pop() {
            let global = parent.embed_component(&d, &local);
            for i in 0..ring.dim() {
                let w = parent.act_by_basis(i, &global);
                if parent.is_zero_vector(&w) {
                    continue;
                }
                let e = ring.group().add(&d, ring.degree(i));
                let local = parent.restrict_component(&e, &w);
                push(&mut spans, &mut queue, e, local);
            }
        }
        spans.retain(|_, rows| !rows.is_empty());
        Self { parent, components: spans }
    }

    pub fn parent(&self) -> &Arc<GradedModule<F>> {
        &self.parent
    }

    pub fn dim(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }

    pub fn component_dim(&self, d: &GroupElement) -> usize {
        self.components.get(d).map_or(0, Vec::len)
    }

    pub fn component_basis(&self, d: &GroupElement) -> &[Vec<F::Elem>] {
        self.components.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn components(&self) -> &BTreeMap<GroupElement, Vec<Vec<F::Elem>>> {
        &self.components
    }

    /// Basis in global coordinates, degree by degree.
    pub fn basis_vectors(&self) -> Vec<Vec<F::Elem>> {
        self.components
            .iter()
            .flat_map(|(d, rows)| rows.iter().map(move |r| self.parent.embed_component(d, r)))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.dim() == self.parent.dim()
    }

    /// Whether the homogeneous component-local vector lies in the span at `d`.
    fn contains_local(&self, d: &GroupElement, local: &[F::Elem]) -> bool {
        let f = self.parent.field();
        if linalg::is_zero_vec(f, local) {
            return true;
        }
        let rows = self.component_basis(d);
        if rows.is_empty() {
            return false;
        }
        let m = Matrix::from_rows(rows.to_vec(), local.len()).transpose();
        linalg::solve(f, &m, local).is_some()
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.parent
            .homogeneous_parts(v)
            .iter()
            .all(|(d, part)| self.contains_local(d, &self.parent.restrict_component(d, part)))
    }

    pub fn is_closed(&self) -> bool {
        let ring = self.parent.ring();
        self.components.iter().all(|(d, rows)| {
            rows.iter().all(|r| {
                let global = self.parent.embed_component(d, r);
                (0..ring.dim()).all(|i| {
                    let w = self.parent.act_by_basis(i, &global);
                    let e = ring.group().add(d, ring.degree(i));
                    self.contains_local(&e, &self.parent.restrict_component(&e, &w))
                })
            })
        })
    }

    pub fn is_submodule_of(&self, other: &GradedSubmodule<F>) -> bool {
        self.basis_vectors().iter().all(|v| other.contains(v))
    }

    /// The submodule as a module in its own right, with the inclusion.
    pub fn to_module(&self) -> Result<(Arc<GradedModule<F>>, GradedMorphism<F>)> {
        if !self.is_closed() {
            return Err(Error::InvalidStructure("span is not closed under the ring action".into()));
        }
        let parent = &self.parent;
        let f = parent.field().clone();
        let ring = parent.ring().clone();
        let mut basis = Vec::new();
        let mut offsets: BTreeMap<GroupElement, usize> = BTreeMap::new();
        let mut pivots: BTreeMap<GroupElement, Vec<usize>> = BTreeMap::new();
        for (d, rows) in &self.components {
            offsets.insert(d.clone(), basis.len());
            let (_, p) = echelon_rows(&f, rows, rows[0].len());
            pivots.insert(d.clone(), p);
            for _ in rows {
                basis.push(BasisElement::new(format!("s{}", basis.len()), d.clone()));
            }
        }
        let vectors = self.basis_vectors();
        let n = basis.len();
        let mut action = Vec::with_capacity(ring.dim() * n);
        for i in 0..ring.dim() {
            for v in &vectors {
                let w = parent.act_by_basis(i, v);
                let mut coords = vec![f.zero(); n];
                for (e, part) in parent.homogeneous_parts(&w) {
                    let local = parent.restrict_component(&e, &part);
                    // echelon rows: coordinates are the entries at the pivot columns
                    let off = offsets[&e];
                    for (r, &p) in pivots[&e].iter().enumerate() {
                        coords[off + r] = local[p].clone();
                    }
                }
                action.push(coords);
            }
        }
        let sub = Arc::new(GradedModule::from_parts(ring, basis, action));
        let inclusion = Matrix::columns_matrix(&f, &vectors, parent.dim());
        let inc = GradedMorphism::from_parts(sub.clone(), parent.clone(), inclusion)?;
        Ok((sub, inc))
    }

    /// `parent / self`, with the projection. Quotient basis vectors are the
    /// images of the non-pivot parent basis vectors of each component.
    pub fn quotient(&self) -> Result<(Arc<GradedModule<F>>, GradedMorphism<F>)> {
        if !self.is_closed() {
            return Err(Error::InvalidStructure("span is not closed under the ring action".into()));
        }
        let parent = &self.parent;
        let f = parent.field().clone();
        let ring = parent.ring().clone();
        let mut basis = Vec::new();
        // global parent index -> quotient index, for kept basis vectors
        let mut kept: BTreeMap<usize, usize> = BTreeMap::new();
        let mut pivots: BTreeMap<GroupElement, Vec<usize>> = BTreeMap::new();
        for (d, idx) in parent.components() {
            let rows = self.component_basis(d);
            let p = if rows.is_empty() { Vec::new() } else { echelon_rows(&f, rows, idx.len()).1 };
            for (local, &j) in idx.iter().enumerate() {
                if !p.contains(&local) {
                    kept.insert(j, basis.len());
                    basis.push(parent.basis()[j].clone());
                }
            }
            pivots.insert(d.clone(), p);
        }
        let n = basis.len();
        // projection of a global vector: reduce each component by the echelon rows
        let project = |v: &[F::Elem]| -> Vec<F::Elem> {
            let mut out = vec![f.zero(); n];
            for (d, part) in parent.homogeneous_parts(v) {
                let mut local = parent.restrict_component(&d, &part);
                for (row, &p) in self.component_basis(&d).iter().zip(&pivots[&d]) {
                    let c = local[p].clone();
                    if !f.is_zero(&c) {
                        for (x, y) in local.iter_mut().zip(row) {
                            *x = f.sub(x, &f.mul(&c, y));
                        }
                    }
                }
                for (l, &j) in parent.component(&d).iter().enumerate() {
                    if let Some(&q) = kept.get(&j) {
                        out[q] = local[l].clone();
                    }
                }
            }
            out
        };
        let kept_list: Vec<usize> = kept.keys().copied().collect();
        let mut action = vec![Vec::new(); ring.dim() * n];
        for i in 0..ring.dim() {
            for &j in &kept_list {
                action[i * n + kept[&j]] = project(parent.act_basis(i, j));
            }
        }
        let q = Arc::new(GradedModule::from_parts(ring, basis, action));
        let columns: Vec<Vec<F::Elem>> = (0..parent.dim()).map(|j| project(&parent.unit_vector(j))).collect();
        let proj = GradedMorphism::from_parts(parent.clone(), q.clone(), Matrix::columns_matrix(&f, &columns, n))?;
        Ok((q, proj))
    }
}
