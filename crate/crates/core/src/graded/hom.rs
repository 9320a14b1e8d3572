use std::collections::BTreeMap;
use std::sync::Arc;

use super::module::GradedModule;
use super::morphism::{ComponentwiseMap, GradedMorphism};
use super::ring::GradedRing;
use crate::abgroup::GroupElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Matrix};

/// A graded module known through its components and the action between
/// them. Components may be infinitely many; only those queried are built.
pub trait GradedView<F: Field> {
    fn ring(&self) -> &Arc<GradedRing<F>>;
    fn component_dim(&self, d: &GroupElement) -> usize;
    /// Matrix of `r_i`: component `d` to component `d + deg(r_i)`.
    fn action_block(&self, i: usize, d: &GroupElement) -> Matrix<F::Elem>;
}

impl<F: Field> GradedView<F> for GradedModule<F> {
    fn ring(&self) -> &Arc<GradedRing<F>> {
        GradedModule::ring(self)
    }

    fn component_dim(&self, d: &GroupElement) -> usize {
        GradedModule::component_dim(self, d)
    }

    fn action_block(&self, i: usize, d: &GroupElement) -> Matrix<F::Elem> {
        let f = self.field();
        let e = self.ring().group().add(d, self.ring().degree(i));
        let src = self.component(d);
        let dst = self.component(&e);
        let mut m = Matrix::zero(f, dst.len(), src.len());
        for (c, &j) in src.iter().enumerate() {
            let v = self.act_basis(i, j);
            for (r, &k) in dst.iter().enumerate() {
                m.set(r, c, v[k].clone());
            }
        }
        m
    }
}

/// A basis of degree-zero morphisms `source -> target`, one block per
/// degree of `source`. Works for any target view.
pub fn hom_components<F: Field, V: GradedView<F> + ?Sized>(
    source: &GradedModule<F>,
    target: &V,
) -> Result<Vec<ComponentwiseMap<F>>> {
    if !(Arc::ptr_eq(source.ring(), target.ring()) || source.ring() == target.ring()) {
        return Err(Error::RingMismatch("Hom between modules over different rings".into()));
    }
    let f = source.field();
    let ring = source.ring();
    let group = ring.group();
    // unknowns: the entries of each block X_d, row-major
    let mut offsets: BTreeMap<GroupElement, (usize, usize, usize)> = BTreeMap::new();
    let mut nvars = 0;
    for (d, idx) in source.components() {
        let rows = target.component_dim(d);
        offsets.insert(d.clone(), (nvars, rows, idx.len()));
        nvars += rows * idx.len();
    }
    let mut equations: Vec<Vec<F::Elem>> = Vec::new();
    for (d, idx) in source.components() {
        let (off_d, rows_d, _) = offsets[d];
        for i in 0..ring.dim() {
            let e = group.add(d, ring.degree(i));
            let a_target = target.action_block(i, d);
            let rows_e = target.component_dim(&e);
            if rows_e == 0 {
                continue;
            }
            let a_source = GradedView::action_block(source, i, d);
            for (c, _) in idx.iter().enumerate() {
                // X_e (r_i m_c) - r_i X_d(m_c) = 0, one equation per row of component e
                for k in 0..rows_e {
                    let mut eq = vec![f.zero(); nvars];
                    if let Some(&(off_e, _, cols_e)) = offsets.get(&e) {
                        for l in 0..cols_e {
                            let a = a_source.get(l, c);
                            if !f.is_zero(a) {
                                let x = off_e + k * cols_e + l;
                                eq[x] = f.add(&eq[x], a);
                            }
                        }
                    }
                    for l in 0..rows_d {
                        let a = a_target.get(k, l);
                        if !f.is_zero(a) {
                            let x = off_d + l * idx.len() + c;
                            eq[x] = f.sub(&eq[x], a);
                        }
                    }
                    if !linalg::is_zero_vec(f, &eq) {
                        equations.push(eq);
                    }
                }
            }
        }
    }
    let solutions = if equations.is_empty() {
        (0..nvars)
            .map(|x| {
                let mut v = vec![f.zero(); nvars];
                v[x] = f.one();
                v
            })
            .collect()
    } else {
        linalg::nullspace(f, &Matrix::from_rows(equations, nvars))
    };
    Ok(solutions
        .into_iter()
        .map(|s| {
            let blocks = offsets
                .iter()
                .map(|(d, &(off, rows, cols))| {
                    let data: Vec<Vec<F::Elem>> =
                        (0..rows).map(|r| s[off + r * cols..off + (r + 1) * cols].to_vec()).collect();
                    (d.clone(), Matrix::from_rows(data, cols))
                })
                .collect();
            ComponentwiseMap::new(blocks)
        })
        .collect())
}

/// A basis of `Hom(source, target)` in degree zero.
#[derive(Clone, Debug)]
pub struct HomSpace<F: Field> {
    pub source: Arc<GradedModule<F>>,
    pub target: Arc<GradedModule<F>>,
    pub basis: Vec<GradedMorphism<F>>,
}

impl<F: Field> HomSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `u` in the basis, if `u` lies in the space.
    pub fn coordinates(&self, u: &GradedMorphism<F>) -> Option<Vec<F::Elem>> {
        let f = self.source.field();
        if self.basis.is_empty() {
            return u.is_zero().then(Vec::new);
        }
        let cols: Vec<Vec<F::Elem>> = self.basis.iter().map(GradedMorphism::flatten).collect();
        let n = cols[0].len();
        linalg::solve(f, &Matrix::columns_matrix(f, &cols, n), &u.flatten())
    }

    pub fn combination(&self, coeffs: &[F::Elem]) -> GradedMorphism<F> {
        let f = self.source.field();
        let mut out = GradedMorphism::zero(self.source.clone(), self.target.clone());
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !f.is_zero(c) {
                out = out.add(&b.scale(c)).expect("parallel");
            }
        }
        out
    }
}

/// Assembles a componentwise map into an explicit morphism.
pub fn assemble<F: Field>(
    source: &Arc<GradedModule<F>>,
    target: &Arc<GradedModule<F>>,
    map: &ComponentwiseMap<F>,
) -> Result<GradedMorphism<F>> {
    let f = source.field();
    let mut matrix = Matrix::zero(f, target.dim(), source.dim());
    for (d, block) in &map.blocks {
        let (rows, cols) = (target.component(d), source.component(d));
        if block.rows() != rows.len() || block.cols() != cols.len() {
            return Err(Error::DimensionMismatch(format!("block at degree {d} has the wrong shape")));
        }
        for (r, &k) in rows.iter().enumerate() {
            for (c, &j) in cols.iter().enumerate() {
                matrix.set(k, j, block.get(r, c).clone());
            }
        }
    }
    GradedMorphism::from_parts(source.clone(), target.clone(), matrix)
}

/// Splits an explicit morphism into blocks over the source support.
pub fn disassemble<F: Field>(u: &GradedMorphism<F>) -> ComponentwiseMap<F> {
    ComponentwiseMap::new(u.source().components().keys().map(|d| (d.clone(), u.block(d))).collect())
}

pub fn hom_space<F: Field>(source: &Arc<GradedModule<F>>, target: &Arc<GradedModule<F>>) -> Result<HomSpace<F>> {
    let maps = hom_components(source.as_ref(), target.as_ref())?;
    let basis = maps.iter().map(|m| assemble(source, target, m)).collect::<Result<Vec<_>>>()?;
    Ok(HomSpace { source: source.clone(), target: target.clone(), basis })
}
