use std::collections::BTreeMap;
use std::sync::Arc;

use super::module::GradedModule;
use super::submodule::GradedSubmodule;
use crate::abgroup::GroupElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Matrix};

/// A degree-zero module map; `matrix` is `target.dim() x source.dim()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMorphism<F: Field> {
    source: Arc<GradedModule<F>>,
    target: Arc<GradedModule<F>>,
    matrix: Matrix<F::Elem>,
}

impl<F: Field> GradedMorphism<F> {
    /// Rejects matrices that move degrees or do not commute with the action.
    pub fn new(source: Arc<GradedModule<F>>, target: Arc<GradedModule<F>>, matrix: Matrix<F::Elem>) -> Result<Self> {
        let u = Self::from_parts(source, target, matrix)?;
        if let Some(defect) = u.defect() {
            return Err(Error::NotAMorphism(defect));
        }
        Ok(u)
    }

    /// Shape and ring checks only.
    pub(crate) fn from_parts(
        source: Arc<GradedModule<F>>,
        target: Arc<GradedModule<F>>,
        matrix: Matrix<F::Elem>,
    ) -> Result<Self> {
        if !source.same_ring(&target) {
            return Err(Error::RingMismatch("source and target are modules over different rings".into()));
        }
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        Ok(Self { source, target, matrix })
    }

    /// First failed condition, if any.
    pub fn defect(&self) -> Option<String> {
        let f = self.source.field();
        for k in 0..self.target.dim() {
            for j in 0..self.source.dim() {
                if !f.is_zero(self.matrix.get(k, j)) && self.target.degree(k) != self.source.degree(j) {
                    return Some(format!(
                        "entry ({k},{j}) maps degree {} to degree {}",
                        self.source.degree(j),
                        self.target.degree(k)
                    ));
                }
            }
        }
        let ring = self.source.ring();
        for i in 0..ring.dim() {
            for j in 0..self.source.dim() {
                let left = self.apply(self.source.act_basis(i, j));
                let right = self.target.act_by_basis(i, &self.matrix.column(j));
                if left != right {
                    return Some(format!(
                        "does not commute with {} acting on {}",
                        ring.basis()[i].name,
                        self.source.basis()[j].name
                    ));
                }
            }
        }
        None
    }

    pub fn identity(m: Arc<GradedModule<F>>) -> Self {
        let matrix = Matrix::identity(m.field(), m.dim());
        Self { source: m.clone(), target: m, matrix }
    }

    pub fn zero(source: Arc<GradedModule<F>>, target: Arc<GradedModule<F>>) -> Self {
        let matrix = Matrix::zero(source.field(), target.dim(), source.dim());
        Self { source, target, matrix }
    }

    pub fn source(&self) -> &Arc<GradedModule<F>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedModule<F>> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<F::Elem> {
        &self.matrix
    }

    pub fn field(&self) -> &F {
        self.source.field()
    }

    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        self.matrix.apply(self.field(), v)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GradedMorphism<F>) -> Result<GradedMorphism<F>> {
        if !(Arc::ptr_eq(&self.target, &next.source) || self.target == next.source) {
            return Err(Error::ModuleMismatch("composition: target of the first map is not the source of the second".into()));
        }
        let matrix = next.matrix.mul(self.field(), &self.matrix);
        Ok(Self { source: self.source.clone(), target: next.target.clone(), matrix })
    }

    pub fn add(&self, other: &GradedMorphism<F>) -> Result<GradedMorphism<F>> {
        self.check_parallel(other)?;
        Ok(Self { matrix: self.matrix.add(self.field(), &other.matrix), ..self.clone() })
    }

    pub fn scale(&self, c: &F::Elem) -> GradedMorphism<F> {
        Self { matrix: self.matrix.scale(self.field(), c), ..self.clone() }
    }

    fn check_parallel(&self, other: &GradedMorphism<F>) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ModuleMismatch("morphisms are not parallel".into()));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero(self.field())
    }

    pub fn rank(&self) -> usize {
        linalg::rank(self.field(), &self.matrix)
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn kernel(&self) -> GradedSubmodule<F> {
        let vectors = linalg::nullspace(self.field(), &self.matrix);
        // nullspace vectors of a degree-preserving map split into homogeneous parts
        let parts: Vec<Vec<F::Elem>> =
            vectors.iter().flat_map(|v| self.source.homogeneous_parts(v).into_values()).collect();
        GradedSubmodule::spanned_closed(self.source.clone(), &parts)
    }

    pub fn image(&self) -> GradedSubmodule<F> {
        let columns: Vec<Vec<F::Elem>> = (0..self.source.dim()).map(|j| self.matrix.column(j)).collect();
        GradedSubmodule::spanned_closed(self.target.clone(), &columns)
    }

    /// Block of this map from `source_d` to `target_d`.
    pub fn block(&self, d: &GroupElement) -> Matrix<F::Elem> {
        self.matrix.submatrix(self.target.component(d), self.source.component(d))
    }

    /// Entries flattened row-major; coordinates in Hom spaces use this layout.
    pub fn flatten(&self) -> Vec<F::Elem> {
        self.matrix.entries().to_vec()
    }
}

/// A family of linear maps `source_d -> target_d`, one per degree `d`, where
/// the target may be known only through its component dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentwiseMap<F: Field> {
    pub blocks: BTreeMap<GroupElement, Matrix<F::Elem>>,
}

impl<F: Field> ComponentwiseMap<F> {
    pub fn new(blocks: BTreeMap<GroupElement, Matrix<F::Elem>>) -> Self {
        Self { blocks }
    }

    pub fn is_zero(&self, field: &F) -> bool {
        self.blocks.values().all(|b| b.is_zero(field))
    }

    pub fn block(&self, d: &GroupElement) -> Option<&Matrix<F::Elem>> {
        self.blocks.get(d)
    }

    /// `self ∘ f` for an explicit `f: M' -> M`, where `self` is defined on the components of `M`.
    pub fn precompose(&self, field: &F, f: &GradedMorphism<F>, target_dim: impl Fn(&GroupElement) -> usize) -> Self {
        let blocks = f
            .source()
            .components()
            .keys()
            .map(|d| {
                let fb = f.block(d);
                let b = match self.blocks.get(d) {
                    Some(m) if fb.rows() > 0 => m.mul(field, &fb),
                    _ => Matrix::zero(field, target_dim(d), fb.cols()),
                };
                (d.clone(), b)
            })
            .collect();
        Self { blocks }
    }

    /// Applies `k_d` after each block.
    pub fn postcompose(&self, field: &F, k: impl Fn(&GroupElement) -> Matrix<F::Elem>) -> Self {
        let blocks = self.blocks.iter().map(|(d, b)| (d.clone(), k(d).mul(field, b))).collect();
        Self { blocks }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::FgAbGroup;
    use crate::field::PrimeField;
    use crate::graded::ring::GradedRing;

    #[test]
    fn rejects_degree_moving_matrix() {
        let f2 = PrimeField::new(2).unwrap();
        let r = Arc::new(GradedRing::group_algebra(f2, FgAbGroup::cyclic(2).unwrap()).unwrap());
        let m = Arc::new(GradedModule::regular(r));
        let swap = Matrix::from_rows(vec![vec![0, 1], vec![1, 0]], 2);
        assert!(matches!(GradedMorphism::new(m.clone(), m.clone(), swap), Err(Error::NotAMorphism(_))));
        let id = GradedMorphism::identity(m.clone());
        assert!(id.is_isomorphism());
        assert_eq!(id.then(&id).unwrap(), id);
        assert_eq!(id.kernel().dim(), 0);
        assert_eq!(id.image().dim(), 2);
    }
}
