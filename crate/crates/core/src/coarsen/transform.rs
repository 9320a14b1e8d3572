//! The canonical maps between an object and its coarsen-refine or
//! refine-coarsen round trip. Ring and module versions share the matrix
//! construction; they differ only in what the matrix is wrapped in.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::refine::{LazyRefinedModule, RefinedModule, RefinedRing};
use super::CoarseningContext;
use crate::abgroup::GroupElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{ComponentwiseMap, GradedModule, GradedMorphism, GradedRing};
use crate::linalg::{self, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transformation {
    /// `X -> (X_[ψ])^[ψ]`, the injection of each component into its fiber sum.
    Alpha,
    /// `(Y^[ψ])_[ψ] -> Y`, the codiagonal.
    Beta,
    /// `Y -> (Y^[ψ])_[ψ]`, the diagonal; finite kernel only.
    Gamma,
    /// `(X_[ψ])^[ψ] -> X`, the projection onto the own summand.
    Delta,
}

impl Transformation {
    pub const ALL: [Transformation; 4] = [Self::Alpha, Self::Beta, Self::Gamma, Self::Delta];

    /// Whether the map starts from a G-graded object (as opposed to an H-graded one).
    pub fn takes_g_graded(self) -> bool {
        matches!(self, Self::Alpha | Self::Delta)
    }

    pub fn is_mono(self) -> bool {
        matches!(self, Self::Alpha | Self::Gamma)
    }
}

impl std::str::FromStr for Transformation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(Self::Alpha),
            "beta" => Ok(Self::Beta),
            "gamma" => Ok(Self::Gamma),
            "delta" => Ok(Self::Delta),
            _ => Err(Error::Parse(format!("unknown transformation {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Carrier {
    Ring,
    Module,
}

/// Matrix of a canonical map between an object with basis degrees `degrees`
/// and the round trip laid out by `index` (pairs of degree and base index).
fn transformation_matrix<F: Field>(
    field: &F,
    which: Transformation,
    degrees: &[GroupElement],
    index: &[(GroupElement, usize)],
) -> Matrix<F::Elem> {
    let n = degrees.len();
    let m = index.len();
    let position: BTreeMap<(&GroupElement, usize), usize> =
        index.iter().enumerate().map(|(p, (g, j))| ((g, *j), p)).collect();
    match which {
        Transformation::Alpha => {
            let mut a = Matrix::zero(field, m, n);
            for (j, d) in degrees.iter().enumerate() {
                a.set(position[&(d, j)], j, field.one());
            }
            a
        }
        Transformation::Delta => {
            let mut a = Matrix::zero(field, n, m);
            for (p, (g, j)) in index.iter().enumerate() {
                if *g == degrees[*j] {
                    a.set(*j, p, field.one());
                }
            }
            a
        }
        Transformation::Beta => {
            let mut a = Matrix::zero(field, n, m);
            for (p, (_, j)) in index.iter().enumerate() {
                a.set(*j, p, field.one());
            }
            a
        }
        Transformation::Gamma => {
            let mut a = Matrix::zero(field, m, n);
            for (p, (_, j)) in index.iter().enumerate() {
                a.set(p, *j, field.one());
            }
            a
        }
    }
}

/// A degree-preserving additive map between graded rings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMap<F: Field> {
    pub source: Arc<GradedRing<F>>,
    pub target: Arc<GradedRing<F>>,
    pub matrix: Matrix<F::Elem>,
}

impl<F: Field> RingMap<F> {
    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        self.matrix.apply(self.source.field(), v)
    }

    pub fn preserves_degrees(&self) -> bool {
        let f = self.source.field();
        (0..self.target.dim()).all(|k| {
            (0..self.source.dim())
                .all(|j| f.is_zero(self.matrix.get(k, j)) || self.target.degree(k) == self.source.degree(j))
        })
    }

    /// First basis pair `(i, j)` with `u(e_i e_j) != u(e_i) u(e_j)`.
    pub fn multiplicativity_defect(&self) -> Option<(usize, usize)> {
        let n = self.source.dim();
        for i in 0..n {
            for j in 0..n {
                let left = self.apply(self.source.product(i, j));
                let right = self
                    .target
                    .multiply(&self.matrix.column(i), &self.matrix.column(j));
                if left != right {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn preserves_unit(&self) -> bool {
        self.apply(self.source.one()) == self.target.one()
    }

    pub fn is_injective(&self) -> bool {
        linalg::rank(self.source.field(), &self.matrix) == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        linalg::rank(self.source.field(), &self.matrix) == self.target.dim()
    }
}

fn verify_shape<F: Field>(which: Transformation, u: &GradedMorphism<F>) -> Result<()> {
    if let Some(d) = u.defect() {
        return Err(Error::Soundness(format!("{which:?} is not a morphism: {d}")));
    }
    let ok = if which.is_mono() { u.is_injective() } else { u.is_surjective() };
    if !ok {
        return Err(Error::Soundness(format!("{which:?} has the wrong rank")));
    }
    Ok(())
}

impl CoarseningContext {
    /// `(M_[ψ])^[ψ]` over the ring of `M`, explicit.
    pub fn coarsen_refine<F: Field>(&self, m: &Arc<GradedModule<F>>) -> Result<RefinedModule<F>> {
        let coarse = Arc::new(self.coarsen_module(m)?);
        LazyRefinedModule::new(self, coarse, m.ring().clone())?.materialize(self, None)
    }

    /// `(N^[ψ])_[ψ]` over the ring of `N`, explicit, with the refinement.
    pub fn refine_coarsen<F: Field>(
        &self,
        n: &Arc<GradedModule<F>>,
        ring: &Arc<GradedRing<F>>,
    ) -> Result<(RefinedModule<F>, Arc<GradedModule<F>>)> {
        let refined = LazyRefinedModule::new(self, n.clone(), ring.clone())?.materialize(self, None)?;
        let coarse = Arc::new(self.coarsen_module_over(&refined.module, n.ring().clone())?);
        Ok((refined, coarse))
    }

    /// `α′(M): M -> (M_[ψ])^[ψ]`.
    pub fn alpha_prime<F: Field>(&self, m: &Arc<GradedModule<F>>) -> Result<GradedMorphism<F>> {
        self.g_side(Transformation::Alpha, m)
    }

    /// `δ′(M): (M_[ψ])^[ψ] -> M`.
    pub fn delta_prime<F: Field>(&self, m: &Arc<GradedModule<F>>) -> Result<GradedMorphism<F>> {
        self.g_side(Transformation::Delta, m)
    }

    /// `β′(N): (N^[ψ])_[ψ] -> N`, refinement taken over `ring`.
    pub fn beta_prime<F: Field>(&self, n: &Arc<GradedModule<F>>, ring: &Arc<GradedRing<F>>) -> Result<GradedMorphism<F>> {
        self.h_side(Transformation::Beta, n, ring)
    }

    /// `γ′(N): N -> (N^[ψ])_[ψ]`; only for a finite kernel.
    pub fn gamma_prime<F: Field>(&self, n: &Arc<GradedModule<F>>, ring: &Arc<GradedRing<F>>) -> Result<GradedMorphism<F>> {
        self.require_finite_kernel()?;
        self.h_side(Transformation::Gamma, n, ring)
    }

    /// Any of the four module maps; `ring` is the G-graded ring, needed for β′ and γ′.
    pub fn module_transformation<F: Field>(
        &self,
        which: Transformation,
        x: &Arc<GradedModule<F>>,
        ring: Option<&Arc<GradedRing<F>>>,
    ) -> Result<GradedMorphism<F>> {
        match which {
            Transformation::Alpha => self.alpha_prime(x),
            Transformation::Delta => self.delta_prime(x),
            _ => {
                let ring = ring.ok_or_else(|| {
                    Error::InvalidStructure(format!("{which:?} needs the G-graded ring to refine over"))
                })?;
                if which == Transformation::Beta {
                    self.beta_prime(x, ring)
                } else {
                    self.gamma_prime(x, ring)
                }
            }
        }
    }

    fn g_side<F: Field>(&self, which: Transformation, m: &Arc<GradedModule<F>>) -> Result<GradedMorphism<F>> {
        let y = self.coarsen_refine(m)?;
        let degrees: Vec<GroupElement> = m.basis().iter().map(|b| b.degree.clone()).collect();
        let a = transformation_matrix(m.field(), which, &degrees, &y.index);
        let u = if which == Transformation::Alpha {
            GradedMorphism::from_parts(m.clone(), y.module.clone(), a)?
        } else {
            GradedMorphism::from_parts(y.module.clone(), m.clone(), a)?
        };
        verify_shape(which, &u)?;
        Ok(u)
    }

    fn h_side<F: Field>(
        &self,
        which: Transformation,
        n: &Arc<GradedModule<F>>,
        ring: &Arc<GradedRing<F>>,
    ) -> Result<GradedMorphism<F>> {
        let (refined, coarse) = self.refine_coarsen(n, ring)?;
        let degrees: Vec<GroupElement> = n.basis().iter().map(|b| b.degree.clone()).collect();
        let a = transformation_matrix(n.field(), which, &degrees, &refined.index);
        let u = if which == Transformation::Gamma {
            GradedMorphism::from_parts(n.clone(), coarse, a)?
        } else {
            GradedMorphism::from_parts(coarse, n.clone(), a)?
        };
        verify_shape(which, &u)?;
        Ok(u)
    }

    /// `α′(M)` as blocks `M_d -> (M_[ψ])_{ψ(d)}`; defined for every kernel.
    pub fn alpha_prime_componentwise<F: Field>(&self, m: &GradedModule<F>) -> Result<ComponentwiseMap<F>> {
        let f = m.field();
        let coarse = self.coarsen_module(m)?;
        let blocks = m
            .components()
            .iter()
            .map(|(d, idx)| {
                let rows = coarse.component(&self.apply(d));
                let mut b = Matrix::zero(f, rows.len(), idx.len());
                for (c, j) in idx.iter().enumerate() {
                    let r = rows.iter().position(|k| k == j).expect("coarse component contains the fiber");
                    b.set(r, c, f.one());
                }
                (d.clone(), b)
            })
            .collect();
        Ok(ComponentwiseMap::new(blocks))
    }

    /// The ring maps `α(R)`, `δ(R)` (for G-graded `x`) and `β(S)`, `γ(S)` (for H-graded `x`).
    /// Only the shape is guaranteed; multiplicativity is reported by [`RingMap`].
    pub fn ring_transformation<F: Field>(&self, which: Transformation, x: &Arc<GradedRing<F>>) -> Result<RingMap<F>> {
        if which == Transformation::Gamma {
            self.require_finite_kernel()?;
        }
        let (round_trip, index): (Arc<GradedRing<F>>, Vec<(GroupElement, usize)>) = if which.takes_g_graded() {
            let coarse = Arc::new(self.coarsen_ring(x)?);
            let y = RefinedRing::new(self, coarse, None)?;
            (y.ring.clone(), y.index)
        } else {
            let y = RefinedRing::new(self, x.clone(), None)?;
            let degrees = y.ring.basis().iter().map(|b| self.apply(&b.degree)).collect();
            (Arc::new(y.ring.regraded(self.codomain().clone(), degrees)), y.index)
        };
        let degrees: Vec<GroupElement> = x.basis().iter().map(|b| b.degree.clone()).collect();
        let matrix = transformation_matrix(x.field(), which, &degrees, &index);
        let (source, target) = match which {
            Transformation::Alpha | Transformation::Gamma => (x.clone(), round_trip),
            _ => (round_trip, x.clone()),
        };
        let u = RingMap { source, target, matrix };
        let ok = if which.is_mono() { u.is_injective() } else { u.is_surjective() };
        if !u.preserves_degrees() || !ok {
            return Err(Error::Soundness(format!("ring map {which:?} has the wrong shape")));
        }
        Ok(u)
    }
}
