//! The two adjunctions between coarsening and refinement.
//!
//! Coarsening is left adjoint to refinement for every ψ, with unit `α′` and
//! counit `β′`. When the kernel is finite, refinement is also left adjoint
//! to coarsening, with unit `γ′` and counit `δ′`.

use std::sync::Arc;

use serde::Serialize;

use super::refine::{LazyRefinedModule, RefinedModule};
use super::CoarseningContext;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{hom_components, hom_space, ComponentwiseMap, GradedModule, GradedMorphism, HomSpace};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleCheck {
    /// Identity on the coarsened (resp. refined) side.
    pub first: bool,
    /// `None` when it cannot be checked explicitly (infinite kernel).
    pub second: Option<bool>,
}

impl TriangleCheck {
    pub fn holds(&self) -> bool {
        self.first && self.second != Some(false)
    }
}

fn mismatch(what: &str) -> Error {
    Error::DegreeMismatch(format!("{what} does not have the expected source and target"))
}

/// Blocks `M_d -> N_{ψ(d)}` of a matrix `M -> N` (indices of `M` and `N`).
fn forward_blocks<F: Field>(
    ctx: &CoarseningContext,
    m: &GradedModule<F>,
    n: &GradedModule<F>,
    matrix: &Matrix<F::Elem>,
) -> ComponentwiseMap<F> {
    let blocks = m
        .components()
        .iter()
        .map(|(d, cols)| (d.clone(), matrix.submatrix(n.component(&ctx.apply(d)), cols)))
        .collect();
    ComponentwiseMap::new(blocks)
}

/// Hom bijection `Hom_H(M_[ψ], N) ≅ Hom_G(M, N^[ψ])` for explicit `M` (G-graded)
/// and `N` (H-graded over `R_[ψ]`); `N^[ψ]` stays lazy.
pub struct CoarsenRefineAdjunction<'a, F: Field> {
    ctx: &'a CoarseningContext,
    m: Arc<GradedModule<F>>,
    n: Arc<GradedModule<F>>,
    m_coarse: Arc<GradedModule<F>>,
    n_refined: LazyRefinedModule<F>,
}

impl<'a, F: Field> CoarsenRefineAdjunction<'a, F> {
    pub fn new(ctx: &'a CoarseningContext, m: Arc<GradedModule<F>>, n: Arc<GradedModule<F>>) -> Result<Self> {
        let n_refined = LazyRefinedModule::new(ctx, n.clone(), m.ring().clone())?;
        let m_coarse = Arc::new(ctx.coarsen_module_over(&m, n.ring().clone())?);
        Ok(Self { ctx, m, n, m_coarse, n_refined })
    }

    pub fn coarsened_source(&self) -> &Arc<GradedModule<F>> {
        &self.m_coarse
    }

    pub fn refined_target(&self) -> &LazyRefinedModule<F> {
        &self.n_refined
    }

    /// `Hom_H(M_[ψ], N)`.
    pub fn coarse_hom(&self) -> Result<HomSpace<F>> {
        hom_space(&self.m_coarse, &self.n)
    }

    /// A basis of `Hom_G(M, N^[ψ])`.
    pub fn fine_hom(&self) -> Result<Vec<ComponentwiseMap<F>>> {
        hom_components(self.m.as_ref(), &self.n_refined)
    }

    /// `u ↦ u^[ψ] ∘ α′(M)`: the blocks of `u` from `M_d` into `N_{ψ(d)}`.
    pub fn forward(&self, u: &GradedMorphism<F>) -> Result<ComponentwiseMap<F>> {
        if **u.source() != *self.m_coarse || **u.target() != *self.n {
            return Err(mismatch("forward transpose input"));
        }
        Ok(forward_blocks(self.ctx, &self.m, &self.n, u.matrix()))
    }

    /// `w ↦ β′(N) ∘ w_[ψ]`: the blocks summed along each fiber.
    pub fn backward(&self, w: &ComponentwiseMap<F>) -> Result<GradedMorphism<F>> {
        let f = self.m.field();
        let mut matrix = Matrix::zero(f, self.n.dim(), self.m.dim());
        for (d, cols) in self.m.components() {
            let rows = self.n.component(&self.ctx.apply(d));
            let block = w.block(d).ok_or_else(|| mismatch("backward transpose input"))?;
            if block.rows() != rows.len() || block.cols() != cols.len() {
                return Err(mismatch("backward transpose input"));
            }
            for (r, &k) in rows.iter().enumerate() {
                for (c, &j) in cols.iter().enumerate() {
                    matrix.set(k, j, block.get(r, c).clone());
                }
            }
        }
        GradedMorphism::from_parts(self.m_coarse.clone(), self.n.clone(), matrix)
    }

    /// Naturality square for `f: M' -> M` and `k: N -> N'` at `u`.
    pub fn natural_at(&self, f: &GradedMorphism<F>, k: &GradedMorphism<F>, u: &GradedMorphism<F>) -> Result<bool> {
        let field = self.m.field();
        if **f.target() != *self.m || **k.source() != *self.n {
            return Err(mismatch("naturality test morphism"));
        }
        let f_coarse = self.ctx.coarsen_morphism_over(f, self.n.ring().clone())?;
        let composite = f_coarse.then(u)?.then(k)?;
        let left = forward_blocks(self.ctx, f.source(), k.target(), composite.matrix());
        let right = self
            .forward(u)?
            .precompose(field, f, |d| self.n.component_dim(&self.ctx.apply(d)))
            .postcompose(field, |d| k.block(&self.ctx.apply(d)));
        Ok(left == right)
    }

    /// Whether both transposes are mutually inverse on the Hom bases.
    pub fn bijection_holds(&self) -> Result<(usize, usize, bool)> {
        let coarse = self.coarse_hom()?;
        let fine = self.fine_hom()?;
        let mut ok = coarse.dim() == fine.len();
        for u in &coarse.basis {
            ok &= self.backward(&self.forward(u)?)? == *u;
        }
        for w in &fine {
            ok &= self.forward(&self.backward(w)?)? == *w;
        }
        Ok((coarse.dim(), fine.len(), ok))
    }

    /// `β′(M_[ψ]) ∘ α′(M)_[ψ] = id`, always (through the transposes), and
    /// `N^[ψ]`'s triangle explicitly when the kernel is finite.
    pub fn triangles(&self) -> Result<TriangleCheck> {
        let ctx = self.ctx;
        let alpha = ctx.alpha_prime_componentwise(&self.m)?;
        let id_adj = CoarsenRefineAdjunction::new(ctx, self.m.clone(), self.m_coarse.clone())?;
        let first = id_adj.backward(&alpha)?.matrix() == &Matrix::identity(self.m.field(), self.m.dim());
        let second = if ctx.kernel_is_finite() {
            let ring = self.m.ring();
            let refined = self.n_refined.materialize(ctx, None)?;
            let unit = ctx.alpha_prime(&refined.module)?;
            let y = ctx.coarsen_refine(&refined.module)?;
            let counit = ctx.beta_prime(&self.n, ring)?;
            let refined_counit = y.refine_morphism(&refined, &counit)?;
            Some(unit.then(&refined_counit)?.matrix() == &Matrix::identity(self.m.field(), refined.module.dim()))
        } else {
            None
        };
        Ok(TriangleCheck { first, second })
    }

    /// Transpose of `id_{M_[ψ]}` equals `α′(M)`.
    pub fn unit_check(ctx: &CoarseningContext, m: &Arc<GradedModule<F>>) -> Result<bool> {
        let coarse = Arc::new(ctx.coarsen_module(m)?);
        let adj = CoarsenRefineAdjunction::new(ctx, m.clone(), coarse.clone())?;
        Ok(adj.forward(&GradedMorphism::identity(coarse))? == ctx.alpha_prime_componentwise(m)?)
    }
}

/// Hom bijection `Hom_G(N^[ψ], M) ≅ Hom_H(N, M_[ψ])`, finite kernel only.
pub struct RefineCoarsenAdjunction<'a, F: Field> {
    ctx: &'a CoarseningContext,
    n: Arc<GradedModule<F>>,
    m: Arc<GradedModule<F>>,
    n_refined: RefinedModule<F>,
    m_coarse: Arc<GradedModule<F>>,
}

impl<'a, F: Field> RefineCoarsenAdjunction<'a, F> {
    pub fn new(ctx: &'a CoarseningContext, n: Arc<GradedModule<F>>, m: Arc<GradedModule<F>>) -> Result<Self> {
        ctx.require_finite_kernel()?;
        let n_refined = LazyRefinedModule::new(ctx, n.clone(), m.ring().clone())?.materialize(ctx, None)?;
        let m_coarse = Arc::new(ctx.coarsen_module_over(&m, n.ring().clone())?);
        Ok(Self { ctx, n, m, n_refined, m_coarse })
    }

    pub fn refined_source(&self) -> &RefinedModule<F> {
        &self.n_refined
    }

    /// `Hom_G(N^[ψ], M)`.
    pub fn fine_hom(&self) -> Result<HomSpace<F>> {
        hom_space(&self.n_refined.module, &self.m)
    }

    /// `Hom_H(N, M_[ψ])`.
    pub fn coarse_hom(&self) -> Result<HomSpace<F>> {
        hom_space(&self.n, &self.m_coarse)
    }

    /// `v ↦ v_[ψ] ∘ γ′(N)`: column `j` is the sum of the columns `(g, j)`.
    pub fn forward(&self, v: &GradedMorphism<F>) -> Result<GradedMorphism<F>> {
        if **v.source() != *self.n_refined.module || **v.target() != *self.m {
            return Err(mismatch("forward transpose input"));
        }
        let f = self.m.field();
        let mut matrix = Matrix::zero(f, self.m.dim(), self.n.dim());
        for (p, (_, j)) in self.n_refined.index.iter().enumerate() {
            for k in 0..self.m.dim() {
                let x = f.add(matrix.get(k, *j), v.matrix().get(k, p));
                matrix.set(k, *j, x);
            }
        }
        GradedMorphism::from_parts(self.n.clone(), self.m_coarse.clone(), matrix)
    }

    /// `u ↦ δ′(M) ∘ u^[ψ]`: column `(g, j)` keeps the part of `u(e_j)` in degree `g`.
    pub fn backward(&self, u: &GradedMorphism<F>) -> Result<GradedMorphism<F>> {
        if **u.source() != *self.n || **u.target() != *self.m_coarse {
            return Err(mismatch("backward transpose input"));
        }
        let f = self.m.field();
        let mut matrix = Matrix::zero(f, self.m.dim(), self.n_refined.module.dim());
        for (p, (g, j)) in self.n_refined.index.iter().enumerate() {
            for &k in self.m.component(g) {
                matrix.set(k, p, u.matrix().get(k, *j).clone());
            }
        }
        GradedMorphism::from_parts(self.n_refined.module.clone(), self.m.clone(), matrix)
    }

    pub fn bijection_holds(&self) -> Result<(usize, usize, bool)> {
        let fine = self.fine_hom()?;
        let coarse = self.coarse_hom()?;
        let mut ok = fine.dim() == coarse.dim();
        for v in &fine.basis {
            ok &= self.backward(&self.forward(v)?)? == *v;
        }
        for u in &coarse.basis {
            ok &= self.forward(&self.backward(u)?)? == *u;
        }
        Ok((fine.dim(), coarse.dim(), ok))
    }

    /// `δ′(M)_[ψ] ∘ γ′(M_[ψ]) = id` and `δ′(N^[ψ]) ∘ γ′(N)^[ψ] = id`.
    pub fn triangles(&self) -> Result<TriangleCheck> {
        let ctx = self.ctx;
        let ring = self.m.ring();
        let gamma_m = ctx.gamma_prime(&self.m_coarse, ring)?;
        let delta_m = ctx.coarsen_morphism_over(&ctx.delta_prime(&self.m)?, self.n.ring().clone())?;
        let first = gamma_m.then(&delta_m)?.matrix() == &Matrix::identity(self.m.field(), self.m.dim());

        let p = &self.n_refined;
        let gamma_n = ctx.gamma_prime(&self.n, ring)?;
        let y = ctx.coarsen_refine(&p.module)?;
        let refined_gamma = p.refine_morphism(&y, &gamma_n)?;
        let delta_p = ctx.delta_prime(&p.module)?;
        let second = refined_gamma.then(&delta_p)?.matrix() == &Matrix::identity(self.m.field(), p.module.dim());
        Ok(TriangleCheck { first, second: Some(second) })
    }
}
