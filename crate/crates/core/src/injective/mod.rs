//! Graded injectivity for small algebras over finite fields.
//!
//! Injectivity is decided by the graded Baer criterion: `M` is injective iff
//! for every graded ideal `I` and every `g`, each degree-zero morphism
//! `I -> M(g)` extends to `R -> M(g)`. Graded ideals are enumerated
//! exhaustively, so the ring must be small; beyond the guard the check
//! refuses instead of sampling. The Laurent ring `K[t, t^-1]`, which is
//! infinite-dimensional, is handled separately by a certificate.

mod laurent;

pub use laurent::{laurent_counterexample, LaurentCertificate, LaurentCheck, LaurentPoly};

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::abgroup::GroupElement;
use crate::coarsen::CoarseningContext;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{hom_space, GradedModule, GradedMorphism, GradedRing, GradedSubmodule};
use crate::linalg::{self, Matrix};

/// A homogeneous ideal: a graded submodule of the regular module.
#[derive(Clone, Debug)]
pub struct GradedIdeal<F: Field> {
    submodule: GradedSubmodule<F>,
}

impl<F: Field> GradedIdeal<F> {
    pub fn new(submodule: GradedSubmodule<F>) -> Result<Self> {
        let parent = submodule.parent();
        let regular = GradedModule::regular(parent.ring().clone());
        if parent.basis() != regular.basis() || parent.action_constants() != regular.action_constants() {
            return Err(Error::ModuleMismatch("an ideal must live in the regular module".into()));
        }
        if !submodule.is_closed() {
            return Err(Error::InvalidStructure("span is not closed under multiplication".into()));
        }
        Ok(Self { submodule })
    }

    pub fn submodule(&self) -> &GradedSubmodule<F> {
        &self.submodule
    }

    pub fn dim(&self) -> usize {
        self.submodule.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.submodule.is_zero()
    }

    pub fn is_whole(&self) -> bool {
        self.submodule.is_whole()
    }

    /// Basis in ring coordinates.
    pub fn basis(&self) -> Vec<Vec<F::Elem>> {
        self.submodule.basis_vectors()
    }
}

/// Largest ring dimension accepted by default for a field of order `q`.
pub fn default_guard(q: usize) -> usize {
    match q {
        2 => 6,
        3 => 4,
        _ => 3,
    }
}

fn field_order<F: Field>(field: &F) -> Result<usize> {
    field
        .order()
        .ok_or_else(|| Error::UnsupportedField(format!("{} is infinite; ideals cannot be enumerated", field.name())))
}

fn resolve_guard<F: Field>(ring: &GradedRing<F>, guard: Option<usize>) -> Result<()> {
    let q = field_order(ring.field())?;
    let limit = guard.unwrap_or_else(|| default_guard(q));
    if ring.dim() > limit {
        return Err(Error::GuardExceeded(format!("ring of dimension {} over {} exceeds the guard {limit}", ring.dim(), ring.field().name())));
    }
    Ok(())
}

/// Every subspace of `F^n`, each as its reduced row echelon basis.
/// Ordered by dimension, then pivot set, then entries.
pub fn subspaces<F: Field>(field: &F, n: usize) -> Result<Vec<Vec<Vec<F::Elem>>>> {
    let elements = field.elements().ok_or_else(|| Error::UnsupportedField(field.name()))?;
    let mut out = Vec::new();
    for k in 0..=n {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let pivots: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            // free slots: row r, column c > pivot r, c not a pivot
            let slots: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &p)| ((p + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let mut counter = vec![0usize; slots.len()];
            loop {
                let mut rows = vec![vec![field.zero(); n]; k];
                for (r, &p) in pivots.iter().enumerate() {
                    rows[r][p] = field.one();
                }
                for (s, &(r, c)) in slots.iter().enumerate() {
                    rows[r][c] = elements[counter[s]].clone();
                }
                out.push(rows);
                let mut i = 0;
                while i < counter.len() {
                    counter[i] += 1;
                    if counter[i] < elements.len() {
                        break;
                    }
                    counter[i] = 0;
                    i += 1;
                }
                if i == counter.len() {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// All graded ideals of `R`, ordered by dimension; deterministic.
pub fn enumerate_graded_ideals<F: Field>(ring: &Arc<GradedRing<F>>, guard: Option<usize>) -> Result<Vec<GradedIdeal<F>>> {
    resolve_guard(ring, guard)?;
    let f = ring.field();
    let regular = Arc::new(GradedModule::regular(ring.clone()));
    let components: Vec<(GroupElement, Vec<Vec<Vec<F::Elem>>>)> = regular
        .components()
        .iter()
        .map(|(d, idx)| subspaces(f, idx.len()).map(|s| (d.clone(), s)))
        .collect::<Result<_>>()?;
    let mut choice = vec![0usize; components.len()];
    let mut found = Vec::new();
    loop {
        let spans: BTreeMap<GroupElement, Vec<Vec<F::Elem>>> =
            components.iter().zip(&choice).map(|((d, subs), &c)| (d.clone(), subs[c].clone())).collect();
        let sub = GradedSubmodule::from_component_spans(regular.clone(), spans)?;
        if sub.is_closed() {
            found.push(GradedIdeal { submodule: sub });
        }
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < components[i].1.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
    found.sort_by_key(GradedIdeal::dim);
    Ok(found)
}

/// A morphism `u: I -> M(g)` that does not extend to `R -> M(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaerWitness<F: Field> {
    /// Basis of `I` in ring coordinates.
    pub ideal: Vec<Vec<F::Elem>>,
    pub shift: GroupElement,
    /// Images of the ideal basis, in coordinates of `M`.
    pub images: Vec<Vec<F::Elem>>,
}

impl<F: Field> BaerWitness<F> {
    /// Rebuilds `I`, checks `u` is a morphism, and checks that no `R -> M(g)`
    /// restricts to `u`. Each morphism `R -> M(g)` is `r ↦ r·y` for some
    /// `y ∈ M_g`, so the extension system is `x·y = u(x)` for `x` in the basis.
    pub fn verify(&self, m: &Arc<GradedModule<F>>) -> bool {
        let f = m.field();
        let ring = m.ring();
        let regular = Arc::new(GradedModule::regular(ring.clone()));
        let Ok(sub) = GradedSubmodule::generated_by(regular.clone(), &self.ideal) else { return false };
        if sub.dim() != self.ideal.len() || self.images.len() != self.ideal.len() {
            return false;
        }
        let Ok((ideal_module, inclusion)) = sub.to_module() else { return false };
        // express u in the basis of the ideal module
        let coords: Vec<Vec<F::Elem>> = match self
            .ideal
            .iter()
            .map(|x| linalg::solve(f, inclusion.matrix(), x))
            .collect::<Option<Vec<_>>>()
        {
            Some(c) => c,
            None => return false,
        };
        let target = Arc::new(m.shift(&self.shift));
        let images = Matrix::columns_matrix(f, &self.images, m.dim());
        let basis_change = Matrix::columns_matrix(f, &coords, ideal_module.dim());
        let Some(inverse) = invert(f, &basis_change) else { return false };
        let u = images.mul(f, &inverse);
        if GradedMorphism::new(ideal_module, target, u).is_err() {
            return false;
        }
        // unknowns: the coordinates of y in M_g
        let slots = m.component(&self.shift).to_vec();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (x, ux) in self.ideal.iter().zip(&self.images) {
            let mut block = vec![vec![f.zero(); slots.len()]; m.dim()];
            for (s, &j) in slots.iter().enumerate() {
                let xy = m.act(x, &m.unit_vector(j));
                for (k, v) in xy.into_iter().enumerate() {
                    block[k][s] = v;
                }
            }
            rows.extend(block);
            rhs.extend(ux.iter().cloned());
        }
        linalg::solve(f, &Matrix::from_rows(rows, slots.len()), &rhs).is_none()
    }
}

fn invert<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = a.rows();
    let cols: Option<Vec<Vec<F::Elem>>> = (0..n)
        .map(|i| {
            let mut e = vec![f.zero(); n];
            e[i] = f.one();
            linalg::solve(f, a, &e)
        })
        .collect();
    Some(Matrix::columns_matrix(f, &cols?, n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaerVerdict<F: Field> {
    Injective,
    NotInjective(BaerWitness<F>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaerReport<F: Field> {
    pub verdict: BaerVerdict<F>,
    pub ideals_checked: usize,
    pub pairs_checked: usize,
}

impl<F: Field> BaerReport<F> {
    pub fn is_injective(&self) -> bool {
        matches!(self.verdict, BaerVerdict::Injective)
    }
}

/// Degrees `g` with `Hom(I, M(g)) ≠ 0` possible: `n - i` over the supports.
fn shift_window<F: Field>(ideal: &GradedSubmodule<F>, m: &GradedModule<F>) -> Vec<GroupElement> {
    let group = m.ring().group();
    let mut out = BTreeSet::new();
    for n in m.components().keys() {
        for i in ideal.components().keys() {
            out.insert(group.sub(n, i));
        }
    }
    out.into_iter().collect()
}

/// For one `(I, g)`: a basis morphism of `Hom(I, M(g))` outside the image of restriction.
fn non_extendable<F: Field>(
    ideal: &GradedIdeal<F>,
    regular: &Arc<GradedModule<F>>,
    m: &GradedModule<F>,
    g: &GroupElement,
) -> Result<Option<BaerWitness<F>>> {
    let f = m.field();
    let (ideal_module, inclusion) = ideal.submodule.to_module()?;
    let target = Arc::new(m.shift(g));
    let hom_i = hom_space(&ideal_module, &target)?;
    if hom_i.dim() == 0 {
        return Ok(None);
    }
    let hom_r = hom_space(regular, &target)?;
    let restricted: Vec<Vec<F::Elem>> = hom_r
        .basis
        .iter()
        .map(|v| {
            let w = inclusion.then(v)?;
            hom_i.coordinates(&w).ok_or_else(|| Error::Soundness("restriction is not a morphism".into()))
        })
        .collect::<Result<_>>()?;
    let span = Matrix::columns_matrix(f, &restricted, hom_i.dim());
    if linalg::rank(f, &span) == hom_i.dim() {
        return Ok(None);
    }
    for (k, u) in hom_i.basis.iter().enumerate() {
        let mut e = vec![f.zero(); hom_i.dim()];
        e[k] = f.one();
        if linalg::solve(f, &span, &e).is_none() {
            let basis = inclusion.matrix();
            let ideal_basis: Vec<Vec<F::Elem>> = (0..basis.cols()).map(|c| basis.column(c)).collect();
            let images = (0..u.matrix().cols()).map(|c| u.matrix().column(c)).collect();
            return Ok(Some(BaerWitness { ideal: ideal_basis, shift: g.clone(), images }));
        }
    }
    Err(Error::Soundness("restriction has deficient rank but every basis morphism extends".into()))
}

pub fn is_graded_injective<F: Field>(m: &Arc<GradedModule<F>>, guard: Option<usize>) -> Result<BaerReport<F>> {
    let ring = m.ring();
    let ideals = enumerate_graded_ideals(ring, guard)?;
    let regular = Arc::new(GradedModule::regular(ring.clone()));
    let pairs: Vec<(usize, GroupElement)> = ideals
        .iter()
        .enumerate()
        .filter(|(_, i)| !i.is_zero() && !i.is_whole())
        .flat_map(|(k, i)| shift_window(&i.submodule, m).into_iter().map(move |g| (k, g)))
        .collect();
    let results: Vec<Option<BaerWitness<F>>> = pairs
        .par_iter()
        .map(|(k, g)| non_extendable(&ideals[*k], &regular, m, g))
        .collect::<Result<_>>()?;
    let verdict = match results.into_iter().flatten().next() {
        Some(w) => BaerVerdict::NotInjective(w),
        None => BaerVerdict::Injective,
    };
    Ok(BaerReport { verdict, ideals_checked: ideals.len(), pairs_checked: pairs.len() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityTransfer {
    pub fine_injective: bool,
    pub coarse_injective: bool,
    pub kernel_finite: bool,
    /// Coarse injective implies fine injective.
    pub descent_holds: bool,
    /// Fine injective implies coarse injective; only asserted for finite kernels.
    pub ascent_holds: Option<bool>,
}

/// Runs the Baer check on `M` and on `M_[ψ]`. Injectivity always descends
/// from `M_[ψ]` to `M`, and ascends when `ker ψ` is finite; a violation is
/// reported as a soundness failure.
pub fn injectivity_transfer_check<F: Field>(
    m: &Arc<GradedModule<F>>,
    ctx: &CoarseningContext,
    guard: Option<usize>,
) -> Result<InjectivityTransfer> {
    let fine = is_graded_injective(m, guard)?;
    let coarse_module = Arc::new(ctx.coarsen_module(m)?);
    let coarse = is_graded_injective(&coarse_module, guard)?;
    for (report, module) in [(&fine, m), (&coarse, &coarse_module)] {
        if let BaerVerdict::NotInjective(w) = &report.verdict {
            if !w.verify(module) {
                return Err(Error::Soundness("Baer witness failed to re-verify".into()));
            }
        }
    }
    let (fi, ci) = (fine.is_injective(), coarse.is_injective());
    let kernel_finite = ctx.kernel_is_finite();
    let descent_holds = !ci || fi;
    let ascent_holds = kernel_finite.then_some(!fi || ci);
    if !descent_holds {
        return Err(Error::Soundness("M_[ψ] is injective but M is not".into()));
    }
    if ascent_holds == Some(false) {
        return Err(Error::Soundness("M is injective, ker ψ is finite, but M_[ψ] is not".into()));
    }
    Ok(InjectivityTransfer { fine_injective: fi, coarse_injective: ci, kernel_finite, descent_holds, ascent_holds })
}

/// One simple graded module `(R/m)(g)` and the morphisms from it to `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleEvidence<F: Field> {
    /// Basis of the maximal graded ideal `m`, in ring coordinates.
    pub maximal_ideal: Vec<Vec<F::Elem>>,
    pub shift: GroupElement,
    pub hom_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CogeneratorReport<F: Field> {
    pub is_cogenerator: bool,
    /// Every shift checked, for finite grading groups.
    pub evidence: Vec<SimpleEvidence<F>>,
    /// A simple module admitting no nonzero morphism to `M`.
    pub missing: Option<SimpleEvidence<F>>,
}

/// Whether every simple graded module maps nonzero to `M`. Simple graded
/// modules are the shifts `(R/m)(g)` of quotients by maximal graded ideals.
/// For an infinite grading group, `Hom((R/m)(g), M)` vanishes once
/// `supp (R/m) - g` misses `supp M`, so some shift always fails.
pub fn is_cogenerator<F: Field>(m: &Arc<GradedModule<F>>, guard: Option<usize>) -> Result<CogeneratorReport<F>> {
    let ring = m.ring();
    let group = ring.group();
    let ideals = enumerate_graded_ideals(ring, guard)?;
    let proper: Vec<&GradedIdeal<F>> = ideals.iter().filter(|i| !i.is_whole()).collect();
    let maximal: Vec<&GradedIdeal<F>> = proper
        .iter()
        .filter(|i| !proper.iter().any(|j| j.dim() > i.dim() && i.submodule.is_submodule_of(&j.submodule)))
        .copied()
        .collect();
    let mut evidence = Vec::new();
    for mi in &maximal {
        let (simple, _) = mi.submodule.quotient()?;
        let shifts: Vec<GroupElement> = match group.elements() {
            Some(all) => all,
            None => {
                // a shift whose support lies beyond every degree of M
                let far = far_shift(&simple, m);
                let e = SimpleEvidence { maximal_ideal: mi.basis(), shift: far, hom_dim: 0 };
                let check = hom_space(&Arc::new(simple.shift(&e.shift)), m)?.dim();
                if check != 0 {
                    return Err(Error::Soundness("far shift of a simple module maps nonzero".into()));
                }
                return Ok(CogeneratorReport { is_cogenerator: false, evidence, missing: Some(e) });
            }
        };
        for g in shifts {
            let hom_dim = hom_space(&Arc::new(simple.shift(&g)), m)?.dim();
            let e = SimpleEvidence { maximal_ideal: mi.basis(), shift: g, hom_dim };
            if hom_dim == 0 {
                return Ok(CogeneratorReport { is_cogenerator: false, evidence, missing: Some(e) });
            }
            evidence.push(e);
        }
    }
    Ok(CogeneratorReport { is_cogenerator: true, evidence, missing: None })
}

/// A shift `g` of `s` such that `supp s(g) = supp s - g` is disjoint from `supp m`,
/// for an infinite grading group.
fn far_shift<F: Field>(s: &GradedModule<F>, m: &GradedModule<F>) -> GroupElement {
    let group = m.ring().group();
    let spread: i64 = s
        .components()
        .keys()
        .chain(m.components().keys())
        .flat_map(|d| d.coords()[..group.rank()].iter().map(|x| x.abs()))
        .max()
        .unwrap_or(0);
    group.scale(2 * spread + 1, &group.generator(0))
}

/// Documentation-only: a G-graded ring is noetherian iff `E^{⊕ℕ}` is
/// injective for every injective cogenerator `E`. Injective cogenerators
/// are not finite-dimensional in general, so nothing here builds one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InjectiveCogeneratorNote;

#[cfg(test)]
mod tests;
