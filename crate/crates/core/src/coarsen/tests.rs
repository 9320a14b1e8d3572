use std::sync::Arc;

use super::*;
use crate::abgroup::IntMatrix;
use crate::field::{PrimeField, Rationals};
use crate::graded::{direct_sum, hom_space};

fn z() -> FgAbGroup {
    FgAbGroup::free(1)
}

fn zn(n: i64) -> FgAbGroup {
    FgAbGroup::cyclic(n).unwrap()
}

fn el(v: &[i64]) -> GroupElement {
    GroupElement(v.to_vec())
}

fn hom(d: FgAbGroup, c: FgAbGroup, rows: Vec<Vec<i64>>) -> GroupHom {
    let cols = d.ngens();
    GroupHom::new(d, c, IntMatrix::from_rows(rows, cols)).unwrap()
}

fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

/// `⊕ R(-d)` over a ring concentrated in degree zero.
fn spread<F: Field>(ring: &Arc<GradedRing<F>>, degrees: &[GroupElement]) -> Arc<GradedModule<F>> {
    let parts: Vec<_> = degrees.iter().map(|d| Arc::new(GradedModule::free_cyclic(ring.clone(), d))).collect();
    direct_sum(ring, &parts).unwrap().module
}

#[test]
fn coarsening_regroups_dimensions() {
    let ctx = CoarseningContext::new(GroupHom::to_trivial(&zn(2))).unwrap();
    let r = Arc::new(GradedRing::group_algebra(f2(), zn(2)).unwrap());
    let m = ctx.coarsen_module(&GradedModule::regular(r)).unwrap();
    assert_eq!(m.support(), vec![el(&[])]);
    assert_eq!(m.component_dim(&el(&[])), 2);

    let ctx = CoarseningContext::new(hom(z(), zn(2), vec![vec![1]])).unwrap();
    let r = Arc::new(GradedRing::concentrated(f2(), z()));
    let m = spread(&r, &[el(&[0]), el(&[1]), el(&[1])]);
    let c = ctx.coarsen_module(&m).unwrap();
    assert_eq!(c.component_dim(&el(&[0])), 1);
    assert_eq!(c.component_dim(&el(&[1])), 2);
    assert!(c.validate().is_empty());
}

#[test]
fn identity_coarsening_is_identity() {
    let ctx = CoarseningContext::new(GroupHom::identity(&zn(2))).unwrap();
    let r = Arc::new(GradedRing::truncated_polynomial(f2(), zn(2), &el(&[1]), 2).unwrap());
    let m = GradedModule::regular(r.clone());
    assert_eq!(ctx.coarsen_module(&m).unwrap(), m);
    assert_eq!(ctx.coarsen_ring(&r).unwrap(), *r);
}

#[test]
fn rejects_non_epimorphism_and_wrong_group() {
    assert!(matches!(
        CoarseningContext::new(hom(z(), z(), vec![vec![2]])),
        Err(Error::NotEpimorphism { .. })
    ));
    let ctx = CoarseningContext::new(GroupHom::to_trivial(&zn(2))).unwrap();
    let r = GradedRing::concentrated(f2(), z());
    assert!(matches!(ctx.coarsen_ring(&r), Err(Error::GroupMismatch(_))));
}

fn check_two_point_refinement<F: Field>(field: F) {
    let ctx = CoarseningContext::new(GroupHom::to_trivial(&zn(2))).unwrap();
    let s = Arc::new(GradedRing::concentrated(field.clone(), FgAbGroup::trivial()));
    let refined = RefinedRing::new(&ctx, s, None).unwrap();
    let r = &refined.ring;
    assert_eq!(r.dim(), 2);
    assert!(r.validate().is_empty());
    let elements: Vec<F::Elem> = match field.elements() {
        Some(e) => e,
        None => (-2..=2).map(|n| field.from_i64(n)).collect(),
    };
    for a in &elements {
        for b in &elements {
            for c in &elements {
                for d in &elements {
                    let x = r.multiply(&[a.clone(), b.clone()], &[c.clone(), d.clone()]);
                    let first = field.add(&field.mul(a, c), &field.mul(b, d));
                    let second = field.add(&field.mul(a, d), &field.mul(c, b));
                    assert_eq!(x, vec![first, second]);
                }
            }
        }
    }
}

#[test]
fn two_point_refinement_multiplication() {
    check_two_point_refinement(f2());
    check_two_point_refinement(Rationals);
    let ctx = CoarseningContext::new(GroupHom::to_trivial(&zn(2))).unwrap();
    let s = Arc::new(GradedRing::concentrated(f2(), FgAbGroup::trivial()));
    let r = RefinedRing::new(&ctx, s, None).unwrap().ring;
    assert_eq!(r.multiply(&[1, 1], &[1, 1]), vec![0, 0]);
}

#[test]
fn explicit_refinement_needs_window_for_infinite_kernel() {
    let ctx = CoarseningContext::new(GroupHom::to_trivial(&z())).unwrap();
    let r = Arc::new(GradedRing::concentrated(f2(), z()));
    let s = Arc::new(ctx.coarsen_module(&GradedModule::regular(r.clone())).unwrap());
    let lazy = LazyRefinedModule::new(&ctx, s, r).unwrap();
    assert!(matches!(lazy.materialize(&ctx, None), Err(Error::InfiniteSupport(_))));
    let window: Vec<GroupElement> = (-2..=2).map(|k| el(&[k])).collect();
    let m = lazy.materialize(&ctx, Some(&window)).unwrap();
    assert_eq!(m.module.dim(), 5);
    assert!(m.module.validate().is_empty());
}

#[test]
fn window_must_be_closed() {
    // F2[t]/(t^2) with deg t = 1 in Z, coarsened to the trivial group
    let ctx = CoarseningContext::new(GroupHom::to_trivial(&z())).unwrap();
    let r = Arc::new(GradedRing::truncated_polynomial(f2(), z(), &el(&[1]), 2).unwrap());
    let s = Arc::new(ctx.coarsen_module(&GradedModule::regular(r.clone())).unwrap());
    let lazy = LazyRefinedModule::new(&ctx, s, r).unwrap();
    let window = vec![el(&[0]), el(&[1])];
    assert!(matches!(lazy.materialize(&ctx, Some(&window)), Err(Error::WindowNotClosed(_))));
}

#[test]
fn transformation_identities() {
    let ctx = CoarseningContext::new(GroupHom::to_trivial(&zn(2))).unwrap();
    let r = Arc::new(GradedRing::group_algebra(Rationals, zn(2)).unwrap());
    let m = Arc::new(GradedModule::regular(r.clone()));
    let a = ctx.alpha_prime(&m).unwrap();
    let d = ctx.delta_prime(&m).unwrap();
    assert!(a.then(&d).unwrap().matrix() == GradedMorphism::identity(m.clone()).matrix());
    let n = Arc::new(ctx.coarsen_module(&m).unwrap());
    let b = ctx.beta_prime(&n, &r).unwrap();
    let g = ctx.gamma_prime(&n, &r).unwrap();
    let two = GradedMorphism::identity(n.clone()).scale(&Rationals.from_i64(2));
    assert_eq!(g.then(&b).unwrap().matrix(), two.matrix());

    let r2 = Arc::new(GradedRing::group_algebra(f2(), zn(2)).unwrap());
    let n2 = Arc::new(ctx.coarsen_module(&GradedModule::regular(r2.clone())).unwrap());
    let bg = ctx.gamma_prime(&n2, &r2).unwrap().then(&ctx.beta_prime(&n2, &r2).unwrap()).unwrap();
    assert!(bg.is_zero());
}

#[test]
fn identity_transformations_are_identities() {
    let ctx = CoarseningContext::new(GroupHom::identity(&zn(2))).unwrap();
    let r = Arc::new(GradedRing::truncated_polynomial(f2(), zn(2), &el(&[1]), 2).unwrap());
    let m = Arc::new(GradedModule::regular(r.clone()));
    for which in Transformation::ALL {
        let u = ctx.module_transformation(which, &m, Some(&r)).unwrap();
        assert_eq!(u.matrix(), GradedMorphism::identity(m.clone()).matrix(), "{which:?}");
    }
}

#[test]
fn ring_maps_alpha_beta_are_multiplicative() {
    let ctx = CoarseningContext::new(hom(zn(4), zn(2), vec![vec![1]])).unwrap();
    let r = Arc::new(GradedRing::group_algebra(f2(), zn(4)).unwrap());
    let a = ctx.ring_transformation(Transformation::Alpha, &r).unwrap();
    assert_eq!(a.multiplicativity_defect(), None);
    assert!(a.preserves_unit());
    let s = Arc::new(ctx.coarsen_ring(&r).unwrap());
    let b = ctx.ring_transformation(Transformation::Beta, &s).unwrap();
    assert_eq!(b.multiplicativity_defect(), None);
    assert!(b.preserves_unit());
    // the diagonal doubles products: not multiplicative for a kernel of order 2
    let g = ctx.ring_transformation(Transformation::Gamma, &s).unwrap();
    assert!(!g.preserves_unit());
    let d = ctx.ring_transformation(Transformation::Delta, &r).unwrap();
    assert!(d.multiplicativity_defect().is_some());
}

#[test]
fn coarsen_refine_adjunction_examples() {
    let ctx = CoarseningContext::new(GroupHom::to_trivial(&zn(2))).unwrap();
    let r = Arc::new(GradedRing::group_algebra(f2(), zn(2)).unwrap());
    let m = Arc::new(GradedModule::regular(r.clone()));
    let n = Arc::new(ctx.coarsen_module(&m).unwrap());
    let adj = CoarsenRefineAdjunction::new(&ctx, m.clone(), n.clone()).unwrap();
    let (a, b, ok) = adj.bijection_holds().unwrap();
    assert_eq!((a, b), (2, 2));
    assert!(ok);
    assert!(CoarsenRefineAdjunction::unit_check(&ctx, &m).unwrap());
    assert!(adj.triangles().unwrap().holds());
    let zero = GradedMorphism::zero(adj.coarsened_source().clone(), n.clone());
    assert!(adj.forward(&zero).unwrap().is_zero(&f2()));
    let ends = hom_space(&m, &m).unwrap();
    let ends_n = hom_space(&n, &n).unwrap();
    for u in &adj.coarse_hom().unwrap().basis {
        for f in &ends.basis {
            for k in &ends_n.basis {
                assert!(adj.natural_at(f, k, u).unwrap());
            }
        }
    }
}

#[test]
fn coarsen_refine_adjunction_infinite_kernel() {
    let ctx = CoarseningContext::new(GroupHom::to_trivial(&z())).unwrap();
    let r = Arc::new(GradedRing::concentrated(f2(), z()));
    let m = spread(&r, &[el(&[0]), el(&[1]), el(&[3])]);
    let n = Arc::new(ctx.coarsen_module(&m).unwrap());
    let adj = CoarsenRefineAdjunction::new(&ctx, m.clone(), n).unwrap();
    let (a, b, ok) = adj.bijection_holds().unwrap();
    assert_eq!(a, 9);
    assert_eq!(b, 9);
    assert!(ok);
    let t = adj.triangles().unwrap();
    assert!(t.first);
    assert_eq!(t.second, None);
    assert!(CoarsenRefineAdjunction::unit_check(&ctx, &m).unwrap());
}

#[test]
fn refine_coarsen_adjunction_examples() {
    let ctx = CoarseningContext::new(GroupHom::to_trivial(&zn(2))).unwrap();
    // R = F2 in degree 0 of Z/2; M = F2 in degrees 0 and 1; N = F2 ungraded
    let r = Arc::new(GradedRing::concentrated(f2(), zn(2)));
    let m = spread(&r, &[el(&[0]), el(&[1])]);
    let coarse_ring = Arc::new(ctx.coarsen_ring(&r).unwrap());
    let n = Arc::new(GradedModule::regular(coarse_ring));
    let adj = RefineCoarsenAdjunction::new(&ctx, n, m).unwrap();
    let (a, b, ok) = adj.bijection_holds().unwrap();
    assert_eq!((a, b), (2, 2));
    assert!(ok);
    assert_eq!(adj.triangles().unwrap(), TriangleCheck { first: true, second: Some(true) });

    let ctx = CoarseningContext::new(GroupHom::to_trivial(&z())).unwrap();
    let r = Arc::new(GradedRing::concentrated(f2(), z()));
    let m = Arc::new(GradedModule::regular(r.clone()));
    let n = Arc::new(ctx.coarsen_module(&m).unwrap());
    assert!(matches!(RefineCoarsenAdjunction::new(&ctx, n, m), Err(Error::InfiniteKernel(_))));
}

#[test]
fn refine_coarsen_adjunction_identity() {
    let ctx = CoarseningContext::new(GroupHom::identity(&zn(2))).unwrap();
    let r = Arc::new(GradedRing::group_algebra(f2(), zn(2)).unwrap());
    let m = Arc::new(GradedModule::regular(r.clone()));
    let adj = RefineCoarsenAdjunction::new(&ctx, m.clone(), m.clone()).unwrap();
    for v in adj.fine_hom().unwrap().basis {
        assert_eq!(adj.forward(&v).unwrap().matrix(), v.matrix());
    }
}

#[test]
fn decomposition_dimensions() {
    let ctx = CoarseningContext::new(GroupHom::to_trivial(&zn(2))).unwrap();
    let r = Arc::new(GradedRing::concentrated(f2(), zn(2)));
    let cr = Arc::new(ctx.coarsen_ring(&r).unwrap());
    let n = spread(&cr, &[el(&[]), el(&[]), el(&[])]);
    let d = refine_then_coarsen_decomposition(&ctx, n, r).unwrap();
    assert_eq!(d.coarsened.dim(), 6);
    assert!(d.iso.is_isomorphism());

    let ctx = CoarseningContext::new(hom(zn(4), zn(2), vec![vec![1]])).unwrap();
    let r = Arc::new(GradedRing::concentrated(f2(), zn(4)));
    let cr = Arc::new(ctx.coarsen_ring(&r).unwrap());
    let n = spread(&cr, &[el(&[1])]);
    let d = refine_then_coarsen_decomposition(&ctx, n, r.clone()).unwrap();
    assert_eq!(d.coarsened.dim(), 2);

    let group_alg = Arc::new(GradedRing::group_algebra(f2(), zn(4)).unwrap());
    let n = Arc::new(ctx.coarsen_module(&GradedModule::regular(group_alg.clone())).unwrap());
    assert!(matches!(
        refine_then_coarsen_decomposition(&ctx, n, group_alg),
        Err(Error::NotConcentrated(_))
    ));
}

#[test]
fn product_comparison() {
    let ctx = CoarseningContext::new(GroupHom::to_trivial(&z())).unwrap();
    let r = Arc::new(GradedRing::concentrated(f2(), z()));
    let report = product_coarsening_comparison(&ctx, &ProductFamily::KernelShifts(r.clone())).unwrap();
    assert_eq!(report.verdict, ComparisonVerdict::ProperMono);
    let w = report.witness.unwrap();
    assert!(w.verify(&ctx, &r));
    assert_eq!(w.entries.len(), 7);

    let modules = vec![spread(&r, &[el(&[0]), el(&[2])]), spread(&r, &[el(&[1])])];
    let finite = ProductFamily::Finite { ring: r.clone(), modules: modules.clone() };
    let report = product_coarsening_comparison(&ctx, &finite).unwrap();
    assert_eq!(report.verdict, ComparisonVerdict::Iso);
    assert!(report.xi.unwrap().is_isomorphism());

    let single = ProductFamily::Finite { ring: r.clone(), modules: modules[..1].to_vec() };
    let report = product_coarsening_comparison(&ctx, &single).unwrap();
    assert_eq!(report.xi.unwrap().matrix(), &crate::linalg::Matrix::identity(&f2(), 2));

    let ctx = CoarseningContext::new(GroupHom::to_trivial(&zn(2))).unwrap();
    let r = Arc::new(GradedRing::group_algebra(f2(), zn(2)).unwrap());
    let report = product_coarsening_comparison(&ctx, &ProductFamily::KernelShifts(r)).unwrap();
    assert_eq!(report.verdict, ComparisonVerdict::Iso);
}
