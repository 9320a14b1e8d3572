use std::sync::Arc;

use super::*;
use crate::abgroup::{FgAbGroup, GroupHom};
use crate::field::{FieldKind, PrimeField, Rationals};
use crate::graded::direct_sum;

fn el(v: &[i64]) -> GroupElement {
    GroupElement(v.to_vec())
}

fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

fn z2() -> FgAbGroup {
    FgAbGroup::cyclic(2).unwrap()
}

/// `F2[t]/(t^2)` with `deg t = 1` in `Z/2`.
fn dual_numbers() -> Arc<GradedRing<PrimeField>> {
    Arc::new(GradedRing::truncated_polynomial(f2(), z2(), &el(&[1]), 2).unwrap())
}

fn regular(r: &Arc<GradedRing<PrimeField>>) -> Arc<GradedModule<PrimeField>> {
    Arc::new(GradedModule::regular(r.clone()))
}

/// `R/(t)`, the simple module in degree zero.
fn residue_field(r: &Arc<GradedRing<PrimeField>>) -> Arc<GradedModule<PrimeField>> {
    let reg = regular(r);
    let t = GradedSubmodule::generated_by(reg, &[vec![0, 1]]).unwrap();
    t.quotient().unwrap().0
}

fn to_trivial(g: FgAbGroup) -> CoarseningContext {
    CoarseningContext::new(GroupHom::to_trivial(&g)).unwrap()
}

#[test]
fn subspace_counts_are_gaussian_binomials() {
    let counts = |f: &PrimeField, n| subspaces(f, n).unwrap().len();
    assert_eq!(counts(&f2(), 0), 1);
    assert_eq!(counts(&f2(), 2), 5);
    assert_eq!(counts(&f2(), 3), 16);
    assert_eq!(counts(&PrimeField::new(3).unwrap(), 2), 6);
    assert!(subspaces(&Rationals, 1).is_err());
}

#[test]
fn ideals_of_dual_numbers() {
    let r = dual_numbers();
    let ideals = enumerate_graded_ideals(&r, None).unwrap();
    let dims: Vec<usize> = ideals.iter().map(GradedIdeal::dim).collect();
    assert_eq!(dims, vec![0, 1, 2]);
    assert_eq!(ideals[1].basis(), vec![vec![0, 1]]);
}

#[test]
fn group_algebra_has_only_trivial_graded_ideals() {
    let r = Arc::new(GradedRing::group_algebra(f2(), z2()).unwrap());
    let ideals = enumerate_graded_ideals(&r, None).unwrap();
    assert_eq!(ideals.len(), 2);
    assert!(ideals[0].is_zero() && ideals[1].is_whole());
}

#[test]
fn ungraded_dual_numbers_have_the_same_ideals() {
    let r = Arc::new(GradedRing::truncated_polynomial(f2(), FgAbGroup::trivial(), &el(&[]), 2).unwrap());
    assert_eq!(enumerate_graded_ideals(&r, None).unwrap().len(), 3);
}

#[test]
fn enumeration_guards() {
    let big = Arc::new(GradedRing::truncated_polynomial(f2(), z2(), &el(&[1]), 7).unwrap());
    assert!(matches!(enumerate_graded_ideals(&big, None), Err(Error::GuardExceeded(_))));
    assert!(enumerate_graded_ideals(&big, Some(7)).is_ok());
    let q = Arc::new(GradedRing::truncated_polynomial(Rationals, z2(), &el(&[1]), 2).unwrap());
    assert!(matches!(enumerate_graded_ideals(&q, None), Err(Error::UnsupportedField(_))));
}

#[test]
fn ideal_constructor_checks_closure() {
    let r = dual_numbers();
    let reg = regular(&r);
    let spans = BTreeMap::from([(el(&[0]), vec![vec![1]])]);
    let not_ideal = GradedSubmodule::from_component_spans(reg.clone(), spans).unwrap();
    assert!(GradedIdeal::new(not_ideal).is_err());
    assert!(GradedIdeal::new(GradedSubmodule::whole(reg)).is_ok());
    let other = residue_field(&r);
    assert!(matches!(GradedIdeal::new(GradedSubmodule::whole(other)), Err(Error::ModuleMismatch(_))));
}

#[test]
fn regular_dual_numbers_are_injective() {
    let r = dual_numbers();
    let report = is_graded_injective(&regular(&r), None).unwrap();
    assert!(report.is_injective());
    assert_eq!(report.ideals_checked, 3);
}

#[test]
fn residue_field_is_not_injective() {
    let r = dual_numbers();
    let k = residue_field(&r);
    let report = is_graded_injective(&k, None).unwrap();
    let BaerVerdict::NotInjective(w) = &report.verdict else { panic!("expected a witness") };
    assert_eq!(w.ideal, vec![vec![0, 1]]);
    assert_eq!(w.shift, el(&[1]));
    assert!(w.verify(&k));

    // the zero morphism extends, so it is not a witness
    let zero = BaerWitness { images: vec![vec![0]], ..w.clone() };
    assert!(!zero.verify(&k));
    // an ideal that is not closed is rejected
    let bad = BaerWitness { ideal: vec![vec![1, 0]], ..w.clone() };
    assert!(!bad.verify(&k));
}

#[test]
fn zero_module_is_injective() {
    let r = dual_numbers();
    let zero = Arc::new(GradedModule::zero(r));
    assert!(is_graded_injective(&zero, None).unwrap().is_injective());
}

#[test]
fn injectivity_transfer_along_finite_kernel() {
    let r = dual_numbers();
    let ctx = to_trivial(z2());
    let t = injectivity_transfer_check(&regular(&r), &ctx, None).unwrap();
    assert!(t.fine_injective && t.coarse_injective);
    assert_eq!(t.ascent_holds, Some(true));
    let t = injectivity_transfer_check(&residue_field(&r), &ctx, None).unwrap();
    assert!(!t.fine_injective && !t.coarse_injective);
}

#[test]
fn injectivity_transfer_on_a_sum_of_shifts() {
    let r = dual_numbers();
    let parts = [regular(&r), Arc::new(GradedModule::free_cyclic(r.clone(), &el(&[1])))];
    let m = direct_sum(&r, &parts).unwrap().module;
    let ctx = to_trivial(z2());
    let t = injectivity_transfer_check(&m, &ctx, None).unwrap();
    assert!(t.fine_injective && t.coarse_injective && t.descent_holds);
}

#[test]
fn cogenerators_of_dual_numbers() {
    let r = dual_numbers();
    let reg = regular(&r);
    let report = is_cogenerator(&reg, None).unwrap();
    assert!(!report.is_cogenerator);
    let missing = report.missing.unwrap();
    assert_eq!(missing.shift, el(&[0]));
    assert_eq!(missing.hom_dim, 0);

    let parts = [reg, Arc::new(GradedModule::free_cyclic(r.clone(), &el(&[1])))];
    let both = direct_sum(&r, &parts).unwrap().module;
    let report = is_cogenerator(&both, None).unwrap();
    assert!(report.is_cogenerator);
    assert_eq!(report.evidence.len(), 2);
    assert!(report.evidence.iter().all(|e| e.hom_dim > 0));

    assert!(!is_cogenerator(&residue_field(&r), None).unwrap().is_cogenerator);
    assert!(!is_cogenerator(&Arc::new(GradedModule::zero(r)), None).unwrap().is_cogenerator);
}

#[test]
fn no_finite_cogenerator_over_infinite_group() {
    let z = FgAbGroup::free(1);
    let r = Arc::new(GradedRing::truncated_polynomial(f2(), z, &el(&[1]), 2).unwrap());
    let report = is_cogenerator(&regular(&r), None).unwrap();
    assert!(!report.is_cogenerator);
    let missing = report.missing.unwrap();
    assert!(missing.shift.coords()[0].abs() > 1);
}

#[test]
fn zero_ring_is_its_own_cogenerator() {
    let r = Arc::new(GradedRing::new(f2(), z2(), Vec::new(), Vec::new(), Vec::new()).unwrap());
    assert!(is_cogenerator(&regular(&r), None).unwrap().is_cogenerator);
}

#[test]
fn coarsening_to_trivial_group_uses_ungraded_ideals() {
    let r = dual_numbers();
    let ctx = to_trivial(z2());
    let coarse = Arc::new(ctx.coarsen_ring(&r).unwrap());
    assert_eq!(enumerate_graded_ideals(&coarse, None).unwrap().len(), 3);
}

#[test]
fn laurent_polynomials() {
    let f = f2();
    let x = LaurentPoly::from_terms(&f, [(0, 1), (1, 1)]);
    let sq = x.mul(&f, &x);
    assert_eq!(sq, LaurentPoly::from_terms(&f, [(0, 1), (2, 1)]));
    assert!(x.inverse(&f).is_none());
    let t = LaurentPoly::monomial(&f, 1, -3);
    assert_eq!(t.mul(&f, &t.inverse(&f).unwrap()), LaurentPoly::monomial(&f, 1, 0));
    assert_eq!(sq.span(), Some((0, 2)));
    assert!(x.add(&f, &x).is_zero());
}

#[test]
fn laurent_certificate_over_several_fields() {
    for kind in [FieldKind::Prime(2), FieldKind::Prime(3), FieldKind::Rational] {
        let cert = laurent_counterexample(kind).unwrap();
        assert!(cert.graded_injective);
        assert!(!cert.ungraded_injective);
        assert!(cert.checks.iter().all(|c| c.holds));
        assert!(cert.verify());
        let json = serde_json::to_string(&cert).unwrap();
        let back: LaurentCertificate = serde_json::from_str(&json).unwrap();
        assert!(back.verify());
    }
}

#[test]
fn tampered_laurent_certificate_fails() {
    let mut cert = laurent_counterexample(FieldKind::Prime(2)).unwrap();
    cert.ungraded_injective = true;
    assert!(!cert.verify());
    let mut cert = laurent_counterexample(FieldKind::Prime(2)).unwrap();
    cert.field = "F4".into();
    assert!(!cert.verify());
    let mut cert = laurent_counterexample(FieldKind::Prime(2)).unwrap();
    cert.solve_windows.clear();
    assert!(!cert.verify());
}
