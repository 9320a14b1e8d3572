//! Shared fixtures for the integration suites: a seeded corpus of explicit
//! instances, an exhaustive micro-corpus of small modules, and a direct
//! injectivity oracle that never looks at ideals.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use grcoarse::abgroup::{FgAbGroup, GroupElement, GroupHom, IntMatrix};
use grcoarse::coarsen::CoarseningContext;
use grcoarse::field::Field;
use grcoarse::graded::{
    direct_sum, hom_space, BasisElement, GradedModule, GradedMorphism, GradedRing, GradedSubmodule,
};
use grcoarse::linalg::{self, Matrix};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub fn z() -> FgAbGroup {
    FgAbGroup::free(1)
}

pub fn zn(n: i64) -> FgAbGroup {
    FgAbGroup::cyclic(n).unwrap()
}

pub fn trivial() -> FgAbGroup {
    FgAbGroup::trivial()
}

pub fn el(g: &FgAbGroup, coords: &[i64]) -> GroupElement {
    g.element(coords.to_vec()).unwrap()
}

pub fn hom(domain: FgAbGroup, codomain: FgAbGroup, rows: Vec<Vec<i64>>) -> GroupHom {
    let cols = domain.ngens();
    GroupHom::new(domain, codomain, IntMatrix::from_rows(rows, cols)).unwrap()
}

/// The six epimorphisms the corpus is drawn over.
pub fn psi_list() -> Vec<(&'static str, CoarseningContext)> {
    let zz2 = FgAbGroup::new(1, vec![2]).unwrap();
    let cases = vec![
        ("id_Z", GroupHom::identity(&z())),
        ("Z->Z/2", hom(z(), zn(2), vec![vec![1]])),
        ("Z/2->0", GroupHom::to_trivial(&zn(2))),
        ("Z/4->Z/2", hom(zn(4), zn(2), vec![vec![1]])),
        ("Z+Z/2->Z", hom(zz2, z(), vec![vec![1, 0]])),
        ("Z->0", GroupHom::to_trivial(&z())),
    ];
    cases.into_iter().map(|(name, h)| (name, CoarseningContext::new(h).unwrap())).collect()
}

/// Small fixture rings graded by `g`.
pub fn fixture_rings<F: Field>(field: &F, g: &FgAbGroup) -> Vec<(String, Arc<GradedRing<F>>)> {
    let mut out = vec![("K".to_string(), Arc::new(GradedRing::concentrated(field.clone(), g.clone())))];
    for i in 0..g.ngens() {
        let t = g.generator(i);
        let ring = GradedRing::truncated_polynomial(field.clone(), g.clone(), &t, 2).unwrap();
        out.push((format!("K[t]/t^2, deg t = {t}"), Arc::new(ring)));
    }
    if g.is_finite() {
        out.push(("K[G]".to_string(), Arc::new(GradedRing::group_algebra(field.clone(), g.clone()).unwrap())));
    }
    out
}

pub fn random_elem<F: Field>(field: &F, rng: &mut ChaCha8Rng) -> F::Elem {
    match field.elements() {
        Some(all) => all[rng.gen_range(0..all.len())].clone(),
        None => field.from_i64(rng.gen_range(-3..=3)),
    }
}

fn random_degree(g: &FgAbGroup, rng: &mut ChaCha8Rng) -> GroupElement {
    let mut coords: Vec<i64> = (0..g.rank()).map(|_| rng.gen_range(-1..=1)).collect();
    coords.extend(g.invariants().iter().map(|&d| rng.gen_range(0..d)));
    g.reduce(&coords)
}

/// A quotient of a free module by random homogeneous relations, kept
/// within `dim ≤ 6` and `|supp| ≤ 4`.
pub fn random_module<F: Field>(ring: &Arc<GradedRing<F>>, rng: &mut ChaCha8Rng) -> Arc<GradedModule<F>> {
    let f = ring.field();
    loop {
        let gens = rng.gen_range(1..=3);
        let parts: Vec<Arc<GradedModule<F>>> = (0..gens)
            .map(|_| Arc::new(GradedModule::free_cyclic(ring.clone(), &random_degree(ring.group(), rng))))
            .collect();
        let free = direct_sum(ring, &parts).unwrap().module;
        let support = free.support();
        let relations: Vec<Vec<F::Elem>> = (0..rng.gen_range(0..=2))
            .map(|_| {
                let d = &support[rng.gen_range(0..support.len())];
                let local: Vec<F::Elem> = free.component(d).iter().map(|_| random_elem(f, rng)).collect();
                free.embed_component(d, &local)
            })
            .collect();
        let m = GradedSubmodule::generated_by(free, &relations).unwrap().quotient().unwrap().0;
        if (1..=6).contains(&m.dim()) && m.support().len() <= 4 {
            return m;
        }
    }
}

pub fn random_morphism<F: Field>(
    source: &Arc<GradedModule<F>>,
    target: &Arc<GradedModule<F>>,
    rng: &mut ChaCha8Rng,
) -> GradedMorphism<F> {
    let space = hom_space(source, target).unwrap();
    let coeffs: Vec<F::Elem> = (0..space.dim()).map(|_| random_elem(source.field(), rng)).collect();
    space.combination(&coeffs)
}

/// `M -u-> N -v-> P` over one ring, with the epimorphism to coarsen along.
pub struct Instance<F: Field> {
    pub label: String,
    pub psi: &'static str,
    pub ctx: CoarseningContext,
    pub ring: Arc<GradedRing<F>>,
    pub m: Arc<GradedModule<F>>,
    pub n: Arc<GradedModule<F>>,
    pub p: Arc<GradedModule<F>>,
    pub u: GradedMorphism<F>,
    pub v: GradedMorphism<F>,
}

/// `per_psi` instances for each epimorphism, cycling through the fixture
/// rings of its domain. Half the time `N` is a quotient of `M` so that
/// `u` has a chance to be nonzero.
pub fn corpus<F: Field>(field: F, seed: u64, per_psi: usize) -> Vec<Instance<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (psi, ctx) in psi_list() {
        let rings = fixture_rings(&field, ctx.domain());
        for k in 0..per_psi {
            let (ring_name, ring) = &rings[k % rings.len()];
            let m = random_module(ring, &mut rng);
            let n = if rng.gen_bool(0.5) { quotient_of(&m, &mut rng) } else { random_module(ring, &mut rng) };
            let p = random_module(ring, &mut rng);
            let u = random_morphism(&m, &n, &mut rng);
            let v = random_morphism(&n, &p, &mut rng);
            out.push(Instance {
                label: format!("{} #{k} over {ring_name}, {psi}", field.name()),
                psi,
                ctx: ctx.clone(),
                ring: ring.clone(),
                m,
                n,
                p,
                u,
                v,
            });
        }
    }
    out
}

fn quotient_of<F: Field>(m: &Arc<GradedModule<F>>, rng: &mut ChaCha8Rng) -> Arc<GradedModule<F>> {
    let support = m.support();
    let d = &support[rng.gen_range(0..support.len())];
    let local: Vec<F::Elem> = m.component(d).iter().map(|_| random_elem(m.field(), rng)).collect();
    let q = GradedSubmodule::generated_by(m.clone(), &[m.embed_component(d, &local)]).unwrap().quotient().unwrap().0;
    if q.dim() == 0 {
        m.clone()
    } else {
        q
    }
}

/// Every tuple over the finite field `field` of length `n`.
pub fn all_vectors<F: Field>(field: &F, n: usize) -> Vec<Vec<F::Elem>> {
    let elems = field.elements().expect("finite field");
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                elems.iter().map(move |e| {
                    let mut w = v.clone();
                    w.push(e.clone());
                    w
                })
            })
            .collect();
    }
    out
}

/// Every graded module of dimension `1..=max_dim` with degrees in `window`
/// (one representative per sorted degree list and action table), over a
/// ring whose unit is a basis vector.
pub fn micro_corpus<F: Field>(
    ring: &Arc<GradedRing<F>>,
    window: &[GroupElement],
    max_dim: usize,
) -> Vec<Arc<GradedModule<F>>> {
    let f = ring.field();
    let unit = (0..ring.dim()).find(|&i| ring.unit_vector(i) == ring.one()).expect("unit is a basis vector");
    let mut out = Vec::new();
    for n in 1..=max_dim {
        for degrees in sorted_tuples(window, n) {
            let basis: Vec<BasisElement> =
                degrees.iter().enumerate().map(|(j, d)| BasisElement::new(format!("m{j}"), d.clone())).collect();
            // free slots: (ring basis i, module basis j) -> indices of the target component
            let mut slots = Vec::new();
            for i in (0..ring.dim()).filter(|&i| i != unit) {
                for (j, d) in degrees.iter().enumerate() {
                    let target = ring.group().add(ring.degree(i), d);
                    let idx: Vec<usize> = (0..n).filter(|&k| degrees[k] == target).collect();
                    slots.push((i, j, idx));
                }
            }
            let free: usize = slots.iter().map(|s| s.2.len()).sum();
            for values in all_vectors(f, free) {
                let mut action = vec![vec![f.zero(); n]; ring.dim() * n];
                for j in 0..n {
                    action[unit * n + j][j] = f.one();
                }
                let mut pos = 0;
                for (i, j, idx) in &slots {
                    for &k in idx {
                        action[i * n + j][k] = values[pos].clone();
                        pos += 1;
                    }
                }
                let m = GradedModule::new(ring.clone(), basis.clone(), action).unwrap();
                if m.validate().is_empty() {
                    out.push(Arc::new(m));
                }
            }
        }
    }
    out
}

fn sorted_tuples(window: &[GroupElement], n: usize) -> Vec<Vec<GroupElement>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, g) in window.iter().enumerate() {
        for mut rest in sorted_tuples(&window[i..], n - 1) {
            rest.insert(0, g.clone());
            out.push(rest);
        }
    }
    out
}

/// All subspaces of `F^n` (finite field), each as the full set of its vectors.
fn subspaces_by_brute_force<F: Field>(field: &F, n: usize) -> Vec<Vec<Vec<F::Elem>>> {
    let vectors = all_vectors(field, n);
    let mut seen: BTreeSet<Vec<Vec<F::Elem>>> = BTreeSet::new();
    let mut frontier = vec![vec![vec![field.zero(); n]]];
    seen.insert(frontier[0].clone());
    while let Some(space) = frontier.pop() {
        for v in &vectors {
            if space.contains(v) {
                continue;
            }
            let mut bigger: BTreeSet<Vec<F::Elem>> = space.iter().cloned().collect();
            for c in field.elements().unwrap() {
                for w in &space {
                    bigger.insert(w.iter().zip(v).map(|(a, b)| field.add(a, &field.mul(&c, b))).collect());
                }
            }
            let bigger: Vec<Vec<F::Elem>> = bigger.into_iter().collect();
            if seen.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    seen.into_iter().collect()
}

/// Every graded submodule of `b`.
pub fn all_submodules<F: Field>(b: &Arc<GradedModule<F>>) -> Vec<GradedSubmodule<F>> {
    let f = b.field();
    let mut choices: Vec<BTreeMap<GroupElement, Vec<Vec<F::Elem>>>> = vec![BTreeMap::new()];
    for (d, idx) in b.components() {
        let spaces = subspaces_by_brute_force(f, idx.len());
        choices = choices
            .into_iter()
            .flat_map(|c| {
                spaces.iter().map(move |s| {
                    let mut c = c.clone();
                    c.insert(d.clone(), s.clone());
                    c
                })
            })
            .collect();
    }
    choices
        .into_iter()
        .map(|spans| GradedSubmodule::from_component_spans(b.clone(), spans).unwrap())
        .filter(|s| s.is_closed())
        .collect()
}

/// Whether every degree-0 morphism `A -> M` extends along `A ⊆ B`.
pub fn extends_along<F: Field>(sub: &GradedSubmodule<F>, m: &Arc<GradedModule<F>>) -> bool {
    let f = m.field();
    let (a, incl) = sub.to_module().unwrap();
    let hom_am = hom_space(&a, m).unwrap();
    if hom_am.dim() == 0 {
        return true;
    }
    let hom_bm = hom_space(sub.parent(), m).unwrap();
    let restricted: Vec<Vec<F::Elem>> =
        hom_bm.basis.iter().map(|w| hom_am.coordinates(&incl.then(w).unwrap()).expect("restriction is a morphism")).collect();
    if restricted.is_empty() {
        return false;
    }
    linalg::rank(f, &Matrix::columns_matrix(f, &restricted, hom_am.dim())) == hom_am.dim()
}

/// A test module `B` with the graded submodules `A` to extend from.
pub type OracleTest<F> = (Arc<GradedModule<F>>, Vec<GradedSubmodule<F>>);

/// `M` is injective against every mono `A ⊆ B` with `B` in `tests`.
/// With the shifted free cyclic modules in `tests`, this decides injectivity.
pub fn injective_by_oracle<F: Field>(m: &Arc<GradedModule<F>>, tests: &[OracleTest<F>]) -> bool {
    tests.par_iter().all(|(_, subs)| subs.iter().all(|a| extends_along(a, m)))
}

/// Test modules for the oracle: the micro-corpus up to `max_dim` plus the
/// shifted free cyclic modules `R(-g)` for `g` in `shifts`, each with all
/// of its graded submodules.
pub fn oracle_tests<F: Field>(
    ring: &Arc<GradedRing<F>>,
    window: &[GroupElement],
    max_dim: usize,
    shifts: &[GroupElement],
) -> Vec<OracleTest<F>> {
    let mut modules = micro_corpus(ring, window, max_dim);
    modules.extend(shifts.iter().map(|g| Arc::new(GradedModule::free_cyclic(ring.clone(), g))));
    modules.into_par_iter().map(|b| {
        let subs = all_submodules(&b);
        (b, subs)
    }).collect()
}

pub fn is_identity<F: Field>(u: &GradedMorphism<F>) -> bool {
    *u.matrix() == Matrix::identity(u.field(), u.source().dim())
}
