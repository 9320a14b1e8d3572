use std::collections::BTreeMap;
use std::sync::Arc;

use super::ring::{component_index, Axiom, BasisElement, GradedRing, Violation};
use crate::abgroup::GroupElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg;

/// A finite-dimensional G-graded module with a homogeneous basis.
///
/// `action[i * dim + j]` is the coordinate vector of `r_i * m_j`.
#[derive(Clone, Debug)]
pub struct GradedModule<F: Field> {
    ring: Arc<GradedRing<F>>,
    basis: Vec<BasisElement>,
    action: Vec<Vec<F::Elem>>,
    components: BTreeMap<GroupElement, Vec<usize>>,
}

impl<F: Field> PartialEq for GradedModule<F> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.basis == other.basis
            && self.action == other.action
    }
}

impl<F: Field> Eq for GradedModule<F> {}

impl<F: Field> GradedModule<F> {
    /// Checks shapes and degrees only; call [`GradedModule::validate`] for the axioms.
    pub fn new(ring: Arc<GradedRing<F>>, basis: Vec<BasisElement>, action: Vec<Vec<F::Elem>>) -> Result<Self> {
        let (r, n) = (ring.dim(), basis.len());
        for b in &basis {
            ring.group().check(&b.degree)?;
        }
        if action.len() != r * n || action.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "module action has {} entries, expected {r}x{n}",
                action.len()
            )));
        }
        let components = component_index(&basis);
        Ok(Self { ring, basis, action, components })
    }

    pub fn checked(ring: Arc<GradedRing<F>>, basis: Vec<BasisElement>, action: Vec<Vec<F::Elem>>) -> Result<Self> {
        let m = Self::new(ring, basis, action)?;
        let v = m.validate();
        if let Some(first) = v.first() {
            return Err(Error::InvalidStructure(format!("{first} ({} violations)", v.len())));
        }
        Ok(m)
    }

    pub(crate) fn from_parts(ring: Arc<GradedRing<F>>, basis: Vec<BasisElement>, action: Vec<Vec<F::Elem>>) -> Self {
        debug_assert_eq!(action.len(), ring.dim() * basis.len());
        let components = component_index(&basis);
        Self { ring, basis, action, components }
    }

    pub fn zero(ring: Arc<GradedRing<F>>) -> Self {
        Self::from_parts(ring, Vec::new(), Vec::new())
    }

    /// The ring as a module over itself.
    pub fn regular(ring: Arc<GradedRing<F>>) -> Self {
        let basis = ring.basis().to_vec();
        let action = ring.structure_constants().to_vec();
        Self::from_parts(ring, basis, action)
    }

    /// `R(-g)`: free of rank one on a generator of degree `g`.
    pub fn free_cyclic(ring: Arc<GradedRing<F>>, g: &GroupElement) -> Self {
        let neg = ring.group().neg(g);
        Self::regular(ring).shift(&neg)
    }

    pub fn ring(&self) -> &Arc<GradedRing<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, j: usize) -> &GroupElement {
        &self.basis[j].degree
    }

    /// `r_i * m_j`.
    pub fn act_basis(&self, i: usize, j: usize) -> &[F::Elem] {
        &self.action[i * self.dim() + j]
    }

    pub fn action_constants(&self) -> &[Vec<F::Elem>] {
        &self.action
    }

    /// Basis indices of degree `d`, in basis order.
    pub fn component(&self, d: &GroupElement) -> &[usize] {
        self.components.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn components(&self) -> &BTreeMap<GroupElement, Vec<usize>> {
        &self.components
    }

    pub fn component_dim(&self, d: &GroupElement) -> usize {
        self.component(d).len()
    }

    pub fn support(&self) -> Vec<GroupElement> {
        self.components.keys().cloned().collect()
    }

    /// `r * m` for coordinate vectors.
    pub fn act(&self, r: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.field();
        let n = self.dim();
        let mut out = vec![f.zero(); n];
        for (i, x) in r.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in m.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                let c = f.mul(x, y);
                for (o, p) in out.iter_mut().zip(self.act_basis(i, j)) {
                    if !f.is_zero(p) {
                        *o = f.add(o, &f.mul(&c, p));
                    }
                }
            }
        }
        out
    }

    /// `r_i * m` for a coordinate vector `m`.
    pub fn act_by_basis(&self, i: usize, m: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.field();
        let mut out = vec![f.zero(); self.dim()];
        for (j, y) in m.iter().enumerate() {
            if f.is_zero(y) {
                continue;
            }
            for (o, p) in out.iter_mut().zip(self.act_basis(i, j)) {
                if !f.is_zero(p) {
                    *o = f.add(o, &f.mul(y, p));
                }
            }
        }
        out
    }

    pub fn unit_vector(&self, j: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field().zero(); self.dim()];
        v[j] = self.field().one();
        v
    }

    /// The degree of a nonzero homogeneous vector; `None` for zero, error if mixed.
    pub fn homogeneous_degree(&self, v: &[F::Elem]) -> Result<Option<GroupElement>> {
        let f = self.field();
        let mut deg: Option<&GroupElement> = None;
        for (j, x) in v.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            match deg {
                None => deg = Some(self.degree(j)),
                Some(d) if d == self.degree(j) => {}
                Some(d) => {
                    return Err(Error::NonHomogeneousInput(format!(
                        "vector mixes degrees {d} and {}",
                        self.degree(j)
                    )))
                }
            }
        }
        Ok(deg.cloned())
    }

    /// Homogeneous parts of `v`, keyed by degree; zero parts omitted.
    pub fn homogeneous_parts(&self, v: &[F::Elem]) -> BTreeMap<GroupElement, Vec<F::Elem>> {
        let f = self.field();
        let mut out: BTreeMap<GroupElement, Vec<F::Elem>> = BTreeMap::new();
        for (j, x) in v.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            out.entry(self.degree(j).clone()).or_insert_with(|| vec![f.zero(); self.dim()])[j] = x.clone();
        }
        out
    }

    /// `M(g)`, with `M(g)_d = M_{g+d}`: every basis degree `e` becomes `e - g`.
    pub fn shift(&self, g: &GroupElement) -> Self {
        let group = self.ring.group();
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElement::new(b.name.clone(), group.sub(&b.degree, g)))
            .collect();
        Self::from_parts(self.ring.clone(), basis, self.action.clone())
    }

    /// Same basis and action over another ring with the given degrees.
    pub(crate) fn regraded(&self, ring: Arc<GradedRing<F>>, degrees: Vec<GroupElement>) -> Self {
        let basis = self.basis.iter().zip(degrees).map(|(b, d)| BasisElement::new(b.name.clone(), d)).collect();
        Self::from_parts(ring, basis, self.action.clone())
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    pub fn validate(&self) -> Vec<Violation> {
        let f = self.field();
        let ring = &self.ring;
        let group = ring.group();
        let (r, n) = (ring.dim(), self.dim());
        let rname = |i: usize| ring.basis()[i].name.as_str();
        let mname = |j: usize| self.basis[j].name.as_str();
        let mut out = Vec::new();
        for i in 0..r {
            for j in 0..n {
                let want = group.add(ring.degree(i), self.degree(j));
                let p = self.act_basis(i, j);
                if let Some(k) = (0..n).find(|&k| !f.is_zero(&p[k]) && self.basis[k].degree != want) {
                    out.push(Violation {
                        axiom: Axiom::ModuleDegree,
                        witness: vec![i, j, k],
                        message: format!(
                            "degree rule at ({},{}): term {} has degree {} instead of {}",
                            rname(i),
                            mname(j),
                            mname(k),
                            self.basis[k].degree,
                            want
                        ),
                    });
                }
            }
        }
        for j in 0..n {
            let e = self.unit_vector(j);
            if self.act(ring.one(), &e) != e {
                out.push(Violation {
                    axiom: Axiom::ModuleUnit,
                    witness: vec![j],
                    message: format!("unit does not act as identity on {}", mname(j)),
                });
            }
        }
        for i in 0..r {
            for k in 0..r {
                let ik = ring.product(i, k);
                for j in 0..n {
                    let left = self.act_by_basis(i, self.act_basis(k, j));
                    let right = self.act(ik, &self.unit_vector(j));
                    if left != right {
                        out.push(Violation {
                            axiom: Axiom::ModuleAssociativity,
                            witness: vec![i, k, j],
                            message: format!("associativity at ({},{},{})", rname(i), rname(k), mname(j)),
                        });
                    }
                }
            }
        }
        out
    }

    /// Coordinates of the component-local vector `v` (indexed like `component(d)`) as a global vector.
    pub fn embed_component(&self, d: &GroupElement, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![self.field().zero(); self.dim()];
        for (&j, x) in self.component(d).iter().zip(v) {
            out[j] = x.clone();
        }
        out
    }

    /// Restriction of a global vector to the coordinates of component `d`.
    pub fn restrict_component(&self, d: &GroupElement, v: &[F::Elem]) -> Vec<F::Elem> {
        self.component(d).iter().map(|&j| v[j].clone()).collect()
    }

    pub fn is_zero_vector(&self, v: &[F::Elem]) -> bool {
        linalg::is_zero_vec(self.field(), v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::FgAbGroup;
    use crate::field::PrimeField;

    fn el(v: &[i64]) -> GroupElement {
        GroupElement(v.to_vec())
    }

    #[test]
    fn shift_conventions() {
        let f2 = PrimeField::new(2).unwrap();
        let r = Arc::new(GradedRing::group_algebra(f2, FgAbGroup::cyclic(2).unwrap()).unwrap());
        let m = GradedModule::regular(r.clone());
        assert_eq!(m.shift(&el(&[0])), m);
        // R(1)_0 = R_1 = span(e1)
        let s = m.shift(&el(&[1]));
        assert_eq!(s.component(&el(&[0])), &[1]);
        assert!(s.validate().is_empty());

        let z = FgAbGroup::free(1);
        let k = Arc::new(GradedRing::concentrated(f2, z));
        let m = GradedModule::regular(k.clone()).shift(&el(&[-1]));
        assert_eq!(m.support(), vec![el(&[1])]);
        let twice = GradedModule::regular(k.clone()).shift(&el(&[2])).shift(&el(&[3]));
        assert_eq!(twice, GradedModule::regular(k).shift(&el(&[5])));
    }

    #[test]
    fn free_cyclic_generator_degree() {
        let f2 = PrimeField::new(2).unwrap();
        let k = Arc::new(GradedRing::concentrated(f2, FgAbGroup::free(1)));
        let m = GradedModule::free_cyclic(k, &el(&[4]));
        assert_eq!(m.degree(0), &el(&[4]));
    }

    #[test]
    fn detects_bad_action() {
        let f2 = PrimeField::new(2).unwrap();
        let r = Arc::new(GradedRing::truncated_polynomial(f2, FgAbGroup::cyclic(2).unwrap(), &el(&[1]), 2).unwrap());
        // one basis vector of degree 0 on which t acts as itself: wrong degree
        let basis = vec![BasisElement::new("m", el(&[0]))];
        let m = GradedModule::new(r.clone(), basis.clone(), vec![vec![1], vec![1]]).unwrap();
        let v = m.validate();
        assert!(v.iter().any(|x| x.axiom == Axiom::ModuleDegree));
        assert!(v.iter().any(|x| x.axiom == Axiom::ModuleAssociativity));
        let ok = GradedModule::new(r, basis, vec![vec![1], vec![0]]).unwrap();
        assert!(ok.validate().is_empty());
    }

    #[test]
    fn zero_module_is_valid() {
        let f2 = PrimeField::new(2).unwrap();
        let r = Arc::new(GradedRing::concentrated(f2, FgAbGroup::free(1)));
        let z = GradedModule::zero(r);
        assert!(z.validate().is_empty());
        assert_eq!(z.dim(), 0);
        assert!(z.support().is_empty());
    }
}
