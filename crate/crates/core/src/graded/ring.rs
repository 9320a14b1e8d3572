use std::collections::BTreeMap;
use std::fmt;

use crate::abgroup::{FgAbGroup, GroupElement};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg;

/// A named homogeneous basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub name: String,
    pub degree: GroupElement,
}

impl BasisElement {
    pub fn new(name: impl Into<String>, degree: GroupElement) -> Self {
        Self { name: name.into(), degree }
    }
}

/// One failed axiom instance, with the basis indices that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    DegreeAdditivity,
    Commutativity,
    Associativity,
    UnitHomogeneity,
    UnitLaw,
    ModuleDegree,
    ModuleUnit,
    ModuleAssociativity,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub(crate) fn component_index(basis: &[BasisElement]) -> BTreeMap<GroupElement, Vec<usize>> {
    let mut out: BTreeMap<GroupElement, Vec<usize>> = BTreeMap::new();
    for (i, b) in basis.iter().enumerate() {
        out.entry(b.degree.clone()).or_default().push(i);
    }
    out
}

/// A commutative G-graded algebra with a homogeneous basis.
///
/// `mul[i * n + j]` is the coordinate vector of `e_i * e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing<F: Field> {
    field: F,
    group: FgAbGroup,
    basis: Vec<BasisElement>,
    mul: Vec<Vec<F::Elem>>,
    one: Vec<F::Elem>,
}

impl<F: Field> GradedRing<F> {
    /// Checks shapes and degrees only; call [`GradedRing::validate`] for the axioms.
    pub fn new(
        field: F,
        group: FgAbGroup,
        basis: Vec<BasisElement>,
        mul: Vec<Vec<F::Elem>>,
        one: Vec<F::Elem>,
    ) -> Result<Self> {
        let n = basis.len();
        for b in &basis {
            group.check(&b.degree)?;
        }
        if mul.len() != n * n || mul.iter().any(|v| v.len() != n) || one.len() != n {
            return Err(Error::DimensionMismatch(format!("ring structure constants do not match basis of size {n}")));
        }
        Ok(Self { field, group, basis, mul, one })
    }

    /// Like [`GradedRing::new`] but also rejects axiom violations.
    pub fn checked(
        field: F,
        group: FgAbGroup,
        basis: Vec<BasisElement>,
        mul: Vec<Vec<F::Elem>>,
        one: Vec<F::Elem>,
    ) -> Result<Self> {
        let r = Self::new(field, group, basis, mul, one)?;
        let v = r.validate();
        if let Some(first) = v.first() {
            return Err(Error::InvalidStructure(format!("{first} ({} violations)", v.len())));
        }
        Ok(r)
    }

    /// The field itself, concentrated in degree zero.
    pub fn concentrated(field: F, group: FgAbGroup) -> Self {
        let one = vec![field.one()];
        let basis = vec![BasisElement::new("1", group.zero())];
        Self { mul: vec![one.clone()], one, basis, group, field }
    }

    /// The group algebra `K[G]` of a finite group with its canonical grading.
    pub fn group_algebra(field: F, group: FgAbGroup) -> Result<Self> {
        let elements = group
            .elements()
            .ok_or_else(|| Error::InfiniteSupport(format!("group algebra of infinite group {group}")))?;
        let n = elements.len();
        let pos: BTreeMap<&GroupElement, usize> = elements.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let basis: Vec<BasisElement> = elements.iter().map(|g| BasisElement::new(format!("e{g}"), g.clone())).collect();
        let mut mul = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                let mut v = vec![field.zero(); n];
                v[pos[&group.add(a, b)]] = field.one();
                mul.push(v);
            }
        }
        let mut one = vec![field.zero(); n];
        one[pos[&group.zero()]] = field.one();
        Ok(Self { field, group, basis, mul, one })
    }

    /// `K[t]/(t^n)` with `t` homogeneous of degree `deg_t`.
    pub fn truncated_polynomial(field: F, group: FgAbGroup, deg_t: &GroupElement, n: usize) -> Result<Self> {
        group.check(deg_t)?;
        if n == 0 {
            return Err(Error::InvalidStructure("K[t]/(t^0) is the zero ring".into()));
        }
        let basis: Vec<BasisElement> = (0..n)
            .map(|k| {
                let name = match k {
                    0 => "1".to_string(),
                    1 => "t".to_string(),
                    k => format!("t^{k}"),
                };
                BasisElement::new(name, group.scale(k as i64, deg_t))
            })
            .collect();
        let mut mul = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut v = vec![field.zero(); n];
                if i + j < n {
                    v[i + j] = field.one();
                }
                mul.push(v);
            }
        }
        let mut one = vec![field.zero(); n];
        one[0] = field.one();
        Ok(Self { field, group, basis, mul, one })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> &GroupElement {
        &self.basis[i].degree
    }

    pub fn one(&self) -> &[F::Elem] {
        &self.one
    }

    /// `e_i * e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[F::Elem] {
        &self.mul[i * self.dim() + j]
    }

    pub fn structure_constants(&self) -> &[Vec<F::Elem>] {
        &self.mul
    }

    pub fn is_zero_ring(&self) -> bool {
        linalg::is_zero_vec(&self.field, &self.one)
    }

    pub fn multiply(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let n = self.dim();
        let mut out = vec![f.zero(); n];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                let c = f.mul(x, y);
                for (o, p) in out.iter_mut().zip(self.product(i, j)) {
                    if !f.is_zero(p) {
                        *o = f.add(o, &f.mul(&c, p));
                    }
                }
            }
        }
        out
    }

    pub fn unit_vector(&self, i: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    /// Degrees carrying a nonzero component, sorted.
    pub fn support(&self) -> Vec<GroupElement> {
        component_index(&self.basis).into_keys().collect()
    }

    pub fn components(&self) -> BTreeMap<GroupElement, Vec<usize>> {
        component_index(&self.basis)
    }

    /// Whether every basis element has degree zero.
    pub fn is_concentrated_in_zero(&self) -> bool {
        let z = self.group.zero();
        self.basis.iter().all(|b| b.degree == z)
    }

    /// Same basis and constants with the degrees replaced; used by regradings.
    pub(crate) fn regraded(&self, group: FgAbGroup, degrees: Vec<GroupElement>) -> Self {
        let basis = self
            .basis
            .iter()
            .zip(degrees)
            .map(|(b, d)| BasisElement::new(b.name.clone(), d))
            .collect();
        Self { field: self.field.clone(), group, basis, mul: self.mul.clone(), one: self.one.clone() }
    }

    /// All axiom violations; empty means the ring is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let f = &self.field;
        let n = self.dim();
        let name = |i: usize| self.basis[i].name.as_str();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let want = self.group.add(self.degree(i), self.degree(j));
                let p = self.product(i, j);
                if let Some(k) = (0..n).find(|&k| !f.is_zero(&p[k]) && self.basis[k].degree != want) {
                    out.push(Violation {
                        axiom: Axiom::DegreeAdditivity,
                        witness: vec![i, j, k],
                        message: format!(
                            "degree additivity at ({},{}): product has a term {} of degree {} instead of {}",
                            name(i),
                            name(j),
                            name(k),
                            self.basis[k].degree,
                            want
                        ),
                    });
                }
                if j > i && p != self.product(j, i) {
                    out.push(Violation {
                        axiom: Axiom::Commutativity,
                        witness: vec![i, j],
                        message: format!("commutativity at ({},{})", name(i), name(j)),
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.product(i, j).to_vec();
                for k in 0..n {
                    let left = self.multiply(&ij, &self.unit_vector(k));
                    let right = self.multiply(&self.unit_vector(i), self.product(j, k));
                    if left != right {
                        out.push(Violation {
                            axiom: Axiom::Associativity,
                            witness: vec![i, j, k],
                            message: format!("associativity at ({},{},{})", name(i), name(j), name(k)),
                        });
                    }
                }
            }
        }
        let zero = self.group.zero();
        if let Some(k) = (0..n).find(|&k| !f.is_zero(&self.one[k]) && self.basis[k].degree != zero) {
            out.push(Violation {
                axiom: Axiom::UnitHomogeneity,
                witness: vec![k],
                message: format!("unit has a term {} outside degree zero", name(k)),
            });
        }
        for i in 0..n {
            let e = self.unit_vector(i);
            if self.multiply(&self.one, &e) != e {
                out.push(Violation {
                    axiom: Axiom::UnitLaw,
                    witness: vec![i],
                    message: format!("unit law at {}", name(i)),
                });
            }
        }
        out
    }
}
