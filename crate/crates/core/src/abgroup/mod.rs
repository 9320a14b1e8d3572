//! Finitely generated abelian groups in invariant-factor form, homomorphisms
//! between them, kernels, quotients and fibers.
//!
//! A group `Z^r + Z/d_1 + ... + Z/d_k` (with `d_1 | ... | d_k`, all `d_i >= 2`)
//! has elements written as integer vectors of length `r + k`: the free
//! coordinates first, then the torsion coordinates reduced into `[0, d_i)`.

mod snf;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use snf::{smith_normal_form, IntMatrix, SmithForm};

use crate::error::{Error, Result};

/// A degree: coordinates of a group element in canonical reduced form.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<i64>);

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for GroupElement {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct FgAbGroup {
    rank: usize,
    invariants: Vec<i64>,
}

#[derive(Deserialize)]
struct RawGroup {
    rank: usize,
    #[serde(default)]
    invariants: Vec<i64>,
}

impl TryFrom<RawGroup> for FgAbGroup {
    type Error = Error;

    fn try_from(raw: RawGroup) -> Result<Self> {
        FgAbGroup::new(raw.rank, raw.invariants)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariants.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Order of a group (or kernel): finite with a count, or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupOrder {
    Finite(u64),
    Infinite,
}

impl GroupOrder {
    pub fn is_finite(&self) -> bool {
        matches!(self, GroupOrder::Finite(_))
    }
}

impl FgAbGroup {
    /// Rejects invariants that are below 2 or break the divisibility chain.
    pub fn new(rank: usize, invariants: Vec<i64>) -> Result<Self> {
        if let Some(d) = invariants.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidGroup(format!("invariant factor {d} is below 2")));
        }
        if let Some(w) = invariants.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidGroup(format!("{} does not divide {}", w[0], w[1])));
        }
        Ok(Self { rank, invariants })
    }

    pub fn trivial() -> Self {
        Self { rank: 0, invariants: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        Self { rank, invariants: Vec::new() }
    }

    pub fn cyclic(n: i64) -> Result<Self> {
        match n {
            0 => Ok(Self::free(1)),
            1 => Ok(Self::trivial()),
            n => Self::new(0, vec![n]),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn invariants(&self) -> &[i64] {
        &self.invariants
    }

    /// Number of coordinates of an element.
    pub fn ngens(&self) -> usize {
        self.rank + self.invariants.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn order(&self) -> GroupOrder {
        if self.rank > 0 {
            GroupOrder::Infinite
        } else {
            GroupOrder::Finite(self.invariants.iter().map(|&d| d as u64).product())
        }
    }

    /// Order of coordinate `i` (`0` for a free coordinate).
    fn modulus(&self, i: usize) -> i64 {
        if i < self.rank {
            0
        } else {
            self.invariants[i - self.rank]
        }
    }

    pub fn reduce(&self, coords: &[i64]) -> GroupElement {
        assert_eq!(coords.len(), self.ngens(), "coordinate count for {self}");
        GroupElement(
            coords
                .iter()
                .enumerate()
                .map(|(i, &c)| match self.modulus(i) {
                    0 => c,
                    d => c.rem_euclid(d),
                })
                .collect(),
        )
    }

    /// Reduces `coords` after checking the length.
    pub fn element(&self, coords: Vec<i64>) -> Result<GroupElement> {
        if coords.len() != self.ngens() {
            return Err(Error::NotInGroup { element: coords });
        }
        Ok(self.reduce(&coords))
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.ngens()
            && g.0.iter().enumerate().all(|(i, &c)| match self.modulus(i) {
                0 => true,
                d => (0..d).contains(&c),
            })
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::NotInGroup { element: g.0.clone() })
        }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.ngens()])
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut v = vec![0; self.ngens()];
        v[i] = 1;
        self.reduce(&v)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let v: Vec<i64> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        self.reduce(&v)
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let v: Vec<i64> = a.0.iter().map(|x| -x).collect();
        self.reduce(&v)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let v: Vec<i64> = a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect();
        self.reduce(&v)
    }

    pub fn scale(&self, n: i64, a: &GroupElement) -> GroupElement {
        let v: Vec<i64> = a.0.iter().map(|x| n * x).collect();
        self.reduce(&v)
    }

    /// All elements in lexicographic order, for finite groups.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        if self.rank > 0 {
            return None;
        }
        let mut out = vec![Vec::new()];
        for &d in &self.invariants {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (0..d).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        Some(out.into_iter().map(GroupElement).collect())
    }

    /// Columns `d_i e_{r+i}`: the relations of the presentation.
    pub fn relations(&self) -> IntMatrix {
        let n = self.ngens();
        let cols: Vec<Vec<i64>> = self
            .invariants
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut c = vec![0; n];
                c[self.rank + i] = d;
                c
            })
            .collect();
        IntMatrix::from_columns(&cols, n)
    }

    /// The subgroup generated by `gens`, in invariant-factor form, with its embedding.
    pub fn subgroup(&self, gens: &[GroupElement]) -> Result<(FgAbGroup, GroupHom)> {
        for g in gens {
            self.check(g)?;
        }
        let n = self.ngens();
        let s = gens.len();
        let w = IntMatrix::from_columns(&gens.iter().map(|g| g.0.clone()).collect::<Vec<_>>(), n);
        // relation lattice {c : W c in im D}
        let m = w.hconcat(&self.relations());
        let snf = smith_normal_form(&m);
        let r = snf.rank();
        let relations: Vec<Vec<i64>> = (r..m.cols()).map(|c| snf.right.column(c)[..s].to_vec()).collect();
        let rel = IntMatrix::from_columns(&relations, s);
        let snf2 = smith_normal_form(&rel);
        let r2 = snf2.rank();
        let diag = snf2.invariants();
        // generators of the subgroup: W * U2^{-1} e_i
        let images = w.mul(&snf2.left_inverse);
        let mut free_cols = Vec::new();
        let mut torsion = Vec::new();
        let mut torsion_cols = Vec::new();
        for i in 0..s {
            if i >= r2 {
                free_cols.push(self.reduce(&images.column(i)).0);
            } else if diag[i] > 1 {
                torsion.push(diag[i]);
                torsion_cols.push(self.reduce(&images.column(i)).0);
            }
        }
        let sub = FgAbGroup::new(free_cols.len(), torsion)?;
        free_cols.extend(torsion_cols);
        let embedding = GroupHom::new(sub.clone(), self.clone(), IntMatrix::from_columns(&free_cols, n))?;
        Ok((sub, embedding))
    }

    /// The quotient by the subgroup generated by `gens`, with the canonical projection.
    pub fn quotient(&self, gens: &[GroupElement]) -> Result<(FgAbGroup, GroupHom)> {
        for g in gens {
            self.check(g)?;
        }
        let n = self.ngens();
        let w = IntMatrix::from_columns(&gens.iter().map(|g| g.0.clone()).collect::<Vec<_>>(), n);
        let m = self.relations().hconcat(&w);
        let snf = smith_normal_form(&m);
        let r = snf.rank();
        let diag = snf.invariants();
        let mut rows: Vec<usize> = (r..n).collect();
        let mut torsion = Vec::new();
        for (i, &d) in diag.iter().enumerate() {
            if d > 1 {
                rows.push(i);
                torsion.push(d);
            }
        }
        let quotient = FgAbGroup::new(n - r, torsion)?;
        let mut proj = IntMatrix::zeros(rows.len(), n);
        for (qi, &ui) in rows.iter().enumerate() {
            for c in 0..n {
                proj.set(qi, c, snf.left.get(ui, c));
            }
        }
        // reduce each column into canonical coordinates
        let cols: Vec<Vec<i64>> = (0..n).map(|c| quotient.reduce(&proj.column(c)).0).collect();
        let projection = GroupHom::new(self.clone(), quotient.clone(), IntMatrix::from_columns(&cols, rows.len()))?;
        Ok((quotient, projection))
    }
}

/// A homomorphism `domain -> codomain`; column `j` is the image of generator `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupHom {
    domain: FgAbGroup,
    codomain: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Validates shape and well-definedness on torsion generators; the
    /// columns are stored reduced.
    pub fn new(domain: FgAbGroup, codomain: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != codomain.ngens() || matrix.cols() != domain.ngens() {
            return Err(Error::IllDefinedHom(format!(
                "matrix is {}x{}, expected {}x{} for {} -> {}",
                matrix.rows(),
                matrix.cols(),
                codomain.ngens(),
                domain.ngens(),
                domain,
                codomain
            )));
        }
        for (i, &d) in domain.invariants.iter().enumerate() {
            let j = domain.rank + i;
            let col: Vec<i64> = matrix.column(j).iter().map(|x| d * x).collect();
            if codomain.reduce(&col) != codomain.zero() {
                return Err(Error::IllDefinedHom(format!(
                    "generator {j} has order {d} but {d} times its image {:?} is nonzero in {codomain}",
                    matrix.column(j)
                )));
            }
        }
        let cols: Vec<Vec<i64>> = (0..domain.ngens()).map(|c| codomain.reduce(&matrix.column(c)).0).collect();
        let matrix = IntMatrix::from_columns(&cols, codomain.ngens());
        Ok(Self { domain, codomain, matrix })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Self { domain: g.clone(), codomain: g.clone(), matrix: IntMatrix::identity(g.ngens()) }
    }

    /// The zero map onto the trivial group.
    pub fn to_trivial(g: &FgAbGroup) -> Self {
        Self { domain: g.clone(), codomain: FgAbGroup::trivial(), matrix: IntMatrix::zeros(0, g.ngens()) }
    }

    pub fn domain(&self) -> &FgAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        debug_assert!(self.domain.contains(g), "{g} not in {}", self.domain);
        self.codomain.reduce(&self.matrix.apply(&g.0))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.codomain != other.domain {
            return Err(Error::GroupMismatch(format!("cannot compose {} -> {} with {} -> {}", self.domain, self.codomain, other.domain, other.codomain)));
        }
        GroupHom::new(self.domain.clone(), other.codomain.clone(), other.matrix.mul(&self.matrix))
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.codomain && self.matrix == IntMatrix::identity(self.domain.ngens())
    }

    /// `[A | D]`: the image of this matrix together with the codomain relations.
    fn augmented(&self) -> IntMatrix {
        self.matrix.hconcat(&self.codomain.relations())
    }

    /// Some `g` with `self(g) = h`, if one exists.
    pub fn preimage(&self, h: &GroupElement) -> Option<GroupElement> {
        let m = self.augmented();
        let snf = smith_normal_form(&m);
        let uh = snf.left.apply(&h.0);
        let diag = snf.invariants();
        let mut w = vec![0i64; m.cols()];
        for (i, &x) in uh.iter().enumerate() {
            match diag.get(i) {
                Some(&d) => {
                    if x % d != 0 {
                        return None;
                    }
                    w[i] = x / d;
                }
                None if x != 0 => return None,
                None => {}
            }
        }
        let z = snf.right.apply(&w);
        let g = self.domain.reduce(&z[..self.domain.ngens()]);
        debug_assert_eq!(&self.apply(&g), h);
        Some(g)
    }
}

/// The kernel of a homomorphism with its embedding into the domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelData {
    pub kernel: FgAbGroup,
    pub embedding: GroupHom,
    pub order: GroupOrder,
}

impl KernelData {
    pub fn is_finite(&self) -> bool {
        self.order.is_finite()
    }

    /// Kernel elements as elements of the domain, sorted; `None` if infinite.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        let mut els: Vec<GroupElement> = self.kernel.elements()?.iter().map(|k| self.embedding.apply(k)).collect();
        els.sort();
        els.dedup();
        Some(els)
    }

    /// Images of the canonical kernel generators in the domain.
    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.kernel.ngens()).map(|i| self.embedding.apply(&self.kernel.generator(i))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpiAnalysis {
    pub is_epi: bool,
    /// Torsion invariants of the cokernel.
    pub cokernel_invariants: Vec<i64>,
    pub cokernel_rank: usize,
    pub kernel: KernelData,
}

pub fn analyze_epimorphism(psi: &GroupHom) -> Result<EpiAnalysis> {
    let m = psi.augmented();
    let snf = smith_normal_form(&m);
    let n = psi.codomain.ngens();
    let r = snf.rank();
    let diag = snf.invariants();
    let cokernel_invariants: Vec<i64> = diag.iter().copied().filter(|&d| d > 1).collect();
    let cokernel_rank = n - r;
    let is_epi = cokernel_rank == 0 && cokernel_invariants.is_empty();

    let dom = psi.domain.ngens();
    let kernel_lifts: Vec<GroupElement> =
        (r..m.cols()).map(|c| psi.domain.reduce(&snf.right.column(c)[..dom])).collect();
    let (kernel, embedding) = psi.domain.subgroup(&kernel_lifts)?;
    let order = kernel.order();
    Ok(EpiAnalysis { is_epi, cokernel_invariants, cokernel_rank, kernel: KernelData { kernel, embedding, order } })
}

/// Images of `Σ c_i k_i` under `embedding`, with `|c_i| <= radius` on the
/// free generators `k_i` of its domain and all residues on the torsion ones;
/// sorted. The whole image when the domain is finite.
pub fn subgroup_window(embedding: &GroupHom, radius: i64) -> Vec<GroupElement> {
    let sub = embedding.domain();
    let g = embedding.codomain();
    let mut out = vec![g.zero()];
    for i in 0..sub.ngens() {
        let range: Vec<i64> =
            if i < sub.rank() { (-radius..=radius).collect() } else { (0..sub.invariants()[i - sub.rank()]).collect() };
        let gen = embedding.apply(&sub.generator(i));
        out = out.iter().flat_map(|x| range.iter().map(|&c| g.add(x, &g.scale(c, &gen))).collect::<Vec<_>>()).collect();
    }
    out.sort();
    out.dedup();
    out
}

/// All `g` with `psi(g) = h`, sorted lexicographically.
pub fn fiber(psi: &GroupHom, h: &GroupElement) -> Result<Vec<GroupElement>> {
    let analysis = analyze_epimorphism(psi)?;
    fiber_with(psi, &analysis, h)
}

pub(crate) fn fiber_with(psi: &GroupHom, analysis: &EpiAnalysis, h: &GroupElement) -> Result<Vec<GroupElement>> {
    psi.codomain.check(h)?;
    if !analysis.is_epi {
        return Err(Error::NotEpimorphism {
            cokernel: analysis.cokernel_invariants.clone(),
            free_rank: analysis.cokernel_rank,
        });
    }
    let kernel = analysis
        .kernel
        .elements()
        .ok_or_else(|| Error::InfiniteKernel(format!("kernel {} of {} -> {}", analysis.kernel.kernel, psi.domain, psi.codomain)))?;
    let base = psi.preimage(h).expect("epimorphism has preimages");
    let mut out: Vec<GroupElement> = kernel.iter().map(|k| psi.domain.add(&base, k)).collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    fn zn(n: i64) -> FgAbGroup {
        FgAbGroup::cyclic(n).unwrap()
    }

    fn el(v: &[i64]) -> GroupElement {
        GroupElement(v.to_vec())
    }

    #[test]
    fn rejects_bad_invariants() {
        assert!(FgAbGroup::new(0, vec![2, 3]).is_err());
        assert!(FgAbGroup::new(0, vec![1]).is_err());
        assert!(FgAbGroup::new(1, vec![2, 4]).is_ok());
    }

    #[test]
    fn rejects_ill_defined_hom() {
        // Z/2 -> Z/3 sending 1 to 1 is not well defined
        let err = GroupHom::new(zn(2), zn(3), IntMatrix::from_rows(vec![vec![1]], 1)).unwrap_err();
        assert!(matches!(err, Error::IllDefinedHom(_)));
        // Z/2 -> Z sending 1 to 1 neither
        assert!(GroupHom::new(zn(2), z(), IntMatrix::from_rows(vec![vec![1]], 1)).is_err());
        assert!(GroupHom::new(zn(4), zn(2), IntMatrix::from_rows(vec![vec![1]], 1)).is_ok());
    }

    #[test]
    fn multiplication_by_two_is_not_epi() {
        let psi = GroupHom::new(z(), z(), IntMatrix::from_rows(vec![vec![2]], 1)).unwrap();
        let a = analyze_epimorphism(&psi).unwrap();
        assert!(!a.is_epi);
        assert_eq!(a.cokernel_invariants, vec![2]);
        assert_eq!(a.kernel.order, GroupOrder::Finite(1));
        assert!(matches!(fiber(&psi, &el(&[0])), Err(Error::NotEpimorphism { .. })));
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let a = analyze_epimorphism(&GroupHom::identity(&z())).unwrap();
        assert!(a.is_epi);
        assert!(a.kernel.kernel.is_trivial());
        assert_eq!(a.kernel.order, GroupOrder::Finite(1));
        assert_eq!(fiber(&GroupHom::identity(&z()), &el(&[5])).unwrap(), vec![el(&[5])]);
    }

    #[test]
    fn projection_z_to_z2() {
        let psi = GroupHom::new(z(), zn(2), IntMatrix::from_rows(vec![vec![1]], 1)).unwrap();
        let a = analyze_epimorphism(&psi).unwrap();
        assert!(a.is_epi);
        assert_eq!(a.kernel.kernel, z());
        assert_eq!(a.kernel.order, GroupOrder::Infinite);
        let g = a.kernel.embedding.apply(&el(&[1]));
        assert_eq!(g.0[0].abs(), 2);
        assert!(matches!(fiber(&psi, &el(&[1])), Err(Error::InfiniteKernel(_))));
    }

    #[test]
    fn fiber_z4_to_z2() {
        let psi = GroupHom::new(zn(4), zn(2), IntMatrix::from_rows(vec![vec![1]], 1)).unwrap();
        assert_eq!(fiber(&psi, &el(&[0])).unwrap(), vec![el(&[0]), el(&[2])]);
        assert_eq!(fiber(&psi, &el(&[1])).unwrap(), vec![el(&[1]), el(&[3])]);
        // exhaustive oracle
        for h in 0..2 {
            let brute: Vec<_> = (0..4).filter(|g| g % 2 == h).map(|g| el(&[g])).collect();
            assert_eq!(fiber(&psi, &el(&[h])).unwrap(), brute);
        }
    }

    #[test]
    fn fiber_to_trivial_group() {
        let psi = GroupHom::to_trivial(&zn(2));
        assert_eq!(fiber(&psi, &el(&[])).unwrap(), vec![el(&[0]), el(&[1])]);
    }

    #[test]
    fn z_plus_z2_onto_z() {
        let g = FgAbGroup::new(1, vec![2]).unwrap();
        let psi = GroupHom::new(g.clone(), z(), IntMatrix::from_rows(vec![vec![1, 0]], 2)).unwrap();
        let a = analyze_epimorphism(&psi).unwrap();
        assert!(a.is_epi);
        assert_eq!(a.kernel.kernel, zn(2));
        assert_eq!(fiber(&psi, &el(&[3])).unwrap(), vec![el(&[3, 0]), el(&[3, 1])]);
    }

    #[test]
    fn subgroup_and_quotient() {
        // <2> in Z/4 is Z/2; Z/4 / <2> is Z/2
        let g = zn(4);
        let (sub, emb) = g.subgroup(&[el(&[2])]).unwrap();
        assert_eq!(sub, zn(2));
        assert_eq!(emb.apply(&el(&[1])), el(&[2]));
        let (q, pi) = g.quotient(&[el(&[2])]).unwrap();
        assert_eq!(q, zn(2));
        assert_eq!(pi.apply(&el(&[3])), el(&[1]));
        // Z / <3> = Z/3, and Z^2 / <(1,0)> = Z
        let (q, pi) = z().quotient(&[el(&[3])]).unwrap();
        assert_eq!(q, zn(3));
        assert_eq!(pi.apply(&el(&[4])), el(&[1]));
        let (q, pi) = FgAbGroup::free(2).quotient(&[el(&[1, 0])]).unwrap();
        assert_eq!(q, z());
        assert_eq!(pi.apply(&el(&[7, 1])).0[0].abs(), 1);
        // quotient of Z by itself
        let (q, pi) = z().quotient(&[el(&[1])]).unwrap();
        assert!(q.is_trivial());
        assert!(analyze_epimorphism(&pi).unwrap().is_epi);
    }

    #[test]
    fn composition_of_epis_is_epi() {
        let p1 = GroupHom::new(zn(4), zn(2), IntMatrix::from_rows(vec![vec![1]], 1)).unwrap();
        let p2 = GroupHom::to_trivial(&zn(2));
        let c = p1.then(&p2).unwrap();
        let a = analyze_epimorphism(&c).unwrap();
        assert!(a.is_epi);
        assert_eq!(a.kernel.order, GroupOrder::Finite(4));
    }

    #[test]
    fn json_shape() {
        let g: FgAbGroup = serde_json::from_str(r#"{"rank": 1, "invariants": [2, 4]}"#).unwrap();
        assert_eq!(g.ngens(), 3);
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"rank":1,"invariants":[2,4]}"#);
        assert!(serde_json::from_str::<FgAbGroup>(r#"{"rank": 0, "invariants": [3, 2]}"#).is_err());
    }
}
