//! `R = K[t, t^-1]` graded by `Z` with `deg t = 1`.
//!
//! Every nonzero homogeneous element `c·t^n` is a unit, so the graded ideals
//! are `0` and `R` and the graded Baer criterion holds trivially: `R` is
//! graded-injective. Ungraded, `1 + t` is a non-unit non-zerodivisor, and the
//! map `(1 + t) -> R` sending `1 + t` to `1` has no extension, so `R` is not
//! injective. The certificate records finite evidence for each step and can
//! be recomputed from scratch.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldKind, PrimeField, Rationals};
use crate::linalg::{self, Matrix};

/// A Laurent polynomial as a sparse map from exponent to nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly<E> {
    terms: BTreeMap<i64, E>,
}

impl<E: Clone + PartialEq> LaurentPoly<E> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn monomial<F: Field<Elem = E>>(field: &F, c: E, n: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !field.is_zero(&c) {
            terms.insert(n, c);
        }
        Self { terms }
    }

    pub fn from_terms<F: Field<Elem = E>>(field: &F, terms: impl IntoIterator<Item = (i64, E)>) -> Self {
        let mut out = Self::zero();
        for (n, c) in terms {
            out = out.add(field, &Self::monomial(field, c, n));
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<i64, E> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.len() == 1
    }

    /// Lowest and highest exponents.
    pub fn span(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn add<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (n, c) in &other.terms {
            let sum = match terms.get(n) {
                Some(a) => field.add(a, c),
                None => c.clone(),
            };
            if field.is_zero(&sum) {
                terms.remove(n);
            } else {
                terms.insert(*n, sum);
            }
        }
        Self { terms }
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out = out.add(field, &Self::monomial(field, field.mul(x, y), a + b));
            }
        }
        out
    }

    /// Inverse of a unit. The units of `K[t, t^-1]` are the nonzero monomials.
    pub fn inverse<F: Field<Elem = E>>(&self, field: &F) -> Option<Self> {
        if !self.is_homogeneous() {
            return None;
        }
        let (n, c) = self.terms.iter().next()?;
        Some(Self::monomial(field, field.inv(c)?, -n))
    }
}

/// One step of the certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentCheck {
    pub claim: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentCertificate {
    pub field: String,
    /// Exponents `n` for which `t^n` was checked to be a unit.
    pub unit_window: Vec<i64>,
    /// Radii `W` for which `(1 + t)·y = 1` was shown unsolvable with `y` in degrees `[-W, W]`.
    pub solve_windows: Vec<i64>,
    pub graded_injective: bool,
    pub ungraded_injective: bool,
    pub checks: Vec<LaurentCheck>,
}

impl LaurentCertificate {
    /// Recomputes every check from scratch and compares.
    pub fn verify(&self) -> bool {
        let Ok(kind) = self.field.parse::<FieldKind>() else { return false };
        match build(kind, &self.unit_window, &self.solve_windows) {
            Ok(fresh) => fresh == *self && self.checks.iter().all(|c| c.holds),
            Err(_) => false,
        }
    }
}

const UNIT_WINDOW: std::ops::RangeInclusive<i64> = -3..=3;
const SOLVE_WINDOWS: std::ops::RangeInclusive<i64> = 1..=5;

/// The certificate that `K[t, t^-1]` is graded-injective over itself but not injective.
pub fn laurent_counterexample(kind: FieldKind) -> Result<LaurentCertificate> {
    build(kind, &UNIT_WINDOW.collect::<Vec<_>>(), &SOLVE_WINDOWS.collect::<Vec<_>>())
}

fn build(kind: FieldKind, unit_window: &[i64], solve_windows: &[i64]) -> Result<LaurentCertificate> {
    if unit_window.is_empty() || solve_windows.is_empty() || solve_windows.iter().any(|&w| w < 0) {
        return Err(Error::InvalidStructure("certificate windows must be nonempty and nonnegative".into()));
    }
    let checks = match kind {
        FieldKind::Prime(p) => checks(&PrimeField::new(p)?, unit_window, solve_windows),
        FieldKind::Rational => checks(&Rationals, unit_window, solve_windows),
    };
    let field = kind.to_string();
    Ok(LaurentCertificate {
        field,
        unit_window: unit_window.to_vec(),
        solve_windows: solve_windows.to_vec(),
        graded_injective: checks[0].holds && checks[1].holds,
        ungraded_injective: !(checks[2].holds && checks[3].holds && checks[4].holds),
        checks,
    })
}

/// Matrix of `y ↦ (1 + t)·y` from degrees `[-w, w]` to degrees `[-w, w + 1]`.
fn one_plus_t_matrix<F: Field>(field: &F, w: i64) -> Matrix<F::Elem> {
    let n = (2 * w + 1) as usize;
    let mut m = Matrix::zero(field, n + 1, n);
    for j in 0..n {
        m.set(j, j, field.one());
        m.set(j + 1, j, field.one());
    }
    m
}

fn checks<F: Field>(field: &F, unit_window: &[i64], solve_windows: &[i64]) -> Vec<LaurentCheck> {
    let one = LaurentPoly::monomial(field, field.one(), 0);
    let x = LaurentPoly::from_terms(field, [(0, field.one()), (1, field.one())]);

    let units_ok = unit_window.iter().all(|&n| {
        let t = LaurentPoly::monomial(field, field.one(), n);
        t.inverse(field).is_some_and(|inv| t.mul(field, &inv) == one)
    });
    let units = LaurentCheck {
        claim: "every homogeneous t^n is a unit".into(),
        holds: units_ok,
        detail: format!("t^n·t^-n = 1 for n in {unit_window:?}"),
    };

    // a nonzero graded ideal contains some c·t^n, hence 1
    let ideals = LaurentCheck {
        claim: "the graded ideals are 0 and R, so graded Baer holds".into(),
        holds: units_ok,
        detail: "each component K·t^n is spanned by a unit".into(),
    };

    let non_unit = x.inverse(field).is_none()
        && solve_windows.iter().all(|&w| {
            let m = one_plus_t_matrix(field, w);
            let mut rhs = vec![field.zero(); m.rows()];
            rhs[w as usize] = field.one();
            linalg::solve(field, &m, &rhs).is_none()
        });
    let non_unit = LaurentCheck {
        claim: "1 + t is not a unit".into(),
        holds: non_unit,
        detail: format!("(1 + t)·y = 1 has no solution with y in degrees [-W, W] for W in {solve_windows:?}"),
    };

    let regular = solve_windows.iter().all(|&w| linalg::nullspace(field, &one_plus_t_matrix(field, w)).is_empty());
    let regular = LaurentCheck {
        claim: "1 + t is not a zero divisor".into(),
        holds: regular,
        detail: format!("multiplication by 1 + t is injective on degrees [-W, W] for W in {solve_windows:?}"),
    };

    // an extension φ: R -> R has φ(r) = r·φ(1), so φ(1 + t) = 1 forces (1 + t)·φ(1) = 1
    let no_extension = LaurentCheck {
        claim: "(1 + t) -> R, 1 + t ↦ 1, does not extend to R".into(),
        holds: non_unit.holds && regular.holds,
        detail: "well defined as 1 + t is regular; an extension would invert 1 + t".into(),
    };

    vec![units, ideals, non_unit, regular, no_extension]
}
