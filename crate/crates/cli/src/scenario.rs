//! Scenario files, version 1.
//!
//! A scenario declares groups, homomorphisms, rings, modules, intensional
//! free modules and rule morphisms by name, followed by an ordered list of
//! checks. All objects share the field named at the top level.

use std::collections::BTreeMap;

use grcoarse::abgroup::FgAbGroup;
use grcoarse::graded::json::{BasisJson, EntryJson};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const SCENARIO_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    #[serde(default)]
    pub name: Option<String>,
    pub field: String,
    #[serde(default)]
    pub groups: BTreeMap<String, FgAbGroup>,
    #[serde(default)]
    pub homs: BTreeMap<String, HomDecl>,
    #[serde(default)]
    pub rings: BTreeMap<String, RingDecl>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleDecl>,
    #[serde(default)]
    pub intensional: BTreeMap<String, IntensionalDecl>,
    #[serde(default)]
    pub rules: BTreeMap<String, RuleDecl>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

/// Column `j` of `matrix` is the image of generator `j`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDecl {
    pub domain: String,
    pub codomain: String,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingDecl {
    /// The field concentrated in degree zero.
    Field { group: String },
    GroupAlgebra { group: String },
    TruncatedPolynomial { group: String, deg_t: Vec<i64>, n: usize },
    Explicit {
        group: String,
        basis: Vec<BasisJson>,
        #[serde(default)]
        mul: Vec<EntryJson>,
        one: Vec<Value>,
    },
    Coarsened { of: String, psi: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleDecl {
    Regular { ring: String },
    Zero { ring: String },
    /// `⊕ R(-d)`: one generator in each listed degree.
    Free { ring: String, degrees: Vec<Vec<i64>> },
    Explicit {
        ring: String,
        basis: Vec<BasisJson>,
        #[serde(default)]
        action: Vec<EntryJson>,
    },
    Shift { of: String, by: Vec<i64> },
    Sum { of: Vec<String> },
    /// Quotient by the submodule generated by the given vectors.
    Quotient { of: String, generators: Vec<Vec<Value>> },
    Coarsened { of: String, psi: String },
}

/// A free module `⊕_k R(-k)` indexed by the subgroup spanned by `free_over`,
/// or by the finite list `degrees`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntensionalDecl {
    pub ring: String,
    #[serde(default)]
    pub free_over: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub degrees: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDecl {
    pub psi: String,
    pub source: String,
    /// A module or an intensional module.
    pub target: String,
    pub rule: RuleSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RuleSpec {
    Constant { constant: ValueSpec },
    Exceptions { default: ValueSpec, exceptions: Vec<ExceptionSpec> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExceptionSpec {
    pub index: Vec<i64>,
    pub value: ValueSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ValueSpec {
    Vector(Vec<Value>),
    Terms(Vec<TermSpec>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub index: Vec<i64>,
    pub coeffs: Vec<Value>,
}

/// One check invocation. `expect` lists observed values the check must
/// produce; `{"error": "<kind>"}` expects the check to fail with that error.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Map<String, Value>>,
    #[serde(flatten)]
    pub kind: CheckKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjunctionDirection {
    /// Coarsening left adjoint to refinement.
    CoarsenRefine,
    /// Refinement left adjoint to coarsening; finite kernel only.
    RefineCoarsen,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum CheckKind {
    Coarsen {
        psi: String,
        module: String,
    },
    /// Refines an H-graded module over the coarsening of `ring`.
    Refine {
        psi: String,
        ring: String,
        module: String,
        #[serde(default)]
        window_radius: Option<i64>,
    },
    /// Refines an H-graded ring and reports its multiplication table.
    RefineRing {
        psi: String,
        ring: String,
    },
    /// `m` is G-graded; `n` is H-graded over the coarsened ring.
    Adjunction {
        psi: String,
        direction: AdjunctionDirection,
        m: String,
        n: String,
    },
    /// `δ′∘α′ = id` on `m`, and `β′∘γ′ = |ker ψ|·id` on `n` when given.
    Transformations {
        psi: String,
        m: String,
        #[serde(default)]
        n: Option<String>,
    },
    ProductDefect {
        psi: String,
        #[serde(default)]
        family: Vec<String>,
        /// The family `(R(-g))_{g ∈ ker ψ}` over this ring.
        #[serde(default)]
        kernel_shifts: Option<String>,
    },
    GradedHom {
        m: String,
        n: String,
    },
    /// `m` may be intensional; then only the predicted verdict is available.
    Hpsi {
        psi: String,
        m: String,
        n: String,
    },
    HpsiRule {
        rule: String,
    },
    Small {
        module: String,
        #[serde(default)]
        psi: Option<String>,
        #[serde(default)]
        relative_to: Option<String>,
    },
    IsoTransfer {
        module: String,
        subgroup: Vec<Vec<i64>>,
        #[serde(default)]
        psi_list: Vec<String>,
        #[serde(default)]
        probes: Vec<String>,
    },
    Injective {
        module: String,
        #[serde(default)]
        psi: Option<String>,
    },
    Cogenerator {
        module: String,
    },
    Laurent {
        #[serde(default)]
        field: Option<String>,
    },
}

impl CheckKind {
    pub fn tag(&self) -> &'static str {
        match self {
            CheckKind::Coarsen { .. } => "coarsen",
            CheckKind::Refine { .. } => "refine",
            CheckKind::RefineRing { .. } => "refine_ring",
            CheckKind::Adjunction { .. } => "adjunction",
            CheckKind::Transformations { .. } => "transformations",
            CheckKind::ProductDefect { .. } => "product_defect",
            CheckKind::GradedHom { .. } => "graded_hom",
            CheckKind::Hpsi { .. } => "hpsi",
            CheckKind::HpsiRule { .. } => "hpsi_rule",
            CheckKind::Small { .. } => "small",
            CheckKind::IsoTransfer { .. } => "iso_transfer",
            CheckKind::Injective { .. } => "injective",
            CheckKind::Cogenerator { .. } => "cogenerator",
            CheckKind::Laurent { .. } => "laurent",
        }
    }
}
