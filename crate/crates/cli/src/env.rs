//! Resolves scenario declarations into library objects.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use grcoarse::abgroup::{FgAbGroup, GroupElement, GroupHom, IntMatrix};
use grcoarse::coarsen::CoarseningContext;
use grcoarse::field::Field;
use grcoarse::graded::json::{module_from_json, ring_from_json, ModuleJson, RingJson};
use grcoarse::graded::{direct_sum, GradedModule, GradedRing, GradedSubmodule};
use grcoarse::homfun::{IntensionalFreeModule, ModuleClass, Rule, RuleTarget, RuleValue, UniformRuleMorphism};
use grcoarse::Error;
use serde_json::Value;

use crate::scenario::{IntensionalDecl, ModuleDecl, RingDecl, RuleSpec, Scenario, ValueSpec};

/// A problem with the scenario itself: a bad reference, a cycle, or a
/// declaration that does not describe a valid object.
#[derive(Debug, thiserror::Error)]
#[error("{what} {name:?}: {reason}")]
pub struct DeclError {
    pub what: &'static str,
    pub name: String,
    pub reason: String,
}

fn decl_err(what: &'static str, name: &str, reason: impl ToString) -> DeclError {
    DeclError { what, name: name.to_string(), reason: reason.to_string() }
}

pub struct Env<F: Field> {
    pub field: F,
    pub groups: BTreeMap<String, FgAbGroup>,
    pub homs: BTreeMap<String, GroupHom>,
    pub rings: BTreeMap<String, Arc<GradedRing<F>>>,
    pub modules: BTreeMap<String, Arc<GradedModule<F>>>,
    pub intensional: BTreeMap<String, IntensionalFreeModule<F>>,
    pub rules: BTreeMap<String, UniformRuleMorphism<F>>,
}

impl<F: Field> Env<F> {
    /// Builds and validates every declaration.
    pub fn build(field: F, scenario: &Scenario) -> Result<Self, DeclError> {
        let mut b = Builder {
            s: scenario,
            env: Env {
                field,
                groups: scenario.groups.clone(),
                homs: BTreeMap::new(),
                rings: BTreeMap::new(),
                modules: BTreeMap::new(),
                intensional: BTreeMap::new(),
                rules: BTreeMap::new(),
            },
            visiting: BTreeSet::new(),
        };
        for name in scenario.homs.keys() {
            b.hom(name)?;
        }
        for name in scenario.rings.keys() {
            b.ring(name)?;
        }
        for name in scenario.modules.keys() {
            b.module(name)?;
        }
        for (name, decl) in &scenario.intensional {
            let m = b.intensional(name, decl)?;
            b.env.intensional.insert(name.clone(), m);
        }
        for name in scenario.rules.keys() {
            b.rule(name)?;
        }
        Ok(b.env)
    }

    pub fn group(&self, name: &str) -> Result<&FgAbGroup, DeclError> {
        self.groups.get(name).ok_or_else(|| decl_err("group", name, "is not declared"))
    }

    pub fn hom(&self, name: &str) -> Result<&GroupHom, DeclError> {
        self.homs.get(name).ok_or_else(|| decl_err("hom", name, "is not declared"))
    }

    pub fn context(&self, name: &str) -> Result<CoarseningContext, DeclError> {
        CoarseningContext::new(self.hom(name)?.clone()).map_err(|e| decl_err("hom", name, e))
    }

    pub fn ring(&self, name: &str) -> Result<&Arc<GradedRing<F>>, DeclError> {
        self.rings.get(name).ok_or_else(|| decl_err("ring", name, "is not declared"))
    }

    pub fn module(&self, name: &str) -> Result<&Arc<GradedModule<F>>, DeclError> {
        self.modules.get(name).ok_or_else(|| decl_err("module", name, "is not declared"))
    }

    /// An explicit or intensional module.
    pub fn module_class(&self, name: &str) -> Result<ModuleClass<F>, DeclError> {
        if let Some(m) = self.modules.get(name) {
            return Ok(ModuleClass::Explicit(m.clone()));
        }
        self.intensional
            .get(name)
            .map(|m| ModuleClass::Intensional(m.clone()))
            .ok_or_else(|| decl_err("module", name, "is neither an explicit nor an intensional module"))
    }

    pub fn rule(&self, name: &str) -> Result<&UniformRuleMorphism<F>, DeclError> {
        self.rules.get(name).ok_or_else(|| decl_err("rule", name, "is not declared"))
    }

    pub fn element(&self, group: &FgAbGroup, coords: &[i64], owner: &str) -> Result<GroupElement, DeclError> {
        group.element(coords.to_vec()).map_err(|e| decl_err("element", owner, e))
    }

    pub fn vector(&self, values: &[Value], owner: &str) -> Result<Vec<F::Elem>, DeclError> {
        values.iter().map(|v| self.field.elem_from_json(v).map_err(|e| decl_err("value", owner, e))).collect()
    }
}

struct Builder<'a, F: Field> {
    s: &'a Scenario,
    env: Env<F>,
    visiting: BTreeSet<(&'static str, String)>,
}

impl<F: Field> Builder<'_, F> {
    fn enter(&mut self, what: &'static str, name: &str) -> Result<(), DeclError> {
        if !self.visiting.insert((what, name.to_string())) {
            return Err(decl_err(what, name, "is defined in terms of itself"));
        }
        Ok(())
    }

    fn leave(&mut self, what: &'static str, name: &str) {
        self.visiting.remove(&(what, name.to_string()));
    }

    fn hom(&mut self, name: &str) -> Result<GroupHom, DeclError> {
        if let Some(h) = self.env.homs.get(name) {
            return Ok(h.clone());
        }
        let d = self.s.homs.get(name).ok_or_else(|| decl_err("hom", name, "is not declared"))?;
        let domain = self.env.group(&d.domain)?.clone();
        let codomain = self.env.group(&d.codomain)?.clone();
        if d.matrix.len() != codomain.ngens() {
            return Err(decl_err("hom", name, format!("matrix needs {} rows", codomain.ngens())));
        }
        let h = GroupHom::new(domain.clone(), codomain, IntMatrix::from_rows(d.matrix.clone(), domain.ngens()))
            .map_err(|e| decl_err("hom", name, e))?;
        self.env.homs.insert(name.to_string(), h.clone());
        Ok(h)
    }

    fn context(&mut self, name: &str) -> Result<CoarseningContext, DeclError> {
        let h = self.hom(name)?;
        CoarseningContext::new(h).map_err(|e| decl_err("hom", name, e))
    }

    fn ring(&mut self, name: &str) -> Result<Arc<GradedRing<F>>, DeclError> {
        if let Some(r) = self.env.rings.get(name) {
            return Ok(r.clone());
        }
        let d = self.s.rings.get(name).ok_or_else(|| decl_err("ring", name, "is not declared"))?;
        self.enter("ring", name)?;
        let f = self.env.field.clone();
        let err = |e: Error| decl_err("ring", name, e);
        let ring = match d {
            RingDecl::Field { group } => GradedRing::concentrated(f, self.env.group(group)?.clone()),
            RingDecl::GroupAlgebra { group } => GradedRing::group_algebra(f, self.env.group(group)?.clone()).map_err(err)?,
            RingDecl::TruncatedPolynomial { group, deg_t, n } => {
                let g = self.env.group(group)?.clone();
                let t = self.env.element(&g, deg_t, name)?;
                GradedRing::truncated_polynomial(f, g, &t, *n).map_err(err)?
            }
            RingDecl::Explicit { group, basis, mul, one } => {
                let json = RingJson {
                    field: f.name(),
                    group: self.env.group(group)?.clone(),
                    basis: basis.clone(),
                    mul: mul.clone(),
                    one: one.clone(),
                };
                ring_from_json(f, &json).map_err(err)?
            }
            RingDecl::Coarsened { of, psi } => {
                let base = self.ring(of)?;
                self.context(psi)?.coarsen_ring(&base).map_err(err)?
            }
        };
        if let Some(v) = ring.validate().first() {
            return Err(decl_err("ring", name, v));
        }
        self.leave("ring", name);
        let ring = Arc::new(ring);
        self.env.rings.insert(name.to_string(), ring.clone());
        Ok(ring)
    }

    fn module(&mut self, name: &str) -> Result<Arc<GradedModule<F>>, DeclError> {
        if let Some(m) = self.env.modules.get(name) {
            return Ok(m.clone());
        }
        let d = self.s.modules.get(name).ok_or_else(|| decl_err("module", name, "is not declared"))?;
        self.enter("module", name)?;
        let err = |e: Error| decl_err("module", name, e);
        let module = match d {
            ModuleDecl::Regular { ring } => GradedModule::regular(self.ring(ring)?),
            ModuleDecl::Zero { ring } => GradedModule::zero(self.ring(ring)?),
            ModuleDecl::Free { ring, degrees } => {
                let r = self.ring(ring)?;
                let parts = degrees
                    .iter()
                    .map(|d| Ok(Arc::new(GradedModule::free_cyclic(r.clone(), &self.env.element(r.group(), d, name)?))))
                    .collect::<Result<Vec<_>, DeclError>>()?;
                Arc::unwrap_or_clone(direct_sum(&r, &parts).map_err(err)?.module)
            }
            ModuleDecl::Explicit { ring, basis, action } => {
                let r = self.ring(ring)?;
                module_from_json(r, &ModuleJson { basis: basis.clone(), action: action.clone() }).map_err(err)?
            }
            ModuleDecl::Shift { of, by } => {
                let m = self.module(of)?;
                let g = self.env.element(m.ring().group(), by, name)?;
                m.shift(&g)
            }
            ModuleDecl::Sum { of } => {
                let parts = of.iter().map(|p| self.module(p)).collect::<Result<Vec<_>, _>>()?;
                let ring = match parts.first() {
                    Some(p) => p.ring().clone(),
                    None => return Err(decl_err("module", name, "a sum needs at least one summand")),
                };
                if parts.iter().any(|p| !p.same_ring(&parts[0])) {
                    return Err(decl_err("module", name, "summands are over different rings"));
                }
                Arc::unwrap_or_clone(direct_sum(&ring, &parts).map_err(err)?.module)
            }
            ModuleDecl::Quotient { of, generators } => {
                let m = self.module(of)?;
                let gens = generators.iter().map(|g| self.env.vector(g, name)).collect::<Result<Vec<_>, _>>()?;
                if gens.iter().any(|g| g.len() != m.dim()) {
                    return Err(decl_err("module", name, format!("generators must have length {}", m.dim())));
                }
                let sub = GradedSubmodule::generated_by(m, &gens).map_err(err)?;
                Arc::unwrap_or_clone(sub.quotient().map_err(err)?.0)
            }
            ModuleDecl::Coarsened { of, psi } => {
                let m = self.module(of)?;
                let ctx = self.context(psi)?;
                let coarse_ring = self.coarse_ring_for(m.ring(), &ctx);
                match coarse_ring {
                    Some(r) => ctx.coarsen_module_over(&m, r).map_err(err)?,
                    None => ctx.coarsen_module(&m).map_err(err)?,
                }
            }
        };
        if let Some(v) = module.validate().first() {
            return Err(decl_err("module", name, v));
        }
        self.leave("module", name);
        let module = Arc::new(module);
        self.env.modules.insert(name.to_string(), module.clone());
        Ok(module)
    }

    /// A declared ring equal to the coarsening of `ring`, so coarsened
    /// modules share it with other modules declared over it.
    fn coarse_ring_for(&self, ring: &GradedRing<F>, ctx: &CoarseningContext) -> Option<Arc<GradedRing<F>>> {
        let coarse = ctx.coarsen_ring(ring).ok()?;
        self.env.rings.values().find(|r| ***r == coarse).cloned()
    }

    fn intensional(&mut self, name: &str, d: &IntensionalDecl) -> Result<IntensionalFreeModule<F>, DeclError> {
        let ring = self.ring(&d.ring)?;
        let err = |e: Error| decl_err("intensional module", name, e);
        match (&d.free_over, &d.degrees) {
            (Some(gens), None) => {
                let gens = gens.iter().map(|g| self.env.element(ring.group(), g, name)).collect::<Result<_, _>>()?;
                IntensionalFreeModule::subgroup_indexed(ring, gens).map_err(err)
            }
            (None, Some(degrees)) => {
                let degrees = degrees.iter().map(|g| self.env.element(ring.group(), g, name)).collect::<Result<_, _>>()?;
                IntensionalFreeModule::finite_degrees(ring, degrees).map_err(err)
            }
            _ => Err(decl_err("intensional module", name, "give exactly one of free_over and degrees")),
        }
    }

    fn value(&self, v: &ValueSpec, group: &FgAbGroup, owner: &str) -> Result<RuleValue<F>, DeclError> {
        Ok(match v {
            ValueSpec::Vector(values) => RuleValue::Vector(self.env.vector(values, owner)?),
            ValueSpec::Terms(terms) => RuleValue::Terms(
                terms
                    .iter()
                    .map(|t| Ok((self.env.element(group, &t.index, owner)?, self.env.vector(&t.coeffs, owner)?)))
                    .collect::<Result<_, DeclError>>()?,
            ),
        })
    }

    fn rule(&mut self, name: &str) -> Result<(), DeclError> {
        let d = &self.s.rules[name];
        let ctx = self.context(&d.psi)?;
        let source = self
            .env
            .intensional
            .get(&d.source)
            .cloned()
            .ok_or_else(|| decl_err("rule", name, format!("source {:?} is not an intensional module", d.source)))?;
        let (target, target_group) = if let Some(n) = self.env.intensional.get(&d.target) {
            (RuleTarget::Intensional(n.clone()), n.index_group().clone())
        } else {
            let n = self.env.module(&d.target)?.clone();
            (RuleTarget::Explicit(n.clone()), n.ring().group().clone())
        };
        let index_group = source.index_group().clone();
        let rule = match &d.rule {
            RuleSpec::Constant { constant } => Rule::Constant(self.value(constant, &target_group, name)?),
            RuleSpec::Exceptions { default, exceptions } => Rule::FinitelyManyExceptions {
                default: self.value(default, &target_group, name)?,
                exceptions: exceptions
                    .iter()
                    .map(|e| Ok((self.env.element(&index_group, &e.index, name)?, self.value(&e.value, &target_group, name)?)))
                    .collect::<Result<_, DeclError>>()?,
            },
        };
        let u = UniformRuleMorphism::new(&ctx, source, target, rule).map_err(|e| decl_err("rule", name, e))?;
        self.env.rules.insert(name.to_string(), u);
        Ok(())
    }
}
