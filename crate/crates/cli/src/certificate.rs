//! Self-contained certificates that `verify` re-checks from scratch.

use std::sync::Arc;

use grcoarse::abgroup::GroupElement;
use grcoarse::field::{Field, FieldKind, PrimeField, Rationals};
use grcoarse::graded::json::{module_from_json, module_to_json, ring_from_json, ring_to_json, ModuleJson, RingJson};
use grcoarse::graded::GradedModule;
use grcoarse::injective::{BaerWitness, LaurentCertificate};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

/// A morphism from a graded ideal into a shifted module that does not
/// extend to the whole ring, with everything needed to rebuild it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaerCertificate {
    pub ring: RingJson,
    pub module: ModuleJson,
    pub ideal: Vec<Vec<Value>>,
    pub shift: GroupElement,
    pub images: Vec<Vec<Value>>,
}

impl BaerCertificate {
    pub fn new<F: Field>(m: &GradedModule<F>, w: &BaerWitness<F>) -> Self {
        let f = m.field();
        let enc = |rows: &[Vec<F::Elem>]| -> Vec<Vec<Value>> {
            rows.iter().map(|r| r.iter().map(|x| f.elem_to_json(x)).collect()).collect()
        };
        Self {
            ring: ring_to_json(m.ring()),
            module: module_to_json(m),
            ideal: enc(&w.ideal),
            shift: w.shift.clone(),
            images: enc(&w.images),
        }
    }

    fn verify_over<F: Field>(&self, field: F) -> Result<bool, String> {
        let ring = Arc::new(ring_from_json(field.clone(), &self.ring).map_err(|e| e.to_string())?);
        if let Some(v) = ring.validate().first() {
            return Err(format!("ring: {v}"));
        }
        let m = Arc::new(module_from_json(ring, &self.module).map_err(|e| e.to_string())?);
        if let Some(v) = m.validate().first() {
            return Err(format!("module: {v}"));
        }
        let dec = |rows: &[Vec<Value>]| -> Result<Vec<Vec<F::Elem>>, String> {
            rows.iter()
                .map(|r| r.iter().map(|x| field.elem_from_json(x).map_err(|e| e.to_string())).collect())
                .collect()
        };
        let w = BaerWitness { ideal: dec(&self.ideal)?, shift: self.shift.clone(), images: dec(&self.images)? };
        if !m.ring().group().contains(&w.shift) {
            return Err(format!("shift {} is not in the grading group", w.shift));
        }
        Ok(w.verify(&m))
    }

    pub fn verify(&self) -> Result<bool, String> {
        match self.ring.field.parse::<FieldKind>().map_err(|e| e.to_string())? {
            FieldKind::Prime(p) => self.verify_over(PrimeField::new(p).map_err(|e| e.to_string())?),
            FieldKind::Rational => self.verify_over(Rationals),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "certificate", rename_all = "snake_case")]
pub enum Certificate {
    /// `K[t, t^-1]` is graded-injective but not injective.
    Laurent(LaurentCertificate),
    /// A module fails the graded Baer criterion.
    BaerWitness(BaerCertificate),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: Certificate,
}

impl CertificateFile {
    pub fn new(body: Certificate) -> Self {
        Self { schema_version: CERTIFICATE_SCHEMA_VERSION, body }
    }

    /// `Ok(true)` when every claim re-checks; `Err` when the file does not
    /// describe valid objects.
    pub fn verify(&self) -> Result<bool, String> {
        if self.schema_version != CERTIFICATE_SCHEMA_VERSION {
            return Err(format!("unsupported certificate schema version {}", self.schema_version));
        }
        match &self.body {
            Certificate::Laurent(c) => Ok(c.verify()),
            Certificate::BaerWitness(c) => c.verify(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.body {
            Certificate::Laurent(_) => "laurent",
            Certificate::BaerWitness(_) => "baer_witness",
        }
    }
}
