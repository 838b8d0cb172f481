use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{CompositeModulus, PrimeModulus};
use crate::error::{Error, Result};

/// Tolerance applied to the real-valued and sup-norm contracts.
pub const CONTRACT_TOL: f64 = 1e-9;

/// The ring a trace function lives on.
#[derive(Debug, Clone)]
pub enum Modulus {
    Prime(Arc<PrimeModulus>),
    Composite(Arc<CompositeModulus>),
}

impl Modulus {
    pub fn size(&self) -> u64 {
        match self {
            Modulus::Prime(m) => m.q(),
            Modulus::Composite(c) => c.c(),
        }
    }
}

/// Family metadata carried alongside the values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyMeta {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub real_valued: bool,
    /// Bound on `max |K(x)|` claimed by theory; checked when the function is built.
    pub sup_norm: Option<f64>,
    /// Integer complexity standing in for the conductor of the underlying sheaf.
    pub conductor: Option<u32>,
    pub description: String,
}

impl FamilyMeta {
    pub fn new(family: impl Into<String>) -> Self {
        Self {
            family: family.into(),
            params: BTreeMap::new(),
            real_valued: false,
            sup_norm: None,
            conductor: None,
            description: String::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn real(mut self, real: bool) -> Self {
        self.real_valued = real;
        self
    }

    pub fn sup_norm(mut self, bound: f64) -> Self {
        self.sup_norm = Some(bound);
        self
    }

    pub fn conductor(mut self, c: u32) -> Self {
        self.conductor = Some(c);
        self
    }

    pub fn describe(mut self, text: impl Into<String>) -> Self {
        self.description = text.into();
        self
    }
}

/// A complex-valued function on `Z/qZ`, stored densely.
#[derive(Debug, Clone)]
pub struct TraceFunction {
    modulus: Modulus,
    values: Vec<Complex64>,
    meta: FamilyMeta,
}

impl TraceFunction {
    /// Builds a trace function and enforces the length, real-valued and sup-norm contracts.
    pub fn new(modulus: Modulus, values: Vec<Complex64>, meta: FamilyMeta) -> Result<Self> {
        let n = modulus.size();
        if values.len() as u64 != n {
            return Err(Error::InvalidArgument(format!(
                "trace function over Z/{n} needs {n} values, got {}",
                values.len()
            )));
        }
        if meta.real_valued {
            if let Some((x, v)) = values
                .iter()
                .enumerate()
                .find(|(_, v)| v.im.abs() > CONTRACT_TOL)
            {
                return Err(Error::DomainViolation {
                    x: x as u64,
                    reason: format!("declared real but Im = {:e}", v.im),
                });
            }
        }
        if let Some(bound) = meta.sup_norm {
            let (arg, sup) = values
                .iter()
                .enumerate()
                .map(|(x, v)| (x, v.norm()))
                .fold((0, 0.0f64), |acc, it| if it.1 > acc.1 { it } else { acc });
            if sup > bound + CONTRACT_TOL {
                return Err(Error::BoundViolation {
                    bound: format!("sup-norm of {} at x={arg}", meta.family),
                    observed: sup,
                    allowed: bound,
                });
            }
        }
        Ok(Self {
            modulus,
            values,
            meta,
        })
    }

    /// Builds over a prime modulus.
    pub fn over_prime(
        q: &Arc<PrimeModulus>,
        values: Vec<Complex64>,
        meta: FamilyMeta,
    ) -> Result<Self> {
        Self::new(Modulus::Prime(Arc::clone(q)), values, meta)
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// The prime modulus, or an error for composite-modulus functions.
    pub fn prime(&self) -> Result<&Arc<PrimeModulus>> {
        match &self.modulus {
            Modulus::Prime(m) => Ok(m),
            Modulus::Composite(c) => Err(Error::InvalidArgument(format!(
                "operation needs a prime modulus, got composite {}",
                c.c()
            ))),
        }
    }

    /// Size of the underlying ring.
    pub fn q(&self) -> u64 {
        self.modulus.size()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn meta(&self) -> &FamilyMeta {
        &self.meta
    }

    pub fn family(&self) -> &str {
        &self.meta.family
    }

    /// Value at an arbitrary integer, read modulo the ring size.
    #[inline]
    pub fn at(&self, x: i64) -> Complex64 {
        let n = self.values.len() as i64;
        self.values[x.rem_euclid(n) as usize]
    }

    #[inline]
    pub fn get(&self, x: u64) -> Complex64 {
        self.values[(x % self.values.len() as u64) as usize]
    }

    pub fn sup_norm_observed(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn check_same_modulus(&self, other: &TraceFunction) -> Result<()> {
        if self.q() != other.q() {
            return Err(Error::ModulusMismatch {
                left: self.q(),
                right: other.q(),
            });
        }
        Ok(())
    }

    /// Same modulus and values, new metadata (validated).
    pub fn with_meta(self, meta: FamilyMeta) -> Result<Self> {
        Self::new(self.modulus, self.values, meta)
    }
}
