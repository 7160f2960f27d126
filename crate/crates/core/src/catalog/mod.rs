//! Function records, the two text grammars, built-in reference functions,
//! the JSON-lines result store and graph export.

pub mod export;
pub mod fixtures;
pub mod format;
pub mod store;

use crate::error::Result;
use crate::field::FieldSpec;
use crate::vbf::Vbf;

/// A univariate coefficient: a power of a fixed field element, or a raw
/// element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    Power { base: u32, exp: u64 },
    Element(u32),
}

impl Coefficient {
    pub fn value(&self, field: &FieldSpec) -> u32 {
        match *self {
            Coefficient::Power { base, exp } => field.pow(base, exp),
            Coefficient::Element(e) => e,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub coefficient: Coefficient,
    pub exponent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Lut(Vec<u32>),
    Univariate { modulus: u32, terms: Vec<Term> },
}

/// A parsed function with its identifier. An empty `id` means none was
/// given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionRecord {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub source: Source,
}

impl FunctionRecord {
    pub fn from_vbf(id: impl Into<String>, f: &Vbf) -> Self {
        FunctionRecord { id: id.into(), n: f.n(), m: f.m(), source: Source::Lut(f.table().to_vec()) }
    }

    pub fn to_vbf(&self) -> Result<Vbf> {
        match &self.source {
            Source::Lut(table) => Vbf::new(self.n, self.m, table.clone()),
            Source::Univariate { modulus, terms } => {
                let field = FieldSpec::new(self.n, *modulus)?;
                let pairs: Vec<(u32, u64)> =
                    terms.iter().map(|t| (t.coefficient.value(&field), t.exponent)).collect();
                Vbf::from_univariate(&field, &pairs)
            }
        }
    }
}
