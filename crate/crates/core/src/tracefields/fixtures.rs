//! Bundled field corpus: polynomials with integral bases, ramification
//! data, field discriminants and real-root counts.
//!
//! Format: `{"fields": [{"name", "poly", "basis"?, "ramification", "disc",
//! "real_roots"}]}` with `poly` in ascending order and basis entries as
//! `"num/den"` strings. Set `SPINGEN_FIXTURES` to load another file.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::Value;

use super::{parse_field_json, NumberFieldInput, RamificationData};
use crate::error::{Error, Result};
use crate::serial::int_from_json;

pub const FIXTURES_ENV: &str = "SPINGEN_FIXTURES";

const BUNDLED: &str = include_str!("../../fixtures/fields.json");

#[derive(Clone, Debug)]
pub struct FieldFixture {
    pub name: String,
    pub input: NumberFieldInput,
    pub ramification: BTreeMap<u64, RamificationData>,
    pub disc: BigInt,
    pub real_roots: usize,
}

pub fn parse_fixtures(text: &str) -> Result<Vec<FieldFixture>> {
    let v: Value = serde_json::from_str(text)?;
    let fields = v
        .get("fields")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("fixture file needs a \"fields\" array".into()))?;
    fields
        .iter()
        .map(|f| {
            let (input, ramification) = parse_field_json(f)?;
            let name = f.get("name").and_then(Value::as_str).unwrap_or_default().to_string();
            let disc = int_from_json(f.get("disc").ok_or_else(|| Error::Parse(format!("{name}: missing disc")))?)?;
            let real_roots = f
                .get("real_roots")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("{name}: missing real_roots")))? as usize;
            Ok(FieldFixture { name, input, ramification, disc, real_roots })
        })
        .collect()
}

/// The bundled corpus, or the file named by `SPINGEN_FIXTURES`.
pub fn load_fixtures() -> Result<Vec<FieldFixture>> {
    match std::env::var_os(FIXTURES_ENV) {
        Some(path) => parse_fixtures(&std::fs::read_to_string(path)?),
        None => parse_fixtures(BUNDLED),
    }
}
