//! Text renderings of a [`BettiTable`].
//!
//! TSV: one `i<TAB>j<TAB>count` row per nonzero entry, sorted by `(i, j)`.
//! JSON: an object mapping `"i,j"` to the count as a decimal string, keys in
//! the same order. Counts are strings because they outgrow native numbers.

use std::str::FromStr;

use num_bigint::BigUint;
use serde_json::{Map, Value};
use thiserror::Error;

use super::BettiTable;

#[derive(Debug, Error)]
pub enum TableParseError {
    #[error("line {line}: {message}")]
    Tsv { line: usize, message: String },
    #[error("invalid JSON table: {0}")]
    Json(String),
}

impl BettiTable {
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (i, j, c) in self.iter() {
            out.push_str(&format!("{i}\t{j}\t{c}\n"));
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<BettiTable, TableParseError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let err = |message: String| TableParseError::Tsv { line, message };
            let fields: Vec<&str> = raw.split('\t').collect();
            let [i, j, c] = fields.as_slice() else {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            };
            let i = i.parse::<usize>().map_err(|e| err(e.to_string()))?;
            let j = j.parse::<usize>().map_err(|e| err(e.to_string()))?;
            let c = BigUint::from_str(c).map_err(|e| err(e.to_string()))?;
            entries.push(((i, j), c));
        }
        BettiTable::from_entries(entries).map_err(|e| TableParseError::Tsv {
            line: 0,
            message: e.to_string(),
        })
    }

    pub fn to_json_value(&self) -> Value {
        let map: Map<String, Value> = self
            .iter()
            .map(|(i, j, c)| (format!("{i},{j}"), Value::String(c.to_string())))
            .collect();
        Value::Object(map)
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json(text: &str) -> Result<BettiTable, TableParseError> {
        let bad = |m: String| TableParseError::Json(m);
        let value: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let Value::Object(map) = value else {
            return Err(bad("expected an object".into()));
        };
        let mut entries = Vec::with_capacity(map.len());
        for (key, count) in map {
            let (i, j) = key
                .split_once(',')
                .ok_or_else(|| bad(format!("key {key:?} is not \"i,j\"")))?;
            let i = i.trim().parse::<usize>().map_err(|e| bad(e.to_string()))?;
            let j = j.trim().parse::<usize>().map_err(|e| bad(e.to_string()))?;
            let Value::String(count) = count else {
                return Err(bad(format!("count for {key:?} must be a string")));
            };
            let c = BigUint::from_str(&count).map_err(|e| bad(e.to_string()))?;
            entries.push(((i, j), c));
        }
        BettiTable::from_entries(entries).map_err(|e| bad(e.to_string()))
    }
}
