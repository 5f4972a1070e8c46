//! Finite alphabets with named symbols.
//!
//! Symbols are identified by their index `0..len`; labels exist for file
//! formats and diagnostics only.

use crate::error::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashSet;
use std::sync::Arc;

/// Separator used for labels of product alphabets.
pub const PRODUCT_SEPARATOR: &str = "|";

#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    labels: Arc<[String]>,
}

impl std::fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.len() <= 8 {
            f.debug_list().entries(self.labels.iter()).finish()
        } else {
            write!(f, "Alphabet({} symbols)", self.len())
        }
    }
}

impl Alphabet {
    /// Builds an alphabet from distinct, non-empty list of labels.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must not be empty".into()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidAlphabet(format!(
                    "duplicate label {l:?} at index {i}"
                )));
            }
        }
        Ok(Self {
            labels: labels.into(),
        })
    }

    /// The alphabet `{"0", "1", ..., "size-1"}`.
    pub fn range(size: usize) -> Result<Self> {
        Self::new((0..size).map(|i| i.to_string()))
    }

    /// The alphabet `{"1", ..., "size"}`, used for message sets.
    pub fn messages(size: usize) -> Result<Self> {
        Self::new((1..=size).map(|i| i.to_string()))
    }

    /// The binary alphabet `{"0", "1"}`.
    pub fn binary() -> Self {
        Self::range(2).expect("binary alphabet is valid")
    }

    /// Cartesian product in row-major order: index `i * right.len() + j`
    /// is the pair `(i, j)`.
    pub fn product(&self, right: &Alphabet) -> Result<Self> {
        let mut labels = Vec::with_capacity(self.len() * right.len());
        for a in self.labels.iter() {
            for b in right.labels.iter() {
                labels.push(format!("{a}{PRODUCT_SEPARATOR}{b}"));
            }
        }
        Self::new(labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; alphabets are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.labels.serialize(serializer)
    }
}

/// Labels may be written as strings or integers in input files.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawLabel {
    Str(String),
    Int(i64),
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<RawLabel>::deserialize(deserializer)?;
        let labels = raw.into_iter().map(|l| match l {
            RawLabel::Str(s) => s,
            RawLabel::Int(i) => i.to_string(),
        });
        Alphabet::new(labels).map_err(serde::de::Error::custom)
    }
}
