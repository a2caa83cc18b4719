//! Finite observations: a window of an unknown bijection of ℤ, and
//! bijections of `[0, n)`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("values: window needs at least 2 points, got {0}")]
    DegenerateWindow(usize),
    #[error("values[{index}]: {value} repeats an earlier value")]
    RepeatedValue { index: usize, value: i64 },
    #[error("values: not a permutation of 0..{n} ({detail})")]
    NotPermutation { n: usize, detail: String },
    #[error("n: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
}

/// Images `f(start), f(start + 1), …` of an injective map on a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowSample {
    start: i64,
    values: Vec<i64>,
}

impl WindowSample {
    /// Values must be pairwise distinct. Length is checked by the analyzers,
    /// which need at least two points.
    pub fn new(start: i64, values: Vec<i64>) -> Result<Self, WindowError> {
        let mut seen = HashSet::with_capacity(values.len());
        for (index, &value) in values.iter().enumerate() {
            if !seen.insert(value) {
                return Err(WindowError::RepeatedValue { index, value });
            }
        }
        Ok(WindowSample { start, values })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(x, f(x))` pairs in domain order.
    pub fn points(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.start..).zip(self.values.iter().copied())
    }

    pub(crate) fn require_nondegenerate(&self) -> Result<(), WindowError> {
        if self.values.len() < 2 {
            Err(WindowError::DegenerateWindow(self.values.len()))
        } else {
            Ok(())
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WindowJson {
    start: i64,
    values: Vec<i64>,
}

impl<'de> Deserialize<'de> for WindowSample {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = WindowJson::deserialize(d)?;
        WindowSample::new(raw.start, raw.values).map_err(serde::de::Error::custom)
    }
}

/// A bijection of `{0, …, n-1}` stored as its value sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteBijection {
    values: Vec<u32>,
}

impl FiniteBijection {
    pub fn new(values: Vec<u32>) -> Result<Self, WindowError> {
        let n = values.len();
        let mut seen = vec![false; n];
        for (index, &v) in values.iter().enumerate() {
            let slot = seen
                .get_mut(v as usize)
                .ok_or_else(|| WindowError::NotPermutation {
                    n,
                    detail: format!("values[{index}] = {v} is out of range"),
                })?;
            if *slot {
                return Err(WindowError::NotPermutation {
                    n,
                    detail: format!("values[{index}] = {v} repeats"),
                });
            }
            *slot = true;
        }
        if n == 0 {
            return Err(WindowError::NotPermutation {
                n,
                detail: "empty".to_string(),
            });
        }
        Ok(FiniteBijection { values })
    }

    /// Caller guarantees `values` is a permutation of `0..len`.
    pub(crate) fn from_permutation_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(FiniteBijection::new(values.clone()).is_ok());
        FiniteBijection { values }
    }

    pub fn identity(n: usize) -> Self {
        FiniteBijection {
            values: (0..n as u32).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x] as usize
    }

    pub fn inverse(&self) -> Self {
        let mut inverse = vec![0u32; self.values.len()];
        for (x, &y) in self.values.iter().enumerate() {
            inverse[y as usize] = x as u32;
        }
        FiniteBijection { values: inverse }
    }

    /// Conjugation by the reflection `x ↦ n-1-x`.
    pub fn reflect_conjugate(&self) -> Self {
        let top = self.values.len() as u32 - 1;
        FiniteBijection {
            values: self.values.iter().rev().map(|&v| top - v).collect(),
        }
    }

    /// The same values, seen as a window starting at 0.
    pub fn as_window(&self) -> WindowSample {
        WindowSample {
            start: 0,
            values: self.values.iter().map(|&v| i64::from(v)).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiniteJson {
    n: usize,
    values: Vec<u32>,
}

impl Serialize for FiniteBijection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FiniteJson {
            n: self.values.len(),
            values: self.values.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteBijection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = FiniteJson::deserialize(d)?;
        if raw.n != raw.values.len() {
            return Err(serde::de::Error::custom(WindowError::SizeMismatch {
                expected: raw.values.len(),
                got: raw.n,
            }));
        }
        FiniteBijection::new(raw.values).map_err(serde::de::Error::custom)
    }
}
