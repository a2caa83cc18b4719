//! Bijections of ℤ that agree with `x ↦ ±x + offset` off a finite set.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest accepted magnitude for offsets, residual keys and residual values.
///
/// Keeps `σx + offset + r(x)` and a few rounds of composition well inside `i64`.
pub const MAX_MAGNITUDE: i64 = 1 << 40;

/// Orientation of a map: the `±` in `±x + const`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(value: i64) -> Option<Sign> {
        match value {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    /// Sign of a nonzero integer.
    pub fn of(value: i64) -> Option<Sign> {
        match value.signum() {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.as_i64())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = i64::deserialize(d)?;
        Sign::from_i64(value)
            .ok_or_else(|| serde::de::Error::custom(MapError::BadOrientation(value)))
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("collision: f({0}) = f({1}) = {2}")]
    Collision(i64, i64, i64),
    #[error("gap: {0} has no preimage")]
    Gap(i64),
    #[error("residual: duplicate key {0}")]
    DuplicateKey(i64),
    #[error("{field}: magnitude of {value} exceeds {}", MAX_MAGNITUDE)]
    OutOfRange { field: &'static str, value: i64 },
    #[error("orientation: expected 1 or -1, got {0}")]
    BadOrientation(i64),
    #[error("residual[{index}]: {reason}")]
    NonCanonical { index: usize, reason: &'static str },
}

/// `f(x) = σ·x + offset + r(x)` with `r` finitely supported.
///
/// Values are always canonical: residual keys sorted and distinct, no zero
/// residuals. Two canonical values are equal iff they induce the same map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventuallyAffineMap {
    orientation: Sign,
    offset: i64,
    residual: Vec<(i64, i64)>,
}

impl EventuallyAffineMap {
    pub fn identity() -> Self {
        Self::affine(Sign::Plus, 0)
    }

    pub fn reflection() -> Self {
        Self::affine(Sign::Minus, 0)
    }

    pub fn shift(by: i64) -> Self {
        Self::affine(Sign::Plus, by)
    }

    pub fn affine(orientation: Sign, offset: i64) -> Self {
        EventuallyAffineMap {
            orientation,
            offset,
            residual: Vec::new(),
        }
    }

    /// The map exchanging `a` and `b` and fixing everything else.
    pub fn transposition(a: i64, b: i64) -> Self {
        if a == b {
            return Self::identity();
        }
        let (lo, hi) = (a.min(b), a.max(b));
        EventuallyAffineMap {
            orientation: Sign::Plus,
            offset: 0,
            residual: vec![(lo, hi - lo), (hi, lo - hi)],
        }
    }

    /// Builds and validates a map from an arbitrary residual table.
    ///
    /// The table may be unsorted and may hold zeros; both are normalized away.
    /// Duplicate keys are rejected.
    pub fn new(
        orientation: Sign,
        offset: i64,
        residual: impl IntoIterator<Item = (i64, i64)>,
    ) -> Result<Self, MapError> {
        check_range("offset", offset)?;
        let mut table = BTreeMap::new();
        for (x, r) in residual {
            check_range("residual", x)?;
            check_range("residual", r)?;
            if table.insert(x, r).is_some() {
                return Err(MapError::DuplicateKey(x));
            }
        }
        let residual = table.into_iter().filter(|&(_, r)| r != 0).collect();
        let map = EventuallyAffineMap {
            orientation,
            offset,
            residual,
        };
        map.validate_bijection()?;
        Ok(map)
    }

    /// Like [`EventuallyAffineMap::new`] but insists the table is already canonical.
    pub fn from_canonical_parts(
        orientation: Sign,
        offset: i64,
        residual: Vec<(i64, i64)>,
    ) -> Result<Self, MapError> {
        for (index, pair) in residual.iter().enumerate() {
            if pair.1 == 0 {
                return Err(MapError::NonCanonical {
                    index,
                    reason: "zero residual",
                });
            }
            if index > 0 && residual[index - 1].0 >= pair.0 {
                return Err(MapError::NonCanonical {
                    index,
                    reason: "keys must be strictly increasing",
                });
            }
        }
        Self::new(orientation, offset, residual)
    }

    /// Trusted constructor for results of group operations on valid maps.
    fn from_table(orientation: Sign, offset: i64, table: BTreeMap<i64, i64>) -> Self {
        let map = EventuallyAffineMap {
            orientation,
            offset,
            residual: table.into_iter().filter(|&(_, r)| r != 0).collect(),
        };
        debug_assert_eq!(map.validate_bijection(), Ok(()));
        map
    }

    pub fn orientation(&self) -> Sign {
        self.orientation
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Canonical residual table, sorted by `x`.
    pub fn residual(&self) -> &[(i64, i64)] {
        &self.residual
    }

    pub fn residual_at(&self, x: i64) -> i64 {
        match self.residual.binary_search_by_key(&x, |&(k, _)| k) {
            Ok(i) => self.residual[i].1,
            Err(_) => 0,
        }
    }

    pub fn is_affine(&self) -> bool {
        self.residual.is_empty()
    }

    /// Smallest and largest residual key, if any.
    pub fn support_hull(&self) -> Option<(i64, i64)> {
        Some((self.residual.first()?.0, self.residual.last()?.0))
    }

    /// `max |r(x)|`, zero for affine maps.
    pub fn max_residual(&self) -> i64 {
        self.residual
            .iter()
            .map(|&(_, r)| r.abs())
            .max()
            .unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.residual.iter().map(|&(x, _)| x)
    }

    /// The affine tail `σx + offset`.
    pub fn tail(&self, x: i64) -> i64 {
        self.orientation.as_i64() * x + self.offset
    }

    /// Preimage of `y` under the affine tail.
    pub fn tail_preimage(&self, y: i64) -> i64 {
        self.orientation.as_i64() * (y - self.offset)
    }

    pub fn evaluate(&self, x: i64) -> i64 {
        self.tail(x) + self.residual_at(x)
    }

    /// Off the support `f` is the tail, a bijection. So `f` is a bijection iff
    /// it maps the support injectively into the tail's image of the support:
    /// an image `f(s)` whose tail preimage lies off the support collides with
    /// that preimage, and an injective map between equal finite sets is onto.
    fn validate_bijection(&self) -> Result<(), MapError> {
        let mut seen: HashMap<i64, i64> = HashMap::with_capacity(self.residual.len());
        for &(s, r) in &self.residual {
            let y = self.tail(s) + r;
            if let Some(&earlier) = seen.get(&y) {
                return Err(MapError::Collision(earlier, s, y));
            }
            seen.insert(y, s);
            let z = self.tail_preimage(y);
            if self.residual_at(z) == 0 {
                // z is off the support (z != s because r != 0), so f(z) = y too.
                return Err(MapError::Collision(s.min(z), s.max(z), y));
            }
        }
        for s in self.support() {
            let y = self.tail(s);
            if !seen.contains_key(&y) {
                return Err(MapError::Gap(y));
            }
        }
        Ok(())
    }

    /// Inverse map. Its support is `f(support)`.
    pub fn invert(&self) -> Self {
        let sigma = self.orientation;
        let offset = -sigma.as_i64() * self.offset;
        let table = self
            .residual
            .iter()
            .map(|&(s, r)| {
                let y = self.tail(s) + r;
                // g(y) = s while g's tail sends y to σ(y - offset).
                (y, s - self.tail_preimage(y))
            })
            .collect();
        Self::from_table(sigma, offset, table)
    }

    /// `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        let orientation = self.orientation * other.orientation;
        let offset = self.orientation.as_i64() * other.offset + self.offset;
        let other_inverse = other.invert();
        let candidates = other
            .support()
            .chain(self.support().map(|y| other_inverse.evaluate(y)));
        let mut table = BTreeMap::new();
        for x in candidates {
            let r = self.evaluate(other.evaluate(x)) - (orientation.as_i64() * x + offset);
            table.insert(x, r);
        }
        Self::from_table(orientation, offset, table)
    }

    /// Images of `lo..=hi`, as a window sample.
    pub fn window(&self, lo: i64, hi: i64) -> crate::window::WindowSample {
        crate::window::WindowSample::new(lo, (lo..=hi).map(|x| self.evaluate(x)).collect())
            .expect("a bijection has distinct images")
    }
}

fn check_range(field: &'static str, value: i64) -> Result<(), MapError> {
    if value.abs() > MAX_MAGNITUDE {
        Err(MapError::OutOfRange { field, value })
    } else {
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapJson {
    orientation: i64,
    offset: i64,
    residual: Vec<(i64, i64)>,
}

impl Serialize for EventuallyAffineMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MapJson {
            orientation: self.orientation.as_i64(),
            offset: self.offset,
            residual: self.residual.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EventuallyAffineMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = MapJson::deserialize(d)?;
        let orientation = Sign::from_i64(raw.orientation)
            .ok_or(MapError::BadOrientation(raw.orientation))
            .map_err(serde::de::Error::custom)?;
        EventuallyAffineMap::from_canonical_parts(orientation, raw.offset, raw.residual)
            .map_err(serde::de::Error::custom)
    }
}
