//! Bi-Lipschitz bijections of ℤ² with the L1 (grid graph) metric.
//!
//! Shears `(x, y) ↦ (x, y + g(x))`, unimodular linear maps, translations and
//! their compositions. Unlike on ℤ, these need not stay near an isometry, and
//! the boxes `[-n, n]²` are not Følner for them.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

pub type Point = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("m: determinant must be 1 or -1, got {0}")]
    NotUnimodular(i64),
    #[error("g.table[{index}]: {reason}")]
    BadTable { index: usize, reason: &'static str },
    #[error("maps: composition must not be empty")]
    EmptyComposition,
}

/// `g(x) = slope·x + offset + table(x)`, table finitely supported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShearFn {
    slope: i64,
    offset: i64,
    table: Vec<(i64, i64)>,
}

impl ShearFn {
    /// Table must be sorted by `x` with distinct keys and no zero entries.
    pub fn new(slope: i64, offset: i64, table: Vec<(i64, i64)>) -> Result<Self, GridError> {
        for (index, &(x, dy)) in table.iter().enumerate() {
            if dy == 0 {
                return Err(GridError::BadTable {
                    index,
                    reason: "zero entry",
                });
            }
            if index > 0 && table[index - 1].0 >= x {
                return Err(GridError::BadTable {
                    index,
                    reason: "keys must be strictly increasing",
                });
            }
        }
        Ok(ShearFn {
            slope,
            offset,
            table,
        })
    }

    pub fn linear(slope: i64, offset: i64) -> Self {
        ShearFn {
            slope,
            offset,
            table: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::linear(0, 0)
    }

    pub fn slope(&self) -> i64 {
        self.slope
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn table(&self) -> &[(i64, i64)] {
        &self.table
    }

    pub fn eval(&self, x: i64) -> i64 {
        let extra = match self.table.binary_search_by_key(&x, |&(k, _)| k) {
            Ok(i) => self.table[i].1,
            Err(_) => 0,
        };
        self.slope * x + self.offset + extra
    }

    pub fn negate(&self) -> Self {
        ShearFn {
            slope: -self.slope,
            offset: -self.offset,
            table: self.table.iter().map(|&(x, dy)| (x, -dy)).collect(),
        }
    }

    /// Pointwise sum; shears compose additively.
    pub fn add(&self, other: &Self) -> Self {
        let mut merged = std::collections::BTreeMap::new();
        for &(x, dy) in self.table.iter().chain(&other.table) {
            *merged.entry(x).or_insert(0) += dy;
        }
        ShearFn {
            slope: self.slope + other.slope,
            offset: self.offset + other.offset,
            table: merged.into_iter().filter(|&(_, dy)| dy != 0).collect(),
        }
    }
}

/// `[[a, b], [c, d]]` acting as `(x, y) ↦ (ax + by, cx + dy)`, determinant ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unimodular([i64; 4]);

impl Unimodular {
    pub fn new(m: [i64; 4]) -> Result<Self, GridError> {
        let det = m[0] * m[3] - m[1] * m[2];
        if det.abs() != 1 {
            return Err(GridError::NotUnimodular(det));
        }
        Ok(Unimodular(m))
    }

    pub fn entries(&self) -> [i64; 4] {
        self.0
    }

    pub fn det(&self) -> i64 {
        let [a, b, c, d] = self.0;
        a * d - b * c
    }

    pub fn apply(&self, (x, y): Point) -> Point {
        let [a, b, c, d] = self.0;
        (a * x + b * y, c * x + d * y)
    }

    /// Adjugate times the determinant (which is its own inverse).
    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.0;
        let det = self.det();
        Unimodular([det * d, -det * b, -det * c, det * a])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridMap {
    Shear(ShearFn),
    Linear(Unimodular),
    Translation(Point),
    /// `maps[0] ∘ maps[1] ∘ …`, applied right to left.
    Composition(Vec<GridMap>),
}

impl GridMap {
    pub fn identity() -> Self {
        GridMap::Translation((0, 0))
    }

    pub fn apply(&self, p: Point) -> Point {
        match self {
            GridMap::Shear(g) => (p.0, p.1 + g.eval(p.0)),
            GridMap::Linear(m) => m.apply(p),
            GridMap::Translation(t) => (p.0 + t.0, p.1 + t.1),
            GridMap::Composition(maps) => maps.iter().rev().fold(p, |q, m| m.apply(q)),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            GridMap::Shear(g) => GridMap::Shear(g.negate()),
            GridMap::Linear(m) => GridMap::Linear(m.inverse()),
            GridMap::Translation(t) => GridMap::Translation((-t.0, -t.1)),
            GridMap::Composition(maps) => {
                GridMap::Composition(maps.iter().rev().map(GridMap::inverse).collect())
            }
        }
    }

    /// `self ∘ inner`.
    pub fn then_after(self, inner: GridMap) -> Self {
        GridMap::Composition(vec![self, inner])
    }
}

pub fn l1((ax, ay): Point, (bx, by): Point) -> i64 {
    (ax - bx).abs() + (ay - by).abs()
}

/// One number about a map on the window `[-n, n]²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridWindowReport {
    pub n: u64,
    pub metric: GridMetric,
    #[serde(with = "rational::fraction")]
    pub value: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridMetric {
    L1,
}

impl GridWindowReport {
    fn new(n: u64, value: Rational) -> Self {
        GridWindowReport {
            n,
            metric: GridMetric::L1,
            value,
        }
    }
}

/// Window-empirical constants of a map and of its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridLipschitz {
    pub forward: GridWindowReport,
    pub backward: GridWindowReport,
}

fn window_rows(n: u64) -> std::ops::RangeInclusive<i64> {
    let n = i64::try_from(n).expect("n fits in i64");
    -n..=n
}

/// Largest image distance over L1-adjacent pairs in the window, by rows.
fn max_adjacent_stretch(f: &GridMap, n: u64) -> i64 {
    let rows = window_rows(n);
    let hi = *rows.end();
    rows.clone()
        .into_par_iter()
        .map(|y| {
            let mut best = 0;
            for x in rows.clone() {
                let p = f.apply((x, y));
                if x < hi {
                    best = best.max(l1(p, f.apply((x + 1, y))));
                }
                if y < hi {
                    best = best.max(l1(p, f.apply((x, y + 1))));
                }
            }
            best
        })
        .max()
        .unwrap_or(0)
}

/// Adjacent pairs suffice: every L1 geodesic in ℤ² is a chain of unit steps.
/// For `n = 0` there are no pairs and both constants read as 0.
pub fn grid_lipschitz_window(f: &GridMap, n: u64) -> GridLipschitz {
    GridLipschitz {
        forward: GridWindowReport::new(n, rational::int(max_adjacent_stretch(f, n))),
        backward: GridWindowReport::new(n, rational::int(max_adjacent_stretch(&f.inverse(), n))),
    }
}

/// The eight signed permutation matrices: the point group of the square lattice.
pub fn point_group() -> [Unimodular; 8] {
    [
        Unimodular([1, 0, 0, 1]),
        Unimodular([-1, 0, 0, 1]),
        Unimodular([1, 0, 0, -1]),
        Unimodular([-1, 0, 0, -1]),
        Unimodular([0, 1, 1, 0]),
        Unimodular([0, -1, 1, 0]),
        Unimodular([0, 1, -1, 0]),
        Unimodular([0, -1, -1, 0]),
    ]
}

/// Smallest `max_p |d_p - t|_1` over integer `t`.
///
/// In the rotated coordinates `s = u + v`, `w = u - v` the L1 distance is
/// `max(|Δs|, |Δw|)`, so the cost of `t` is the larger of two one-dimensional
/// convex costs, subject to `s_t ≡ w_t (mod 2)`. Moving either coordinate two
/// steps toward its midpoint never increases its cost, so an optimum lies
/// within one step of `⌊mid⌋..=⌈mid⌉` in each coordinate.
fn l1_center_radius(displacements: &[Point]) -> i64 {
    let (mut s_lo, mut s_hi, mut w_lo, mut w_hi) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for &(u, v) in displacements {
        let (s, w) = (u + v, u - v);
        s_lo = s_lo.min(s);
        s_hi = s_hi.max(s);
        w_lo = w_lo.min(w);
        w_hi = w_hi.max(w);
    }
    let near_mid = |lo: i64, hi: i64| (lo + hi).div_euclid(2) - 1..=(lo + hi).div_euclid(2) + 2;
    let cost = |t: i64, lo: i64, hi: i64| (t - lo).abs().max((hi - t).abs());
    let mut best = i64::MAX;
    for s in near_mid(s_lo, s_hi) {
        for w in near_mid(w_lo, w_hi) {
            if (s - w).rem_euclid(2) == 0 {
                best = best.min(cost(s, s_lo, s_hi).max(cost(w, w_lo, w_hi)));
            }
        }
    }
    best
}

/// Distance from `f` to the nearest lattice isometry on `[-n, n]²`:
/// `min` over the 8 point-group elements `P` and translations `t` of
/// `max_p |f(p) - (Pp + t)|_1`.
///
/// The translation minimum is exact over all of ℤ² (an L1 one-center
/// problem), so no search radius is involved.
pub fn isometry_gap(f: &GridMap, n: u64) -> GridWindowReport {
    let rows = window_rows(n);
    let points: Vec<Point> = rows
        .clone()
        .flat_map(|y| rows.clone().map(move |x| (x, y)))
        .collect();
    let images: Vec<Point> = points.par_iter().map(|&p| f.apply(p)).collect();
    let best = point_group()
        .par_iter()
        .map(|m| {
            let displacements: Vec<Point> = points
                .iter()
                .zip(&images)
                .map(|(&p, &q)| {
                    let mp = m.apply(p);
                    (q.0 - mp.0, q.1 - mp.1)
                })
                .collect();
            l1_center_radius(&displacements)
        })
        .min()
        .expect("point group is nonempty");
    GridWindowReport::new(n, rational::int(best))
}

/// `|F(A_n) ∩ A_n| / (2n + 1)²` for the box `A_n = [-n, n]²`.
pub fn grid_folner_ratio(f: &GridMap, n: u64) -> GridWindowReport {
    let rows = window_rows(n);
    let inside = |v: i64| rows.contains(&v);
    let hits: i64 = rows
        .clone()
        .into_par_iter()
        .map(|y| {
            rows.clone()
                .filter(|&x| {
                    let (u, v) = f.apply((x, y));
                    inside(u) && inside(v)
                })
                .count() as i64
        })
        .sum();
    let side = 2 * *rows.end() + 1;
    GridWindowReport::new(n, Rational::new(hits, side * side))
}

/// CSV with columns `n,value_num,value_den`.
pub fn grid_csv<'a>(reports: impl IntoIterator<Item = &'a GridWindowReport>) -> String {
    let mut out = String::from("n,value_num,value_den\n");
    for r in reports {
        writeln!(out, "{},{},{}", r.n, r.value.numer(), r.value.denom()).unwrap();
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShearJson {
    slope: i64,
    offset: i64,
    #[serde(default)]
    table: Vec<(i64, i64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum GridJson {
    Shear { g: ShearJson },
    Linear { m: [i64; 4] },
    Translation { t: Point },
    Composition { maps: Vec<GridMap> },
}

impl Serialize for GridMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = match self {
            GridMap::Shear(g) => GridJson::Shear {
                g: ShearJson {
                    slope: g.slope,
                    offset: g.offset,
                    table: g.table.clone(),
                },
            },
            GridMap::Linear(m) => GridJson::Linear { m: m.0 },
            GridMap::Translation(t) => GridJson::Translation { t: *t },
            GridMap::Composition(maps) => GridJson::Composition { maps: maps.clone() },
        };
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        Ok(match GridJson::deserialize(d)? {
            GridJson::Shear { g } => {
                GridMap::Shear(ShearFn::new(g.slope, g.offset, g.table).map_err(D::Error::custom)?)
            }
            GridJson::Linear { m } => {
                GridMap::Linear(Unimodular::new(m).map_err(D::Error::custom)?)
            }
            GridJson::Translation { t } => GridMap::Translation(t),
            GridJson::Composition { maps } => {
                if maps.is_empty() {
                    return Err(D::Error::custom(GridError::EmptyComposition));
                }
                GridMap::Composition(maps)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagonal_shear() -> GridMap {
        GridMap::Shear(ShearFn::linear(1, 0))
    }

    #[test]
    fn apply_examples() {
        assert_eq!(GridMap::Shear(ShearFn::zero()).apply((3, 4)), (3, 4));
        assert_eq!(diagonal_shear().apply((2, 5)), (2, 7));
        let m = GridMap::Linear(Unimodular::new([1, 1, 0, 1]).unwrap());
        assert_eq!(m.apply((2, 5)), (7, 5));
    }

    #[test]
    fn composition_applies_right_to_left() {
        let f = GridMap::Translation((1, 0))
            .then_after(GridMap::Linear(Unimodular::new([0, -1, 1, 0]).unwrap()));
        // rotate (1, 0) to (0, 1), then shift
        assert_eq!(f.apply((1, 0)), (1, 1));
    }

    #[test]
    fn rejects_non_unimodular() {
        assert_eq!(
            Unimodular::new([2, 0, 0, 1]),
            Err(GridError::NotUnimodular(2))
        );
    }

    #[test]
    fn lipschitz_examples() {
        for n in [1, 4] {
            let r = grid_lipschitz_window(&GridMap::identity(), n);
            assert_eq!(
                (r.forward.value, r.backward.value),
                (rational::int(1), rational::int(1))
            );
        }
        let r = grid_lipschitz_window(&diagonal_shear(), 5);
        assert_eq!(
            (r.forward.value, r.backward.value),
            (rational::int(2), rational::int(2))
        );
        let m = GridMap::Linear(Unimodular::new([1, 1, 0, 1]).unwrap());
        assert_eq!(grid_lipschitz_window(&m, 5).forward.value, rational::int(2));
    }

    /// Literal definition: all 8 point maps and every translation with `|t|∞ <= radius`.
    fn brute_isometry_gap(f: &GridMap, n: i64, radius: i64) -> i64 {
        let mut best = i64::MAX;
        for m in point_group() {
            for tx in -radius..=radius {
                for ty in -radius..=radius {
                    let mut worst = 0;
                    for x in -n..=n {
                        for y in -n..=n {
                            let mp = m.apply((x, y));
                            worst = worst.max(l1(f.apply((x, y)), (mp.0 + tx, mp.1 + ty)));
                        }
                    }
                    best = best.min(worst);
                }
            }
        }
        best
    }

    #[test]
    fn isometry_gap_matches_bounded_search() {
        let maps = [
            GridMap::identity(),
            GridMap::Translation((3, -2)),
            diagonal_shear(),
            GridMap::Linear(Unimodular::new([1, 1, 0, 1]).unwrap()),
            GridMap::Linear(Unimodular::new([2, 1, 1, 1]).unwrap()),
            GridMap::Shear(ShearFn::new(0, 1, vec![(0, 2), (1, -1)]).unwrap()),
            GridMap::Translation((1, 1))
                .then_after(GridMap::Linear(Unimodular::new([0, 1, -1, 0]).unwrap())),
        ];
        for f in &maps {
            for n in 1..=3 {
                assert_eq!(
                    isometry_gap(f, n as u64).value,
                    rational::int(brute_isometry_gap(f, n, 4 * n)),
                    "{f:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn isometry_gap_examples() {
        assert_eq!(
            isometry_gap(&GridMap::identity(), 10).value,
            rational::int(0)
        );
        assert_eq!(
            isometry_gap(&GridMap::Translation((7, -2)), 10).value,
            rational::int(0)
        );
        assert_eq!(
            isometry_gap(&GridMap::Linear(Unimodular::new([0, -1, 1, 0]).unwrap()), 6).value,
            rational::int(0)
        );
        assert!(isometry_gap(&diagonal_shear(), 16).value >= rational::int(8));
    }

    #[test]
    fn folner_examples() {
        assert_eq!(
            grid_folner_ratio(&GridMap::identity(), 10).value,
            rational::int(1)
        );
        assert_eq!(
            grid_folner_ratio(&GridMap::Translation((1, 0)), 10).value,
            Rational::new(420, 441)
        );
    }

    #[test]
    fn diagonal_shear_folner_closed_form() {
        // column x keeps 2n + 1 - |x| points, so the count is (2n+1)^2 - n(n+1)
        for n in [1i64, 2, 7, 30] {
            let side = 2 * n + 1;
            assert_eq!(
                grid_folner_ratio(&diagonal_shear(), n as u64).value,
                Rational::new(side * side - n * (n + 1), side * side)
            );
        }
    }

    #[test]
    fn inverses_round_trip() {
        let maps = [
            diagonal_shear(),
            GridMap::Linear(Unimodular::new([2, 1, 1, 1]).unwrap()),
            GridMap::Linear(Unimodular::new([0, 1, 1, 0]).unwrap()),
            GridMap::Composition(vec![
                GridMap::Translation((2, -5)),
                GridMap::Shear(ShearFn::new(-1, 3, vec![(2, 4)]).unwrap()),
                GridMap::Linear(Unimodular::new([1, 2, 0, -1]).unwrap()),
            ]),
        ];
        for f in &maps {
            let g = f.inverse();
            for x in -6..=6 {
                for y in -6..=6 {
                    assert_eq!(g.apply(f.apply((x, y))), (x, y));
                }
            }
        }
    }

    #[test]
    fn json_forms() {
        let f = GridMap::Composition(vec![
            GridMap::Shear(ShearFn::new(1, 0, vec![(0, 2)]).unwrap()),
            GridMap::Linear(Unimodular::new([1, 1, 0, 1]).unwrap()),
            GridMap::Translation((7, -2)),
        ]);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(
            text,
            r#"{"kind":"composition","maps":[{"kind":"shear","g":{"slope":1,"offset":0,"table":[[0,2]]}},{"kind":"linear","m":[1,1,0,1]},{"kind":"translation","t":[7,-2]}]}"#
        );
        assert_eq!(serde_json::from_str::<GridMap>(&text).unwrap(), f);
        let err = serde_json::from_str::<GridMap>(r#"{"kind":"linear","m":[2,0,0,1]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("m: determinant"), "{err}");
        let err = serde_json::from_str::<GridMap>(
            r#"{"kind":"shear","g":{"slope":1,"offset":0,"table":[[0,0]]}}"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("g.table[0]"), "{err}");
    }

    #[test]
    fn csv_layout() {
        let r = grid_folner_ratio(&GridMap::Translation((1, 0)), 10);
        assert_eq!(grid_csv([&r]), "n,value_num,value_den\n10,20,21\n");
    }
}
