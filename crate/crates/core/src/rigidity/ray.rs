use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::lipschitz::lipschitz_profile;
use crate::map::{EventuallyAffineMap, Sign};
use crate::rational::{self, Rational};

/// Which tail of ℤ the ray image `f((-∞, x])` contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayCase {
    /// Contains a ray going to `-∞`, misses one going to `+∞`.
    BelowRay,
    /// Contains a ray going to `+∞`, misses one going to `-∞`.
    AboveRay,
}

impl RayCase {
    pub fn for_orientation(sigma: Sign) -> RayCase {
        match sigma {
            Sign::Plus => RayCase::BelowRay,
            Sign::Minus => RayCase::AboveRay,
        }
    }
}

/// Shape of the indicator of `f((-∞, x])`.
///
/// For `BelowRay` the indicator is 1 below `region_lo` and 0 above
/// `region_hi`; mirrored for `AboveRay`. An empty region has
/// `region_lo = region_hi + 1` and width 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayProfile {
    pub x: i64,
    pub image: i64,
    #[serde(rename = "C", with = "rational::fraction")]
    pub bound: Rational,
    pub case: RayCase,
    pub region_lo: i64,
    pub region_hi: i64,
    pub width: i64,
    /// Region lies inside `[f(x) - C/2, f(x) + C/2]`.
    pub centered: bool,
}

impl RayProfile {
    /// `width <= ⌈C/2⌉`, under the lattice-cell width convention.
    pub fn within_half_bound(&self) -> bool {
        self.width <= rational::ceil(&(self.bound / 2))
    }
}

/// `y ∈ f((-∞, x])`, straight from the definition.
pub fn ray_image_contains(f: &EventuallyAffineMap, x: i64, y: i64) -> bool {
    f.invert().evaluate(y) <= x
}

/// Exact ray-image profile.
///
/// The image differs from the tail's image `T = A((-∞, x])` only at finitely
/// many points, all tied to the residual support: `f(s)` for support points
/// `s <= x` whose tail preimage exceeds `x` (present but not in `T`) and
/// `A(s)` for support points `s <= x` whose true preimage exceeds `x` (in `T`
/// but absent). Everything else is read off the closed-form ray `T`.
pub fn ray_profile(f: &EventuallyAffineMap, x: i64) -> RayProfile {
    let inverse = f.invert();
    let mut extra = HashSet::new();
    let mut missing = HashSet::new();
    for s in f.support().filter(|&s| s <= x) {
        let y = f.evaluate(s);
        if f.tail_preimage(y) > x {
            extra.insert(y);
        }
        let a = f.tail(s);
        if inverse.evaluate(a) > x {
            missing.insert(a);
        }
    }

    let edge = f.tail(x);
    let first_outside =
        |from: i64, skip: &HashSet<i64>| (from..).find(|y| !skip.contains(y)).expect("finite set");
    let last_outside = |from: i64, skip: &HashSet<i64>| {
        (i64::MIN..=from)
            .rev()
            .find(|y| !skip.contains(y))
            .expect("finite set")
    };
    let min_of = |set: &HashSet<i64>| set.iter().copied().min();
    let max_of = |set: &HashSet<i64>| set.iter().copied().max();

    // T is (-∞, edge] when σ = +1 and [edge, +∞) when σ = -1.
    let case = RayCase::for_orientation(f.orientation());
    let (region_lo, region_hi) = match case {
        RayCase::BelowRay => {
            // lowest point outside the image, highest point inside it
            let lo = first_outside(edge + 1, &extra);
            let hi = last_outside(edge, &missing);
            (
                min_of(&missing).map_or(lo, |m| m.min(lo)),
                max_of(&extra).map_or(hi, |m| m.max(hi)),
            )
        }
        RayCase::AboveRay => {
            // lowest point inside the image, highest point outside it
            let lo = first_outside(edge, &missing);
            let hi = last_outside(edge - 1, &extra);
            (
                min_of(&extra).map_or(lo, |m| m.min(lo)),
                max_of(&missing).map_or(hi, |m| m.max(hi)),
            )
        }
    };

    let bound = lipschitz_profile(f).product;
    let image = f.evaluate(x);
    let width = (region_hi - region_lo + 1).max(0);
    let half = bound / 2;
    let centered = width == 0
        || (rational::int(region_lo) >= rational::int(image) - half
            && rational::int(region_hi) <= rational::int(image) + half);
    RayProfile {
        x,
        image,
        bound,
        case,
        region_lo,
        region_hi,
        width,
        centered,
    }
}

/// All cut points fall in the same case, and it is the one the orientation predicts.
pub fn ray_dichotomy_consistency(f: &EventuallyAffineMap, xs: &[i64]) -> bool {
    let expected = RayCase::for_orientation(f.orientation());
    xs.iter().all(|&x| ray_profile(f, x).case == expected)
}
