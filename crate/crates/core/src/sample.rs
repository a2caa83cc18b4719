//! Random valid maps for property sweeps and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::map::{EventuallyAffineMap, Sign};

/// Shape of a random map: a local permutation of a short block, then an
/// affine tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapShape {
    /// Largest residual support.
    pub max_support: usize,
    /// Largest `|r(x)|`.
    pub max_residual: i64,
    /// Offsets are drawn from `-max_offset..=max_offset`.
    pub max_offset: i64,
    /// Block start is drawn from `-max_start..=max_start`.
    pub max_start: i64,
}

impl Default for MapShape {
    fn default() -> Self {
        MapShape {
            max_support: 20,
            max_residual: 10,
            max_offset: 50,
            max_start: 50,
        }
    }
}

/// `f = A ∘ π` where `A(x) = σx + offset` and `π` shuffles a block of at most
/// `max_support` consecutive integers, in chunks short enough that no point
/// moves more than `max_residual`.
pub fn random_map<R: Rng + ?Sized>(rng: &mut R, shape: MapShape) -> EventuallyAffineMap {
    let sigma = if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    };
    let offset = rng.gen_range(-shape.max_offset..=shape.max_offset);
    let start = rng.gen_range(-shape.max_start..=shape.max_start);
    let len = rng.gen_range(0..=shape.max_support) as i64;
    let chunk = (shape.max_residual + 1).max(1);
    let mut block: Vec<i64> = (start..start + len).collect();
    for piece in block.chunks_mut(chunk as usize) {
        piece.shuffle(rng);
    }
    let s = sigma.as_i64();
    let residual = (start..start + len)
        .zip(block)
        .map(|(x, px)| (x, s * (px - x)));
    EventuallyAffineMap::new(sigma, offset, residual)
        .expect("affine image of a permutation is a bijection")
}
