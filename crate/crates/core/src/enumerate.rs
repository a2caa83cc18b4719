//! Exhaustive enumeration of the bi-Lipschitz bijections of `[0, n)`.
//!
//! A depth-first search assigns `values[0], values[1], …` in increasing order,
//! so bijections come out lexicographically. Three rules prune a candidate
//! value `y` at position `p`:
//!
//! * availability: `y` is already used (bitset);
//! * forward gap: `|y - values[p-1]|` exceeds the forward cap;
//! * backward gap: `y ± 1` is already placed at a position more than the
//!   backward cap away from `p` (the partial inverse is kept as a slot table).
//!
//! Integer data means a rational cap `k` acts exactly like `⌊k⌋`.

use std::fmt::Write as _;
use std::ops::AddAssign;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::rational::{self, Rational};
use crate::rigidity::decompose_finite;
use crate::window::FiniteBijection;

/// Bitset and `u32` values bound the search size well above anything feasible.
pub const MAX_N: usize = 32;
/// Largest `n` the factorial reference filter accepts.
pub const NAIVE_MAX_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("n: must be between 1 and {max}, got {got}")]
    BadSize { got: usize, max: usize },
    #[error("{field}: cap must be at least 1, got {value}")]
    BadCap {
        field: &'static str,
        value: Rational,
    },
    #[error("n: naive filter is limited to n <= {NAIVE_MAX_N}, got {0}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumSpec {
    pub n: usize,
    #[serde(with = "rational::fraction")]
    pub k_forward: Rational,
    #[serde(with = "rational::fraction")]
    pub k_backward: Rational,
}

impl EnumSpec {
    pub fn new(n: usize, k_forward: Rational, k_backward: Rational) -> Result<Self, EnumError> {
        if n == 0 || n > MAX_N {
            return Err(EnumError::BadSize { got: n, max: MAX_N });
        }
        for (field, value) in [("k_forward", k_forward), ("k_backward", k_backward)] {
            if value < rational::int(1) {
                return Err(EnumError::BadCap { field, value });
            }
        }
        Ok(EnumSpec {
            n,
            k_forward,
            k_backward,
        })
    }

    /// Integer caps; both at least 1.
    pub fn integer(n: usize, k_forward: i64, k_backward: i64) -> Result<Self, EnumError> {
        Self::new(n, rational::int(k_forward), rational::int(k_backward))
    }

    fn forward_cap(&self) -> i64 {
        rational::floor(&self.k_forward)
    }

    fn backward_cap(&self) -> i64 {
        rational::floor(&self.k_backward)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub pruned_taken: u64,
    pub pruned_forward: u64,
    pub pruned_backward: u64,
}

impl AddAssign for SearchStats {
    fn add_assign(&mut self, rhs: Self) {
        self.nodes += rhs.nodes;
        self.pruned_taken += rhs.pruned_taken;
        self.pruned_forward += rhs.pruned_forward;
        self.pruned_backward += rhs.pruned_backward;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EnumResult {
    pub count: u64,
    /// Bijections breaking `‖r‖_∞ <= C`, sorted.
    pub violations: Vec<FiniteBijection>,
    pub stats: SearchStats,
}

impl EnumResult {
    /// Associative and commutative: violations are kept sorted.
    pub fn merge(mut self, other: EnumResult) -> EnumResult {
        self.count += other.count;
        self.stats += other.stats;
        self.violations.extend(other.violations);
        self.violations.sort_unstable();
        self
    }
}

struct Search {
    n: usize,
    forward_cap: i64,
    backward_cap: i64,
    values: Vec<u32>,
    /// `slot[y]` is the position holding value `y`, if placed.
    slot: Vec<Option<u32>>,
    used: u64,
    stats: SearchStats,
}

impl Search {
    fn new(spec: &EnumSpec) -> Self {
        Search {
            n: spec.n,
            forward_cap: spec.forward_cap(),
            backward_cap: spec.backward_cap(),
            values: Vec::with_capacity(spec.n),
            slot: vec![None; spec.n],
            used: 0,
            stats: SearchStats::default(),
        }
    }

    fn admissible(&mut self, y: usize) -> bool {
        let pos = self.values.len() as i64;
        if self.used & (1 << y) != 0 {
            self.stats.pruned_taken += 1;
            return false;
        }
        if let Some(&prev) = self.values.last() {
            if (y as i64 - i64::from(prev)).abs() > self.forward_cap {
                self.stats.pruned_forward += 1;
                return false;
            }
        }
        let neighbours = [y.checked_sub(1), Some(y + 1).filter(|&z| z < self.n)];
        for z in neighbours.into_iter().flatten() {
            if let Some(p) = self.slot[z] {
                if (pos - i64::from(p)).abs() > self.backward_cap {
                    self.stats.pruned_backward += 1;
                    return false;
                }
            }
        }
        true
    }

    fn push(&mut self, y: usize) {
        self.slot[y] = Some(self.values.len() as u32);
        self.values.push(y as u32);
        self.used |= 1 << y;
    }

    fn pop(&mut self) {
        let y = self.values.pop().expect("nonempty") as usize;
        self.slot[y] = None;
        self.used &= !(1 << y);
    }

    /// Explores below the current prefix, calling `leaf` at depth `limit`.
    fn descend(&mut self, limit: usize, leaf: &mut dyn FnMut(&[u32])) {
        if self.values.len() == limit {
            leaf(&self.values);
            return;
        }
        for y in 0..self.n {
            if self.admissible(y) {
                self.stats.nodes += 1;
                self.push(y);
                self.descend(limit, leaf);
                self.pop();
            }
        }
    }
}

/// Visits every bijection within the caps, once, in lexicographic order.
pub fn enumerate(spec: &EnumSpec, mut visitor: impl FnMut(&FiniteBijection)) -> EnumResult {
    let mut search = Search::new(spec);
    let mut count = 0;
    search.descend(spec.n, &mut |values| {
        count += 1;
        visitor(&FiniteBijection::from_permutation_unchecked(
            values.to_vec(),
        ));
    });
    EnumResult {
        count,
        violations: Vec::new(),
        stats: search.stats,
    }
}

/// Admissible prefixes of length `min(2, n)` in lexicographic order, plus the
/// statistics of the search that found them.
fn prefixes(spec: &EnumSpec) -> (Vec<Vec<u32>>, SearchStats) {
    let mut search = Search::new(spec);
    let mut out = Vec::new();
    search.descend(spec.n.min(2), &mut |values| out.push(values.to_vec()));
    (out, search.stats)
}

/// Runs one branch per prefix on a pool of `threads` workers. Branch results
/// come back in prefix order, so the merged output is independent of `threads`.
fn run_branches<T: Send>(
    spec: &EnumSpec,
    threads: usize,
    branch: impl Fn(&mut Search) -> T + Sync,
) -> (Vec<T>, SearchStats) {
    let (prefixes, stats) = prefixes(spec);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool");
    let results = pool.install(|| {
        prefixes
            .par_iter()
            .map(|prefix| {
                let mut search = Search::new(spec);
                for &y in prefix {
                    search.push(y as usize);
                }
                branch(&mut search)
            })
            .collect()
    });
    (results, stats)
}

/// Parallel enumeration split over the first two values. The visitor may be
/// called concurrently and in any order; counts and statistics are the same
/// as for [`enumerate`].
pub fn enumerate_parallel(
    spec: &EnumSpec,
    threads: usize,
    visitor: impl Fn(&FiniteBijection) + Sync,
) -> EnumResult {
    let (branches, mut stats) = run_branches(spec, threads, |search| {
        let mut count = 0u64;
        search.descend(spec.n, &mut |values| {
            count += 1;
            visitor(&FiniteBijection::from_permutation_unchecked(
                values.to_vec(),
            ));
        });
        (count, search.stats)
    });
    let mut count = 0;
    for (c, s) in branches {
        count += c;
        stats += s;
    }
    EnumResult {
        count,
        violations: Vec::new(),
        stats,
    }
}

/// Every bijection within the caps, in lexicographic order, using `threads` workers.
pub fn collect_parallel(spec: &EnumSpec, threads: usize) -> Vec<FiniteBijection> {
    let (branches, _) = run_branches(spec, threads, |search| {
        let mut out = Vec::new();
        search.descend(spec.n, &mut |values| {
            out.push(FiniteBijection::from_permutation_unchecked(values.to_vec()))
        });
        out
    });
    branches.into_iter().flatten().collect()
}

/// `true` when the decomposition with this bijection's own constants breaks `‖r‖_∞ <= C`.
pub fn violates_theorem(f: &FiniteBijection) -> bool {
    !decompose_finite(f).conforms
}

/// Enumerates and checks every visited bijection against the residual bound.
pub fn verify_theorem_over(spec: &EnumSpec) -> EnumResult {
    let mut violations = Vec::new();
    let mut result = enumerate(spec, |f| {
        if violates_theorem(f) {
            violations.push(f.clone());
        }
    });
    result.violations = violations;
    result
}

/// [`verify_theorem_over`] on `threads` workers; identical result.
pub fn verify_theorem_parallel(spec: &EnumSpec, threads: usize) -> EnumResult {
    let (branches, stats) = run_branches(spec, threads, |search| {
        let mut result = EnumResult::default();
        search.descend(spec.n, &mut |values| {
            result.count += 1;
            let f = FiniteBijection::from_permutation_unchecked(values.to_vec());
            if violates_theorem(&f) {
                result.violations.push(f);
            }
        });
        result.stats = search.stats;
        result
    });
    let init = EnumResult {
        stats,
        ..EnumResult::default()
    };
    branches.into_iter().fold(init, EnumResult::merge)
}

/// Rearranges `values` into the next permutation in lexicographic order.
fn next_permutation(values: &mut [u32]) -> bool {
    let Some(i) = values.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = values
        .iter()
        .rposition(|&v| v > values[i])
        .expect("pivot has a successor");
    values.swap(i, j);
    values[i + 1..].reverse();
    true
}

/// All-pairs check of both caps, straight from the definition of the constants.
fn within_caps_all_pairs(values: &[u32], spec: &EnumSpec) -> bool {
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let domain = (j - i) as i64;
            let image = (i64::from(values[i]) - i64::from(values[j])).abs();
            if Rational::new(image, domain) > spec.k_forward
                || Rational::new(domain, image) > spec.k_backward
            {
                return false;
            }
        }
    }
    true
}

/// Reference filter: every one of the `n!` permutations, checked pairwise.
pub fn naive_maps(spec: &EnumSpec) -> Result<Vec<FiniteBijection>, EnumError> {
    if spec.n > NAIVE_MAX_N {
        return Err(EnumError::TooLarge(spec.n));
    }
    let mut values: Vec<u32> = (0..spec.n as u32).collect();
    let mut out = Vec::new();
    loop {
        if within_caps_all_pairs(&values, spec) {
            out.push(FiniteBijection::from_permutation_unchecked(values.clone()));
        }
        if !next_permutation(&mut values) {
            return Ok(out);
        }
    }
}

pub fn naive_count(spec: &EnumSpec) -> Result<u64, EnumError> {
    naive_maps(spec).map(|maps| maps.len() as u64)
}

/// Golden count table, columns `n,k_forward,k_backward,count`.
pub fn count_table_csv<'a>(rows: impl IntoIterator<Item = (&'a EnumSpec, u64)>) -> String {
    let mut out = String::from("n,k_forward,k_backward,count\n");
    for (spec, count) in rows {
        writeln!(
            out,
            "{},{},{},{}",
            spec.n, spec.k_forward, spec.k_backward, count
        )
        .unwrap();
    }
    out
}
