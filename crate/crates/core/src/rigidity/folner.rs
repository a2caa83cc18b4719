use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decompose;
use crate::map::EventuallyAffineMap;
use crate::rational::{self, Rational};

/// `|f(A_n) ∩ A_n| / |A_n|` for `A_n = [-n, n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerReport {
    pub n: u64,
    pub window_size: u64,
    pub intersection: u64,
    #[serde(with = "rational::fraction")]
    pub ratio: Rational,
}

/// Exact count, linear in the support size rather than in `n`.
///
/// The tail `±x + offset` keeps `2n + 1 - |offset|` points of `A_n` inside
/// (both orientations shift the window by `offset` up to reflection); each
/// support point in `A_n` then swaps its tail image for its true image.
pub fn folner_ratio(f: &EventuallyAffineMap, n: u64) -> FolnerReport {
    assert!(n >= 1, "n must be positive");
    let n_i = i64::try_from(n).expect("n fits in i64");
    let size = 2 * n_i + 1;
    let inside = |y: i64| (-n_i..=n_i).contains(&y);
    let mut count = (size - f.offset().abs()).max(0);
    for s in f.support().filter(|&s| inside(s)) {
        count += i64::from(inside(f.evaluate(s))) - i64::from(inside(f.tail(s)));
    }
    FolnerReport {
        n,
        window_size: size as u64,
        intersection: count as u64,
        ratio: Rational::new(count, size),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerPoint {
    #[serde(flatten)]
    pub report: FolnerReport,
    /// `1 - 2D/(2n + 1)`.
    #[serde(with = "rational::fraction")]
    pub lower_bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerCurve {
    /// `D = |const| + ‖r‖_∞`, a bound on `|f(x) - σx|`.
    pub displacement: i64,
    pub points: Vec<FolnerPoint>,
}

/// Ratios for each `n`, in input order, with the certified lower bound.
///
/// Every `x` whose mirror image `σx` lies at least `D` inside `A_n` maps into
/// `A_n`; at most `2D` points of `A_n` fail that test.
pub fn folner_curve(f: &EventuallyAffineMap, ns: &[u64]) -> FolnerCurve {
    let d = decompose(f);
    let displacement = d.constant.abs() + rational::floor(&d.residual_sup);
    let points = ns
        .par_iter()
        .map(|&n| {
            let report = folner_ratio(f, n);
            let lower_bound =
                rational::int(1) - Rational::new(2 * displacement, report.window_size as i64);
            FolnerPoint {
                report,
                lower_bound,
            }
        })
        .collect();
    FolnerCurve {
        displacement,
        points,
    }
}

/// CSV with columns `n,intersection,ratio_num,ratio_den`.
pub fn folner_csv<'a>(reports: impl IntoIterator<Item = &'a FolnerReport>) -> String {
    let mut out = String::from("n,intersection,ratio_num,ratio_den\n");
    for r in reports {
        writeln!(
            out,
            "{},{},{},{}",
            r.n,
            r.intersection,
            r.ratio.numer(),
            r.ratio.denom()
        )
        .unwrap();
    }
    out
}
