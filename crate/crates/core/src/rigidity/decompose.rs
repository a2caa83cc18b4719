use serde::{Deserialize, Serialize};

use super::RigidityError;
use crate::lipschitz::{finite_profile, lipschitz_profile, window_lipschitz};
use crate::map::{EventuallyAffineMap, Sign};
use crate::rational::{self, Rational};
use crate::window::{FiniteBijection, WindowSample};

/// `f(x) = σx + const + r(x)` together with `‖r‖_∞` and the bound `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityDecomposition {
    pub sigma: Sign,
    #[serde(rename = "const")]
    pub constant: i64,
    #[serde(with = "rational::fraction")]
    pub residual_sup: Rational,
    #[serde(rename = "C", with = "rational::fraction")]
    pub bound: Rational,
    pub conforms: bool,
    /// Derived from a finite window; `bound` may understate the true `C`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub window_empirical: bool,
}

impl RigidityDecomposition {
    fn new(sigma: Sign, (constant, sup): (i64, i64), bound: Rational) -> Self {
        let residual_sup = rational::int(sup);
        RigidityDecomposition {
            sigma,
            constant,
            conforms: residual_sup <= bound,
            residual_sup,
            bound,
            window_empirical: false,
        }
    }

    /// `max |r|` if `const` were replaced by `constant`, over the given displacements.
    pub fn sup_for_constant(displacements: impl IntoIterator<Item = i64>, constant: i64) -> i64 {
        displacements
            .into_iter()
            .map(|d| (d - constant).abs())
            .max()
            .unwrap_or(0)
    }
}

/// Midrange of the displacements, rounded half toward zero, and the
/// resulting sup distance. The midrange minimizes the sup over all integers.
fn midrange(displacements: impl IntoIterator<Item = i64>) -> (i64, i64) {
    let (lo, hi) = displacements
        .into_iter()
        .fold((i64::MAX, i64::MIN), |(lo, hi), d| (lo.min(d), hi.max(d)));
    assert!(lo <= hi, "midrange of an empty set");
    // Integer division truncates, which is rounding half toward zero here.
    let constant = (lo + hi) / 2;
    (constant, (hi - constant).max(constant - lo))
}

/// Every displacement `f(x) - σx` the map takes: the offset (attained off
/// the support) and `offset + r(s)` on the support.
fn displacements(f: &EventuallyAffineMap) -> impl Iterator<Item = i64> + '_ {
    std::iter::once(f.offset()).chain(f.residual().iter().map(|&(_, r)| f.offset() + r))
}

pub fn decompose(f: &EventuallyAffineMap) -> RigidityDecomposition {
    let profile = lipschitz_profile(f);
    RigidityDecomposition::new(f.orientation(), midrange(displacements(f)), profile.product)
}

/// Orientation comes from the endpoint difference; see `window_empirical`.
pub fn decompose_window(w: &WindowSample) -> Result<RigidityDecomposition, RigidityError> {
    let profile = window_lipschitz(w)?;
    let values = w.values();
    let sigma = Sign::of(values[values.len() - 1] - values[0]).expect("window values are distinct");
    let s = sigma.as_i64();
    let mut out = RigidityDecomposition::new(
        sigma,
        midrange(w.points().map(|(x, y)| y - s * x)),
        profile.product,
    );
    out.window_empirical = true;
    Ok(out)
}

/// Decomposition of a bijection of `[0, n)` with its exact constants.
///
/// Both orientations are tried and the one with the smaller residual wins
/// (ties go to `+1`).
pub fn decompose_finite(f: &FiniteBijection) -> RigidityDecomposition {
    let profile = finite_profile(f);
    let fit = |sigma: Sign| {
        let s = sigma.as_i64();
        midrange(
            f.values()
                .iter()
                .enumerate()
                .map(|(x, &y)| i64::from(y) - s * x as i64),
        )
    };
    let plus = fit(Sign::Plus);
    let minus = fit(Sign::Minus);
    if minus.1 < plus.1 {
        RigidityDecomposition::new(Sign::Minus, minus, profile.product)
    } else {
        RigidityDecomposition::new(Sign::Plus, plus, profile.product)
    }
}

/// `|σ(f(x2) - f(x1)) - (x2 - x1)| <= C`, valid once `x2 - x1 > C`.
pub fn displacement_check(
    f: &EventuallyAffineMap,
    x1: i64,
    x2: i64,
) -> Result<bool, RigidityError> {
    let c = lipschitz_profile(f).product;
    let gap = x2 - x1;
    if rational::int(gap) <= c {
        return Err(RigidityError::HypothesisNotMet { gap, c });
    }
    let image_gap = f.orientation().as_i64() * (f.evaluate(x2) - f.evaluate(x1));
    Ok(rational::int((image_gap - gap).abs()) <= c)
}
