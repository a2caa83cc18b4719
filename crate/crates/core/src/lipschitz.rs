//! Exact Lipschitz constants.
//!
//! On ℤ, `|f(x) - f(y)| <= Σ |f(k+1) - f(k)|` over the `|x - y|` unit steps
//! between them, so the supremum over all pairs equals the largest adjacent
//! gap. The same holds for the inverse on any finite set of sorted images:
//! consecutive images bound every other pair. Everything here scans adjacent
//! pairs only; the all-pairs definition is kept as a test oracle.

use serde::{Deserialize, Serialize};

use crate::map::EventuallyAffineMap;
use crate::rational::{self, Rational};
use crate::window::{FiniteBijection, WindowError, WindowSample};

/// `(‖f‖_Lip, ‖f⁻¹‖_Lip)` and their product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LipschitzProfile {
    #[serde(with = "rational::fraction")]
    pub forward: Rational,
    #[serde(with = "rational::fraction")]
    pub backward: Rational,
    #[serde(rename = "C", with = "rational::fraction")]
    pub product: Rational,
    /// Computed from a finite window, so only a lower bound for any extension.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub window_empirical: bool,
}

impl LipschitzProfile {
    pub fn new(forward: Rational, backward: Rational) -> Self {
        LipschitzProfile {
            product: forward * backward,
            forward,
            backward,
            window_empirical: false,
        }
    }

    fn empirical(mut self) -> Self {
        self.window_empirical = true;
        self
    }

    /// The rigidity constant `C`.
    pub fn c(&self) -> Rational {
        self.product
    }
}

/// Largest `|f(x+1) - f(x)|`. Off the support every step has length 1, and
/// only steps touching a support point can differ.
fn max_step(f: &EventuallyAffineMap) -> i64 {
    f.support()
        .flat_map(|s| [s - 1, s])
        .map(|x| (f.evaluate(x + 1) - f.evaluate(x)).abs())
        .fold(1, i64::max)
}

/// Exact profile of a bijection of ℤ.
pub fn lipschitz_profile(f: &EventuallyAffineMap) -> LipschitzProfile {
    let forward = max_step(f);
    let backward = max_step(&f.invert());
    LipschitzProfile::new(rational::int(forward), rational::int(backward))
}

/// Profile of the map restricted to the sampled window.
pub fn window_lipschitz(w: &WindowSample) -> Result<LipschitzProfile, WindowError> {
    w.require_nondegenerate()?;
    let forward = w
        .values()
        .windows(2)
        .map(|p| (p[1] - p[0]).abs())
        .max()
        .expect("at least one adjacent pair");
    let mut by_image: Vec<(i64, i64)> = w.points().map(|(x, y)| (y, x)).collect();
    by_image.sort_unstable();
    let backward = by_image
        .windows(2)
        .map(|p| Rational::new((p[1].1 - p[0].1).abs(), p[1].0 - p[0].0))
        .max()
        .expect("at least one adjacent pair");
    Ok(LipschitzProfile::new(rational::int(forward), backward).empirical())
}

/// Exact profile of a bijection of `[0, n)` with the interval metric.
///
/// A single point has no pairs; it gets the isometry profile `(1, 1)`.
pub fn finite_profile(f: &FiniteBijection) -> LipschitzProfile {
    fn max_gap(values: &[u32]) -> i64 {
        values
            .windows(2)
            .map(|p| (i64::from(p[1]) - i64::from(p[0])).abs())
            .max()
            .unwrap_or(1)
    }
    LipschitzProfile::new(
        rational::int(max_gap(f.values())),
        rational::int(max_gap(f.inverse().values())),
    )
}
