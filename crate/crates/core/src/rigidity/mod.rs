//! Rigidity analyzers: the `±x + const + r(x)` decomposition, ray images,
//! the displacement window and Følner ratios on `[-n, n]`.

mod decompose;
mod folner;
mod ray;

pub use decompose::{
    decompose, decompose_finite, decompose_window, displacement_check, RigidityDecomposition,
};
pub use folner::{folner_csv, folner_curve, folner_ratio, FolnerCurve, FolnerPoint, FolnerReport};
pub use ray::{ray_dichotomy_consistency, ray_image_contains, ray_profile, RayCase, RayProfile};

use thiserror::Error;

use crate::rational::Rational;
use crate::window::WindowError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigidityError {
    #[error("x2 - x1 = {gap} must exceed C = {c}; widen the gap")]
    HypothesisNotMet { gap: i64, c: Rational },
    #[error(transparent)]
    Window(#[from] WindowError),
}
