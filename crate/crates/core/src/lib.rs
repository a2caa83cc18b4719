//! Exact analysis of bi-Lipschitz bijections of ℤ and ℤ².
//!
//! A bijection of ℤ with finite Lipschitz constants `‖f‖` and `‖f⁻¹‖` stays
//! within `C = ‖f‖·‖f⁻¹‖` of `x ↦ ±x + const`. This crate represents such
//! maps exactly ([`EventuallyAffineMap`]), computes their constants, the
//! decomposition, ray images and Følner ratios, enumerates every bi-Lipschitz
//! bijection of a small interval as a brute-force check, and builds the ℤ²
//! maps for which none of this holds.
//!
//! All arithmetic is on integers and exact rationals.

pub mod enumerate;
pub mod grid;
pub mod lipschitz;
pub mod map;
pub mod rational;
pub mod rigidity;
pub mod sample;
pub mod window;

pub use enumerate::{
    collect_parallel, enumerate, enumerate_parallel, naive_count, naive_maps, verify_theorem_over,
    verify_theorem_parallel, EnumError, EnumResult, EnumSpec, SearchStats,
};
pub use grid::{
    grid_folner_ratio, grid_lipschitz_window, isometry_gap, GridError, GridLipschitz, GridMap,
    GridWindowReport, ShearFn, Unimodular,
};
pub use lipschitz::{finite_profile, lipschitz_profile, window_lipschitz, LipschitzProfile};
pub use map::{EventuallyAffineMap, MapError, Sign};
pub use rational::Rational;
pub use rigidity::{
    decompose, decompose_finite, decompose_window, displacement_check, folner_curve, folner_ratio,
    ray_dichotomy_consistency, ray_profile, FolnerCurve, FolnerReport, RayCase, RayProfile,
    RigidityDecomposition, RigidityError,
};
pub use window::{FiniteBijection, WindowError, WindowSample};
