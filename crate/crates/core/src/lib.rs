//! Complex hyperbolic space `CH^n` in the projective model, its Heisenberg
//! boundary, and numerical experiments with discrete groups of `PU(n,1)`.
//!
//! Points are lines in `C^{n,1}` with the form `J = diag(1, …, 1, −1)`;
//! horospherical coordinates `(ξ, v, u)` identify the complement of `∞`
//! with `H_n × [0, ∞)`.

pub mod bending;
pub mod dirichlet;
pub mod error;
pub mod groups;
pub mod heisenberg;
pub mod model;
pub mod presets;
pub mod projective;
pub mod sampling;

pub use error::{GeomError, Result};
pub use groups::{GroupElement, GroupGens, Letter, Sphere, SpherePacking};
pub use heisenberg::{HeisPoint, HeisSimilarity, HoroPoint};
pub use model::InvariantModel;
pub use presets::Preset;
pub use projective::{C64, CMatrix, CVector, Isometry, IsometryClass, PointClass, ProjectivePoint};
