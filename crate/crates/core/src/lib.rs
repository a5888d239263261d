//! Numerical geometry of complex hyperbolic space `H^n_C` and its boundary,
//! the Heisenberg group.
//!
//! Points are written in horospherical coordinates `(ξ, v, u)` with
//! `ξ ∈ C^{n-1}`, `v ∈ R`, `u ≥ 0`; the boundary is `u = 0` together with
//! the point at infinity. Isometries are `(n+1)×(n+1)` complex matrices
//! preserving the form `⟨z,w⟩ = Σ_{i<n} z_i w̄_i - z_n w̄_n`.
//!
//! Heavy loops (enumeration, ray marching, audits) run on rayon when the
//! `parallel` feature is enabled; results are independent of the thread
//! count because every random draw comes from a counter-based stream keyed
//! by its index.

pub mod cr;
pub mod error;
pub mod groups;
pub mod heisenberg;
pub mod hermitian;
pub mod io;
pub mod isometry;
pub mod par;
pub mod rng;

pub use error::{Error, Result};
pub use heisenberg::{
    commutator, cygan_dist, cygan_norm, dilate, embed, h_inv, h_inversion, h_mul, heis_dist_to_subgroup,
    HeisElement, HeisIsometry, SubgroupDescriptor,
};
pub use hermitian::{
    bergman_distance, c64, chordal_distance, hermitian_form, is_j_unitary, lift, point_location, unlift, CMatrix,
    CVector, HPoint, HermitianForm, Horospherical, LiftVector, Location, Metric, C64, DEFAULT_KAPPA,
};
pub use isometry::{
    boundary_action, classify, fixed_points, Classification, ClassifyConfig, FixedPoint, Isometry, IsometryType,
};
pub use par::Execution;
