//! Biot–Savart evaluation over tetrahedral meshes and the axisymmetric
//! vortex-ring reference solution.

pub mod biot_savart;
pub mod elliptic;
pub mod mesh;
pub mod ring;
pub mod simplex_rule;

pub use biot_savart::{
    biot_savart, far_field, near_field, BiotSavartOptions, NearField, VorticityMode,
};
pub use elliptic::{elliptic_e, elliptic_k, elliptic_ke, elliptic_ke_complement};
pub use mesh::{load_mesh, parse_mesh, TetMesh};
pub use ring::{line_samples, ring_error_metric, ring_reference_velocity, RingReference, RingSpec};
pub use simplex_rule::{fixed_tet_rule, FixedTetRule};
