//! Fixture meshes for the vortex-ring experiment: an incremental Delaunay
//! tetrahedralizer, a graded ring point cloud and tetgen writers.

pub mod delaunay;
pub mod ring;
pub mod tetgen;

pub use delaunay::{delaunay, Mesh};
pub use ring::{line_z, ring_mesh, ring_points, RingMeshParams};
pub use tetgen::{ele_text, node_text, write_tetgen};
