//! Planar digraphs: rotation systems, separator dipaths with portals, and
//! the `1 + ε` Steiner cover built on top of them.

pub mod centroid;
pub mod cover;
pub mod embedding;
pub mod path_cover;

pub use centroid::{build_centroid_hierarchy, CentroidHierarchy};
pub use cover::{assemble_center_sets, build_planar_cover, build_planar_cover_with, PlanarCover};
pub use embedding::{validate_embedding, PlanarEmbedding};
pub use path_cover::{build_path_cover, verify_path_cover_contract, DiPath, PathCover, Portal};
