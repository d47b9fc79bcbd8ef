//! Exact computations for isotropic boundary cones of triangulated 3-manifolds,
//! train tracks, lexicographic metric trees, and flat surfaces.

mod dsu;
pub mod lamtree;
pub mod cone3;
pub mod fixtures;
pub mod flatsurf;
pub mod formats;
pub mod linalg;
pub mod ordgroup;
pub mod track;
