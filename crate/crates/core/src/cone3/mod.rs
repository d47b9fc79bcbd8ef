//! Triangulated 3-manifolds, tetrahedron forms, four-point weight subspaces,
//! and the isotropic boundary cone.

mod cone;
mod product;
mod triangulation;
mod w4;

use thiserror::Error;

pub use cone::{
    enumerator, AllChoices, ChoiceEnumerator, ConeComponent, ConeProblem, Membership, PLCone, SampledChoices,
    ENUMERATORS,
};
pub use product::{product_triangulation, ProductTriangulation};
pub use triangulation::{
    cone_over, face_vertices, local_edge, oriented_face, single_tetrahedron, two_tetrahedra, FaceGlue,
    Triangulation3, ValidationReport, TET_EDGES,
};
pub use w4::{
    all_choices, choice_row, isotropy_check, omega_m, opposite_pairs, restrict, subspace_is_isotropic,
    tet_face_sum_local, tet_form, tet_form_local, w4_member, w4_subspace, ChoiceVector, W4Membership,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Cone3Error {
    #[error("invalid triangulation: {0}")]
    Structure(String),
    #[error("gluing is not involutive: {0}")]
    NonInvolutive(String),
    #[error("orientation inconsistency: {0}")]
    Orientation(String),
    #[error("boundary track does not match the boundary: {0}")]
    TrackMismatch(String),
}
