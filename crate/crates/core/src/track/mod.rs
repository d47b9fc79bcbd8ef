//! Oriented triangulated surfaces, generic train tracks, and their forms.

mod forms;
mod homology;
mod surface;
mod traintrack;

use thiserror::Error;

pub use forms::{
    dual_triangulation, embed_weights, thurston_form, thurston_matrix, triangle_form, triangle_form_sum,
    DualTriangulation, TriWeight,
};
pub use homology::cycle_pairing;
pub use surface::{ComponentInfo, Side, SurfaceTriangulation};
pub use traintrack::{
    in_cone, switch_check, weight_space_basis, weights_from_labels, HalfBranch, Slot, Switch, TrainTrack, WeightVec,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrackError {
    #[error("invalid structure: {0}")]
    Structure(String),
    #[error("expected {expected} weights, got {got}")]
    MissingWeight { expected: usize, got: usize },
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("track is not maximal: {0}")]
    NotMaximal(String),
    #[error("track has no consistent orientation")]
    NotOrientable,
}
