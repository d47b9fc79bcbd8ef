//! Flat surfaces glued from rational triangles: Delaunay flips, heights, the
//! dual train track, period tangents, and exact symplectic pairings.

mod cover;
mod delaunay;
mod dual;
mod quadrature;
mod surface;
mod symplectic;
mod tangent;

use thiserror::Error;

use crate::track::TrackError;

pub use cover::{lift_tangent, orientation_double_cover, DoubleCover};
pub use delaunay::{
    delaunay, delaunay_with_report, find_rotation, heights, incircle, is_delaunay, rotate, DelaunayReport,
};
pub use dual::{d_f, dual_track, DualTrack};
pub use quadrature::kahler_pairing_numeric;
pub use surface::{cx, fmt_cx, Cx, FlatSurface, GlueSign, SurfaceKind, Symbol, ValidationReport};
pub use symplectic::{
    omega_hessian, omega_homological, omega_thurston, route, HessianRoute, HomologicalRoute, SymplecticRoute,
    ThurstonRoute, ROUTES,
};
pub use tangent::{
    compatible_pair, cup, period_defect, random_tangent, scaling_tangent, tangent_basis, PeriodTangent,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlatError {
    #[error("invalid structure: {0}")]
    Structure(String),
    #[error("triangle {0} does not close up")]
    Closure(String),
    #[error("triangle {0} has nonpositive area")]
    NonPositiveArea(String),
    #[error("inconsistent gluing sign between {0} and {1}")]
    GlueSign(String, String),
    #[error("cone angle at vertex {vertex} is {multiple}π, not a multiple of 2π")]
    ConeAngle { vertex: usize, multiple: u64 },
    #[error("horizontal edge {0}: rotate the surface first")]
    HorizontalEdge(String),
    #[error("multiplier must be nonzero")]
    ZeroMultiplier,
    #[error("homological pairing needs a translation surface; pass through the orientation double cover")]
    HalfTranslation,
    #[error("invalid tangent: {0}")]
    Tangent(String),
    #[error(transparent)]
    Track(#[from] TrackError),
}
