use super::surface::{FlatSurface, GlueSign, SurfaceKind};
use super::tangent::PeriodTangent;
use crate::ordgroup::rat;

/// The translation surface of `√φ` over a flat surface. Cover triangle
/// `k·n + t` is sheet `k` of base triangle `t`; sheet 1 carries negated vectors.
#[derive(Debug, Clone)]
pub struct DoubleCover {
    pub surface: FlatSurface,
    /// Deck involution on cover triangles.
    pub involution: Vec<usize>,
    /// True when the base already was a translation surface, so the cover is
    /// two disjoint copies.
    pub trivial: bool,
}

impl DoubleCover {
    /// (base triangle, sheet) of a cover triangle.
    pub fn sheet_of(&self, t: usize) -> (usize, usize) {
        let n = self.involution.len() / 2;
        (t % n, t / n)
    }
}

pub fn orientation_double_cover(s: &FlatSurface) -> DoubleCover {
    let tri = s.triangulation();
    let n = s.triangle_count();
    let mut triangles = Vec::new();
    let mut vectors = Vec::new();
    for k in 0..2 {
        for (t, (id, sides)) in tri.triangles().into_iter().enumerate() {
            triangles.push((format!("{id}.{k}"), sides.clone().map(|x| format!("{x}.{k}"))));
            for (i, name) in sides.iter().enumerate() {
                let v = s.side_vector((t, i)).clone();
                vectors.push((format!("{name}.{k}"), if k == 0 { v } else { -v }));
            }
        }
    }
    let mut glues = Vec::new();
    for (a, b, g) in s.glues() {
        for k in 0..2 {
            // A half-turn gluing crosses to the other sheet.
            let other = if g == GlueSign::Neg { k } else { 1 - k };
            glues.push((format!("{a}.{k}"), format!("{b}.{other}"), GlueSign::Neg));
        }
    }
    let surface = FlatSurface::new(SurfaceKind::Translation, triangles, &vectors, &glues).expect("cover is a valid surface");
    DoubleCover {
        surface,
        involution: (0..2 * n).map(|t| (t + n) % (2 * n)).collect(),
        trivial: s.kind() == SurfaceKind::Translation,
    }
}

/// The tangent on the cover whose sheet-1 deformation is the negation of
/// sheet 0.
pub fn lift_tangent(base: &FlatSurface, cover: &DoubleCover, psi: &PeriodTangent) -> PeriodTangent {
    let c = &cover.surface;
    PeriodTangent::new(
        (0..c.edge_count())
            .map(|e| {
                let side = c.triangulation().edge_sides(e)[0];
                let (t, k) = cover.sheet_of(side.0);
                psi.side_delta(base, (t, side.1)) * rat(if k == 0 { 1 } else { -1 })
            })
            .collect(),
    )
}
