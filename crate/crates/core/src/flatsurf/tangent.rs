use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use super::surface::{half, Cx, FlatSurface};
use super::FlatError;
use crate::linalg::{kernel, Row};
use crate::ordgroup::{rat, Rat};
use crate::track::Side;

/// A first-order deformation of the edge vectors, one complex number per
/// edge read along the edge's first side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodTangent {
    pub deltas: Vec<Cx>,
}

impl PeriodTangent {
    pub fn new(deltas: Vec<Cx>) -> Self {
        Self { deltas }
    }

    /// Checks length and per-triangle closure.
    pub fn check(&self, s: &FlatSurface) -> Result<(), FlatError> {
        if self.deltas.len() != s.edge_count() {
            return Err(FlatError::Tangent(format!("expected {} edges, got {}", s.edge_count(), self.deltas.len())));
        }
        for t in 0..s.triangle_count() {
            let sum = (0..3).fold(Cx::zero(), |acc, i| acc + self.side_delta(s, (t, i)));
            if !sum.is_zero() {
                return Err(FlatError::Tangent(format!("triangle {} does not close up", s.triangulation().triangle_id(t))));
            }
        }
        Ok(())
    }

    pub fn side_delta(&self, s: &FlatSurface, side: Side) -> Cx {
        let d = &self.deltas[s.triangulation().edge_of(side)];
        d * rat(s.side_orientation(side))
    }

    pub fn times(&self, c: &Cx) -> Self {
        Self::new(self.deltas.iter().map(|d| d * c).collect())
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::new(self.deltas.iter().zip(&other.deltas).map(|(a, b)| a + b).collect())
    }

    pub fn re_parts(&self) -> Vec<Rat> {
        self.deltas.iter().map(|d| d.re.clone()).collect()
    }

    pub fn im_parts(&self) -> Vec<Rat> {
        self.deltas.iter().map(|d| d.im.clone()).collect()
    }
}

/// Real basis of the closure equations; tangents are its complex span.
pub fn tangent_basis(s: &FlatSurface) -> Vec<Row> {
    let rows: Vec<Row> = (0..s.triangle_count())
        .map(|t| {
            let mut r = vec![Rat::zero(); s.edge_count()];
            for i in 0..3 {
                r[s.triangulation().edge_of((t, i))] += rat(s.side_orientation((t, i)));
            }
            r
        })
        .collect();
    kernel(&rows, s.edge_count())
}

/// `δe = v(e)`: the derivative of scaling the surface.
pub fn scaling_tangent(s: &FlatSurface) -> PeriodTangent {
    PeriodTangent::new((0..s.edge_count()).map(|e| s.edge_vector(e).clone()).collect())
}

/// Random Gaussian-integer combination of the tangent basis.
pub fn random_tangent<R: Rng>(s: &FlatSurface, rng: &mut R, bound: i64) -> PeriodTangent {
    let basis = tangent_basis(s);
    let mut deltas = vec![Cx::zero(); s.edge_count()];
    for b in &basis {
        let c = Complex::new(rat(rng.gen_range(-bound..=bound)), rat(rng.gen_range(-bound..=bound)));
        for (d, x) in deltas.iter_mut().zip(b) {
            *d += &c * x;
        }
    }
    PeriodTangent::new(deltas)
}

/// Cup product of two closed real edge cochains, summed triangle by triangle.
pub fn cup(s: &FlatSurface, a: &[Rat], b: &[Rat]) -> Rat {
    let mut sum = Rat::zero();
    for t in 0..s.triangle_count() {
        let val = |w: &[Rat], i: usize| &w[s.triangulation().edge_of((t, i))] * rat(s.side_orientation((t, i)));
        sum += val(a, 0) * val(b, 1) - val(a, 1) * val(b, 0);
    }
    sum * half()
}

/// `[Re δ₁]·[Re δ₂] − [Im δ₁]·[Im δ₂]`. It vanishes on tangents along a fixed
/// conformal structure, where the three exact pairings coincide.
pub fn period_defect(s: &FlatSurface, a: &PeriodTangent, b: &PeriodTangent) -> Rat {
    cup(s, &a.re_parts(), &b.re_parts()) - cup(s, &a.im_parts(), &b.im_parts())
}

/// Moves `b` along a basis direction so the pair has zero defect.
pub fn compatible_pair(s: &FlatSurface, a: &PeriodTangent, b: &PeriodTangent) -> PeriodTangent {
    let defect = period_defect(s, a, b);
    if defect.is_zero() {
        return b.clone();
    }
    let i = Complex::new(rat(0), rat(1));
    for row in tangent_basis(s) {
        let real = PeriodTangent::new(row.iter().map(|x| Complex::new(x.clone(), rat(0))).collect());
        for aux in [real.clone(), real.times(&i)] {
            let k = period_defect(s, a, &aux);
            if !k.is_zero() {
                let t = -&defect / k;
                return b.plus(&aux.times(&Complex::new(t, rat(0))));
            }
        }
    }
    unreachable!("a nonzero defect has a direction that changes it")
}
