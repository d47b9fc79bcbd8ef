use num_traits::Signed;

use super::delaunay::heights;
use super::surface::FlatSurface;
use super::tangent::PeriodTangent;
use super::FlatError;
use crate::ordgroup::Rat;
use crate::track::TrainTrack;

/// The track dual to a flat triangulation. Branch `b` crosses edge `b`.
#[derive(Debug, Clone)]
pub struct DualTrack {
    pub track: TrainTrack,
    /// Side of each triangle carrying the outgoing branch.
    pub out: Vec<usize>,
    pub heights: Vec<Rat>,
}

/// One switch per triangle with the tallest edge outgoing.
pub fn dual_track(s: &FlatSurface) -> Result<DualTrack, FlatError> {
    let h = heights(s)?;
    let tri = s.triangulation();
    let out = (0..s.triangle_count())
        .map(|t| {
            let e = tri.triangle_edges(t);
            (0..3).max_by(|&a, &b| h[e[a]].cmp(&h[e[b]])).expect("three sides")
        })
        .collect::<Vec<_>>();
    let track = TrainTrack::dual_of(tri, &out)?;
    Ok(DualTrack { track, out, heights: h })
}

/// Derivative of the heights along a tangent: `Im δ` with every edge read in
/// the direction where its vector points up.
pub fn d_f(s: &FlatSurface, psi: &PeriodTangent) -> Result<Vec<Rat>, FlatError> {
    psi.check(s)?;
    heights(s)?;
    Ok((0..s.edge_count())
        .map(|e| {
            let d = psi.deltas[e].im.clone();
            if s.edge_vector(e).im.is_positive() {
                d
            } else {
                -d
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{lshape_h2, square_torus};
    use crate::flatsurf::{delaunay, find_rotation, rotate, scaling_tangent, tangent_basis, PeriodTangent};
    use crate::ordgroup::rat;
    use crate::track::{cycle_pairing, switch_check, thurston_form, weight_space_basis};
    use num_complex::Complex;

    fn rotated(s: &FlatSurface) -> FlatSurface {
        rotate(s, &find_rotation(s)).unwrap()
    }

    #[test]
    fn heights_satisfy_switches() {
        let s = rotated(&delaunay(&lshape_h2()));
        let d = dual_track(&s).unwrap();
        assert_eq!((d.track.switch_count(), d.track.branch_count()), (6, 9));
        assert!(switch_check(&d.track, &d.heights).unwrap());
        assert_eq!(weight_space_basis(&d.track).len(), 4);
    }

    #[test]
    fn translation_tracks_orient_upward() {
        let s = rotated(&square_torus());
        let d = dual_track(&s).unwrap();
        let signs = d.track.orientation().expect("orientable");
        let ends = d.track.oriented_ends(&signs);
        // Each branch leaves the triangle on the same side of its upward edge.
        let agree: Vec<bool> = (0..s.edge_count())
            .map(|e| {
                let (tail, _) = ends[e];
                let t = tail.0;
                let side = s.triangulation().edge_sides(e).iter().copied().find(|x| x.0 == t).unwrap();
                s.side_vector(side).im.is_positive()
            })
            .collect();
        assert!(agree.iter().all(|x| *x == agree[0]));
    }

    #[test]
    fn d_f_examples() {
        let s = rotated(&lshape_h2());
        let z = scaling_tangent(&s);
        assert_eq!(d_f(&s, &z).unwrap(), heights(&s).unwrap());
        let iz = z.times(&Complex::new(rat(0), rat(1)));
        let df = d_f(&s, &iz).unwrap();
        for e in 0..s.edge_count() {
            let v = s.edge_vector(e);
            let want = if v.im.is_positive() { v.re.clone() } else { -v.re.clone() };
            assert_eq!(df[e], want);
        }
        let d = dual_track(&s).unwrap();
        for b in tangent_basis(&s) {
            let psi = PeriodTangent::new(b.iter().map(|x| Complex::new(x.clone(), x * rat(3))).collect());
            assert!(switch_check(&d.track, &d_f(&s, &psi).unwrap()).unwrap());
        }
    }

    #[test]
    fn cycle_pairing_matches_thurston_on_delaunay_track() {
        let s = rotated(&delaunay(&lshape_h2()));
        let tau = dual_track(&s).unwrap().track;
        let basis = weight_space_basis(&tau);
        assert_eq!(basis.len(), 4);
        let mut nonzero = false;
        for a in &basis {
            for b in &basis {
                let th = thurston_form(&tau, a, b).unwrap();
                nonzero |= th != rat(0);
                assert_eq!(cycle_pairing(&tau, a, b).unwrap(), th);
            }
        }
        assert!(nonzero);
    }
}
