use num_traits::Zero;

use super::surface::SurfaceTriangulation;
use super::traintrack::{check_len, switch_check, Slot, TrainTrack, WeightVec};
use super::TrackError;
use crate::ordgroup::Rat;

/// Weights on the undirected edges of a triangulation, in edge order.
pub type TriWeight = Vec<Rat>;

fn half() -> Rat {
    Rat::new(1.into(), 2.into())
}

/// `½ Σ_v det[[w₁(a), w₁(b)], [w₂(a), w₂(b)]]` over switches, with `(a, b)`
/// the incoming pair in positive order.
pub fn thurston_form(tau: &TrainTrack, w1: &[Rat], w2: &[Rat]) -> Result<Rat, TrackError> {
    for w in [w1, w2] {
        if !switch_check(tau, w)? {
            return Err(TrackError::InvalidWeight("switch relation fails".into()));
        }
    }
    let mut sum = Rat::zero();
    for sw in tau.switches() {
        let (a, b) = sw.positive_incoming();
        sum += &w1[a] * &w2[b] - &w1[b] * &w2[a];
    }
    Ok(sum * half())
}

/// `-½ (de∧df + df∧dg + dg∧de)` evaluated on `(u, v)` for sides `(e, f, g)`.
pub fn triangle_form(edges: [usize; 3], u: &[Rat], v: &[Rat]) -> Rat {
    let wedge = |x: usize, y: usize| &u[x] * &v[y] - &u[y] * &v[x];
    let [e, f, g] = edges;
    -(wedge(e, f) + wedge(f, g) + wedge(g, e)) * half()
}

pub fn triangle_form_sum(surface: &SurfaceTriangulation, u: &[Rat], v: &[Rat]) -> Result<Rat, TrackError> {
    for w in [u, v] {
        if w.len() != surface.edge_count() {
            return Err(TrackError::MissingWeight { expected: surface.edge_count(), got: w.len() });
        }
    }
    Ok((0..surface.triangle_count()).fold(Rat::zero(), |acc, t| acc + triangle_form(surface.triangle_edges(t), u, v)))
}

/// A triangulation dual to a maximal track, with `edge_of_branch[b]` the
/// edge crossed by branch `b`.
#[derive(Debug, Clone)]
pub struct DualTriangulation {
    pub surface: SurfaceTriangulation,
    pub edge_of_branch: Vec<usize>,
}

/// One triangle per switch, sides in the switch's positive cyclic order, one
/// edge per branch. Fails unless every complementary region is a trigon.
pub fn dual_triangulation(tau: &TrainTrack) -> Result<DualTriangulation, TrackError> {
    let side_name = |sw: usize, s: Slot| {
        let b = tau.branch_at((sw, s));
        let label = &tau.branches()[b];
        if tau.ends(b)[0] == (sw, s) {
            label.clone()
        } else {
            format!("{label}'")
        }
    };
    let triangles = tau
        .switches()
        .iter()
        .enumerate()
        .map(|(v, sw)| (sw.id.clone(), sw.rotation().map(|s| side_name(v, s))))
        .collect();
    let glues: Vec<(String, String)> = (0..tau.branch_count())
        .map(|b| {
            let [x, y] = tau.ends(b);
            (side_name(x.0, x.1), side_name(y.0, y.1))
        })
        .collect();
    let surface = SurfaceTriangulation::new(triangles, &glues)?;

    // The cusp of a switch sits at the triangle corner between its two incoming sides.
    let mut cusps = vec![0usize; surface.vertex_count()];
    for (t, sw) in tau.switches().iter().enumerate() {
        let rot = sw.rotation();
        let k = rot.iter().position(|&s| s == Slot::C).expect("outgoing slot");
        cusps[surface.corner_vertex(t, (k + 2) % 3)] += 1;
    }
    if let Some(v) = cusps.iter().position(|&c| c != 3) {
        return Err(TrackError::NotMaximal(format!("a complementary region has {} cusps", cusps[v])));
    }
    let edge_of_branch = tau
        .branches()
        .iter()
        .map(|b| surface.edge_index(b).expect("edge labelled by its branch"))
        .collect();
    Ok(DualTriangulation { surface, edge_of_branch })
}

pub fn embed_weights(tau: &TrainTrack, dual: &DualTriangulation, w: &[Rat]) -> Result<TriWeight, TrackError> {
    check_len(tau, w)?;
    if !switch_check(tau, w)? {
        return Err(TrackError::InvalidWeight("switch relation fails".into()));
    }
    let mut out = vec![Rat::zero(); dual.surface.edge_count()];
    for (b, &e) in dual.edge_of_branch.iter().enumerate() {
        out[e] = w[b].clone();
    }
    Ok(out)
}

/// Pairing matrix of the Thurston form on a basis.
pub fn thurston_matrix(tau: &TrainTrack, basis: &[WeightVec]) -> Result<Vec<Vec<Rat>>, TrackError> {
    basis
        .iter()
        .map(|x| basis.iter().map(|y| thurston_form(tau, x, y)).collect())
        .collect()
}
