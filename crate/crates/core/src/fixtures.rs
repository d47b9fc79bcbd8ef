//! Named example inputs used by tests, the acceptance suite, and the CLI.

use std::collections::HashMap;

use num_complex::Complex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone3::{self, product_triangulation, ConeProblem, ProductTriangulation, Triangulation3};
use crate::flatsurf::{
    compatible_pair, cx, delaunay, find_rotation, random_tangent, rotate, Cx, FlatSurface, GlueSign, SurfaceKind,
};
use crate::formats::{write_flat, write_manifold, write_surface, write_track, write_tree, FlatDoc, ManifoldDoc};
use crate::lamtree::MetricTree;
use crate::linalg::{point_with_floors, Subspace};
use crate::ordgroup::{rat, Rat};
use crate::track::{weight_space_basis, SurfaceTriangulation, TrainTrack, WeightVec};

fn strs<const N: usize>(xs: [&str; N]) -> [String; N] {
    xs.map(str::to_string)
}

fn pairs(xs: &[(&str, &str)]) -> Vec<(String, String)> {
    xs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn genus2_fan() -> (Vec<(String, [String; 3])>, Vec<(String, String)>) {
    let side = |k: usize| format!("s{k}");
    let mut tris = Vec::new();
    for k in 1..=6usize {
        let first = if k == 1 { side(0) } else { format!("D{k}") };
        let last = if k == 6 { side(7) } else { format!("D{}r", k + 1) };
        tris.push((format!("T{k}"), [first, side(k), last]));
    }
    let mut glues = pairs(&[("s0", "s2"), ("s1", "s3"), ("s4", "s6"), ("s5", "s7")]);
    for k in 2..=6 {
        glues.push((format!("D{k}"), format!("D{k}r")));
    }
    (tris, glues)
}

/// Genus 2 from the octagon `a b a⁻¹ b⁻¹ c d c⁻¹ d⁻¹` fanned from one corner:
/// one vertex, nine edges, six triangles.
pub fn genus2_one_vertex() -> SurfaceTriangulation {
    let (tris, glues) = genus2_fan();
    SurfaceTriangulation::new(tris, &glues).expect("valid fixture")
}

/// The one-vertex genus-2 triangulation with its first three triangles
/// stellar-subdivided: four vertices, eighteen edges, twelve triangles.
pub fn genus2_surface() -> SurfaceTriangulation {
    let (base, mut glues) = genus2_fan();
    let mut tris = Vec::new();
    for (t, (id, sides)) in base.into_iter().enumerate() {
        if t < 3 {
            for i in 0..3 {
                tris.push((
                    format!("{id}.{i}"),
                    [sides[i].clone(), format!("{id}:s{}", (i + 1) % 3), format!("{id}:r{i}")],
                ));
            }
            for j in 0..3 {
                glues.push((format!("{id}:s{j}"), format!("{id}:r{j}")));
            }
        } else {
            tris.push((id, sides));
        }
    }
    SurfaceTriangulation::new(tris, &glues).expect("valid fixture")
}

/// Out sides of the maximal genus-2 track on [`genus2_surface`].
pub fn genus2_track_out() -> Vec<usize> {
    vec![0; 12]
}

/// A maximal generic train track on the closed genus-2 surface, dual to
/// [`genus2_surface`].
pub fn genus2_maximal_track() -> TrainTrack {
    TrainTrack::dual_of(&genus2_surface(), &genus2_track_out()).expect("valid fixture")
}

/// Boundary of a tetrahedron `[0123]`.
pub fn tetrahedron_sphere() -> SurfaceTriangulation {
    SurfaceTriangulation::new(
        vec![
            ("f0".into(), strs(["12", "23", "31"])),
            ("f1".into(), strs(["03", "32", "20"])),
            ("f2".into(), strs(["01", "13", "30"])),
            ("f3".into(), strs(["02", "21", "10"])),
        ],
        &pairs(&[("12", "21"), ("23", "32"), ("31", "13"), ("03", "30"), ("20", "02"), ("01", "10")]),
    )
    .expect("valid fixture")
}

/// Four tetrahedra coning the boundary of a tetrahedron to an interior point.
pub fn tet4() -> Triangulation3 {
    cone3::cone_over(&tetrahedron_sphere()).expect("valid fixture")
}

/// Twelve tetrahedra coning [`genus2_surface`] to a point.
pub fn cone_g2() -> Triangulation3 {
    cone3::cone_over(&genus2_surface()).expect("valid fixture")
}

/// `Σ₂ × I` over [`genus2_surface`].
pub fn g2_product() -> ProductTriangulation {
    product_triangulation(&genus2_surface()).expect("valid fixture")
}

/// Out sides on the boundary of [`cone_g2`] matching the maximal track.
pub fn cone_g2_out(tri: &Triangulation3) -> Vec<Option<usize>> {
    let out = genus2_track_out();
    let b = tri.boundary();
    (0..b.triangle_count())
        .map(|bt| {
            let (t, _) = tri.boundary_faces()[bt];
            let i = out[t];
            let cls = tri.tet_edges(t)[cone3::local_edge(i, (i + 1) % 3)];
            (0..3).find(|&k| tri.boundary_edge_class()[b.edge_of((bt, k))] == cls)
        })
        .collect()
}

/// Segment `(a, b)` between polygon points.
type Seg = (usize, usize);

/// A flat surface from a triangulated plane polygon: interior diagonals are
/// glued to themselves, `pairs` glues boundary segments, and each gluing's
/// sign is read off the vectors.
fn polygon_surface(kind: SurfaceKind, points: &[(i64, i64)], tris: &[[usize; 3]], pairs: &[(Seg, Seg)]) -> FlatSurface {
    let name = |(a, b): Seg| format!("p{a}p{b}");
    let vec = |(a, b): Seg| cx(points[b].0 - points[a].0, points[b].1 - points[a].1);
    let mut triangles = Vec::new();
    let mut vectors: Vec<(String, Cx)> = Vec::new();
    let mut present = HashMap::new();
    for (k, t) in tris.iter().enumerate() {
        let segs = [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])];
        triangles.push((format!("T{k}"), segs.map(name)));
        for sg in segs {
            vectors.push((name(sg), vec(sg)));
            present.insert(sg, ());
        }
    }
    let sign = |a: Seg, b: Seg| if vec(a) == -vec(b) { GlueSign::Neg } else { GlueSign::Pos };
    let mut glues: Vec<(String, String, GlueSign)> = Vec::new();
    for t in tris {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            if a < b && present.contains_key(&(b, a)) {
                glues.push((name((a, b)), name((b, a)), GlueSign::Neg));
            }
        }
    }
    for &(x, y) in pairs {
        glues.push((name(x), name(y), sign(x, y)));
    }
    FlatSurface::new(kind, triangles, &vectors, &glues).expect("valid fixture")
}

/// The unit square torus cut along the diagonal: edge vectors `(1,0)`,
/// `(0,1)`, `(-1,-1)`.
pub fn square_torus() -> FlatSurface {
    polygon_surface(
        SurfaceKind::Translation,
        &[(0, 0), (1, 0), (1, 1), (0, 1)],
        &[[0, 1, 2], [0, 2, 3]],
        &[((0, 1), (2, 3)), ((1, 2), (3, 0))],
    )
}

/// A torus from a centrally symmetric hexagon with opposite sides glued,
/// fanned from one corner. Its two vertices are marked points.
pub fn hex_torus() -> FlatSurface {
    polygon_surface(
        SurfaceKind::Translation,
        &[(0, 0), (2, 0), (3, 2), (2, 4), (0, 4), (-1, 2)],
        &[[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5]],
        &[((0, 1), (3, 4)), ((1, 2), (4, 5)), ((2, 3), (5, 0))],
    )
}

/// Three unit squares in an L: genus 2 with a single cone point of angle 6π.
pub fn lshape_h2() -> FlatSurface {
    polygon_surface(
        SurfaceKind::Translation,
        &[(0, 0), (1, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2), (0, 1)],
        &[[0, 1, 3], [1, 2, 3], [0, 3, 4], [0, 4, 7], [7, 4, 5], [7, 5, 6]],
        &[((0, 1), (5, 6)), ((1, 2), (3, 4)), ((2, 3), (7, 0)), ((4, 5), (6, 7))],
    )
}

/// [`lshape_h2`] under the shear `(x, y) ↦ (x + k y, y)`.
pub fn sheared_lshape(k: &Rat) -> FlatSurface {
    lshape_h2().map_vectors(|z| Complex::new(&z.re + k * &z.im, z.im.clone())).expect("shears keep orientation")
}

/// [`lshape_h2`] sheared until its triangles are far from Delaunay.
pub fn lshape_bad_diagonal() -> FlatSurface {
    sheared_lshape(&Rat::from_integer(3.into()))
}

/// The pillowcase: a `2 × 1` rectangle folded into a sphere with four cone
/// points of angle π.
pub fn pillowcase() -> FlatSurface {
    polygon_surface(
        SurfaceKind::HalfTranslation,
        &[(0, 0), (1, 0), (2, 0), (2, 1), (1, 1), (0, 1)],
        &[[0, 1, 4], [1, 2, 3], [1, 3, 4], [0, 4, 5]],
        &[((0, 1), (1, 2)), ((3, 4), (4, 5)), ((2, 3), (5, 0))],
    )
}

/// A two-triangle torus with edge vectors `(1,1)`, `(-2,1)`, `(1,-2)`.
pub fn tall_torus() -> FlatSurface {
    let (a, b, c) = (cx(1, 1), cx(-2, 1), cx(1, -2));
    let s = |x: &str| x.to_string();
    FlatSurface::new(
        SurfaceKind::Translation,
        vec![(s("T0"), [s("a"), s("b"), s("c")]), (s("T1"), [s("a'"), s("b'"), s("c'")])],
        &[(s("a"), a.clone()), (s("b"), b.clone()), (s("c"), c.clone()), (s("a'"), -a), (s("b'"), -b), (s("c'"), -c)],
        &[(s("a"), s("a'"), GlueSign::Neg), (s("b"), s("b'"), GlueSign::Neg), (s("c"), s("c'"), GlueSign::Neg)],
    )
    .expect("valid fixture")
}

/// A point of the measure cone of `tau`: a vertex of `{w ∈ W(τ) : w ≥ floor}`
/// for random integer floors. `None` when the track carries no positive measure.
pub fn random_measure<R: Rng>(tau: &TrainTrack, rng: &mut R) -> Option<WeightVec> {
    let space = Subspace::span(tau.branch_count(), weight_space_basis(tau));
    let floors: Vec<(usize, Rat)> = (0..tau.branch_count()).map(|i| (i, rat(rng.gen_range(0..=4)))).collect();
    point_with_floors(&space, &floors)
}

/// Boundary weights putting `w` on both ends of a product, for a cone problem
/// whose boundary track is `w`'s track on each level.
pub fn product_diagonal(p: &ProductTriangulation, problem: &ConeProblem, w: &[Rat]) -> Vec<Rat> {
    problem
        .branch_class()
        .iter()
        .map(|&c| w[p.class_projection[c].expect("boundary edges lie over surface edges")].clone())
        .collect()
}

/// [`lshape_h2`] made Delaunay and rotated off the horizontal.
pub fn lshape_prepared() -> FlatSurface {
    let d = delaunay(&lshape_h2());
    rotate(&d, &find_rotation(&d)).expect("nonzero multiplier")
}

pub const FIXTURE_NAMES: &[&str] = &[
    "square_torus",
    "hex_torus",
    "lshape_h2",
    "lshape_bad_diagonal",
    "pillowcase",
    "tall_torus",
    "lshape_h2_tangents",
    "genus2_surface",
    "genus2_track",
    "single_tet",
    "two_tets",
    "tet4",
    "cone_g2",
    "g2_product",
    "g2_diagonal",
    "tree",
];

fn flat(s: FlatSurface) -> String {
    write_flat(&FlatDoc { surface: s, tangents: Vec::new() })
}

fn manifold(tri: Triangulation3, out: Option<Vec<Option<usize>>>) -> String {
    write_manifold(&ManifoldDoc { tri, out, weights: Vec::new() })
}

/// The named fixture in its text format.
pub fn fixture_document(name: &str) -> Option<String> {
    Some(match name {
        "square_torus" => flat(square_torus()),
        "hex_torus" => flat(hex_torus()),
        "lshape_h2" => flat(lshape_h2()),
        "lshape_bad_diagonal" => flat(lshape_bad_diagonal()),
        "pillowcase" => flat(pillowcase()),
        "tall_torus" => flat(tall_torus()),
        "lshape_h2_tangents" => {
            let s = lshape_prepared();
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            let a = random_tangent(&s, &mut rng, 3);
            let b = random_tangent(&s, &mut rng, 3);
            let b = compatible_pair(&s, &a, &b);
            write_flat(&FlatDoc { surface: s, tangents: vec![a, b] })
        }
        "genus2_surface" => write_surface(&genus2_surface()),
        "genus2_track" => write_track(&genus2_maximal_track()),
        "single_tet" => manifold(cone3::single_tetrahedron(), None),
        "two_tets" => manifold(cone3::two_tetrahedra(), None),
        "tet4" => manifold(tet4(), None),
        "cone_g2" => {
            let tri = cone_g2();
            let out = cone_g2_out(&tri);
            manifold(tri, Some(out))
        }
        "g2_product" | "g2_diagonal" => {
            let p = g2_product();
            let out = p.boundary_out(&genus2_surface(), &genus2_track_out()).expect("matching tracks");
            let mut weights = Vec::new();
            if name == "g2_diagonal" {
                let problem = ConeProblem::new(&p.tri, &out).expect("valid track");
                let tau = genus2_maximal_track();
                let w = random_measure(&tau, &mut ChaCha8Rng::seed_from_u64(1)).expect("recurrent track");
                let d = product_diagonal(&p, &problem, &w);
                weights = problem.track().branches().iter().cloned().zip(d).collect();
            }
            write_manifold(&ManifoldDoc { tri: p.tri, out: Some(out), weights })
        }
        "tree" => write_tree(&MetricTree::random(&mut ChaCha8Rng::seed_from_u64(1), 6, 2, true)),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::track::{dual_triangulation, weight_space_basis};

    #[test]
    fn genus2_fixtures() {
        let s1 = genus2_one_vertex();
        assert_eq!((s1.vertex_count(), s1.edge_count(), s1.triangle_count()), (1, 9, 6));
        let s = genus2_surface();
        assert_eq!((s.vertex_count(), s.edge_count(), s.triangle_count()), (4, 18, 12));
        assert_eq!(s.genus().unwrap(), 2);
        let tau = genus2_maximal_track();
        assert_eq!(weight_space_basis(&tau).len(), 6);
        let d = dual_triangulation(&tau).unwrap();
        assert_eq!((d.surface.triangle_count(), d.surface.edge_count(), d.surface.vertex_count()), (12, 18, 4));
    }

    #[test]
    fn three_manifold_fixtures() {
        assert_eq!(tet4().report().boundary_components, vec![(0, false)]);
        assert_eq!(tet4().tet_count(), 4);
        let c = cone_g2();
        assert_eq!(c.boundary().genus().unwrap(), 2);
        let p = g2_product();
        assert_eq!(p.tri.tet_count(), 36);
        assert_eq!(p.tri.report().boundary_components, vec![(2, false), (2, false)]);
    }

    #[test]
    fn every_named_fixture_renders() {
        for name in FIXTURE_NAMES {
            assert!(fixture_document(name).is_some_and(|d| !d.is_empty()), "{name}");
        }
        assert!(fixture_document("nope").is_none());
    }
}
