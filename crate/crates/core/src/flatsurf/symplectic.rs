use std::collections::VecDeque;

use num_complex::Complex;
use num_traits::Zero;

use super::cover::{lift_tangent, orientation_double_cover};
use super::dual::{d_f, dual_track};
use super::surface::{half, Cx, FlatSurface, SurfaceKind};
use super::tangent::PeriodTangent;
use super::FlatError;
use crate::linalg::solve;
use crate::ordgroup::{rat, Rat};
use crate::track::{thurston_form, SurfaceTriangulation};

/// Thurston form of the height derivatives on the dual track.
pub fn omega_thurston(s: &FlatSurface, a: &PeriodTangent, b: &PeriodTangent) -> Result<Rat, FlatError> {
    let tau = dual_track(s)?.track;
    Ok(thurston_form(&tau, &d_f(s, a)?, &d_f(s, b)?)?)
}

/// An edge traversed along (`true`) or against its reference direction.
type Step = (usize, bool);

/// A half-edge: an edge at its start (`true`) or end.
type HalfEdge = (usize, bool);

struct Homology<'a> {
    tri: &'a SurfaceTriangulation,
}

impl Homology<'_> {
    fn first(&self, side: (usize, usize)) -> bool {
        self.tri.edge_sides(self.tri.edge_of(side))[0] == side
    }

    /// Next half-edge counterclockwise around the shared vertex.
    fn next_ccw(&self, (e, at_start): HalfEdge) -> HalfEdge {
        let side = self.tri.edge_sides(e)[usize::from(!at_start)];
        let prev = (side.0, (side.1 + 2) % 3);
        (self.tri.edge_of(prev), !self.first(prev))
    }

    /// Tree-cotree cycles, one per edge outside both spanning forests.
    fn basis(&self) -> Vec<Vec<Step>> {
        let tri = self.tri;
        let nv = tri.vertex_count();
        let mut parent: Vec<Option<Step>> = vec![None; nv];
        let mut seen = vec![false; nv];
        let mut in_tree = vec![false; tri.edge_count()];
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for e in 0..tri.edge_count() {
            let (a, b) = tri.edge_endpoints(e);
            incident[a].push(e);
            incident[b].push(e);
        }
        for root in 0..nv {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &e in &incident[v] {
                    let (a, b) = tri.edge_endpoints(e);
                    let (w, step) = if a == v { (b, (e, false)) } else { (a, (e, true)) };
                    if !seen[w] {
                        seen[w] = true;
                        in_tree[e] = true;
                        // Step from w toward its parent.
                        parent[w] = Some(step);
                        queue.push_back(w);
                    }
                }
            }
        }
        let nt = tri.triangle_count();
        let mut tseen = vec![false; nt];
        let mut in_cotree = vec![false; tri.edge_count()];
        for root in 0..nt {
            if tseen[root] {
                continue;
            }
            tseen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(t) = queue.pop_front() {
                for e in tri.triangle_edges(t) {
                    if in_tree[e] {
                        continue;
                    }
                    for &(u, _) in tri.edge_sides(e) {
                        if !tseen[u] {
                            tseen[u] = true;
                            in_cotree[e] = true;
                            queue.push_back(u);
                        }
                    }
                }
            }
        }
        let to_root = |mut v: usize| {
            let mut path = Vec::new();
            while let Some((e, fwd)) = parent[v] {
                path.push((e, fwd));
                let (a, b) = tri.edge_endpoints(e);
                v = if fwd { b } else { a };
            }
            path
        };
        (0..tri.edge_count())
            .filter(|&e| !in_tree[e] && !in_cotree[e])
            .map(|e| {
                let (a, b) = tri.edge_endpoints(e);
                let mut up = to_root(b);
                let mut down: Vec<Step> = to_root(a).into_iter().rev().map(|(x, f)| (x, !f)).collect();
                // Drop the shared part of the two root paths.
                while let (Some(x), Some(y)) = (up.last(), down.first()) {
                    if x.0 == y.0 {
                        up.pop();
                        down.remove(0);
                    } else {
                        break;
                    }
                }
                let mut walk = vec![(e, true)];
                walk.extend(up);
                walk.extend(down);
                walk
            })
            .collect()
    }

    /// `γ · c` for a closed walk `c` and a cycle `γ` given by its outward
    /// flow at each half-edge: `γ` against the right push-off of `c`.
    fn intersect(&self, outflow: &dyn Fn(HalfEdge) -> Rat, c: &[Step]) -> Rat {
        let k = c.len();
        let mut total = Rat::zero();
        for i in 0..k {
            let (e_in, f_in) = c[i];
            let (e_out, f_out) = c[(i + 1) % k];
            let h_in = (e_in, !f_in);
            let h_out = (e_out, f_out);
            let mut h = self.next_ccw(h_in);
            while h != h_out {
                total += outflow(h);
                h = self.next_ccw(h);
            }
        }
        total
    }
}

fn walk_flow(walk: &[Step]) -> impl Fn(HalfEdge) -> Rat + '_ {
    move |(e, at_start): HalfEdge| {
        walk.iter().filter(|s| s.0 == e).fold(Rat::zero(), |acc, &(_, fwd)| if fwd == at_start { acc + rat(1) } else { acc - rat(1) })
    }
}

fn period(walk: &[Step], w: &[Rat]) -> Rat {
    walk.iter().fold(Rat::zero(), |acc, &(e, fwd)| if fwd { acc + &w[e] } else { acc - &w[e] })
}

/// `∫ Im θ₁ ∧ Im θ₂` from the periods on a homology basis and the exact
/// intersection matrix of that basis.
pub fn omega_homological(s: &FlatSurface, a: &PeriodTangent, b: &PeriodTangent) -> Result<Rat, FlatError> {
    if s.kind() != SurfaceKind::Translation {
        return Err(FlatError::HalfTranslation);
    }
    a.check(s)?;
    b.check(s)?;
    let h = Homology { tri: s.triangulation() };
    let basis = h.basis();
    let m = basis.len();
    if m == 0 {
        return Ok(Rat::zero());
    }
    // Row j, column i: γ_i · γ_j, the transpose of the intersection matrix.
    let mut it = vec![vec![Rat::zero(); m]; m];
    for (i, gi) in basis.iter().enumerate() {
        let f = walk_flow(gi);
        for (j, gj) in basis.iter().enumerate() {
            it[j][i] = h.intersect(&f, gj);
        }
    }
    let p: Vec<Rat> = basis.iter().map(|g| period(g, &a.im_parts())).collect();
    let q: Vec<Rat> = basis.iter().map(|g| period(g, &b.im_parts())).collect();
    let x = solve(&it, &q, m).ok_or_else(|| FlatError::Structure("degenerate intersection matrix".into()))?;
    Ok(p.iter().zip(&x).map(|(u, v)| u * v).sum())
}

fn area_form(s: &FlatSurface, z: &[Cx]) -> Rat {
    let tri = s.triangulation();
    let side = |t: usize, i: usize| &z[tri.edge_of((t, i))] * rat(s.side_orientation((t, i)));
    (0..s.triangle_count()).map(|t| (side(t, 0).conj() * side(t, 1)).im.clone()).sum::<Rat>() * half()
}

/// `Im L(δ₁, δ₂)` where `L` is the Levi form of the area as a function of the
/// edge vectors, read off by polarization.
pub fn omega_hessian(s: &FlatSurface, a: &PeriodTangent, b: &PeriodTangent) -> Result<Rat, FlatError> {
    a.check(s)?;
    b.check(s)?;
    let i = Complex::new(rat(0), rat(1));
    let levi_diag = |z: Vec<Cx>| {
        let iz: Vec<Cx> = z.iter().map(|x| x * &i).collect();
        (area_form(s, &z) + area_form(s, &iz)) * half()
    };
    let combo = |sign: i64| -> Vec<Cx> {
        a.deltas.iter().zip(&b.deltas).map(|(x, y)| x + y * &i * rat(sign)).collect()
    };
    Ok((levi_diag(combo(1)) - levi_diag(combo(-1))) / rat(4))
}

/// One exact way to pair two period tangents.
pub trait SymplecticRoute: Sync {
    fn name(&self) -> &'static str;
    fn pairing(&self, s: &FlatSurface, a: &PeriodTangent, b: &PeriodTangent) -> Result<Rat, FlatError>;
}

pub struct ThurstonRoute;
pub struct HomologicalRoute;
pub struct HessianRoute;

impl SymplecticRoute for ThurstonRoute {
    fn name(&self) -> &'static str {
        "thurston"
    }

    fn pairing(&self, s: &FlatSurface, a: &PeriodTangent, b: &PeriodTangent) -> Result<Rat, FlatError> {
        omega_thurston(s, a, b)
    }
}

impl SymplecticRoute for HomologicalRoute {
    fn name(&self) -> &'static str {
        "homological"
    }

    /// Half-translation surfaces are paired on the orientation double cover
    /// and halved.
    fn pairing(&self, s: &FlatSurface, a: &PeriodTangent, b: &PeriodTangent) -> Result<Rat, FlatError> {
        if s.kind() == SurfaceKind::Translation {
            return omega_homological(s, a, b);
        }
        a.check(s)?;
        b.check(s)?;
        let cover = orientation_double_cover(s);
        let (la, lb) = (lift_tangent(s, &cover, a), lift_tangent(s, &cover, b));
        Ok(omega_homological(&cover.surface, &la, &lb)? * half())
    }
}

impl SymplecticRoute for HessianRoute {
    fn name(&self) -> &'static str {
        "hessian"
    }

    fn pairing(&self, s: &FlatSurface, a: &PeriodTangent, b: &PeriodTangent) -> Result<Rat, FlatError> {
        omega_hessian(s, a, b)
    }
}

pub static ROUTES: &[&dyn SymplecticRoute] = &[&ThurstonRoute, &HomologicalRoute, &HessianRoute];

pub fn route(name: &str) -> Option<&'static dyn SymplecticRoute> {
    ROUTES.iter().copied().find(|r| r.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{hex_torus, lshape_h2, square_torus};
    use crate::flatsurf::{
        compatible_pair, cup, delaunay, find_rotation, period_defect, random_tangent, rotate, scaling_tangent,
    };
    use num_traits::Signed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn prepared(s: &FlatSurface) -> FlatSurface {
        let d = delaunay(s);
        rotate(&d, &find_rotation(&d)).unwrap()
    }

    #[test]
    fn homological_matches_cup_on_random_tangents() {
        for s in [square_torus(), lshape_h2(), hex_torus()] {
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            for _ in 0..10 {
                let a = random_tangent(&s, &mut rng, 6);
                let b = random_tangent(&s, &mut rng, 6);
                assert_eq!(omega_homological(&s, &a, &b).unwrap(), cup(&s, &a.im_parts(), &b.im_parts()));
            }
        }
    }

    #[test]
    fn square_torus_scaling_pairs() {
        let s = square_torus();
        let z = scaling_tangent(&s);
        let iz = z.times(&Complex::new(rat(0), rat(1)));
        assert_eq!(omega_homological(&s, &z, &iz).unwrap(), rat(-1));
        assert_eq!(omega_hessian(&s, &z, &iz).unwrap(), rat(-1));
        let half_z = z.times(&Complex::new(half(), rat(0)));
        let half_iz = half_z.times(&Complex::new(rat(0), rat(1)));
        assert_eq!(omega_hessian(&s, &half_z, &half_iz).unwrap().abs(), Rat::new(1.into(), 4.into()));
        assert!(omega_hessian(&s, &z, &z).unwrap().is_zero());
        assert!(omega_homological(&s, &z, &z).unwrap().is_zero());
    }

    #[test]
    fn routes_agree_on_compatible_pairs() {
        for base in [lshape_h2(), hex_torus()] {
            let s = prepared(&base);
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..5 {
                let a = random_tangent(&s, &mut rng, 5);
                let b = compatible_pair(&s, &a, &random_tangent(&s, &mut rng, 5));
                let vals: Vec<Rat> = ROUTES.iter().map(|r| r.pairing(&s, &a, &b).unwrap()).collect();
                assert!(vals.iter().all(|v| *v == vals[0]), "{vals:?}");
            }
        }
    }

    #[test]
    fn hessian_differs_by_half_the_defect() {
        let s = prepared(&lshape_h2());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen_gap = false;
        for _ in 0..10 {
            let a = random_tangent(&s, &mut rng, 5);
            let b = random_tangent(&s, &mut rng, 5);
            let th = omega_thurston(&s, &a, &b).unwrap();
            let he = omega_hessian(&s, &a, &b).unwrap();
            let defect = period_defect(&s, &a, &b);
            assert_eq!(he - &th, defect.clone() * half());
            seen_gap |= !defect.is_zero();
        }
        assert!(seen_gap);
    }

    #[test]
    fn registry_lookup_and_half_translation_guard() {
        assert_eq!(route("hessian").unwrap().name(), "hessian");
        assert!(route("nope").is_none());
        let p = crate::fixtures::pillowcase();
        let z = scaling_tangent(&p);
        assert!(matches!(omega_homological(&p, &z, &z), Err(FlatError::HalfTranslation)));
    }

    #[test]
    fn half_translation_routes_agree_through_the_cover() {
        let s = prepared(&crate::fixtures::pillowcase());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut nonzero = false;
        for _ in 0..5 {
            let a = random_tangent(&s, &mut rng, 5);
            let b = compatible_pair(&s, &a, &random_tangent(&s, &mut rng, 5));
            let vals: Vec<Rat> = ROUTES.iter().map(|r| r.pairing(&s, &a, &b).unwrap()).collect();
            assert!(vals.iter().all(|v| *v == vals[0]), "{vals:?}");
            nonzero |= !vals[0].is_zero();
        }
        assert!(nonzero);
    }
}
