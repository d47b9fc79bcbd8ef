use isocone::cone3::{
    all_choices, choice_row, isotropy_check, omega_m, opposite_pairs, product_triangulation, restrict,
    single_tetrahedron, subspace_is_isotropic, tet_face_sum_local, tet_form_local, two_tetrahedra, w4_member,
    w4_subspace, AllChoices, Cone3Error, ConeProblem, FaceGlue, Membership, SampledChoices, Triangulation3,
    TET_EDGES,
};
use isocone::fixtures::{
    cone_g2, cone_g2_out, g2_product, genus2_maximal_track, genus2_surface, genus2_track_out, product_diagonal,
    random_measure, tet4,
};
use isocone::linalg::{Row, Subspace};
use isocone::ordgroup::{rat, ratio, Rat};
use isocone::track::triangle_form_sum;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    (0..n).map(|_| rat(rng.gen_range(-9..=9))).collect()
}

fn local6(rng: &mut ChaCha8Rng) -> [Rat; 6] {
    std::array::from_fn(|_| rat(rng.gen_range(-9..=9)))
}

fn indicator(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = rat(1);
    v
}

#[test]
fn single_tetrahedron_bounds_a_sphere() {
    let r = single_tetrahedron().report();
    assert_eq!((r.tetrahedra, r.edge_classes, r.boundary_triangles), (1, 6, 4));
    assert_eq!(r.boundary_components, vec![(0, false)]);
}

#[test]
fn product_boundary_is_two_genus_two_surfaces() {
    let p = g2_product();
    let b = p.tri.boundary();
    assert_eq!(b.euler_characteristic(), -4);
    assert_eq!(p.tri.report().boundary_components, vec![(2, false), (2, false)]);
    assert_eq!(p.tri.tet_count(), 3 * genus2_surface().triangle_count());
}

#[test]
fn gluings_must_reverse_orientation() {
    let ids = vec!["A".to_string(), "B".to_string()];
    let ok = FaceGlue { t1: 0, f1: 3, t2: 1, f2: 3, images: [1, 0, 2] };
    assert!(Triangulation3::new(ids.clone(), vec![ok]).is_ok());
    let bad = FaceGlue { t1: 0, f1: 3, t2: 1, f2: 3, images: [0, 1, 2] };
    assert!(matches!(Triangulation3::new(ids.clone(), vec![bad]), Err(Cone3Error::Orientation(_))));
    let off_face = FaceGlue { t1: 0, f1: 3, t2: 1, f2: 3, images: [0, 1, 3] };
    assert!(Triangulation3::new(ids, vec![off_face]).is_err());
}

#[test]
fn opposite_pairs_partition_the_edges() {
    let pairs = opposite_pairs();
    let mut seen: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    seen.sort();
    assert_eq!(seen, (0..6).collect::<Vec<_>>());
    for (a, b) in pairs {
        let (x, y) = (TET_EDGES[a], TET_EDGES[b]);
        assert!(x.0 != y.0 && x.0 != y.1 && x.1 != y.0 && x.1 != y.1);
    }
}

fn permutations() -> Vec<([usize; 4], bool)> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut sorted = p;
                    sorted.sort();
                    if sorted == [0, 1, 2, 3] {
                        let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                        out.push((p, inversions % 2 == 0));
                    }
                }
            }
        }
    }
    out
}

fn relabel(p: &[usize; 4], w: &[Rat; 6]) -> [Rat; 6] {
    let mut out: [Rat; 6] = std::array::from_fn(|_| Rat::zero());
    for (i, &(a, b)) in TET_EDGES.iter().enumerate() {
        let (x, y) = (p[a].min(p[b]), p[a].max(p[b]));
        let j = TET_EDGES.iter().position(|&e| e == (x, y)).unwrap();
        out[j] = w[i].clone();
    }
    out
}

#[test]
fn relabeling_permutes_pairs_and_keeps_the_form() {
    let pairs = opposite_pairs();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let perms = permutations();
    assert_eq!(perms.iter().filter(|(_, even)| *even).count(), 12);
    for (p, even) in perms {
        // Images of opposite pairs are opposite pairs.
        for (a, b) in pairs {
            let img = |e: usize| {
                let (x, y) = TET_EDGES[e];
                let (x, y) = (p[x].min(p[y]), p[x].max(p[y]));
                TET_EDGES.iter().position(|&q| q == (x, y)).unwrap()
            };
            let (ia, ib) = (img(a), img(b));
            assert!(pairs.iter().any(|&(c, d)| (c, d) == (ia, ib) || (d, c) == (ia, ib)));
        }
        let (u, v) = (local6(&mut rng), local6(&mut rng));
        let before = tet_form_local(&u, &v);
        let after = tet_form_local(&relabel(&p, &u), &relabel(&p, &v));
        assert_eq!(after, if even { before } else { -before });
    }
}

#[test]
fn tet_form_examples() {
    let pairs = opposite_pairs();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let u = local6(&mut rng);
    assert!(tet_form_local(&u, &u).is_zero());
    let e: [Rat; 6] = std::array::from_fn(|i| if i == pairs[0].0 { rat(1) } else { rat(0) });
    let f: [Rat; 6] = std::array::from_fn(|i| if i == pairs[1].0 { rat(1) } else { rat(0) });
    assert_eq!(tet_form_local(&e, &f), ratio(-1, 2));
    for _ in 0..200 {
        let (u, v) = (local6(&mut rng), local6(&mut rng));
        assert_eq!(tet_form_local(&u, &v), tet_face_sum_local(&u, &v));
    }
}

#[test]
fn interior_cancels_on_glued_fixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for tri in [two_tetrahedra(), tet4(), g2_product().tri] {
        let n = tri.edge_count();
        for _ in 0..10 {
            let (u, v) = (random_weights(&mut rng, n), random_weights(&mut rng, n));
            let boundary = triangle_form_sum(tri.boundary(), &restrict(&tri, &u), &restrict(&tri, &v)).unwrap();
            assert_eq!(omega_m(&tri, &u, &v), boundary);
        }
        let interior: Vec<Rat> =
            (0..n).map(|c| if tri.is_boundary_class(c) { rat(0) } else { rat(rng.gen_range(1..9)) }).collect();
        let v = random_weights(&mut rng, n);
        assert!(omega_m(&tri, &interior, &v).is_zero());
    }
}

#[test]
fn closed_manifold_form_vanishes() {
    // Two tetrahedra glued along all four faces by the transposition (0 1).
    let ids = vec!["A".to_string(), "B".to_string()];
    let p = [1, 0, 2, 3];
    let glues = (0..4)
        .map(|f| {
            let vs: Vec<usize> = (0..4).filter(|&v| v != f).collect();
            FaceGlue { t1: 0, f1: f, t2: 1, f2: p[f], images: [p[vs[0]], p[vs[1]], p[vs[2]]] }
        })
        .collect();
    let tri = Triangulation3::new(ids, glues).unwrap();
    assert_eq!(tri.boundary().triangle_count(), 0);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = tri.edge_count();
    for _ in 0..10 {
        assert!(omega_m(&tri, &random_weights(&mut rng, n), &random_weights(&mut rng, n)).is_zero());
    }
}

#[test]
fn w4_examples() {
    let tri = single_tetrahedron();
    for c in 1..=3 {
        assert_eq!(w4_subspace(&tri, &[c]).dim(), 5);
        assert!(w4_subspace(&tri, &[c]).contains(&vec![rat(1); 6]));
    }
    let [(e, e2), (f, f2), (g, g2)] = opposite_pairs();
    let mut w = vec![rat(0); 6];
    w[e] = rat(1);
    w[e2] = rat(1);
    assert!(w4_subspace(&tri, &[2]).contains(&w));
    assert!(!w4_subspace(&tri, &[1]).contains(&w));
    assert_eq!(w4_member(&tri, &w).unwrap().per_tet, vec![vec![2]]);
    let mut w = vec![rat(0); 6];
    for (i, k) in [e, e2, f, f2, g, g2].into_iter().enumerate() {
        w[k] = rat(i as i64 + 1);
    }
    assert!(!w4_member(&tri, &w).unwrap().is_member());
    assert_eq!(w4_member(&tri, &vec![rat(0); 6]).unwrap().per_tet, vec![vec![1, 2, 3]]);
}

#[test]
fn choice_subspaces_are_isotropic() {
    let tri = single_tetrahedron();
    assert!((1..=3).all(|c| isotropy_check(&tri, &[c])));
    let tri = tet4();
    assert!(all_choices(4).all(|c| isotropy_check(&tri, &c)));
}

#[test]
fn dropping_an_equality_breaks_isotropy() {
    let tri = tet4();
    let mut broken = 0;
    for c in all_choices(4) {
        let rows: Vec<Row> = (1..4).map(|t| choice_row(&tri, t, c[t])).collect();
        let space = Subspace::from_equations(tri.edge_count(), &rows);
        let slow = {
            let b = space.basis();
            (0..b.len()).all(|i| (0..b.len()).all(|j| omega_m(&tri, &b[i], &b[j]).is_zero()))
        };
        assert_eq!(subspace_is_isotropic(&tri, &space), slow);
        broken += usize::from(!slow);
    }
    assert!(broken > 0);
}

#[test]
fn restriction_is_linear_and_forgets_the_interior() {
    let tri = tet4();
    let n = tri.edge_count();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (u, v) = (random_weights(&mut rng, n), random_weights(&mut rng, n));
    let sum: Vec<Rat> = u.iter().zip(&v).map(|(a, b)| a + b * rat(3)).collect();
    let lhs = restrict(&tri, &sum);
    let rhs: Vec<Rat> = restrict(&tri, &u).iter().zip(restrict(&tri, &v)).map(|(a, b)| a + b * rat(3)).collect();
    assert_eq!(lhs, rhs);
    for c in 0..n {
        let r = restrict(&tri, &indicator(n, c));
        match tri.class_boundary_edge(c) {
            Some(e) => assert_eq!(r, indicator(r.len(), e)),
            None => assert!(r.iter().all(Rat::is_zero)),
        }
    }
}

/// Membership agrees with the enumerated cone on random measures and on
/// random points of the cone itself.
#[test]
fn membership_matches_the_enumerated_cone() {
    let tri = cone_g2();
    let problem = ConeProblem::new(&tri, &cone_g2_out(&tri)).unwrap();
    let cone = problem.cone(&AllChoices);
    let tau = problem.track().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut members = 0;
    for k in 0..40 {
        let w = if k % 2 == 0 {
            random_measure(&tau, &mut rng).unwrap()
        } else {
            let c = &cone.components[rng.gen_range(0..cone.components.len())];
            let floors: Vec<(usize, Rat)> = c.active.iter().map(|&i| (i, rat(rng.gen_range(0..4)))).collect();
            isocone::linalg::point_with_floors(&c.span, &floors).unwrap()
        };
        let m = problem.member(&w);
        assert_eq!(m.is_member(), cone.contains(&w), "{w:?}");
        if let Membership::Member { choice, extension } = &m {
            assert!(problem.verify_witness(&w, choice, extension));
            members += 1;
        }
    }
    assert!(members >= 20);
}

#[test]
fn product_diagonal_is_a_member() {
    let p = g2_product();
    let out = p.boundary_out(&genus2_surface(), &genus2_track_out()).unwrap();
    let problem = ConeProblem::new(&p.tri, &out).unwrap();
    let tau = genus2_maximal_track();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let w = random_measure(&tau, &mut rng).unwrap();
        let d = product_diagonal(&p, &problem, &w);
        let Membership::Member { choice, extension } = problem.member(&d) else { panic!("not a member") };
        assert!(problem.verify_witness(&d, &choice, &extension));
        // The extension constant along the interval is itself a four-point weight.
        assert!(w4_member(&p.tri, &p.constant_extension(&w)).unwrap().is_member());
    }
}

#[test]
fn membership_gates_and_zero() {
    let tri = cone_g2();
    let problem = ConeProblem::new(&tri, &cone_g2_out(&tri)).unwrap();
    let n = problem.track().branch_count();
    let Membership::Member { extension, .. } = problem.member(&vec![rat(0); n]) else { panic!("zero is a member") };
    assert!(extension.iter().all(Rat::is_zero));
    assert_eq!(problem.member(&indicator(n, 0)), Membership::Rejected { reason: "switch".into() });
}

#[test]
fn sampled_cone_components_are_isotropic_and_small() {
    let tri = cone_g2();
    let problem = ConeProblem::new(&tri, &cone_g2_out(&tri)).unwrap();
    let cone = problem.cone(&SampledChoices { count: 40, seed: 3 });
    assert!(!cone.components.is_empty());
    let half = problem.weight_space_dim() / 2;
    for c in &cone.components {
        assert!(problem.is_isotropic(c));
        assert!(c.span.dim() <= half);
    }
}

#[test]
fn tetrahedron_cone_is_exhaustive_and_deduplicated() {
    let tri = tet4();
    let b = tri.boundary();
    let problem = ConeProblem::new(&tri, &vec![Some(0); b.triangle_count()]).unwrap();
    let cone = problem.cone(&AllChoices);
    let mut keys: Vec<_> = cone.components.iter().map(|c| (c.span.basis().to_vec(), c.active.clone())).collect();
    let n = keys.len();
    keys.dedup();
    assert_eq!(keys.len(), n);
    assert!(cone.components.iter().all(|c| problem.is_isotropic(c)));
}

#[test]
fn product_has_three_tetrahedra_per_triangle() {
    let s = genus2_surface();
    let p = product_triangulation(&s).unwrap();
    assert_eq!(p.tri.tet_count(), 3 * s.triangle_count());
    // The two levels carry opposite orientations of the surface.
    let b = p.tri.boundary();
    let cyclic = |lv: usize, t: usize| -> bool {
        let bt = p.level_triangle[lv][t];
        let classes: Vec<usize> = (0..3).map(|k| p.tri.boundary_edge_class()[b.edge_of((bt, k))]).collect();
        let want: Vec<usize> = (0..3).map(|i| p.level_class[lv][s.edge_of((t, i))]).collect();
        (0..3).any(|r| (0..3).all(|i| classes[(i + r) % 3] == want[i]))
    };
    for t in 0..s.triangle_count() {
        assert_ne!(cyclic(0, t), cyclic(1, t));
    }
}
