use num_traits::Zero;

use super::triangulation::{local_edge, oriented_face, Triangulation3};
use crate::linalg::{Row, Subspace};
use crate::ordgroup::{OrdError, Rat, WeightScalar};
use crate::track::triangle_form;

/// Per tetrahedron, which pair-equality holds: 1 sets `e+e' = f+f'`,
/// 2 sets `f+f' = g+g'`, 3 sets `g+g' = e+e'`.
pub type ChoiceVector = Vec<u8>;

/// Opposite local-edge pairs `{e,e'}, {f,f'}, {g,g'}` where `e, f, g` run
/// around face 3 in its boundary orientation `(0, 2, 1)`.
pub fn opposite_pairs() -> [(usize, usize); 3] {
    let face = oriented_face(3);
    let e = local_edge(face[0], face[1]);
    let f = local_edge(face[1], face[2]);
    let g = local_edge(face[2], face[0]);
    let opp = |x: usize| {
        let (a, b) = super::triangulation::TET_EDGES[x];
        let rest: Vec<usize> = (0..4).filter(|v| *v != a && *v != b).collect();
        local_edge(rest[0], rest[1])
    };
    [(e, opp(e)), (f, opp(f)), (g, opp(g))]
}

fn half() -> Rat {
    Rat::new(1.into(), 2.into())
}

/// `-½ (dE∧dF + dF∧dG + dG∧dE)` with `E = e+e'` and so on, on local weights.
pub fn tet_form_local(u: &[Rat; 6], v: &[Rat; 6]) -> Rat {
    let pairs = opposite_pairs();
    let s = |w: &[Rat; 6], k: usize| &w[pairs[k].0] + &w[pairs[k].1];
    let wedge = |x: usize, y: usize| s(u, x) * s(v, y) - s(u, y) * s(v, x);
    -(wedge(0, 1) + wedge(1, 2) + wedge(2, 0)) * half()
}

/// Sum of the triangle forms of the four boundary faces of one tetrahedron.
pub fn tet_face_sum_local(u: &[Rat; 6], v: &[Rat; 6]) -> Rat {
    (0..4).fold(Rat::zero(), |acc, f| {
        let vs = oriented_face(f);
        let edges = [local_edge(vs[0], vs[1]), local_edge(vs[1], vs[2]), local_edge(vs[2], vs[0])];
        acc + triangle_form(edges, u, v)
    })
}

fn local<T: Clone>(tri: &Triangulation3, t: usize, w: &[T]) -> [T; 6] {
    tri.tet_edges(t).map(|c| w[c].clone())
}

pub fn tet_form(tri: &Triangulation3, t: usize, u: &[Rat], v: &[Rat]) -> Rat {
    tet_form_local(&local(tri, t, u), &local(tri, t, v))
}

/// `Σ_Σ Ω_Σ` over all tetrahedra, for weights on edge classes.
pub fn omega_m(tri: &Triangulation3, u: &[Rat], v: &[Rat]) -> Rat {
    (0..tri.tet_count()).fold(Rat::zero(), |acc, t| acc + tet_form(tri, t, u, v))
}

/// Restriction to the boundary surface's edges.
pub fn restrict<T: Clone>(tri: &Triangulation3, w: &[T]) -> Vec<T> {
    tri.boundary_edge_class().iter().map(|&c| w[c].clone()).collect()
}

/// Coefficient row of choice `c` on tetrahedron `t`, over edge classes.
pub fn choice_row(tri: &Triangulation3, t: usize, c: u8) -> Row {
    let pairs = opposite_pairs();
    let (x, y) = match c {
        1 => (0, 1),
        2 => (1, 2),
        3 => (2, 0),
        _ => panic!("choice must be 1, 2 or 3"),
    };
    let edges = tri.tet_edges(t);
    let mut row = vec![Rat::zero(); tri.edge_count()];
    let one = Rat::from_integer(1.into());
    for e in [pairs[x].0, pairs[x].1] {
        row[edges[e]] += &one;
    }
    for e in [pairs[y].0, pairs[y].1] {
        row[edges[e]] -= &one;
    }
    row
}

/// Unit rows forcing torus-boundary edge classes to zero.
pub fn torus_rows(tri: &Triangulation3) -> Vec<Row> {
    tri.torus_classes()
        .into_iter()
        .map(|c| {
            let mut r = vec![Rat::zero(); tri.edge_count()];
            r[c] = Rat::from_integer(1.into());
            r
        })
        .collect()
}

pub fn w4_subspace(tri: &Triangulation3, choice: &[u8]) -> Subspace {
    let mut rows: Vec<Row> = (0..tri.tet_count()).map(|t| choice_row(tri, t, choice[t])).collect();
    rows.extend(torus_rows(tri));
    Subspace::from_equations(tri.edge_count(), &rows)
}

/// Per tetrahedron, the satisfied choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct W4Membership {
    pub per_tet: Vec<Vec<u8>>,
}

impl W4Membership {
    pub fn is_member(&self) -> bool {
        self.per_tet.iter().all(|c| !c.is_empty())
    }

    /// The first satisfied ChoiceVector, if any.
    pub fn first(&self) -> Option<ChoiceVector> {
        self.per_tet.iter().map(|c| c.first().copied()).collect()
    }
}

pub fn w4_member<T: WeightScalar>(tri: &Triangulation3, w: &[T]) -> Result<W4Membership, OrdError> {
    let pairs = opposite_pairs();
    let per_tet = (0..tri.tet_count())
        .map(|t| {
            let lw = local(tri, t, w);
            let s = pairs.map(|(a, b)| lw[a].plus(&lw[b]));
            let [se, sf, sg] = s;
            let (se, sf, sg) = (se?, sf?, sg?);
            let mut ok = Vec::new();
            for (c, (x, y)) in [(1u8, (&se, &sf)), (2, (&sf, &sg)), (3, (&sg, &se))] {
                if x == y {
                    ok.push(c);
                }
            }
            Ok(ok)
        })
        .collect::<Result<Vec<_>, OrdError>>()?;
    Ok(W4Membership { per_tet })
}

/// Does `omega_m` vanish on every basis pair of the choice's subspace?
pub fn isotropy_check(tri: &Triangulation3, choice: &[u8]) -> bool {
    subspace_is_isotropic(tri, &w4_subspace(tri, choice))
}

pub fn subspace_is_isotropic(tri: &Triangulation3, space: &Subspace) -> bool {
    let pairs = opposite_pairs();
    // Per basis vector, the pair sums (E, F, G) of every tetrahedron.
    let sums: Vec<Vec<[Rat; 3]>> = space
        .basis()
        .iter()
        .map(|w| {
            (0..tri.tet_count())
                .map(|t| {
                    let lw = local(tri, t, w);
                    pairs.map(|(a, b)| &lw[a] + &lw[b])
                })
                .collect()
        })
        .collect();
    // Ω(u, v) = -½ Σ_t (u × v)·(1, 1, 1), so it suffices to test Σ_t (u × v)·(1, 1, 1) = 0.
    let turned: Vec<Vec<[Rat; 3]>> = sums
        .iter()
        .map(|s| s.iter().map(|[e, f, g]| [g - f, e - g, f - e]).collect())
        .collect();
    (0..sums.len()).all(|i| {
        (i + 1..sums.len()).all(|j| {
            let mut acc = Rat::zero();
            for (x, y) in sums[i].iter().zip(&turned[j]) {
                for k in 0..3 {
                    if !x[k].is_zero() && !y[k].is_zero() {
                        acc += &x[k] * &y[k];
                    }
                }
            }
            acc.is_zero()
        })
    })
}

/// All `3^T` choice vectors in lexicographic order.
pub fn all_choices(t: usize) -> impl Iterator<Item = ChoiceVector> {
    let total = 3usize.pow(t as u32);
    (0..total).map(move |mut k| {
        (0..t)
            .map(|_| {
                let c = (k % 3) as u8 + 1;
                k /= 3;
                c
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone3::triangulation::{single_tetrahedron, two_tetrahedra, TET_EDGES};
    use crate::ordgroup::{rat, ratio, LexVec};

    fn ind(i: usize) -> [Rat; 6] {
        std::array::from_fn(|k| rat((k == i) as i64))
    }

    #[test]
    fn pairs_partition_edges() {
        let p = opposite_pairs();
        let mut all: Vec<usize> = p.iter().flat_map(|&(a, b)| [a, b]).collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3, 4, 5]);
        for (a, b) in p {
            let (x, y) = (TET_EDGES[a], TET_EDGES[b]);
            assert!(x.0 != y.0 && x.0 != y.1 && x.1 != y.0 && x.1 != y.1);
        }
    }

    #[test]
    fn tet_form_examples() {
        let [(e, _), (f, _), _] = opposite_pairs();
        assert_eq!(tet_form_local(&ind(e), &ind(f)), ratio(-1, 2));
        let u: [Rat; 6] = std::array::from_fn(|k| rat(k as i64 * 3 - 4));
        assert_eq!(tet_form_local(&u, &u), rat(0));
    }

    #[test]
    fn even_relabelings_preserve_the_form() {
        let perms: Vec<[usize; 4]> = {
            let mut out = Vec::new();
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        for d in 0..4 {
                            let p = [a, b, c, d];
                            let mut s = p.to_vec();
                            s.sort_unstable();
                            s.dedup();
                            if s.len() == 4 {
                                let inv = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                                if inv % 2 == 0 {
                                    out.push(p);
                                }
                            }
                        }
                    }
                }
            }
            out
        };
        assert_eq!(perms.len(), 12);
        let u: [Rat; 6] = [rat(2), rat(-1), rat(5), rat(0), rat(3), rat(7)];
        let v: [Rat; 6] = [rat(1), rat(4), rat(-2), rat(6), rat(1), rat(-3)];
        let base = tet_form_local(&u, &v);
        let pairs = opposite_pairs();
        for p in perms {
            let moved = |w: &[Rat; 6]| -> [Rat; 6] {
                std::array::from_fn(|i| {
                    let (a, b) = TET_EDGES[i];
                    w[local_edge(p[a], p[b])].clone()
                })
            };
            assert_eq!(tet_form_local(&moved(&u), &moved(&v)), base);
            // pairs go to pairs
            for (a, b) in pairs {
                let img = |x: usize| {
                    let (s, t) = TET_EDGES[x];
                    local_edge(p[s], p[t])
                };
                let (ia, ib) = (img(a), img(b));
                assert!(pairs.iter().any(|&(x, y)| (x, y) == (ia, ib) || (y, x) == (ia, ib)));
            }
        }
    }

    #[test]
    fn single_tet_subspaces() {
        let t = single_tetrahedron();
        for c in 1..=3u8 {
            let w = w4_subspace(&t, &[c]);
            assert_eq!(w.dim(), 5);
            assert!(w.contains(&vec![rat(1); 6]));
            assert!(isotropy_check(&t, &[c]));
        }
        let [(e, e2), _, _] = opposite_pairs();
        let mut u = vec![rat(0); 6];
        u[t.tet_edges(0)[e]] = rat(1);
        u[t.tet_edges(0)[e2]] = rat(1);
        assert!(w4_subspace(&t, &[2]).contains(&u));
        assert!(!w4_subspace(&t, &[1]).contains(&u));
    }

    #[test]
    fn membership_examples() {
        let t = single_tetrahedron();
        let pairs = opposite_pairs();
        let mut w = vec![rat(0); 6];
        for (k, (a, b)) in pairs.iter().enumerate() {
            w[t.tet_edges(0)[*a]] = rat(2 * k as i64 + 1);
            w[t.tet_edges(0)[*b]] = rat(2 * k as i64 + 2);
        }
        assert!(!w4_member(&t, &w).unwrap().is_member());
        let zero = vec![LexVec::zero(2); 6];
        assert_eq!(w4_member(&t, &zero).unwrap().per_tet, vec![vec![1, 2, 3]]);
    }

    #[test]
    fn two_tets_cancel_interior_face() {
        let t = two_tetrahedra();
        let u: Vec<Rat> = (0..9).map(|i| rat(i * i - 3)).collect();
        let v: Vec<Rat> = (0..9).map(|i| rat(2 - i)).collect();
        let lhs = omega_m(&t, &u, &v);
        let rhs = crate::track::triangle_form_sum(t.boundary(), &restrict(&t, &u), &restrict(&t, &v)).unwrap();
        assert_eq!(lhs, rhs);
    }
}
