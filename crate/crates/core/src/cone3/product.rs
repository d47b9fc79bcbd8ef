use std::collections::HashMap;

use num_traits::Zero;

use super::triangulation::{face_vertices, FaceGlue, Triangulation3, TET_EDGES};
use super::Cone3Error;
use crate::ordgroup::Rat;
use crate::track::SurfaceTriangulation;

/// `S × I` with bookkeeping linking it back to `S`.
#[derive(Debug, Clone)]
pub struct ProductTriangulation {
    pub tri: Triangulation3,
    /// Surface edge under each edge class, `None` for vertical edges.
    pub class_projection: Vec<Option<usize>>,
    /// Edge class of each surface edge at levels 0 and 1.
    pub level_class: [Vec<usize>; 2],
    /// Boundary triangle of each surface triangle at levels 0 and 1.
    pub level_triangle: [Vec<usize>; 2],
}

/// Orients every edge so no triangle's sides form a directed cycle.
fn acyclic_orientation(s: &SurfaceTriangulation) -> Option<Vec<bool>> {
    fn along(s: &SurfaceTriangulation, o: &[Option<bool>], t: usize, i: usize) -> Option<bool> {
        let e = s.edge_of((t, i));
        let first = s.edge_sides(e)[0] == (t, i);
        o[e].map(|x| x == first)
    }
    fn ok(s: &SurfaceTriangulation, o: &[Option<bool>], e: usize) -> bool {
        s.edge_sides(e).iter().all(|&(t, _)| {
            let d: Vec<Option<bool>> = (0..3).map(|i| along(s, o, t, i)).collect();
            !(d.iter().all(|x| *x == Some(true)) || d.iter().all(|x| *x == Some(false)))
        })
    }
    fn go(s: &SurfaceTriangulation, o: &mut Vec<Option<bool>>, e: usize) -> bool {
        if e == o.len() {
            return true;
        }
        for x in [true, false] {
            o[e] = Some(x);
            if ok(s, o, e) && go(s, o, e + 1) {
                return true;
            }
        }
        o[e] = None;
        false
    }
    let mut o = vec![None; s.edge_count()];
    go(s, &mut o, 0).then(|| o.into_iter().map(|x| x.expect("assigned")).collect())
}

type PrismVertex = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum FaceKey {
    Interior(usize, Vec<PrismVertex>),
    Wall(usize, Vec<(bool, usize)>),
}

/// Triangulates `S × I` by splitting each prism into three tetrahedra along
/// wall diagonals chosen from an acyclic edge orientation, so diagonals agree
/// across glued walls.
pub fn product_triangulation(s: &SurfaceTriangulation) -> Result<ProductTriangulation, Cone3Error> {
    if !s.is_closed() {
        return Err(Cone3Error::Structure("product needs a closed surface".into()));
    }
    let orient = acyclic_orientation(s).ok_or_else(|| Cone3Error::Structure("no acyclic edge orientation".into()))?;
    // Does side i of t run from corner i to corner i+1 in the chosen direction?
    let forward = |t: usize, i: usize| {
        let e = s.edge_of((t, i));
        orient[e] == (s.edge_sides(e)[0] == (t, i))
    };
    let corner_xy = [(0i64, 0i64), (1, 0), (0, 1)];
    let mut ids = Vec::new();
    let mut tets: Vec<[PrismVertex; 4]> = Vec::new();
    let mut tet_triangle = Vec::new();
    for t in 0..s.triangle_count() {
        // Out-degree within the triangle orders the corners p < q < r.
        let mut outdeg = [0usize; 3];
        for i in 0..3 {
            if forward(t, i) {
                outdeg[i] += 1;
            } else {
                outdeg[(i + 1) % 3] += 1;
            }
        }
        let mut order = [0usize, 1, 2];
        order.sort_by_key(|&c| std::cmp::Reverse(outdeg[c]));
        let [p, q, r] = order;
        let prisms = [
            [(p, 0), (q, 0), (r, 0), (r, 1)],
            [(p, 0), (q, 0), (q, 1), (r, 1)],
            [(p, 0), (p, 1), (q, 1), (r, 1)],
        ];
        for (k, mut vs) in prisms.into_iter().enumerate() {
            let pt = |v: PrismVertex| [corner_xy[v.0].0, corner_xy[v.0].1, v.1 as i64];
            let d = |a: [i64; 3], b: [i64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
            let (a, b, c) = (d(pt(vs[1]), pt(vs[0])), d(pt(vs[2]), pt(vs[0])), d(pt(vs[3]), pt(vs[0])));
            let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]);
            if det < 0 {
                vs.swap(2, 3);
            }
            ids.push(format!("{}.{}", s.triangle_id(t), k));
            tets.push(vs);
            tet_triangle.push(t);
        }
    }

    // Role of a corner on side i: is it the start of the side's edge, in the edge's reference direction?
    let role = |t: usize, i: usize, corner: usize| {
        let e = s.edge_of((t, i));
        let first = s.edge_sides(e)[0] == (t, i);
        (corner == i) == first
    };
    let mut faces: HashMap<FaceKey, Vec<(usize, usize)>> = HashMap::new();
    let mut key_vertex: HashMap<(usize, usize), Vec<(usize, (bool, PrismVertex))>> = HashMap::new();
    for (n, vs) in tets.iter().enumerate() {
        let t = tet_triangle[n];
        for f in 0..4 {
            let fv: Vec<PrismVertex> = face_vertices(f).iter().map(|&i| vs[i]).collect();
            if fv.iter().all(|v| v.1 == fv[0].1) {
                continue;
            }
            let mut corners: Vec<usize> = fv.iter().map(|v| v.0).collect();
            corners.sort_unstable();
            corners.dedup();
            let key = if corners.len() == 2 {
                let i = if corners == [0, 2] { 2 } else { corners[0] };
                let mut k: Vec<(bool, usize)> = fv.iter().map(|v| (role(t, i, v.0), v.1)).collect();
                k.sort_unstable();
                let tags = face_vertices(f).iter().map(|&lv| (lv, (role(t, i, vs[lv].0), (usize::MAX, vs[lv].1)))).collect();
                key_vertex.insert((n, f), tags);
                FaceKey::Wall(s.edge_of((t, i)), k)
            } else {
                let mut k = fv.clone();
                k.sort_unstable();
                let tags = face_vertices(f).iter().map(|&lv| (lv, (false, vs[lv]))).collect();
                key_vertex.insert((n, f), tags);
                FaceKey::Interior(t, k)
            };
            faces.entry(key).or_default().push((n, f));
        }
    }
    let mut keys: Vec<_> = faces.into_iter().collect();
    keys.sort();
    let mut glues = Vec::new();
    for (key, members) in keys {
        let [(n1, f1), (n2, f2)] = members.as_slice() else {
            return Err(Cone3Error::Structure(format!("prism face {key:?} has {} sides", members.len())));
        };
        let tags2 = &key_vertex[&(*n2, *f2)];
        let images = key_vertex[&(*n1, *f1)]
            .iter()
            .map(|(_, tag)| tags2.iter().find(|(_, t2)| t2 == tag).expect("matching vertex").0)
            .collect::<Vec<_>>();
        glues.push(FaceGlue { t1: *n1, f1: *f1, t2: *n2, f2: *f2, images: [images[0], images[1], images[2]] });
    }
    let tri = Triangulation3::new(ids, glues)?;

    let mut class_projection = vec![None; tri.edge_count()];
    let mut level_class = [vec![usize::MAX; s.edge_count()], vec![usize::MAX; s.edge_count()]];
    for (n, vs) in tets.iter().enumerate() {
        let t = tet_triangle[n];
        for (i, &(a, b)) in TET_EDGES.iter().enumerate() {
            let (va, vb) = (vs[a], vs[b]);
            let c = tri.tet_edges(n)[i];
            if va.0 == vb.0 {
                continue;
            }
            let side = (0..3).find(|&j| [j, (j + 1) % 3].contains(&va.0) && [j, (j + 1) % 3].contains(&vb.0)).expect("two corners");
            let e = s.edge_of((t, side));
            class_projection[c] = Some(e);
            if va.1 == vb.1 {
                level_class[va.1][e] = c;
            }
        }
    }
    let mut level_triangle = [vec![usize::MAX; s.triangle_count()], vec![usize::MAX; s.triangle_count()]];
    for (bt, &(n, f)) in tri.boundary_faces().iter().enumerate() {
        let lv = tets[n][face_vertices(f)[0]].1;
        level_triangle[lv][tet_triangle[n]] = bt;
    }
    Ok(ProductTriangulation { tri, class_projection, level_class, level_triangle })
}

impl ProductTriangulation {
    /// The extension constant along the interval: each non-vertical edge
    /// gets the weight of the surface edge under it, vertical edges get 0.
    pub fn constant_extension(&self, w: &[Rat]) -> Vec<Rat> {
        self.class_projection.iter().map(|p| p.map_or_else(Rat::zero, |e| w[e].clone())).collect()
    }

    /// Boundary-track out sides matching a surface track on both levels.
    pub fn boundary_out(&self, s: &SurfaceTriangulation, out: &[usize]) -> Result<Vec<Option<usize>>, Cone3Error> {
        let b = self.tri.boundary();
        let mut res = vec![None; b.triangle_count()];
        for t in 0..s.triangle_count() {
            let e = s.edge_of((t, out[t]));
            for lv in 0..2 {
                let bt = self.level_triangle[lv][t];
                let cls = self.level_class[lv][e];
                let hits: Vec<usize> =
                    (0..3).filter(|&k| self.tri.boundary_edge_class()[b.edge_of((bt, k))] == cls).collect();
                let [k] = hits.as_slice() else {
                    return Err(Cone3Error::Structure("ambiguous out side".into()));
                };
                res[bt] = Some(*k);
            }
        }
        Ok(res)
    }
}
