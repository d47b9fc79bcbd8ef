use std::collections::HashMap;

use super::Cone3Error;
use crate::dsu::Dsu;
use crate::track::SurfaceTriangulation;

/// Local edges of a tetrahedron, indexed 0..6.
pub const TET_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn local_edge(a: usize, b: usize) -> usize {
    let (x, y) = if a < b { (a, b) } else { (b, a) };
    TET_EDGES.iter().position(|&e| e == (x, y)).expect("distinct vertices below 4")
}

/// Vertices of face `f` (opposite vertex `f`), increasing.
pub fn face_vertices(f: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for v in 0..4 {
        if v != f {
            out[k] = v;
            k += 1;
        }
    }
    out
}

/// Face `f` with its boundary orientation: increasing order for even `f`,
/// reversed parity for odd `f`.
pub fn oriented_face(f: usize) -> [usize; 3] {
    let [x, y, z] = face_vertices(f);
    if f.is_multiple_of(2) {
        [x, y, z]
    } else {
        [x, z, y]
    }
}

/// A face gluing: the vertices of face `f1` of `t1`, in increasing order,
/// go to `images` in `t2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceGlue {
    pub t1: usize,
    pub f1: usize,
    pub t2: usize,
    pub f2: usize,
    pub images: [usize; 3],
}

fn is_odd(p: &[usize; 4]) -> bool {
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// Validated triangulated 3-manifold with boundary. Tetrahedra are oriented by
/// their vertex order; face gluings reverse orientation.
#[derive(Debug, Clone)]
pub struct Triangulation3 {
    tet_ids: Vec<String>,
    glues: Vec<FaceGlue>,
    neighbor: Vec<[Option<(usize, [usize; 4])>; 4]>,
    edge_class: Vec<[usize; 6]>,
    edge_labels: Vec<String>,
    edge_members: Vec<Vec<(usize, usize)>>,
    boundary: SurfaceTriangulation,
    boundary_faces: Vec<(usize, usize)>,
    boundary_edge_class: Vec<usize>,
    class_boundary_edge: Vec<Option<usize>>,
    torus_component: Vec<bool>,
}

/// Summary printed by validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub tetrahedra: usize,
    pub edge_classes: usize,
    pub interior_edges: usize,
    pub boundary_triangles: usize,
    pub boundary_components: Vec<(i64, bool)>,
}

impl Triangulation3 {
    pub fn new(tet_ids: Vec<String>, glues: Vec<FaceGlue>) -> Result<Self, Cone3Error> {
        let n = tet_ids.len();
        let mut seen = HashMap::new();
        for (i, id) in tet_ids.iter().enumerate() {
            if seen.insert(id.as_str(), i).is_some() {
                return Err(Cone3Error::Structure(format!("duplicate tetrahedron {id}")));
            }
        }
        let mut neighbor: Vec<[Option<(usize, [usize; 4])>; 4]> = vec![[None; 4]; n];
        for g in &glues {
            if g.t1 >= n || g.t2 >= n || g.f1 > 3 || g.f2 > 3 {
                return Err(Cone3Error::Structure("gluing refers to a missing tetrahedron or face".into()));
            }
            let mut want: Vec<usize> = face_vertices(g.f2).to_vec();
            let mut got = g.images.to_vec();
            want.sort_unstable();
            got.sort_unstable();
            if want != got {
                return Err(Cone3Error::NonInvolutive(format!(
                    "{}.{} images {:?} are not the vertices of face {}",
                    tet_ids[g.t1], g.f1, g.images, g.f2
                )));
            }
            let mut perm = [0; 4];
            perm[g.f1] = g.f2;
            for (k, v) in face_vertices(g.f1).into_iter().enumerate() {
                perm[v] = g.images[k];
            }
            let mut inv = [0; 4];
            for v in 0..4 {
                inv[perm[v]] = v;
            }
            if (g.t1, g.f1) == (g.t2, g.f2) {
                return Err(Cone3Error::NonInvolutive(format!("face {}.{} glued to itself", tet_ids[g.t1], g.f1)));
            }
            for (t, f) in [(g.t1, g.f1), (g.t2, g.f2)] {
                if neighbor[t][f].is_some() {
                    return Err(Cone3Error::NonInvolutive(format!("face {}.{} glued twice", tet_ids[t], f)));
                }
            }
            if !is_odd(&perm) {
                return Err(Cone3Error::Orientation(format!(
                    "gluing {}.{} to {}.{} preserves orientation",
                    tet_ids[g.t1], g.f1, tet_ids[g.t2], g.f2
                )));
            }
            neighbor[g.t1][g.f1] = Some((g.t2, perm));
            neighbor[g.t2][g.f2] = Some((g.t1, inv));
        }

        // Edge classes with orientation parity relative to increasing local order.
        let m = 6 * n;
        let mut parent: Vec<usize> = (0..m).collect();
        let mut flip = vec![false; m];
        fn find(parent: &mut [usize], flip: &mut [bool], x: usize) -> (usize, bool) {
            let mut path = Vec::new();
            let mut r = x;
            while parent[r] != r {
                path.push(r);
                r = parent[r];
            }
            // Compress, accumulating parity from the top down.
            let mut acc = false;
            for &p in path.iter().rev() {
                acc ^= flip[p];
                flip[p] = acc;
                parent[p] = r;
            }
            (r, if path.is_empty() { false } else { flip[x] })
        }
        for t in 0..n {
            for f in 0..4 {
                let Some((u, perm)) = neighbor[t][f] else { continue };
                for (i, &(a, b)) in TET_EDGES.iter().enumerate() {
                    if a == f || b == f {
                        continue;
                    }
                    let (pa, pb) = (perm[a], perm[b]);
                    let j = local_edge(pa, pb);
                    let rel = pa > pb;
                    let (rx, fx) = find(&mut parent, &mut flip, 6 * t + i);
                    let (ry, fy) = find(&mut parent, &mut flip, 6 * u + j);
                    if rx == ry {
                        if fx ^ fy != rel {
                            return Err(Cone3Error::Structure(format!(
                                "edge {}.{}{} is identified with its own reverse",
                                tet_ids[t], a, b
                            )));
                        }
                    } else {
                        parent[rx] = ry;
                        flip[rx] = fx ^ fy ^ rel;
                    }
                }
            }
        }
        let mut class_of_root = HashMap::new();
        let mut edge_class = vec![[0usize; 6]; n];
        let mut edge_labels = Vec::new();
        let mut edge_members: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut edge_flip = vec![[false; 6]; n];
        for t in 0..n {
            for i in 0..6 {
                let (r, f) = find(&mut parent, &mut flip, 6 * t + i);
                let c = *class_of_root.entry(r).or_insert_with(|| {
                    let (a, b) = TET_EDGES[i];
                    edge_labels.push(format!("{}.{}{}", tet_ids[t], a, b));
                    edge_members.push(Vec::new());
                    edge_labels.len() - 1
                });
                edge_class[t][i] = c;
                edge_members[c].push((t, i));
                edge_flip[t][i] = f;
            }
        }
        // Flip parity relative to the class's first member.
        let first_flip: Vec<bool> = edge_members.iter().map(|m| edge_flip[m[0].0][m[0].1]).collect();

        // Boundary surface from unglued faces.
        let mut boundary_faces = Vec::new();
        let mut sides_of_class: HashMap<usize, Vec<(usize, usize, bool)>> = HashMap::new();
        for t in 0..n {
            for f in 0..4 {
                if neighbor[t][f].is_some() {
                    continue;
                }
                let bt = boundary_faces.len();
                boundary_faces.push((t, f));
                let vs = oriented_face(f);
                for k in 0..3 {
                    let (a, b) = (vs[k], vs[(k + 1) % 3]);
                    let i = local_edge(a, b);
                    let c = edge_class[t][i];
                    let forward = (a < b) ^ edge_flip[t][i] ^ first_flip[c];
                    sides_of_class.entry(c).or_default().push((bt, k, forward));
                }
            }
        }
        let mut side_names: Vec<[String; 3]> = vec![Default::default(); boundary_faces.len()];
        let mut glue_pairs = Vec::new();
        let mut classes: Vec<_> = sides_of_class.into_iter().collect();
        classes.sort_by_key(|(_, s)| (s[0].0, s[0].1));
        for (c, sides) in &classes {
            let [(t1, k1, d1), (t2, k2, d2)] = sides.as_slice() else {
                return Err(Cone3Error::Structure(format!(
                    "boundary edge {} lies on {} boundary faces",
                    edge_labels[*c],
                    sides.len()
                )));
            };
            if d1 == d2 {
                return Err(Cone3Error::Orientation(format!("boundary edge {} is not reversed", edge_labels[*c])));
            }
            side_names[*t1][*k1] = edge_labels[*c].clone();
            side_names[*t2][*k2] = format!("{}'", edge_labels[*c]);
            glue_pairs.push((side_names[*t1][*k1].clone(), side_names[*t2][*k2].clone()));
        }
        let triangles = boundary_faces
            .iter()
            .zip(side_names)
            .map(|(&(t, f), s)| (format!("{}.{}", tet_ids[t], f), s))
            .collect();
        let boundary = SurfaceTriangulation::new(triangles, &glue_pairs)
            .map_err(|e| Cone3Error::Structure(format!("boundary surface: {e}")))?;
        let boundary_edge_class: Vec<usize> = (0..boundary.edge_count())
            .map(|e| {
                let (bt, k) = boundary.edge_sides(e)[0];
                let (t, f) = boundary_faces[bt];
                let vs = oriented_face(f);
                edge_class[t][local_edge(vs[k], vs[(k + 1) % 3])]
            })
            .collect();
        let mut class_boundary_edge = vec![None; edge_labels.len()];
        for (e, &c) in boundary_edge_class.iter().enumerate() {
            class_boundary_edge[c] = Some(e);
        }
        let torus_component = boundary.components().iter().map(|c| c.genus == 1 && c.boundary_cycles == 0).collect();

        Ok(Self {
            tet_ids,
            glues,
            neighbor,
            edge_class,
            edge_labels,
            edge_members,
            boundary,
            boundary_faces,
            boundary_edge_class,
            class_boundary_edge,
            torus_component,
        })
    }

    pub fn tet_count(&self) -> usize {
        self.tet_ids.len()
    }

    pub fn tet_ids(&self) -> &[String] {
        &self.tet_ids
    }

    pub fn tet_index(&self, id: &str) -> Option<usize> {
        self.tet_ids.iter().position(|t| t == id)
    }

    pub fn glues(&self) -> &[FaceGlue] {
        &self.glues
    }

    pub fn neighbor(&self, t: usize, f: usize) -> Option<(usize, [usize; 4])> {
        self.neighbor[t][f]
    }

    pub fn edge_count(&self) -> usize {
        self.edge_labels.len()
    }

    pub fn edge_labels(&self) -> &[String] {
        &self.edge_labels
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edge_labels.iter().position(|x| x == label)
    }

    /// Edge classes of a tetrahedron, by local edge.
    pub fn tet_edges(&self, t: usize) -> [usize; 6] {
        self.edge_class[t]
    }

    /// Vertex classes: the class of each tetrahedron corner, and the count.
    pub fn vertex_classes(&self) -> (Vec<[usize; 4]>, usize) {
        let n = self.tet_count();
        let mut dsu = Dsu::new(4 * n);
        for t in 0..n {
            for f in 0..4 {
                if let Some((u, p)) = self.neighbor[t][f] {
                    for v in face_vertices(f) {
                        dsu.union(4 * t + v, 4 * u + p[v]);
                    }
                }
            }
        }
        let (labels, count) = dsu.labels();
        ((0..n).map(|t| [0, 1, 2, 3].map(|v| labels[4 * t + v])).collect(), count)
    }

    /// Vertex classes at the two ends of each edge class.
    pub fn edge_vertex_classes(&self) -> Vec<(usize, usize)> {
        let (corner, _) = self.vertex_classes();
        (0..self.edge_count())
            .map(|c| {
                let (t, le) = self.edge_members[c][0];
                let (a, b) = TET_EDGES[le];
                (corner[t][a], corner[t][b])
            })
            .collect()
    }

    pub fn edge_members(&self, c: usize) -> &[(usize, usize)] {
        &self.edge_members[c]
    }

    pub fn boundary(&self) -> &SurfaceTriangulation {
        &self.boundary
    }

    /// (tetrahedron, face) of each boundary triangle.
    pub fn boundary_faces(&self) -> &[(usize, usize)] {
        &self.boundary_faces
    }

    /// Edge class of each boundary-surface edge.
    pub fn boundary_edge_class(&self) -> &[usize] {
        &self.boundary_edge_class
    }

    pub fn class_boundary_edge(&self, c: usize) -> Option<usize> {
        self.class_boundary_edge[c]
    }

    pub fn is_boundary_class(&self, c: usize) -> bool {
        self.class_boundary_edge[c].is_some()
    }

    /// Per boundary component: is it a torus.
    pub fn torus_components(&self) -> &[bool] {
        &self.torus_component
    }

    /// Edge classes lying on torus boundary components.
    pub fn torus_classes(&self) -> Vec<usize> {
        (0..self.boundary.edge_count())
            .filter(|&e| self.torus_component[self.boundary.component_of_edge(e)])
            .map(|e| self.boundary_edge_class[e])
            .collect()
    }

    pub fn report(&self) -> ValidationReport {
        ValidationReport {
            tetrahedra: self.tet_count(),
            edge_classes: self.edge_count(),
            interior_edges: (0..self.edge_count()).filter(|&c| !self.is_boundary_class(c)).count(),
            boundary_triangles: self.boundary.triangle_count(),
            boundary_components: self
                .boundary
                .components()
                .iter()
                .zip(&self.torus_component)
                .map(|(c, &t)| (c.genus, t))
                .collect(),
        }
    }
}

/// One tetrahedron, or two glued along a face.
pub fn single_tetrahedron() -> Triangulation3 {
    Triangulation3::new(vec!["T".into()], Vec::new()).expect("valid")
}

pub fn two_tetrahedra() -> Triangulation3 {
    let glue = FaceGlue { t1: 0, f1: 3, t2: 1, f2: 3, images: [0, 2, 1] };
    Triangulation3::new(vec!["A".into(), "B".into()], vec![glue]).expect("valid")
}

/// The cone over a closed triangulated surface: one tetrahedron per triangle,
/// with the triangle's corners as vertices 0, 1, 2 and the apex as vertex 3.
pub fn cone_over(surface: &SurfaceTriangulation) -> Result<Triangulation3, Cone3Error> {
    if !surface.is_closed() {
        return Err(Cone3Error::Structure("cone needs a closed surface".into()));
    }
    let ids = (0..surface.triangle_count()).map(|t| format!("c{}", surface.triangle_id(t))).collect();
    let mut glues = Vec::new();
    for t in 0..surface.triangle_count() {
        for i in 0..3 {
            let (u, j) = surface.partner((t, i)).expect("closed");
            if (t, i) > (u, j) {
                continue;
            }
            // Side i of t joins corners i, i+1; glued to corners j+1, j of u.
            let f1 = (i + 2) % 3;
            let f2 = (j + 2) % 3;
            let map = |v: usize| {
                if v == 3 {
                    3
                } else if v == i {
                    (j + 1) % 3
                } else {
                    j
                }
            };
            let images = face_vertices(f1).map(map);
            glues.push(FaceGlue { t1: t, f1, t2: u, f2, images });
        }
    }
    Triangulation3::new(ids, glues)
}
