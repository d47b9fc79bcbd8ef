use std::collections::HashMap;

use super::TrackError;
use crate::dsu::Dsu;

/// A triangle side: (triangle index, side index 0..3).
pub type Side = (usize, usize);

/// Per-component Euler data of a triangulated surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentInfo {
    pub triangles: usize,
    pub edges: usize,
    pub vertices: usize,
    pub boundary_cycles: usize,
    pub euler: i64,
    pub genus: i64,
}

/// An oriented triangulated surface, possibly with boundary and possibly
/// disconnected. Each triangle lists its three directed sides in
/// counterclockwise order; side `i` runs from corner `i` to corner `i+1`.
/// Glued sides are identified with opposite directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceTriangulation {
    triangle_ids: Vec<String>,
    side_ids: Vec<[String; 3]>,
    side_lookup: HashMap<String, Side>,
    partner: Vec<[Option<Side>; 3]>,
    edge_of: Vec<[usize; 3]>,
    edge_labels: Vec<String>,
    edge_sides: Vec<Vec<Side>>,
    corner_vertex: Vec<[usize; 3]>,
    vertex_count: usize,
    component_of: Vec<usize>,
    component_count: usize,
}

impl SurfaceTriangulation {
    pub fn new(triangles: Vec<(String, [String; 3])>, glues: &[(String, String)]) -> Result<Self, TrackError> {
        let mut side_lookup = HashMap::new();
        let mut tri_seen = HashMap::new();
        for (t, (id, sides)) in triangles.iter().enumerate() {
            if tri_seen.insert(id.clone(), t).is_some() {
                return Err(TrackError::Structure(format!("duplicate triangle {id}")));
            }
            for (i, s) in sides.iter().enumerate() {
                if side_lookup.insert(s.clone(), (t, i)).is_some() {
                    return Err(TrackError::Structure(format!("duplicate side {s}")));
                }
            }
        }
        let n = triangles.len();
        let mut partner = vec![[None; 3]; n];
        for (x, y) in glues {
            let a = *side_lookup.get(x).ok_or_else(|| TrackError::Structure(format!("unknown side {x}")))?;
            let b = *side_lookup.get(y).ok_or_else(|| TrackError::Structure(format!("unknown side {y}")))?;
            if a == b {
                return Err(TrackError::Structure(format!("side {x} glued to itself")));
            }
            for (s, name) in [(a, x), (b, y)] {
                if partner[s.0][s.1].is_some() {
                    return Err(TrackError::Structure(format!("side {name} glued more than once")));
                }
            }
            partner[a.0][a.1] = Some(b);
            partner[b.0][b.1] = Some(a);
        }

        let mut edge_of = vec![[usize::MAX; 3]; n];
        let mut edge_labels = Vec::new();
        let mut edge_sides = Vec::new();
        for t in 0..n {
            for i in 0..3 {
                if edge_of[t][i] != usize::MAX {
                    continue;
                }
                let e = edge_labels.len();
                edge_labels.push(triangles[t].1[i].clone());
                edge_of[t][i] = e;
                let mut sides = vec![(t, i)];
                if let Some((u, j)) = partner[t][i] {
                    edge_of[u][j] = e;
                    sides.push((u, j));
                }
                edge_sides.push(sides);
            }
        }

        let mut corners = Dsu::new(3 * n);
        let mut tris = Dsu::new(n);
        for t in 0..n {
            for i in 0..3 {
                if let Some((u, j)) = partner[t][i] {
                    corners.union(3 * t + i, 3 * u + (j + 1) % 3);
                    corners.union(3 * t + (i + 1) % 3, 3 * u + j);
                    tris.union(t, u);
                }
            }
        }
        let (vlabels, vertex_count) = corners.labels();
        let corner_vertex = (0..n).map(|t| [vlabels[3 * t], vlabels[3 * t + 1], vlabels[3 * t + 2]]).collect();
        let (component_of, component_count) = tris.labels();

        Ok(Self {
            triangle_ids: triangles.iter().map(|(id, _)| id.clone()).collect(),
            side_ids: triangles.into_iter().map(|(_, s)| s).collect(),
            side_lookup,
            partner,
            edge_of,
            edge_labels,
            edge_sides,
            corner_vertex,
            vertex_count,
            component_of,
            component_count,
        })
    }

    pub fn triangle_count(&self) -> usize {
        self.triangle_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_labels.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn triangle_id(&self, t: usize) -> &str {
        &self.triangle_ids[t]
    }

    pub fn triangle_index(&self, id: &str) -> Option<usize> {
        self.triangle_ids.iter().position(|x| x == id)
    }

    pub fn side_id(&self, s: Side) -> &str {
        &self.side_ids[s.0][s.1]
    }

    pub fn side_ids(&self, t: usize) -> &[String; 3] {
        &self.side_ids[t]
    }

    pub fn side_index(&self, id: &str) -> Option<Side> {
        self.side_lookup.get(id).copied()
    }

    pub fn partner(&self, s: Side) -> Option<Side> {
        self.partner[s.0][s.1]
    }

    pub fn edge_of(&self, s: Side) -> usize {
        self.edge_of[s.0][s.1]
    }

    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.edge_of[t]
    }

    pub fn edge_label(&self, e: usize) -> &str {
        &self.edge_labels[e]
    }

    pub fn edge_labels(&self) -> &[String] {
        &self.edge_labels
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edge_labels.iter().position(|x| x == label)
    }

    pub fn edge_sides(&self, e: usize) -> &[Side] {
        &self.edge_sides[e]
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_sides[e].len() == 1
    }

    pub fn is_closed(&self) -> bool {
        self.edge_sides.iter().all(|s| s.len() == 2)
    }

    /// Vertex at corner `i` of triangle `t` (the start of side `i`).
    pub fn corner_vertex(&self, t: usize, i: usize) -> usize {
        self.corner_vertex[t][i]
    }

    /// Endpoints of an edge, read from its first side.
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let (t, i) = self.edge_sides[e][0];
        (self.corner_vertex[t][i], self.corner_vertex[t][(i + 1) % 3])
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn component_of_triangle(&self, t: usize) -> usize {
        self.component_of[t]
    }

    pub fn component_of_edge(&self, e: usize) -> usize {
        self.component_of[self.edge_sides[e][0].0]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edge_count() as i64 + self.triangle_count() as i64
    }

    pub fn components(&self) -> Vec<ComponentInfo> {
        let k = self.component_count;
        let mut tri = vec![0usize; k];
        let mut edges = vec![0usize; k];
        let mut verts = vec![Vec::new(); k];
        for t in 0..self.triangle_count() {
            let c = self.component_of[t];
            tri[c] += 1;
            verts[c].extend_from_slice(&self.corner_vertex[t]);
        }
        let mut bdry = Dsu::new(self.vertex_count);
        let mut on_boundary = vec![false; self.vertex_count];
        for e in 0..self.edge_count() {
            edges[self.component_of_edge(e)] += 1;
            if self.is_boundary_edge(e) {
                let (a, b) = self.edge_endpoints(e);
                bdry.union(a, b);
                on_boundary[a] = true;
                on_boundary[b] = true;
            }
        }
        (0..k)
            .map(|c| {
                let mut vs = std::mem::take(&mut verts[c]);
                vs.sort_unstable();
                vs.dedup();
                let mut roots: Vec<usize> = vs.iter().filter(|&&v| on_boundary[v]).map(|&v| bdry.find(v)).collect();
                roots.sort_unstable();
                roots.dedup();
                let euler = vs.len() as i64 - edges[c] as i64 + tri[c] as i64;
                let b = roots.len() as i64;
                ComponentInfo {
                    triangles: tri[c],
                    edges: edges[c],
                    vertices: vs.len(),
                    boundary_cycles: roots.len(),
                    euler,
                    genus: (2 - euler - b) / 2,
                }
            })
            .collect()
    }

    /// Genus of a connected surface.
    pub fn genus(&self) -> Result<i64, TrackError> {
        match self.components().as_slice() {
            [c] => Ok(c.genus),
            cs => Err(TrackError::Structure(format!("surface has {} components", cs.len()))),
        }
    }

    /// Triangles as (id, sides) in input order.
    pub fn triangles(&self) -> Vec<(String, [String; 3])> {
        self.triangle_ids.iter().cloned().zip(self.side_ids.iter().cloned()).collect()
    }

    /// Glued side pairs, each listed once.
    pub fn glue_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for t in 0..self.triangle_count() {
            for i in 0..3 {
                if let Some(p) = self.partner[t][i] {
                    if (t, i) < p {
                        out.push((self.side_ids[t][i].clone(), self.side_id(p).to_string()));
                    }
                }
            }
        }
        out
    }

    /// The same surface with the opposite orientation.
    pub fn reversed(&self) -> Self {
        let tris = self
            .triangles()
            .into_iter()
            .map(|(id, [a, b, c])| (id, [c, b, a]))
            .collect();
        Self::new(tris, &self.glue_pairs()).expect("reversal preserves validity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tri(id: &str, s: [&str; 3]) -> (String, [String; 3]) {
        (id.to_string(), s.map(str::to_string))
    }

    fn glue(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn torus_from_two_triangles() {
        let s = SurfaceTriangulation::new(
            vec![tri("A", ["a", "b", "c"]), tri("B", ["c'", "a'", "b'"])],
            &glue(&[("a", "a'"), ("b", "b'"), ("c", "c'")]),
        )
        .unwrap();
        assert_eq!((s.vertex_count(), s.edge_count(), s.triangle_count()), (1, 3, 2));
        assert_eq!(s.genus().unwrap(), 1);
        assert!(s.is_closed());
        assert_eq!(s.reversed().genus().unwrap(), 1);
    }

    #[test]
    fn tetrahedron_boundary_is_a_sphere() {
        // faces of [0123] with outward orientation
        let s = SurfaceTriangulation::new(
            vec![
                tri("f0", ["12", "23", "31"]),
                tri("f1", ["03", "32", "20"]),
                tri("f2", ["01", "13", "30"]),
                tri("f3", ["02", "21", "10"]),
            ],
            &glue(&[("12", "21"), ("23", "32"), ("31", "13"), ("03", "30"), ("20", "02"), ("01", "10")]),
        )
        .unwrap();
        assert_eq!(s.vertex_count(), 4);
        assert_eq!(s.genus().unwrap(), 0);
    }

    #[test]
    fn single_triangle_has_boundary() {
        let s = SurfaceTriangulation::new(vec![tri("T", ["x", "y", "z"])], &[]).unwrap();
        let c = &s.components()[0];
        assert_eq!((c.vertices, c.boundary_cycles, c.genus), (3, 1, 0));
        assert!(!s.is_closed());
    }

    #[test]
    fn structural_errors() {
        let two = || vec![tri("A", ["a", "b", "c"]), tri("B", ["d", "e", "f"])];
        assert!(SurfaceTriangulation::new(two(), &glue(&[("a", "q")])).is_err());
        assert!(SurfaceTriangulation::new(two(), &glue(&[("a", "a")])).is_err());
        assert!(SurfaceTriangulation::new(two(), &glue(&[("a", "d"), ("a", "e")])).is_err());
        assert!(SurfaceTriangulation::new(vec![tri("A", ["a", "a", "c"])], &[]).is_err());
    }
}
