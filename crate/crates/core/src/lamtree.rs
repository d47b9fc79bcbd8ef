//! Finite metric trees with lengths in a lexicographic group.
//!
//! Distances, the four-point condition, displacement of automorphisms,
//! convex-subgroup subtrees, base change, and Busemann/pushing maps toward a
//! distinguished end. The end is a formal semi-infinite ray glued at an anchor
//! vertex, which keeps everything finite.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use num_traits::{Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::ordgroup::{fmt_rat, lex_cmp, LexVec, OrdError, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("edge {0} has non-positive length")]
    NonPositiveLength(String),
    #[error("invalid tree point: {0}")]
    Domain(String),
    #[error("not a metric: {0}")]
    NotAMetric(String),
    #[error("map is not a length-preserving automorphism: {0}")]
    NotAnIsometry(String),
    #[error("base change does not preserve order on edge {0}")]
    OrderViolation(String),
    #[error("operation needs a rank-1 tree, got rank {0}")]
    UnsupportedRank(usize),
    #[error("tree has no distinguished end")]
    NoEnd,
    #[error(transparent)]
    Ord(#[from] OrdError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEdge {
    pub id: String,
    pub u: usize,
    pub v: usize,
    pub length: LexVec,
}

/// A finite tree with positive lexicographic edge lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricTree {
    vertices: Vec<String>,
    edges: Vec<TreeEdge>,
    end: Option<usize>,
    rank: usize,
    adj: Vec<Vec<(usize, usize)>>,
    dist: Vec<Vec<LexVec>>,
}

/// A point of a tree: a vertex, a point inside an edge (offset measured from
/// the edge's `u` endpoint), or a point on the formal ray toward the end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreePoint {
    Vertex(usize),
    OnEdge { edge: usize, offset: LexVec },
    Ray { excess: LexVec },
}

impl MetricTree {
    /// The rank is read off the edge lengths; a single vertex gets rank 1.
    pub fn new(vertices: Vec<String>, edges: Vec<TreeEdge>, end: Option<usize>) -> Result<Self, TreeError> {
        let rank = edges.first().map_or(1, |e| e.length.rank());
        Self::with_rank(vertices, edges, end, rank)
    }

    pub fn with_rank(
        vertices: Vec<String>,
        edges: Vec<TreeEdge>,
        end: Option<usize>,
        rank: usize,
    ) -> Result<Self, TreeError> {
        if rank == 0 {
            return Err(OrdError::ZeroRank.into());
        }
        let n = vertices.len();
        if n == 0 {
            return Err(TreeError::NotATree("no vertices".into()));
        }
        if edges.len() + 1 != n {
            return Err(TreeError::NotATree(format!("{} vertices but {} edges", n, edges.len())));
        }
        let mut adj = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n || e.u == e.v {
                return Err(TreeError::NotATree(format!("bad endpoints on edge {}", e.id)));
            }
            if e.length.rank() != rank {
                return Err(OrdError::Dimension { left: rank, right: e.length.rank() }.into());
            }
            if !e.length.is_positive() {
                return Err(TreeError::NonPositiveLength(e.id.clone()));
            }
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        if let Some(a) = end {
            if a >= n {
                return Err(TreeError::NotATree("end anchor out of range".into()));
            }
        }
        let mut tree = Self { vertices, edges, end, rank, adj, dist: Vec::new() };
        let mut dist = Vec::with_capacity(n);
        for s in 0..n {
            let row = tree.single_source(s)?;
            dist.push(row);
        }
        tree.dist = dist;
        Ok(tree)
    }

    fn single_source(&self, s: usize) -> Result<Vec<LexVec>, TreeError> {
        let n = self.vertices.len();
        let mut d: Vec<Option<LexVec>> = vec![None; n];
        d[s] = Some(LexVec::zero(self.rank));
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let dx = d[x].clone().expect("visited");
            for &(y, e) in &self.adj[x] {
                if d[y].is_none() {
                    d[y] = Some(dx.try_add(&self.edges[e].length)?);
                    queue.push_back(y);
                }
            }
        }
        d.into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| TreeError::NotATree("disconnected".into()))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn end(&self) -> Option<usize> {
        self.end
    }

    pub fn vertex_distance(&self, a: usize, b: usize) -> &LexVec {
        &self.dist[a][b]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adj[a].iter().find(|&&(y, _)| y == b).map(|&(_, e)| e)
    }

    pub fn validate_point(&self, p: &TreePoint) -> Result<(), TreeError> {
        match p {
            TreePoint::Vertex(v) if *v < self.vertices.len() => Ok(()),
            TreePoint::Vertex(v) => Err(TreeError::Domain(format!("vertex index {v}"))),
            TreePoint::OnEdge { edge, offset } => {
                let e = self.edges.get(*edge).ok_or_else(|| TreeError::Domain(format!("edge index {edge}")))?;
                let lo = lex_cmp(offset, &LexVec::zero(self.rank))?;
                let hi = lex_cmp(offset, &e.length)?;
                if lo == Ordering::Less || hi == Ordering::Greater {
                    return Err(TreeError::Domain(format!("offset {offset} outside edge {}", e.id)));
                }
                Ok(())
            }
            TreePoint::Ray { excess } => {
                if self.end.is_none() {
                    return Err(TreeError::NoEnd);
                }
                if excess.rank() != self.rank || excess.signum() == Ordering::Less {
                    return Err(TreeError::Domain(format!("ray excess {excess}")));
                }
                Ok(())
            }
        }
    }

    /// Distance from a point to a vertex.
    fn to_vertex(&self, p: &TreePoint, w: usize) -> Result<LexVec, TreeError> {
        Ok(match p {
            TreePoint::Vertex(v) => self.dist[*v][w].clone(),
            TreePoint::OnEdge { edge, offset } => {
                let e = &self.edges[*edge];
                let via_u = offset.try_add(&self.dist[e.u][w])?;
                let via_v = e.length.try_sub(offset)?.try_add(&self.dist[e.v][w])?;
                lex_min(via_u, via_v)
            }
            TreePoint::Ray { excess } => {
                let a = self.end.ok_or(TreeError::NoEnd)?;
                excess.try_add(&self.dist[a][w])?
            }
        })
    }

    pub fn distance(&self, x: &TreePoint, y: &TreePoint) -> Result<LexVec, TreeError> {
        self.validate_point(x)?;
        self.validate_point(y)?;
        match (x, y) {
            (TreePoint::Ray { excess: a }, TreePoint::Ray { excess: b }) => Ok(a.try_sub(b)?.abs()),
            (TreePoint::OnEdge { edge: e1, offset: t1 }, TreePoint::OnEdge { edge: e2, offset: t2 }) if e1 == e2 => {
                Ok(t1.try_sub(t2)?.abs())
            }
            (_, TreePoint::Vertex(w)) => self.to_vertex(x, *w),
            (TreePoint::Vertex(w), _) => self.to_vertex(y, *w),
            (TreePoint::OnEdge { edge, offset }, other) | (other, TreePoint::OnEdge { edge, offset }) => {
                let e = &self.edges[*edge];
                let via_u = offset.try_add(&self.to_vertex(other, e.u)?)?;
                let via_v = e.length.try_sub(offset)?.try_add(&self.to_vertex(other, e.v)?)?;
                Ok(lex_min(via_u, via_v))
            }
        }
    }

    /// Canonical form: interior points at offset 0 or full length become vertices.
    pub fn normalize(&self, p: TreePoint) -> TreePoint {
        if let TreePoint::OnEdge { edge, offset } = &p {
            let e = &self.edges[*edge];
            if offset.is_zero() {
                return TreePoint::Vertex(e.u);
            }
            if *offset == e.length {
                return TreePoint::Vertex(e.v);
            }
        }
        p
    }

    /// Generates a random tree on `n` vertices with random positive lengths of the given rank.
    pub fn random<R: Rng>(rng: &mut R, n: usize, rank: usize, with_end: bool) -> Self {
        let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let edges = (1..n)
            .map(|i| TreeEdge {
                id: format!("e{i}"),
                u: rng.gen_range(0..i),
                v: i,
                length: random_positive(rng, rank),
            })
            .collect();
        let end = with_end.then(|| rng.gen_range(0..n));
        Self::with_rank(vertices, edges, end, rank).expect("random construction is a tree")
    }
}

fn lex_min(a: LexVec, b: LexVec) -> LexVec {
    if lex_cmp(&a, &b).expect("same rank") == Ordering::Greater {
        b
    } else {
        a
    }
}

/// A random positive element: small integer coordinates, first nonzero positive.
pub fn random_positive<R: Rng>(rng: &mut R, rank: usize) -> LexVec {
    loop {
        let coords: Vec<i64> = (0..rank).map(|_| rng.gen_range(-3..=4)).collect();
        let v = LexVec::from_ints(&coords);
        if v.is_positive() {
            return v;
        }
    }
}

/// True iff, among `d(x,y)+d(z,t)`, `d(x,z)+d(y,t)`, `d(x,t)+d(y,z)`, the two
/// largest are equal.
pub fn four_point_check(d: &[[LexVec; 4]; 4]) -> Result<bool, OrdError> {
    let mut sums = [
        d[0][1].try_add(&d[2][3])?,
        d[0][2].try_add(&d[1][3])?,
        d[0][3].try_add(&d[1][2])?,
    ];
    let mut err = None;
    sums.sort_by(|a, b| {
        lex_cmp(a, b).unwrap_or_else(|e| {
            err = Some(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(sums[1] == sums[2])
}

/// Brute-force 0-hyperbolicity of a finite metric.
pub fn is_zero_hyperbolic(d: &[Vec<LexVec>]) -> Result<bool, TreeError> {
    let n = d.len();
    for i in 0..n {
        if d[i].len() != n {
            return Err(TreeError::NotAMetric("matrix is not square".into()));
        }
        if !d[i][i].is_zero() {
            return Err(TreeError::NotAMetric(format!("nonzero diagonal at {i}")));
        }
        for j in 0..n {
            if d[i][j] != d[j][i] {
                return Err(TreeError::NotAMetric(format!("asymmetric at ({i},{j})")));
            }
            if i != j && !d[i][j].is_positive() {
                return Err(TreeError::NotAMetric(format!("non-positive distance at ({i},{j})")));
            }
            for k in 0..n {
                let via = d[i][k].try_add(&d[k][j])?;
                if lex_cmp(&d[i][j], &via)? == Ordering::Greater {
                    return Err(TreeError::NotAMetric(format!("triangle inequality fails at ({i},{k},{j})")));
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for e in c + 1..n {
                    let idx = [a, b, c, e];
                    let sub: [[LexVec; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| d[idx[i]][idx[j]].clone()));
                    if !four_point_check(&sub)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `min d(x, g x)` over vertices and edge midpoints, for a vertex permutation `g`.
pub fn min_displacement(tree: &MetricTree, g: &[usize]) -> Result<LexVec, TreeError> {
    let n = tree.vertex_count();
    if g.len() != n {
        return Err(TreeError::NotAnIsometry("permutation has wrong length".into()));
    }
    let mut seen = vec![false; n];
    for &x in g {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(TreeError::NotAnIsometry("not a permutation".into()));
        }
    }
    let mut image_edge = Vec::with_capacity(tree.edges.len());
    for e in &tree.edges {
        let f = tree
            .edge_between(g[e.u], g[e.v])
            .ok_or_else(|| TreeError::NotAnIsometry(format!("edge {} has no image", e.id)))?;
        if tree.edges[f].length != e.length {
            return Err(TreeError::NotAnIsometry(format!("edge {} changes length", e.id)));
        }
        image_edge.push(f);
    }
    let mut best: Option<LexVec> = None;
    let mut consider = |d: LexVec| {
        if best.as_ref().is_none_or(|b| lex_cmp(&d, b).expect("same rank") == Ordering::Less) {
            best = Some(d);
        }
    };
    for v in 0..n {
        consider(tree.vertex_distance(v, g[v]).clone());
    }
    let two = Rat::from_integer(2.into());
    for (i, e) in tree.edges.iter().enumerate() {
        let half = e.length.scale(&two.recip());
        let mid = TreePoint::OnEdge { edge: i, offset: half.clone() };
        let img = TreePoint::OnEdge { edge: image_edge[i], offset: half };
        consider(tree.distance(&mid, &img)?);
    }
    Ok(best.unwrap_or_else(|| LexVec::zero(tree.rank())))
}

/// Applies a rational matrix (rows = target coordinates) to every edge length.
pub fn base_change(tree: &MetricTree, m: &[Vec<Rat>]) -> Result<MetricTree, TreeError> {
    let edges = tree
        .edges
        .iter()
        .map(|e| {
            let length = apply_matrix(m, &e.length)?;
            if !length.is_positive() {
                return Err(TreeError::OrderViolation(e.id.clone()));
            }
            Ok(TreeEdge { length, ..e.clone() })
        })
        .collect::<Result<Vec<_>, _>>()?;
    MetricTree::new(tree.vertices.clone(), edges, tree.end)
}

pub fn apply_matrix(m: &[Vec<Rat>], x: &LexVec) -> Result<LexVec, OrdError> {
    let coords = m
        .iter()
        .map(|row| {
            if row.len() != x.rank() {
                return Err(OrdError::Dimension { left: row.len(), right: x.rank() });
            }
            Ok(row.iter().zip(x.coords()).fold(Rat::zero(), |acc, (a, b)| acc + a * b))
        })
        .collect::<Result<Vec<_>, _>>()?;
    LexVec::new(coords)
}

/// The subtree `{ y : d(x, y) ∈ Λ' }` where `Λ'` is the convex subgroup of
/// vectors vanishing before coordinate `k` (1-based). Lengths are truncated to
/// coordinates `k..n`.
pub fn subtree_at(tree: &MetricTree, x: usize, k: usize) -> Result<MetricTree, TreeError> {
    if k == 0 || k > tree.rank() {
        return Err(TreeError::Domain(format!("convex subgroup index {k} for rank {}", tree.rank())));
    }
    let in_sub = |v: usize| tree.vertex_distance(x, v).coords()[..k - 1].iter().all(Zero::is_zero);
    let keep: Vec<usize> = (0..tree.vertex_count()).filter(|&v| in_sub(v)).collect();
    let index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let vertices = keep.iter().map(|&v| tree.vertices[v].clone()).collect();
    let edges = tree
        .edges
        .iter()
        .filter(|e| index.contains_key(&e.u) && index.contains_key(&e.v))
        .map(|e| TreeEdge { id: e.id.clone(), u: index[&e.u], v: index[&e.v], length: e.length.truncate_from(k) })
        .collect();
    MetricTree::new(vertices, edges, None)
}

fn require_rank_one_end(tree: &MetricTree) -> Result<usize, TreeError> {
    if tree.rank() != 1 {
        return Err(TreeError::UnsupportedRank(tree.rank()));
    }
    tree.end.ok_or(TreeError::NoEnd)
}

/// Busemann function of the end, normalized to vanish at the anchor.
pub fn busemann(tree: &MetricTree, x: &TreePoint) -> Result<Rat, TreeError> {
    let anchor = require_rank_one_end(tree)?;
    tree.validate_point(x)?;
    Ok(match x {
        TreePoint::Ray { excess } => -excess.coords()[0].clone(),
        _ => tree.distance(x, &TreePoint::Vertex(anchor))?.coords()[0].clone(),
    })
}

/// Slides `x` a distance `s` toward the end.
pub fn push(tree: &MetricTree, x: &TreePoint, s: &Rat) -> Result<TreePoint, TreeError> {
    let anchor = require_rank_one_end(tree)?;
    tree.validate_point(x)?;
    if s.is_negative() {
        return Err(TreeError::Domain(format!("push distance {} is negative", fmt_rat(s))));
    }
    let lv = |r: Rat| LexVec::new(vec![r]).expect("rank one");
    if let TreePoint::Ray { excess } = x {
        return Ok(TreePoint::Ray { excess: lv(&excess.coords()[0] + s) });
    }
    let to_anchor = tree.distance(x, &TreePoint::Vertex(anchor))?.coords()[0].clone();
    if *s >= to_anchor {
        return Ok(tree.normalize(TreePoint::Ray { excess: lv(s - &to_anchor) }));
    }
    // Walk toward the anchor from the starting point.
    let mut remaining = s.clone();
    let mut at = match x {
        TreePoint::Vertex(v) => *v,
        TreePoint::OnEdge { edge, offset } => {
            let e = &tree.edges[*edge];
            let t = offset.coords()[0].clone();
            let len = e.length.coords()[0].clone();
            let (toward, dist, sign) = if tree.vertex_distance(e.u, anchor).coords()[0] < tree.vertex_distance(e.v, anchor).coords()[0] {
                (e.u, t.clone(), -1)
            } else {
                (e.v, &len - &t, 1)
            };
            if remaining < dist {
                let off = if sign < 0 { &t - &remaining } else { &t + &remaining };
                return Ok(tree.normalize(TreePoint::OnEdge { edge: *edge, offset: lv(off) }));
            }
            remaining -= dist;
            toward
        }
        TreePoint::Ray { .. } => unreachable!(),
    };
    loop {
        if remaining.is_zero() {
            return Ok(TreePoint::Vertex(at));
        }
        let (next, e) = tree.adj[at]
            .iter()
            .copied()
            .find(|&(y, _)| tree.vertex_distance(y, anchor).coords()[0] < tree.vertex_distance(at, anchor).coords()[0])
            .expect("a vertex other than the anchor has a neighbor closer to it");
        let edge = &tree.edges[e];
        let len = edge.length.coords()[0].clone();
        if remaining < len {
            let off = if edge.u == at { remaining.clone() } else { &len - &remaining };
            return Ok(tree.normalize(TreePoint::OnEdge { edge: e, offset: lv(off) }));
        }
        remaining -= len;
        at = next;
    }
}

/// Assignment of domain vertex labels to points of a target tree.
#[derive(Debug, Clone, Default)]
pub struct TreeMap {
    pub images: HashMap<String, TreePoint>,
}

/// `w(e) = d(f(u), f(v))` for each edge `{u, v}`.
pub fn weight_from_vertex_map(
    tree: &MetricTree,
    domain: &[String],
    f: &TreeMap,
    edges: &[(String, String)],
) -> Result<Vec<LexVec>, TreeError> {
    for v in domain {
        if !f.images.contains_key(v) {
            return Err(TreeError::Domain(format!("vertex {v} is not mapped")));
        }
    }
    edges
        .iter()
        .map(|(u, v)| {
            let pu = f.images.get(u).ok_or_else(|| TreeError::Domain(format!("vertex {u} is not mapped")))?;
            let pv = f.images.get(v).ok_or_else(|| TreeError::Domain(format!("vertex {v} is not mapped")))?;
            tree.distance(pu, pv)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordgroup::{rat, ratio};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lv(xs: &[i64]) -> LexVec {
        LexVec::from_ints(xs)
    }

    fn tree(n: usize, edges: &[(usize, usize, &[i64])], end: Option<usize>) -> MetricTree {
        let vertices = (0..n).map(|i| format!("v{i}")).collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v, l))| TreeEdge { id: format!("e{i}"), u, v, length: lv(l) })
            .collect();
        MetricTree::new(vertices, edges, end).unwrap()
    }

    fn vtx(v: usize) -> TreePoint {
        TreePoint::Vertex(v)
    }

    #[test]
    fn distance_examples() {
        let t = tree(3, &[(0, 1, &[1, 0]), (1, 2, &[0, 2])], None);
        assert_eq!(t.distance(&vtx(0), &vtx(2)).unwrap(), lv(&[1, 2]));
        assert!(t.distance(&vtx(1), &vtx(1)).unwrap().is_zero());
        let star = tree(3, &[(0, 1, &[2]), (0, 2, &[3])], None);
        assert_eq!(star.distance(&vtx(1), &vtx(2)).unwrap(), lv(&[5]));
        let mid = TreePoint::OnEdge { edge: 1, offset: lv(&[1]) };
        assert_eq!(star.distance(&mid, &vtx(1)).unwrap(), lv(&[3]));
        assert!(matches!(star.distance(&vtx(9), &vtx(1)), Err(TreeError::Domain(_))));
    }

    #[test]
    fn single_vertex_keeps_its_rank() {
        let t = MetricTree::random(&mut ChaCha8Rng::seed_from_u64(0), 1, 3, false);
        assert_eq!(t.rank(), 3);
        assert_eq!(t.vertex_distance(0, 0), &LexVec::zero(3));
    }

    #[test]
    fn tree_rejects_cycles_and_zero_lengths() {
        let vertices: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        let e = |u, v, l: &[i64]| TreeEdge { id: format!("{u}{v}"), u, v, length: lv(l) };
        assert!(MetricTree::new(vertices.clone(), vec![e(0, 1, &[1])], None).is_err());
        assert!(matches!(
            MetricTree::new(vertices, vec![e(0, 1, &[1]), e(1, 2, &[0])], None),
            Err(TreeError::NonPositiveLength(_))
        ));
    }

    fn line_metric(pos: &[i64]) -> Vec<Vec<LexVec>> {
        pos.iter().map(|a| pos.iter().map(|b| lv(&[(a - b).abs()])).collect()).collect()
    }

    #[test]
    fn four_point_examples() {
        let d = line_metric(&[0, 1, 2, 3]);
        let arr: [[LexVec; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| d[i][j].clone()));
        assert!(four_point_check(&arr).unwrap());

        let eq: [[LexVec; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| lv(&[(i != j) as i64])));
        assert!(four_point_check(&eq).unwrap());

        // Square: sides 1, diagonals 2 (points 0,1,2,3 around the square).
        let sq = |i: usize, j: usize| -> i64 {
            if i == j {
                0
            } else if (i + 2) % 4 == j {
                2
            } else {
                1
            }
        };
        let square: [[LexVec; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| lv(&[sq(i, j)])));
        assert!(!four_point_check(&square).unwrap());
        let rows: Vec<Vec<LexVec>> = square.iter().map(|r| r.to_vec()).collect();
        assert!(!is_zero_hyperbolic(&rows).unwrap());
    }

    #[test]
    fn zero_hyperbolic_examples() {
        let t = tree(5, &[(0, 1, &[1, 2]), (1, 2, &[0, 3]), (1, 3, &[2, -1]), (3, 4, &[0, 1])], None);
        let d: Vec<Vec<LexVec>> = (0..5).map(|i| (0..5).map(|j| t.vertex_distance(i, j).clone()).collect()).collect();
        assert!(is_zero_hyperbolic(&d).unwrap());
        assert!(is_zero_hyperbolic(&line_metric(&[0, 4, 9])).unwrap());
        let bad = vec![vec![lv(&[0]), lv(&[1]), lv(&[5])], vec![lv(&[1]), lv(&[0]), lv(&[1])], vec![lv(&[5]), lv(&[1]), lv(&[0])]];
        assert!(matches!(is_zero_hyperbolic(&bad), Err(TreeError::NotAMetric(_))));
    }

    #[test]
    fn displacement_examples() {
        let t = tree(4, &[(0, 1, &[1]), (0, 2, &[1]), (0, 3, &[1])], None);
        assert!(min_displacement(&t, &[0, 1, 2, 3]).unwrap().is_zero());
        assert!(min_displacement(&t, &[0, 2, 3, 1]).unwrap().is_zero());
        let single = tree(2, &[(0, 1, &[2, 1])], None);
        assert!(min_displacement(&single, &[1, 0]).unwrap().is_zero());
        let path = tree(3, &[(0, 1, &[1]), (1, 2, &[2])], None);
        assert!(matches!(min_displacement(&path, &[2, 1, 0]), Err(TreeError::NotAnIsometry(_))));
    }

    #[test]
    fn base_change_examples() {
        let t = tree(2, &[(0, 1, &[3])], None);
        let embed = vec![vec![rat(0)], vec![rat(1)]];
        assert_eq!(base_change(&t, &embed).unwrap().edges()[0].length, lv(&[0, 3]));
        let double = vec![vec![rat(2)]];
        let star = tree(3, &[(0, 1, &[2]), (0, 2, &[3])], None);
        assert_eq!(base_change(&star, &double).unwrap().vertex_distance(1, 2), &lv(&[10]));
        assert!(matches!(base_change(&t, &[vec![rat(0)]]), Err(TreeError::OrderViolation(_))));
    }

    #[test]
    fn subtree_examples() {
        let t = tree(3, &[(0, 1, &[0, 1]), (1, 2, &[1, 0])], None);
        let s = subtree_at(&t, 0, 2).unwrap();
        assert_eq!(s.vertex_ids(), &["v0".to_string(), "v1".to_string()]);
        assert_eq!(s.edges()[0].length, lv(&[1]));
        assert_eq!(subtree_at(&t, 0, 1).unwrap().vertex_count(), 3);
        let iso = tree(2, &[(0, 1, &[1, 5])], None);
        assert_eq!(subtree_at(&iso, 0, 2).unwrap().vertex_count(), 1);
    }

    #[test]
    fn busemann_and_push_examples() {
        // anchor v0; path v0 - v1 (3) - v2 (2); v1 - v3 (5)... as a spider
        let t = tree(4, &[(0, 1, &[3]), (1, 2, &[2]), (0, 3, &[5])], Some(0));
        assert_eq!(busemann(&t, &vtx(0)).unwrap(), rat(0));
        assert_eq!(busemann(&t, &vtx(3)).unwrap(), rat(5));
        assert_eq!(busemann(&t, &TreePoint::Ray { excess: lv(&[2]) }).unwrap(), rat(-2));
        assert_eq!(push(&t, &vtx(2), &rat(0)).unwrap(), vtx(2));
        assert_eq!(push(&t, &vtx(3), &rat(7)).unwrap(), TreePoint::Ray { excess: lv(&[2]) });
        assert_eq!(push(&t, &vtx(2), &rat(2)).unwrap(), vtx(1));
        assert_eq!(
            push(&t, &vtx(2), &rat(3)).unwrap(),
            TreePoint::OnEdge { edge: 0, offset: lv(&[2]) }
        );
        assert!(matches!(push(&t, &vtx(2), &rat(-1)), Err(TreeError::Domain(_))));
        let r2 = tree(2, &[(0, 1, &[1, 1])], Some(0));
        assert!(matches!(busemann(&r2, &vtx(1)), Err(TreeError::UnsupportedRank(2))));
    }

    #[test]
    fn pushing_leaves_from_common_junction() {
        // junction o = v1 on the anchor path; p at distance 2, q at distance 5.
        let t = tree(4, &[(0, 1, &[4]), (1, 2, &[2]), (1, 3, &[5])], Some(0));
        let (p, q) = (vtx(2), vtx(3));
        let s = rat(5);
        let pp = push(&t, &p, &s).unwrap();
        let pq = push(&t, &q, &s).unwrap();
        assert_eq!(t.distance(&pp, &pq).unwrap(), lv(&[3]));
        let diff = busemann(&t, &p).unwrap() - busemann(&t, &q).unwrap();
        assert_eq!(diff.abs(), rat(3));
        let half = push(&t, &q, &ratio(1, 2)).unwrap();
        assert_eq!(t.distance(&half, &q).unwrap(), LexVec::new(vec![ratio(1, 2)]).unwrap());
    }

    #[test]
    fn weight_map_examples() {
        let t = tree(4, &[(0, 1, &[1]), (1, 2, &[1]), (2, 3, &[1])], None);
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let mut f = TreeMap::default();
        for (i, n) in names.iter().enumerate() {
            f.images.insert(n.clone(), vtx(i));
        }
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
        let w = weight_from_vertex_map(&t, &names, &f, &edges).unwrap();
        let got: Vec<i64> = w.iter().map(|x| x.coords()[0].to_integer().try_into().unwrap()).collect();
        assert_eq!(got, vec![1, 2, 3, 1, 2, 1]);

        let mut constant = TreeMap::default();
        for n in &names {
            constant.images.insert(n.clone(), vtx(2));
        }
        assert!(weight_from_vertex_map(&t, &names, &constant, &edges).unwrap().iter().all(LexVec::is_zero));

        f.images.remove("d");
        assert!(matches!(weight_from_vertex_map(&t, &names, &f, &edges), Err(TreeError::Domain(_))));
    }

    proptest! {
        #[test]
        fn random_trees_are_metric_and_four_point(seed in any::<u64>(), n in 2usize..9, rank in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = MetricTree::random(&mut rng, n, rank, false);
            let d: Vec<Vec<LexVec>> = (0..n).map(|i| (0..n).map(|j| t.vertex_distance(i, j).clone()).collect()).collect();
            prop_assert!(is_zero_hyperbolic(&d).unwrap());
        }

        #[test]
        fn base_change_composes(seed in any::<u64>(), a in 1i64..5, b in 1i64..5, c in -3i64..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = MetricTree::random(&mut rng, 6, 1, false);
            let m1 = vec![vec![rat(a)], vec![rat(c)]];
            let m2 = vec![vec![rat(b), rat(0)], vec![rat(1), rat(1)]];
            let seq = base_change(&base_change(&t, &m1).unwrap(), &m2).unwrap();
            let prod: Vec<Vec<Rat>> = m2.iter().map(|r| vec![&r[0] * &m1[0][0] + &r[1] * &m1[1][0]]).collect();
            let once = base_change(&t, &prod).unwrap();
            for i in 0..6 {
                for j in 0..6 {
                    prop_assert_eq!(seq.vertex_distance(i, j), once.vertex_distance(i, j));
                    let direct = apply_matrix(&prod, t.vertex_distance(i, j)).unwrap();
                    prop_assert_eq!(once.vertex_distance(i, j), &direct);
                }
            }
        }

        #[test]
        fn pushing_identity(seed in any::<u64>(), n in 2usize..10) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = MetricTree::random(&mut rng, n, 1, true);
            let anchor = t.end().unwrap();
            for p in 0..n {
                for q in 0..n {
                    // junction of the two rays toward the end
                    let dp = t.vertex_distance(p, anchor).coords()[0].clone();
                    let dq = t.vertex_distance(q, anchor).coords()[0].clone();
                    let dpq = t.vertex_distance(p, q).coords()[0].clone();
                    let half = Rat::from_integer(2.into()).recip();
                    let po = (&dp - &dq + &dpq) * &half;
                    let qo = (&dq - &dp + &dpq) * &half;
                    let s0 = po.clone().max(qo.clone());
                    let target = (busemann(&t, &vtx(p)).unwrap() - busemann(&t, &vtx(q)).unwrap()).abs();
                    for s in [s0.clone(), s0 + rat(1)] {
                        let a = push(&t, &vtx(p), &s).unwrap();
                        let b = push(&t, &vtx(q), &s).unwrap();
                        prop_assert_eq!(t.distance(&a, &b).unwrap().coords()[0].clone(), target.clone());
                    }
                }
            }
        }
    }
}
