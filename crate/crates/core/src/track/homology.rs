use std::collections::VecDeque;

use num_traits::Zero;

use super::traintrack::{switch_check, HalfBranch, TrainTrack};
use super::TrackError;
use crate::dsu::Dsu;
use crate::linalg::solve;
use crate::ordgroup::Rat;

/// Overall sign of the combinatorial intersection count, fixed so that the
/// pairing of weight cycles matches the Thurston form.
const INTERSECTION_SIGN: i64 = 1;

/// A closed walk on the track graph: each step leaves one switch through a
/// half-branch and arrives at the next through the twin half-branch.
#[derive(Debug, Clone)]
struct Cycle {
    steps: Vec<(HalfBranch, HalfBranch)>,
}

struct Graph<'a> {
    tau: &'a TrainTrack,
    face_of: Vec<usize>,
    face_count: usize,
}

fn half_key(h: HalfBranch) -> usize {
    3 * h.0 + h.1.index()
}

impl<'a> Graph<'a> {
    fn new(tau: &'a TrainTrack) -> Self {
        let faces = tau.faces();
        let mut face_of = vec![0; 3 * tau.switch_count()];
        for (f, face) in faces.iter().enumerate() {
            for &h in face {
                face_of[half_key(h)] = f;
            }
        }
        Self { tau, face_of, face_count: faces.len() }
    }

    /// Tree-cotree generators of first homology, as simple cycles.
    fn homology_basis(&self) -> Vec<Cycle> {
        let tau = self.tau;
        let n = tau.switch_count();
        let mut parent: Vec<Option<HalfBranch>> = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut in_tree = vec![false; tau.branch_count()];
        for root in 0..n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for h in tau.switches()[v].rotation().map(|s| (v, s)) {
                    let t = tau.twin(h);
                    if depth[t.0] == usize::MAX {
                        depth[t.0] = depth[v] + 1;
                        parent[t.0] = Some(t);
                        in_tree[tau.branch_at(h)] = true;
                        queue.push_back(t.0);
                    }
                }
            }
        }
        let mut dual = Dsu::new(self.face_count);
        let mut generators = Vec::new();
        for b in 0..tau.branch_count() {
            if in_tree[b] {
                continue;
            }
            let [x, y] = tau.ends(b);
            if !dual.union(self.face_of[half_key(x)], self.face_of[half_key(y)]) {
                generators.push(b);
            }
        }
        generators
            .into_iter()
            .map(|b| {
                let [x, y] = tau.ends(b);
                // Walk b from x.0 to y.0, then climb the tree from y.0 back to x.0.
                let mut steps = vec![(x, y)];
                let (mut up, mut down) = (Vec::new(), Vec::new());
                let (mut p, mut q) = (y.0, x.0);
                while p != q {
                    if depth[p] >= depth[q] {
                        let h = parent[p].expect("non-root");
                        up.push((h, tau.twin(h)));
                        p = tau.twin(h).0;
                    } else {
                        let h = parent[q].expect("non-root");
                        down.push((tau.twin(h), h));
                        q = tau.twin(h).0;
                    }
                }
                steps.extend(up);
                steps.extend(down.into_iter().rev());
                Cycle { steps }
            })
            .collect()
    }

    /// Net flow of `c` across the left push-off of the simple cycle `gamma`.
    fn crossing(&self, outflow: &dyn Fn(HalfBranch) -> Rat, gamma: &Cycle) -> Rat {
        let k = gamma.steps.len();
        let mut total = Rat::zero();
        for i in 0..k {
            let h_in = gamma.steps[i].1;
            let h_out = gamma.steps[(i + 1) % k].0;
            let mut h = self.tau.rotate(h_out);
            while h != h_in {
                total -= outflow(h);
                h = self.tau.rotate(h);
            }
        }
        total
    }
}

/// Homological intersection `c_{w₁} · c_{w₂}` of the weight cycles of an
/// orientable track, computed in a tree-cotree basis of the ribbon surface.
pub fn cycle_pairing(tau: &TrainTrack, w1: &[Rat], w2: &[Rat]) -> Result<Rat, TrackError> {
    let signs = tau.orientation().ok_or(TrackError::NotOrientable)?;
    for w in [w1, w2] {
        if !switch_check(tau, w)? {
            return Err(TrackError::InvalidWeight("switch relation fails".into()));
        }
    }
    let tails: Vec<HalfBranch> = tau.oriented_ends(&signs).into_iter().map(|(t, _)| t).collect();
    let graph = Graph::new(tau);
    let basis = graph.homology_basis();
    let m = basis.len();
    if m == 0 {
        return Ok(Rat::zero());
    }
    let weight_flow = |w: &[Rat]| {
        let w = w.to_vec();
        let tails = tails.clone();
        move |h: HalfBranch| {
            let b = tau.branch_at(h);
            if tails[b] == h {
                w[b].clone()
            } else {
                -w[b].clone()
            }
        }
    };
    let cycle_flow = |g: &Cycle| {
        let steps = g.steps.clone();
        move |h: HalfBranch| {
            steps.iter().fold(Rat::zero(), |acc, &(a, b)| {
                if a == h {
                    acc + Rat::from_integer(1.into())
                } else if b == h {
                    acc - Rat::from_integer(1.into())
                } else {
                    acc
                }
            })
        }
    };
    // Transposed intersection matrix: row j holds γ_k · γ_j over k.
    let mut it = vec![vec![Rat::zero(); m]; m];
    for (k, gk) in basis.iter().enumerate() {
        let f = cycle_flow(gk);
        for (j, gj) in basis.iter().enumerate() {
            it[j][k] = graph.crossing(&f, gj);
        }
    }
    let f1 = weight_flow(w1);
    let f2 = weight_flow(w2);
    let p: Vec<Rat> = basis.iter().map(|g| graph.crossing(&f1, g)).collect();
    let q: Vec<Rat> = basis.iter().map(|g| graph.crossing(&f2, g)).collect();
    let x = solve(&it, &p, m).ok_or_else(|| TrackError::Structure("degenerate intersection matrix".into()))?;
    let value = x.iter().zip(&q).fold(Rat::zero(), |acc, (a, b)| acc - a * b);
    Ok(value * Rat::from_integer(INTERSECTION_SIGN.into()))
}
