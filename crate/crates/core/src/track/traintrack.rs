use std::collections::{HashMap, VecDeque};

use num_traits::Zero;

use super::surface::SurfaceTriangulation;
use super::TrackError;
use crate::linalg::{kernel, Row};
use crate::ordgroup::Rat;

/// Weights on branches, in branch order.
pub type WeightVec = Vec<Rat>;

/// Slot of a branch end at a switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    A,
    B,
    C,
}

impl Slot {
    pub fn index(self) -> usize {
        self as usize
    }

    fn from_index(i: usize) -> Self {
        [Slot::A, Slot::B, Slot::C][i]
    }
}

/// A trivalent switch: incoming `a`, `b` and outgoing `c` (branch indices).
/// When `ccw` holds, `(a, b, c)` is the positive cyclic order around the
/// switch; otherwise `(b, a, c)` is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Switch {
    pub id: String,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub ccw: bool,
}

impl Switch {
    pub fn slot(&self, s: Slot) -> usize {
        match s {
            Slot::A => self.a,
            Slot::B => self.b,
            Slot::C => self.c,
        }
    }

    /// The incoming pair in positive order.
    pub fn positive_incoming(&self) -> (usize, usize) {
        if self.ccw {
            (self.a, self.b)
        } else {
            (self.b, self.a)
        }
    }

    /// Slots in positive cyclic order.
    pub fn rotation(&self) -> [Slot; 3] {
        if self.ccw {
            [Slot::A, Slot::B, Slot::C]
        } else {
            [Slot::B, Slot::A, Slot::C]
        }
    }
}

/// A half-branch: (switch index, slot).
pub type HalfBranch = (usize, Slot);

/// A generic train track, given as a ribbon graph: the positive cyclic order
/// at every switch fixes the surface it lives on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainTrack {
    branches: Vec<String>,
    switches: Vec<Switch>,
    ends: Vec<[HalfBranch; 2]>,
}

impl TrainTrack {
    pub fn new(branches: Vec<String>, switches: Vec<Switch>) -> Result<Self, TrackError> {
        let mut seen = HashMap::new();
        for (i, b) in branches.iter().enumerate() {
            if seen.insert(b.as_str(), i).is_some() {
                return Err(TrackError::Structure(format!("duplicate branch {b}")));
            }
        }
        let mut ends: Vec<Vec<HalfBranch>> = vec![Vec::new(); branches.len()];
        for (v, sw) in switches.iter().enumerate() {
            for s in [Slot::A, Slot::B, Slot::C] {
                let b = sw.slot(s);
                if b >= branches.len() {
                    return Err(TrackError::Structure(format!("switch {} names unknown branch", sw.id)));
                }
                ends[b].push((v, s));
            }
        }
        let ends = ends
            .into_iter()
            .enumerate()
            .map(|(b, e)| {
                <[HalfBranch; 2]>::try_from(e).map_err(|e| {
                    TrackError::Structure(format!("branch {} has {} ends attached, expected 2", branches[b], e.len()))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { branches, switches, ends })
    }

    pub fn empty() -> Self {
        Self { branches: Vec::new(), switches: Vec::new(), ends: Vec::new() }
    }

    /// The track dual to a triangulation: one switch per triangle whose
    /// outgoing branch crosses side `out[t]`, one branch per edge (same label).
    pub fn dual_of(surface: &SurfaceTriangulation, out: &[usize]) -> Result<Self, TrackError> {
        if out.len() != surface.triangle_count() || out.iter().any(|&k| k > 2) {
            return Err(TrackError::Structure("need one out side in 0..3 per triangle".into()));
        }
        if !surface.is_closed() {
            return Err(TrackError::Structure("dual track needs a closed surface".into()));
        }
        let switches = (0..surface.triangle_count())
            .map(|t| {
                let e = surface.triangle_edges(t);
                let k = out[t];
                Switch { id: surface.triangle_id(t).to_string(), a: e[(k + 1) % 3], b: e[(k + 2) % 3], c: e[k], ccw: true }
            })
            .collect();
        Self::new(surface.edge_labels().to_vec(), switches)
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn switch_count(&self) -> usize {
        self.switches.len()
    }

    pub fn branches(&self) -> &[String] {
        &self.branches
    }

    pub fn branch_index(&self, id: &str) -> Option<usize> {
        self.branches.iter().position(|b| b == id)
    }

    pub fn switches(&self) -> &[Switch] {
        &self.switches
    }

    pub fn ends(&self, branch: usize) -> [HalfBranch; 2] {
        self.ends[branch]
    }

    pub fn branch_at(&self, h: HalfBranch) -> usize {
        self.switches[h.0].slot(h.1)
    }

    /// The other end of the branch at `h`.
    pub fn twin(&self, h: HalfBranch) -> HalfBranch {
        let [x, y] = self.ends[self.branch_at(h)];
        if x == h {
            y
        } else {
            x
        }
    }

    /// Next half-branch in positive cyclic order at the same switch.
    pub fn rotate(&self, h: HalfBranch) -> HalfBranch {
        let rot = self.switches[h.0].rotation();
        let i = rot.iter().position(|&s| s == h.1).expect("slot present");
        (h.0, rot[(i + 1) % 3])
    }

    fn half_index(h: HalfBranch) -> usize {
        3 * h.0 + h.1.index()
    }

    fn half_from_index(i: usize) -> HalfBranch {
        (i / 3, Slot::from_index(i % 3))
    }

    /// Ribbon-graph faces as orbits of `h ↦ rotate(twin(h))`.
    pub fn faces(&self) -> Vec<Vec<HalfBranch>> {
        let n = 3 * self.switches.len();
        let mut seen = vec![false; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut h = Self::half_from_index(start);
            while !seen[Self::half_index(h)] {
                seen[Self::half_index(h)] = true;
                face.push(h);
                h = self.rotate(self.twin(h));
            }
            faces.push(face);
        }
        faces
    }

    /// Rows of the switch relations `w(a) + w(b) - w(c) = 0`.
    pub fn switch_matrix(&self) -> Vec<Row> {
        self.switches
            .iter()
            .map(|sw| {
                let mut row = vec![Rat::zero(); self.branches.len()];
                row[sw.a] += Rat::from_integer(1.into());
                row[sw.b] += Rat::from_integer(1.into());
                row[sw.c] -= Rat::from_integer(1.into());
                row
            })
            .collect()
    }

    /// Switch signs making the track consistently oriented, if any: with sign
    /// `+` the incoming branches point into the switch, with `-` out of it.
    pub fn orientation(&self) -> Option<Vec<bool>> {
        let n = self.switches.len();
        let mut sign: Vec<Option<bool>> = vec![None; n];
        for root in 0..n {
            if sign[root].is_some() {
                continue;
            }
            sign[root] = Some(true);
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for s in [Slot::A, Slot::B, Slot::C] {
                    let h = (v, s);
                    let t = self.twin(h);
                    // At a `+` switch an incoming slot is a head; heads and tails must pair.
                    let head_here = (s != Slot::C) == sign[v].expect("assigned");
                    let want = (t.1 != Slot::C) != head_here;
                    match sign[t.0] {
                        None => {
                            sign[t.0] = Some(want);
                            queue.push_back(t.0);
                        }
                        Some(x) if x != want => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        sign.into_iter().collect()
    }

    /// For a consistent orientation, `(tail, head)` of each branch.
    pub fn oriented_ends(&self, signs: &[bool]) -> Vec<(HalfBranch, HalfBranch)> {
        (0..self.branches.len())
            .map(|b| {
                let [x, y] = self.ends[b];
                let is_head = |h: HalfBranch| (h.1 != Slot::C) == signs[h.0];
                if is_head(y) {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect()
    }
}

pub fn check_len(tau: &TrainTrack, w: &[Rat]) -> Result<(), TrackError> {
    if w.len() != tau.branch_count() {
        return Err(TrackError::MissingWeight { expected: tau.branch_count(), got: w.len() });
    }
    Ok(())
}

pub fn switch_check(tau: &TrainTrack, w: &[Rat]) -> Result<bool, TrackError> {
    check_len(tau, w)?;
    Ok(tau.switches.iter().all(|sw| &w[sw.a] + &w[sw.b] == w[sw.c]))
}

/// Nonnegative solution of the switch relations.
pub fn in_cone(tau: &TrainTrack, w: &[Rat]) -> Result<bool, TrackError> {
    Ok(switch_check(tau, w)? && w.iter().all(|x| *x >= Rat::zero()))
}

pub fn weight_space_basis(tau: &TrainTrack) -> Vec<WeightVec> {
    kernel(&tau.switch_matrix(), tau.branch_count())
}

/// Weights from `(label, value)` pairs; every branch must be given exactly once.
pub fn weights_from_labels(tau: &TrainTrack, pairs: &[(String, Rat)]) -> Result<WeightVec, TrackError> {
    let mut w: Vec<Option<Rat>> = vec![None; tau.branch_count()];
    for (label, x) in pairs {
        let b = tau.branch_index(label).ok_or_else(|| TrackError::Structure(format!("unknown branch {label}")))?;
        if w[b].replace(x.clone()).is_some() {
            return Err(TrackError::Structure(format!("branch {label} weighted twice")));
        }
    }
    let got = w.iter().filter(|x| x.is_some()).count();
    w.into_iter().collect::<Option<Vec<_>>>().ok_or(TrackError::MissingWeight { expected: tau.branch_count(), got })
}
