use std::collections::{HashMap, HashSet};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::triangulation::Triangulation3;
use super::w4::{choice_row, torus_rows, ChoiceVector};
use super::Cone3Error;
use crate::linalg::{cone_is_trivial, positive_support, AffineSystem, Insert, Row, Subspace};
use crate::ordgroup::Rat;
use crate::track::{switch_check, thurston_form, Switch, TrainTrack};

/// A train track on the non-torus part of the boundary, given by the out side
/// of each boundary triangle's switch.
#[derive(Debug, Clone)]
pub struct ConeProblem<'a> {
    tri: &'a Triangulation3,
    track: TrainTrack,
    branch_class: Vec<usize>,
    base_rows: Vec<Row>,
}

impl<'a> ConeProblem<'a> {
    pub fn new(tri: &'a Triangulation3, out: &[Option<usize>]) -> Result<Self, Cone3Error> {
        let b = tri.boundary();
        if out.len() != b.triangle_count() {
            return Err(Cone3Error::TrackMismatch(format!(
                "{} switches for {} boundary triangles",
                out.len(),
                b.triangle_count()
            )));
        }
        let torus = tri.torus_components();
        if b.triangle_count() == 0 || torus.iter().all(|&t| t) {
            return Err(Cone3Error::Structure("boundary is empty or a union of tori".into()));
        }
        let mut branch_of_edge = vec![usize::MAX; b.edge_count()];
        let mut branches = Vec::new();
        let mut branch_class = Vec::new();
        for e in 0..b.edge_count() {
            if !torus[b.component_of_edge(e)] {
                branch_of_edge[e] = branches.len();
                branches.push(b.edge_label(e).to_string());
                branch_class.push(tri.boundary_edge_class()[e]);
            }
        }
        let mut switches = Vec::new();
        for (t, k) in out.iter().enumerate() {
            let on_torus = torus[b.component_of_triangle(t)];
            match (k, on_torus) {
                (Some(_), true) => {
                    return Err(Cone3Error::TrackMismatch(format!("switch on torus triangle {}", b.triangle_id(t))))
                }
                (None, false) => {
                    return Err(Cone3Error::TrackMismatch(format!("no switch on triangle {}", b.triangle_id(t))))
                }
                (Some(k), false) if *k > 2 => {
                    return Err(Cone3Error::TrackMismatch(format!("out side {k} on triangle {}", b.triangle_id(t))))
                }
                (Some(k), false) => {
                    let e = b.triangle_edges(t).map(|e| branch_of_edge[e]);
                    switches.push(Switch {
                        id: b.triangle_id(t).to_string(),
                        a: e[(k + 1) % 3],
                        b: e[(k + 2) % 3],
                        c: e[*k],
                        ccw: true,
                    });
                }
                (None, true) => {}
            }
        }
        let track = TrainTrack::new(branches, switches).map_err(|e| Cone3Error::TrackMismatch(e.to_string()))?;
        let mut base_rows = torus_rows(tri);
        for sw in track.switch_matrix() {
            let mut row = vec![Rat::zero(); tri.edge_count()];
            for (bi, x) in sw.into_iter().enumerate() {
                row[branch_class[bi]] += x;
            }
            base_rows.push(row);
        }
        Ok(Self { tri, track, branch_class, base_rows })
    }

    pub fn triangulation(&self) -> &Triangulation3 {
        self.tri
    }

    pub fn track(&self) -> &TrainTrack {
        &self.track
    }

    /// Edge class under each branch.
    pub fn branch_class(&self) -> &[usize] {
        &self.branch_class
    }

    fn base_system(&self) -> AffineSystem {
        let mut sys = AffineSystem::new(self.tri.edge_count());
        for r in &self.base_rows {
            sys.insert(r, &Rat::zero());
        }
        sys
    }

    fn all_branches(&self) -> Vec<usize> {
        (0..self.branch_class.len()).collect()
    }

    /// The boundary cone of a homogeneous system over edge classes.
    fn component_of(&self, sys: &AffineSystem, choice: ChoiceVector) -> Option<ConeComponent> {
        let space = Subspace::from_equations(self.tri.edge_count(), &sys.homogeneous_rows());
        let projected = space.project(&self.branch_class);
        let active = positive_support(&projected, &self.all_branches());
        if active.is_empty() {
            return None;
        }
        let zero_rows: Vec<Row> = (0..self.branch_class.len())
            .filter(|i| !active.contains(i))
            .map(|i| {
                let mut r = vec![Rat::zero(); self.branch_class.len()];
                r[i] = Rat::from_integer(1.into());
                r
            })
            .collect();
        Some(ConeComponent { span: projected.with_equations(&zero_rows), active, choice })
    }

    fn cone_is_zero(&self, sys: &AffineSystem) -> bool {
        let space = Subspace::from_equations(self.tri.edge_count(), &sys.homogeneous_rows());
        cone_is_trivial(&space.project(&self.branch_class), &self.all_branches())
    }

    pub fn component_for(&self, choice: &[u8]) -> Option<ConeComponent> {
        let mut sys = self.base_system();
        for (t, &c) in choice.iter().enumerate() {
            sys.insert(&choice_row(self.tri, t, c), &Rat::zero());
        }
        self.component_of(&sys, choice.to_vec())
    }

    /// Runs the named enumeration strategy.
    pub fn cone(&self, enumerator: &dyn ChoiceEnumerator) -> PLCone {
        let mut seen = HashSet::new();
        let mut components: Vec<ConeComponent> = enumerator
            .components(self)
            .into_iter()
            .filter(|c| seen.insert((c.span.clone(), c.active.clone())))
            .collect();
        components.sort_by(|a, b| (a.span.basis(), &a.active).cmp(&(b.span.basis(), &b.active)));
        PLCone { branches: self.track.branches().to_vec(), components }
    }

    /// Is the Thurston form zero on the component's span?
    pub fn is_isotropic(&self, c: &ConeComponent) -> bool {
        let b = c.span.basis();
        (0..b.len()).all(|i| {
            (i + 1..b.len()).all(|j| thurston_form(&self.track, &b[i], &b[j]).map(|x| x.is_zero()).unwrap_or(false))
        })
    }

    /// Dimension of the track's weight space.
    pub fn weight_space_dim(&self) -> usize {
        crate::track::weight_space_basis(&self.track).len()
    }

    /// Decides whether boundary weights (per branch) extend to a weight in
    /// some `W₄` subspace.
    pub fn member(&self, w: &[Rat]) -> Membership {
        if w.len() != self.branch_class.len() {
            return Membership::Rejected { reason: format!("expected {} weights", self.branch_class.len()) };
        }
        if !switch_check(&self.track, w).unwrap_or(false) {
            return Membership::Rejected { reason: "switch".into() };
        }
        if w.iter().any(Signed::is_negative) {
            return Membership::Rejected { reason: "negative".into() };
        }
        let n = self.tri.edge_count();
        let mut sys = AffineSystem::new(n);
        for r in torus_rows(self.tri) {
            sys.insert(&r, &Rat::zero());
        }
        for (bi, &c) in self.branch_class.iter().enumerate() {
            let mut r = vec![Rat::zero(); n];
            r[c] = Rat::from_integer(1.into());
            if sys.insert(&r, &w[bi]) == Insert::Inconsistent {
                return Membership::NotMember { reason: "boundary values conflict with torus constraints".into() };
            }
        }
        let rows: Vec<[Row; 3]> = (0..self.tri.tet_count())
            .map(|t| [1u8, 2, 3].map(|c| choice_row(self.tri, t, c)))
            .collect();
        let mut search = MemberSearch { rows: &rows, dead: HashSet::new(), choice: vec![0; rows.len()] };
        let mut done = vec![false; rows.len()];
        match search.run(sys, &mut done) {
            Some(sys) => {
                let extension = sys.particular();
                Membership::Member { choice: search.choice, extension }
            }
            None => Membership::NotMember { reason: "no choice vector admits an extension".into() },
        }
    }
}

impl ConeProblem<'_> {
    /// Substitutes a witness back: it restricts to `w`, vanishes on torus
    /// edges, and meets the pair equality `choice` names in every tetrahedron.
    pub fn verify_witness(&self, w: &[Rat], choice: &[u8], extension: &[Rat]) -> bool {
        let dot = |r: &Row| crate::linalg::dot(r, extension);
        extension.len() == self.tri.edge_count()
            && choice.len() == self.tri.tet_count()
            && self.branch_class.iter().zip(w).all(|(&c, x)| &extension[c] == x)
            && torus_rows(self.tri).iter().all(|r| dot(r).is_zero())
            && choice.iter().enumerate().all(|(t, &c)| (1..=3).contains(&c) && dot(&choice_row(self.tri, t, c)).is_zero())
    }
}

struct MemberSearch<'r> {
    rows: &'r [[Row; 3]],
    dead: HashSet<(Vec<bool>, AffineSystem)>,
    choice: ChoiceVector,
}

impl MemberSearch<'_> {
    /// Picks the unprocessed tetrahedron with fewest admissible choices.
    fn run(&mut self, sys: AffineSystem, done: &mut Vec<bool>) -> Option<AffineSystem> {
        let zero = Rat::zero();
        let mut best: Option<(usize, Vec<(u8, AffineSystem)>)> = None;
        for t in 0..self.rows.len() {
            if done[t] {
                continue;
            }
            let mut opts = Vec::new();
            for c in 0..3 {
                let mut s = sys.clone();
                if s.insert(&self.rows[t][c], &zero) != Insert::Inconsistent {
                    opts.push((c as u8 + 1, s));
                }
            }
            if opts.is_empty() {
                return None;
            }
            // A choice that adds nothing dominates the alternatives.
            if let Some(i) = opts.iter().position(|(_, s)| s.rank() == sys.rank()) {
                let pick = opts.swap_remove(i);
                best = Some((t, vec![pick]));
                break;
            }
            if best.as_ref().is_none_or(|(_, o)| opts.len() < o.len()) {
                best = Some((t, opts));
            }
        }
        let Some((t, opts)) = best else {
            return Some(sys);
        };
        let key = (done.clone(), sys);
        if self.dead.contains(&key) {
            return None;
        }
        done[t] = true;
        for (c, s) in opts {
            self.choice[t] = c;
            if let Some(found) = self.run(s, done) {
                return Some(found);
            }
        }
        done[t] = false;
        self.dead.insert(key);
        None
    }
}

/// Outcome of a membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Extension over all edge classes and the ChoiceVector it satisfies.
    Member { choice: ChoiceVector, extension: Vec<Rat> },
    /// Exhaustive search found no extension.
    NotMember { reason: String },
    /// Input fails the switch or sign precondition.
    Rejected { reason: String },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// One polyhedral piece: `span ∩ {x_i ≥ 0 : i ∈ active}` over branches,
/// with coordinates outside `active` vanishing on the span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeComponent {
    pub span: Subspace,
    pub active: Vec<usize>,
    pub choice: ChoiceVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLCone {
    pub branches: Vec<String>,
    pub components: Vec<ConeComponent>,
}

impl PLCone {
    pub fn contains(&self, w: &[Rat]) -> bool {
        self.components
            .iter()
            .any(|c| c.span.contains(w) && c.active.iter().all(|&i| !w[i].is_negative()))
    }

    pub fn max_dim(&self) -> usize {
        self.components.iter().map(|c| c.span.dim()).max().unwrap_or(0)
    }
}

/// A strategy producing cone components from ChoiceVectors.
pub trait ChoiceEnumerator {
    fn name(&self) -> &'static str;
    fn components(&self, problem: &ConeProblem) -> Vec<ConeComponent>;
}

/// Exhaustive depth-first enumeration, memoized on the reduced system and
/// pruned once the projected cone is zero.
pub struct AllChoices;

impl ChoiceEnumerator for AllChoices {
    fn name(&self) -> &'static str {
        "all"
    }

    fn components(&self, p: &ConeProblem) -> Vec<ConeComponent> {
        let t = p.tri.tet_count();
        let mut visited = HashSet::new();
        let mut zero_memo: HashMap<AffineSystem, bool> = HashMap::new();
        let mut out = Vec::new();
        let mut choice = vec![1u8; t];
        fn go(
            p: &ConeProblem,
            depth: usize,
            sys: AffineSystem,
            choice: &mut Vec<u8>,
            visited: &mut HashSet<(usize, AffineSystem)>,
            zero_memo: &mut HashMap<AffineSystem, bool>,
            out: &mut Vec<ConeComponent>,
        ) {
            if !visited.insert((depth, sys.clone())) {
                return;
            }
            let is_zero = *zero_memo.entry(sys.clone()).or_insert_with(|| p.cone_is_zero(&sys));
            if is_zero {
                return;
            }
            if depth == choice.len() {
                if let Some(c) = p.component_of(&sys, choice.clone()) {
                    out.push(c);
                }
                return;
            }
            for c in 1..=3u8 {
                let mut s = sys.clone();
                s.insert(&choice_row(p.tri, depth, c), &Rat::zero());
                choice[depth] = c;
                go(p, depth + 1, s, choice, visited, zero_memo, out);
            }
        }
        go(p, 0, p.base_system(), &mut choice, &mut visited, &mut zero_memo, &mut out);
        out
    }
}

/// Uniformly random ChoiceVectors from a seeded generator.
pub struct SampledChoices {
    pub count: usize,
    pub seed: u64,
}

impl SampledChoices {
    pub fn draw(&self, tets: usize) -> Vec<ChoiceVector> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.count).map(|_| (0..tets).map(|_| rng.gen_range(1..=3u8)).collect()).collect()
    }
}

impl ChoiceEnumerator for SampledChoices {
    fn name(&self) -> &'static str {
        "sample"
    }

    fn components(&self, p: &ConeProblem) -> Vec<ConeComponent> {
        self.draw(p.tri.tet_count()).into_iter().filter_map(|c| p.component_for(&c)).collect()
    }
}

type EnumeratorFactory = fn(Option<usize>, u64) -> Result<Box<dyn ChoiceEnumerator>, Cone3Error>;

/// Registered enumeration strategies, selected by name.
pub const ENUMERATORS: &[(&str, EnumeratorFactory)] = &[
    ("all", |_, _| Ok(Box::new(AllChoices))),
    ("sample", |n, seed| {
        let count = n.ok_or_else(|| Cone3Error::Structure("sample needs a count, as in sample:N".into()))?;
        Ok(Box::new(SampledChoices { count, seed }))
    }),
];

/// Parses `all` or `sample:N`.
pub fn enumerator(spec: &str, seed: u64) -> Result<Box<dyn ChoiceEnumerator>, Cone3Error> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => {
            let k = a.parse().map_err(|_| Cone3Error::Structure(format!("bad count in {spec}")))?;
            (n, Some(k))
        }
        None => (spec, None),
    };
    let (_, make) = ENUMERATORS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Cone3Error::Structure(format!("unknown choice strategy {name}")))?;
    make(arg, seed)
}
