use std::collections::HashMap;

use num_complex::Complex;
use num_traits::{Signed, Zero};

use super::surface::{Cx, FlatSurface, GlueSign};
use super::FlatError;
use crate::ordgroup::{rat, Rat};
use crate::track::Side;

/// Sign of the incircle determinant of `d` against the counterclockwise
/// triangle `(a, b, c)`: positive strictly inside, zero on the circle.
pub fn incircle(a: &Cx, b: &Cx, c: &Cx, d: &Cx) -> Rat {
    let row = |p: &Cx| {
        let x = &p.re - &d.re;
        let y = &p.im - &d.im;
        let n = &x * &x + &y * &y;
        [x, y, n]
    };
    let [r0, r1, r2] = [row(a), row(b), row(c)];
    &r0[0] * (&r1[1] * &r2[2] - &r1[2] * &r2[1]) - &r0[1] * (&r1[0] * &r2[2] - &r1[2] * &r2[0])
        + &r0[2] * (&r1[0] * &r2[1] - &r1[1] * &r2[0])
}

/// Incircle value of the edge `(t, i)`: the far vertex of the neighbouring
/// triangle developed against triangle `t`. `None` when both sides of the
/// edge lie in the same triangle.
fn edge_incircle(s: &FlatSurface, side: Side) -> Option<Rat> {
    let tri = s.triangulation();
    let (t, i) = side;
    let (u, j) = tri.partner(side).expect("closed surface");
    if u == t {
        return None;
    }
    let lambda = match s.edge_sign(tri.edge_of(side)) {
        GlueSign::Neg => rat(1),
        GlueSign::Pos => rat(-1),
    };
    let v = s.triangle_vectors(t);
    let w = s.triangle_vectors(u);
    let a = Complex::new(Rat::zero(), Rat::zero());
    let b = v[i].clone();
    let c = &b + &v[(i + 1) % 3];
    let q = &w[(j + 1) % 3] * lambda;
    Some(incircle(&a, &b, &c, &q))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelaunayReport {
    pub flips: usize,
    /// Edges left with a cocircular neighbour, kept by convention.
    pub cocircular: Vec<String>,
}

/// Does every edge pass the incircle test?
pub fn is_delaunay(s: &FlatSurface) -> bool {
    (0..s.edge_count()).all(|e| {
        let side = s.triangulation().edge_sides(e)[0];
        edge_incircle(s, side).is_none_or(|d| !d.is_positive())
    })
}

struct Work {
    ids: Vec<String>,
    names: Vec<[String; 3]>,
    vectors: HashMap<String, Cx>,
    glue: HashMap<String, (String, GlueSign)>,
}

impl Work {
    fn of(s: &FlatSurface) -> Self {
        let tris = s.triangulation().triangles();
        let mut glue = HashMap::new();
        for (a, b, g) in s.glues() {
            glue.insert(a.clone(), (b.clone(), g));
            glue.insert(b, (a, g));
        }
        Self {
            ids: tris.iter().map(|(id, _)| id.clone()).collect(),
            names: tris.into_iter().map(|(_, n)| n).collect(),
            vectors: s.side_vectors().into_iter().collect(),
            glue,
        }
    }

    fn build(&self, s: &FlatSurface) -> FlatSurface {
        let tris = self.ids.iter().cloned().zip(self.names.iter().cloned()).collect();
        let vectors: Vec<(String, Cx)> = self.vectors.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let mut glues: Vec<(String, String, GlueSign)> =
            self.glue.iter().filter(|(a, (b, _))| a < &b).map(|(a, (b, g))| (a.clone(), b.clone(), *g)).collect();
        glues.sort_by(|x, y| x.0.cmp(&y.0));
        FlatSurface::new(s.kind(), tris, &vectors, &glues).expect("flips keep the surface valid")
    }

    fn negate(&mut self, name: &str) {
        let v = self.vectors.get_mut(name).expect("known side");
        *v = -v.clone();
        let (other, g) = self.glue[name].clone();
        self.glue.insert(name.to_string(), (other.clone(), g.flipped()));
        let back = self.glue.get_mut(&other).expect("glued");
        back.1 = back.1.flipped();
    }

    /// Replaces the edge between `(t, i)` and `(u, j)` by the other diagonal
    /// of their quadrilateral.
    fn flip(&mut self, (t, i): Side, (u, j): Side, sign: GlueSign) {
        let nt = self.names[t].clone();
        let nu = self.names[u].clone();
        let at = |k: usize| nt[(i + k) % 3].clone();
        let au = |k: usize| nu[(j + k) % 3].clone();
        if sign == GlueSign::Pos {
            for k in [1, 2] {
                self.negate(&au(k));
            }
        }
        let vec = |w: &Self, n: &str| w.vectors[n].clone();
        let d = -vec(self, &at(2)) - vec(self, &au(1));
        self.names[t] = [au(2), at(1), at(0)];
        self.names[u] = [at(2), au(1), au(0)];
        self.vectors.insert(at(0), -d.clone());
        self.vectors.insert(au(0), d);
        self.glue.insert(at(0), (au(0), GlueSign::Neg));
        self.glue.insert(au(0), (at(0), GlueSign::Neg));
    }
}

/// Flips edges until every edge passes the incircle test. Cocircular edges
/// count as legal.
pub fn delaunay_with_report(s: &FlatSurface) -> (FlatSurface, DelaunayReport) {
    let mut cur = s.clone();
    let mut flips = 0;
    loop {
        let tri = cur.triangulation();
        let bad = (0..cur.edge_count()).find_map(|e| {
            let side = tri.edge_sides(e)[0];
            match edge_incircle(&cur, side) {
                Some(d) if d.is_positive() => Some((side, tri.partner(side).expect("closed"), cur.edge_sign(e))),
                _ => None,
            }
        });
        let Some((a, b, sign)) = bad else { break };
        let mut w = Work::of(&cur);
        w.flip(a, b, sign);
        cur = w.build(&cur);
        flips += 1;
    }
    let tri = cur.triangulation();
    let cocircular = (0..cur.edge_count())
        .filter(|&e| edge_incircle(&cur, tri.edge_sides(e)[0]).is_some_and(|d| d.is_zero()))
        .map(|e| tri.edge_label(e).to_string())
        .collect();
    (cur, DelaunayReport { flips, cocircular })
}

pub fn delaunay(s: &FlatSurface) -> FlatSurface {
    delaunay_with_report(s).0
}

/// `|Im v|` per edge; fails on a horizontal edge.
pub fn heights(s: &FlatSurface) -> Result<Vec<Rat>, FlatError> {
    (0..s.edge_count())
        .map(|e| {
            let h = s.edge_vector(e).im.abs();
            if h.is_zero() {
                Err(FlatError::HorizontalEdge(s.edge_labels()[e].clone()))
            } else {
                Ok(h)
            }
        })
        .collect()
}

/// Multiplies every vector by `c`.
pub fn rotate(s: &FlatSurface, c: &Cx) -> Result<FlatSurface, FlatError> {
    if c.is_zero() {
        return Err(FlatError::ZeroMultiplier);
    }
    s.map_vectors(|z| z * c)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// The first multiplier `p + qi` (by height `max(|p|, |q|)`, then `q`, then
/// `p`) after which no edge is horizontal. Returns 1 when none is.
pub fn find_rotation(s: &FlatSurface) -> Cx {
    let clear = |c: &Cx| (0..s.edge_count()).all(|e| !(s.edge_vector(e) * c).im.is_zero());
    for n in 1i64.. {
        let mut cands = Vec::new();
        for q in -n..=n {
            for p in 1..=n {
                if p.max(q.abs()) == n && gcd(p, q) == 1 {
                    cands.push((q.abs(), q, p));
                }
            }
        }
        cands.sort_unstable();
        for (_, q, p) in cands {
            let c = Complex::new(rat(p), rat(q));
            if clear(&c) {
                return c;
            }
        }
    }
    unreachable!("only finitely many directions are bad")
}
