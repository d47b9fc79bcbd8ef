use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Signed, Zero};

use super::FlatError;
use crate::ordgroup::{fmt_rat, rat, Rat};
use crate::track::{Side, SurfaceTriangulation};

/// A complex number with rational parts.
pub type Cx = Complex<Rat>;

pub fn cx(re: i64, im: i64) -> Cx {
    Complex::new(rat(re), rat(im))
}

pub fn fmt_cx(z: &Cx) -> String {
    format!("{} {}", fmt_rat(&z.re), fmt_rat(&z.im))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    Translation,
    HalfTranslation,
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceKind::Translation => "translation",
            SurfaceKind::HalfTranslation => "half-translation",
        })
    }
}

impl FromStr for SurfaceKind {
    type Err = FlatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "translation" => Ok(SurfaceKind::Translation),
            "half-translation" => Ok(SurfaceKind::HalfTranslation),
            _ => Err(FlatError::Structure(format!("unknown surface kind {s}"))),
        }
    }
}

/// How the vectors of two glued sides relate: `Neg` for a translation
/// (`v' = -v`), `Pos` for a half-turn (`v' = v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GlueSign {
    Neg,
    Pos,
}

impl GlueSign {
    pub fn flipped(self) -> Self {
        match self {
            GlueSign::Neg => GlueSign::Pos,
            GlueSign::Pos => GlueSign::Neg,
        }
    }
}

impl fmt::Display for GlueSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GlueSign::Neg => "neg",
            GlueSign::Pos => "pos",
        })
    }
}

impl FromStr for GlueSign {
    type Err = FlatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "neg" => Ok(GlueSign::Neg),
            "pos" => Ok(GlueSign::Pos),
            _ => Err(FlatError::Structure(format!("unknown gluing sign {s}"))),
        }
    }
}

/// Zero orders of the quadratic differential, largest first, with the
/// square flag. Marked points are left out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub multiplicities: Vec<i64>,
    pub square: bool,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ns: Vec<String> = self.multiplicities.iter().map(|n| n.to_string()).collect();
        write!(f, "({}) {}", ns.join(", "), if self.square { "+1" } else { "-1" })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub symbol: Symbol,
    pub genus: i64,
    /// Cone angle at each vertex as a multiple of π.
    pub cone_angles: Vec<u64>,
    pub marked_points: usize,
    pub area: Rat,
}

/// Closed surface glued from triangles with rational edge vectors. Each
/// triangle lists its sides counterclockwise; side `i` runs from corner `i`
/// to corner `i+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatSurface {
    kind: SurfaceKind,
    comb: SurfaceTriangulation,
    vectors: Vec<[Cx; 3]>,
    signs: Vec<GlueSign>,
}

fn signed_area(u: &Cx, v: &Cx) -> Rat {
    (u.conj() * v).im / rat(2)
}

impl FlatSurface {
    pub fn new(
        kind: SurfaceKind,
        triangles: Vec<(String, [String; 3])>,
        vectors: &[(String, Cx)],
        glues: &[(String, String, GlueSign)],
    ) -> Result<Self, FlatError> {
        let pairs: Vec<(String, String)> = glues.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
        let comb = SurfaceTriangulation::new(triangles, &pairs)?;
        if !comb.is_closed() {
            return Err(FlatError::Structure("every side must be glued".into()));
        }
        let mut given: Vec<[Option<Cx>; 3]> = vec![[None, None, None]; comb.triangle_count()];
        for (name, z) in vectors {
            let (t, i) = comb.side_index(name).ok_or_else(|| FlatError::Structure(format!("unknown side {name}")))?;
            if given[t][i].replace(z.clone()).is_some() {
                return Err(FlatError::Structure(format!("side {name} has two vectors")));
            }
        }
        let vectors = given
            .into_iter()
            .enumerate()
            .map(|(t, vs)| {
                let [a, b, c] = vs;
                match (a, b, c) {
                    (Some(a), Some(b), Some(c)) => Ok([a, b, c]),
                    _ => Err(FlatError::Structure(format!("triangle {} lacks a side vector", comb.triangle_id(t)))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut sign_of: HashMap<usize, GlueSign> = HashMap::new();
        for (a, b, s) in glues {
            let e = comb.edge_of(comb.side_index(a).expect("glued side exists"));
            sign_of.insert(e, *s);
            if kind == SurfaceKind::Translation && *s == GlueSign::Pos {
                return Err(FlatError::GlueSign(a.clone(), b.clone()));
            }
        }
        let signs = (0..comb.edge_count()).map(|e| sign_of[&e]).collect();
        let s = Self { kind, comb, vectors, signs };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<(), FlatError> {
        for t in 0..self.triangle_count() {
            let [a, b, c] = &self.vectors[t];
            let id = self.comb.triangle_id(t).to_string();
            if !(a + b + c).is_zero() {
                return Err(FlatError::Closure(id));
            }
            if !signed_area(a, b).is_positive() {
                return Err(FlatError::NonPositiveArea(id));
            }
        }
        for e in 0..self.edge_count() {
            let [s0, s1] = [self.comb.edge_sides(e)[0], self.comb.edge_sides(e)[1]];
            let (v0, v1) = (self.side_vector(s0), self.side_vector(s1));
            let ok = match self.signs[e] {
                GlueSign::Neg => *v1 == -v0.clone(),
                GlueSign::Pos => v1 == v0,
            };
            if !ok {
                return Err(FlatError::GlueSign(self.comb.side_id(s0).into(), self.comb.side_id(s1).into()));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn triangulation(&self) -> &SurfaceTriangulation {
        &self.comb
    }

    pub fn triangle_count(&self) -> usize {
        self.comb.triangle_count()
    }

    pub fn edge_count(&self) -> usize {
        self.comb.edge_count()
    }

    pub fn edge_labels(&self) -> &[String] {
        self.comb.edge_labels()
    }

    pub fn side_vector(&self, s: Side) -> &Cx {
        &self.vectors[s.0][s.1]
    }

    pub fn triangle_vectors(&self, t: usize) -> &[Cx; 3] {
        &self.vectors[t]
    }

    /// Vector of an edge, read along its first side.
    pub fn edge_vector(&self, e: usize) -> &Cx {
        self.side_vector(self.comb.edge_sides(e)[0])
    }

    pub fn edge_sign(&self, e: usize) -> GlueSign {
        self.signs[e]
    }

    /// `+1` if the side's vector equals its edge's vector, `-1` if negated.
    pub fn side_orientation(&self, s: Side) -> i64 {
        let e = self.comb.edge_of(s);
        if self.comb.edge_sides(e)[0] == s || self.signs[e] == GlueSign::Pos {
            1
        } else {
            -1
        }
    }

    /// Glued side pairs with their signs.
    pub fn glues(&self) -> Vec<(String, String, GlueSign)> {
        (0..self.edge_count())
            .map(|e| {
                let [s0, s1] = [self.comb.edge_sides(e)[0], self.comb.edge_sides(e)[1]];
                (self.comb.side_id(s0).to_string(), self.comb.side_id(s1).to_string(), self.signs[e])
            })
            .collect()
    }

    /// `(side name, vector)` for every side, in triangle order.
    pub fn side_vectors(&self) -> Vec<(String, Cx)> {
        (0..self.triangle_count())
            .flat_map(|t| (0..3).map(move |i| (t, i)))
            .map(|s| (self.comb.side_id(s).to_string(), self.side_vector(s).clone()))
            .collect()
    }

    pub fn triangle_area(&self, t: usize) -> Rat {
        signed_area(&self.vectors[t][0], &self.vectors[t][1])
    }

    pub fn total_area(&self) -> Rat {
        (0..self.triangle_count()).map(|t| self.triangle_area(t)).sum()
    }

    /// Applies a real-linear map to every vector; fails if it breaks orientation.
    pub fn map_vectors(&self, f: impl Fn(&Cx) -> Cx) -> Result<Self, FlatError> {
        let out = Self {
            kind: self.kind,
            comb: self.comb.clone(),
            vectors: self.vectors.iter().map(|vs| vs.clone().map(|z| f(&z))).collect(),
            signs: self.signs.clone(),
        };
        out.check()?;
        Ok(out)
    }

    /// Cone angle at every vertex as a multiple of π, by counting how often
    /// the sweep through each corner crosses the horizontal line.
    pub fn cone_angles(&self) -> Vec<u64> {
        // 0 on directions in [0, π), 1 on [π, 2π).
        let half_plane = |z: &Cx| !(z.im.is_positive() || (z.im.is_zero() && z.re.is_positive()));
        let mut angles = vec![0u64; self.comb.vertex_count()];
        for t in 0..self.triangle_count() {
            for i in 0..3 {
                let u = &self.vectors[t][i];
                let w = -self.vectors[t][(i + 2) % 3].clone();
                if half_plane(u) != half_plane(&w) {
                    angles[self.comb.corner_vertex(t, i)] += 1;
                }
            }
        }
        angles
    }

    pub fn validate(&self) -> Result<ValidationReport, FlatError> {
        self.check()?;
        let genus = self.comb.genus()?;
        let cone_angles = self.cone_angles();
        if self.kind == SurfaceKind::Translation {
            if let Some(v) = cone_angles.iter().position(|n| n % 2 == 1) {
                return Err(FlatError::ConeAngle { vertex: v, multiple: cone_angles[v] });
            }
        }
        let mut multiplicities: Vec<i64> = cone_angles.iter().map(|&n| n as i64 - 2).filter(|n| *n != 0).collect();
        multiplicities.sort_unstable_by(|a, b| b.cmp(a));
        let marked_points = cone_angles.iter().filter(|&&n| n == 2).count();
        Ok(ValidationReport {
            symbol: Symbol { multiplicities, square: self.kind == SurfaceKind::Translation },
            genus,
            cone_angles,
            marked_points,
            area: self.total_area(),
        })
    }
}

pub(crate) fn half() -> Rat {
    Rat::one() / rat(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{hex_torus, lshape_h2, pillowcase, square_torus};

    #[test]
    fn fixture_symbols() {
        let r = square_torus().validate().unwrap();
        assert_eq!((r.genus, r.symbol.multiplicities.clone(), r.area.clone()), (1, vec![], rat(1)));
        assert_eq!(r.cone_angles, vec![2]);
        let r = lshape_h2().validate().unwrap();
        assert_eq!((r.genus, r.symbol.to_string(), r.area), (2, "(4) +1".to_string(), rat(3)));
        assert_eq!(r.cone_angles, vec![6]);
        let r = hex_torus().validate().unwrap();
        assert_eq!((r.genus, r.marked_points), (1, 2));
        let r = pillowcase().validate().unwrap();
        assert_eq!((r.genus, r.symbol.to_string()), (0, "(-1, -1, -1, -1) -1".to_string()));
    }

    #[test]
    fn closure_and_sign_errors() {
        let tri = vec![("T".to_string(), ["a".to_string(), "b".to_string(), "c".to_string()])];
        let vs = [("a".to_string(), cx(1, 0)), ("b".to_string(), cx(0, 1)), ("c".to_string(), cx(0, -1))];
        let err = FlatSurface::new(SurfaceKind::Translation, tri.clone(), &vs, &[]).unwrap_err();
        assert!(matches!(err, FlatError::Structure(_)));
        let s = square_torus();
        let mut glues = s.glues();
        glues[0].2 = GlueSign::Pos;
        let tris = s.triangulation().triangles();
        let e = FlatSurface::new(SurfaceKind::HalfTranslation, tris.clone(), &s.side_vectors(), &glues).unwrap_err();
        assert!(matches!(e, FlatError::GlueSign(..)));
        let mut vs = s.side_vectors();
        vs[0].1 = cx(2, 0);
        let e = FlatSurface::new(SurfaceKind::Translation, tris, &vs, &s.glues()).unwrap_err();
        assert!(matches!(e, FlatError::Closure(_)));
    }

    #[test]
    fn scaling_by_two_quadruples_area() {
        let s = lshape_h2();
        let t = s.map_vectors(|z| z * rat(2)).unwrap();
        assert_eq!(t.total_area(), s.total_area() * rat(4));
    }
}
