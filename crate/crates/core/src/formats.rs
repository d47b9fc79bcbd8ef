//! Line-oriented text formats for trees, tracks, surfaces, 3-manifolds and
//! flat surfaces. Blank lines and `#` comments are ignored; every other line
//! starts with a directive, and unknown directives are rejected.

use std::collections::HashMap;

use num_complex::Complex;
use thiserror::Error;

use crate::cone3::{Cone3Error, FaceGlue, PLCone, Triangulation3};
use crate::flatsurf::{fmt_cx, Cx, FlatError, FlatSurface, GlueSign, PeriodTangent, SurfaceKind};
use crate::lamtree::{MetricTree, TreeEdge, TreeError};
use crate::ordgroup::{fmt_rat, parse_rat, LexVec, Rat};
use crate::track::{Switch, SurfaceTriangulation, TrackError, TrainTrack};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Track(#[from] TrackError),
    #[error(transparent)]
    Cone3(#[from] Cone3Error),
    #[error(transparent)]
    Flat(#[from] FlatError),
}

impl FormatError {
    /// Syntax errors are about the text; the others are about the model it describes.
    pub fn is_syntax(&self) -> bool {
        matches!(self, FormatError::Syntax { .. })
    }
}

/// A parsed model together with notes about normalized input.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub value: T,
    pub notes: Vec<String>,
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

struct Reader<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    notes: Vec<String>,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let l = l.split('#').next().unwrap_or("");
                let toks: Vec<&str> = l.split_whitespace().collect();
                (!toks.is_empty()).then_some((i + 1, toks))
            })
            .collect();
        Self { lines, notes: Vec::new() }
    }

    fn rat(&mut self, line: usize, tok: &str) -> Result<Rat, FormatError> {
        let (r, normalized) = parse_rat(tok).map_err(|e| syntax(line, e.to_string()))?;
        if normalized {
            self.notes.push(format!("line {line}: {tok} normalized to {}", fmt_rat(&r)));
        }
        Ok(r)
    }

    fn lexvec(&mut self, line: usize, tok: &str) -> Result<LexVec, FormatError> {
        let inner = tok
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| syntax(line, format!("expected a vector like (1,0), got {tok}")))?;
        let coords = inner.split(',').map(|p| self.rat(line, p)).collect::<Result<Vec<_>, _>>()?;
        LexVec::new(coords).map_err(|e| syntax(line, e.to_string()))
    }

    fn cx(&mut self, line: usize, re: &str, im: &str) -> Result<Cx, FormatError> {
        Ok(Complex::new(self.rat(line, re)?, self.rat(line, im)?))
    }

    fn done<T>(self, value: T) -> Parsed<T> {
        Parsed { value, notes: self.notes }
    }
}

fn arity(line: usize, toks: &[&str], n: usize, usage: &str) -> Result<(), FormatError> {
    if toks.len() != n {
        return Err(syntax(line, format!("expected `{usage}`")));
    }
    Ok(())
}

fn unknown(line: usize, directive: &str) -> FormatError {
    syntax(line, format!("unknown directive `{directive}`"))
}

/// Looks a name up in an index map, with a line-numbered error.
fn lookup(map: &HashMap<String, usize>, line: usize, what: &str, name: &str) -> Result<usize, FormatError> {
    map.get(name).copied().ok_or_else(|| syntax(line, format!("unknown {what} {name}")))
}

fn insert_unique(map: &mut HashMap<String, usize>, line: usize, what: &str, name: &str) -> Result<(), FormatError> {
    let n = map.len();
    if map.insert(name.to_string(), n).is_some() {
        return Err(syntax(line, format!("duplicate {what} {name}")));
    }
    Ok(())
}

pub fn parse_tree(text: &str) -> Result<Parsed<MetricTree>, FormatError> {
    let mut r = Reader::new(text);
    let mut vertices = Vec::new();
    let mut index = HashMap::new();
    let mut edges = Vec::new();
    let mut end = None;
    for (line, toks) in std::mem::take(&mut r.lines) {
        match toks[0] {
            "vertex" => {
                arity(line, &toks, 2, "vertex <id>")?;
                insert_unique(&mut index, line, "vertex", toks[1])?;
                vertices.push(toks[1].to_string());
            }
            "edge" => {
                arity(line, &toks, 5, "edge <id> <u> <v> <length>")?;
                let u = lookup(&index, line, "vertex", toks[2])?;
                let v = lookup(&index, line, "vertex", toks[3])?;
                let length = r.lexvec(line, toks[4])?;
                edges.push(TreeEdge { id: toks[1].to_string(), u, v, length });
            }
            "end" => {
                arity(line, &toks, 2, "end <anchor>")?;
                if end.replace(lookup(&index, line, "vertex", toks[1])?).is_some() {
                    return Err(syntax(line, "second end"));
                }
            }
            d => return Err(unknown(line, d)),
        }
    }
    let tree = MetricTree::new(vertices, edges, end)?;
    Ok(r.done(tree))
}

pub fn write_tree(t: &MetricTree) -> String {
    let ids = t.vertex_ids();
    let mut out = String::new();
    for v in ids {
        out += &format!("vertex {v}\n");
    }
    for e in t.edges() {
        out += &format!("edge {} {} {} {}\n", e.id, ids[e.u], ids[e.v], e.length);
    }
    if let Some(a) = t.end() {
        out += &format!("end {}\n", ids[a]);
    }
    out
}

pub fn parse_track(text: &str) -> Result<Parsed<TrainTrack>, FormatError> {
    let mut r = Reader::new(text);
    let mut branches = Vec::new();
    let mut index = HashMap::new();
    let mut switches = Vec::new();
    for (line, toks) in std::mem::take(&mut r.lines) {
        match toks[0] {
            "branch" => {
                arity(line, &toks, 2, "branch <id>")?;
                insert_unique(&mut index, line, "branch", toks[1])?;
                branches.push(toks[1].to_string());
            }
            "switch" => {
                let usage = "switch <id> in <a> <b> out <c> [ccw]";
                let ccw = toks.len() == 8 && toks[7] == "ccw";
                if !(toks.len() == 7 || ccw) || toks[2] != "in" || toks[5] != "out" {
                    return Err(syntax(line, format!("expected `{usage}`")));
                }
                switches.push(Switch {
                    id: toks[1].to_string(),
                    a: lookup(&index, line, "branch", toks[3])?,
                    b: lookup(&index, line, "branch", toks[4])?,
                    c: lookup(&index, line, "branch", toks[6])?,
                    ccw,
                });
            }
            d => return Err(unknown(line, d)),
        }
    }
    let track = TrainTrack::new(branches, switches)?;
    Ok(r.done(track))
}

pub fn write_track(t: &TrainTrack) -> String {
    let names = t.branches();
    let mut out = String::new();
    for b in names {
        out += &format!("branch {b}\n");
    }
    for s in t.switches() {
        out += &format!(
            "switch {} in {} {} out {}{}\n",
            s.id,
            names[s.a],
            names[s.b],
            names[s.c],
            if s.ccw { " ccw" } else { "" }
        );
    }
    out
}

fn triangle_line(line: usize, toks: &[&str]) -> Result<(String, [String; 3]), FormatError> {
    arity(line, toks, 5, "triangle <id> <e0> <e1> <e2>")?;
    Ok((toks[1].to_string(), [toks[2], toks[3], toks[4]].map(String::from)))
}

pub fn parse_surface(text: &str) -> Result<Parsed<SurfaceTriangulation>, FormatError> {
    let mut r = Reader::new(text);
    let mut triangles = Vec::new();
    let mut glues = Vec::new();
    for (line, toks) in std::mem::take(&mut r.lines) {
        match toks[0] {
            "triangle" => triangles.push(triangle_line(line, &toks)?),
            "glue" => {
                arity(line, &toks, 3, "glue <e> <e'>")?;
                glues.push((toks[1].to_string(), toks[2].to_string()));
            }
            d => return Err(unknown(line, d)),
        }
    }
    let s = SurfaceTriangulation::new(triangles, &glues)?;
    Ok(r.done(s))
}

pub fn write_surface(s: &SurfaceTriangulation) -> String {
    let mut out = String::new();
    for (id, [a, b, c]) in s.triangles() {
        out += &format!("triangle {id} {a} {b} {c}\n");
    }
    for (a, b) in s.glue_pairs() {
        out += &format!("glue {a} {b}\n");
    }
    out
}

/// A 3-manifold with an optional boundary track and boundary weights.
#[derive(Debug, Clone)]
pub struct ManifoldDoc {
    pub tri: Triangulation3,
    /// Out side of the switch on each boundary triangle; `None` when the
    /// file has no `switch` lines.
    pub out: Option<Vec<Option<usize>>>,
    /// `weight` lines: boundary edge label and value.
    pub weights: Vec<(String, Rat)>,
}

fn face_ref(index: &HashMap<String, usize>, line: usize, tok: &str) -> Result<(usize, usize), FormatError> {
    let (t, f) = tok.rsplit_once('.').ok_or_else(|| syntax(line, format!("expected <tet>.<face>, got {tok}")))?;
    let f: usize = f.parse().ok().filter(|f| *f < 4).ok_or_else(|| syntax(line, format!("bad face in {tok}")))?;
    Ok((lookup(index, line, "tetrahedron", t)?, f))
}

fn perm(line: usize, tok: &str) -> Result<[usize; 3], FormatError> {
    let ds: Vec<usize> = tok.chars().filter_map(|c| c.to_digit(10).map(|d| d as usize)).collect();
    match ds.as_slice() {
        [a, b, c] if tok.len() == 3 && ds.iter().all(|d| *d < 4) => Ok([*a, *b, *c]),
        _ => Err(syntax(line, format!("expected three vertex images like 023, got {tok}"))),
    }
}

fn weight_line(r: &mut Reader, line: usize, toks: &[&str]) -> Result<(String, Rat), FormatError> {
    arity(line, toks, 3, "weight <label> <value>")?;
    Ok((toks[1].to_string(), r.rat(line, toks[2])?))
}

pub fn parse_manifold(text: &str) -> Result<Parsed<ManifoldDoc>, FormatError> {
    let mut r = Reader::new(text);
    let mut ids = Vec::new();
    let mut index = HashMap::new();
    let mut glues = Vec::new();
    let mut switches: Vec<(usize, String, usize)> = Vec::new();
    let mut weights = Vec::new();
    for (line, toks) in std::mem::take(&mut r.lines) {
        match toks[0] {
            "tet" => {
                arity(line, &toks, 2, "tet <id>")?;
                insert_unique(&mut index, line, "tetrahedron", toks[1])?;
                ids.push(toks[1].to_string());
            }
            "glue" => {
                arity(line, &toks, 4, "glue <t1>.<f1> <t2>.<f2> <perm>")?;
                let (t1, f1) = face_ref(&index, line, toks[1])?;
                let (t2, f2) = face_ref(&index, line, toks[2])?;
                glues.push(FaceGlue { t1, f1, t2, f2, images: perm(line, toks[3])? });
            }
            "switch" => {
                if toks.len() != 4 || toks[2] != "out" {
                    return Err(syntax(line, "expected `switch <boundary-triangle> out <side>`"));
                }
                let k = toks[3].parse().map_err(|_| syntax(line, format!("bad side {}", toks[3])))?;
                switches.push((line, toks[1].to_string(), k));
            }
            "weight" => weights.push(weight_line(&mut r, line, &toks)?),
            d => return Err(unknown(line, d)),
        }
    }
    let tri = Triangulation3::new(ids, glues)?;
    let out = if switches.is_empty() {
        None
    } else {
        let b = tri.boundary();
        let mut out = vec![None; b.triangle_count()];
        for (line, id, k) in switches {
            let t = b.triangle_index(&id).ok_or_else(|| syntax(line, format!("unknown boundary triangle {id}")))?;
            if out[t].replace(k).is_some() {
                return Err(syntax(line, format!("second switch on {id}")));
            }
        }
        Some(out)
    };
    Ok(r.done(ManifoldDoc { tri, out, weights }))
}

pub fn write_manifold(doc: &ManifoldDoc) -> String {
    let tri = &doc.tri;
    let ids = tri.tet_ids();
    let mut out = String::new();
    for id in ids {
        out += &format!("tet {id}\n");
    }
    for g in tri.glues() {
        let [a, b, c] = g.images;
        out += &format!("glue {}.{} {}.{} {a}{b}{c}\n", ids[g.t1], g.f1, ids[g.t2], g.f2);
    }
    if let Some(sw) = &doc.out {
        for (t, k) in sw.iter().enumerate() {
            if let Some(k) = k {
                out += &format!("switch {} out {k}\n", tri.boundary().triangle_id(t));
            }
        }
    }
    out += &write_weights(&doc.weights);
    out
}

pub fn write_weights(w: &[(String, Rat)]) -> String {
    w.iter().map(|(l, x)| format!("weight {l} {}\n", fmt_rat(x))).collect()
}

/// A flat surface with optional bundled tangents.
#[derive(Debug, Clone)]
pub struct FlatDoc {
    pub surface: FlatSurface,
    pub tangents: Vec<PeriodTangent>,
}

pub fn parse_flat(text: &str) -> Result<Parsed<FlatDoc>, FormatError> {
    let mut r = Reader::new(text);
    let mut kind = None;
    let mut triangles = Vec::new();
    let mut vectors = Vec::new();
    let mut glues = Vec::new();
    let mut tangent_lines: Vec<(usize, usize, String, Cx)> = Vec::new();
    for (line, toks) in std::mem::take(&mut r.lines) {
        match toks[0] {
            "kind" => {
                arity(line, &toks, 2, "kind translation|half-translation")?;
                let k: SurfaceKind = toks[1].parse().map_err(|e: FlatError| syntax(line, e.to_string()))?;
                if kind.replace(k).is_some() {
                    return Err(syntax(line, "second kind line"));
                }
            }
            "triangle" => triangles.push(triangle_line(line, &toks)?),
            "vector" => {
                arity(line, &toks, 4, "vector <e> <re> <im>")?;
                vectors.push((toks[1].to_string(), r.cx(line, toks[2], toks[3])?));
            }
            "glue" => {
                let sign = match toks.len() {
                    3 => GlueSign::Neg,
                    4 => toks[3].parse().map_err(|e: FlatError| syntax(line, e.to_string()))?,
                    _ => return Err(syntax(line, "expected `glue <e> <e'> [neg|pos]`")),
                };
                glues.push((toks[1].to_string(), toks[2].to_string(), sign));
            }
            "tangent" => {
                arity(line, &toks, 5, "tangent <k> <e> <re> <im>")?;
                let k: usize = toks[1].parse().ok().filter(|k| *k >= 1).ok_or_else(|| syntax(line, "bad tangent index"))?;
                let d = r.cx(line, toks[3], toks[4])?;
                tangent_lines.push((line, k, toks[2].to_string(), d));
            }
            d => return Err(unknown(line, d)),
        }
    }
    let kind = kind.ok_or_else(|| syntax(0, "missing kind line"))?;
    let surface = FlatSurface::new(kind, triangles, &vectors, &glues)?;
    let mut given: Vec<Vec<Option<Cx>>> = Vec::new();
    for (line, k, side, d) in tangent_lines {
        let tri = surface.triangulation();
        let s = tri.side_index(&side).ok_or_else(|| syntax(line, format!("unknown side {side}")))?;
        if given.len() < k {
            given.resize(k, vec![None; surface.edge_count()]);
        }
        let e = tri.edge_of(s);
        let d = d * crate::ordgroup::rat(surface.side_orientation(s));
        if given[k - 1][e].replace(d).is_some() {
            return Err(syntax(line, format!("tangent {k} gives edge {} twice", tri.edge_label(e))));
        }
    }
    let tangents = given
        .into_iter()
        .enumerate()
        .map(|(k, ds)| {
            ds.into_iter()
                .collect::<Option<Vec<_>>>()
                .map(PeriodTangent::new)
                .ok_or_else(|| syntax(0, format!("tangent {} misses an edge", k + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    for t in &tangents {
        t.check(&surface)?;
    }
    Ok(r.done(FlatDoc { surface, tangents }))
}

pub fn write_flat(doc: &FlatDoc) -> String {
    let s = &doc.surface;
    let mut out = format!("kind {}\n", s.kind());
    for (id, [a, b, c]) in s.triangulation().triangles() {
        out += &format!("triangle {id} {a} {b} {c}\n");
    }
    for (name, v) in s.side_vectors() {
        out += &format!("vector {name} {}\n", fmt_cx(&v));
    }
    for (a, b, g) in s.glues() {
        out += &format!("glue {a} {b} {g}\n");
    }
    for (k, t) in doc.tangents.iter().enumerate() {
        out += &write_tangent(s, k + 1, t);
    }
    out
}

pub fn write_tangent(s: &FlatSurface, k: usize, t: &PeriodTangent) -> String {
    s.edge_labels()
        .iter()
        .zip(&t.deltas)
        .map(|(e, d)| format!("tangent {k} {e} {}\n", fmt_cx(d)))
        .collect()
}

/// Parses a Gaussian rational such as `1+i`, `2-3/2i`, `-i` or `5`.
pub fn parse_multiplier(text: &str) -> Result<Cx, FormatError> {
    let bad = || syntax(0, format!("cannot parse multiplier {text:?}; expected a+bi"));
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix('i') else {
        let (re, _) = parse_rat(&t).map_err(|_| bad())?;
        return Ok(Complex::new(re, Rat::from_integer(0.into())));
    };
    let cut = body.char_indices().filter(|&(k, c)| k > 0 && (c == '+' || c == '-')).map(|(k, _)| k).next_back();
    let (re, im) = match cut {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x.strip_prefix('+').unwrap_or(x),
    };
    let (re, _) = parse_rat(re).map_err(|_| bad())?;
    let (im, _) = parse_rat(im).map_err(|_| bad())?;
    Ok(Complex::new(re, im))
}

/// Components as `span:` rows over the branch labels and `active:` lists.
pub fn write_cone(cone: &PLCone) -> String {
    let mut out = format!("labels: {}\n", cone.branches.join(" "));
    out += &format!("components: {}\n", cone.components.len());
    for (i, c) in cone.components.iter().enumerate() {
        let choice: Vec<String> = c.choice.iter().map(|x| x.to_string()).collect();
        out += &format!("component {}\ndim: {}\nchoice: {}\nspan:\n", i + 1, c.span.dim(), choice.join(" "));
        for row in c.span.basis() {
            let xs: Vec<String> = row.iter().map(fmt_rat).collect();
            out += &format!("  {}\n", xs.join(" "));
        }
        let active: Vec<&str> = c.active.iter().map(|&a| cone.branches[a].as_str()).collect();
        out += &format!("active: {}\n", active.join(" "));
    }
    out
}
