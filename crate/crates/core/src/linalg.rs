//! Dense exact linear algebra over `ℚ`: reduced echelon forms, kernels,
//! canonical subspaces, incremental affine systems and a small simplex.

use num_traits::{One, Signed, Zero};

use crate::ordgroup::Rat;

pub type Row = Vec<Rat>;

/// Reduced row echelon form in place. Returns pivot columns; zero rows are dropped.
pub fn rref(rows: &mut Vec<Row>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Row], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{x : A x = 0}`, one vector per free column, in canonical form.
pub fn kernel(rows: &[Row], ncols: usize) -> Vec<Row> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| if x.is_zero() || y.is_zero() { acc } else { acc + x * y })
}

pub fn mat_vec(rows: &[Row], v: &[Rat]) -> Vec<Rat> {
    rows.iter().map(|r| dot(r, v)).collect()
}

/// Solves `A x = b`; returns one solution (free variables set to zero) or `None`.
pub fn solve(rows: &[Row], rhs: &[Rat], ncols: usize) -> Option<Vec<Rat>> {
    let mut aug: Vec<Row> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// A linear subspace of `ℚⁿ` stored by its reduced echelon basis, so equal
/// subspaces compare and hash equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    dim_ambient: usize,
    basis: Vec<Row>,
}

impl Subspace {
    pub fn span(dim_ambient: usize, vectors: Vec<Row>) -> Self {
        let mut basis = vectors;
        rref(&mut basis, dim_ambient);
        Self { dim_ambient, basis }
    }

    pub fn zero(dim_ambient: usize) -> Self {
        Self { dim_ambient, basis: Vec::new() }
    }

    pub fn full(dim_ambient: usize) -> Self {
        let basis = (0..dim_ambient)
            .map(|i| {
                let mut v = vec![Rat::zero(); dim_ambient];
                v[i] = Rat::one();
                v
            })
            .collect();
        Self { dim_ambient, basis }
    }

    /// Solution space of the homogeneous system `rows · x = 0`.
    pub fn from_equations(dim_ambient: usize, rows: &[Row]) -> Self {
        Self::span(dim_ambient, kernel(rows, dim_ambient))
    }

    pub fn ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Row] {
        &self.basis
    }

    /// Equations cutting the subspace out: a basis of its annihilator.
    pub fn equations(&self) -> Vec<Row> {
        kernel(&self.basis, self.dim_ambient)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank(&rows, self.dim_ambient) == self.basis.len()
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut eqs = self.equations();
        eqs.extend(other.equations());
        Self::from_equations(self.dim_ambient, &eqs)
    }

    pub fn with_equations(&self, extra: &[Row]) -> Self {
        let mut eqs = self.equations();
        eqs.extend_from_slice(extra);
        Self::from_equations(self.dim_ambient, &eqs)
    }

    /// Image under the coordinate projection onto `coords` (in that order).
    pub fn project(&self, coords: &[usize]) -> Self {
        let vs = self.basis.iter().map(|b| coords.iter().map(|&c| b[c].clone()).collect()).collect();
        Self::span(coords.len(), vs)
    }
}

/// Outcome of an incremental equation insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insert {
    Added,
    Redundant,
    Inconsistent,
}

/// An affine system `A x = b` kept in reduced row echelon form as rows are
/// added. Cloning is the backtracking mechanism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineSystem {
    ncols: usize,
    rows: Vec<Row>,
    pivots: Vec<usize>,
}

impl AffineSystem {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `coeffs · x = rhs`.
    pub fn insert(&mut self, coeffs: &[Rat], rhs: &Rat) -> Insert {
        let mut row: Row = coeffs.to_vec();
        row.push(rhs.clone());
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let Some(p) = (0..self.ncols).find(|&c| !row[c].is_zero()) else {
            return if row[self.ncols].is_zero() { Insert::Redundant } else { Insert::Inconsistent };
        };
        let inv = row[p].recip();
        for x in row.iter_mut() {
            *x *= &inv;
        }
        for r in self.rows.iter_mut() {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(&row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, row);
        Insert::Added
    }

    /// Would `coeffs · x = rhs` keep the system consistent?
    pub fn admits(&self, coeffs: &[Rat], rhs: &Rat) -> bool {
        self.clone().insert(coeffs, rhs) != Insert::Inconsistent
    }

    /// The solution with every free variable set to zero.
    pub fn particular(&self) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.ncols];
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            x[p] = r[self.ncols].clone();
        }
        x
    }

    pub fn homogeneous_rows(&self) -> Vec<Row> {
        self.rows.iter().map(|r| r[..self.ncols].to_vec()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lp {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Rat>, value: Rat },
}

/// Maximizes `c · x` subject to `A x = b`, `x ≥ 0`, by the two-phase
/// simplex method with Bland's rule (so it terminates on degenerate input).
pub fn lp_maximize(a: &[Row], b: &[Rat], c: &[Rat]) -> Lp {
    let m = a.len();
    let n = c.len();
    // Columns: n structural, m artificial, then rhs.
    let width = n + m + 1;
    let mut t: Vec<Row> = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r = vec![Rat::zero(); width];
        for j in 0..n {
            r[j] = if flip { -row[j].clone() } else { row[j].clone() };
        }
        r[n + i] = Rat::one();
        r[width - 1] = if flip { -bi.clone() } else { bi.clone() };
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase one: minimize the artificial sum, i.e. maximize its negative.
    let mut obj1 = vec![Rat::zero(); width];
    for j in n..n + m {
        obj1[j] = -Rat::one();
    }
    if !run_simplex(&mut t, &mut basis, &obj1, n + m) {
        unreachable!("phase one is bounded");
    }
    let phase_one: Rat = basis
        .iter()
        .zip(&t)
        .filter(|(&j, _)| j >= n)
        .fold(Rat::zero(), |acc, (_, r)| acc + &r[width - 1]);
    if !phase_one.is_zero() {
        return Lp::Infeasible;
    }
    // Drive remaining (zero-valued) artificials out of the basis.
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut basis, i, j);
                i += 1;
            } else {
                t.remove(i);
                basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    for r in t.iter_mut() {
        for j in n..n + m {
            r[j] = Rat::zero();
        }
    }
    let mut obj2 = vec![Rat::zero(); width];
    obj2[..n].clone_from_slice(c);
    if !run_simplex(&mut t, &mut basis, &obj2, n) {
        return Lp::Unbounded;
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &j) in t.iter().zip(&basis) {
        x[j] = r[width - 1].clone();
    }
    let value = dot(c, &x);
    Lp::Optimal { x, value }
}

fn pivot(t: &mut [Row], basis: &mut [usize], r: usize, col: usize) {
    let inv = t[r][col].recip();
    for x in t[r].iter_mut() {
        *x *= &inv;
    }
    let pr = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[col].is_zero() {
            continue;
        }
        let f = row[col].clone();
        for (x, y) in row.iter_mut().zip(&pr) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
    basis[r] = col;
}

/// Returns false when unbounded. Only columns `< allowed` may enter.
fn run_simplex(t: &mut [Row], basis: &mut [usize], obj: &[Rat], allowed: usize) -> bool {
    let width = obj.len();
    loop {
        // Reduced cost of column j: obj_j - Σ obj_{basis_i} t_ij.
        let entering = (0..allowed).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut rc = obj[j].clone();
            for (row, &bj) in t.iter().zip(basis.iter()) {
                if !obj[bj].is_zero() && !row[j].is_zero() {
                    rc -= &obj[bj] * &row[j];
                }
            }
            rc.is_positive()
        });
        let Some(col) = entering else {
            return true;
        };
        let mut best: Option<(usize, Rat)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[col].is_positive() {
                let ratio = &row[width - 1] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = best else {
            return false;
        };
        pivot(t, basis, r, col);
    }
}

/// Coordinates among `signed` that are strictly positive somewhere on the cone
/// `V ∩ {x_i ≥ 0 for i ∈ signed}`. Empty when the cone is zero on `signed`.
pub fn positive_support(space: &Subspace, signed: &[usize]) -> Vec<usize> {
    if space.dim() == 0 || signed.is_empty() {
        return Vec::new();
    }
    // Parametrize V = B y with free y = y⁺ - y⁻; impose (B y)_i ≥ 0 via slacks.
    let basis = space.basis();
    let k = basis.len();
    let s = signed.len();
    let nvars = 2 * k + s;
    let mut found = vec![false; s];
    for target in 0..s {
        if found[target] {
            continue;
        }
        // rows: (B y)_i - slack_i = 0 for each signed i; Σ slack = 1.
        let mut a = Vec::with_capacity(s + 1);
        let mut b = Vec::with_capacity(s + 1);
        for (si, &coord) in signed.iter().enumerate() {
            let mut row = vec![Rat::zero(); nvars];
            for (j, bv) in basis.iter().enumerate() {
                row[j] = bv[coord].clone();
                row[k + j] = -bv[coord].clone();
            }
            row[2 * k + si] = -Rat::one();
            a.push(row);
            b.push(Rat::zero());
        }
        let mut norm = vec![Rat::zero(); nvars];
        for si in 0..s {
            norm[2 * k + si] = Rat::one();
        }
        a.push(norm);
        b.push(Rat::one());
        let mut c = vec![Rat::zero(); nvars];
        c[2 * k + target] = Rat::one();
        match lp_maximize(&a, &b, &c) {
            Lp::Optimal { x, value } if value.is_positive() => {
                for si in 0..s {
                    if x[2 * k + si].is_positive() {
                        found[si] = true;
                    }
                }
            }
            Lp::Infeasible => return Vec::new(),
            _ => {}
        }
    }
    signed.iter().zip(&found).filter(|(_, &f)| f).map(|(&c, _)| c).collect()
}

/// Is `V ∩ {x_i ≥ 0 for i ∈ signed}` zero on the `signed` coordinates?
pub fn cone_is_trivial(space: &Subspace, signed: &[usize]) -> bool {
    if space.dim() == 0 || signed.is_empty() {
        return true;
    }
    let basis = space.basis();
    let k = basis.len();
    let s = signed.len();
    let nvars = 2 * k + s;
    let mut a = Vec::with_capacity(s + 1);
    for (si, &coord) in signed.iter().enumerate() {
        let mut row = vec![Rat::zero(); nvars];
        for (j, bv) in basis.iter().enumerate() {
            row[j] = bv[coord].clone();
            row[k + j] = -bv[coord].clone();
        }
        row[2 * k + si] = -Rat::one();
        a.push(row);
    }
    let mut norm = vec![Rat::zero(); nvars];
    for x in norm.iter_mut().skip(2 * k) {
        *x = Rat::one();
    }
    a.push(norm);
    let mut b = vec![Rat::zero(); s];
    b.push(Rat::one());
    matches!(lp_maximize(&a, &b, &vec![Rat::zero(); nvars]), Lp::Infeasible)
}

/// A point `x ∈ V` with `x_i ≥ floor_i` for each `(i, floor_i)`, if one exists.
pub fn point_with_floors(space: &Subspace, floors: &[(usize, Rat)]) -> Option<Row> {
    let basis = space.basis();
    let k = basis.len();
    let s = floors.len();
    let nvars = 2 * k + s;
    let mut a = Vec::with_capacity(s);
    let mut b = Vec::with_capacity(s);
    for (si, (coord, floor)) in floors.iter().enumerate() {
        let mut row = vec![Rat::zero(); nvars];
        for (j, bv) in basis.iter().enumerate() {
            row[j] = bv[*coord].clone();
            row[k + j] = -bv[*coord].clone();
        }
        row[2 * k + si] = -Rat::one();
        a.push(row);
        b.push(floor.clone());
    }
    match lp_maximize(&a, &b, &vec![Rat::zero(); nvars]) {
        Lp::Optimal { x, .. } => {
            let mut out = vec![Rat::zero(); space.ambient()];
            for (j, bv) in basis.iter().enumerate() {
                let yj = &x[j] - &x[k + j];
                if yj.is_zero() {
                    continue;
                }
                for (o, v) in out.iter_mut().zip(bv) {
                    *o += &yj * v;
                }
            }
            Some(out)
        }
        _ => None,
    }
}
