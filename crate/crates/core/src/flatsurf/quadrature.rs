use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::surface::{Cx, FlatSurface};
use super::tangent::PeriodTangent;
use super::FlatError;

fn to_f64(z: &Cx) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

/// Coefficients `(α, β)` of the real-linear map `w ↦ αw + βw̄` taking the
/// sides `u`, `v` to `du`, `dv`.
fn affine(u: Complex64, v: Complex64, du: Complex64, dv: Complex64) -> (Complex64, Complex64) {
    let det = u * v.conj() - u.conj() * v;
    ((du * v.conj() - u.conj() * dv) / det, (u * dv - du * v) / det)
}

fn integrate(pts: [Complex64; 3], maps: [(Complex64, Complex64); 2], depth: u32) -> Complex64 {
    if depth == 0 {
        let (e0, e1) = (pts[1] - pts[0], pts[2] - pts[1]);
        let apply = |(a, b): (Complex64, Complex64), w: Complex64| a * w + b * w.conj();
        let (a1, b1) = affine(e0, e1, apply(maps[0], e0), apply(maps[0], e1));
        let (a2, b2) = affine(e0, e1, apply(maps[1], e0), apply(maps[1], e1));
        let area = (e0.conj() * e1).im / 2.0;
        return (a1 * a2.conj() - b1 * b2.conj()) * area;
    }
    let [a, b, c] = pts;
    let g = (a + b + c) / 3.0;
    let (mab, mbc, mca) = ((a + b) / 2.0, (b + c) / 2.0, (c + a) / 2.0);
    [[a, mab, g], [mab, b, g], [b, mbc, g], [mbc, c, g], [c, mca, g], [mca, a, g]]
        .into_iter()
        .map(|p| integrate(p, maps, depth - 1))
        .sum()
}

/// `∫ (i/2) θ₁ ∧ θ̄₂` by barycentric subdivision to the given depth, where
/// `θ_k` is the piecewise-affine form with periods `δ_k`. The real part on
/// the diagonal is the squared norm, the imaginary part the Kähler form.
pub fn kahler_pairing_numeric(
    s: &FlatSurface,
    a: &PeriodTangent,
    b: &PeriodTangent,
    depth: u32,
) -> Result<Complex64, FlatError> {
    a.check(s)?;
    b.check(s)?;
    let mut total = Complex64::new(0.0, 0.0);
    for t in 0..s.triangle_count() {
        let v = s.triangle_vectors(t);
        let (u, w) = (to_f64(&v[0]), to_f64(&v[1]));
        let map = |p: &PeriodTangent| affine(u, w, to_f64(&p.side_delta(s, (t, 0))), to_f64(&p.side_delta(s, (t, 1))));
        let zero = Complex64::new(0.0, 0.0);
        total += integrate([zero, u, u + w], [map(a), map(b)], depth);
    }
    Ok(total)
}
