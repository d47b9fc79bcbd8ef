//! Exact scalars for values in a lexicographically ordered group.
//!
//! Every ordered abelian group that shows up at desk scale embeds in some
//! `ℝⁿ` with the lexicographic order, and all our data is rational, so the
//! concrete model is `ℚⁿ` ordered lexicographically.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar. Always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdError {
    #[error("dimension mismatch: rank {left} vs rank {right}")]
    Dimension { left: usize, right: usize },
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("element {0} is not positive")]
    NotPositive(String),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`; panics on a zero denominator.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `p/q` or `-p/q`. The result is reduced; the flag reports whether
/// the input was not already in lowest terms.
pub fn parse_rat(s: &str) -> Result<(Rat, bool), OrdError> {
    let err = || OrdError::Parse { what: "rational", input: s.to_string() };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| err())?;
    let d = BigInt::from_str(den).map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    let r = Rat::new(n.clone(), d.clone());
    let normalized = r.numer() != &n || r.denom() != &d;
    Ok((r, normalized))
}

/// Renders `p/q`, or `p` when `q = 1`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An element of `ℚⁿ` with the lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexVec {
    coords: Vec<Rat>,
}

impl LexVec {
    pub fn new(coords: Vec<Rat>) -> Result<Self, OrdError> {
        if coords.is_empty() {
            return Err(OrdError::ZeroRank);
        }
        Ok(Self { coords })
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Self::new(xs.iter().map(|&x| rat(x)).collect()).expect("non-empty coordinates")
    }

    pub fn zero(rank: usize) -> Self {
        assert!(rank >= 1, "rank must be at least 1");
        Self { coords: vec![Rat::zero(); rank] }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// Sign of the first nonzero coordinate.
    pub fn signum(&self) -> Ordering {
        self.coords
            .iter()
            .find(|c| !c.is_zero())
            .map_or(Ordering::Equal, |c| if c.is_positive() { Ordering::Greater } else { Ordering::Less })
    }

    fn check_rank(&self, other: &Self) -> Result<(), OrdError> {
        if self.rank() != other.rank() {
            return Err(OrdError::Dimension { left: self.rank(), right: other.rank() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, OrdError> {
        self.check_rank(other)?;
        Ok(Self { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, OrdError> {
        self.check_rank(other)?;
        Ok(Self { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() })
    }

    pub fn neg(&self) -> Self {
        Self { coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self { coords: self.coords.iter().map(|c| c * k).collect() }
    }

    /// `|x|`: whichever of `x`, `-x` is non-negative.
    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Coordinates `k..n` (1-based `k`), i.e. the image in the rank `n-k+1` quotient.
    pub fn truncate_from(&self, k: usize) -> Self {
        Self { coords: self.coords[k - 1..].to_vec() }
    }
}

impl fmt::Display for LexVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(fmt_rat).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for LexVec {
    type Err = OrdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| OrdError::Parse { what: "lexvec", input: s.to_string() })?;
        let coords = inner
            .split(',')
            .map(|p| parse_rat(p).map(|(r, _)| r))
            .collect::<Result<Vec<_>, _>>()?;
        LexVec::new(coords)
    }
}

/// Lexicographic comparison; the first differing coordinate decides.
pub fn lex_cmp(a: &LexVec, b: &LexVec) -> Result<Ordering, OrdError> {
    a.check_rank(b)?;
    Ok(a.coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| x.cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal))
}

/// 1-based index of the first nonzero coordinate. Smaller index means
/// infinitely larger; equal indices mean archimedean-equivalent.
pub fn archimedean_class(a: &LexVec) -> Option<usize> {
    a.coords.iter().position(|c| !c.is_zero()).map(|i| i + 1)
}

/// `x` is infinitely larger than `y` (both nonzero).
pub fn infinitely_larger(x: &LexVec, y: &LexVec) -> Option<bool> {
    Some(archimedean_class(x)? < archimedean_class(y)?)
}

/// The embedding `t ↦ (0, …, 0, t)` of `ℚ` into rank `n`.
pub fn embed_last(t: &Rat, n: usize) -> Result<LexVec, OrdError> {
    if n == 0 {
        return Err(OrdError::ZeroRank);
    }
    let mut coords = vec![Rat::zero(); n];
    coords[n - 1] = t.clone();
    Ok(LexVec { coords })
}

/// A homomorphism `ℚⁿ → ℚ` of the form `x ↦ x_k / a_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftInverse {
    /// 1-based coordinate index.
    pub index: usize,
    pub scale: Rat,
    pub rank: usize,
}

impl LeftInverse {
    pub fn apply(&self, x: &LexVec) -> Result<Rat, OrdError> {
        if x.rank() != self.rank {
            return Err(OrdError::Dimension { left: x.rank(), right: self.rank });
        }
        Ok(&x.coords[self.index - 1] * &self.scale)
    }
}

/// Left inverse of the order-preserving embedding `t ↦ t·a`, built from the
/// first positive coordinate of `a`.
pub fn left_inverse(a: &LexVec) -> Result<LeftInverse, OrdError> {
    if !a.is_positive() {
        return Err(OrdError::NotPositive(a.to_string()));
    }
    let k = archimedean_class(a).expect("positive element is nonzero");
    Ok(LeftInverse { index: k, scale: a.coords[k - 1].recip(), rank: a.rank() })
}

/// Scalars that weights can take: rationals or lexicographic vectors.
pub trait WeightScalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Result<Self, OrdError>;
    fn minus(&self, other: &Self) -> Result<Self, OrdError>;
}

impl WeightScalar for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn plus(&self, other: &Self) -> Result<Self, OrdError> {
        Ok(self + other)
    }
    fn minus(&self, other: &Self) -> Result<Self, OrdError> {
        Ok(self - other)
    }
}

impl WeightScalar for LexVec {
    fn zero_like(&self) -> Self {
        LexVec::zero(self.rank())
    }
    fn plus(&self, other: &Self) -> Result<Self, OrdError> {
        self.try_add(other)
    }
    fn minus(&self, other: &Self) -> Result<Self, OrdError> {
        self.try_sub(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lv(xs: &[i64]) -> LexVec {
        LexVec::from_ints(xs)
    }

    #[test]
    fn lex_cmp_examples() {
        assert_eq!(lex_cmp(&lv(&[0, 1]), &lv(&[1, 0])).unwrap(), Ordering::Less);
        assert_eq!(lex_cmp(&lv(&[2, -3]), &lv(&[2, -3])).unwrap(), Ordering::Equal);
        assert_eq!(lex_cmp(&lv(&[1, -100]), &lv(&[0, 100])).unwrap(), Ordering::Greater);
        assert!(matches!(lex_cmp(&lv(&[1]), &lv(&[1, 0])), Err(OrdError::Dimension { .. })));
    }

    #[test]
    fn archimedean_examples() {
        assert_eq!(archimedean_class(&lv(&[0, 0, 5])), Some(3));
        assert_eq!(archimedean_class(&lv(&[0, 0, 0])), None);
        assert_eq!(archimedean_class(&lv(&[-2, 7])), Some(1));
        assert_eq!(infinitely_larger(&lv(&[0, 1]), &lv(&[0, 0])), None);
        assert_eq!(infinitely_larger(&lv(&[0, 1]), &lv(&[0, 7])), Some(false));
        assert_eq!(infinitely_larger(&lv(&[1, 0]), &lv(&[0, 9])), Some(true));
    }

    #[test]
    fn embed_last_examples() {
        assert_eq!(embed_last(&ratio(3, 2), 3).unwrap().to_string(), "(0,0,3/2)");
        assert_eq!(embed_last(&rat(0), 2).unwrap(), lv(&[0, 0]));
        assert_eq!(embed_last(&rat(-1), 1).unwrap(), lv(&[-1]));
        assert_eq!(embed_last(&rat(1), 0), Err(OrdError::ZeroRank));
    }

    #[test]
    fn left_inverse_examples() {
        let a = lv(&[0, 2, 7]);
        let phi = left_inverse(&a).unwrap();
        assert_eq!(phi.index, 2);
        assert_eq!(phi.scale, ratio(1, 2));
        assert_eq!(phi.apply(&a).unwrap(), rat(1));

        let b = lv(&[0, 0, 1]);
        let phi = left_inverse(&b).unwrap();
        assert_eq!((phi.index, phi.scale.clone()), (3, rat(1)));
        assert_eq!(phi.apply(&b).unwrap(), rat(1));

        assert!(matches!(left_inverse(&lv(&[0, 0, 0])), Err(OrdError::NotPositive(_))));
        assert!(matches!(left_inverse(&lv(&[0, -1, 3])), Err(OrdError::NotPositive(_))));
    }

    #[test]
    fn rational_text_format() {
        assert_eq!(parse_rat("2/4").unwrap(), (ratio(1, 2), true));
        assert_eq!(parse_rat("-3").unwrap(), (rat(-3), false));
        assert_eq!(fmt_rat(&ratio(-6, 4)), "-3/2");
        assert!(parse_rat("1/0").is_err());
        assert_eq!("(0,3/2,-1)".parse::<LexVec>().unwrap().to_string(), "(0,3/2,-1)");
        assert!("0,1".parse::<LexVec>().is_err());
    }

    fn arb_lex(rank: usize) -> impl Strategy<Value = LexVec> {
        proptest::collection::vec(-5i64..=5, rank).prop_map(|v| LexVec::from_ints(&v))
    }

    proptest! {
        #[test]
        fn order_is_translation_invariant(a in arb_lex(3), b in arb_lex(3), c in arb_lex(3)) {
            let lhs = lex_cmp(&a, &b).unwrap();
            let rhs = lex_cmp(&a.try_add(&c).unwrap(), &b.try_add(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn abs_is_nonnegative(x in arb_lex(4)) {
            let a = x.abs();
            prop_assert!(a.signum() != Ordering::Less);
            prop_assert!(a == x || a == x.neg());
        }

        #[test]
        fn left_inverse_is_additive(a in arb_lex(3), x in arb_lex(3), y in arb_lex(3), m in -20i64..20) {
            prop_assume!(a.is_positive());
            let phi = left_inverse(&a).unwrap();
            let sum = phi.apply(&x.try_add(&y).unwrap()).unwrap();
            prop_assert_eq!(sum, phi.apply(&x).unwrap() + phi.apply(&y).unwrap());
            prop_assert_eq!(phi.apply(&a.scale(&rat(m))).unwrap(), rat(m));
        }

        #[test]
        fn infinitely_larger_is_strict_order(x in arb_lex(3), y in arb_lex(3), z in arb_lex(3)) {
            prop_assume!(!x.is_zero() && !y.is_zero() && !z.is_zero());
            let xy = infinitely_larger(&x, &y).unwrap();
            let yx = infinitely_larger(&y, &x).unwrap();
            prop_assert!(!(xy && yx));
            if xy && infinitely_larger(&y, &z).unwrap() {
                prop_assert!(infinitely_larger(&x, &z).unwrap());
            }
        }
    }
}
