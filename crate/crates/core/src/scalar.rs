//! Numeric backends for weights.
//!
//! Every algorithm in this crate is generic over [`Scalar`]. Two backends are
//! provided: [`Rational`] (exact, the default) and `f64` (tolerance-based).
//! Comparisons always go through [`Scalar::close`] and friends with an explicit
//! tolerance, which the exact backend ignores.

use core::fmt::{Debug, Display};
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational weight.
pub type Rational = Ratio<i128>;

/// Default comparison tolerance for the floating-point backend.
pub const DEFAULT_EPS: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when arithmetic in this backend is exact.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    /// Equality up to `eps` (exact equality for exact backends).
    fn close(&self, other: &Self, eps: f64) -> bool;

    /// `self < -eps`.
    fn is_negative_tol(&self, eps: f64) -> bool;

    /// `self > eps`.
    fn is_positive_tol(&self, eps: f64) -> bool {
        (-self.clone()).is_negative_tol(eps)
    }

    fn is_zero_tol(&self, eps: f64) -> bool {
        self.close(&Self::zero(), eps)
    }

    /// The value as an integer, if it is (within tolerance) integral.
    fn to_integer(&self, eps: f64) -> Option<i64>;

    fn to_f64(&self) -> f64;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }

    fn close(&self, other: &Self, _eps: f64) -> bool {
        self == other
    }

    fn is_negative_tol(&self, _eps: f64) -> bool {
        self.is_negative()
    }

    fn to_integer(&self, _eps: f64) -> Option<i64> {
        if self.is_integer() {
            i64::try_from(*self.numer()).ok()
        } else {
            None
        }
    }

    fn to_f64(&self) -> f64 {
        self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn close(&self, other: &Self, eps: f64) -> bool {
        let d = *self - *other;
        -eps <= d && d <= eps
    }

    fn is_negative_tol(&self, eps: f64) -> bool {
        *self < -eps
    }

    fn to_integer(&self, eps: f64) -> Option<i64> {
        let r = round_half_away(*self);
        if self.close(&r, eps) && r.abs() < 9.0e18 {
            Some(r as i64)
        } else {
            None
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

fn round_half_away(x: f64) -> f64 {
    num_traits::float::FloatCore::round(x)
}

/// Sum of `weights[q]` over the set bits `q` of `mask`; `None` if any of those
/// weights is unset.
pub(crate) fn masked_sum<S: Scalar>(weights: &[Option<S>], mask: u64) -> Option<S> {
    let mut acc = S::zero();
    let mut m = mask;
    while m != 0 {
        let q = m.trailing_zeros() as usize;
        m &= m - 1;
        acc = acc + weights.get(q)?.clone()?;
    }
    Some(acc)
}

/// Human-readable rendering used by the file formats: integers print bare,
/// other rationals as `p/q`.
pub fn format_rational(r: &Rational) -> alloc::string::String {
    use alloc::format;
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse a non-negative weight from `"p/q"`, an integer, or a decimal such as
/// `"1.25"` (converted exactly).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().ok()?;
        let q: i128 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Ratio::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if frac_part.len() > 30 {
        return None;
    }
    let mut numer: i128 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer.checked_mul(10)?.checked_add((b - b'0') as i128)?;
    }
    let denom = 10i128.checked_pow(frac_part.len() as u32)?;
    let r = Ratio::new(numer, denom);
    Some(if neg { -r } else { r })
}

/// Weight parsing for either backend.
pub trait ParseWeight: Sized {
    fn parse_weight(s: &str) -> Option<Self>;
    fn format_weight(&self) -> alloc::string::String;
}

impl ParseWeight for Rational {
    fn parse_weight(s: &str) -> Option<Self> {
        parse_rational(s)
    }

    fn format_weight(&self) -> alloc::string::String {
        format_rational(self)
    }
}

impl ParseWeight for f64 {
    fn parse_weight(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().ok()?;
            let q: f64 = q.trim().parse().ok()?;
            if q == 0.0 {
                return None;
            }
            return Some(p / q);
        }
        let v: f64 = s.parse().ok()?;
        v.is_finite().then_some(v)
    }

    fn format_weight(&self) -> alloc::string::String {
        alloc::format!("{}", self)
    }
}
