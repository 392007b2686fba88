//! Exact arithmetic on the group Z² and on real quadratic irrationals.
//!
//! Every comparison made elsewhere in the crate bottoms out in
//! [`sign_quad`] or [`QuadraticIrrational::cmp_slope`]. No floating point
//! is involved; coordinates and coefficients are arbitrary-precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("radicand {0} is a perfect square")]
    PerfectSquare(BigInt),
    #[error("radicand must be positive, got {0}")]
    NonPositiveRadicand(BigInt),
    #[error("coefficient of the square root must be nonzero")]
    ZeroSurdCoefficient,
    #[error("value {0} is not positive")]
    NonPositiveValue(String),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

fn parse_err(input: &str, reason: impl Into<String>) -> LatticeError {
    LatticeError::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// A point of (Z², +).
///
/// The derived ordering (by `x`, then `y`) is only used to put finite sets
/// into a canonical order. It has no algebraic meaning.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GroupElement {
    pub x: BigInt,
    pub y: BigInt,
}

impl GroupElement {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        GroupElement {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn zero() -> Self {
        GroupElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;
    fn add(self, rhs: &GroupElement) -> GroupElement {
        GroupElement {
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
        }
    }
}

impl Add for GroupElement {
    type Output = GroupElement;
    fn add(self, rhs: GroupElement) -> GroupElement {
        GroupElement {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
        }
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: &GroupElement) -> GroupElement {
        GroupElement {
            x: &self.x - &rhs.x,
            y: &self.y - &rhs.y,
        }
    }
}

impl Sub for GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: GroupElement) -> GroupElement {
        &self - &rhs
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        GroupElement {
            x: -&self.x,
            y: -&self.y,
        }
    }
}

impl Neg for GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        GroupElement {
            x: -self.x,
            y: -self.y,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

fn parse_bigint(s: &str) -> Option<BigInt> {
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() || s.starts_with(['+']) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for GroupElement {
    type Err = LatticeError;

    /// Accepts `(x,y)` with optional signs; whitespace is ignored.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| parse_err(input, "expected (x,y)"))?;
        let (xs, ys) = inner
            .split_once(',')
            .ok_or_else(|| parse_err(input, "expected two comma-separated coordinates"))?;
        let x = parse_bigint(xs).ok_or_else(|| parse_err(input, "bad x coordinate"))?;
        let y = parse_bigint(ys).ok_or_else(|| parse_err(input, "bad y coordinate"))?;
        Ok(GroupElement { x, y })
    }
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Sign of `p + q·√n` for integers `p`, `q`; `n` must be a non-square.
fn sign_surd(p: &BigInt, q: &BigInt, n: &BigInt) -> Ordering {
    let ps = p.cmp(&BigInt::zero());
    let qs = q.cmp(&BigInt::zero());
    match (ps, qs) {
        (Ordering::Equal, Ordering::Equal) => Ordering::Equal,
        (Ordering::Less | Ordering::Equal, Ordering::Less | Ordering::Equal) => Ordering::Less,
        (Ordering::Greater | Ordering::Equal, Ordering::Greater | Ordering::Equal) => {
            Ordering::Greater
        }
        // q > 0 > p: compare q²n with p².
        (Ordering::Less, Ordering::Greater) => (q * q * n).cmp(&(p * p)),
        // p > 0 > q
        (Ordering::Greater, Ordering::Less) => (p * p).cmp(&(q * q * n)),
    }
}

/// Exact sign of the real number `p + q·√n`, reported as its ordering
/// relative to zero.
pub fn sign_quad(p: &BigRational, q: &BigRational, n: &BigInt) -> Result<Ordering, LatticeError> {
    if !n.is_positive() {
        return Err(LatticeError::NonPositiveRadicand(n.clone()));
    }
    if is_perfect_square(n) {
        return Err(LatticeError::PerfectSquare(n.clone()));
    }
    // Scale both terms by the (positive) product of denominators.
    let pi = p.numer() * q.denom();
    let qi = q.numer() * p.denom();
    Ok(sign_surd(&pi, &qi, n))
}

/// A positive real quadratic irrational `a + b·√n`.
///
/// Internally the value is also kept as `(num_a + num_b·√n) / den` with
/// integer coefficients and `den > 0`, which is what the comparison
/// routines work with.
#[derive(Clone, Debug)]
pub struct QuadraticIrrational {
    a: BigRational,
    b: BigRational,
    n: BigInt,
    num_a: BigInt,
    num_b: BigInt,
    den: BigInt,
}

impl PartialEq for QuadraticIrrational {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.n == other.n
    }
}

impl Eq for QuadraticIrrational {}

impl QuadraticIrrational {
    pub fn new(a: BigRational, b: BigRational, n: BigInt) -> Result<Self, LatticeError> {
        if !n.is_positive() {
            return Err(LatticeError::NonPositiveRadicand(n));
        }
        if is_perfect_square(&n) {
            return Err(LatticeError::PerfectSquare(n));
        }
        if b.is_zero() {
            return Err(LatticeError::ZeroSurdCoefficient);
        }
        let den = a.denom().lcm(b.denom());
        let num_a = a.numer() * (&den / a.denom());
        let num_b = b.numer() * (&den / b.denom());
        let value = QuadraticIrrational {
            a,
            b,
            n,
            num_a,
            num_b,
            den,
        };
        if sign_surd(&value.num_a, &value.num_b, &value.n) != Ordering::Greater {
            return Err(LatticeError::NonPositiveValue(value.to_string()));
        }
        Ok(value)
    }

    /// `√n` for a positive non-square `n`.
    pub fn sqrt(n: impl Into<BigInt>) -> Result<Self, LatticeError> {
        Self::new(BigRational::zero(), BigRational::one(), n.into())
    }

    /// The shipped default slope, √2.
    pub fn sqrt2() -> Self {
        Self::sqrt(2).expect("2 is not a perfect square")
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    /// Ordering of `α·x` against `y`, i.e. the sign of `α·x − y`.
    ///
    /// `Equal` is returned only for `x = y = 0`.
    pub fn cmp_slope(&self, x: &BigInt, y: &BigInt) -> Ordering {
        let p = &self.num_a * x - &self.den * y;
        let q = &self.num_b * x;
        sign_surd(&p, &q, &self.n)
    }

    /// `⌊α·x⌋`, exact.
    pub fn floor_mul(&self, x: &BigInt) -> BigInt {
        if x.is_zero() {
            return BigInt::zero();
        }
        // Estimate from the integer square root of (num_b·x)²·n, then settle
        // the last step with exact comparisons.
        let c = &self.num_b * x;
        let r = (&c * &c * &self.n).sqrt();
        let surd_floor = if c.is_negative() { -r - 1 } else { r };
        let mut k = (&self.num_a * x + surd_floor).div_floor(&self.den);
        loop {
            let next = &k + 1;
            if self.cmp_slope(x, &next) == Ordering::Less {
                break;
            }
            k = next;
        }
        while self.cmp_slope(x, &k) == Ordering::Less {
            k -= 1;
        }
        k
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let surd = if self.b.is_one() {
            format!("sqrt({})", self.n)
        } else if (-&self.b).is_one() {
            format!("-sqrt({})", self.n)
        } else {
            format!("{}*sqrt({})", fmt_rational(&self.b), self.n)
        };
        if self.a.is_zero() {
            f.write_str(&surd)
        } else if self.b.is_positive() {
            write!(f, "{}+{}", fmt_rational(&self.a), surd)
        } else {
            write!(f, "{}{}", fmt_rational(&self.a), surd)
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (parse_bigint(n)?, parse_bigint(d)?),
        None => (parse_bigint(s)?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

impl FromStr for QuadraticIrrational {
    type Err = LatticeError;

    /// Accepts `sqrt(n)`, `b*sqrt(n)`, `a+b*sqrt(n)`, `a-b*sqrt(n)` and
    /// `a+sqrt(n)`, where `a` and `b` are integers or `p/q` fractions.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let idx = s
            .find("sqrt(")
            .ok_or_else(|| parse_err(input, "expected sqrt(n)"))?;
        let n = s[idx + 5..]
            .strip_suffix(')')
            .and_then(parse_bigint)
            .ok_or_else(|| parse_err(input, "bad radicand"))?;
        let prefix = &s[..idx];

        let (a, b) = if prefix.is_empty() || prefix == "+" {
            (BigRational::zero(), BigRational::one())
        } else if let Some(body) = prefix.strip_suffix('*') {
            match body.rfind(['+', '-']).filter(|&i| i > 0) {
                Some(i) => {
                    let a = parse_rational(&body[..i])
                        .ok_or_else(|| parse_err(input, "bad rational part"))?;
                    let b = parse_rational(&body[i..])
                        .ok_or_else(|| parse_err(input, "bad coefficient"))?;
                    (a, b)
                }
                None => {
                    let b =
                        parse_rational(body).ok_or_else(|| parse_err(input, "bad coefficient"))?;
                    (BigRational::zero(), b)
                }
            }
        } else {
            let sign = prefix.chars().last().unwrap_or('+');
            let head = &prefix[..prefix.len() - 1];
            let b = match sign {
                '+' => BigRational::one(),
                '-' => -BigRational::one(),
                _ => return Err(parse_err(input, "expected + or - before sqrt")),
            };
            let a = if head.is_empty() {
                BigRational::zero()
            } else {
                parse_rational(head).ok_or_else(|| parse_err(input, "bad rational part"))?
            };
            (a, b)
        };
        QuadraticIrrational::new(a, b, n)
    }
}
