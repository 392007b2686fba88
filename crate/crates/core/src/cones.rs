//! Reduced valuation submonoids of Z², given as positive cones of total
//! group orders.
//!
//! Two families are provided:
//!
//! * [`MonoidSpec::Lex`]: `(Z×N) ∪ (N0×{0})`, the nonnegative cone of the
//!   lexicographic order that compares `y` first.
//! * [`MonoidSpec::Slope`]: `{(x,y) : y ≤ αx}` for a positive quadratic
//!   irrational `α`.
//!
//! The lex cone has exactly one atom, `(1,0)`. This is derived from the
//! definition rather than quoted: any member with `y ≥ 1` splits off a
//! `(·,1)` or `(0,·)` part, and `(x,0)` with `x ≥ 2` splits off `(1,0)`.
//! The slope cone has no atoms; [`factor_nontrivial`] produces an explicit
//! splitting for any nonzero member.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{GroupElement, LatticeError, QuadraticIrrational};

/// Default cap on the search radius of [`factor_nontrivial`].
pub const DEFAULT_MAX_RADIUS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("{element} is not a member of {monoid}")]
    NotAMember {
        monoid: String,
        element: GroupElement,
    },
    #[error("the identity has no factorization into non-units")]
    Identity,
    #[error("no factorization found within radius {max_radius} (inconclusive, not a proof of irreducibility)")]
    SearchExhausted { max_radius: u64 },
}

/// Membership predicate of a subset of Z².
///
/// The power-monoid algorithms are written against this trait so they can
/// be exercised on deliberately broken cones as well.
pub trait Cone: Send + Sync {
    fn contains(&self, g: &GroupElement) -> bool;
}

/// All of Z²; used to sample elements of `Pfin,1(Z²)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct WholeGroup;

impl Cone for WholeGroup {
    fn contains(&self, _g: &GroupElement) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum MonoidSpec {
    Lex,
    Slope(QuadraticIrrational),
}

impl Cone for MonoidSpec {
    fn contains(&self, g: &GroupElement) -> bool {
        match self {
            MonoidSpec::Lex => g.y.is_positive() || (g.y.is_zero() && !g.x.is_negative()),
            MonoidSpec::Slope(alpha) => alpha.cmp_slope(&g.x, &g.y) != Ordering::Less,
        }
    }
}

impl<C: Cone + ?Sized> Cone for &C {
    fn contains(&self, g: &GroupElement) -> bool {
        (**self).contains(g)
    }
}

/// A nontrivial splitting `g = g1 + g2` inside a monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorWitness {
    pub g1: GroupElement,
    pub g2: GroupElement,
}

impl FactorWitness {
    /// Both parts nonzero members of `m` summing to `g`.
    pub fn validates(&self, m: &impl Cone, g: &GroupElement) -> bool {
        !self.g1.is_zero()
            && !self.g2.is_zero()
            && m.contains(&self.g1)
            && m.contains(&self.g2)
            && &self.g1 + &self.g2 == *g
    }
}

impl fmt::Display for FactorWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}", self.g1, self.g2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Unit,
    Irreducible,
    Reducible(FactorWitness),
}

impl MonoidSpec {
    pub fn lex() -> Self {
        MonoidSpec::Lex
    }

    pub fn slope(alpha: QuadraticIrrational) -> Self {
        MonoidSpec::Slope(alpha)
    }

    pub fn is_unit(&self, g: &GroupElement) -> bool {
        self.contains(g) && self.contains(&-g)
    }

    pub fn valuation_check(&self, g: &GroupElement) -> bool {
        self.contains(g) || self.contains(&-g)
    }

    fn require_member(&self, g: &GroupElement) -> Result<(), ConeError> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(ConeError::NotAMember {
                monoid: self.to_string(),
                element: g.clone(),
            })
        }
    }

    /// Classifies a member of the monoid, using [`DEFAULT_MAX_RADIUS`] for
    /// the slope-cone search.
    pub fn is_irreducible(&self, g: &GroupElement) -> Result<Irreducibility, ConeError> {
        self.is_irreducible_within(g, DEFAULT_MAX_RADIUS)
    }

    pub fn is_irreducible_within(
        &self,
        g: &GroupElement,
        max_radius: u64,
    ) -> Result<Irreducibility, ConeError> {
        self.require_member(g)?;
        if g.is_zero() {
            return Ok(Irreducibility::Unit);
        }
        match self {
            MonoidSpec::Lex => Ok(lex_split(g)
                .map(Irreducibility::Reducible)
                .unwrap_or(Irreducibility::Irreducible)),
            MonoidSpec::Slope(alpha) => {
                factor_nontrivial(alpha, g, max_radius).map(Irreducibility::Reducible)
            }
        }
    }

    /// `(h1, h2)` with both in the monoid and `h1 − h2 = g`.
    pub fn difference_witness(&self, g: &GroupElement) -> (GroupElement, GroupElement) {
        if self.contains(g) {
            (g.clone(), GroupElement::zero())
        } else {
            (GroupElement::zero(), -g)
        }
    }
}

/// Closed-form splitting of a nonzero lex-cone member; `None` only for `(1,0)`.
fn lex_split(g: &GroupElement) -> Option<FactorWitness> {
    let one = BigInt::one();
    if g.y > one {
        Some(FactorWitness {
            g1: GroupElement::new(g.x.clone(), 1),
            g2: GroupElement::new(0, &g.y - 1),
        })
    } else if g.y == one {
        Some(FactorWitness {
            g1: GroupElement::new(1, 0),
            g2: GroupElement::new(&g.x - 1, 1),
        })
    } else if g.x > one {
        Some(FactorWitness {
            g1: GroupElement::new(1, 0),
            g2: GroupElement::new(&g.x - 1, 0),
        })
    } else {
        None
    }
}

/// Splits a nonzero member `g` of the slope cone `{y ≤ αx}` into two
/// nonzero members.
///
/// Candidates `g1 = (x1, y1)` are scanned by increasing radius `|x1|`,
/// then ascending `x1`, then descending `y1`. For a given `x1` the valid
/// `y1` form the interval `[g.y − ⌊α(g.x − x1)⌋, ⌊α·x1⌋]`.
pub fn factor_nontrivial(
    alpha: &QuadraticIrrational,
    g: &GroupElement,
    max_radius: u64,
) -> Result<FactorWitness, ConeError> {
    let m = MonoidSpec::Slope(alpha.clone());
    m.require_member(g)?;
    if g.is_zero() {
        return Err(ConeError::Identity);
    }
    for r in 1..=max_radius {
        let r = BigInt::from(r);
        let xs = if r.is_one() {
            vec![-&r, BigInt::zero(), r]
        } else {
            vec![-&r, r]
        };
        for x1 in xs {
            if let Some(w) = split_at(alpha, g, x1) {
                return Ok(w);
            }
        }
    }
    Err(ConeError::SearchExhausted { max_radius })
}

fn split_at(alpha: &QuadraticIrrational, g: &GroupElement, x1: BigInt) -> Option<FactorWitness> {
    let hi = alpha.floor_mul(&x1);
    let x2 = &g.x - &x1;
    let lo = &g.y - alpha.floor_mul(&x2);
    let mut y1 = hi;
    // At most the endpoints can produce a zero part, so this runs at most
    // three iterations.
    while y1 >= lo {
        let g1 = GroupElement::new(x1.clone(), y1.clone());
        let g2 = g - &g1;
        if !g1.is_zero() && !g2.is_zero() {
            return Some(FactorWitness { g1, g2 });
        }
        y1 -= 1;
    }
    None
}

impl fmt::Display for MonoidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoidSpec::Lex => f.write_str("lex"),
            MonoidSpec::Slope(alpha) => write!(f, "slope:{alpha}"),
        }
    }
}

impl FromStr for MonoidSpec {
    type Err = LatticeError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s = input.trim();
        if s == "lex" {
            return Ok(MonoidSpec::Lex);
        }
        match s.strip_prefix("slope:") {
            Some(alpha) => Ok(MonoidSpec::Slope(alpha.parse()?)),
            None => Err(LatticeError::Parse {
                input: input.to_string(),
                reason: "expected `lex` or `slope:<alpha>`".to_string(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> GroupElement {
        GroupElement::new(x, y)
    }

    fn slope() -> MonoidSpec {
        MonoidSpec::Slope(QuadraticIrrational::sqrt2())
    }

    #[test]
    fn contains_examples() {
        let lex = MonoidSpec::Lex;
        assert!(lex.contains(&p(-3, 1)));
        assert!(!lex.contains(&p(-1, 0)));
        assert!(slope().contains(&p(1, 1)));
        assert!(!slope().contains(&p(1, 2)));
        assert!(lex.contains(&p(0, 0)));
        assert!(slope().contains(&p(0, 0)));
    }

    #[test]
    fn unit_examples() {
        assert!(MonoidSpec::Lex.is_unit(&p(0, 0)));
        assert!(slope().is_unit(&p(0, 0)));
        assert!(!MonoidSpec::Lex.is_unit(&p(1, 0)));
        assert!(!slope().is_unit(&p(1, 1)));
    }

    #[test]
    fn valuation_examples() {
        assert!(MonoidSpec::Lex.valuation_check(&p(-7, 0)));
        assert!(slope().valuation_check(&p(0, 5)));
        assert!(MonoidSpec::Lex.valuation_check(&p(0, 0)));
    }

    #[test]
    fn lex_irreducibility() {
        let lex = MonoidSpec::Lex;
        assert_eq!(
            lex.is_irreducible(&p(1, 0)),
            Ok(Irreducibility::Irreducible)
        );
        assert_eq!(lex.is_irreducible(&p(0, 0)), Ok(Irreducibility::Unit));
        assert_eq!(
            lex.is_irreducible(&p(-5, 1)),
            Ok(Irreducibility::Reducible(FactorWitness {
                g1: p(1, 0),
                g2: p(-6, 1)
            }))
        );
        assert!(matches!(
            lex.is_irreducible(&p(-1, 0)),
            Err(ConeError::NotAMember { .. })
        ));
    }

    /// Exhaustive search for any splitting inside a box; independent of the
    /// closed form.
    fn brute_force_split(m: &MonoidSpec, g: &GroupElement, bound: i64) -> Option<FactorWitness> {
        for x1 in -bound..=bound {
            for y1 in -bound..=bound {
                let g1 = p(x1, y1);
                let w = FactorWitness { g2: g - &g1, g1 };
                if w.validates(m, g) {
                    return Some(w);
                }
            }
        }
        None
    }

    #[test]
    fn lex_closed_form_matches_brute_force() {
        let lex = MonoidSpec::Lex;
        for x in -6..=6 {
            for y in 0..=6 {
                let g = p(x, y);
                if !lex.contains(&g) || g.is_zero() {
                    continue;
                }
                let brute = brute_force_split(&lex, &g, 10);
                match lex.is_irreducible(&g).unwrap() {
                    Irreducibility::Irreducible => assert!(brute.is_none(), "{g}"),
                    Irreducibility::Reducible(w) => {
                        assert!(w.validates(&lex, &g));
                        assert!(brute.is_some());
                    }
                    Irreducibility::Unit => unreachable!(),
                }
            }
        }
    }

    #[test]
    fn slope_factor_examples() {
        let alpha = QuadraticIrrational::sqrt2();
        let m = slope();
        for g in [p(2, 2), p(0, -1), p(1, 0), p(1, 1)] {
            let w = factor_nontrivial(&alpha, &g, DEFAULT_MAX_RADIUS).unwrap();
            assert!(w.validates(&m, &g), "{g}: {w}");
        }
        // the concrete witnesses named as examples are themselves valid
        let named = [
            (p(2, 2), p(1, 1), p(1, 1)),
            (p(0, -1), p(1, 1), p(-1, -2)),
            (p(1, 0), p(-1, -2), p(2, 2)),
        ];
        for (g, g1, g2) in named {
            assert!(FactorWitness { g1, g2 }.validates(&m, &g));
        }
        assert!(matches!(
            m.is_irreducible(&p(1, 1)),
            Ok(Irreducibility::Reducible(_))
        ));
    }

    #[test]
    fn slope_factor_errors() {
        let alpha = QuadraticIrrational::sqrt2();
        assert!(matches!(
            factor_nontrivial(&alpha, &p(1, 2), 10),
            Err(ConeError::NotAMember { .. })
        ));
        assert_eq!(
            factor_nontrivial(&alpha, &p(0, 0), 10),
            Err(ConeError::Identity)
        );
        // radius 0 can never find anything
        assert_eq!(
            factor_nontrivial(&alpha, &p(1, 1), 0),
            Err(ConeError::SearchExhausted { max_radius: 0 })
        );
    }

    #[test]
    fn difference_witness_examples() {
        assert_eq!(
            MonoidSpec::Lex.difference_witness(&p(-1, 0)),
            (p(0, 0), p(1, 0))
        );
        assert_eq!(
            MonoidSpec::Lex.difference_witness(&p(3, 1)),
            (p(3, 1), p(0, 0))
        );
        assert_eq!(slope().difference_witness(&p(0, 1)), (p(0, 0), p(0, -1)));
    }

    #[test]
    fn spec_text_round_trip() {
        for s in ["lex", "slope:sqrt(2)", "slope:1/2+3*sqrt(5)"] {
            let m: MonoidSpec = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("slope:sqrt(9)".parse::<MonoidSpec>().is_err());
        assert!("lexx".parse::<MonoidSpec>().is_err());
    }
}
