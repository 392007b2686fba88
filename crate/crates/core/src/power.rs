//! The reduced finitary power monoid `Pfin,1(H)`: finite subsets of Z²
//! containing `(0,0)`, under setwise addition.
//!
//! Notation is additive throughout. A shift `a` acts on a set by
//! translation, `a + X = {a + x : x ∈ X}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::Rng;
use serde_json::Value;
use thiserror::Error;

use crate::cones::Cone;
use crate::lattice::{GroupElement, LatticeError};

/// Rejection-sampling attempts allowed per drawn element in [`gen_subset`].
pub const REJECTION_BUDGET_PER_ELEMENT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PowmonError {
    #[error("set does not contain the identity (0,0)")]
    MissingIdentity,
    #[error("no shift of {0} lies inside the monoid")]
    NoShiftFound(String),
    #[error("several shifts of {set} lie inside the monoid: {shifts:?}")]
    MultipleShiftsFound { set: String, shifts: Vec<String> },
    #[error("inductive normalization of {set} produced shift {shift} which leaves the monoid")]
    PostconditionFailed { set: String, shift: String },
    #[error("{0} is not a member of the source monoid")]
    NotInSourceMonoid(GroupElement),
    #[error("rejection sampling exceeded {attempts} attempts")]
    RejectionBudgetExceeded { attempts: usize },
    #[error("size and coordinate bounds must be at least 1")]
    InvalidBounds,
    #[error(transparent)]
    Parse(#[from] LatticeError),
    #[error("bad JSON set: {0}")]
    Json(String),
}

/// A finite subset of Z² containing `(0,0)`, kept sorted and deduplicated.
///
/// Equality is structural on the normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinSubset {
    elems: Vec<GroupElement>,
}

impl FinSubset {
    pub fn identity() -> Self {
        FinSubset {
            elems: vec![GroupElement::zero()],
        }
    }

    pub fn new(elems: impl IntoIterator<Item = GroupElement>) -> Result<Self, PowmonError> {
        let mut elems: Vec<_> = elems.into_iter().collect();
        elems.sort();
        elems.dedup();
        Self::from_sorted(elems)
    }

    fn from_sorted(elems: Vec<GroupElement>) -> Result<Self, PowmonError> {
        if elems.binary_search(&GroupElement::zero()).is_err() {
            return Err(PowmonError::MissingIdentity);
        }
        Ok(FinSubset { elems })
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elems.binary_search(g).is_ok()
    }

    pub fn is_subset_of(&self, m: &impl Cone) -> bool {
        self.elems.iter().all(|g| m.contains(g))
    }

    /// The setwise sum `{x + y : x ∈ self, y ∈ other}`.
    pub fn product(&self, other: &FinSubset) -> FinSubset {
        setwise_product(self, other)
    }

    /// JSON form: an array of `[x, y]` integer pairs.
    pub fn to_json(&self) -> Value {
        Value::Array(self.elems.iter().map(element_to_json).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self, PowmonError> {
        let arr = v
            .as_array()
            .ok_or_else(|| PowmonError::Json("expected an array".into()))?;
        let elems = arr
            .iter()
            .map(element_from_json)
            .collect::<Result<Vec<_>, _>>()?;
        FinSubset::new(elems)
    }
}

fn json_integer(n: &BigInt) -> Value {
    // arbitrary_precision keeps big coordinates exact
    Value::Number(
        n.to_string()
            .parse()
            .expect("integer literal is a JSON number"),
    )
}

pub fn element_to_json(g: &GroupElement) -> Value {
    Value::Array(vec![json_integer(&g.x), json_integer(&g.y)])
}

pub fn element_from_json(v: &Value) -> Result<GroupElement, PowmonError> {
    let coord = |c: &Value| -> Result<BigInt, PowmonError> {
        match c {
            Value::Number(n) => n
                .to_string()
                .parse()
                .map_err(|_| PowmonError::Json(format!("{n} is not an integer"))),
            other => Err(PowmonError::Json(format!("{other} is not an integer"))),
        }
    };
    match v.as_array().map(Vec::as_slice) {
        Some([x, y]) => Ok(GroupElement {
            x: coord(x)?,
            y: coord(y)?,
        }),
        _ => Err(PowmonError::Json(format!("{v} is not an [x, y] pair"))),
    }
}

/// Writes a canonically ordered slice as `{(x,y),...}`.
pub fn format_set(elems: &[GroupElement]) -> String {
    let parts: Vec<String> = elems.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

impl fmt::Display for FinSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_set(&self.elems))
    }
}

impl FromStr for FinSubset {
    type Err = PowmonError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |reason: &str| LatticeError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let inner = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| bad("expected {(x,y),...}"))?;
        let mut elems = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let close = rest.find(')').ok_or_else(|| bad("unterminated element"))?;
            elems.push(rest[..=close].parse::<GroupElement>()?);
            rest = &rest[close + 1..];
            if let Some(r) = rest.strip_prefix(',') {
                if r.is_empty() {
                    return Err(bad("trailing comma").into());
                }
                rest = r;
            } else if !rest.is_empty() {
                return Err(bad("expected , between elements").into());
            }
        }
        FinSubset::new(elems)
    }
}

pub fn setwise_product(x: &FinSubset, y: &FinSubset) -> FinSubset {
    let mut sums = Vec::with_capacity(x.len() * y.len());
    for a in &x.elems {
        for b in &y.elems {
            sums.push(a + b);
        }
    }
    sums.sort();
    sums.dedup();
    // (0,0) + (0,0) is always present
    FinSubset { elems: sums }
}

/// `a + X`. Translation preserves the canonical order, so the result is
/// already sorted and duplicate-free when `set` is.
pub fn translate(a: &GroupElement, set: &[GroupElement]) -> Vec<GroupElement> {
    set.iter().map(|x| a + x).collect()
}

/// The unique shift `a` with `a + X ⊆ H`, together with `a + X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftResult {
    pub shift: GroupElement,
    pub normalized: FinSubset,
}

impl ShiftResult {
    fn apply(shift: GroupElement, set: &FinSubset) -> Self {
        let normalized = FinSubset {
            elems: translate(&shift, &set.elems),
        };
        debug_assert!(normalized.contains(&GroupElement::zero()));
        ShiftResult { shift, normalized }
    }
}

/// Every candidate `−x` (for `x ∈ X`) whose translate of `X` lies in `m`.
///
/// Any admissible shift must be of this form, because `(0,0) ∈ a + X`
/// forces `−a ∈ X`.
pub fn admissible_shifts(m: &impl Cone, set: &FinSubset) -> Vec<GroupElement> {
    set.elems
        .iter()
        .map(|x| -x)
        .filter(|a| set.elems.iter().all(|x| m.contains(&(a + x))))
        .collect()
}

/// Reference normalization: tries all `|X|` candidate shifts and insists
/// that exactly one works.
pub fn normalize_shift_bruteforce(
    m: &impl Cone,
    set: &FinSubset,
) -> Result<ShiftResult, PowmonError> {
    let mut shifts = admissible_shifts(m, set);
    match shifts.len() {
        0 => Err(PowmonError::NoShiftFound(set.to_string())),
        1 => Ok(ShiftResult::apply(shifts.pop().unwrap(), set)),
        _ => Err(PowmonError::MultipleShiftsFound {
            set: set.to_string(),
            shifts: shifts.iter().map(ToString::to_string).collect(),
        }),
    }
}

/// Normalization by induction on `|X|`.
///
/// The step removes the canonically largest non-identity element `x`,
/// normalizes the rest to get `a`, and keeps `a` if `a + x ∈ m`, else
/// switches to `−x`. Unrolled, that is a single ascending pass over
/// `X ∖ {(0,0)}`.
pub fn normalize_shift_inductive(
    m: &impl Cone,
    set: &FinSubset,
) -> Result<ShiftResult, PowmonError> {
    let mut shift = GroupElement::zero();
    for x in set.elems.iter().filter(|x| !x.is_zero()) {
        if !m.contains(&(&shift + x)) {
            shift = -x;
        }
    }
    let result = ShiftResult::apply(shift, set);
    if !result.normalized.is_subset_of(m) {
        return Err(PowmonError::PostconditionFailed {
            set: set.to_string(),
            shift: result.shift.to_string(),
        });
    }
    Ok(result)
}

/// The isomorphism `Pfin,1(src) → Pfin,1(dst)`, `X ↦ a + X`, returning the
/// shift as well as the image.
pub fn transport_with_shift(
    src: &impl Cone,
    dst: &impl Cone,
    set: &FinSubset,
) -> Result<ShiftResult, PowmonError> {
    if let Some(bad) = set.elems.iter().find(|g| !src.contains(g)) {
        return Err(PowmonError::NotInSourceMonoid(bad.clone()));
    }
    normalize_shift_inductive(dst, set)
}

pub fn transport(
    src: &impl Cone,
    dst: &impl Cone,
    set: &FinSubset,
) -> Result<FinSubset, PowmonError> {
    transport_with_shift(src, dst, set).map(|r| r.normalized)
}

/// A random element of `Pfin,1(m)` with at most `size_bound` elements, all
/// drawn from the box `[-coord_bound, coord_bound]²`.
///
/// The number of extra elements is uniform in `0..size_bound`; each is
/// drawn by rejection sampling against `m`. Duplicates collapse, so the
/// result can be smaller than the number of draws.
pub fn gen_subset<R: Rng + ?Sized>(
    m: &impl Cone,
    size_bound: usize,
    coord_bound: i64,
    rng: &mut R,
) -> Result<FinSubset, PowmonError> {
    if size_bound < 1 || coord_bound < 1 {
        return Err(PowmonError::InvalidBounds);
    }
    let extra = rng.gen_range(0..size_bound);
    let mut elems = vec![GroupElement::zero()];
    for _ in 0..extra {
        let mut attempts = 0;
        loop {
            if attempts == REJECTION_BUDGET_PER_ELEMENT {
                return Err(PowmonError::RejectionBudgetExceeded { attempts });
            }
            attempts += 1;
            let g = GroupElement::new(
                rng.gen_range(-coord_bound..=coord_bound),
                rng.gen_range(-coord_bound..=coord_bound),
            );
            if m.contains(&g) {
                elems.push(g);
                break;
            }
        }
    }
    FinSubset::new(elems)
}
