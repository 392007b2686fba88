//! Reduced finitary power monoids `Pfin,1(H)` over reduced valuation
//! submonoids `H` of Z², the normalizing shift of a finite set, and the
//! isomorphism `X ↦ a + X` between the power monoids of two such `H`.
//!
//! The two shipped monoids are the lex cone `(Z×N) ∪ (N0×{0})`, which has
//! the single atom `(1,0)`, and the slope cone `{(x,y) : y ≤ αx}` for a
//! positive quadratic irrational `α`, which has none. They are not
//! isomorphic, yet their power monoids are.
//!
//! All decisions are exact: coordinates are `BigInt`s and slope
//! comparisons reduce to integer sign tests on `p + q·√n`.

pub mod cli;
pub mod cones;
pub mod lattice;
pub mod power;
pub mod verify;

pub use cones::{
    factor_nontrivial, Cone, ConeError, FactorWitness, Irreducibility, MonoidSpec, WholeGroup,
    DEFAULT_MAX_RADIUS,
};
pub use lattice::{sign_quad, GroupElement, LatticeError, QuadraticIrrational};
pub use power::{
    gen_subset, normalize_shift_bruteforce, normalize_shift_inductive, setwise_product, translate,
    transport, transport_with_shift, FinSubset, PowmonError, ShiftResult,
};
pub use verify::{verify, Property, VerifyConfig, VerifyError, VerifyReport};
