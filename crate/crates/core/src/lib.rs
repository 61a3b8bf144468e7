//! Cayley machines of finite groups and computation in the automata groups
//! they generate.
//!
//! For a finite group `G` the Cayley machine has states and alphabet `G`, and
//! both its transition and output maps are group multiplication. Pointing the
//! machine at each state gives automorphisms `C(g)` of the rooted `|G|`-ary
//! tree; together they generate a group that splits as `N ⋊ <x>` with
//! `x = C(1)^-1` and `N` generated by the conjugates `x^n g x^-n`.
//!
//! When `G` has nilpotency class at most two the commutators of those
//! conjugates are given by an explicit integer matrix ([`coeffs`]), which
//! yields a unique normal form ([`normalform`]). The transducer algebra in
//! [`mealy`] decides equality independently, and [`relcheck`] compares the
//! two.

pub mod action;
pub mod coeffs;
pub mod fingroup;
pub mod mealy;
pub mod normalform;
pub mod relcheck;
pub mod words;

pub use coeffs::CoeffMatrix;
pub use fingroup::{builtin, FiniteGroup, GroupElement};
pub use mealy::{MealyMachine, PointedMachine};
pub use normalform::{NormalForm, Normalizer};
pub use relcheck::{Method, VerificationReport, Verifier};
pub use words::{parse, GenWord};
