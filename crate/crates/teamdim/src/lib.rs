//! Dimension invariants of finite set families, with a team-semantics logic
//! front end.
//!
//! The library computes three cover-based dimensions of a family of subsets
//! of a finite base set: the upper dimension (minimal number of dominated
//! convex subfamilies covering the family), the dual upper dimension
//! (supported convex subfamilies) and the cylindrical dimension (intervals).
//! On top of that sit:
//!
//! * [`setfam`] — subsets, families, structural predicates, shadows, hulls,
//!   critical sets and VC dimension;
//! * [`dims`] — exact and budget-bounded dimension computation via
//!   branch-and-bound set cover;
//! * [`tensor`] — the sixteen binary tensor operators and the Kleene
//!   three-valued closed form on intervals;
//! * [`kripke`] — relation-induced operators on families, locality and
//!   separation tests, preservation checks;
//! * [`teamlogic`] — a formula language and lax team-semantics evaluator
//!   over finite structures, together with family extraction;
//! * [`atomcat`] — generators for the concrete families arising from atoms
//!   and their closed-form dimensions;
//! * [`dnfbridge`] — the correspondence between families and Boolean
//!   functions, prime implicants and minimal DNF length;
//! * [`verify`] — batteries that cross-check computed dimensions against
//!   the closed forms and logical laws.

pub mod atomcat;
pub mod dims;
pub mod dnfbridge;
pub mod error;
pub mod kripke;
mod par;
pub mod setfam;
pub mod teamlogic;
pub mod tensor;
pub mod verify;

pub use error::Error;
pub type Result<T> = std::result::Result<T, Error>;
