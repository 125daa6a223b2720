//! Decision analysis for problems where something unforeseen may happen.
//!
//! Foreseen atomic events are described by categorical characteristics. An
//! unforeseen event is labelled with the set of foreseen atoms it resembles
//! most closely (matching characteristics in decreasing order of importance),
//! so every outcome maps onto the power set of the foreseen atoms. Assessed
//! probabilities over those labels, conditioned on "something recognisable
//! happened", form a basic probability assignment. Decisions are then ranked
//! by expected utility where the weights are normalized commonalities
//! `C^N(E) = sum over A containing E of m(A) / |A|`.
//!
//! ```
//! use foresight::{MassFunction, Subset, belief};
//!
//! let mf = MassFunction::new(3, vec![
//!     (Subset::from_indices([0]), 0.5),
//!     (Subset::from_indices([0, 1]), 0.3),
//!     (Subset::from_indices([0, 1, 2]), 0.2),
//! ]).unwrap();
//! let cn = belief::atom_normalized_commonalities(&mf).unwrap();
//! assert!((cn.values()[0] - (0.5 + 0.15 + 0.2 / 3.0)).abs() < 1e-12);
//! ```

pub mod belief;
pub mod cli;
pub mod decision;
pub mod document;
mod error;
pub mod event_space;
pub mod oracle;
mod subset;
pub mod unforeseen;

pub use belief::{CommonalityKind, CommonalityVector, MassFunction};
pub use decision::{DecisionRanking, Method, UtilityTable};
pub use error::{Error, Result};
pub use event_space::{Atom, Characteristic, CharacteristicSchema, EventSpace, Level};
pub use subset::Subset;
pub use unforeseen::{Label, RawAssessment, UnforeseenProfile};

/// Tolerance for validating that input probabilities sum to one.
pub const EPS_NORM: f64 = 1e-9;
/// Tolerance for algebraic identities between equivalent computations.
pub const EPS_NUM: f64 = 1e-12;
/// Expected utilities closer than this are reported as ties.
pub const EPS_TIE: f64 = 1e-9;
