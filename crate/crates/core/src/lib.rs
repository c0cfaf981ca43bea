//! Partial realization of standard complexes over `F2[U,V]/(U^i V^i)` and the
//! doubling and gluing construction of knot-like complexes.

pub mod algebra;
pub mod census;
pub mod error;
pub mod homology;
pub mod io;
pub mod oracle;
pub mod poly;
pub mod realization;
pub mod render;
pub mod standard;
pub mod tunnel;

pub use algebra::{Arrow, ArrowTag, BasedComplex, Bigrading, GenId, Generator, Monomial, RingLevel, TermList};
pub use error::{Error, Result};
pub use standard::{build_extended, build_standard, ExtendedSignSequence, SignSequence};
pub use tunnel::{partial_realize, DecisionOutcome};
