//! Workbench for the computable core of quotient symmetric group theory:
//! orbit censuses of permutation tuples, exhaustive verification of the
//! alternating-group representation lemmas, a compiler between the language
//! of groups and a many-sorted census language with a finite truth oracle,
//! base-Omega ordinal arithmetic, and an elementary-equivalence invariant
//! classifier over symbolic cardinal parameters.

pub mod alt5;
pub mod census;
pub mod classifier;
pub mod logic;
pub mod ordinal;
pub mod perm;
