//! Finite commutative semihypergroups given by structure-constant cubes.
//!
//! A cube of order `n` lists, for every ordered pair of states `(i, j)`, the
//! probability distribution `a_{i,j}` of the state produced by combining
//! `e_i` with `e_j`. This crate
//!
//! - validates cubes and convolves measures ([`cube`]),
//! - decides commutativity, associativity and condition (A), and runs the
//!   structural diagnostics ([`checks`]),
//! - enumerates finite abelian groups and their regular representations
//!   ([`groups`]),
//! - builds the cube of the translates `m·g_i` of a measure on a group
//!   ([`derivation`]),
//! - recovers group and measure from a cube, certified by exact re-derivation
//!   ([`recovery`]).
//!
//! All arithmetic is exact over arbitrary-precision rationals.
//!
//! ```
//! use hgforge::{cayley_table, derive_cube, recover, InvariantFactors, MeasureVector, RecoveryResult};
//! use hgforge::rational::ratio;
//!
//! let z2 = cayley_table(&InvariantFactors::new(vec![2]).unwrap());
//! let m = MeasureVector::new(vec![ratio(3, 4), ratio(1, 4)]).unwrap();
//! let cube = derive_cube(&z2, &m).unwrap();
//! assert!(matches!(recover(&cube), RecoveryResult::Recovered { measure, .. } if measure == m));
//! ```

#![allow(clippy::needless_range_loop)]

pub mod checks;
pub mod cube;
pub mod derivation;
pub mod formats;
pub mod groups;
pub mod matrix;
pub mod rational;
pub mod recovery;
pub mod report;
pub mod roundtrip;
pub mod sampler;
mod scaled;

pub use checks::{
    check_corollaries, is_associative_bruteforce, is_associative_matrix, is_commutative, satisfies_condition_a,
    Checker, ConditionAReport,
};
pub use cube::{
    convolve_measures, validate_cube, CoreError, MeasureVector, StateIndex, StructureCube, ValidationError,
};
pub use derivation::{degeneracy_check, derive_cube, mixture_matrix, DegeneracyVerdict, MixtureMatrix};
pub use groups::{
    canonical_form, cayley_table, enumerate_abelian_groups, regular_representation, verify_group_axioms, CayleyTable,
    GroupError, InvariantFactors, PermutationRep,
};
pub use matrix::RationalMatrix;
pub use rational::Rational;
pub use recovery::{
    extract_group_by_value, recover, recover_measure_from_a1, recover_raw, ExtractionFailure, RecoveryResult,
    RejectionReason,
};
pub use report::{Property, PropertyReport, Witness};
