//! Exact computations around period-`p` Brauer classes of a mixed-characteristic
//! complete discretely valued field `K` whose residue field is a rational function
//! field `F_p(t_1, ..., t_n)`.
//!
//! The crate is `no_std` and only needs `alloc`. It is organised bottom-up:
//!
//! * [`poly`] and [`ratfunc`]: sparse polynomials over `Z/m` and canonical
//!   rational functions over `F_p`.
//! * [`field`]: p-th roots, p-independence and field embeddings.
//! * [`linalg`]: fraction-free elimination over the residue field.
//! * [`differentials`]: Kähler forms and their kernel decompositions.
//! * [`milnor`]: `k_2` symbol sums and the differential symbol.
//! * [`cdvf`]: the truncated unramified model of `K` and unit layers.
//! * [`brauer`]: graded pieces of the unit filtration, normal forms and the
//!   bounds built on them.
//! * [`sampling`]: random generators used by property suites.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod brauer;
pub mod cdvf;
pub mod differentials;
pub mod error;
pub mod field;
pub mod linalg;
pub mod milnor;
pub mod poly;
pub mod ratfunc;
pub mod sampling;

pub use error::{Error, Result};
pub use field::{Embedding, FieldDescriptor, FrobeniusDecomposition, Substitution};

pub use poly::{Monomial, Poly};
pub use ratfunc::RatFunc;
