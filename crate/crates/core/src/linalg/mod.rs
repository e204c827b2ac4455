//! Exact integer linear algebra: Smith normal form and lattice subquotients.

mod lattice;
mod matrix;
mod ring;
mod smith;

pub use lattice::{kernel, preimage, subquotient, Lattice, Subquotient};
pub use matrix::{IntMatrix, Matrix};
pub use ring::{with_exact, ExactInt, Overflow};
pub use smith::{smith_normal_form, smith_normal_form_exact, SmithForm, Track};
