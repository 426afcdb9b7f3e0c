//! Gram matrices of multiparametric quon algebras on the free Fock space:
//! construction, closed-form determinants, and inverses organised by the
//! subdivision lattice of `{1..n}`.

pub mod algebra;
pub mod apps;
pub mod det;
pub mod fock;
pub mod gram;
pub mod inverse;
pub mod lattice;
pub mod perm;
pub mod verify;
