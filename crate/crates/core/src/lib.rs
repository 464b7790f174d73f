//! Exact computer algebra for Manin triples, Drinfel'd doubles, and the
//! Poisson-Lie structures they induce on low-dimensional kinematical groups.
//!
//! The crate is organised in layers:
//!
//! * [`coeff`] - exact scalar coefficients (rationals, parameters, radicals);
//! * [`liealg`] - Lie algebras, tensors, invariant forms, linear maps;
//! * [`bialg`] - cocommutators, Schouten brackets, coisotropy tests;
//! * [`doubles`] - Manin triples, double assembly, the case catalog;
//! * [`stachura`] - the r-matrix classification by (mu, p) invariants;
//! * [`contraction`] - the cosmological-constant family and its limits;
//! * [`plgroup`] - matrix groups, invariant vector fields, Sklyanin brackets.

pub mod bialg;
pub mod coeff;
pub mod contraction;
pub mod doubles;
pub mod liealg;
pub mod linalg;
pub mod plgroup;
pub mod stachura;
pub mod tensor;
