//! Exact arithmetic for Macfarlane quaternion algebras over imaginary quadratic
//! fields, their quaternion hyperboloid models, and a trace-ordered Dirichlet
//! domain engine for the Kleinian and Fuchsian groups acting on them.
//!
//! Everything in this crate is exact: rationals are arbitrary precision and
//! irrational quantities are carried in explicit radical form. Approximate
//! values only appear in the companion `macfarlane` crate when rendering.

#![no_std]

extern crate alloc;

pub mod dirichlet;
pub mod error;
pub mod exactnum;
pub mod hypmodel;
pub mod polytope;
pub mod quatalg;

pub use error::{DomainError, HypError, NumError, QuatError};
pub use exactnum::{QuadNum, Rat, Surd};
pub use hypmodel::{Dim, HypPoint, KleinPoint, UhsPoint};
pub use quatalg::{AlgebraDesc, GroupElem, Mat2, Quat};
