//! Exact integer and rational linear algebra.

pub mod group;
pub mod lattice;
pub mod lp;
pub mod matrix;
pub mod rational;
pub mod snf;

pub use group::{cokernel_group, AbGroup, QuotientCoords, QuotientMap};
pub use lattice::Sublattice;
pub use lp::{feasible, minimize, strict_lp_feasible, Certificate, Constraint, Feasibility, Minimum, Relation};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use rational::{rat, CoordBasis, Rat};
pub use snf::{det, hnf, kernel_basis, rank, saturate_rows, snf, solve_int_rows, Snf};
