//! Exact tropical (co)homology of canonical compactifications of rational
//! simplicial fans, Chow rings of fans and matroids, and Minkowski weights.

pub mod chow;
pub mod compactify;
pub mod criteria;
pub mod exterior;
pub mod fan;
pub mod fixtures;
pub mod homology;
pub mod matroid;
pub mod sheaf;
pub mod zlinalg;
