//! Exact cluster algebra structure on the coordinate ring of the base affine
//! space of `GL_n`: tableau labels of cluster variables via lexicographic
//! leading terms, and the simplicial fan of seed cones in the cone of
//! D-tight arrays.

pub mod claims;
pub mod cluster;
pub mod error;
pub mod export;
pub mod fan;
pub mod linalg;
pub mod lp;
pub mod poly;
pub mod quiver;
pub mod ssyt;

pub use error::{Error, Result};
