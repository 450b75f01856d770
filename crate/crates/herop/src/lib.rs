//! Toolkit for commuting tuples of complex matrices: the hereditary
//! functional calculus, (A,m)-isometry checkers, joint generalized
//! eigenspace decompositions (the S+N split), and the structure of
//! 2-isometric tuples.

pub mod classify;
pub mod gen;
pub mod hereditary;
pub mod io;
pub mod linalg;
pub mod spectral;
pub mod tuples;

pub use hereditary::{HereditaryPolynomial, MultiIndex};
pub use linalg::{Basis, Matrix};
pub use tuples::{CheckReport, CommutingTuple};
