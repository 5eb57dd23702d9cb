//! Exact commutative-ring algebra for quadratic invariance of decentralized
//! controller sets.

pub mod ctrl;
pub mod expr;
pub mod mat_alg;
pub mod oracle;
pub mod poly_rat;
pub mod qi;
pub mod ring;
pub mod vandermonde;
