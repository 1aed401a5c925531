//! Torsion of elliptic curves over Q and over quadratic fields Q(sqrt d).

pub mod coord;
pub mod corpus;
pub mod curve;
pub mod divpoly;
pub mod exact;
pub mod galois;
pub mod growth;
pub mod numeric;
pub mod poly;
pub mod quadfield;
pub mod sieve;
pub mod tate;
