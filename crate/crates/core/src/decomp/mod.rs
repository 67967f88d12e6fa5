//! Constructive decomposition algorithms, each returning a certificate
//! checkable by exact matrix multiplication.

pub mod rewrite;
pub mod shrink;
pub mod suslin;
pub mod excision;
pub mod gauss;
