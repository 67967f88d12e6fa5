//! Split Chevalley groups in the adjoint representation: structure
//! constants, root unipotents, torus elements, word evaluation, and
//! factorization of unipotent matrices into root elements.

pub mod lie;
pub mod matrix;
pub mod rep;
pub mod word;
