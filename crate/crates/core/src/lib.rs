//! Exact symbolic computation in quantum matrix algebras `O_q(M(m,n))` and
//! quantum grassmannians `O_q(G(k,n))` over the rational function field `Q(q)`.
//!
//! The deformation parameter `q` is kept as a formal variable, so equalities
//! are decided exactly and `q` is never a root of unity. The main layers are:
//!
//! - [`scalar`]: the coefficient field `Q(q)` with canonical fraction form.
//! - [`qmatrix`]: quantum matrices with PBW normal forms, quantum
//!   determinants, quantum minors and the transpose isomorphism.
//! - [`grassmann`]: quantum Plucker coordinates, the standard-monomial
//!   machinery, and arithmetic in the localization at `[u] = [1..k]`.
//! - [`dehom`]: the skew Laurent picture `O_q(M(k,p))[y^{±1}; σ]` of the
//!   localized grassmannian, translation formulas and the two gradings.
//! - [`autos`]: torus automorphisms, the diagram automorphism, the
//!   `k <-> n-k` isomorphism, the order-reversing map `θ`, and the
//!   realizability solver for column-scaling actions.
//! - [`linalg`]: exact linear algebra over `Q(q)`, integer lattice solving
//!   and GF(2) elimination used by the modules above.

pub mod autos;
pub mod dehom;
mod error;
pub mod grassmann;
pub mod linalg;
pub mod qmatrix;
pub mod scalar;

pub use error::{Error, Result};
