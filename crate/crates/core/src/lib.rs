//! Exact computer algebra for the Moyal ⋆-product on polynomial symbols.
//!
//! The crate works over the Gaussian rationals ℚ(i) throughout, so every
//! algebraic identity it claims is checked exactly, never in floating point.
//! Floating point appears only in convergence bookkeeping for the graded
//! series of the inverse Weyl transform.
//!
//! The layers, bottom to top:
//!
//! - [`scalar`], [`multi_index`], [`poly`]: sparse multivariate polynomials
//!   over ℚ(i) with graded-lex term order, in either symplectic variables
//!   `p_1..p_n, q_1..q_n` or plain variables `x_1..x_m`.
//! - [`moyal`]: the ⋆-product `F ⋆_t G = Σ t^k C_k(F, G)`, four bracket
//!   flavours, the supertrace, and the bilinear forms κ and B.
//! - [`laguerre`]: generalized Laguerre polynomials and the closed form of
//!   `q^i ⋆ p^j`.
//! - [`weyl`]: the associative algebra on `p_i, q_i` with `p_i q_i − q_i p_i
//!   = 1` presented by normal ordering, the symmetrization map ρ, and the
//!   pullback product that must agree with ⋆.
//! - [`osp`]: the orthosymplectic Lie superalgebra sitting inside degrees one
//!   and two, its roots, and the decomposition machinery built on brackets.
//! - [`operators`]: linear operators on polynomials, their reconstruction as
//!   differential-operator series, and normal symbols.
//! - [`trace`]: the renormalized supertrace on the completed algebra and the
//!   formal inverse Weyl transform, with explicit convergence policies.
//!
//! Parallelism is provided by the `parallel` feature (on by default) through
//! [`exec`]; results are bitwise identical with it on or off.

pub mod comb;
pub mod error;
pub mod exec;
pub mod json;
pub mod laguerre;
pub mod linalg;
pub mod moyal;
pub mod multi_index;
pub mod operators;
pub mod osp;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod trace;
pub mod weyl;

pub use error::{Error, Result};
pub use multi_index::MultiIndex;
pub use poly::{Poly, VarKind};
pub use scalar::Scalar;
