//! Convolution of independent group-valued random variables, realised as
//! multiplication of doubly stochastic matrices, and the random walks built
//! from it.
//!
//! A finite group `G = {g_1, ..., g_n}` embeds into the symmetric group on
//! its own elements through left translations `σ_k(j) = index of g_k·g_j`.
//! Each `σ_k` has a permutation matrix `P_k` with `P_k[i][j] = 1` iff
//! `i = σ_k(j)`, and a distribution `p` on `G` is sent to its *convolution
//! matrix* `Con(p) = Σ_k p_k P_k`. The map is a homomorphism:
//! `Con(p * q) = Con(p) Con(q)`, and [`cayley::check_homomorphism`] verifies
//! this with exact rational arithmetic.
//!
//! For a walk `X_{m+1} = X_m ξ_{m+1}` with i.i.d. increments of law `ξ`,
//! `Con(L(X_m)) = Con(ξ)^m`; when `ξ` has full support that power tends to
//! `J/n` and the marginal law tends to the uniform distribution. The
//! [`walk`] module tracks this exactly, [`spectral`] supplies the float
//! eigen-analysis and [`simulate`] an independent Monte Carlo check.
//!
//! Element indices are 0-based throughout the API; every file format and
//! report uses 1-based indices.

pub mod cayley;
pub mod distribution;
pub mod error;
pub mod group;
pub mod linalg;
pub mod random;
pub mod rational;
pub mod simulate;
pub mod spectral;
pub mod walk;

pub use cayley::{BinaryMatrix, HomomorphismCheck, StochasticMatrix};
pub use distribution::GroupDistribution;
pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupValidationReport, Magma, Permutation};
pub use rational::Rational;
pub use simulate::SimulationResult;
pub use spectral::FloatMatrix;
pub use walk::{WalkOptions, WalkReport};
