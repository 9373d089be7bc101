//! Exact and high-precision machinery for combinatorial Stieltjes moment
//! sequences.
//!
//! The crate centers on the moment sequences attached to Catalan-type
//! combinatorics — Catalan numbers `C_n`, central binomial coefficients
//! `B_n = (2n choose n)`, double factorials `(2n-1)!!`, factorials, and the
//! Fuss–Catalan generalizations — and provides several independent routes to
//! their moment-problem structure:
//!
//! - [`exact`]: arbitrary-precision rationals and fraction-free (Bareiss)
//!   determinants, the substrate for exact Hankel certification.
//! - [`sequences`]: exact generation of the sequence families, termwise
//!   products/scalings, real powers with certified error bounds, and the
//!   inter-family factorization identities.
//! - [`hankel`]: Stieltjes certification through the Hankel matrices
//!   `Δ_n = (m_{i+j})` and `Δ̄_n = (m_{i+j+1})`, exact where possible and
//!   interval-certified for powered sequences, plus the infinite-divisibility
//!   probe over a grid of exponents.
//! - [`mellin`]: a Stirling-series log-gamma kernel and the closed-form
//!   Mellin transforms of every supported family, with moment-consistency,
//!   duplication-formula, and scaling-law checks.
//! - [`densities`]: the closed-form densities carried by these sequences and
//!   singularity-aware quadrature oracles tying each density back to its
//!   moments, along with Bessel/mgf series identities in exact arithmetic.
//! - [`divisibility`]: Bernstein-function factorizations of the families,
//!   complete-monotonicity verification, Carleman determinacy diagnostics,
//!   and the determinacy classifier.
//! - [`verification`]: the end-to-end check suite run by the CLI's
//!   `verify-all` subcommand and the acceptance test target.
//!
//! All exact computation is `rug` (GMP) rationals; high-precision real
//! computation is `rug` (MPFR) floats with explicit per-value error bounds
//! where a certification depends on them.

#![forbid(unsafe_code)]
// `!(x > 0.0)` guards NaN as well as sign; index loops mirror the matrix
// and series notation they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod densities;
pub mod divisibility;
pub mod error;
pub mod exact;
pub mod hankel;
pub mod hiprec;
pub mod mellin;
pub mod report;
pub mod sequences;
pub mod verification;

pub use error::{Error, Result};
pub use exact::{ExactMatrix, Integer, Rational};
pub use sequences::{FamilyId, MomentSequence, PowerSequence};

/// Default number of sequence terms generated when a caller does not say.
pub const DEFAULT_N: usize = 32;
/// Default working precision in bits for power sequences and transforms.
pub const DEFAULT_PRECISION: u32 = 256;
/// Default escalation ceiling for precision-bounded Hankel certification.
pub const DEFAULT_PMAX: u32 = 4096;
/// Default absolute quadrature tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;
