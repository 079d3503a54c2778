//! Exact-arithmetic toolkit for Boolean functions and parity decision trees.
//!
//! Everything that can be exact is exact: truth tables are packed sign
//! tables, Fourier coefficients are integers scaled by 2^n, leaf masses and
//! moments are big rationals, and linear algebra runs over GF(2) on packed
//! bit rows. Floating point only appears where √, ln and the binary entropy
//! function force it, behind a one-sided tolerance that can flag a false
//! violation but never certify a false pass.
//!
//! Module map:
//! - [`gf2`]: bit-matrix elimination, affine systems, forced/correlated
//!   coordinate reports.
//! - [`boolfn`]: packed truth tables, the Walsh–Hadamard transform,
//!   streaming linear coefficients, composition and powers.
//! - [`pdt`]: parity decision trees: parsing, evaluation, leaf analysis,
//!   moment statistics, correlation-freeness and refinement.
//! - [`bounds`]: the inequality checkers (`theorem1`, `theorem4`, `lemma1`,
//!   `lemma3`, the conditional-entropy chain) and the spectral depth
//!   lower bound.
//! - [`oracle`]: independent brute force: direct-sum Fourier, exhaustive
//!   enumerators, seeded generators, the exact minimum-depth solver, and
//!   the verification suites.

pub mod boolfn;
pub mod bounds;
pub mod gf2;
pub mod oracle;
pub mod pdt;
pub mod rational;
pub mod sign;

pub use boolfn::{
    BoolFnError, BooleanFunction, FourierSpectrum, DEFAULT_TRANSFORM_GUARD, MAX_ARITY,
};
pub use bounds::{BoundsError, EntropyReport, GsSurvey, InequalityReport, Value};
pub use gf2::{AffineSystem, BitMatrix, Gf2Error, SystemSummary};
pub use oracle::{OracleError, SuiteConfig, SuiteReport};
pub use pdt::{LeafSummary, Node, ParityDecisionTree, PdtError};
pub use rational::Rational;
pub use sign::Sign;
