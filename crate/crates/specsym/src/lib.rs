//! Exact symbolic engine for trace identities of weighted diagonal matrix
//! algebras.
//!
//! Fix a weight vector `d = (d_1, ..., d_k)` of nonzero rationals (or leave the
//! entries symbolic). On the algebra of diagonal matrices
//! `X = diag(x_1, ..., x_k)` define the weighted trace
//! `tr(X) = d_1 x_1 + ... + d_k x_k`, so the trace of the n-th power is the
//! specialized power sum `p_n = d_1 x_1^n + ... + d_k x_k^n`. This crate
//! builds, verifies, searches for, and transforms the polynomial relations
//! ("trace identities") that hold among a matrix and the power sums:
//!
//! * [`poly`] — sparse multivariate polynomials over exact big rationals, with
//!   a canonical text grammar.
//! * [`partition`] — integer partitions and their canonical enumeration order.
//! * [`symfun`] — weight vectors, power sums, pure/mixed identities, and
//!   exact verification by full expansion.
//! * [`forge`] — the inductive construction: one-variable lifts, product
//!   identities, the trace step, the full chain, and power reduction.
//! * [`hankel`] — determinant identities from rank-bounded moment matrices.
//! * [`integrality`] — zero-sum subset obstructions to integrality.
//! * [`search`] — exact linear-algebra search for identities of a given
//!   degree at numeric weights, with minimal-degree reports and predictions.
//! * [`multilinear`] — multilinearization of pure identities into
//!   multilinear trace-product form.
//! * [`serial`] — the on-disk JSON schema for identities and chain caches.
//! * [`cli`] — the `specsym` command-line front end.
//!
//! All arithmetic is exact; no floating point is used anywhere. Every public
//! type is immutable after construction and `Send + Sync`, so callers may
//! freely evaluate identities from several threads.

pub mod cli;
pub mod error;
pub mod forge;
pub mod hankel;
pub mod integrality;
pub mod multilinear;
pub mod partition;
pub mod poly;
pub mod search;
pub mod serial;
pub mod symfun;

pub use error::Error;
pub use partition::Partition;
pub use poly::{MultiPoly, Rational, VarId};
pub use symfun::{MixedIdentity, PureIdentity, WeightVector};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
