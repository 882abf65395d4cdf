//! Exact moments of the discrete q-Hermite and q-Laguerre orthogonal
//! polynomial ensembles, computed along every independent route (residues,
//! basic hypergeometric closed forms, Schur expansions, Jackson-sum oracles,
//! recurrences, generating functions) together with their classical GUE/LUE
//! limits.
//!
//! All arithmetic is over exact rationals. Quantities that are genuinely
//! infinite sums or products come back as [`qcalc::ApproxValue`]s with a
//! certified rational error bound.

pub mod error;
pub mod hyper;
pub mod qarith;
pub mod qcalc;
pub mod rational;
pub mod series;
pub mod partitions;
pub mod ensembles;
pub mod qhermite;
pub mod qlaguerre;
pub mod classical;

pub use error::{QError, QResult};
pub use qcalc::{ApproxValue, TruncationPolicy};
pub use rational::{format_rational, parse_rational, rat, to_decimal, Rational};
