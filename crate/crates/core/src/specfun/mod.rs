// SPDX-License-Identifier: Apache-2.0

//! Scalar special functions and the dephasing factor of a topological qubit
//! coupled to an Ohmic-like bath with spectral density `∝ ω^Q`.
//!
//! All functions are pure and work in `f64`. Hypergeometric series are summed
//! with Neumaier compensation and transformed so that no evaluation on the
//! desk-scale domain (`|x| ≤ 500`) sums terms of alternating sign that are
//! much larger than the result.

mod decoherence;
mod gamma;
mod hypergeometric;
mod summation;

pub use decoherence::{alpha, beta, i_q, DecoherenceFactor, EnvironmentParams, OHMIC_BRANCH_TOL};
pub use gamma::{gamma_fn, ln_gamma};
pub use hypergeometric::{hyp1f1, hyp2f2_11_3half2, MAX_TERMS};
