// SPDX-License-Identifier: Apache-2.0

//! Teleportation through pairs of topological qubits, each dephasing in its
//! own Ohmic-like fermionic bath.
//!
//! The crate is layered bottom-up:
//!
//! - [`specfun`]: Gamma, the confluent and `2F2` hypergeometric series, the
//!   bath integral `I_Q(t)` and the decoherence factor `α(t)`.
//! - [`qmatrix`]: small fixed-size complex matrices, density matrices,
//!   Hermitian eigen-decomposition, fidelity and trace distance.
//! - [`channel`]: the single-qubit dephasing map (closed form and Kraus form)
//!   and the two-qubit resource state `ρ_ch(t)`.
//! - [`teleport`]: the two-qubit Bell-measurement protocol and fidelities.
//! - [`metrology`]: SLD, quantum Fisher information for the remote field and
//!   the optimal measurement that saturates it.
//! - [`resources`]: concurrence, l1 coherence, discord and the
//!   non-Markovianity witnesses.
//! - [`sweep`] and [`figure`]: deterministic parameter sweeps and figure data.
//! - [`oracle`] and [`validation`]: brute-force reference paths and the
//!   self-check suite built on them.

pub mod channel;
pub mod error;
pub mod figure;
pub mod metrology;
pub mod oracle;
pub mod qmatrix;
pub mod resources;
pub mod specfun;
pub mod sweep;
pub mod teleport;
pub mod validation;

pub use error::{Error, Result};
pub use qmatrix::{DensityMatrix, PureStateParams};
pub use specfun::{DecoherenceFactor, EnvironmentParams};

