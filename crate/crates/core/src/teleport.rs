// SPDX-License-Identifier: Apache-2.0

//! Two-qubit teleportation through a pair of noisy resource states.
//!
//! The generic path treats the protocol as a channel on the input,
//! `ρ_out = Σ_{ij} p_i p_j (σ_i⊗σ_j) ρ_in (σ_i⊗σ_j)` with `p_i = Tr(B_i ρ_res)`.
//! The closed path writes the same output in terms of `α = α₁α₂`.

use serde::Serialize;

use crate::channel::check_alpha;
use crate::error::Result;
use crate::qmatrix::{
    c, fidelity, kron, pauli, projector, r, CVector, DensityMatrix, Mat4, PureStateParams,
    TwoQubitState,
};

/// Best average fidelity reachable with classical communication alone.
pub const CLASSICAL_BOUND: f64 = 2.0 / 3.0;

/// `α²` at which the average fidelity at `ϑ = π/2` crosses [`CLASSICAL_BOUND`].
pub fn classical_crossing_alpha_sq() -> f64 {
    (8.0f64 / 3.0).sqrt() - 1.0
}

/// Projectors `B_i = (σ₀⊗σ_i) B₀ (σ₀⊗σ_i)` with `B₀ = |Φ⁺⟩⟨Φ⁺|`.
pub fn bell_projectors() -> [Mat4; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let b0 = projector(&CVector::<4>::new(r(s), r(0.0), r(0.0), r(s)));
    std::array::from_fn(|i| {
        let u = kron(&pauli(0), &pauli(i));
        u * b0 * u
    })
}

/// Overlaps `Tr(B_i ρ)` of a two-qubit state with the four Bell projectors.
pub fn bell_weights(rho: &TwoQubitState) -> [f64; 4] {
    let bell = bell_projectors();
    std::array::from_fn(|i| crate::qmatrix::trace(&(bell[i] * rho.matrix())).re)
}

pub fn teleport_generic(rho_in: &TwoQubitState, rho_res: &TwoQubitState) -> TwoQubitState {
    let p = bell_weights(rho_res);
    let mut out = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let w = p[i] * p[j];
            if w == 0.0 {
                continue;
            }
            let u = kron(&pauli(i), &pauli(j));
            out += u * rho_in.matrix() * u * r(w);
        }
    }
    DensityMatrix::from_cptp_output(out)
}

/// `cos(θ/2)|10⟩ + e^{iφ} sin(θ/2)|01⟩`.
pub fn input_vector(params: &PureStateParams) -> CVector<4> {
    let (s, co) = (params.theta / 2.0).sin_cos();
    let (sp, cp) = params.phi.sin_cos();
    CVector::<4>::new(r(0.0), c(cp * s, sp * s), r(co), r(0.0))
}

pub fn input_state(params: &PureStateParams) -> TwoQubitState {
    DensityMatrix::from_cptp_output(projector(&input_vector(params)))
}

/// Closed-form teleported state as a function of `α = α₁α₂`.
pub fn output_matrix(alpha: f64, params: &PureStateParams) -> Mat4 {
    let a2 = alpha * alpha;
    let a4 = a2 * a2;
    let ct = params.theta.cos();
    let sv = params.vartheta.sin();
    let coh = 0.5 * a2 * params.theta.sin() * sv * sv;
    let (sp, cp) = params.phi.sin_cos();
    let mut m = Mat4::zeros();
    m[(0, 0)] = r(0.25 * (1.0 - a4));
    m[(3, 3)] = r(0.25 * (1.0 - a4));
    m[(1, 1)] = r(0.25 * (1.0 + a4 - 2.0 * a2 * ct));
    m[(2, 2)] = r(0.25 * (1.0 + a4 + 2.0 * a2 * ct));
    m[(1, 2)] = c(coh * cp, coh * sp);
    m[(2, 1)] = c(coh * cp, -coh * sp);
    m
}

/// `⟨ψ_in|ρ_out|ψ_in⟩` in closed form.
pub fn pointwise_fidelity(alpha: f64, params: &PureStateParams) -> f64 {
    let a2 = alpha * alpha;
    let (st, ct) = params.theta.sin_cos();
    let sv = params.vartheta.sin();
    0.25 * (1.0 + a2 * a2) + 0.5 * a2 * ct * ct + 0.5 * a2 * st * st * sv * sv
}

/// Fidelity averaged uniformly over input states on the Bloch sphere.
pub fn average_fidelity(alpha: f64, vartheta: f64) -> f64 {
    let a2 = alpha * alpha;
    (-2.0 * a2 * (2.0 * vartheta).cos() + 3.0 * a2 * a2 + 4.0 * a2 + 3.0) / 12.0
}

#[derive(Debug, Clone, Serialize)]
pub struct TeleportResult {
    #[serde(skip)]
    pub rho_out: TwoQubitState,
    pub fidelity_pointwise: f64,
    pub f_avg: f64,
    pub alpha_eff: f64,
}

pub fn teleport_closed(alpha: f64, params: &PureStateParams) -> Result<TeleportResult> {
    check_alpha(alpha)?;
    let rho_out = DensityMatrix::from_cptp_output(output_matrix(alpha, params));
    let psi = input_state(params);
    let fidelity_pointwise = fidelity(&rho_out, &psi)?;
    Ok(TeleportResult {
        rho_out,
        fidelity_pointwise,
        f_avg: average_fidelity(alpha, params.vartheta),
        alpha_eff: alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::channel_matrix;
    use crate::qmatrix::CMatrix;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn max_diff<const D: usize>(a: &CMatrix<D>, b: &CMatrix<D>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn bell_projectors_resolve_identity() {
        let sum: Mat4 = bell_projectors().iter().sum();
        assert!(max_diff(&sum, &Mat4::identity()) < 1e-15);
    }

    #[test]
    fn single_qubit_teleportation_uses_same_conventions() {
        // input on qubit 0, Φ⁺ on (1, 2); outcome i is undone by σ_i on qubit 2
        let (a, b) = (c(0.6, 0.0), c(0.0, 0.8));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = [r(0.0); 8];
        for (bit, amp) in [(0usize, a), (1, b)] {
            psi[bit << 2] += amp * r(s);
            psi[(bit << 2) | 0b11] += amp * r(s);
        }
        let phi_plus = CVector::<4>::new(r(s), r(0.0), r(0.0), r(s));
        for i in 0..4 {
            let bell = kron(&pauli(0), &pauli(i)) * phi_plus;
            assert!(max_diff(&projector(&bell), &bell_projectors()[i]) < 1e-15);
            let mut bob = CVector::<2>::zeros();
            for q in 0..2 {
                for k in 0..4 {
                    bob[q] += bell[k].conj() * psi[(k << 1) | q];
                }
            }
            let corrected = pauli(i) * bob;
            let overlap = (a.conj() * corrected[0] + b.conj() * corrected[1]).norm();
            assert!((overlap / corrected.norm() - 1.0).abs() < 1e-12, "outcome {i}");
        }
    }

    #[test]
    fn perfect_channel_is_identity() {
        let params = PureStateParams::new(1.1, 0.4, PI / 2.0).unwrap();
        let rho_in = input_state(&params);
        let bell = channel_matrix(1.0, 1.0, PI / 2.0).unwrap();
        let out = teleport_generic(&rho_in, &bell);
        assert!(max_diff(out.matrix(), rho_in.matrix()) < 1e-12);
    }

    #[test]
    fn depolarized_resource_gives_maximally_mixed() {
        let params = PureStateParams::new(0.7, 2.0, 1.0).unwrap();
        let out = teleport_generic(&input_state(&params), &DensityMatrix::maximally_mixed());
        assert!(max_diff(out.matrix(), &(Mat4::identity() * r(0.25))) < 1e-15);
    }

    #[test]
    fn generic_matches_closed_at_example() {
        let params = PureStateParams::maximally_entangled();
        let res = channel_matrix(0.9, 0.8, PI / 2.0).unwrap();
        let generic = teleport_generic(&input_state(&params), &res);
        assert!(max_diff(generic.matrix(), &output_matrix(0.72, &params)) < 1e-10);
    }

    #[test]
    fn closed_form_examples() {
        let params = PureStateParams::maximally_entangled();
        let m = output_matrix(0.5, &params);
        assert!((m[(1, 2)].re - 0.125).abs() < 1e-15);
        assert!((m[(0, 0)].re - 0.234375).abs() < 1e-15);
        let perfect = teleport_closed(1.0, &params).unwrap();
        assert!((perfect.fidelity_pointwise - 1.0).abs() < 1e-15);
        assert_eq!(perfect.f_avg, 1.0);
        let dead = output_matrix(0.0, &params);
        assert!(max_diff(&dead, &(Mat4::identity() * r(0.25))) < 1e-15);
    }

    #[test]
    fn average_fidelity_examples() {
        assert_eq!(average_fidelity(1.0, PI / 2.0), 1.0);
        assert!((average_fidelity(0.0, PI / 2.0) - 0.25).abs() < 1e-15);
        let a = classical_crossing_alpha_sq().sqrt();
        assert!((average_fidelity(a, PI / 2.0) - CLASSICAL_BOUND).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn weights_form_a_distribution(a1 in 0.0f64..=1.0, a2 in 0.0f64..=1.0, v in 0.0f64..=PI) {
            let p = bell_weights(&channel_matrix(a1, a2, v).unwrap());
            prop_assert!(p.iter().all(|&x| x >= -1e-15));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn pointwise_fidelity_matches_matrix(
            a in 0.0f64..=1.0, th in 0.0f64..=PI, ph in 0.0f64..TAU, v in 0.0f64..=PI
        ) {
            let params = PureStateParams::new(th, ph, v).unwrap();
            let res = teleport_closed(a, &params).unwrap();
            prop_assert!((res.fidelity_pointwise - pointwise_fidelity(a, &params)).abs() < 1e-13);
        }

        #[test]
        fn average_fidelity_monotone_at_maximal_entanglement(a in 0.0f64..0.999) {
            prop_assert!(average_fidelity(a + 1e-3, PI / 2.0) >= average_fidelity(a, PI / 2.0));
        }
    }
}
