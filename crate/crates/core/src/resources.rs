// SPDX-License-Identifier: Apache-2.0

//! Entanglement, coherence and discord of two-qubit X states, and the two
//! non-Markovianity witnesses on a single dephasing qubit.

use serde::Serialize;

use crate::channel::{evolve_single, KrausSet};
use crate::error::{Error, Result};
use crate::qmatrix::{c, r, trace, trace_distance, CMatrix, CVector, DensityMatrix, Mat2, TwoQubitState};
use crate::specfun::{alpha, EnvironmentParams};

pub const X_STATE_TOL: f64 = 1e-12;
/// Time step of the central differences behind the witness rate signs.
pub const RATE_STEP: f64 = 1e-4;
/// Rates smaller than this in magnitude are reported with sign 0.
pub const RATE_ZERO: f64 = 1e-10;

/// `α` below which the teleported pair is separable at `θ = ϑ = π/2`.
pub fn sudden_death_alpha() -> f64 {
    (std::f64::consts::SQRT_2 - 1.0).sqrt()
}

fn check_x_state(rho: &TwoQubitState) -> Result<()> {
    let m = rho.matrix();
    let worst = [(0, 1), (0, 2), (1, 3), (2, 3)]
        .iter()
        .map(|&(i, j)| m[(i, j)].norm().max(m[(j, i)].norm()))
        .fold(0.0, f64::max);
    if worst > X_STATE_TOL {
        return Err(Error::NotXState(worst));
    }
    Ok(())
}

/// `2 max(0, |ρ₁₄| − √(ρ₂₂ρ₃₃), |ρ₂₃| − √(ρ₁₁ρ₄₄))` (1-based indices).
pub fn concurrence_x(rho: &TwoQubitState) -> Result<f64> {
    check_x_state(rho)?;
    let d = |i: usize| rho.get(i, i).re.max(0.0);
    let c1 = rho.get(0, 3).norm() - (d(1) * d(2)).sqrt();
    let c2 = rho.get(1, 2).norm() - (d(0) * d(3)).sqrt();
    Ok((2.0 * c1.max(c2).max(0.0)).min(1.0))
}

/// Concurrence of the teleported state in closed form.
pub fn concurrence_out(alpha: f64, params: &crate::qmatrix::PureStateParams) -> f64 {
    let a2 = alpha * alpha;
    let sv = params.vartheta.sin();
    2.0 * (0.5 * a2 * params.theta.sin() * sv * sv - 0.25 * (1.0 - a2 * a2)).max(0.0)
}

/// Sum of off-diagonal magnitudes in the computational basis.
pub fn coherence_l1<const D: usize>(rho: &DensityMatrix<D>) -> f64 {
    let mut s = 0.0;
    for i in 0..D {
        for j in 0..D {
            if i != j {
                s += rho.get(i, j).norm();
            }
        }
    }
    s
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    -xlog2x(x) - xlog2x(1.0 - x)
}

fn x_state_spectrum(rho: &TwoQubitState) -> [f64; 4] {
    let d = |i: usize| rho.get(i, i).re;
    let pair = |a: f64, b: f64, off: f64| {
        let mean = 0.5 * (a + b);
        let rad = (0.5 * (a - b)).hypot(off);
        [mean + rad, mean - rad]
    };
    let [l1, l2] = pair(d(0), d(3), rho.get(0, 3).norm());
    let [l3, l4] = pair(d(1), d(2), rho.get(1, 2).norm());
    [l1, l2, l3, l4].map(|v| v.clamp(0.0, 1.0))
}

/// Quantum discord of an X state, `min(Q₁, Q₂)` with measurements on the
/// second qubit, in bits.
pub fn discord_x(rho: &TwoQubitState) -> Result<f64> {
    check_x_state(rho)?;
    let d: [f64; 4] = std::array::from_fn(|i| rho.get(i, i).re.clamp(0.0, 1.0));
    let h_b = binary_entropy(d[0] + d[2]);
    let neg_s: f64 = x_state_spectrum(rho).iter().map(|&l| xlog2x(l)).sum();
    let z = 1.0 - 2.0 * (d[2] + d[3]);
    let coh = rho.get(0, 3).norm() + rho.get(1, 2).norm();
    let d1 = binary_entropy(0.5 * (1.0 + (z * z + 4.0 * coh * coh).sqrt()));
    let d2 = -d.iter().map(|&p| xlog2x(p)).sum::<f64>() - h_b;
    let q1 = h_b + neg_s + d1;
    let q2 = h_b + neg_s + d2;
    Ok(q1.min(q2).max(0.0))
}

/// Value of a witness and the sign of its time derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub value: f64,
    pub rate: f64,
    pub rate_sign: i8,
}

pub fn rate_sign(rate: f64) -> i8 {
    if rate.abs() <= RATE_ZERO {
        0
    } else if rate > 0.0 {
        1
    } else {
        -1
    }
}

fn witness(t: f64, f: impl Fn(f64) -> Result<f64>) -> Result<Witness> {
    let value = f(t)?;
    // forward difference where the central stencil would leave t ≥ 0
    let rate = if t >= RATE_STEP {
        (f(t + RATE_STEP)? - f(t - RATE_STEP)?) / (2.0 * RATE_STEP)
    } else {
        (f(t + RATE_STEP)? - value) / RATE_STEP
    };
    Ok(Witness {
        value,
        rate,
        rate_sign: rate_sign(rate),
    })
}

/// Hilbert–Schmidt speed of `(e^{iφ}|0⟩ + |1⟩)/√2` after dephasing by `α`,
/// from `√(½ Tr[(∂_φ ρ)²])`.
pub fn hss_from_definition(alpha: f64, phi: f64) -> Result<f64> {
    let kraus = KrausSet::new(alpha)?;
    let e = c(phi.cos(), phi.sin());
    let i = c(0.0, 1.0);
    let d_rho0 = Mat2::new(r(0.0), i * e * r(0.5), -i * e.conj() * r(0.5), r(0.0));
    let d_rho = kraus.apply(&d_rho0);
    Ok((0.5 * trace(&(d_rho * d_rho)).re).max(0.0).sqrt())
}

pub fn hss_witness(t: f64, env: &EnvironmentParams) -> Result<Witness> {
    witness(t, |s| hss_from_definition(alpha(s, env)?.alpha, 0.0))
}

/// Trace distance between the evolved images of `|0⟩` and `|1⟩`.
pub fn blp_distance(alpha: f64) -> Result<f64> {
    let zero = DensityMatrix::pure(&CVector::<2>::new(r(1.0), r(0.0)))?;
    let one = DensityMatrix::pure(&CVector::<2>::new(r(0.0), r(1.0)))?;
    Ok(trace_distance(
        &evolve_single(&zero, alpha)?,
        &evolve_single(&one, alpha)?,
    ))
}

pub fn blp_witness(t: f64, env: &EnvironmentParams) -> Result<Witness> {
    witness(t, |s| blp_distance(alpha(s, env)?.alpha))
}

#[derive(Debug, Clone, Serialize)]
pub struct ResourceReport {
    pub t: f64,
    pub concurrence: f64,
    pub coherence_l1: f64,
    pub discord: f64,
    pub hss: f64,
    pub trace_dist: f64,
    pub blp_rate_sign: i8,
    pub hss_rate_sign: i8,
}

/// Resources of `rho` together with the witnesses of the qubit whose bath
/// is `env`.
pub fn resource_report(t: f64, rho: &TwoQubitState, env: &EnvironmentParams) -> Result<ResourceReport> {
    let hss = hss_witness(t, env)?;
    let blp = blp_witness(t, env)?;
    Ok(ResourceReport {
        t,
        concurrence: concurrence_x(rho)?,
        coherence_l1: coherence_l1(rho),
        discord: discord_x(rho)?,
        hss: hss.value,
        trace_dist: blp.value,
        blp_rate_sign: blp.rate_sign,
        hss_rate_sign: hss.rate_sign,
    })
}

/// Diagonal part of a matrix; handy for building classical states.
pub fn dephased<const D: usize>(m: &CMatrix<D>) -> CMatrix<D> {
    CMatrix::<D>::from_fn(|i, j| if i == j { m[(i, j)] } else { r(0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatrix::{projector, Mat4, PureStateParams};
    use crate::teleport::output_matrix;

    fn bell() -> TwoQubitState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&CVector::<4>::new(r(s), r(0.0), r(0.0), r(s))).unwrap()
    }

    fn ket01() -> TwoQubitState {
        DensityMatrix::pure(&CVector::<4>::new(r(0.0), r(1.0), r(0.0), r(0.0))).unwrap()
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence_x(&bell()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(concurrence_x(&ket01()).unwrap(), 0.0);
        let plus = CVector::<4>::new(r(0.5), r(0.5), r(0.5), r(0.5));
        let not_x = DensityMatrix::new(projector(&plus)).unwrap();
        assert!(matches!(concurrence_x(&not_x), Err(Error::NotXState(_))));
    }

    #[test]
    fn teleported_concurrence_matches_closed_form() {
        let params = PureStateParams::maximally_entangled();
        for a in [0.3, 0.6, sudden_death_alpha(), 0.7, 0.95] {
            let rho = DensityMatrix::new(output_matrix(a, &params)).unwrap();
            let direct = concurrence_x(&rho).unwrap();
            assert!((direct - concurrence_out(a, &params)).abs() < 1e-14);
        }
        assert!(concurrence_out(sudden_death_alpha(), &params).abs() < 1e-15);
    }

    #[test]
    fn coherence_examples() {
        assert!((coherence_l1(&bell()) - 1.0).abs() < 1e-15);
        assert_eq!(coherence_l1(&ket01()), 0.0);
        let params = PureStateParams::maximally_entangled();
        let rho = DensityMatrix::new(output_matrix(0.5, &params)).unwrap();
        assert!((coherence_l1(&rho) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn discord_examples() {
        assert!((discord_x(&bell()).unwrap() - 1.0).abs() < 1e-12);
        assert!(discord_x(&ket01()).unwrap().abs() < 1e-15);
        let classical = DensityMatrix::new(dephased(bell().matrix())).unwrap();
        assert!(discord_x(&classical).unwrap().abs() < 1e-12);
        let mixed = DensityMatrix::<4>::maximally_mixed();
        assert!(discord_x(&mixed).unwrap().abs() < 1e-12);
    }

    #[test]
    fn witness_identities() {
        for a in [1.0, 0.8, 0.3, 0.0] {
            let hss = hss_from_definition(a, 0.7).unwrap();
            assert!((hss - a / 2.0).abs() < 1e-12);
            let d = blp_distance(a).unwrap();
            assert!((d - a * a).abs() < 1e-12);
            assert!((hss - d.sqrt() / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn frozen_dynamics_has_zero_rates() {
        let env = EnvironmentParams::new(2.0, 1.0, 0.0).unwrap();
        for t in [0.0, 0.5, 3.0] {
            let h = hss_witness(t, &env).unwrap();
            let b = blp_witness(t, &env).unwrap();
            assert_eq!((h.value, h.rate_sign), (0.5, 0));
            assert_eq!((b.value, b.rate_sign), (1.0, 0));
        }
    }

    #[test]
    fn witness_at_start() {
        let env = EnvironmentParams::new(1.0, 1.0, 0.3).unwrap();
        assert_eq!(hss_witness(0.0, &env).unwrap().value, 0.5);
        assert_eq!(blp_witness(0.0, &env).unwrap().value, 1.0);
        let report = resource_report(1.0, &bell(), &env).unwrap();
        let a = alpha(1.0, &env).unwrap().alpha;
        assert!((report.hss - a / 2.0).abs() < 1e-12);
        assert!((report.trace_dist - a * a).abs() < 1e-12);
        assert_eq!(report.hss_rate_sign, report.blp_rate_sign);
    }

    #[test]
    fn dephased_keeps_diagonal() {
        let m = Mat4::from_fn(|i, j| r((i * 4 + j) as f64));
        let d = dephased(&m);
        assert_eq!(d[(2, 2)], r(10.0));
        assert_eq!(d[(2, 3)], r(0.0));
    }
}
