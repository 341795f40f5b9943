// SPDX-License-Identifier: Apache-2.0

//! Single-qubit dephasing map and the two-qubit resource state.

use crate::error::{Error, Result};
use crate::qmatrix::{r, CMatrix, DensityMatrix, Mat2, Mat4, QubitState, TwoQubitState};
use crate::specfun::{alpha, DecoherenceFactor, EnvironmentParams};

pub(crate) fn check_alpha(value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value,
            reason: "must lie in [0, 1]",
        });
    }
    Ok(())
}

/// Operator-sum form of the dephasing map at decoherence factor `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    pub alpha: f64,
    pub ops: [Mat2; 4],
}

impl KrausSet {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let z = r(0.0);
        let d = r((alpha - 1.0) / 2.0);
        let id = r((alpha + 1.0) / 2.0);
        let off = r(((1.0 - alpha * alpha) / 2.0).sqrt());
        Ok(Self {
            alpha,
            ops: [
                Mat2::new(d, z, z, -d),
                Mat2::new(id, z, z, id),
                Mat2::new(z, off, z, z),
                Mat2::new(z, z, off, z),
            ],
        })
    }

    /// `max |Σ K†K − I|` over entries.
    pub fn completeness_error(&self) -> f64 {
        let sum: Mat2 = self.ops.iter().map(|k| k.adjoint() * k).sum();
        (sum - Mat2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `Σ K m K†` for any 2×2 matrix, not necessarily a state.
    pub fn apply(&self, m: &Mat2) -> Mat2 {
        self.ops.iter().map(|k| k * m * k.adjoint()).sum()
    }
}

/// Closed-form evolution on an arbitrary 2×2 matrix. Linear, so it also maps
/// derivatives of states.
pub fn dephase_matrix(m: &Mat2, alpha: f64) -> Mat2 {
    let a2 = alpha * alpha;
    let tr = m[(0, 0)] + m[(1, 1)];
    let mut out = *m * r(alpha);
    out[(0, 0)] = (tr + (m[(0, 0)] * r(2.0) - tr) * r(a2)) * r(0.5);
    out[(1, 1)] = (tr + (m[(1, 1)] * r(2.0) - tr) * r(a2)) * r(0.5);
    out
}

/// Populations relax as `½(1 + (2ρ_ii − 1)α²)`, coherences scale by `α`.
pub fn evolve_single(rho0: &QubitState, alpha: f64) -> Result<QubitState> {
    check_alpha(alpha)?;
    Ok(DensityMatrix::from_cptp_output(dephase_matrix(
        rho0.matrix(),
        alpha,
    )))
}

pub fn evolve_single_kraus(rho0: &QubitState, alpha: f64) -> Result<QubitState> {
    let kraus = KrausSet::new(alpha)?;
    Ok(DensityMatrix::from_cptp_output(kraus.apply(rho0.matrix())))
}

/// `Σ_{ij} (K_i ⊗ L_j) m (K_i ⊗ L_j)†`, sixteen terms.
pub fn apply_product_kraus(m: &Mat4, first: &KrausSet, second: &KrausSet) -> Mat4 {
    let mut out = Mat4::zeros();
    for ka in &first.ops {
        for kb in &second.ops {
            let k = crate::qmatrix::kron(ka, kb);
            out += k * m * k.adjoint();
        }
    }
    out
}

/// `cos(ϑ/2)|00⟩ + sin(ϑ/2)|11⟩`.
pub fn initial_two_qubit(vartheta: f64) -> TwoQubitState {
    let (s, c) = (vartheta / 2.0).sin_cos();
    let mut m = Mat4::zeros();
    m[(0, 0)] = r(c * c);
    m[(0, 3)] = r(c * s);
    m[(3, 0)] = r(c * s);
    m[(3, 3)] = r(s * s);
    DensityMatrix::from_cptp_output(m)
}

/// Closed-form elements of the evolved resource state.
pub fn channel_matrix(alpha1: f64, alpha2: f64, vartheta: f64) -> Result<TwoQubitState> {
    check_alpha(alpha1)?;
    check_alpha(alpha2)?;
    let (a1, a2) = (alpha1 * alpha1, alpha2 * alpha2);
    let cv = vartheta.cos();
    let mut m = CMatrix::<4>::zeros();
    m[(0, 0)] = r(0.25 * ((a1 + a2) * cv + a1 * a2 + 1.0));
    m[(1, 1)] = r(0.25 * ((a1 - a2) * cv - a1 * a2 + 1.0));
    m[(2, 2)] = r(0.25 * ((a2 - a1) * cv - a1 * a2 + 1.0));
    m[(3, 3)] = r(0.25 * (1.0 + a1 * a2 - (a1 + a2) * cv));
    let coh = r(0.5 * alpha1 * alpha2 * vartheta.sin());
    m[(0, 3)] = coh;
    m[(3, 0)] = coh;
    Ok(DensityMatrix::from_cptp_output(m))
}

/// Resource state at time `t` together with the per-qubit decoherence
/// factors it was built from.
#[derive(Debug, Clone)]
pub struct ChannelSnapshot {
    pub t: f64,
    pub alpha1: DecoherenceFactor,
    pub alpha2: DecoherenceFactor,
    pub rho_ch: TwoQubitState,
}

impl ChannelSnapshot {
    /// `α = α₁α₂`, the only combination the teleported state depends on.
    pub fn alpha_eff(&self) -> f64 {
        self.alpha1.alpha * self.alpha2.alpha
    }
}

pub fn channel_state(
    t: f64,
    env1: &EnvironmentParams,
    env2: &EnvironmentParams,
    vartheta: f64,
) -> Result<ChannelSnapshot> {
    let alpha1 = alpha(t, env1)?;
    let alpha2 = alpha(t, env2)?;
    let rho_ch = channel_matrix(alpha1.alpha, alpha2.alpha, vartheta)?;
    Ok(ChannelSnapshot {
        t,
        alpha1,
        alpha2,
        rho_ch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatrix::{c, CVector};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn plus() -> QubitState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&CVector::<2>::new(r(s), r(s))).unwrap()
    }

    fn max_diff<const D: usize>(a: &CMatrix<D>, b: &CMatrix<D>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn kraus_set_is_complete_on_grid() {
        for k in 0..100 {
            let a = (k as f64 + 1.0) / 100.0;
            assert!(KrausSet::new(a).unwrap().completeness_error() < 1e-12);
        }
    }

    #[test]
    fn identity_at_alpha_one() {
        let rho = plus();
        assert_eq!(evolve_single(&rho, 1.0).unwrap(), rho);
        let k = evolve_single_kraus(&rho, 1.0).unwrap();
        assert!(max_diff(k.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn plus_state_at_half() {
        let out = evolve_single(&plus(), 0.5).unwrap();
        assert!((out.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((out.get(0, 1).re - 0.25).abs() < 1e-15);
        let k = evolve_single_kraus(&plus(), 0.5).unwrap();
        assert!(max_diff(k.matrix(), out.matrix()) < 1e-12);
    }

    #[test]
    fn full_dephasing_limit() {
        let zero = DensityMatrix::pure(&CVector::<2>::new(r(1.0), r(0.0))).unwrap();
        let out = evolve_single(&zero, 0.0).unwrap();
        assert!(max_diff(out.matrix(), &(Mat2::identity() * r(0.5))) < 1e-15);
    }

    #[test]
    fn rejects_alpha_out_of_range() {
        assert!(KrausSet::new(1.5).is_err());
        assert!(evolve_single(&plus(), -0.1).is_err());
    }

    #[test]
    fn channel_at_t0_is_bell() {
        let env = EnvironmentParams::new(1.0, 1.0, 1.0).unwrap();
        let snap = channel_state(0.0, &env, &env, PI / 2.0).unwrap();
        let m = snap.rho_ch.matrix();
        for (i, j, v) in [(0, 0, 0.5), (3, 3, 0.5), (0, 3, 0.5), (3, 0, 0.5), (1, 1, 0.0)] {
            assert!((m[(i, j)].re - v).abs() < 1e-15);
        }
    }

    #[test]
    fn channel_at_full_dephasing_is_maximally_mixed() {
        let rho = channel_matrix(0.0, 0.0, PI / 2.0).unwrap();
        assert!(max_diff(rho.matrix(), &(Mat4::identity() * r(0.25))) < 1e-15);
    }

    #[test]
    fn channel_matches_product_kraus_example() {
        let closed = channel_matrix(0.9, 0.8, PI / 2.0).unwrap();
        let brute = apply_product_kraus(
            initial_two_qubit(PI / 2.0).matrix(),
            &KrausSet::new(0.9).unwrap(),
            &KrausSet::new(0.8).unwrap(),
        );
        assert!(max_diff(closed.matrix(), &brute) < 1e-12);
    }

    #[test]
    fn zero_field_freezes_one_qubit() {
        let frozen = EnvironmentParams::new(2.0, 1.0, 0.0).unwrap();
        let noisy = EnvironmentParams::new(2.0, 1.0, 1.0).unwrap();
        for t in [0.3, 1.0, 4.0] {
            let snap = channel_state(t, &frozen, &noisy, PI / 2.0).unwrap();
            assert_eq!(snap.alpha1.alpha, 1.0);
            assert!(snap.alpha2.alpha < 1.0);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn kraus_equals_closed_form(
            p in 0.0f64..1.0, re in -1.0f64..1.0, im in -1.0f64..1.0, a in 0.0f64..=1.0
        ) {
            // scale the coherence into the PSD disc
            let bound = (p * (1.0 - p)).sqrt();
            let norm = (re * re + im * im).sqrt().max(1.0);
            let off = c(re, im) * r(bound / norm);
            let rho = DensityMatrix::new(Mat2::new(r(p), off, off.conj(), r(1.0 - p))).unwrap();
            let closed = evolve_single(&rho, a).unwrap();
            let kraus = evolve_single_kraus(&rho, a).unwrap();
            prop_assert!(max_diff(closed.matrix(), kraus.matrix()) < 1e-12);
        }

        #[test]
        fn resource_state_is_valid(a1 in 0.0f64..=1.0, a2 in 0.0f64..=1.0, v in 0.0f64..=PI) {
            let rho = channel_matrix(a1, a2, v).unwrap();
            prop_assert!(DensityMatrix::new(*rho.matrix()).is_ok());
        }
    }
}
