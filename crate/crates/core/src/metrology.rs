// SPDX-License-Identifier: Apache-2.0

//! Estimating Alice's field `B₁` from the teleported two-qubit state.
//!
//! The teleported state is block diagonal after reordering the basis as
//! `(|00⟩), (|11⟩), (|01⟩, |10⟩)`. Its eigenvectors do not depend on `α`, so
//! measuring in the eigenbasis saturates the quantum Fisher information.
//!
//! With `κ = √(sin²θ sin⁴ϑ + cos²θ)` the spectrum is
//! `p± = ¼(1 + α⁴ ± 2α²κ)` and `p₃ = p₄ = ¼(1 − α⁴)`. For `θ = ϑ = π/2`,
//! `κ = 1` and the QFI with respect to `α` reduces to `8α²/(1 − α⁴)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmatrix::{c, r, CMatrix, CVector, Mat2, Mat4, PureStateParams};
use crate::specfun::{alpha, EnvironmentParams};
use crate::teleport::output_matrix;

/// Blocks whose determinant falls below this are treated as rank deficient.
pub const SINGULAR_DET: f64 = 1e-14;
/// Largest `|ξ|` that may be dropped for a rank-deficient block.
pub const XI_TOL: f64 = 1e-12;
/// Probabilities below this are skipped if their derivative is negligible.
pub const SMALL_PROB: f64 = 1e-14;
pub const SMALL_DPROB: f64 = 1e-10;
const BLOCK_TOL: f64 = 1e-12;

/// Basis blocks of the teleported state: `|00⟩`, `|11⟩`, then `{|01⟩, |10⟩}`.
pub const OUTPUT_BLOCKS: [&[usize]; 3] = [&[0], &[3], &[1, 2]];

/// Symmetric logarithmic derivative `L` with `∂ρ = ½(Lρ + ρL)`, block by
/// block. Blocks may have one or two basis indices.
pub fn sld_block_diagonal<const D: usize>(
    rho: &CMatrix<D>,
    drho: &CMatrix<D>,
    blocks: &[&[usize]],
) -> Result<CMatrix<D>> {
    let mut owner = [usize::MAX; D];
    for (b, idx) in blocks.iter().enumerate() {
        if idx.is_empty() || idx.len() > 2 {
            return Err(Error::InvalidParameter {
                name: "blocks",
                value: idx.len() as f64,
                reason: "each block must have one or two indices",
            });
        }
        for &i in idx.iter() {
            if i >= D || owner[i] != usize::MAX {
                return Err(Error::InvalidParameter {
                    name: "blocks",
                    value: i as f64,
                    reason: "blocks must partition the basis",
                });
            }
            owner[i] = b;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(Error::InvalidParameter {
            name: "blocks",
            value: D as f64,
            reason: "blocks must cover the basis",
        });
    }
    let mut leak = 0.0f64;
    for i in 0..D {
        for j in 0..D {
            if owner[i] != owner[j] {
                leak = leak.max(rho[(i, j)].norm()).max(drho[(i, j)].norm());
            }
        }
    }
    if leak > BLOCK_TOL {
        return Err(Error::NotBlockDiagonal(leak));
    }

    let mut sld = CMatrix::<D>::zeros();
    for idx in blocks {
        match **idx {
            [i] => {
                let (p, dp) = (rho[(i, i)].re, drho[(i, i)].re);
                sld[(i, i)] = r(if p > SINGULAR_DET {
                    dp / p
                } else if dp.abs() <= SMALL_DPROB {
                    0.0
                } else {
                    return Err(Error::SingularBlock { det: p, xi: dp });
                });
            }
            [i, j] => {
                let sub = |m: &CMatrix<D>| {
                    Mat2::new(m[(i, i)], m[(i, j)], m[(j, i)], m[(j, j)])
                };
                let l = sld_2x2(&sub(rho), &sub(drho))?;
                sld[(i, i)] = l[(0, 0)];
                sld[(i, j)] = l[(0, 1)];
                sld[(j, i)] = l[(1, 0)];
                sld[(j, j)] = l[(1, 1)];
            }
            _ => unreachable!("block sizes checked above"),
        }
    }
    Ok(sld)
}

/// `L = (1/μ)[∂ρ + ξ ρ⁻¹ − ∂μ]` with `μ = Tr ρ/2`, `ξ = 2μ∂μ − ∂(Tr ρ²)/4`.
fn sld_2x2(rho: &Mat2, drho: &Mat2) -> Result<Mat2> {
    let mu = 0.5 * (rho[(0, 0)] + rho[(1, 1)]).re;
    let dmu = 0.5 * (drho[(0, 0)] + drho[(1, 1)]).re;
    if mu <= SINGULAR_DET {
        if drho.norm() <= SMALL_DPROB {
            return Ok(Mat2::zeros());
        }
        return Err(Error::SingularBlock { det: 0.0, xi: dmu });
    }
    let dpurity = 2.0 * crate::qmatrix::trace(&(rho * drho)).re;
    let xi = 2.0 * mu * dmu - 0.25 * dpurity;
    let det = (rho[(0, 0)] * rho[(1, 1)] - rho[(0, 1)] * rho[(1, 0)]).re;
    let shift = Mat2::identity() * r(dmu);
    if det < SINGULAR_DET {
        if xi.abs() > XI_TOL {
            return Err(Error::SingularBlock { det, xi });
        }
        return Ok((drho - shift) / r(mu));
    }
    let inv = Mat2::new(rho[(1, 1)], -rho[(0, 1)], -rho[(1, 0)], rho[(0, 0)]) / r(det);
    Ok((drho + inv * r(xi) - shift) / r(mu))
}

/// `√(sin²θ sin⁴ϑ + cos²θ)`.
pub fn kappa(params: &PureStateParams) -> f64 {
    let (st, ct) = params.theta.sin_cos();
    let sv2 = params.vartheta.sin().powi(2);
    (st * st * sv2 * sv2 + ct * ct).sqrt()
}

/// `1 − κ`, formed without cancellation.
fn one_minus_kappa(params: &PureStateParams) -> f64 {
    let st = params.theta.sin();
    let (sv, cv) = params.vartheta.sin_cos();
    st * st * cv * cv * (1.0 + sv * sv) / (1.0 + kappa(params))
}

/// `∂ρ_out/∂α`.
pub fn output_derivative(alpha: f64, params: &PureStateParams) -> Mat4 {
    let a3 = alpha.powi(3);
    let ct = params.theta.cos();
    let sv = params.vartheta.sin();
    let coh = alpha * params.theta.sin() * sv * sv;
    let (sp, cp) = params.phi.sin_cos();
    let mut m = Mat4::zeros();
    m[(0, 0)] = r(-a3);
    m[(3, 3)] = r(-a3);
    m[(1, 1)] = r(a3 - alpha * ct);
    m[(2, 2)] = r(a3 + alpha * ct);
    m[(1, 2)] = c(coh * cp, coh * sp);
    m[(2, 1)] = c(coh * cp, -coh * sp);
    m
}

/// `√(4csc²θ + 2(cos 2ϑ − 3)cos²ϑ)`; `None` at `sin θ = 0`.
pub fn eta(params: &PureStateParams) -> Option<f64> {
    let st = params.theta.sin();
    if st.abs() < 1e-12 {
        return None;
    }
    Some(2.0 * kappa(params) / st)
}

/// Spectral data of the teleported state as functions of `α`, with
/// `1 − α²` supplied separately so it can be formed from `ln α`.
#[derive(Debug, Clone, Copy)]
struct Spectrum {
    p: [f64; 4],
    dp_dalpha: [f64; 4],
}

fn spectrum(alpha: f64, one_minus_a2: f64, params: &PureStateParams) -> Spectrum {
    let a2 = alpha * alpha;
    let k = kappa(params);
    let u = one_minus_a2;
    let v = one_minus_kappa(params);
    let corner = 0.25 * u * (1.0 + a2);
    Spectrum {
        p: [
            0.25 * (1.0 + a2 * a2 + 2.0 * a2 * k),
            0.25 * (u * u + 2.0 * a2 * v),
            corner,
            corner,
        ],
        dp_dalpha: [
            alpha * (a2 + k),
            -alpha * (u - v),
            -alpha * a2,
            -alpha * a2,
        ],
    }
}

/// Outcome probabilities of the optimal measurement, and `η` where defined.
pub fn optimal_povm_probs(alpha: f64, params: &PureStateParams) -> ([f64; 4], Option<f64>) {
    (spectrum(alpha, 1.0 - alpha * alpha, params).p, eta(params))
}

/// Eigenvectors of the teleported state, ordered like
/// [`optimal_povm_probs`]. The middle pair is rescaled per branch of
/// `cos θ` so it stays finite as `sin θ sin²ϑ → 0`; at `κ = 0` the middle
/// block is proportional to the identity and the computational basis is used.
pub fn optimal_povm(params: &PureStateParams) -> [CVector<4>; 4] {
    let s = params.theta.sin() * params.vartheta.sin().powi(2);
    let co = params.theta.cos();
    let k = kappa(params);
    let ph = c(params.phi.cos(), params.phi.sin());
    let (plus, minus) = if k < 1e-12 {
        ((r(1.0), r(0.0)), (r(0.0), r(1.0)))
    } else if co >= 0.0 {
        ((ph * s, r(k + co)), (-ph * (k + co), r(s)))
    } else {
        ((ph * (k - co), r(s)), (-ph * s, r(k - co)))
    };
    let z = r(0.0);
    let normed = |v: CVector<4>| v / r(v.norm());
    [
        normed(CVector::<4>::new(z, plus.0, plus.1, z)),
        normed(CVector::<4>::new(z, minus.0, minus.1, z)),
        CVector::<4>::new(z, z, z, r(1.0)),
        CVector::<4>::new(r(1.0), z, z, z),
    ]
}

/// Classical Fisher information `Σ (∂p)²/p` over `(p, ∂p)` pairs.
pub fn fi_from_probs(probs: &[(f64, f64)]) -> Result<f64> {
    let mut fi = 0.0;
    for (index, &(p, dp)) in probs.iter().enumerate() {
        if p < SMALL_PROB {
            if dp.abs() > SMALL_DPROB {
                return Err(Error::SingularProbability { index, p, dp });
            }
            continue;
        }
        fi += dp * dp / p;
    }
    Ok(fi)
}

/// QFI with respect to `α` for general angles.
pub fn qfi_alpha(alpha: f64, params: &PureStateParams) -> f64 {
    qfi_alpha_stable(alpha, 1.0 - alpha * alpha, params)
}

fn qfi_alpha_stable(alpha: f64, one_minus_a2: f64, params: &PureStateParams) -> f64 {
    let sp = spectrum(alpha, one_minus_a2, params);
    (0..4)
        .filter(|&i| sp.p[i] > 0.0)
        .map(|i| sp.dp_dalpha[i].powi(2) / sp.p[i])
        .sum()
}

/// `8α²/(1 − α⁴)`, the `θ = ϑ = π/2` case of [`qfi_alpha`].
pub fn qfi_alpha_maximal(alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    8.0 * a2 / (1.0 - a2 * a2)
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimationReport {
    pub alpha: f64,
    pub dalpha_db1: f64,
    /// Closed-form QFI for `B₁`.
    pub qfi: f64,
    /// `Tr[∂ρ L]` with `L` from the block solver, when the blocks allow it.
    pub qfi_sld: Option<f64>,
    pub fi_optimal_povm: f64,
    #[serde(skip)]
    pub sld: Option<Mat4>,
    pub probs: [f64; 4],
    pub eta: Option<f64>,
    /// True when `α = 1` and the values are continuity limits.
    pub at_continuity_point: bool,
}

impl EstimationReport {
    pub fn sld_agrees(&self, rel_tol: f64) -> bool {
        match self.qfi_sld {
            Some(q) => (q - self.qfi).abs() <= rel_tol * self.qfi.abs().max(1e-12),
            None => false,
        }
    }
}

/// Estimation figures of merit at effective decoherence factor `α = α₁α₂`.
/// `ln_alpha` is `ln α₁ + ln α₂`; `dalpha_db1` is `α₂ ∂α₁/∂B₁`.
pub fn estimation_report(
    alpha: f64,
    ln_alpha: f64,
    dalpha_db1: f64,
    params: &PureStateParams,
) -> Result<EstimationReport> {
    crate::channel::check_alpha(alpha)?;
    let eta = eta(params);
    if ln_alpha == 0.0 {
        // no interrogation yet: every derivative carries a vanishing factor
        return Ok(EstimationReport {
            alpha,
            dalpha_db1,
            qfi: 0.0,
            qfi_sld: Some(0.0),
            fi_optimal_povm: 0.0,
            sld: Some(Mat4::zeros()),
            probs: spectrum(1.0, 0.0, params).p,
            eta,
            at_continuity_point: true,
        });
    }
    let u = -(2.0 * ln_alpha).exp_m1();
    let sp = spectrum(alpha, u, params);
    let qfi = qfi_alpha_stable(alpha, u, params) * dalpha_db1 * dalpha_db1;
    let pairs: Vec<(f64, f64)> = (0..4)
        .map(|i| (sp.p[i], sp.dp_dalpha[i] * dalpha_db1))
        .collect();
    let fi = fi_from_probs(&pairs)?;

    let rho = output_matrix(alpha, params);
    let drho = output_derivative(alpha, params) * r(dalpha_db1);
    let sld = sld_block_diagonal(&rho, &drho, &OUTPUT_BLOCKS).ok();
    let qfi_sld = sld.map(|l| crate::qmatrix::trace(&(drho * l)).re);

    Ok(EstimationReport {
        alpha,
        dalpha_db1,
        qfi,
        qfi_sld,
        fi_optimal_povm: fi,
        sld,
        probs: sp.p,
        eta,
        at_continuity_point: false,
    })
}

/// QFI and optimal-measurement Fisher information for `B₁` at time `t`.
pub fn qfi_b1(
    t: f64,
    env1: &EnvironmentParams,
    env2: &EnvironmentParams,
    params: &PureStateParams,
) -> Result<EstimationReport> {
    let a1 = alpha(t, env1)?;
    let a2 = alpha(t, env2)?;
    estimation_report(
        a1.alpha * a2.alpha,
        a1.ln_alpha + a2.ln_alpha,
        a2.alpha * a1.dalpha_db,
        params,
    )
}
