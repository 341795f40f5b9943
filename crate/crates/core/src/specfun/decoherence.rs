// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::gamma::gamma_fn;
use super::hypergeometric::{hyp1f1, hyp1f1_minus_one_small, hyp2f2_11_3half2};
use crate::error::{Error, Result};

/// `|Q - 1|` below which the Ohmic (`Q = 1`) closed form is used. The generic
/// branch has a `Γ((Q-1)/2)` pole there.
pub const OHMIC_BRANCH_TOL: f64 = 1e-9;

/// Below this `|x|` the bracket `1 - 1F1(...)` is summed without the leading 1.
const SMALL_ARG: f64 = 1.0;

/// Bath and control settings seen by one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentParams {
    /// Ohmicity exponent `Q` of the spectral density `∝ ω^Q`.
    pub ohmicity: f64,
    /// Cutoff frequency `Γ₀`, inverse time units.
    pub cutoff: f64,
    /// Magnetic field strength `B` along the wire.
    pub field: f64,
}

impl EnvironmentParams {
    pub fn new(ohmicity: f64, cutoff: f64, field: f64) -> Result<Self> {
        if !(ohmicity.is_finite() && ohmicity >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "Q",
                value: ohmicity,
                reason: "Ohmicity must be finite and >= 0",
            });
        }
        if !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(Error::InvalidParameter {
                name: "Gamma0",
                value: cutoff,
                reason: "cutoff frequency must be finite and > 0",
            });
        }
        if !(field.is_finite() && field >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "B",
                value: field,
                reason: "field strength must be finite and >= 0",
            });
        }
        Ok(Self {
            ohmicity,
            cutoff,
            field,
        })
    }

    pub fn is_ohmic(&self) -> bool {
        (self.ohmicity - 1.0).abs() < OHMIC_BRANCH_TOL
    }

    pub fn with_field(self, field: f64) -> Result<Self> {
        Self::new(self.ohmicity, self.cutoff, field)
    }
}

/// Dephasing factor of one qubit together with its field derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecoherenceFactor {
    /// `α(t) = exp(-2 B² |β| I_Q(t))`, in `(0, 1]`.
    pub alpha: f64,
    /// `∂α/∂B = -4 B |β| I_Q α`.
    pub dalpha_db: f64,
    /// `ln α`, kept so `1 - α^k` can be formed without cancellation.
    pub ln_alpha: f64,
}

/// The bath integral `I_Q(t)`.
pub fn i_q(t: f64, env: &EnvironmentParams) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "time must be finite and >= 0",
        });
    }
    let tg = t * env.cutoff;
    let x = 0.25 * tg * tg;
    let value = if env.is_ohmic() {
        0.5 * tg * tg * hyp2f2_11_3half2(-x)?
    } else {
        let a = 0.5 * (env.ohmicity - 1.0);
        let bracket = if x <= SMALL_ARG {
            -hyp1f1_minus_one_small(a, 0.5, -x)?
        } else {
            1.0 - hyp1f1(a, 0.5, -x)?
        };
        2.0 * env.cutoff.powf(env.ohmicity - 1.0) * gamma_fn(a)? * bracket
    };
    if value < 0.0 {
        return Err(Error::NegativeBathIntegral {
            value,
            ohmicity: env.ohmicity,
            t,
        });
    }
    Ok(value)
}

/// `β = -4π / Γ(Q+1) · Γ₀^{-(Q+1)}`. Only `|β|` enters the dynamics.
pub fn beta(env: &EnvironmentParams) -> Result<f64> {
    Ok(-4.0 * PI / gamma_fn(env.ohmicity + 1.0)? * env.cutoff.powf(-(env.ohmicity + 1.0)))
}

pub fn alpha(t: f64, env: &EnvironmentParams) -> Result<DecoherenceFactor> {
    if env.field == 0.0 {
        // validate t all the same
        i_q(t, env)?;
        return Ok(DecoherenceFactor {
            alpha: 1.0,
            dalpha_db: 0.0,
            ln_alpha: 0.0,
        });
    }
    let b_abs = beta(env)?.abs();
    let iq = i_q(t, env)?;
    let ln_alpha = -2.0 * env.field * env.field * b_abs * iq;
    let alpha = ln_alpha.exp();
    Ok(DecoherenceFactor {
        alpha,
        dalpha_db: -4.0 * env.field * b_abs * iq * alpha,
        ln_alpha,
    })
}
