// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn lanczos_series(z: f64) -> f64 {
    // z is the shifted argument (x - 1)
    let mut s = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    s
}

/// `sin(πx)` with exact zeros at the integers.
fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

fn is_pole(z: f64) -> bool {
    z <= 0.0 && z == z.floor()
}

/// The Gamma function on the real line.
///
/// Positive integers up to 23 are returned exactly as factorials. Elsewhere
/// the Lanczos sum is used on `z ≥ 1/2` and the reflection formula below.
pub fn gamma_fn(z: f64) -> Result<f64> {
    if z.is_nan() {
        return Err(Error::InvalidParameter {
            name: "z",
            value: z,
            reason: "NaN argument",
        });
    }
    if is_pole(z) {
        return Err(Error::GammaPole(z));
    }
    if z == z.floor() && z <= 23.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < z {
            f *= k;
            k += 1.0;
        }
        return Ok(f);
    }
    if z < 0.5 {
        return Ok(PI / (sin_pi(z) * gamma_positive(1.0 - z)));
    }
    Ok(gamma_positive(z))
}

fn gamma_positive(z: f64) -> f64 {
    let x = z - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let s = lanczos_series(x);
    // split the power to delay overflow for large z
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * s
}

/// `ln |Γ(z)|` for `z > 0`.
pub fn ln_gamma(z: f64) -> Result<f64> {
    if z.is_nan() || z <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "z",
            value: z,
            reason: "ln_gamma is only defined here for z > 0",
        });
    }
    if z < 0.5 {
        return Ok((PI / (sin_pi(z) * gamma_positive(1.0 - z))).abs().ln());
    }
    let x = z - 1.0;
    let t = x + LANCZOS_G + 0.5;
    Ok(LN_SQRT_2PI + (x + 0.5) * t.ln() - t + lanczos_series(x).ln())
}
