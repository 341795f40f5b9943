// SPDX-License-Identifier: Apache-2.0

//! `1F1(a; b; x)` and the special `2F2(1, 1; 3/2, 2; x)` needed by the Ohmic
//! bath integral.
//!
//! Negative arguments are never summed directly. `1F1` goes through Kummer's
//! transformation `1F1(a; b; -X) = e^{-X} 1F1(b - a; b; X)`. `2F2` is rewritten
//! as a Poisson mixture with positive weights:
//!
//! ```text
//! 2F2(1, 1; 3/2, 2; -X) = (1/X) Σ_{n≥1} e^{-X} Xⁿ/n! · h_n,   h_n = Σ_{k<n} 1/(2k+1)
//! ```
//!
//! which follows from `d/dX [X 2F2(-X)] = 1F1(1; 3/2; -X)`, Kummer, and
//! termwise integration against `e^{-s} s^k`.

use super::gamma::ln_gamma;
use super::summation::{Accumulator, Convergence};
use crate::error::{Error, Result};

/// Iteration cap for every series in this module.
pub const MAX_TERMS: usize = 10_000;

/// Above this `|x|` the leading `e^{-X}` underflows and the sums are carried
/// in a rescaled representation.
const EXP_UNDERFLOW: f64 = 700.0;

fn is_non_positive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.floor()
}

/// Sum of `Σ_k (a)_k / (b)_k · x^k / k!`, optionally skipping the leading 1.
/// Returns `(mantissa, log_scale)` with value `mantissa · e^{log_scale}`.
fn kummer_series(a: f64, b: f64, x: f64, skip_leading: bool) -> Result<(f64, f64)> {
    let mut term = 1.0;
    let mut acc = Accumulator::new(if skip_leading { 0.0 } else { 1.0 });
    let mut conv = Convergence::default();
    let floor = (-a).max(-b).max(x.abs());
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) * x / ((b + kf) * (kf + 1.0));
        term *= ratio;
        if term == 0.0 {
            return Ok((acc.value(), acc.log_scale()));
        }
        acc.add(term);
        acc.maybe_rescale(&mut term);
        if conv.update(term, acc.value(), kf > floor && ratio.abs() < 1.0) {
            return Ok((acc.value(), acc.log_scale()));
        }
    }
    Err(Error::NonConvergence {
        function: "1F1",
        terms: MAX_TERMS,
    })
}

fn check_params(a: f64, b: f64, x: f64) -> Result<()> {
    for (name, v) in [("a", a), ("b", b), ("x", x)] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter {
                name,
                value: v,
                reason: "must be finite",
            });
        }
    }
    if is_non_positive_integer(b) {
        return Err(Error::HypergeometricPole(b));
    }
    Ok(())
}

/// Kummer's confluent hypergeometric function `1F1(a; b; x)`.
pub fn hyp1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    check_params(a, b, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x > 0.0 || is_non_positive_integer(a) {
        let (m, log_scale) = kummer_series(a, b, x, false)?;
        return Ok(if log_scale == 0.0 {
            m
        } else {
            m * log_scale.exp()
        });
    }
    let big_x = -x;
    let (m, log_scale) = kummer_series(b - a, b, big_x, false)?;
    if log_scale == 0.0 && big_x < EXP_UNDERFLOW {
        Ok(m * x.exp())
    } else if m == 0.0 {
        Ok(0.0)
    } else {
        Ok(m.signum() * (m.abs().ln() + log_scale + x).exp())
    }
}

/// `1F1(a; b; x) - 1` summed without forming the leading 1. Only meant for
/// small `|x|` where the series has no cancellation worth transforming away.
pub(crate) fn hyp1f1_minus_one_small(a: f64, b: f64, x: f64) -> Result<f64> {
    check_params(a, b, x)?;
    let (m, log_scale) = kummer_series(a, b, x, true)?;
    debug_assert_eq!(log_scale, 0.0);
    Ok(m)
}

/// `2F2(1, 1; 3/2, 2; x)`, entire in `x`.
pub fn hyp2f2_11_3half2(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "must be finite",
        });
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x > 0.0 {
        return positive_2f2(x);
    }
    let big_x = -x;
    if big_x < EXP_UNDERFLOW {
        poisson_mixture_forward(big_x)
    } else {
        poisson_mixture_from_mode(big_x)
    }
}

fn positive_2f2(x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut acc = Accumulator::new(1.0);
    let mut conv = Convergence::default();
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        // (1+k)^2 / ((3/2+k)(2+k)(k+1)) · x
        let ratio = (1.0 + kf) * x / ((1.5 + kf) * (2.0 + kf));
        term *= ratio;
        acc.add(term);
        acc.maybe_rescale(&mut term);
        if conv.update(term, acc.value(), kf > x && ratio < 1.0) {
            let m = acc.value();
            return Ok(if acc.is_rescaled() {
                (m.ln() + acc.log_scale()).exp()
            } else {
                m
            });
        }
    }
    Err(Error::NonConvergence {
        function: "2F2",
        terms: MAX_TERMS,
    })
}

fn poisson_mixture_forward(big_x: f64) -> Result<f64> {
    let mut weight = (-big_x).exp();
    let mut harmonic = 0.0;
    let mut acc = Accumulator::new(0.0);
    let mut conv = Convergence::default();
    for n in 1..=MAX_TERMS {
        let nf = n as f64;
        harmonic += 1.0 / (2.0 * nf - 1.0);
        weight *= big_x / nf;
        let term = weight * harmonic;
        acc.add(term);
        if conv.update(term, acc.value(), nf > big_x) {
            return Ok(acc.value() / big_x);
        }
    }
    Err(Error::NonConvergence {
        function: "2F2",
        terms: MAX_TERMS,
    })
}

fn poisson_mixture_from_mode(big_x: f64) -> Result<f64> {
    let mode = big_x.floor();
    let w_mode = (-big_x + mode * big_x.ln() - ln_gamma(mode + 1.0)?).exp();
    let mut h_acc = Accumulator::new(0.0);
    for k in 0..(mode as usize) {
        h_acc.add(1.0 / (2.0 * k as f64 + 1.0));
    }
    let h_mode = h_acc.value();

    let mut acc = Accumulator::new(w_mode * h_mode);
    let mut steps = 0usize;

    let (mut w, mut h, mut n) = (w_mode, h_mode, mode);
    let mut conv = Convergence::default();
    loop {
        n += 1.0;
        h += 1.0 / (2.0 * n - 1.0);
        w *= big_x / n;
        acc.add(w * h);
        steps += 1;
        if conv.update(w * h, acc.value(), true) {
            break;
        }
        if steps > MAX_TERMS {
            return Err(Error::NonConvergence {
                function: "2F2",
                terms: MAX_TERMS,
            });
        }
    }

    let (mut w, mut h, mut n) = (w_mode, h_mode, mode);
    let mut conv = Convergence::default();
    while n > 1.0 {
        w *= n / big_x;
        n -= 1.0;
        h -= 1.0 / (2.0 * n + 1.0);
        acc.add(w * h);
        steps += 1;
        if conv.update(w * h, acc.value(), true) {
            break;
        }
        if steps > 2 * MAX_TERMS {
            return Err(Error::NonConvergence {
                function: "2F2",
                terms: MAX_TERMS,
            });
        }
    }
    Ok(acc.value() / big_x)
}
