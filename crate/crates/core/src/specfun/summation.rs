// SPDX-License-Identifier: Apache-2.0

/// Neumaier-compensated accumulator with optional power-of-ten rescaling, so
/// that series whose partial sums exceed the `f64` range can still be summed.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Accumulator {
    sum: f64,
    comp: f64,
    /// The true value is `(sum + comp) * 10^(RESCALE_EXP * rescales)`.
    rescales: i32,
}

const RESCALE_EXP: i32 = 250;
const RESCALE_AT: f64 = 1e250;

impl Accumulator {
    pub(crate) fn new(start: f64) -> Self {
        Self {
            sum: start,
            comp: 0.0,
            rescales: 0,
        }
    }

    /// Adds `term` (already expressed in the current scale).
    pub(crate) fn add(&mut self, term: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Shrinks the accumulator (and the caller's running term) when the sum
    /// approaches overflow. Returns the factor the term must be divided by.
    pub(crate) fn maybe_rescale(&mut self, term: &mut f64) {
        if self.sum.abs() > RESCALE_AT || term.abs() > RESCALE_AT {
            self.sum /= RESCALE_AT;
            self.comp /= RESCALE_AT;
            *term /= RESCALE_AT;
            self.rescales += 1;
        }
    }

    /// Natural log of the accumulated scale factor.
    pub(crate) fn log_scale(&self) -> f64 {
        f64::from(self.rescales * RESCALE_EXP) * std::f64::consts::LN_10
    }

    pub(crate) fn is_rescaled(&self) -> bool {
        self.rescales != 0
    }
}

/// Convergence rule shared by all series: `|term| < 1e-16 |sum|` on three
/// consecutive terms, counted only once the terms have started to shrink.
#[derive(Debug, Default)]
pub(crate) struct Convergence {
    streak: u32,
}

impl Convergence {
    pub(crate) const REL_TOL: f64 = 1e-16;

    pub(crate) fn update(&mut self, term: f64, sum: f64, shrinking: bool) -> bool {
        if shrinking && term.abs() < Self::REL_TOL * sum.abs() {
            self.streak += 1;
        } else {
            self.streak = 0;
        }
        self.streak >= 3
    }
}
