// SPDX-License-Identifier: Apache-2.0

//! Fixed-size complex matrix helpers for one and two qubits.
//!
//! Basis ordering is `|0⟩, |1⟩` for one qubit and `|00⟩, |01⟩, |10⟩, |11⟩` for
//! two, with the first tensor factor as the most significant bit.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4, SMatrix, SVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;
pub type CMatrix<const D: usize> = SMatrix<C64, D, D>;
pub type CVector<const D: usize> = SVector<C64, D>;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues down to this are accepted as numerically non-negative.
pub const PSD_SLACK: f64 = -1e-10;
pub const PURITY_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Pauli matrix `σ_i`, with `σ_0 = I`.
pub fn pauli(i: usize) -> Mat2 {
    let (o, z, im) = (r(1.0), r(0.0), c(0.0, 1.0));
    match i {
        0 => Mat2::new(o, z, z, o),
        1 => Mat2::new(z, o, o, z),
        2 => Mat2::new(z, -im, im, z),
        3 => Mat2::new(o, z, z, -o),
        _ => panic!("Pauli index {i} out of range"),
    }
}

pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

pub fn projector<const D: usize>(psi: &CVector<D>) -> CMatrix<D> {
    psi * psi.adjoint()
}

pub fn trace<const D: usize>(m: &CMatrix<D>) -> C64 {
    (0..D).map(|i| m[(i, i)]).sum()
}

pub fn hermitian_deviation<const D: usize>(m: &CMatrix<D>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..D {
        for j in 0..D {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Spectrum and eigenvectors of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen<const D: usize> {
    pub values: [f64; D],
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: CMatrix<D>,
}

/// Eigen-decomposition of a small Hermitian matrix: closed form for 2×2,
/// cyclic complex Jacobi rotations otherwise.
pub fn eig_hermitian<const D: usize>(m: &CMatrix<D>) -> Result<HermitianEigen<D>> {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let dev = hermitian_deviation(m);
    if dev > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(dev));
    }
    if D == 2 {
        return Ok(eig_2x2(m));
    }
    Ok(eig_jacobi(m))
}

fn eig_2x2<const D: usize>(m: &CMatrix<D>) -> HermitianEigen<D> {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let radius = half_gap.hypot(b.norm());
    let (hi, lo) = (mean + radius, mean - radius);

    // pick the row that avoids cancellation in λ - diagonal
    let (v0, v1) = if a >= d {
        (r(hi - d), b.conj())
    } else {
        (b, r(hi - a))
    };
    let norm = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
    let (u0, u1) = if norm > 0.0 {
        (v0 / norm, v1 / norm)
    } else {
        (r(1.0), r(0.0))
    };
    let mut vectors = CMatrix::<D>::zeros();
    vectors[(0, 0)] = u0;
    vectors[(1, 0)] = u1;
    vectors[(0, 1)] = -u1.conj();
    vectors[(1, 1)] = u0.conj();
    let mut values = [0.0; D];
    values[0] = hi;
    values[1] = lo;
    HermitianEigen { values, vectors }
}

fn off_diagonal_norm<const D: usize>(m: &CMatrix<D>) -> f64 {
    let mut s = 0.0;
    for i in 0..D {
        for j in 0..D {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn eig_jacobi<const D: usize>(m: &CMatrix<D>) -> HermitianEigen<D> {
    // symmetrise to exact Hermiticity first
    let mut a = (m + m.adjoint()) * r(0.5);
    let mut v = CMatrix::<D>::identity();
    let scale = a.norm().max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= 1e-17 * scale {
            break;
        }
        for p in 0..D {
            for q in (p + 1)..D {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // phase that makes the (p, q) entry real and positive
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;

                // J = diag(1, conj(phase)) · [[c, s], [-s, c]] on the (p, q) plane
                let mut j = CMatrix::<D>::identity();
                j[(p, p)] = r(cs);
                j[(p, q)] = r(sn);
                j[(q, p)] = -phase.conj() * sn;
                j[(q, q)] = phase.conj() * cs;
                a = j.adjoint() * a * j;
                a[(p, q)] = r(0.0);
                a[(q, p)] = r(0.0);
                v *= j;
            }
        }
    }

    let mut order: Vec<usize> = (0..D).collect();
    order.sort_by(|&i, &k| a[(k, k)].re.total_cmp(&a[(i, i)].re));
    let mut values = [0.0; D];
    let mut vectors = CMatrix::<D>::zeros();
    for (col, &src) in order.iter().enumerate() {
        values[col] = a[(src, src)].re;
        vectors.set_column(col, &v.column(src));
    }
    HermitianEigen { values, vectors }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// up to [`PSD_SLACK`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<const D: usize> {
    m: CMatrix<D>,
}

pub type QubitState = DensityMatrix<2>;
pub type TwoQubitState = DensityMatrix<4>;

impl<const D: usize> DensityMatrix<D> {
    pub fn new(m: CMatrix<D>) -> Result<Self> {
        let dev = hermitian_deviation(&m);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = trace(&m);
        if (tr - r(1.0)).norm() > TRACE_TOL {
            return Err(Error::NotDensityMatrix(format!("trace is {tr}")));
        }
        let eig = eig_hermitian(&m)?;
        let min = eig.values[D - 1];
        if min < PSD_SLACK {
            return Err(Error::NotDensityMatrix(format!(
                "smallest eigenvalue {min:e} is negative"
            )));
        }
        Ok(Self { m })
    }

    /// For matrices produced by trace-preserving completely positive maps of
    /// validated inputs.
    pub(crate) fn from_cptp_output(m: CMatrix<D>) -> Self {
        debug_assert!(hermitian_deviation(&m) < 1e-10);
        Self { m }
    }

    pub fn pure(psi: &CVector<D>) -> Result<Self> {
        let n = psi.norm();
        if n.is_nan() || n <= 0.0 {
            return Err(Error::NotDensityMatrix("zero state vector".into()));
        }
        Self::new(projector(&(psi / r(n))))
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: CMatrix::<D>::identity() * r(1.0 / D as f64),
        }
    }

    pub fn matrix(&self) -> &CMatrix<D> {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix<D> {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn purity(&self) -> f64 {
        trace(&(self.m * self.m)).re
    }

    /// Eigenvalues clamped at zero, descending.
    pub fn spectrum(&self) -> [f64; D] {
        let eig = eig_hermitian(&self.m).expect("density matrices are Hermitian");
        eig.values.map(|v| v.max(0.0))
    }
}

pub fn tensor(a: &DensityMatrix<2>, b: &DensityMatrix<2>) -> DensityMatrix<4> {
    DensityMatrix {
        m: kron(a.matrix(), b.matrix()),
    }
}

/// `⟨ψ|ρ|ψ⟩ = Tr(ρP)` for a rank-1 projector `P = |ψ⟩⟨ψ|`.
pub fn fidelity<const D: usize>(rho: &DensityMatrix<D>, pure: &DensityMatrix<D>) -> Result<f64> {
    let purity = pure.purity();
    if (purity - 1.0).abs() > PURITY_TOL {
        return Err(Error::NotPure(purity));
    }
    Ok(trace(&(rho.matrix() * pure.matrix())).re.clamp(0.0, 1.0))
}

/// `½ Σ |λ_k(a - b)|`.
pub fn trace_distance<const D: usize>(a: &DensityMatrix<D>, b: &DensityMatrix<D>) -> f64 {
    let diff = a.matrix() - b.matrix();
    let eig = eig_hermitian(&diff).expect("difference of Hermitian matrices");
    (0.5 * eig.values.iter().map(|v| v.abs()).sum::<f64>()).min(1.0)
}

/// Angles of the input state `cos(θ/2)|10⟩ + e^{iφ} sin(θ/2)|01⟩` and of the
/// resource preparation `cos(ϑ/2)|00⟩ + sin(ϑ/2)|11⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureStateParams {
    pub theta: f64,
    pub phi: f64,
    pub vartheta: f64,
}

impl PureStateParams {
    pub fn new(theta: f64, phi: f64, vartheta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "must lie in [0, pi]",
            });
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::InvalidParameter {
                name: "phi",
                value: phi,
                reason: "must lie in [0, 2pi)",
            });
        }
        if !(0.0..=PI).contains(&vartheta) {
            return Err(Error::InvalidParameter {
                name: "vartheta",
                value: vartheta,
                reason: "must lie in [0, pi]",
            });
        }
        Ok(Self {
            theta,
            phi,
            vartheta,
        })
    }

    /// `θ = ϑ = π/2`, `φ = 0`: both states maximally entangled.
    pub fn maximally_entangled() -> Self {
        Self {
            theta: PI / 2.0,
            phi: 0.0,
            vartheta: PI / 2.0,
        }
    }
}
