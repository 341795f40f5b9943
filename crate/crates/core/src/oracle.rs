// SPDX-License-Identifier: Apache-2.0

//! Slow reference implementations used to cross-check the closed forms.
//!
//! Everything here goes through nalgebra's general Hermitian eigensolver
//! rather than [`crate::qmatrix::eig_hermitian`], and none of it assumes the
//! X-state structure.

use crate::qmatrix::{kron, pauli, r, C64, Mat2, Mat4};

/// Eigenvalues below this fraction of the largest are treated as zero when
/// forming square roots.
const KERNEL_REL: f64 = 1e-15;

fn eigh(m: &Mat4) -> (Vec<f64>, Mat4) {
    let h = (m + m.adjoint()) * r(0.5);
    let eig = h.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Principal square root of a positive semidefinite matrix.
pub fn sqrtm_psd(m: &Mat4) -> Mat4 {
    let (vals, vecs) = eigh(m);
    let top = vals.iter().copied().fold(0.0, f64::max);
    let mut d = Mat4::zeros();
    for (k, v) in vals.iter().enumerate() {
        if *v > KERNEL_REL * top {
            d[(k, k)] = r(v.sqrt());
        }
    }
    vecs * d * vecs.adjoint()
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn spectrum(m: &Mat4) -> Vec<f64> {
    let mut v = eigh(m).0;
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn singular_values_desc(m: &Mat4) -> Vec<f64> {
    let mut v: Vec<f64> = m.singular_values().iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Wootters concurrence for any two-qubit state. The `λ_i` are the singular
/// values of `√ρ (σ_y⊗σ_y) √ρ*`, which square to the eigenvalues of `ρρ̃`.
pub fn wootters_concurrence(rho: &Mat4) -> f64 {
    let yy = kron(&pauli(2), &pauli(2));
    let s = sqrtm_psd(rho);
    let lam = singular_values_desc(&(s * yy * s.map(|z: C64| z.conj())));
    (lam[0] - lam[1] - lam[2] - lam[3]).max(0.0)
}

/// `(Tr √(√ρ σ √ρ))²`, computed as the squared nuclear norm of `√ρ √σ`.
pub fn uhlmann_fidelity(rho: &Mat4, sigma: &Mat4) -> f64 {
    let nuclear: f64 = singular_values_desc(&(sqrtm_psd(rho) * sqrtm_psd(sigma)))
        .iter()
        .sum();
    nuclear * nuclear
}

/// SLD from the eigenbasis of `ρ`: `L_mn = 2 ∂ρ_mn / (λ_m + λ_n)`, zero on
/// the kernel.
pub fn lyapunov_sld(rho: &Mat4, drho: &Mat4) -> Mat4 {
    let (vals, vecs) = eigh(rho);
    let d = vecs.adjoint() * drho * vecs;
    let mut l = Mat4::zeros();
    for m in 0..4 {
        for n in 0..4 {
            let s = vals[m] + vals[n];
            if s > 1e-14 {
                l[(m, n)] = d[(m, n)] * r(2.0 / s);
            }
        }
    }
    vecs * l * vecs.adjoint()
}

/// Quantum Fisher information `Σ 2|∂ρ_mn|²/(λ_m + λ_n)` in the eigenbasis.
pub fn qfi_eigenbasis(rho: &Mat4, drho: &Mat4) -> f64 {
    let (vals, vecs) = eigh(rho);
    let d = vecs.adjoint() * drho * vecs;
    let mut f = 0.0;
    for m in 0..4 {
        for n in 0..4 {
            let s = vals[m] + vals[n];
            if s > 1e-14 {
                f += 2.0 * d[(m, n)].norm_sqr() / s;
            }
        }
    }
    f
}

fn entropy_bits(vals: &[f64]) -> f64 {
    vals.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| -v * v.log2())
        .sum()
}

/// From trace and determinant, so no eigensolver is shared with the 4×4 path.
fn qubit_entropy(m: &Mat2) -> f64 {
    let tr = (m[(0, 0)] + m[(1, 1)]).re;
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
    let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
    entropy_bits(&[0.5 * tr + disc, 0.5 * tr - disc])
}

fn partial_trace_a(rho: &Mat4) -> Mat2 {
    Mat2::from_fn(|i, j| rho[(i, j)] + rho[(2 + i, 2 + j)])
}

/// `Σ_± p_± S(ρ_A|±)` for a projective measurement of qubit B along the
/// Bloch direction `(θ, φ)`. Uses `ρ_A|± ∝ Tr_B[(I⊗Π±)ρ]`, entry by entry.
fn conditional_entropy(rho: &Mat4, theta: f64, phi: f64) -> f64 {
    let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        // Π = ½(I + s n·σ)
        let proj = [
            [r(0.5 * (1.0 + sign * n[2])), C64::new(0.5 * sign * n[0], -0.5 * sign * n[1])],
            [C64::new(0.5 * sign * n[0], 0.5 * sign * n[1]), r(0.5 * (1.0 - sign * n[2]))],
        ];
        let rho_a = Mat2::from_fn(|i, j| {
            let mut z = r(0.0);
            for k in 0..2 {
                for l in 0..2 {
                    z += proj[l][k] * rho[(2 * i + k, 2 * j + l)];
                }
            }
            z
        });
        let p: f64 = (rho_a[(0, 0)] + rho_a[(1, 1)]).re;
        if p > 1e-15 {
            total += p * qubit_entropy(&(rho_a / r(p)));
        }
    }
    total
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Discord with measurements on qubit B, minimised over projective
/// measurement directions: 180×360 grid, then alternating golden-section
/// refinement in each angle.
pub fn discord_brute_force(rho: &Mat4) -> f64 {
    let s_b = qubit_entropy(&partial_trace_a(rho));
    let s_ab = entropy_bits(&spectrum(rho));
    let (nt, np) = (180, 360);
    let dt = std::f64::consts::PI / (nt - 1) as f64;
    let dp = 2.0 * std::f64::consts::PI / np as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..nt {
        for j in 0..np {
            let (th, ph) = (i as f64 * dt, j as f64 * dp);
            let v = conditional_entropy(rho, th, ph);
            if v < best.0 {
                best = (v, th, ph);
            }
        }
    }
    let (mut val, mut th, mut ph) = best;
    for _ in 0..4 {
        let (t_new, v_t) = golden_section(|x| conditional_entropy(rho, x, ph), th - dt, th + dt, 60);
        if v_t < val {
            val = v_t;
            th = t_new;
        }
        let (p_new, v_p) = golden_section(|x| conditional_entropy(rho, th, x), ph - dp, ph + dp, 60);
        if v_p < val {
            val = v_p;
            ph = p_new;
        }
    }
    (s_b - s_ab + val).max(0.0)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Uniform average of `f(θ, φ)` over the Bloch sphere: Gauss–Legendre in
/// `cos θ`, trapezoid (periodic) in `φ`.
pub fn bloch_average(f: impl Fn(f64, f64) -> f64, n_theta: usize, n_phi: usize) -> f64 {
    let (x, w) = gauss_legendre(n_theta);
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let mut total = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        let th = xi.acos();
        let row: f64 = (0..n_phi).map(|j| f(th, j as f64 * dphi)).sum();
        total += wi * row * dphi;
    }
    total / (4.0 * std::f64::consts::PI)
}

/// `(f(x + h) − f(x − h)) / 2h`.
pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Entry-wise central difference of a matrix-valued function.
pub fn central_difference_matrix(f: impl Fn(f64) -> Mat4, x: f64, h: f64) -> Mat4 {
    (f(x + h) - f(x - h)) / r(2.0 * h)
}

/// Largest entry-wise relative deviation, with `floor` guarding small entries.
pub fn max_rel_diff(a: &Mat4, b: &Mat4, floor: f64) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let scale = a[(i, j)].norm().max(b[(i, j)].norm()).max(floor);
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm() / scale);
        }
    }
    worst
}
