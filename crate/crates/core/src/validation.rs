// SPDX-License-Identifier: Apache-2.0

//! Seeded self-check suite. Each check compares a production path against
//! an independent route (stored high-precision table, brute-force operator
//! sums, general-purpose eigensolvers, quadrature, finite differences) and
//! reports its worst deviation.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{
    apply_product_kraus, channel_matrix, channel_state, evolve_single, evolve_single_kraus,
    initial_two_qubit, KrausSet,
};
use crate::error::Result;
use crate::figure::{reproduce_figure, FigureData, FIGURES};
use crate::metrology::{estimation_report, fi_from_probs, optimal_povm, output_derivative, sld_block_diagonal, OUTPUT_BLOCKS};
use crate::oracle;
use crate::qmatrix::{c, projector, r, trace, CVector, DensityMatrix, Mat2, Mat4, PureStateParams};
use crate::resources::{
    blp_distance, blp_witness, concurrence_out, concurrence_x, discord_x, hss_from_definition,
    hss_witness, sudden_death_alpha,
};
use crate::specfun::{alpha, gamma_fn, hyp1f1, hyp2f2_11_3half2, EnvironmentParams};
use crate::sweep::{run_sweep, SweepConfig};
use crate::teleport::{
    average_fidelity, classical_crossing_alpha_sq, input_state, input_vector, output_matrix,
    teleport_generic, CLASSICAL_BOUND,
};

/// High-precision reference values: `function,a,b,x,value`.
pub const SPECFUN_TABLE: &str = include_str!("../tests/data/specfun_oracle.csv");

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

fn rng_for(seed: u64, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (u64::from(id) << 56))
}

/// Runs every check with the given seed.
pub fn run_all(seed: u64, threads: Option<usize>) -> ValidationReport {
    let checks = vec![
        specfun_table(),
        kraus_map(&mut rng_for(seed, 2)),
        channel_equivalence(&mut rng_for(seed, 3)),
        protocol_equivalence(&mut rng_for(seed, 4)),
        fisher_information(&mut rng_for(seed, 5)),
        derivatives(&mut rng_for(seed, 6)),
        average_fidelity_check(),
        concurrence(&mut rng_for(seed, 8)),
        discord(&mut rng_for(seed, 9)),
        witnesses(),
        trends(),
        determinism(threads.unwrap_or(4)),
    ];
    ValidationReport { seed, checks }
}

fn outcome(id: u8, name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult { id, name, passed, detail }
}

fn failed(id: u8, name: &'static str, e: impl fmt::Display) -> CheckResult {
    outcome(id, name, false, format!("error: {e}"))
}

fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

fn max_abs_diff<const D: usize>(a: &crate::qmatrix::CMatrix<D>, b: &crate::qmatrix::CMatrix<D>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// ---- random draws -------------------------------------------------------

pub fn random_env(rng: &mut impl Rng) -> EnvironmentParams {
    EnvironmentParams::new(
        rng.random_range(0.1..5.0),
        rng.random_range(0.2..5.0),
        rng.random_range(0.0..2.0),
    )
    .expect("sampled inside the domain")
}

pub fn random_params(rng: &mut impl Rng) -> PureStateParams {
    PureStateParams::new(
        rng.random_range(0.0..=PI),
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..=PI),
    )
    .expect("sampled inside the domain")
}

/// Uniform in the Bloch ball.
pub fn random_qubit(rng: &mut impl Rng) -> DensityMatrix<2> {
    let v = loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            break v;
        }
    };
    let m = Mat2::new(
        r(0.5 * (1.0 + v[2])),
        c(0.5 * v[0], -0.5 * v[1]),
        c(0.5 * v[0], 0.5 * v[1]),
        r(0.5 * (1.0 - v[2])),
    );
    DensityMatrix::new(m).expect("Bloch ball point is a state")
}

/// Random X state with complex coherences inside the positivity bounds.
pub fn random_x_state(rng: &mut impl Rng) -> DensityMatrix<4> {
    let d: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
    let s: f64 = d.iter().sum();
    let d = d.map(|x| x / s);
    let z = (d[0] * d[3]).sqrt() * rng.random_range(0.0..1.0);
    let w = (d[1] * d[2]).sqrt() * rng.random_range(0.0..1.0);
    let (pz, pw) = (rng.random_range(0.0..2.0 * PI), rng.random_range(0.0..2.0 * PI));
    let mut m = Mat4::zeros();
    for (i, v) in d.iter().enumerate() {
        m[(i, i)] = r(*v);
    }
    m[(0, 3)] = c(z * pz.cos(), z * pz.sin());
    m[(3, 0)] = m[(0, 3)].conj();
    m[(1, 2)] = c(w * pw.cos(), w * pw.sin());
    m[(2, 1)] = m[(1, 2)].conj();
    DensityMatrix::new(m).expect("X state inside the positivity bounds")
}

// ---- checks -------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct TablePoint {
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub value: f64,
}

pub fn parse_specfun_table(text: &str) -> Vec<TablePoint> {
    let num = |s: &str| if s.is_empty() { 0.0 } else { s.parse::<f64>().expect("numeric table field") };
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').map(str::trim).collect();
            TablePoint {
                function: f[0].to_string(),
                a: num(f[1]),
                b: num(f[2]),
                x: num(f[3]),
                value: num(f[4]),
            }
        })
        .collect()
}

pub fn specfun_table() -> CheckResult {
    const NAME: &str = "special functions vs stored high-precision table (1e-10 rel)";
    let table = parse_specfun_table(SPECFUN_TABLE);
    let mut worst = (0.0f64, String::new());
    for p in &table {
        let got = match p.function.as_str() {
            "gamma" => gamma_fn(p.a),
            "hyp1f1" => hyp1f1(p.a, p.b, p.x),
            "hyp2f2" => hyp2f2_11_3half2(p.x),
            other => return failed(1, NAME, format!("unknown table function {other}")),
        };
        let got = match got {
            Ok(v) => v,
            Err(e) => return failed(1, NAME, format!("{p:?}: {e}")),
        };
        let e = rel_err(got, p.value);
        if e > worst.0 || worst.1.is_empty() {
            worst = (e, format!("{}(a={}, b={}, x={})", p.function, p.a, p.b, p.x));
        }
    }
    let passed = table.len() >= 50 && worst.0 < 1e-10;
    outcome(1, NAME, passed, format!("{} points, worst {:.2e} at {}", table.len(), worst.0, worst.1))
}

pub fn kraus_map(rng: &mut impl Rng) -> CheckResult {
    const NAME: &str = "Kraus completeness and closed-form single-qubit map (1e-12)";
    let mut completeness = 0.0f64;
    for k in 0..100 {
        let a = k as f64 / 99.0;
        completeness = completeness.max(KrausSet::new(a).expect("alpha in range").completeness_error());
    }
    let mut evolution = 0.0f64;
    for _ in 0..1000 {
        let rho = random_qubit(rng);
        let a = rng.random_range(0.0..=1.0);
        let (Ok(x), Ok(y)) = (evolve_single(&rho, a), evolve_single_kraus(&rho, a)) else {
            return failed(2, NAME, "evolution rejected a valid alpha");
        };
        evolution = evolution.max(max_abs_diff(x.matrix(), y.matrix()));
    }
    outcome(
        2,
        NAME,
        completeness < 1e-12 && evolution < 1e-12,
        format!("completeness {completeness:.2e} (100 alphas), evolution {evolution:.2e} (1000 states)"),
    )
}

pub fn channel_equivalence(rng: &mut impl Rng) -> CheckResult {
    const NAME: &str = "resource state closed form vs 16-term product Kraus (1e-12)";
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (e1, e2) = (random_env(rng), random_env(rng));
        let t = rng.random_range(0.0..3.0);
        let v = rng.random_range(0.0..=PI);
        let snap = match channel_state(t, &e1, &e2, v) {
            Ok(s) => s,
            Err(e) => return failed(3, NAME, e),
        };
        let brute = apply_product_kraus(
            initial_two_qubit(v).matrix(),
            &KrausSet::new(snap.alpha1.alpha).expect("alpha in range"),
            &KrausSet::new(snap.alpha2.alpha).expect("alpha in range"),
        );
        worst = worst.max(max_abs_diff(snap.rho_ch.matrix(), &brute));
    }
    outcome(3, NAME, worst < 1e-12, format!("worst {worst:.2e} over 1000 draws"))
}

pub fn protocol_equivalence(rng: &mut impl Rng) -> CheckResult {
    const NAME: &str = "generic teleportation vs closed-form output (1e-10)";
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (e1, e2) = (random_env(rng), random_env(rng));
        let t = rng.random_range(0.0..3.0);
        let params = random_params(rng);
        let snap = match channel_state(t, &e1, &e2, params.vartheta) {
            Ok(s) => s,
            Err(e) => return failed(4, NAME, e),
        };
        let generic = teleport_generic(&input_state(&params), &snap.rho_ch);
        worst = worst.max(max_abs_diff(generic.matrix(), &output_matrix(snap.alpha_eff(), &params)));
    }
    let mut perfect = 0.0f64;
    let bell = channel_matrix(1.0, 1.0, PI / 2.0).expect("alpha in range");
    for _ in 0..100 {
        let rho_in = input_state(&random_params(rng));
        perfect = perfect.max(max_abs_diff(teleport_generic(&rho_in, &bell).matrix(), rho_in.matrix()));
    }
    outcome(
        4,
        NAME,
        worst < 1e-10 && perfect < 1e-12,
        format!("worst {worst:.2e} over 1000 draws, perfect channel {perfect:.2e}"),
    )
}

/// Classical Fisher information of the explicit optimal POVM vectors,
/// from `⟨Ψ|ρ|Ψ⟩` and `⟨Ψ|∂ρ|Ψ⟩`.
pub fn povm_fisher(alpha: f64, dalpha: f64, params: &PureStateParams) -> Result<f64> {
    let rho = output_matrix(alpha, params);
    let drho = output_derivative(alpha, params) * r(dalpha);
    let pairs: Vec<(f64, f64)> = optimal_povm(params)
        .iter()
        .map(|v| {
            let p = projector(v);
            (trace(&(p * rho)).re, trace(&(p * drho)).re)
        })
        .collect();
    fi_from_probs(&pairs)
}

pub fn fisher_information(rng: &mut impl Rng) -> CheckResult {
    const NAME: &str = "optimal-POVM Fisher information equals QFI; block SLD (1e-8 rel)";
    let mut worst_fi = (0.0f64, String::new());
    let mut worst_oracle = 0.0f64;
    for i in 0..20 {
        let a = 0.05 + 0.9 * i as f64 / 19.0;
        for j in 0..20 {
            let theta = PI * (j as f64 + 0.5) / 20.0;
            for k in 0..10 {
                let vartheta = PI * (k as f64 + 0.5) / 10.0;
                let params = PureStateParams::new(theta, 0.3, vartheta).expect("inside the domain");
                let rep = match estimation_report(a, a.ln(), 1.0, &params) {
                    Ok(r) => r,
                    Err(e) => return failed(5, NAME, e),
                };
                let fi = match povm_fisher(a, 1.0, &params) {
                    Ok(v) => v,
                    Err(e) => return failed(5, NAME, e),
                };
                let e = rel_err(fi, rep.qfi);
                if e > worst_fi.0 || worst_fi.1.is_empty() {
                    worst_fi = (e, format!("alpha={a:.4} theta={theta:.4} vartheta={vartheta:.4}"));
                }
                let q = oracle::qfi_eigenbasis(&output_matrix(a, &params), &output_derivative(a, &params));
                worst_oracle = worst_oracle.max(rel_err(q, rep.qfi));
            }
        }
    }
    // SLD trace against the closed form at the maximally entangled point
    let params = PureStateParams::maximally_entangled();
    let mut worst_sld = 0.0f64;
    for _ in 0..200 {
        let (e1, e2) = (random_env(rng), random_env(rng));
        let t = rng.random_range(0.01..3.0);
        let (Ok(a1), Ok(a2)) = (alpha(t, &e1), alpha(t, &e2)) else {
            return failed(5, NAME, "alpha evaluation failed");
        };
        let a = a1.alpha * a2.alpha;
        let da = a2.alpha * a1.dalpha_db;
        if !(1e-6..=1.0 - 1e-6).contains(&a) || da == 0.0 {
            continue;
        }
        let rho = output_matrix(a, &params);
        let drho = output_derivative(a, &params) * r(da);
        let l = match sld_block_diagonal(&rho, &drho, &OUTPUT_BLOCKS) {
            Ok(l) => l,
            Err(e) => return failed(5, NAME, e),
        };
        let got = trace(&(drho * l)).re;
        let want = 8.0 * a * a * da * da / (1.0 - a.powi(4));
        worst_sld = worst_sld.max(rel_err(got, want));
    }
    outcome(
        5,
        NAME,
        worst_fi.0 < 1e-8 && worst_oracle < 1e-8 && worst_sld < 1e-8,
        format!(
            "FI vs QFI {:.2e} at {} (4000-point grid), eigenbasis oracle {:.2e}, SLD trace {:.2e}",
            worst_fi.0, worst_fi.1, worst_oracle, worst_sld
        ),
    )
}

/// `ρ_out(α₊) − ρ_out(α₋)` from `ln α±`. Every entry is `C + α²L + α⁴Q`, so
/// the difference is `L Δ(α²) + Q Δ(α⁴)`; forming it this way avoids
/// subtracting two nearly equal O(1) entries when `α` barely moves.
pub fn output_difference(ln_plus: f64, ln_minus: f64, params: &PureStateParams) -> Mat4 {
    let (a2p, a2m) = ((2.0 * ln_plus).exp(), (2.0 * ln_minus).exp());
    let d2 = a2m * (2.0 * (ln_plus - ln_minus)).exp_m1();
    let d4 = d2 * (a2p + a2m);
    let ct = params.theta.cos();
    let sv = params.vartheta.sin();
    let coh = 0.5 * d2 * params.theta.sin() * sv * sv;
    let (sp, cp) = params.phi.sin_cos();
    let mut m = Mat4::zeros();
    m[(0, 0)] = r(-0.25 * d4);
    m[(3, 3)] = m[(0, 0)];
    m[(1, 1)] = r(0.25 * (d4 - 2.0 * ct * d2));
    m[(2, 2)] = r(0.25 * (d4 + 2.0 * ct * d2));
    m[(1, 2)] = c(coh * cp, coh * sp);
    m[(2, 1)] = c(coh * cp, -coh * sp);
    m
}

/// Lower end of the sampled `α` range for the derivative check.
const MIN_ALPHA: f64 = 0.05;

pub fn derivatives(rng: &mut impl Rng) -> CheckResult {
    const NAME: &str = "analytic B1 derivatives vs central differences, h=1e-5 (1e-6 rel)";
    const H: f64 = 1e-5;
    let (mut worst_a, mut worst_rho) = (0.0f64, 0.0f64);
    let mut where_rho = String::new();
    let mut n = 0;
    while n < 200 {
        let (e1, e2) = (random_env(rng), random_env(rng));
        let e1 = e1.with_field(rng.random_range(0.1..2.0)).expect("positive field");
        let t = rng.random_range(0.01..3.0);
        let params = random_params(rng);
        let (Ok(a1), Ok(a2)) = (alpha(t, &e1), alpha(t, &e2)) else {
            return failed(6, NAME, "alpha evaluation failed");
        };
        if a1.alpha * a2.alpha < MIN_ALPHA {
            continue;
        }
        n += 1;
        let at = |b: f64| alpha(t, &e1.with_field(b).expect("positive field")).expect("alpha");
        let fd = oracle::central_difference(|b| at(b).alpha, e1.field, H);
        worst_a = worst_a.max(rel_err(a1.dalpha_db, fd));

        let analytic = output_derivative(a1.alpha * a2.alpha, &params) * r(a2.alpha * a1.dalpha_db);
        let (lp, lm) = (at(e1.field + H).ln_alpha, at(e1.field - H).ln_alpha);
        let numeric = output_difference(lp + a2.ln_alpha, lm + a2.ln_alpha, &params) / r(2.0 * H);
        let e = oracle::max_rel_diff(&analytic, &numeric, 1e-300);
        if e > worst_rho {
            worst_rho = e;
            where_rho = format!("t={t:.3} B1={:.3} theta={:.3}", e1.field, params.theta);
        }
    }
    outcome(
        6,
        NAME,
        worst_a < 1e-6 && worst_rho < 1e-6,
        format!("d alpha/dB1 {worst_a:.2e}, d rho_out/dB1 {worst_rho:.2e} ({where_rho}), 200 points"),
    )
}

pub fn average_fidelity_check() -> CheckResult {
    const NAME: &str = "average fidelity vs Bloch quadrature (1e-8), f_avg(1)=1, 2/3 crossing (1e-10)";
    let mut worst = 0.0f64;
    for &(a, vartheta) in &[(0.3f64, PI / 2.0), (0.6, 1.0), (0.8, 2.5), (0.95, PI / 2.0), (1.0, 0.4), (0.0, 1.3)] {
        let channel = match channel_matrix(a.sqrt(), a.sqrt(), vartheta) {
            Ok(m) => m,
            Err(e) => return failed(7, NAME, e),
        };
        let quad = oracle::bloch_average(
            |theta, phi| {
                let p = PureStateParams { theta, phi, vartheta };
                let psi = input_vector(&p);
                let out = teleport_generic(&input_state(&p), &channel);
                (psi.adjoint() * out.matrix() * psi)[(0, 0)].re
            },
            64,
            64,
        );
        worst = worst.max((quad - average_fidelity(a, vartheta)).abs());
    }
    let perfect = average_fidelity(1.0, PI / 2.0);
    // bisection in α² on the closed form
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if average_fidelity(mid.sqrt(), PI / 2.0) < CLASSICAL_BOUND {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let crossing = (0.5 * (lo + hi) - classical_crossing_alpha_sq()).abs();
    outcome(
        7,
        NAME,
        worst < 1e-8 && perfect == 1.0 && crossing < 1e-10,
        format!("quadrature {worst:.2e} (64x64), f_avg(1, pi/2) = {perfect}, crossing off by {crossing:.2e}"),
    )
}

pub fn concurrence(rng: &mut impl Rng) -> CheckResult {
    const NAME: &str = "X-state concurrence vs Wootters (1e-10), sudden-death root (1e-10)";
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let rho = random_x_state(rng);
        let fast = match concurrence_x(&rho) {
            Ok(v) => v,
            Err(e) => return failed(8, NAME, e),
        };
        worst = worst.max((fast - oracle::wootters_concurrence(rho.matrix())).abs());
    }
    let params = PureStateParams::maximally_entangled();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if concurrence_out(mid, &params) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let target = (2.0f64.sqrt() - 1.0).sqrt();
    let root = (0.5 * (lo + hi) - target).abs();
    let shortcut = (sudden_death_alpha() - target).abs();
    outcome(
        8,
        NAME,
        worst < 1e-10 && root < 1e-10 && shortcut < 1e-10,
        format!("worst {worst:.2e} over 1000 X states, root off by {root:.2e}"),
    )
}

pub fn discord(rng: &mut impl Rng) -> CheckResult {
    const NAME: &str = "X-state discord vs measurement optimisation (1e-4)";
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = projector(&CVector::<4>::new(r(s), r(0.0), r(0.0), r(s)));
    let mut states: Vec<(String, Mat4)> = vec![("Bell".into(), bell)];
    let zero = Mat2::new(r(1.0), r(0.0), r(0.0), r(0.0));
    states.push(("product |0><0| x diag".into(), crate::qmatrix::kron(&zero, &Mat2::new(r(0.3), r(0.0), r(0.0), r(0.7)))));
    states.push(("product I/2 x I/2".into(), crate::qmatrix::kron(&(Mat2::identity() * r(0.5)), &(Mat2::identity() * r(0.5)))));
    for k in 1..=10 {
        let p = k as f64 / 10.0;
        states.push((format!("Werner p={p}"), bell * r(p) + Mat4::identity() * r((1.0 - p) / 4.0)));
    }
    for k in 0..10 {
        states.push((format!("random X state {k}"), *random_x_state(rng).matrix()));
    }
    let mut worst = (0.0f64, String::new());
    for (label, m) in &states {
        let rho = match DensityMatrix::new(*m) {
            Ok(r) => r,
            Err(e) => return failed(9, NAME, format!("{label}: {e}")),
        };
        let fast = match discord_x(&rho) {
            Ok(v) => v,
            Err(e) => return failed(9, NAME, format!("{label}: {e}")),
        };
        let e = (fast - oracle::discord_brute_force(m)).abs();
        if e > worst.0 || worst.1.is_empty() {
            worst = (e, label.clone());
        }
    }
    outcome(
        9,
        NAME,
        worst.0 < 1e-4,
        format!("{} states, worst {:.2e} ({})", states.len(), worst.0, worst.1),
    )
}

pub fn witnesses() -> CheckResult {
    const NAME: &str = "HSS = alpha/2 (1e-10), D = alpha^2 (1e-12), rate signs agree";
    let (mut worst_hss, mut worst_d) = (0.0f64, 0.0f64);
    let (mut compared, mut mismatches) = (0usize, Vec::new());
    for q in [0.5, 1.0, 2.0, 3.0, 4.0] {
        let env = EnvironmentParams::new(q, 1.0, 1.0).expect("inside the domain");
        for i in 0..=500 {
            let t = 10.0 * i as f64 / 500.0;
            let a = match alpha(t, &env) {
                Ok(a) => a.alpha,
                Err(e) => return failed(10, NAME, e),
            };
            let (Ok(h), Ok(d)) = (hss_from_definition(a, 0.7), blp_distance(a)) else {
                return failed(10, NAME, "witness evaluation failed");
            };
            worst_hss = worst_hss.max((h - a / 2.0).abs());
            worst_d = worst_d.max((d - a * a).abs());
            let (Ok(hw), Ok(dw)) = (hss_witness(t, &env), blp_witness(t, &env)) else {
                return failed(10, NAME, "witness rate failed");
            };
            if hw.rate_sign != 0 && dw.rate_sign != 0 {
                compared += 1;
                if hw.rate_sign != dw.rate_sign {
                    mismatches.push(format!("Q={q} t={t}"));
                }
            }
        }
    }
    outcome(
        10,
        NAME,
        worst_hss < 1e-10 && worst_d < 1e-12 && mismatches.is_empty(),
        format!(
            "HSS {worst_hss:.2e}, D {worst_d:.2e}, {compared} rate pairs compared, {} sign mismatches{}",
            mismatches.len(),
            mismatches.first().map(|m| format!(" (first at {m})")).unwrap_or_default()
        ),
    )
}

/// Every violation of a monotone ordering across the swept curves of a
/// figure, as printable coordinates.
pub fn ordering_violations(fig: &FigureData, output: &str, increasing: bool) -> Vec<String> {
    let series = fig.series(output);
    let mut bad = Vec::new();
    for pair in series.windows(2) {
        let ((c0, s0), (c1, s1)) = (&pair[0], &pair[1]);
        for (&(t, v0), &(_, v1)) in s0.iter().zip(s1) {
            let ok = if increasing { v1 >= v0 } else { v1 <= v0 };
            if !ok {
                bad.push(format!("{}: t={t} {c0:?}->{c1:?} {v0:e}->{v1:e}", fig.name));
            }
        }
    }
    bad
}

pub fn trends() -> CheckResult {
    const NAME: &str = "figure trends: QFI up in Q2, G2; f_avg up in G2, (Q1,Q2); C_out down in B2";
    let cases = [
        ("fig1a", "qfi", true),
        ("fig1b", "qfi", true),
        ("FG", "f_avg", true),
        ("FQ", "f_avg", true),
        ("conB2", "concurrence_out", false),
    ];
    let mut bad = Vec::new();
    let mut points = 0;
    for (name, output, up) in cases {
        let fig = match reproduce_figure(name, None, None) {
            Ok(f) => f,
            Err(e) => return failed(11, NAME, e),
        };
        if fig.manifest.error_rows > 0 {
            return failed(11, NAME, format!("{name}: {} rows failed", fig.manifest.error_rows));
        }
        points += fig.result.rows.len();
        bad.extend(ordering_violations(&fig, output, up));
    }
    let detail = if bad.is_empty() {
        format!("{points} grid points, no violations")
    } else {
        format!("{} violations: {}", bad.len(), bad.join("; "))
    };
    outcome(11, NAME, bad.is_empty(), detail)
}

pub fn determinism(threads: usize) -> CheckResult {
    const NAME: &str = "figure and sweep output byte-identical across runs and thread counts";
    let mut differing = Vec::new();
    for name in FIGURES {
        let runs: Vec<(String, String)> = [Some(1), Some(threads.max(2)), Some(1)]
            .into_iter()
            .map(|n| {
                reproduce_figure(name, None, n)
                    .map(|f| (f.to_csv(), f.manifest_json()))
                    .unwrap_or_default()
            })
            .collect();
        if runs[0].0.is_empty() || runs.windows(2).any(|w| w[0] != w[1]) {
            differing.push(name.to_string());
        }
    }
    let text = "time = 0, 3, 31\nsweep Q = 0.5, 4, 3\nsweep B2 = 0.5, 1.5, 3\noutputs = qfi, fi, f_avg, discord_ch, hss\n";
    let cfg = SweepConfig::parse(text).expect("fixed config parses");
    let outs: Vec<String> = [Some(1), Some(threads.max(2)), None]
        .into_iter()
        .map(|n| run_sweep(&cfg, n).map(|r| r.to_csv() + &r.to_json()).unwrap_or_default())
        .collect();
    if outs[0].is_empty() || outs.windows(2).any(|w| w[0] != w[1]) {
        differing.push("sweep".into());
    }
    let detail = if differing.is_empty() {
        format!("{} figures and one sweep identical at 1 and {} threads", FIGURES.len(), threads.max(2))
    } else {
        format!("differing: {}", differing.join(", "))
    };
    outcome(12, NAME, differing.is_empty(), detail)
}
