// SPDX-License-Identifier: Apache-2.0

//! Parameter sweeps over the model and their CSV / JSON emission.
//!
//! Config files are line-oriented `key = value` text:
//!
//! ```text
//! # comments start with '#'
//! time = 0, 5, 101          # start, stop, points
//! sweep Q2 = 1, 4, 4        # up to three axes, outer axis first
//! B1 = 1
//! theta = pi/2
//! outputs = qfi, fi, f_avg
//! ```
//!
//! Unset parameters take the figure defaults (`Γ = 1`, `B = 1`, `Q = 1`,
//! `θ = ϑ = π/2`, `φ = 0`). `Q` sets both Ohmicity exponents at once.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::metrology::estimation_report;
use crate::qmatrix::{DensityMatrix, PureStateParams};
use crate::resources::{blp_distance, coherence_l1, concurrence_x, discord_x, hss_from_definition};
use crate::specfun::{alpha, EnvironmentParams};
use crate::teleport::{average_fidelity, output_matrix, pointwise_fidelity};

pub const MAX_AXES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Param {
    Q1,
    Q2,
    G1,
    G2,
    B1,
    B2,
    Theta,
    Phi,
    Vartheta,
    /// Both Ohmicity exponents together.
    Q,
}

impl Param {
    pub const ALL: [Param; 10] = [
        Param::Q1,
        Param::Q2,
        Param::G1,
        Param::G2,
        Param::B1,
        Param::B2,
        Param::Theta,
        Param::Phi,
        Param::Vartheta,
        Param::Q,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Q1 => "Q1",
            Param::Q2 => "Q2",
            Param::G1 => "G1",
            Param::G2 => "G2",
            Param::B1 => "B1",
            Param::B2 => "B2",
            Param::Theta => "theta",
            Param::Phi => "phi",
            Param::Vartheta => "vartheta",
            Param::Q => "Q",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }

    pub fn default_value(self) -> f64 {
        match self {
            Param::Q1 | Param::Q2 | Param::Q => 1.0,
            Param::G1 | Param::G2 | Param::B1 | Param::B2 => 1.0,
            Param::Theta | Param::Vartheta => PI / 2.0,
            Param::Phi => 0.0,
        }
    }

    /// Parameters this one writes to.
    fn targets(self) -> &'static [Param] {
        match self {
            Param::Q => &[Param::Q1, Param::Q2],
            Param::Q1 => &[Param::Q1],
            Param::Q2 => &[Param::Q2],
            Param::G1 => &[Param::G1],
            Param::G2 => &[Param::G2],
            Param::B1 => &[Param::B1],
            Param::B2 => &[Param::B2],
            Param::Theta => &[Param::Theta],
            Param::Phi => &[Param::Phi],
            Param::Vartheta => &[Param::Vartheta],
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Output {
    Qfi,
    Fi,
    FAvg,
    Fidelity,
    ConcurrenceCh,
    ConcurrenceOut,
    DiscordCh,
    DiscordOut,
    CoherenceCh,
    CoherenceOut,
    Hss,
    TraceDist,
    Alpha1,
    Alpha2,
}

impl Output {
    pub const ALL: [Output; 14] = [
        Output::Qfi,
        Output::Fi,
        Output::FAvg,
        Output::Fidelity,
        Output::ConcurrenceCh,
        Output::ConcurrenceOut,
        Output::DiscordCh,
        Output::DiscordOut,
        Output::CoherenceCh,
        Output::CoherenceOut,
        Output::Hss,
        Output::TraceDist,
        Output::Alpha1,
        Output::Alpha2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Output::Qfi => "qfi",
            Output::Fi => "fi",
            Output::FAvg => "f_avg",
            Output::Fidelity => "fidelity",
            Output::ConcurrenceCh => "concurrence_ch",
            Output::ConcurrenceOut => "concurrence_out",
            Output::DiscordCh => "discord_ch",
            Output::DiscordOut => "discord_out",
            Output::CoherenceCh => "coherence_ch",
            Output::CoherenceOut => "coherence_out",
            Output::Hss => "hss",
            Output::TraceDist => "trace_dist",
            Output::Alpha1 => "alpha1",
            Output::Alpha2 => "alpha2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub param: Param,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.points)
    }
}

/// `count` evenly spaced values; endpoints are hit exactly.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let step = (stop - start) / (count - 1) as f64;
    (0..count)
        .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub fixed: BTreeMap<Param, f64>,
    pub axes: Vec<Axis>,
    pub outputs: Vec<Output>,
    pub time: TimeGrid,
}

fn config_err(line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

/// A number, or a multiple of `pi` such as `pi/2`, `2pi`, `3*pi/4`.
pub fn parse_value(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().ok()?),
        None => (s, 1.0),
    };
    let coeff = num.strip_suffix("pi")?.trim().trim_end_matches('*').trim();
    let coeff = if coeff.is_empty() {
        1.0
    } else if coeff == "-" {
        -1.0
    } else {
        coeff.parse::<f64>().ok()?
    };
    let v = coeff * PI / den;
    v.is_finite().then_some(v)
}

fn parse_list(line: usize, field: &str, value: &str, n: usize) -> Result<Vec<f64>> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(config_err(line, field, format!("expected {n} comma-separated values")));
    }
    parts
        .iter()
        .map(|p| parse_value(p).ok_or_else(|| config_err(line, field, format!("'{p}' is not a number"))))
        .collect()
}

fn parse_count(line: usize, field: &str, v: f64) -> Result<usize> {
    if v < 1.0 || v.fract() != 0.0 || v > 1e7 {
        return Err(config_err(line, field, format!("count {v} must be a positive integer")));
    }
    Ok(v as usize)
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut fixed = BTreeMap::new();
        let mut axes = Vec::new();
        let mut outputs = None;
        let mut time = None;
        let mut axis_lines = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| config_err(line, content, "expected 'key = value'"))?;
            let (key, value) = (key.trim(), value.trim());

            if let Some(name) = key.strip_prefix("sweep ").map(str::trim) {
                let param = Param::parse(name)
                    .ok_or_else(|| config_err(line, name, "unknown parameter"))?;
                let v = parse_list(line, name, value, 3)?;
                let count = parse_count(line, name, v[2])?;
                if count < 2 {
                    return Err(config_err(line, name, "a swept axis needs at least 2 points"));
                }
                axes.push(Axis {
                    param,
                    start: v[0],
                    stop: v[1],
                    count,
                });
                axis_lines.push(line);
            } else if key == "time" {
                if time.is_some() {
                    return Err(config_err(line, key, "time grid given twice"));
                }
                let v = parse_list(line, key, value, 3)?;
                let points = parse_count(line, key, v[2])?;
                if v[0].is_nan() || v[0] < 0.0 || v[1] < v[0] {
                    return Err(config_err(line, key, "need 0 <= start <= stop"));
                }
                if points == 1 && v[1] != v[0] {
                    return Err(config_err(line, key, "a single time point needs start = stop"));
                }
                time = Some(TimeGrid {
                    start: v[0],
                    stop: v[1],
                    points,
                });
            } else if key == "outputs" {
                let mut list = Vec::new();
                for name in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let o = Output::parse(name)
                        .ok_or_else(|| config_err(line, name, "unknown output"))?;
                    if list.contains(&o) {
                        return Err(config_err(line, name, "output listed twice"));
                    }
                    list.push(o);
                }
                if list.is_empty() {
                    return Err(config_err(line, key, "no outputs requested"));
                }
                outputs = Some(list);
            } else {
                let param = Param::parse(key).ok_or_else(|| config_err(line, key, "unknown key"))?;
                let v = parse_value(value)
                    .ok_or_else(|| config_err(line, key, format!("'{value}' is not a number")))?;
                if fixed.insert(param, v).is_some() {
                    return Err(config_err(line, key, "parameter set twice"));
                }
            }
        }

        if axes.len() > MAX_AXES {
            return Err(config_err(axis_lines[MAX_AXES], axes[MAX_AXES].param.name(), "at most 3 swept axes"));
        }
        let mut seen: BTreeMap<Param, Param> = BTreeMap::new();
        let sources = axes.iter().map(|a| a.param).chain(fixed.keys().copied());
        for (k, src) in sources.enumerate() {
            for &t in src.targets() {
                if let Some(prev) = seen.insert(t, src) {
                    let line = axis_lines.get(k).copied().unwrap_or(0);
                    return Err(config_err(line, src.name(), format!("overlaps with {prev}")));
                }
            }
        }
        let cfg = Self {
            fixed,
            axes,
            outputs: outputs.ok_or_else(|| config_err(0, "outputs", "missing"))?,
            time: time.ok_or_else(|| config_err(0, "time", "missing"))?,
        };
        cfg.check_ranges()?;
        Ok(cfg)
    }

    /// Rejects values no grid point could use, before any evaluation.
    fn check_ranges(&self) -> Result<()> {
        let mut bounds: Vec<(Param, f64, f64)> =
            self.fixed.iter().map(|(&p, &v)| (p, v, v)).collect();
        bounds.extend(self.axes.iter().map(|a| (a.param, a.start.min(a.stop), a.start.max(a.stop))));
        for (p, lo, hi) in bounds {
            let ok = match p {
                Param::Q | Param::Q1 | Param::Q2 | Param::B1 | Param::B2 => lo >= 0.0,
                Param::G1 | Param::G2 => lo > 0.0,
                Param::Theta | Param::Vartheta => lo >= 0.0 && hi <= PI,
                Param::Phi => lo >= 0.0 && hi < 2.0 * PI,
            };
            if !ok {
                return Err(config_err(0, p.name(), format!("value range [{lo}, {hi}] is outside the domain")));
            }
        }
        Ok(())
    }

    /// Stable textual form; the hash in output headers is taken over this.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "time = {}, {}, {}", self.time.start, self.time.stop, self.time.points);
        for a in &self.axes {
            let _ = writeln!(s, "sweep {} = {}, {}, {}", a.param, a.start, a.stop, a.count);
        }
        for (p, v) in &self.fixed {
            let _ = writeln!(s, "{p} = {v}");
        }
        let names: Vec<&str> = self.outputs.iter().map(|o| o.name()).collect();
        let _ = writeln!(s, "outputs = {}", names.join(", "));
        s
    }

    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Fixed value or default, ignoring swept axes.
    pub fn base_value(&self, p: Param) -> f64 {
        if let Some(v) = self.fixed.get(&p) {
            return *v;
        }
        if matches!(p, Param::Q1 | Param::Q2) {
            if let Some(v) = self.fixed.get(&Param::Q) {
                return *v;
            }
        }
        p.default_value()
    }

    /// Parameters that were neither fixed nor swept.
    pub fn defaulted(&self) -> Vec<Param> {
        let swept: Vec<Param> = self.axes.iter().flat_map(|a| a.param.targets().iter().copied()).collect();
        let fixed: Vec<Param> = self.fixed.keys().flat_map(|p| p.targets().iter().copied()).collect();
        Param::ALL[..9]
            .iter()
            .copied()
            .filter(|p| !swept.contains(p) && !fixed.contains(p))
            .collect()
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = self.axes.iter().map(|a| a.param.name().to_string()).collect();
        cols.push("t".into());
        cols.extend(self.outputs.iter().map(|o| o.name().to_string()));
        cols.push("flag".into());
        cols.push("error".into());
        cols
    }

    fn points(&self) -> Vec<(Vec<f64>, f64)> {
        let axis_values: Vec<Vec<f64>> = self.axes.iter().map(Axis::values).collect();
        let times = self.time.values();
        let mut out = Vec::new();
        let mut coords = vec![0usize; axis_values.len()];
        loop {
            let c: Vec<f64> = coords.iter().enumerate().map(|(k, &i)| axis_values[k][i]).collect();
            for &t in &times {
                out.push((c.clone(), t));
            }
            // odometer, last axis fastest
            let mut k = coords.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                coords[k] += 1;
                if coords[k] < axis_values[k].len() {
                    break;
                }
                coords[k] = 0;
            }
        }
    }
}

/// All model inputs at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelPoint {
    pub q1: f64,
    pub q2: f64,
    pub g1: f64,
    pub g2: f64,
    pub b1: f64,
    pub b2: f64,
    pub theta: f64,
    pub phi: f64,
    pub vartheta: f64,
    pub t: f64,
}

impl ModelPoint {
    fn set(&mut self, p: Param, v: f64) {
        for &target in p.targets() {
            match target {
                Param::Q1 => self.q1 = v,
                Param::Q2 => self.q2 = v,
                Param::G1 => self.g1 = v,
                Param::G2 => self.g2 = v,
                Param::B1 => self.b1 = v,
                Param::B2 => self.b2 = v,
                Param::Theta => self.theta = v,
                Param::Phi => self.phi = v,
                Param::Vartheta => self.vartheta = v,
                Param::Q => unreachable!("Q expands to Q1 and Q2"),
            }
        }
    }

    pub fn from_config(cfg: &SweepConfig, coords: &[f64], t: f64) -> Self {
        let mut m = Self {
            q1: cfg.base_value(Param::Q1),
            q2: cfg.base_value(Param::Q2),
            g1: cfg.base_value(Param::G1),
            g2: cfg.base_value(Param::G2),
            b1: cfg.base_value(Param::B1),
            b2: cfg.base_value(Param::B2),
            theta: cfg.base_value(Param::Theta),
            phi: cfg.base_value(Param::Phi),
            vartheta: cfg.base_value(Param::Vartheta),
            t,
        };
        for (axis, &v) in cfg.axes.iter().zip(coords) {
            m.set(axis.param, v);
        }
        m
    }
}

/// Flag written when a value is a continuity limit rather than a direct
/// evaluation.
pub const FLAG_CONTINUITY: &str = "continuity";

/// Evaluates `outputs` at one point. Returns the values and an optional flag.
pub fn evaluate(point: &ModelPoint, outputs: &[Output]) -> Result<(Vec<f64>, Option<&'static str>)> {
    let env1 = EnvironmentParams::new(point.q1, point.g1, point.b1)?;
    let env2 = EnvironmentParams::new(point.q2, point.g2, point.b2)?;
    let params = PureStateParams::new(point.theta, point.phi, point.vartheta)?;
    let a1 = alpha(point.t, &env1)?;
    let a2 = alpha(point.t, &env2)?;
    let a = a1.alpha * a2.alpha;

    let needs_ch = outputs.iter().any(|o| matches!(o, Output::ConcurrenceCh | Output::DiscordCh | Output::CoherenceCh));
    let needs_out = outputs.iter().any(|o| matches!(o, Output::ConcurrenceOut | Output::DiscordOut | Output::CoherenceOut));
    let needs_est = outputs.iter().any(|o| matches!(o, Output::Qfi | Output::Fi));
    let rho_ch = if needs_ch {
        Some(crate::channel::channel_matrix(a1.alpha, a2.alpha, point.vartheta)?)
    } else {
        None
    };
    let rho_out = if needs_out {
        Some(DensityMatrix::new(output_matrix(a, &params))?)
    } else {
        None
    };
    let est = if needs_est {
        Some(estimation_report(a, a1.ln_alpha + a2.ln_alpha, a2.alpha * a1.dalpha_db, &params)?)
    } else {
        None
    };

    let mut flag = None;
    let mut values = Vec::with_capacity(outputs.len());
    for o in outputs {
        let v = match o {
            Output::Qfi | Output::Fi => {
                let e = est.as_ref().expect("estimation computed");
                if e.at_continuity_point {
                    flag = Some(FLAG_CONTINUITY);
                }
                if *o == Output::Qfi {
                    e.qfi
                } else {
                    e.fi_optimal_povm
                }
            }
            Output::FAvg => average_fidelity(a, point.vartheta),
            Output::Fidelity => pointwise_fidelity(a, &params),
            Output::ConcurrenceCh => concurrence_x(rho_ch.as_ref().expect("channel state"))?,
            Output::DiscordCh => discord_x(rho_ch.as_ref().expect("channel state"))?,
            Output::CoherenceCh => coherence_l1(rho_ch.as_ref().expect("channel state")),
            Output::ConcurrenceOut => concurrence_x(rho_out.as_ref().expect("output state"))?,
            Output::DiscordOut => discord_x(rho_out.as_ref().expect("output state"))?,
            Output::CoherenceOut => coherence_l1(rho_out.as_ref().expect("output state")),
            Output::Hss => hss_from_definition(a1.alpha, 0.0)?,
            Output::TraceDist => blp_distance(a1.alpha)?,
            Output::Alpha1 => a1.alpha,
            Output::Alpha2 => a2.alpha,
        };
        if !v.is_finite() {
            return Err(Error::InvalidParameter {
                name: o.name(),
                value: v,
                reason: "evaluated to a non-finite value",
            });
        }
        values.push(v);
    }
    Ok((values, flag))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub coords: Vec<f64>,
    pub t: f64,
    /// Empty when `error` is set.
    pub values: Vec<f64>,
    pub flag: Option<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub version: &'static str,
    pub config_hash: String,
    pub columns: Vec<String>,
    pub rows: Vec<ResultRow>,
}

/// Evaluates every grid point, on `threads` workers if given (else the
/// global pool). Row order is fixed: outer axis first, time last.
pub fn run_sweep(cfg: &SweepConfig, threads: Option<usize>) -> Result<SweepResult> {
    let points = cfg.points();
    let eval = |(coords, t): &(Vec<f64>, f64)| {
        let point = ModelPoint::from_config(cfg, coords, *t);
        match evaluate(&point, &cfg.outputs) {
            Ok((values, flag)) => ResultRow {
                coords: coords.clone(),
                t: *t,
                values,
                flag: flag.map(str::to_string),
                error: None,
            },
            Err(e) => ResultRow {
                coords: coords.clone(),
                t: *t,
                values: Vec::new(),
                flag: None,
                error: Some(e.to_string()),
            },
        }
    };
    let rows: Vec<ResultRow> = match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Io(e.to_string()))?;
            pool.install(|| points.par_iter().map(eval).collect())
        }
        None => points.par_iter().map(eval).collect(),
    };
    Ok(SweepResult {
        version: env!("CARGO_PKG_VERSION"),
        config_hash: cfg.hash(),
        columns: cfg.columns(),
        rows,
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl SweepResult {
    pub fn error_count(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# topotel {}", self.version);
        let _ = writeln!(s, "# config_sha256 {}", self.config_hash);
        let _ = writeln!(s, "{}", self.columns.join(","));
        let n_out = self.columns.len() - 3 - self.rows.first().map_or(0, |r| r.coords.len());
        for row in &self.rows {
            let mut fields: Vec<String> = row.coords.iter().map(|v| v.to_string()).collect();
            fields.push(row.t.to_string());
            if row.values.is_empty() {
                fields.extend(std::iter::repeat_n(String::new(), n_out));
            } else {
                fields.extend(row.values.iter().map(|v| v.to_string()));
            }
            fields.push(row.flag.clone().unwrap_or_default());
            fields.push(csv_field(row.error.as_deref().unwrap_or("")));
            let _ = writeln!(s, "{}", fields.join(","));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep results serialise")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "\
# demo
time = 0, 2, 5
sweep Q2 = 1, 4, 4
B1 = 1   # field on Alice's side
theta = pi/2
outputs = qfi, f_avg, alpha1
";

    #[test]
    fn parses_values_and_pi() {
        assert_eq!(parse_value("2.5"), Some(2.5));
        assert_eq!(parse_value("pi"), Some(PI));
        assert_eq!(parse_value("pi/2"), Some(PI / 2.0));
        assert_eq!(parse_value("3*pi/4"), Some(3.0 * PI / 4.0));
        assert_eq!(parse_value("2pi"), Some(2.0 * PI));
        assert_eq!(parse_value("nan"), None);
        assert_eq!(parse_value("banana"), None);
    }

    #[test]
    fn parses_basic_config() {
        let cfg = SweepConfig::parse(BASIC).unwrap();
        assert_eq!(cfg.axes.len(), 1);
        assert_eq!(cfg.axes[0].values(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(cfg.time.values().len(), 5);
        assert_eq!(cfg.columns(), ["Q2", "t", "qfi", "f_avg", "alpha1", "flag", "error"]);
        assert!(cfg.defaulted().contains(&Param::G1));
        assert!(!cfg.defaulted().contains(&Param::Q2));
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let bad = "time = 0, 1, 3\nsweep Q7 = 1, 2, 3\noutputs = qfi\n";
        match SweepConfig::parse(bad) {
            Err(Error::Config { line, field, .. }) => assert_eq!((line, field.as_str()), (2, "Q7")),
            other => panic!("{other:?}"),
        }
        let short = "time = 0, 1, 3\nsweep Q2 = 1, 2, 1\noutputs = qfi\n";
        assert!(matches!(SweepConfig::parse(short), Err(Error::Config { line: 2, .. })));
        let unknown = "time = 0, 1, 3\noutputs = qfi, nope\n";
        assert!(matches!(SweepConfig::parse(unknown), Err(Error::Config { line: 2, .. })));
        let neg = "time = -1, 1, 3\noutputs = qfi\n";
        assert!(matches!(SweepConfig::parse(neg), Err(Error::Config { line: 1, .. })));
        let overlap = "time = 0, 1, 3\nsweep Q = 0, 1, 2\nQ1 = 2\noutputs = qfi\n";
        assert!(SweepConfig::parse(overlap).is_err());
        let four = "time = 0, 1, 2\nsweep Q1 = 0, 1, 2\nsweep Q2 = 0, 1, 2\nsweep B1 = 0, 1, 2\nsweep B2 = 0, 1, 2\noutputs = qfi\n";
        assert!(matches!(SweepConfig::parse(four), Err(Error::Config { line: 5, .. })));
        let range = "time = 0, 1, 2\ntheta = 4\noutputs = qfi\n";
        assert!(SweepConfig::parse(range).is_err());
    }

    #[test]
    fn hash_ignores_formatting() {
        let a = SweepConfig::parse(BASIC).unwrap();
        let b = SweepConfig::parse(&BASIC.replace(" = ", "=").replace("# demo", "")).unwrap();
        assert_eq!(a.hash(), b.hash());
    }

    #[test]
    fn zero_fields_freeze_everything() {
        let cfg = SweepConfig::parse("time = 0, 3, 7\nB1 = 0\nB2 = 0\noutputs = alpha1, alpha2, f_avg\n").unwrap();
        let res = run_sweep(&cfg, Some(2)).unwrap();
        for row in &res.rows {
            assert_eq!(row.values, vec![1.0, 1.0, 1.0]);
        }
    }

    #[test]
    fn continuity_flag_at_t0() {
        let cfg = SweepConfig::parse(BASIC).unwrap();
        let res = run_sweep(&cfg, Some(1)).unwrap();
        assert_eq!(res.rows.len(), 20);
        let first = &res.rows[0];
        assert_eq!(first.t, 0.0);
        assert_eq!(first.values[0], 0.0);
        assert_eq!(first.flag.as_deref(), Some(FLAG_CONTINUITY));
        assert!(res.rows[1].flag.is_none());
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let cfg = SweepConfig::parse(BASIC).unwrap();
        let one = run_sweep(&cfg, Some(1)).unwrap().to_csv();
        let four = run_sweep(&cfg, Some(4)).unwrap().to_csv();
        assert_eq!(one, four);
        assert!(one.starts_with("# topotel "));
    }

    #[test]
    fn all_outputs_evaluate() {
        let names: Vec<&str> = Output::ALL.iter().map(|o| o.name()).collect();
        let text = format!("time = 0.5, 0.5, 1\noutputs = {}\n", names.join(", "));
        let cfg = SweepConfig::parse(&text).unwrap();
        let res = run_sweep(&cfg, None).unwrap();
        assert_eq!(res.error_count(), 0);
        assert_eq!(res.rows[0].values.len(), 14);
    }

    #[test]
    fn evaluation_errors_stay_in_row() {
        // Q = 0 with t > 0 is fine; an invalid vartheta can only arrive via ModelPoint
        let point = ModelPoint {
            q1: 1.0,
            q2: 1.0,
            g1: 1.0,
            g2: 1.0,
            b1: 1.0,
            b2: 1.0,
            theta: 1.0,
            phi: 0.0,
            vartheta: 5.0,
            t: 1.0,
        };
        assert!(evaluate(&point, &[Output::Qfi]).is_err());
    }
}
