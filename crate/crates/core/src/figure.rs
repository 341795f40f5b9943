// SPDX-License-Identifier: Apache-2.0

//! Built-in sweep definitions that regenerate the published curve families.
//!
//! Each figure is a [`SweepConfig`] text. Overrides use the same syntax and
//! replace whole keys; `t = x` is shorthand for a single time point.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sweep::{run_sweep, Param, SweepConfig, SweepResult};

pub const FIGURES: [&str; 8] = ["fig1a", "fig1b", "conB2", "conQ2", "conG2", "FQ", "FG", "comparison"];

fn definition(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig1a" => "time = 0, 2, 201\nsweep Q2 = 1, 4, 4\noutputs = qfi\n",
        "fig1b" => "time = 0, 2, 201\nsweep G2 = 1, 4, 4\noutputs = qfi\n",
        "conB2" => "time = 0, 2, 201\nsweep B2 = 0.5, 2, 4\noutputs = concurrence_out\n",
        "conQ2" => "time = 0.7, 0.7, 1\nsweep Q2 = 1, 4, 4\nsweep Q1 = 0.5, 6, 111\noutputs = concurrence_out\n",
        "conG2" => "time = 1.1, 1.1, 1\nsweep G2 = 1, 4, 4\nsweep G1 = 0.5, 6, 111\noutputs = concurrence_out\n",
        "FQ" => "time = 0, 2, 201\nsweep Q = 1, 4, 4\noutputs = f_avg\n",
        "FG" => "time = 0, 2, 201\nsweep G2 = 1, 4, 4\noutputs = f_avg\n",
        "comparison" => concat!(
            "time = 0, 10, 201\nQ = 6\n",
            "outputs = f_avg, concurrence_ch, concurrence_out, discord_ch, discord_out, coherence_ch, coherence_out\n"
        ),
        _ => return None,
    })
}

/// Column labels in emitted figure files, where they differ from the sweep
/// output names.
fn label(name: &str) -> &str {
    match name {
        "concurrence_ch" => "C_ch",
        "concurrence_out" => "C_out",
        "discord_ch" => "QD_ch",
        "discord_out" => "QD_out",
        "coherence_ch" => "coh_ch",
        "coherence_out" => "coh_out",
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Default,
    Figure,
    Override,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamEntry {
    pub name: &'static str,
    /// Fixed value, absent when swept.
    pub value: Option<f64>,
    pub sweep: Option<[f64; 3]>,
    pub source: Source,
    pub defaulted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub figure: String,
    pub version: &'static str,
    pub config_hash: String,
    pub time: [f64; 3],
    pub parameters: Vec<ParamEntry>,
    pub outputs: Vec<&'static str>,
    pub files: Vec<String>,
    pub error_rows: usize,
}

/// Swept coordinates of one curve and its `(t, value)` points.
pub type Series = (Vec<f64>, Vec<(f64, f64)>);

#[derive(Debug, Clone)]
pub struct FigureData {
    pub name: String,
    pub config: SweepConfig,
    pub result: SweepResult,
    pub manifest: Manifest,
}

fn split_line(raw: &str) -> Option<(String, String)> {
    let content = raw.split('#').next().unwrap_or("").trim();
    if content.is_empty() {
        return None;
    }
    match content.split_once('=') {
        Some((k, v)) => Some((k.split_whitespace().collect::<Vec<_>>().join(" "), v.trim().to_string())),
        None => Some((content.to_string(), String::new())),
    }
}

/// Bare parameter a key writes to, if any.
fn param_of(key: &str) -> Option<Param> {
    Param::parse(key.strip_prefix("sweep ").unwrap_or(key))
}

fn overlaps(a: Param, b: Param) -> bool {
    let expand = |p: Param| match p {
        Param::Q => vec![Param::Q1, Param::Q2],
        p => vec![p],
    };
    expand(a).iter().any(|x| expand(b).contains(x))
}

/// Merged config text plus, per line, the override line it came from.
fn merge(base: &str, overrides: &str) -> Result<(String, Vec<usize>)> {
    let mut lines: Vec<(String, String, usize)> = base
        .lines()
        .filter_map(split_line)
        .map(|(k, v)| (k, v, 0))
        .collect();
    for (idx, raw) in overrides.lines().enumerate() {
        let Some((mut key, mut value)) = split_line(raw) else { continue };
        let line = idx + 1;
        if value.is_empty() {
            return Err(Error::Config {
                line,
                field: key,
                message: "expected 'key = value'".into(),
            });
        }
        if key == "t" {
            key = "time".into();
            value = format!("{value}, {value}, 1");
        }
        match param_of(&key) {
            Some(p) => lines.retain(|(k, _, _)| param_of(k).is_none_or(|q| !overlaps(p, q))),
            None => lines.retain(|(k, _, _)| *k != key),
        }
        lines.push((key, value, line));
    }
    let mut text = String::new();
    let mut origin = Vec::new();
    for (k, v, line) in lines {
        let _ = writeln!(text, "{k} = {v}");
        origin.push(line);
    }
    Ok((text, origin))
}

/// Runs a named figure with optional override text.
pub fn reproduce_figure(name: &str, overrides: Option<&str>, threads: Option<usize>) -> Result<FigureData> {
    let base = definition(name).ok_or_else(|| Error::UnknownFigure(name.to_string()))?;
    let (text, origin) = merge(base, overrides.unwrap_or(""))?;
    let config = SweepConfig::parse(&text).map_err(|e| match e {
        Error::Config { line, field, message } => Error::Config {
            line: line.checked_sub(1).and_then(|i| origin.get(i)).copied().unwrap_or(0),
            field,
            message,
        },
        other => other,
    })?;
    let result = run_sweep(&config, threads)?;

    let base_cfg = SweepConfig::parse(base).expect("built-in figure definitions parse");
    let defaulted = config.defaulted();
    let parameters = Param::ALL[..9]
        .iter()
        .map(|&p| {
            let axis = config
                .axes
                .iter()
                .find(|a| a.param == p || (a.param == Param::Q && matches!(p, Param::Q1 | Param::Q2)));
            let from_base = base_cfg
                .axes
                .iter()
                .any(|a| overlaps(a.param, p))
                || base_cfg.fixed.keys().any(|&k| overlaps(k, p));
            let base_matches = match axis {
                Some(a) => base_cfg.axes.contains(a),
                None => config.base_value(p) == base_cfg.base_value(p),
            };
            let source = if defaulted.contains(&p) {
                Source::Default
            } else if from_base && base_matches {
                Source::Figure
            } else {
                Source::Override
            };
            ParamEntry {
                name: p.name(),
                value: axis.is_none().then(|| config.base_value(p)),
                sweep: axis.map(|a| [a.start, a.stop, a.count as f64]),
                source,
                defaulted: source == Source::Default,
            }
        })
        .collect();
    let manifest = Manifest {
        figure: name.to_string(),
        version: result.version,
        config_hash: result.config_hash.clone(),
        time: [config.time.start, config.time.stop, config.time.points as f64],
        parameters,
        outputs: config.outputs.iter().map(|o| o.name()).collect(),
        files: vec![format!("{name}.csv"), format!("{name}.manifest.json")],
        error_rows: result.error_count(),
    };
    Ok(FigureData {
        name: name.to_string(),
        config,
        result,
        manifest,
    })
}

impl FigureData {
    /// Figure CSV: `t` first, then swept parameters, then outputs.
    pub fn to_csv(&self) -> String {
        let r = &self.result;
        let mut s = String::new();
        let _ = writeln!(s, "# topotel {} figure {}", r.version, self.name);
        let _ = writeln!(s, "# config_sha256 {}", r.config_hash);
        let mut header = vec!["t".to_string()];
        header.extend(self.config.axes.iter().map(|a| a.param.name().to_string()));
        header.extend(self.config.outputs.iter().map(|o| label(o.name()).to_string()));
        let _ = writeln!(s, "{}", header.join(","));
        for row in &r.rows {
            let mut fields = vec![row.t.to_string()];
            fields.extend(row.coords.iter().map(|v| v.to_string()));
            if row.values.is_empty() {
                fields.extend(std::iter::repeat_n(String::new(), self.config.outputs.len()));
            } else {
                fields.extend(row.values.iter().map(|v| v.to_string()));
            }
            let _ = writeln!(s, "{}", fields.join(","));
        }
        s
    }

    pub fn manifest_json(&self) -> String {
        serde_json::to_string_pretty(&self.manifest).expect("manifest serialises")
    }

    /// Writes the CSV, the manifest and, if asked, a JSON copy of the rows
    /// into `dir`. Returns the written paths.
    pub fn write(&self, dir: &Path, json_sidecar: bool) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let mut manifest = self.manifest.clone();
        let mut files = vec![(format!("{}.csv", self.name), self.to_csv())];
        if json_sidecar {
            let name = format!("{}.json", self.name);
            manifest.files.push(name.clone());
            files.push((name, self.result.to_json() + "\n"));
        }
        let body = serde_json::to_string_pretty(&manifest).expect("manifest serialises") + "\n";
        files.push((format!("{}.manifest.json", self.name), body));
        let mut paths = Vec::new();
        for (file, body) in files {
            let path = dir.join(file);
            std::fs::write(&path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            paths.push(path);
        }
        Ok(paths)
    }

    /// Values of output column `name` grouped by swept coordinates, each
    /// group in time order.
    pub fn series(&self, name: &str) -> Vec<Series> {
        let Some(k) = self.config.outputs.iter().position(|o| o.name() == name) else {
            return Vec::new();
        };
        let mut out: Vec<Series> = Vec::new();
        for row in &self.result.rows {
            let v = row.values.get(k).copied().unwrap_or(f64::NAN);
            match out.last_mut() {
                Some((c, pts)) if *c == row.coords => pts.push((row.t, v)),
                _ => out.push((row.coords.clone(), vec![(row.t, v)])),
            }
        }
        out
    }
}

/// Indices of strict interior local maxima; plateaus count once, at their
/// first point.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < values.len() {
        if values[i] > values[i - 1] {
            let mut j = i;
            while j + 1 < values.len() && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < values.len() && values[j + 1] < values[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_figures_run_clean() {
        for name in FIGURES {
            let fig = reproduce_figure(name, None, None).unwrap();
            assert_eq!(fig.manifest.error_rows, 0, "{name}");
            assert_eq!(fig.manifest.parameters.len(), 9);
        }
    }

    #[test]
    fn unknown_figure() {
        assert!(matches!(reproduce_figure("fig9", None, None), Err(Error::UnknownFigure(_))));
    }

    #[test]
    fn fig1a_columns() {
        let csv = reproduce_figure("fig1a", None, Some(2)).unwrap().to_csv();
        assert_eq!(csv.lines().nth(2), Some("t,Q2,qfi"));
    }

    #[test]
    fn comparison_columns() {
        let csv = reproduce_figure("comparison", None, None).unwrap().to_csv();
        assert_eq!(csv.lines().nth(2), Some("t,f_avg,C_ch,C_out,QD_ch,QD_out,coh_ch,coh_out"));
    }

    #[test]
    fn con_q2_at_t0_is_maximal() {
        let fig = reproduce_figure("conQ2", Some("t = 0\n"), None).unwrap();
        assert_eq!(fig.result.rows.len(), 4 * 111);
        for row in &fig.result.rows {
            assert!((row.values[0] - 1.0).abs() < 1e-12);
        }
        let time = fig.manifest.time;
        assert_eq!(time, [0.0, 0.0, 1.0]);
    }

    #[test]
    fn manifest_flags_defaults_and_overrides() {
        let fig = reproduce_figure("fig1a", Some("B2 = 0.5\nsweep Q2 = 1, 2, 2\n"), None).unwrap();
        let get = |n: &str| fig.manifest.parameters.iter().find(|p| p.name == n).unwrap().clone();
        assert!(get("G1").defaulted);
        assert_eq!(get("B2").source, Source::Override);
        assert_eq!(get("B2").value, Some(0.5));
        assert_eq!(get("Q2").source, Source::Override);
        assert_eq!(get("Q2").sweep, Some([1.0, 2.0, 2.0]));
        let plain = reproduce_figure("fig1a", None, None).unwrap();
        assert_eq!(plain.manifest.parameters[1].source, Source::Figure);
    }

    #[test]
    fn joint_override_replaces_single_axis() {
        let fig = reproduce_figure("FQ", Some("Q1 = 3\n"), None).unwrap();
        assert!(fig.config.axes.is_empty());
        assert_eq!(fig.config.base_value(Param::Q1), 3.0);
    }

    #[test]
    fn override_errors_point_at_override_line() {
        match reproduce_figure("FQ", Some("# c\nQ1 = banana\n"), None) {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn writes_files_listed_in_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let fig = reproduce_figure("FG", Some("time = 0, 1, 3\n"), None).unwrap();
        let paths = fig.write(dir.path(), true).unwrap();
        assert_eq!(paths.len(), 3);
        let manifest: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&paths[2]).unwrap()).unwrap();
        assert_eq!(manifest["files"].as_array().unwrap().len(), 3);
        assert!(std::fs::read_to_string(&paths[0]).unwrap().starts_with("# topotel"));
    }

    #[test]
    fn maxima_finder() {
        assert_eq!(local_maxima(&[0.0, 1.0, 0.0, 2.0, 2.0, 1.0, 3.0]), vec![1, 3]);
        assert!(local_maxima(&[1.0, 2.0, 3.0]).is_empty());
    }

    #[test]
    fn comparison_extrema_coincide() {
        let fig = reproduce_figure("comparison", None, None).unwrap();
        let maxima = |name: &str| {
            let s = fig.series(name);
            let v: Vec<f64> = s[0].1.iter().map(|p| p.1).collect();
            local_maxima(&v)
        };
        let reference = maxima("f_avg");
        assert!(!reference.is_empty());
        for name in ["discord_ch", "coherence_ch", "concurrence_out"] {
            let m = maxima(name);
            assert_eq!(m.len(), reference.len(), "{name}");
            for (a, b) in m.iter().zip(&reference) {
                assert!(a.abs_diff(*b) <= 1, "{name}: {a} vs {b}");
            }
        }
    }
}
