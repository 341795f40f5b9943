// SPDX-License-Identifier: Apache-2.0
#![allow(dead_code)]

pub mod bigseries;

use std::path::PathBuf;

/// One row of the frozen special-function table.
#[derive(Debug, Clone)]
pub struct OraclePoint {
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub value: f64,
}

fn parse_or_nan(s: &str) -> f64 {
    if s.is_empty() {
        f64::NAN
    } else {
        s.parse().unwrap()
    }
}

pub fn specfun_table() -> Vec<OraclePoint> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/specfun_oracle.csv");
    let text = std::fs::read_to_string(path).expect("oracle table");
    text.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            OraclePoint {
                function: f[0].to_string(),
                a: parse_or_nan(f[1]),
                b: parse_or_nan(f[2]),
                x: parse_or_nan(f[3]),
                value: f[4].parse().unwrap(),
            }
        })
        .collect()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}
