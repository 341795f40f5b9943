// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{bigseries, rel_err, specfun_table};
use topotel::specfun::{gamma_fn, hyp1f1, hyp2f2_11_3half2};

#[test]
fn table_has_enough_points() {
    let table = specfun_table();
    assert!(table.len() >= 50);
    for f in ["gamma", "hyp1f1", "hyp2f2"] {
        assert!(table.iter().filter(|p| p.function == f).count() >= 15, "{f}");
    }
}

#[test]
fn every_table_value_within_1e10() {
    let mut worst = (0.0, String::new());
    for p in specfun_table() {
        let got = match p.function.as_str() {
            "gamma" => gamma_fn(p.a),
            "hyp1f1" => hyp1f1(p.a, p.b, p.x),
            "hyp2f2" => hyp2f2_11_3half2(p.x),
            other => panic!("unknown function {other}"),
        }
        .unwrap();
        let e = rel_err(got, p.value);
        if e > worst.0 {
            worst = (e, format!("{p:?} got {got:e}"));
        }
    }
    println!("worst relative error {:e} at {}", worst.0, worst.1);
    assert!(worst.0 < 1e-10, "{}", worst.1);
}

#[test]
fn big_integer_series_reproduces_table() {
    // the fixed-point series is a second, independent high-precision route
    for p in specfun_table().into_iter().filter(|p| p.function != "gamma") {
        if p.x.abs() > 100.0 {
            continue;
        }
        let v = match p.function.as_str() {
            "hyp1f1" => bigseries::hyp1f1(p.a, p.b, p.x),
            _ => bigseries::hyp2f2_11_3half2(p.x),
        };
        assert!(rel_err(v, p.value) < 1e-14, "{p:?} big = {v:e}");
    }
}

#[test]
fn spec_examples() {
    assert_eq!(gamma_fn(2.0).unwrap(), 1.0);
    assert!(rel_err(gamma_fn(0.5).unwrap(), 1.772_453_850_9) < 1e-10);
    assert!(rel_err(gamma_fn(4.5).unwrap(), 11.631_728_396_6) < 1e-10);
    assert!(rel_err(hyp1f1(1.0, 1.0, 2.0).unwrap(), 7.389_056_098_9) < 1e-10);
    assert!(rel_err(hyp1f1(0.5, 0.5, -1.0).unwrap(), 0.367_879_441_2) < 1e-9);
    let v = bigseries::hyp1f1(-0.25, 0.5, -4.0);
    assert!(rel_err(hyp1f1(-0.25, 0.5, -4.0).unwrap(), v) < 1e-10);
    assert_eq!(hyp2f2_11_3half2(0.0).unwrap(), 1.0);
    for x in [-1.0, -100.0] {
        let v = bigseries::hyp2f2_11_3half2(x);
        assert!(rel_err(hyp2f2_11_3half2(x).unwrap(), v) < 1e-10);
    }
}
