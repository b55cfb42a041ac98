use std::process::{Command, Output};

use revpinsker::bounds::{renyi_bound, theorem1_bound};
use revpinsker::generator::kl_generator;
use revpinsker::{ClassParams, ExtendedReal};
use revpinsker_cli::OutputRecord;

fn revpinsker(args: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revpinsker"))
        .args(args.split_whitespace())
        .output()
        .expect("binary runs")
}

fn record(args: &str) -> OutputRecord {
    let out = revpinsker(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    OutputRecord::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

fn code(args: &str) -> Option<i32> {
    revpinsker(args).status.code()
}

#[test]
fn bound_matches_library_bit_for_bit() {
    let r = record("bound --div kl --formula thm1 --delta 0.25 --m 0.5 --M 2");
    let lib = theorem1_bound(&kl_generator(), &ClassParams::finite(0.25, 0.5, 2.0).unwrap()).unwrap();
    assert_eq!(r.results["bound"], lib);
    assert!((lib.to_f64() - 0.1732867951399863).abs() < 1e-15);
}

#[test]
fn vajda_form_is_infinite_for_kl() {
    let r = record("bound --div kl --formula cor2 --delta 0.3");
    assert_eq!(r.results["bound"], ExtendedReal::PosInf);
}

#[test]
fn renyi_and_hellinger_bounds() {
    let r = record("bound --div renyi:2 --delta 0.25 --m 0.5 --M 2");
    let lib = renyi_bound(2.0, &ClassParams::finite(0.25, 0.5, 2.0).unwrap()).unwrap();
    assert_eq!(r.results["bound"], lib);
    let h = record("bound --div hellinger:0.5 --formula cor1 --m 0.5 --M 2");
    assert!(h.results["bound"].to_f64() > 0.0);
    // ((M-1) f(m) + (1-m) f(M))/(M-m) with f = |t-1|/2 at m = 0.25, M = 3
    let tv = record("bound --div tv --formula cor1 --m 0.25 --M 3");
    assert!((tv.results["bound"].to_f64() - 0.5454545454545454).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    assert_eq!(
        code("bound --div chi2 --formula thm1 --delta 0.5 --m 0.5 --M 2"),
        Some(2)
    );
    assert_eq!(code("divergence --div kl --p 0.5,0.5 --q 1,0"), Some(2));
    assert_eq!(code("bound --div kl --delta abc --m 0.5 --M 2"), Some(3));
    assert_eq!(code("bound --div nope --delta 0.1 --m 0.5 --M 2"), Some(3));
    assert_eq!(code("bound --div kl --formula thm1 --delta 0.1"), Some(3));
    assert_eq!(code("divergence --div kl --p 0.5,x --q 0.5,0.5"), Some(3));
    assert_eq!(code("frobnicate"), Some(3));
    assert_eq!(code("bound --div kl --delta 0.1 --m 0.5 --M 2 --format yaml"), Some(3));
    assert_eq!(code("extremal --delta 0.25 --m 0 --M inf"), Some(2));
    assert_eq!(
        code("bound --div tv --formula thm1 --delta 0.25 --m 0 --M inf"),
        Some(2)
    );
    assert_eq!(code("bound --div tv --formula cor1 --m 0.25 --M inf"), Some(2));
    assert_eq!(code("--help"), Some(0));
}

#[test]
fn divergence_reports_measured_params() {
    let r = record("divergence --div kl --p 0.25,0.5,0.25 --q 0.5,0.25,0.25");
    assert!((r.results["divergence"].to_f64() - 0.1732867951399863).abs() < 1e-15);
    assert_eq!(r.results["delta"], ExtendedReal::Finite(0.25));
    assert_eq!(r.results["m"], ExtendedReal::Finite(0.5));
    assert_eq!(r.results["M"], ExtendedReal::Finite(2.0));

    let zero = record("divergence --div tv --p 0.5,0.5 --q 0.5,0.5");
    assert_eq!(zero.results["divergence"], ExtendedReal::ZERO);

    let unbounded = record("divergence --div chi2 --p 0.5,0.5 --q 0.5,0.5");
    assert_eq!(unbounded.results["M"], ExtendedReal::Finite(1.0));
}

#[test]
fn extremal_pair() {
    let r = record("extremal --delta 0.25 --m 0.5 --M 2");
    let p: Vec<f64> = (0..3).map(|i| r.results[&format!("p[{i}]")].to_f64()).collect();
    let q: Vec<f64> = (0..3).map(|i| r.results[&format!("q[{i}]")].to_f64()).collect();
    for (a, b) in p.iter().zip([0.25, 0.5, 0.25]) {
        assert!((a - b).abs() < 1e-15);
    }
    for (a, b) in q.iter().zip([0.5, 0.25, 0.25]) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn verify_status() {
    let ok = record("verify --p 0.25,0.5,0.25 --q 0.5,0.25,0.25 --delta 0.25 --m 0.5 --M 2 --div kl");
    assert_eq!(ok.status.to_string(), "pass");
    assert!(ok.results["kl.gap"].to_f64().abs() < 1e-15);
    let bad = record("verify --p 0.25,0.5,0.25 --q 0.5,0.25,0.25 --delta 0.2 --m 0.5 --M 2");
    assert_eq!(bad.status.to_string(), "fail");
}

#[test]
fn fuzz_attains_chi2_bound() {
    let r = record("fuzz --div chi2 --delta 0.25 --m 0.5 --M 2 --trials 10000 --seed 7");
    assert!(r.results["gap"].to_f64() <= 1e-9);
    assert_eq!(r.results["violations"], ExtendedReal::ZERO);
    assert_eq!(r.status.to_string(), "pass");
}

#[test]
fn fuzz_rejects_renyi() {
    assert_eq!(
        code("fuzz --div renyi:2 --delta 0.25 --m 0.5 --M 2 --trials 10"),
        Some(3)
    );
}

#[test]
fn compare_table_dominates() {
    let out = revpinsker("compare --grid default --comparator simic");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("comparator,m,M,delta,new_bound,prior_bound,ratio"));
    let mut rows = 0;
    for line in lines {
        let ratio: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(ratio >= 1.0, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 20);
}

#[test]
fn compare_summary_as_json() {
    let r = record("compare --comparator all --format json");
    assert_eq!(r.status.to_string(), "pass");
    assert!(r.results["sason-chi2.min_ratio"].to_f64() >= 1.0);
    assert_eq!(r.results["verdu.rows"], ExtendedReal::Finite(75.0));
}

#[test]
fn format_changes_encoding_only() {
    let args = "divergence --div hellinger:3 --p 0.2,0.3,0.5 --q 0.4,0.4,0.2";
    let json = record(args);
    let out = revpinsker(&format!("{args} --format csv"));
    let csv = OutputRecord::from_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(csv.inputs, json.inputs);
    for (k, v) in &json.results {
        let c = csv.results[k].to_f64();
        assert!((c - v.to_f64()).abs() <= 1e-11 * v.to_f64().abs().max(1e-300), "{k}");
    }
}
