use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("suptel").chain(args.iter().copied());
    let code = suptel::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = run(&full);
    let value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}{err}"));
    (code, value)
}

#[test]
fn verify_converges_for_n_two() {
    let (code, out, _) = run(&["verify", "--n", "2", "--beta", "1", "--M", "25,50,100", "--tol", "0.05"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: PASS"));
    assert!(out.contains("99/101"));
}

#[test]
fn verify_reports_failure_with_exit_one() {
    let (code, out, _) = run(&["verify", "--n", "1", "--beta", "1", "--M", "10", "--tol", "1/100"]);
    assert_eq!(code, 1);
    assert!(out.contains("verdict: FAIL"));
}

#[test]
fn verify_json_layout() {
    let (code, v) = run_json(&["verify", "--n", "1", "--beta", "1", "--M", "10,100"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["n"], 1);
    assert_eq!(v["beta"], "1");
    assert_eq!(v["rows"][1]["lhs"], "100/101");
    assert_eq!(v["rows"][1]["rhs"], "1");
    assert_eq!(v["rows"][1]["abs_err"], "1/101");
    assert_eq!(v["provenance"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["provenance"]["parameters"]["M"], serde_json::json!([10, 100]));
}

#[test]
fn pole_hit_names_the_boundary_index() {
    let (code, out, err) = run(&["verify", "--n", "1", "--beta", "-1/3", "--M", "10"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("i=3"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--n", "1", "--beta", "1/0", "--M", "10"]).0, 2);
    assert_eq!(run(&["verify", "--n", "1", "--beta", "one", "--M", "10"]).0, 2);
    assert_eq!(run(&["verify", "--n", "1", "--beta", "1", "--M", "10", "--bogus"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["verify", "--n", "3", "--beta", "1", "--M", "10"]).0, 2);
    assert_eq!(run(&["partition", "--beta", "1", "--x", "1", "--N", "3", "--M", "5"]).0, 2);
}

#[test]
fn help_and_version_succeed() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("residues"));
    assert_eq!(run(&["--version"]).0, 0);
}

#[test]
fn residue_table_vanishes_in_lemma_ranges() {
    let (code, v) = run_json(&["residues", "--n", "1", "--M", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "PASS");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    for row in rows {
        if row["reflection_lemma"] == true || row["gap_lemma"] == true {
            assert_eq!(row["residue"], "0");
        }
    }
}

#[test]
fn residue_pair_mode_picks_the_regime_radius() {
    let (code, v) = run_json(&["residues", "--subset", "1-2,4-6", "--q", "4", "--M", "12"]);
    assert_eq!(code, 0);
    let row = &v["rows"][0];
    assert_eq!(row["sign_flip"], true);
    assert_eq!(row["d"], 4);
    assert_eq!(row["set"], "1-2,4-6");
    assert!(row["reflected_intervals"]["intervals"].is_array());
}

#[test]
fn partition_species_and_product() {
    let (code, v) = run_json(&["partition", "--beta", "1", "--x", "1/2,1/3", "--N", "10", "--M", "40"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["rows"][0]["closed_form"]["value"], 2.0);
    assert!(v["product_truncated"].as_str().unwrap().contains('/'));
}

#[test]
fn zeta_tolerance_sets_the_verdict() {
    let (code, v) = run_json(&["zeta", "--beta", "2", "--primes", "200", "--tol", "1e-2"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "PASS");
    let (code, _) = run_json(&["zeta", "--beta", "2", "--primes", "5", "--tol", "1e-6"]);
    assert_eq!(code, 1);
    let (code, v) = run_json(&["zeta", "--beta", "2", "--primes", "5"]);
    assert_eq!(code, 0);
    assert!(v.get("verdict").is_none());
}

#[test]
fn sampling_is_deterministic_given_a_seed() {
    for extra in [&[][..], &["--N", "3"][..], &["--mcmc", "--steps", "2000"][..]] {
        let mut args = vec!["--json", "sample", "--beta", "1", "--x", "1/2", "--count", "20", "--seed", "42"];
        args.extend_from_slice(extra);
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.0, 0);
        assert_eq!(first.1, second.1, "{extra:?}");
        let v: Value = serde_json::from_str(&first.1).unwrap();
        assert_eq!(v["provenance"]["seed"], 42);
        assert_eq!(v["rows"].as_array().unwrap().len(), 20);
    }
}

#[test]
fn missing_seed_is_generated_and_echoed() {
    let (code, out, err) = run(&["--json", "sample", "--beta", "1", "--x", "1/2", "--count", "2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let seed = v["provenance"]["seed"].as_u64().unwrap();
    assert!(err.contains(&format!("seed: {seed}")));
}

#[test]
fn moments_exact_oracles_agree() {
    let (code, v) = run_json(&["moments", "--n", "3", "--beta", "2/3", "--oracle", "partition,binomial,xhat,loop", "--k", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["rhs"], "35/16");
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["match"], true, "{row}");
    }
}

#[test]
fn moments_monte_carlo_is_reproducible() {
    let args = ["moments", "--n", "1", "--beta", "2", "--mc", "xhat", "--samples", "2000", "--seed", "3", "--k-max", "64"];
    let (code, first) = run_json(&args);
    let (_, second) = run_json(&args);
    assert_eq!(first, second);
    let row = &first["rows"][0];
    assert!(row["value"]["stderr"].as_f64().unwrap() > 0.0);
    assert_eq!(row["k_max"], 64);
    assert!(code == 0 || code == 1);
}

#[test]
fn gf_coefficients_match_the_binomial() {
    let (code, v) = run_json(&["gf", "--beta", "1/3", "--N", "4"]);
    assert_eq!(code, 0);
    let coeffs: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["c_n"].as_str().unwrap()).collect();
    assert_eq!(coeffs, ["1", "3", "6", "10", "15"]);
}

#[test]
fn approx_flag_adds_decimals() {
    let (_, v) = run_json(&["gf", "--beta", "3", "--N", "2"]);
    assert_eq!(v["rows"][2]["c_n"], "2/9");
    let (_, v) = run_json(&["--approx", "gf", "--beta", "3", "--N", "2"]);
    assert_eq!(v["rows"][2]["c_n"]["exact"], "2/9");
    assert_eq!(v["rows"][2]["c_n"]["decimal"], "0.222222222222");
}

/// Every JSON float sits in an object that states its context.
fn floats_are_tagged(v: &Value, tagged: bool) -> bool {
    match v {
        Value::Number(n) => n.is_i64() || n.is_u64() || tagged,
        Value::Array(items) => items.iter().all(|x| floats_are_tagged(x, tagged)),
        Value::Object(map) => {
            let here = map.contains_key("context");
            map.values().all(|x| floats_are_tagged(x, here))
        }
        _ => true,
    }
}

#[test]
fn json_numbers_are_exact_or_tagged() {
    let cases: [&[&str]; 6] = [
        &["partition", "--beta", "1/2", "--x", "1/2,1/4", "--N", "8", "--M", "30"],
        &["zeta", "--beta", "3", "--primes", "20"],
        &["sample", "--beta", "1", "--x", "1/2", "--count", "3", "--seed", "1", "--mcmc"],
        &["moments", "--n", "1", "--beta", "1", "--mc", "szego", "--samples", "1000", "--seed", "1"],
        &["moments", "--n", "1", "--beta", "1", "--mc", "x", "--samples", "1000", "--seed", "1"],
        &["verify", "--n", "2", "--beta", "1/2", "--M", "10,20", "--tol", "3"],
    ];
    for args in cases {
        let (_, v) = run_json(args);
        assert!(floats_are_tagged(&v, false), "{args:?}: {v}");
    }
}

#[test]
fn csv_headers_are_fixed() {
    let cases: [(&[&str], &str); 5] = [
        (&["verify", "--n", "1", "--beta", "1", "--M", "10"], "M,lhs,rhs,abs_err,abs_err_decimal"),
        (&["residues", "--n", "1", "--M", "6"], "q,residue,reflection_lemma,gap_lemma"),
        (&["zeta", "--beta", "2", "--primes", "3"], "K,largest_prime,truncated,reference,gap"),
        (&["sample", "--beta", "1", "--x", "1/2", "--seed", "1"], "draw,subset,length,components"),
        (&["gf", "--beta", "1", "--N", "2"], "n,c_n,binomial,match"),
    ];
    for (args, header) in cases {
        let mut full = vec!["--format", "csv"];
        full.extend_from_slice(args);
        let (_, out, _) = run(&full);
        assert_eq!(out.lines().next().unwrap(), header);
    }
}

#[test]
fn binary_reads_the_format_from_the_environment() {
    let output = Command::new(env!("CARGO_BIN_EXE_suptel"))
        .args(["gf", "--beta", "1", "--N", "1"])
        .env("SUPTEL_FORMAT", "csv")
        .output()
        .unwrap();
    assert!(output.status.success());
    assert_eq!(String::from_utf8(output.stdout).unwrap(), "n,c_n,binomial,match\n0,1,1,true\n1,1,1,true\n");

    let output = Command::new(env!("CARGO_BIN_EXE_suptel"))
        .args(["verify", "--n", "1", "--beta", "-1/2", "--M", "4"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
