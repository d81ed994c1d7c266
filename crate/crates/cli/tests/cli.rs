//! End-to-end checks of the binary: one test per documented behavior,
//! exercised through real process invocations.

mod common;

use common::{parse_csv, run, run_ok, scratch_dir};
use serde_json::Value;

#[test]
fn spectrum_emits_increasing_levels_with_consistent_shift() {
    let csv = parse_csv(&run_ok(&["spectrum", "--alpha", "0.2"]));
    assert_eq!(csv.header, ["alpha", "n", "E_n", "e_n"]);
    assert_eq!(csv.rows.len(), 11);
    let e = csv.col("E_n");
    let s = csv.col("e_n");
    assert_eq!(csv.rows[0][s], 0.0);
    for w in csv.rows.windows(2) {
        assert!(w[1][e] > w[0][e], "E_n must increase");
    }
    for row in &csv.rows {
        assert!((row[s] - (row[e] - csv.rows[0][e])).abs() < 1e-12);
    }
}

#[test]
fn spectrum_recovers_undeformed_levels() {
    let csv = parse_csv(&run_ok(&["spectrum", "--alpha", "1e-10", "--n-max", "3"]));
    let e = csv.col("E_n");
    for (n, row) in csv.rows.iter().enumerate() {
        assert!((row[e] - (n as f64 + 0.5)).abs() < 1e-8, "row {n}: {row:?}");
    }
}

#[test]
fn spectrum_rejects_alpha_out_of_range() {
    let r = run(&["spectrum", "--alpha", "1.5"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("alpha"), "stderr: {}", r.stderr);
}

#[test]
fn mass_default_grid_starts_at_the_bare_mass() {
    let csv = parse_csv(&run_ok(&["mass", "--alpha", "0.2"]));
    assert_eq!(csv.rows.len(), 51);
    let (x, m) = (csv.col("x"), csv.col("m"));
    assert_eq!(csv.rows[0][x], 0.0);
    assert_eq!(csv.rows[0][m], 1.0);
    for w in csv.rows.windows(2) {
        assert!(w[1][m] < w[0][m], "m(x) must decrease on x > 0");
    }
}

#[test]
fn mass_honors_grid_override() {
    let csv = parse_csv(&run_ok(&["mass", "--alpha", "0.2", "--grid", "0:2:5"]));
    assert_eq!(csv.rows.len(), 5);
    let (x, m) = (csv.col("x"), csv.col("m"));
    assert_eq!(csv.rows[4][x], 2.0);
    for row in &csv.rows {
        let expect = 1.0 / (1.0 + 0.2 * row[x] * row[x]).powi(2);
        assert!((row[m] - expect).abs() < 1e-15);
    }
}

#[test]
fn pn_peak_flag_places_the_distribution_peak() {
    let csv = parse_csv(&run_ok(&["pn", "--alpha", "0.2", "--peak-at", "5"]));
    let p = csv.col("P_n");
    let argmax = csv
        .rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1[p].total_cmp(&b.1[p]))
        .map(|(i, _)| i)
        .unwrap();
    assert_eq!(argmax, 5);
    assert!((csv.footer_starting("sum_P") - 1.0).abs() < 1e-10);
    assert!(csv.footer_starting("J[") > 0.0);
}

#[test]
fn pn_zero_action_is_a_point_mass() {
    let csv = parse_csv(&run_ok(&["pn", "--alpha", "0.2", "--J", "0"]));
    assert_eq!(csv.rows.len(), 1);
    assert_eq!(csv.rows[0][csv.col("n")], 0.0);
    assert_eq!(csv.rows[0][csv.col("P_n")], 1.0);
    assert_eq!(csv.footer_starting("sum_P"), 1.0);
}

#[test]
fn pn_n_max_is_a_minimum_row_count() {
    let padded = parse_csv(&run_ok(&["pn", "--alpha", "0.2", "--J", "1", "--n-max", "40"]));
    assert_eq!(padded.rows.len(), 41);
    assert_eq!(padded.rows[40][padded.col("P_n")], 0.0);
    assert!((padded.footer_starting("sum_P") - 1.0).abs() < 1e-10);

    // A small n-max never truncates the emitted distribution.
    let full = parse_csv(&run_ok(&["pn", "--alpha", "0.2", "--J", "1", "--n-max", "2"]));
    assert!(full.rows.len() > 3, "tail-complete rows: {}", full.rows.len());
    assert!((full.footer_starting("sum_P") - 1.0).abs() < 1e-10);
}

#[test]
fn stats_grid_is_sub_poissonian_at_finite_deformation() {
    let csv = parse_csv(&run_ok(&["stats", "--alpha", "0.3", "--grid", "0.5:20:8"]));
    assert_eq!(csv.header, ["alpha", "J", "g2", "Q", "mean_N"]);
    assert_eq!(csv.rows.len(), 8);
    let (g, q) = (csv.col("g2"), csv.col("Q"));
    for row in &csv.rows {
        assert!(row[g] < 1.0, "g2 sub-Poissonian: {row:?}");
        assert!(row[q] < 0.0, "Q negative: {row:?}");
    }
}

#[test]
fn stats_reach_the_poisson_limit_near_zero_deformation() {
    let csv = parse_csv(&run_ok(&["stats", "--alpha", "1e-8", "--grid", "4:5:2"]));
    let (g, q) = (csv.col("g2"), csv.col("Q"));
    for row in &csv.rows {
        assert!((row[g] - 1.0).abs() < 1e-5, "{row:?}");
        assert!(row[q].abs() < 1e-5, "{row:?}");
    }
}

#[test]
fn weight_is_nonnegative_and_carries_a_unit_moment() {
    let csv = parse_csv(&run_ok(&["weight", "--alpha", "0.2", "--grid", "0:5:11"]));
    let w = csv.col("W");
    for row in &csv.rows {
        assert!(row[w] >= 0.0, "{row:?}");
    }
    assert!((csv.footer_starting("unity_moment_n0") - 1.0).abs() < 1e-6);
}

#[test]
fn weight_unsupported_order_is_a_numerics_error() {
    // Near-zero deformation pushes the Bessel order past the supported
    // recurrence length; this must surface as exit code 3, not a wrong answer.
    let r = run(&["weight", "--alpha", "1e-8", "--grid", "0.5:1:2"]);
    assert_eq!(r.code, 3, "stderr: {}", r.stderr);
    assert!(r.stderr.contains("order"), "stderr: {}", r.stderr);
}

#[test]
fn wigner_paper_kernel_reports_negativity() {
    let text = run_ok(&["wigner", "--alpha", "0.1", "--J", "1", "--grid", "-3:3:31"]);
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["schema_version"], "1");
    assert_eq!(doc["kernel"], "paper");
    assert_eq!(doc["npts"], 31);
    assert_eq!(doc["values"].as_array().unwrap().len(), 31 * 31);
    assert!(doc["min_value"].as_f64().unwrap() < 0.0);
    assert!(doc["negative_fraction"].as_f64().unwrap() > 0.0);
}

#[test]
fn wigner_vacuum_is_nonnegative() {
    let text = run_ok(&["wigner", "--alpha", "0.2", "--J", "0", "--grid", "-3:3:21"]);
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert!(doc["min_value"].as_f64().unwrap() >= 0.0);
    assert_eq!(doc["negative_fraction"].as_f64().unwrap(), 0.0);
}

#[test]
fn wigner_fock_kernel_integrates_to_one() {
    let text = run_ok(&[
        "wigner", "--alpha", "0.1", "--J", "1", "--kernel", "fock", "--grid", "-4.5:4.5:121",
    ]);
    let doc: Value = serde_json::from_str(&text).unwrap();
    let integral = doc["window_integral"].as_f64().unwrap();
    assert!((integral - 1.0).abs() <= 1e-3, "integral {integral}");
}

#[test]
fn wigner_rejects_asymmetric_windows() {
    let r = run(&["wigner", "--alpha", "0.2", "--grid", "-1:2:21"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("symmetric"), "stderr: {}", r.stderr);
}

#[test]
fn verify_fast_passes_with_a_full_report() {
    let r = run(&["verify"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let doc: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(doc["schema_version"], "1");
    assert_eq!(doc["level"], "fast");
    assert_eq!(doc["overall"], true);
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 15);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn verify_flags_a_corrupted_spectrum() {
    let r = run(&["verify", "--corrupt-spectrum", "3:0.001"]);
    assert_eq!(r.code, 1);
    let doc: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(doc["overall"], false);
    let failed: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["spectrum-consistency"]);
}

#[test]
fn verify_rejects_csv_format() {
    let r = run(&["verify", "--format", "csv"]);
    assert_eq!(r.code, 2);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = scratch_dir("config");
    let path = dir.join("cfg.json");
    std::fs::write(&path, r#"{"alpha": [0.5], "n_max": 3}"#).unwrap();
    let p = path.to_str().unwrap();

    let csv = parse_csv(&run_ok(&["spectrum", "--config", p]));
    assert_eq!(csv.rows.len(), 4);
    assert_eq!(csv.rows[0][0], 0.5);

    let csv = parse_csv(&run_ok(&["spectrum", "--config", p, "--alpha", "0.3"]));
    assert_eq!(csv.rows.len(), 4, "n_max still comes from the file");
    assert_eq!(csv.rows[0][0], 0.3, "the flag overrides the file alpha");
}

#[test]
fn config_rejects_unknown_keys() {
    let dir = scratch_dir("badconfig");
    let path = dir.join("cfg.json");
    std::fs::write(&path, r#"{"alhpa": 0.5}"#).unwrap();
    let r = run(&["spectrum", "--config", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("alhpa"), "stderr: {}", r.stderr);
}

#[test]
fn out_writes_the_document_and_a_plot_sidecar() {
    let dir = scratch_dir("out");
    let path = dir.join("mass.csv");
    let stdout = run_ok(&["mass", "--alpha", "0.2"]);
    run_ok(&["mass", "--alpha", "0.2", "--out", path.to_str().unwrap()]);
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout, "file and stdout bodies must match");

    let meta_path = dir.join("mass.csv.meta.json");
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(&meta_path).unwrap()).unwrap();
    assert_eq!(meta["command"], "mass");
    assert_eq!(meta["x_label"], "position x");
    let legend = meta["legend"].as_array().unwrap();
    assert_eq!(legend.len(), 1);
    assert!(legend[0].as_str().unwrap().starts_with("alpha = "));
}

#[test]
fn tables_render_as_json_on_request() {
    let text = run_ok(&["spectrum", "--alpha", "0.2", "--n-max", "2", "--format", "json"]);
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["schema_version"], "1");
    assert_eq!(doc["command"], "spectrum");
    assert_eq!(doc["columns"].as_array().unwrap().len(), 4);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
    assert_eq!(doc["rows"][0][1], 0);
}

#[test]
fn unknown_flags_are_usage_errors() {
    assert_eq!(run(&["spectrum", "--bogus"]).code, 2);
    assert_eq!(run(&["nosuchcommand"]).code, 2);
}
