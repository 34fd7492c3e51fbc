//! End-to-end behavior of the binary: exit codes, config precedence, file
//! schemas, and the library-passthrough contract of the figure commands.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn flyover(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flyover"))
        .current_dir(dir)
        .env_remove("FLYOVER_MATERIALS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn flyover_ok(dir: &Path, args: &[&str]) -> String {
    let out = flyover(dir, args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn gamma_csv_matches_library_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    flyover_ok(dir.path(), &["gamma", "--x-max", "4", "--count", "200"]);
    let text = fs::read_to_string(dir.path().join("gamma.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,gamma"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 200);
    let last: Vec<&str> = rows.last().unwrap().split(',').collect();
    let x: f64 = last[0].parse().unwrap();
    let g: f64 = last[1].parse().unwrap();
    assert_eq!(x, 4.0);
    let library = flyover::gamma_geometry(4.0).unwrap();
    assert_eq!(g.to_bits(), library.to_bits(), "{g:e} vs {library:e}");
}

#[test]
fn lambda_reproduces_energy_ordering() {
    let dir = tempfile::tempdir().unwrap();
    flyover_ok(
        dir.path(),
        &[
            "lambda",
            "--metal",
            "Au",
            "--d-over-z0",
            "0.02:0.3:25",
            "--energies",
            "150eV,1keV,3keV",
        ],
    );
    let text = fs::read_to_string(dir.path().join("lambda.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("d_over_z0,lambda_inv_150eV,lambda_inv_1keV,lambda_inv_3keV")
    );
    let mut previous_ratio = -1.0;
    let mut count = 0;
    for line in lines {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells.len(), 4);
        assert!(cells[0] > previous_ratio);
        previous_ratio = cells[0];
        // 150 eV curve highest, 3 keV lowest, at every sampled ratio
        assert!(cells[1] > cells[2] && cells[2] > cells[3], "{line}");
        count += 1;
    }
    assert_eq!(count, 25);
}

#[test]
fn unknown_metal_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = flyover(dir.path(), &["lambda", "--metal", "Unobtainium"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Unobtainium"));
    assert!(!dir.path().join("lambda.csv").exists());
}

#[test]
fn bad_config_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.cfg"), "plate_cm = banana\n").unwrap();
    let out = flyover(dir.path(), &["--config", "bad.cfg", "gamma"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn convergence_failure_exits_3_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = flyover(
        dir.path(),
        &[
            "--rel-tol",
            "1e-300",
            "--abs-tol",
            "1e-300",
            "gamma",
            "--count",
            "3",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.path().join("gamma.csv").exists());
}

#[test]
fn config_file_applies_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), "metal = Cu\nenergy_ev = 1000\n").unwrap();
    let shown = flyover_ok(dir.path(), &["--config", "run.cfg", "--show-config"]);
    assert!(shown.contains("metal = Cu"));
    assert!(shown.contains("energy_ev = 1000"));
    let shown = flyover_ok(
        dir.path(),
        &["--config", "run.cfg", "--metal", "Na", "--show-config"],
    );
    assert!(shown.contains("metal = Na"), "flag must beat config file");
    assert!(shown.contains("energy_ev = 1000"));
}

#[test]
fn materials_env_override_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("custom.csv");
    fs::write(&table, "name,k_F,k_TF,epsilon_i\nXx,1.0e10,1.5e10,2.0\n").unwrap();
    // via env var
    let out = Command::new(env!("CARGO_BIN_EXE_flyover"))
        .current_dir(dir.path())
        .env("FLYOVER_MATERIALS", &table)
        .args(["materials"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("Xx") && !stdout.contains("Au"));
    // the flag beats the env var
    let bundledish = dir.path().join("other.csv");
    fs::write(
        &bundledish,
        "name,k_F,k_TF,epsilon_i\nYy,1.0e10,1.5e10,2.0\n",
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_flyover"))
        .current_dir(dir.path())
        .env("FLYOVER_MATERIALS", &table)
        .args(["--materials", "other.csv", "materials"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("Yy"));
    // malformed table is a config error
    fs::write(&table, "name,k_F,k_TF,epsilon_i\nXx,-1.0e10,1.5e10,2.0\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_flyover"))
        .current_dir(dir.path())
        .env("FLYOVER_MATERIALS", &table)
        .args(["materials"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn materials_listing_and_reemission() {
    let dir = tempfile::tempdir().unwrap();
    let listing = flyover_ok(dir.path(), &["materials", "--out", "table.csv"]);
    for name in ["Au", "Ag", "Cu", "Al", "Na"] {
        assert!(listing.contains(name), "missing {name}");
    }
    // the re-emitted table can be fed straight back in
    let out = flyover(
        dir.path(),
        &[
            "--materials",
            "table.csv",
            "audit",
            "--out",
            "roundtrip.json",
        ],
    );
    assert!(out.status.success());
    assert!(dir.path().join("roundtrip.json").exists());
}

#[test]
fn fringe_map_files_have_the_documented_shape() {
    let dir = tempfile::tempdir().unwrap();
    flyover_ok(
        dir.path(),
        &[
            "fringes",
            "--z0-um",
            "100:1000:10",
            "--fringe-count",
            "2",
            "--samples-per-fringe",
            "10",
        ],
    );
    let csv = fs::read_to_string(dir.path().join("fringes.csv")).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("z0_m,"));
    assert_eq!(header.split(',').count(), 1 + 41);
    assert_eq!(lines.count(), 10);
    let pgm = fs::read_to_string(dir.path().join("fringes.pgm")).unwrap();
    let mut lines = pgm.lines();
    assert_eq!(lines.next(), Some("P2"));
    assert_eq!(lines.next(), Some("41 10"));
    assert_eq!(lines.next(), Some("255"));
    // fade-out: the top row (largest z0) must swing wider than the bottom
    let rows: Vec<Vec<i32>> = lines
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect();
    let swing = |row: &Vec<i32>| row.iter().max().unwrap() - row.iter().min().unwrap();
    assert!(swing(&rows[0]) > swing(&rows[9]));
}

#[test]
fn audit_json_has_the_documented_fields() {
    let dir = tempfile::tempdir().unwrap();
    flyover_ok(dir.path(), &["audit"]);
    let text = fs::read_to_string(dir.path().join("audit.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in [
        "inputs",
        "route_values",
        "ratios",
        "dimensional_checks",
        "warnings",
    ] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["canonical_route"], "canonical");
    assert_eq!(json["dimensional_checks"][1]["consistent"], false);
}

#[test]
fn spectral_exact_method_available() {
    let dir = tempfile::tempdir().unwrap();
    flyover_ok(
        dir.path(),
        &[
            "spectral", "--q", "50:100:2", "--omega", "0.5:1:2", "--method", "exact",
        ],
    );
    let text = fs::read_to_string(dir.path().join("spectral.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 4);
    let out = flyover(
        dir.path(),
        &[
            "spectral", "--method", "bogus", "--q", "1:2:2", "--omega", "1:2:2",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_command_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = flyover(dir.path(), &[]);
    assert_eq!(out.status.code(), Some(2));
}
