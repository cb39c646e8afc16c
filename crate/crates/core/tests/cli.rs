use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nuqrt::sweep::{parse_config, ConfigError, ConfigInputs, Spacing, SweepConfig, CSV_COLUMNS, CSV_SCHEMA};
use nuqrt::{Flavor, LoeUnit};

fn nuqrt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nuqrt"))
        .args(args)
        .env_remove("NU_QRT_PARAMS")
        .output()
        .unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn flags(pairs: &[(&str, &str)]) -> ConfigInputs {
    ConfigInputs {
        flags: pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        ..Default::default()
    }
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn defaults_per_flavor() {
    let e = parse_config(&ConfigInputs::default()).unwrap();
    assert_eq!(e, SweepConfig::defaults_for(Flavor::E));
    assert_eq!((e.loe_min, e.loe_max, e.points), (0.0, 40.0, 400));
    assert_eq!((e.units, e.spacing), (LoeUnit::KmPerMeV, Spacing::Linear));

    let mu = parse_config(&flags(&[("flavor", "mu")])).unwrap();
    assert_eq!((mu.loe_min, mu.loe_max, mu.points), (10.0, 1000.0, 500));
    assert_eq!((mu.units, mu.spacing), (LoeUnit::KmPerGeV, Spacing::Log));
}

#[test]
fn flags_beat_config_file_beat_params_file() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "params.cfg", "theta12 = 30\ntheta23 = 40\ntheta13 = 9\n");
    let config = write(dir.path(), "sweep.cfg", "# comment\ntheta23 = 45\ntheta13 = 8\npoints = 50\n");
    let inputs = ConfigInputs {
        flags: vec![("theta13".into(), "7.5".into())],
        config_file: Some(config),
        params_file: Some(params),
    };
    let c = parse_config(&inputs).unwrap();
    assert_eq!(c.params.theta12, 30.0);
    assert_eq!(c.params.theta23, 45.0);
    assert_eq!(c.params.theta13, 7.5);
    assert_eq!(c.points, 50);
}

#[test]
fn unknown_keys_rejected_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.cfg", "theta12 = 30\nthetta13 = 8\n");
    let err = parse_config(&ConfigInputs {
        config_file: Some(cfg),
        ..Default::default()
    })
    .unwrap_err();
    match err {
        ConfigError::UnknownKey { key } => assert!(key.contains("thetta13") && key.contains(":2")),
        other => panic!("unexpected {other:?}"),
    }

    // Sweep keys are not parameters.
    let params = write(dir.path(), "p.cfg", "points = 10\n");
    assert!(matches!(
        parse_config(&ConfigInputs {
            params_file: Some(params),
            ..Default::default()
        }),
        Err(ConfigError::UnknownKey { .. })
    ));
}

#[test]
fn malformed_numbers_name_their_source() {
    let err = parse_config(&flags(&[("theta12", "thirty")])).unwrap_err();
    assert!(err.to_string().contains("--theta12"), "{err}");
    let err = parse_config(&flags(&[("points", "1.5")])).unwrap_err();
    assert!(err.to_string().contains("--points"), "{err}");
    let err = parse_config(&flags(&[("loe_max", "nan")])).unwrap_err();
    assert!(err.to_string().contains("--loe-max"), "{err}");
}

#[test]
fn physical_ranges_enforced() {
    for (k, v) in [
        ("theta12", "91"),
        ("theta13", "-1"),
        ("delta_cp", "360"),
        ("points", "1"),
        ("flavor", "tau"),
        ("dm32_sq", "1e-3"),
    ] {
        assert!(parse_config(&flags(&[(k, v)])).is_err(), "{k} = {v} accepted");
    }
    // Log spacing cannot start at zero.
    assert!(parse_config(&flags(&[("spacing", "log"), ("loe_min", "0")])).is_err());
    assert!(parse_config(&flags(&[("loe_min", "30"), ("loe_max", "20")])).is_err());
}

#[test]
fn binary_sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = nuqrt(&["sweep", "--flavor", "mu", "--output", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let bytes = fs::read(&a).unwrap();
    assert_eq!(bytes, fs::read(&b).unwrap());

    let text = String::from_utf8(bytes).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_SCHEMA));
    assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 500);
    assert!(rows.iter().all(|r| r.split(',').count() == CSV_COLUMNS.len()));
    assert!(rows[0].starts_with("1.00000000000e1,mu,"));
}

#[test]
fn binary_sweep_to_stdout() {
    let out = nuqrt(&["sweep", "--points", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().nth(2).unwrap().starts_with("0.00000000000e0,e,"));
}

#[test]
fn binary_exit_codes() {
    let out = nuqrt(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok: 400 points"));

    let out = nuqrt(&["verify", "--flavor", "mu"]);
    assert_eq!(out.status.code(), Some(0));

    let out = nuqrt(&["sweep", "--theta12", "abc"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--theta12"));

    let out = nuqrt(&["verify", "--dm32-sq", "1e-3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dm32_sq"));

    let out = nuqrt(&["sweep", "--output", "/nonexistent-dir/x.csv", "--points", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn binary_reads_params_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "p.cfg", "theta12 = 30\ndelta_cp = 90\n");
    let out = Command::new(env!("CARGO_BIN_EXE_nuqrt"))
        .args(["params", "--theta13", "8"])
        .env("NU_QRT_PARAMS", &params)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("theta12 = 30"), "{text}");
    assert!(text.contains("delta_cp = 90"));
    assert!(text.contains("theta13 = 8"));

    // A CP-violating run still satisfies every check.
    let out = Command::new(env!("CARGO_BIN_EXE_nuqrt"))
        .args(["verify", "--points", "100"])
        .env("NU_QRT_PARAMS", &params)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn params_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = nuqrt(&["params", "--alpha1", "12.5"]);
    let path = write(dir.path(), "p.cfg", &String::from_utf8(out.stdout).unwrap());
    let c = parse_config(&ConfigInputs {
        params_file: Some(path),
        ..Default::default()
    })
    .unwrap();
    assert_eq!(c.params.alpha1, 12.5);
    assert_eq!(c.params.theta12, 33.48);
}
