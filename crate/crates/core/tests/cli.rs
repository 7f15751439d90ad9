mod common;

use std::path::PathBuf;
use std::process::Command;

use common::{csv_rows, walklab};
use num_rational::BigRational;

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn ok(args: &[&str]) -> String {
    let run = walklab(args);
    assert_eq!(run.code, 0, "{args:?}: {}", run.stderr);
    run.stdout
}

fn parse_exact(s: &str) -> BigRational {
    s.parse().unwrap()
}

#[test]
fn golden_outputs_are_byte_stable() {
    let cases: &[(&[&str], &str)] = &[
        (&["table", "--id", "1"], "table1.csv"),
        (&["table", "--id", "2"], "table2.csv"),
        (&["table", "--id", "3"], "table3.csv"),
        (&["table", "--id", "4"], "table4.csv"),
        (&["--format", "json", "table", "--id", "4"], "table4.json"),
        (&["figure", "--id", "5"], "figure5.csv"),
        (&["figure", "--id", "8", "--a-max", "10"], "figure8.csv"),
        (&["law", "lead-time", "--n", "10"], "law_lead_time.csv"),
        (&["law", "ruin", "--a", "5", "--b", "3", "--p", "1/2"], "law_ruin.csv"),
    ];
    for (args, file) in cases {
        assert_eq!(ok(args), golden(file), "{args:?}");
    }
}

#[test]
fn table1_matches_enumeration() {
    let half = common::rat(1, 2);
    for (k, row) in csv_rows(&golden("table1.csv")).iter().enumerate() {
        let k = k as u32;
        let want = common::prob(20, &half, |s| common::positive_time(s) == 2 * k as usize);
        assert_eq!(parse_exact(&row[1]), want, "k={k}");
    }
}

#[test]
fn decimal_column_is_half_even_rounding_of_exact() {
    for file in ["table1.csv", "table2.csv", "law_lead_time.csv", "law_ruin.csv"] {
        for row in csv_rows(&golden(file)) {
            assert_eq!(row[2], common::round_half_even(&parse_exact(&row[1]), 6), "{file}: {row:?}");
        }
    }
    let out = ok(&["--precision", "3", "table", "--id", "2"]);
    for row in csv_rows(&out) {
        assert_eq!(row[2], common::round_half_even(&parse_exact(&row[1]), 3));
    }
}

#[test]
fn ruin_law_matches_oracle() {
    let rows = csv_rows(&ok(&["law", "ruin", "--a", "4", "--b", "6", "--p", "3/5"]));
    let (win, duration) = common::ruin_oracle(4, 6, &common::rat(3, 5), 0);
    assert_eq!(parse_exact(&rows[0][1]), win);
    assert_eq!(parse_exact(&rows[2][1]), duration);
}

#[test]
fn figure_examples() {
    let fig5 = csv_rows(&ok(&["figure", "--id", "5"]));
    assert_eq!(fig5[3], ["3", "0.408035", "0.369010"]);

    let fig7 = csv_rows(&ok(&["figure", "--id", "7", "--a", "3"]));
    let at_one = fig7.iter().find(|r| r[1] == "1.000000").unwrap();
    assert_eq!(&at_one[2..], ["0.500000", "0.500000"]);

    let fig9 = csv_rows(&ok(&["figure", "--id", "9", "--a", "2"]));
    let max = fig9.iter().map(|r| r[2].parse::<f64>().unwrap()).fold(f64::MIN, f64::max);
    assert_eq!(max, 4.0);
}

#[test]
fn simulate_unit_barriers_last_one_step() {
    let rows = csv_rows(&ok(&["simulate", "ruin", "--a", "1", "--b", "1", "--trials", "1000"]));
    let duration = rows.iter().find(|r| r[0] == "duration").unwrap();
    assert_eq!(duration[1], "1.000000");
    assert_eq!(duration[2], "0.000000");
}

#[test]
fn exit_codes() {
    assert_eq!(walklab(&["table", "--id", "9"]).code, 2);
    assert_eq!(walklab(&["law", "u2n", "--n", "3", "--p", "0.5"]).code, 2);
    assert_eq!(walklab(&["law", "lead-time", "--n", "3", "--p", "1/3"]).code, 3);
    assert_eq!(walklab(&["verify", "--only", "ballot"]).code, 0);
    let broken = walklab(&["verify", "--only", "ruin", "--inject-fault", "win-plus-ruin"]);
    assert_eq!(broken.code, 1, "{}", broken.stderr);
    assert!(broken.stdout.contains("win-plus-ruin,fail,"));
    let capped = walklab(&["simulate", "ruin", "--a", "50", "--b", "50", "--p", "1/2", "--trials", "200", "--step-cap", "10"]);
    assert_eq!(capped.code, 4, "{}", capped.stderr);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t1.csv");
    let run = walklab(&["--out", path.to_str().unwrap(), "table", "--id", "1"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden("table1.csv"));
}

fn seeded(env_seed: Option<&str>, config: Option<&std::path::Path>, extra: &[&str]) -> String {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_walklab"));
    cmd.env_remove("WALKLAB_SEED").env_remove("WALKLAB_CONFIG");
    if let Some(s) = env_seed {
        cmd.env("WALKLAB_SEED", s);
    }
    if let Some(c) = config {
        cmd.env("WALKLAB_CONFIG", c);
    }
    cmd.args(["simulate", "ruin", "--a", "3", "--b", "3", "--p", "45/100", "--trials", "500"]).args(extra);
    let out = cmd.output().unwrap();
    assert!(out.status.success());
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("walklab.conf");
    std::fs::write(&config, "# defaults\nseed = 11\nprecision = 4\n").unwrap();

    let default = seeded(None, None, &[]);
    assert_eq!(default, seeded(None, None, &["--seed", "42"]));
    let from_config = seeded(None, Some(&config), &[]);
    assert!(from_config.lines().nth(1).unwrap().contains(",0.") && !from_config.contains("0.000000"));
    assert_eq!(from_config, seeded(None, None, &["--seed", "11", "--precision", "4"]));
    let from_env = seeded(Some("12"), Some(&config), &[]);
    assert_eq!(from_env, seeded(None, None, &["--seed", "12", "--precision", "4"]));
    assert_eq!(seeded(Some("12"), Some(&config), &["--seed", "13"]), seeded(None, None, &["--seed", "13", "--precision", "4"]));
    assert_ne!(seeded(None, None, &["--seed", "12"]), seeded(None, None, &["--seed", "13"]));
}

#[test]
fn json_recurrence_report() {
    let out = ok(&["--format", "json", "recurrence", "--dim", "3", "--terms", "200"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.is_object(), "{out}");
}
