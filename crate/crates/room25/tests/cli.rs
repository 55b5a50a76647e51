//! Runs the binary and byte-compares `--format lines` output against golden
//! files. `UPDATE_GOLDEN=1` rewrites them.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn room25(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_room25"))
        .args(args)
        .current_dir(root())
        .env_remove("ROOM25_SEED")
        .output()
        .expect("binary runs")
}

fn golden(name: &str, args: &[&str], code: i32) {
    let out = room25(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{args:?}\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&want),
        "{name}"
    );
}

#[test]
fn replay_fast_opening() {
    golden(
        "replay_veloce1.txt",
        &[
            "replay",
            "--board",
            "fixtures/veloce.board",
            "--script",
            "fixtures/veloce1.s",
            "--characters",
            "1",
            "--format",
            "lines",
        ],
        0,
    );
}

#[test]
fn replay_text_reports_the_win() {
    let out = room25(&[
        "replay",
        "--board",
        "fixtures/veloce.board",
        "--script",
        "fixtures/veloce1.s",
        "--characters",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).ends_with("Won at turn 2 with 0 death(s)\n"));
}

#[test]
fn replay_bold_opening_needs_the_variant() {
    let base = [
        "replay",
        "--board",
        "fixtures/temeraire.board",
        "--script",
        "fixtures/temeraire.s",
        "-n",
        "6",
        "--format",
        "lines",
    ];
    golden("replay_temeraire_default.txt", &base, 1);
    let mut with = base.to_vec();
    with.extend([
        "--variant",
        "push-from-start",
        "--programs",
        "fixtures/temeraire.prog",
    ]);
    golden("replay_temeraire_variant.txt", &with, 0);
}

#[test]
fn exact_probabilities() {
    let out = room25(&["prob", "exact", "--event", "v-lucky"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "17/230 ≈ 0.073913\n");
    for (event, want) in [
        ("v-no-pivot", "13/115"),
        ("v-lucky-no-dark", "67/1012"),
        ("v-loss", "18/1265"),
        ("t-lucky", "1/276"),
        ("t-survival", "95/138"),
        ("t-loss", "43/138"),
    ] {
        let out = room25(&[
            "prob",
            "exact",
            "--event",
            event,
            "--roster",
            "fixtures/solo.roster",
            "--oracle",
            "--format",
            "lines",
        ]);
        let text = String::from_utf8_lossy(&out.stdout);
        let first = text.lines().next().unwrap();
        assert_eq!(first.split('\t').nth(2), Some(want), "{event}");
        if event != "v-no-pivot" {
            assert!(text.contains("\ttrue"), "{event}: {text}");
        }
    }
}

#[test]
fn monte_carlo_is_seeded() {
    let args = [
        "prob",
        "mc",
        "--opening",
        "veloce",
        "--trials",
        "20000",
        "--seed",
        "7",
        "--format",
        "lines",
    ];
    golden("mc_veloce_seed7.txt", &args, 0);
    let mut jobs = args.to_vec();
    jobs.extend(["--jobs", "3"]);
    golden("mc_veloce_seed7.txt", &jobs, 0);
    let env = Command::new(env!("CARGO_BIN_EXE_room25"))
        .args(&args[..6])
        .args(["--format", "lines"])
        .env("ROOM25_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(env.stdout, room25(&args).stdout);
}

#[test]
fn parse_reports_positions() {
    let out = room25(&["parse", "-e", "1Q[0;0]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("<expr>:1:2:"));
    let out = room25(&["parse", "-e", "1: 1D[1;0] | 2D[0;3]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains(":1:19:"),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    golden(
        "parse_temeraire_uncorrected.txt",
        &["parse", "fixtures/temeraire_uncorrected.s", "--format", "lines"],
        0,
    );
}

#[test]
fn verify_claims() {
    golden(
        "verify_one_turn_n2.txt",
        &["verify", "one-turn", "-n", "2", "--format", "lines"],
        0,
    );
    golden(
        "verify_one_turn_n2.txt",
        &[
            "verify", "one-turn", "-n", "2", "--jobs", "3", "--format", "lines",
        ],
        0,
    );
    golden(
        "verify_antagonistic_t3.txt",
        &[
            "verify",
            "antagonistic",
            "--horizon",
            "3",
            "-n",
            "1",
            "--format",
            "lines",
        ],
        0,
    );
    golden(
        "verify_partial_push_from_start.txt",
        &[
            "verify",
            "partial",
            "-n",
            "2",
            "--variant",
            "push-from-start",
            "--jobs",
            "1",
            "--format",
            "lines",
        ],
        1,
    );
    let out = room25(&["verify", "partial", "-n", "3", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn emit_openings() {
    golden(
        "emit_veloce6.txt",
        &[
            "openings",
            "emit",
            "--opening",
            "veloce",
            "-n",
            "6",
            "--frame",
            "id",
            "--format",
            "lines",
        ],
        0,
    );
    golden(
        "emit_temeraire_r90.txt",
        &[
            "openings",
            "emit",
            "--opening",
            "temeraire",
            "-n",
            "6",
            "--frame",
            "r90",
            "--format",
            "lines",
        ],
        0,
    );
}

#[test]
fn usage_errors() {
    assert_eq!(
        room25(&["replay", "--board", "fixtures/veloce.board"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        room25(&["openings", "emit", "--opening", "temeraire", "-n", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        room25(&[
            "replay",
            "--board",
            "missing.board",
            "--script",
            "fixtures/veloce1.s",
            "-n",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        room25(&["prob", "mc", "--trials", "0"]).status.code(),
        Some(2)
    );
}
