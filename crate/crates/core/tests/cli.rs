//! End-to-end tests of the `shellgame` binary: subcommands, exit codes, and
//! the files they leave behind.

use std::path::Path;
use std::process::{Command, Output};

use shellgame::harness::csv::parse_trace_csv;
use shellgame::world::ButtonId;

fn shellgame(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shellgame"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

#[test]
fn run_writes_trace_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = shellgame(
        &[
            "run",
            "--policy",
            "ethical",
            "--human-choice",
            "incorrect",
            "--seed",
            "1",
            "--out",
            "d",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace = dir.path().join("d/trace_ethical-incorrect-r0.csv");
    let summary = dir.path().join("d/summary.csv");
    assert!(trace.exists());
    assert!(summary.exists());
    let rows = parse_trace_csv(&std::fs::read_to_string(trace).unwrap()).unwrap();
    assert!(!rows.is_empty());
    assert_eq!(rows[0].0, "ethical-incorrect-r0");
    let summary_text = std::fs::read_to_string(summary).unwrap();
    assert!(summary_text.lines().count() == 2);
    assert!(summary_text.contains("ethical,incorrect,0,L,"));
}

#[test]
fn grid_produces_full_file_set() {
    let dir = tempfile::tempdir().unwrap();
    let out = shellgame(
        &["grid", "--replications", "3", "--out", "d", "--svg"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let entries: Vec<String> = std::fs::read_dir(dir.path().join("d"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert_eq!(
        entries.iter().filter(|n| n.starts_with("trace_")).count(),
        18
    );
    assert_eq!(entries.iter().filter(|n| n.ends_with(".svg")).count(), 6);
    assert!(entries.contains(&"summary.csv".to_string()));
}

#[test]
fn unknown_policy_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = shellgame(&["run", "--policy", "friendly"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("--policy"), "{stderr}");
    assert!(stderr.contains("possible values"), "{stderr}");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = shellgame(&["run", "--policy", "ethical", "--bogus"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Usage"), "{stderr}");
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = shellgame(&[], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn competitive_is_accepted_as_policy_alias() {
    let dir = tempfile::tempdir().unwrap();
    let out = shellgame(
        &["run", "--policy", "competitive", "--human-choice", "correct", "--out", "d"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(dir.path().join("d/trace_egoistic-correct-r0.csv").exists());
}

#[test]
fn plot_renders_stored_traces() {
    let dir = tempfile::tempdir().unwrap();
    let run = shellgame(
        &[
            "run",
            "--policy",
            "aggressive",
            "--human-choice",
            "correct",
            "--out",
            "d",
        ],
        dir.path(),
    );
    assert!(run.status.success());
    let plot = shellgame(
        &["plot", "d/trace_aggressive-correct-r0.csv", "--out", "d"],
        dir.path(),
    );
    assert!(plot.status.success(), "{}", String::from_utf8_lossy(&plot.stderr));
    let svg = std::fs::read_to_string(dir.path().join("d/plot.svg")).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn plot_missing_file_fails_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let out = shellgame(&["plot", "nope.csv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("nope.csv"), "{stderr}");
}

#[test]
fn eval_prints_five_scores_and_enforcement() {
    let dir = tempfile::tempdir().unwrap();
    let out = shellgame(
        &[
            "eval",
            "--policy",
            "aggressive",
            "--correct",
            "L",
            "--human-vel",
            "0,0.15",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    for token in ["a1 do_nothing", "a2 go_to_l", "a3 go_to_r", "a4 point_l", "a5 point_r"] {
        assert!(stdout.contains(token), "missing {token} in:\n{stdout}");
    }
    assert!(stdout.contains("enforcement:"), "{stdout}");
}

#[test]
fn config_file_overrides_are_applied() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("exp.cfg"),
        "# flipped payout\ncorrect_button = R\n",
    )
    .unwrap();
    let out = shellgame(
        &[
            "run",
            "--policy",
            "egoistic",
            "--human-choice",
            "incorrect",
            "--config",
            "exp.cfg",
            "--out",
            "d",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // With R correct, the incorrect choice resolves to L and the egoistic
    // assistant presses R.
    let summary = std::fs::read_to_string(dir.path().join("d/summary.csv")).unwrap();
    assert!(summary.contains("egoistic,incorrect,0,L,R,-1,1,"), "{summary}");
}

#[test]
fn bad_config_file_fails_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "gravity = 9.8\n").unwrap();
    let out = shellgame(
        &["run", "--policy", "ethical", "--config", "bad.cfg"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gravity"));
}

/// Replaying press logic offline over the written traces must reproduce the
/// summary scores exactly.
#[test]
fn summary_scores_match_offline_trace_replay() {
    let dir = tempfile::tempdir().unwrap();
    let out = shellgame(
        &["grid", "--replications", "1", "--seed", "3", "--out", "d"],
        dir.path(),
    );
    assert!(out.status.success());
    let summary = std::fs::read_to_string(dir.path().join("d/summary.csv")).unwrap();

    let arena = shellgame::world::ArenaSpec::default();
    let correct = ButtonId::L;
    for line in summary.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let (policy, choice) = (fields[0], fields[1]);
        let trace_path = dir
            .path()
            .join(format!("d/trace_{policy}-{choice}-r0.csv"));
        let rows = parse_trace_csv(&std::fs::read_to_string(trace_path).unwrap()).unwrap();

        let mut replayed = [0i32; 2];
        let mut pressed = [false; 2];
        for (_, record) in &rows {
            for (slot, pos) in [(0, record.human_pos), (1, record.assistant_pos)] {
                if pressed[slot] {
                    continue;
                }
                for button in [ButtonId::L, ButtonId::R] {
                    if pos.distance(arena.button_pos(button)) <= arena.press_radius {
                        replayed[slot] += if button == correct { 1 } else { -1 };
                        pressed[slot] = true;
                        break;
                    }
                }
            }
        }
        let human_score: i32 = fields[5].parse().unwrap();
        let assistant_score: i32 = fields[6].parse().unwrap();
        assert_eq!(replayed[0], human_score, "{line}");
        assert_eq!(replayed[1], assistant_score, "{line}");
    }
}
