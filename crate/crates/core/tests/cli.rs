use std::path::PathBuf;
use std::process::Command as Process;

use nrmsym::cli::{parse_spec, parse_spec_str, parse_word, run_command, Command, CliError, Report};
use nrmsym::molecules::phosphorus_pentafluoride;

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

fn binary() -> Process {
    Process::new(env!("CARGO_BIN_EXE_nrmsym"))
}

const ALL: [Command; 5] = [Command::Group, Command::Split, Command::Spectrum, Command::Weights, Command::Verify];

#[test]
fn words_parse_with_one_based_slots() {
    let frame = phosphorus_pentafluoride().frame;
    let w = parse_word("(1 2 3)", &frame).unwrap();
    assert_eq!(w.image(), &[1, 2, 0, 3, 4, 5]);
    assert!(!w.star());
    let t = parse_word("(1 2)*", &frame).unwrap();
    assert_eq!(t.image(), &[1, 0, 2, 3, 4, 5]);
    assert!(t.star());
    assert!(parse_word("E", &frame).unwrap().is_identity());
    assert!(parse_word("()*", &frame).unwrap().star());
    assert_eq!(parse_word("(1,4)(2,5)*", &frame).unwrap().to_string(), "(1 4)(2 5)*");
    for bad in ["(1 6)", "(1 7)", "(1 2", "1 2", "(1 2)(2 3)", "(0 1)"] {
        assert!(matches!(parse_word(bad, &frame), Err(CliError::Validation(_))), "{bad}");
    }
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_spec_str("{\n  \"schema\": \"nrmsym-spec/1\",\n  \"frame\": [}\n").unwrap_err();
    match err {
        CliError::Parse { line, column, .. } => assert_eq!((line, column), (3, 13)),
        other => panic!("{other:?}"),
    }
    let err = parse_spec_str(r#"{"schema": "other/9", "frame": {"classes": [{"label": "H", "count": 1, "spin": 0.5}]}}"#)
        .unwrap_err();
    assert!(matches!(err, CliError::Validation(_)));
    let err = parse_spec_str(r#"{"schema": "nrmsym-spec/1", "frame": {"classes": [{"label": "H", "count": 2, "spin": "1/3"}]}}"#)
        .unwrap_err();
    assert!(matches!(err, CliError::Validation(_)));
}

#[test]
fn reports_round_trip_through_json() {
    for name in ["nh3.json", "nh3_e.json", "h3_rotor.json"] {
        let job = parse_spec(&spec(name)).unwrap();
        for command in ALL {
            let report = run_command(command, &job).unwrap();
            let text = serde_json::to_string_pretty(&report).unwrap();
            let back: Report = serde_json::from_str(&text).unwrap();
            assert_eq!(back, report, "{name} {}", command.name());
            assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
        }
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for command in ["spectrum", "verify"] {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let json = dir.path().join(format!("{command}{k}.json"));
            let out = binary()
                .args([command, "--spec"])
                .arg(spec("nh3_e.json"))
                .arg("--json")
                .arg(&json)
                .output()
                .unwrap();
            assert!(out.status.success());
            outputs.push((out.stdout, std::fs::read(&json).unwrap()));
        }
        assert_eq!(outputs[0], outputs[1]);
    }
}

#[test]
fn pf5_group_report() {
    let out = binary().args(["group", "--spec"]).arg(spec("pf5.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("|R| = 12  |Q| = 240  |P| = 240"));
    assert!(text.contains("R in Q = 20"));
    let job = parse_spec(&spec("pf5.json")).unwrap();
    let Report { result: nrmsym::cli::ReportBody::Group(g), .. } = run_command(Command::Group, &job).unwrap() else {
        panic!()
    };
    assert_eq!(g.bounds[0].required_order, 1600);
    assert!(g.bounds[0].exceeds_p);
}

#[test]
fn ammonia_split_and_empty_feasible_split() {
    let job = parse_spec(&spec("nh3.json")).unwrap();
    let Report { result: nrmsym::cli::ReportBody::Split(s), .. } = run_command(Command::Split, &job).unwrap() else {
        panic!()
    };
    assert_eq!(s.splitting.num_levels(), 2);
    assert!(s.splitting.multiplicities.iter().all(|&m| m <= 1));

    let mut rigid = job.clone();
    rigid.feasible.clear();
    rigid.seed_blocks.clear();
    let Report { result: nrmsym::cli::ReportBody::Split(s), .. } = run_command(Command::Split, &rigid).unwrap() else {
        panic!()
    };
    assert_eq!(s.splitting.num_levels(), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cross = dir.path().join("cross.json");
    std::fs::write(
        &cross,
        r#"{"schema": "nrmsym-spec/1",
            "frame": {"classes": [{"label": "F", "count": 5, "spin": "1/2"}, {"label": "P", "count": 1, "spin": "1/2"}]},
            "point_group": ["(1 6)"]}"#,
    )
    .unwrap();
    let code = |args: &[&str]| binary().args(args).output().unwrap().status.code();
    assert_eq!(code(&["group", "--spec", cross.to_str().unwrap()]), Some(2));
    assert_eq!(code(&["group"]), Some(1));
    assert_eq!(code(&["explode", "--spec", cross.to_str().unwrap()]), Some(1));
    assert_eq!(code(&["--help"]), Some(0));

    // two seeds for the same coset that disagree
    let inconsistent = dir.path().join("inconsistent.json");
    std::fs::write(
        &inconsistent,
        r#"{"schema": "nrmsym-spec/1",
            "frame": {"classes": [{"label": "H", "count": 3, "spin": "1/2"}]},
            "point_group": [], "feasible": ["(1 2 3)"], "irrep": {"index": 0},
            "seed_blocks": [{"element": "(1 2 3)", "matrix": [[0.1]]}]}"#,
    )
    .unwrap();
    assert_eq!(code(&["spectrum", "--spec", inconsistent.to_str().unwrap()]), Some(3));
    let nh3 = spec("nh3.json");
    let nh3 = nh3.to_str().unwrap();
    assert_eq!(code(&["spectrum", "--spec", nh3, "--tol", "-1"]), Some(1));
    assert_eq!(code(&["weights", "--spec", nh3, "--include-spectator-spins", "false"]), Some(0));
}

#[test]
fn spectator_flag_changes_the_spin_dimension() {
    let out = binary()
        .args(["weights", "--include-spectator-spins", "false", "--spec"])
        .arg(spec("nh3.json"))
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("spin dimension 8"));
    let out = binary().args(["weights", "--spec"]).arg(spec("nh3.json")).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("spin dimension 16"));
}
