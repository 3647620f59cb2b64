mod common;

use common::*;

#[test]
fn check_reports_norm_and_exit_codes() {
    let ws = Workspace::new();
    let edge = ws.file("edge.json", COISOMETRY);
    let run = cli(&["check", &edge]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("norm 1.0"), "{}", run.stdout);

    let outside = ws.file(
        "outside.json",
        r#"{"n": 2, "spaces": {"h": 1}, "T": [[[0.8]], [[0.8]]]}"#,
    );
    assert_eq!(cli(&["check", &outside]).code, 1);

    let broken = ws.file("broken.json", r#"{"n": 2, "spaces": "#);
    let run = cli(&["check", &broken]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("malformed JSON"), "{}", run.stderr);
}

#[test]
fn check_on_a_pair_round_trips_the_coupling() {
    let ws = Workspace::new();
    let run = cli(&["--format", "json", "check", &ws.file("pair.json", SCALAR_PAIR)]);
    assert_eq!(run.code, 0);
    assert!(residual(&run.json(), "coupling_round_trip") <= 1e-12);
}

#[test]
fn missing_file_and_bad_flags_are_input_errors() {
    assert_eq!(cli(&["check", "/nonexistent/instance.json"]).code, 2);
    assert_eq!(cli(&["charfun", "--trunc", "0", "x.json"]).code, 2);
    assert_eq!(cli(&["frobnicate"]).code, 2);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn charfun_of_the_shift_is_the_identity_symbol() {
    let ws = Workspace::new();
    let run = cli(&[
        "--format",
        "json",
        "charfun",
        "--trunc",
        "3",
        &ws.file("shift.json", SHIFT),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let cert = run.json();
    assert_eq!(cert["theorem"], "3.1");
    let coeffs = cert["coefficients"].as_object().unwrap();
    assert_eq!(coeffs.keys().collect::<Vec<_>>(), ["", "1", "11", "111"]);
    for (word, want) in [("", 0.0), ("1", 1.0), ("11", 0.0), ("111", 0.0)] {
        assert_eq!(scalar_coefficient(&cert, word), want, "word {word:?}");
    }
}

#[test]
fn charfun_of_a_scalar_is_the_blaschke_series() {
    let ws = Workspace::new();
    let run = cli(&[
        "--format",
        "json",
        "charfun",
        "--trunc",
        "4",
        &ws.file("b.json", BLASCHKE),
    ]);
    assert_eq!(run.code, 0);
    let cert = run.json();
    for (word, want) in [
        ("", -0.5),
        ("1", 0.75),
        ("11", 0.375),
        ("111", 0.1875),
        ("1111", 0.09375),
    ] {
        assert!((scalar_coefficient(&cert, word) - want).abs() <= 1e-12, "word {word:?}");
    }
    assert!(residual(&cert, "lemma_first") <= 1e-10);
    assert!(residual(&cert, "lemma_second") <= 1e-10);
}

#[test]
fn charfun_of_a_coisometry_has_no_coefficients() {
    let ws = Workspace::new();
    let run = cli(&["--format", "json", "charfun", &ws.file("c.json", COISOMETRY)]);
    assert_eq!(run.code, 0);
    let cert = run.json();
    assert!(cert["coefficients"].as_object().unwrap().is_empty());
    assert!(cert["notes"].as_array().unwrap().iter().any(|n| n == "trivial defect"));
}

#[test]
fn factorize_scalar_pair_passes_tightly() {
    let ws = Workspace::new();
    let run = cli(&["--format", "json", "factorize", &ws.file("p.json", SCALAR_PAIR)]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let cert = run.json();
    assert_eq!(cert["pass"], true);
    assert!(residual(&cert, "factorization") <= 1e-12);
}

#[test]
fn factorize_detects_a_wrong_coupling() {
    let ws = Workspace::new();
    // T is built from L = 0.5, the file claims L = 0.3
    let corrupted = ws.file(
        "bad.json",
        r#"{"n": 1, "spaces": {"h": 2, "h1": 1, "h2": 1},
            "T": [[[0, 0.5], [0, 0]]], "A": [[[0]]], "B": [[[0]]], "L": [[0.3]]}"#,
    );
    let run = cli(&["factorize", &corrupted]);
    assert_eq!(run.code, 1, "{}", run.stdout);
    assert!(run.stdout.contains("FAIL (factorization"), "{}", run.stdout);

    let honest = ws.file(
        "good.json",
        r#"{"n": 1, "spaces": {"h": 2, "h1": 1, "h2": 1},
            "T": [[[0, 0.5], [0, 0]]], "A": [[[0]]], "B": [[[0]]], "L": [[0.5]]}"#,
    );
    assert_eq!(cli(&["factorize", &honest]).code, 0);
}

#[test]
fn factorize_coisometric_a_notes_empty_blocks() {
    let ws = Workspace::new();
    let inst = ws.file(
        "co.json",
        r#"{"n": 2, "spaces": {"h1": 1, "h2": 1}, "A": [[[0.6]], [[0.8]]], "B": [[[0.3]], [[0.4]]], "L": []}"#,
    );
    let run = cli(&["--format", "json", "factorize", &inst]);
    assert_eq!(run.code, 0, "{} {}", run.stdout, run.stderr);
    let cert = run.json();
    assert_eq!(cert["dims"]["defect_a_star"], 0);
    let notes: Vec<&str> = cert["notes"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|n| n.as_str())
        .collect();
    assert!(notes.contains(&"defect_a_star is zero-dimensional"), "{notes:?}");
}

fn julia_halmos_of_half() -> String {
    let c = 0.75f64.sqrt();
    format!("[[0.5, {c:.17}], [{c:.17}, -0.5]]")
}

#[test]
fn converse_rebuilds_the_scalar_pair() {
    let ws = Workspace::new();
    let inst = ws.file(
        "w.json",
        &format!(
            r#"{{"n": 1, "spaces": {{"h1": 1, "h2": 1}}, "A": [[[0]]], "B": [[[0]]], "w": {}}}"#,
            julia_halmos_of_half()
        ),
    );
    let run = cli(&["--format", "json", "converse", &inst]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let cert = run.json();
    assert!(residual(&cert, "coincidence") <= 1e-10);
    assert_eq!(cert["dims"]["fprime"], 0);
    assert_eq!(cert["dims"]["fstarprime"], 0);
}

#[test]
fn converse_rejects_an_identity_summand() {
    let ws = Workspace::new();
    let c = 0.75f64.sqrt();
    let inst = ws.file(
        "w1.json",
        &format!(
            r#"{{"n": 1, "spaces": {{"h1": 1, "h2": 1, "f": 2, "fstar": 2}}, "A": [[[0]]], "B": [[[0]]],
                "w": [[0.5, {c:.17}, 0], [{c:.17}, -0.5, 0], [0, 0, 1]]}}"#
        ),
    );
    let run = cli(&["--format", "json", "converse", &inst]);
    assert_eq!(run.code, 1);
    let cert = run.json();
    assert!(cert["dims"]["fprime"].as_u64().unwrap() >= 1, "{cert}");
    assert_eq!(cert["pass"], false);
}

#[test]
fn constrained_scalar_pair_passes_on_given_points() {
    let ws = Workspace::new();
    let inst = ws.file("p.json", SCALAR_PAIR);
    let points = ws.file("z.json", "[[0.4], [[0, 0.3]], [-0.2]]");
    let run = cli(&["--format", "json", "constrained", &inst, "--points", &points]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let cert = run.json();
    assert!(residual(&cert, "pointwise_factorization") <= 1e-12);
    assert_eq!(cert["dims"]["series_points"], 3);
    assert!(residual(&cert, "invariance") <= 1e-10);

    let run = cli(&["constrained", &inst, "--grid", "5:0.8"]);
    assert_eq!(run.code, 0);
}

#[test]
fn constrained_rejects_noncommuting_input() {
    let ws = Workspace::new();
    let inst = ws.file(
        "nc.json",
        r#"{"n": 2, "spaces": {"h": 2}, "T": [[[0, 0.5], [0, 0]], [[0, 0], [0.5, 0]]]}"#,
    );
    let run = cli(&["constrained", &inst]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("commut"), "{}", run.stderr);
}

#[test]
fn selftest_without_seeds_warns() {
    let run = cli(&["selftest", "--count", "0"]);
    assert_eq!(run.code, 0);
    assert!(run.stderr.contains("nothing run"), "{}", run.stderr);
}

#[test]
fn selftest_replay_names_the_failing_seed() {
    let ws = Workspace::new();
    let seeds = ws.file("seeds.txt", "# replay\n7\n");
    let run = cli(&[
        "selftest",
        "--seeds",
        &seeds,
        "--tol",
        "1e-30",
        "--trunc",
        "2",
        "--max-n",
        "2",
        "--max-dim",
        "2",
    ]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains("FAIL seed 7 theorem 3.2"), "{}", run.stdout);
    assert!(run.stdout.ends_with("selftest: FAIL\n"));
}

#[test]
fn selftest_small_sweep_passes() {
    let run = cli(&[
        "selftest",
        "--seed",
        "0",
        "--count",
        "4",
        "--trunc",
        "3",
        "--max-n",
        "2",
        "--max-dim",
        "2",
    ]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert!(run.stdout.contains("theorem 4.x: 4/4 pass"), "{}", run.stdout);
}

#[test]
fn certificates_carry_recomputable_verdicts() {
    let ws = Workspace::new();
    let inst = ws.file("b.json", BLASCHKE);
    let out = ws.path("cert.json");
    let run = cli(&["charfun", &inst, "--out", out.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    let cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let residuals = cert["residuals"].as_object().unwrap();
    let tolerances = cert["tolerances"].as_object().unwrap();
    assert_eq!(
        residuals.keys().collect::<Vec<_>>(),
        tolerances.keys().collect::<Vec<_>>()
    );
    let recomputed = residuals
        .iter()
        .all(|(name, r)| r.as_f64().unwrap() <= tolerances[name].as_f64().unwrap());
    assert_eq!(cert["pass"], recomputed);
    for key in ["theorem", "residuals", "tolerances", "pass", "k", "seed", "versions"] {
        assert!(cert.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn generated_instances_feed_back_into_the_cli() {
    let ws = Workspace::new();
    for kind in ["pair", "converse", "commuting"] {
        let gen = cli(&["generate", "--seed", "11", "--kind", kind]);
        assert_eq!(gen.code, 0);
        let inst = ws.file(&format!("{kind}.json"), &gen.stdout);
        let sub = match kind {
            "pair" => "factorize",
            "converse" => "converse",
            _ => "constrained",
        };
        let run = cli(&[sub, "--trunc", "3", &inst]);
        assert_eq!(run.code, 0, "{kind}: {}", run.stdout);
    }
}

#[test]
fn binary_output_is_byte_identical_across_runs() {
    let ws = Workspace::new();
    let gen = cli(&["generate", "--seed", "23"]);
    let inst = ws.file("pair.json", &gen.stdout);
    let exe = env!("CARGO_BIN_EXE_charfact");
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = ws.path(&format!("cert{i}.json"));
        let run = std::process::Command::new(exe)
            .args(["factorize", "--trunc", "3", &inst, "--out", out.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(run.status.code(), Some(0));
        outputs.push(std::fs::read(&out).unwrap());
        outputs.push(run.stdout);
    }
    assert_eq!(outputs[0], outputs[2]);
    assert_eq!(outputs[1], outputs[3]);
}
