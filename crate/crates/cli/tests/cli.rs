use std::process::Command;

use effects_cli::run_cli;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli(
        std::iter::once("effects").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn lines(s: &str) -> Vec<&str> {
    s.lines().collect()
}

#[test]
fn crossover_lowers_with_the_counit() {
    let (code, out, _) = run(&["combine", "W[e] e", "R[e] (e -> t)"]);
    assert_eq!(code, 0);
    assert_eq!(
        lines(&out),
        [
            "MR(ML(BA))  ⊢  R[e] (W[e] t)",
            "ML(MR(BA))  ⊢  W[e] (R[e] t)",
            "CU(BA)  ⊢  t"
        ]
    );
}

#[test]
fn applicative_preset_gives_both_scopes_and_one_application() {
    let (code, out, _) = run(&["combine", "S e", "S (e -> t)", "--preset", "ch3"]);
    assert_eq!(code, 0);
    assert_eq!(
        lines(&out),
        [
            "MR(ML(BA))  ⊢  S (S t)",
            "ML(MR(BA))  ⊢  S (S t)",
            "AP(BA)  ⊢  S t"
        ]
    );
}

#[test]
fn switching_a_rule_off_removes_its_rows() {
    let (_, all, _) = run(&["combine", "S e", "S (e -> t)", "--preset", "ch3"]);
    let (_, less, _) = run(&[
        "combine",
        "S e",
        "S (e -> t)",
        "--preset",
        "ch3",
        "--off",
        "AP",
    ]);
    assert_eq!(lines(&less), &lines(&all)[..2]);
    let (_, back, _) = run(&[
        "combine",
        "S e",
        "S (e -> t)",
        "--preset",
        "ch2",
        "--on",
        "AP",
    ]);
    assert!(back.contains("AP(BA)  ⊢  S t"));
}

#[test]
fn single_effect_laws_pass() {
    let (code, out, _) = run(&["laws", "--effect", "S", "--entities", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().last(), Some("all laws passed"));
    assert!(out.contains("monad.associativity"));
}

#[test]
fn the_writer_over_entities_is_reported_as_only_a_functor() {
    let (code, out, _) = run(&["laws", "--effect", "W[e]", "--entities", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("not a monoid"));
}

#[test]
fn no_results_is_not_an_error() {
    let (code, out, err) = run(&["combine", "e", "e"]);
    assert_eq!((code, out.as_str(), err.as_str()), (0, "", ""));
    let (code, out, _) = run(&["combine", "e", "e", "--json"]);
    assert_eq!((code, out.as_str()), (0, "{\"results\":[]}\n"));
}

#[test]
fn bad_input_exits_with_one() {
    for args in [
        &["combine", "S e", "e -> "][..],
        &["combine", "e", "e -> t", "--off", "XX"],
        &["combine", "e", "e -> t", "--preset", "ch9"],
        &["interpret", "[a dog]", "--fragment", "ch4-monad"],
        &["interpret", "[a cat]", "--fragment", "nope"],
        &[
            "interpret",
            "[a cat]",
            "--fragment",
            "ch4-monad",
            "--model",
            "/nonexistent.json",
        ],
        &["laws", "--effect", "Q"],
        &["enumerate", ""],
        &["frobnicate"],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, 1, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn syntax_errors_name_the_position() {
    let (_, _, err) = run(&["combine", "S e", "e -> "]);
    assert!(
        err.contains("right:") && err.contains("position 5"),
        "{err}"
    );
}

#[test]
fn interpret_lists_derivations_with_values() {
    let (code, out, _) = run(&[
        "interpret",
        "[jupiter [followed [the moon]]]",
        "--fragment",
        "ch1-extensional",
        "--denote",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        lines(&out),
        [
            "BA(jupiter, FA(followed, FA(the, moon)))  ⊢  t",
            "    = true"
        ]
    );
}

#[test]
fn interpret_respects_the_derivation_cap() {
    let args = [
        "interpret",
        "[[a cat] [saw [a box]]]",
        "--fragment",
        "ch4-monad",
        "--max-derivations",
        "2",
    ];
    let (code, _, err) = run(&args);
    assert_eq!(code, 1);
    assert!(err.contains("derivation limit of 2"));
    let mut more = args.to_vec();
    more.push("--truncate");
    let (code, out, _) = run(&more);
    assert_eq!(code, 0);
    assert!(out.ends_with("(truncated: at most 2 derivations per node)\n"));
}

#[test]
fn enumerate_lists_every_bracketing() {
    let (code, out, _) = run(&["enumerate", "a b c d"]);
    assert_eq!(code, 0);
    assert_eq!(lines(&out).len(), 5);
    assert_eq!(lines(&out)[0], "[a [b [c d]]]");
    let (_, json, _) = run(&["enumerate", "a b c", "--json"]);
    assert_eq!(json, "[\"[a [b c]]\",\"[[a b] c]\"]\n");
    let (code, _, _) = run(&["enumerate", "a b c d", "--max-tokens", "3"]);
    assert_eq!(code, 1);
}

#[test]
fn help_goes_to_standard_output() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["combine", "interpret", "laws", "enumerate", "serve"] {
        assert!(out.contains(sub), "{sub}");
    }
}

fn binary(args: &[&str], env: &[(&str, &str)]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_effects"))
        .args(args)
        .envs(env.iter().copied())
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn environment_variables_set_flags() {
    let args = ["combine", "S e", "e -> S t"];
    let (code, out) = binary(&args, &[]);
    assert_eq!(code, 0);
    assert_eq!(lines(&out), ["ML(BA)  ⊢  S (S t)", "JN(ML(BA))  ⊢  S t"]);

    let (_, out) = binary(&args, &[("EFFECTS_OFF", "JN")]);
    assert_eq!(lines(&out), ["ML(BA)  ⊢  S (S t)"]);
    let (_, out) = binary(&args, &[("EFFECTS_PRESET", "ch2")]);
    assert_eq!(lines(&out), ["ML(BA)  ⊢  S (S t)"]);
    let (_, out) = binary(&args, &[("EFFECTS_MAX_TYPE_SIZE", "2")]);
    assert_eq!(lines(&out), ["JN(ML(BA))  ⊢  S t"]);
    let (_, out) = binary(&args, &[("EFFECTS_JSON", "true")]);
    assert!(out.starts_with("{\"results\":"));
    let (code, _) = binary(&args, &[("EFFECTS_MAX_TYPE_SIZE", "lots")]);
    assert_eq!(code, 1);
}

#[test]
fn serve_answers_over_tcp() {
    use std::io::{BufRead, BufReader, Read, Write};
    use std::net::TcpStream;
    use std::process::Stdio;

    let mut child = Command::new(env!("CARGO_BIN_EXE_effects"))
        .args(["serve", "--port", "0"])
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut banner = String::new();
    BufReader::new(child.stderr.take().unwrap())
        .read_line(&mut banner)
        .unwrap();
    let addr = banner.trim().strip_prefix("listening on http://").unwrap();
    let mut stream = TcpStream::connect(addr).unwrap();
    write!(
        stream,
        "GET /api/health HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n"
    )
    .unwrap();
    let mut resp = String::new();
    stream.read_to_string(&mut resp).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(resp.starts_with("HTTP/1.1 200"), "{resp}");
    assert!(resp.ends_with(r#"{"ok":true}"#), "{resp}");
}
