use std::process::Command;

use doublegroup_cli::{run_args, Outcome, EXIT_PARSE, EXIT_PASS, EXIT_PRECONDITION};

fn run(args: &[&str]) -> Outcome {
    run_args(std::iter::once("doublegroup").chain(args.iter().copied()))
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.code, EXIT_PASS, "{args:?}: {}", out.stderr);
    out.stdout
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn subgroup_info_examples() {
    let v = json(&["subgroup-info", "--gens", "bA,abAA,aaa,aab", "--format", "json"]);
    assert_eq!(v["index"], 3);
    assert_eq!(v["rank"], 4);
    assert_eq!(v["normal"], true);
    assert_eq!(v["transversal"], serde_json::json!(["", "a", "aa"]));

    let v = json(&["subgroup-info", "--gens", "", "--format", "json"]);
    assert_eq!(v["index"], "infinite");
    assert_eq!(v["rank"], 0);

    let v = json(&["subgroup-info", "--gens", "a,b", "--format", "json"]);
    assert_eq!(v["index"], 1);
    assert_eq!(v["rank"], 2);

    let v = json(&["subgroup-info", "--gens", "aa,b", "--format", "json"]);
    assert_eq!(v["index"], "infinite");
    assert_eq!(v["normal"], false);
}

#[test]
fn subgroup_info_round_trips_through_json() {
    let text = stdout(&["subgroup-info", "--preset", "s3stab", "--format", "json"]);
    let info: doublegroup_cli::SubgroupInfo = serde_json::from_str(&text).unwrap();
    assert_eq!(info.index, 3);
    assert!(!info.normal);
    assert_eq!(info.graph.vertices, 3);
    assert_eq!(info.graph.edges.len(), 6);
    assert_eq!(serde_json::to_value(&info).unwrap(), serde_json::from_str::<serde_json::Value>(&text).unwrap());
}

#[test]
fn subgroup_dot() {
    let dot = stdout(&["subgroup-info", "--preset", "rips", "--format", "dot"]);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 6);
}

#[test]
fn double_nf_examples() {
    let nf = |w: &str| stdout(&["double-nf", w, "--preset", "rips"]).trim().to_string();
    assert_eq!(nf("1:aaa"), "h:aaa");
    assert_eq!(nf("1:a 2:A 2:a 1:A"), "identity");
    assert_eq!(nf("1:a 2:A"), "1:a 2:aa h:AAA");
    assert_eq!(nf("identity"), "identity");

    let out = run(&["double-nf", "1:a", "--gens", "a"]);
    assert_eq!(out.code, EXIT_PRECONDITION);
    let out = run(&["double-nf", "1:q", "--preset", "rips"]);
    assert_eq!(out.code, EXIT_PARSE);
    let out = run(&["double-nf", "3:a", "--preset", "rips"]);
    assert_eq!(out.code, EXIT_PARSE);
}

#[test]
fn double_mul_and_inverse() {
    let p = stdout(&["double-mul", "1:a 2:A", "2:a 1:A", "--preset", "rips"]);
    assert_eq!(p.trim(), "identity");
    let p = stdout(&["double-mul", "1:a", "2:a", "--preset", "rips"]);
    assert_eq!(p.trim(), "1:a 2:a");
}

#[test]
fn kernel_basis_command() {
    let v = json(&["kernel-basis", "--preset", "rips", "--format", "json"]);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["basis"], serde_json::json!(["1:a 2:aa h:AAA", "1:aa 2:a h:AAA"]));
    let v = json(&["kernel-basis", "--gens", "a,b", "--format", "json"]);
    assert_eq!(v["rank"], 0);
}

#[test]
fn witness_small_run() {
    let v = json(&["witness", "--preset", "rips", "--samples", "100", "--seed", "7"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["report"]["injectivity_samples"], 100);
    assert_eq!(v["report"]["seed"], 7);
    assert_eq!(v["virtual_product"]["r1"], 4);
    assert_eq!(v["virtual_product"]["r2"], 2);
    assert_eq!(v["witness"]["y1"], "1:a 2:aa h:AAA");

    let out = run(&["witness", "--preset", "index2"]);
    assert_eq!(out.code, EXIT_PRECONDITION);
    assert!(out.stderr.contains("IndexTooSmall"));
    let out = run(&["witness", "--rank", "1", "--gens", "aaa"]);
    assert_eq!(out.code, EXIT_PRECONDITION);
    assert!(out.stderr.contains("RankTooSmall"));
    let out = run(&["witness", "--preset", "rips", "--samples", "0"]);
    assert_eq!(out.code, EXIT_PARSE);
}

#[test]
fn witness_with_explicit_normal_subgroup() {
    // N = H for the normal Rips subgroup
    let v = json(&["witness", "--preset", "rips", "--n-gens", "bA,abAA,aaa,aab", "--samples", "50"]);
    assert_eq!(v["pass"], true);
    let out = run(&["witness", "--preset", "rips", "--n-gens", "a", "--samples", "50"]);
    assert_eq!(out.code, EXIT_PRECONDITION);
}

#[test]
fn export_cover_examples() {
    let dot = stdout(&["export-cover", "--preset", "rips"]);
    assert!(dot.contains("label=\"\""));
    assert!(dot.contains("label=\"a\""));
    assert!(dot.contains("label=\"aa\""));
    let text = stdout(&["export-cover", "--gens", "a,b", "--format", "text"]);
    assert_eq!(text.trim(), "2 vertices, 1 edges, rank of ker(phi1) = E - V + 1 = 0");
    let v = json(&["export-cover", "--gens", "aaaaa,bA,abAA,aabAAA,aaabAAAA,aaaabAAAAA", "--format", "json"]);
    assert_eq!(v["edges"].as_array().unwrap().len(), 5);
    assert_eq!(v["kernel_rank"], 4);
    assert_eq!(run(&["export-cover", "--gens", "a"]).code, EXIT_PRECONDITION);
}

#[test]
fn mihailova_examples() {
    let args = |pair: &'static str| ["mihailova", "--presentation", "rank=1; relators=aaa", "--images", "(0 1 2)", pair];
    let member = stdout(&args("(aaa,1)"));
    assert!(member.ends_with("member\n") && !member.contains("non-member"));
    assert!(stdout(&args("(a,1)")).ends_with("non-member\n"));
    assert!(!stdout(&args("(a,aaaa)")).contains("non-member"));
    assert!(stdout(&args("(a,A)")).ends_with("non-member\n"));

    let bad = run(&["mihailova", "--presentation", "rank=1; relators=aaa", "--images", "(0 1)", "(a,1)"]);
    assert_eq!(bad.code, EXIT_PRECONDITION);
    let bad = run(&["mihailova", "--presentation", "rank=1", "--images", "(0 1)", "a,1"]);
    assert_eq!(bad.code, EXIT_PARSE);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(run(&["no-such-command"]).code, EXIT_PARSE);
    assert_eq!(run(&["subgroup-info"]).code, EXIT_PARSE);
    assert_eq!(run(&["subgroup-info", "--preset", "nope"]).code, EXIT_PARSE);
    assert_eq!(run(&["--help"]).code, EXIT_PASS);
}

#[test]
fn binary_output_is_deterministic() {
    let exe = env!("CARGO_BIN_EXE_doublegroup");
    let go = || {
        Command::new(exe)
            .args(["witness", "--preset", "s3stab", "--samples", "500", "--format", "text"])
            .output()
            .unwrap()
    };
    let (a, b) = (go(), go());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8(a.stdout).unwrap().ends_with("PASS\n"));

    let out = Command::new(exe).args(["witness", "--preset", "index2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PRECONDITION));
}
