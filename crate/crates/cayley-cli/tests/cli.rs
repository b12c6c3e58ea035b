use cayley_cli::report::ReportDocument;
use cayley_cli::{run, EXIT_FAIL, EXIT_INDETERMINATE, EXIT_OK, EXIT_USAGE};

fn cayley(args: &[&str]) -> cayley_cli::Outcome {
    run(std::iter::once("cayley").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> ReportDocument {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = cayley(&a);
    serde_json::from_str(&o.output).unwrap_or_else(|e| panic!("{e}: {}", o.output))
}

#[test]
fn cohomology_exit_codes() {
    assert_eq!(cayley(&["coh", "O"]).exit_code, EXIT_OK);
    assert_eq!(cayley(&["coh", "--space", "gr", "S{0,0,-3}U*"]).exit_code, EXIT_OK);
    assert_eq!(cayley(&["coh", "W2 U*(1)"]).exit_code, EXIT_INDETERMINATE);
    let bad = cayley(&["coh", "S{1,2}U"]);
    assert_eq!(bad.exit_code, EXIT_USAGE);
    assert!(bad.message.unwrap().contains("at 2"));
}

#[test]
fn usage_errors() {
    assert_eq!(cayley(&["frobnicate"]).exit_code, EXIT_USAGE);
    assert_eq!(cayley(&["coh"]).exit_code, EXIT_USAGE);
    assert_eq!(cayley(&["check-collection"]).exit_code, EXIT_USAGE);
    assert_eq!(cayley(&["ext", "R + O", "O"]).exit_code, EXIT_USAGE);
    assert_eq!(cayley(&["g2", "bracket", "ea", "1,2"]).exit_code, EXIT_USAGE);
    let h = cayley(&["--help"]);
    assert_eq!(h.exit_code, EXIT_OK);
    assert!(h.output.contains("verify-all"));
}

#[test]
fn builtin_collection() {
    let d = json(&["check-collection", "--builtin", "cg15"]);
    assert_eq!(d.exit_code, EXIT_OK);
    assert_eq!(d.verdict.as_deref(), Some("EXCEPTIONAL"));
    assert_eq!(d.data["lefschetz"], serde_json::json!(true));
    let p = cayley(&["check-collection", "--builtin", "cg15", "--print"]);
    assert!(p.output.contains("S{2,1}U*"));
}

#[test]
fn failing_collection_file() {
    let dir = std::env::temp_dir().join(format!("cayley-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let swapped = dir.join("swapped.txt");
    std::fs::write(&swapped, "U*\nO\n").unwrap();
    let d = json(&["check-collection", swapped.to_str().unwrap()]);
    assert_eq!(d.exit_code, EXIT_FAIL);
    assert!(d.verdict.unwrap().starts_with("NOT EXCEPTIONAL"));

    let blocks = dir.join("blocks.txt");
    std::fs::write(&blocks, "O\nU*\n--- block\nU*(1)\n").unwrap();
    let d = json(&["check-collection", blocks.to_str().unwrap()]);
    assert_eq!(d.data["lefschetz"], serde_json::json!(false));
    assert_eq!(d.exit_code, EXIT_FAIL);

    let broken = dir.join("broken.txt");
    std::fs::write(&broken, "O\nS{0,1}U\n").unwrap();
    let o = cayley(&["check-collection", broken.to_str().unwrap()]);
    assert_eq!(o.exit_code, EXIT_USAGE);
    assert!(o.message.unwrap().contains("line 2"));
    assert_eq!(cayley(&["check-collection", dir.join("missing").to_str().unwrap()]).exit_code, EXIT_USAGE);
}

#[test]
fn residual_reports_open_cells() {
    let d = json(&["residual"]);
    assert_eq!(d.exit_code, EXIT_INDETERMINATE);
    assert!(d.data["blocker"].is_string());
}

#[test]
fn json_round_trips() {
    for args in [&["coh", "U*"][..], &["ext", "R", "W2 Q"], &["euler", "O", "U*(1)"], &["g2", "orbits"], &["g2", "forms"]] {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let o = cayley(&a);
        let d: ReportDocument = serde_json::from_str(&o.output).unwrap();
        assert_eq!(d.render(cayley_cli::report::Format::Json), o.output);
        assert_eq!(d.schema, cayley_cli::report::SCHEMA);
    }
}

#[test]
fn euler_pairing_value() {
    let d = json(&["euler", "O", "U*"]);
    assert_eq!(d.data["chi"], serde_json::json!("7"));
}

#[test]
fn markdown_table_is_stable() {
    let a = cayley(&["table", "--format", "markdown"]);
    let b = cayley(&["table", "--format", "markdown", "--jobs", "1"]);
    assert_eq!(a.exit_code, EXIT_OK);
    assert_eq!(a.output, b.output);
    assert_eq!(a.output.matches("| shaded |").count(), 3);
    assert!(a.output.contains("| S{-1,-1,-5} | k[-4] | k[-4] |"));
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("cayley-out-{}.json", std::process::id()));
    let o = cayley(&["g2", "bracket", "ea", "eb", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.exit_code, EXIT_OK);
    assert!(o.output.is_empty());
    let d: ReportDocument = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(d.data["display"], serde_json::json!("-2*e-g"));
}

#[test]
fn g2_subcommands() {
    assert_eq!(json(&["g2", "phirank", "ea", "e-a"]).data["rank"], serde_json::json!(4));
    assert_eq!(json(&["g2", "orbits", "e0", "ea", "e-a"]).data[0]["orbit"], serde_json::json!("O0"));
    assert_eq!(cayley(&["g2", "orbits", "e0", "ea", "eb"]).exit_code, EXIT_FAIL);
    assert_eq!(cayley(&["g2", "veronese", "--samples", "5"]).exit_code, EXIT_OK);
    assert_eq!(cayley(&["g2", "segre", "--samples", "5"]).exit_code, EXIT_OK);
    assert_eq!(cayley(&["g2", "phirank", "--samples", "20", "--seed", "9"]).exit_code, EXIT_OK);
    let il = cayley(&["g2", "ilambda"]).output;
    assert_eq!(il.lines().count(), 10);
    let b = json(&["g2", "bracket", "1/2,0,0,0,0,0,0", "eg"]);
    assert_eq!(b.data["display"], serde_json::json!("-1*eg"));
}

#[test]
fn verify_all_is_deterministic() {
    let a = cayley(&["verify-all", "--format", "json", "--seed", "5"]);
    let b = cayley(&["verify-all", "--format", "json", "--seed", "5", "--jobs", "1"]);
    assert_eq!(a.output, b.output);
    assert_eq!(a.exit_code, b.exit_code);
}
