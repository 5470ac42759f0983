use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn lang(name: &str) -> String {
    root().join("languages").join(name).display().to_string()
}

fn program(name: &str) -> String {
    root().join("programs").join(name).display().to_string()
}

fn msos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msos"))
        .args(args)
        .env("MSOS_COLOR", "0")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn run_prints_outcome_and_identity_label() {
    let o = msos(&["run", &lang("skip-seq.toml"), &program("seq-skip.sexp")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "completed: skip\nsteps: 1\nlabel: {\"ρ\":{},\"σ\":{\"pre\":{},\"post\":{}}}\n"
    );
}

#[test]
fn run_applies_env_and_store_bindings() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "p.sexp", "(seq (emit (boundid y)) (emit (deref x)))");
    let o = msos(&["run", &lang("full.toml"), &p, "--env", "y=true", "--store", "x=breaking"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains(r#""out":[true,"breaking"]"#), "{}", stdout(&o));
}

#[test]
fn trace_writes_jsonl_ending_in_completed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trace.jsonl");
    let o = msos(&[
        "trace",
        &lang("full.toml"),
        &program("while-break.sexp"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["outcome"], "completed");
    assert_eq!(last["term"], "skip");
    assert_eq!(text.lines().count(), last["steps"].as_u64().unwrap() as usize + 1);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["trace", &lang("full.toml"), &program("counter.sexp")];
    let (a, b) = (msos(&args), msos(&args));
    assert_eq!(a.stdout, b.stdout);
    let args = ["check", "laws", "--samples", "500", "--seed", "9"];
    assert_eq!(msos(&args).stdout, msos(&args).stdout);
}

#[test]
fn exit_codes_for_run_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let stuck = msos(&["run", &lang("full.toml"), &program("stuck.sexp")]);
    assert_eq!(stuck.status.code(), Some(2));
    assert!(stdout(&stuck).starts_with("stuck: "));

    let spin = write_temp(&dir, "spin.sexp", "(while (lit true) skip)");
    let o = msos(&["run", &lang("full.toml"), &spin, "--fuel", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("steps: 10\n"));

    let fork = write_temp(&dir, "fork.sexp", "fork");
    let o = msos(&["--with-fixtures", "run", &lang("fork.toml"), &fork]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("fork_left"));
}

#[test]
fn unknown_component_is_a_build_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.toml", "sorts = [\"Cmd\"]\n[components]\nCmd = [\"Cmd.goto\"]\n");
    let o = msos(&["run", &bad, &program("seq-skip.sexp")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown component"));
    assert!(!stderr(&o).contains('\x1b'));

    let o = msos(&["run", &lang("fork.toml"), &program("seq-skip.sexp")]);
    assert_eq!(o.status.code(), Some(1), "fork needs --with-fixtures");
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "p.sexp", "(seq skip\n  (bogus))");
    let o = msos(&["run", &lang("full.toml"), &p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("p.sexp:2:3"), "{}", stderr(&o));
}

#[test]
fn invalid_check_arguments() {
    let l = lang("skip-seq.toml");
    assert_eq!(msos(&["check", "det", &l, "--sort", "Foo", "--depth", "2"]).status.code(), Some(1));
    assert_eq!(msos(&["check", "det", &l, "--sort", "Cmd", "--depth", "0"]).status.code(), Some(1));
    assert_eq!(msos(&["check", "det", &l, "--sort", "Exp", "--depth", "2"]).status.code(), Some(1));
    assert_eq!(
        msos(&["check", "det", &l, "--sort", "Cmd", "--depth", "2", "--mode", "fast"]).status.code(),
        Some(1)
    );
}

#[test]
fn determinism_of_skip_seq() {
    let o = msos(&["check", "det", &lang("skip-seq.toml"), "--sort", "Cmd", "--depth", "6", "--mode", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["terms_checked"], 458_330);
    assert_eq!(r["complete"], true);
    assert_eq!(r["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn fixture_counterexamples_exit_five() {
    let o = msos(&[
        "--with-fixtures",
        "check",
        "det",
        &lang("fork.toml"),
        "--sort",
        "Cmd",
        "--depth",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(5));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let first = &r["counterexamples"][0];
    assert_eq!(first["term"], "fork");
    assert_eq!(first["t1"]["to"], "skip");
    assert_eq!(first["t2"]["to"], "(seq skip skip)");
}

#[test]
fn category_laws_hold() {
    let o = msos(&["check", "laws", "--samples", "10000", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r["laws"].as_array().unwrap().iter().all(|l| l["failures"] == 0));
}

#[test]
fn components_listing() {
    let o = msos(&["components"]);
    let text = stdout(&o);
    assert!(text.contains("Cmd.seq imports: Cmd.skip\n"));
    assert!(text.contains("Exp.block mentioned: ρ\n"));
    assert_eq!(text.lines().filter(|l| l.contains(" signature: ")).count(), 13);
    let with = stdout(&msos(&["--with-fixtures", "components"]));
    assert!(with.contains("Cmd.fork rules: fork_left fork_right\n"));
}

#[test]
fn help_documents_exit_codes() {
    let o = msos(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    for code in 0..=6 {
        assert!(stdout(&o).contains(&format!("\n  {code}  ")), "exit code {code}");
    }
}
