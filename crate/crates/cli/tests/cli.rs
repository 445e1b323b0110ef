use std::process::{Command, Output};

fn sunalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sunalg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn tensors_for_su2() {
    let o = sunalg(&["tensors", "--n", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "sun-tensors v1\nN 2\nf 1 2 3 1.0\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("1 f entries, 0 d entries"));
}

#[test]
fn tensors_for_su3_to_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("su3.txt");
    let o = sunalg(&["tensors", "--n", "3", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\nf 1 2 3 1.0\n"));
    assert!(text.contains("\nd 1 1 8 0.57735026918962573\n"));
    let set = sunalg::TensorSet::parse(&text).unwrap();
    assert_eq!(set.to_text(), text);
}

#[test]
fn tensors_json() {
    let o = sunalg(&["tensors", "--n", "2", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
}

#[test]
fn rank_one_is_a_usage_error() {
    let o = sunalg(&["tensors", "--n", "1"]);
    assert!(!o.status.success());
}

#[test]
fn verify_su3_passes_everything() {
    let o = sunalg(&["verify", "--n", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("report v1 n=3"));
    assert!(out.contains("S5-a1 pass "));
    assert!(out.contains("fail=0 skipped=0"));
}

#[test]
fn verify_su4_skips_the_su3_specials() {
    let o = sunalg(&["verify", "--n", "4", "--budget", "500"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("S5-a1 skipped(N≠3)"));
    assert!(out.contains("EQ44-ffpdd pass "));
}

#[test]
fn verify_with_impossible_tolerance_fails() {
    let o = sunalg(&["verify", "--n", "2", "--tol", "1e-30"]);
    assert!(!o.status.success());
    assert!(stdout(&o).contains(" fail "));
}

#[test]
fn verify_json_is_a_report() {
    let o = sunalg(&["verify", "--n", "2", "--json"]);
    assert!(o.status.success());
    let r: sunalg::IdentityReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.format, "report v1");
    assert!(r.all_passed());
}

#[test]
fn simplify_golden() {
    for (input, want) in [
        ("f(a,b,c)*f(a,b,d)", "NN*delta(c,d)"),
        ("Tr[T(a)T(a)]", "(NN^2-1)/2"),
        ("TrAdj[D(a)D(b)]", "((NN^2-4)/NN)*delta(a,b)"),
    ] {
        let o = sunalg(&["simplify", input]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), want);
    }
}

#[test]
fn simplify_with_oracle_check_and_trace() {
    let o = sunalg(&["simplify", "TrAdj[F(a)F(b)F(c)]", "--check", "2,3,4", "--trace"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("(i*NN/2)*f(a,b,c)"));
    assert!(out.contains("oracle N={2,3,4}: agree"));
    assert!(out.lines().any(|l| l.contains(" ⇒ ")));
}

#[test]
fn simplify_reports_parse_errors() {
    let o = sunalg(&["simplify", "f(a,b"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("column"));
}

#[test]
fn eval_examples() {
    for (args, want) in [
        (vec!["eval", "Tr[T(1)T(1)]", "--n", "3"], "0.5 0.0"),
        (vec!["eval", "d(1,1,8)", "--n", "3"], "0.57735026918962573 0.0"),
        (vec!["eval", "TrAdj[F(a)F(a)]", "--n", "3"], "24.0 0.0"),
        (vec!["eval", "TrAdj[D(a)D(b)]", "--n", "2", "a=1", "b=1"], "0.0 0.0"),
    ] {
        let o = sunalg(&args);
        assert!(o.status.success(), "{args:?}");
        assert_eq!(stdout(&o).trim(), want, "{args:?}");
    }
}

#[test]
fn eval_needs_every_free_index() {
    let o = sunalg(&["eval", "delta(a,b)", "--n", "3", "a=1"]);
    assert!(!o.status.success());
}
