use approx::assert_abs_diff_eq;
use sunalg::verify::{self, regression_residual, Regression, VerifyError};
use sunalg::{check_one, run_suite, IdentityReport, Status};

#[test]
fn suite_passes_at_su2_and_su3() {
    for n in [2, 3] {
        let rep = run_suite(n, 1e-10, 2_000, 7).unwrap();
        assert!(rep.all_passed(), "N={n}\n{}", rep.to_text());
        assert_eq!(rep.results.len(), verify::registry().len());
    }
}

#[test]
fn text_report_shape() {
    let rep = run_suite(4, 1e-10, 200, 0).unwrap();
    let text = rep.to_text();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "report v1 n=4 tolerance=1e-10 budget=200 seed=0");
    assert!(lines.last().unwrap().starts_with("summary pass="));
    assert_eq!(lines.len(), rep.results.len() + 2);
    assert!(text.contains("skipped(N≠3)"));
}

#[test]
fn json_report_round_trips() {
    let rep = run_suite(2, 1e-10, 100, 3).unwrap();
    let back: IdentityReport = serde_json::from_str(&rep.to_json()).unwrap();
    assert_eq!(back, rep);
}

#[test]
fn single_checks_and_errors() {
    let (status, r) = check_one("EQ14-TbTc-trace", 5, 1e-10).unwrap();
    assert_eq!(status, Status::Pass);
    assert_abs_diff_eq!(r, 0.0, epsilon = 1e-12);
    assert!(matches!(check_one("no-such-id", 3, 1e-10), Err(VerifyError::UnknownId(_))));
    assert!(check_one("EQ14-TbTc-trace", 1, 1e-10).is_err());
}

#[test]
fn misprinted_forms_miss() {
    assert!(regression_residual(Regression::SandwichWithTa, 3).unwrap() > 0.1);
    assert!(regression_residual(Regression::FdddHalf, 3).unwrap() > 0.1);
}
