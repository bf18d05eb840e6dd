use std::path::Path;
use std::process::{Command, Output};

fn gmhd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmhd")).args(args).output().expect("binary runs")
}

fn text(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned() + &String::from_utf8_lossy(&o.stderr)
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_passes_by_default() {
    let o = gmhd(&["verify"]);
    assert!(o.status.success(), "{}", text(&o));
    assert!(!text(&o).contains("FAIL"));
}

#[test]
fn broken_theta_fails_with_the_constraint_name() {
    let o = gmhd(&["verify", "--theta1", "3"]);
    assert!(!o.status.success());
    let t = text(&o);
    assert!(t.lines().any(|l| l.starts_with("FAIL feasibility") && l.contains("theta_window")), "{t}");
}

#[test]
fn coarse_quadrature_fails_the_oracle() {
    let o = gmhd(&["verify", "--n-quad", "4"]);
    assert!(!o.status.success());
    assert!(text(&o).lines().any(|l| l.starts_with("FAIL bilinear_closed_form")));
}

#[test]
fn run_writes_reproducible_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = gmhd(&["run", "--r", "2", "--s-list", "0.5,1", "--n-samples", "4", "--out", arg(out)]);
        assert!(o.status.success(), "{}", text(&o));
    }
    let id = "r2_a1-1_eps0.1";
    let csv_a = std::fs::read(a.join(id).join("series.csv")).unwrap();
    let csv_b = std::fs::read(b.join(id).join("series.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
    let header = String::from_utf8(csv_a).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "t,sup_u,sup_b,energy,dissipation,besov_b_0.5,besov_b_1");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.join(id).join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["params"]["r"], 2);
    assert_eq!(summary["indices"][1]["b_final"]["alpha"], 1.0);
    assert!(a.join(id).join("config.echo.json").exists());
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"epsilon": 0.05, "r": 3, "analytic_only": true, "n_samples": 2}"#).unwrap();
    let out = dir.path().join("out");
    let o = gmhd(&["run", "--config", arg(&cfg), "--r", "5", "--out", arg(&out)]);
    assert!(o.status.success(), "{}", text(&o));
    let echo: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.join("r5_a1-1_eps0.05_analytic").join("config.echo.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(echo["r"], 5);
    assert_eq!(echo["epsilon"], 0.05);
}

#[test]
fn analytic_sweep_reports_a_fit() {
    let dir = tempfile::tempdir().unwrap();
    let o = gmhd(&["sweep", "--analytic-only", "--r-list", "2,4,8,16,32", "--out", arg(dir.path())]);
    assert!(o.status.success(), "{}", text(&o));
    let sweep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep.json")).unwrap()).unwrap();
    let slope = sweep["fits"][0]["slope"].as_f64().unwrap();
    assert!(slope > 0.2, "{slope}");
    assert_eq!(sweep["run_ids"].as_array().unwrap().len(), 5);
}

#[test]
fn analytic_slopes_order_with_epsilon() {
    let slope = |eps: &str| {
        let o = gmhd(&["sweep", "--analytic-only", "--epsilon", eps, "--r-list", "2,4,8,16,32"]);
        assert!(o.status.success());
        let t = text(&o);
        let line = t.lines().find(|l| l.starts_with("fit")).unwrap().to_string();
        line.split("slope ").nth(1).unwrap().split_whitespace().next().unwrap().parse::<f64>().unwrap()
    };
    assert!(slope("0.15") > slope("0.05"));
}

#[test]
fn bad_input_exits_with_an_error() {
    let o = gmhd(&["sweep", "--r-list", "4,2,8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).contains("strictly increasing"));
    let o = gmhd(&["run", "--epsilon", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
}
