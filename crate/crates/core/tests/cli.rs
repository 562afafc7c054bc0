use std::fs;
use std::process::{Command, Output};

fn wetbeam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wetbeam")).args(args).output().unwrap()
}

fn write_config(dir: &tempfile::TempDir, text: &str) -> String {
    let path = dir.path().join("cfg.toml");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn kappa_sweep_writes_csv_with_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "scenario = \"A\"\nkappa_grid_db = [0.0, 20.0]\nschemes = [\"lp_avg_csi\", \"sa_csi_free\"]\n",
    );
    let out = dir.path().join("k.csv");
    let o = wetbeam(&[
        "sweep-kappa",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--trials",
        "200",
        "--seed",
        "3",
        "--bounds",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "sweep,scheme,mean_energy,mean_energy_db,ci_halfwidth,mean_iters,trials");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    // two schemes plus two bound rows per grid point
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.len() == 7));
    for label in ["lp_avg_csi", "sa_csi_free", "bound_lb", "bound_ub"] {
        assert_eq!(rows.iter().filter(|r| r[1] == label).count(), 2, "{label}");
    }
    for r in rows.iter().filter(|r| r[1] == "lp_avg_csi") {
        assert_eq!(r[6], "200");
        let e: f64 = r[2].parse().unwrap();
        let e_db: f64 = r[3].parse().unwrap();
        assert!((10.0 * e.log10() - e_db).abs() < 1e-6);
    }
    // summary goes to stdout when the CSV goes to a file
    assert!(!o.stdout.is_empty());
}

#[test]
fn csv_goes_to_stdout_without_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "alpha_grid_deg = [0.0, 90.0]\nschemes = [\"lp_avg_csi\"]\n");
    let o = wetbeam(&["sweep-rotation", "--config", &cfg, "--trials", "50"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("sweep,scheme,"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn solve_prints_design_on_simplex() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "scenario = \"B\"\nschemes = [\"lp_avg_csi\", \"sdp_avg_csi\"]\n");
    let out = dir.path().join("s.csv");
    let o = wetbeam(&["solve", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("[lp_avg_csi]") && text.contains("[sdp_avg_csi]"));
    let sum_line = text.lines().find(|l| l.starts_with("sum(p)")).unwrap();
    let sum: f64 = sum_line.split('=').nth(1).unwrap().trim().parse().unwrap();
    assert!((sum - 1.0).abs() < 1e-9);
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("device,scheme,power,energy"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for bad in [
        "no_such_key = 1\n",
        "devices = 0\n",
        "kappa_grid_db = [\"x\"]\n",
        "scenario = \"nowhere\"\n",
        "schemes = [\"magic\"]\n",
        "trials = 0\n",
    ] {
        let cfg = write_config(&dir, bad);
        let o = wetbeam(&["sweep-kappa", "--config", &cfg]);
        assert_eq!(o.status.code(), Some(2), "{bad}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}

#[test]
fn runtime_errors_exit_with_one() {
    let o = wetbeam(&["solve", "--config", "/nonexistent/wetbeam.toml"]);
    assert_eq!(o.status.code(), Some(1));
}
