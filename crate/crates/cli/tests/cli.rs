use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ste_core::gaussian::thermal_energy;
use ste_core::BathParams;
use tempfile::TempDir;

fn ste_lab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ste-lab"))
        .args(args)
        .current_dir(dir)
        .env_remove("STE_LAB_OUT")
        .env_remove("RUST_LOG")
        .output()
        .expect("ste-lab runs")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = ste_lab(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn read(path: &Path) -> Table {
        let mut r = csv::Reader::from_path(path).unwrap();
        let header = r.headers().unwrap().iter().map(String::from).collect();
        let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
        Table { header, rows }
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let c = self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[c].parse().unwrap()).collect()
    }
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.cfg");
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn synth_defaults_span_five_to_ten() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["synth", "--out", "o"]);
    let t = Table::read(&tmp.path().join("o/protocol_ste_tf8.csv"));
    assert_eq!(t.header, ["t", "omega", "mu", "alpha", "k_down", "k_up"]);
    let omega = t.col("omega");
    assert_eq!(omega.len(), 4000);
    let (mu, alpha) = (t.col("mu"), t.col("alpha"));
    assert_eq!((alpha[0], *alpha.last().unwrap()), (5.0, 10.0));
    // ω = α/√(1 − μ²/4) with |μ| ≈ 0.1 at the ends
    for (i, w) in [(0, 5.0), (omega.len() - 1, 10.0)] {
        assert!((omega[i] / w - 1.0).abs() < 2e-3, "omega[{i}] = {}", omega[i]);
        assert!((omega[i] * (1.0 - mu[i] * mu[i] / 4.0).sqrt() - alpha[i]).abs() < 1e-9);
    }
}

#[test]
fn null_transform_gives_constant_columns() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "system.omega_i = 5\nsystem.omega_f = 5\nprotocol.n_grid = 200\n");
    ok(tmp.path(), &["synth", "--config", cfg.to_str().unwrap(), "--out", "o"]);
    let t = Table::read(&tmp.path().join("o/protocol_ste_tf8.csv"));
    assert!(t.col("omega").iter().all(|&w| w == 5.0));
    assert!(t.col("mu").iter().all(|&m| m == 0.0));

    ok(tmp.path(), &["simulate", "--config", cfg.to_str().unwrap(), "--out", "o"]);
    let traj = Table::read(&tmp.path().join("o/trajectory_ste_tf8.csv"));
    for name in ["omega", "beta", "energy", "entropy"] {
        let c = traj.col(name);
        assert!(c.iter().all(|v| (v - c[0]).abs() < 1e-12), "{name}");
    }
    assert!(traj.col("work").iter().all(|&w| w == 0.0));
}

#[test]
fn short_duration_warns_with_the_bound() {
    let tmp = TempDir::new().unwrap();
    let out = ok(tmp.path(), &["synth", "--tf", "7.8", "--out", "o"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    let bound: f64 = stderr
        .split("t_f_min = ")
        .nth(1)
        .and_then(|rest| rest.split_whitespace().next())
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| panic!("no bound in stderr: {stderr}"));
    assert!(bound > 7.8, "bound {bound}");
    assert!(stderr.contains("below the inertial bound"), "{stderr}");

    let quiet = ok(tmp.path(), &["synth", "--tf", "32", "--out", "o"]);
    assert!(!String::from_utf8_lossy(&quiet.stderr).contains("t_f_min"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let tmp = TempDir::new().unwrap();
    for dir in ["a", "b"] {
        ok(tmp.path(), &["synth", "--tf", "8,16", "--out", dir]);
        ok(tmp.path(), &["simulate", "--tf", "8", "--kind", "quench", "--out", dir]);
        ok(tmp.path(), &["sweep", "--tf", "8,16", "--workers", if dir == "a" { "1" } else { "3" }, "--out", dir]);
    }
    for f in ["protocol_ste_tf8.csv", "protocol_ste_tf16.csv", "trajectory_quench_tf8.csv", "sweep.csv", "sweep.gp"] {
        let a = fs::read(tmp.path().join("a").join(f)).unwrap();
        let b = fs::read(tmp.path().join("b").join(f)).unwrap();
        assert!(a == b, "{f} differs");
    }
}

#[test]
fn replayed_protocol_reproduces_the_trajectory() {
    let tmp = TempDir::new().unwrap();
    for dir in ["compression", "expansion"] {
        let cfg = if dir == "expansion" { "system.omega_i = 10\nsystem.omega_f = 5\n" } else { "" };
        let cfg = write_config(tmp.path(), cfg);
        let cfg = cfg.to_str().unwrap();
        ok(tmp.path(), &["synth", "--config", cfg, "--out", dir]);
        ok(tmp.path(), &["simulate", "--config", cfg, "--out", dir]);
        let proto = format!("{dir}/protocol_ste_tf8.csv");
        ok(tmp.path(), &["simulate", "--config", cfg, "--protocol", &proto, "--out", dir]);
        let direct = Table::read(&tmp.path().join(dir).join("trajectory_ste_tf8.csv"));
        let replay = Table::read(&tmp.path().join(dir).join("trajectory_custom_protocol_ste_tf8.csv"));
        assert_eq!(direct.header, replay.header);
        for name in &direct.header {
            for (a, b) in direct.col(name).iter().zip(replay.col(name)) {
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{dir} {name}: {a} vs {b}");
            }
        }
    }
}

/// Sign changes among samples outside the ±`band` convergence window.
fn sign_changes(v: &[f64], band: f64) -> usize {
    let signs: Vec<bool> = v.iter().filter(|x| x.abs() > band).map(|x| *x > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[test]
fn ste_energy_overshoots_the_target_once() {
    let tmp = TempDir::new().unwrap();
    let bath = BathParams::default();
    for (dir, cfg, omega_f) in [("c", "", 10.0), ("e", "system.omega_i = 10\nsystem.omega_f = 5\n", 5.0)] {
        let cfg = write_config(tmp.path(), cfg);
        ok(tmp.path(), &["simulate", "--config", cfg.to_str().unwrap(), "--out", dir]);
        let t = Table::read(&tmp.path().join(dir).join("trajectory_ste_tf8.csv"));
        let target = thermal_energy(omega_f, &bath);
        let gap: Vec<f64> = t.col("energy").iter().map(|e| e - target).collect();
        assert_eq!(sign_changes(&gap, 1e-2 * target), 1, "{dir}");
        assert!(gap.last().unwrap().abs() < 1e-2 * target);
    }
}

#[test]
fn quench_energy_is_a_step_then_a_decay() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["simulate", "--kind", "quench", "--tf", "40", "--out", "o"]);
    let t = Table::read(&tmp.path().join("o/trajectory_quench_tf40.csv"));
    let e = t.col("energy");
    let target = thermal_energy(10.0, &BathParams::default());
    assert!(e[1] - e[0] > 0.5 * (target - e[0]));
    let gaps: Vec<f64> = e[1..].iter().map(|x| (x - target).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let code = |args: &[&str]| ste_lab(tmp.path(), args).status.code();
    assert_eq!(code(&["synth", "--help"]), Some(0));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["synth", "--kind", "sideways"]), Some(1));
    assert_eq!(code(&["synth", "--tf", "16,8"]), Some(1));
    assert_eq!(code(&["synth", "--kind", "custom"]), Some(1));
    assert_eq!(code(&["synth", "--tf", "4", "--out", "o"]), Some(2));

    let cfg = write_config(tmp.path(), "bath.T = 2\n\nsystem.omega_i = -1\n");
    let out = ste_lab(tmp.path(), &["synth", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3") && stderr.contains("omega_i"), "{stderr}");

    // two near-zero α samples between large ones: the interpolated midpoint
    // rate goes negative during integration
    let mut text = String::from("t,omega,mu,alpha,k_down,k_up\n");
    for (i, a) in [10.0, 10.0, 1e-6, 1e-6, 10.0, 10.0].iter().enumerate() {
        text.push_str(&format!("{},10,0,{a},0,0\n", i as f64 * 0.1));
    }
    fs::write(tmp.path().join("bad.csv"), text).unwrap();
    let out = ste_lab(tmp.path(), &["simulate", "--protocol", "bad.csv", "--out", "o"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("t = 0.2"));
}

#[test]
fn out_directory_env_override() {
    let tmp = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ste-lab"))
        .args(["synth", "--kind", "quench", "--out", "flag"])
        .current_dir(tmp.path())
        .env("STE_LAB_OUT", "env")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(tmp.path().join("env/protocol_quench_tf8.csv").exists());
    assert!(!tmp.path().join("flag").exists());
}

/// Numeric fields agree to 1e-9 relative; text fields exactly. Set
/// `STE_LAB_BLESS=1` to rewrite the stored files.
fn check_golden(produced: &Path, golden: &str) {
    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(golden);
    if std::env::var_os("STE_LAB_BLESS").is_some() {
        fs::create_dir_all(golden_path.parent().unwrap()).unwrap();
        fs::copy(produced, &golden_path).unwrap();
        return;
    }
    let (a, b) = (Table::read(produced), Table::read(&golden_path));
    assert_eq!(a.header, b.header, "{golden}");
    assert_eq!(a.rows.len(), b.rows.len(), "{golden}");
    for (i, (ra, rb)) in a.rows.iter().zip(&b.rows).enumerate() {
        for (j, (x, y)) in ra.iter().zip(rb).enumerate() {
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(x), Ok(y)) if x.is_finite() && y.is_finite() => {
                    assert!((x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1e-12), "{golden} row {i} {}: {x} vs {y}", a.header[j])
                }
                _ => assert_eq!(x, y, "{golden} row {i} {}", a.header[j]),
            }
        }
    }
}

#[test]
fn golden_files() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "protocol.n_grid = 400\n");
    let cfg = cfg.to_str().unwrap();
    ok(tmp.path(), &["synth", "--config", cfg, "--out", "o"]);
    ok(tmp.path(), &["simulate", "--config", cfg, "--out", "o"]);
    ok(tmp.path(), &["simulate", "--config", cfg, "--kind", "quench", "--out", "o"]);
    ok(tmp.path(), &["compare", "--config", cfg, "--tf", "8,16,32", "--out", "o"]);
    for f in ["protocol_ste_tf8.csv", "trajectory_ste_tf8.csv", "trajectory_quench_tf8.csv", "compare.csv"] {
        check_golden(&tmp.path().join("o").join(f), f);
    }
}
