//! Pinned CSV output of the figure configurations and the CLI contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const REL_TOL: f64 = 1e-9;
/// Columns read off finite differences of ln G carry about 1e-9 relative
/// truncation noise of their own.
const FD_COLUMNS: &[&str] = &["var_w", "cv_power"];
const FD_REL_TOL: f64 = 1e-7;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn qotto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qotto"))
        .current_dir(root())
        .args(args)
        .output()
        .expect("run qotto")
}

fn stdout(args: &[&str]) -> String {
    let out = qotto(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(root().join("crates/cli/tests/fixtures").join(name)).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-14
}

/// Numeric cells within `REL_TOL`, everything else verbatim. `statistical`
/// columns get the tolerance returned by the closure instead.
fn compare(actual: &str, expected: &str, statistical: &dyn Fn(&str, &[&str], &[&str]) -> Option<f64>) {
    let (a, e): (Vec<&str>, Vec<&str>) = (actual.lines().collect(), expected.lines().collect());
    assert_eq!(a.first(), e.first(), "header");
    assert_eq!(a.len(), e.len(), "row count");
    let header: Vec<&str> = e[0].split(',').collect();
    for (k, (ra, re)) in a.iter().zip(&e).enumerate().skip(1) {
        let (ca, ce): (Vec<&str>, Vec<&str>) = (ra.split(',').collect(), re.split(',').collect());
        assert_eq!(ca.len(), ce.len(), "row {k}");
        for (j, (x, y)) in ca.iter().zip(&ce).enumerate() {
            if let Some(tol) = statistical(header[j], &ca, &ce) {
                let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
                assert!((x - y).abs() <= tol, "row {k} column {}: {x} vs {y} (tol {tol})", header[j]);
                continue;
            }
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(p), Ok(q)) => {
                    let tol = if FD_COLUMNS.contains(&header[j]) { FD_REL_TOL } else { REL_TOL };
                    assert!(close(p, q, tol), "row {k} column {}: {x} vs {y}", header[j]);
                }
                _ => assert_eq!(x, y, "row {k} column {}", header[j]),
            }
        }
    }
}

fn exact(_: &str, _: &[&str], _: &[&str]) -> Option<f64> {
    None
}

#[test]
fn fig1_correlations() {
    compare(&stdout(&["correlations", "--config", "configs/fig1.conf"]), &fixture("fig1.csv"), &exact);
}

#[test]
fn fig3_cycle() {
    compare(&stdout(&["cycle", "--config", "configs/fig3.conf"]), &fixture("fig3.csv"), &exact);
}

#[test]
fn fig4_cycle() {
    compare(&stdout(&["cycle", "--config", "configs/fig4.conf"]), &fixture("fig4.csv"), &exact);
    compare(
        &stdout(&["cycle", "--config", "configs/fig4.conf", "--set", "discord=0.2"]),
        &fixture("fig4_discord_0.2.csv"),
        &exact,
    );
}

#[test]
fn fig5_cycle() {
    compare(&stdout(&["cycle", "--config", "configs/fig5.conf"]), &fixture("fig5.csv"), &exact);
}

#[test]
fn fig6_cycle() {
    compare(&stdout(&["cycle", "--config", "configs/fig6a.conf"]), &fixture("fig6a.csv"), &exact);
    compare(&stdout(&["cycle", "--config", "configs/fig6b.conf"]), &fixture("fig6b.csv"), &exact);
    compare(
        &stdout(&["cycle", "--config", "configs/fig6b.conf", "--set", "discord=0.6"]),
        &fixture("fig6b_discord_0.6.csv"),
        &exact,
    );
}

#[test]
fn sample_histogram() {
    let n = 100_000.0;
    // counts and frequencies within five binomial standard deviations
    let stat = |col: &str, _: &[&str], row: &[&str]| {
        let p: f64 = row[4].parse().ok()?;
        let sd = (p * (1.0 - p) / n).sqrt() * 5.0 + 1.0 / n;
        match col {
            "frequency" => Some(sd),
            "count" => Some(sd * n),
            _ => None,
        }
    };
    let out = stdout(&["sample", "--config", "configs/verify.conf", "--samples", "100000"]);
    compare(&out, &fixture("sample.csv"), &stat);
}

#[test]
fn correlations_row_at_zero_coupling() {
    let out = stdout(&["correlations", "--config", "configs/fig1.conf"]);
    let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[0], 0.0);
    assert!(row[1].abs() < 1e-15);
    assert_eq!(row[2], 0.0);
}

#[test]
fn fig3_modes_in_order() {
    let out = stdout(&["cycle", "--config", "configs/fig3.conf"]);
    let header: Vec<&str> = out.lines().next().unwrap().split(',').collect();
    let mode = header.iter().position(|h| *h == "mode").unwrap();
    let mut seq: Vec<String> = Vec::new();
    for line in out.lines().skip(1) {
        let m = line.split(',').nth(mode).unwrap().to_string();
        if seq.last() != Some(&m) {
            seq.push(m);
        }
    }
    assert_eq!(seq, ["refrigerator", "heater", "engine"]);
}

#[test]
fn fig4_approaches_otto_efficiency() {
    let out = stdout(&["cycle", "--config", "configs/fig4.conf"]);
    let header: Vec<&str> = out.lines().next().unwrap().split(',').collect();
    let eta = header.iter().position(|h| *h == "eta_th").unwrap();
    let last: f64 = out.lines().last().unwrap().split(',').nth(eta).unwrap().parse().unwrap();
    assert!((last - (1.0 - 2.0 / 3.8)).abs() < 1e-3);
}

#[test]
fn engine_rows_respect_tur() {
    for conf in ["configs/fig3.conf", "configs/fig5.conf", "configs/fig6a.conf"] {
        let out = stdout(&["cycle", "--config", conf]);
        let header: Vec<&str> = out.lines().next().unwrap().split(',').collect();
        let col = |n: &str| header.iter().position(|h| *h == n).unwrap();
        let (mode, cv, bound) = (col("mode"), col("cv_power"), col("tur_bound"));
        for line in out.lines().skip(1) {
            let cells: Vec<&str> = line.split(',').collect();
            if cells[mode] == "engine" {
                let (c, b): (f64, f64) = (cells[cv].parse().unwrap(), cells[bound].parse().unwrap());
                assert!(c >= b, "{conf}: {line}");
            }
        }
    }
}

#[test]
fn verify_passes_and_is_deterministic() {
    let a = qotto(&["verify", "--config", "configs/verify.conf", "--samples", "200000"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    let b = qotto(&["verify", "--config", "configs/verify.conf", "--samples", "200000"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_fig3_point_passes() {
    let out = qotto(&["verify", "--set", "xi=0", "--samples", "100000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn undersized_cutoff_fails_the_tail_check() {
    let out = qotto(&["verify", "--config", "configs/verify.conf", "--dim", "12", "--samples", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    let report = String::from_utf8_lossy(&out.stdout);
    assert!(report.lines().any(|l| l.starts_with("FAIL steady_state_tail")), "{report}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("steady_state_tail"));
}

#[test]
fn exit_codes() {
    assert_eq!(qotto(&["cycle", "--bogus"]).status.code(), Some(1));
    assert_eq!(qotto(&["cycle", "--set", "nonsense=1"]).status.code(), Some(1));
    assert_eq!(qotto(&["cycle", "--config", "no/such/file.conf"]).status.code(), Some(1));
    assert_eq!(qotto(&["cycle", "--set", "omega_h=1"]).status.code(), Some(1));
    assert_eq!(qotto(&["cycle", "--set", "variable=xi", "--set", "lo=0", "--set", "hi=1", "--set", "xi=1"]).status.code(), Some(1));
    assert_eq!(qotto(&["sample", "--set", "discord=0.999999"]).status.code(), Some(1));
    assert_eq!(qotto(&["cycle", "--variant", "lukewarm"]).status.code(), Some(1));
    // pairs inverting the hot bath leave the numerical domain
    let out = qotto(&["sample", "--dim", "16", "--set", "xi=3", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(qotto(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("qotto-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig1.csv");
    let p = path.to_str().unwrap();
    assert!(qotto(&["correlations", "--config", "configs/fig1.conf", "--out", p]).status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&["correlations", "--config", "configs/fig1.conf"]));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn flags_override_config_file() {
    let out = stdout(&["cycle", "--config", "configs/fig4.conf", "--variant", "cold-nonthermal", "--set", "points=3"]);
    assert_eq!(out.lines().count(), 4);
    let base = stdout(&["cycle", "--config", "configs/fig4.conf", "--set", "points=3"]);
    assert_ne!(out, base);
}
