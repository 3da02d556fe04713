//! End-to-end runs of the `duopoly` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("duopoly-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn duopoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_duopoly")).args(args).output().unwrap()
}

fn run_ok(args: &[&str]) {
    let out = duopoly(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn reference() -> String {
    configs().join("reference.conf").display().to_string()
}

#[test]
fn malformed_config_exits_2_and_names_the_key() {
    let dir = scratch("bad");
    let text = std::fs::read_to_string(configs().join("reference.conf")).unwrap();
    for (from, to, key) in [
        ("sigma = 1.2", "sigma = oops", "sigma"),
        ("theta = 0.6", "theta = 2", "theta"),
    ] {
        let path = dir.join(format!("{key}.conf"));
        std::fs::write(&path, text.replace(from, to)).unwrap();
        let out = duopoly(&[
            "solve",
            "--config",
            path.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&out.stderr).contains(key));
    }
    let out = duopoly(&["solve", "--config", "/nonexistent.conf", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_geometry_exits_3_with_error_report() {
    let dir = scratch("geom");
    let text = std::fs::read_to_string(configs().join("reference.conf")).unwrap();
    let path = dir.join("no_benefit.conf");
    std::fs::write(&path, text.replace("xi = 30", "xi = 0")).unwrap();
    let out = duopoly(&[
        "intervals",
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&dir.join("error.json"))["exit_code"], 3);
}

#[test]
fn always_innovate_solution_has_one_threshold() {
    let dir = scratch("ai");
    let cfg = configs().join("always_innovate.conf");
    run_ok(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    let low = &json(&dir.join("solve.json"))["follower_low"];
    assert_eq!(low["regime"], "AlwaysInnovate");
    for key in ["z1", "z2", "a0", "c0"] {
        assert!(low[key].is_null(), "{key} = {}", low[key]);
    }
    assert!((low["z3"].as_f64().unwrap() - 40.0 / 3.0).abs() < 1e-12);
    assert!(low["b0"].as_f64().unwrap() > 0.0);
}

#[test]
fn curves_csv_schema_and_shape() {
    let dir = scratch("curves");
    run_ok(&[
        "curves",
        "--config",
        &reference(),
        "--out",
        dir.to_str().unwrap(),
        "--grid",
        "400",
    ]);
    let text = std::fs::read_to_string(dir.join("curves.csv")).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(
        lines.next().unwrap(),
        "z,C,F,L,F_L,F_H,L_L,L_H,alpha_i,alpha_j,region_label"
    );
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    assert_eq!(rows.len(), 400);
    let num = |r: &Vec<String>, k: usize| r[k].parse::<f64>().unwrap();
    // C is affine in z.
    let (z0, c0) = (num(&rows[0], 0), num(&rows[0], 1));
    let (z1, c1) = (num(&rows[399], 0), num(&rows[399], 1));
    for r in &rows {
        let expect = c0 + (c1 - c0) * (num(r, 0) - z0) / (z1 - z0);
        assert!((num(r, 1) - expect).abs() < 1e-9 * (1.0 + expect.abs()));
    }
    // L >= F on exactly two runs of the grid.
    let flags: Vec<bool> = rows.iter().map(|r| num(r, 3) >= num(r, 2)).collect();
    let runs = flags.windows(2).filter(|w| !w[0] && w[1]).count() + flags[0] as usize;
    assert_eq!(runs, 2);
    // The two firms mix with equal intensity only inside the preemption bands.
    for r in &rows {
        if r[10].starts_with("preempt") {
            assert_eq!(r[8], r[9]);
        } else {
            assert_eq!(num(r, 9), 0.0);
        }
    }
}

#[test]
fn outputs_are_reproducible() {
    let (a, b) = (scratch("rep-a"), scratch("rep-b"));
    for dir in [&a, &b] {
        let out = dir.to_str().unwrap();
        run_ok(&["intervals", "--config", &reference(), "--out", out]);
        run_ok(&["bsets", "--config", &reference(), "--out", out]);
        run_ok(&["curves", "--config", &reference(), "--out", out, "--grid", "50"]);
        run_ok(&[
            "simulate",
            "--config",
            &reference(),
            "--out",
            out,
            "--z0",
            "9.5",
            "--paths",
            "4000",
            "--dt",
            "0.01",
        ]);
    }
    for name in ["intervals.json", "bsets.json", "curves.csv", "simulate.json"] {
        assert_eq!(
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
    let sim = json(&a.join("simulate.json"));
    assert_eq!(sim["region"], "vacuum");
    let bsets = json(&a.join("bsets.json"));
    assert_eq!(bsets["vacuum"], true);
}
