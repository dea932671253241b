use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oversmooth"))
}

fn scratch(name: &str) -> PathBuf {
    let d = Path::new(env!("CARGO_TARGET_TMPDIR"))
        .join("cli")
        .join(name);
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data")
        .join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn spectrum_writes_csv() {
    let d = scratch("spectrum");
    let out = d.join("eig.csv");
    let o = bin()
        .args(["spectrum", "--graph", "gen:path:3", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# oversmooth "));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "index,eigenvalue,is_zero");
    assert_eq!(rows.len(), 4);
    assert!(stdout(&o).contains("kernel_dim=1"));
}

#[test]
fn spectrum_of_edge_list_file() {
    let o = bin()
        .args(["spectrum", "--graph"])
        .arg(data("two_triangles.edges"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("nodes=6 edges=7 components=1"));
}

#[test]
fn malformed_edge_list_exits_2() {
    let d = scratch("bad");
    let p = d.join("bad.edges");
    fs::write(&p, "0 1\n1 1\n").unwrap();
    let o = bin()
        .args(["spectrum", "--graph"])
        .arg(&p)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn energy_from_csv_signal() {
    let d = scratch("energy");
    let p = d.join("x.csv");
    fs::write(&p, "1\n0\n").unwrap();
    let o = bin()
        .args(["energy", "--graph", "gen:path:2", "--signal"])
        .arg(&p)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("energy=5.0000000000000000e-1"),
        "{}",
        stdout(&o)
    );
    let o = bin()
        .args(["energy", "--graph", "gen:path:3", "--signal"])
        .arg(&p)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_standard_and_filter_decay() {
    let d = scratch("run");
    let out = d.join("traj.csv");
    let o = bin()
        .args(["run", "--config"])
        .arg(data("run.toml"))
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = fs::read_to_string(&out).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        body[0],
        "layer,energy,rayleigh,bound_min,bound_safe,channels"
    );
    assert_eq!(body.len(), 8);
    assert!(text.contains("# summary: depth=6"));

    let o = bin()
        .args([
            "run",
            "--mode",
            "filter-decay",
            "--epsilon",
            "0.05",
            "--config",
        ])
        .arg(data("run.toml"))
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict="));
}

#[test]
fn run_without_layers_exits_2() {
    let d = scratch("nolayers");
    let cfg = d.join("c.toml");
    fs::write(&cfg, "graph = \"gen:ring:5\"\nlayers = []\n").unwrap();
    let o = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(d.join("o.csv"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_writes_summary_and_exits_0() {
    let d = scratch("verify");
    let o = bin()
        .args([
            "verify", "--suite", "weights", "--trials", "20", "--seed", "3", "--out",
        ])
        .arg(&d)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("weights passed=20 failed=0"));
    let summary = fs::read_to_string(d.join("summary.toml")).unwrap();
    assert!(summary.contains("statement = \"weights\""));
    let csv = fs::read_to_string(d.join("weights.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 21);
}

#[test]
fn sweep_writes_rows_and_duality() {
    let d = scratch("sweep");
    let cfg = d.join("sweep.toml");
    fs::write(
        &cfg,
        "graph = \"gen:erdos-renyi:30:0.2:1\"\ndrop_ratios = [0.2]\nboost_counts = [3]\ntrials = 4\nbase_seed = 1\nprobe = { kind = \"fixed_field\", channels = 2 }\n",
    )
    .unwrap();
    let out = d.join("rows.csv");
    let o = bin()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rows = fs::read_to_string(&out).unwrap();
    assert!(rows.contains("# | edge_selection = \"uniform\""));
    assert_eq!(rows.lines().filter(|l| !l.starts_with('#')).count(), 9);
    let duality = fs::read_to_string(d.join("rows.duality.csv")).unwrap();
    assert!(duality.contains("boost_count,drop_ratio,trials"));
}

#[test]
fn unknown_subcommand_exits_2() {
    let o = bin().arg("plot").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
