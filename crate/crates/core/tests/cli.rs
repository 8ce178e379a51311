use std::path::Path;
use std::process::Command;

fn elm() -> Command {
    Command::new(env!("CARGO_BIN_EXE_elm"))
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn sweep_writes_one_row_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let status = elm()
        .args([
            "sweep",
            "--problem",
            "sin_bump",
            "--k",
            "1",
            "--n-list",
            "10,20,40,80",
        ])
        .args(["--m-ratio", "0.5", "--seeds", "1,2,3", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let (header, rows) = read_csv(&out);
    assert_eq!(
        header,
        elm_core::cli::SWEEP_HEADER
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
    );
    assert_eq!(rows.len(), 12);
    for row in &rows {
        assert_eq!(row[0], "sin_bump");
        let l2: f64 = row[4].parse().unwrap();
        assert!(l2.is_finite());
        assert!(row[7].is_empty(), "no FD requested");
        assert!(row[11] == "ok" || row[11] == "rank_deficient");
    }
    let ms: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    assert_eq!(&ms[..3], &["5", "5", "5"]);
}

#[test]
fn sweep_output_is_deterministic_without_timing() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        let status = elm()
            .args(["sweep", "--problem", "reaction_layer", "--lambda", "300"])
            .args([
                "--n-list",
                "20,40",
                "--m-list",
                "10,15",
                "--seeds",
                "4,5",
                "--omit-timing",
            ])
            .args(extra)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv", &[]);
    let b = run("b.csv", &["--sequential"]);
    assert_eq!(a, b);
}

#[test]
fn solve_writes_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let output = elm()
        .args([
            "solve",
            "--problem",
            "advection_layer",
            "--mu",
            "1",
            "--gamma",
            "100",
        ])
        .args(["--n", "320", "--m", "160", "--seed", "7", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("l2_error="));
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["x", "u_approx", "u_exact", "abs_error"]);
    assert_eq!(rows.len(), 1001);
    assert_eq!(rows[0][0], "0");
    assert_eq!(rows[1000][0], "1");
    let worst = rows
        .iter()
        .map(|r| r[3].parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(worst < 1e-3, "{worst}");
}

#[test]
fn fd_compare_fills_reference_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fd.csv");
    let status = elm()
        .args([
            "fd-compare",
            "--problem",
            "polynomial",
            "--p",
            "10",
            "--n-list",
            "40,80",
        ])
        .args(["--m-ratio", "0.5", "--seeds", "1", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let (_, rows) = read_csv(&out);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[7].parse::<f64>().unwrap() > 0.0));
}

#[test]
fn peclet_sweep_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pe.csv");
    let status = elm()
        .args([
            "peclet",
            "--kind",
            "advection",
            "--n",
            "40",
            "--seeds",
            "1,2",
        ])
        .args(["--grid-size", "1000", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let (header, rows) = read_csv(&out);
    assert_eq!(header.len(), 14);
    assert_eq!(&header[12..], ["coefficient", "peclet"]);
    assert_eq!(rows.len(), 20);
    let pe100 = rows.iter().find(|r| r[12] == "100").unwrap();
    assert_eq!(pe100[13], "50");
}

#[test]
fn invalid_invocations_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let bogus = elm()
        .args(["solve", "--problem", "bogus", "--n", "20", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(bogus.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&bogus.stderr);
    assert!(msg.contains("sin_bump") && msg.contains("comb"), "{msg}");

    let cases: [&[&str]; 5] = [
        &["solve", "--problem", "sin_bump", "--k", "0", "--n", "20"],
        &["solve", "--problem", "sin_bump", "--k", "abc", "--n", "20"],
        &[
            "solve",
            "--problem",
            "sin_bump",
            "--n",
            "20",
            "--m",
            "10",
            "--m-ratio",
            "0.5",
        ],
        &["sweep", "--problem", "sin_bump", "--n-list", "40,20"],
        &[
            "solve",
            "--problem",
            "sin_bump",
            "--n",
            "20",
            "--param",
            "gamma=3",
        ],
    ];
    for args in cases {
        let o = elm().args(args).arg("--out").arg(&out).output().unwrap();
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    assert!(!out.exists());

    let o = elm()
        .env("ELM_THREADS", "zero")
        .args(["solve", "--problem", "sin_bump", "--n", "20", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_cap_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let status = elm()
        .env("ELM_THREADS", "2")
        .args([
            "sweep",
            "--problem",
            "gaussian_peak",
            "--n-list",
            "20",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
}
