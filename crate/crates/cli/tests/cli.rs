use std::fs;
use std::process::{Command, Output};

use akx_core::closed_form::w_closed;
use akx_core::io::parse_trace;
use akx_core::io::{parse_setfam, write_setfam};
use akx_core::{frankl, Rat, SetFamily};
use num::BigInt;

fn akx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_akx")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn w_command() {
    let o = akx(&["w", "--n", "4", "--t", "2", "--p", "3/10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("9/100 (0.09) r={0}"));
    assert!(stdout(&akx(&["w", "--n", "3", "--t", "1", "--p", "1/4"])).starts_with("1/4 "));
    assert_eq!(akx(&["w", "--n", "2", "--t", "3", "--p", "1/2"]).status.code(), Some(2));
    assert_eq!(akx(&["w", "--n", "2", "--t", "1", "--p", "0.5"]).status.code(), Some(2));
    assert_eq!(akx(&["w", "--n", "2", "--t", "1", "--p", "3/2"]).status.code(), Some(2));
}

#[test]
fn table_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    let o = akx(&["table", "--n", "20", "--tmax", "5", "--grid", "200", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,p_num,p_den,w_num,w_den,optimal_r,w_float"));
    let mut seen_quarter = false;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let big = |s: &str| s.parse::<BigInt>().unwrap();
        let (t, p, w) = (f[0].parse().unwrap(), Rat::new(big(f[1]), big(f[2])), Rat::new(big(f[3]), big(f[4])));
        assert_eq!(w, w_closed(20, t, &p).unwrap().value, "{line}");
        seen_quarter |= line.starts_with("1,1,4,1,4,");
    }
    assert!(seen_quarter);
    let bad = dir.path().join("missing").join("w.csv");
    assert_eq!(akx(&["table", "--out", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_command() {
    let o = akx(&["verify", "--suite", "katona"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS criterion-6"));
    let o = akx(&["verify", "--suite", "closed-form"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().last().unwrap().starts_with("summary suite=closed-form passed=4 total=4"));
    assert_eq!(akx(&["verify", "--suite", "bogus"]).status.code(), Some(2));
}

#[test]
fn thread_cap() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_akx"))
            .args(["verify", "--suite", "katona"])
            .env("AKX_THREADS", v)
            .output()
            .unwrap()
    };
    assert_eq!(run("1").status.code(), Some(0));
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("many").status.code(), Some(2));
}

#[test]
fn compress_command() {
    let dir = tempfile::tempdir().unwrap();
    let (input, out, trace) = (dir.path().join("in"), dir.path().join("out"), dir.path().join("trace"));
    let star3 = SetFamily::from_sets(3, &[&[3], &[1, 3], &[2, 3], &[1, 2, 3]]);
    fs::write(&input, write_setfam(&star3)).unwrap();
    let o = akx(&[
        "compress",
        "--in",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--p",
        "1/3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("measure before: 1/3"));
    assert!(stdout(&o).contains("measure after:  1/3"));
    let star1 = SetFamily::from_sets(3, &[&[1], &[1, 2], &[1, 3], &[1, 2, 3]]);
    assert_eq!(parse_setfam(&fs::read_to_string(&out).unwrap()).unwrap(), star1);
    assert!(!parse_trace(&fs::read_to_string(&trace).unwrap()).unwrap().is_empty());

    let fr = frankl(5, 2, 1).unwrap();
    fs::write(&input, write_setfam(&fr)).unwrap();
    assert_eq!(
        akx(&["compress", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code(),
        Some(0)
    );
    assert_eq!(fs::read_to_string(&out).unwrap(), write_setfam(&fr));

    fs::write(&input, "SETFAM 1\nn=3\n1,2\n1,4\n").unwrap();
    let o = akx(&["compress", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn stabilize_command() {
    let dir = tempfile::tempdir().unwrap();
    let (input, out) = (dir.path().join("in"), dir.path().join("out"));
    let f = SetFamily::from_sets(4, &[&[1, 2], &[2, 3], &[1, 3], &[1, 2, 3, 4]]);
    fs::write(&input, write_setfam(&f)).unwrap();
    let args = ["stabilize", "--t", "1", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap(), "--p", "1/2"];
    let o = akx(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS 1-intersecting"));
    assert!(stdout(&o).contains("PASS |A|+|B| >= n+t-1"));
    let g = parse_setfam(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(g.is_t_intersecting(1));
    assert_eq!(g.len(), f.len());

    let args = ["stabilize", "--t", "2", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()];
    assert_eq!(akx(&args).status.code(), Some(2));
}
