use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_berrut-lab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV, split into cells, after checking the schema line.
fn rows(o: &Output) -> Vec<Vec<String>> {
    let text = stdout(o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("#schema=1"));
    lines.skip(1).map(split).collect()
}

fn split(line: &str) -> Vec<String> {
    let (mut cells, mut cur, mut quoted) = (Vec::new(), String::new(), false);
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted && chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            '"' => quoted = !quoted,
            ',' if !quoted => cells.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    cells.push(cur);
    cells
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn interpolate_rows() {
    let o = run(&[
        "interpolate",
        "--fn",
        "exp",
        "--n",
        "101",
        "--scheme",
        "berrut",
        "--x",
        "0.3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().nth(1) == Some("n,x,value,error"));
    let r = rows(&o);
    assert_eq!(r.len(), 1);
    assert!((num(&r[0][2]) - 0.3f64.exp()).abs() < 1e-2);

    let o = run(&["interpolate", "--fn", "const1", "--n", "10", "--x", "0.5"]);
    assert!(num(&rows(&o)[0][3]).abs() <= 1e-13);

    let o = run(&["interpolate", "--fn", "quadratic", "--n", "100", "--x", "-1"]);
    assert_eq!(num(&rows(&o)[0][2]), 1.0);

    let o = run(&[
        "interpolate",
        "--fn",
        "linear",
        "--n",
        "50",
        "--scheme",
        "halved",
        "--x",
        "0.123,-0.5",
    ]);
    for r in rows(&o) {
        assert!(num(&r[3]).abs() <= 1e-10);
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["interpolate", "--fn", "nope", "--n", "5", "--x", "0"][..],
        &["interpolate", "--fn", "exp", "--n", "0", "--x", "0"][..],
        &["interpolate", "--fn", "exp", "--n", "5", "--x", "1.5"][..],
        &["limits", "--rational", "3"][..],
        &["limits", "--rational", "0/1"][..],
        &["limits", "--irrational", "1.2"][..],
        &["convergence", "--fn", "exp", "--n", "9:3"][..],
        &["verify", "--only", "bogus"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn convergence_ladder() {
    let o = run(&["convergence", "--fn", "exp", "--parity", "odd", "--n", "51:3201:*2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 7);
    let corrected: Vec<f64> = r.iter().map(|r| num(&r[4])).collect();
    assert!(corrected.windows(2).all(|w| w[1] < w[0]), "{corrected:?}");
}

#[test]
fn convergence_bv_bound_and_warning() {
    let o = run(&[
        "convergence",
        "--fn",
        "xabsx",
        "--parity",
        "both",
        "--n",
        "10:2000:97",
        "--probes",
        "501",
    ]);
    let r = rows(&o);
    assert!(r.iter().any(|r| r[1] == "odd") && r.iter().any(|r| r[1] == "even"));
    assert!(r.iter().all(|r| r[6] == "true"));

    let o = run(&["convergence", "--fn", "abs", "--n", "11:21:2"]);
    assert_eq!(o.status.code(), Some(0));
    for r in rows(&o) {
        assert_eq!((r[5].as_str(), r[6].as_str()), ("", ""));
        assert!(!r[7].is_empty());
    }
}

#[test]
fn limits_sets() {
    let r = rows(&run(&["limits", "--rational", "1/1", "--parity", "odd"]));
    let vals: Vec<f64> = r.iter().map(|r| num(&r[3])).collect();
    assert_eq!(vals.len(), 2);
    for v in vals {
        assert!((v.abs() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    let r = rows(&run(&["limits", "--rational", "1/3", "--fn", "quadratic"]));
    let even: Vec<&Vec<String>> = r.iter().filter(|r| r[0] == "denominator" && r[1] == "even").collect();
    assert_eq!(even.len(), 2);
    assert!(even.iter().all(|r| r[5].ends_with("A(1/9)")));
    assert!(r.iter().any(|r| r[0] == "error:quadratic" && r[1] == "even"));

    let r = rows(&run(&[
        "limits",
        "--irrational",
        "0.41421356",
        "--fn",
        "quadratic",
        "--parity",
        "odd",
    ]));
    let err = r.iter().find(|r| r[0] == "error:quadratic").unwrap();
    assert_eq!(err[5], "interval");
    assert!((num(&err[3]) + num(&err[4])).abs() < 1e-15);
}

#[test]
fn output_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let p = path.to_str().unwrap();
    let o = run(&[
        "--output",
        p,
        "interpolate",
        "--fn",
        "exp",
        "--n",
        "8",
        "--x",
        "0.1,0.2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("#schema=1\nn,x,value,error\n"));
    assert_eq!(text.lines().count(), 4);
    assert!(!text.contains('\r'));

    let o = run(&[
        "interpolate",
        "--fn",
        "exp",
        "--n",
        "8",
        "--x",
        "0.1",
        "--format",
        "text",
    ]);
    assert!(stdout(&o).starts_with("n "));
}

#[test]
fn verify_sections_and_exit_codes() {
    let o = run(&["verify", "--only", "lemA,support"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS lemA") && text.contains("PASS support"));

    let o = run(&["verify", "--only", "lemDen", "--samples", "300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("residual/bound:"));

    let o = run(&["--format", "csv", "verify", "--only", "mainR2", "--m", "256,4096"]);
    let r = rows(&o);
    assert_eq!(r.len(), 6);
    assert_eq!(r.iter().filter(|r| r[2] == "PASS").count(), 4);
}

#[test]
fn csv_is_deterministic_and_thread_independent() {
    let args = [
        "--format",
        "csv",
        "verify",
        "--only",
        "lemDen,uk",
        "--samples",
        "200",
        "--seed",
        "3",
    ];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_berrut-lab"))
        .args(args)
        .env("BERRUT_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "--format",
        "csv",
        "verify",
        "--only",
        "lemDen,uk",
        "--samples",
        "200",
        "--seed",
        "4",
    ]);
    assert_ne!(a.stdout, c.stdout);

    let bad = Command::new(env!("CARGO_BIN_EXE_berrut-lab"))
        .args(["verify", "--only", "lemA"])
        .env("BERRUT_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
