use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn system(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../systems")
        .join(name);
    path.to_str().unwrap().to_string()
}

fn plifs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plifs"))
        .args(args)
        .env_remove("PLIFS_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Value after `key = ` on the first line that starts with `key`.
fn value_of(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.trim_start().strip_prefix('=')))
        .and_then(|v| v.split_whitespace().next())
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn check_cantor() {
    let text = stdout(&plifs(&["check", &system("cantor.plifs")]));
    assert!(text.contains("type vector: 0,0"));
    assert!(text.contains("IOSC: yes (gap 0.333333)"), "{text}");
    assert!(text.contains("small: yes"));
    assert!(text.contains("regular: trivially (no breaks)"));
}

#[test]
fn check_break_on_attractor() {
    let text = stdout(&plifs(&["check", &system("break_on_attractor.plifs")]));
    assert!(text.contains("IOSC: yes (gap 0.4)"), "{text}");
    assert!(text.contains("small: no (map 1: ρ=0.8 ≥ 0.5)"), "{text}");
    assert!(text.contains("break 0.5 (map 1): UNDECIDED"), "{text}");
}

#[test]
fn malformed_spec_exits_2_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.plifs");
    fs::write(&path, "# two maps\nmap tau=0 slopes=0.5\nmap tau=0.5 slopes=0.2,0.3\n").unwrap();
    let out = plifs(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    fs::write(&path, "map tau=0 slopes=1.5\n").unwrap();
    assert_eq!(plifs(&["dim", "natural", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(plifs(&["check", "/no/such/file.plifs"]).status.code(), Some(2));
}

#[test]
fn unknown_flag_is_rejected() {
    let out = plifs(&["check", &system("cantor.plifs"), "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn natural_sequence_of_example() {
    let text = stdout(&plifs(&["dim", "natural", &system("break_on_attractor.plifs"), "--n", "6..11"]));
    let expected = [0.57913815, 0.58216737, 0.58451333, 0.58638426, 0.58791145, 0.58918180];
    for (n, e) in (6..=11).zip(expected) {
        let v = value_of(&text, &format!("s_{n}"));
        assert!((v - e).abs() < 1e-6, "s_{n} = {v}");
    }
}

#[test]
fn punctured_level_eight() {
    let text = stdout(&plifs(&["dim", "punctured", &system("break_on_attractor.plifs"), "--level", "8"]));
    assert!((value_of(&text, "t_8") - 0.60301162).abs() < 1e-8, "{text}");
}

#[test]
fn determinant_matches_gdifs_on_family() {
    let file = system("fixed_point_family_m3.plifs");
    let det = value_of(&stdout(&plifs(&["dim", "determinant", &file])), "determinant root");
    let alpha = value_of(&stdout(&plifs(&["dim", "gdifs", &file])), "alpha");
    assert!((det - alpha).abs() < 1e-10, "{det} vs {alpha}");
}

#[test]
fn determinant_outside_family_exits_3() {
    let out = plifs(&["dim", "determinant", &system("cantor.plifs")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn dim_all_writes_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("dim.csv");
    let text = stdout(&plifs(&[
        "dim",
        "all",
        &system("fixed_point_family_m3.plifs"),
        "--samples",
        "20000",
        "--csv",
        csv.to_str().unwrap(),
    ]));
    assert!(text.contains("consistent: yes"), "{text}");
    let rows = fs::read_to_string(&csv).unwrap();
    let mut lines = rows.lines();
    assert_eq!(lines.next(), Some("method,param,value"));
    let methods: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    for m in ["natural", "gdifs", "punctured", "determinant", "box"] {
        assert!(methods.contains(&m), "{rows}");
    }
}

#[test]
fn render_csv_rows() {
    let text = stdout(&plifs(&["render", &system("cantor.plifs"), "--depth", "1"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "word,left,right");
    assert_eq!(lines.len(), 3);
    let parse = |line: &str| -> (String, f64, f64) {
        let f: Vec<&str> = line.split(',').collect();
        (f[0].to_string(), f[1].parse().unwrap(), f[2].parse().unwrap())
    };
    let (w, l, r) = parse(lines[1]);
    assert!(w == "1" && l.abs() < 1e-15 && (r - 1.0 / 3.0).abs() < 1e-15);
    let (w, l, r) = parse(lines[2]);
    assert!(w == "2" && (l - 2.0 / 3.0).abs() < 1e-15 && (r - 1.0).abs() < 1e-15);

    let text = stdout(&plifs(&["render", &system("break_on_attractor.plifs"), "--depth", "0"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["word,left,right", ",0,1"]);
}

#[test]
fn render_svg_rows_and_rectangles() {
    let text = stdout(&plifs(&[
        "render",
        &system("break_on_attractor.plifs"),
        "--depth",
        "2",
        "--format",
        "svg",
    ]));
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<g id=\"level-").count(), 3);
    assert_eq!(text.matches("<rect x=").count(), 1 + 2 + 4);
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "svg"] {
        let a = dir.path().join(format!("a.{format}"));
        let b = dir.path().join(format!("b.{format}"));
        for path in [&a, &b] {
            stdout(&plifs(&[
                "render",
                &system("fixed_point_family_m3.plifs"),
                "--depth",
                "4",
                "--format",
                format,
                "--out",
                path.to_str().unwrap(),
            ]));
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
}

#[test]
fn budget_refusals_exit_4() {
    let out = plifs(&["render", &system("cantor.plifs"), "--depth", "40"]);
    assert_eq!(out.status.code(), Some(4));
    let out = plifs(&["render", &system("cantor.plifs"), "--depth", "3", "--budget", "4"]);
    assert_eq!(out.status.code(), Some(4));
    let out = Command::new(env!("CARGO_BIN_EXE_plifs"))
        .args(["dim", "natural", &system("cantor.plifs"), "--n", "1..5"])
        .env("PLIFS_BUDGET", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn measure_verdicts() {
    let text = stdout(&plifs(&["measure", &system("overlapping.plifs"), "--n", "1..10"]));
    assert!(text.contains("verdict: CONSISTENT_POSITIVE"), "{text}");
    let text = stdout(&plifs(&["measure", &system("cantor.plifs"), "--n", "1..12"]));
    assert!(text.contains("verdict: CONSISTENT_NULL"), "{text}");
}

#[test]
fn esc_on_cantor() {
    let text = stdout(&plifs(&["esc", &system("cantor.plifs"), "--level", "2"]));
    assert!((value_of(&text, "delta") - 2.0 / 9.0).abs() < 1e-12, "{text}");
}
