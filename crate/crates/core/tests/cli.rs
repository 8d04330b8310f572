use std::fs;
use std::path::Path;

use frft_lab::cli::main_with;
use frft_lab::io::{read_signal_file, write_signal_file};
use frft_lab::signal::{relative_error, LpExponent, UniformGrid};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("frft-lab").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn assert_one_error_line(r: &Run) {
    let lines: Vec<&str> = r.stderr.lines().collect();
    assert_eq!(lines.len(), 1, "stderr: {:?}", r.stderr);
    assert!(lines[0].starts_with("error:"), "stderr: {:?}", r.stderr);
}

#[test]
fn gaussian_is_self_dual_at_quarter_period() {
    let dir = tempfile::tempdir().unwrap();
    let grid = UniformGrid::parse_spec("-8:0.015625:1025").unwrap();
    let input = dir.path().join("gaussian.csv");
    write_signal_file(&input, &frft_lab::assets::gaussian(grid).unwrap()).unwrap();
    let out = dir.path().join("out.csv");
    let r = run(&[
        "frft",
        "--alpha",
        "1.5707963",
        "--grid",
        "-8:0.015625:1025",
        "--in",
        path(&input),
        "--method",
        "fast",
        "--out",
        path(&out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let f = read_signal_file(&input).unwrap();
    let g = read_signal_file(&out).unwrap();
    assert!(relative_error(&g, &f, LpExponent::TWO).unwrap() < 1e-6);
}

#[test]
fn forward_then_invert_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let fwd = dir.path().join("fwd.csv");
    let back = dir.path().join("back.csv");
    let grid = "-6:0.0078125:1537";
    let r = run(&["frft", "--alpha", "0.7", "--grid", grid, "--asset", "gaussian", "--out", path(&fwd)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r =
        run(&["invert", "--alpha", "0.7", "--grid", grid, "--in", path(&fwd), "--demodulated", "--out", path(&back)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let g = frft_lab::assets::gaussian(UniformGrid::parse_spec(grid).unwrap()).unwrap();
    assert!(relative_error(&read_signal_file(&back).unwrap(), &g, LpExponent::TWO).unwrap() < 1e-6);
}

#[test]
fn output_is_deterministic() {
    let args = ["frft", "--alpha", "-2.1", "--grid", "-4:0.03125:257", "--asset", "gaussian", "--method", "direct"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.starts_with("t,re,im\n"));
    assert_eq!(a.stdout.lines().count(), 258);
}

#[test]
fn errors_are_one_line_with_exit_codes() {
    let r = run(&["frft", "--alpha", "3.1414", "--grid", "-4:0.125:65", "--asset", "gaussian"]);
    assert_eq!(r.code, 3);
    assert_one_error_line(&r);
    assert!(r.stderr.contains("refused"));

    let r = run(&["frft", "--alpha", "1", "--grid", "-4:0.5:17", "--asset", "gaussian", "--bandwidth", "4"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("aliasing"));

    let r = run(&["frft", "--alpha", "1", "--grid", "-4:zero:17", "--asset", "gaussian"]);
    assert_eq!(r.code, 2);
    assert_one_error_line(&r);

    let r = run(&["frft", "--alpha", "1", "--in", "/definitely/not/here.csv"]);
    assert_eq!(r.code, 4);
    assert_one_error_line(&r);

    let r = run(&["frobnicate"]);
    assert_eq!(r.code, 2);
    assert_one_error_line(&r);

    let r = run(&["recover", "--alpha", "1", "--grid", "-1:0.5:5", "--in", "x.csv", "--out", "d", "--eps", "0.1,1"]);
    assert_eq!(r.code, 2);
    assert_one_error_line(&r);

    let r = run(&["check", "--suite", "no-such-suite"]);
    assert_eq!(r.code, 2);
    assert_one_error_line(&r);
}

#[test]
fn check_runs_named_suites_in_order() {
    let r = run(&["check", "--suite", "unitarity", "--suite", "group-law"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "suite,pass,value,tolerance,detail");
    assert!(lines[1].starts_with("group-law,true,"));
    assert!(lines[2].starts_with("unitarity,true,"));
}

#[test]
fn recover_writes_table_and_signals() {
    let dir = tempfile::tempdir().unwrap();
    let grid = UniformGrid::symmetric(8.0, 1.0 / 32.0).unwrap();
    let g = frft_lab::assets::gaussian(grid).unwrap();
    let input = dir.path().join("g.csv");
    write_signal_file(&input, &g).unwrap();
    let out = dir.path().join("rec");
    let r = run(&[
        "recover",
        "--alpha",
        "1.5707963267948966",
        "--grid",
        "-8:0.03125:513",
        "--in",
        path(&input),
        "--reference",
        path(&input),
        "--mean",
        "gauss",
        "--out",
        path(&out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let table = fs::read_to_string(out.join("recover_errors.csv")).unwrap();
    assert_eq!(table, r.stdout);
    let errors: Vec<f64> = table.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(errors.len(), 3);
    assert!(errors.windows(2).all(|w| w[1] < w[0]));
    for eps in ["1", "0.1", "0.01"] {
        assert!(out.join(format!("recover_eps{eps}.csv")).exists());
    }
}

#[test]
fn demo_chirp_errors_decrease() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("demo");
    let r = run(&["demo", "chirp", "--out", path(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let errors: Vec<f64> = r.stdout.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(errors.len(), 3);
    assert!(errors[2] < errors[1] && errors[1] < errors[0], "{errors:?}");
    assert!(out.join("frft_u.csv").exists() && out.join("u.csv").exists());
}

#[test]
fn operators_run_from_assets() {
    let g = "-8:0.03125:513";
    let r = run(&["hilbert", "--alpha", "1", "--grid", g, "--asset", "gaussian", "--route", "pv"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = run(&["hilbert", "--alpha", "1", "--grid", g, "--asset", "gaussian"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = run(&["partialsum", "--alpha", "1", "--grid", g, "--asset", "gaussian", "--lo", "-0.5", "--hi", "0.5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = run(&["convolve", "--alpha", "0.8", "--grid", g, "--asset", "gaussian", "--mean", "gauss", "--eps", "0.2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = run(&["lpdecomp", "--alpha", "1", "--grid", g, "--asset", "gaussian", "--p", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let row: Vec<f64> = r.stdout.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!(row[2] > 0.5 && row[2] <= 1.0 + 1e-9, "{row:?}");
}
