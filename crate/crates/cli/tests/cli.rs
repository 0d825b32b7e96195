use std::process::Command;

use liesym::cli::run_command;
use liesym_core::ode::read_csv;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("liesym").chain(args.iter().copied());
    let code = run_command(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn non_symmetry_exits_one_with_residual() {
    let (code, out, _) = run(&["check-symmetry", "builtin", "du-field", "cc"]);
    assert_eq!(code, 1);
    assert!(out.contains("residual: -D(u;x,x)"), "{out}");
}

#[test]
fn symmetry_exits_zero() {
    let (code, out, _) = run(&["check-symmetry", "builtin", "y-shift-psi", "cc"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn specialised_field_on_the_command_line() {
    let (code, out, _) = run(&["check-symmetry", "builtin", "x-shift-phi[phi := exp(omega1*t)]", "cc"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["check-symmetry", "builtin"]).0, 2);
    let (code, _, err) = run(&["check-symmetry", "builtin", "nope", "cc"]);
    assert_eq!(code, 2);
    assert!(err.contains("no field named `nope`"), "{err}");
    let (code, _, err) = run(&["determining", "/nonexistent/model.txt", "cc"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"), "{err}");
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("paper-suite") && out.contains("check-symmetry"));
}

#[test]
fn model_file_parse_error_exits_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.model");
    std::fs::write(&path, "indep x\ndep u\npde p {\n  vars x\n  dep u\n  eq u + = 0\n}\n").unwrap();
    let (code, _, err) = run(&["determining", path.to_str().unwrap(), "p"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 6"), "{err}");
}

#[test]
fn user_model_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("burgers.model");
    std::fs::write(
        &path,
        "indep t, x\ndep u\npde burgers {\n  vars t, x\n  dep u\n  eq D(u;t) + u*D(u;x) - D(u;x,x) = 0\n}\n\
         field galilean {\n  dep u\n  xi x = t\n  eta u = 1\n}\nfield dilation {\n  dep u\n  xi t = 2*t\n  xi x = x\n  eta u = -u\n}\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(run(&["check-symmetry", p, "galilean", "burgers"]).0, 0);
    let (code, out, _) = run(&["closure", p, "galilean", "dilation"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["determining", p, "burgers"]);
    assert_eq!(code, 0);
    assert!(out.contains("equations"), "{out}");
}

#[test]
fn reduce_compares_with_printed_equation() {
    let args = [
        "reduce",
        "builtin",
        "cc",
        "cc-travelling",
        "--printed",
        "cc-reduced-printed",
    ];
    assert_eq!(run(&args).0, 1);
    let (code, out, _) = run(&[&args[..], &["--subst", "h0=alpha"]].concat());
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("equal under substitution"), "{out}");
}

#[test]
fn first_integral_and_solution_check() {
    assert_eq!(
        run(&["first-integral", "builtin", "stationary-derived", "stationary-integral"]).0,
        0
    );
    let (code, out, _) = run(&["first-integral", "builtin", "stationary-printed", "stationary-integral"]);
    assert_eq!(code, 1);
    assert!(out.contains("-2*Y0*Y - 2*Y^2*D(Y;w)"), "{out}");
    assert_eq!(
        run(&["solution-check", "builtin", "cc-reduced-printed", "linear-in-w"]).0,
        0
    );
    let (code, out, _) = run(&[
        "solution-check",
        "builtin",
        "stationary-homogeneous",
        "tanh-free-amplitude",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("constraints: 1 - A*c"), "{out}");
}

#[test]
fn commutators_command_lists_pairs() {
    let (code, out, _) = run(&[
        "commutators",
        "builtin",
        "time-translation",
        "cc-scaling",
        "x-translation",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("commutator/").count(), 3, "{out}");
}

#[test]
fn fig1_writes_three_csv_files_and_an_svg() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["fig1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    for n in [2, 3, 5] {
        let text = std::fs::read_to_string(dir.path().join(format!("profile-n{n}.csv"))).unwrap();
        let (header, rows) = read_csv(&text).unwrap();
        assert_eq!(header, ["zeta", "H", "Hp"]);
        assert_eq!(rows.len(), 201);
        assert_eq!(rows[0], [0.0, 1.0, -0.5]);
        assert_eq!(rows[200][0], 10.0);
    }
    let svg = std::fs::read_to_string(dir.path().join("profile.svg")).unwrap();
    for color in ["red", "blue", "yellow"] {
        assert!(svg.contains(&format!("stroke=\"{color}\"")), "{color}");
    }
    assert!(svg.contains("printed grouping"));
    assert!(svg.contains("n = 5"));
}

#[test]
fn integral_grouping_blows_up_for_odd_n() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&[
        "fig1",
        "--out",
        dir.path().to_str().unwrap(),
        "--grouping",
        "integral",
        "--json",
    ]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cases"][0]["details"]["grouping"], "integral");
    assert_eq!(v["cases"][0]["verdict"], "pass");
    for i in [1, 2] {
        assert_eq!(v["cases"][i]["verdict"], "fail");
        assert!(v["cases"][i]["summary"].as_str().unwrap().contains("stopped early"));
    }
    assert!(std::fs::read_to_string(dir.path().join("profile.svg"))
        .unwrap()
        .contains("integral grouping"));
}

#[test]
fn integrate_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("h.csv");
    let svg = dir.path().join("h.svg");
    let (code, out, _) = run(&[
        "integrate",
        "builtin",
        "profile-printed-grouping",
        "--ic",
        "H=1",
        "--ic",
        "Hp=-0.5",
        "--param",
        "n=2",
        "--param",
        "H1=0",
        "--span",
        "0",
        "10",
        "--method",
        "fixed-rk4",
        "--step",
        "1e-3",
        "--points",
        "11",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    let (_, rows) = read_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 11);
    assert!((rows[10][1] - 5.4985895).abs() < 1e-6, "{:?}", rows[10]);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn integrate_rejects_unbound_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("h.csv");
    let (code, _, err) = run(&[
        "integrate",
        "builtin",
        "profile-printed-grouping",
        "--ic",
        "H=1",
        "--ic",
        "Hp=-0.5",
        "--param",
        "n=2",
        "--span",
        "0",
        "1",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("H1"), "{err}");
}

#[test]
fn paper_suite_report_file_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(run(&["paper-suite", "--report", a.to_str().unwrap()]).0, 0);
    assert_eq!(run(&["paper-suite", "--report", b.to_str().unwrap()]).0, 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_liesym");
    let out = Command::new(bin)
        .args(["check-symmetry", "builtin", "du-field", "cc"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("-D(u;x,x)"));
    let out = Command::new(bin).args(["paper-suite", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(bin).arg("bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
