use std::process::{Command, Output};

use rigidity_cli::file::{CurvatureFile, CurvatureSpec};
use rigidity_cli::report::{Format, Report};
use rigidity_core::random::{random_einstein, trial_rng};
use rigidity_core::tensor::{assemble_einstein, EinsteinData};
use rigidity_core::{Rational, Scalar};

fn rigidity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidity")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn kv(out: &Output, key: &str) -> Option<String> {
    stdout(out).lines().find_map(|l| l.strip_prefix(&format!("{key}=")).map(str::to_string))
}

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let file = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(file.path(), text).unwrap();
    file
}

/// Einstein tensor with rational entries obtained by rounding a random one.
fn rational_einstein(n: usize, seed: u64) -> EinsteinData<Rational> {
    let mut rng = trial_rng(seed, 0);
    let data = random_einstein(&mut rng, n, 2.0, 6.0);
    let round = |x: f64| <Rational as Scalar>::ratio((x * 1000.0).round() as i64, 1000);
    let weyl = rigidity_core::tensor::project_to_weyl(&data.weyl().tensor().map(|x| round(*x))).unwrap();
    EinsteinData::new(<Rational as Scalar>::ratio(6, 1), weyl).unwrap()
}

#[test]
fn file_round_trip_preserves_tensor() {
    for n in 4..=6 {
        let data = rational_einstein(n, n as u64);
        for file in [CurvatureFile::from_einstein(&data), CurvatureFile::from_tensor(&assemble_einstein(&data))] {
            let again = CurvatureFile::parse(&file.to_toml()).unwrap();
            assert_eq!(again.tensor().unwrap(), file.tensor().unwrap());
            assert_eq!(again.to_toml(), file.to_toml());
        }
    }
}

#[test]
fn einstein_weyl_file_spectrum_passes() {
    let data = rational_einstein(5, 11);
    let file = write_temp(&CurvatureFile::from_einstein(&data).to_toml());
    let path = file.path().to_str().unwrap();
    for mode in ["float", "exact"] {
        let out = rigidity(&["--format", "kv", "spectrum", "--input", path, "--mode", mode]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert_eq!(kv(&out, "check.weyl_norm_identity").as_deref(), Some("pass"));
        assert_eq!(kv(&out, "einstein").as_deref(), Some("true"));
        assert_eq!(kv(&out, "N").as_deref(), Some("14"));
    }
}

#[test]
fn components_file_matches_einstein_file() {
    let data = rational_einstein(4, 3);
    let a = write_temp(&CurvatureFile::from_einstein(&data).to_toml());
    let b = write_temp(&CurvatureFile::from_tensor(&assemble_einstein(&data)).to_toml());
    let ev = |f: &tempfile::NamedTempFile| {
        let out = rigidity(&["--format", "kv", "spectrum", "--input", f.path().to_str().unwrap()]);
        kv(&out, "eigenvalues").unwrap().split(',').map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>()
    };
    for (x, y) in ev(&a).iter().zip(ev(&b)) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn reports_are_deterministic() {
    let runs: [&[&str]; 3] = [
        &["--format", "kv", "verify", "--suite", "all", "--trials", "3", "--dims", "4..5", "--seed", "7"],
        &["--format", "kv", "minimize", "--N", "9", "--C", "72/17", "--restarts", "16", "--seed", "3"],
        &["theta", "--n-range", "4..12"],
    ];
    for args in runs {
        let first = rigidity(args);
        assert_eq!(first.status.code(), Some(0));
        assert_eq!(first.stdout, rigidity(args).stdout, "{args:?}");
    }
    let a = rigidity(runs[0]);
    let mut other: Vec<&str> = runs[0].to_vec();
    *other.last_mut().unwrap() = "8";
    assert_ne!(a.stdout, rigidity(&other).stdout);
}

#[test]
fn input_errors_exit_2() {
    let bad_entry = write_temp("n = 4\nkind = \"components\"\nentries = [[1, 0, 0, 1, 1]]\n");
    let unknown = write_temp("n = 4\nkind = \"model\"\nname = \"torus\"\n");
    let bianchi = write_temp("n = 4\nkind = \"components\"\nentries = [[0, 1, 2, 3, 1]]\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["spectrum", "--input", "/definitely/not/here.toml"],
        vec!["spectrum", "--input", bad_entry.path().to_str().unwrap()],
        vec!["spectrum", "--input", unknown.path().to_str().unwrap()],
        vec!["spectrum", "--input", bianchi.path().to_str().unwrap()],
        vec!["minimize", "--N", "9", "--C", "1/10"],
        vec!["minimize", "--N", "2", "--C", "1"],
        vec!["theta", "--n-range", "3..5"],
        vec!["classify", "--spectrum", "1,2,3", "--n", "4"],
        vec!["verify", "--trials", "0"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = rigidity(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stdout(&out));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn failed_check_maps_to_failure() {
    let mut rep = Report::new("verify");
    rep.check("ok", true, "fine");
    assert!(rep.all_passed());
    rep.check("broken", false, "witness seed=1 trial=2");
    assert!(!rep.all_passed());
    let text = rep.render(Format::Kv, false);
    assert!(text.contains("check.broken=fail"));
    assert!(text.contains("check.broken.detail=witness seed=1 trial=2"));
    assert!(text.ends_with("status=fail\n"));
}

#[test]
fn no_color_outside_terminal() {
    for colorless in [true, false] {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_rigidity"));
        cmd.args(["theta", "--n-range", "4..5"]);
        if colorless {
            cmd.env("NO_COLOR", "1");
        } else {
            cmd.env_remove("NO_COLOR");
        }
        let out = cmd.output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        assert!(!out.stdout.contains(&0x1b), "escape codes in piped output");
    }
}

#[test]
fn theta_single_dimension() {
    let out = rigidity(&["--format", "kv", "theta", "--n-range", "8..8"]);
    let text = stdout(&out);
    assert!(text.contains("row.0 n=8 k=1 source=DF theorem=A theta=122/235"));
    assert!(text.contains("row.1 n=8 k=2 source=DF theorem=A theta=1/20"));
    assert!(!text.contains("row.2"));
}

#[test]
fn minimize_examples() {
    let out = rigidity(&["--format", "kv", "minimize", "--N", "9", "--C", "72/17"]);
    assert_eq!(kv(&out, "analytic.min").as_deref(), Some("-5184/4913"));
    assert_eq!(kv(&out, "oracle.argmin_count").as_deref(), Some("2"));
    let out = rigidity(&["--format", "kv", "minimize", "--N", "3", "--C", "6/5"]);
    assert_eq!(kv(&out, "analytic.min").as_deref(), Some("-36/125"));
    let out = rigidity(&["--format", "kv", "minimize", "--N", "9", "--C", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(kv(&out, "oracle.argmin_count").as_deref(), Some("1"));
    assert_eq!(kv(&out, "analytic.tie").as_deref(), Some("false"));
}

#[test]
fn classify_verdicts() {
    let out = rigidity(&["--format", "kv", "classify", "--spectrum", "1,1,1,1,1,1,1,1,1", "--n", "4"]);
    assert_eq!(kv(&out, "verdict").as_deref(), Some("hypotheses of Theorem B satisfied => flat or spherical space form"));
    let out = rigidity(&["--format", "kv", "classify", "--spectrum", "-5,1,1,1,1,1,1,1,7", "--n", "4"]);
    assert_eq!(kv(&out, "verdict").as_deref(), Some("no theorem applies"));
    assert_eq!(out.status.code(), Some(0));
    let flat = write_temp("n = 6\nkind = \"model\"\nname = \"flat\"\n");
    let out = rigidity(&["--format", "kv", "classify", "--input", flat.path().to_str().unwrap()]);
    assert!(kv(&out, "verdict").unwrap().starts_with("flat branch"));
    let sphere = write_temp("n = 7\nkind = \"model\"\nname = \"sphere\"\ncurvature = \"2\"\n");
    let out = rigidity(&["--format", "kv", "classify", "--input", sphere.path().to_str().unwrap()]);
    assert_eq!(kv(&out, "verdict").as_deref(), Some("hypotheses of Theorem C satisfied => flat or spherical space form"));
}

#[test]
fn model_spec_parses() {
    let f = CurvatureFile::parse("n = 5\nkind = \"model\"\nname = \"sphere\"\ncurvature = 0.25\n").unwrap();
    assert!(matches!(f.spec, CurvatureSpec::Model { .. }));
    let t = f.tensor().unwrap();
    assert_eq!(t.tensor().get(&[0, 1, 0, 1]), &<Rational as Scalar>::ratio(1, 4));
}
