mod common;

use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use tvp_bilevel::io::{encode_pgm, parse_landscape, parse_pgm, read_image, write_image, PgmEncoding};
use tvp_bilevel::oracle1d::counterexample_pair;
use tvp_bilevel::trainer::{select_argmin, StrategyCertificate, TrainingReport};
use tvp_bilevel::ImageGrid;

fn tvp(args: &[&str], paths: &[&Path]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tvp"));
    cmd.args(args);
    for p in paths {
        cmd.arg(p);
    }
    cmd.output().unwrap()
}

fn counterexample_files(dir: &Path) -> (std::path::PathBuf, std::path::PathBuf) {
    let (noisy, clean) = counterexample_pair();
    let (np, cp) = (dir.join("noisy.txt"), dir.join("clean.txt"));
    write_image(&noisy.rasterize(4).unwrap(), &np).unwrap();
    write_image(&clean.rasterize(4).unwrap(), &cp).unwrap();
    (np, cp)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_pgm_bytes_round_trip(
        rows in 1usize..6,
        cols in 1usize..6,
        wide in any::<bool>(),
        binary in any::<bool>(),
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let maxval: u16 = if wide { 65535 } else { 255 };
        let mut rng = common::rng(seed);
        let values: Vec<f64> = (0..rows * cols).map(|_| rng.gen_range(0..=maxval) as f64).collect();
        let grid = ImageGrid::image(rows, cols, values).unwrap();
        let enc = if binary { PgmEncoding::Binary } else { PgmEncoding::Ascii };
        let bytes = encode_pgm(&grid, maxval, enc).unwrap();
        let pgm = parse_pgm(&bytes).unwrap();
        prop_assert_eq!(pgm.maxval, maxval);
        prop_assert_eq!(pgm.encoding, enc);
        prop_assert_eq!(pgm.grid.values(), grid.values());
        prop_assert_eq!(encode_pgm(&pgm.grid, pgm.maxval, pgm.encoding).unwrap(), bytes);
    }
}

#[test]
fn pgm_survives_the_cli_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let img = common::shapes(8).map(|v| (200.0 * v).round()).unwrap();
    let input = dir.path().join("in.pgm");
    std::fs::write(&input, encode_pgm(&img, 255, PgmEncoding::Binary).unwrap()).unwrap();
    let out = dir.path().join("out.pgm");
    let o = tvp(&["relax", "--level", "8"], &[&input, Path::new("--out"), &out]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&input).unwrap());
}

#[test]
fn denoise_writes_result_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let (np, _) = counterexample_files(dir.path());
    let out = dir.path().join("u.txt");
    let o = tvp(&["denoise", "--alpha", "1", "--p", "inf", "--tol", "1e-10", "--max-iter", "100000"], &[&np, Path::new("--out"), &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let u = read_image(&out).unwrap();
    for (got, want) in u.values().iter().zip([-8.0, 2.0, 98.0, 108.0]) {
        assert!((got - want).abs() < 1e-6);
    }
    let diag: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("u.txt.json")).unwrap()).unwrap();
    assert_eq!(diag["converged"], true);
    assert_eq!(diag["p"], "inf");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (np, _) = counterexample_files(dir.path());
    let out = dir.path().join("u.txt");

    let o = tvp(&["denoise", "--alpha", "1", "--max-iter", "1"], &[&np, Path::new("--out"), &out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(out.exists());

    let missing = dir.path().join("missing.pgm");
    let o = tvp(&["denoise", "--alpha", "1"], &[&missing, Path::new("--out"), &out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.pgm"));

    let bad = dir.path().join("bad.pgm");
    std::fs::write(&bad, b"P2\n2 2\n255\n1 2 x 4\n").unwrap();
    let o = tvp(&["denoise", "--alpha", "1"], &[&bad, Path::new("--out"), &out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at byte"));

    let o = tvp(&["denoise", "--alpha=-1"], &[&np, Path::new("--out"), &out]);
    assert_eq!(o.status.code(), Some(1));
    let o = tvp(&["denoise", "--bogus"], &[&np]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn alpha_max_from_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let (np, _) = counterexample_files(dir.path());
    let cert = dir.path().join("cert.json");
    let o = tvp(&["alpha-max", "--tol", "1e-6"], &[&np, Path::new("--out"), &cert]);
    assert_eq!(o.status.code(), Some(0));
    let printed: f64 = String::from_utf8(o.stdout).unwrap().trim().parse().unwrap();
    // the p = inf solution becomes flat at alpha = 54
    assert!((printed - 108.0).abs() < 0.05, "{printed}");
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&cert).unwrap()).unwrap();
    assert_eq!(json["alpha_max"].as_f64(), Some(printed));
}

#[test]
fn landscape_csv_reproduces_the_selection() {
    let dir = tempfile::tempdir().unwrap();
    let (np, cp) = counterexample_files(dir.path());
    let out = dir.path().join("run");
    let o = tvp(&["train", "--level", "2", "--tol", "1e-9", "--max-iter", "100000", "--noisy"], &[&np, Path::new("--clean"), &cp, Path::new("--out"), &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: TrainingReport = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    let rows = parse_landscape(&std::fs::read(out.join("landscape.csv")).unwrap()).unwrap();
    assert_eq!(rows, report.records);
    let best = &rows[select_argmin(&rows).unwrap()];
    assert_eq!((best.alpha, best.p, best.assessment), (report.argmin_alpha, report.argmin_p, report.min_value));
    assert_eq!(report.argmin_alpha, 14.0);
    assert!((report.min_value - 100.0).abs() < 1e-6);

    let csv = dir.path().join("l.csv");
    let o = tvp(&["landscape", "--level", "2", "--tol", "1e-9", "--max-iter", "100000", "--noisy"], &[&np, Path::new("--clean"), &cp, Path::new("--out"), &csv]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(parse_landscape(&std::fs::read(&csv).unwrap()).unwrap(), rows);
}

#[test]
fn epsilon_pipeline_writes_a_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let clean = common::shapes(8).map(|v| 100.0 * v).unwrap();
    let noisy = common::add_noise(&clean, 10.0, 3);
    let (np, cp) = (dir.path().join("n.txt"), dir.path().join("c.txt"));
    write_image(&noisy, &np).unwrap();
    write_image(&clean, &cp).unwrap();
    let out = dir.path().join("run");
    let o = tvp(&["train", "--epsilon", "400", "--noisy"], &[&np, Path::new("--clean"), &cp, Path::new("--out"), &out]);
    assert!(matches!(o.status.code(), Some(0) | Some(2)), "{}", String::from_utf8_lossy(&o.stderr));
    let cert: StrategyCertificate = serde_json::from_slice(&std::fs::read(out.join("certificate.json")).unwrap()).unwrap();
    assert!(cert.relaxation_distance <= 100.0 + 1e-9);
    assert!(cert.level_bound <= 100.0);

    // a target that needs a huge level is refused with the level in the message
    let o = tvp(&["train", "--epsilon", "1", "--max-level", "4", "--noisy"], &[&np, Path::new("--clean"), &cp, Path::new("--out"), &out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lower bound"));
}
