#![cfg(feature = "cli")]

use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

use maskresize::harness::io::{read_gray, write_mask};
use maskresize::harness::{ComparisonReport, NestedEllipses, ShapeBounds};
use maskresize::metrics::percentage_increase;
use maskresize::raster::mask_validate;
use maskresize::{LabelMask, LabelSet, Size};
use rand::SeedableRng;

fn maskresize(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maskresize"))
        .args(args)
        .env_remove("MASKRESIZE_THREADS")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn shape_mask(side: usize, seed: u64) -> LabelMask {
    let shape = NestedEllipses::random(
        &ShapeBounds::default(),
        &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed),
    );
    shape
        .render(Size::square(side), &LabelSet::default())
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn resize_processed_mask_keeps_labels() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.png");
    let output = dir.path().join("out.pgm");
    write_mask(&input, &shape_mask(32, 1)).unwrap();
    let out = maskresize(&[
        "resize",
        "--in",
        s(&input),
        "--out",
        s(&output),
        "--width",
        "70",
        "--height",
        "50",
        "--strategy",
        "bic-processed",
        "--median-window",
        "5",
        "--threshold",
        "0.4",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (size, data) = read_gray(&output).unwrap();
    assert_eq!(size, Size::new(70, 50).unwrap());
    let m = LabelMask::new_unchecked(size, data, LabelSet::default()).unwrap();
    assert!(mask_validate(&m).is_ok());
}

#[test]
fn raw_bicubic_introduces_extra_values() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.png");
    let output = dir.path().join("out.png");
    write_mask(&input, &shape_mask(32, 2)).unwrap();
    let out = maskresize(&[
        "resize",
        "--in",
        s(&input),
        "--out",
        s(&output),
        "--width",
        "64",
        "--height",
        "64",
        "--strategy",
        "bicubic",
    ]);
    assert_eq!(code(&out), 0);
    let (_, data) = read_gray(&output).unwrap();
    assert!(data.iter().any(|v| ![0, 128, 255].contains(v)));
}

#[test]
fn resize_errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.png");
    write_mask(&input, &shape_mask(16, 3)).unwrap();
    let out_path = dir.path().join("o.png");
    let base = [
        "resize",
        "--in",
        s(&input),
        "--out",
        s(&out_path),
        "--width",
        "8",
        "--height",
        "8",
    ];

    let run = |extra: &[&str]| code(&maskresize(&[&base[..], extra].concat()));
    assert_eq!(run(&["--strategy", "lanczos"]), 2);
    assert_eq!(
        run(&["--strategy", "bic-processed", "--median-window", "4"]),
        2
    );
    assert_eq!(
        run(&["--strategy", "bic-processed", "--threshold", "1.0"]),
        2
    );
    assert_eq!(
        run(&["--strategy", "bic-processed", "--labels", "255,0"]),
        2
    );

    let missing = dir.path().join("nope.png");
    let out = maskresize(&[
        "resize",
        "--in",
        s(&missing),
        "--out",
        s(&out_path),
        "--width",
        "8",
        "--height",
        "8",
        "--strategy",
        "nn",
    ]);
    assert_eq!(code(&out), 3);
    let out = maskresize(&[
        "resize",
        "--in",
        s(&input),
        "--out",
        s(&dir.path().join("o.bmp")),
        "--width",
        "8",
        "--height",
        "8",
        "--strategy",
        "nn",
    ]);
    assert_eq!(code(&out), 2);
    let out = maskresize(&[
        "resize",
        "--in",
        s(&input),
        "--out",
        s(&out_path),
        "--width",
        "0",
        "--height",
        "8",
        "--strategy",
        "nn",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn metrics_on_identical_masks() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("gt.png");
    write_mask(&gt, &shape_mask(40, 4)).unwrap();
    let out = maskresize(&["metrics", "--pred", s(&gt), "--gt", s(&gt), "--bf-tol", "2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("global_accuracy 1.000000"));
    assert!(text.contains("mean_bf         1.000000"));

    let out = maskresize(&["metrics", "--pred", s(&gt), "--gt", s(&gt), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mean_iou"], 1.0);
}

#[test]
fn metrics_rejects_mismatched_sizes_and_bad_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.png");
    let b = dir.path().join("b.png");
    write_mask(&a, &shape_mask(20, 5)).unwrap();
    write_mask(&b, &shape_mask(24, 5)).unwrap();
    assert_eq!(
        code(&maskresize(&["metrics", "--pred", s(&a), "--gt", s(&b)])),
        2
    );
    assert_eq!(
        code(&maskresize(&[
            "metrics",
            "--pred",
            s(&a),
            "--gt",
            s(&a),
            "--bf-tol",
            "-1"
        ])),
        2
    );
}

#[test]
fn compare_needs_a_source() {
    assert_eq!(code(&maskresize(&["compare"])), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_maskresize"))
        .args(["compare", "--synthetic", "--shapes", "5"])
        .env("MASKRESIZE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn compare_from_config_over_a_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    std::fs::create_dir_all(data.join("images")).unwrap();
    std::fs::create_dir_all(data.join("masks")).unwrap();
    for i in 0..5 {
        let m = shape_mask(48, 10 + i);
        let img = m.labels().iter().map(|&l| l / 2 + 20).collect::<Vec<u8>>();
        maskresize::harness::io::write_gray(&data.join(format!("images/s{i}.png")), m.size(), &img)
            .unwrap();
        write_mask(&data.join(format!("masks/s{i}.pgm")), &m).unwrap();
    }
    let config = dir.path().join("exp.cfg");
    std::fs::write(
        &config,
        "# dataset run\ndataset = data\nsource_size = 24x24\nstrategies = NN-NN, BIC-BIC, BIL-BIL\nsplit = 0.4, 0.2, 0.4\nseed = 3\nout = report.json\n",
    )
    .unwrap();
    let out = maskresize(&["compare", "--config", s(&config)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = ComparisonReport::from_json(
        &std::fs::read_to_string(dir.path().join("report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report.results.len(), 3);
    assert!(report
        .results
        .iter()
        .all(|r| r.samples == 2 && r.target_size == Size::square(48)));

    std::fs::write(&config, "dataset = data\nbogus = 1\n").unwrap();
    assert_eq!(code(&maskresize(&["compare", "--config", s(&config)])), 2);
    let missing = dir.path().join("missing.cfg");
    assert_eq!(code(&maskresize(&["compare", "--config", s(&missing)])), 3);
}

#[test]
fn compare_rejects_a_dataset_with_foreign_labels() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir_all(dir.path().join("images")).unwrap();
    std::fs::create_dir_all(dir.path().join("masks")).unwrap();
    let size = Size::square(8);
    maskresize::harness::io::write_gray(&dir.path().join("images/a.png"), size, &[0; 64]).unwrap();
    maskresize::harness::io::write_gray(&dir.path().join("masks/a.png"), size, &[7; 64]).unwrap();
    let config = dir.path().join("c.cfg");
    std::fs::write(&config, "dataset = .\n").unwrap();
    let out = maskresize(&["compare", "--config", s(&config)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("a.png"));
}

type ScoreKey = (String, String, String, String);

fn parse_sections(csv: &str) -> (HashMap<ScoreKey, f64>, Vec<Vec<String>>) {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(
        lines.next(),
        Some("target_size,strategy,label,metric,value")
    );
    let mut scores = HashMap::new();
    for line in lines.by_ref() {
        if line.is_empty() {
            break;
        }
        let f: Vec<&str> = line.split(',').collect();
        let value = f[4].parse().unwrap();
        scores.insert((f[0].into(), f[1].into(), f[2].into(), f[3].into()), value);
    }
    assert_eq!(lines.next(), Some("baseline=NN-NN"));
    assert_eq!(
        lines.next(),
        Some("target_size,strategy,label,metric,percent_increase")
    );
    let increases = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (scores, increases)
}

#[test]
fn csv_increases_match_recomputed_scores() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out = maskresize(&[
        "compare",
        "--synthetic",
        "--shapes",
        "20",
        "--seed",
        "5",
        "--targets",
        "64x64,96x96",
        "--source",
        "32x32",
        "--strategies",
        "NN-NN,BIC-NN,BIC-BIC,NN-BIL",
        "--out",
        s(&path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&path).unwrap();
    let (scores, increases) = parse_sections(&csv);
    assert!(!increases.is_empty());
    let mut checked = 0;
    for row in &increases {
        let (size, strategy, label, metric, value) = (&row[0], &row[1], &row[2], &row[3], &row[4]);
        if strategy == "NN-NN" {
            assert_eq!(value, "0.000000");
        }
        if label == "AVG" || value == "NA" {
            continue;
        }
        let a = scores[&(
            size.clone(),
            strategy.clone(),
            label.clone(),
            metric.clone(),
        )];
        let b = scores[&(size.clone(), "NN-NN".into(), label.clone(), metric.clone())];
        let want = percentage_increase(a, b).unwrap();
        let got: f64 = value.parse().unwrap();
        // Scores are printed to 1e-6, so the recomputation inherits that error
        // scaled by 100 / b.
        assert!((got - want).abs() <= 2e-4 / b, "{row:?}: {got} vs {want}");
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn json_increases_match_exactly() {
    let out = maskresize(&[
        "compare",
        "--synthetic",
        "--shapes",
        "15",
        "--seed",
        "9",
        "--targets",
        "48x48",
        "--source",
        "24x24",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let report = ComparisonReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(report.schema_version, 1);
    let base = report.result(Size::square(48), "NN-NN").unwrap();
    for row in &report.results {
        for c in &row.metrics.classes {
            let b = base.metrics.class(c.label).unwrap();
            let label = c.label.to_string();
            let got = report
                .increase(row.target_size, &row.strategy, &label, "iou")
                .unwrap();
            let want = match (c.iou, b.iou) {
                (Some(a), Some(b)) => percentage_increase(a, b),
                _ => None,
            };
            assert_eq!(got, want);
        }
    }
    assert_eq!(
        ComparisonReport::from_json(&report.to_json()).unwrap(),
        report
    );
}

#[test]
fn identity_round_trip_scores_perfectly() {
    let out = maskresize(&[
        "compare",
        "--synthetic",
        "--shapes",
        "10",
        "--source",
        "40x40",
        "--targets",
        "40x40",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let report = ComparisonReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    for row in &report.results {
        assert_eq!(row.metrics.global_accuracy, 1.0, "{}", row.strategy);
    }
}
