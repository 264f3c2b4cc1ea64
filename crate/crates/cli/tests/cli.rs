use std::path::Path;
use std::process::{Command, Output};

use maskplan::codec::encode_scene_text;
use maskplan::grid::{Coord, Scene};
use maskplan::maskpipe::{write_mask_file, MaskVector};

fn maskplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maskplan"))
        .args(args)
        .env_remove("MASKPLAN_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn corridor_fixture(dir: &Path) -> std::path::PathBuf {
    let scene = Scene::open(Coord::new(0, 0), Coord::new(0, 5)).unwrap();
    let path = dir.join("corridor.txt");
    std::fs::write(&path, encode_scene_text(&scene)).unwrap();
    path
}

#[test]
fn gen_counts_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d");
    let o = maskplan(&["gen", "--scenario", "all", "--count", "4", "--seed", "7", "--out", p(&out)]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).trim_end().ends_with("manifest.json"));
    for k in 1..=5 {
        let n = std::fs::read_dir(out.join(format!("scenario_{k}"))).unwrap().count();
        assert_eq!(n, 8);
    }
}

#[test]
fn gen_rejects_bad_flags_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path());
    for args in [
        vec!["gen", "--scenario", "all", "--count", "0", "--out", out],
        vec!["gen", "--scenario", "6", "--count", "3", "--out", out],
        vec!["gen", "--scenario", "1", "--count", "3", "--fraction", "0.3", "--out", out],
        vec!["gen", "--scenario", "1", "--count", "3"],
        vec!["bench", "--dataset", out, "--predictor", "cnn", "--report", "r.csv"],
    ] {
        assert_eq!(maskplan(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn plan_reports_corridor_iterations() {
    let dir = tempfile::tempdir().unwrap();
    let scene = corridor_fixture(dir.path());
    let o = maskplan(&["plan", "--scene", p(&scene)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("found: true"));
    assert!(text.contains("path_length: 6"));
    assert!(text.contains("iterations: 6"));
    assert!(text.contains("fallback_used: false"));

    let mask = dir.path().join("pass.txt");
    write_mask_file(&MaskVector::filled(1.0).unwrap(), &mask).unwrap();
    let stages = dir.path().join("stages");
    let o2 = maskplan(&["plan", "--scene", p(&scene), "--mask", p(&mask), "--dump-stages", p(&stages)]);
    assert!(o2.status.success());
    assert_eq!(stdout(&o2), text);
    for f in ["gray.png", "dilated.png", "binary.png", "overlap.png"] {
        assert!(stages.join(f).is_file(), "{f}");
    }
}

#[test]
fn plan_with_empty_mask_falls_back() {
    let dir = tempfile::tempdir().unwrap();
    let scene = corridor_fixture(dir.path());
    let mask = dir.path().join("empty.txt");
    write_mask_file(&MaskVector::filled(-1.0).unwrap(), &mask).unwrap();
    let o = maskplan(&["plan", "--scene", p(&scene), "--mask", p(&mask)]);
    let text = stdout(&o);
    assert!(text.contains("fallback_used: true"), "{text}");
    assert!(text.contains("iterations: 7"), "{text}");
}

#[test]
fn malformed_inputs_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let scene = corridor_fixture(dir.path());
    let mask = dir.path().join("bad.txt");
    std::fs::write(&mask, "MASKV1 59 60\n0\n").unwrap();
    let o = maskplan(&["plan", "--scene", p(&scene), "--mask", p(&mask)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let bad_scene = dir.path().join("bad_scene.txt");
    std::fs::write(&bad_scene, "SCENE1 60 60\n....\n").unwrap();
    assert_eq!(maskplan(&["plan", "--scene", p(&bad_scene)]).status.code(), Some(1));

    let missing = dir.path().join("nope");
    let o = maskplan(&["bench", "--dataset", p(&missing), "--predictor", "allpass", "--report", p(&dir.path().join("r.csv"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bench_allpass_and_checksum_guard() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d");
    assert!(maskplan(&["gen", "--scenario", "all", "--count", "5", "--seed", "3", "--out", p(&data)]).status.success());

    let report = dir.path().join("r.csv");
    let o = maskplan(&["bench", "--dataset", p(&data), "--predictor", "allpass", "--report", p(&report)]);
    assert!(o.status.success(), "{o:?}");
    let csv = std::fs::read_to_string(&report).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 7);
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(f[1], f[2], "{l}");
        assert_eq!(f[3], "0");
        assert_eq!(f[4], "0.0000");
        assert_eq!(f[5], "0");
        assert_eq!(f[6], "1.000000");
    }

    // Test split on 5 scenes keeps index 4 only.
    let md = dir.path().join("r.md");
    let o = maskplan(&["bench", "--dataset", p(&data), "--predictor", "oracle:1", "--split", "test", "--report", p(&md), "--format", "md"]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&md).unwrap().contains("| Scenes | 1 | 1 | 1 | 1 | 1 | 5 |"));

    let victim = data.join("scenario_3/answer_00002.png");
    let mut bytes = std::fs::read(&victim).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0xff;
    std::fs::write(&victim, bytes).unwrap();
    let o = maskplan(&["bench", "--dataset", p(&data), "--predictor", "allpass", "--report", p(&report)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));
}

#[test]
fn bench_reads_trainer_style_mask_exports() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d");
    assert!(maskplan(&["gen", "--scenario", "2", "--count", "5", "--seed", "1", "--out", p(&data)]).status.success());
    // Flat export directory, test split only (index 4 of 5).
    let masks = dir.path().join("masks");
    std::fs::create_dir_all(&masks).unwrap();
    write_mask_file(&MaskVector::filled(0.0).unwrap(), &masks.join("mask_00004.txt")).unwrap();
    let report = dir.path().join("r.csv");
    let pred = format!("files:{}", p(&masks));
    let o = maskplan(&["bench", "--dataset", p(&data), "--predictor", &pred, "--split", "test", "--report", p(&report)]);
    assert!(o.status.success(), "{o:?}");
    // All-zero vector passes every cell, so pruning changes nothing.
    let csv = std::fs::read_to_string(&report).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains(",0,0.0000,0,1.000000"), "{csv}");

    // Missing file for the all split is a runtime error.
    let o = maskplan(&["bench", "--dataset", p(&data), "--predictor", &pred, "--report", p(&report)]);
    assert_eq!(o.status.code(), Some(1));
}
