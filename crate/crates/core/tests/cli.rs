use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const FIXTURE: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/fixtures/maltese_synthetic.tsv"
);

fn plurinfo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plurinfo"))
        .args(args)
        .output()
        .unwrap()
}

fn out_arg(dir: &Path) -> &str {
    dir.to_str().unwrap()
}

#[test]
fn validate_reports_the_malformed_row() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tsv");
    fs::write(
        &bad,
        "singular\tplural\tgender\tetymology\tallomorph\ttype\n\
         libsa\tlibsiet\tf\tsemitic\t-iet\taffixal\n\
         karta\tkarti\tf\tnon_semitic\n",
    )
    .unwrap();
    let out = plurinfo(&[
        "validate",
        "--dataset",
        out_arg(&bad),
        "--out",
        out_arg(&dir.path().join("o")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "{stderr}");
}

#[test]
fn validate_and_stats_write_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let before = fs::read(FIXTURE).unwrap();
    let v = plurinfo(&[
        "validate",
        "--dataset",
        FIXTURE,
        "--out",
        out_arg(dir.path()),
    ]);
    assert!(v.status.success());
    let s = plurinfo(&["stats", "--dataset", FIXTURE, "--out", out_arg(dir.path())]);
    assert!(s.status.success());
    let csv = fs::read_to_string(dir.path().join("table1.csv")).unwrap();
    assert!(csv.starts_with("origin,non_semitic_lexeme,semitic_lexeme"));
    let table: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("table1.json")).unwrap()).unwrap();
    assert_eq!(table["total"], 300);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "stats");
    assert_eq!(fs::read(FIXTURE).unwrap(), before, "input must not change");
}

#[test]
fn train_and_estimate_with_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("model.cfg");
    fs::write(
        &cfg,
        "char_embedding_dim = 6\nhidden_dims = 8\nepochs = 3\nlearning_rate = 0.01\n",
    )
    .unwrap();
    let train_dir = dir.path().join("train");
    let t = plurinfo(&[
        "train",
        "--dataset",
        FIXTURE,
        "--task",
        "type",
        "--with-etymology",
        "--seed",
        "1",
        "--config",
        out_arg(&cfg),
        "--out",
        out_arg(&train_dir),
    ]);
    assert!(t.status.success(), "{}", String::from_utf8_lossy(&t.stderr));
    let model = plurinfo::ClassifierModel::load(&train_dir.join("model.json")).unwrap();
    assert_eq!(model.config.hidden_dims, vec![8]);
    assert!(model.include_etymology);
    assert_eq!(model.epochs_trained, 3);

    let est_dir = dir.path().join("estimate");
    let e = plurinfo(&[
        "estimate",
        "--dataset",
        FIXTURE,
        "--task",
        "allomorph",
        "--seed",
        "1",
        "--k",
        "3",
        "--config",
        out_arg(&cfg),
        "--out",
        out_arg(&est_dir),
    ]);
    assert!(e.status.success(), "{}", String::from_utf8_lossy(&e.stderr));
    for f in [
        "estimates.json",
        "confusion_form.csv",
        "confusion_form_etymology.csv",
        "confusion_etymology.csv",
    ] {
        assert!(est_dir.join(f).exists(), "{f}");
    }
}

#[test]
fn train_with_search_writes_a_trial_log() {
    let dir = tempfile::tempdir().unwrap();
    let out = plurinfo(&[
        "train",
        "--dataset",
        FIXTURE,
        "--task",
        "etymology",
        "--seed",
        "4",
        "--budget",
        "1",
        "--k",
        "2",
        "--out",
        out_arg(dir.path()),
        "--jobs",
        "1",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let trials: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("trials.json")).unwrap()).unwrap();
    assert_eq!(trials["trials"].as_array().unwrap().len(), 1);
    assert!(dir.path().join("model.json").exists());
}

#[test]
fn report_rejects_the_etymology_task() {
    let dir = tempfile::tempdir().unwrap();
    let out = plurinfo(&[
        "report",
        "--dataset",
        FIXTURE,
        "--task",
        "etymology",
        "--seed",
        "1",
        "--out",
        out_arg(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_check_passes() {
    let out = plurinfo(&["oracle-check", "--joints", "50", "--models", "5"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(
        stdout.lines().filter(|l| l.starts_with("PASS")).count(),
        2,
        "{stdout}"
    );
}

#[test]
fn synth_reproduces_the_bundled_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = plurinfo(&["synth", "--out", out_arg(dir.path())]);
    assert!(out.status.success());
    assert_eq!(
        fs::read(dir.path().join("lexicon.tsv")).unwrap(),
        fs::read(FIXTURE).unwrap()
    );
}
