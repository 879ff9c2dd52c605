use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_topikrank"));
    c.env_remove("TOPIKRANK_DATA_DIR");
    c
}

fn mini_corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/mini-corpus")
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("spawn topikrank")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ingest(dir: &Path) -> PathBuf {
    let corpus = dir.join("corpus.txt");
    let o = run(bin().args(["ingest", "--input"]).arg(mini_corpus()).arg("--output").arg(&corpus));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    corpus
}

fn train(corpus: &Path, out: &Path, seed: &str) {
    let o = run(bin()
        .args(["train", "--topics", "5", "--iterations", "40", "--seed", seed, "--corpus"])
        .arg(corpus)
        .arg("--output")
        .arg(out));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn help_exits_zero_for_every_subcommand() {
    for sub in ["ingest", "train", "network", "rank", "export-cloud", "build-index", "serve", "pipeline"] {
        let o = run(bin().args([sub, "--help"]));
        assert_eq!(o.status.code(), Some(0), "{sub}");
        assert!(String::from_utf8_lossy(&o.stdout).contains("--"), "{sub}");
    }
    assert_eq!(run(bin().arg("--help")).status.code(), Some(0));
    assert_eq!(run(bin().arg("--version")).status.code(), Some(0));
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(run(&mut bin()).status.code(), Some(1));
    assert_eq!(run(bin().arg("frobnicate")).status.code(), Some(1));
    let o = run(bin().args(["train", "--corpus", "c", "--output", "o", "--topics", "many"]));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_metric_names_valid_ones() {
    let o = run(bin().args(["network", "--model", "m.txt", "--metric", "bogus", "--output", "n.tsv"]));
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("cosine") && err.contains("pearson"), "{err}");
}

#[test]
fn missing_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(bin()
        .args(["train", "--corpus"])
        .arg(dir.path().join("absent.txt"))
        .arg("--output")
        .arg(dir.path().join("m.txt")));
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let o = run(bin().args(["ingest", "--input"]).arg(dir.path().join("nope")).arg("--output").arg(dir.path().join("c")));
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn malformed_and_mismatched_artifacts_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "not a corpus\n").unwrap();
    let o = run(bin().args(["train", "--corpus"]).arg(&bad).arg("--output").arg(dir.path().join("m.txt")));
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));

    let corpus = ingest(dir.path());
    let o = run(bin().args(["train", "--topics", "1", "--corpus"]).arg(&corpus).arg("--output").arg(dir.path().join("m.txt")));
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));

    // Two networks for the same metric cannot be paired with one score file.
    let model = dir.path().join("model.txt");
    train(&corpus, &model, "1");
    let net = dir.path().join("cos.tsv");
    let o = run(bin().args(["network", "--metric", "cosine", "--model"]).arg(&model).arg("--output").arg(&net));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let scores = dir.path().join("rank.tsv");
    let o = run(bin().args(["rank", "--network"]).arg(&net).arg("--output").arg(&scores));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let other = dir.path().join("other-model.txt");
    std::fs::write(&other, std::fs::read_to_string(&model).unwrap().replacen("# corpus=", "# corpus=0", 1)).unwrap();
    let o = run(bin()
        .arg("build-index")
        .arg("--corpus")
        .arg(&corpus)
        .arg("--model")
        .arg(&other)
        .arg("--network")
        .arg(&net)
        .arg("--scores")
        .arg(&scores)
        .arg("--output")
        .arg(dir.path().join("index.json")));
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(!dir.path().join("index.json").exists());
}

#[test]
fn training_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = ingest(dir.path());
    let (a, b, c) = (dir.path().join("a.txt"), dir.path().join("b.txt"), dir.path().join("c.txt"));
    train(&corpus, &a, "3");
    train(&corpus, &b, "3");
    train(&corpus, &c, "4");
    let (a, b, c) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), std::fs::read(c).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn data_dir_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(bin()
        .env("TOPIKRANK_DATA_DIR", dir.path())
        .args(["ingest", "--input"])
        .arg(mini_corpus())
        .args(["--output", "corpus.txt"]));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("corpus.txt").is_file());
    assert!(dir.path().join("corpus.txt.text").is_file());
}

#[test]
fn stage_by_stage_matches_artifact_contracts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let corpus = ingest(d);
    let model = d.join("model.txt");
    let o = run(bin()
        .args(["train", "--topics", "4", "--iterations", "30", "-n", "7", "--corpus"])
        .arg(&corpus)
        .arg("--output")
        .arg(&model)
        .arg("--doc-topics")
        .arg(d.join("dt.tsv")));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 4, "one line of top words per topic");
    let labels = d.join("labels.tsv");
    std::fs::write(&labels, "1\tSecond\n").unwrap();
    for metric in ["cosine", "pearson"] {
        let net = d.join(format!("{metric}.tsv"));
        let o = run(bin()
            .args(["network", "--metric", metric, "--doc-topics"])
            .arg(d.join("dt.tsv"))
            .arg("--output")
            .arg(&net)
            .arg("--graphml")
            .arg(d.join(format!("{metric}.graphml")))
            .arg("--labels")
            .arg(&labels));
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let graphml = std::fs::read_to_string(d.join(format!("{metric}.graphml"))).unwrap();
        assert!(graphml.contains("Second"));
        let rank = d.join(format!("{metric}_rank.tsv"));
        let o = run(bin().args(["rank", "--network"]).arg(&net).arg("--output").arg(&rank));
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let svg = d.join(format!("{metric}.svg"));
        let o = run(bin()
            .args(["export-cloud", "--network"])
            .arg(&net)
            .arg("--scores")
            .arg(&rank)
            .arg("--labels")
            .arg(&labels)
            .arg("--output")
            .arg(&svg));
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    }
    let o = run(bin()
        .arg("build-index")
        .arg("--corpus")
        .arg(&corpus)
        .arg("--model")
        .arg(&model)
        .arg("--network")
        .arg(d.join("cosine.tsv"))
        .arg("--network")
        .arg(d.join("pearson.tsv"))
        .arg("--scores")
        .arg(d.join("cosine_rank.tsv"))
        .arg("--scores")
        .arg(d.join("pearson_rank.tsv"))
        .arg("--labels")
        .arg(&labels)
        .arg("--output")
        .arg(d.join("index.json")));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let index: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("index.json")).unwrap()).unwrap();
    assert_eq!(index["metrics"].as_array().unwrap().len(), 2);
    assert_eq!(index["topics"], 4);
}
