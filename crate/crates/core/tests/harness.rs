use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use newsstyle::corpus::synthetic::{generate, SyntheticConfig};
use newsstyle::corpus::{Corpus, Orientation};
use newsstyle::harness::{
    labelled, predict_corpus, run_experiment, run_hyperpartisan_binary, run_hyperpartisan_omission, run_orientation,
    run_satire, run_unmasking_suite, run_veracity, train_model, ExperimentSpec, FeatureModel, HarnessConfig,
    HarnessError, LabelScheme, ScoreRow, Task, TableFormat,
};
use newsstyle::learn::{ForestConfig, LearnError};
use newsstyle::unmasking::UnmaskingConfig;

fn small_config() -> HarnessConfig {
    HarnessConfig {
        forest: ForestConfig {
            trees: 24,
            ..ForestConfig::default()
        },
        unmasking: UnmaskingConfig {
            docs_per_side: 20,
            runs: 2,
            vocabulary_size: 60,
            iterations: 5,
            folds: 5,
            ..UnmaskingConfig::default()
        },
        ..HarnessConfig::default()
    }
}

fn spec(task: Task, features: &[FeatureModel]) -> ExperimentSpec {
    let mut s = ExperimentSpec::new(task, 11);
    s.config = small_config();
    s.features = features.to_vec();
    s
}

fn corpus(satire: usize) -> Corpus {
    generate(&SyntheticConfig {
        articles_per_publisher: 12,
        satire_articles: satire,
        ..SyntheticConfig::default()
    })
}

fn supports(gold: &[&str], classes: &[String]) -> Vec<usize> {
    classes.iter().map(|c| gold.iter().filter(|g| *g == c).count()).collect()
}

#[test]
fn identical_documents_give_chance_balanced_accuracy() {
    let base = corpus(0);
    let text = base.articles()[0].paragraphs.clone();
    let articles = base
        .into_articles()
        .into_iter()
        .map(|mut a| {
            a.paragraphs = text.clone();
            a.quoted_spans.clear();
            a
        })
        .collect();
    let c = Corpus::new(articles);
    let r = run_hyperpartisan_binary(&c, &spec(Task::HyperpartisanBinary, &[FeatureModel::Topic])).unwrap();
    let row = r.row("topic").unwrap();
    let balanced = (row.recall[0].unwrap() + row.recall[1].unwrap()) / 2.0;
    assert!((balanced - 0.5).abs() < 1e-12, "balanced accuracy {balanced}");
}

#[test]
fn injected_leak_is_caught_in_every_task() {
    let c = corpus(24);
    for task in [
        Task::HyperpartisanOmission,
        Task::HyperpartisanBinary,
        Task::Orientation3Class,
        Task::VeracityGeneric,
        Task::VeracityOrientationSpecific,
        Task::Satire,
    ] {
        let mut s = spec(task, &[FeatureModel::Topic]);
        s.inject_leak = true;
        let err = run_experiment(&s, Some(&c), None).unwrap_err();
        assert!(matches!(err, HarnessError::Learn(LearnError::TestLeak(_))), "{task}: {err}");
        assert_eq!(err.exit_code(), 3);
    }
}

fn write_run(dir: &Path, task: Task, c: &Corpus) -> BTreeMap<String, Vec<u8>> {
    let s = spec(task, &[FeatureModel::Style, FeatureModel::Topic]);
    let out = run_experiment(&s, Some(c), None).unwrap();
    let paths = out.write(dir, TableFormat::Csv, &s, &[]).unwrap();
    paths
        .iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(p).unwrap()))
        .collect()
}

#[test]
fn same_seed_writes_identical_files() {
    let c = corpus(24);
    for task in [Task::Satire, Task::Orientation3Class, Task::UnmaskOrientations] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let first = write_run(a.path(), task, &c);
        let second = write_run(b.path(), task, &c);
        assert!(first.len() >= 2);
        assert_eq!(first, second, "{task}");
        assert!(first.contains_key(&format!("{task}.manifest.json")));
    }
}

#[test]
fn satire_is_separated_from_real_news() {
    let c = corpus(40);
    let r = run_satire(&c, &spec(Task::Satire, &[FeatureModel::Style, FeatureModel::Topic])).unwrap();
    assert_eq!(r.test_size, 20);
    assert_eq!(r.train_size, 60);
    let style = r.scores.row("style").unwrap();
    assert!(style.accuracy > 0.75, "style accuracy {}", style.accuracy);
    let out = r.output(Task::Satire);
    let csv = out.tables[0].to_csv();
    assert!(csv.lines().any(|l| l.starts_with("rubin_reference,-,0.9000")), "{csv}");
}

#[test]
fn missing_categories_are_named() {
    let left_only = Corpus::new(corpus(0).into_articles().into_iter().filter(|a| a.orientation == Orientation::Left).collect());
    let s = spec(Task::Orientation3Class, &[FeatureModel::Topic]);
    match run_orientation(&left_only, &s) {
        Err(HarnessError::MissingCategories(m)) => assert_eq!(m, "right, mainstream"),
        other => panic!("expected missing categories, got {other:?}"),
    }
    let s = spec(Task::UnmaskOrientations, &[]);
    match run_unmasking_suite(&left_only, None, &s) {
        Err(HarnessError::MissingCategories(m)) => assert_eq!(m, "right, mainstream"),
        other => panic!("expected missing categories, got {other:?}"),
    }
    let s = spec(Task::Satire, &[FeatureModel::Topic]);
    match run_satire(&left_only, &s) {
        Err(HarnessError::MissingCategories(m)) => assert_eq!(m, "satire"),
        other => panic!("expected missing categories, got {other:?}"),
    }
}

#[test]
fn experiments_without_a_corpus_are_usage_errors() {
    let err = run_experiment(&spec(Task::HyperpartisanBinary, &[FeatureModel::Topic]), None, None).unwrap_err();
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn toml_overrides_are_partial_and_strict() {
    let cfg = HarnessConfig::from_toml("folds = 4\n[forest]\ntrees = 8\n").unwrap();
    assert_eq!(cfg.folds, 4);
    assert_eq!(cfg.forest.trees, 8);
    assert_eq!(cfg.forest.max_depth, ForestConfig::default().max_depth);
    assert_eq!(cfg.unmasking, UnmaskingConfig::default());
    assert!(HarnessConfig::from_toml("fold = 4\n").is_err());
    assert!(HarnessConfig::from_toml("[forest]\ntreez = 4\n").is_err());
    let err = HarnessConfig::from_toml("folds = 1\n").unwrap_err();
    assert_eq!(err.exit_code(), 1);
    let err = HarnessConfig::from_toml("satire_test_fraction = 1.5\n").unwrap_err();
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn baselines_follow_the_class_supports() {
    let c = corpus(0);
    let r = run_hyperpartisan_binary(&c, &spec(Task::HyperpartisanBinary, &[FeatureModel::Topic])).unwrap();
    let gold: Vec<&str> = c
        .iter()
        .map(|a| if a.orientation.is_hyperpartisan() { "hyperpartisan" } else { "mainstream" })
        .collect();
    let sup = supports(&gold, &r.classes);
    assert_eq!(sup, vec![72, 36]);
    assert_eq!(r.baselines[0], ScoreRow::analytic_baseline("all_hyperpartisan", 0, &sup));
    assert_eq!(r.baselines[1], ScoreRow::analytic_baseline("all_mainstream", 1, &sup));
    assert!((r.baselines[0].accuracy - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(r.baselines[0].precision[1], None);
    assert_eq!(r.fold_accuracy["topic"].len(), 3);
}

#[test]
fn omission_reports_every_regime_and_test_orientation() {
    let c = corpus(0);
    let r = run_hyperpartisan_omission(&c, &spec(Task::HyperpartisanOmission, &[FeatureModel::Topic])).unwrap();
    assert_eq!(r.rows.len(), 3);
    for row in &r.rows {
        for acc in [row.left, row.right, row.mainstream] {
            let a = acc.unwrap();
            assert!((0.0..=1.0).contains(&a));
        }
    }
    let table = &r.output().tables[0];
    assert_eq!(table.columns.len(), 10);
    assert_eq!(table.rows.len(), 1);
}

#[test]
fn misclassification_shares_sum_to_one() {
    let c = corpus(0);
    let r = run_orientation(&c, &spec(Task::Orientation3Class, &[FeatureModel::Topic])).unwrap();
    let total: usize = r.confusion["topic"].iter().flatten().sum();
    assert_eq!(total, c.len());
    for gold in ["left", "right", "mainstream"] {
        let shares: Vec<f64> = r
            .shares
            .iter()
            .filter(|s| s.gold == gold)
            .filter_map(|s| s.share)
            .collect();
        if !shares.is_empty() {
            assert!((shares.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn veracity_runs_both_aggregations_on_one_cv() {
    let c = corpus(0);
    let s = spec(Task::VeracityOrientationSpecific, &[FeatureModel::Topic]);
    let r = run_veracity(&c, &s).unwrap();
    assert!(r.generic.is_empty());
    assert_eq!(r.specific.len(), 1);
    assert_eq!(r.specific_alternative.len(), 1);
    assert_eq!(r.wings.len(), 2);
    let labelled = labelled(&c, LabelScheme::Veracity).unwrap();
    assert_eq!(r.baselines[0].accuracy * labelled.len() as f64, labelled.iter().filter(|(_, l)| l == "fake").count() as f64);
    let out = r.output(&s);
    assert_eq!(out.notes["veracity_aggregation"], "pooled");
    assert_eq!(out.tables.len(), 2);
}

#[test]
fn unmasking_suite_reports_three_pairs() {
    let c = corpus(0);
    let s = spec(Task::UnmaskOrientations, &[]);
    let suite = run_unmasking_suite(&c, None, &s).unwrap();
    assert_eq!(suite.curves.len(), 3);
    assert_eq!(suite.checks.len(), 2);
    assert!(suite.slope("left", "right").is_some());
    let out = suite.output(Task::UnmaskOrientations);
    assert!(out.figure.as_ref().unwrap().starts_with("<svg"));
}

#[test]
fn trained_model_round_trips_through_files() {
    let c = corpus(0);
    let cfg = small_config();
    let (file, vocab) = train_model(&c, LabelScheme::Hyperpartisan, FeatureModel::Style, &cfg, 3).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mp = dir.path().join("model.json");
    let vp = dir.path().join("vocab.json");
    file.save(&mp).unwrap();
    vocab.save(&vp).unwrap();
    let file2 = newsstyle::learn::ModelFile::load(&mp).unwrap();
    let vocab2 = newsstyle::features::FeatureVocabulary::load(&vp).unwrap();
    let a = predict_corpus(&file, &vocab, &c).unwrap();
    let b = predict_corpus(&file2, &vocab2, &c).unwrap();
    assert_eq!(a, b);
    let correct = a
        .iter()
        .zip(c.iter())
        .filter(|((_, p), art)| (p == "hyperpartisan") == art.orientation.is_hyperpartisan())
        .count();
    assert!(correct as f64 / c.len() as f64 > 0.9);
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_newsstyle"))
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    std::fs::write(&path, corpus(0).to_jsonl()).unwrap();

    let out = cli().args(["stats", "--corpus"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().count() > 3, "{csv}");

    assert_eq!(cli().arg("frobnicate").output().unwrap().status.code(), Some(1));
    assert_eq!(cli().args(["stats", "--bogus"]).output().unwrap().status.code(), Some(1));
    assert_eq!(cli().arg("--help").output().unwrap().status.code(), Some(0));
    let missing = cli().args(["stats", "--corpus", "/no/such/file.jsonl"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{not json\n").unwrap();
    assert_eq!(cli().args(["stats", "--corpus"]).arg(&bad).output().unwrap().status.code(), Some(2));
}

#[test]
fn cli_model_and_unmask_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("c.jsonl"), corpus(0).to_jsonl()).unwrap();
    std::fs::write(d.join("small.toml"), "[forest]\ntrees = 16\n[unmasking]\ndocs_per_side = 20\nruns = 2\nvocabulary_size = 60\nfolds = 5\niterations = 4\neliminate_per_side = 2\n").unwrap();
    let run = |args: &[&str]| {
        let out = cli()
            .args(args)
            .arg("--corpus")
            .arg(d.join("c.jsonl"))
            .arg("--config")
            .arg(d.join("small.toml"))
            .arg("--out-dir")
            .arg(d.join("out"))
            .current_dir(d)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    };
    run(&["train", "--labels", "orientation", "--features", "topic", "--model", "m.json", "--vocabulary", "v.json"]);
    let predictions = run(&["predict", "--model", "m.json", "--vocabulary", "v.json"]);
    assert_eq!(predictions.lines().next(), Some("id,label"));
    assert_eq!(predictions.lines().count(), corpus(0).len() + 1);

    run(&["export", "--features", "style"]);
    let features = std::fs::read_to_string(d.join("out/style_features.csv")).unwrap();
    assert!(features.starts_with("id,feature,value\n"));
    assert!(features.contains(",read:smog,"));

    let slope = run(&["unmask", "--a", "left", "--b", "mainstream", "--iterations", "4", "--eliminate", "2"]);
    assert!(slope.starts_with("slope "), "{slope}");
    let curve = std::fs::read_to_string(d.join("out/unmask_left_vs_mainstream.csv")).unwrap();
    assert_eq!(curve.lines().count(), 5);
}
