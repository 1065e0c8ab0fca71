use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use newsstyle::corpus::{convert_buzzfeed, corpus_statistics, load_corpus, load_jsonl_lenient, Corpus, CorpusFormat};
use newsstyle::features::{Document, FeatureVocabulary};
use newsstyle::harness::{
    corpus_vocabulary, export_features, predict_corpus, run_experiment, select, train_model, Aggregation,
    ExperimentSpec, FeatureModel, HarnessConfig, HarnessError, InputFile, LabelScheme, Table, TableFormat, Task,
};
use newsstyle::learn::ModelFile;
use newsstyle::unmasking::{curve_csv, curve_slope_statistic, curves_svg, unmask_pair};

#[derive(Parser)]
#[command(name = "newsstyle", version, about = "Stylometric analysis of hyperpartisan and fake news")]
struct Cli {
    /// Article corpus (JSONL, or the BuzzFeed CSV with an articles/ directory beside it)
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Corpus holding the satire articles and their real counterparts
    #[arg(long, global = true)]
    satire_corpus: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// TOML file overriding experiment settings
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Skip malformed JSONL records instead of failing
    #[arg(long, global = true)]
    lenient: bool,
    #[arg(long, global = true, hide = true)]
    inject_leak: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Convert the BuzzFeed annotation CSV and archived articles to JSONL
    Convert {
        #[arg(long)]
        csv: PathBuf,
        /// Directory of archived articles keyed by post URL hash
        #[arg(long)]
        archive: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Corpus statistics per orientation and publisher
    Stats {
        /// Write here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Unmasking curve of two article sets
    Unmask {
        /// left, right, mainstream, satire, hyperpartisan, fake or real
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        iterations: Option<usize>,
        /// Features removed per side and iteration
        #[arg(long)]
        eliminate: Option<usize>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        docs_per_side: Option<usize>,
    },
    /// Run one of the experiments
    Experiment {
        task: Task,
        #[arg(long, value_delimiter = ',')]
        features: Option<Vec<FeatureModel>>,
        #[arg(long, value_enum)]
        aggregation: Option<AggregationArg>,
    },
    /// Train a random forest on the whole corpus
    Train {
        #[arg(long)]
        labels: LabelScheme,
        #[arg(long, default_value = "style")]
        features: FeatureModel,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        vocabulary: PathBuf,
    },
    /// Label every article with a trained model
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        vocabulary: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a vocabulary and the feature matrix in long format
    Export {
        #[arg(long, default_value = "style")]
        features: FeatureModel,
        /// Use this vocabulary instead of building one from the corpus
        #[arg(long)]
        vocabulary: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AggregationArg {
    Pooled,
    Averaged,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn io_error(path: &Path, source: std::io::Error) -> HarnessError {
    HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write(path: &Path, body: &str) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    std::fs::write(path, body).map_err(|e| io_error(path, e))
}

fn emit(output: Option<&Path>, body: &str) -> Result<(), HarnessError> {
    match output {
        Some(p) => write(p, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn load(path: &Path, lenient: bool) -> Result<Corpus, HarnessError> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        return Ok(load_corpus(path, CorpusFormat::BuzzfeedCsv)?);
    }
    if !lenient {
        return Ok(load_corpus(path, CorpusFormat::Jsonl)?);
    }
    let (corpus, rejected) = load_jsonl_lenient(path)?;
    for r in &rejected {
        eprintln!("skipped {}: {r}", path.display());
    }
    Ok(corpus)
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    let mut config = match &cli.config {
        Some(p) => HarnessConfig::load(p)?,
        None => HarnessConfig::default(),
    };
    let need_corpus = |task: &str| -> Result<(Corpus, &PathBuf), HarnessError> {
        let path = cli
            .corpus
            .as_ref()
            .ok_or_else(|| HarnessError::Config(format!("{task} needs --corpus")))?;
        Ok((load(path, cli.lenient)?, path))
    };

    match cli.command {
        Command::Convert { csv, archive, output } => {
            let report = convert_buzzfeed(&csv, &archive)?;
            for url in &report.missing {
                eprintln!("no archived article for {url}");
            }
            for r in &report.rejected {
                eprintln!("rejected {r}");
            }
            write(&output, &report.corpus.to_jsonl())?;
            eprintln!("wrote {} articles to {}", report.corpus.len(), output.display());
        }
        Command::Stats { output } => {
            let (corpus, _) = need_corpus("stats")?;
            let stats = corpus_statistics(&corpus)?;
            let body = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&stats).expect("stats serialize");
                    s.push('\n');
                    s
                }
                _ => stats.to_csv(),
            };
            emit(output.as_deref(), &body)?;
        }
        Command::Unmask {
            a,
            b,
            iterations,
            eliminate,
            runs,
            docs_per_side,
        } => {
            let (corpus, _) = need_corpus("unmask")?;
            let u = &mut config.unmasking;
            u.iterations = iterations.unwrap_or(u.iterations);
            u.eliminate_per_side = eliminate.unwrap_or(u.eliminate_per_side);
            u.runs = runs.unwrap_or(u.runs);
            u.docs_per_side = docs_per_side.unwrap_or(u.docs_per_side);
            u.seed = cli.seed;
            config.validate()?;
            let docs = |side: &str| -> Result<Vec<Document>, HarnessError> {
                Ok(select(&corpus, side)?.par_iter().map(|x| Document::analyze(x)).collect())
            };
            let curve = unmask_pair(&docs(&a)?, &docs(&b)?, (&a, &b), &config.unmasking)?;
            let stem = cli.out_dir.join(format!("unmask_{a}_vs_{b}"));
            let (path, body) = match cli.format {
                Format::Csv => (stem.with_extension("csv"), curve_csv(&curve)),
                Format::Svg => (stem.with_extension("svg"), curves_svg(&[&curve])),
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&curve).expect("curves serialize");
                    s.push('\n');
                    (stem.with_extension("json"), s)
                }
            };
            write(&path, &body)?;
            println!("slope {:.6}", curve_slope_statistic(&curve, None)?);
        }
        Command::Experiment {
            task,
            features,
            aggregation,
        } => {
            if let Some(agg) = aggregation {
                config.veracity_aggregation = match agg {
                    AggregationArg::Pooled => Aggregation::Pooled,
                    AggregationArg::Averaged => Aggregation::Averaged,
                };
            }
            let mut spec = ExperimentSpec::new(task, cli.seed);
            spec.config = config;
            spec.inject_leak = cli.inject_leak;
            if let Some(f) = features {
                spec.features = f;
            }
            let mut inputs = vec![];
            let corpus = match &cli.corpus {
                Some(p) => {
                    let c = load(p, cli.lenient)?;
                    inputs.push(InputFile::new("corpus", p, &c)?);
                    Some(c)
                }
                None => None,
            };
            let satire = match &cli.satire_corpus {
                Some(p) => {
                    let c = load(p, cli.lenient)?;
                    inputs.push(InputFile::new("satire_corpus", p, &c)?);
                    Some(c)
                }
                None => None,
            };
            let output = run_experiment(&spec, corpus.as_ref(), satire.as_ref())?;
            let format = match cli.format {
                Format::Json => TableFormat::Json,
                _ => TableFormat::Csv,
            };
            for path in output.write(&cli.out_dir, format, &spec, &inputs)? {
                println!("{}", path.display());
            }
            let failed: Vec<&str> = output
                .results
                .get("checks")
                .and_then(|c| c.as_array())
                .into_iter()
                .flatten()
                .filter(|c| c.get("holds").and_then(|h| h.as_bool()) == Some(false))
                .filter_map(|c| c.get("claim").and_then(|s| s.as_str()))
                .collect();
            for claim in failed {
                eprintln!("ordering check does not hold: {claim}");
            }
        }
        Command::Train {
            labels,
            features,
            model,
            vocabulary,
        } => {
            let (corpus, _) = need_corpus("train")?;
            let (file, vocab) = train_model(&corpus, labels, features, &config, cli.seed)?;
            file.save(&model)?;
            vocab.save(&vocabulary)?;
            eprintln!("trained on {} features", vocab.len());
        }
        Command::Predict {
            model,
            vocabulary,
            output,
        } => {
            let (corpus, _) = need_corpus("predict")?;
            let file = ModelFile::load(&model)?;
            let vocab = FeatureVocabulary::load(&vocabulary)?;
            let mut t = Table::new("predictions", vec!["id".into(), "label".into()]);
            for (id, label) in predict_corpus(&file, &vocab, &corpus)? {
                t.push(vec![id.as_str().into(), label.as_str().into()]);
            }
            let body = if cli.format == Format::Json { t.to_json() } else { t.to_csv() };
            emit(output.as_deref(), &body)?;
        }
        Command::Export { features, vocabulary } => {
            let (corpus, _) = need_corpus("export")?;
            let vocab = match vocabulary {
                Some(p) => FeatureVocabulary::load(&p)?,
                None => corpus_vocabulary(&corpus, features, &config)?,
            };
            let vpath = cli.out_dir.join(format!("{}_vocabulary.json", features.as_str()));
            let fpath = cli.out_dir.join(format!("{}_features.csv", features.as_str()));
            write(&vpath, &vocab.to_json())?;
            write(&fpath, &export_features(&corpus, &vocab)?)?;
            println!("{}\n{}", vpath.display(), fpath.display());
        }
    }
    Ok(())
}
