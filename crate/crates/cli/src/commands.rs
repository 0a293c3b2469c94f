use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use tweetcone_core::analysis::{self, NullModelConfig, ScoreDistribution};
use tweetcone_core::bootstrap::{self, ExpansionOptions};
use tweetcone_core::cluster::{self, ClusterModel, KMeansConfig, Point2};
use tweetcone_core::dataset::{self, ArffOptions};
use tweetcone_core::ingest::{self, FilterConfig, Tweet};
use tweetcone_core::lexicon::{self, Lexicon, LoadMode, Origin};
use tweetcone_core::scoring::{self, ScoredTweet};
use tweetcone_core::TokenizeMode;

use crate::args::*;
use crate::fsio::{open, read_to_string, require_inputs, write_atomic};

struct Log {
    quiet: bool,
}

impl Log {
    fn info(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let log = Log { quiet: cli.quiet };
    match &cli.command {
        Command::Ingest(a) => ingest_cmd(a, &log),
        Command::Bootstrap(a) => bootstrap_cmd(a, &log),
        Command::Score(a) => score_cmd(a, &log),
        Command::Dataset(a) => dataset_cmd(a, &log),
        Command::Cluster(a) => cluster_cmd(a, &log),
        Command::Analyze(a) => analyze_cmd(a, &log),
        Command::Simulate(a) => simulate_cmd(a, &log),
        Command::Pipeline(a) => pipeline_cmd(a, &log),
    }
}

fn read_tweets(path: &Path, filter: &FilterConfig, log: &Log) -> Result<Vec<Tweet>> {
    let (tweets, stats) = ingest::read_corpus(open(path)?, filter)
        .with_context(|| format!("cannot read {}", path.display()))?;
    log.info(format!(
        "ingest: read={} parsed={} filtered_out={} malformed={} accepted={}",
        stats.read,
        stats.parsed,
        stats.filtered_out,
        stats.malformed,
        stats.accepted()
    ));
    Ok(tweets)
}

fn load_lexicon_file(path: &Path, mode: LoadMode) -> Result<Lexicon> {
    lexicon::load_lexicon(open(path)?, mode).with_context(|| format!("{}", path.display()))
}

fn tweets_to_jsonl(tweets: &[Tweet]) -> String {
    let mut out = String::new();
    for t in tweets {
        out.push_str(&t.to_json_line());
        out.push('\n');
    }
    out
}

fn ingest_cmd(a: &IngestArgs, log: &Log) -> Result<()> {
    require_inputs([&a.input])?;
    let tweets = read_tweets(&a.input, &a.filter.config(), log)?;
    write_atomic(&a.out, &tweets_to_jsonl(&tweets))
}

fn expand(corpus: &[Tweet], seed: &Lexicon, opts: &ExpansionOptions, log: &Log) -> Lexicon {
    let (lex, stats) = bootstrap::expand_lexicon(corpus, seed, opts);
    log.info(format!(
        "bootstrap: tweets={} with_evidence={} candidates={} terms_added={} lexicon_size={}",
        stats.tweets_seen,
        stats.tweets_with_evidence,
        stats.candidates_seen,
        stats.terms_added,
        lex.len()
    ));
    lex
}

fn bootstrap_cmd(a: &BootstrapArgs, log: &Log) -> Result<()> {
    require_inputs([&a.seed, &a.corpus])?;
    let seed = load_lexicon_file(&a.seed, LoadMode::Seed)?;
    let corpus = read_tweets(&a.corpus, &a.filter.config(), log)?;
    let lex = expand(&corpus, &seed, &a.expansion.options(a.tokens.mode()), log);
    write_atomic(&a.out, &lexicon::save_lexicon(&lex))
}

fn score(corpus: &[Tweet], lex: &Lexicon, mode: TokenizeMode, log: &Log) -> Vec<ScoredTweet> {
    let (records, stats) = scoring::score_corpus(corpus, lex, mode);
    log.info(format!(
        "score: scored={} skipped_bad_timestamp={} over_140_chars={}",
        stats.scored, stats.skipped_bad_timestamp, stats.over_limit
    ));
    records
}

fn score_cmd(a: &ScoreArgs, log: &Log) -> Result<()> {
    require_inputs([&a.lexicon, &a.input])?;
    let lex = load_lexicon_file(&a.lexicon, LoadMode::Mixed)?;
    log.info(format!(
        "lexicon: {} seed, {} expanded",
        lex.count_by_origin(Origin::Seed),
        lex.count_by_origin(Origin::Expanded)
    ));
    let corpus = read_tweets(&a.input, &a.filter.config(), log)?;
    let records = score(&corpus, &lex, a.tokens.mode(), log);
    write_atomic(&a.out, &dataset::write_csv(&records))
}

fn dataset_cmd(a: &DatasetArgs, log: &Log) -> Result<()> {
    require_inputs(&a.inputs)?;
    let mut records = Vec::new();
    for path in &a.inputs {
        let text = read_to_string(path)?;
        records.extend(dataset::read_csv(&text).with_context(|| format!("{}", path.display()))?);
    }
    let (csv, arff) = emit_dataset(&records, a.seed, &a.relation, a.arff_include_date, log)?;
    write_atomic(&a.out_csv, &csv)?;
    write_atomic(&a.out_arff, &arff)
}

fn emit_dataset(
    records: &[ScoredTweet],
    seed: u64,
    relation: &str,
    include_date: bool,
    log: &Log,
) -> Result<(String, String)> {
    let shuffled = dataset::shuffle(records, seed);
    let arff = dataset::write_arff(&shuffled, relation, ArffOptions { include_date })?;
    log.info(format!("dataset: {} instances, shuffle seed {seed}", shuffled.len()));
    Ok((dataset::write_csv(&shuffled), arff))
}

fn read_points(path: &Path) -> Result<Vec<Point2>> {
    let text = read_to_string(path)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or_default();
    let is_arff = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("arff"))
        || first.starts_with('@')
        || first.starts_with('%');
    let points = if is_arff {
        dataset::read_arff(&text)
            .with_context(|| format!("{}", path.display()))?
            .into_iter()
            .map(|(l, s)| Point2::new(l, s))
            .collect()
    } else {
        dataset::read_csv(&text)
            .with_context(|| format!("{}", path.display()))?
            .iter()
            .map(Point2::from)
            .collect()
    };
    Ok(points)
}

fn fit(points: &[Point2], cfg: &KMeansConfig, log: &Log) -> Result<(ClusterModel, String)> {
    let model = cluster::kmeans(points, cfg)?;
    log.info(format!(
        "cluster: k={} iterations={} converged={} sse={:.4}",
        model.k, model.iterations, model.converged, model.sse
    ));
    let summary = cluster::centroid_summary(&model, points).render();
    Ok((model, summary))
}

fn cluster_cmd(a: &ClusterArgs, log: &Log) -> Result<()> {
    require_inputs([&a.input])?;
    let points = read_points(&a.input)?;
    let cfg = KMeansConfig { k: a.k, seed: a.seed, max_iter: a.max_iter, normalize: a.normalize };
    let (model, summary) = fit(&points, &cfg, log)?;
    write_atomic(&a.out_model, &model.to_json())?;
    write_atomic(&a.out_summary, &summary)
}

struct Analysis {
    profile: String,
    scatter: String,
    cone: String,
}

fn analyze(records: &[ScoredTweet], model: &ClusterModel, bin_width: usize) -> Result<Analysis> {
    let profile = analysis::dispersion_by_length(records, bin_width)?;
    let cone = match analysis::cone_statistic(records, model) {
        Ok(Some(rho)) => format!("{rho:.6}"),
        Ok(None) | Err(_) => "NA".to_string(),
    };
    Ok(Analysis {
        profile: profile.to_csv(),
        scatter: analysis::export_scatter(records, model),
        cone: format!("cone_statistic\t{cone}\n"),
    })
}

fn analyze_cmd(a: &AnalyzeArgs, _log: &Log) -> Result<()> {
    require_inputs([&a.input, &a.model])?;
    let records = dataset::read_csv(&read_to_string(&a.input)?)
        .with_context(|| format!("{}", a.input.display()))?;
    let model = ClusterModel::from_json(&read_to_string(&a.model)?)
        .with_context(|| format!("{}", a.model.display()))?;
    let out = analyze(&records, &model, a.bin_width)?;
    write_atomic(&a.out_profile, &out.profile)?;
    write_atomic(&a.out_scatter, &out.scatter)?;
    print!("{}", out.cone);
    Ok(())
}

fn parse_distribution(arg: &str) -> Result<ScoreDistribution> {
    if arg == "pm1" {
        return Ok(ScoreDistribution::PlusMinusOne);
    }
    let Some(path) = arg.strip_prefix("lexicon:") else {
        bail!("unknown --dist {arg:?} (expected pm1 or lexicon:<file>)");
    };
    let path = Path::new(path);
    if !path.is_file() {
        bail!("input file not found: {}", path.display());
    }
    let lex = load_lexicon_file(path, LoadMode::Mixed)?;
    Ok(ScoreDistribution::from_lexicon(&lex))
}

fn simulate_cmd(a: &SimulateArgs, log: &Log) -> Result<()> {
    let cfg = NullModelConfig {
        n_tweets: a.n,
        min_len: a.min_len,
        max_len: a.max_len,
        distribution: parse_distribution(&a.dist)?,
        seed: a.seed,
    };
    let records = analysis::simulate_null(&cfg)?;
    log.info(format!("simulate: {} synthetic tweets", records.len()));
    write_atomic(&a.out, &dataset::write_csv(&records))
}

fn pipeline_cmd(a: &PipelineArgs, log: &Log) -> Result<()> {
    require_inputs([&a.seed_lexicon, &a.corpus])?;
    fs::create_dir_all(&a.out_dir)
        .with_context(|| format!("cannot create {}", a.out_dir.display()))?;
    let out = |name: &str| a.out_dir.join(name);
    let mode = a.tokens.mode();

    let corpus = read_tweets(&a.corpus, &a.filter.config(), log)?;
    write_atomic(&out("filtered.jsonl"), &tweets_to_jsonl(&corpus))?;

    let seed = load_lexicon_file(&a.seed_lexicon, LoadMode::Seed)?;
    let lex = expand(&corpus, &seed, &a.expansion.options(mode), log);
    write_atomic(&out("lexicon.tsv"), &lexicon::save_lexicon(&lex))?;

    let records = score(&corpus, &lex, mode, log);
    write_atomic(&out("scored.csv"), &dataset::write_csv(&records))?;

    let (csv, arff) = emit_dataset(&records, a.seed, &a.relation, a.arff_include_date, log)?;
    write_atomic(&out("dataset.csv"), &csv)?;
    write_atomic(&out("dataset.arff"), &arff)?;

    // Cluster what was written, so file-level results match the standalone
    // `cluster` and `analyze` subcommands run on the same outputs.
    let shuffled = dataset::read_csv(&csv).map_err(|e| anyhow!("re-reading dataset: {e}"))?;
    let points: Vec<Point2> = shuffled.iter().map(Point2::from).collect();
    let cfg = KMeansConfig { k: a.k, seed: a.cluster_seed, max_iter: a.max_iter, normalize: a.normalize };
    let (model, summary) = fit(&points, &cfg, log)?;
    write_atomic(&out("model.json"), &model.to_json())?;
    write_atomic(&out("summary.txt"), &summary)?;

    let analysis = analyze(&shuffled, &model, a.bin_width)?;
    write_atomic(&out("profile.csv"), &analysis.profile)?;
    write_atomic(&out("scatter.tsv"), &analysis.scatter)?;
    write_atomic(&out("cone.txt"), &analysis.cone)?;
    log.info(analysis.cone.trim_end());
    Ok(())
}
