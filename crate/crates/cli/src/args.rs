use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use tweetcone_core::bootstrap::ExpansionOptions;
use tweetcone_core::cluster::{DEFAULT_K, DEFAULT_MAX_ITER, DEFAULT_SEED};
use tweetcone_core::{FilterConfig, TokenizeMode};

#[derive(Debug, Parser)]
#[command(name = "tweetcone", version, about = "Tweet length vs. sentiment pipeline")]
pub struct Cli {
    /// Do not echo the command line and run statistics to stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Filter a JSON Lines capture file.
    Ingest(IngestArgs),
    /// Expand a seed lexicon over a capture file.
    Bootstrap(BootstrapArgs),
    /// Score tweets into a length,sentiment,date CSV.
    Score(ScoreArgs),
    /// Concatenate, shuffle and emit CSV + ARFF datasets.
    Dataset(DatasetArgs),
    /// k-means over (length, sentiment).
    Cluster(ClusterArgs),
    /// Length/dispersion profile, cone statistic and scatter export.
    Analyze(AnalyzeArgs),
    /// Null-model tweets with length-independent term scores.
    Simulate(SimulateArgs),
    /// ingest -> bootstrap -> score -> dataset -> cluster -> analyze.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[arg(long, value_name = "LANG", default_value = "en")]
    pub require_lang: String,
    #[arg(long)]
    pub no_require_lang: bool,
    #[arg(long, value_name = "CC", default_value = "US")]
    pub require_country: String,
    #[arg(long)]
    pub no_require_country: bool,
    #[arg(long, value_name = "TYPE", default_value = "city")]
    pub require_place_type: String,
    #[arg(long)]
    pub no_require_place_type: bool,
}

impl FilterArgs {
    pub fn config(&self) -> FilterConfig {
        let pick = |value: &String, off: bool| (!off).then(|| value.clone());
        FilterConfig {
            require_lang: pick(&self.require_lang, self.no_require_lang),
            require_country: pick(&self.require_country, self.no_require_country),
            require_place_type: pick(&self.require_place_type, self.no_require_place_type),
        }
    }
}

#[derive(Debug, Args)]
pub struct TokenArgs {
    /// Keep URLs, mentions, punctuation and '#' in tokens.
    #[arg(long)]
    pub raw_tokens: bool,
}

impl TokenArgs {
    pub fn mode(&self) -> TokenizeMode {
        if self.raw_tokens {
            TokenizeMode::Raw
        } else {
            TokenizeMode::Clean
        }
    }
}

#[derive(Debug, Args)]
pub struct ExpansionArgs {
    /// Tweets without scored terms contribute a candidate of 0.
    #[arg(long)]
    pub zero_evidence_as_zero: bool,
    /// Divide by the number of distinct terms.
    #[arg(long)]
    pub distinct_denominator: bool,
    /// Expanded terms score later tweets.
    #[arg(long)]
    pub self_feeding: bool,
}

impl ExpansionArgs {
    pub fn options(&self, tokenize: TokenizeMode) -> ExpansionOptions {
        ExpansionOptions {
            tokenize,
            zero_evidence_as_zero: self.zero_evidence_as_zero,
            distinct_denominator: self.distinct_denominator,
            self_feeding: self.self_feeding,
        }
    }
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long = "in", value_name = "JSONL")]
    pub input: PathBuf,
    #[arg(long, value_name = "JSONL")]
    pub out: PathBuf,
    #[command(flatten)]
    pub filter: FilterArgs,
}

#[derive(Debug, Args)]
pub struct BootstrapArgs {
    /// Seed lexicon (term<TAB>integer score).
    #[arg(long, value_name = "LEXICON")]
    pub seed: PathBuf,
    #[arg(long, value_name = "JSONL")]
    pub corpus: PathBuf,
    #[arg(long, value_name = "LEXICON")]
    pub out: PathBuf,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[command(flatten)]
    pub tokens: TokenArgs,
    #[command(flatten)]
    pub expansion: ExpansionArgs,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long, value_name = "LEXICON")]
    pub lexicon: PathBuf,
    #[arg(long = "in", value_name = "JSONL")]
    pub input: PathBuf,
    #[arg(long, value_name = "CSV")]
    pub out: PathBuf,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[command(flatten)]
    pub tokens: TokenArgs,
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    #[arg(long = "in", value_name = "CSV", num_args = 1.., required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "CSV")]
    pub out_csv: PathBuf,
    #[arg(long, value_name = "ARFF")]
    pub out_arff: PathBuf,
    #[arg(long, default_value = "tweets")]
    pub relation: String,
    #[arg(long)]
    pub arff_include_date: bool,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// ARFF or CSV dataset.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Cluster on min-max scaled features.
    #[arg(long)]
    pub normalize: bool,
    #[arg(long, value_name = "JSON")]
    pub out_model: PathBuf,
    #[arg(long, value_name = "TXT")]
    pub out_summary: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long = "in", value_name = "CSV")]
    pub input: PathBuf,
    #[arg(long, value_name = "JSON")]
    pub model: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub bin_width: usize,
    #[arg(long, value_name = "CSV")]
    pub out_profile: PathBuf,
    #[arg(long, value_name = "TSV")]
    pub out_scatter: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub min_len: usize,
    #[arg(long, default_value_t = 23)]
    pub max_len: usize,
    /// `pm1` or `lexicon:<file>`.
    #[arg(long, default_value = "pm1")]
    pub dist: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "CSV")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long, value_name = "LEXICON")]
    pub seed_lexicon: PathBuf,
    #[arg(long, value_name = "JSONL")]
    pub corpus: PathBuf,
    /// Directory receiving every intermediate and final file.
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
    /// Shuffle seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub cluster_seed: u64,
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long)]
    pub normalize: bool,
    #[arg(long, default_value_t = 10)]
    pub bin_width: usize,
    #[arg(long, default_value = "tweets")]
    pub relation: String,
    #[arg(long)]
    pub arff_include_date: bool,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[command(flatten)]
    pub tokens: TokenArgs,
    #[command(flatten)]
    pub expansion: ExpansionArgs,
}
