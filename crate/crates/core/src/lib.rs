//! Building blocks for studying how tweet length relates to lexicon-based
//! sentiment.
//!
//! The pipeline runs capture file → [`ingest`] → [`bootstrap`] (seed lexicon
//! expansion) → [`scoring`] → [`dataset`] (shuffle, CSV, ARFF) → [`cluster`]
//! (k-means) → [`analysis`] (length/dispersion profile and null model).

pub mod analysis;
pub mod bootstrap;
pub mod cluster;
pub mod dataset;
pub mod ingest;
pub mod lexicon;
pub mod scoring;
pub mod textnorm;

pub use analysis::{
    cone_statistic, dispersion_by_length, export_scatter, simulate_null, DispersionProfile,
    NullModelConfig, ScoreDistribution,
};
pub use bootstrap::{expand_lexicon, tweet_candidates, ExpansionOptions, ExpansionStats};
pub use cluster::{assign, centroid_summary, kmeans, CentroidSummary, ClusterModel, KMeansConfig, Point2};
pub use dataset::{read_csv, shuffle, write_arff, write_csv, ArffOptions, SplitMix64};
pub use ingest::{filter_tweet, parse_tweet_record, read_corpus, FilterConfig, IngestStats, Tweet};
pub use lexicon::{load_lexicon, merge_lexicons, save_lexicon, LoadMode, Lexicon, LexiconEntry, Origin};
pub use scoring::{score_corpus, score_tokens, ScoredTweet};
pub use textnorm::{tokenize, tweet_length, Term, TokenizeMode};
