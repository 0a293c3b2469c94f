//! Per-tweet sentiment and length.

use chrono::{DateTime, NaiveDate, Utc};
use thiserror::Error;

use crate::ingest::Tweet;
use crate::lexicon::Lexicon;
use crate::textnorm::{tokenize_with, tweet_length, Term, TokenizeMode};

/// Tweets longer than this were impossible on the original platform; they are
/// kept but counted.
pub const CLASSIC_TWEET_LIMIT: usize = 140;

/// `created_at` layout used by the v1.1 streaming API.
const TWITTER_TIME_FORMAT: &str = "%a %b %d %H:%M:%S %z %Y";

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unparsable capture timestamp {0:?}")]
pub struct TimestampError(pub String);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredTweet {
    pub length: usize,
    pub sentiment: f64,
    pub captured_date: NaiveDate,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScoreStats {
    pub scored: u64,
    pub skipped_bad_timestamp: u64,
    pub over_limit: u64,
}

/// Accepts RFC 3339 (`2014-03-01T13:00:00Z`) and the classic API layout
/// (`Sat Mar 01 13:00:00 +0000 2014`).
pub fn parse_capture_time(raw: &str) -> Result<DateTime<Utc>, TimestampError> {
    let raw = raw.trim();
    DateTime::parse_from_rfc3339(raw)
        .or_else(|_| DateTime::parse_from_str(raw, TWITTER_TIME_FORMAT))
        .map(|t| t.with_timezone(&Utc))
        .map_err(|_| TimestampError(raw.to_string()))
}

/// Sum of lexicon scores over all tokens; unmatched tokens add nothing.
pub fn score_tokens(terms: &[Term], lex: &Lexicon) -> f64 {
    terms.iter().filter_map(|t| lex.get(t.as_str())).fold(0.0, |acc, s| acc + s)
}

pub fn score_tweet(tweet: &Tweet, lex: &Lexicon, mode: TokenizeMode) -> Result<ScoredTweet, TimestampError> {
    let captured_date = parse_capture_time(&tweet.captured_at)?.date_naive();
    Ok(ScoredTweet {
        length: tweet_length(&tweet.text),
        sentiment: score_tokens(&tokenize_with(&tweet.text, mode), lex),
        captured_date,
    })
}

/// Scores tweets in input order, skipping (and counting) those whose capture
/// timestamp does not parse.
pub fn score_corpus(corpus: &[Tweet], lex: &Lexicon, mode: TokenizeMode) -> (Vec<ScoredTweet>, ScoreStats) {
    let mut stats = ScoreStats::default();
    let mut out = Vec::with_capacity(corpus.len());
    for tweet in corpus {
        match score_tweet(tweet, lex, mode) {
            Ok(scored) => {
                stats.scored += 1;
                if scored.length > CLASSIC_TWEET_LIMIT {
                    stats.over_limit += 1;
                }
                out.push(scored);
            }
            Err(_) => stats.skipped_bad_timestamp += 1,
        }
    }
    (out, stats)
}
