//! Length versus sentiment dispersion: binned profiles, the rank-correlation
//! "cone" statistic, a null-model simulator and the scatter export.

use std::fmt::Write as _;

use chrono::NaiveDate;
use thiserror::Error;

use crate::cluster::{ClusterModel, Point2};
use crate::dataset::{format_sentiment, SplitMix64};
use crate::lexicon::Lexicon;
use crate::scoring::{ScoredTweet, CLASSIC_TWEET_LIMIT};

/// Characters per synthetic token, used to put simulated tweets on the same
/// length scale as real ones.
pub const CHARS_PER_TOKEN: usize = 6;

/// Capture date stamped on simulated records.
pub const SYNTHETIC_DATE: NaiveDate = match NaiveDate::from_ymd_opt(1970, 1, 1) {
    Some(d) => d,
    None => panic!("valid date"),
};

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("bin width must be at least 1")]
    ZeroBinWidth,
    #[error("need at least 3 records, got {0}")]
    TooFewRecords(usize),
    #[error("invalid null model: {0}")]
    InvalidNullModel(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthBin {
    /// Inclusive lower bound in characters.
    pub lo: usize,
    /// Exclusive upper bound in characters.
    pub hi: usize,
    pub count: usize,
    /// `None` for empty bins.
    pub mean_length: Option<f64>,
    pub mean_sentiment: Option<f64>,
    /// Population standard deviation; `None` for empty bins.
    pub std_sentiment: Option<f64>,
}

impl LengthBin {
    /// Whether the bin mean lies within `z` standard errors of zero.
    pub fn mean_within_standard_errors(&self, z: f64) -> Option<bool> {
        let (mean, std) = (self.mean_sentiment?, self.std_sentiment?);
        Some(mean.abs() <= z * std / (self.count as f64).sqrt())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionProfile {
    pub bin_width: usize,
    pub bins: Vec<LengthBin>,
}

/// Bins are `[i*w, (i+1)*w)` and always reach past 140 characters (and past
/// the longest record).
pub fn dispersion_by_length(records: &[ScoredTweet], bin_width: usize) -> Result<DispersionProfile, AnalysisError> {
    if bin_width == 0 {
        return Err(AnalysisError::ZeroBinWidth);
    }
    let longest = records.iter().map(|r| r.length).max().unwrap_or(0);
    let n_bins = longest.max(CLASSIC_TWEET_LIMIT) / bin_width + 1;
    let mut members: Vec<Vec<&ScoredTweet>> = vec![Vec::new(); n_bins];
    for r in records {
        members[r.length / bin_width].push(r);
    }
    let bins = members
        .into_iter()
        .enumerate()
        .map(|(i, rs)| {
            let count = rs.len();
            let (mut mean_length, mut mean_sentiment, mut std_sentiment) = (None, None, None);
            if count > 0 {
                let n = count as f64;
                let mean = rs.iter().fold(0.0, |a, r| a + r.sentiment) / n;
                let var = rs.iter().fold(0.0, |a, r| a + (r.sentiment - mean).powi(2)) / n;
                mean_length = Some(rs.iter().fold(0.0, |a, r| a + r.length as f64) / n);
                mean_sentiment = Some(mean);
                std_sentiment = Some(var.sqrt());
            }
            LengthBin {
                lo: i * bin_width,
                hi: (i + 1) * bin_width,
                count,
                mean_length,
                mean_sentiment,
                std_sentiment,
            }
        })
        .collect();
    Ok(DispersionProfile { bin_width, bins })
}

impl DispersionProfile {
    pub fn total_count(&self) -> usize {
        self.bins.iter().map(|b| b.count).sum()
    }

    /// `lo,hi,count,mean,std` rows; empty bins print `NA`.
    pub fn to_csv(&self) -> String {
        let na = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), format_sentiment);
        let mut out = String::from("lo,hi,count,mean,std\n");
        for b in &self.bins {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                b.lo,
                b.hi,
                b.count,
                na(b.mean_sentiment),
                na(b.std_sentiment)
            );
        }
        out
    }

    /// Least-squares slope of `ln(std)` on `ln(mean length)` over bins whose
    /// mean length falls in `[lo, hi]` and that have a positive spread.
    pub fn log_log_slope(&self, lo: f64, hi: f64) -> Option<f64> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .bins
            .iter()
            .filter_map(|b| Some((b.mean_length?, b.std_sentiment?)))
            .filter(|&(len, std)| len >= lo && len <= hi && len > 0.0 && std > 0.0)
            .map(|(len, std)| (len.ln(), std.ln()))
            .unzip();
        least_squares_slope(&xs, &ys)
    }
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// 1-based ranks, tied values sharing the average of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start+1 ..= end share their mean.
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman's rho with average ranks. `None` when either input is constant.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len(), "spearman inputs differ in length");
    let (rx, ry) = (average_ranks(xs), average_ranks(ys));
    let mean = (xs.len() as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        let (dx, dy) = (a - mean, b - mean);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Rank correlation between tweet length and the distance of its sentiment
/// from its cluster's centroid sentiment. Positive values mean longer tweets
/// stray further from their centroid. `Ok(None)` when either variable is
/// constant.
pub fn cone_statistic(records: &[ScoredTweet], model: &ClusterModel) -> Result<Option<f64>, AnalysisError> {
    if records.len() < 3 {
        return Err(AnalysisError::TooFewRecords(records.len()));
    }
    let points: Vec<Point2> = records.iter().map(Point2::from).collect();
    let assignments = model.assign_points(&points);
    let lengths: Vec<f64> = points.iter().map(|p| p.length).collect();
    let residuals: Vec<f64> = points
        .iter()
        .zip(&assignments)
        .map(|(p, &a)| (p.sentiment - model.centroids[a].sentiment).abs())
        .collect();
    Ok(spearman(&lengths, &residuals))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScoreDistribution {
    /// Fair coin over {-1, +1}.
    PlusMinusOne,
    /// Uniform draw from a list of scores, e.g. a lexicon's.
    Empirical(Vec<f64>),
    Constant(f64),
}

impl ScoreDistribution {
    pub fn from_lexicon(lex: &Lexicon) -> Self {
        ScoreDistribution::Empirical(lex.iter().map(|e| e.score()).collect())
    }

    fn sample(&self, rng: &mut SplitMix64) -> f64 {
        match self {
            ScoreDistribution::PlusMinusOne => {
                if rng.next_u64() >> 63 == 1 {
                    1.0
                } else {
                    -1.0
                }
            }
            ScoreDistribution::Empirical(scores) => scores[rng.below(scores.len())],
            ScoreDistribution::Constant(c) => *c,
        }
    }
}

/// Synthetic tweets whose token scores are independent of length.
#[derive(Debug, Clone, PartialEq)]
pub struct NullModelConfig {
    pub n_tweets: usize,
    /// Token counts are uniform over `min_len..=max_len`.
    pub min_len: usize,
    pub max_len: usize,
    pub distribution: ScoreDistribution,
    pub seed: u64,
}

impl NullModelConfig {
    fn validate(&self) -> Result<(), AnalysisError> {
        if self.n_tweets == 0 {
            return Err(AnalysisError::InvalidNullModel("n_tweets must be at least 1"));
        }
        if self.min_len == 0 {
            return Err(AnalysisError::InvalidNullModel("min_len must be at least 1"));
        }
        if self.max_len < self.min_len {
            return Err(AnalysisError::InvalidNullModel("max_len is below min_len"));
        }
        if matches!(&self.distribution, ScoreDistribution::Empirical(s) if s.is_empty()) {
            return Err(AnalysisError::InvalidNullModel("empirical distribution is empty"));
        }
        Ok(())
    }
}

pub fn simulate_null(cfg: &NullModelConfig) -> Result<Vec<ScoredTweet>, AnalysisError> {
    cfg.validate()?;
    let mut rng = SplitMix64::new(cfg.seed);
    let span = cfg.max_len - cfg.min_len + 1;
    let out = (0..cfg.n_tweets)
        .map(|_| {
            let tokens = cfg.min_len + rng.below(span);
            let sentiment = (0..tokens).fold(0.0, |acc, _| acc + cfg.distribution.sample(&mut rng));
            ScoredTweet { length: tokens * CHARS_PER_TOKEN, sentiment, captured_date: SYNTHETIC_DATE }
        })
        .collect();
    Ok(out)
}

/// `length<TAB>sentiment<TAB>cluster` per record, in input order.
pub fn export_scatter(records: &[ScoredTweet], model: &ClusterModel) -> String {
    let points: Vec<Point2> = records.iter().map(Point2::from).collect();
    let mut out = String::with_capacity(records.len() * 16);
    for (r, a) in records.iter().zip(model.assign_points(&points)) {
        let _ = writeln!(out, "{}\t{}\t{}", r.length, format_sentiment(r.sentiment), a);
    }
    out
}
