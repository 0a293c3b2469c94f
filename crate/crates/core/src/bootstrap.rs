//! Corpus-driven expansion of a seed lexicon.
//!
//! For every tweet that contains at least one seed-scored token, each
//! unscored term in that tweet receives the candidate score
//!
//! ```text
//! (sum of the seed scores of the scored tokens) / (number of tokens)
//! ```
//!
//! Both counts include repeated tokens. A term's expanded score is the plain
//! mean of the candidates it collected over the whole corpus, and the result
//! is merged under the seed so seed scores always win.

use std::collections::BTreeMap;

use crate::ingest::Tweet;
use crate::lexicon::{merge_lexicons, Lexicon, LexiconEntry};
use crate::textnorm::{tokenize_with, Term, TokenizeMode};

/// Switches for the alternative readings of the expansion rule. The default
/// is the primary reading; the others exist for comparison runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExpansionOptions {
    pub tokenize: TokenizeMode,
    /// Tweets without any scored token give every term a candidate of 0
    /// instead of being skipped.
    pub zero_evidence_as_zero: bool,
    /// Divide by the number of distinct terms instead of all tokens.
    pub distinct_denominator: bool,
    /// Let terms expanded earlier in the pass score later tweets.
    pub self_feeding: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExpansionStats {
    pub tweets_seen: u64,
    pub tweets_with_evidence: u64,
    pub candidates_seen: u64,
    pub terms_added: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Candidates {
    sum: f64,
    count: u64,
}

/// Per-term candidate sums and counts. Terms from the seed never enter.
#[derive(Debug, Clone, Default)]
pub struct CandidateAccumulator {
    terms: BTreeMap<Term, Candidates>,
    candidates_seen: u64,
}

impl CandidateAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: Term, candidate: f64) {
        let slot = self.terms.entry(term).or_default();
        slot.sum += candidate;
        slot.count += 1;
        self.candidates_seen += 1;
    }

    pub fn mean(&self, term: &Term) -> Option<f64> {
        self.terms.get(term).map(|c| c.sum / c.count as f64)
    }

    pub fn count(&self, term: &Term) -> u64 {
        self.terms.get(term).map_or(0, |c| c.count)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn candidates_seen(&self) -> u64 {
        self.candidates_seen
    }

    /// Expanded-origin lexicon of the per-term means.
    pub fn to_lexicon(&self) -> Lexicon {
        let mut lex = Lexicon::new();
        for (term, c) in &self.terms {
            let entry = LexiconEntry::expanded(term.as_str(), c.sum / c.count as f64)
                .expect("tokenized terms and finite means are valid entries");
            lex.insert(entry).expect("accumulator terms are unique");
        }
        lex
    }
}

/// Candidate score for each distinct unscored term of one tweet.
pub fn tweet_candidates(terms: &[Term], seed: &Lexicon) -> BTreeMap<Term, f64> {
    candidates_with(terms, |t| seed.get(t.as_str()), &ExpansionOptions::default())
}

fn candidates_with<F>(terms: &[Term], score_of: F, opts: &ExpansionOptions) -> BTreeMap<Term, f64>
where
    F: Fn(&Term) -> Option<f64>,
{
    let mut sum = 0.0;
    let mut scored = 0usize;
    let mut unscored = BTreeMap::new();
    for term in terms {
        match score_of(term) {
            Some(score) => {
                sum += score;
                scored += 1;
            }
            None => {
                unscored.insert(term.clone(), ());
            }
        }
    }
    if unscored.is_empty() || (scored == 0 && !opts.zero_evidence_as_zero) {
        return BTreeMap::new();
    }
    let denominator = if opts.distinct_denominator {
        terms.iter().collect::<std::collections::BTreeSet<_>>().len()
    } else {
        terms.len()
    };
    let candidate = sum / denominator as f64;
    unscored.into_keys().map(|t| (t, candidate)).collect()
}

/// Single pass over pre-tokenized tweets.
pub fn expand_terms<'a, I>(
    tweets: I,
    seed: &Lexicon,
    opts: &ExpansionOptions,
) -> (Lexicon, ExpansionStats)
where
    I: IntoIterator<Item = &'a [Term]>,
{
    let mut acc = CandidateAccumulator::new();
    let mut stats = ExpansionStats::default();
    for terms in tweets {
        stats.tweets_seen += 1;
        let candidates = if opts.self_feeding {
            candidates_with(terms, |t| seed.get(t.as_str()).or_else(|| acc.mean(t)), opts)
        } else {
            candidates_with(terms, |t| seed.get(t.as_str()), opts)
        };
        if !candidates.is_empty() {
            stats.tweets_with_evidence += 1;
        }
        for (term, candidate) in candidates {
            acc.add(term, candidate);
        }
    }
    stats.candidates_seen = acc.candidates_seen();
    stats.terms_added = acc.len() as u64;
    (merge_lexicons(seed, &acc.to_lexicon()), stats)
}

/// Tokenizes each tweet and expands `seed` over the corpus.
pub fn expand_lexicon(
    corpus: &[Tweet],
    seed: &Lexicon,
    opts: &ExpansionOptions,
) -> (Lexicon, ExpansionStats) {
    let tokenized: Vec<Vec<Term>> =
        corpus.iter().map(|t| tokenize_with(&t.text, opts.tokenize)).collect();
    expand_terms(tokenized.iter().map(Vec::as_slice), seed, opts)
}
