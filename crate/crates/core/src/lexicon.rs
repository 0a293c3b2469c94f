//! Sentiment dictionaries in the AFINN-style `term<TAB>score` format.
//!
//! A [`Lexicon`] maps normalized terms to scores and remembers whether each
//! score came from the seed dictionary or from corpus expansion. Lookups of
//! absent terms return `None` ("unscored"), which is distinct from a score of 0.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt::Write as _;
use std::io::BufRead;

use thiserror::Error;

use crate::textnorm::normalize_term;

/// Seed scores live in this closed integer range.
pub const SEED_SCORE_RANGE: (f64, f64) = (-5.0, 5.0);

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: duplicate term {term:?}")]
    DuplicateTerm { line: usize, term: String },
    #[error("line {line}: seed score {score} for {term:?} must be an integer in [-5, 5]")]
    Range { line: usize, term: String, score: f64 },
    #[error("invalid term {0:?}")]
    InvalidTerm(String),
    #[error("score {score} for {term:?} is not finite")]
    NonFinite { term: String, score: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Seed,
    Expanded,
}

/// How [`load_lexicon`] assigns an [`Origin`] to the lines it reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadMode {
    /// Every line is a seed entry; scores must be integers in [-5, 5].
    Seed,
    /// Every line is an expanded entry; any finite score is accepted.
    Expanded,
    /// Integral scores in [-5, 5] become seed entries, everything else
    /// expanded. Reads back the output of [`save_lexicon`] on a merged lexicon.
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconEntry {
    term: String,
    score: f64,
    origin: Origin,
}

fn is_seed_score(score: f64) -> bool {
    score.fract() == 0.0 && score >= SEED_SCORE_RANGE.0 && score <= SEED_SCORE_RANGE.1
}

impl LexiconEntry {
    /// Builds a seed entry. The term is normalized (NFC, lowercase).
    pub fn seed(term: &str, score: f64) -> Result<Self, LexiconError> {
        let term = validate_term(term)?;
        if !is_seed_score(score) {
            return Err(LexiconError::Range { line: 0, term, score });
        }
        Ok(Self { term, score, origin: Origin::Seed })
    }

    pub fn expanded(term: &str, score: f64) -> Result<Self, LexiconError> {
        let term = validate_term(term)?;
        if !score.is_finite() {
            return Err(LexiconError::NonFinite { term, score });
        }
        Ok(Self { term, score, origin: Origin::Expanded })
    }

    pub fn term(&self) -> &str {
        &self.term
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }
}

// Terms may not contain tabs, newlines or surrounding whitespace. Interior
// single spaces are tolerated so that the multi-word phrases shipped with
// AFINN-111 load; such entries can never match a single token.
fn validate_term(raw: &str) -> Result<String, LexiconError> {
    let term = normalize_term(raw);
    let bad = term.is_empty()
        || term.trim() != term
        || term.chars().any(|c| c.is_whitespace() && c != ' ')
        || term.contains("  ");
    if bad {
        return Err(LexiconError::InvalidTerm(raw.to_string()));
    }
    Ok(term)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    entries: BTreeMap<String, LexiconEntry>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an entry, failing if the term is already present.
    pub fn insert(&mut self, entry: LexiconEntry) -> Result<(), LexiconError> {
        match self.entries.entry(entry.term.clone()) {
            btree_map::Entry::Occupied(_) => {
                Err(LexiconError::DuplicateTerm { line: 0, term: entry.term })
            }
            btree_map::Entry::Vacant(slot) => {
                slot.insert(entry);
                Ok(())
            }
        }
    }

    /// Convenience constructor for seed lexicons built in code.
    pub fn from_seed_pairs<'a, I>(pairs: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (&'a str, i32)>,
    {
        let mut lex = Self::new();
        for (term, score) in pairs {
            lex.insert(LexiconEntry::seed(term, f64::from(score))?)?;
        }
        Ok(lex)
    }

    /// Score of `term`, or `None` when the term is unscored.
    pub fn get(&self, term: &str) -> Option<f64> {
        self.entries.get(term).map(|e| e.score)
    }

    pub fn entry(&self, term: &str) -> Option<&LexiconEntry> {
        self.entries.get(term)
    }

    pub fn contains(&self, term: &str) -> bool {
        self.entries.contains_key(term)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in byte-lexicographic term order.
    pub fn iter(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }

    /// Entries whose origin is [`Origin::Expanded`].
    pub fn expanded_part(&self) -> Lexicon {
        let entries = self
            .entries
            .iter()
            .filter(|(_, e)| e.origin == Origin::Expanded)
            .map(|(k, e)| (k.clone(), e.clone()))
            .collect();
        Lexicon { entries }
    }

    pub fn count_by_origin(&self, origin: Origin) -> usize {
        self.entries.values().filter(|e| e.origin == origin).count()
    }
}

/// Parses a `term<TAB>score` stream. Blank lines are ignored; line numbers in
/// errors are 1-based.
pub fn load_lexicon<R: BufRead>(reader: R, mode: LoadMode) -> Result<Lexicon, LexiconError> {
    let mut lex = Lexicon::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() {
            continue;
        }
        let (term, score_text) = line.split_once('\t').ok_or_else(|| LexiconError::Parse {
            line: line_no,
            reason: "expected `term<TAB>score`".into(),
        })?;
        let score: f64 = score_text.trim().parse().map_err(|_| LexiconError::Parse {
            line: line_no,
            reason: format!("unparsable score {score_text:?}"),
        })?;
        if !score.is_finite() {
            return Err(LexiconError::Parse {
                line: line_no,
                reason: format!("score {score_text:?} is not finite"),
            });
        }
        let origin = match mode {
            LoadMode::Seed => Origin::Seed,
            LoadMode::Expanded => Origin::Expanded,
            LoadMode::Mixed if is_seed_score(score) => Origin::Seed,
            LoadMode::Mixed => Origin::Expanded,
        };
        let entry = match origin {
            Origin::Seed => LexiconEntry::seed(term, score),
            Origin::Expanded => LexiconEntry::expanded(term, score),
        };
        let entry = entry.map_err(|e| match e {
            LexiconError::Range { term, score, .. } => {
                LexiconError::Range { line: line_no, term, score }
            }
            LexiconError::InvalidTerm(t) => LexiconError::Parse {
                line: line_no,
                reason: format!("invalid term {t:?}"),
            },
            other => other,
        })?;
        lex.insert(entry).map_err(|e| match e {
            LexiconError::DuplicateTerm { term, .. } => {
                LexiconError::DuplicateTerm { line: line_no, term }
            }
            other => other,
        })?;
    }
    Ok(lex)
}

/// Seed entries are kept unchanged; expanded entries are added only for
/// terms the seed does not score.
pub fn merge_lexicons(seed: &Lexicon, expanded: &Lexicon) -> Lexicon {
    let mut entries = seed.entries.clone();
    for (term, entry) in &expanded.entries {
        entries.entry(term.clone()).or_insert_with(|| entry.clone());
    }
    Lexicon { entries }
}

/// Formats a score: integral values without a fractional part, others with
/// at most six fractional digits and trailing zeros removed.
pub fn format_score(score: f64) -> String {
    let mut s = if score.fract() == 0.0 && score.abs() < 1e15 {
        format!("{}", score as i64)
    } else {
        let s = format!("{score:.6}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    };
    if s == "-0" {
        s = "0".into();
    }
    s
}

pub fn save_lexicon(lex: &Lexicon) -> String {
    let mut out = String::new();
    for entry in lex.iter() {
        let _ = writeln!(out, "{}\t{}", entry.term, format_score(entry.score));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn load(text: &str, mode: LoadMode) -> Result<Lexicon, LexiconError> {
        load_lexicon(text.as_bytes(), mode)
    }

    #[test]
    fn loads_two_seed_lines() {
        let lex = load("good\t3\nbad\t-3\n", LoadMode::Seed).unwrap();
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.get("good"), Some(3.0));
        assert_eq!(lex.get("bad"), Some(-3.0));
        assert_eq!(lex.entry("good").unwrap().origin(), Origin::Seed);
    }

    #[test]
    fn empty_input_is_empty_lexicon() {
        assert!(load("", LoadMode::Seed).unwrap().is_empty());
    }

    #[test]
    fn afinn_abandon_pair() {
        // Matches the published AFINN-111 entry.
        let lex = load("abandon\t-2\n", LoadMode::Seed).unwrap();
        assert_eq!(lex.get("abandon"), Some(-2.0));
    }

    #[test]
    fn space_instead_of_tab_is_a_parse_error() {
        match load("good 3\n", LoadMode::Seed) {
            Err(LexiconError::Parse { line: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unparsable_and_non_finite_scores() {
        assert!(matches!(
            load("good\t3\nbad\tx\n", LoadMode::Seed),
            Err(LexiconError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            load("zork\tNaN\n", LoadMode::Expanded),
            Err(LexiconError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            load("zork\tinf\n", LoadMode::Expanded),
            Err(LexiconError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn duplicate_term_is_an_error() {
        match load("good\t3\nbad\t-3\ngood\t2\n", LoadMode::Seed) {
            Err(LexiconError::DuplicateTerm { line: 3, term }) => assert_eq!(term, "good"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn seed_scores_must_be_small_integers() {
        assert!(matches!(
            load("good\t6\n", LoadMode::Seed),
            Err(LexiconError::Range { line: 1, .. })
        ));
        assert!(matches!(
            load("a\t1\ngood\t1.5\n", LoadMode::Seed),
            Err(LexiconError::Range { line: 2, .. })
        ));
        assert!(load("good\t1.5\n", LoadMode::Expanded).is_ok());
        assert!(load("good\t-5\nbad\t5\n", LoadMode::Seed).is_ok());
    }

    #[test]
    fn absent_term_is_unscored_not_zero() {
        let lex = load("meh\t0\n", LoadMode::Seed).unwrap();
        assert_eq!(lex.get("meh"), Some(0.0));
        assert_eq!(lex.get("zork"), None);
    }

    #[test]
    fn multi_word_phrases_load_without_trailing_newline() {
        let lex = load("can't stand\t-3\ngood\t3", LoadMode::Seed).unwrap();
        assert_eq!(lex.get("can't stand"), Some(-3.0));
        assert_eq!(lex.get("good"), Some(3.0));
        assert!(load("bad\tterm\t1\n", LoadMode::Seed).is_err());
    }

    #[test]
    fn terms_are_lowercased() {
        let lex = load("Good\t3\n", LoadMode::Seed).unwrap();
        assert_eq!(lex.get("good"), Some(3.0));
        assert!(matches!(
            load("Good\t3\ngood\t3\n", LoadMode::Seed),
            Err(LexiconError::DuplicateTerm { line: 2, .. })
        ));
    }

    #[test]
    fn merge_keeps_seed_scores() {
        let seed = Lexicon::from_seed_pairs([("good", 3)]).unwrap();
        let mut expanded = Lexicon::new();
        expanded.insert(LexiconEntry::expanded("good", 1.5).unwrap()).unwrap();
        expanded.insert(LexiconEntry::expanded("zork", 0.5).unwrap()).unwrap();

        let merged = merge_lexicons(&seed, &expanded);
        assert_eq!(merged.len(), 2);
        assert_eq!(merged.get("good"), Some(3.0));
        assert_eq!(merged.entry("good").unwrap().origin(), Origin::Seed);
        assert_eq!(merged.get("zork"), Some(0.5));
        assert_eq!(merged.entry("zork").unwrap().origin(), Origin::Expanded);
    }

    #[test]
    fn merge_identities() {
        let seed = Lexicon::from_seed_pairs([("good", 3)]).unwrap();
        assert_eq!(merge_lexicons(&seed, &Lexicon::new()), seed);

        let mut expanded = Lexicon::new();
        expanded.insert(LexiconEntry::expanded("zork", -1.0).unwrap()).unwrap();
        assert_eq!(merge_lexicons(&Lexicon::new(), &expanded), expanded);
    }

    #[test]
    fn save_sorts_and_formats() {
        let lex = Lexicon::from_seed_pairs([("good", 3), ("bad", -3)]).unwrap();
        assert_eq!(save_lexicon(&lex), "bad\t-3\ngood\t3\n");

        let mut lex = Lexicon::new();
        lex.insert(LexiconEntry::expanded("zork", 5.0 / 3.0).unwrap()).unwrap();
        assert_eq!(save_lexicon(&lex), "zork\t1.666667\n");

        assert_eq!(save_lexicon(&Lexicon::new()), "");
    }

    #[test]
    fn score_formatting_edges() {
        assert_eq!(format_score(0.5), "0.5");
        assert_eq!(format_score(-2.0), "-2");
        assert_eq!(format_score(-0.0), "0");
        assert_eq!(format_score(-1e-9), "0");
        assert_eq!(format_score(0.1234564), "0.123456");
    }

    fn arb_lexicon() -> impl Strategy<Value = Lexicon> {
        let entry = ("[a-z]{1,8}", prop_oneof![
            (-5i32..=5).prop_map(f64::from),
            (-5.0f64..5.0),
        ]);
        proptest::collection::vec(entry, 0..40).prop_map(|pairs| {
            let mut lex = Lexicon::new();
            for (term, score) in pairs {
                let entry = if is_seed_score(score) {
                    LexiconEntry::seed(&term, score)
                } else {
                    LexiconEntry::expanded(&term, score)
                };
                let _ = lex.insert(entry.unwrap());
            }
            lex
        })
    }

    proptest! {
        #[test]
        fn save_load_round_trip(lex in arb_lexicon()) {
            let text = save_lexicon(&lex);
            let back = load(&text, LoadMode::Mixed).unwrap();
            prop_assert_eq!(back.len(), lex.len());
            for entry in lex.iter() {
                let printed: f64 = format_score(entry.score()).parse().unwrap();
                let reread = back.get(entry.term()).unwrap();
                prop_assert!((reread - printed).abs() <= 1e-9);
                prop_assert!((reread - entry.score()).abs() <= 5e-7);
                if entry.score().fract() == 0.0 {
                    prop_assert_eq!(reread, entry.score());
                }
            }
            prop_assert_eq!(save_lexicon(&back), text);
        }

        #[test]
        fn merge_is_seed_wins(seed in arb_lexicon(), extra in arb_lexicon()) {
            let seed = Lexicon { entries: seed.entries.into_iter()
                .filter(|(_, e)| e.origin == Origin::Seed).collect() };
            let expanded = Lexicon { entries: extra.entries.into_iter()
                .map(|(k, e)| (k.clone(), LexiconEntry { origin: Origin::Expanded, ..e }))
                .collect() };
            let merged = merge_lexicons(&seed, &expanded);
            for entry in seed.iter() {
                prop_assert_eq!(merged.entry(entry.term()), Some(entry));
            }
            let new_terms = expanded.iter().filter(|e| !seed.contains(e.term())).count();
            prop_assert_eq!(merged.len(), seed.len() + new_terms);

            let again = merge_lexicons(&seed, &merged.expanded_part());
            for entry in seed.iter() {
                prop_assert_eq!(again.entry(entry.term()), Some(entry));
            }
        }
    }
}
