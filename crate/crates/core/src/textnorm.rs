//! Tweet text normalization and tokenization.

use std::fmt;

use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_normalization::UnicodeNormalization;

/// A normalized, lowercase token suitable for lexicon lookup.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term(String);

impl Term {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl AsRef<str> for Term {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TokenizeMode {
    /// Drop URLs and @mentions, trim punctuation, strip a leading `#`.
    #[default]
    Clean,
    /// Only normalize, lowercase and split on whitespace.
    Raw,
}

pub fn is_punctuation(c: char) -> bool {
    matches!(
        get_general_category(c),
        GeneralCategory::ConnectorPunctuation
            | GeneralCategory::DashPunctuation
            | GeneralCategory::OpenPunctuation
            | GeneralCategory::ClosePunctuation
            | GeneralCategory::InitialPunctuation
            | GeneralCategory::FinalPunctuation
            | GeneralCategory::OtherPunctuation
    )
}

fn is_url_or_mention(token: &str) -> bool {
    if token.starts_with('@') {
        return true;
    }
    let head: String = token.chars().take(8).flat_map(char::to_lowercase).collect();
    head.starts_with("http://") || head.starts_with("https://")
}

/// NFC-normalized lowercase form, as used for both tokens and lexicon terms.
pub fn normalize_term(raw: &str) -> String {
    let lowered: String = raw.nfc().collect::<String>().to_lowercase();
    lowered.nfc().collect()
}

/// Splits tweet text into terms.
///
/// In [`TokenizeMode::Clean`] the steps are: NFC, drop whitespace-delimited
/// tokens beginning with `http://`, `https://` or `@`, lowercase, trim leading
/// and trailing Unicode punctuation (interior apostrophes and hyphens stay),
/// strip one leading `#`, drop empty tokens. Tokens that only reveal a URL
/// after trimming, such as `(http://x)`, are dropped too.
pub fn tokenize_with(text: &str, mode: TokenizeMode) -> Vec<Term> {
    let text: String = text.nfc().collect();
    let mut terms = Vec::new();
    for raw in text.split_whitespace() {
        if mode == TokenizeMode::Clean && is_url_or_mention(raw) {
            continue;
        }
        let lowered = normalize_term(raw);
        let token = match mode {
            TokenizeMode::Raw => lowered.as_str(),
            TokenizeMode::Clean => {
                let trimmed = lowered.trim_matches(is_punctuation);
                if is_url_or_mention(trimmed) {
                    continue;
                }
                trimmed.strip_prefix('#').unwrap_or(trimmed)
            }
        };
        if !token.is_empty() {
            terms.push(Term(token.to_string()));
        }
    }
    terms
}

pub fn tokenize(text: &str) -> Vec<Term> {
    tokenize_with(text, TokenizeMode::Clean)
}

/// Number of Unicode scalar values in the raw text.
pub fn tweet_length(text: &str) -> usize {
    text.chars().count()
}
