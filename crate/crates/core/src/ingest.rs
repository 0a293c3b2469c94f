//! JSON Lines tweet capture files: parsing and the language/place filter.

use std::io::{self, BufRead};

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("malformed record: {0}")]
pub struct MalformedRecord(pub String);

/// One captured tweet. `captured_at` keeps the raw `created_at` string;
/// it is parsed when the tweet is scored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tweet {
    pub text: String,
    pub lang: String,
    pub country_code: Option<String>,
    pub place_type: Option<String>,
    pub captured_at: String,
}

impl Tweet {
    /// Minimal tweet with the default filter's expected metadata.
    pub fn new(text: impl Into<String>, captured_at: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            lang: "en".into(),
            country_code: Some("US".into()),
            place_type: Some("city".into()),
            captured_at: captured_at.into(),
        }
    }

    /// Serializes back to the capture subset understood by [`parse_tweet_record`].
    pub fn to_json_line(&self) -> String {
        let record = RecordOut {
            text: &self.text,
            lang: &self.lang,
            created_at: &self.captured_at,
            place: PlaceOut {
                country_code: self.country_code.as_deref(),
                place_type: self.place_type.as_deref(),
            },
        };
        serde_json::to_string(&record).expect("tweet serializes")
    }
}

#[derive(Serialize)]
struct RecordOut<'a> {
    text: &'a str,
    lang: &'a str,
    created_at: &'a str,
    place: PlaceOut<'a>,
}

#[derive(Serialize)]
struct PlaceOut<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    country_code: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    place_type: Option<&'a str>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub read: u64,
    pub parsed: u64,
    pub filtered_out: u64,
    pub malformed: u64,
    /// Parsed records without text (delete notices and the like). Included in
    /// `filtered_out`.
    pub no_text: u64,
}

impl IngestStats {
    pub fn accepted(&self) -> u64 {
        self.parsed - self.filtered_out
    }

    pub fn merge(&mut self, other: &IngestStats) {
        self.read += other.read;
        self.parsed += other.parsed;
        self.filtered_out += other.filtered_out;
        self.malformed += other.malformed;
        self.no_text += other.no_text;
    }
}

/// Each criterion is applied only when set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterConfig {
    pub require_lang: Option<String>,
    pub require_country: Option<String>,
    pub require_place_type: Option<String>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            require_lang: Some("en".into()),
            require_country: Some("US".into()),
            require_place_type: Some("city".into()),
        }
    }
}

impl FilterConfig {
    pub fn accept_all() -> Self {
        Self { require_lang: None, require_country: None, require_place_type: None }
    }
}

fn str_field<'a>(obj: &'a Value, key: &str) -> Option<&'a str> {
    obj.get(key).and_then(Value::as_str)
}

/// Parses one capture line. `Ok(None)` marks records that carry no tweet text.
pub fn parse_tweet_record(line: &str) -> Result<Option<Tweet>, MalformedRecord> {
    let value: Value =
        serde_json::from_str(line).map_err(|e| MalformedRecord(e.to_string()))?;
    if !value.is_object() {
        return Err(MalformedRecord("record is not a JSON object".into()));
    }
    let text = match str_field(&value, "text") {
        Some(t) if !t.is_empty() => t.to_string(),
        _ => return Ok(None),
    };
    let place = value.get("place").filter(|p| p.is_object());
    Ok(Some(Tweet {
        text,
        lang: str_field(&value, "lang").unwrap_or_default().to_string(),
        country_code: place.and_then(|p| str_field(p, "country_code")).map(str::to_string),
        place_type: place.and_then(|p| str_field(p, "place_type")).map(str::to_string),
        captured_at: str_field(&value, "created_at").unwrap_or_default().to_string(),
    }))
}

// Compares the primary subtag: "en", "EN" and "en-GB" all match "en".
fn lang_matches(lang: &str, wanted: &str) -> bool {
    let primary = lang.split('-').next().unwrap_or_default();
    primary.eq_ignore_ascii_case(wanted)
}

pub fn filter_tweet(tweet: &Tweet, cfg: &FilterConfig) -> bool {
    if let Some(wanted) = &cfg.require_lang {
        if !lang_matches(&tweet.lang, wanted) {
            return false;
        }
    }
    if let Some(wanted) = &cfg.require_country {
        if tweet.country_code.as_deref() != Some(wanted.as_str()) {
            return false;
        }
    }
    if let Some(wanted) = &cfg.require_place_type {
        if tweet.place_type.as_deref() != Some(wanted.as_str()) {
            return false;
        }
    }
    true
}

/// Reads a whole capture stream. Malformed lines (including blank ones) are
/// counted and skipped; only I/O failures abort.
pub fn read_corpus<R: BufRead>(
    reader: R,
    cfg: &FilterConfig,
) -> io::Result<(Vec<Tweet>, IngestStats)> {
    let mut stats = IngestStats::default();
    let mut tweets = Vec::new();
    for line in reader.lines() {
        let line = line?;
        stats.read += 1;
        match parse_tweet_record(line.trim_end_matches('\r')) {
            Err(_) => stats.malformed += 1,
            Ok(None) => {
                stats.parsed += 1;
                stats.no_text += 1;
                stats.filtered_out += 1;
            }
            Ok(Some(tweet)) => {
                stats.parsed += 1;
                if filter_tweet(&tweet, cfg) {
                    tweets.push(tweet);
                } else {
                    stats.filtered_out += 1;
                }
            }
        }
    }
    Ok((tweets, stats))
}
