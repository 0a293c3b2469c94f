//! Dataset assembly: seeded shuffling and the CSV / ARFF file formats.
//!
//! CSV layout:
//!
//! ```text
//! length,sentiment,date
//! 41,1.2322,2014-03-01
//! ```
//!
//! ARFF layout (date omitted unless requested):
//!
//! ```text
//! @RELATION tweets
//!
//! @ATTRIBUTE length NUMERIC
//! @ATTRIBUTE sentiment NUMERIC
//!
//! @DATA
//! 41,1.2322
//! ```

use std::fmt::Write as _;

use chrono::NaiveDate;
use thiserror::Error;

use crate::scoring::ScoredTweet;

pub const CSV_HEADER: &str = "length,sentiment,date";
const DATE_FORMAT: &str = "%Y-%m-%d";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DatasetError {
    #[error("invalid relation name {0:?}")]
    InvalidRelation(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

fn parse_err(line: usize, reason: impl Into<String>) -> DatasetError {
    DatasetError::Parse { line, reason: reason.into() }
}

/// SplitMix64 generator. The whole crate draws its randomness from here so
/// that every run is reproducible from its seed.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish index in `0..n` by modulo reduction. `n` must be non-zero.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// In-place Fisher–Yates from the last index down, `j = next % (i + 1)`.
pub fn shuffle_in_place<T>(items: &mut [T], seed: u64) {
    let mut rng = SplitMix64::new(seed);
    for i in (1..items.len()).rev() {
        let j = rng.below(i + 1);
        items.swap(i, j);
    }
}

pub fn shuffle<T: Clone>(records: &[T], seed: u64) -> Vec<T> {
    let mut out = records.to_vec();
    shuffle_in_place(&mut out, seed);
    out
}

/// Four fractional digits, ties to even, and no negative zero.
pub fn format_sentiment(value: f64) -> String {
    let s = format!("{value:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

pub fn write_csv(records: &[ScoredTweet]) -> String {
    let mut out = String::with_capacity(32 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{}",
            r.length,
            format_sentiment(r.sentiment),
            r.captured_date.format(DATE_FORMAT)
        );
    }
    out
}

/// Parses the output of [`write_csv`]. Sentiments come back at the written
/// precision.
pub fn read_csv(text: &str) -> Result<Vec<ScoredTweet>, DatasetError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end_matches('\r') == CSV_HEADER => {}
        Some(_) => return Err(parse_err(1, format!("expected header `{CSV_HEADER}`"))),
        None => return Err(parse_err(1, "missing header")),
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let [length, sentiment, date] = fields[..] else {
            return Err(parse_err(line_no, "expected 3 fields"));
        };
        let length = length.parse().map_err(|_| parse_err(line_no, "bad length"))?;
        let sentiment: f64 = sentiment.parse().map_err(|_| parse_err(line_no, "bad sentiment"))?;
        if !sentiment.is_finite() {
            return Err(parse_err(line_no, "sentiment is not finite"));
        }
        let captured_date = NaiveDate::parse_from_str(date, DATE_FORMAT)
            .map_err(|_| parse_err(line_no, "bad date"))?;
        out.push(ScoredTweet { length, sentiment, captured_date });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArffOptions {
    pub include_date: bool,
}

fn validate_relation(name: &str) -> Result<(), DatasetError> {
    let ok = !name.is_empty()
        && !name.chars().any(|c| c.is_whitespace() || c.is_control())
        && !name.contains(['{', '}', ',', '%', '\'', '"']);
    if ok {
        Ok(())
    } else {
        Err(DatasetError::InvalidRelation(name.to_string()))
    }
}

pub fn write_arff(records: &[ScoredTweet], relation: &str, opts: ArffOptions) -> Result<String, DatasetError> {
    validate_relation(relation)?;
    let mut out = String::with_capacity(24 * records.len() + 128);
    let _ = writeln!(out, "@RELATION {relation}");
    out.push('\n');
    out.push_str("@ATTRIBUTE length NUMERIC\n");
    out.push_str("@ATTRIBUTE sentiment NUMERIC\n");
    if opts.include_date {
        out.push_str("@ATTRIBUTE date STRING\n");
    }
    out.push('\n');
    out.push_str("@DATA\n");
    for r in records {
        let _ = write!(out, "{},{}", r.length, format_sentiment(r.sentiment));
        if opts.include_date {
            let _ = write!(out, ",{}", r.captured_date.format(DATE_FORMAT));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Reads the `(length, sentiment)` columns of a numeric ARFF file. Other
/// attributes are skipped; `%` comments and blank lines are ignored.
pub fn read_arff(text: &str) -> Result<Vec<(f64, f64)>, DatasetError> {
    let mut attributes: Vec<String> = Vec::new();
    let mut columns: Option<(usize, usize)> = None;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let Some((length_col, sentiment_col)) = columns else {
            let lower = line.to_ascii_lowercase();
            if lower.starts_with("@attribute") {
                let name = line.split_whitespace().nth(1).unwrap_or_default();
                attributes.push(name.to_ascii_lowercase());
            } else if lower == "@data" {
                let find = |n: &str| attributes.iter().position(|a| a == n);
                match (find("length"), find("sentiment")) {
                    (Some(l), Some(s)) => columns = Some((l, s)),
                    _ => return Err(parse_err(line_no, "missing length/sentiment attributes")),
                }
            } else if !lower.starts_with("@relation") {
                return Err(parse_err(line_no, "unexpected header line"));
            }
            continue;
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != attributes.len() {
            return Err(parse_err(line_no, format!("expected {} fields", attributes.len())));
        }
        let num = |i: usize| -> Result<f64, DatasetError> {
            fields[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line_no, format!("bad number {:?}", fields[i])))
        };
        out.push((num(length_col)?, num(sentiment_col)?));
    }
    if columns.is_none() {
        return Err(parse_err(text.lines().count().max(1), "missing @DATA section"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(length: usize, sentiment: f64, (y, m, d): (i32, u32, u32)) -> ScoredTweet {
        ScoredTweet { length, sentiment, captured_date: NaiveDate::from_ymd_opt(y, m, d).unwrap() }
    }

    // Reference SplitMix64 + Fisher–Yates written out longhand; kept separate
    // from the implementation above.
    fn oracle_permutation(n: usize, seed: u64) -> Vec<usize> {
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        let mut p: Vec<usize> = (0..n).collect();
        let mut i = n;
        while i > 1 {
            i -= 1;
            let j = (next() % (i as u64 + 1)) as usize;
            p.swap(i, j);
        }
        p
    }

    #[test]
    fn splitmix_reference_stream() {
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(rng.next_u64(), 0x6e789e6aa1b965f4);
        assert_eq!(rng.next_u64(), 0x06c45d188009454f);
    }

    #[test]
    fn golden_permutations() {
        assert_eq!(oracle_permutation(3, 42), [0, 2, 1]);
        assert_eq!(shuffle(&["r1", "r2", "r3"], 42), ["r1", "r3", "r2"]);
        assert_eq!(shuffle(&(0..10).collect::<Vec<_>>(), 42), [0, 9, 5, 8, 6, 4, 7, 2, 1, 3]);
        assert_eq!(shuffle(&(0..10).collect::<Vec<_>>(), 0), [6, 3, 2, 9, 8, 1, 4, 7, 0, 5]);
    }

    #[test]
    fn shuffle_trivial_inputs() {
        assert!(shuffle::<u8>(&[], 1).is_empty());
        assert_eq!(shuffle(&[7], 1), [7]);
    }

    #[test]
    fn csv_rows() {
        let r = [rec(41, 1.2322, (2014, 3, 1))];
        assert_eq!(write_csv(&r), "length,sentiment,date\n41,1.2322,2014-03-01\n");
        assert_eq!(write_csv(&[]), "length,sentiment,date\n");
        let r = [rec(104, 3.812, (2014, 3, 2))];
        assert_eq!(write_csv(&r), "length,sentiment,date\n104,3.8120,2014-03-02\n");
    }

    #[test]
    fn sentiment_rounding_is_half_even() {
        // Both values are exact binary ties at the fifth digit.
        assert_eq!(format_sentiment(0.03125), "0.0312");
        assert_eq!(format_sentiment(0.09375), "0.0938");
        assert_eq!(format_sentiment(-0.00001), "0.0000");
        assert_eq!(format_sentiment(-2.0), "-2.0000");
    }

    #[test]
    fn csv_reader_rejects_garbage() {
        assert!(read_csv("").is_err());
        assert!(read_csv("a,b,c\n").is_err());
        assert_eq!(
            read_csv("length,sentiment,date\n1,2\n"),
            Err(DatasetError::Parse { line: 2, reason: "expected 3 fields".into() })
        );
        assert!(read_csv("length,sentiment,date\n1,x,2014-01-01\n").is_err());
        assert!(read_csv("length,sentiment,date\n1,1,2014-13-01\n").is_err());
    }

    #[test]
    fn arff_layout() {
        let r = [rec(41, 1.2322, (2014, 3, 1))];
        let text = write_arff(&r, "tweets", ArffOptions { include_date: false }).unwrap();
        assert_eq!(
            text,
            "@RELATION tweets\n\n@ATTRIBUTE length NUMERIC\n@ATTRIBUTE sentiment NUMERIC\n\n@DATA\n41,1.2322\n"
        );
        let empty = write_arff(&[], "tweets", ArffOptions { include_date: false }).unwrap();
        assert!(empty.ends_with("\n\n@DATA\n"));

        let dated = write_arff(&r, "tweets", ArffOptions { include_date: true }).unwrap();
        assert!(dated.contains("@ATTRIBUTE date STRING\n"));
        assert!(dated.ends_with("@DATA\n41,1.2322,2014-03-01\n"));
        assert_eq!(read_arff(&dated).unwrap(), [(41.0, 1.2322)]);
    }

    #[test]
    fn arff_relation_names() {
        let opts = ArffOptions { include_date: false };
        for bad in ["", "two words", "a\nb", "x,y"] {
            assert!(write_arff(&[], bad, opts).is_err(), "{bad:?}");
        }
        assert!(write_arff(&[], "tweet-lengths_2014", opts).is_ok());
    }

    #[test]
    fn arff_row_count() {
        let records: Vec<_> = (0..14763).map(|i| rec(i % 140, 0.5, (2014, 3, 1))).collect();
        let text = write_arff(&records, "tweets", ArffOptions { include_date: false }).unwrap();
        let data_rows = text.split("@DATA\n").nth(1).unwrap().lines().count();
        assert_eq!(data_rows, 14763);
        assert_eq!(read_arff(&text).unwrap().len(), 14763);
    }

    #[test]
    fn arff_reader_errors() {
        assert!(read_arff("@RELATION x\n@ATTRIBUTE length NUMERIC\n@DATA\n1\n").is_err());
        assert!(read_arff("@RELATION x\n").is_err());
        let text = "% comment\n@relation x\n@attribute sentiment numeric\n@attribute length numeric\n@data\n2.5,10\n";
        assert_eq!(read_arff(text).unwrap(), [(10.0, 2.5)]);
    }

    fn arb_records() -> impl Strategy<Value = Vec<ScoredTweet>> {
        let one = (0usize..400, -60.0f64..60.0, 0u32..2000).prop_map(|(l, s, d)| ScoredTweet {
            length: l,
            sentiment: s,
            captured_date: NaiveDate::from_ymd_opt(2014, 1, 1).unwrap() + chrono::Days::new(d.into()),
        });
        prop::collection::vec(one, 0..50)
    }

    proptest! {
        #[test]
        fn shuffle_is_a_permutation(n in 0usize..200, seed: u64) {
            let items: Vec<usize> = (0..n).collect();
            let mut out = shuffle(&items, seed);
            prop_assert_eq!(&out, &oracle_permutation(n, seed));
            prop_assert_eq!(shuffle(&items, seed), out.clone());
            out.sort_unstable();
            prop_assert_eq!(out, items);
        }

        #[test]
        fn csv_round_trip_at_four_digits(records in arb_records()) {
            let text = write_csv(&records);
            prop_assert_eq!(text.lines().count(), records.len() + 1);
            let back = read_csv(&text).unwrap();
            prop_assert_eq!(back.len(), records.len());
            for (a, b) in records.iter().zip(&back) {
                prop_assert_eq!(a.length, b.length);
                prop_assert_eq!(a.captured_date, b.captured_date);
                prop_assert_eq!(format_sentiment(a.sentiment), format_sentiment(b.sentiment));
                prop_assert!((a.sentiment - b.sentiment).abs() <= 5e-5 + 1e-12);
            }
            prop_assert_eq!(write_csv(&back), text);
        }
    }
}
