//! Synthetic inputs shared by the benchmarks.

use tweetcone_core::{Lexicon, Point2, SplitMix64, Tweet};

const WORDS: [&str; 16] = [
    "good", "bad", "happy", "sad", "coffee", "monday", "rain", "sun", "traffic", "work", "friends",
    "music", "city", "game", "tonight", "love",
];

pub fn synthetic_seed() -> Lexicon {
    Lexicon::from_seed_pairs([("good", 3), ("bad", -3), ("happy", 3), ("sad", -2), ("love", 3)])
        .expect("valid seed")
}

pub fn synthetic_corpus(n: usize, seed: u64) -> Vec<Tweet> {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|_| {
            let len = 1 + rng.below(20);
            let words: Vec<&str> = (0..len).map(|_| WORDS[rng.below(WORDS.len())]).collect();
            Tweet::new(words.join(" "), "2014-03-01T00:00:00Z")
        })
        .collect()
}

pub fn synthetic_points(n: usize, seed: u64) -> Vec<Point2> {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|_| {
            let len = 1 + rng.below(140);
            let spread = (len as f64).sqrt();
            Point2::new(len as f64, (rng.next_f64() - 0.5) * spread + 2.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(synthetic_corpus(10, 4), synthetic_corpus(10, 4));
        assert_eq!(synthetic_points(10, 4), synthetic_points(10, 4));
        assert_eq!(synthetic_points(14_763, 0).len(), 14_763);
    }
}
