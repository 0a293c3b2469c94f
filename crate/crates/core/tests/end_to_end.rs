use std::io::Cursor;

use tweetcone_core::analysis::{cone_statistic, dispersion_by_length, export_scatter};
use tweetcone_core::{
    expand_lexicon, kmeans, load_lexicon, read_corpus, read_csv, save_lexicon, score_corpus, shuffle,
    write_arff, write_csv, ArffOptions, ExpansionOptions, FilterConfig, KMeansConfig, LoadMode, Origin,
    Point2, TokenizeMode,
};

const SEED: &str = "bad\t-3\ngood\t3\nhappy\t3\nsad\t-2\n";

fn line(text: &str, day: u32) -> String {
    format!(
        r#"{{"text":{text:?},"lang":"en","place":{{"country_code":"US","place_type":"city"}},"created_at":"2014-03-{day:02}T12:00:00Z"}}"#
    )
}

fn corpus() -> String {
    let mut out = String::new();
    let texts = [
        "good coffee",
        "bad coffee today",
        "happy happy monday",
        "sad monday rain",
        "good day @someone http://t.co/x",
        "#happy weekend!",
        "rain rain rain",
        "bad bad bad traffic",
    ];
    for (i, t) in texts.iter().enumerate() {
        out.push_str(&line(t, 1 + i as u32));
        out.push('\n');
    }
    out.push_str("{\"delete\":{}}\n");
    out
}

#[test]
fn corpus_to_cone_statistic() {
    let seed = load_lexicon(Cursor::new(SEED), LoadMode::Seed).unwrap();
    let (tweets, stats) = read_corpus(Cursor::new(corpus()), &FilterConfig::default()).unwrap();
    assert_eq!(tweets.len(), 8);
    assert_eq!(stats.read, 9);

    let (lex, _) = expand_lexicon(&tweets, &seed, &ExpansionOptions::default());
    // coffee: (3/2 + -3/3) / 2
    assert!((lex.get("coffee").unwrap() - 0.25).abs() < 1e-12);
    // monday: (6/3 + -2/3) / 2
    assert!((lex.get("monday").unwrap() - 2.0 / 3.0).abs() < 1e-12);
    // rain appears only with "sad" as evidence.
    assert!((lex.get("rain").unwrap() + 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(lex.get("weekend"), Some(3.0 / 2.0));
    assert_eq!(lex.get("someone"), None);
    assert_eq!(lex.count_by_origin(Origin::Seed), 4);

    let reloaded = load_lexicon(Cursor::new(save_lexicon(&lex)), LoadMode::Mixed).unwrap();
    assert_eq!(reloaded.len(), lex.len());

    let (records, score_stats) = score_corpus(&tweets, &lex, TokenizeMode::Clean);
    assert_eq!(score_stats.scored, 8);
    let rain = &records[6];
    assert_eq!(rain.length, "rain rain rain".chars().count());
    assert!((rain.sentiment + 2.0).abs() < 1e-12);

    let shuffled = shuffle(&records, 1);
    let csv = write_csv(&shuffled);
    let back = read_csv(&csv).unwrap();
    assert_eq!(back.len(), records.len());
    let arff = write_arff(&back, "tweets", ArffOptions { include_date: false }).unwrap();
    assert_eq!(arff.lines().filter(|l| !l.is_empty() && !l.starts_with('@')).count(), 8);

    let points: Vec<Point2> = back.iter().map(Point2::from).collect();
    let model = kmeans(&points, &KMeansConfig::default()).unwrap();
    assert_eq!(model.sizes.iter().sum::<usize>(), 8);
    assert!(model.converged);

    let profile = dispersion_by_length(&back, 10).unwrap();
    assert_eq!(profile.total_count(), 8);
    assert!(cone_statistic(&back, &model).unwrap().is_some());
    assert_eq!(export_scatter(&back, &model).lines().count(), 8);
}

#[test]
fn raw_tokens_keep_markup() {
    let seed = load_lexicon(Cursor::new(SEED), LoadMode::Seed).unwrap();
    let (tweets, _) = read_corpus(Cursor::new(corpus()), &FilterConfig::default()).unwrap();
    let opts = ExpansionOptions { tokenize: TokenizeMode::Raw, ..ExpansionOptions::default() };
    let (lex, _) = expand_lexicon(&tweets, &seed, &opts);
    assert!(lex.contains("@someone"));
    assert!(lex.contains("http://t.co/x"));
    // "#happy" is not the seed term in raw mode, so that tweet has no evidence.
    assert!(!lex.contains("weekend!"));
}
