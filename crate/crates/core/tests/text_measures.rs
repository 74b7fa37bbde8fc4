use proptest::prelude::*;
use vague_core::roughset::ToneClass;
use vague_core::textmetrics::{
    has_hedge, has_numeric, report_metrics, segment_sentences, Lexicon, Sentence,
};

const SEGMENT_SOURCE: &str = include_str!("fixtures/segment50.txt");
const SEGMENT_EXPECTED: &str = include_str!("fixtures/segment50.expected");
const METRICS_SOURCE: &str = include_str!("fixtures/metrics20.txt");

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[test]
fn curated_fifty_sentences() {
    let got: Vec<String> = segment_sentences(SEGMENT_SOURCE)
        .unwrap()
        .iter()
        .map(|s| squash(&s.text))
        .collect();
    let expected: Vec<&str> = SEGMENT_EXPECTED.lines().collect();
    assert_eq!(expected.len(), 50);
    assert_eq!(got.len(), 50);
    for (i, (g, e)) in got.iter().zip(&expected).enumerate() {
        assert_eq!(g, e, "sentence {i}");
    }
}

use ToneClass::{Negative as N, Neutral as O, Positive as P};

/// Hand labels plus hand-marked numeric and hedge flags, one per sentence.
const HAND: [(ToneClass, bool, bool); 20] = [
    (P, true, false),  // Revenue rose 12%
    (P, false, true),  // We believe
    (N, true, false),  // Gross margin fell to 41.2%
    (O, false, true),  // may revisit
    (O, true, false),  // $54 per share
    (O, false, true),  // roughly in line
    (P, true, false),  // $1.2B
    (N, false, false), // Competition intensified
    (P, false, true),  // could improve
    (O, false, false), // reiterated guidance
    (N, true, false),  // Churn 3%
    (O, false, true),  // seems stable
    (P, true, false),  // declined 5%
    (O, false, false), // plant in Ohio
    (N, false, true),  // likely to persist
    (P, true, false),  // $70
    (P, true, false),  // $3.4 billion
    (P, false, false), // no net debt
    (O, false, true),  // Perhaps
    (N, false, false), // Legal costs
];

#[test]
fn curated_twenty_sentence_report() {
    let lex = Lexicon::default_hedges();
    let sentences = segment_sentences(METRICS_SOURCE).unwrap();
    assert_eq!(sentences.len(), 20);
    for (s, &(_, numeric, hedge)) in sentences.iter().zip(&HAND) {
        assert_eq!(has_numeric(s), numeric, "{}", s.text);
        assert_eq!(has_hedge(s, &lex), hedge, "{}", s.text);
    }
    let labels: Vec<ToneClass> = HAND.iter().map(|h| h.0).collect();
    let m = report_metrics(&sentences, &labels, &lex).unwrap();
    // 8 positive, 5 negative, 8 with $ or %, 7 hedged.
    assert_eq!(m.n_sentences, 20);
    assert_eq!(m.pos_pct, 8.0 / 20.0);
    assert_eq!(m.neg_pct, 5.0 / 20.0);
    assert_eq!(m.tone, 8.0 / 20.0 - 5.0 / 20.0);
    assert!((m.tone - 0.15).abs() < 1e-15);
    assert_eq!(m.text_only_pct, 12.0 / 20.0);
    assert_eq!(m.hedge_pct, 7.0 / 20.0);
}

fn corpus_sentences() -> Vec<Sentence> {
    segment_sentences(METRICS_SOURCE)
        .unwrap()
        .into_iter()
        .chain(segment_sentences(SEGMENT_SOURCE).unwrap())
        .collect()
}

fn tone_class() -> impl Strategy<Value = ToneClass> {
    prop_oneof![Just(P), Just(O), Just(N)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tone_is_pos_minus_neg(
        picks in prop::collection::vec((0usize..70, tone_class()), 1..40)
    ) {
        let pool = corpus_sentences();
        let sentences: Vec<Sentence> = picks.iter().map(|(i, _)| pool[*i].clone()).collect();
        let labels: Vec<ToneClass> = picks.iter().map(|p| p.1).collect();
        let m = report_metrics(&sentences, &labels, &Lexicon::default_hedges()).unwrap();
        prop_assert_eq!(m.tone, m.pos_pct - m.neg_pct);
        prop_assert!((-1.0..=1.0).contains(&m.tone));
        prop_assert!(m.pos_pct + m.neg_pct <= 1.0 + 1e-15);
        prop_assert!((0.0..=1.0).contains(&m.text_only_pct));
        prop_assert!((0.0..=1.0).contains(&m.hedge_pct));
    }

    #[test]
    fn order_does_not_matter(
        labels in prop::collection::vec(tone_class(), 20),
        perm in Just((0..20).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let lex = Lexicon::default_hedges();
        let s = segment_sentences(METRICS_SOURCE).unwrap();
        let a = report_metrics(&s, &labels, &lex).unwrap();
        let s2: Vec<Sentence> = perm.iter().map(|&i| s[i].clone()).collect();
        let l2: Vec<ToneClass> = perm.iter().map(|&i| labels[i]).collect();
        let b = report_metrics(&s2, &l2, &lex).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn case_and_punctuation_invariance(i in 0usize..70, upper in any::<bool>(), wrap in 0usize..4) {
        let lex = Lexicon::default_hedges();
        let s = &corpus_sentences()[i];
        let cased = if upper { s.text.to_uppercase() } else { s.text.to_lowercase() };
        let (l, r) = [("", ""), ("(", ")"), ("\"", "\""), ("- ", " ;")][wrap];
        let changed = Sentence::new(format!("{l}{cased}{r}"), 0);
        prop_assert_eq!(has_numeric(&changed), has_numeric(s));
        prop_assert_eq!(has_hedge(&changed, &lex), has_hedge(s, &lex));
    }
}

#[test]
fn stripping_dollar_and_percent_leaves_text_only() {
    let stripped: String = METRICS_SOURCE
        .chars()
        .chain(SEGMENT_SOURCE.chars())
        .filter(|c| !matches!(c, '$' | '%'))
        .collect();
    let s = segment_sentences(&stripped).unwrap();
    let labels = vec![O; s.len()];
    let m = report_metrics(&s, &labels, &Lexicon::default_hedges()).unwrap();
    assert_eq!(m.text_only_pct, 1.0);
}
