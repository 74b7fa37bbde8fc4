use super::lexicon::tokenize;
use crate::roughset::ToneClass;

const POSITIVE: &[&str] = &[
    "accelerate",
    "accelerating",
    "beat",
    "beats",
    "benefit",
    "benefits",
    "better",
    "boost",
    "confident",
    "confidence",
    "encouraging",
    "exceed",
    "exceeded",
    "exceeds",
    "expand",
    "expanding",
    "expansion",
    "favorable",
    "gain",
    "gains",
    "good",
    "growth",
    "grow",
    "grew",
    "higher",
    "improve",
    "improved",
    "improvement",
    "improving",
    "increase",
    "increased",
    "momentum",
    "opportunity",
    "opportunities",
    "outperform",
    "outperformed",
    "positive",
    "profitable",
    "raise",
    "raised",
    "rebound",
    "record",
    "recovery",
    "rise",
    "rising",
    "robust",
    "solid",
    "strong",
    "stronger",
    "strength",
    "success",
    "successful",
    "traction",
    "upgrade",
    "upside",
];

const NEGATIVE: &[&str] = &[
    "adverse",
    "challenging",
    "concern",
    "concerns",
    "cut",
    "cuts",
    "decline",
    "declined",
    "declining",
    "decrease",
    "decreased",
    "deteriorate",
    "deteriorating",
    "difficult",
    "disappointing",
    "downgrade",
    "downside",
    "drop",
    "dropped",
    "fall",
    "fell",
    "falling",
    "headwind",
    "headwinds",
    "impairment",
    "lose",
    "loss",
    "losses",
    "lower",
    "miss",
    "missed",
    "negative",
    "pressure",
    "pressured",
    "risk",
    "risks",
    "short",
    "shortfall",
    "slow",
    "slowdown",
    "slowing",
    "soft",
    "softness",
    "underperform",
    "weak",
    "weaker",
    "weakness",
    "worse",
];

/// Sign of (positive hits − negative hits) over a small polarity wordlist.
pub fn naive_tone(text: &str) -> ToneClass {
    let score: i64 = tokenize(text)
        .iter()
        .map(|t| {
            if POSITIVE.contains(&t.as_str()) {
                1
            } else if NEGATIVE.contains(&t.as_str()) {
                -1
            } else {
                0
            }
        })
        .sum();
    ToneClass::from_sign(score)
}
