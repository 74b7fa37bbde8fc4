use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use super::TextError;

const DEFAULT_LEXICON: &str = include_str!("default_lexicon.tsv");

/// Inflected forms added for lemmas that lead an entry.
const INFLECTIONS: &[(&str, &[&str])] = &[
    ("think", &["thinks", "thinking", "thought"]),
    ("believe", &["believes", "believed", "believing"]),
    ("feel", &["feels", "feeling", "felt"]),
    ("sense", &["senses", "sensed", "sensing"]),
    ("suppose", &["supposes", "supposed", "supposing"]),
    ("suggest", &["suggests", "suggested", "suggesting"]),
    ("argue", &["argues", "argued", "arguing"]),
    ("seem", &["seems", "seemed", "seeming"]),
    ("appear", &["appears", "appeared", "appearing"]),
    ("sound", &["sounds", "sounded", "sounding"]),
    ("look", &["looks", "looked", "looking"]),
    ("tend", &["tends", "tended", "tending"]),
    ("bit", &["bits"]),
    ("lot", &["lots"]),
    ("mass", &["masses"]),
    ("minority", &["minorities"]),
    ("majority", &["majorities"]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HedgeCategory {
    SubjectiveBelief,
    VagueProbability,
    /// Vague quantity, time and frequency.
    VagueQuantity,
    VagueExtent,
    VagueManner,
}

impl HedgeCategory {
    pub const ALL: [HedgeCategory; 5] = [
        HedgeCategory::SubjectiveBelief,
        HedgeCategory::VagueProbability,
        HedgeCategory::VagueQuantity,
        HedgeCategory::VagueExtent,
        HedgeCategory::VagueManner,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            HedgeCategory::SubjectiveBelief => "subjective_belief",
            HedgeCategory::VagueProbability => "vague_probability",
            HedgeCategory::VagueQuantity => "vague_quantity",
            HedgeCategory::VagueExtent => "vague_extent",
            HedgeCategory::VagueManner => "vague_manner",
        }
    }
}

impl fmt::Display for HedgeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HedgeCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HedgeCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category `{s}`"))
    }
}

/// Lower-cased word tokens; apostrophes inside words are kept.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '\'' || c == '\u{2019}'))
        .map(|t| t.trim_matches(|c| c == '\'' || c == '\u{2019}'))
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconEntry {
    pub category: HedgeCategory,
    /// The pattern as written in the source.
    pub pattern: String,
    /// Every surface form it expands to, as token sequences.
    pub forms: Vec<Vec<String>>,
}

/// A hedging wordlist, matched on token boundaries.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    by_first_token: BTreeMap<String, Vec<Vec<String>>>,
    warnings: Vec<String>,
}

/// `"approximate(ly)"` -> `["approximate", "approximately"]`,
/// `"say/speak"` -> `["say", "speak"]`.
fn token_alternatives(token: &str) -> Vec<String> {
    let mut out = Vec::new();
    for alt in token.split('/') {
        match (alt.find('('), alt.find(')')) {
            (Some(open), Some(close)) if open < close => {
                let stem = &alt[..open];
                let rest = &alt[close + 1..];
                out.push(format!("{stem}{rest}"));
                out.push(format!("{stem}{}{rest}", &alt[open + 1..close]));
            }
            _ => out.push(alt.to_string()),
        }
    }
    out.into_iter().map(|t| t.to_lowercase()).collect()
}

fn expand(pattern: &str, extra: &[String]) -> Vec<Vec<String>> {
    let mut forms: Vec<Vec<String>> = vec![Vec::new()];
    for (pos, raw) in pattern.split_whitespace().enumerate() {
        let mut alts = token_alternatives(raw);
        if pos == 0 {
            let inflected: Vec<String> = alts
                .iter()
                .flat_map(|a| {
                    INFLECTIONS
                        .iter()
                        .filter(move |(lemma, _)| lemma == a)
                        .flat_map(|(_, f)| f.iter().map(|s| s.to_string()))
                })
                .collect();
            alts.extend(inflected);
        }
        forms = forms
            .into_iter()
            .flat_map(|prefix| {
                alts.iter().map(move |a| {
                    let mut f = prefix.clone();
                    f.push(a.clone());
                    f
                })
            })
            .collect();
    }
    for e in extra {
        forms.push(tokenize(e));
    }
    let mut seen = HashSet::new();
    forms.retain(|f| !f.is_empty() && seen.insert(f.clone()));
    forms
}

/// Parse `category<TAB>pattern[<TAB>extra,forms]` lines. Blank lines and
/// `#` comments are skipped; duplicate patterns are dropped with a warning.
pub fn load_lexicon(source: &str) -> Result<Lexicon, TextError> {
    let mut lex = Lexicon::default();
    let mut seen = HashSet::new();
    for (i, raw) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (cat, pattern) = match (fields.next(), fields.next()) {
            (Some(c), Some(p)) => (c.trim(), p.trim()),
            _ => {
                return Err(TextError::LexiconParse {
                    line: line_no,
                    message: "expected `category<TAB>pattern`".into(),
                })
            }
        };
        let category: HedgeCategory = cat.parse().map_err(|message| TextError::LexiconParse {
            line: line_no,
            message,
        })?;
        if pattern.is_empty() || tokenize(pattern).is_empty() {
            return Err(TextError::LexiconParse {
                line: line_no,
                message: "empty pattern".into(),
            });
        }
        let extra: Vec<String> = fields
            .next()
            .map(|f| {
                f.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            })
            .unwrap_or_default();
        if fields.next().is_some() {
            return Err(TextError::LexiconParse {
                line: line_no,
                message: "too many fields".into(),
            });
        }
        let key = pattern
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ")
            .to_lowercase();
        if !seen.insert(key.clone()) {
            let msg = format!("line {line_no}: duplicate entry `{key}` ignored");
            log::warn!("{msg}");
            lex.warnings.push(msg);
            continue;
        }
        lex.push(LexiconEntry {
            category,
            pattern: pattern.to_string(),
            forms: expand(pattern, &extra),
        });
    }
    Ok(lex)
}

impl Lexicon {
    /// The bundled hedging wordlist.
    pub fn default_hedges() -> Lexicon {
        load_lexicon(DEFAULT_LEXICON).expect("bundled lexicon parses")
    }

    /// Source text of the bundled wordlist.
    pub fn default_source() -> &'static str {
        DEFAULT_LEXICON
    }

    fn push(&mut self, entry: LexiconEntry) {
        for form in &entry.forms {
            let bucket = self.by_first_token.entry(form[0].clone()).or_default();
            if !bucket.contains(form) {
                bucket.push(form.clone());
            }
        }
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// First lexicon form occurring as a contiguous run in `tokens`.
    pub fn find_in(&self, tokens: &[String]) -> Option<&[String]> {
        for start in 0..tokens.len() {
            if let Some(cands) = self.by_first_token.get(&tokens[start]) {
                for form in cands {
                    if tokens[start..].starts_with(form) {
                        return Some(form);
                    }
                }
            }
        }
        None
    }

    pub fn matches(&self, text: &str) -> bool {
        self.find_in(&tokenize(text)).is_some()
    }

    /// Render as `category<TAB>pattern` lines.
    pub fn dump(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{}\t{}\n", e.category, e.pattern))
            .collect()
    }
}
