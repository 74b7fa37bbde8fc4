use serde::Deserialize;
use serde_json::Value;

use super::lexicon::Lexicon;
use super::metrics::{report_metrics, ReportMetrics};
use super::polarity::naive_tone;
use super::segment::{segment_sentences, Sentence};
use super::TextError;
use crate::roughset::ToneClass;
use crate::Execution;

pub const METRICS_HEADER: &str =
    "report_id,n_sentences,tone,pos_pct,neg_pct,text_only_pct,hedge_pct";

/// Where sentence tone labels come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelMode {
    /// Use `tone_label` from the corpus; reports without complete labels
    /// fall back to [`naive_tone`] and are flagged.
    External,
    /// Ignore supplied labels and use [`naive_tone`] everywhere.
    Naive,
}

/// `"positive" | "neutral" | "negative"` or `1 | 0 | -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToneLabel(pub ToneClass);

impl<'de> Deserialize<'de> for ToneLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        let tone = match &v {
            Value::String(s) => match s.to_ascii_lowercase().as_str() {
                "positive" | "pos" => Some(ToneClass::Positive),
                "neutral" | "neu" => Some(ToneClass::Neutral),
                "negative" | "neg" => Some(ToneClass::Negative),
                _ => None,
            },
            Value::Number(n) => n.as_i64().and_then(ToneClass::from_value),
            _ => None,
        };
        tone.map(ToneLabel)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid tone label {v}")))
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct SentenceInput {
    pub text: String,
    #[serde(default)]
    pub tone_label: Option<ToneLabel>,
}

/// One JSONL corpus line: pre-split `sentences` or raw `text`.
#[derive(Debug, Clone, Deserialize)]
pub struct ReportInput {
    pub report_id: String,
    pub analyst_id: String,
    pub firm_id: String,
    pub date: String,
    #[serde(default)]
    pub sentences: Option<Vec<SentenceInput>>,
    #[serde(default)]
    pub text: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzedReport {
    pub report_id: String,
    pub analyst_id: String,
    pub firm_id: String,
    pub date: String,
    pub metrics: ReportMetrics,
    pub naive_fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusAnalysis {
    pub reports: Vec<AnalyzedReport>,
}

impl CorpusAnalysis {
    pub fn fallback_ids(&self) -> Vec<&str> {
        self.reports
            .iter()
            .filter(|r| r.naive_fallback)
            .map(|r| r.report_id.as_str())
            .collect()
    }
}

fn valid_iso_date(s: &str) -> bool {
    let b = s.as_bytes();
    if b.len() != 10 || b[4] != b'-' || b[7] != b'-' {
        return false;
    }
    let num = |r: std::ops::Range<usize>| s[r].parse::<u32>().ok();
    match (num(0..4), num(5..7), num(8..10)) {
        (Some(y), Some(m), Some(d)) => {
            let leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
            let days = match m {
                1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
                4 | 6 | 9 | 11 => 30,
                2 if leap => 29,
                2 => 28,
                _ => return false,
            };
            (1..=days).contains(&d)
        }
        _ => false,
    }
}

fn parse_line(line: &str, line_no: usize) -> Result<ReportInput, TextError> {
    let err = |message: String| TextError::CorpusParse {
        line: line_no,
        message,
    };
    let report: ReportInput = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
    if report.report_id.trim().is_empty() {
        return Err(err("empty report_id".into()));
    }
    if !valid_iso_date(&report.date) {
        return Err(err(format!("date `{}` is not YYYY-MM-DD", report.date)));
    }
    match (&report.sentences, &report.text) {
        (Some(_), Some(_)) => {
            return Err(err("give either `sentences` or `text`, not both".into()))
        }
        (None, None) => return Err(err("missing `sentences` or `text`".into())),
        (Some(s), None) if s.is_empty() => return Err(err("report has no sentences".into())),
        (Some(s), None) => {
            if let Some(k) = s.iter().position(|x| x.text.trim().is_empty()) {
                return Err(err(format!("sentence {k} is empty")));
            }
        }
        (None, Some(t)) if t.trim().is_empty() => return Err(err("report text is empty".into())),
        _ => {}
    }
    Ok(report)
}

/// Parse a JSONL corpus, skipping blank lines.
pub fn parse_corpus(source: &str) -> Result<Vec<ReportInput>, TextError> {
    let reports = source
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_line(l, i + 1))
        .collect::<Result<Vec<_>, _>>()?;
    if reports.is_empty() {
        return Err(TextError::NoReports);
    }
    Ok(reports)
}

fn analyze_report(
    report: &ReportInput,
    lex: &Lexicon,
    mode: LabelMode,
) -> Result<AnalyzedReport, TextError> {
    let (sentences, supplied): (Vec<Sentence>, Option<Vec<ToneClass>>) =
        match (&report.sentences, &report.text) {
            (Some(list), _) => {
                let sentences = list
                    .iter()
                    .enumerate()
                    .map(|(i, s)| Sentence::new(s.text.trim(), i))
                    .collect();
                let labels = list
                    .iter()
                    .map(|s| s.tone_label.map(|l| l.0))
                    .collect::<Option<Vec<_>>>();
                (sentences, labels)
            }
            (None, Some(text)) => (segment_sentences(text)?, None),
            (None, None) => return Err(TextError::EmptyReport),
        };
    let (labels, naive_fallback) = match (mode, supplied) {
        (LabelMode::External, Some(labels)) => (labels, false),
        (LabelMode::External, None) => (
            sentences.iter().map(|s| naive_tone(&s.text)).collect(),
            true,
        ),
        (LabelMode::Naive, _) => (
            sentences.iter().map(|s| naive_tone(&s.text)).collect(),
            false,
        ),
    };
    Ok(AnalyzedReport {
        report_id: report.report_id.clone(),
        analyst_id: report.analyst_id.clone(),
        firm_id: report.firm_id.clone(),
        date: report.date.clone(),
        metrics: report_metrics(&sentences, &labels, lex)?,
        naive_fallback,
    })
}

/// Parse and measure every report of a JSONL corpus.
pub fn analyze_corpus(
    source: &str,
    lex: &Lexicon,
    mode: LabelMode,
    exec: Execution,
) -> Result<CorpusAnalysis, TextError> {
    let reports = parse_corpus(source)?;
    let reports = exec
        .map_slice(&reports, |r| analyze_report(r, lex, mode))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CorpusAnalysis { reports })
}

/// Per-report metrics as CSV with [`METRICS_HEADER`].
pub fn metrics_csv(reports: &[AnalyzedReport]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(METRICS_HEADER.split(','))
        .expect("in-memory write");
    for r in reports {
        let m = &r.metrics;
        w.write_record([
            r.report_id.clone(),
            m.n_sentences.to_string(),
            m.tone.to_string(),
            m.pos_pct.to_string(),
            m.neg_pct.to_string(),
            m.text_only_pct.to_string(),
            m.hedge_pct.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8 csv")
}
