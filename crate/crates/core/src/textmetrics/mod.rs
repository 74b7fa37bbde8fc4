//! Report text measures: sentence segmentation, hedge detection and the
//! report-level Tone, TextOnly% and Hedge% shares.
//!
//! Tone labels per sentence normally come from an external classifier; the
//! bundled [`naive_tone`] word counter is a fallback only.

mod corpus;
mod lexicon;
mod metrics;
mod polarity;
mod segment;

use thiserror::Error;

pub use corpus::{
    analyze_corpus, metrics_csv, parse_corpus, AnalyzedReport, CorpusAnalysis, LabelMode,
    ReportInput, SentenceInput, ToneLabel, METRICS_HEADER,
};
pub use lexicon::{load_lexicon, tokenize, HedgeCategory, Lexicon, LexiconEntry};
pub use metrics::{has_hedge, has_numeric, report_metrics, text_only, ReportMetrics};
pub use polarity::naive_tone;
pub use segment::{segment_sentences, Sentence, ABBREVIATIONS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TextError {
    #[error("report has no sentences")]
    EmptyReport,
    #[error("{sentences} sentences but {labels} tone labels")]
    LengthMismatch { sentences: usize, labels: usize },
    #[error("lexicon line {line}: {message}")]
    LexiconParse { line: usize, message: String },
    #[error("corpus line {line}: {message}")]
    CorpusParse { line: usize, message: String },
    #[error("no reports in corpus")]
    NoReports,
}
