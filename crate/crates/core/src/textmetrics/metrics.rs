use super::lexicon::Lexicon;
use super::segment::Sentence;
use super::TextError;
use crate::roughset::ToneClass;

/// Report-level shares, each over all sentences of the report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportMetrics {
    pub tone: f64,
    pub pos_pct: f64,
    pub neg_pct: f64,
    pub text_only_pct: f64,
    pub hedge_pct: f64,
    pub n_sentences: usize,
}

/// A sentence carries numeric content iff it contains `$` or `%`.
pub fn has_numeric(s: &Sentence) -> bool {
    s.text.contains(['$', '%'])
}

pub fn text_only(s: &Sentence) -> bool {
    !has_numeric(s)
}

pub fn has_hedge(s: &Sentence, lex: &Lexicon) -> bool {
    lex.matches(&s.text)
}

pub fn report_metrics(
    sentences: &[Sentence],
    labels: &[ToneClass],
    lex: &Lexicon,
) -> Result<ReportMetrics, TextError> {
    if sentences.len() != labels.len() {
        return Err(TextError::LengthMismatch {
            sentences: sentences.len(),
            labels: labels.len(),
        });
    }
    if sentences.is_empty() {
        return Err(TextError::EmptyReport);
    }
    let n = sentences.len();
    let count = |pred: &dyn Fn(usize) -> bool| (0..n).filter(|&i| pred(i)).count();
    let pos = count(&|i| labels[i] == ToneClass::Positive);
    let neg = count(&|i| labels[i] == ToneClass::Negative);
    let text_only_n = count(&|i| text_only(&sentences[i]));
    let hedged = count(&|i| has_hedge(&sentences[i], lex));
    let nf = n as f64;
    let pos_pct = pos as f64 / nf;
    let neg_pct = neg as f64 / nf;
    Ok(ReportMetrics {
        tone: pos_pct - neg_pct,
        pos_pct,
        neg_pct,
        text_only_pct: text_only_n as f64 / nf,
        hedge_pct: hedged as f64 / nf,
        n_sentences: n,
    })
}
