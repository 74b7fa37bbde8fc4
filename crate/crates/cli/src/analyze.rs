use vague_core::econometrics::describe_markdown;
use vague_core::textmetrics::{analyze_corpus, load_lexicon, metrics_csv, LabelMode, Lexicon};
use vague_core::Execution;

use crate::error::{core, CliError};
use crate::output::{read_input, OutDir, Provenance};
use crate::{AnalyzeArgs, Labels};

pub fn run(args: &AnalyzeArgs, exec: Execution) -> Result<(), CliError> {
    let corpus = read_input(&args.input)?;
    let lexicon_file = args.lexicon.as_deref().map(read_input).transpose()?;
    let lexicon = match &lexicon_file {
        Some(f) => load_lexicon(&f.text).map_err(core)?,
        None => Lexicon::default_hedges(),
    };
    for w in lexicon.warnings() {
        log::warn!("lexicon: {w}");
    }
    let mode = match args.labels {
        Labels::External => LabelMode::External,
        Labels::Naive => LabelMode::Naive,
    };
    let analysis = analyze_corpus(&corpus.text, &lexicon, mode, exec).map_err(core)?;

    let mut inputs = vec![&corpus];
    inputs.extend(lexicon_file.as_ref());
    let mut prov = Provenance::new("analyze", None, &inputs);
    prov.note(match mode {
        LabelMode::External => "tone labels: external",
        LabelMode::Naive => "tone labels: naive (lexicon polarity count)",
    });
    let fallback = analysis.fallback_ids();
    if !fallback.is_empty() {
        prov.note(format!(
            "naive tone fallback (labels missing): {}",
            fallback.join(" ")
        ));
        log::warn!(
            "{} reports scored with the naive tone fallback",
            fallback.len()
        );
    }

    let col = |f: fn(&vague_core::textmetrics::ReportMetrics) -> f64| -> Vec<f64> {
        analysis.reports.iter().map(|r| f(&r.metrics)).collect()
    };
    let tone = col(|m| m.tone);
    let text_only = col(|m| m.text_only_pct);
    let hedge = col(|m| m.hedge_pct);
    let pos = col(|m| m.pos_pct);
    let neg = col(|m| m.neg_pct);
    let summary = format!(
        "# Report text summary\n\n{} reports\n\n{}",
        analysis.reports.len(),
        describe_markdown(&[
            ("Tone", &tone),
            ("TextOnly%", &text_only),
            ("Hedge%", &hedge),
            ("Pos%", &pos),
            ("Neg%", &neg),
        ])
    );

    let out = OutDir::create(&args.output, prov)?;
    out.write("metrics.csv", &metrics_csv(&analysis.reports))?;
    out.write("summary.md", &summary)?;
    print!("{summary}");
    Ok(())
}

pub fn lexicon_dump(expanded: bool) -> String {
    let lex = Lexicon::default_hedges();
    let mut out = Provenance::new("lexicon", None, &[]).hash_comment();
    if !expanded {
        out.push_str(&lex.dump());
        return out;
    }
    for e in lex.entries() {
        let forms: Vec<String> = e.forms.iter().map(|f| f.join(" ")).collect();
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            e.category,
            e.pattern,
            forms.join(" | ")
        ));
    }
    out
}
