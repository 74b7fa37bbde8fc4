use super::TextError;

/// One sentence of a report, with its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub text: String,
    pub index: usize,
}

impl Sentence {
    pub fn new(text: impl Into<String>, index: usize) -> Self {
        Sentence {
            text: text.into(),
            index,
        }
    }
}

/// Lower-cased tokens that end in a period without ending a sentence.
pub const ABBREVIATIONS: &[&str] = &[
    "inc.", "corp.", "co.", "ltd.", "llc.", "plc.", "bros.", "vs.", "v.", "u.s.", "u.k.", "e.g.",
    "i.e.", "mr.", "mrs.", "ms.", "dr.", "st.", "jr.", "sr.", "no.", "nos.", "approx.", "est.",
    "fig.", "jan.", "feb.", "mar.", "apr.", "jun.", "jul.", "aug.", "sep.", "sept.", "oct.",
    "nov.", "dec.", "q1.", "q2.", "q3.", "q4.", "fy.", "yr.", "yrs.", "mo.", "avg.", "bn.", "mn.",
    "mln.", "bln.", "cf.", "al.", "dept.", "div.", "intl.", "mgmt.",
];

const CLOSERS: &[char] = &['"', '\'', ')', ']', '}', '\u{201d}', '\u{2019}'];

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Word ending at byte `end` (exclusive), without leading brackets or quotes.
fn word_before(text: &str, end: usize) -> &str {
    let start = text[..end]
        .rfind(char::is_whitespace)
        .map(|i| i + text[i..].chars().next().map_or(1, char::len_utf8))
        .unwrap_or(0);
    text[start..end].trim_start_matches(|c: char| !c.is_alphanumeric())
}

/// Split on `.`, `!` and `?` followed by whitespace or end of text.
///
/// A period only ends a sentence when the word it closes is not a known
/// abbreviation; periods inside numbers (`$2.50`) or dotted tokens
/// (`U.S.`) never do, since no whitespace follows them.
pub fn segment_sentences(text: &str) -> Result<Vec<Sentence>, TextError> {
    if text.trim().is_empty() {
        return Err(TextError::EmptyReport);
    }
    let mut out = Vec::new();
    let mut start = 0;
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if !is_terminal(c) {
            k += 1;
            continue;
        }
        // swallow runs like "?!" and trailing closers like `."`
        let mut j = k + 1;
        while j < chars.len() && is_terminal(chars[j].1) {
            j += 1;
        }
        while j < chars.len() && CLOSERS.contains(&chars[j].1) {
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |(p, _)| *p);
        let at_break = j == chars.len() || chars[j].1.is_whitespace();
        let single_period = c == '.' && j == k + 1;
        let guarded = single_period && j < chars.len() && {
            let word = word_before(text, pos + 1).to_lowercase();
            ABBREVIATIONS.contains(&word.as_str())
        };
        if at_break && !guarded {
            push_sentence(&mut out, &text[start..end]);
            start = end;
        }
        k = j;
    }
    push_sentence(&mut out, &text[start..]);
    if out.is_empty() {
        return Err(TextError::EmptyReport);
    }
    Ok(out)
}

fn push_sentence(out: &mut Vec<Sentence>, raw: &str) {
    let trimmed = raw.trim();
    if !trimmed.is_empty() {
        let index = out.len();
        out.push(Sentence::new(trimmed, index));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(s: &str) -> Vec<String> {
        segment_sentences(s)
            .unwrap()
            .into_iter()
            .map(|s| s.text)
            .collect()
    }

    #[test]
    fn three_terminal_marks() {
        assert_eq!(texts("A. B? C!"), vec!["A.", "B?", "C!"]);
    }

    #[test]
    fn decimal_is_not_a_boundary() {
        assert_eq!(
            texts("EPS of $2.50 rose. Margins fell."),
            vec!["EPS of $2.50 rose.", "Margins fell."]
        );
    }

    #[test]
    fn abbreviations_are_guarded() {
        assert_eq!(
            texts("Apple Inc. beat again. U.S. sales vs. Europe were flat. Q1. was weak."),
            vec![
                "Apple Inc. beat again.",
                "U.S. sales vs. Europe were flat.",
                "Q1. was weak."
            ]
        );
        // an abbreviation at the very end still closes the text
        assert_eq!(texts("We like Acme Corp."), vec!["We like Acme Corp."]);
    }

    #[test]
    fn closers_and_runs() {
        assert_eq!(
            texts("He said \"buy.\" Really?! Yes (mostly.) Done"),
            vec!["He said \"buy.\"", "Really?!", "Yes (mostly.)", "Done"]
        );
    }

    #[test]
    fn indices_follow_order() {
        let s = segment_sentences("One. Two. Three.").unwrap();
        assert_eq!(s.iter().map(|x| x.index).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn empty_text_is_an_error() {
        assert_eq!(segment_sentences("   \n"), Err(TextError::EmptyReport));
        assert_eq!(segment_sentences(""), Err(TextError::EmptyReport));
    }
}
