//! Pattern fixes applied between the two rounds: polarity words and money
//! amounts that round one left as O.

use crate::corpus::Sentence;
use crate::lexicon::{AuxLexicons, PolarityLexicon};
use crate::schema::{paint, Label, Span, Tag, TransitionLabel};

fn is_number(word: &str) -> bool {
    let (int, frac) = match word.split_once('.') {
        Some((a, b)) => (a, Some(b)),
        None => (word, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    digits(int) && frac.is_none_or(digits)
}

/// Returns a copy of `tags` with O-tagged polarity runs turned into Polarity
/// chunks and O-tagged numbers (plus an optional currency unit) turned into
/// Money chunks. Tokens that already carry a tag are left alone.
pub fn adjust_patterns(tags: &[Tag], sentence: &Sentence, polarity: &PolarityLexicon, aux: &AuxLexicons) -> Vec<Tag> {
    let words: Vec<String> = sentence.tokens.iter().map(|t| t.text.to_lowercase()).collect();
    let mut out = tags.to_vec();
    let n = words.len();
    let mut i = 0;
    while i < n {
        if out[i] != Tag::O {
            i += 1;
            continue;
        }
        if polarity.contains(&words[i]) {
            let mut j = i + 1;
            while j < n && out[j] == Tag::O && polarity.contains(&words[j]) {
                j += 1;
            }
            paint(&mut out, Span::new(i, j), Label::Transition(TransitionLabel::Polarity));
            i = j;
        } else if is_number(&words[i]) {
            let mut j = i + 1;
            if j < n && out[j] == Tag::O && aux.is_currency(&words[j]) {
                j += 1;
            }
            paint(&mut out, Span::new(i, j), Label::Transition(TransitionLabel::Money));
            i = j;
        } else {
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Token;
    use crate::lexicon::Lexicons;

    fn run(words: &[&str], tags: &[&str]) -> Vec<String> {
        let lex = Lexicons::default();
        let s = Sentence::from_tokens(words.iter().map(|w| Token::new(*w, "UNK")).collect());
        let tags: Vec<Tag> = tags.iter().map(|t| t.parse().unwrap()).collect();
        adjust_patterns(&tags, &s, &lex.polarity, &lex.aux)
            .iter()
            .map(|t| t.to_string())
            .collect()
    }

    #[test]
    fn money_with_unit() {
        assert_eq!(
            run(&["owes", "5000", "yuan"], &["B_Debt", "O", "O"]),
            ["B_Debt", "B_Money", "I_Money"]
        );
        assert_eq!(run(&["12.5"], &["O"]), ["B_Money"]);
        assert_eq!(run(&["12.", "x1"], &["O", "O"]), ["O", "O"]);
    }

    #[test]
    fn polarity_runs() {
        assert_eq!(
            run(&["i", "not", "never", "beat"], &["O", "O", "O", "B_Domestic_Violence"]),
            ["O", "B_Polarity", "I_Polarity", "B_Domestic_Violence"]
        );
    }

    #[test]
    fn tagged_tokens_are_kept() {
        assert_eq!(run(&["5000", "yuan"], &["B_Age", "O"]), ["B_Age", "O"]);
        assert_eq!(run(&["not"], &["B_Result"]), ["B_Result"]);
    }

    #[test]
    fn adjusted_output_stays_bio_valid() {
        let out = run(&["5000", "not", "x"], &["O", "O", "B_Time"]);
        let tags: Vec<Tag> = out.iter().map(|t| t.parse().unwrap()).collect();
        assert!(crate::schema::bio_violations(&tags).is_empty());
    }
}
