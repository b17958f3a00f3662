//! Observation channels and feature templates for the two labeling rounds.

use serde::{Deserialize, Serialize};

use crate::corpus::Sentence;
use crate::crf::{ObservationInput, Template};
use crate::schema::{chunks, EventType, Span, Tag};

/// Feature families that can be switched off for ablation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub use_pos: bool,
    pub use_trigger: bool,
    pub use_position: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            use_pos: true,
            use_trigger: true,
            use_position: true,
        }
    }
}

pub const CAND: &str = "cand";
pub const CAND_TYPE: &str = "candtype";
pub const R1: &str = "r1";
pub const CONCERN: &str = "concern";
pub const CONCERN_TYPE: &str = "ctype";
pub const BETWEEN: &str = "between";

fn ch(name: &str, off: i32) -> Template {
    Template::Channel(name.to_string(), off)
}

pub fn round_one_templates(cfg: &FeatureConfig) -> Vec<Template> {
    let mut t = vec![Template::Bias];
    t.extend((-2..=2).map(Template::Word));
    t.extend([Template::WordBigram(-1), Template::WordBigram(0)]);
    t.extend((-1..=1).map(Template::Shape));
    if cfg.use_pos {
        t.extend((-2..=2).map(Template::Pos));
    }
    if cfg.use_trigger {
        t.extend((-1..=1).map(|o| ch(CAND, o)));
        t.push(Template::Conj(vec![ch(CAND, 0), ch(CAND_TYPE, 0)]));
        t.push(ch(CAND_TYPE, -1));
        t.push(ch(CAND_TYPE, 1));
    }
    t
}

pub fn round_two_templates(cfg: &FeatureConfig) -> Vec<Template> {
    let mut t = vec![Template::Bias];
    t.extend((-1..=1).map(Template::Word));
    t.extend((-1..=1).map(|o| ch(R1, o)));
    t.push(ch(CONCERN, 0));
    t.push(Template::Conj(vec![ch(CONCERN_TYPE, 0), ch(R1, 0)]));
    t.push(Template::Conj(vec![ch(CONCERN_TYPE, 0), Template::Word(0)]));
    t.push(Template::Conj(vec![ch(CONCERN_TYPE, 0), Template::Word(-1)]));
    if cfg.use_position {
        t.push(Template::RelativePosition);
        t.push(Template::Conj(vec![Template::RelativePosition, ch(CONCERN_TYPE, 0)]));
        t.push(Template::Conj(vec![
            Template::RelativePosition,
            ch(CONCERN_TYPE, 0),
            ch(R1, 0),
        ]));
        t.push(Template::Conj(vec![ch(BETWEEN, 0), ch(CONCERN_TYPE, 0), ch(R1, 0)]));
    }
    t
}

fn lowered(sentence: &Sentence) -> Vec<String> {
    sentence.tokens.iter().map(|t| t.text.to_lowercase()).collect()
}

/// Round-one input: words, POS and the lexicon candidate mask.
pub fn round_one_input(sentence: &Sentence, candidates: &[(Span, EventType)]) -> ObservationInput {
    let n = sentence.len();
    let mut cand = vec!["O".to_string(); n];
    let mut ctype = vec!["O".to_string(); n];
    for (span, e) in candidates {
        for i in span.start..span.end {
            cand[i] = if i == span.start { "B" } else { "I" }.to_string();
            ctype[i] = e.tag_name().to_string();
        }
    }
    ObservationInput {
        words: lowered(sentence),
        pos: sentence.tokens.iter().map(|t| t.pos.clone()).collect(),
        ..Default::default()
    }
    .with_channel(CAND, cand)
    .with_channel(CAND_TYPE, ctype)
}

/// Signed distance of `i` from `span`; 0 inside.
pub fn offset_from(span: Span, i: usize) -> i32 {
    if i < span.start {
        i as i32 - span.start as i32
    } else if i >= span.end {
        i as i32 - (span.end as i32 - 1)
    } else {
        0
    }
}

/// Round-two input for the trigger chunk at `concerned`.
pub fn round_two_input(sentence: &Sentence, r1: &[Tag], concerned: Span, event: EventType) -> ObservationInput {
    let n = sentence.len();
    let triggers: Vec<Span> = chunks(r1)
        .into_iter()
        .filter(|c| c.label.is_trigger() && c.span != concerned)
        .map(|c| c.span)
        .collect();
    let between: Vec<String> = (0..n)
        .map(|i| {
            let (lo, hi) = if i < concerned.start {
                (i, concerned.start)
            } else {
                (concerned.end, i)
            };
            let hit = triggers.iter().any(|t| t.start >= lo && t.end <= hi && lo < hi);
            if hit { "1" } else { "0" }.to_string()
        })
        .collect();
    ObservationInput {
        words: lowered(sentence),
        pos: sentence.tokens.iter().map(|t| t.pos.clone()).collect(),
        relative_position: Some((0..n).map(|i| offset_from(concerned, i)).collect()),
        ..Default::default()
    }
    .with_channel(R1, r1.iter().map(|t| t.to_string()).collect())
    .with_channel(
        CONCERN,
        (0..n)
            .map(|i| if concerned.contains(i) { "1" } else { "0" }.to_string())
            .collect(),
    )
    .with_channel(CONCERN_TYPE, vec![event.tag_name().to_string(); n])
    .with_channel(BETWEEN, between)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Token;

    #[test]
    fn offsets() {
        let s = Span::new(3, 5);
        assert_eq!(offset_from(s, 0), -3);
        assert_eq!(offset_from(s, 4), 0);
        assert_eq!(offset_from(s, 7), 3);
    }

    #[test]
    fn ablation_drops_template_families() {
        let all = round_one_templates(&FeatureConfig::default());
        let no_trig = round_one_templates(&FeatureConfig {
            use_trigger: false,
            ..Default::default()
        });
        assert!(all.len() > no_trig.len());
        assert!(no_trig.iter().all(|t| !t.to_string().contains(CAND)));
        let no_pos = round_two_templates(&FeatureConfig {
            use_position: false,
            ..Default::default()
        });
        assert!(no_pos.iter().all(|t| !t.to_string().contains("relpos")));
    }

    #[test]
    fn between_channel_marks_tokens_past_other_triggers() {
        let s = Sentence::from_tokens(
            ["we", "met", "and", "married", "2005"]
                .iter()
                .map(|w| Token::new(*w, "UNK"))
                .collect(),
        );
        let r1: Vec<Tag> = ["O", "B_Know", "O", "B_Marry", "B_Time"]
            .iter()
            .map(|t| t.parse().unwrap())
            .collect();
        let x = round_two_input(&s, &r1, Span::new(1, 2), EventType::Know);
        assert_eq!(x.channels[BETWEEN], ["0", "0", "0", "0", "1"]);
        assert_eq!(x.channels[CONCERN], ["0", "1", "0", "0", "0"]);
    }
}
