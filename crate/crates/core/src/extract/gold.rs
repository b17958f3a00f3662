//! Gold tag sequences for both rounds, derived from annotated events, and
//! the training sets built from them.

use crate::corpus::{Document, Sentence};
use crate::crf::{
    build_feature_table, tag_indices, train, CrfModel, Observation, ObservationInput, TrainConfig, TrainOutcome,
};
use crate::error::CrfError;
use crate::extract::features::{
    round_one_input, round_one_templates, round_two_input, round_two_templates, FeatureConfig,
};
use crate::extract::patterns::adjust_patterns;
use crate::lexicon::{scan_candidates, Lexicons};
use crate::schema::{
    chunks, paint, to_transition_tags, EventType, Label, LabelSchema, Span, Tag, Vocabulary, MAX_SEQUENCE_LENGTH,
};

/// Round-one gold: every role span painted with its transition label, then
/// every trigger on top (triggers win overlaps). Sentences without event
/// annotations fall back to their final labels, or all O.
pub fn gold_round_one(sentence: &Sentence) -> Vec<Tag> {
    if sentence.events.is_empty() {
        return match &sentence.labels {
            Some(l) => to_transition_tags(l),
            None => vec![Tag::O; sentence.len()],
        };
    }
    let mut tags = vec![Tag::O; sentence.len()];
    let triggers: Vec<Span> = sentence.events.iter().map(|e| e.trigger).collect();
    for e in &sentence.events {
        for (role, spans) in &e.roles {
            for s in spans {
                if !triggers.iter().any(|t| t.overlaps(s)) {
                    paint(&mut tags, *s, Label::Transition(role.transition()));
                }
            }
        }
    }
    for e in &sentence.events {
        paint(&mut tags, e.trigger, Label::Trigger(e.event_type));
    }
    tags
}

/// Round-two gold for the trigger chunk at `trigger`: the trigger itself plus
/// every round-one chunk that a gold event on this trigger holds with a
/// matching transition label.
pub fn gold_round_two(sentence: &Sentence, r1: &[Tag], trigger: Span, event: EventType) -> Vec<Tag> {
    let mut tags = vec![Tag::O; r1.len()];
    let owners: Vec<_> = sentence
        .events
        .iter()
        .filter(|e| e.trigger == trigger && e.event_type == event)
        .collect();
    for c in chunks(r1) {
        let Label::Transition(label) = c.label else { continue };
        let role = owners.iter().find_map(|e| {
            e.roles
                .iter()
                .find(|(r, spans)| r.transition() == label && spans.contains(&c.span))
                .map(|(r, _)| *r)
        });
        if let Some(r) = role {
            paint(&mut tags, c.span, Label::Role(r));
        }
    }
    paint(&mut tags, trigger, Label::Trigger(event));
    tags
}

/// Per-token whitelist for a round-two decode: the concerned trigger keeps
/// its trigger tags, other triggers and O tokens stay O, and a transition
/// chunk may become O or any role of `event` with that transition label.
pub fn round_two_mask(r1: &[Tag], trigger: Span, event: EventType, vocab: &Vocabulary) -> Vec<Vec<u16>> {
    let idx = |t: Tag| {
        vocab
            .index_of(t)
            .expect("final vocabulary holds every role and trigger tag") as u16
    };
    r1.iter()
        .enumerate()
        .map(|(i, &t)| {
            if trigger.contains(i) {
                let l = Label::Trigger(event);
                return vec![idx(if i == trigger.start { Tag::B(l) } else { Tag::I(l) })];
            }
            let mut allowed = vec![idx(Tag::O)];
            if let Some(Label::Transition(label)) = t.label() {
                for r in event.roles().filter(|r| r.transition() == label) {
                    allowed.push(idx(t.with_label(Label::Role(r))));
                }
            }
            allowed
        })
        .collect()
}

/// Sentences the pipeline would label: cut to the maximum length and holding
/// at least one lexicon candidate.
pub fn labelable<'a>(docs: &'a [Document], lexicons: &'a Lexicons) -> impl Iterator<Item = Sentence> + 'a {
    docs.iter().flat_map(|d| d.sentences.iter()).filter_map(|s| {
        let s = s.truncated(MAX_SEQUENCE_LENGTH);
        (!scan_candidates(&s, &lexicons.triggers).is_empty()).then_some(s)
    })
}

pub fn round_one_examples(docs: &[Document], lexicons: &Lexicons) -> Vec<(ObservationInput, Vec<Tag>)> {
    labelable(docs, lexicons)
        .map(|s| {
            let cands = scan_candidates(&s, &lexicons.triggers);
            (round_one_input(&s, &cands), gold_round_one(&s))
        })
        .collect()
}

pub struct RoundTwoExample {
    pub input: ObservationInput,
    pub gold: Vec<Tag>,
    pub allowed: Vec<Vec<u16>>,
}

/// One example per gold trigger chunk, fed the gold round-one tags.
pub fn round_two_examples(docs: &[Document], lexicons: &Lexicons, vocab: &Vocabulary) -> Vec<RoundTwoExample> {
    let mut out = Vec::new();
    for s in labelable(docs, lexicons) {
        let r1 = adjust_patterns(&gold_round_one(&s), &s, &lexicons.polarity, &lexicons.aux);
        for c in chunks(&r1) {
            let Label::Trigger(event) = c.label else { continue };
            out.push(RoundTwoExample {
                input: round_two_input(&s, &r1, c.span, event),
                gold: gold_round_two(&s, &r1, c.span, event),
                allowed: round_two_mask(&r1, c.span, event, vocab),
            });
        }
    }
    out
}

/// Observation, gold tags and an optional per-position tag whitelist.
type Example = (ObservationInput, Vec<Tag>, Option<Vec<Vec<u16>>>);

fn fit(
    vocab: &Vocabulary,
    templates: Vec<crate::crf::Template>,
    examples: Vec<Example>,
    config: &TrainConfig,
) -> Result<TrainOutcome, CrfError> {
    let table = build_feature_table(&templates, examples.iter().map(|e| &e.0));
    let model = CrfModel::new(vocab.clone(), templates, table, config.l2_lambda, true);
    let data = examples
        .into_iter()
        .map(|(input, gold, allowed)| {
            let Observation { features, .. } = model.observe(&input);
            Ok((Observation { features, allowed }, tag_indices(vocab, &gold)?))
        })
        .collect::<Result<Vec<_>, CrfError>>()?;
    train(model, &data, config)
}

pub fn train_round_one(
    docs: &[Document],
    lexicons: &Lexicons,
    features: &FeatureConfig,
    config: &TrainConfig,
) -> Result<TrainOutcome, CrfError> {
    let schema = LabelSchema::new();
    let examples = round_one_examples(docs, lexicons)
        .into_iter()
        .map(|(i, g)| (i, g, None))
        .collect();
    fit(
        schema.first_round_vocab(),
        round_one_templates(features),
        examples,
        config,
    )
}

pub fn train_round_two(
    docs: &[Document],
    lexicons: &Lexicons,
    features: &FeatureConfig,
    config: &TrainConfig,
) -> Result<TrainOutcome, CrfError> {
    let schema = LabelSchema::new();
    let vocab = schema.final_vocab();
    let examples = round_two_examples(docs, lexicons, vocab)
        .into_iter()
        .map(|e| (e.input, e.gold, Some(e.allowed)))
        .collect();
    fit(vocab, round_two_templates(features), examples, config)
}
