//! Two-round event extraction.
//!
//! Round one labels triggers and coarse transition labels over a whole
//! sentence. Pattern adjustment then adds polarity and money chunks the
//! model missed. Round two re-labels the sentence once per trigger chunk,
//! turning transition chunks into that event's roles, so a chunk shared by
//! two events ends up in both.

mod features;
mod gold;
mod patterns;
mod rules;
mod shared;

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use features::{
    offset_from, round_one_input, round_one_templates, round_two_input, round_two_templates, FeatureConfig,
};
pub use gold::{
    gold_round_one, gold_round_two, labelable, round_one_examples, round_two_examples, round_two_mask, train_round_one,
    train_round_two, RoundTwoExample,
};
pub use patterns::adjust_patterns;
pub use rules::assign_by_rules;
pub use shared::{apply_shared_trigger_rules, unique_roles, EventSkeleton};

use crate::corpus::{Document, Party, Sentence};
use crate::crf::CrfModel;
use crate::error::{CrfError, ExtractError};
use crate::lexicon::{scan_candidates, Lexicons};
use crate::schema::{chunks, EventType, Label, LabelSchema, Role, Span, Tag, MAX_SEQUENCE_LENGTH};

/// A token span together with its text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Argument {
    pub span: Span,
    pub text: String,
}

impl Argument {
    pub fn new(sentence: &Sentence, span: Span) -> Self {
        Self {
            span,
            text: sentence.span_text(span),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "WireMention", try_from = "WireMention")]
pub struct EventMention {
    pub case_id: String,
    pub doc_id: String,
    pub party: Party,
    pub sentence: usize,
    pub event_type: EventType,
    pub trigger: Argument,
    pub roles: BTreeMap<Role, Vec<Argument>>,
}

/// Identity of a mention independent of its arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MentionKey {
    pub doc_id: String,
    pub sentence: usize,
    pub trigger: Span,
    pub event_type: EventType,
}

impl EventMention {
    pub fn key(&self) -> MentionKey {
        MentionKey {
            doc_id: self.doc_id.clone(),
            sentence: self.sentence,
            trigger: self.trigger.span,
            event_type: self.event_type,
        }
    }

    /// Texts of the role's spans, in token order; empty when absent.
    pub fn values(&self, role_name: &str) -> Vec<&str> {
        self.event_type
            .role(role_name)
            .and_then(|r| self.roles.get(&r))
            .map(|args| args.iter().map(|a| a.text.as_str()).collect())
            .unwrap_or_default()
    }

    /// All role texts joined with a space, or `None` when the role is absent.
    pub fn value(&self, role_name: &str) -> Option<String> {
        let v = self.values(role_name);
        (!v.is_empty()).then(|| v.join(" "))
    }

    fn from_frame(doc: &Document, index: usize, sentence: &Sentence, frame: &EventSkeleton) -> Self {
        let roles = frame
            .roles
            .iter()
            .map(|(r, spans)| {
                let mut args: Vec<Argument> = spans.iter().map(|s| Argument::new(sentence, *s)).collect();
                args.sort();
                args.dedup();
                (*r, args)
            })
            .filter(|(_, a)| !a.is_empty())
            .collect();
        Self {
            case_id: doc.case_id.clone(),
            doc_id: doc.doc_id.clone(),
            party: doc.party,
            sentence: index,
            event_type: frame.event_type,
            trigger: Argument::new(sentence, frame.trigger),
            roles,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WireArgument {
    s: usize,
    e: usize,
    text: String,
}

#[derive(Serialize, Deserialize)]
struct WireMention {
    case_id: String,
    doc_id: String,
    party: Party,
    sentence: usize,
    #[serde(rename = "type")]
    event_type: EventType,
    trigger: WireArgument,
    roles: BTreeMap<String, Vec<WireArgument>>,
}

fn wire_arg(a: &Argument) -> WireArgument {
    WireArgument {
        s: a.span.start,
        e: a.span.end,
        text: a.text.clone(),
    }
}

fn from_wire_arg(w: WireArgument) -> Result<Argument, String> {
    if w.s >= w.e {
        return Err(format!("empty span [{}, {})", w.s, w.e));
    }
    Ok(Argument {
        span: Span::new(w.s, w.e),
        text: w.text,
    })
}

impl From<EventMention> for WireMention {
    fn from(m: EventMention) -> Self {
        WireMention {
            trigger: wire_arg(&m.trigger),
            roles: m
                .roles
                .iter()
                .map(|(r, args)| (r.name().to_string(), args.iter().map(wire_arg).collect()))
                .collect(),
            case_id: m.case_id,
            doc_id: m.doc_id,
            party: m.party,
            sentence: m.sentence,
            event_type: m.event_type,
        }
    }
}

impl TryFrom<WireMention> for EventMention {
    type Error = String;

    fn try_from(w: WireMention) -> Result<Self, String> {
        let mut roles = BTreeMap::new();
        for (name, args) in w.roles {
            let role = w
                .event_type
                .role(&name)
                .ok_or_else(|| format!("{} has no role `{name}`", w.event_type))?;
            roles.insert(
                role,
                args.into_iter().map(from_wire_arg).collect::<Result<Vec<_>, _>>()?,
            );
        }
        Ok(EventMention {
            case_id: w.case_id,
            doc_id: w.doc_id,
            party: w.party,
            sentence: w.sentence,
            event_type: w.event_type,
            trigger: from_wire_arg(w.trigger)?,
            roles,
        })
    }
}

pub fn mention_to_json(m: &EventMention) -> String {
    serde_json::to_string(m).expect("mentions always serialize")
}

pub fn mention_from_json(line: &str) -> Result<EventMention, String> {
    serde_json::from_str(line).map_err(|e| e.to_string())
}

pub fn write_mentions<W: Write>(mentions: &[EventMention], mut w: W) -> std::io::Result<()> {
    for m in mentions {
        writeln!(w, "{}", mention_to_json(m))?;
    }
    Ok(())
}

/// Reads one mention per line; errors carry the 1-based line number.
pub fn read_mentions<R: BufRead>(r: R) -> Result<Vec<EventMention>, (usize, String)> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| (i + 1, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(mention_from_json(&line).map_err(|e| (i + 1, e))?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundOneResult {
    pub tags: Vec<Tag>,
    pub candidates: Vec<(Span, EventType)>,
}

#[derive(Debug, Clone, Copy)]
pub enum RoundOne<'a> {
    Crf(&'a CrfModel),
    /// Reads the sentence's own annotations; used for oracle runs.
    Gold,
}

#[derive(Debug, Clone, Copy)]
pub enum RoundTwo<'a> {
    Crf(&'a CrfModel),
    Rules,
    Gold,
}

#[derive(Debug, Default)]
pub struct DocumentExtraction {
    pub mentions: Vec<EventMention>,
    /// Sentences that failed, with their error; the rest of the document
    /// is still extracted.
    pub failures: Vec<ExtractError>,
}

pub struct Extractor<'a> {
    lexicons: &'a Lexicons,
    round_one: RoundOne<'a>,
    round_two: RoundTwo<'a>,
    schema: LabelSchema,
}

impl<'a> Extractor<'a> {
    pub fn new(lexicons: &'a Lexicons, round_one: RoundOne<'a>, round_two: RoundTwo<'a>) -> Result<Self, ExtractError> {
        let schema = LabelSchema::new();
        if let RoundOne::Crf(m) = round_one {
            if m.vocab() != schema.first_round_vocab() {
                return Err(ExtractError::ModelMismatch("first-round"));
            }
        }
        if let RoundTwo::Crf(m) = round_two {
            if m.vocab() != schema.final_vocab() {
                return Err(ExtractError::ModelMismatch("final"));
            }
        }
        Ok(Self {
            lexicons,
            round_one,
            round_two,
            schema,
        })
    }

    pub fn first_round(&self, sentence: &Sentence) -> Result<RoundOneResult, CrfError> {
        let candidates = scan_candidates(sentence, &self.lexicons.triggers);
        let tags = match self.round_one {
            RoundOne::Crf(m) => m.decode_tags(&m.observe(&round_one_input(sentence, &candidates)))?,
            RoundOne::Gold => gold_round_one(sentence),
        };
        Ok(RoundOneResult { tags, candidates })
    }

    pub fn adjust(&self, r1: &RoundOneResult, sentence: &Sentence) -> RoundOneResult {
        RoundOneResult {
            tags: adjust_patterns(&r1.tags, sentence, &self.lexicons.polarity, &self.lexicons.aux),
            candidates: r1.candidates.clone(),
        }
    }

    /// Final tags for the decode concerned with one trigger chunk.
    pub fn decode_round_two(
        &self,
        model: &CrfModel,
        sentence: &Sentence,
        r1: &[Tag],
        trigger: Span,
        event: EventType,
    ) -> Result<Vec<Tag>, CrfError> {
        let mut obs = model.observe(&round_two_input(sentence, r1, trigger, event));
        obs.allowed = Some(round_two_mask(r1, trigger, event, self.schema.final_vocab()));
        model.decode_tags(&obs)
    }

    /// One frame per trigger chunk of `r1`, in chunk order.
    pub fn second_round(&self, sentence: &Sentence, r1: &[Tag]) -> Result<Vec<EventSkeleton>, CrfError> {
        if let RoundTwo::Rules = self.round_two {
            return Ok(assign_by_rules(r1));
        }
        let mut frames = Vec::new();
        for c in chunks(r1) {
            let Label::Trigger(event) = c.label else { continue };
            let tags = match self.round_two {
                RoundTwo::Crf(m) => self.decode_round_two(m, sentence, r1, c.span, event)?,
                _ => gold_round_two(sentence, r1, c.span, event),
            };
            frames.push(frame_from_tags(&tags, c.span, event));
        }
        Ok(frames)
    }

    /// Every event frame of one sentence after the shared-trigger rules.
    pub fn extract_sentence(&self, sentence: &Sentence) -> Result<Vec<EventSkeleton>, CrfError> {
        let sentence = sentence.truncated(MAX_SEQUENCE_LENGTH);
        if scan_candidates(&sentence, &self.lexicons.triggers).is_empty() {
            return Ok(Vec::new());
        }
        let r1 = self.adjust(&self.first_round(&sentence)?, &sentence);
        let frames = self.second_round(&sentence, &r1.tags)?;
        Ok(finish_frames(&r1.tags, frames))
    }

    pub fn extract_document(&self, doc: &Document) -> DocumentExtraction {
        let mut out = DocumentExtraction::default();
        for (i, s) in doc.sentences.iter().enumerate() {
            match self.extract_sentence(s) {
                Ok(frames) => out
                    .mentions
                    .extend(frames.iter().map(|f| EventMention::from_frame(doc, i, s, f))),
                Err(source) => out.failures.push(ExtractError::Decode { sentence: i, source }),
            }
        }
        out
    }

    /// Documents are processed in parallel; results keep document order.
    pub fn extract_corpus(&self, docs: &[Document]) -> Vec<DocumentExtraction> {
        docs.par_iter().map(|d| self.extract_document(d)).collect()
    }
}

/// Mentions straight from a document's event annotations, over sentences
/// cut to the maximum sequence length.
pub fn gold_mentions(doc: &Document) -> Vec<EventMention> {
    let mut out = Vec::new();
    for (i, s) in doc.sentences.iter().enumerate() {
        let s = s.truncated(MAX_SEQUENCE_LENGTH);
        for e in &s.events {
            let frame = EventSkeleton {
                event_type: e.event_type,
                trigger: e.trigger,
                roles: e.roles.clone(),
            };
            out.push(EventMention::from_frame(doc, i, &s, &frame));
        }
    }
    out
}

/// Role spans of a round-two decode for the trigger at `trigger`.
pub fn frame_from_tags(tags: &[Tag], trigger: Span, event: EventType) -> EventSkeleton {
    let mut roles: BTreeMap<Role, Vec<Span>> = BTreeMap::new();
    for c in chunks(tags) {
        if let Label::Role(r) = c.label {
            if r.event() == event {
                roles.entry(r).or_default().push(c.span);
            }
        }
    }
    EventSkeleton {
        event_type: event,
        trigger,
        roles,
    }
}

/// Splits shared triggers into instances and drops arguments that overlap
/// any trigger chunk.
fn finish_frames(r1: &[Tag], frames: Vec<EventSkeleton>) -> Vec<EventSkeleton> {
    let claimed: Vec<Span> = frames
        .iter()
        .filter(|f| f.event_type != EventType::DivorceLawsuit)
        .flat_map(|f| f.roles.values().flatten().copied())
        .collect();
    let skeletons = apply_shared_trigger_rules(r1, &claimed);
    let trigger_spans: Vec<Span> = chunks(r1)
        .into_iter()
        .filter(|c| c.label.is_trigger())
        .map(|c| c.span)
        .collect();
    let mut out = Vec::new();
    for frame in frames {
        let mine: Vec<&EventSkeleton> = skeletons
            .iter()
            .filter(|s| s.trigger == frame.trigger && s.event_type == frame.event_type)
            .collect();
        if mine.is_empty() {
            out.push(frame);
            continue;
        }
        let mut drop: Vec<Role> = unique_roles(frame.event_type);
        drop.extend(mine.iter().flat_map(|s| s.roles.keys().copied()));
        let shared: BTreeMap<Role, Vec<Span>> = frame.roles.into_iter().filter(|(r, _)| !drop.contains(r)).collect();
        for s in mine {
            let mut roles = shared.clone();
            roles.extend(s.roles.iter().map(|(r, v)| (*r, v.clone())));
            out.push(EventSkeleton {
                event_type: s.event_type,
                trigger: s.trigger,
                roles,
            });
        }
    }
    for f in &mut out {
        for spans in f.roles.values_mut() {
            spans.retain(|s| !trigger_spans.iter().any(|t| t.overlaps(s)));
        }
        f.roles.retain(|_, v| !v.is_empty());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{GoldEvent, Token};

    fn sentence(words: &[&str]) -> Sentence {
        Sentence::from_tokens(words.iter().map(|w| Token::new(*w, "UNK")).collect())
    }

    fn doc(sentences: Vec<Sentence>) -> Document {
        Document {
            doc_id: "d1".into(),
            case_id: "c1".into(),
            party: Party::Plaintiff,
            sentences,
        }
    }

    #[test]
    fn shared_be_born_trigger_becomes_two_mentions() {
        let mut s = sentence(&[
            "i", "gave", "birth", "to", "a", "son", "named", "ming", "and", "a", "daughter", "named", "hong",
        ]);
        let bb = EventType::BeBorn;
        let role = |n| bb.role(n).unwrap();
        s.events = vec![
            GoldEvent {
                event_type: bb,
                trigger: Span::new(1, 4),
                roles: BTreeMap::from([
                    (role("Gender"), vec![Span::new(5, 6)]),
                    (role("Name"), vec![Span::new(7, 8)]),
                ]),
            },
            GoldEvent {
                event_type: bb,
                trigger: Span::new(1, 4),
                roles: BTreeMap::from([
                    (role("Gender"), vec![Span::new(10, 11)]),
                    (role("Name"), vec![Span::new(12, 13)]),
                ]),
            },
        ];
        let lex = Lexicons::default();
        let ex = Extractor::new(&lex, RoundOne::Gold, RoundTwo::Gold).unwrap();
        let out = ex.extract_document(&doc(vec![s]));
        assert!(out.failures.is_empty());
        assert_eq!(out.mentions.len(), 2);
        assert_eq!(out.mentions[0].values("Name"), ["ming"]);
        assert_eq!(out.mentions[0].values("Gender"), ["son"]);
        assert_eq!(out.mentions[1].values("Name"), ["hong"]);
        assert_eq!(out.mentions[1].values("Gender"), ["daughter"]);
    }

    #[test]
    fn no_candidates_no_mentions() {
        let lex = Lexicons::default();
        let ex = Extractor::new(&lex, RoundOne::Gold, RoundTwo::Rules).unwrap();
        assert!(ex
            .extract_document(&doc(vec![sentence(&["nothing", "here"])]))
            .mentions
            .is_empty());
    }

    #[test]
    fn mismatched_model_is_rejected() {
        let lex = Lexicons::default();
        let schema = LabelSchema::new();
        let m = CrfModel::new(schema.final_vocab().clone(), Vec::new(), Default::default(), 0.0, true);
        assert!(matches!(
            Extractor::new(&lex, RoundOne::Crf(&m), RoundTwo::Rules),
            Err(ExtractError::ModelMismatch(_))
        ));
    }

    #[test]
    fn mention_json_round_trip() {
        let s = sentence(&["in", "2005", "we", "met"]);
        let k = EventType::Know;
        let frame = EventSkeleton {
            event_type: k,
            trigger: Span::new(3, 4),
            roles: BTreeMap::from([(k.role("Time").unwrap(), vec![Span::new(1, 2)])]),
        };
        let m = EventMention::from_frame(&doc(vec![s.clone()]), 0, &s, &frame);
        let line = mention_to_json(&m);
        assert!(line.contains(r#""trigger":{"s":3,"e":4,"text":"met"}"#), "{line}");
        assert!(
            line.contains(r#""roles":{"Time":[{"s":1,"e":2,"text":"2005"}]}"#),
            "{line}"
        );
        assert_eq!(mention_from_json(&line).unwrap(), m);
        assert!(mention_from_json(&line.replace("\"Time\"", "\"Court\"")).is_err());
    }
}
