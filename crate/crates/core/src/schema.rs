//! Event schema and tag algebra.
//!
//! Thirteen event types, each with a fixed row of argument roles. Every role
//! maps onto one of thirteen coarse transition labels that the first labeling
//! round predicts; the second round refines them back to event-specific roles.
//!
//! Tags are written `O`, `B_<Trigger>`, `I_<Trigger>`, `B_<Transition>` and
//! `B_<Abbrev>.<Role>` (e.g. `B_Be_Born`, `B_Is-Common`, `B_DL.Court`).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::SchemaError;

/// Sentences are cut to this many tokens before labeling.
pub const MAX_SEQUENCE_LENGTH: usize = 55;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventType {
    Know,
    BeInLove,
    Marry,
    Remarry,
    BeBorn,
    FamilyConflict,
    DomesticViolence,
    BadHabit,
    Derailed,
    Separation,
    DivorceLawsuit,
    Wealth,
    Debt,
}

impl EventType {
    pub const ALL: [EventType; 13] = [
        EventType::Know,
        EventType::BeInLove,
        EventType::Marry,
        EventType::Remarry,
        EventType::BeBorn,
        EventType::FamilyConflict,
        EventType::DomesticViolence,
        EventType::BadHabit,
        EventType::Derailed,
        EventType::Separation,
        EventType::DivorceLawsuit,
        EventType::Wealth,
        EventType::Debt,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn abbrev(self) -> &'static str {
        match self {
            EventType::Know => "K",
            EventType::BeInLove => "BIL",
            EventType::Marry => "M",
            EventType::Remarry => "R",
            EventType::BeBorn => "BB",
            EventType::FamilyConflict => "FC",
            EventType::DomesticViolence => "DV",
            EventType::BadHabit => "BH",
            EventType::Derailed => "DE",
            EventType::Separation => "S",
            EventType::DivorceLawsuit => "DL",
            EventType::Wealth => "W",
            EventType::Debt => "D",
        }
    }

    /// Name used inside trigger tags, e.g. `Be_Born`.
    pub fn tag_name(self) -> &'static str {
        match self {
            EventType::Know => "Know",
            EventType::BeInLove => "Be_In_Love",
            EventType::Marry => "Marry",
            EventType::Remarry => "Remarry",
            EventType::BeBorn => "Be_Born",
            EventType::FamilyConflict => "Family_Conflict",
            EventType::DomesticViolence => "Domestic_Violence",
            EventType::BadHabit => "Bad_Habit",
            EventType::Derailed => "Derailed",
            EventType::Separation => "Separation",
            EventType::DivorceLawsuit => "Divorce_Lawsuit",
            EventType::Wealth => "Wealth",
            EventType::Debt => "Debt",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            EventType::Know => "Know",
            EventType::BeInLove => "Be-In-Love",
            EventType::Marry => "Marry",
            EventType::Remarry => "Remarry",
            EventType::BeBorn => "Be-Born",
            EventType::FamilyConflict => "Family-Conflict",
            EventType::DomesticViolence => "Domestic-Violence",
            EventType::BadHabit => "Bad-Habit",
            EventType::Derailed => "Derailed",
            EventType::Separation => "Separation",
            EventType::DivorceLawsuit => "Divorce-Lawsuit",
            EventType::Wealth => "Wealth",
            EventType::Debt => "Debt",
        }
    }

    pub fn from_abbrev(s: &str) -> Option<EventType> {
        EventType::ALL.iter().copied().find(|e| e.abbrev() == s)
    }

    pub fn from_tag_name(s: &str) -> Option<EventType> {
        EventType::ALL.iter().copied().find(|e| e.tag_name() == s)
    }

    /// Accepts the tag name, the display name or the abbreviation.
    pub fn parse_any(s: &str) -> Option<EventType> {
        EventType::ALL
            .iter()
            .copied()
            .find(|e| e.tag_name() == s || e.display_name() == s || e.abbrev() == s)
    }

    /// Unique events happen at most once per marriage and are aligned
    /// without looking at their attributes.
    pub fn is_unique(self) -> bool {
        matches!(self, EventType::Know | EventType::BeInLove)
    }

    pub fn roles(self) -> impl Iterator<Item = Role> {
        ROLE_TABLE
            .iter()
            .enumerate()
            .filter(move |(_, def)| def.event == self)
            .map(|(i, _)| Role(i as u8))
    }

    pub fn role(self, name: &str) -> Option<Role> {
        self.roles().find(|r| r.name() == name)
    }

    pub fn key_attributes(self) -> Vec<KeyAttribute> {
        let mut keys = Vec::new();
        if matches!(
            self,
            EventType::FamilyConflict | EventType::BadHabit | EventType::Wealth
        ) {
            keys.push(KeyAttribute::Trigger);
        }
        keys.extend(self.roles().filter(|r| r.is_key()).map(KeyAttribute::Role));
        keys
    }
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag_name())
    }
}

impl Serialize for EventType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag_name())
    }
}

impl<'de> Deserialize<'de> for EventType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        EventType::parse_any(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown event type `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransitionLabel {
    Time,
    Person,
    Name,
    Gender,
    Age,
    Duration,
    IsPersonal,
    IsCommon,
    Money,
    Court,
    Document,
    Result,
    Polarity,
}

impl TransitionLabel {
    pub const ALL: [TransitionLabel; 13] = [
        TransitionLabel::Time,
        TransitionLabel::Person,
        TransitionLabel::Name,
        TransitionLabel::Gender,
        TransitionLabel::Age,
        TransitionLabel::Duration,
        TransitionLabel::IsPersonal,
        TransitionLabel::IsCommon,
        TransitionLabel::Money,
        TransitionLabel::Court,
        TransitionLabel::Document,
        TransitionLabel::Result,
        TransitionLabel::Polarity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransitionLabel::Time => "Time",
            TransitionLabel::Person => "Person",
            TransitionLabel::Name => "Name",
            TransitionLabel::Gender => "Gender",
            TransitionLabel::Age => "Age",
            TransitionLabel::Duration => "Duration",
            TransitionLabel::IsPersonal => "Is-Personal",
            TransitionLabel::IsCommon => "Is-Common",
            TransitionLabel::Money => "Money",
            TransitionLabel::Court => "Court",
            TransitionLabel::Document => "Document",
            TransitionLabel::Result => "Result",
            TransitionLabel::Polarity => "Polarity",
        }
    }

    pub fn from_name(s: &str) -> Option<TransitionLabel> {
        TransitionLabel::ALL.iter().copied().find(|t| t.name() == s)
    }
}

impl fmt::Display for TransitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct RoleDef {
    event: EventType,
    name: &'static str,
    transition: TransitionLabel,
    key: bool,
}

const fn def(event: EventType, name: &'static str, transition: TransitionLabel, key: bool) -> RoleDef {
    RoleDef {
        event,
        name,
        transition,
        key,
    }
}

use EventType as E;
use TransitionLabel as T;

static ROLE_TABLE: [RoleDef; 46] = [
    def(E::Know, "Time", T::Time, true),
    def(E::Know, "Participant", T::Person, true),
    def(E::Know, "Polarity", T::Polarity, false),
    def(E::BeInLove, "Time", T::Time, true),
    def(E::BeInLove, "Participant", T::Person, true),
    def(E::BeInLove, "Polarity", T::Polarity, false),
    def(E::Marry, "Time", T::Time, true),
    def(E::Marry, "Polarity", T::Polarity, false),
    def(E::Remarry, "Participant", T::Person, true),
    def(E::Remarry, "Polarity", T::Polarity, false),
    def(E::BeBorn, "Name", T::Name, true),
    def(E::BeBorn, "Time", T::Time, false),
    def(E::BeBorn, "Gender", T::Gender, false),
    def(E::BeBorn, "Age", T::Age, false),
    def(E::BeBorn, "Polarity", T::Polarity, false),
    def(E::FamilyConflict, "Polarity", T::Polarity, false),
    def(E::DomesticViolence, "Time", T::Time, true),
    def(E::DomesticViolence, "Perpetrators", T::Person, true),
    def(E::DomesticViolence, "Victim", T::Person, true),
    def(E::DomesticViolence, "Polarity", T::Polarity, false),
    def(E::BadHabit, "Participant", T::Person, true),
    def(E::BadHabit, "Polarity", T::Polarity, false),
    def(E::Derailed, "Time", T::Time, true),
    def(E::Derailed, "Derailed-Person", T::Person, true),
    def(E::Derailed, "Derailed-Target", T::Person, true),
    def(E::Derailed, "Polarity", T::Polarity, false),
    def(E::Separation, "Begin-Time", T::Time, true),
    def(E::Separation, "End-Time", T::Time, true),
    def(E::Separation, "Duration", T::Duration, false),
    def(E::Separation, "Polarity", T::Polarity, false),
    def(E::DivorceLawsuit, "Sue-Time", T::Time, true),
    def(E::DivorceLawsuit, "Initiator", T::Person, true),
    def(E::DivorceLawsuit, "Court", T::Court, false),
    def(E::DivorceLawsuit, "Sentence-Time", T::Time, false),
    def(E::DivorceLawsuit, "Court-Verdict", T::Document, false),
    def(E::DivorceLawsuit, "Result", T::Result, false),
    def(E::DivorceLawsuit, "Polarity", T::Polarity, false),
    def(E::Wealth, "Value", T::Money, false),
    def(E::Wealth, "Is-Common", T::IsCommon, false),
    def(E::Wealth, "Is-Personal", T::IsPersonal, false),
    def(E::Wealth, "Whose", T::Person, false),
    def(E::Wealth, "Polarity", T::Polarity, false),
    def(E::Debt, "Debtor", T::Person, true),
    def(E::Debt, "Creditor", T::Person, true),
    def(E::Debt, "Value", T::Money, false),
    def(E::Debt, "Polarity", T::Polarity, false),
];

/// An event-specific argument role, e.g. `DL.Court`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Role(u8);

impl Role {
    pub const COUNT: usize = 46;

    pub fn all() -> impl Iterator<Item = Role> {
        (0..Self::COUNT as u8).map(Role)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    fn def(self) -> &'static RoleDef {
        &ROLE_TABLE[self.0 as usize]
    }

    pub fn event(self) -> EventType {
        self.def().event
    }

    pub fn name(self) -> &'static str {
        self.def().name
    }

    pub fn transition(self) -> TransitionLabel {
        self.def().transition
    }

    pub fn is_key(self) -> bool {
        self.def().key
    }

    /// `Abbrev.Role`, as used in final tags.
    pub fn qualified(self) -> String {
        format!("{}.{}", self.event().abbrev(), self.name())
    }

    pub fn parse_qualified(s: &str) -> Option<Role> {
        let (ev, name) = s.split_once('.')?;
        EventType::from_abbrev(ev)?.role(name)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.event().abbrev(), self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeyAttribute {
    Trigger,
    Role(Role),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Trigger(EventType),
    Transition(TransitionLabel),
    Role(Role),
}

impl Label {
    pub fn is_trigger(self) -> bool {
        matches!(self, Label::Trigger(_))
    }

    /// The first-round view of this label.
    pub fn to_transition(self) -> Label {
        match self {
            Label::Role(r) => Label::Transition(r.transition()),
            other => other,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Trigger(e) => f.write_str(e.tag_name()),
            Label::Transition(t) => f.write_str(t.name()),
            Label::Role(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for Label {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains('.') {
            return Role::parse_qualified(s)
                .map(Label::Role)
                .ok_or_else(|| SchemaError::UnknownLabel(s.to_string()));
        }
        if let Some(e) = EventType::from_tag_name(s) {
            return Ok(Label::Trigger(e));
        }
        TransitionLabel::from_name(s)
            .map(Label::Transition)
            .ok_or_else(|| SchemaError::UnknownLabel(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    O,
    B(Label),
    I(Label),
}

impl Tag {
    pub fn label(self) -> Option<Label> {
        match self {
            Tag::O => None,
            Tag::B(l) | Tag::I(l) => Some(l),
        }
    }

    pub fn is_begin(self) -> bool {
        matches!(self, Tag::B(_))
    }

    pub fn is_inside(self) -> bool {
        matches!(self, Tag::I(_))
    }

    pub fn with_label(self, label: Label) -> Tag {
        match self {
            Tag::O => Tag::O,
            Tag::B(_) => Tag::B(label),
            Tag::I(_) => Tag::I(label),
        }
    }

    /// Whether `self` may directly follow `prev` (`None` = sentence start).
    pub fn may_follow(self, prev: Option<Tag>) -> bool {
        match self {
            Tag::I(l) => matches!(prev, Some(Tag::B(p)) | Some(Tag::I(p)) if p == l),
            _ => true,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::O => f.write_str("O"),
            Tag::B(l) => write!(f, "B_{l}"),
            Tag::I(l) => write!(f, "I_{l}"),
        }
    }
}

impl FromStr for Tag {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "O" {
            return Ok(Tag::O);
        }
        if let Some(rest) = s.strip_prefix("B_") {
            return rest
                .parse()
                .map(Tag::B)
                .map_err(|_| SchemaError::UnknownTag(s.to_string()));
        }
        if let Some(rest) = s.strip_prefix("I_") {
            return rest
                .parse()
                .map(Tag::I)
                .map_err(|_| SchemaError::UnknownTag(s.to_string()));
        }
        Err(SchemaError::UnknownTag(s.to_string()))
    }
}

impl Serialize for Tag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Tag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An ordered tag inventory. Index 0 is always `O`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    tags: Vec<Tag>,
    index: HashMap<Tag, usize>,
}

impl Vocabulary {
    pub fn from_labels(labels: impl IntoIterator<Item = Label>) -> Self {
        let mut tags = vec![Tag::O];
        for l in labels {
            tags.push(Tag::B(l));
            tags.push(Tag::I(l));
        }
        Self::from_tags(tags).expect("generated vocabulary starts with O")
    }

    pub fn from_tags(tags: Vec<Tag>) -> Result<Self, SchemaError> {
        if tags.first() != Some(&Tag::O) {
            return Err(SchemaError::VocabularyWithoutO);
        }
        let mut index = HashMap::with_capacity(tags.len());
        for (i, t) in tags.iter().enumerate() {
            if index.insert(*t, i).is_some() {
                return Err(SchemaError::DuplicateTag(t.to_string()));
            }
        }
        Ok(Self { tags, index })
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn tag(&self, i: usize) -> Tag {
        self.tags[i]
    }

    pub fn index_of(&self, tag: Tag) -> Option<usize> {
        self.index.get(&tag).copied()
    }

    pub fn contains(&self, tag: Tag) -> bool {
        self.index.contains_key(&tag)
    }
}

/// The fixed divorce-case schema: event types, roles, transition labels and
/// the two tag vocabularies built from them.
#[derive(Debug, Clone)]
pub struct LabelSchema {
    first_round: Vocabulary,
    final_tags: Vocabulary,
}

impl Default for LabelSchema {
    fn default() -> Self {
        Self::new()
    }
}

impl LabelSchema {
    pub fn new() -> Self {
        let triggers = EventType::ALL.iter().map(|e| Label::Trigger(*e));
        let first_round = Vocabulary::from_labels(
            triggers
                .clone()
                .chain(TransitionLabel::ALL.iter().map(|t| Label::Transition(*t))),
        );
        let final_tags = Vocabulary::from_labels(triggers.chain(Role::all().map(Label::Role)));
        Self {
            first_round,
            final_tags,
        }
    }

    pub fn event_types(&self) -> &'static [EventType; 13] {
        &EventType::ALL
    }

    pub fn transition_labels(&self) -> &'static [TransitionLabel; 13] {
        &TransitionLabel::ALL
    }

    pub fn final_roles(&self) -> impl Iterator<Item = Role> {
        Role::all()
    }

    pub fn role_to_transition(&self, role: Role) -> TransitionLabel {
        role.transition()
    }

    pub fn key_attributes(&self, event: EventType) -> Vec<KeyAttribute> {
        event.key_attributes()
    }

    /// `O` plus B/I over 13 trigger types and 13 transition labels.
    pub fn first_round_vocab(&self) -> &Vocabulary {
        &self.first_round
    }

    /// `O` plus B/I over 13 trigger types and 46 event-specific roles.
    pub fn final_vocab(&self) -> &Vocabulary {
        &self.final_tags
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    UnknownTag(String),
    OrphanInside,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BioReport {
    pub violations: Vec<Violation>,
}

impl BioReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.violations.iter().map(|v| v.index).collect()
    }
}

/// Checks a tag-string sequence against a vocabulary and the BIO rules.
/// An unknown tag is a violation; the position after it is judged as if
/// preceded by `O`.
pub fn bio_validate<S: AsRef<str>>(tags: &[S], vocab: &Vocabulary) -> BioReport {
    let mut violations = Vec::new();
    let mut prev: Option<Tag> = None;
    for (i, raw) in tags.iter().enumerate() {
        let raw = raw.as_ref();
        match raw.parse::<Tag>() {
            Ok(tag) if vocab.contains(tag) => {
                if !tag.may_follow(prev) {
                    violations.push(Violation {
                        index: i,
                        kind: ViolationKind::OrphanInside,
                    });
                }
                prev = Some(tag);
            }
            _ => {
                violations.push(Violation {
                    index: i,
                    kind: ViolationKind::UnknownTag(raw.to_string()),
                });
                prev = Some(Tag::O);
            }
        }
    }
    BioReport { violations }
}

/// Positions where an `I_X` tag lacks a `B_X`/`I_X` predecessor.
pub fn bio_violations(tags: &[Tag]) -> Vec<usize> {
    let mut prev = None;
    let mut out = Vec::new();
    for (i, t) in tags.iter().enumerate() {
        if !t.may_follow(prev) {
            out.push(i);
        }
        prev = Some(*t);
    }
    out
}

/// Maps final tags to first-round tags. Triggers and `O` pass through; roles
/// are replaced by their transition label with the B/I prefix kept.
pub fn to_transition_tags(final_tags: &[Tag]) -> Vec<Tag> {
    final_tags
        .iter()
        .map(|t| match t.label() {
            Some(l) => t.with_label(l.to_transition()),
            None => Tag::O,
        })
        .collect()
}

/// String-level variant of [`to_transition_tags`].
pub fn to_transition_tag_strings<S: AsRef<str>>(final_tags: &[S]) -> Result<Vec<String>, SchemaError> {
    final_tags
        .iter()
        .map(|s| {
            let tag: Tag = s.as_ref().parse()?;
            if let Some(Label::Transition(_)) = tag.label() {
                return Err(SchemaError::UnmappedRole(s.as_ref().to_string()));
            }
            Ok(to_transition_tags(&[tag])[0].to_string())
        })
        .collect()
}

/// Half-open token span `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn contains(&self, i: usize) -> bool {
        self.start <= i && i < self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Chunk {
    pub span: Span,
    pub label: Label,
}

/// Groups a BIO sequence into labeled chunks. A stray `I_X` opens a new chunk.
pub fn chunks(tags: &[Tag]) -> Vec<Chunk> {
    let mut out: Vec<Chunk> = Vec::new();
    let mut open: Option<(usize, Label)> = None;
    for (i, t) in tags.iter().enumerate() {
        match *t {
            Tag::O => {
                if let Some((s, l)) = open.take() {
                    out.push(Chunk {
                        span: Span::new(s, i),
                        label: l,
                    });
                }
            }
            Tag::B(l) => {
                if let Some((s, pl)) = open.take() {
                    out.push(Chunk {
                        span: Span::new(s, i),
                        label: pl,
                    });
                }
                open = Some((i, l));
            }
            Tag::I(l) => match open {
                Some((_, pl)) if pl == l => {}
                _ => {
                    if let Some((s, pl)) = open.take() {
                        out.push(Chunk {
                            span: Span::new(s, i),
                            label: pl,
                        });
                    }
                    open = Some((i, l));
                }
            },
        }
    }
    if let Some((s, l)) = open {
        out.push(Chunk {
            span: Span::new(s, tags.len()),
            label: l,
        });
    }
    out
}

/// Writes `label` over `span` as a B/I run.
pub fn paint(tags: &mut [Tag], span: Span, label: Label) {
    for (i, t) in tags[span.start..span.end].iter_mut().enumerate() {
        *t = if i == 0 { Tag::B(label) } else { Tag::I(label) };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn inventory_sizes() {
        let schema = LabelSchema::new();
        assert_eq!(schema.first_round_vocab().len(), 53);
        assert_eq!(schema.final_vocab().len(), 1 + 2 * (13 + 46));
        assert_eq!(Role::all().count(), 46);
    }

    #[test]
    fn role_to_transition_is_surjective() {
        let image: HashSet<_> = Role::all().map(|r| r.transition()).collect();
        assert_eq!(image.len(), 13);
    }

    #[test]
    fn every_symbol_appears_once_per_event() {
        for e in EventType::ALL {
            let names: Vec<_> = e.roles().map(|r| r.name()).collect();
            let uniq: HashSet<_> = names.iter().collect();
            assert_eq!(names.len(), uniq.len(), "{e}");
            assert!(names.contains(&"Polarity"), "{e} lacks Polarity");
        }
    }

    #[test]
    fn key_attribute_column() {
        let names = |e: EventType| {
            e.key_attributes()
                .into_iter()
                .map(|k| match k {
                    KeyAttribute::Trigger => "Trigger".to_string(),
                    KeyAttribute::Role(r) => r.name().to_string(),
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(names(EventType::Marry), ["Time"]);
        assert_eq!(names(EventType::BeBorn), ["Name"]);
        assert_eq!(names(EventType::FamilyConflict), ["Trigger"]);
        assert_eq!(names(EventType::BadHabit), ["Trigger", "Participant"]);
        assert_eq!(names(EventType::DivorceLawsuit), ["Sue-Time", "Initiator"]);
        assert_eq!(names(EventType::Debt), ["Debtor", "Creditor"]);
        assert_eq!(names(EventType::Separation), ["Begin-Time", "End-Time"]);
    }

    #[test]
    fn tag_string_round_trip() {
        let schema = LabelSchema::new();
        for t in schema
            .final_vocab()
            .tags()
            .iter()
            .chain(schema.first_round_vocab().tags())
        {
            assert_eq!(t.to_string().parse::<Tag>().unwrap(), *t);
        }
        assert_eq!(
            "B_Be_Born".parse::<Tag>().unwrap(),
            Tag::B(Label::Trigger(EventType::BeBorn))
        );
        assert!("B_Nope".parse::<Tag>().is_err());
        assert!("X_Time".parse::<Tag>().is_err());
    }

    #[test]
    fn validate_canonical() {
        let schema = LabelSchema::new();
        let r = bio_validate(&strs(&["O", "B_Time", "I_Time", "O"]), schema.first_round_vocab());
        assert!(r.is_valid());
    }

    #[test]
    fn validate_orphan_inside() {
        let schema = LabelSchema::new();
        let r = bio_validate(&strs(&["O", "I_Time", "O"]), schema.first_round_vocab());
        assert_eq!(r.indices(), vec![1]);
    }

    #[test]
    fn validate_class_switch() {
        let schema = LabelSchema::new();
        let r = bio_validate(&strs(&["B_Know", "I_Marry"]), schema.first_round_vocab());
        assert_eq!(r.indices(), vec![1]);
    }

    #[test]
    fn validate_unknown_tag_is_violation() {
        let schema = LabelSchema::new();
        let r = bio_validate(&strs(&["O", "B_Whatever", "B_DL.Court"]), schema.first_round_vocab());
        assert_eq!(r.indices(), vec![1, 2]);
        assert!(matches!(r.violations[0].kind, ViolationKind::UnknownTag(_)));
    }

    #[test]
    fn transition_mapping_examples() {
        let t = to_transition_tag_strings(&["B_DL.Court", "B_W.Value", "O", "I_W.Value", "B_Marry"]).unwrap();
        assert_eq!(t, ["B_Court", "B_Money", "O", "I_Money", "B_Marry"]);
        let people = [
            "Participant",
            "Perpetrators",
            "Victim",
            "Derailed-Person",
            "Derailed-Target",
            "Initiator",
            "Debtor",
            "Creditor",
            "Whose",
        ];
        for r in Role::all() {
            let expected = match r.name() {
                n if n.ends_with("Time") => TransitionLabel::Time,
                n if people.contains(&n) => TransitionLabel::Person,
                "Value" => TransitionLabel::Money,
                "Court-Verdict" => TransitionLabel::Document,
                n => TransitionLabel::from_name(n).unwrap(),
            };
            assert_eq!(r.transition(), expected, "{r}");
        }
    }

    #[test]
    fn chunking() {
        let tags: Vec<Tag> = ["O", "B_Time", "I_Time", "B_Person", "O", "I_Money"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let c = chunks(&tags);
        assert_eq!(c.len(), 3);
        assert_eq!(c[0].span, Span::new(1, 3));
        assert_eq!(c[1].span, Span::new(3, 4));
        assert_eq!(c[2].span, Span::new(5, 6));
    }
}
