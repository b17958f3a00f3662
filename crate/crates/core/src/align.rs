//! Cross-party co-reference of event mentions.
//!
//! Know and Be-In-Love happen once per marriage, so every cross-party pair
//! of them is aligned. Other types align when every key attribute agrees;
//! an attribute missing on either side agrees with anything. Separation
//! aligns when the two separation periods overlap.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Party;
use crate::error::AlignError;
use crate::extract::{EventMention, MentionKey};
use crate::lexicon::AuxLexicons;
use crate::schema::{EventType, KeyAttribute, Role, TransitionLabel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignConfig {
    pub fc_threshold: f64,
    pub wealth_threshold: f64,
}

impl Default for AlignConfig {
    fn default() -> Self {
        Self {
            fc_threshold: 0.5,
            wealth_threshold: 0.75,
        }
    }
}

/// Character-level edit distance.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for i in 1..=a.len() {
        let mut cur = vec![i; b.len() + 1];
        for j in 1..=b.len() {
            let sub = prev[j - 1] + usize::from(a[i - 1] != b[j - 1]);
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

/// `1 - levenshtein / max length`; two empty strings are identical.
pub fn normalized_similarity(a: &str, b: &str) -> f64 {
    let max = a.chars().count().max(b.chars().count());
    if max == 0 {
        return 1.0;
    }
    1.0 - levenshtein(a, b) as f64 / max as f64
}

const MONTHS: [&str; 12] = [
    "january",
    "february",
    "march",
    "april",
    "may",
    "june",
    "july",
    "august",
    "september",
    "october",
    "november",
    "december",
];

fn month_of(word: &str) -> Option<u32> {
    let w = word.trim_end_matches('.');
    MONTHS
        .iter()
        .position(|m| *m == w || (w.len() >= 3 && m.starts_with(w)))
        .map(|i| i as u32 + 1)
}

/// A date with optional month and day; a missing component matches any
/// value on the other side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalizedTime {
    pub year: Option<i32>,
    pub month: Option<u32>,
    pub day: Option<u32>,
}

impl NormalizedTime {
    /// Accepts `YYYY`, `YYYY-MM`, `YYYY-MM-DD` (also with `/` or `.`),
    /// `<month> YYYY` and `<month> <day> [,] YYYY`.
    pub fn parse(text: &str) -> Option<NormalizedTime> {
        let lower = text.trim().to_lowercase();
        let words: Vec<&str> = lower.split_whitespace().filter(|w| *w != ",").collect();
        let year = |s: &str| -> Option<i32> {
            (s.len() == 4 && s.bytes().all(|b| b.is_ascii_digit()))
                .then(|| s.parse().ok())
                .flatten()
        };
        let t = match words.as_slice() {
            [one] => {
                let parts: Vec<&str> = one.split(['-', '/', '.']).collect();
                let num = |s: &str| s.parse::<u32>().ok().filter(|_| !s.is_empty() && s.len() <= 2);
                match parts.as_slice() {
                    [y] => NormalizedTime {
                        year: Some(year(y)?),
                        month: None,
                        day: None,
                    },
                    [y, m] => NormalizedTime {
                        year: Some(year(y)?),
                        month: Some(num(m)?),
                        day: None,
                    },
                    [y, m, d] => NormalizedTime {
                        year: Some(year(y)?),
                        month: Some(num(m)?),
                        day: Some(num(d)?),
                    },
                    _ => return None,
                }
            }
            [m, y] => NormalizedTime {
                year: Some(year(y)?),
                month: Some(month_of(m)?),
                day: None,
            },
            [m, d, y] => NormalizedTime {
                year: Some(year(y)?),
                month: Some(month_of(m)?),
                day: Some(d.trim_end_matches(',').parse().ok()?),
            },
            _ => return None,
        };
        let valid = t.month.is_none_or(|m| (1..=12).contains(&m)) && t.day.is_none_or(|d| (1..=31).contains(&d));
        valid.then_some(t)
    }

    pub fn matches(&self, other: &NormalizedTime) -> bool {
        fn eq<T: PartialEq>(a: Option<T>, b: Option<T>) -> bool {
            match (a, b) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            }
        }
        eq(self.year, other.year) && eq(self.month, other.month) && eq(self.day, other.day)
    }

    /// Earliest (year, month, day) the value can denote.
    fn lower(&self) -> (i32, u32, u32) {
        (
            self.year.unwrap_or(i32::MIN),
            self.month.unwrap_or(1),
            self.day.unwrap_or(1),
        )
    }

    /// Latest (year, month, day) the value can denote.
    fn upper(&self) -> (i32, u32, u32) {
        (
            self.year.unwrap_or(i32::MAX),
            self.month.unwrap_or(12),
            self.day.unwrap_or(31),
        )
    }
}

fn times_equal(a: &str, b: &str) -> bool {
    match (NormalizedTime::parse(a), NormalizedTime::parse(b)) {
        (Some(x), Some(y)) => x.matches(&y),
        _ => normalize_text(a) == normalize_text(b),
    }
}

fn normalize_text(s: &str) -> String {
    s.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NormalizedParticipant {
    Plaintiff,
    Defendant,
    Other(String),
}

impl NormalizedParticipant {
    fn party(p: Party) -> Self {
        match p {
            Party::Plaintiff => NormalizedParticipant::Plaintiff,
            Party::Defendant => NormalizedParticipant::Defendant,
        }
    }
}

const FIRST_PERSON: &[&str] = &["i", "me", "my", "mine", "myself"];
const THIRD_PERSON: &[&str] = &["he", "she", "him", "her", "his", "hers", "himself", "herself"];
const FIRST_PLURAL: &[&str] = &["we", "us", "our", "ours", "ourselves"];
const SPOUSE: &[&str] = &["husband", "wife", "spouse", "ex-husband", "ex-wife"];

/// Resolves one participant expression from `speaker`'s statement to a set
/// of canonical participants. Pronouns always resolve to the parties;
/// `spouse_terms` additionally maps "my husband" style phrases to the
/// opposite party.
pub fn normalize_participant(text: &str, speaker: Party, spouse_terms: bool) -> BTreeSet<NormalizedParticipant> {
    let norm = normalize_text(text);
    let words: Vec<&str> = norm
        .split_whitespace()
        .filter(|w| !matches!(*w, "the" | "a" | "an"))
        .collect();
    let me = NormalizedParticipant::party(speaker);
    let them = NormalizedParticipant::party(speaker.opposite());
    let mut out = BTreeSet::new();
    match words.as_slice() {
        [w] if FIRST_PERSON.contains(w) => {
            out.insert(me);
        }
        [w] if THIRD_PERSON.contains(w) => {
            out.insert(them);
        }
        [w] if FIRST_PLURAL.contains(w) => {
            out.insert(me);
            out.insert(them);
        }
        [w] if *w == "plaintiff" => {
            out.insert(NormalizedParticipant::Plaintiff);
        }
        [w] if *w == "defendant" => {
            out.insert(NormalizedParticipant::Defendant);
        }
        [p, w] if spouse_terms && (FIRST_PERSON.contains(p) || FIRST_PLURAL.contains(p)) && SPOUSE.contains(w) => {
            out.insert(them);
        }
        [w] if spouse_terms && SPOUSE.contains(w) => {
            out.insert(them);
        }
        _ => {
            out.insert(NormalizedParticipant::Other(words.join(" ")));
        }
    }
    out
}

fn participants(values: &[&str], speaker: Party, spouse_terms: bool) -> BTreeSet<NormalizedParticipant> {
    values
        .iter()
        .flat_map(|v| normalize_participant(v, speaker, spouse_terms))
        .collect()
}

/// How one attribute is compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttributeKind {
    Time,
    FcTrigger,
    WealthTrigger,
    HabitTrigger,
    /// Participants that are always one of the two parties.
    PartyParticipant,
    /// Participants that may be third persons.
    OpenParticipant,
    Money,
    Text,
}

impl AttributeKind {
    pub fn name(self) -> &'static str {
        match self {
            AttributeKind::Time => "time",
            AttributeKind::FcTrigger => "fc-trigger",
            AttributeKind::WealthTrigger => "wealth-trigger",
            AttributeKind::HabitTrigger => "habit-trigger",
            AttributeKind::PartyParticipant => "party-participant",
            AttributeKind::OpenParticipant => "open-participant",
            AttributeKind::Money => "money",
            AttributeKind::Text => "text",
        }
    }

    pub fn of_role(role: Role) -> AttributeKind {
        match role.transition() {
            TransitionLabel::Time => AttributeKind::Time,
            TransitionLabel::Money => AttributeKind::Money,
            TransitionLabel::Person => match role.name() {
                "Participant" | "Derailed-Person" | "Initiator" | "Whose" => AttributeKind::PartyParticipant,
                _ => AttributeKind::OpenParticipant,
            },
            _ => AttributeKind::Text,
        }
    }

    pub fn of_trigger(event: EventType) -> AttributeKind {
        match event {
            EventType::FamilyConflict => AttributeKind::FcTrigger,
            EventType::Wealth => AttributeKind::WealthTrigger,
            EventType::BadHabit => AttributeKind::HabitTrigger,
            _ => AttributeKind::Text,
        }
    }
}

impl fmt::Display for AttributeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttributeKind {
    type Err = AlignError;

    fn from_str(s: &str) -> Result<Self, AlignError> {
        use AttributeKind::*;
        [
            Time,
            FcTrigger,
            WealthTrigger,
            HabitTrigger,
            PartyParticipant,
            OpenParticipant,
            Money,
            Text,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| AlignError::UnknownKind(s.to_string()))
    }
}

/// One side's value of an attribute: the texts of its spans (empty when the
/// attribute is absent) and the party that stated it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Side<'a> {
    pub values: Vec<&'a str>,
    pub party: Party,
}

impl<'a> Side<'a> {
    pub fn new(values: Vec<&'a str>, party: Party) -> Self {
        Self { values, party }
    }

    pub fn absent(party: Party) -> Self {
        Self {
            values: Vec::new(),
            party,
        }
    }

    fn joined(&self) -> String {
        self.values.join(" ")
    }
}

/// Numeric part of an amount such as "5000 yuan"; `None` when there is none.
pub fn money_amount(text: &str) -> Option<f64> {
    text.split_whitespace()
        .find_map(|w| w.replace(',', "").parse::<f64>().ok())
}

/// Attribute equality under every sub-rule. An absent value on either side
/// always matches.
pub fn attribute_equal(kind: AttributeKind, a: &Side, b: &Side, aux: &AuxLexicons, cfg: &AlignConfig) -> bool {
    if a.values.is_empty() || b.values.is_empty() {
        return true;
    }
    let (ta, tb) = (a.joined(), b.joined());
    match kind {
        AttributeKind::Time => times_equal(&ta, &tb),
        AttributeKind::FcTrigger => {
            normalized_similarity(&normalize_text(&ta), &normalize_text(&tb)) >= cfg.fc_threshold
        }
        AttributeKind::WealthTrigger => {
            normalized_similarity(&normalize_text(&ta), &normalize_text(&tb)) >= cfg.wealth_threshold
        }
        AttributeKind::HabitTrigger => match (aux.habit_category_of(&ta), aux.habit_category_of(&tb)) {
            (Some(x), Some(y)) => x == y,
            (None, None) => normalize_text(&ta) == normalize_text(&tb),
            _ => false,
        },
        AttributeKind::PartyParticipant => {
            participants(&a.values, a.party, true) == participants(&b.values, b.party, true)
        }
        AttributeKind::OpenParticipant => {
            participants(&a.values, a.party, false) == participants(&b.values, b.party, false)
        }
        AttributeKind::Money => match (money_amount(&ta), money_amount(&tb)) {
            (Some(x), Some(y)) => x == y,
            _ => normalize_text(&ta) == normalize_text(&tb),
        },
        AttributeKind::Text => normalize_text(&ta) == normalize_text(&tb),
    }
}

/// String-keyed entry point; unknown kinds are an error.
pub fn attribute_equal_named(
    kind: &str,
    a: &Side,
    b: &Side,
    aux: &AuxLexicons,
    cfg: &AlignConfig,
) -> Result<bool, AlignError> {
    Ok(attribute_equal(kind.parse()?, a, b, aux, cfg))
}

pub fn role_side(m: &EventMention, role: Role) -> Side<'_> {
    Side::new(m.values(role.name()), m.party)
}

pub fn trigger_side(m: &EventMention) -> Side<'_> {
    Side::new(vec![m.trigger.text.as_str()], m.party)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlignBasis {
    UniqueType,
    KeyAttributes,
    IntervalOverlap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedPair {
    /// Plaintiff-side mention.
    pub left: EventMention,
    /// Defendant-side mention.
    pub right: EventMention,
    pub basis: AlignBasis,
}

fn separation_interval(m: &EventMention) -> ((i32, u32, u32), (i32, u32, u32)) {
    let parse = |role: &str| m.value(role).and_then(|t| NormalizedTime::parse(&t));
    let lo = parse("Begin-Time").map_or((i32::MIN, 1, 1), |t| t.lower());
    let hi = parse("End-Time").map_or((i32::MAX, 12, 31), |t| t.upper());
    (lo, hi)
}

/// Whether two separations overlap in time. Unparseable or missing bounds
/// are open-ended.
pub fn separations_overlap(a: &EventMention, b: &EventMention) -> bool {
    let (a_lo, a_hi) = separation_interval(a);
    let (b_lo, b_hi) = separation_interval(b);
    a_lo <= b_hi && b_lo <= a_hi
}

/// Basis on which two mentions of opposite parties co-refer, if they do.
pub fn coreference(a: &EventMention, b: &EventMention, aux: &AuxLexicons, cfg: &AlignConfig) -> Option<AlignBasis> {
    if a.event_type != b.event_type || a.party == b.party {
        return None;
    }
    let event = a.event_type;
    if event.is_unique() {
        return Some(AlignBasis::UniqueType);
    }
    if event == EventType::Separation {
        return separations_overlap(a, b).then_some(AlignBasis::IntervalOverlap);
    }
    let all = event.key_attributes().into_iter().all(|k| match k {
        KeyAttribute::Trigger => attribute_equal(
            AttributeKind::of_trigger(event),
            &trigger_side(a),
            &trigger_side(b),
            aux,
            cfg,
        ),
        KeyAttribute::Role(r) => {
            attribute_equal(AttributeKind::of_role(r), &role_side(a, r), &role_side(b, r), aux, cfg)
        }
    });
    all.then_some(AlignBasis::KeyAttributes)
}

/// Every co-referent (plaintiff, defendant) pair, in plaintiff order then
/// defendant order. A mention may appear in several pairs.
pub fn align_events(
    plaintiff: &[EventMention],
    defendant: &[EventMention],
    aux: &AuxLexicons,
    cfg: &AlignConfig,
) -> Vec<AlignedPair> {
    let mut out = Vec::new();
    for p in plaintiff {
        for d in defendant {
            if let Some(basis) = coreference(p, d, aux, cfg) {
                out.push(AlignedPair {
                    left: p.clone(),
                    right: d.clone(),
                    basis,
                });
            }
        }
    }
    out
}

/// Splits one case's mentions by party and aligns them.
pub fn align_case(mentions: &[EventMention], aux: &AuxLexicons, cfg: &AlignConfig) -> Vec<AlignedPair> {
    let (p, d): (Vec<EventMention>, Vec<EventMention>) =
        mentions.iter().cloned().partition(|m| m.party == Party::Plaintiff);
    align_events(&p, &d, aux, cfg)
}

#[derive(Serialize)]
struct WirePair<'a> {
    case_id: &'a str,
    #[serde(rename = "type")]
    event_type: EventType,
    basis: AlignBasis,
    left: WireRef<'a>,
    right: WireRef<'a>,
}

#[derive(Serialize)]
struct WireRef<'a> {
    doc_id: &'a str,
    sentence: usize,
    trigger: [usize; 2],
    text: &'a str,
}

fn wire_ref(m: &EventMention) -> WireRef<'_> {
    WireRef {
        doc_id: &m.doc_id,
        sentence: m.sentence,
        trigger: [m.trigger.span.start, m.trigger.span.end],
        text: &m.trigger.text,
    }
}

/// JSON list of pairs with mention references and basis.
pub fn pairs_to_json(pairs: &[AlignedPair]) -> String {
    let wire: Vec<WirePair> = pairs
        .iter()
        .map(|p| WirePair {
            case_id: &p.left.case_id,
            event_type: p.left.event_type,
            basis: p.basis,
            left: wire_ref(&p.left),
            right: wire_ref(&p.right),
        })
        .collect();
    serde_json::to_string_pretty(&wire).expect("pairs always serialize")
}

impl AlignedPair {
    pub fn keys(&self) -> (MentionKey, MentionKey) {
        (self.left.key(), self.right.key())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::Argument;
    use crate::lexicon::Lexicons;
    use crate::schema::Span;
    use std::collections::BTreeMap;

    fn aux() -> AuxLexicons {
        Lexicons::default().aux
    }

    fn mention(party: Party, event: EventType, trigger: &str, roles: &[(&str, &str)]) -> EventMention {
        let mut map: BTreeMap<Role, Vec<Argument>> = BTreeMap::new();
        for (i, (r, v)) in roles.iter().enumerate() {
            map.entry(event.role(r).unwrap()).or_default().push(Argument {
                span: Span::new(10 + i, 11 + i),
                text: v.to_string(),
            });
        }
        EventMention {
            case_id: "c".into(),
            doc_id: party.as_str().into(),
            party,
            sentence: 0,
            event_type: event,
            trigger: Argument {
                span: Span::new(0, 1),
                text: trigger.into(),
            },
            roles: map,
        }
    }

    #[test]
    fn similarity_examples() {
        assert_eq!(normalized_similarity("quarrel", "quarrel"), 1.0);
        assert_eq!(normalized_similarity("abc", "xyz"), 0.0);
        assert!((normalized_similarity("kitten", "sitting") - 4.0 / 7.0).abs() < 1e-12);
        assert_eq!(normalized_similarity("", ""), 1.0);
    }

    #[test]
    fn time_parsing() {
        let t = |s| NormalizedTime::parse(s);
        assert_eq!(
            t("2007"),
            Some(NormalizedTime {
                year: Some(2007),
                month: None,
                day: None
            })
        );
        assert_eq!(
            t("2007-03-09"),
            Some(NormalizedTime {
                year: Some(2007),
                month: Some(3),
                day: Some(9)
            })
        );
        assert_eq!(t("March 2007"), t("2007-03"));
        assert_eq!(t("mar 9 , 2007"), t("2007-03-09"));
        assert_eq!(t("2007-13"), None);
        assert_eq!(t("last spring"), None);
    }

    #[test]
    fn time_components_are_wildcards() {
        assert!(times_equal("2007", "2007-03"));
        assert!(!times_equal("2007-03", "2007-05"));
        assert!(times_equal("last spring", "Last  spring"));
    }

    #[test]
    fn absent_matches_anything() {
        let a = Side::absent(Party::Plaintiff);
        let b = Side::new(vec!["2007-03"], Party::Defendant);
        assert!(attribute_equal(
            AttributeKind::Time,
            &a,
            &b,
            &aux(),
            &AlignConfig::default()
        ));
    }

    #[test]
    fn thresholds_apply_to_similarity() {
        let a = Side::new(vec!["kitten"], Party::Plaintiff);
        let b = Side::new(vec!["sitting"], Party::Defendant);
        let cfg = AlignConfig::default();
        assert!(attribute_equal(AttributeKind::FcTrigger, &a, &b, &aux(), &cfg));
        assert!(!attribute_equal(AttributeKind::WealthTrigger, &a, &b, &aux(), &cfg));
    }

    #[test]
    fn pronouns_resolve_to_parties() {
        let cfg = AlignConfig::default();
        let i = Side::new(vec!["I"], Party::Plaintiff);
        let plaintiff = Side::new(vec!["the plaintiff"], Party::Defendant);
        assert!(attribute_equal(
            AttributeKind::PartyParticipant,
            &i,
            &plaintiff,
            &aux(),
            &cfg
        ));
        let he = Side::new(vec!["he"], Party::Plaintiff);
        let me = Side::new(vec!["i"], Party::Defendant);
        assert!(attribute_equal(AttributeKind::OpenParticipant, &he, &me, &aux(), &cfg));
        let husband = Side::new(vec!["my husband"], Party::Plaintiff);
        assert!(attribute_equal(
            AttributeKind::PartyParticipant,
            &husband,
            &me,
            &aux(),
            &cfg
        ));
        assert!(!attribute_equal(
            AttributeKind::OpenParticipant,
            &husband,
            &me,
            &aux(),
            &cfg
        ));
        for w in FIRST_PERSON.iter().chain(THIRD_PERSON).chain(FIRST_PLURAL) {
            let set = normalize_participant(w, Party::Plaintiff, false);
            assert!(set.iter().all(|p| !matches!(p, NormalizedParticipant::Other(_))), "{w}");
        }
    }

    #[test]
    fn habit_trigger_compares_categories() {
        let cfg = AlignConfig::default();
        let a = Side::new(vec!["gambled"], Party::Plaintiff);
        let b = Side::new(vec!["gambled"], Party::Defendant);
        let c = Side::new(vec!["drank heavily"], Party::Defendant);
        assert!(attribute_equal(AttributeKind::HabitTrigger, &a, &b, &aux(), &cfg));
        assert!(!attribute_equal(AttributeKind::HabitTrigger, &a, &c, &aux(), &cfg));
    }

    #[test]
    fn unknown_kind_is_an_error() {
        let a = Side::absent(Party::Plaintiff);
        assert!(attribute_equal_named("colour", &a, &a, &aux(), &AlignConfig::default()).is_err());
        assert!(attribute_equal_named("time", &a, &a, &aux(), &AlignConfig::default()).unwrap());
    }

    #[test]
    fn unique_types_always_align() {
        let p = vec![mention(Party::Plaintiff, EventType::Know, "met", &[("Time", "2005")])];
        let d = vec![mention(Party::Defendant, EventType::Know, "met", &[("Time", "2006")])];
        let pairs = align_events(&p, &d, &aux(), &AlignConfig::default());
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].basis, AlignBasis::UniqueType);
    }

    #[test]
    fn marry_aligns_on_time() {
        let cfg = AlignConfig::default();
        let p = mention(Party::Plaintiff, EventType::Marry, "married", &[("Time", "2007")]);
        let d_same = mention(Party::Defendant, EventType::Marry, "married", &[("Time", "2007-05")]);
        let d_none = mention(Party::Defendant, EventType::Marry, "married", &[]);
        let d_other = mention(Party::Defendant, EventType::Marry, "married", &[("Time", "2009")]);
        assert!(coreference(&p, &d_same, &aux(), &cfg).is_some());
        assert!(coreference(&p, &d_none, &aux(), &cfg).is_some());
        assert!(coreference(&p, &d_other, &aux(), &cfg).is_none());
    }

    #[test]
    fn separation_overlap() {
        let cfg = AlignConfig::default();
        let s = EventType::Separation;
        let p = mention(
            Party::Plaintiff,
            s,
            "separated",
            &[("Begin-Time", "2015-01"), ("End-Time", "2017-03")],
        );
        let d = mention(
            Party::Defendant,
            s,
            "separated",
            &[("Begin-Time", "2015-06"), ("End-Time", "2017-03")],
        );
        let late = mention(Party::Defendant, s, "separated", &[("Begin-Time", "2018")]);
        assert_eq!(coreference(&p, &d, &aux(), &cfg), Some(AlignBasis::IntervalOverlap));
        assert!(coreference(&p, &late, &aux(), &cfg).is_none());
    }

    #[test]
    fn same_party_or_type_never_aligns() {
        let cfg = AlignConfig::default();
        let a = mention(Party::Plaintiff, EventType::Know, "met", &[]);
        let b = mention(Party::Plaintiff, EventType::Know, "met", &[]);
        let c = mention(Party::Defendant, EventType::BeInLove, "fell in love", &[]);
        assert!(coreference(&a, &b, &aux(), &cfg).is_none());
        assert!(coreference(&a, &c, &aux(), &cfg).is_none());
    }
}
