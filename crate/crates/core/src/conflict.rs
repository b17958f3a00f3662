//! Contradiction vs entailment for aligned pairs, and the per-case dispute
//! report.
//!
//! Each event type compares a fixed set of non-key attributes plus the
//! polarity of the statement. A pair with no mismatch is an entailment.
//! A mention without a polarity chunk is affirmative; a polarity chunk with
//! no lexicon word is unknown and matches either side.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::align::{
    align_case, attribute_equal, coreference, normalize_participant, role_side, AlignBasis, AlignConfig, AlignedPair,
    AttributeKind,
};
use crate::corpus::Party;
use crate::error::ConflictError;
use crate::extract::EventMention;
use crate::lexicon::{Lexicons, MarriageOrder, Polarity};
use crate::schema::EventType;

pub const REPORT_MAGIC: &str = "JIA-REPORT v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Contradictory,
    Entailment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub attribute: String,
    pub left: Option<String>,
    pub right: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairVerdict {
    pub pair: AlignedPair,
    pub label: Verdict,
    /// Empty exactly when the label is `Entailment`.
    pub reasons: Vec<Mismatch>,
}

/// What a type compares besides polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compared {
    Role(&'static str),
    MarriageOrder,
    EmotionalTendency,
    Ownership,
}

pub fn compared_attributes(event: EventType) -> &'static [Compared] {
    use Compared::*;
    match event {
        EventType::Know | EventType::BeInLove => &[Role("Time")],
        EventType::Marry => &[],
        EventType::Remarry => &[MarriageOrder],
        EventType::BeBorn => &[Role("Time"), Role("Gender"), Role("Age")],
        EventType::FamilyConflict => &[EmotionalTendency],
        EventType::DomesticViolence | EventType::BadHabit | EventType::Derailed => &[],
        EventType::Separation => &[Role("Begin-Time"), Role("End-Time")],
        EventType::DivorceLawsuit => &[
            Role("Court"),
            Role("Sentence-Time"),
            Role("Court-Verdict"),
            Role("Result"),
        ],
        EventType::Wealth => &[Ownership, Role("Value")],
        EventType::Debt => &[Role("Value")],
    }
}

/// Polarity of a mention's statement: affirmative without a polarity chunk.
pub fn mention_polarity(m: &EventMention, lexicons: &Lexicons) -> Polarity {
    match m.value("Polarity") {
        None => Polarity::Pos,
        Some(text) => lexicons.polarity.polarity_of_phrase(&text.to_lowercase()),
    }
}

fn polarity_name(p: Polarity) -> &'static str {
    match p {
        Polarity::Pos => "POS",
        Polarity::Neg => "NEG",
        Polarity::Unknown => "UNKNOWN",
    }
}

fn order_name(o: MarriageOrder) -> &'static str {
    match o {
        MarriageOrder::FirstMarriage => "first-marriage",
        MarriageOrder::Remarriage => "remarriage",
        MarriageOrder::Unknown => "unknown",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ownership {
    Common,
    Personal,
    Unstated,
}

fn ownership(m: &EventMention) -> Ownership {
    match (m.value("Is-Common").is_some(), m.value("Is-Personal").is_some()) {
        (true, false) => Ownership::Common,
        (false, true) => Ownership::Personal,
        _ => Ownership::Unstated,
    }
}

fn ownership_mismatch(a: &EventMention, b: &EventMention) -> Option<Mismatch> {
    let describe = |m: &EventMention| -> Option<String> {
        match ownership(m) {
            Ownership::Common => Some("common".into()),
            Ownership::Personal => Some(match m.value("Whose") {
                Some(w) => format!("personal ({w})"),
                None => "personal".into(),
            }),
            Ownership::Unstated => None,
        }
    };
    let conflict = match (ownership(a), ownership(b)) {
        (Ownership::Common, Ownership::Personal) | (Ownership::Personal, Ownership::Common) => true,
        (Ownership::Personal, Ownership::Personal) => match (a.value("Whose"), b.value("Whose")) {
            (Some(wa), Some(wb)) => {
                normalize_participant(&wa, a.party, true) != normalize_participant(&wb, b.party, true)
            }
            _ => false,
        },
        _ => false,
    };
    conflict.then(|| Mismatch {
        attribute: "Ownership".into(),
        left: describe(a),
        right: describe(b),
    })
}

fn check_preconditions(pair: &AlignedPair, lexicons: &Lexicons, cfg: &AlignConfig) -> Result<(), ConflictError> {
    let (a, b) = (&pair.left, &pair.right);
    if a.event_type != b.event_type {
        return Err(ConflictError::TypeMismatch(
            a.event_type.to_string(),
            b.event_type.to_string(),
        ));
    }
    if a.party == b.party {
        return Err(ConflictError::SameParty);
    }
    if coreference(a, b, &lexicons.aux, cfg).is_none() {
        return Err(ConflictError::NotAligned(a.event_type.to_string()));
    }
    Ok(())
}

/// Mismatched attributes of two co-referent mentions, in comparison order.
pub fn mismatches(a: &EventMention, b: &EventMention, lexicons: &Lexicons, cfg: &AlignConfig) -> Vec<Mismatch> {
    let mut out = Vec::new();
    let event = a.event_type;
    for c in compared_attributes(event) {
        match *c {
            Compared::Role(name) => {
                let role = event.role(name).expect("compared roles exist");
                if !attribute_equal(
                    AttributeKind::of_role(role),
                    &role_side(a, role),
                    &role_side(b, role),
                    &lexicons.aux,
                    cfg,
                ) {
                    out.push(Mismatch {
                        attribute: name.to_string(),
                        left: a.value(name),
                        right: b.value(name),
                    });
                }
            }
            Compared::MarriageOrder => {
                let oa = lexicons.aux.marriage_order_of(&a.trigger.text.to_lowercase());
                let ob = lexicons.aux.marriage_order_of(&b.trigger.text.to_lowercase());
                if oa != MarriageOrder::Unknown && ob != MarriageOrder::Unknown && oa != ob {
                    out.push(Mismatch {
                        attribute: "Marriage-Order".into(),
                        left: Some(order_name(oa).into()),
                        right: Some(order_name(ob).into()),
                    });
                }
            }
            Compared::EmotionalTendency => {
                let tone = |m: &EventMention| lexicons.aux.is_positive_emotion(&m.trigger.text.to_lowercase());
                if tone(a) != tone(b) {
                    let name = |p: bool| Some(if p { "positive" } else { "negative" }.to_string());
                    out.push(Mismatch {
                        attribute: "Emotional-Tendency".into(),
                        left: name(tone(a)),
                        right: name(tone(b)),
                    });
                }
            }
            Compared::Ownership => out.extend(ownership_mismatch(a, b)),
        }
    }
    let (pa, pb) = (mention_polarity(a, lexicons), mention_polarity(b, lexicons));
    if matches!(
        (pa, pb),
        (Polarity::Pos, Polarity::Neg) | (Polarity::Neg, Polarity::Pos)
    ) {
        out.push(Mismatch {
            attribute: "Polarity".into(),
            left: Some(polarity_name(pa).into()),
            right: Some(polarity_name(pb).into()),
        });
    }
    out
}

pub fn classify_pair(pair: &AlignedPair, lexicons: &Lexicons, cfg: &AlignConfig) -> Result<PairVerdict, ConflictError> {
    check_preconditions(pair, lexicons, cfg)?;
    let reasons = mismatches(&pair.left, &pair.right, lexicons, cfg);
    Ok(PairVerdict {
        pair: pair.clone(),
        label: if reasons.is_empty() {
            Verdict::Entailment
        } else {
            Verdict::Contradictory
        },
        reasons,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeSection {
    pub event_type: EventType,
    pub plaintiff: Vec<EventMention>,
    pub defendant: Vec<EventMention>,
    pub verdicts: Vec<PairVerdict>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ReportSummary {
    pub plaintiff_mentions: usize,
    pub defendant_mentions: usize,
    pub aligned_pairs: usize,
    pub contradictory: usize,
    pub entailment: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisputeReport {
    pub case_id: String,
    /// Event types with at least one mention, in schema order.
    pub sections: Vec<TypeSection>,
    pub summary: ReportSummary,
}

/// Aligns one case's mentions and classifies every aligned pair.
pub fn detect_disputes(
    case_id: &str,
    mentions: &[EventMention],
    lexicons: &Lexicons,
    cfg: &AlignConfig,
) -> DisputeReport {
    let mut summary = ReportSummary::default();
    let mut sections = Vec::new();
    for event in EventType::ALL {
        let of_type: Vec<EventMention> = mentions.iter().filter(|m| m.event_type == event).cloned().collect();
        if of_type.is_empty() {
            continue;
        }
        let verdicts: Vec<PairVerdict> = align_case(&of_type, &lexicons.aux, cfg)
            .iter()
            .map(|p| classify_pair(p, lexicons, cfg).expect("aligned pairs satisfy the preconditions"))
            .collect();
        let (plaintiff, defendant): (Vec<_>, Vec<_>) = of_type.into_iter().partition(|m| m.party == Party::Plaintiff);
        summary.plaintiff_mentions += plaintiff.len();
        summary.defendant_mentions += defendant.len();
        summary.aligned_pairs += verdicts.len();
        summary.contradictory += verdicts.iter().filter(|v| v.label == Verdict::Contradictory).count();
        summary.entailment += verdicts.iter().filter(|v| v.label == Verdict::Entailment).count();
        sections.push(TypeSection {
            event_type: event,
            plaintiff,
            defendant,
            verdicts,
        });
    }
    DisputeReport {
        case_id: case_id.to_string(),
        sections,
        summary,
    }
}

/// Groups mentions by case id and reports every case, sorted by case id.
pub fn detect_all(mentions: &[EventMention], lexicons: &Lexicons, cfg: &AlignConfig) -> Vec<DisputeReport> {
    let mut by_case: BTreeMap<&str, Vec<EventMention>> = BTreeMap::new();
    for m in mentions {
        by_case.entry(&m.case_id).or_default().push(m.clone());
    }
    by_case
        .into_iter()
        .map(|(case, ms)| detect_disputes(case, &ms, lexicons, cfg))
        .collect()
}

#[derive(Serialize)]
struct WireVerdict<'a> {
    label: Verdict,
    basis: AlignBasis,
    left: &'a EventMention,
    right: &'a EventMention,
    reasons: &'a [Mismatch],
}

#[derive(Serialize)]
struct WireSection<'a> {
    #[serde(rename = "type")]
    event_type: EventType,
    plaintiff: &'a [EventMention],
    defendant: &'a [EventMention],
    pairs: Vec<WireVerdict<'a>>,
}

#[derive(Serialize)]
struct WireCase<'a> {
    case_id: &'a str,
    summary: ReportSummary,
    sections: Vec<WireSection<'a>>,
}

#[derive(Serialize)]
struct WireReport<'a> {
    format: &'static str,
    cases: Vec<WireCase<'a>>,
}

pub fn reports_to_json(reports: &[DisputeReport]) -> String {
    let wire = WireReport {
        format: REPORT_MAGIC,
        cases: reports
            .iter()
            .map(|r| WireCase {
                case_id: &r.case_id,
                summary: r.summary,
                sections: r
                    .sections
                    .iter()
                    .map(|s| WireSection {
                        event_type: s.event_type,
                        plaintiff: &s.plaintiff,
                        defendant: &s.defendant,
                        pairs: s
                            .verdicts
                            .iter()
                            .map(|v| WireVerdict {
                                label: v.label,
                                basis: v.pair.basis,
                                left: &v.pair.left,
                                right: &v.pair.right,
                                reasons: &v.reasons,
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&wire).expect("reports always serialize");
    s.push('\n');
    s
}

fn describe(m: &EventMention) -> String {
    format!("{} s{} \"{}\"", m.doc_id, m.sentence, m.trigger.text)
}

fn show(v: &Option<String>) -> &str {
    v.as_deref().unwrap_or("-")
}

/// Plain-text rendering; contradictory pairs are flagged `CONFLICT`.
pub fn reports_to_text(reports: &[DisputeReport]) -> String {
    let mut out = format!("{REPORT_MAGIC}\n");
    for r in reports {
        let s = r.summary;
        let _ = writeln!(
            out,
            "\ncase {}: {} plaintiff / {} defendant mentions, {} aligned, {} conflicts, {} entailments",
            r.case_id, s.plaintiff_mentions, s.defendant_mentions, s.aligned_pairs, s.contradictory, s.entailment
        );
        for sec in &r.sections {
            let _ = writeln!(out, "  [{}]", sec.event_type.display_name());
            if sec.verdicts.is_empty() {
                let _ = writeln!(out, "    no aligned pairs");
            }
            for v in &sec.verdicts {
                let flag = match v.label {
                    Verdict::Contradictory => "CONFLICT  ",
                    Verdict::Entailment => "entailment",
                };
                let _ = writeln!(
                    out,
                    "    {flag} {} <-> {}",
                    describe(&v.pair.left),
                    describe(&v.pair.right)
                );
                for m in &v.reasons {
                    let _ = writeln!(
                        out,
                        "               {}: {} vs {}",
                        m.attribute,
                        show(&m.left),
                        show(&m.right)
                    );
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::Argument;
    use crate::schema::{Role, Span};

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

    fn classify(a: EventMention, b: EventMention) -> PairVerdict {
        let lex = Lexicons::default();
        let cfg = AlignConfig::default();
        let basis = coreference(&a, &b, &lex.aux, &cfg).expect("aligned");
        classify_pair(
            &AlignedPair {
                left: a,
                right: b,
                basis,
            },
            &lex,
            &cfg,
        )
        .unwrap()
    }

    #[test]
    fn know_pair_with_equal_time_is_entailment() {
        let v = classify(
            mention(Party::Plaintiff, EventType::Know, "met", &[("Time", "2005")]),
            mention(Party::Defendant, EventType::Know, "met", &[("Time", "2005")]),
        );
        assert_eq!(v.label, Verdict::Entailment);
        assert!(v.reasons.is_empty());
    }

    #[test]
    fn separation_begin_time_conflict() {
        let s = EventType::Separation;
        let v = classify(
            mention(
                Party::Plaintiff,
                s,
                "separated",
                &[("Begin-Time", "2015-01"), ("End-Time", "2017-03")],
            ),
            mention(
                Party::Defendant,
                s,
                "separated",
                &[("Begin-Time", "2015-06"), ("End-Time", "2017-03")],
            ),
        );
        assert_eq!(v.label, Verdict::Contradictory);
        assert_eq!(v.reasons[0].attribute, "Begin-Time");
    }

    #[test]
    fn wealth_common_vs_personal() {
        let w = EventType::Wealth;
        let v = classify(
            mention(Party::Plaintiff, w, "house", &[("Is-Common", "common property")]),
            mention(
                Party::Defendant,
                w,
                "house",
                &[("Is-Personal", "personal property"), ("Whose", "my")],
            ),
        );
        assert_eq!(v.label, Verdict::Contradictory);
        assert_eq!(v.reasons[0].attribute, "Ownership");
    }

    #[test]
    fn wealth_personal_owner_must_agree() {
        let w = EventType::Wealth;
        let same = classify(
            mention(
                Party::Plaintiff,
                w,
                "car",
                &[("Is-Personal", "personal property"), ("Whose", "my")],
            ),
            mention(
                Party::Defendant,
                w,
                "car",
                &[("Is-Personal", "personal property"), ("Whose", "her")],
            ),
        );
        assert_eq!(same.label, Verdict::Entailment);
        let diff = classify(
            mention(
                Party::Plaintiff,
                w,
                "car",
                &[("Is-Personal", "personal property"), ("Whose", "my")],
            ),
            mention(
                Party::Defendant,
                w,
                "car",
                &[("Is-Personal", "personal property"), ("Whose", "my")],
            ),
        );
        assert_eq!(diff.label, Verdict::Contradictory);
    }

    #[test]
    fn denial_contradicts_affirmation() {
        let de = EventType::Derailed;
        let v = classify(
            mention(Party::Plaintiff, de, "lived together", &[("Derailed-Person", "he")]),
            mention(
                Party::Defendant,
                de,
                "improper relationship",
                &[("Derailed-Person", "i"), ("Polarity", "no")],
            ),
        );
        assert_eq!(v.label, Verdict::Contradictory);
        assert_eq!(v.reasons[0].attribute, "Polarity");
    }

    #[test]
    fn unknown_polarity_is_a_wildcard() {
        let m = EventType::Marry;
        let v = classify(
            mention(Party::Plaintiff, m, "married", &[("Polarity", "not")]),
            mention(Party::Defendant, m, "married", &[("Polarity", "perhaps")]),
        );
        assert_eq!(v.label, Verdict::Entailment);
    }

    #[test]
    fn remarriage_order_and_emotion() {
        let r = classify(
            mention(
                Party::Plaintiff,
                EventType::Remarry,
                "remarried",
                &[("Participant", "he")],
            ),
            mention(
                Party::Defendant,
                EventType::Remarry,
                "first marriage",
                &[("Participant", "my")],
            ),
        );
        assert_eq!(r.label, Verdict::Contradictory);
        let fc = classify(
            mention(Party::Plaintiff, EventType::FamilyConflict, "got along well", &[]),
            mention(Party::Defendant, EventType::FamilyConflict, "got along", &[]),
        );
        assert_eq!(fc.reasons[0].attribute, "Emotional-Tendency");
    }

    #[test]
    fn preconditions_are_enforced() {
        let lex = Lexicons::default();
        let cfg = AlignConfig::default();
        let a = mention(Party::Plaintiff, EventType::Marry, "married", &[("Time", "2005")]);
        let b = mention(Party::Defendant, EventType::Marry, "married", &[("Time", "2009")]);
        let pair = AlignedPair {
            left: a.clone(),
            right: b,
            basis: AlignBasis::KeyAttributes,
        };
        assert!(matches!(
            classify_pair(&pair, &lex, &cfg),
            Err(ConflictError::NotAligned(_))
        ));
        let pair = AlignedPair {
            left: a.clone(),
            right: a.clone(),
            basis: AlignBasis::KeyAttributes,
        };
        assert!(matches!(
            classify_pair(&pair, &lex, &cfg),
            Err(ConflictError::SameParty)
        ));
        let k = mention(Party::Defendant, EventType::Know, "met", &[]);
        let pair = AlignedPair {
            left: a,
            right: k,
            basis: AlignBasis::KeyAttributes,
        };
        assert!(matches!(
            classify_pair(&pair, &lex, &cfg),
            Err(ConflictError::TypeMismatch(..))
        ));
    }

    #[test]
    fn report_counts_and_rendering() {
        let lex = Lexicons::default();
        let cfg = AlignConfig::default();
        let ms = vec![
            mention(Party::Plaintiff, EventType::Know, "met", &[("Time", "2005")]),
            mention(Party::Defendant, EventType::Know, "met", &[("Time", "2006")]),
            mention(Party::Plaintiff, EventType::Marry, "married", &[("Time", "2007")]),
        ];
        let r = detect_disputes("c", &ms, &lex, &cfg);
        assert_eq!(r.summary.aligned_pairs, 1);
        assert_eq!(r.summary.contradictory, 1);
        assert_eq!(r.sections.len(), 2);
        let text = reports_to_text(std::slice::from_ref(&r));
        assert!(text.starts_with("JIA-REPORT v1\n"));
        assert!(text.contains("CONFLICT"));
        assert!(reports_to_json(&[r]).contains("\"format\": \"JIA-REPORT v1\""));
        let empty = detect_disputes("c", &ms[2..], &lex, &cfg);
        assert_eq!(empty.summary.aligned_pairs, 0);
    }
}
