//! Rule-based alternative to the round-two CRF.
//!
//! Know, Be-In-Love and Marry take the nearest preceding Time chunk (Know
//! and Be-In-Love also the nearest preceding Person); Remarry takes the
//! nearest preceding Person. Every other chunk goes to the nearest trigger
//! whose event type has a role with the chunk's transition label; several
//! chunks of one label fill that type's roles in schema order.

use std::collections::BTreeMap;

use crate::extract::shared::EventSkeleton;
use crate::schema::{chunks, Chunk, EventType, Label, Role, Span, Tag, TransitionLabel};

fn preceding(all: &[Chunk], label: TransitionLabel, before: usize) -> Option<Span> {
    all.iter()
        .filter(|c| c.label == Label::Transition(label) && c.span.end <= before)
        .map(|c| c.span)
        .max_by_key(|s| s.end)
}

/// Whether the nearest-preceding rule owns chunks of `label` for `event`.
fn bound_by_preceding(event: EventType, label: TransitionLabel) -> bool {
    use EventType::*;
    match label {
        TransitionLabel::Time => matches!(event, Know | BeInLove | Marry),
        TransitionLabel::Person => matches!(event, Know | BeInLove | Remarry),
        _ => false,
    }
}

fn gap(a: Span, b: Span) -> usize {
    if a.end <= b.start {
        b.start - a.end
    } else {
        a.start.saturating_sub(b.end)
    }
}

pub fn assign_by_rules(r1: &[Tag]) -> Vec<EventSkeleton> {
    let all = chunks(r1);
    let triggers: Vec<(Span, EventType)> = all
        .iter()
        .filter_map(|c| match c.label {
            Label::Trigger(e) => Some((c.span, e)),
            _ => None,
        })
        .collect();
    let mut frames: Vec<EventSkeleton> = triggers
        .iter()
        .map(|&(trigger, event_type)| EventSkeleton {
            event_type,
            trigger,
            roles: BTreeMap::new(),
        })
        .collect();
    let role_for = |event: EventType, label: TransitionLabel| -> Vec<Role> {
        event.roles().filter(|r| r.transition() == label).collect()
    };

    for f in &mut frames {
        for label in [TransitionLabel::Time, TransitionLabel::Person] {
            if !bound_by_preceding(f.event_type, label) {
                continue;
            }
            if let (Some(span), Some(&role)) = (
                preceding(&all, label, f.trigger.start),
                role_for(f.event_type, label).first(),
            ) {
                f.roles.entry(role).or_default().push(span);
            }
        }
    }

    // Count of chunks per (trigger, label) handed out so far, to walk roles
    // in schema order.
    let mut filled: BTreeMap<(usize, TransitionLabel), usize> = BTreeMap::new();
    for c in &all {
        let Label::Transition(label) = c.label else { continue };
        let target = (0..frames.len())
            .filter(|&i| {
                let e = frames[i].event_type;
                !bound_by_preceding(e, label) && !role_for(e, label).is_empty()
            })
            .min_by_key(|&i| (gap(frames[i].trigger, c.span), i));
        let Some(i) = target else { continue };
        let roles = role_for(frames[i].event_type, label);
        let k = filled.entry((i, label)).or_insert(0);
        let role = roles[(*k).min(roles.len() - 1)];
        *k += 1;
        frames[i].roles.entry(role).or_default().push(c.span);
    }
    frames
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(s: &[&str]) -> Vec<Tag> {
        s.iter().map(|t| t.parse().unwrap()).collect()
    }

    #[test]
    fn know_and_marry_share_preceding_time() {
        // in 2005 we met and married
        let r1 = tags(&["B_Time", "B_Person", "B_Know", "O", "B_Marry"]);
        let f = assign_by_rules(&r1);
        assert_eq!(f.len(), 2);
        let k = EventType::Know;
        assert_eq!(f[0].roles[&k.role("Time").unwrap()], [Span::new(0, 1)]);
        assert_eq!(f[0].roles[&k.role("Participant").unwrap()], [Span::new(1, 2)]);
        assert_eq!(f[1].roles[&EventType::Marry.role("Time").unwrap()], [Span::new(0, 1)]);
        assert!(!f[1].roles.contains_key(&k.role("Participant").unwrap()));
    }

    #[test]
    fn nearest_trigger_takes_chunks_in_role_order() {
        let r1 = tags(&["B_Person", "B_Domestic_Violence", "B_Person", "O", "B_Polarity"]);
        let f = assign_by_rules(&r1);
        let dv = EventType::DomesticViolence;
        assert_eq!(f[0].roles[&dv.role("Perpetrators").unwrap()], [Span::new(0, 1)]);
        assert_eq!(f[0].roles[&dv.role("Victim").unwrap()], [Span::new(2, 3)]);
        assert_eq!(f[0].roles[&dv.role("Polarity").unwrap()], [Span::new(4, 5)]);
    }

    #[test]
    fn chunks_without_a_compatible_trigger_are_dropped() {
        let f = assign_by_rules(&tags(&["B_Court", "B_Know"]));
        assert!(f[0].roles.is_empty());
    }
}
