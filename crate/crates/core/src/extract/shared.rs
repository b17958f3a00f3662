//! Instance-splitting rules for triggers shared by several events.
//!
//! A Be-Born trigger such as "gave birth to" may introduce two children in
//! one phrase, and one "sued for divorce" may stand for several suits. The
//! number of instances is the largest count of a role that an event can
//! hold only once; the i-th instance takes the i-th such chunk in token
//! order and shares everything else.

use std::collections::BTreeMap;

use crate::schema::{chunks, Chunk, EventType, Label, Role, Span, Tag, TransitionLabel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventSkeleton {
    pub event_type: EventType,
    pub trigger: Span,
    /// Roles fixed by the rule; remaining roles come from the shared decode.
    pub roles: BTreeMap<Role, Vec<Span>>,
}

fn unique_role_names(event: EventType) -> &'static [&'static str] {
    match event {
        EventType::BeBorn => &["Name", "Gender", "Age"],
        EventType::DivorceLawsuit => &["Court", "Court-Verdict", "Result"],
        _ => &[],
    }
}

/// Roles a Be-Born or Divorce-Lawsuit instance holds at most once.
pub fn unique_roles(event: EventType) -> Vec<Role> {
    unique_role_names(event).iter().filter_map(|n| event.role(n)).collect()
}

fn distance(a: Span, b: Span) -> usize {
    if a.end <= b.start {
        b.start - a.end
    } else {
        a.start.saturating_sub(b.end)
    }
}

/// Index of the trigger nearest to `span`; ties go to the earlier trigger.
fn nearest(triggers: &[Span], span: Span) -> usize {
    (0..triggers.len())
        .min_by_key(|&i| (distance(triggers[i], span), i))
        .expect("at least one trigger")
}

fn transition_chunks(all: &[Chunk], label: TransitionLabel) -> Vec<Span> {
    all.iter()
        .filter(|c| c.label == Label::Transition(label))
        .map(|c| c.span)
        .collect()
}

/// Skeletons for every Be-Born or Divorce-Lawsuit trigger chunk of `r1` that
/// stands for more than one event. `claimed` lists Time spans that other
/// triggers' decodes already took; they do not count towards the
/// Divorce-Lawsuit Time rule. Triggers with a single instance yield nothing.
pub fn apply_shared_trigger_rules(r1: &[Tag], claimed: &[Span]) -> Vec<EventSkeleton> {
    let all = chunks(r1);
    let mut out = Vec::new();
    for event in [EventType::BeBorn, EventType::DivorceLawsuit] {
        let triggers: Vec<Span> = all
            .iter()
            .filter(|c| c.label == Label::Trigger(event))
            .map(|c| c.span)
            .collect();
        for (ti, &trigger) in triggers.iter().enumerate() {
            let owned = |spans: Vec<Span>| -> Vec<Span> {
                spans.into_iter().filter(|&s| nearest(&triggers, s) == ti).collect()
            };
            let mut per_role: Vec<(Role, Vec<Span>)> = unique_roles(event)
                .into_iter()
                .map(|role| (role, owned(transition_chunks(&all, role.transition()))))
                .collect();
            if event == EventType::DivorceLawsuit {
                let times: Vec<Span> = owned(transition_chunks(&all, TransitionLabel::Time))
                    .into_iter()
                    .filter(|s| !claimed.contains(s))
                    .collect();
                let (left, right): (Vec<Span>, Vec<Span>) = times.into_iter().partition(|s| s.end <= trigger.start);
                let side = if right.len() > left.len() { right } else { left };
                if side.len() > 1 {
                    per_role.push((event.role("Sue-Time").expect("Sue-Time exists"), side));
                }
            }
            let count = per_role.iter().map(|(_, s)| s.len()).max().unwrap_or(0);
            if count <= 1 {
                continue;
            }
            for i in 0..count {
                let roles = per_role
                    .iter()
                    .filter_map(|(r, spans)| spans.get(i).map(|s| (*r, vec![*s])))
                    .collect();
                out.push(EventSkeleton {
                    event_type: event,
                    trigger,
                    roles,
                });
            }
        }
    }
    out.sort_by_key(|s| (s.trigger.start, s.event_type.index()));
    out
}
