//! Template-driven synthetic divorce cases with gold annotations.
//!
//! Every case has a plaintiff and a defendant statement about one fictional
//! marriage. Facts are drawn per case, stated by the plaintiff, and restated
//! by the defendant unless omitted; a restatement contradicts the plaintiff
//! at a configurable rate. The generator records the verdict it intended for
//! every restated fact so the conflict rules can be checked against it.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conflict::Verdict;
use crate::corpus::{Document, GoldEvent, Party, Sentence, Token};
use crate::lexicon::{AuxLexicons, Lexicons, MarriageOrder};
use crate::schema::{paint, EventType, Label, Span, Tag};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticConfig {
    pub n_cases: usize,
    pub seed: u64,
    /// Share of cases stating Know and Be-In-Love in one clause with one Time.
    pub know_love_share_rate: f64,
    /// Share of cases with twins introduced by one Be-Born trigger.
    pub be_born_share_rate: f64,
    /// Share of cases with two lawsuits behind one Divorce-Lawsuit trigger.
    pub lawsuit_share_rate: f64,
    /// Probability that a restated fact contradicts the plaintiff.
    pub contradiction_rate: f64,
    /// Probability that the defendant does not restate a fact.
    pub omission_rate: f64,
    /// Share of cases padded into the 3-6 KB interval.
    pub medium_rate: f64,
    /// Share of cases padded beyond 6 KB.
    pub large_rate: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_cases: 500,
            seed: 7,
            know_love_share_rate: 481.0 / 3100.0,
            be_born_share_rate: 124.0 / 3100.0,
            lawsuit_share_rate: 0.03,
            contradiction_rate: 0.3,
            omission_rate: 0.15,
            medium_rate: 0.15,
            large_rate: 0.08,
        }
    }
}

/// A cross-party pair the generator meant to be aligned, with its verdict.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlannedPair {
    pub case_id: String,
    pub event_type: EventType,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticCorpus {
    pub documents: Vec<Document>,
    pub planned: Vec<PlannedPair>,
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
const CHILD_NAMES: &[&str] = &[
    "xiaoming", "xiaohong", "lele", "doudou", "tiantian", "niuniu", "yangyang", "beibei", "haohao", "mingming",
];
const THIRD_PERSONS: &[&str] = &[
    "li na",
    "zhang wei",
    "wang fang",
    "liu yang",
    "chen jing",
    "zhao lei",
    "sun li",
    "zhou min",
    "wu gang",
    "huang yan",
];
const COURTS: &[&str] = &[
    "haidian court",
    "chaoyang court",
    "xicheng court",
    "fengtai court",
    "dongcheng court",
];
const RESULTS: &[&str] = &["rejected", "dismissed", "withdrawn"];
const DURATIONS: &[&str] = &["half a year", "one year", "two years", "three years", "several months"];
/// Sentences without any lexicon word, number or polarity word.
pub const FILLERS: &[&str] = &[
    "the relationship between us has broken down completely",
    "i ask the court to support my claims according to law",
    "the facts stated above are true and can be verified",
    "the children have been living with me during this period",
    "please divide the common property fairly",
    "i hope the court will protect my legal rights",
    "there is evidence to support the above statement",
    "the other side refused to communicate with me",
    "our feelings for each other have faded over the years",
    "i have tried my best to keep this family together",
    "the costs of this case should be borne by the other side",
    "relatives and friends tried to mediate many times",
    "my parents can testify to these facts",
    "i disagree with the claims made by the other side",
];

fn pos_of(word: &str) -> &'static str {
    match word {
        "i" | "me" | "my" | "we" | "us" | "our" | "he" | "him" | "his" | "she" | "her" => "PN",
        "the" | "a" | "an" => "DT",
        "in" | "at" | "with" | "from" | "to" | "for" | "of" | "after" | "since" | "by" | "between" | "over" => "P",
        "and" | "but" => "CC",
        "," | "." => "PU",
        "never" | "not" | "no" | "often" | "really" | "indeed" | "twice" | "once" | "now" => "AD",
        w if w.chars().next().is_some_and(|c| c.is_ascii_digit()) => "CD",
        w if MONTHS.contains(&w) => "NT",
        w if w.ends_with("ed") => "VV",
        _ => "NN",
    }
}

/// Builds one sentence left to right while recording event structure.
struct Builder {
    tokens: Vec<Token>,
    events: Vec<GoldEvent>,
}

impl Builder {
    fn new(types: &[EventType]) -> Self {
        Self {
            tokens: Vec::new(),
            events: types
                .iter()
                .map(|&t| GoldEvent {
                    event_type: t,
                    trigger: Span::new(0, 0),
                    roles: BTreeMap::new(),
                })
                .collect(),
        }
    }

    fn push(&mut self, text: &str) -> Span {
        let start = self.tokens.len();
        for w in text.split_whitespace() {
            self.tokens.push(Token::new(w, pos_of(w)));
        }
        Span::new(start, self.tokens.len())
    }

    fn w(&mut self, text: &str) -> &mut Self {
        self.push(text);
        self
    }

    fn arg(&mut self, slots: &[usize], role: &str, text: &str) -> &mut Self {
        let span = self.push(text);
        for &i in slots {
            let e = &mut self.events[i];
            let r = e
                .event_type
                .role(role)
                .unwrap_or_else(|| panic!("{} has no role {role}", e.event_type));
            e.roles.entry(r).or_default().push(span);
        }
        self
    }

    fn trig(&mut self, slots: &[usize], text: &str) -> &mut Self {
        let span = self.push(text);
        for &i in slots {
            self.events[i].trigger = span;
        }
        self
    }

    fn finish(&mut self) -> Sentence {
        self.push(".");
        let mut labels = vec![Tag::O; self.tokens.len()];
        for e in &self.events {
            assert!(!e.trigger.is_empty(), "every event gets a trigger");
            for (r, spans) in &e.roles {
                for s in spans {
                    paint(&mut labels, *s, Label::Role(*r));
                }
            }
        }
        for e in &self.events {
            paint(&mut labels, e.trigger, Label::Trigger(e.event_type));
        }
        Sentence {
            tokens: std::mem::take(&mut self.tokens),
            labels: Some(labels),
            events: std::mem::take(&mut self.events),
        }
    }
}

fn one(t: EventType) -> Builder {
    Builder::new(&[t])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Date {
    y: i32,
    m: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Form {
    Subj,
    Obj,
    Poss,
}

#[derive(Default)]
struct CaseDraft {
    plaintiff: Vec<Sentence>,
    defendant: Vec<Sentence>,
    planned: Vec<(EventType, Verdict)>,
}

impl CaseDraft {
    fn say(&mut self, speaker: Party, s: Sentence) {
        match speaker {
            Party::Plaintiff => self.plaintiff.push(s),
            Party::Defendant => self.defendant.push(s),
        }
    }

    fn plan(&mut self, t: EventType, contradict: bool) {
        self.planned.push((
            t,
            if contradict {
                Verdict::Contradictory
            } else {
                Verdict::Entailment
            },
        ));
    }
}

/// Which party states a fact and whether the defendant's version contradicts.
#[derive(Clone, Copy)]
struct Telling {
    restated: bool,
    contradict: bool,
}

impl Telling {
    fn speakers(self) -> Vec<Party> {
        if self.restated {
            vec![Party::Plaintiff, Party::Defendant]
        } else {
            vec![Party::Plaintiff]
        }
    }

    fn twist(self, speaker: Party) -> bool {
        self.contradict && speaker == Party::Defendant
    }
}

struct Generator<'a> {
    rng: ChaCha8Rng,
    cfg: &'a SyntheticConfig,
    aux: AuxLexicons,
    phrases: BTreeMap<EventType, Vec<String>>,
    wife: Party,
}

impl<'a> Generator<'a> {
    fn new(cfg: &'a SyntheticConfig) -> Self {
        let lex = Lexicons::default();
        let phrases = EventType::ALL
            .iter()
            .map(|&e| (e, lex.triggers.phrases_of(e).map(|p| p.join(" ")).collect()))
            .collect();
        Self {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            cfg,
            aux: lex.aux,
            phrases,
            wife: Party::Plaintiff,
        }
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p.clamp(0.0, 1.0))
    }

    fn choose<T: Copy>(&mut self, items: &[T]) -> T {
        *items.choose(&mut self.rng).expect("non-empty choice")
    }

    /// Zipfian pick: the i-th phrase has weight 1/(i+1), so later lexicon
    /// entries are rare.
    fn zipf(&mut self, items: &[String]) -> String {
        let weights: Vec<f64> = (0..items.len()).map(|i| 1.0 / (i + 1) as f64).collect();
        let dist = WeightedIndex::new(&weights).expect("non-empty phrase list");
        items[dist.sample(&mut self.rng)].clone()
    }

    fn phrase(&mut self, e: EventType) -> String {
        let list = self.phrases[&e].clone();
        self.zipf(&list)
    }

    fn telling(&mut self) -> Telling {
        let restated = !self.chance(self.cfg.omission_rate);
        Telling {
            restated,
            contradict: restated && self.chance(self.cfg.contradiction_rate),
        }
    }

    fn husband(&self) -> Party {
        self.wife.opposite()
    }

    /// How `speaker` refers to party `x`. Spouse terms are only used where
    /// the role resolves them.
    fn party_ref(&mut self, speaker: Party, x: Party, form: Form, spouse: bool) -> String {
        if x == speaker {
            return match form {
                Form::Subj => "i",
                Form::Obj => "me",
                Form::Poss => "my",
            }
            .into();
        }
        let male = x == self.husband();
        let pronoun = match (form, male) {
            (Form::Subj, true) => "he",
            (Form::Subj, false) => "she",
            (Form::Obj, true) => "him",
            (Form::Poss, true) => "his",
            (_, false) => "her",
        };
        if form == Form::Poss {
            return pronoun.into();
        }
        let formal = if x == Party::Plaintiff {
            "the plaintiff"
        } else {
            "the defendant"
        };
        let spouse_term = if male { "my husband" } else { "my wife" };
        let roll = self.rng.gen_range(0..if spouse { 5 } else { 4 });
        match roll {
            0..=2 => pronoun.into(),
            3 => formal.into(),
            _ => spouse_term.into(),
        }
    }

    fn date(&mut self, lo: i32, hi: i32, month_p: f64) -> Date {
        let y = self.rng.gen_range(lo..=hi);
        let m = self.chance(month_p).then(|| self.rng.gen_range(1..=12));
        Date { y, m }
    }

    fn shift_year(&mut self, d: Date) -> Date {
        let delta = self.rng.gen_range(1..=3);
        Date {
            y: if self.chance(0.5) { d.y + delta } else { d.y - delta },
            m: d.m,
        }
    }

    fn date_text(&mut self, d: Date) -> String {
        match d.m {
            None => d.y.to_string(),
            Some(m) => match self.rng.gen_range(0..3) {
                0 => format!("{}-{:02}", d.y, m),
                1 => format!("{} {}", MONTHS[m as usize - 1], d.y),
                _ => format!("{}.{:02}", d.y, m),
            },
        }
    }

    fn money(&mut self) -> u32 {
        self.rng.gen_range(5..=400) * 5000
    }

    // ---- event families ----

    fn courtship(&mut self, c: &mut CaseDraft, shared: bool) {
        let (k, l) = (EventType::Know, EventType::BeInLove);
        let met = self.date(1995, 2010, 0.5);
        if shared {
            let t = self.telling();
            let (kp, lp) = (self.phrase(k), self.phrase(l));
            for speaker in t.speakers() {
                let d = if t.twist(speaker) { self.shift_year(met) } else { met };
                let time = self.date_text(d);
                let mut b = Builder::new(&[k, l]);
                if self.chance(0.5) {
                    b.w("in")
                        .arg(&[0, 1], "Time", &time)
                        .w(",")
                        .arg(&[0, 1], "Participant", "we");
                    b.trig(&[0], &kp).w("and").trig(&[1], &lp);
                } else {
                    b.arg(&[0, 1], "Participant", "we")
                        .trig(&[0], &kp)
                        .w("and")
                        .trig(&[1], &lp);
                    b.w("in").arg(&[0, 1], "Time", &time);
                }
                c.say(speaker, b.finish());
            }
            if t.restated {
                c.plan(k, t.contradict);
                c.plan(l, t.contradict);
            }
            return;
        }
        let love = Date {
            y: met.y + self.rng.gen_range(0..=1),
            m: met.m,
        };
        for (e, when, p) in [(k, met, 0.85), (l, love, 0.6)] {
            if !self.chance(p) {
                continue;
            }
            let t = self.telling();
            let phrase = self.phrase(e);
            for speaker in t.speakers() {
                let d = if t.twist(speaker) { self.shift_year(when) } else { when };
                let time = self.date_text(d);
                let mut b = one(e);
                match self.rng.gen_range(0..3) {
                    0 => b
                        .w("in")
                        .arg(&[0], "Time", &time)
                        .w(",")
                        .arg(&[0], "Participant", "we")
                        .trig(&[0], &phrase),
                    1 => b
                        .arg(&[0], "Participant", "we")
                        .trig(&[0], &phrase)
                        .w("in")
                        .arg(&[0], "Time", &time),
                    _ => b
                        .arg(&[0], "Participant", "we")
                        .trig(&[0], &phrase)
                        .w("through a friend in")
                        .arg(&[0], "Time", &time),
                };
                c.say(speaker, b.finish());
            }
            if t.restated {
                c.plan(e, t.contradict);
            }
        }
    }

    fn marry(&mut self, c: &mut CaseDraft) {
        let e = EventType::Marry;
        let when = self.date(2000, 2014, 0.5);
        let t = self.telling();
        for speaker in t.speakers() {
            let phrase = self.phrase(e);
            let mut b = one(e);
            if t.twist(speaker) {
                b.w("we").arg(&[0], "Polarity", "never").trig(&[0], &phrase);
            } else {
                let time = self.date_text(when);
                if self.chance(0.5) {
                    b.w("we").trig(&[0], &phrase).w("in").arg(&[0], "Time", &time);
                } else {
                    b.w("in").arg(&[0], "Time", &time).w(", we").trig(&[0], &phrase);
                }
            }
            c.say(speaker, b.finish());
        }
        if t.restated {
            c.plan(e, t.contradict);
        }
    }

    fn remarry(&mut self, c: &mut CaseDraft) {
        let e = EventType::Remarry;
        let who = self.choose(&[Party::Plaintiff, Party::Defendant]);
        let all = self.phrases[&e].clone();
        let (first, again): (Vec<String>, Vec<String>) = all
            .into_iter()
            .partition(|p| self.aux.marriage_order_of(p) == MarriageOrder::FirstMarriage);
        let remarriage = self.chance(0.7);
        let t = self.telling();
        for speaker in t.speakers() {
            let says_again = remarriage != t.twist(speaker);
            let phrase = if says_again {
                self.zipf(&again)
            } else {
                self.zipf(&first)
            };
            let mut b = one(e);
            if phrase.ends_with("marriage") {
                let poss = self.party_ref(speaker, who, Form::Poss, true);
                b.w("this is").arg(&[0], "Participant", &poss).trig(&[0], &phrase);
            } else {
                let subj = self.party_ref(speaker, who, Form::Subj, true);
                b.arg(&[0], "Participant", &subj)
                    .trig(&[0], &phrase)
                    .w("after a previous divorce");
            }
            c.say(speaker, b.finish());
        }
        if t.restated {
            c.plan(e, t.contradict);
        }
    }

    fn birth_subject(&mut self, speaker: Party) -> String {
        let wife = self.wife;
        self.party_ref(speaker, wife, Form::Subj, true)
    }

    fn children(&mut self, c: &mut CaseDraft, twins: bool) {
        let e = EventType::BeBorn;
        let mut names = CHILD_NAMES.to_vec();
        names.shuffle(&mut self.rng);
        let genders = ["son", "daughter"];
        let born = self.date(2003, 2016, 0.4);
        if twins {
            let t = self.telling();
            let g = [self.choose(&genders), self.choose(&genders)];
            let which = self.rng.gen_range(0..2);
            let shift_time = self.chance(0.5);
            let shifted = self.shift_year(born);
            let phrases = self.phrases[&e].clone();
            let phrase = self.zipf(&phrases[..2]);
            for speaker in t.speakers() {
                let twist = t.twist(speaker);
                let when = if twist && shift_time { shifted } else { born };
                let mut gs = g;
                if twist && !shift_time {
                    gs[which] = if gs[which] == "son" { "daughter" } else { "son" };
                }
                let time = self.date_text(when);
                let subj = self.birth_subject(speaker);
                let mut b = Builder::new(&[e, e]);
                b.w("in")
                    .arg(&[0, 1], "Time", &time)
                    .w(",")
                    .w(&subj)
                    .trig(&[0, 1], &phrase)
                    .w("twins , a");
                b.arg(&[0], "Gender", gs[0]).arg(&[0], "Name", names[0]).w("and a");
                b.arg(&[1], "Gender", gs[1]).arg(&[1], "Name", names[1]);
                c.say(speaker, b.finish());
            }
            if t.restated {
                for child in 0..2 {
                    c.plan(e, t.contradict && (shift_time || which == child));
                }
            }
            return;
        }
        let n = if self.chance(0.3) { 2 } else { 1 };
        for (i, name) in names.iter().take(n).enumerate() {
            let when = Date {
                y: born.y + 2 * i as i32,
                m: born.m,
            };
            let gender = self.choose(&genders);
            let age = self.chance(0.4).then(|| self.rng.gen_range(1..=15u32));
            let t = self.telling();
            // 0: time, 1: gender, 2: age
            let attr = if age.is_some() {
                self.rng.gen_range(0..3)
            } else {
                self.rng.gen_range(0..2)
            };
            let shifted = self.shift_year(when);
            for speaker in t.speakers() {
                let twist = t.twist(speaker);
                let d = if twist && attr == 0 { shifted } else { when };
                let g = if twist && attr == 1 {
                    if gender == "son" {
                        "daughter"
                    } else {
                        "son"
                    }
                } else {
                    gender
                };
                let a = age.map(|a| if twist && attr == 2 { a + 1 } else { a });
                let time = self.date_text(d);
                let phrase = self.phrase(e);
                let mut b = one(e);
                let child = |b: &mut Builder| {
                    b.w("our").arg(&[0], "Gender", g).arg(&[0], "Name", name);
                    if let Some(a) = a {
                        b.w(", now").arg(&[0], "Age", &format!("{a} years old")).w(",");
                    }
                };
                match phrase.as_str() {
                    "was born" => {
                        child(&mut b);
                        b.trig(&[0], &phrase).w("in").arg(&[0], "Time", &time);
                    }
                    "had a baby" => {
                        b.w("in").arg(&[0], "Time", &time).w(", we").trig(&[0], &phrase).w(",");
                        child(&mut b);
                    }
                    _ => {
                        let subj = self.birth_subject(speaker);
                        b.w("in").arg(&[0], "Time", &time).w(",").w(&subj).trig(&[0], &phrase);
                        child(&mut b);
                    }
                }
                c.say(speaker, b.finish());
            }
            if t.restated {
                c.plan(e, t.contradict);
            }
        }
    }

    fn family_conflict(&mut self, c: &mut CaseDraft) {
        let e = EventType::FamilyConflict;
        let all = self.phrases[&e].clone();
        let (positive, negative): (Vec<String>, Vec<String>) =
            all.into_iter().partition(|p| self.aux.is_positive_emotion(p));
        let phrase = if self.chance(0.15) {
            self.zipf(&positive)
        } else {
            self.zipf(&negative)
        };
        let t = self.telling();
        for speaker in t.speakers() {
            let mut b = one(e);
            if t.twist(speaker) {
                b.w("we").arg(&[0], "Polarity", "never").trig(&[0], &phrase);
            } else if phrase == "scolded" {
                let husband = self.husband();
                let subj = self.party_ref(speaker, husband, Form::Subj, false);
                let obj = self.party_ref(speaker, self.wife, Form::Obj, false);
                b.w(&subj).w("often").trig(&[0], &phrase).w(&obj);
            } else if self.chance(0.5) {
                b.w("we often").trig(&[0], &phrase).w("over trivial matters");
            } else {
                b.w("after the wedding , we").trig(&[0], &phrase).w("all the time");
            }
            c.say(speaker, b.finish());
        }
        if t.restated {
            c.plan(e, t.contradict);
        }
    }

    fn violence(&mut self, c: &mut CaseDraft) {
        let e = EventType::DomesticViolence;
        let perp = if self.chance(0.9) { self.husband() } else { self.wife };
        let victim = perp.opposite();
        let n = if self.chance(0.25) { 2 } else { 1 };
        let base = self.date(2005, 2018, 0.5);
        for i in 0..n {
            let when = (n == 2 || self.chance(0.6)).then_some(Date {
                y: base.y + i,
                m: base.m,
            });
            let t = self.telling();
            for speaker in t.speakers() {
                let phrase = self.phrase(e);
                let p = self.party_ref(speaker, perp, Form::Subj, false);
                let v = self.party_ref(speaker, victim, Form::Obj, false);
                let time = when.map(|d| self.date_text(d));
                let mut b = one(e);
                if let Some(time) = &time {
                    if self.chance(0.5) {
                        b.w("in").arg(&[0], "Time", time).w(",");
                    }
                }
                let fronted = !b.tokens.is_empty();
                b.arg(&[0], "Perpetrators", &p);
                if t.twist(speaker) {
                    b.w("did").arg(&[0], "Polarity", "not");
                }
                b.trig(&[0], &phrase).arg(&[0], "Victim", &v);
                if let (Some(time), false) = (&time, fronted) {
                    b.w("in").arg(&[0], "Time", time);
                }
                c.say(speaker, b.finish());
            }
            if t.restated {
                c.plan(e, t.contradict);
            }
        }
    }

    fn bad_habit(&mut self, c: &mut CaseDraft) {
        let e = EventType::BadHabit;
        let who = if self.chance(0.85) { self.husband() } else { self.wife };
        let phrase = self.phrase(e);
        let t = self.telling();
        for speaker in t.speakers() {
            let subj = self.party_ref(speaker, who, Form::Subj, true);
            let mut b = one(e);
            if t.twist(speaker) {
                b.arg(&[0], "Participant", &subj)
                    .arg(&[0], "Polarity", "never")
                    .trig(&[0], &phrase);
            } else if self.chance(0.5) {
                b.arg(&[0], "Participant", &subj).w("often").trig(&[0], &phrase);
            } else {
                b.w("after the wedding ,")
                    .arg(&[0], "Participant", &subj)
                    .trig(&[0], &phrase)
                    .w("all the time");
            }
            c.say(speaker, b.finish());
        }
        if t.restated {
            c.plan(e, t.contradict);
        }
    }

    fn derailed(&mut self, c: &mut CaseDraft) {
        let e = EventType::Derailed;
        let who = if self.chance(0.8) { self.husband() } else { self.wife };
        let target = self.choose(THIRD_PERSONS);
        let when = self.chance(0.5).then(|| self.date(2008, 2018, 0.3));
        let t = self.telling();
        for speaker in t.speakers() {
            let phrase = self.phrase(e);
            let mut b = one(e);
            if t.twist(speaker) {
                let obj = self.party_ref(speaker, who, Form::Obj, true);
                b.w("there was")
                    .arg(&[0], "Polarity", "no")
                    .trig(&[0], "improper relationship")
                    .w("between");
                b.arg(&[0], "Derailed-Person", &obj)
                    .w("and")
                    .arg(&[0], "Derailed-Target", target);
            } else {
                let subj = self.party_ref(speaker, who, Form::Subj, true);
                let time = when.map(|d| self.date_text(d));
                if let Some(time) = &time {
                    b.w("in").arg(&[0], "Time", time).w(",");
                }
                b.arg(&[0], "Derailed-Person", &subj);
                if phrase == "improper relationship" {
                    b.w("had an");
                }
                b.trig(&[0], &phrase).w("with").arg(&[0], "Derailed-Target", target);
            }
            c.say(speaker, b.finish());
        }
        if t.restated {
            c.plan(e, t.contradict);
        }
    }

    fn separation(&mut self, c: &mut CaseDraft) {
        let e = EventType::Separation;
        let begin = self.date(2010, 2018, 1.0);
        let end = self.chance(0.3).then(|| Date {
            y: begin.y + self.rng.gen_range(1..=2),
            m: Some(self.rng.gen_range(1..=12)),
        });
        let moved = {
            let m = begin.m.expect("separations have months");
            Date {
                y: begin.y,
                m: Some((m + self.rng.gen_range(1..=10) - 1) % 12 + 1),
            }
        };
        let t = self.telling();
        for speaker in t.speakers() {
            let phrase = self.phrase(e);
            let b_text = {
                let d = if t.twist(speaker) { moved } else { begin };
                self.date_text(d)
            };
            let mut b = one(e);
            match (end, self.rng.gen_range(0..2)) {
                (Some(end), _) => {
                    let e_text = self.date_text(end);
                    b.w("from")
                        .arg(&[0], "Begin-Time", &b_text)
                        .w("to")
                        .arg(&[0], "End-Time", &e_text);
                    b.w(", we").trig(&[0], &phrase);
                }
                (None, 0) => {
                    b.w("we").trig(&[0], &phrase).w("in").arg(&[0], "Begin-Time", &b_text);
                }
                (None, _) => {
                    let dur = self.choose(DURATIONS);
                    b.w("since")
                        .arg(&[0], "Begin-Time", &b_text)
                        .w(", we have")
                        .trig(&[0], &phrase);
                    b.w("for").arg(&[0], "Duration", dur);
                }
            }
            c.say(speaker, b.finish());
        }
        if t.restated {
            c.plan(e, t.contradict);
        }
    }

    fn lawsuit(&mut self, c: &mut CaseDraft, twice: bool) {
        let e = EventType::DivorceLawsuit;
        let who = if self.chance(0.6) {
            Party::Plaintiff
        } else {
            Party::Defendant
        };
        let year = self.rng.gen_range(2012..=2019);
        let t = self.telling();
        if twice {
            let second = year + self.rng.gen_range(1..=2);
            let phrase = self.phrase(e);
            for speaker in t.speakers() {
                let subj = self.party_ref(speaker, who, Form::Subj, true);
                let mut b = Builder::new(&[e, e]);
                b.w("in").arg(&[0], "Sue-Time", &year.to_string()).w("and");
                b.arg(&[1], "Sue-Time", &second.to_string()).w(",");
                b.arg(&[0, 1], "Initiator", &subj).trig(&[0, 1], &phrase).w("twice");
                c.say(speaker, b.finish());
            }
            if t.restated {
                c.plan(e, false);
                c.plan(e, false);
            }
            return;
        }
        let court = self.choose(COURTS);
        let result = self.chance(0.5).then(|| self.choose(RESULTS));
        let twist_court = result.is_none() || self.chance(0.5);
        let other_court = loop {
            let x = self.choose(COURTS);
            if x != court {
                break x;
            }
        };
        let other_result = result.map(|r| if r == RESULTS[0] { RESULTS[1] } else { RESULTS[0] });
        for speaker in t.speakers() {
            let twist = t.twist(speaker);
            let phrase = self.phrase(e);
            let subj = self.party_ref(speaker, who, Form::Subj, true);
            let mut b = one(e);
            b.w("in").arg(&[0], "Sue-Time", &year.to_string()).w(",");
            b.arg(&[0], "Initiator", &subj).trig(&[0], &phrase).w("at");
            b.arg(&[0], "Court", if twist && twist_court { other_court } else { court });
            if let Some(r) = result {
                let r = if twist && !twist_court {
                    other_result.unwrap_or(r)
                } else {
                    r
                };
                b.w(", and the claim was").arg(&[0], "Result", r);
            }
            c.say(speaker, b.finish());
        }
        if t.restated {
            c.plan(e, t.contradict);
        }
    }

    fn wealth(&mut self, c: &mut CaseDraft) {
        let e = EventType::Wealth;
        let mut items = self.phrases[&e].clone();
        let n = if self.chance(0.3) { 2 } else { 1 };
        for _ in 0..n {
            let item = self.zipf(&items);
            items.retain(|x| *x != item);
            // None: unstated, Some(None): common, Some(Some(p)): personal to p.
            let owner: Option<Option<Party>> = match self.rng.gen_range(0..4) {
                0 => None,
                1 => Some(None),
                _ => Some(Some(self.choose(&[Party::Plaintiff, Party::Defendant]))),
            };
            let value = (owner.is_none() || self.chance(0.5)).then(|| self.money());
            let t = self.telling();
            let flip_owner = owner.is_some() && (value.is_none() || self.chance(0.5));
            let other_value = self.money();
            for speaker in t.speakers() {
                let twist = t.twist(speaker);
                let owner = match (twist && flip_owner, owner) {
                    (true, Some(None)) => Some(Some(speaker)),
                    (true, Some(Some(_))) => Some(None),
                    (_, o) => o,
                };
                let value = match (twist && !flip_owner, value) {
                    (true, Some(v)) => Some(if other_value == v { v + 5000 } else { other_value }),
                    (_, v) => v,
                };
                let mut b = one(e);
                b.w(if owner.is_some() { "the" } else { "we bought a" })
                    .trig(&[0], &item);
                if let Some(v) = value {
                    b.w(", worth").arg(&[0], "Value", &format!("{v} yuan")).w(",");
                }
                match owner {
                    None => b.w("after the wedding"),
                    Some(None) => b.w("is our").arg(&[0], "Is-Common", "common property"),
                    Some(Some(p)) => {
                        let poss = self.party_ref(speaker, p, Form::Poss, true);
                        b.w("is")
                            .arg(&[0], "Whose", &poss)
                            .arg(&[0], "Is-Personal", "personal property")
                    }
                };
                c.say(speaker, b.finish());
            }
            if t.restated {
                c.plan(e, t.contradict);
            }
        }
    }

    fn debt(&mut self, c: &mut CaseDraft) {
        let e = EventType::Debt;
        let creditor = self.choose(THIRD_PERSONS);
        let debtor = if self.chance(0.6) {
            None
        } else {
            Some(self.choose(&[Party::Plaintiff, Party::Defendant]))
        };
        let amount = self.money();
        let t = self.telling();
        let deny = self.chance(0.5);
        for speaker in t.speakers() {
            let twist = t.twist(speaker);
            let who = match debtor {
                None => "we".to_string(),
                Some(p) => self.party_ref(speaker, p, Form::Subj, false),
            };
            let mut b = one(e);
            if twist && deny {
                b.arg(&[0], "Debtor", &who)
                    .arg(&[0], "Polarity", "never")
                    .trig(&[0], "borrowed");
                b.w("money from").arg(&[0], "Creditor", creditor);
            } else {
                let v = format!(
                    "{} yuan",
                    if twist {
                        amount + 5000 * self.rng.gen_range(1..=4)
                    } else {
                        amount
                    }
                );
                let phrase = if debtor.is_none() {
                    let list: Vec<String> = self.phrases[&e].iter().filter(|p| *p != "owes").cloned().collect();
                    self.zipf(&list)
                } else {
                    self.phrase(e)
                };
                match phrase.as_str() {
                    "owes" => {
                        b.arg(&[0], "Debtor", &who)
                            .trig(&[0], &phrase)
                            .arg(&[0], "Creditor", creditor);
                        b.arg(&[0], "Value", &v);
                    }
                    "loan" => {
                        b.arg(&[0], "Debtor", &who)
                            .w("took a")
                            .trig(&[0], &phrase)
                            .w("of")
                            .arg(&[0], "Value", &v);
                        b.w("from").arg(&[0], "Creditor", creditor);
                    }
                    _ => {
                        b.arg(&[0], "Debtor", &who).trig(&[0], &phrase).arg(&[0], "Value", &v);
                        b.w("from").arg(&[0], "Creditor", creditor);
                    }
                }
            }
            c.say(speaker, b.finish());
        }
        if t.restated {
            c.plan(e, t.contradict);
        }
    }

    fn filler(&mut self) -> Sentence {
        let text = self.choose(FILLERS);
        let mut b = Builder::new(&[]);
        b.w(text);
        b.finish()
    }

    fn pad(&mut self, sentences: &mut Vec<Sentence>, count: usize) {
        for _ in 0..count {
            let s = self.filler();
            let at = self.rng.gen_range(0..=sentences.len());
            sentences.insert(at, s);
        }
    }

    fn case(&mut self, shares: [bool; 3]) -> CaseDraft {
        let [know_love, twins, two_suits] = shares;
        self.wife = if self.chance(0.7) {
            Party::Plaintiff
        } else {
            Party::Defendant
        };
        let mut c = CaseDraft::default();
        self.courtship(&mut c, know_love);
        if self.chance(0.9) {
            self.marry(&mut c);
        }
        if self.chance(0.15) {
            self.remarry(&mut c);
        }
        if twins || self.chance(0.7) {
            self.children(&mut c, twins);
        }
        if self.chance(0.6) {
            self.family_conflict(&mut c);
        }
        if self.chance(0.35) {
            self.violence(&mut c);
        }
        if self.chance(0.3) {
            self.bad_habit(&mut c);
        }
        if self.chance(0.25) {
            self.derailed(&mut c);
        }
        if self.chance(0.45) {
            self.separation(&mut c);
        }
        if two_suits || self.chance(0.3) {
            self.lawsuit(&mut c, two_suits);
        }
        if self.chance(0.5) {
            self.wealth(&mut c);
        }
        if self.chance(0.3) {
            self.debt(&mut c);
        }
        let roll: f64 = self.rng.gen();
        let fillers = if roll < self.cfg.large_rate {
            100
        } else if roll < self.cfg.large_rate + self.cfg.medium_rate {
            50
        } else {
            self.rng.gen_range(1..=6)
        };
        for side in [&mut c.plaintiff, &mut c.defendant] {
            let mut s = std::mem::take(side);
            self.pad(&mut s, fillers);
            *side = s;
        }
        c
    }

    /// Exactly `round(rate · n)` case indices, chosen at random.
    fn pick_cases(&mut self, rate: f64) -> Vec<bool> {
        let n = self.cfg.n_cases;
        let k = ((rate.clamp(0.0, 1.0) * n as f64).round() as usize).min(n);
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut self.rng);
        let mut out = vec![false; n];
        for &i in &idx[..k] {
            out[i] = true;
        }
        out
    }
}

pub fn case_id(i: usize) -> String {
    format!("case-{:04}", i + 1)
}

/// Deterministic corpus for `cfg`: two documents per case, plaintiff first.
pub fn generate_synthetic(cfg: &SyntheticConfig) -> SyntheticCorpus {
    let mut g = Generator::new(cfg);
    let know_love = g.pick_cases(cfg.know_love_share_rate);
    let twins = g.pick_cases(cfg.be_born_share_rate);
    let suits = g.pick_cases(cfg.lawsuit_share_rate);
    let mut documents = Vec::with_capacity(2 * cfg.n_cases);
    let mut planned = Vec::new();
    for i in 0..cfg.n_cases {
        let c = g.case([know_love[i], twins[i], suits[i]]);
        let id = case_id(i);
        for (party, sentences, suffix) in [
            (Party::Plaintiff, c.plaintiff, "P"),
            (Party::Defendant, c.defendant, "D"),
        ] {
            documents.push(Document {
                doc_id: format!("{id}-{suffix}"),
                case_id: id.clone(),
                party,
                sentences,
            });
        }
        planned.extend(c.planned.into_iter().map(|(event_type, verdict)| PlannedPair {
            case_id: id.clone(),
            event_type,
            verdict,
        }));
    }
    SyntheticCorpus { documents, planned }
}

/// Whether some sentence of `doc` holds a Know and a Be-In-Love event that
/// share one Time span.
pub fn shares_know_love_time(doc: &Document) -> bool {
    doc.sentences.iter().any(|s| {
        let times = |t: EventType| -> Vec<Span> {
            s.events
                .iter()
                .filter(|e| e.event_type == t)
                .flat_map(|e| {
                    e.roles
                        .iter()
                        .filter(|(r, _)| r.name() == "Time")
                        .flat_map(|(_, v)| v.clone())
                })
                .collect()
        };
        let know = times(EventType::Know);
        times(EventType::BeInLove).iter().any(|t| know.contains(t))
    })
}

/// Whether some sentence of `doc` holds two Be-Born events on one trigger.
pub fn shares_be_born_trigger(doc: &Document) -> bool {
    doc.sentences.iter().any(|s| {
        let triggers: Vec<Span> = s
            .events
            .iter()
            .filter(|e| e.event_type == EventType::BeBorn)
            .map(|e| e.trigger)
            .collect();
        (1..triggers.len()).any(|i| triggers[..i].contains(&triggers[i]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::scan_candidates;
    use crate::schema::bio_violations;

    fn small(n: usize) -> SyntheticConfig {
        SyntheticConfig {
            n_cases: n,
            ..SyntheticConfig::default()
        }
    }

    #[test]
    fn deterministic() {
        let cfg = SyntheticConfig { seed: 7, ..small(10) };
        assert_eq!(generate_synthetic(&cfg), generate_synthetic(&cfg));
        let other = SyntheticConfig { seed: 8, ..small(10) };
        assert_ne!(generate_synthetic(&cfg).documents, generate_synthetic(&other).documents);
    }

    #[test]
    fn labels_are_valid_and_consistent() {
        let corpus = generate_synthetic(&small(60));
        assert_eq!(corpus.documents.len(), 120);
        for d in &corpus.documents {
            for s in &d.sentences {
                let labels = s.labels.as_ref().unwrap();
                assert_eq!(labels.len(), s.len());
                assert!(bio_violations(labels).is_empty(), "{:?}", s.words());
            }
        }
    }

    #[test]
    fn fillers_hold_no_candidates() {
        let lex = Lexicons::default();
        for f in FILLERS {
            let s = Sentence::from_tokens(f.split_whitespace().map(|w| Token::new(w, "NN")).collect());
            assert!(scan_candidates(&s, &lex.triggers).is_empty(), "{f}");
            assert!(s.words().iter().all(|w| !lex.polarity.contains(w)), "{f}");
            assert!(s.words().iter().all(|w| !w.chars().any(|c| c.is_ascii_digit())), "{f}");
        }
    }

    #[test]
    fn share_rates_are_exact() {
        let cfg = SyntheticConfig {
            know_love_share_rate: 1.0,
            ..small(20)
        };
        let corpus = generate_synthetic(&cfg);
        for pair in corpus.documents.chunks(2) {
            assert!(shares_know_love_time(&pair[0]));
        }
        let corpus = generate_synthetic(&small(200));
        let plaintiff = |f: fn(&Document) -> bool| corpus.documents.iter().step_by(2).filter(|d| f(d)).count();
        assert_eq!(
            plaintiff(shares_know_love_time),
            (200.0 * 481.0 / 3100.0_f64).round() as usize
        );
        assert_eq!(
            plaintiff(shares_be_born_trigger),
            (200.0 * 124.0 / 3100.0_f64).round() as usize
        );
    }

    #[test]
    fn every_type_occurs() {
        let corpus = generate_synthetic(&small(80));
        for t in EventType::ALL {
            assert!(
                corpus
                    .documents
                    .iter()
                    .flat_map(|d| &d.sentences)
                    .flat_map(|s| &s.events)
                    .any(|e| e.event_type == t),
                "{t}"
            );
        }
    }
}
