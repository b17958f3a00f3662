//! Trigger dictionary and the auxiliary word lists used by pattern
//! adjustment, alignment and conflict rules.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;

use crate::corpus::Sentence;
use crate::error::LexiconError;
use crate::schema::{EventType, Span};

const DEFAULT_TRIGGERS: &str = include_str!("../data/triggers.tsv");
const DEFAULT_POLARITY: &str = include_str!("../data/polarity.txt");
const DEFAULT_AUX: &str = include_str!("../data/aux.txt");

pub type Phrase = Vec<String>;

fn phrase(s: &str) -> Phrase {
    s.split_whitespace().map(str::to_string).collect()
}

/// Trigger phrases per event type. Entries are kept sorted by
/// (event type, phrase) and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TriggerLexicon {
    entries: Vec<(Phrase, EventType)>,
    by_first: HashMap<String, Vec<usize>>,
}

impl TriggerLexicon {
    pub fn new(entries: impl IntoIterator<Item = (Phrase, EventType)>) -> Self {
        let set: BTreeSet<(EventType, Phrase)> = entries
            .into_iter()
            .filter(|(p, _)| !p.is_empty())
            .map(|(p, e)| (e, p))
            .collect();
        let entries: Vec<_> = set.into_iter().map(|(e, p)| (p, e)).collect();
        let mut by_first: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, (p, _)) in entries.iter().enumerate() {
            by_first.entry(p[0].clone()).or_default().push(i);
        }
        Self { entries, by_first }
    }

    pub fn from_strs<'a>(entries: impl IntoIterator<Item = (&'a str, EventType)>) -> Self {
        Self::new(entries.into_iter().map(|(p, e)| (phrase(p), e)))
    }

    pub fn entries(&self) -> &[(Phrase, EventType)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn phrases_of(&self, event: EventType) -> impl Iterator<Item = &Phrase> {
        self.entries.iter().filter(move |(_, e)| *e == event).map(|(p, _)| p)
    }

    /// Parses `phrase<TAB>event_type` lines; `#` starts a comment line.
    pub fn parse_tsv(text: &str, file: &str) -> Result<Self, LexiconError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| LexiconError::Malformed {
                file: file.to_string(),
                line: i + 1,
                message,
            };
            let (p, e) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected `phrase<TAB>event_type`".into()))?;
            let event = EventType::parse_any(e.trim()).ok_or_else(|| bad(format!("unknown event type `{e}`")))?;
            let p = phrase(p);
            if p.is_empty() {
                return Err(bad("empty phrase".into()));
            }
            entries.push((p, event));
        }
        Ok(Self::new(entries))
    }

    pub fn to_tsv(&self) -> String {
        self.entries
            .iter()
            .map(|(p, e)| format!("{}\t{}\n", p.join(" "), e.tag_name()))
            .collect()
    }

    /// Leftmost-longest, non-overlapping matches, sorted by start. Among
    /// equally long matches the first entry in lexicon order wins.
    pub fn scan(&self, words: &[&str]) -> Vec<(Span, EventType)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < words.len() {
            let mut best: Option<(usize, EventType)> = None;
            if let Some(cands) = self.by_first.get(words[i]) {
                for &ci in cands {
                    let (p, e) = &self.entries[ci];
                    let fits = i + p.len() <= words.len() && p.iter().zip(&words[i..]).all(|(a, b)| a == b);
                    if fits && best.is_none_or(|(len, _)| p.len() > len) {
                        best = Some((p.len(), *e));
                    }
                }
            }
            match best {
                Some((len, e)) => {
                    out.push((Span::new(i, i + len), e));
                    i += len;
                }
                None => i += 1,
            }
        }
        out
    }
}

/// Candidate triggers of a sentence. An empty result means the sentence is
/// discarded before labeling.
pub fn scan_candidates(sentence: &Sentence, lexicon: &TriggerLexicon) -> Vec<(Span, EventType)> {
    lexicon.scan(&sentence.words())
}

/// Longest common contiguous token run of two phrases; ties go to the run
/// that starts first in `a`.
fn longest_common_run<'a>(a: &'a [String], b: &[String]) -> &'a [String] {
    let mut best = (0, 0);
    let mut prev = vec![0usize; b.len() + 1];
    for i in 1..=a.len() {
        let mut cur = vec![0usize; b.len() + 1];
        for j in 1..=b.len() {
            if a[i - 1] == b[j - 1] {
                cur[j] = prev[j - 1] + 1;
                if cur[j] > best.0 {
                    best = (cur[j], i);
                }
            }
        }
        prev = cur;
    }
    &a[best.1 - best.0..best.1]
}

pub fn merge_triggers(lexicon: &TriggerLexicon, min_overlap_tokens: usize) -> TriggerLexicon {
    merge_triggers_with(lexicon, min_overlap_tokens, &HashSet::new())
}

/// Compresses similar trigger phrases of each event type: while two phrases
/// share a common token run of at least `min_overlap_tokens` tokens (not made
/// only of `stopwords`), both are replaced by that run. Longest shared runs
/// are merged first.
pub fn merge_triggers_with(
    lexicon: &TriggerLexicon,
    min_overlap_tokens: usize,
    stopwords: &HashSet<String>,
) -> TriggerLexicon {
    let min = min_overlap_tokens.max(1);
    let mut out = Vec::new();
    for event in EventType::ALL {
        let mut group: BTreeSet<Phrase> = lexicon.phrases_of(event).cloned().collect();
        loop {
            let items: Vec<&Phrase> = group.iter().collect();
            let mut best: Option<(usize, Phrase, usize, usize)> = None;
            for i in 0..items.len() {
                for j in i + 1..items.len() {
                    let core = longest_common_run(items[i], items[j]);
                    if core.len() < min || core.iter().all(|w| stopwords.contains(w)) {
                        continue;
                    }
                    let better = match &best {
                        None => true,
                        Some((len, c, _, _)) => core.len() > *len || (core.len() == *len && core < c.as_slice()),
                    };
                    if better {
                        best = Some((core.len(), core.to_vec(), i, j));
                    }
                }
            }
            let Some((_, core, i, j)) = best else { break };
            let (a, b) = (items[i].clone(), items[j].clone());
            group.remove(&a);
            group.remove(&b);
            group.insert(core);
        }
        out.extend(group.into_iter().map(|p| (p, event)));
    }
    TriggerLexicon::new(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Pos,
    Neg,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolarityLexicon {
    positive: HashSet<String>,
    negative: HashSet<String>,
}

impl PolarityLexicon {
    pub fn new(
        positive: impl IntoIterator<Item = String>,
        negative: impl IntoIterator<Item = String>,
    ) -> Result<Self, LexiconError> {
        let positive: HashSet<String> = positive.into_iter().collect();
        let negative: HashSet<String> = negative.into_iter().collect();
        if let Some(w) = positive.intersection(&negative).min() {
            return Err(LexiconError::PolarityOverlap(w.clone()));
        }
        Ok(Self { positive, negative })
    }

    pub fn parse(text: &str, file: &str) -> Result<Self, LexiconError> {
        let sections = parse_sections(text, file)?;
        let take = |name: &str| {
            sections
                .iter()
                .filter(|(s, _)| s == name)
                .flat_map(|(_, v)| v.clone())
                .collect::<Vec<_>>()
        };
        if let Some((s, _)) = sections.iter().find(|(s, _)| s != "positive" && s != "negative") {
            return Err(LexiconError::Malformed {
                file: file.to_string(),
                line: 0,
                message: format!("unknown section [{s}]"),
            });
        }
        Self::new(take("positive"), take("negative"))
    }

    pub fn polarity_of(&self, word: &str) -> Polarity {
        if self.negative.contains(word) {
            Polarity::Neg
        } else if self.positive.contains(word) {
            Polarity::Pos
        } else {
            Polarity::Unknown
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.positive.contains(word) || self.negative.contains(word)
    }

    /// Polarity of a multi-token chunk: any negative word makes it negative.
    pub fn polarity_of_phrase(&self, text: &str) -> Polarity {
        let mut seen_pos = false;
        for w in text.split_whitespace() {
            match self.polarity_of(w) {
                Polarity::Neg => return Polarity::Neg,
                Polarity::Pos => seen_pos = true,
                Polarity::Unknown => {}
            }
        }
        if seen_pos {
            Polarity::Pos
        } else {
            Polarity::Unknown
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MarriageOrder {
    FirstMarriage,
    Remarriage,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HabitCategory {
    Alcohol,
    Whoring,
    Gambling,
    Drug,
    PyramidSelling,
    Theft,
    Fighting,
    NetAddiction,
    Fraud,
}

impl HabitCategory {
    pub const ALL: [HabitCategory; 9] = [
        HabitCategory::Alcohol,
        HabitCategory::Whoring,
        HabitCategory::Gambling,
        HabitCategory::Drug,
        HabitCategory::PyramidSelling,
        HabitCategory::Theft,
        HabitCategory::Fighting,
        HabitCategory::NetAddiction,
        HabitCategory::Fraud,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HabitCategory::Alcohol => "alcohol",
            HabitCategory::Whoring => "whoring",
            HabitCategory::Gambling => "gambling",
            HabitCategory::Drug => "drug",
            HabitCategory::PyramidSelling => "pyramid-selling",
            HabitCategory::Theft => "theft",
            HabitCategory::Fighting => "fighting",
            HabitCategory::NetAddiction => "net-addiction",
            HabitCategory::Fraud => "fraud",
        }
    }

    pub fn from_name(s: &str) -> Option<HabitCategory> {
        HabitCategory::ALL.iter().copied().find(|c| c.name() == s)
    }
}

impl fmt::Display for HabitCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AuxLexicons {
    pub marriage_order: HashMap<String, MarriageOrder>,
    pub positive_emotion_triggers: HashSet<String>,
    pub bad_habit_categories: HashMap<String, HabitCategory>,
    pub currency_units: HashSet<String>,
}

impl AuxLexicons {
    pub fn parse(text: &str, file: &str) -> Result<Self, LexiconError> {
        let mut aux = AuxLexicons::default();
        for (section, lines) in parse_sections(text, file)? {
            match section.as_str() {
                "first-marriage" => aux
                    .marriage_order
                    .extend(lines.into_iter().map(|w| (w, MarriageOrder::FirstMarriage))),
                "remarriage" => aux
                    .marriage_order
                    .extend(lines.into_iter().map(|w| (w, MarriageOrder::Remarriage))),
                "positive-emotion" => aux
                    .positive_emotion_triggers
                    .extend(lines.into_iter().map(|l| phrase(&l).join(" "))),
                "currency" => aux.currency_units.extend(lines),
                other => {
                    let cat = other
                        .strip_prefix("habit:")
                        .and_then(HabitCategory::from_name)
                        .ok_or_else(|| LexiconError::Malformed {
                            file: file.to_string(),
                            line: 0,
                            message: format!("unknown section [{other}]"),
                        })?;
                    aux.bad_habit_categories
                        .extend(lines.into_iter().map(|l| (phrase(&l).join(" "), cat)));
                }
            }
        }
        Ok(aux)
    }

    /// First hit among the phrase's tokens.
    pub fn marriage_order_of(&self, text: &str) -> MarriageOrder {
        text.split_whitespace()
            .find_map(|w| self.marriage_order.get(w).copied())
            .unwrap_or(MarriageOrder::Unknown)
    }

    /// Whole-phrase lookup first, then the first token with a category.
    pub fn habit_category_of(&self, text: &str) -> Option<HabitCategory> {
        let norm = phrase(text).join(" ");
        self.bad_habit_categories.get(&norm).copied().or_else(|| {
            text.split_whitespace()
                .find_map(|w| self.bad_habit_categories.get(w).copied())
        })
    }

    pub fn is_positive_emotion(&self, text: &str) -> bool {
        self.positive_emotion_triggers.contains(&phrase(text).join(" "))
    }

    pub fn is_currency(&self, word: &str) -> bool {
        self.currency_units.contains(word)
    }
}

/// `[section]` headers followed by one entry per line. `#` lines are comments.
fn parse_sections(text: &str, file: &str) -> Result<Vec<(String, Vec<String>)>, LexiconError> {
    let mut out: Vec<(String, Vec<String>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            out.push((name.trim().to_string(), Vec::new()));
        } else if let Some((_, entries)) = out.last_mut() {
            entries.push(line.to_string());
        } else {
            return Err(LexiconError::Malformed {
                file: file.to_string(),
                line: i + 1,
                message: "entry before any [section] header".into(),
            });
        }
    }
    Ok(out)
}

/// Every lexicon the pipeline needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicons {
    pub triggers: TriggerLexicon,
    pub polarity: PolarityLexicon,
    pub aux: AuxLexicons,
}

impl Default for Lexicons {
    fn default() -> Self {
        Self {
            triggers: TriggerLexicon::parse_tsv(DEFAULT_TRIGGERS, "triggers.tsv").expect("bundled trigger lexicon"),
            polarity: PolarityLexicon::parse(DEFAULT_POLARITY, "polarity.txt").expect("bundled polarity lexicon"),
            aux: AuxLexicons::parse(DEFAULT_AUX, "aux.txt").expect("bundled auxiliary lexicons"),
        }
    }
}

impl Lexicons {
    /// Loads `triggers.tsv`, `polarity.txt` and `aux.txt` from `dir`; a
    /// missing file falls back to the bundled default.
    pub fn load_dir(dir: &Path) -> Result<Self, LexiconError> {
        let mut lex = Lexicons::default();
        let read = |name: &str| -> Result<Option<String>, LexiconError> {
            let p = dir.join(name);
            if p.exists() {
                Ok(Some(fs::read_to_string(p)?))
            } else {
                Ok(None)
            }
        };
        if let Some(t) = read("triggers.tsv")? {
            lex.triggers = TriggerLexicon::parse_tsv(&t, "triggers.tsv")?;
        }
        if let Some(t) = read("polarity.txt")? {
            lex.polarity = PolarityLexicon::parse(&t, "polarity.txt")?;
        }
        if let Some(t) = read("aux.txt")? {
            lex.aux = AuxLexicons::parse(&t, "aux.txt")?;
        }
        Ok(lex)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Token;

    fn sentence(words: &[&str]) -> Sentence {
        Sentence::from_tokens(words.iter().map(|w| Token::new(*w, "UNK")).collect())
    }

    #[test]
    fn merge_quarrel_phrases() {
        let lex = TriggerLexicon::from_strs([
            ("often quarreled", EventType::FamilyConflict),
            ("quarreled with me", EventType::FamilyConflict),
        ]);
        let merged = merge_triggers(&lex, 1);
        assert_eq!(merged.entries(), &[(phrase("quarreled"), EventType::FamilyConflict)]);
    }

    #[test]
    fn merge_keeps_singletons_and_disjoint() {
        let lex = TriggerLexicon::from_strs([("married", EventType::Marry)]);
        assert_eq!(merge_triggers(&lex, 1), lex);
        let lex = TriggerLexicon::from_strs([
            ("lived together", EventType::FamilyConflict),
            ("ran away", EventType::FamilyConflict),
        ]);
        assert_eq!(merge_triggers(&lex, 1), lex);
    }

    #[test]
    fn merge_respects_event_type_and_min() {
        let lex = TriggerLexicon::from_strs([
            ("often quarreled", EventType::FamilyConflict),
            ("quarreled badly", EventType::DomesticViolence),
        ]);
        assert_eq!(merge_triggers(&lex, 1), lex);
        let lex = TriggerLexicon::from_strs([
            ("often quarreled loudly", EventType::FamilyConflict),
            ("quarreled loudly again", EventType::FamilyConflict),
            ("quarreled once", EventType::FamilyConflict),
        ]);
        let merged = merge_triggers(&lex, 2);
        let phrases: Vec<_> = merged
            .phrases_of(EventType::FamilyConflict)
            .map(|p| p.join(" "))
            .collect();
        assert_eq!(phrases, ["quarreled loudly", "quarreled once"]);
    }

    #[test]
    fn merge_skips_stopword_cores() {
        let lex = TriggerLexicon::from_strs([
            ("beat me", EventType::DomesticViolence),
            ("kicked me out", EventType::DomesticViolence),
        ]);
        let stop: HashSet<String> = ["me".to_string()].into();
        assert_eq!(merge_triggers_with(&lex, 1, &stop), lex);
        assert_eq!(merge_triggers(&lex, 1).len(), 1);
    }

    #[test]
    fn scan_examples() {
        let lex = TriggerLexicon::from_strs([("married", EventType::Marry)]);
        let s = sentence(&["they", "married", "in", "2005"]);
        assert_eq!(scan_candidates(&s, &lex), vec![(Span::new(1, 2), EventType::Marry)]);
        assert!(scan_candidates(&sentence(&["nothing", "here"]), &lex).is_empty());

        let lex = TriggerLexicon::from_strs([("gave birth to", EventType::BeBorn), ("gave", EventType::BeBorn)]);
        let s = sentence(&["he", "gave", "birth", "to"]);
        assert_eq!(scan_candidates(&s, &lex), vec![(Span::new(1, 4), EventType::BeBorn)]);
    }

    #[test]
    fn scan_is_non_overlapping() {
        let lex = TriggerLexicon::from_strs([
            ("a b", EventType::Know),
            ("b c", EventType::Marry),
            ("c", EventType::Debt),
        ]);
        let s = sentence(&["a", "b", "c", "b", "c"]);
        assert_eq!(
            scan_candidates(&s, &lex),
            vec![
                (Span::new(0, 2), EventType::Know),
                (Span::new(2, 3), EventType::Debt),
                (Span::new(3, 5), EventType::Marry)
            ]
        );
    }

    #[test]
    fn default_lexicons_load() {
        let lex = Lexicons::default();
        assert!(lex.triggers.len() > 40);
        for e in EventType::ALL {
            assert!(lex.triggers.phrases_of(e).next().is_some(), "{e} has no triggers");
        }
        assert_eq!(lex.polarity.polarity_of("never"), Polarity::Neg);
        assert_eq!(lex.polarity.polarity_of("indeed"), Polarity::Pos);
        assert_eq!(lex.polarity.polarity_of("house"), Polarity::Unknown);
        assert_eq!(lex.aux.habit_category_of("gambling"), Some(HabitCategory::Gambling));
        assert_eq!(lex.aux.habit_category_of("took drugs"), Some(HabitCategory::Drug));
        assert_eq!(lex.aux.habit_category_of("sang"), None);
        assert_eq!(lex.aux.marriage_order_of("remarried"), MarriageOrder::Remarriage);
        assert_eq!(
            lex.aux.marriage_order_of("first marriage"),
            MarriageOrder::FirstMarriage
        );
        assert_eq!(lex.aux.marriage_order_of("wedding"), MarriageOrder::Unknown);
        assert!(lex.aux.is_positive_emotion("got along well"));
        assert!(lex.aux.is_currency("yuan"));
        let cats: HashSet<_> = lex.aux.bad_habit_categories.values().collect();
        assert_eq!(cats.len(), 9);
    }

    #[test]
    fn polarity_sets_must_be_disjoint() {
        let err = PolarityLexicon::new(vec!["no".to_string()], vec!["no".to_string()]).unwrap_err();
        assert!(matches!(err, LexiconError::PolarityOverlap(w) if w == "no"));
    }

    #[test]
    fn polarity_phrase_resolution() {
        let lex = Lexicons::default();
        assert_eq!(lex.polarity.polarity_of_phrase("really not"), Polarity::Neg);
        assert_eq!(lex.polarity.polarity_of_phrase("indeed"), Polarity::Pos);
        assert_eq!(lex.polarity.polarity_of_phrase("perhaps"), Polarity::Unknown);
    }

    #[test]
    fn tsv_round_trip_and_errors() {
        let lex = Lexicons::default().triggers;
        assert_eq!(TriggerLexicon::parse_tsv(&lex.to_tsv(), "x").unwrap(), lex);
        assert!(matches!(
            TriggerLexicon::parse_tsv("married\tNope\n", "t.tsv"),
            Err(LexiconError::Malformed { line: 1, .. })
        ));
    }
}
